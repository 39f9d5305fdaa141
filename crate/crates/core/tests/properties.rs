use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use horrocks_core::bipoly::{mult_matrix, sq_piece, BiDegree, BiForm};
use horrocks_core::exactla::{quotient_data, Field, Matrix};
use horrocks_core::flmod::{minimal_presentation, module_from_kernel, module_iso, sigma_modules, socle_subspace, FamilyKind};
use horrocks_core::formats::{parse_triple, print_triple};
use horrocks_core::horrocks::{acm_type, extract_gamma, placed};
use horrocks_core::linecoh::{coh_action, FormMatrix};
use horrocks_core::presheaf::{strip_acm, KerPresentation};
use horrocks_core::random::{random_gamma, random_invertible_matrix, random_small_module, random_triple};
use horrocks_core::stability::{jumping_determinants, le_potier_check};

const P: u32 = 32003;

fn field() -> Field {
    Field::Prime(P)
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    let f = field();
    Matrix::from_rows(f, rows, cols, entries.iter().map(|&x| f.from_i64(x)).collect())
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..4, r * c).prop_map(move |e| matrix(r, c, &e))
    })
}

fn random_form(deg: BiDegree, coeffs: &[i64]) -> BiForm {
    let f = field();
    let n = horrocks_core::bipoly::form_dim(deg);
    BiForm::from_coeffs(f, deg, (0..n).map(|k| f.from_i64(coeffs[k % coeffs.len()])).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn solve_reproduces_rhs(m in small_matrix(), x in prop::collection::vec(-5i64..6, 6)) {
        let f = field();
        let x: Vec<_> = (0..m.cols()).map(|k| f.from_i64(x[k])).collect();
        let rhs = m.mul_vec(&x);
        let y = m.solve(&rhs).unwrap();
        prop_assert_eq!(m.mul_vec(&y), rhs);
    }

    #[test]
    fn quotient_kills_subspace(m in small_matrix()) {
        let sub = m.columns();
        let q = quotient_data(field(), m.rows(), &sub);
        for v in &sub {
            prop_assert!(q.project(v).iter().all(|c| c.is_zero()));
        }
        prop_assert_eq!(q.projection.rank(), q.dim());
        prop_assert_eq!(q.dim() + m.rank(), m.rows());
    }

    #[test]
    fn multiplication_is_additive_and_respects_the_quadric(
        a in 0i64..3, b in 0i64..3, d in 0i64..4,
        c1 in prop::collection::vec(-4i64..5, 1..9), c2 in prop::collection::vec(-4i64..5, 1..9),
    ) {
        let f = field();
        let deg = BiDegree::new(a, b);
        let (g, h) = (random_form(deg, &c1), random_form(deg, &c2));
        let src = BiDegree::diag(d);
        prop_assert_eq!(mult_matrix(&g.add(&h), src), mult_matrix(&g, src).add(&mult_matrix(&h, src)));
        let x = |i| BiForm::x(f, i);
        let lhs = mult_matrix(&x(3), src + BiDegree::diag(1)).mul(&mult_matrix(&x(0), src));
        let rhs = mult_matrix(&x(2), src + BiDegree::diag(1)).mul(&mult_matrix(&x(1), src));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cohomology_action_respects_the_quadric(a in -5i64..4, b in -5i64..4, i in 0usize..3) {
        let f = field();
        let x = |k| BiForm::x(f, k);
        let t = BiDegree::new(a, b);
        let up = t + BiDegree::diag(1);
        let lhs = coh_action(&x(3), i, up).mul(&coh_action(&x(0), i, t));
        let rhs = coh_action(&x(2), i, up).mul(&coh_action(&x(1), i, t));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn hilbert_function_of_the_quadric() {
    for d in 0..=8 {
        assert_eq!(sq_piece(d).len() as i64, (d + 1) * (d + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn euler_characteristic_of_random_bundles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_gamma(field(), &mut rng).unwrap();
        for d in -3..=3 {
            let e = BiDegree::diag(d);
            let h = p.h_dims(e);
            let chi = p.a().twisted(e).euler_char() - p.b().twisted(e).euler_char();
            prop_assert_eq!(h[0] as i64 - h[1] as i64 + h[2] as i64, chi);
        }
    }

    #[test]
    fn strip_is_idempotent(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_gamma(f, &mut rng).unwrap();
        let l = *[BiDegree::diag(0), BiDegree::new(-1, 0), BiDegree::new(-2, -1)].choose(&mut rng).unwrap();
        let a = p.a().sum(&horrocks_core::linecoh::SplitBundle::new(vec![l]));
        let g = p.g().hstack(&FormMatrix::zero(f, horrocks_core::linecoh::SplitBundle::new(vec![l]), p.b().clone()));
        let q = KerPresentation::new(g.with_bundles(a, p.b().clone()).unwrap()).unwrap();
        let once = strip_acm(&q).unwrap();
        prop_assert_eq!(&once.removed, &vec![l]);
        let twice = strip_acm(&once.presentation).unwrap();
        prop_assert!(twice.removed.is_empty());
        prop_assert_eq!(twice.presentation.table(-3, 3), p.table(-3, 3));
    }

    #[test]
    fn presentation_recovers_the_module(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_small_module(field(), 3, 3, &mut rng);
        let pres = minimal_presentation(&m).unwrap();
        prop_assert!(!pres.psi.has_unit_entry());
        let back = module_from_kernel(&pres.f()).unwrap().module;
        prop_assert!(module_iso(&back, &m, 50, &mut rng).is_some());
        let tri = sigma_modules(&pres.f()).unwrap();
        for kind in [FamilyKind::M10, FamilyKind::M01] {
            socle_subspace(&tri, kind).unwrap().check_socle(&tri).unwrap();
        }
    }

    #[test]
    fn extraction_places_subspaces_by_type(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_gamma(field(), &mut rng).unwrap();
        let t = extract_gamma(&p).unwrap();
        let ty = acm_type(&p).unwrap();
        t.w.check_socle(&t.tri).unwrap();
        t.v.check_socle(&t.tri).unwrap();
        for (c, n) in &ty.nu {
            prop_assert_eq!(t.w.dim(placed(*c)), *n);
        }
        for (c, n) in &ty.mu {
            prop_assert_eq!(t.v.dim(placed(*c)), *n);
        }
        prop_assert_eq!(t.w.total_dim(), ty.nu.values().sum::<usize>());
        prop_assert_eq!(t.v.total_dim(), ty.mu.values().sum::<usize>());
    }

    #[test]
    fn triple_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_small_module(field(), 3, 2, &mut rng);
        let t = random_triple(&m, &mut rng).unwrap();
        let text = print_triple(&t);
        let back = parse_triple(&text).unwrap();
        prop_assert_eq!(print_triple(&back), text);
    }

    #[test]
    fn stability_report_ignores_summand_order(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = horrocks_core::fixtures::fixture(f, "lepotier").unwrap();
        let mut order: Vec<usize> = (0..4).collect();
        order.shuffle(&mut rng);
        let a = horrocks_core::linecoh::SplitBundle::new(order.iter().map(|&j| p.a().twists()[j]).collect());
        let g = p.g().select_columns(&order).with_bundles(a, p.b().clone()).unwrap();
        let q = KerPresentation::new(g).unwrap();
        let (r1, r2) = (le_potier_check(&p).unwrap(), le_potier_check(&q).unwrap());
        prop_assert_eq!((r1.h0, r1.h0_plus_minus, r1.h0_minus_plus, r1.stable), (r2.h0, r2.h0_plus_minus, r2.h0_minus_plus, r2.stable));
        let (d1, d2) = (r1.determinants.unwrap(), r2.determinants.unwrap());
        prop_assert!(d1.g1.proportional(&d2.g1.form) && d1.g2.proportional(&d2.g2.form));
    }

    #[test]
    fn determinants_survive_constant_conjugation(seed in any::<u64>()) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for name in ["lepotier", "null-corr-family"] {
            let p = horrocks_core::fixtures::fixture(f, name).unwrap();
            let rows = random_invertible_matrix(f, 2, &mut rng);
            let c1 = random_invertible_matrix(f, 2, &mut rng);
            let c2 = random_invertible_matrix(f, 2, &mut rng);
            let col = block_diag(&c1, &c2);
            let left = constant(&rows, p.b());
            let right = constant(&col, p.a());
            let q = KerPresentation::new(left.compose(p.g()).compose(&right)).unwrap();
            let (d1, d2) = (jumping_determinants(&p).unwrap(), jumping_determinants(&q).unwrap());
            prop_assert!(d1.g1.proportional(&d2.g1.form), "{}", name);
            prop_assert!(d1.g2.proportional(&d2.g2.form), "{}", name);
        }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let mut m = Matrix::zeros(f, a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    m
}

/// A constant matrix as an automorphism of a split bundle whose twists are
/// constant on the blocks where `m` is nonzero.
fn constant(m: &Matrix, bundle: &horrocks_core::linecoh::SplitBundle) -> FormMatrix {
    let f = m.field();
    let t = bundle.twists();
    FormMatrix::from_fn(f, bundle.clone(), bundle.clone(), |i, j| {
        if t[i] == t[j] {
            BiForm::constant(f, m[(i, j)].clone())
        } else {
            BiForm::zero(f, t[i] - t[j])
        }
    })
    .unwrap()
}
