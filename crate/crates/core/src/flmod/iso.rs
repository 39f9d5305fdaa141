//! Degree-preserving module homomorphisms and randomized isomorphism search.

use std::collections::BTreeMap;

use rand::Rng;

use super::FinLengthModule;
use crate::exactla::{Field, Matrix};

/// A family of linear maps φ_d: M_d → M′_d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub maps: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn identity(m: &FinLengthModule) -> GradedMap {
        GradedMap {
            maps: m.degrees().into_iter().map(|d| (d, Matrix::identity(m.field(), m.dim(d)))).collect(),
        }
    }

    /// The map in degree `d`, zero of the given shape when absent.
    pub fn at(&self, d: i64, field: Field, rows: usize, cols: usize) -> Matrix {
        self.maps.get(&d).cloned().unwrap_or_else(|| Matrix::zeros(field, rows, cols))
    }

    /// `Σ c_k · basis[k]` over a common set of degrees.
    pub fn combination(basis: &[GradedMap], coeffs: &[crate::exactla::FieldElem]) -> GradedMap {
        let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (b, c) in basis.iter().zip(coeffs) {
            for (&d, m) in &b.maps {
                let term = m.scale(c);
                maps.entry(d)
                    .and_modify(|acc| *acc = acc.add(&term))
                    .or_insert(term);
            }
        }
        GradedMap { maps }
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.values().all(Matrix::is_invertible)
    }

    /// Checks `φ_{d+1} x_i = x′_i φ_d` for all i and d.
    pub fn is_module_map(&self, m: &FinLengthModule, m2: &FinLengthModule) -> bool {
        let field = m.field();
        let degrees: std::collections::BTreeSet<i64> = m.degrees().into_iter().chain(m2.degrees()).collect();
        degrees.into_iter().all(|d| {
            let p0 = self.at(d, field, m2.dim(d), m.dim(d));
            let p1 = self.at(d + 1, field, m2.dim(d + 1), m.dim(d + 1));
            (0..4).all(|i| p1.mul(&m.op(i, d)) == m2.op(i, d).mul(&p0))
        })
    }
}

/// Basis of the degree-0 homomorphisms M → M′.
pub fn hom_space(m: &FinLengthModule, m2: &FinLengthModule) -> Vec<GradedMap> {
    let field = m.field();
    let degrees: Vec<i64> = m.degrees().into_iter().filter(|&d| m2.dim(d) > 0).collect();
    let mut offsets = BTreeMap::new();
    let mut n = 0;
    for &d in &degrees {
        offsets.insert(d, n);
        n += m2.dim(d) * m.dim(d);
    }
    if n == 0 {
        return Vec::new();
    }
    // variable (d, r, c) is entry (r, c) of φ_d at offsets[d] + r*dim M_d + c
    let var = |d: i64, r: usize, c: usize| offsets.get(&d).map(|o| o + r * m.dim(d) + c);
    let mut eqs: Vec<Vec<(usize, crate::exactla::FieldElem)>> = Vec::new();
    let lo = m.degrees().first().copied().unwrap_or(0).min(m2.degrees().first().copied().unwrap_or(0));
    let hi = m.degrees().last().copied().unwrap_or(0).max(m2.degrees().last().copied().unwrap_or(0));
    for d in (lo - 1)..=hi {
        let (a0, a1) = (m.dim(d), m.dim(d + 1));
        let (b0, b1) = (m2.dim(d), m2.dim(d + 1));
        if b1 == 0 || a0 == 0 {
            continue;
        }
        for i in 0..4 {
            let x = m.op(i, d);
            let y = m2.op(i, d);
            for r in 0..b1 {
                for c in 0..a0 {
                    let mut eq = Vec::new();
                    for k in 0..a1 {
                        if let Some(v) = var(d + 1, r, k) {
                            eq.push((v, x[(k, c)].clone()));
                        }
                    }
                    for k in 0..b0 {
                        if let Some(v) = var(d, k, c) {
                            eq.push((v, -y[(r, k)].clone()));
                        }
                    }
                    if eq.iter().any(|(_, e)| !e.is_zero()) {
                        eqs.push(eq);
                    }
                }
            }
        }
    }
    let mut sys = Matrix::zeros(field, eqs.len(), n);
    for (row, eq) in eqs.into_iter().enumerate() {
        for (v, e) in eq {
            let cur = sys[(row, v)].clone();
            sys[(row, v)] = cur + e;
        }
    }
    sys.kernel_basis()
        .into_iter()
        .map(|sol| GradedMap {
            maps: degrees
                .iter()
                .map(|&d| {
                    let (r, c) = (m2.dim(d), m.dim(d));
                    let o = offsets[&d];
                    (d, Matrix::from_rows(field, r, c, sol[o..o + r * c].to_vec()))
                })
                .collect(),
        })
        .collect()
}

/// Searches random elements of a space of maps for one invertible in every
/// degree; `None` means none was found within `trials`.
pub fn random_invertible<R: Rng + ?Sized>(basis: &[GradedMap], trials: usize, rng: &mut R) -> Option<GradedMap> {
    let field = basis.first()?.maps.values().next()?.field();
    for _ in 0..trials {
        let coeffs: Vec<_> = basis.iter().map(|_| field.random(rng)).collect();
        let phi = GradedMap::combination(basis, &coeffs);
        if phi.is_invertible() {
            return Some(phi);
        }
    }
    None
}

/// Randomized search for an isomorphism M → M′.
pub fn module_iso<R: Rng + ?Sized>(
    m: &FinLengthModule,
    m2: &FinLengthModule,
    trials: usize,
    rng: &mut R,
) -> Option<GradedMap> {
    if m.dims_map() != m2.dims_map() {
        return None;
    }
    if m.is_zero() {
        return Some(GradedMap { maps: BTreeMap::new() });
    }
    let basis = hom_space(m, m2);
    let degrees = m.degrees();
    random_invertible(&basis, trials, rng).filter(|phi| degrees.iter().all(|d| phi.maps.contains_key(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_step(f: Field, a: [i64; 4]) -> FinLengthModule {
        let ops0 = a.map(|x| Matrix::from_i64(f, &[&[x]]));
        let zz = || Matrix::zeros(f, 0, 1);
        FinLengthModule::new(f, 0, vec![1, 1], vec![ops0, [zz(), zz(), zz(), zz()]]).unwrap()
    }

    #[test]
    fn self_iso_found() {
        let f = Field::default();
        let m = two_step(f, [1, 2, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = module_iso(&m, &m, 200, &mut rng).unwrap();
        assert!(phi.is_module_map(&m, &m));
        assert!(hom_space(&m, &m).iter().all(|b| b.is_module_map(&m, &m)));
    }

    #[test]
    fn degree_mismatch_not_found() {
        let f = Field::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k0 = FinLengthModule::trivial(f, 0, vec![1]);
        let k1 = FinLengthModule::trivial(f, 1, vec![1]);
        assert!(module_iso(&k0, &k1, 50, &mut rng).is_none());
    }

    #[test]
    fn conjugated_module_found() {
        let f = Field::default();
        let m = two_step(f, [1, 2, 0, 0]);
        let scaled = two_step(f, [3, 6, 0, 0]);
        let other = two_step(f, [1, 3, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(module_iso(&m, &scaled, 200, &mut rng).is_some());
        assert!(module_iso(&m, &other, 200, &mut rng).is_none());
    }
}
