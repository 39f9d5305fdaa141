//! Built-in example bundles, all as kernel presentations in γ-form.

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::KerPresentation;

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    a: &'static [(i64, i64)],
    b: &'static [(i64, i64)],
    rows: &'static [&'static [&'static str]],
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "omega1",
        summary: "cotangent bundle of Q: kernel of [su, sv, tu, tv] on 4O(-1)",
        a: &[(-1, -1), (-1, -1), (-1, -1), (-1, -1)],
        b: &[(0, 0)],
        rows: &[&["s*u", "s*v", "t*u", "t*v"]],
    },
    Fixture {
        name: "omega2-2",
        summary: "kernel of [s, t, u, v] on 2O(-1,0) + 2O(0,-1)",
        a: &[(-1, 0), (-1, 0), (0, -1), (0, -1)],
        b: &[(0, 0)],
        rows: &[&["s", "t", "u", "v"]],
    },
    Fixture {
        name: "o-20",
        summary: "O(-2,0) as the kernel of [s, t] on 2O(-1,0)",
        a: &[(-1, 0), (-1, 0)],
        b: &[(0, 0)],
        rows: &[&["s", "t"]],
    },
    Fixture {
        name: "case4",
        summary: "kernel of [s, tu, tv] on O(-1,0) + 2O(-1)",
        a: &[(-1, 0), (-1, -1), (-1, -1)],
        b: &[(0, 0)],
        rows: &[&["s", "t*u", "t*v"]],
    },
    Fixture {
        name: "case5",
        summary: "kernel of [s, t, u] on 2O(-1,0) + O(0,-1)",
        a: &[(-1, 0), (-1, 0), (0, -1)],
        b: &[(0, 0)],
        rows: &[&["s", "t", "u"]],
    },
    Fixture {
        name: "case6",
        summary: "rank two: kernel of [s, u, tv] on O(-1,0) + O(0,-1) + O(-1)",
        a: &[(-1, 0), (0, -1), (-1, -1)],
        b: &[(0, 0)],
        rows: &[&["s", "u", "t*v"]],
    },
    Fixture {
        name: "lepotier",
        summary: "rank two, c1 = 0: kernel of [s t u v; -t s-2t v 0] on 2O(0,1) + 2O(1,0) to 2O(1)",
        a: &[(0, 1), (0, 1), (1, 0), (1, 0)],
        b: &[(1, 1), (1, 1)],
        rows: &[&["s", "t", "u", "v"], &["-t", "s - 2*t", "v", "0"]],
    },
    Fixture {
        name: "split-sum",
        summary: "O(-1,1) + O(1,-1): kernel of [s t 0 0; 0 0 u v]",
        a: &[(0, 1), (0, 1), (1, 0), (1, 0)],
        b: &[(1, 1), (1, 1)],
        rows: &[&["s", "t", "0", "0"], &["0", "0", "u", "v"]],
    },
    Fixture {
        name: "null-corr-family",
        summary: "rank two, c1 = 0, generic type: kernel of [s 0 u v; 0 t v u], both determinants with simple roots",
        a: &[(0, 1), (0, 1), (1, 0), (1, 0)],
        b: &[(1, 1), (1, 1)],
        rows: &[&["s", "0", "u", "v"], &["0", "t", "v", "u"]],
    },
];

pub fn fixtures() -> &'static [Fixture] {
    FIXTURES
}

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

impl Fixture {
    pub fn presentation(&self, field: Field) -> Result<KerPresentation> {
        let twists = |l: &[(i64, i64)]| SplitBundle::new(l.iter().map(|&(a, b)| BiDegree::new(a, b)).collect());
        let a = twists(self.a);
        let b = twists(self.b);
        let mut entries = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let deg = b.twists()[i] - a.twists()[j];
                entries.push(BiForm::parse(field, text, Some(deg))?);
            }
        }
        KerPresentation::new(FormMatrix::new(field, a, b, entries)?)
    }
}

/// The named fixture over `field`.
pub fn fixture(field: Field, name: &str) -> Result<KerPresentation> {
    FIXTURES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown example {name:?}; known: {}", fixture_names().join(", "))))?
        .presentation(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        let f = Field::default();
        for name in fixture_names() {
            let p = fixture(f, name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(p.rank() >= 1, "{name}");
        }
        assert!(fixture(f, "nope").is_err());
    }

    #[test]
    fn ranks_and_classes() {
        let f = Field::default();
        assert_eq!(fixture(f, "omega1").unwrap().rank(), 3);
        assert_eq!(fixture(f, "o-20").unwrap().c1(), BiDegree::new(-2, 0));
        let lp = fixture(f, "lepotier").unwrap();
        assert_eq!((lp.rank(), lp.c1()), (2, BiDegree::new(0, 0)));
    }
}
