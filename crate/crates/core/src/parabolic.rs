//! Parabolic inclusions `M*(n1) ⊗ M*(n2) → M*(n1+n2)`.
//!
//! The first factor keeps its indices and the second is shifted by `n1`.
//! A cut point `k` (between `k` and `k+1`) is spanned by a root `[i,j]` when
//! `i ≤ k < j`; a natural monomial lies in the image of the split at `k`
//! exactly when nothing in its U-set spans `k`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::combinat::{catalan, Root};
use crate::error::{Error, Result};
use crate::exactla::{EchelonBasis, Q};
use crate::mring::{natural_basis, Generator, MRing, Monomial, RingElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub n1: usize,
    pub n2: usize,
}

impl Split {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::Dimension(format!("split {n1}+{n2} needs two positive parts")));
        }
        Ok(Split { n1, n2 })
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    /// All splits of `n` into two positive parts.
    pub fn all(n: usize) -> Vec<Split> {
        (1..n).map(|n1| Split { n1, n2: n - n1 }).collect()
    }
}

fn shift(g: &Generator, by: usize) -> Generator {
    match g {
        Generator::Simple(i) => Generator::Simple(i + by),
        Generator::Root(r) => Generator::Root(Root::of(r.lo + by, r.hi + by)),
    }
}

/// The tensor of two monomials as a monomial of `M*(n1+n2)`, not normalized.
pub fn embed_monomial(x: &Monomial, y: &Monomial, s: Split) -> Monomial {
    let gens = x
        .gens()
        .iter()
        .copied()
        .chain(y.gens().iter().map(|g| shift(g, s.n1)))
        .collect();
    Monomial::new(gens)
}

/// Image of `x ⊗ y`, in normal form.
pub fn embed(ring: &MRing, x: &RingElt, y: &RingElt, s: Split) -> Result<RingElt> {
    if x.n() != s.n1 {
        return Err(Error::SizeMismatch(s.n1, x.n()));
    }
    if y.n() != s.n2 {
        return Err(Error::SizeMismatch(s.n2, y.n()));
    }
    if ring.n() != s.n() {
        return Err(Error::SizeMismatch(s.n(), ring.n()));
    }
    let mut raw = RingElt::zero(s.n());
    for (u, c) in x.terms() {
        for (v, d) in y.terms() {
            raw.add_term(embed_monomial(u, v, s), c * d);
        }
    }
    Ok(ring.normal_form(&raw))
}

pub fn spans_cut(g: &Generator, k: usize) -> bool {
    matches!(g, Generator::Root(r) if r.lo <= k && k < r.hi)
}

/// Whether some cut `1..n-1` is spanned by no factor of `m`.
pub fn reachable(m: &Monomial, n: usize) -> bool {
    (1..n).any(|k| !m.gens().iter().any(|g| spans_cut(g, k)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub n: usize,
    pub unreachable: usize,
    pub expected: String,
    pub witnesses: Vec<String>,
}

impl Census {
    pub fn passed(&self) -> bool {
        let top = if self.n == 1 {
            "S(1)".to_string()
        } else {
            format!("S(1,{})", self.n)
        };
        BigUint::from(self.unreachable).to_string() == self.expected && self.witnesses.contains(&top)
    }
}

/// Natural basis elements of `M*(n)` outside the image of every split,
/// decided by the cut rule.
pub fn census_unreachable(n: usize) -> Result<Census> {
    if n < 2 {
        return Err(Error::Dimension("the census needs n ≥ 2".into()));
    }
    let witnesses: Vec<String> = natural_basis(n, None)
        .into_iter()
        .filter(|m| !reachable(m, n))
        .map(|m| m.to_string())
        .collect();
    Ok(Census {
        n,
        unreachable: witnesses.len(),
        expected: catalan(n as u64 - 1).to_string(),
        witnesses,
    })
}

fn coordinates(e: &RingElt, index: &std::collections::HashMap<Monomial, usize>) -> Vec<(usize, Q)> {
    let mut v: Vec<(usize, Q)> = e
        .terms()
        .iter()
        .map(|(m, c)| (index[m], Q::from_integer(c.clone())))
        .collect();
    v.sort_by_key(|(k, _)| *k);
    v
}

/// The same census computed from spans: embed every basis tensor of every
/// split, normalize in `M*(n)`, and test each basis element for membership
/// in each span.
pub fn census_by_span(n: usize) -> Result<Census> {
    if n < 2 {
        return Err(Error::Dimension("the census needs n ≥ 2".into()));
    }
    let ring = MRing::new(n);
    let basis = natural_basis(n, None);
    let index: std::collections::HashMap<Monomial, usize> =
        basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut spans = Vec::new();
    for s in Split::all(n) {
        let mut span = EchelonBasis::new(basis.len());
        for u in natural_basis(s.n1, None) {
            for v in natural_basis(s.n2, None) {
                let x = RingElt::from_monomial(s.n1, u.clone());
                let y = RingElt::from_monomial(s.n2, v);
                span.insert(coordinates(&embed(&ring, &x, &y, s)?, &index));
            }
        }
        spans.push(span);
    }
    let witnesses: Vec<String> = basis
        .iter()
        .filter(|m| {
            let unit = vec![(index[*m], Q::from_integer(1.into()))];
            !spans.iter().any(|sp| sp.contains(unit.clone()))
        })
        .map(|m| m.to_string())
        .collect();
    Ok(Census {
        n,
        unreachable: witnesses.len(),
        expected: catalan(n as u64 - 1).to_string(),
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    pub split: Split,
    pub image_size: usize,
    pub expected_image_size: String,
    pub injective: bool,
    pub natural_images: bool,
    pub surjective: bool,
    pub morphism_failures: Vec<String>,
}

impl SplitCheck {
    pub fn passed(&self) -> bool {
        self.injective && self.natural_images && !self.surjective && self.morphism_failures.is_empty()
    }
}

/// Injectivity on bases: the images of basis tensors are pairwise distinct
/// natural monomials, and there are fewer of them than `c_{n+1}`.
pub fn check_split(s: Split, with_morphism: bool) -> Result<SplitCheck> {
    let n = s.n();
    let left = natural_basis(s.n1, None);
    let right = natural_basis(s.n2, None);
    let mut images = BTreeSet::new();
    let mut natural_images = true;
    for u in &left {
        for v in &right {
            let m = embed_monomial(u, v, s);
            natural_images &= m.is_natural();
            images.insert(m);
        }
    }
    let expected = catalan(s.n1 as u64 + 1) * catalan(s.n2 as u64 + 1);
    let injective = BigUint::from(images.len()) == expected;
    let surjective = BigUint::from(images.len()) >= catalan(n as u64 + 1);
    let morphism_failures = if with_morphism {
        morphism_failures(s)
    } else {
        Vec::new()
    };
    Ok(SplitCheck {
        split: s,
        image_size: images.len(),
        expected_image_size: expected.to_string(),
        injective,
        natural_images,
        surjective,
        morphism_failures,
    })
}

/// Products of generator pairs commute with the embedding: within each
/// factor, `ι(g)ι(h)` normalizes to `ι(gh)`; across factors the product is
/// already natural.
pub fn morphism_failures(s: Split) -> Vec<String> {
    let n = s.n();
    let big = MRing::new(n);
    let one = Monomial::one();
    let mut failures = Vec::new();
    let sides = [(s.n1, true), (s.n2, false)];
    for (m, first) in sides {
        let small = MRing::new(m);
        let gens = Generator::all(m);
        let lift = |mono: &Monomial| {
            if first {
                embed_monomial(mono, &one, s)
            } else {
                embed_monomial(&one, mono, s)
            }
        };
        for (k, g) in gens.iter().enumerate() {
            for h in &gens[k..] {
                let prod = Monomial::new(vec![*g, *h]);
                let lhs = big.nf_monomial(&lift(&prod));
                let mut rhs = RingElt::zero(n);
                for (mono, c) in small.nf_monomial(&prod).terms() {
                    rhs.add_term(lift(mono), c.clone());
                }
                if lhs != rhs {
                    failures.push(format!("{g}*{h}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    for g in Generator::all(s.n1) {
        for h in Generator::all(s.n2) {
            let m = embed_monomial(&Monomial::new(vec![g]), &Monomial::new(vec![h]), s);
            if !m.is_natural() {
                failures.push(format!("{m} is not natural"));
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_examples() {
        let s = Split::new(1, 1).unwrap();
        let r = MRing::new(2);
        let e = embed(&r, &MRing::new(1).s(1), &MRing::new(1).s(1), s).unwrap();
        assert_eq!(e.to_string(), "S(1)*S(2)");
        let r3 = MRing::new(3);
        let e = embed(
            &r3,
            &MRing::new(2).sa(1, 2),
            &RingElt::one(1),
            Split::new(2, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(e.to_string(), "S(1,2)");
        let e = embed(
            &r3,
            &MRing::new(1).s(1),
            &MRing::new(2).sa(1, 2),
            Split::new(1, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(e.to_string(), "S(1)*S(2,3)");
        assert!(embed(&r3, &MRing::new(2).s(1), &MRing::new(2).s(1), Split::new(1, 2).unwrap()).is_err());
        assert!(Split::new(0, 3).is_err());
    }

    #[test]
    fn census_examples() {
        let c = census_unreachable(2).unwrap();
        assert_eq!(c.witnesses, ["S(1,2)"]);
        let c = census_unreachable(3).unwrap();
        let mut w = c.witnesses.clone();
        w.sort();
        assert_eq!(w, ["S(1,2)*S(2,3)", "S(1,3)"]);
        for n in 2..=7 {
            assert!(census_unreachable(n).unwrap().passed(), "n={n}");
        }
        assert!(census_unreachable(1).is_err());
    }

    #[test]
    fn census_routes_agree() {
        for n in 2..=4 {
            let a = census_unreachable(n).unwrap();
            let b = census_by_span(n).unwrap();
            assert_eq!(a.witnesses, b.witnesses);
        }
    }

    #[test]
    fn splits() {
        for n in 2..=5 {
            for s in Split::all(n) {
                let c = check_split(s, true).unwrap();
                assert!(c.passed(), "{c:?}");
            }
        }
    }
}
