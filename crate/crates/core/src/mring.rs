//! The quadratic ring M*(n).
//!
//! Generators are `S_i` (height 1) and `S_α` for non-simple roots (height
//! `#α`). The defining relations are oriented into a rewrite system whose
//! left-hand sides are exactly the pairs of generators that cannot sit
//! together in a U-set; every rewrite strictly lowers the total height, and
//! the irreducible monomials are the natural basis `S^u`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinat::{enumerate_usets, overlap, Overlap, Root, USet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `S_i`
    Simple(usize),
    /// `S_α` with `α` non-simple
    Root(Root),
}

impl Generator {
    pub fn root(lo: usize, hi: usize) -> Generator {
        let r = Root::of(lo, hi);
        assert!(!r.is_simple(), "S_[i,i] is written S_i");
        Generator::Root(r)
    }

    pub fn height(&self) -> usize {
        match self {
            Generator::Simple(_) => 1,
            Generator::Root(r) => r.len(),
        }
    }

    pub fn max_index(&self) -> usize {
        match self {
            Generator::Simple(i) => *i,
            Generator::Root(r) => r.hi,
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self {
            Generator::Simple(i) if *i == 0 || *i > n => Err(Error::IndexOutOfRange { index: *i, n }),
            Generator::Root(r) if r.is_simple() => Err(Error::SimpleRoot(*r)),
            Generator::Root(r) if r.hi > n => Err(Error::IndexOutOfRange { index: r.hi, n }),
            _ => Ok(()),
        }
    }

    /// Every generator of M*(n), simples first.
    pub fn all(n: usize) -> Vec<Generator> {
        (1..=n)
            .map(Generator::Simple)
            .chain(crate::combinat::nonsimple_roots(n).into_iter().map(Generator::Root))
            .collect()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Simple(i) => write!(f, "S({i})"),
            Generator::Root(r) => write!(f, "S({},{})", r.lo, r.hi),
        }
    }
}

/// Whether `{g, h}` (possibly `g = h`) is a left-hand side of the rewrite
/// system, i.e. cannot occur in a natural monomial.
pub fn violates(g: &Generator, h: &Generator) -> bool {
    match (g, h) {
        (Generator::Simple(i), Generator::Simple(j)) => i == j,
        (Generator::Simple(i), Generator::Root(r)) | (Generator::Root(r), Generator::Simple(i)) => r.contains(*i),
        (Generator::Root(a), Generator::Root(b)) => {
            matches!(overlap(a, b), Overlap::Overlap { size, .. } if size >= 2)
        }
    }
}

/// A commutative monomial: a sorted multiset of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut gens: Vec<Generator>) -> Self {
        gens.sort_unstable();
        Monomial(gens)
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> usize {
        self.0.iter().map(Generator::height).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(Generator::max_index).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        out.push(*a.next().unwrap());
                    } else {
                        out.push(*b.next().unwrap());
                    }
                }
                (Some(_), None) => out.push(*a.next().unwrap()),
                (None, Some(_)) => out.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Positions `(p, q)`, `p < q`, of every rewritable pair, in
    /// lexicographic order.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.0.len() {
            for q in p + 1..self.0.len() {
                if violates(&self.0[p], &self.0[q]) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    fn first_violation(&self) -> Option<(usize, usize)> {
        (0..self.0.len()).find_map(|p| {
            (p + 1..self.0.len())
                .find(|&q| violates(&self.0[p], &self.0[q]))
                .map(|q| (p, q))
        })
    }

    /// Squarefree with U-set support.
    pub fn is_natural(&self) -> bool {
        self.first_violation().is_none()
    }

    /// The support as a U-set, when the monomial is natural.
    pub fn uset(&self) -> Option<USet> {
        if !self.is_natural() {
            return None;
        }
        let mut simples = std::collections::BTreeSet::new();
        let mut roots = std::collections::BTreeSet::new();
        for g in &self.0 {
            match g {
                Generator::Simple(i) => simples.insert(*i),
                Generator::Root(r) => roots.insert(*r),
            };
        }
        USet::new(simples, roots).ok()
    }

    pub fn from_uset(u: &USet) -> Monomial {
        Monomial::new(
            u.simples()
                .iter()
                .map(|&i| Generator::Simple(i))
                .chain(u.roots().iter().map(|&r| Generator::Root(r)))
                .collect(),
        )
    }

    /// Drop the factors at positions `p` and `q`.
    fn without(&self, p: usize, q: usize) -> Monomial {
        Monomial(
            self.0
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != p && *k != q)
                .map(|(_, g)| *g)
                .collect(),
        )
    }

    /// Canonical printing key: degree, height, generator order.
    pub fn print_key(&self) -> (usize, usize, &[Generator]) {
        (self.degree(), self.height(), &self.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// An element of M*(n) (or of the free commutative ring on its generators
/// before normalization): exact integer combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElt {
    n: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElt {
    pub fn zero(n: usize) -> Self {
        RingElt {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_monomial(n, Monomial::one())
    }

    pub fn from_monomial(n: usize, m: Monomial) -> Self {
        let mut e = Self::zero(n);
        e.add_term(m, BigInt::one());
        e
    }

    pub fn generator(n: usize, g: Generator) -> Result<Self> {
        g.check(n)?;
        Ok(Self::from_monomial(n, Monomial::new(vec![g])))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &RingElt, c: &BigInt) {
        for (m, x) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += x * c;
            if e.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn add(&self, other: &RingElt) -> Result<RingElt> {
        self.same_n(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        Ok(out)
    }

    pub fn sub(&self, other: &RingElt) -> Result<RingElt> {
        self.same_n(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> RingElt {
        let mut out = RingElt::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    /// Product in the free commutative ring (no normalization).
    pub fn mul_raw(&self, other: &RingElt) -> Result<RingElt> {
        self.same_n(other)?;
        let mut out = RingElt::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        Ok(out)
    }

    fn same_n(&self, other: &RingElt) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch(self.n, other.n))
        }
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Monomial::is_natural)
    }

    /// Largest total height among terms (0 for zero).
    pub fn height(&self) -> usize {
        self.terms.keys().map(Monomial::height).max().unwrap_or(0)
    }

    /// Terms in canonical printing order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.print_key().cmp(&b.0.print_key()));
        v
    }
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Right-hand side of the relation whose left-hand side is `g·h`, or `None`
/// when `g·h` is not rewritable.
pub fn rewrite_pair(g: &Generator, h: &Generator, n: usize) -> Option<RingElt> {
    if !violates(g, h) {
        return None;
    }
    let mut out = RingElt::zero(n);
    let s = |i: usize| Generator::Simple(i);
    let sa = |lo: usize, hi: usize| Generator::Root(Root::of(lo, hi));
    match (g, h) {
        // S_i^2 = 0
        (Generator::Simple(_), Generator::Simple(_)) => {}
        // S_i S_α = Σ_{j∈α, j≠i} S_i S_j
        (Generator::Simple(i), Generator::Root(a)) | (Generator::Root(a), Generator::Simple(i)) => {
            for j in (a.lo..=a.hi).filter(|j| j != i) {
                out.add_term(Monomial::new(vec![s(*i), s(j)]), BigInt::one());
            }
        }
        (Generator::Root(x), Generator::Root(y)) => {
            // orient so that α is lexicographically first: α.lo <= β.lo <= α.hi <= β.hi
            let (a, b) = if (x.lo, x.hi) <= (y.lo, y.hi) { (x, y) } else { (y, x) };
            let inter = a.intersection(b).expect("overlapping");
            for i in inter.lo..=inter.hi {
                for j in i + 1..=inter.hi {
                    out.add_term(Monomial::new(vec![s(i), s(j)]), BigInt::one());
                }
            }
            // Rα ∩ Lβ = [max(a.lo+1, b.lo), min(a.hi, b.hi-1)]
            let lo = (a.lo + 1).max(b.lo);
            let hi = a.hi.min(b.hi - 1);
            for l in lo..=hi {
                out.add_term(Monomial::new(vec![sa(a.lo, l), sa(l, b.hi)]), BigInt::one());
                if l < hi {
                    out.add_term(Monomial::new(vec![sa(a.lo, l), sa(l + 1, b.hi)]), -BigInt::one());
                }
            }
        }
    }
    Some(out)
}

const MEMO_CAP: usize = 1 << 20;

/// The ring M*(n) with a memo of monomial normal forms.
///
/// The memo is a pure cache: a key always maps to the normal form computed
/// by the deterministic strategy, whichever thread inserted it.
pub struct MRing {
    n: usize,
    memo: RwLock<HashMap<Monomial, RingElt>>,
}

impl MRing {
    pub fn new(n: usize) -> Self {
        MRing {
            n,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gen(&self, g: Generator) -> Result<RingElt> {
        RingElt::generator(self.n, g)
    }

    pub fn s(&self, i: usize) -> RingElt {
        self.gen(Generator::Simple(i)).expect("index in range")
    }

    pub fn sa(&self, lo: usize, hi: usize) -> RingElt {
        self.gen(Generator::root(lo, hi)).expect("root in range")
    }

    pub fn monomial(&self, gens: Vec<Generator>) -> Result<RingElt> {
        for g in &gens {
            g.check(self.n)?;
        }
        Ok(RingElt::from_monomial(self.n, Monomial::new(gens)))
    }

    /// Normal form of a monomial: rewrite the lexicographically first
    /// violating pair, recursively, memoized.
    pub fn nf_monomial(&self, m: &Monomial) -> RingElt {
        if let Some(hit) = self.memo.read().expect("memo lock").get(m) {
            return hit.clone();
        }
        let result = match m.first_violation() {
            None => RingElt::from_monomial(self.n, m.clone()),
            Some((p, q)) => {
                let rest = m.without(p, q);
                let rhs = rewrite_pair(&m.0[p], &m.0[q], self.n).expect("violating pair");
                let mut acc = RingElt::zero(self.n);
                for (mon, c) in rhs.terms() {
                    acc.add_scaled(&self.nf_monomial(&rest.mul(mon)), c);
                }
                acc
            }
        };
        let mut memo = self.memo.write().expect("memo lock");
        if memo.len() < MEMO_CAP {
            memo.insert(m.clone(), result.clone());
        }
        result
    }

    pub fn normal_form(&self, e: &RingElt) -> RingElt {
        let mut out = RingElt::zero(self.n);
        for (m, c) in e.terms() {
            out.add_scaled(&self.nf_monomial(m), c);
        }
        out
    }

    pub fn multiply(&self, a: &RingElt, b: &RingElt) -> Result<RingElt> {
        if a.n() != self.n {
            return Err(Error::SizeMismatch(self.n, a.n()));
        }
        if b.n() != self.n {
            return Err(Error::SizeMismatch(self.n, b.n()));
        }
        let mut out = RingElt::zero(self.n);
        for (x, c) in a.terms() {
            for (y, d) in b.terms() {
                out.add_scaled(&self.nf_monomial(&x.mul(y)), &(c * d));
            }
        }
        Ok(out)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a RingElt>>(&self, factors: I) -> Result<RingElt> {
        factors
            .into_iter()
            .try_fold(RingElt::one(self.n), |acc, f| self.multiply(&acc, f))
    }

    /// `S^u` for every U-set `u`, optionally of a fixed degree, in code order.
    pub fn natural_basis(&self, degree: Option<usize>) -> Vec<Monomial> {
        natural_basis(self.n, degree)
    }
}

pub fn natural_basis(n: usize, degree: Option<usize>) -> Vec<Monomial> {
    enumerate_usets(n, degree).map(|u| Monomial::from_uset(&u)).collect()
}

/// Normal form computed with a caller-chosen rewrite strategy and no memo.
///
/// Monomials are processed in decreasing height; `choose` receives the number
/// of violating pairs of the current monomial and returns the index of the
/// pair to rewrite.
pub fn normal_form_with<F: FnMut(usize) -> usize>(e: &RingElt, mut choose: F) -> RingElt {
    let n = e.n();
    let mut pending: BTreeMap<(std::cmp::Reverse<usize>, Monomial), BigInt> = BTreeMap::new();
    for (m, c) in e.terms() {
        *pending
            .entry((std::cmp::Reverse(m.height()), m.clone()))
            .or_insert_with(BigInt::zero) += c;
    }
    let mut out = RingElt::zero(n);
    while let Some(((_, m), c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        let viols = m.violations();
        if viols.is_empty() {
            out.add_term(m, c);
            continue;
        }
        let (p, q) = viols[choose(viols.len()) % viols.len()];
        let rest = m.without(p, q);
        let rhs = rewrite_pair(&m.0[p], &m.0[q], n).expect("violating pair");
        for (mon, d) in rhs.terms() {
            let next = rest.mul(mon);
            *pending
                .entry((std::cmp::Reverse(next.height()), next))
                .or_insert_with(BigInt::zero) += &c * d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> Generator {
        Generator::Simple(i)
    }

    fn sa(lo: usize, hi: usize) -> Generator {
        Generator::root(lo, hi)
    }

    fn mono(gens: &[Generator]) -> Monomial {
        Monomial::new(gens.to_vec())
    }

    #[test]
    fn naturality() {
        assert!(mono(&[s(1), sa(2, 3)]).is_natural());
        assert!(!mono(&[s(2), sa(2, 3)]).is_natural());
        assert!(mono(&[sa(1, 2), sa(2, 3)]).is_natural());
        assert!(!mono(&[s(1), s(1)]).is_natural());
        assert!(!mono(&[sa(1, 3), sa(2, 4)]).is_natural());
        assert!(mono(&[sa(1, 4), sa(2, 3)]).is_natural());
    }

    #[test]
    fn rewrite_examples() {
        let n = 4;
        assert_eq!(rewrite_pair(&sa(1, 2), &sa(1, 2), n).unwrap().to_string(), "S(1)*S(2)");
        assert_eq!(rewrite_pair(&s(2), &sa(2, 3), n).unwrap().to_string(), "S(2)*S(3)");
        assert_eq!(
            rewrite_pair(&sa(1, 3), &sa(2, 3), n).unwrap().to_string(),
            "S(2)*S(3) + S(1,2)*S(2,3)"
        );
        assert_eq!(
            rewrite_pair(&sa(2, 4), &sa(1, 3), n).unwrap().to_string(),
            "S(2)*S(3) - S(1,2)*S(3,4) + S(1,2)*S(2,4) + S(1,3)*S(3,4)"
        );
        assert!(rewrite_pair(&s(1), &s(1), n).unwrap().is_zero());
        assert!(rewrite_pair(&s(1), &sa(2, 3), n).is_none());
        assert!(rewrite_pair(&sa(1, 2), &sa(2, 3), n).is_none());
    }

    #[test]
    fn rewrites_lower_height() {
        let n = 6;
        let gens = Generator::all(n);
        for g in &gens {
            for h in &gens {
                if let Some(rhs) = rewrite_pair(g, h, n) {
                    for m in rhs.terms().keys() {
                        assert!(m.height() < g.height() + h.height(), "{g}*{h} -> {m}");
                        assert_eq!(m.degree(), 2);
                    }
                    assert_eq!(rhs, rewrite_pair(h, g, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn normal_forms() {
        let r = MRing::new(3);
        let m = r.monomial(vec![sa(1, 3), sa(1, 2), sa(2, 3)]).unwrap();
        assert_eq!(r.normal_form(&m).to_string(), "2*S(1)*S(2)*S(3)");
        let m = r.monomial(vec![sa(1, 2), s(1), s(2)]).unwrap();
        assert!(r.normal_form(&m).is_zero());
        let m = r.monomial(vec![s(1), s(1)]).unwrap();
        assert!(r.normal_form(&m).is_zero());
    }

    #[test]
    fn products() {
        let r = MRing::new(3);
        let u = r.monomial(vec![s(1), sa(2, 3)]).unwrap();
        assert_eq!(r.multiply(&u, &RingElt::one(3)).unwrap(), u);
        assert_eq!(
            r.multiply(&r.s(1), &r.sa(1, 3)).unwrap().to_string(),
            "S(1)*S(2) + S(1)*S(3)"
        );
        assert_eq!(
            r.multiply(&r.sa(1, 2), &r.sa(1, 3)).unwrap().to_string(),
            "S(1)*S(2) + S(1,2)*S(2,3)"
        );
        assert!(r.multiply(&r.s(1), &RingElt::one(4)).is_err());
    }

    #[test]
    fn basis_small() {
        let b: Vec<String> = natural_basis(2, None).iter().map(|m| m.to_string()).collect();
        let mut sorted = b.clone();
        sorted.sort();
        assert_eq!(sorted, ["1", "S(1)", "S(1)*S(2)", "S(1,2)", "S(2)"]);
        assert_eq!(natural_basis(1, None).len(), 2);
        assert_eq!(natural_basis(3, Some(2)).len(), 6);
    }

    #[test]
    fn strategies_agree_small() {
        let r = MRing::new(4);
        let m = r.monomial(vec![sa(1, 3), sa(2, 4), s(2), sa(1, 2)]).unwrap();
        let a = r.normal_form(&m);
        let mut k = 0usize;
        let b = normal_form_with(&m, |len| {
            k += 1;
            len - 1 - (k % len)
        });
        assert_eq!(a, b);
    }

    #[test]
    fn display_signs() {
        let mut e = RingElt::zero(2);
        e.add_term(Monomial::one(), BigInt::from(-3));
        e.add_term(mono(&[s(1)]), BigInt::from(2));
        e.add_term(mono(&[s(2)]), BigInt::from(-1));
        assert_eq!(e.to_string(), "-3 + 2*S(1) - S(2)");
        assert_eq!(RingElt::zero(2).to_string(), "0");
    }
}
