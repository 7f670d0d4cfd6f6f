//! The standard (Stanley–Reisner style) presentation of the cohomology ring
//! of the toric variety of the quiver fan, with exact computation in each
//! graded piece.
//!
//! Generators are `T_{-i}` and `T_α` for every positive root. After
//! eliminating `T_{-i}` through the linear relations, the ideal is generated
//! by the monomials `T_α T_β` for incompatible pairs and by the products
//! `(Σ_{γ∋i} T_γ) T_α` for `i ∈ α`. A graded piece is computed by first
//! passing to the monomials with compatible support (the quotient by the
//! monomial part) and then row-reducing the images of the remaining
//! generators times monomials.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinat::{compatible_roots, positive_roots, AlmostPositiveRoot, Root};
use crate::error::{Error, Result};
use crate::exactla::{sparse_from_pairs, EchelonBasis, SparseVec, Q};
use crate::fan::ray_vector;

/// A generator of the standard presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TVar {
    /// `T_{-i}`
    Neg(usize),
    /// `T_α`, `α` any positive root (simple allowed)
    Pos(Root),
}

impl TVar {
    pub fn check(&self, n: usize) -> Result<()> {
        match self {
            TVar::Neg(i) if *i == 0 || *i > n => Err(Error::IndexOutOfRange { index: *i, n }),
            TVar::Pos(r) if r.hi > n => Err(Error::IndexOutOfRange { index: r.hi, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TVar::Neg(i) => write!(f, "T(-{i})"),
            TVar::Pos(r) => write!(f, "T({},{})", r.lo, r.hi),
        }
    }
}

/// Sorted multiset of `TVar`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HMono(Vec<TVar>);

impl HMono {
    pub fn one() -> Self {
        HMono(Vec::new())
    }

    pub fn new(mut vars: Vec<TVar>) -> Self {
        vars.sort_unstable();
        HMono(vars)
    }

    pub fn vars(&self) -> &[TVar] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &HMono) -> HMono {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        HMono::new(v)
    }

    pub fn has_neg(&self) -> bool {
        self.0.iter().any(|v| matches!(v, TVar::Neg(_)))
    }
}

impl fmt::Display for HMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A polynomial in the `T` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    n: usize,
    terms: BTreeMap<HMono, BigInt>,
}

impl HPoly {
    pub fn zero(n: usize) -> Self {
        HPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_mono(n, HMono::one(), BigInt::one())
    }

    pub fn var(n: usize, v: TVar) -> Self {
        Self::from_mono(n, HMono::new(vec![v]), BigInt::one())
    }

    pub fn neg(n: usize, i: usize) -> Self {
        Self::var(n, TVar::Neg(i))
    }

    pub fn pos(n: usize, r: Root) -> Self {
        Self::var(n, TVar::Pos(r))
    }

    pub fn from_mono(n: usize, m: HMono, c: BigInt) -> Self {
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<HMono, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &HMono) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: HMono, c: BigInt) {
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

    pub fn add_scaled(&mut self, other: &HPoly, c: &BigInt) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn plus(&self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    pub fn minus(&self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        out
    }

    pub fn scale(&self, c: &BigInt) -> HPoly {
        let mut out = HPoly::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &HPoly) -> HPoly {
        let mut out = HPoly::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    /// Common degree of all terms, `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(HMono::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn sum<I: IntoIterator<Item = HPoly>>(n: usize, items: I) -> HPoly {
        items.into_iter().fold(HPoly::zero(n), |acc, p| acc.plus(&p))
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (a.0.degree(), a.0).cmp(&(b.0.degree(), b.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.degree() == 0 {
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

/// The defining relations of the standard presentation.
#[derive(Clone, Debug)]
pub struct HRelations {
    /// `T_{-i} - Σ_{i∈α} T_α`
    pub linear: Vec<HPoly>,
    /// `T_{-i} T_α` for `i ∈ α`, and `T_α T_β` for incompatible roots
    pub quadratic: Vec<HPoly>,
}

pub fn h_relations(n: usize) -> HRelations {
    let roots = positive_roots(n);
    let linear = (1..=n)
        .map(|i| {
            let mut p = HPoly::neg(n, i);
            for r in roots.iter().filter(|r| r.contains(i)) {
                p.add_term(HMono::new(vec![TVar::Pos(*r)]), -BigInt::one());
            }
            p
        })
        .collect();
    let mut quadratic = Vec::new();
    for i in 1..=n {
        for r in roots.iter().filter(|r| r.contains(i)) {
            quadratic.push(HPoly::from_mono(
                n,
                HMono::new(vec![TVar::Neg(i), TVar::Pos(*r)]),
                BigInt::one(),
            ));
        }
    }
    for (k, a) in roots.iter().enumerate() {
        for b in &roots[k + 1..] {
            if !compatible_roots(a, b) {
                quadratic.push(HPoly::from_mono(
                    n,
                    HMono::new(vec![TVar::Pos(*a), TVar::Pos(*b)]),
                    BigInt::one(),
                ));
            }
        }
    }
    HRelations { linear, quadratic }
}

/// The generic toric linear relations `Σ_u ⟨e_i, w_u⟩ T_u`, one per
/// coordinate vector `e_i`, with `w_u` the ray vectors of the fan.
pub fn linear_relations_from_rays(n: usize) -> Vec<HPoly> {
    let rays = AlmostPositiveRoot::all(n);
    (1..=n)
        .map(|i| {
            let mut p = HPoly::zero(n);
            for r in &rays {
                let c = ray_vector(r, n)[i - 1];
                let v = match r {
                    AlmostPositiveRoot::NegSimple(j) => TVar::Neg(*j),
                    AlmostPositiveRoot::Pos(a) => TVar::Pos(*a),
                };
                p.add_term(HMono::new(vec![v]), BigInt::from(c));
            }
            p
        })
        .collect()
}

/// `Σ_{i∈α} T_α`, the value of `T_{-i}` after elimination.
pub fn neg_as_pos(n: usize, i: usize) -> HPoly {
    let mut p = HPoly::zero(n);
    for r in positive_roots(n).into_iter().filter(|r| r.contains(i)) {
        p.add_term(HMono::new(vec![TVar::Pos(r)]), BigInt::one());
    }
    p
}

/// Substitute `T_{-i} := Σ_{i∈α} T_α`.
pub fn eliminate_linear(p: &HPoly) -> HPoly {
    let n = p.n();
    let subs: Vec<HPoly> = (0..=n)
        .map(|i| if i == 0 { HPoly::zero(n) } else { neg_as_pos(n, i) })
        .collect();
    let mut out = HPoly::zero(n);
    for (m, c) in p.terms() {
        let mut acc = HPoly::one(n);
        let mut pure = Vec::new();
        for v in m.vars() {
            match v {
                TVar::Neg(i) => acc = acc.mul(&subs[*i]),
                TVar::Pos(_) => pure.push(*v),
            }
        }
        let acc = acc.mul(&HPoly::from_mono(n, HMono::new(pure), BigInt::one()));
        out.add_scaled(&acc, c);
    }
    out
}

/// The relation obtained from `T_i T_{i+1} = 0` after eliminating the
/// simple-root variables, as a polynomial that must vanish.
pub fn adjacent_simples_relation(n: usize, i: usize) -> HPoly {
    assert!(1 <= i && i < n);
    let roots = positive_roots(n);
    let one = BigInt::one();
    let mut p = HPoly::from_mono(n, HMono::new(vec![TVar::Neg(i), TVar::Neg(i + 1)]), one.clone());
    for k in i + 2..=n {
        p.add_term(
            HMono::new(vec![TVar::Neg(i), TVar::Pos(Root::of(i + 1, k))]),
            -one.clone(),
        );
    }
    for j in 1..i {
        p.add_term(
            HMono::new(vec![TVar::Pos(Root::of(j, i)), TVar::Neg(i + 1)]),
            -one.clone(),
        );
    }
    let left: Vec<&Root> = roots.iter().filter(|r| !r.is_simple() && r.contains(i)).collect();
    let right: Vec<&Root> = roots.iter().filter(|r| !r.is_simple() && r.contains(i + 1)).collect();
    for a in &left {
        for b in &right {
            if a.is_subset(b) || b.is_subset(a) {
                p.add_term(HMono::new(vec![TVar::Pos(**a), TVar::Pos(**b)]), one.clone());
            }
        }
    }
    p
}

/// `T_{-i} T_α - Σ_{i∈β, α⊆β} T_α T_β` for `i ∉ α` and `α` containing `i±1`.
pub fn end_relation(n: usize, i: usize, a: Root) -> HPoly {
    assert!(!a.contains(i) && (a.contains(i + 1) || (i > 1 && a.contains(i - 1))));
    let mut p = HPoly::from_mono(n, HMono::new(vec![TVar::Neg(i), TVar::Pos(a)]), BigInt::one());
    for b in positive_roots(n)
        .into_iter()
        .filter(|b| b.contains(i) && a.is_subset(b))
    {
        p.add_term(HMono::new(vec![TVar::Pos(a), TVar::Pos(b)]), -BigInt::one());
    }
    p
}

/// Every `(i, α)` to which `end_relation` applies.
pub fn end_relation_instances(n: usize) -> Vec<(usize, Root)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for a in positive_roots(n) {
            if !a.contains(i) && (a.contains(i + 1) || (i > 1 && a.contains(i - 1))) {
                out.push((i, a));
            }
        }
    }
    out
}

/// One graded piece of the quotient.
pub struct Slice {
    pub degree: usize,
    /// Monomials (over positive-root variable indices) with compatible support.
    pub monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    pub relations: EchelonBasis,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.monomials.len() - self.relations.rank()
    }
}

/// The quotient ring, with graded pieces built on demand.
pub struct HQuotient {
    n: usize,
    roots: Vec<Root>,
    root_index: HashMap<Root, usize>,
    compat: Vec<Vec<bool>>,
    slices: Mutex<HashMap<usize, Arc<Slice>>>,
}

impl HQuotient {
    pub fn new(n: usize) -> Self {
        let roots = positive_roots(n);
        let root_index = roots.iter().enumerate().map(|(k, r)| (*r, k)).collect();
        let compat = roots
            .iter()
            .map(|a| roots.iter().map(|b| compatible_roots(a, b)).collect())
            .collect();
        HQuotient {
            n,
            roots,
            root_index,
            compat,
            slices: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Whether a sorted variable-index multiset has pairwise compatible support.
    fn standard(&self, vars: &[usize]) -> bool {
        for (k, &a) in vars.iter().enumerate() {
            for &b in &vars[k + 1..] {
                if a != b && !self.compat[a][b] {
                    return false;
                }
            }
        }
        true
    }

    fn standard_monomials(&self, d: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(d);
        self.extend_standard(&mut cur, 0, d, &mut out);
        out
    }

    fn extend_standard(&self, cur: &mut Vec<usize>, from: usize, d: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in from..self.roots.len() {
            if cur.iter().all(|&u| u == v || self.compat[u][v]) {
                cur.push(v);
                self.extend_standard(cur, v, d, out);
                cur.pop();
            }
        }
    }

    pub fn slice(&self, d: usize) -> Result<Arc<Slice>> {
        if let Some(s) = self.slices.lock().expect("slice lock").get(&d) {
            return Ok(s.clone());
        }
        if d > self.n + 1 {
            return Err(Error::ResourceLimit(format!("degree {d} above n + 1 = {}", self.n + 1)));
        }
        let monomials = self.standard_monomials(d);
        let index: HashMap<Vec<usize>, usize> = monomials.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        let mut relations = EchelonBasis::new(monomials.len());
        if d >= 2 {
            let lower = self.standard_monomials(d - 2);
            for i in 1..=self.n {
                let star: Vec<usize> = (0..self.roots.len()).filter(|&k| self.roots[k].contains(i)).collect();
                for &a in &star {
                    for m in &lower {
                        let mut base = m.clone();
                        base.push(a);
                        base.sort_unstable();
                        if !self.standard(&base) {
                            continue;
                        }
                        let row = star.iter().filter_map(|&g| {
                            let mut full = base.clone();
                            full.push(g);
                            full.sort_unstable();
                            index.get(&full).map(|&k| (k, Q::one()))
                        });
                        relations.insert(sparse_from_pairs(row));
                    }
                }
            }
        }
        let slice = Arc::new(Slice {
            degree: d,
            monomials,
            index,
            relations,
        });
        self.slices.lock().expect("slice lock").insert(d, slice.clone());
        Ok(slice)
    }

    fn var_index(&self, v: &TVar) -> Result<usize> {
        match v {
            TVar::Pos(r) => self
                .root_index
                .get(r)
                .copied()
                .ok_or(Error::IndexOutOfRange { index: r.hi, n: self.n }),
            TVar::Neg(_) => Err(Error::Dimension("negative variable after elimination".into())),
        }
    }

    /// Drop every monomial whose support is not pairwise compatible; the
    /// result is congruent to `p` modulo the monomial part of the ideal.
    pub fn drop_incompatible(&self, p: &HPoly) -> Result<HPoly> {
        let mut out = HPoly::zero(self.n);
        for (m, c) in p.terms() {
            if m.has_neg() {
                return Err(Error::Dimension("eliminate T(-i) first".into()));
            }
            let mut vars = m.vars().iter().map(|v| self.var_index(v)).collect::<Result<Vec<_>>>()?;
            vars.sort_unstable();
            if self.standard(&vars) {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Product followed by `drop_incompatible`.
    pub fn mul(&self, a: &HPoly, b: &HPoly) -> Result<HPoly> {
        let mut out = HPoly::zero(self.n);
        for (x, c) in a.terms() {
            for (y, d) in b.terms() {
                let m = x.mul(y);
                let mut vars = m.vars().iter().map(|v| self.var_index(v)).collect::<Result<Vec<_>>>()?;
                vars.sort_unstable();
                if self.standard(&vars) {
                    out.add_term(m, c * d);
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of `p` (homogeneous of degree `d`, any variables) on the
    /// compatible monomials of degree `d`, before reduction.
    pub fn coordinates(&self, p: &HPoly, d: usize) -> Result<SparseVec> {
        let p = eliminate_linear(p);
        let slice = self.slice(d)?;
        let mut pairs = Vec::new();
        for (m, c) in p.terms() {
            if m.degree() != d {
                return Err(Error::Dimension(format!("term {m} is not of degree {d}")));
            }
            let mut vars = m.vars().iter().map(|v| self.var_index(v)).collect::<Result<Vec<_>>>()?;
            vars.sort_unstable();
            if let Some(&k) = slice.index.get(&vars) {
                pairs.push((k, Q::from_integer(c.clone())));
            }
        }
        Ok(sparse_from_pairs(pairs))
    }

    /// Canonical residue of `p` in degree `d`; zero iff `p` lies in the
    /// ideal (over the rationals).
    pub fn residue(&self, p: &HPoly, d: usize) -> Result<SparseVec> {
        let v = self.coordinates(p, d)?;
        Ok(self.slice(d)?.relations.reduce(v))
    }

    pub fn residue_poly(&self, p: &HPoly, d: usize) -> Result<HPoly> {
        let r = self.residue(p, d)?;
        let slice = self.slice(d)?;
        let mut out = HPoly::zero(self.n);
        for (k, x) in r {
            let m = HMono::new(slice.monomials[k].iter().map(|&v| TVar::Pos(self.roots[v])).collect());
            // residues of integer input can be fractional in principle
            let c = if x.is_integer() {
                x.to_integer()
            } else {
                return Err(Error::Dimension(format!("non-integral residue coefficient {x}")));
            };
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn is_zero(&self, p: &HPoly, d: usize) -> Result<bool> {
        Ok(self.residue(p, d)?.is_empty())
    }

    /// Dimension of each graded piece `0..=n`.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        (0..=self.n).map(|d| Ok(self.slice(d)?.dim())).collect()
    }
}

pub fn degree_component_reduce(p: &HPoly, n: usize, d: usize) -> Result<SparseVec> {
    HQuotient::new(n).residue(p, d)
}

pub fn quotient_ranks(n: usize) -> Result<Vec<usize>> {
    if n > 6 {
        return Err(Error::ResourceLimit(format!(
            "full quotient ranks capped at n <= 6, got {n}"
        )));
    }
    HQuotient::new(n).ranks()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(lo: usize, hi: usize) -> TVar {
        TVar::Pos(Root::of(lo, hi))
    }

    #[test]
    fn relations_n2() {
        let rel = h_relations(2);
        assert_eq!(rel.linear[0].to_string(), "T(-1) - T(1,1) - T(1,2)");
        let quad: Vec<String> = rel.quadratic.iter().map(|p| p.to_string()).collect();
        assert!(quad.contains(&"T(1,1)*T(2,2)".to_string()));
        let rel3 = h_relations(3);
        assert!(rel3.quadratic.iter().any(|p| p.to_string() == "T(1,2)*T(2,3)"));
    }

    #[test]
    fn ray_relations_match_linear_relations() {
        for n in 1..=7 {
            let from_rays = linear_relations_from_rays(n);
            let stated = h_relations(n).linear;
            for (r, l) in from_rays.iter().zip(&stated) {
                assert_eq!(*r, l.scale(&-BigInt::one()), "n={n}");
            }
        }
    }

    #[test]
    fn elimination() {
        let p = eliminate_linear(&HPoly::neg(2, 1));
        assert_eq!(p.to_string(), "T(1,1) + T(1,2)");
        let p = eliminate_linear(&HPoly::var(2, t(1, 2)));
        assert_eq!(p.to_string(), "T(1,2)");
    }

    #[test]
    fn small_residues() {
        let h = HQuotient::new(2);
        // T(-1)*T(1,2) is a defining relation and dies after elimination
        let p = HPoly::from_mono(2, HMono::new(vec![TVar::Neg(1), t(1, 2)]), BigInt::one());
        assert!(h.is_zero(&p, 2).unwrap());
        // {[1,1],[1,2]} is a maximal cone: its product is the point class
        let p = HPoly::from_mono(2, HMono::new(vec![t(1, 1), t(1, 2)]), BigInt::one());
        assert!(!h.is_zero(&p, 2).unwrap());
        let q = HPoly::from_mono(2, HMono::new(vec![t(1, 2), t(1, 2)]), -BigInt::one());
        assert_eq!(h.residue(&p, 2).unwrap(), h.residue(&q, 2).unwrap());
        let sq = HPoly::neg(2, 1).mul(&HPoly::neg(2, 1));
        assert!(h.is_zero(&sq, 2).unwrap());
        let top = HPoly::neg(2, 1).mul(&HPoly::neg(2, 2));
        assert!(!h.is_zero(&top, 2).unwrap());
    }

    #[test]
    fn square_of_negative_simple_vanishes() {
        for n in 1..=5 {
            let h = HQuotient::new(n);
            for i in 1..=n {
                let sq = HPoly::neg(n, i).mul(&HPoly::neg(n, i));
                assert!(h.is_zero(&sq, 2).unwrap(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn derived_relations_vanish() {
        for n in 2..=5 {
            let h = HQuotient::new(n);
            for i in 1..n {
                assert!(h.is_zero(&adjacent_simples_relation(n, i), 2).unwrap(), "n={n} i={i}");
            }
            for (i, a) in end_relation_instances(n) {
                assert!(h.is_zero(&end_relation(n, i, a), 2).unwrap(), "n={n} i={i} {a}");
            }
        }
    }

    #[test]
    fn ranks_small() {
        assert_eq!(quotient_ranks(1).unwrap(), vec![1, 1]);
        assert_eq!(quotient_ranks(2).unwrap(), vec![1, 3, 1]);
        assert_eq!(quotient_ranks(3).unwrap(), vec![1, 6, 6, 1]);
    }
}
