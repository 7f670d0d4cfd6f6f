//! Buchberger's algorithm over ℚ for ideals in the generators of M*(n).
//!
//! Monomials are stored as order keys `[wdeg, deg, -e_{N-1}, ..., -e_0]`,
//! where variable `0` is the largest. Comparing keys lexicographically
//! gives the weighted degree order with graded reverse lexicographic
//! tie-break, and the key of a product is the sum of the keys.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::catalan;
use crate::error::{Error, Result};
use crate::exactla::Q;
use crate::mring::{rewrite_pair, Generator, Monomial, RingElt};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(Vec<i32>);

impl Mono {
    fn nvars(&self) -> usize {
        self.0.len() - 2
    }

    fn slot(&self, var: usize) -> usize {
        2 + self.nvars() - 1 - var
    }

    pub fn exponent(&self, var: usize) -> u32 {
        (-self.0[self.slot(var)]) as u32
    }

    pub fn degree(&self) -> u32 {
        self.0[1] as u32
    }

    pub fn weighted_degree(&self) -> u32 {
        self.0[0] as u32
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0[2..].iter().zip(&other.0[2..]).all(|(a, b)| a >= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Mono) -> Mono {
        Mono(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0[2..].iter().zip(&other.0[2..]).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.0[1] == 0
    }
}

/// Weighted degree order on the generators of M*(n): the weight of a
/// variable is its height, and ties are broken by graded reverse
/// lexicographic order with variables sorted by `(height, lo, hi)`
/// descending.
#[derive(Clone, Debug)]
pub struct TermOrder {
    vars: Vec<Generator>,
    weights: Vec<i32>,
}

fn sort_key(g: &Generator) -> (usize, usize, usize) {
    match g {
        Generator::Simple(i) => (1, *i, *i),
        Generator::Root(r) => (r.len(), r.lo, r.hi),
    }
}

impl TermOrder {
    pub fn heights(n: usize) -> Self {
        let mut vars = Generator::all(n);
        vars.sort_by_key(|g| std::cmp::Reverse(sort_key(g)));
        let weights = vars.iter().map(|g| g.height() as i32).collect();
        TermOrder { vars, weights }
    }

    pub fn vars(&self) -> &[Generator] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn index_of(&self, g: &Generator) -> Option<usize> {
        self.vars.iter().position(|v| v == g)
    }

    pub fn mono_from_exponents(&self, exps: &[u32]) -> Mono {
        let n = self.nvars();
        let mut key = vec![0i32; n + 2];
        for (k, &e) in exps.iter().enumerate() {
            key[0] += self.weights[k] * e as i32;
            key[1] += e as i32;
            key[2 + n - 1 - k] = -(e as i32);
        }
        Mono(key)
    }

    pub fn one(&self) -> Mono {
        Mono(vec![0; self.nvars() + 2])
    }

    pub fn var(&self, k: usize) -> Mono {
        let mut e = vec![0; self.nvars()];
        e[k] = 1;
        self.mono_from_exponents(&e)
    }

    pub fn exponents(&self, m: &Mono) -> Vec<u32> {
        (0..self.nvars()).map(|k| m.exponent(k)).collect()
    }

    pub fn lcm(&self, a: &Mono, b: &Mono) -> Mono {
        let e: Vec<u32> = (0..self.nvars()).map(|k| a.exponent(k).max(b.exponent(k))).collect();
        self.mono_from_exponents(&e)
    }

    pub fn from_monomial(&self, m: &Monomial) -> Result<Mono> {
        let mut e = vec![0u32; self.nvars()];
        for g in m.gens() {
            let k = self
                .index_of(g)
                .ok_or_else(|| Error::Dimension(format!("{g} is not a variable of this order")))?;
            e[k] += 1;
        }
        Ok(self.mono_from_exponents(&e))
    }

    pub fn to_monomial(&self, m: &Mono) -> Monomial {
        let mut gens = Vec::new();
        for (k, g) in self.vars.iter().enumerate() {
            gens.extend(std::iter::repeat_n(*g, m.exponent(k) as usize));
        }
        Monomial::new(gens)
    }

    pub fn poly_from_elt(&self, e: &RingElt) -> Result<Poly> {
        let mut p = Poly::zero();
        for (m, c) in e.terms() {
            p.add_term(self.from_monomial(m)?, Q::from_integer(c.clone()));
        }
        Ok(p)
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { order: self, poly: p }
    }
}

/// Polynomial with rational coefficients, terms keyed by the order key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn lead(&self) -> Result<(&Mono, &Q)> {
        self.terms.last_key_value().ok_or(Error::ZeroPolynomial)
    }

    fn lead_mono(&self) -> &Mono {
        self.terms.last_key_value().expect("nonzero polynomial").0
    }

    fn make_monic(mut self) -> Poly {
        if let Some((_, c)) = self.terms.last_key_value() {
            let inv = c.recip();
            for v in self.terms.values_mut() {
                *v *= &inv;
            }
        }
        self
    }

    /// `self - c·q·g`.
    fn sub_multiple(&mut self, c: &Q, q: &Mono, g: &Poly) {
        for (m, d) in &g.terms {
            self.add_term(q.mul(m), -(c * d));
        }
    }
}

pub struct PolyDisplay<'a> {
    order: &'a TermOrder,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mut factors = Vec::new();
            for (v, g) in self.order.vars.iter().enumerate().rev() {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(g.to_string()),
                    e => factors.push(format!("{g}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Full reduction of `p` modulo `basis`, whose elements must be monic. The
/// first basis element whose lead divides the current term is used.
pub fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let mut work = p.terms.clone();
    let mut rem = Poly::zero();
    while let Some((m, c)) = work.pop_last() {
        match basis.iter().find(|g| g.lead_mono().divides(&m)) {
            Some(g) => {
                let q = g.lead_mono().quotient_of(&m);
                let mut tail = Poly {
                    terms: std::mem::take(&mut work),
                };
                for (gm, gc) in g.terms.iter().rev().skip(1) {
                    tail.add_term(q.mul(gm), -(&c * gc));
                }
                work = tail.terms;
            }
            None => {
                rem.terms.insert(m, c);
            }
        }
    }
    rem
}

fn s_polynomial(order: &TermOrder, f: &Poly, g: &Poly) -> Poly {
    let (lf, lg) = (f.lead_mono(), g.lead_mono());
    let l = order.lcm(lf, lg);
    let mut s = Poly::zero();
    s.sub_multiple(&-Q::one(), &lf.quotient_of(&l), f);
    s.sub_multiple(&Q::one(), &lg.quotient_of(&l), g);
    s
}

/// Whether every S-polynomial of non-coprime leads reduces to zero.
pub fn is_groebner(rels: &[Poly], order: &TermOrder) -> bool {
    let basis: Vec<Poly> = rels
        .iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .map(Poly::make_monic)
        .collect();
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !basis[i].lead_mono().coprime(basis[j].lead_mono()))
        .collect();
    pairs
        .par_iter()
        .all(|&(i, j)| reduce(&s_polynomial(order, &basis[i], &basis[j]), &basis).is_zero())
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 20_000,
            max_pairs: 10_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    /// Every element produced, inputs first, all monic.
    pub polys: Vec<Poly>,
    pub input_size: usize,
    pub new_elements: usize,
    pub pairs_reduced: usize,
    pub pairs_skipped: usize,
}

impl GroebnerBasis {
    /// The reduced Gröbner basis: minimal leads, tails fully reduced.
    pub fn reduced(&self) -> Vec<Poly> {
        let mut minimal: Vec<Poly> = Vec::new();
        let mut sorted: Vec<&Poly> = self.polys.iter().collect();
        sorted.sort_by(|a, b| a.lead_mono().cmp(b.lead_mono()));
        for p in sorted {
            if !minimal.iter().any(|g| g.lead_mono().divides(p.lead_mono())) {
                minimal.push(p.clone());
            }
        }
        (0..minimal.len())
            .map(|k| {
                let others: Vec<Poly> = minimal
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, g)| g.clone())
                    .collect();
                let p = &minimal[k];
                let (lm, lc) = p.lead().expect("nonzero");
                let mut tail = p.clone();
                tail.terms.remove(lm);
                let mut out = reduce(&tail, &others);
                out.add_term(lm.clone(), lc.clone());
                out
            })
            .collect()
    }

    pub fn leads(&self) -> Vec<Mono> {
        self.polys.iter().map(|p| p.lead_mono().clone()).collect()
    }
}

/// Buchberger with the coprime and chain criteria and the normal selection
/// strategy. Pairs sharing the smallest lcm degree are reduced in parallel
/// against a snapshot of the basis; results are merged in a fixed order.
pub fn buchberger(input: &[Poly], order: &TermOrder, limits: Limits) -> Result<GroebnerBasis> {
    let mut basis: Vec<Poly> = input
        .iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .map(Poly::make_monic)
        .collect();
    let input_size = basis.len();
    let mut queue: BTreeSet<(Mono, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut skipped = 0usize;
    let mut reduced_count = 0usize;

    let add_pairs = |basis: &[Poly],
                     j: usize,
                     queue: &mut BTreeSet<(Mono, usize, usize)>,
                     pending: &mut HashSet<(usize, usize)>,
                     skipped: &mut usize| {
        for i in 0..j {
            let (a, b) = (basis[i].lead_mono(), basis[j].lead_mono());
            if a.coprime(b) {
                *skipped += 1;
            } else {
                queue.insert((order.lcm(a, b), i, j));
                pending.insert((i, j));
            }
        }
    };
    for j in 0..basis.len() {
        add_pairs(&basis, j, &mut queue, &mut pending, &mut skipped);
    }

    while let Some(first) = queue.first().cloned() {
        let level = first.0 .0[..2].to_vec();
        let mut batch = Vec::new();
        while let Some(entry) = queue.first() {
            if entry.0 .0[..2] != level[..] {
                break;
            }
            let (l, i, j) = queue.pop_first().expect("nonempty");
            pending.remove(&(i, j));
            let key = |a: usize, b: usize| (a.min(b), a.max(b));
            let chained = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lead_mono().divides(&l)
                    && !pending.contains(&key(i, k))
                    && !pending.contains(&key(j, k))
            });
            if chained {
                skipped += 1;
            } else {
                batch.push((i, j));
            }
        }
        reduced_count += batch.len();
        if reduced_count > limits.max_pairs {
            return Err(Error::ResourceLimit(format!("more than {} S-pairs", limits.max_pairs)));
        }
        let snapshot = &basis;
        let remainders: Vec<Poly> = batch
            .par_iter()
            .map(|&(i, j)| reduce(&s_polynomial(order, &snapshot[i], &snapshot[j]), snapshot))
            .collect();
        for r in remainders {
            if r.is_zero() {
                continue;
            }
            let r = reduce(&r, &basis);
            if r.is_zero() {
                continue;
            }
            basis.push(r.make_monic());
            if basis.len() > limits.max_basis {
                return Err(Error::ResourceLimit(format!(
                    "basis exceeds {} elements",
                    limits.max_basis
                )));
            }
            add_pairs(&basis, basis.len() - 1, &mut queue, &mut pending, &mut skipped);
        }
    }
    let new_elements = basis.len() - input_size;
    Ok(GroebnerBasis {
        polys: basis,
        input_size,
        new_elements,
        pairs_reduced: reduced_count,
        pairs_skipped: skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialCount {
    Finite(BigUint),
    Infinite,
}

impl fmt::Display for MonomialCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialCount::Finite(c) => write!(f, "{c}"),
            MonomialCount::Infinite => f.write_str("infinite"),
        }
    }
}

/// Monomials divisible by no lead, or `None` when there are infinitely many
/// (some variable has no pure power among the leads).
pub fn standard_monomials(leads: &[Mono], order: &TermOrder) -> Option<Vec<Mono>> {
    let nv = order.nvars();
    let bounded = (0..nv).all(|k| {
        leads
            .iter()
            .any(|m| m.exponent(k) > 0 && (0..nv).all(|v| v == k || m.exponent(v) == 0))
    });
    if !bounded {
        return None;
    }
    let standard = |m: &Mono| !leads.iter().any(|l| l.divides(m));
    let mut out = Vec::new();
    let mut level: BTreeSet<Mono> = BTreeSet::new();
    let one = order.one();
    if standard(&one) {
        level.insert(one);
    }
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for m in &level {
            for k in 0..nv {
                let cand = m.mul(&order.var(k));
                if standard(&cand) {
                    next.insert(cand);
                }
            }
        }
        out.extend(std::mem::replace(&mut level, next));
    }
    Some(out)
}

pub fn standard_monomial_count(leads: &[Mono], order: &TermOrder) -> MonomialCount {
    match standard_monomials(leads, order) {
        Some(v) => MonomialCount::Finite(BigUint::from(v.len())),
        None => MonomialCount::Infinite,
    }
}

/// The defining relations of M*(n), one per violating pair of generators,
/// as `g·h - rhs`. With `deformed`, `S_i²` becomes `S_i² - S_i`.
pub fn relations(n: usize, order: &TermOrder, deformed: bool) -> Result<Vec<Poly>> {
    let gens = Generator::all(n);
    let mut out = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        for h in &gens[k..] {
            let Some(rhs) = rewrite_pair(g, h, n) else { continue };
            let mut rel = RingElt::from_monomial(n, Monomial::new(vec![*g, *h])).sub(&rhs)?;
            if deformed && g == h && matches!(g, Generator::Simple(_)) {
                rel.add_term(Monomial::new(vec![*g]), -BigInt::one());
            }
            out.push(order.poly_from_elt(&rel)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroebnerReport {
    pub n: usize,
    pub deformed: bool,
    pub input_size: usize,
    pub input_is_groebner: bool,
    pub new_elements: usize,
    pub reduced_basis_size: usize,
    pub pairs_reduced: usize,
    pub pairs_skipped: usize,
    pub dimension: String,
    pub expected_dimension: String,
    /// Standard monomials coincide with the natural basis (undeformed only
    /// meaningful; reported for both).
    pub standard_equals_natural: bool,
    pub elapsed_ms: u128,
}

impl GroebnerReport {
    pub fn passed(&self) -> bool {
        let dim_ok = self.dimension == self.expected_dimension;
        if self.deformed {
            dim_ok
        } else {
            dim_ok && self.input_is_groebner && self.standard_equals_natural
        }
    }
}

fn run_check(n: usize, deformed: bool, limits: Limits) -> Result<GroebnerReport> {
    let start = Instant::now();
    let order = TermOrder::heights(n);
    let rels = relations(n, &order, deformed)?;
    let input_is_groebner = is_groebner(&rels, &order);
    let gb = buchberger(&rels, &order, limits)?;
    let reduced = gb.reduced();
    let leads: Vec<Mono> = reduced.iter().map(|p| p.lead_mono().clone()).collect();
    let std = standard_monomials(&leads, &order);
    let dimension = match &std {
        Some(v) => v.len().to_string(),
        None => MonomialCount::Infinite.to_string(),
    };
    let standard_equals_natural = std.as_ref().is_some_and(|v| {
        let ours: BTreeSet<Monomial> = v.iter().map(|m| order.to_monomial(m)).collect();
        let natural: BTreeSet<Monomial> = crate::mring::natural_basis(n, None).into_iter().collect();
        ours == natural
    });
    Ok(GroebnerReport {
        n,
        deformed,
        input_size: gb.input_size,
        input_is_groebner,
        new_elements: gb.new_elements,
        reduced_basis_size: reduced.len(),
        pairs_reduced: gb.pairs_reduced,
        pairs_skipped: gb.pairs_skipped,
        dimension,
        expected_dimension: catalan(n as u64 + 1).to_string(),
        standard_equals_natural,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// The relations of M*(n) form a Gröbner basis whose standard monomials
/// are exactly the natural monomials.
pub fn groebner_check(n: usize, limits: Limits) -> Result<GroebnerReport> {
    run_check(n, false, limits)
}

/// The deformed ring, with `S_i² = S_i`: Gröbner basis and quotient
/// dimension, compared with `c_{n+1}`.
pub fn deformation_check(n: usize, limits: Limits) -> Result<GroebnerReport> {
    run_check(n, true, limits)
}
