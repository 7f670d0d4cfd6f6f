//! The ring map `psi: M*(n) -> H*` and its certification.
//!
//! `psi(S_i) = T_{-i}` and `psi(S_α) = Σ_{i∈α} T_{-i} - Σ_{α⊆β} T_β`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::combinat::{catalan, positive_roots, Root};
use crate::error::Result;
use crate::exactla::EchelonBasis;
use crate::hring::{eliminate_linear, HPoly, HQuotient, TVar};
use crate::mring::{natural_basis, rewrite_pair, Generator, Monomial, RingElt};

pub fn psi(g: &Generator, n: usize) -> HPoly {
    match g {
        Generator::Simple(i) => HPoly::neg(n, *i),
        Generator::Root(a) => {
            let mut p = HPoly::zero(n);
            for i in a.lo..=a.hi {
                p = p.plus(&HPoly::neg(n, i));
            }
            for b in positive_roots(n).into_iter().filter(|b| a.is_subset(b)) {
                p = p.minus(&HPoly::pos(n, b));
            }
            p
        }
    }
}

/// `psi` of an arbitrary element, fully expanded (no reduction).
pub fn psi_elt(e: &RingElt) -> HPoly {
    let n = e.n();
    let mut out = HPoly::zero(n);
    for (m, c) in e.terms() {
        let img = m.gens().iter().fold(HPoly::one(n), |acc, g| acc.mul(&psi(g, n)));
        out.add_scaled(&img, c);
    }
    out
}

/// `psi` of a monomial after elimination, with incompatible monomials dropped
/// at every step; congruent to `psi(m)` modulo the monomial ideal.
pub fn psi_monomial_reduced(m: &Monomial, hq: &HQuotient) -> Result<HPoly> {
    let n = hq.n();
    let mut acc = HPoly::one(n);
    for g in m.gens() {
        acc = hq.mul(&acc, &eliminate_linear(&psi(g, n)))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationInstance {
    pub relation: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MorphismReport {
    pub n: usize,
    pub instances: Vec<RelationInstance>,
    pub passed: bool,
}

/// Every defining relation `g·h - rhs(g,h)` of M*(n) maps to zero in the
/// degree-2 piece of H*.
pub fn verify_psi_morphism(n: usize) -> Result<MorphismReport> {
    let hq = HQuotient::new(n);
    let gens = Generator::all(n);
    let mut instances = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        for h in &gens[k..] {
            let Some(rhs) = rewrite_pair(g, h, n) else { continue };
            let lhs = RingElt::from_monomial(n, Monomial::new(vec![*g, *h]));
            let rel = lhs.sub(&rhs)?;
            let vanishes = hq.is_zero(&psi_elt(&rel), 2)?;
            instances.push(RelationInstance {
                relation: format!("{g}*{h} = {rhs}"),
                vanishes,
            });
        }
    }
    let passed = instances.iter().all(|i| i.vanishes);
    Ok(MorphismReport { n, instances, passed })
}

/// Preimage of `Σ_{γ⊆β} T_β`: `S_i` for `γ = [i,i]`, else `Σ_{i∈γ} S_i - S_γ`.
fn upper_sum_preimage(n: usize, lo: usize, hi: usize) -> RingElt {
    if lo == 0 || hi > n {
        return RingElt::zero(n);
    }
    let mut e = RingElt::zero(n);
    for i in lo..=hi {
        e.add_term(Monomial::new(vec![Generator::Simple(i)]), BigInt::one());
    }
    if lo < hi {
        e.add_term(Monomial::new(vec![Generator::Root(Root::of(lo, hi))]), -BigInt::one());
    }
    e
}

/// An element of M*(n) whose image is `T_α`, by inclusion–exclusion over the
/// intervals containing `α`.
pub fn t_in_image(a: &Root, n: usize) -> RingElt {
    let mut out = RingElt::zero(n);
    for (dl, dh, sign) in [(0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 1)] {
        let term = upper_sum_preimage(n, a.lo - dl, a.hi + dh);
        out.add_scaled(&term, &BigInt::from(sign));
    }
    out
}

/// Whether `psi(t_in_image(α)) = T_α` in degree 1, for every positive root.
pub fn verify_surjectivity_certificates(n: usize) -> Result<Vec<(Root, bool)>> {
    let hq = HQuotient::new(n);
    positive_roots(n)
        .into_iter()
        .map(|a| {
            let diff = psi_elt(&t_in_image(&a, n)).minus(&HPoly::pos(n, a));
            Ok((a, hq.is_zero(&diff, 1)?))
        })
        .collect()
}

/// Degree-one change of basis: for each generator, its coordinates on the
/// basis `(T_β)` of positive roots (in `positive_roots` order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChangeOfBasis {
    pub n: usize,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<i64>)>,
}

/// The closed formulas `S_i = Σ_{i∈β} T_β` and
/// `S_α = Σ_{α⊆β} (#α-1) T_β + Σ_{α⊄β} #(α∩β) T_β`.
pub fn change_of_basis(n: usize) -> ChangeOfBasis {
    let roots = positive_roots(n);
    let rows = Generator::all(n)
        .into_iter()
        .map(|g| {
            let coords = roots
                .iter()
                .map(|b| match g {
                    Generator::Simple(i) => i64::from(b.contains(i)),
                    Generator::Root(a) if a.is_subset(b) => a.len() as i64 - 1,
                    Generator::Root(a) => a.intersection(b).map_or(0, |r| r.len() as i64),
                })
                .collect();
            (g.to_string(), coords)
        })
        .collect();
    ChangeOfBasis {
        n,
        columns: roots.iter().map(|r| r.to_string()).collect(),
        rows,
    }
}

/// The same matrix computed as `eliminate_linear(psi(g))`.
pub fn change_of_basis_via_psi(n: usize) -> ChangeOfBasis {
    let roots = positive_roots(n);
    let rows = Generator::all(n)
        .into_iter()
        .map(|g| {
            let p = eliminate_linear(&psi(&g, n));
            let coords = roots
                .iter()
                .map(|b| {
                    let m = crate::hring::HMono::new(vec![TVar::Pos(*b)]);
                    i64::try_from(p.coeff(&m)).expect("small coefficient")
                })
                .collect();
            (g.to_string(), coords)
        })
        .collect();
    ChangeOfBasis {
        n,
        columns: roots.iter().map(|r| r.to_string()).collect(),
        rows,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub n: usize,
    /// Per degree: number of natural basis elements.
    pub basis_counts: Vec<usize>,
    /// Per degree: rank of the images of the natural basis.
    pub image_ranks: Vec<usize>,
    /// Per degree: dimension of the graded piece of H*.
    pub quotient_ranks: Vec<usize>,
    pub total: usize,
    pub passed: bool,
}

/// The images of the natural basis are independent in every degree and the
/// graded dimensions agree, so `psi` is bijective.
pub fn verify_iso_small(n: usize) -> Result<IsoReport> {
    let hq = HQuotient::new(n);
    let mut basis_counts = Vec::new();
    let mut image_ranks = Vec::new();
    let mut quotient_ranks = Vec::new();
    for d in 0..=n {
        let slice = hq.slice(d)?;
        let basis = natural_basis(n, Some(d));
        let mut images = EchelonBasis::new(slice.monomials.len());
        for m in &basis {
            let p = psi_monomial_reduced(m, &hq)?;
            images.insert(hq.residue(&p, d)?);
        }
        basis_counts.push(basis.len());
        image_ranks.push(images.rank());
        quotient_ranks.push(slice.dim());
    }
    let total: usize = image_ranks.iter().sum();
    let passed =
        basis_counts == image_ranks && image_ranks == quotient_ranks && BigUint::from(total) == catalan(n as u64 + 1);
    Ok(IsoReport {
        n,
        basis_counts,
        image_ranks,
        quotient_ranks,
        total,
        passed,
    })
}

/// Whether `psi(e)` vanishes in the degree-`degree` piece of H*.
pub fn psi_vanishes(e: &RingElt, degree: usize, hq: &HQuotient) -> Result<bool> {
    let p = psi_elt(e);
    if p.is_zero() {
        return Ok(true);
    }
    hq.is_zero(&p, degree)
}
