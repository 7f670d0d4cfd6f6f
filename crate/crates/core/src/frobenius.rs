//! The Frobenius pairing on M*(n).
//!
//! `⟨x, y⟩` is the coefficient of the top class `S_1···S_n` in the normal
//! form of `xy`. The degree-`(n-1)` elements `S′_ρ` come from dualizing the
//! code of `ρ`, and they form the basis dual to `(T_ρ)` in degree one.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{code_from_uset, positive_roots, uset_from_code, Root, USet};
use crate::error::{Error, Result};
use crate::exactla::bareiss;
use crate::iso::change_of_basis;
use crate::mring::{natural_basis, Generator, MRing, Monomial, RingElt};

pub fn top_class(n: usize) -> Monomial {
    Monomial::new((1..=n).map(Generator::Simple).collect())
}

pub fn pairing(ring: &MRing, x: &RingElt, y: &RingElt) -> Result<BigInt> {
    let top = top_class(ring.n());
    Ok(ring.multiply(x, y)?.coeff(&top))
}

fn pair_monomials(ring: &MRing, u: &Monomial, v: &Monomial) -> BigInt {
    ring.nf_monomial(&u.mul(v)).coeff(&top_class(ring.n()))
}

fn singleton(rho: &Root) -> USet {
    let mut simples = std::collections::BTreeSet::new();
    let mut roots = std::collections::BTreeSet::new();
    if rho.is_simple() {
        simples.insert(rho.lo);
    } else {
        roots.insert(*rho);
    }
    USet::new(simples, roots).expect("a single generator is a U-set")
}

pub fn s_prime(rho: &Root, n: usize) -> Result<Monomial> {
    if rho.hi > n {
        return Err(Error::IndexOutOfRange { index: rho.hi, n });
    }
    let code = code_from_uset(&singleton(rho), n)?;
    Ok(Monomial::from_uset(&uset_from_code(&code.dual())))
}

fn generator_of(rho: &Root) -> Generator {
    if rho.is_simple() {
        Generator::Simple(rho.lo)
    } else {
        Generator::Root(*rho)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PairingCheck {
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PairingCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, what: impl FnOnce() -> String, expected: &BigInt, actual: &BigInt) {
        self.checked += 1;
        if expected != actual {
            self.failures
                .push(format!("{}: expected {expected}, got {actual}", what()));
        }
    }
}

/// The four closed formulas for `⟨S_x, S′_ρ⟩` with `x, ρ` running over
/// simples and non-simple roots.
pub fn verify_pairing_proposition(n: usize) -> Result<PairingCheck> {
    let ring = MRing::new(n);
    let roots = positive_roots(n);
    let primes = roots.iter().map(|r| s_prime(r, n)).collect::<Result<Vec<_>>>()?;
    let mut report = PairingCheck {
        n,
        ..Default::default()
    };
    for (alpha, sp) in roots.iter().zip(&primes) {
        for beta in &roots {
            let lhs = Monomial::new(vec![generator_of(beta)]);
            let actual = pair_monomials(&ring, &lhs, sp);
            let expected = match (beta.is_simple(), alpha.is_simple()) {
                (true, true) => i64::from(beta == alpha),
                (false, true) => i64::from(beta.contains(alpha.lo)),
                (true, false) => i64::from(alpha.contains(beta.lo)),
                (false, false) if beta.is_subset(alpha) => beta.len() as i64 - 1,
                (false, false) => alpha.intersection(beta).map_or(0, |r| r.len() as i64),
            };
            report.record(|| format!("<{lhs}, S'{alpha}>"), &BigInt::from(expected), &actual);
        }
    }
    Ok(report)
}

fn chain(i: usize, j: usize) -> Vec<Generator> {
    (i..j).map(|k| Generator::root(k, k + 1)).collect()
}

/// For all `i < j`: `S_{i,j}·S_{i,i+1}···S_{j-1,j} = (j-i)·S_i···S_j` and
/// `S_{i,j}·S_i···S_j = 0`.
pub fn verify_cutting_lemmas(n: usize) -> PairingCheck {
    let ring = MRing::new(n);
    let mut report = PairingCheck {
        n,
        ..Default::default()
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let simples = Monomial::new((i..=j).map(Generator::Simple).collect());

            let mut gens = chain(i, j);
            gens.push(Generator::root(i, j));
            let m = Monomial::new(gens);
            let expected = RingElt::from_monomial(n, simples.clone()).scale(&BigInt::from(j - i));
            let actual = ring.nf_monomial(&m);
            report.checked += 1;
            if actual != expected {
                report.failures.push(format!("{m} = {actual}, expected {expected}"));
            }

            let m = simples.mul(&Monomial::new(vec![Generator::root(i, j)]));
            let actual = ring.nf_monomial(&m);
            report.checked += 1;
            if !actual.is_zero() {
                report.failures.push(format!("{m} = {actual}, expected 0"));
            }
        }
    }
    report
}

/// Pairing matrix between the degree-`k` and degree-`(n-k)` natural bases,
/// both listed in canonical print order. Entries are exported as decimal
/// strings through [`FrobeniusMatrix::entries_as_strings`].
#[derive(Clone, Debug)]
pub struct FrobeniusMatrix {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<BigInt>>,
    pub det: BigInt,
}

impl FrobeniusMatrix {
    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn entries_as_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

fn print_sorted(n: usize, k: usize) -> Vec<Monomial> {
    let mut basis = natural_basis(n, Some(k));
    basis.sort_by(|a, b| a.print_key().cmp(&b.print_key()));
    basis
}

pub fn frobenius_matrix(ring: &MRing, k: usize) -> Result<FrobeniusMatrix> {
    let n = ring.n();
    if k > n {
        return Err(Error::Dimension(format!("degree {k} exceeds {n}")));
    }
    let rows = print_sorted(n, k);
    let cols = print_sorted(n, n - k);
    if rows.len() != cols.len() {
        return Err(Error::NotSquare {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let entries: Vec<Vec<BigInt>> = rows
        .par_iter()
        .map(|u| cols.iter().map(|v| pair_monomials(ring, u, v)).collect())
        .collect();
    let det = if entries.is_empty() {
        BigInt::one()
    } else {
        bareiss(entries.clone())
    };
    Ok(FrobeniusMatrix {
        n,
        k,
        rows: rows.iter().map(|m| m.to_string()).collect(),
        cols: cols.iter().map(|m| m.to_string()).collect(),
        entries,
        det,
    })
}

/// For every generator `g`, the row `(⟨g, S′_β⟩)_β` equals the row of `g` in
/// the degree-one change of basis to `(T_β)`.
pub fn verify_dual_basis(n: usize) -> Result<PairingCheck> {
    let ring = MRing::new(n);
    let roots = positive_roots(n);
    let primes = roots.iter().map(|r| s_prime(r, n)).collect::<Result<Vec<_>>>()?;
    let cob = change_of_basis(n);
    let mut report = PairingCheck {
        n,
        ..Default::default()
    };
    for (g, (label, row)) in Generator::all(n).into_iter().zip(&cob.rows) {
        let lhs = Monomial::new(vec![g]);
        for ((beta, sp), want) in roots.iter().zip(&primes).zip(row) {
            let actual = pair_monomials(&ring, &lhs, sp);
            report.record(|| format!("<{label}, S'{beta}>"), &BigInt::from(*want), &actual);
        }
    }
    Ok(report)
}

/// Whether `⟨x, y⟩` vanishes whenever the degrees do not add up to `n`,
/// over all pairs of natural basis elements.
pub fn degree_orthogonal(ring: &MRing) -> bool {
    let n = ring.n();
    let basis = natural_basis(n, None);
    basis.par_iter().all(|u| {
        basis
            .iter()
            .filter(|v| u.degree() + v.degree() != n)
            .all(|v| pair_monomials(ring, u, v).is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(m: &FrobeniusMatrix) -> Vec<Vec<String>> {
        m.entries_as_strings()
    }

    #[test]
    fn top_and_pairing() {
        assert_eq!(top_class(1).to_string(), "S(1)");
        assert_eq!(top_class(3).to_string(), "S(1)*S(2)*S(3)");
        for n in 1..=8 {
            assert_eq!(natural_basis(n, Some(n)), vec![top_class(n)]);
        }
        let r = MRing::new(2);
        assert_eq!(pairing(&r, &r.s(1), &r.s(2)).unwrap(), BigInt::from(1));
        assert_eq!(pairing(&r, &r.s(1), &r.s(1)).unwrap(), BigInt::from(0));
        assert_eq!(pairing(&r, &r.sa(1, 2), &r.sa(1, 2)).unwrap(), BigInt::from(1));
        assert!(pairing(&r, &r.s(1), &MRing::new(3).s(1)).is_err());
    }

    #[test]
    fn s_prime_values() {
        assert_eq!(s_prime(&Root::of(1, 1), 2).unwrap().to_string(), "S(2)");
        assert_eq!(s_prime(&Root::of(1, 2), 2).unwrap().to_string(), "S(1,2)");
        assert_eq!(s_prime(&Root::of(1, 3), 4).unwrap().to_string(), "S(4)*S(1,2)*S(2,3)");
        assert_eq!(s_prime(&Root::of(2, 2), 4).unwrap().to_string(), "S(1)*S(3)*S(4)");
    }

    #[test]
    fn s_prime_closed_form_and_injective() {
        for n in 1..=8 {
            let mut seen = std::collections::BTreeSet::new();
            for rho in positive_roots(n) {
                let sp = s_prime(&rho, n).unwrap();
                assert!(sp.is_natural());
                assert_eq!(sp.degree(), n - 1);
                let mut gens: Vec<Generator> = (1..=n).filter(|k| !rho.contains(*k)).map(Generator::Simple).collect();
                if rho.is_simple() {
                    assert_eq!(sp, Monomial::new(gens));
                } else {
                    gens.extend(chain(rho.lo, rho.hi));
                    assert_eq!(sp, Monomial::new(gens));
                }
                assert!(seen.insert(sp));
            }
        }
    }

    #[test]
    fn proposition_examples() {
        let r = MRing::new(2);
        let sp1 = RingElt::from_monomial(2, s_prime(&Root::of(1, 1), 2).unwrap());
        assert!(pairing(&r, &r.s(2), &sp1).unwrap().is_zero());
        let r = MRing::new(3);
        let sp13 = RingElt::from_monomial(3, s_prime(&Root::of(1, 3), 3).unwrap());
        assert_eq!(pairing(&r, &r.sa(2, 3), &sp13).unwrap(), BigInt::from(1));
        let sp23 = RingElt::from_monomial(3, s_prime(&Root::of(2, 3), 3).unwrap());
        assert_eq!(pairing(&r, &r.sa(1, 2), &sp23).unwrap(), BigInt::from(1));
        for n in 1..=5 {
            let rep = verify_pairing_proposition(n).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn cutting_lemmas() {
        let r = MRing::new(3);
        let m = r.monomial(vec![
            Generator::root(1, 3),
            Generator::root(1, 2),
            Generator::root(2, 3),
        ]);
        assert_eq!(r.normal_form(&m.unwrap()).to_string(), "2*S(1)*S(2)*S(3)");
        let m = r.monomial(vec![Generator::root(1, 2), Generator::root(1, 2)]).unwrap();
        assert_eq!(r.normal_form(&m).to_string(), "S(1)*S(2)");
        let m = r.monomial(vec![Generator::root(1, 2), Generator::Simple(1), Generator::Simple(2)]);
        assert!(r.normal_form(&m.unwrap()).is_zero());
        for n in 1..=6 {
            let rep = verify_cutting_lemmas(n);
            assert!(rep.passed(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn matrices() {
        let m = frobenius_matrix(&MRing::new(2), 1).unwrap();
        assert_eq!(m.rows, ["S(1)", "S(2)", "S(1,2)"]);
        assert_eq!(strings(&m), [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "1"]]);
        assert_eq!(m.det, BigInt::from(1));
        let m = frobenius_matrix(&MRing::new(3), 0).unwrap();
        assert_eq!(strings(&m), [["1"]]);
        for n in 1..=4 {
            let ring = MRing::new(n);
            for k in 0..=n {
                assert!(frobenius_matrix(&ring, k).unwrap().is_unimodular(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn dual_basis_and_orthogonality() {
        for n in 1..=5 {
            let rep = verify_dual_basis(n).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures);
            assert!(degree_orthogonal(&MRing::new(n)));
        }
    }

    #[test]
    fn symmetric_and_bilinear() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 2..=5 {
            let ring = MRing::new(n);
            let basis = natural_basis(n, None);
            let mut random = || {
                let mut e = RingElt::zero(n);
                for _ in 0..4 {
                    let m = basis[rng.gen_range(0..basis.len())].clone();
                    e.add_term(m, BigInt::from(rng.gen_range(-3..=3)));
                }
                e
            };
            for _ in 0..20 {
                let (x, y, z) = (random(), random(), random());
                let xy = pairing(&ring, &x, &y).unwrap();
                assert_eq!(xy, pairing(&ring, &y, &x).unwrap());
                let lhs = pairing(&ring, &x.add(&z).unwrap(), &y).unwrap();
                assert_eq!(lhs, xy + pairing(&ring, &z, &y).unwrap());
            }
        }
    }
}
