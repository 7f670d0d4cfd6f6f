//! Named verification suites and their JSON reports.
//!
//! Each check has a size cap; above it the check is reported as skipped
//! rather than run. `QCOHO_MAX_N` bounds the `n` accepted by any suite and
//! `QCOHO_TIME_BUDGET_SECS` skips checks once the budget is spent.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{catalan, degree_counts, Codes};
use crate::error::{Error, Result};
use crate::fan::{betti_u64, build_fan, max_cone_count_is_catalan, verify_complete, verify_smooth, MAX_FAN_N};
use crate::hring::{adjacent_simples_relation, end_relation, end_relation_instances, quotient_ranks, HQuotient};
use crate::mring::{natural_basis, normal_form_with, Generator, MRing, Monomial, RingElt};
use crate::{frobenius, groebner, iso, parabolic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub elapsed_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    /// Every check ran and passed.
    Pass,
    /// Some check failed.
    Fail,
    /// Nothing failed but some checks were skipped by a cap.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub suite: String,
    pub status: Overall,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn new(n: usize, suite: Suite, checks: Vec<Check>) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Overall::Fail
        } else if checks.iter().any(|c| c.status == Status::Skipped) {
            Overall::Partial
        } else {
            Overall::Pass
        };
        VerificationReport {
            n,
            suite: suite.to_string(),
            status,
            checks,
        }
    }

    /// Set every elapsed time to zero so that reports are byte-identical
    /// across runs.
    pub fn normalize_timing(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = 0;
        }
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report is serializable");
        serde_json::to_string_pretty(&value).expect("value is serializable")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    All,
    Fan,
    Mring,
    Iso,
    Frobenius,
    Groebner,
    Deformation,
    Parabolic,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::All,
        Suite::Fan,
        Suite::Mring,
        Suite::Iso,
        Suite::Frobenius,
        Suite::Groebner,
        Suite::Deformation,
        Suite::Parabolic,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Fan => "fan",
            Suite::Mring => "mring",
            Suite::Iso => "iso",
            Suite::Frobenius => "frobenius",
            Suite::Groebner => "groebner",
            Suite::Deformation => "deformation",
            Suite::Parabolic => "parabolic",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: format!("unknown suite {s:?}"),
            })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_n: usize,
    pub time_budget: Option<Duration>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_n: 12,
            time_budget: None,
        }
    }
}

impl Caps {
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("QCOHO_MAX_N") {
            caps.max_n = v
                .trim()
                .parse()
                .map_err(|_| Error::ResourceLimit(format!("QCOHO_MAX_N={v:?} is not a number")))?;
        }
        if let Ok(v) = std::env::var("QCOHO_TIME_BUDGET_SECS") {
            let secs: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::ResourceLimit(format!("QCOHO_TIME_BUDGET_SECS={v:?} is not a number")))?;
            caps.time_budget = Some(Duration::from_secs(secs));
        }
        Ok(caps)
    }
}

/// Outcome of one check body: whether it held, and the compared values.
struct Outcome {
    ok: bool,
    expected: String,
    actual: String,
}

fn outcome(ok: bool, expected: impl ToString, actual: impl ToString) -> Outcome {
    Outcome {
        ok,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn equal<T: PartialEq + fmt::Debug>(expected: T, actual: T) -> Outcome {
    Outcome {
        ok: expected == actual,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}

fn failures(list: &[String]) -> Outcome {
    let actual = match list.len() {
        0 => "no failures".to_string(),
        k => format!("{k} failures, first: {}", list[0]),
    };
    outcome(list.is_empty(), "no failures", actual)
}

type Body = Box<dyn Fn(usize) -> Result<Outcome> + Sync>;

struct CheckDef {
    name: &'static str,
    min_n: usize,
    max_n: usize,
    body: Body,
}

fn def(
    name: &'static str,
    min_n: usize,
    max_n: usize,
    body: impl Fn(usize) -> Result<Outcome> + Sync + 'static,
) -> CheckDef {
    CheckDef {
        name,
        min_n,
        max_n,
        body: Box::new(body),
    }
}

const CONFLUENCE_SAMPLES: usize = 1000;

fn random_monomial<R: Rng>(rng: &mut R, gens: &[Generator], n: usize) -> Monomial {
    let degree = rng.gen_range(2..=(n + 1).clamp(2, 5));
    Monomial::new((0..degree).map(|_| gens[rng.gen_range(0..gens.len())]).collect())
}

/// Memoized first-violation normal forms against a randomized strategy.
pub fn confluence_mismatches(n: usize, samples: usize, seed: u64) -> Vec<String> {
    let ring = MRing::new(n);
    let gens = Generator::all(n);
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..samples {
        let m = random_monomial(&mut rng, &gens, n);
        let mut chooser = rand::rngs::StdRng::seed_from_u64(rng.gen());
        let a = ring.nf_monomial(&m);
        let b = normal_form_with(&RingElt::from_monomial(n, m.clone()), |k| chooser.gen_range(0..k));
        if a != b {
            out.push(format!("{m}: {a} vs {b}"));
        }
    }
    out
}

/// Pairs of natural monomials whose product has a normal form of larger
/// height than the sum of their heights.
pub fn height_filtration_violations(n: usize) -> Vec<String> {
    let ring = MRing::new(n);
    let basis = natural_basis(n, None);
    let mut out: Vec<String> = basis
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, u)| {
            let ring = &ring;
            basis[k..].iter().filter_map(move |v| {
                let nf = ring.nf_monomial(&u.mul(v));
                (nf.height() > u.height() + v.height()).then(|| format!("{u} * {v}"))
            })
        })
        .collect();
    out.sort();
    out
}

fn fan_defs() -> Vec<CheckDef> {
    vec![
        def("fan.smooth", 1, MAX_FAN_N.min(8), |n| {
            let c = verify_smooth(&build_fan(n)?);
            Ok(failures(&c.violations))
        }),
        def("fan.complete", 1, MAX_FAN_N.min(8), |n| {
            let c = verify_complete(&build_fan(n)?);
            Ok(failures(&c.violations))
        }),
        def("fan.max_cones_catalan", 1, MAX_FAN_N.min(8), |n| {
            let f = build_fan(n)?;
            Ok(outcome(
                max_cone_count_is_catalan(&f),
                catalan(n as u64 + 1),
                f.max_cones.len(),
            ))
        }),
        def("fan.betti_equals_uset_degrees", 1, MAX_FAN_N.min(8), |n| {
            Ok(equal(degree_counts(n), betti_u64(&build_fan(n)?)))
        }),
        def("fan.betti_equals_quotient_ranks", 1, 6, |n| {
            let ranks: Vec<u64> = quotient_ranks(n)?.into_iter().map(|r| r as u64).collect();
            Ok(equal(betti_u64(&build_fan(n)?), ranks))
        }),
    ]
}

fn mring_defs() -> Vec<CheckDef> {
    vec![
        def("mring.catalan_counts", 1, 12, |n| {
            let codes = Codes::new(n).count();
            let usets: u64 = degree_counts(n).iter().sum();
            let want = catalan(n as u64 + 1);
            let ok = BigUint::from(codes) == want && BigUint::from(usets) == want;
            Ok(outcome(
                ok,
                format!("{want} codes and U-sets"),
                format!("{codes} codes, {usets} U-sets"),
            ))
        }),
        def("mring.confluence", 1, 8, |n| {
            Ok(failures(&confluence_mismatches(
                n,
                CONFLUENCE_SAMPLES,
                0x5eed + n as u64,
            )))
        }),
        def("mring.height_filtration", 1, 7, |n| {
            Ok(failures(&height_filtration_violations(n)))
        }),
        def("mring.derived_relations", 2, 8, |n| {
            let h = HQuotient::new(n);
            let mut bad = Vec::new();
            for i in 1..n {
                if !h.is_zero(&adjacent_simples_relation(n, i), 2)? {
                    bad.push(format!("adjacent simples {i}"));
                }
            }
            for (i, a) in end_relation_instances(n) {
                if !h.is_zero(&end_relation(n, i, a), 2)? {
                    bad.push(format!("end relation {i}, {a}"));
                }
            }
            Ok(failures(&bad))
        }),
    ]
}

fn iso_defs() -> Vec<CheckDef> {
    vec![
        def("iso.morphism", 1, 8, |n| {
            let r = iso::verify_psi_morphism(n)?;
            let bad: Vec<String> = r
                .instances
                .iter()
                .filter(|i| !i.vanishes)
                .map(|i| i.relation.clone())
                .collect();
            let mut o = failures(&bad);
            o.actual = format!("{} relations checked, {}", r.instances.len(), o.actual);
            Ok(o)
        }),
        def("iso.surjectivity_certificates", 1, 8, |n| {
            let bad: Vec<String> = iso::verify_surjectivity_certificates(n)?
                .into_iter()
                .filter(|(_, ok)| !ok)
                .map(|(a, _)| a.to_string())
                .collect();
            Ok(failures(&bad))
        }),
        def("iso.change_of_basis", 1, 8, |n| {
            let ok = iso::change_of_basis(n) == iso::change_of_basis_via_psi(n);
            Ok(outcome(
                ok,
                "closed formula",
                if ok { "closed formula" } else { "mismatch" },
            ))
        }),
        def("iso.bijective", 1, 6, |n| {
            let r = iso::verify_iso_small(n)?;
            Ok(outcome(
                r.passed,
                format!("ranks {:?}, total {}", r.basis_counts, catalan(n as u64 + 1)),
                format!("ranks {:?}, total {}", r.image_ranks, r.total),
            ))
        }),
    ]
}

fn frobenius_defs() -> Vec<CheckDef> {
    vec![
        def("frobenius.pairing_formulas", 1, 8, |n| {
            Ok(failures(&frobenius::verify_pairing_proposition(n)?.failures))
        }),
        def("frobenius.cutting_lemmas", 1, 8, |n| {
            Ok(failures(&frobenius::verify_cutting_lemmas(n).failures))
        }),
        def("frobenius.unimodular", 1, 7, |n| {
            let ring = MRing::new(n);
            let dets = (0..=n)
                .map(|k| frobenius::frobenius_matrix(&ring, k).map(|m| m.det))
                .collect::<Result<Vec<BigInt>>>()?;
            let ok = dets.iter().all(|d| d == &BigInt::from(1) || d == &BigInt::from(-1));
            let shown: Vec<String> = dets.iter().map(|d| d.to_string()).collect();
            Ok(outcome(ok, "all determinants ±1", format!("[{}]", shown.join(", "))))
        }),
        def("frobenius.dual_basis", 1, 8, |n| {
            Ok(failures(&frobenius::verify_dual_basis(n)?.failures))
        }),
        def("frobenius.degree_orthogonal", 1, 7, |n| {
            let ok = frobenius::degree_orthogonal(&MRing::new(n));
            Ok(outcome(ok, true, ok))
        }),
    ]
}

fn groebner_report(r: &groebner::GroebnerReport) -> String {
    format!(
        "dimension {}, input {} relations, gb {}, new {}, S-pairs reduced {}, skipped {}",
        r.dimension, r.input_size, r.input_is_groebner, r.new_elements, r.pairs_reduced, r.pairs_skipped
    )
}

fn groebner_defs() -> Vec<CheckDef> {
    vec![def("groebner.quadratic_basis", 1, 8, |n| {
        let r = groebner::groebner_check(n, groebner::Limits::default())?;
        let expected = format!("dimension {}, gb true, standard = natural", r.expected_dimension);
        let actual = format!(
            "{}, standard = natural: {}",
            groebner_report(&r),
            r.standard_equals_natural
        );
        Ok(outcome(r.passed(), expected, actual))
    })]
}

fn deformation_defs() -> Vec<CheckDef> {
    vec![def("deformation.dimension", 1, 8, |n| {
        let r = groebner::deformation_check(n, groebner::Limits::default())?;
        Ok(outcome(
            r.passed(),
            format!("dimension {}", r.expected_dimension),
            groebner_report(&r),
        ))
    })]
}

fn parabolic_defs() -> Vec<CheckDef> {
    vec![
        def("parabolic.injective", 2, 8, |n| {
            let mut bad = Vec::new();
            for s in parabolic::Split::all(n) {
                let c = parabolic::check_split(s, false)?;
                if !(c.injective && c.natural_images && !c.surjective) {
                    bad.push(format!("{}+{}", s.n1, s.n2));
                }
            }
            Ok(failures(&bad))
        }),
        def("parabolic.morphism", 2, 8, |n| {
            let bad: Vec<String> = parabolic::Split::all(n)
                .into_iter()
                .flat_map(parabolic::morphism_failures)
                .collect();
            Ok(failures(&bad))
        }),
        def("parabolic.unreachable_census", 2, 8, |n| {
            let c = parabolic::census_unreachable(n)?;
            Ok(outcome(
                c.passed(),
                format!("{} unreachable including S(1,{n})", c.expected),
                format!("{} unreachable", c.unreachable),
            ))
        }),
        def("parabolic.census_by_span", 2, 8, |n| {
            let a = parabolic::census_unreachable(n)?;
            let b = parabolic::census_by_span(n)?;
            let w = |c: &parabolic::Census| c.witnesses.iter().cloned().collect::<BTreeSet<_>>();
            let same = w(&a) == w(&b);
            let actual = format!(
                "{} unreachable by span, witnesses {}",
                b.unreachable,
                if same { "agree" } else { "differ" }
            );
            Ok(outcome(
                same,
                format!("{} unreachable by the cut rule", a.unreachable),
                actual,
            ))
        }),
    ]
}

fn defs_for(suite: Suite) -> Vec<CheckDef> {
    match suite {
        Suite::All => [
            Suite::Fan,
            Suite::Mring,
            Suite::Iso,
            Suite::Frobenius,
            Suite::Groebner,
            Suite::Deformation,
            Suite::Parabolic,
        ]
        .into_iter()
        .flat_map(defs_for)
        .collect(),
        Suite::Fan => fan_defs(),
        Suite::Mring => mring_defs(),
        Suite::Iso => iso_defs(),
        Suite::Frobenius => frobenius_defs(),
        Suite::Groebner => groebner_defs(),
        Suite::Deformation => deformation_defs(),
        Suite::Parabolic => parabolic_defs(),
    }
}

/// Run a suite. Checks whose domain excludes `n` are omitted; checks above
/// their size cap, or started after the time budget ran out, are skipped.
pub fn run_suite(n: usize, suite: Suite, caps: Caps) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    if n > caps.max_n {
        return Err(Error::ResourceLimit(format!("n = {n} exceeds the cap {}", caps.max_n)));
    }
    let start = Instant::now();
    let mut checks = Vec::new();
    for s in defs_for(suite).into_iter().filter(|s| n >= s.min_n) {
        let over_budget = caps.time_budget.is_some_and(|b| start.elapsed() > b);
        if n > s.max_n || over_budget {
            let why = if over_budget {
                "time budget spent".to_string()
            } else {
                format!("n > {}", s.max_n)
            };
            checks.push(Check {
                name: s.name.to_string(),
                status: Status::Skipped,
                expected: String::new(),
                actual: why,
                elapsed_ms: 0,
            });
            continue;
        }
        let t = Instant::now();
        let result = (s.body)(n);
        let elapsed_ms = t.elapsed().as_millis() as u64;
        let check = match result {
            Ok(o) => Check {
                name: s.name.to_string(),
                status: if o.ok { Status::Pass } else { Status::Fail },
                expected: o.expected,
                actual: o.actual,
                elapsed_ms,
            },
            Err(Error::ResourceLimit(msg)) => Check {
                name: s.name.to_string(),
                status: Status::Skipped,
                expected: String::new(),
                actual: msg,
                elapsed_ms,
            },
            Err(e) => Check {
                name: s.name.to_string(),
                status: Status::Fail,
                expected: "no error".into(),
                actual: e.to_string(),
                elapsed_ms,
            },
        };
        checks.push(check);
    }
    Ok(VerificationReport::new(n, suite, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_small_n() {
        for n in 1..=3 {
            let r = run_suite(n, Suite::All, Caps::default()).unwrap();
            let bad: Vec<&Check> = r.checks.iter().filter(|c| c.status != Status::Pass).collect();
            assert!(bad.is_empty(), "n={n}: {bad:?}");
            assert_eq!(r.status, Overall::Pass);
        }
    }

    #[test]
    fn caps_and_names() {
        let r = run_suite(9, Suite::Frobenius, Caps::default()).unwrap();
        assert_eq!(r.status, Overall::Partial);
        assert!(r.checks.iter().all(|c| c.status == Status::Skipped));
        let caps = Caps {
            max_n: 4,
            time_budget: None,
        };
        assert!(matches!(run_suite(5, Suite::Fan, caps), Err(Error::ResourceLimit(_))));
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        let r = run_suite(1, Suite::Parabolic, Caps::default()).unwrap();
        assert!(r.checks.is_empty());
    }

    #[test]
    fn report_json_is_sorted_and_stable() {
        let mut a = run_suite(2, Suite::Mring, Caps::default()).unwrap();
        let mut b = run_suite(2, Suite::Mring, Caps::default()).unwrap();
        a.normalize_timing();
        b.normalize_timing();
        let (ja, jb) = (a.to_json(), b.to_json());
        assert_eq!(ja, jb);
        let top = ["\"checks\"", "\"n\"", "\"status\"", "\"suite\""];
        let pos: Vec<usize> = top.iter().map(|k| ja.rfind(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{ja}");
        let inner = ["\"actual\"", "\"elapsed_ms\"", "\"expected\"", "\"name\"", "\"status\""];
        let pos: Vec<usize> = inner.iter().map(|k| ja.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{ja}");
        assert!(ja.contains("\"elapsed_ms\": 0"));
    }
}
