//! Roots of type A_n, the compatibility relation, interval calculus, codes
//! and U-sets.
//!
//! A positive root is an interval `[lo, hi]` of `{1, .., n}`; the almost
//! positive roots add the negative simples `-1, .., -n`. Codes are words over
//! `{L, R, LR, V}` and are in bijection with U-sets, the index set of the
//! natural basis of the cohomology ring.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive root `[lo, hi]`, `1 <= lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub lo: usize,
    pub hi: usize,
}

impl Root {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidRoot { lo, hi });
        }
        Ok(Root { lo, hi })
    }

    /// Panics on `lo > hi`; for literals in code and tests.
    pub fn of(lo: usize, hi: usize) -> Self {
        Self::new(lo, hi).expect("invalid root literal")
    }

    pub fn simple(i: usize) -> Self {
        Root::of(i, i)
    }

    pub fn is_simple(&self) -> bool {
        self.lo == self.hi
    }

    /// Number of elements of the interval.
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn is_subset(&self, other: &Root) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// The intersection as an interval, if non-empty.
    pub fn intersection(&self, other: &Root) -> Option<Root> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Root { lo, hi })
    }

    /// `Ra`: the root with its left endpoint removed.
    pub fn right_part(&self) -> Result<Root> {
        self.require_non_simple()?;
        Ok(Root::of(self.lo + 1, self.hi))
    }

    /// `La`: the root with its right endpoint removed.
    pub fn left_part(&self) -> Result<Root> {
        self.require_non_simple()?;
        Ok(Root::of(self.lo, self.hi - 1))
    }

    fn require_non_simple(&self) -> Result<()> {
        if self.is_simple() {
            Err(Error::SimpleRoot(*self))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl FromStr for Root {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax {
            pos: 0,
            msg: format!("expected a root of the form [i,j], got {s:?}"),
        };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        Root::new(lo, hi)
    }
}

/// All positive roots of `[n]`, sorted by `(lo, hi)`.
pub fn positive_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for lo in 1..=n {
        for hi in lo..=n {
            out.push(Root { lo, hi });
        }
    }
    out
}

/// Non-simple positive roots of `[n]`, sorted by `(lo, hi)`.
pub fn nonsimple_roots(n: usize) -> Vec<Root> {
    positive_roots(n).into_iter().filter(|r| !r.is_simple()).collect()
}

/// An element of the almost positive roots: a negative simple or a positive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlmostPositiveRoot {
    NegSimple(usize),
    Pos(Root),
}

impl AlmostPositiveRoot {
    /// Negative simples first, then positive roots by `(lo, hi)`.
    pub fn all(n: usize) -> Vec<AlmostPositiveRoot> {
        (1..=n)
            .map(AlmostPositiveRoot::NegSimple)
            .chain(positive_roots(n).into_iter().map(AlmostPositiveRoot::Pos))
            .collect()
    }
}

impl fmt::Display for AlmostPositiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlmostPositiveRoot::NegSimple(i) => write!(f, "-{i}"),
            AlmostPositiveRoot::Pos(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for AlmostPositiveRoot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('-') {
            let i: usize = rest.parse().map_err(|_| Error::Syntax {
                pos: 1,
                msg: format!("expected a negative simple -i, got {s:?}"),
            })?;
            if i == 0 {
                return Err(Error::IndexOutOfRange { index: 0, n: 0 });
            }
            Ok(AlmostPositiveRoot::NegSimple(i))
        } else {
            t.parse().map(AlmostPositiveRoot::Pos)
        }
    }
}

/// How two positive roots sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// Disjoint, or one strictly inside the other without sharing an endpoint.
    DisjointOrNested,
    /// Overlapping with `size = |a ∩ b|`; `strict` when neither contains the other.
    Overlap { size: usize, strict: bool },
}

pub fn overlap(a: &Root, b: &Root) -> Overlap {
    let fwd = a.lo <= b.lo && b.lo <= a.hi && a.hi <= b.hi;
    let bwd = b.lo <= a.lo && a.lo <= b.hi && b.hi <= a.hi;
    if !(fwd || bwd) {
        return Overlap::DisjointOrNested;
    }
    let size = a.intersection(b).map_or(0, |r| r.len());
    let strict = !a.is_subset(b) && !b.is_subset(a);
    Overlap::Overlap { size, strict }
}

/// The compatibility relation on almost positive roots.
pub fn compatible(a: &AlmostPositiveRoot, b: &AlmostPositiveRoot) -> bool {
    use AlmostPositiveRoot::*;
    match (a, b) {
        (NegSimple(_), NegSimple(_)) => true,
        (NegSimple(i), Pos(r)) | (Pos(r), NegSimple(i)) => !r.contains(*i),
        (Pos(x), Pos(y)) => compatible_roots(x, y),
    }
}

/// Compatibility of two positive roots: false for adjacent roots and for
/// strictly overlapping roots.
pub fn compatible_roots(x: &Root, y: &Root) -> bool {
    match x.intersection(y) {
        None => {
            // disjoint: adjacent iff the union is again an interval
            let adjacent = x.hi + 1 == y.lo || y.hi + 1 == x.lo;
            !adjacent
        }
        Some(_) => x.is_subset(y) || y.is_subset(x),
    }
}

/// The parts of a non-simple root: `(min, max, Ra, La)`.
pub fn root_parts(a: &Root) -> Result<(usize, usize, Root, Root)> {
    Ok((a.lo, a.hi, a.right_part()?, a.left_part()?))
}

/// `l/a = [l, a.hi]`: cut the left-hand side of `a` at `l`.
pub fn cut_left(l: usize, a: &Root) -> Result<Root> {
    if l < a.lo || l >= a.hi {
        return Err(Error::BadCut { at: l, root: *a });
    }
    Ok(Root::of(l, a.hi))
}

/// `a/l = [a.lo, l]`: cut the right-hand side of `a` at `l`. `l = a.hi` is the
/// trivial cut and returns `a`.
pub fn cut_right(a: &Root, l: usize) -> Result<Root> {
    if l <= a.lo || l > a.hi {
        return Err(Error::BadCut { at: l, root: *a });
    }
    Ok(Root::of(a.lo, l))
}

/// `C(2m, m) / (m + 1)`.
pub fn catalan(m: u64) -> BigUint {
    let mut binom = BigUint::one();
    for k in 0..m {
        binom = binom * BigUint::from(2 * m - k) / BigUint::from(k + 1);
    }
    binom / BigUint::from(m + 1)
}

/// A code letter. The derived order `L < LR < R < V` is the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    L,
    LR,
    R,
    V,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::L, Letter::LR, Letter::R, Letter::V];

    fn depth_change(self) -> isize {
        match self {
            Letter::L => 1,
            Letter::R => -1,
            Letter::LR | Letter::V => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Letter::L => "L",
            Letter::LR => "LR",
            Letter::R => "R",
            Letter::V => "V",
        }
    }
}

/// A balanced word over `{L, R, LR, V}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code(Vec<Letter>);

impl Code {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let mut depth = 0isize;
        for (pos, l) in letters.iter().enumerate() {
            depth += l.depth_change();
            if depth < 0 {
                return Err(Error::InvalidCode(format!(
                    "prefix of length {} has more R than L",
                    pos + 1
                )));
            }
        }
        if depth != 0 {
            return Err(Error::InvalidCode(format!("{depth} unmatched L")));
        }
        Ok(Code(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `L` plus number of `LR`.
    pub fn degree(&self) -> usize {
        self.0.iter().filter(|l| matches!(l, Letter::L | Letter::LR)).count()
    }

    /// Swap `LR` and `V` letterwise.
    pub fn dual(&self) -> Code {
        Code(
            self.0
                .iter()
                .map(|l| match l {
                    Letter::LR => Letter::V,
                    Letter::V => Letter::LR,
                    other => *other,
                })
                .collect(),
        )
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Code::new(Vec::new());
        }
        let letters = s
            .split('.')
            .map(|tok| match tok.trim() {
                "L" => Ok(Letter::L),
                "R" => Ok(Letter::R),
                "LR" => Ok(Letter::LR),
                "V" => Ok(Letter::V),
                other => Err(Error::InvalidCode(format!("unknown letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Code::new(letters)
    }
}

pub fn dual_code(c: &Code) -> Code {
    c.dual()
}

/// All codes of length `n` in lexicographic order (`L < LR < R < V`).
pub struct Codes {
    n: usize,
    current: Option<Vec<Letter>>,
}

impl Codes {
    pub fn new(n: usize) -> Self {
        let first = Self::complete(Vec::with_capacity(n), 0, n);
        Codes { n, current: first }
    }

    /// Smallest feasible completion of `prefix` (at `depth`) to length `n`.
    fn complete(mut prefix: Vec<Letter>, mut depth: usize, n: usize) -> Option<Vec<Letter>> {
        while prefix.len() < n {
            let remaining = n - prefix.len() - 1;
            let letter = Letter::ALL.into_iter().find(|&l| Self::feasible(l, depth, remaining))?;
            depth = (depth as isize + letter.depth_change()) as usize;
            prefix.push(letter);
        }
        (depth == 0).then_some(prefix)
    }

    fn feasible(l: Letter, depth: usize, remaining: usize) -> bool {
        let d = depth as isize + l.depth_change();
        d >= 0 && d as usize <= remaining
    }

    fn advance(&self, cur: &[Letter]) -> Option<Vec<Letter>> {
        let mut depths = Vec::with_capacity(cur.len() + 1);
        depths.push(0usize);
        for l in cur {
            let d = *depths.last().unwrap() as isize + l.depth_change();
            depths.push(d as usize);
        }
        for pos in (0..cur.len()).rev() {
            let depth = depths[pos];
            let remaining = self.n - pos - 1;
            for &next in Letter::ALL.iter().filter(|&&l| l > cur[pos]) {
                if Self::feasible(next, depth, remaining) {
                    let mut prefix = cur[..pos].to_vec();
                    prefix.push(next);
                    let d = (depth as isize + next.depth_change()) as usize;
                    if let Some(done) = Self::complete(prefix, d, self.n) {
                        return Some(done);
                    }
                }
            }
        }
        None
    }
}

impl Iterator for Codes {
    type Item = Code;

    fn next(&mut self) -> Option<Code> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        Some(Code(cur))
    }
}

/// A subset of `[n] ⊔ Φ_{>1}`: no simple inside a root, and overlapping roots
/// meet in exactly one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct USet {
    simples: BTreeSet<usize>,
    roots: BTreeSet<Root>,
}

impl USet {
    pub fn new(simples: BTreeSet<usize>, roots: BTreeSet<Root>) -> Result<Self> {
        let u = USet { simples, roots };
        u.check()?;
        Ok(u)
    }

    pub fn empty() -> Self {
        USet::default()
    }

    pub fn simples(&self) -> &BTreeSet<usize> {
        &self.simples
    }

    pub fn roots(&self) -> &BTreeSet<Root> {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.simples.len() + self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest index mentioned, 0 for the empty set.
    pub fn max_index(&self) -> usize {
        let s = self.simples.iter().next_back().copied().unwrap_or(0);
        let r = self.roots.iter().map(|r| r.hi).max().unwrap_or(0);
        s.max(r)
    }

    fn check(&self) -> Result<()> {
        if self.simples.contains(&0) {
            return Err(Error::InvalidUSet("index 0".into()));
        }
        for r in &self.roots {
            if r.is_simple() {
                return Err(Error::InvalidUSet(format!("{r} is a simple root")));
            }
            if let Some(i) = self.simples.iter().find(|&&i| r.contains(i)) {
                return Err(Error::InvalidUSet(format!("{i} lies in {r}")));
            }
        }
        let roots: Vec<_> = self.roots.iter().collect();
        for (k, a) in roots.iter().enumerate() {
            for b in &roots[k + 1..] {
                if let Overlap::Overlap { size, .. } = overlap(a, b) {
                    if size != 1 {
                        return Err(Error::InvalidUSet(format!("{a} and {b} share {size} points")));
                    }
                }
                if a.lo == b.lo || a.hi == b.hi {
                    return Err(Error::InvalidUSet(format!("{a} and {b} share an endpoint")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for USet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .simples
            .iter()
            .map(|i| i.to_string())
            .chain(self.roots.iter().map(|r| r.to_string()))
            .collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// JSON form: an array whose entries are `[i]` for simples and `[i, j]` for roots.
impl Serialize for USet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<Vec<usize>> = self
            .simples
            .iter()
            .map(|&i| vec![i])
            .chain(self.roots.iter().map(|r| vec![r.lo, r.hi]))
            .collect();
        items.serialize(s)
    }
}

impl<'de> Deserialize<'de> for USet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let items = Vec::<Vec<usize>>::deserialize(d)?;
        let mut simples = BTreeSet::new();
        let mut roots = BTreeSet::new();
        for it in items {
            match it.as_slice() {
                [i] => {
                    simples.insert(*i);
                }
                [i, j] => {
                    roots.insert(Root::new(*i, *j).map_err(D::Error::custom)?);
                }
                _ => return Err(D::Error::custom("U-set entries are [i] or [i,j]")),
            }
        }
        USet::new(simples, roots).map_err(D::Error::custom)
    }
}

/// Stack decoding of a code into its U-set.
pub fn uset_from_code(c: &Code) -> USet {
    let mut stack: Vec<usize> = Vec::new();
    let mut simples = BTreeSet::new();
    let mut roots = BTreeSet::new();
    for (k, l) in c.letters().iter().enumerate() {
        let here = k + 1;
        match l {
            Letter::L => stack.push(here),
            Letter::R => {
                let p = stack.pop().expect("valid code");
                roots.insert(Root::of(p, here));
            }
            Letter::LR => match stack.pop() {
                None => {
                    simples.insert(here);
                }
                Some(p) => {
                    roots.insert(Root::of(p, here));
                    stack.push(here);
                }
            },
            Letter::V => {}
        }
    }
    USet { simples, roots }
}

pub fn code_from_uset(u: &USet, n: usize) -> Result<Code> {
    u.check()?;
    if u.max_index() > n {
        return Err(Error::InvalidUSet(format!("{u} does not fit in [{n}]")));
    }
    let mut starts = vec![false; n + 1];
    let mut ends = vec![false; n + 1];
    for r in u.roots() {
        starts[r.lo] = true;
        ends[r.hi] = true;
    }
    let letters = (1..=n)
        .map(|i| match (u.simples().contains(&i), starts[i], ends[i]) {
            (true, _, _) | (false, true, true) => Letter::LR,
            (false, true, false) => Letter::L,
            (false, false, true) => Letter::R,
            (false, false, false) => Letter::V,
        })
        .collect();
    Code::new(letters)
}

/// All U-sets of `[n]`, optionally only those of a given cardinality, in
/// code order.
pub fn enumerate_usets(n: usize, degree: Option<usize>) -> impl Iterator<Item = USet> {
    Codes::new(n)
        .filter(move |c| degree.is_none_or(|k| c.degree() == k))
        .map(|c| uset_from_code(&c))
}

/// Number of U-sets of each cardinality `0..=n`.
pub fn degree_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for c in Codes::new(n) {
        counts[c.degree()] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_usets(n: usize) -> Vec<(BTreeSet<usize>, BTreeSet<Root>)> {
        let elems: Vec<Result<usize, Root>> = (1..=n).map(Ok).chain(nonsimple_roots(n).into_iter().map(Err)).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << elems.len()) {
            let pick: Vec<_> = (0..elems.len()).filter(|k| mask >> k & 1 == 1).collect();
            let simples: BTreeSet<usize> = pick.iter().filter_map(|&k| elems[k].ok()).collect();
            let roots: BTreeSet<Root> = pick.iter().filter_map(|&k| elems[k].err()).collect();
            let ok_i = simples.iter().all(|&i| roots.iter().all(|r| !(r.lo <= i && i <= r.hi)));
            let ok_ii = roots.iter().all(|a| {
                roots.iter().all(|b| {
                    if a == b {
                        return true;
                    }
                    let overl = (a.lo <= b.lo && b.lo <= a.hi && a.hi <= b.hi)
                        || (b.lo <= a.lo && a.lo <= b.hi && b.hi <= a.hi);
                    let inter = (a.lo.max(b.lo)..=a.hi.min(b.hi)).count();
                    !overl || inter == 1
                })
            });
            if ok_i && ok_ii {
                out.push((simples, roots));
            }
        }
        out
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigUint::from(1u32));
        assert_eq!(catalan(1), BigUint::from(1u32));
        assert_eq!(catalan(3), BigUint::from(5u32));
        assert_eq!(catalan(13), BigUint::from(742_900u32));
    }

    #[test]
    fn overlap_cases() {
        assert_eq!(
            overlap(&Root::of(1, 2), &Root::of(2, 3)),
            Overlap::Overlap { size: 1, strict: true }
        );
        assert_eq!(overlap(&Root::of(1, 4), &Root::of(2, 3)), Overlap::DisjointOrNested);
        assert_eq!(
            overlap(&Root::of(1, 3), &Root::of(1, 5)),
            Overlap::Overlap { size: 3, strict: false }
        );
        assert_eq!(overlap(&Root::of(1, 2), &Root::of(4, 5)), Overlap::DisjointOrNested);
    }

    #[test]
    fn compatibility_examples() {
        use AlmostPositiveRoot::*;
        assert!(compatible(&NegSimple(1), &NegSimple(2)));
        assert!(!compatible(&NegSimple(2), &Pos(Root::of(1, 3))));
        assert!(!compatible(&Pos(Root::of(1, 1)), &Pos(Root::of(2, 2))));
        assert!(compatible(&Pos(Root::of(1, 4)), &Pos(Root::of(2, 3))));
        assert!(compatible(&Pos(Root::of(1, 1)), &Pos(Root::of(3, 3))));
        assert!(!compatible(&Pos(Root::of(1, 2)), &Pos(Root::of(2, 3))));
    }

    #[test]
    fn compatibility_symmetric_reflexive() {
        let all = AlmostPositiveRoot::all(6);
        for a in &all {
            assert!(compatible(a, a));
            for b in &all {
                assert_eq!(compatible(a, b), compatible(b, a));
            }
        }
    }

    #[test]
    fn parts_and_cuts() {
        assert_eq!(
            root_parts(&Root::of(1, 3)).unwrap(),
            (1, 3, Root::of(2, 3), Root::of(1, 2))
        );
        assert_eq!(
            root_parts(&Root::of(2, 3)).unwrap(),
            (2, 3, Root::of(3, 3), Root::of(2, 2))
        );
        assert!(root_parts(&Root::of(2, 2)).is_err());
        // for ([1,2],[1,2]) the right part of one misses the left part of the other
        let a = Root::of(1, 2);
        assert!(a.right_part().unwrap().intersection(&a.left_part().unwrap()).is_none());
        assert_eq!(cut_left(2, &Root::of(1, 5)).unwrap(), Root::of(2, 5));
        assert_eq!(cut_right(&Root::of(1, 5), 2).unwrap(), Root::of(1, 2));
        assert_eq!(cut_right(&Root::of(1, 3), 3).unwrap(), Root::of(1, 3));
        assert!(cut_right(&Root::of(1, 3), 1).is_err());
        assert!(cut_left(3, &Root::of(1, 3)).is_err());
    }

    #[test]
    fn worked_code_example() {
        let c: Code = "LR.V.L.LR.V.LR.R".parse().unwrap();
        let u = uset_from_code(&c);
        assert_eq!(u.to_string(), "{1, [3,4], [4,6], [6,7]}");
        assert_eq!(code_from_uset(&u, 7).unwrap(), c);
        assert_eq!(c.to_string(), "LR.V.L.LR.V.LR.R");
    }

    #[test]
    fn small_decodings() {
        let u = uset_from_code(&"L.L.R.R".parse().unwrap());
        assert_eq!(u.to_string(), "{[1,4], [2,3]}");
        let u = uset_from_code(&"V.V.V".parse().unwrap());
        assert!(u.is_empty());
        assert_eq!(code_from_uset(&USet::empty(), 3).unwrap().to_string(), "V.V.V");
        let u = USet::new(BTreeSet::new(), [Root::of(1, 2), Root::of(2, 3)].into()).unwrap();
        assert_eq!(code_from_uset(&u, 3).unwrap().to_string(), "L.LR.R");
    }

    #[test]
    fn invalid_codes_and_usets() {
        assert!("R.L".parse::<Code>().is_err());
        assert!("L.L.R".parse::<Code>().is_err());
        assert!("X".parse::<Code>().is_err());
        assert!(USet::new([2].into(), [Root::of(1, 3)].into()).is_err());
        assert!(USet::new(BTreeSet::new(), [Root::of(1, 3), Root::of(2, 4)].into()).is_err());
        assert!(USet::new(BTreeSet::new(), [Root::of(1, 3), Root::of(1, 4)].into()).is_err());
        let nested = USet::new(BTreeSet::new(), [Root::of(1, 4), Root::of(2, 3)].into());
        assert!(nested.is_ok());
    }

    #[test]
    fn duality() {
        for n in 1..=8 {
            for c in Codes::new(n) {
                let d = c.dual();
                assert_eq!(d.dual(), c);
                assert_eq!(c.degree() + d.degree(), n);
            }
        }
        assert_eq!("V.V.V".parse::<Code>().unwrap().dual().to_string(), "LR.LR.LR");
    }

    #[test]
    fn dual_of_single_root_is_chain() {
        let n = 6;
        for r in nonsimple_roots(n) {
            let u = USet::new(BTreeSet::new(), [r].into()).unwrap();
            let dual = uset_from_code(&code_from_uset(&u, n).unwrap().dual());
            let chain: BTreeSet<Root> = (r.lo..r.hi).map(|k| Root::of(k, k + 1)).collect();
            let rest: BTreeSet<usize> = (1..=n).filter(|&k| !r.contains(k)).collect();
            assert_eq!(dual.roots(), &chain);
            assert_eq!(dual.simples(), &rest);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=5 {
            let mut ours: Vec<_> = enumerate_usets(n, None)
                .map(|u| (u.simples().clone(), u.roots().clone()))
                .collect();
            let mut brute = brute_force_usets(n);
            ours.sort();
            brute.sort();
            assert_eq!(ours, brute, "n = {n}");
        }
    }

    #[test]
    fn degree_counts_small() {
        assert_eq!(degree_counts(2), vec![1, 3, 1]);
        assert_eq!(degree_counts(3), vec![1, 6, 6, 1]);
        assert_eq!(enumerate_usets(3, Some(2)).count(), 6);
    }

    #[test]
    fn codes_are_lexicographic_and_bijective() {
        for n in 1..=8 {
            let codes: Vec<Code> = Codes::new(n).collect();
            assert!(codes.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(BigUint::from(codes.len()), catalan(n as u64 + 1));
            for c in &codes {
                let u = uset_from_code(c);
                assert_eq!(u.len(), c.degree());
                assert_eq!(&code_from_uset(&u, n).unwrap(), c);
            }
        }
        let first: Vec<String> = Codes::new(2).map(|c| c.to_string()).collect();
        assert_eq!(first, ["L.R", "LR.LR", "LR.V", "V.LR", "V.V"]);
    }

    #[test]
    fn uset_json() {
        let u = uset_from_code(&"LR.V.L.LR.V.LR.R".parse().unwrap());
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, "[[1],[3,4],[4,6],[6,7]]");
        let back: USet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<USet>("[[2],[1,3]]").is_err());
    }
}
