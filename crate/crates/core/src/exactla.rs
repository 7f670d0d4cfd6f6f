//! Exact sparse linear algebra over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// A sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseVec = Vec<(usize, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Build a sparse vector from arbitrary `(column, value)` pairs, summing
/// duplicates and dropping zeros.
pub fn sparse_from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (c, v) in pairs {
        *acc.entry(c).or_insert_with(Q::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: Vec<SparseVec>,
    ncols: usize,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            m.push_row(r.iter().cloned().enumerate().collect())?;
        }
        Ok(m)
    }

    pub fn from_dense_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(&rows)
    }

    /// Append a row given as `(column, value)` pairs in any order.
    pub fn push_row(&mut self, entries: Vec<(usize, Q)>) -> Result<()> {
        if let Some((c, _)) = entries.iter().find(|(c, _)| *c >= self.ncols) {
            return Err(Error::Dimension(format!("column {c} >= {}", self.ncols)));
        }
        self.rows.push(sparse_from_pairs(entries));
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.rows[r]
            .binary_search_by_key(&c, |(j, _)| *j)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_else(|_| Q::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![Q::zero(); self.ncols];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut b = EchelonBasis::new(self.ncols);
        for r in &self.rows {
            b.insert(r.clone());
        }
        b.rank()
    }

    /// Reduced row-echelon form.
    pub fn row_reduce(&self) -> Echelon {
        let mut b = EchelonBasis::new(self.ncols);
        for r in &self.rows {
            b.insert(r.clone());
        }
        b.into_rref()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Q> {
        if self.nrows() != self.ncols {
            return Err(Error::NotSquare {
                rows: self.nrows(),
                cols: self.ncols,
            });
        }
        // clear denominators row by row
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(self.nrows());
        for row in self.to_dense() {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(
                row.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                    .collect(),
            );
            scale *= l;
        }
        Ok(Q::new(bareiss(a), scale))
    }
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<SparseVec>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Incrementally built row-echelon basis. Pivot rows are normalized to a
/// leading 1; reduced vectors vanish on every pivot column, so `reduce`
/// returns a canonical representative modulo the span.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    pivots: HashMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis {
            ncols,
            pivots: HashMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        if self.pivots.is_empty() {
            return v;
        }
        let mut acc: BTreeMap<usize, Q> = v.into_iter().collect();
        let mut cursor = 0usize;
        while let Some(c) = acc.range(cursor..).next().map(|(c, _)| *c) {
            if let Some(prow) = self.pivots.get(&c) {
                let f = acc.remove(&c).expect("present");
                for (j, x) in &prow[1..] {
                    let e = acc.entry(*j).or_insert_with(Q::zero);
                    *e -= &f * x;
                    if e.is_zero() {
                        acc.remove(j);
                    }
                }
            }
            cursor = c + 1;
        }
        acc.into_iter().collect()
    }

    /// Insert a vector; returns whether it was independent of the basis.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let row = r.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.pivots.insert(p, row);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn into_rref(self) -> Echelon {
        let mut keys: Vec<usize> = self.pivots.keys().copied().collect();
        keys.sort_unstable();
        let mut rows: BTreeMap<usize, SparseVec> = self.pivots.into_iter().collect();
        // back substitution, from the last pivot upwards
        for (k, &p) in keys.iter().enumerate().rev() {
            let prow = rows[&p].clone();
            for &above in &keys[..k] {
                let row = rows.get_mut(&above).expect("pivot row");
                if let Ok(pos) = row.binary_search_by_key(&p, |(c, _)| *c) {
                    let f = row[pos].1.clone();
                    let upd = row.iter().cloned().chain(prow.iter().map(|(c, x)| (*c, -(&f * x))));
                    *row = sparse_from_pairs(upd);
                }
            }
        }
        Echelon {
            rank: keys.len(),
            pivots: keys.clone(),
            rows: rows.into_values().collect(),
        }
    }
}

/// Whether `v` lies in the row space of `m`; if so, coefficients `c` with
/// `v = Σ c_k · row_k`.
pub fn in_span(v: &SparseVec, m: &SparseMatrix) -> Result<Option<Vec<Q>>> {
    if let Some((c, _)) = v.last() {
        if *c >= m.ncols() {
            return Err(Error::Dimension(format!("column {c} >= {}", m.ncols())));
        }
    }
    // augment each row with a unit vector tracking its combination
    let nr = m.nrows();
    let width = m.ncols() + nr;
    let mut basis = EchelonBasis::new(width);
    for (k, row) in m.rows().iter().enumerate() {
        let mut r = row.clone();
        r.push((m.ncols() + k, Q::one()));
        basis.insert(r);
    }
    let residue = basis.reduce(v.clone());
    if residue.iter().any(|(c, _)| *c < m.ncols()) {
        return Ok(None);
    }
    // v - Σ c_k row_k reduced to (0 | -c)
    let mut coeffs = vec![Q::zero(); nr];
    for (c, x) in residue {
        coeffs[c - m.ncols()] = -x;
    }
    Ok(Some(coeffs))
}

pub fn det(m: &SparseMatrix) -> Result<Q> {
    m.det()
}

pub fn row_reduce(m: &SparseMatrix) -> Echelon {
    m.row_reduce()
}

/// `|x|` helper used in reports.
pub fn is_unit(x: &Q) -> bool {
    x.is_integer() && x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn ranks() {
        let id = SparseMatrix::from_dense_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(id.rank(), 3);
        let m = SparseMatrix::from_dense_i64(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(m.rank(), 3);
        let z = SparseMatrix::from_dense_i64(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(z.rank(), 0);
        let dep = SparseMatrix::from_dense_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(dep.rank(), 2);
    }

    #[test]
    fn rref_is_reduced() {
        let m = SparseMatrix::from_dense_i64(&[vec![2, 4, 1], vec![1, 2, 3], vec![0, 0, 5]]).unwrap();
        let e = m.row_reduce();
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivots, vec![0, 2]);
        assert_eq!(e.rows[0], vec![(0, q(1)), (1, q(2))]);
        assert_eq!(e.rows[1], vec![(2, q(1))]);
    }

    #[test]
    fn determinants() {
        let id = SparseMatrix::from_dense_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.det().unwrap(), q(1));
        let sw = SparseMatrix::from_dense_i64(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(sw.det().unwrap(), q(-1));
        let fr = SparseMatrix::from_dense_i64(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(fr.det().unwrap(), q(1));
        let half = SparseMatrix::from_dense(&[vec![Q::new(1.into(), 2.into())]]).unwrap();
        assert_eq!(half.det().unwrap(), Q::new(1.into(), 2.into()));
        assert!(SparseMatrix::from_dense_i64(&[vec![1, 2]]).unwrap().det().is_err());
    }

    #[test]
    fn spans() {
        let m = SparseMatrix::from_dense_i64(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let row = m.rows()[1].clone();
        assert_eq!(in_span(&row, &m).unwrap(), Some(vec![q(0), q(1)]));
        assert_eq!(in_span(&vec![], &m).unwrap(), Some(vec![q(0), q(0)]));
        let v = vec![(0, q(2)), (1, q(5)), (2, q(3))];
        assert_eq!(in_span(&v, &m).unwrap(), Some(vec![q(2), q(3)]));
        assert_eq!(in_span(&vec![(0, q(1))], &m).unwrap(), None);
        let empty = SparseMatrix::new(3);
        assert_eq!(in_span(&vec![(1, q(1))], &empty).unwrap(), None);
    }

    proptest! {
        #[test]
        fn det_matches_cofactor(n in 1usize..=5, seed in proptest::collection::vec(-3i64..=3, 25)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 5 + j]).collect()).collect();
            let sm = SparseMatrix::from_dense_i64(&m).unwrap();
            prop_assert_eq!(sm.det().unwrap(), q(cofactor_det(&m)));
            // rank is full iff det is non-zero
            prop_assert_eq!(sm.rank() == n, cofactor_det(&m) != 0);
        }

        #[test]
        fn rank_invariant_under_row_shuffle(
            vals in proptest::collection::vec(-2i64..=2, 24),
            perm_seed in any::<u64>(),
        ) {
            let rows: Vec<Vec<i64>> = vals.chunks(4).map(|c| c.to_vec()).collect();
            let mut shuffled = rows.clone();
            let k = shuffled.len();
            let mut s = perm_seed;
            for i in (1..k).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = SparseMatrix::from_dense_i64(&rows).unwrap().rank();
            let b = SparseMatrix::from_dense_i64(&shuffled).unwrap().rank();
            prop_assert_eq!(a, b);
        }
    }
}
