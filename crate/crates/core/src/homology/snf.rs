//! Smith normal form over the integers.
//!
//! Dense reduction runs in `i128` with checked arithmetic and restarts in
//! `BigInt` on overflow. Sparse boundary matrices are first reduced by unit
//! pivots, which settles almost all of a nerve boundary cheaply; only the
//! leftover core goes through the dense reduction.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().map(Into::into).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Unimodular over the integers: determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        unit_determinant(self)
    }
}

/// `left · m · right = diag(diagonal, 0, ...)` with `dᵢ | dᵢ₊₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors, positive and each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SmithForm {
    /// Re-multiplies the certificates and checks that they are unimodular
    /// and produce the stated diagonal.
    pub fn verify(&self, original: &IntMatrix) -> bool {
        let (Some(u), Some(v)) = (&self.left, &self.right) else {
            return false;
        };
        if u.rows != original.rows || v.cols != original.cols {
            return false;
        }
        let d = u.mul(original).mul(v);
        for i in 0..d.rows {
            for j in 0..d.cols {
                let expected = if i == j && i < self.rank { self.diagonal[i].clone() } else { BigInt::zero() };
                if *d.get(i, j) != expected {
                    return false;
                }
            }
        }
        let divides = self.diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        divides && self.diagonal.iter().all(Signed::is_positive) && unit_determinant(u) && unit_determinant(v)
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Determinant ±1 by fraction-free (Bareiss) elimination.
fn unit_determinant(m: &IntMatrix) -> bool {
    let n = m.rows;
    if n != m.cols {
        return false;
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return false;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 { BigInt::one() } else { &a[n - 1][n - 1] * sign };
    det.abs().is_one()
}

mod dense {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    use super::{IntMatrix, SmithForm};

    /// Integer arithmetic used by the dense reduction; `None` signals overflow.
    pub(super) trait Ring: Clone + PartialEq + std::fmt::Debug {
        fn zero() -> Self;
        fn one() -> Self;
        fn is_zero(&self) -> bool;
        fn abs_cmp_lt(&self, other: &Self) -> bool;
        fn neg(&self) -> Option<Self>;
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
        fn div_floor(&self, b: &Self) -> Self;
        fn is_negative(&self) -> bool;
        fn divides(&self, b: &Self) -> bool;
        fn to_big(&self) -> BigInt;
    }

    impl Ring for i128 {
        fn zero() -> Self {
            0
        }
        fn one() -> Self {
            1
        }
        fn is_zero(&self) -> bool {
            *self == 0
        }
        fn abs_cmp_lt(&self, other: &Self) -> bool {
            self.unsigned_abs() < other.unsigned_abs()
        }
        fn neg(&self) -> Option<Self> {
            self.checked_neg()
        }
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
            self.checked_sub(q.checked_mul(*b)?)
        }
        fn div_floor(&self, b: &Self) -> Self {
            Integer::div_floor(self, b)
        }
        fn is_negative(&self) -> bool {
            *self < 0
        }
        fn divides(&self, b: &Self) -> bool {
            b % self == 0
        }
        fn to_big(&self) -> BigInt {
            BigInt::from(*self)
        }
    }

    impl Ring for BigInt {
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn abs_cmp_lt(&self, other: &Self) -> bool {
            self.magnitude() < other.magnitude()
        }
        fn neg(&self) -> Option<Self> {
            Some(-self)
        }
        fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
            Some(self - q * b)
        }
        fn div_floor(&self, b: &Self) -> Self {
            Integer::div_floor(self, b)
        }
        fn is_negative(&self) -> bool {
            Signed::is_negative(self)
        }
        fn divides(&self, b: &Self) -> bool {
            Zero::is_zero(&(b % self))
        }
        fn to_big(&self) -> BigInt {
            self.clone()
        }
    }

    struct Dense<T> {
        rows: usize,
        cols: usize,
        a: Vec<T>,
        u: Option<Vec<T>>,
        v: Option<Vec<T>>,
    }

    impl<T: Ring> Dense<T> {
        fn at(&self, i: usize, j: usize) -> &T {
            &self.a[i * self.cols + j]
        }

        fn swap_rows(&mut self, i: usize, k: usize) {
            if i == k {
                return;
            }
            for j in 0..self.cols {
                self.a.swap(i * self.cols + j, k * self.cols + j);
            }
            if let Some(u) = &mut self.u {
                for j in 0..self.rows {
                    u.swap(i * self.rows + j, k * self.rows + j);
                }
            }
        }

        fn swap_cols(&mut self, j: usize, k: usize) {
            if j == k {
                return;
            }
            for i in 0..self.rows {
                self.a.swap(i * self.cols + j, i * self.cols + k);
            }
            if let Some(v) = &mut self.v {
                for i in 0..self.cols {
                    v.swap(i * self.cols + j, i * self.cols + k);
                }
            }
        }

        /// row_i -= q row_k
        fn row_op(&mut self, i: usize, k: usize, q: &T) -> Option<()> {
            for j in 0..self.cols {
                let b = self.a[k * self.cols + j].clone();
                if !b.is_zero() {
                    self.a[i * self.cols + j] = self.a[i * self.cols + j].sub_mul(q, &b)?;
                }
            }
            if let Some(u) = &mut self.u {
                let n = self.rows;
                for j in 0..n {
                    let b = u[k * n + j].clone();
                    if !b.is_zero() {
                        u[i * n + j] = u[i * n + j].sub_mul(q, &b)?;
                    }
                }
            }
            Some(())
        }

        /// col_j -= q col_k
        fn col_op(&mut self, j: usize, k: usize, q: &T) -> Option<()> {
            for i in 0..self.rows {
                let b = self.a[i * self.cols + k].clone();
                if !b.is_zero() {
                    self.a[i * self.cols + j] = self.a[i * self.cols + j].sub_mul(q, &b)?;
                }
            }
            if let Some(v) = &mut self.v {
                let n = self.cols;
                for i in 0..n {
                    let b = v[i * n + k].clone();
                    if !b.is_zero() {
                        v[i * n + j] = v[i * n + j].sub_mul(q, &b)?;
                    }
                }
            }
            Some(())
        }

        fn negate_row(&mut self, i: usize) -> Option<()> {
            for j in 0..self.cols {
                self.a[i * self.cols + j] = self.a[i * self.cols + j].neg()?;
            }
            if let Some(u) = &mut self.u {
                let n = self.rows;
                for j in 0..n {
                    u[i * n + j] = u[i * n + j].neg()?;
                }
            }
            Some(())
        }

        fn reduce(&mut self) -> Option<Vec<T>> {
            let mut diagonal = Vec::new();
            let limit = self.rows.min(self.cols);
            for t in 0..limit {
                // smallest nonzero entry of the remaining block
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        let x = self.at(i, j);
                        if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs_cmp_lt(self.at(bi, bj))) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                self.swap_rows(t, bi);
                self.swap_cols(t, bj);
                loop {
                    let mut dirty = false;
                    for i in t + 1..self.rows {
                        if !self.at(i, t).is_zero() {
                            let q = self.at(i, t).div_floor(self.at(t, t));
                            self.row_op(i, t, &q)?;
                            if !self.at(i, t).is_zero() {
                                dirty = true;
                            }
                        }
                    }
                    for j in t + 1..self.cols {
                        if !self.at(t, j).is_zero() {
                            let q = self.at(t, j).div_floor(self.at(t, t));
                            self.col_op(j, t, &q)?;
                            if !self.at(t, j).is_zero() {
                                dirty = true;
                            }
                        }
                    }
                    if !dirty {
                        // divisibility of the remaining block by the pivot
                        let mut bad = None;
                        'scan: for i in t + 1..self.rows {
                            for j in t + 1..self.cols {
                                if !self.at(t, t).divides(self.at(i, j)) {
                                    bad = Some(i);
                                    break 'scan;
                                }
                            }
                        }
                        match bad {
                            None => break,
                            Some(i) => {
                                let minus_one = T::one().neg()?;
                                self.row_op(t, i, &minus_one)?;
                                continue;
                            }
                        }
                    }
                    // move the smallest entry of row t / column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        if !self.at(i, t).is_zero() && self.at(i, t).abs_cmp_lt(self.at(best.0, best.1)) {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        if !self.at(t, j).is_zero() && self.at(t, j).abs_cmp_lt(self.at(best.0, best.1)) {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                }
                if self.at(t, t).is_negative() {
                    self.negate_row(t)?;
                }
                diagonal.push(self.at(t, t).clone());
            }
            Some(diagonal)
        }
    }

    fn identity_vec<T: Ring>(n: usize) -> Vec<T> {
        let mut v = vec![T::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = T::one();
        }
        v
    }

    pub(super) fn run<T: Ring>(rows: usize, cols: usize, a: Vec<T>, certify: bool) -> Option<SmithForm> {
        let mut d = Dense {
            rows,
            cols,
            a,
            u: certify.then(|| identity_vec(rows)),
            v: certify.then(|| identity_vec(cols)),
        };
        let diagonal = d.reduce()?;
        let to_matrix = |r: usize, c: usize, v: Vec<T>| IntMatrix { rows: r, cols: c, data: v.iter().map(Ring::to_big).collect() };
        Some(SmithForm {
            rows,
            cols,
            rank: diagonal.len(),
            diagonal: diagonal.iter().map(Ring::to_big).collect(),
            left: d.u.map(|u| to_matrix(rows, rows, u)),
            right: d.v.map(|v| to_matrix(cols, cols, v)),
        })
    }
}

/// Smith normal form of `m`, with transformation matrices when `certify`.
pub fn smith_normal_form(m: &IntMatrix, certify: bool) -> SmithForm {
    let small: Option<Vec<i128>> = m.data.iter().map(|x| x.to_i128()).collect();
    if let Some(a) = small {
        if let Some(f) = dense::run(m.rows, m.cols, a, certify) {
            return f;
        }
    }
    dense::run(m.rows, m.cols, m.data.clone(), certify).expect("big integer reduction cannot overflow")
}

/// A sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `columns[j]`: nonzero `(row, value)` pairs, sorted by row.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Whether `self · other` is the zero matrix.
    pub fn composes_to_zero(&self, other: &SparseMatrix) -> bool {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
        for col in &other.columns {
            acc.clear();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    *acc.entry(i).or_default() += a as i128 * b as i128;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return false;
            }
        }
        true
    }
}

/// Rank and nonzero invariant factors of a sparse matrix, without
/// certificates.
pub fn invariant_factors(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    // rows as maps column -> value
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (j, col) in m.columns.iter().enumerate() {
        for &(i, v) in col {
            if v != 0 {
                rows[i].insert(j, v);
                col_rows[j].insert(i);
            }
        }
    }
    let mut alive = vec![true; m.rows];
    let mut units = 0usize;
    'outer: loop {
        // a unit entry in a live row, preferring short rows
        let mut pick: Option<(usize, usize)> = None;
        let mut best_len = usize::MAX;
        for (i, r) in rows.iter().enumerate() {
            if !alive[i] || r.len() >= best_len {
                continue;
            }
            if let Some((&j, _)) = r.iter().find(|(_, v)| v.abs() == 1) {
                pick = Some((i, j));
                best_len = r.len();
                if best_len == 1 {
                    break;
                }
            }
        }
        let Some((p, c)) = pick else { break };
        let pivot_row = std::mem::take(&mut rows[p]);
        let u = pivot_row[&c];
        alive[p] = false;
        for (&j, _) in &pivot_row {
            col_rows[j].remove(&p);
        }
        let others: Vec<usize> = col_rows[c].iter().copied().collect();
        for r in others {
            let factor = rows[r][&c] * u;
            let updated: Option<Vec<(usize, i64)>> = pivot_row
                .iter()
                .map(|(&j, &b)| {
                    let old = rows[r].get(&j).copied().unwrap_or(0);
                    old.checked_sub(factor.checked_mul(b)?).map(|v| (j, v))
                })
                .collect();
            let Some(updated) = updated else {
                // leave the rest to the big-integer core
                for (&j, _) in &pivot_row {
                    col_rows[j].insert(p);
                }
                rows[p] = pivot_row;
                alive[p] = true;
                break 'outer;
            };
            for (j, v) in updated {
                if v == 0 {
                    rows[r].remove(&j);
                    col_rows[j].remove(&r);
                } else {
                    rows[r].insert(j, v);
                    col_rows[j].insert(r);
                }
            }
        }
        units += 1;
    }
    // leftover core, with empty rows and columns dropped
    let live_rows: Vec<usize> = (0..m.rows).filter(|&i| alive[i] && !rows[i].is_empty()).collect();
    let mut cols: Vec<usize> = live_rows.iter().flat_map(|&i| rows[i].keys().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut core = IntMatrix::zeros(live_rows.len(), cols.len());
    for (a, &i) in live_rows.iter().enumerate() {
        for (&j, &v) in &rows[i] {
            let b = cols.binary_search(&j).expect("column collected");
            core.set(a, b, BigInt::from(v));
        }
    }
    let f = smith_normal_form(&core, false);
    let mut factors = vec![BigInt::one(); units];
    factors.extend(f.diagonal);
    (units + f.rank, factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_and_diagonal() {
        let id = IntMatrix::identity(3);
        let f = smith_normal_form(&id, true);
        assert_eq!(f.diagonal, big(&[1, 1, 1]));
        assert!(f.verify(&id));
        let d = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 0]]);
        let f = smith_normal_form(&d, true);
        assert_eq!((f.rank, f.diagonal.clone()), (1, big(&[2])));
        assert!(f.verify(&d));
    }

    #[test]
    fn divisibility_is_enforced() {
        let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]);
        let f = smith_normal_form(&m, true);
        assert_eq!(f.diagonal, big(&[1, 6]));
        assert!(f.verify(&m));
        let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let f = smith_normal_form(&m, true);
        assert_eq!(f.diagonal, big(&[2, 6, 12]));
        assert!(f.verify(&m));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let huge = BigInt::from(i128::MAX) * BigInt::from(4);
        let m = IntMatrix { rows: 2, cols: 2, data: vec![huge.clone(), BigInt::from(3), BigInt::from(5), huge] };
        let f = smith_normal_form(&m, true);
        assert!(f.verify(&m));
        assert_eq!(f.rank, 2);
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![vec![1i64, 2, 0, 0], vec![0, 2, 4, 0], vec![3, 0, 0, 6], vec![0, 0, 0, 0]];
        let dense = IntMatrix::from_rows(&rows);
        let sparse = SparseMatrix {
            rows: 4,
            cols: 4,
            columns: (0..4).map(|j| (0..4).filter(|&i| rows[i][j] != 0).map(|i| (i, rows[i][j])).collect()).collect(),
        };
        let (rank, factors) = invariant_factors(&sparse);
        let f = smith_normal_form(&dense, false);
        assert_eq!(rank, f.rank);
        assert_eq!(factors, f.diagonal);
    }
}
