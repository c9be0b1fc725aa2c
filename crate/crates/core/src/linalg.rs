//! Exact linear algebra over the rationals.
//!
//! Everything here works on [`Rational`] (arbitrary precision, always in
//! lowest terms). Two independent determinant routes are provided: pivoted
//! rational elimination ([`det`]) and fraction-free Bareiss elimination over
//! the integers after clearing denominators ([`det_bareiss`]).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer matrices. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&v| rat(v)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_columns(&self, columns: &[usize]) -> Self {
        Self::from_fn(self.rows, columns.len(), |i, j| self[(i, columns[j])].clone())
    }

    /// Removes one row and one column.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        let keep_r: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        Self::from_fn(keep_r.len(), keep_c.len(), |i, j| {
            self[(keep_r[i], keep_c[j])].clone()
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| {
                acc + &self[(i, k)] * &other[(k, j)]
            })
        }))
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Index of the entry with the largest absolute value among `candidates`,
/// skipping zeros.
fn largest_pivot<'a>(candidates: impl Iterator<Item = (usize, &'a Rational)>) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for (i, v) in candidates {
        if v.is_zero() {
            continue;
        }
        let a = v.abs();
        if best.as_ref().is_none_or(|(_, b)| a > *b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i)
}

/// Exact determinant by Gaussian elimination with largest-magnitude pivots.
pub fn det(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut a = m.to_rows();
    let mut result = Rational::one();
    for k in 0..n {
        let Some(p) = largest_pivot((k..n).map(|i| (i, &a[i][k]))) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            result = -result;
        }
        let pivot = a[k][k].clone();
        result *= &pivot;
        let (head, tail) = a.split_at_mut(k + 1);
        let prow = &head[k];
        for row in tail.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &pivot;
            for j in k..n {
                let t = &f * &prow[j];
                row[j] -= t;
            }
        }
    }
    Ok(result)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators; the
/// scales are divided out at the end.
pub fn det_bareiss(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        scale *= &l;
        a.push(
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect(),
        );
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
}

/// Reduced row echelon form; returns the matrix and the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = largest_pivot((r..rows).map(|i| (i, &a[i][c]))) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix::from_rows(a).unwrap_or_else(|_| Matrix::zeros(rows, cols)), pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// A matrix with independent rows spanning the row space of `m`.
pub fn row_basis(m: &Matrix) -> Matrix {
    let (r, pivots) = rref(m);
    Matrix::from_fn(pivots.len(), m.cols, |i, j| r[(i, j)].clone())
}

/// Incremental column-independence tracker.
///
/// Holds the accepted columns in reduced form: the `k`-th stored vector is the
/// `k`-th accepted column minus a combination of the earlier ones, and vanishes
/// on the pivot rows of all earlier vectors. Extending never mutates `self`, so
/// a caller may branch from any intermediate state.
#[derive(Clone, Debug)]
pub struct EliminationState<Id> {
    ambient: usize,
    reduced: Vec<Vec<Rational>>,
    pivot_rows: Vec<usize>,
    selected: Vec<Id>,
}

impl<Id: Clone> EliminationState<Id> {
    pub fn new(ambient: usize) -> Self {
        EliminationState {
            ambient,
            reduced: Vec::new(),
            pivot_rows: Vec::new(),
            selected: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn selected(&self) -> &[Id] {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.selected.len() == self.ambient
    }

    fn residual(&self, column: &[Rational]) -> Vec<Rational> {
        let mut v = column.to_vec();
        for (r, &p) in self.reduced.iter().zip(&self.pivot_rows) {
            if v[p].is_zero() {
                continue;
            }
            let f = &v[p] / &r[p];
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Returns the extended state if `column` is independent of the selected
    /// columns, `None` otherwise.
    pub fn extended(&self, column: &[Rational], id: Id) -> Result<Option<Self>> {
        if column.len() != self.ambient {
            return Err(Error::Dimension(format!(
                "column of length {} for ambient dimension {}",
                column.len(),
                self.ambient
            )));
        }
        if self.is_full() {
            return Ok(None);
        }
        let v = self.residual(column);
        let free = v
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.pivot_rows.contains(i));
        let Some(p) = largest_pivot(free) else {
            return Ok(None);
        };
        let mut next = self.clone();
        next.reduced.push(v);
        next.pivot_rows.push(p);
        next.selected.push(id);
        Ok(Some(next))
    }

    /// Copy-semantics extension: the returned state is extended iff the flag
    /// is `true`; `self` is left untouched either way.
    pub fn try_extend(&self, column: &[Rational], id: Id) -> Result<(Self, bool)> {
        Ok(match self.extended(column, id)? {
            Some(next) => (next, true),
            None => (self.clone(), false),
        })
    }

    /// Determinant of the square matrix whose columns are the selected
    /// columns in selection order. `None` unless the state is full.
    pub fn determinant(&self) -> Option<Rational> {
        if !self.is_full() {
            return None;
        }
        let mut d = Rational::one();
        for (r, &p) in self.reduced.iter().zip(&self.pivot_rows) {
            d *= &r[p];
        }
        if permutation_is_odd(&self.pivot_rows) {
            d = -d;
        }
        Some(d)
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}
