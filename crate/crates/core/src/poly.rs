//! Graded polynomials in `x, y, z` over the rationals.
//!
//! Monomials of a fixed degree are ordered reverse lexicographically:
//! `ν > μ` iff the last nonzero entry of `ν - μ` is negative. So for degree 2
//! the order is `x² > xy > y² > xz > yz > z²`. [`monomial_basis`] lists the
//! monomials in descending order and that list is the column order of every
//! coefficient matrix in this crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, rat, Matrix, Rational};

/// Exponent vector `(e1, e2, e3)` of `x^e1 y^e2 z^e3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponent(pub [u32; 3]);

impl Exponent {
    pub const fn new(e1: u32, e2: u32, e3: u32) -> Self {
        Exponent([e1, e2, e3])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_i64(&self) -> [i64; 3] {
        self.0.map(i64::from)
    }

    pub fn dot(&self, w: &[i64; 3]) -> i64 {
        self.as_i64().iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        Some(Exponent([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;

    fn add(self, o: Exponent) -> Exponent {
        Exponent([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

/// Graded reverse lexicographic order: higher degree first, then within a
/// degree `ν > μ` iff the last nonzero entry of `ν - μ` is negative.
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for k in (0..3).rev() {
                match self.0[k].cmp(&other.0[k]) {
                    Ordering::Equal => continue,
                    // a smaller trailing exponent means a larger monomial
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, e) in ["x", "y", "z"].iter().zip(self.0) {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All degree-`d` exponents in descending reverse lexicographic order.
pub fn monomial_basis(d: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(binomial_u64(d as u64 + 2, 2) as usize);
    for c in 0..=d {
        for b in 0..=d - c {
            out.push(Exponent::new(d - b - c, b, c));
        }
    }
    out
}

/// Polynomial with only nonzero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Exponent::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(*ea + *eb, ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, e: &Exponent) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k + *e, v.clone())).collect(),
        }
    }

    /// Coefficient vector against `basis`. Terms outside the basis are
    /// reported as an error.
    pub fn coefficient_row(&self, basis: &[Exponent]) -> Result<Vec<Rational>> {
        let index: BTreeMap<&Exponent, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut row = vec![Rational::zero(); basis.len()];
        for (e, c) in &self.terms {
            let i = index
                .get(e)
                .ok_or_else(|| Error::Dimension(format!("monomial {e} is not in the basis")))?;
            row[*i] = c.clone();
        }
        Ok(row)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending order reads naturally
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                if c.is_one() {
                    e.to_string()
                } else {
                    format!("({c})*{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Linear substitution of the variables. Row `i` of the matrix holds the
/// coefficients of `(x, y, z)` in the image of the `i`-th variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChange {
    matrix: Matrix,
}

impl LinearChange {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != 3 || matrix.cols() != 3 {
            return Err(Error::Dimension(format!(
                "linear change needs a 3x3 matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(LinearChange { matrix })
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        let m = Matrix::from_fn(3, 3, |i, j| rat(rows[i][j]));
        LinearChange { matrix: m }
    }

    pub fn identity() -> Self {
        LinearChange {
            matrix: Matrix::identity(3),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det(&self) -> Rational {
        linalg::det(&self.matrix).expect("3x3 is square")
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// The linear form substituted for variable `var` (0 = x, 1 = y, 2 = z).
    pub fn image(&self, var: usize) -> Poly {
        Poly::from_terms((0..3).map(|k| {
            let mut e = [0; 3];
            e[k] = 1;
            (Exponent(e), self.matrix[(var, k)].clone())
        }))
    }

    /// Substitutes and expands. `apply(h, apply(g, f)) == apply(g.then(h), f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let images: [Poly; 3] = [self.image(0), self.image(1), self.image(2)];
        let mut powers: [Vec<Poly>; 3] = Default::default();
        let mut out = Poly::zero();
        for (e, c) in f.terms() {
            let mut t = Poly::monomial(Exponent::new(0, 0, 0), c.clone());
            for v in 0..3 {
                let k = e.0[v] as usize;
                while powers[v].len() <= k {
                    let next = match powers[v].last() {
                        None => Poly::monomial(Exponent::new(0, 0, 0), Rational::one()),
                        Some(p) => p.mul(&images[v]),
                    };
                    powers[v].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[v][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// The change equal to applying `self` first and `next` second, i.e.
    /// `next.apply(&self.apply(f))`. Its matrix is `self.matrix · next.matrix`.
    pub fn then(&self, next: &LinearChange) -> LinearChange {
        LinearChange {
            matrix: self.matrix.mul(&next.matrix).expect("3x3 times 3x3"),
        }
    }

    pub fn scale(&self, c: &Rational) -> LinearChange {
        LinearChange {
            matrix: self.matrix.scale(c),
        }
    }
}

/// Homogeneous generators of a graded ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    generators: Vec<Poly>,
    degrees: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct IdealFile {
    generators: Vec<Vec<(i64, i64, [u32; 3])>>,
}

impl IdealSpec {
    pub fn new(generators: Vec<Poly>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Parse("an ideal needs at least one generator".into()));
        }
        let degrees = generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.is_zero() {
                    return Err(Error::Parse(format!("generator {i} is zero")));
                }
                g.homogeneous_degree()
                    .ok_or_else(|| Error::Parse(format!("generator {i} is not homogeneous")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealSpec {
            generators,
            degrees,
        })
    }

    pub fn monomial(exponents: &[Exponent]) -> Result<Self> {
        Self::new(
            exponents
                .iter()
                .map(|e| Poly::monomial(*e, Rational::one()))
                .collect(),
        )
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn min_degree(&self) -> u32 {
        *self.degrees.iter().min().expect("nonempty")
    }

    pub fn max_degree(&self) -> u32 {
        *self.degrees.iter().max().expect("nonempty")
    }

    pub fn apply(&self, g: &LinearChange) -> IdealSpec {
        IdealSpec {
            generators: self.generators.iter().map(|f| g.apply(f)).collect(),
            degrees: self.degrees.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IdealFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut gens = Vec::with_capacity(file.generators.len());
        for (i, terms) in file.generators.into_iter().enumerate() {
            let mut p = Poly::zero();
            for (num, den, e) in terms {
                if den == 0 {
                    return Err(Error::Parse(format!("zero denominator in generator {i}")));
                }
                p.add_term(Exponent(e), linalg::rat_frac(num, den));
            }
            gens.push(p);
        }
        Self::new(gens)
    }

    /// Serializes to the ideal-file format. Fails if a coefficient does not
    /// fit into `i64`.
    pub fn to_json(&self) -> Result<String> {
        use num_traits::ToPrimitive;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                g.terms()
                    .map(|(e, c)| {
                        let n = c.numer().to_i64();
                        let d = c.denom().to_i64();
                        match (n, d) {
                            (Some(n), Some(d)) => Ok((n, d, e.0)),
                            _ => Err(Error::Parse(format!("coefficient {c} overflows i64"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        serde_json::to_string(&IdealFile { generators }).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Origin of a row of a [`DegreeMatrix`]: `multiplier · generators[generator]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub generator: usize,
    pub multiplier: Exponent,
}

#[derive(Clone, Debug)]
pub struct DegreeMatrix {
    pub degree: u32,
    pub matrix: Matrix,
    pub rows: Vec<RowLabel>,
    pub columns: Vec<Exponent>,
}

/// Coefficient matrix whose row space is `I_e`: one row per product of a
/// generator with a monomial of complementary degree, columns in
/// [`monomial_basis`] order.
pub fn degree_matrix(ideal: &IdealSpec, e: u32) -> Result<DegreeMatrix> {
    if e < ideal.min_degree() {
        return Err(Error::Precondition(format!(
            "degree {e} is below the minimal generator degree {}",
            ideal.min_degree()
        )));
    }
    let columns = monomial_basis(e);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (gi, (g, &deg)) in ideal.generators.iter().zip(&ideal.degrees).enumerate() {
        if deg > e {
            continue;
        }
        for mult in monomial_basis(e - deg) {
            rows.push(g.mul_monomial(&mult).coefficient_row(&columns)?);
            labels.push(RowLabel {
                generator: gi,
                multiplier: mult,
            });
        }
    }
    let matrix = if rows.is_empty() {
        Matrix::zeros(0, columns.len())
    } else {
        Matrix::from_rows(rows)?
    };
    Ok(DegreeMatrix {
        degree: e,
        matrix,
        rows: labels,
        columns,
    })
}

/// `dim_K(I_e)`.
pub fn graded_dimension(ideal: &IdealSpec, e: u32) -> Result<usize> {
    Ok(linalg::rank(&degree_matrix(ideal, e)?.matrix))
}
