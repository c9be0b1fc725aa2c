//! Exhaustive Plücker coordinates for small instances.
//!
//! Every maximal minor of a row basis is evaluated exactly. Subsets are walked
//! depth first in lexicographic order; the elimination state of a prefix is
//! shared by all its extensions, and a dependent prefix prunes its subtree
//! (every minor containing it vanishes).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::Point;
use crate::linalg::{self, EliminationState, Matrix, Rational};
use crate::par;
use crate::poly::Exponent;

pub const DEFAULT_LIMIT: u64 = 100_000;
pub const LIMIT_ENV: &str = "GINFAN_BRUTE_LIMIT";

/// Subset limit from `GINFAN_BRUTE_LIMIT`, or [`DEFAULT_LIMIT`].
pub fn default_limit() -> u64 {
    std::env::var(LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LIMIT)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct PlueckerTable {
    pub labels: Vec<Exponent>,
    pub rank: usize,
    /// Nonzero coordinates keyed by sorted column indices.
    #[serde(skip)]
    pub entries: BTreeMap<Vec<usize>, Rational>,
    pub total_subsets: u64,
}

impl PlueckerTable {
    pub fn nonzero(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, columns: &[usize]) -> Option<&Rational> {
        self.entries.get(columns)
    }
}

/// All nonzero maximal minors of a row basis of `a`.
pub fn all_pluecker(a: &Matrix, labels: &[Exponent], limit: u64) -> Result<PlueckerTable> {
    if labels.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "{} column labels for {} columns",
            labels.len(),
            a.cols()
        )));
    }
    let basis = linalg::row_basis(a);
    let r = basis.rows();
    let n = basis.cols();
    let total = binomial(n, r);
    let total_u64 = match total.to_u64() {
        Some(t) if t <= limit => t,
        _ => {
            return Err(Error::LimitExceeded {
                count: total.to_string(),
                limit,
            })
        }
    };
    let columns: Vec<Vec<Rational>> = (0..n).map(|j| basis.column(j)).collect();
    let mut entries = BTreeMap::new();
    if r == 0 {
        entries.insert(Vec::new(), Rational::from_integer(1.into()));
    } else {
        let firsts: Vec<usize> = (0..=n - r).collect();
        let parts = par::map(firsts, |first| -> Result<Vec<(Vec<usize>, Rational)>> {
            let mut out = Vec::new();
            let root = EliminationState::new(r);
            if let Some(state) = root.extended(&columns[first], first)? {
                walk(&columns, state, first + 1, &mut out)?;
            }
            Ok(out)
        });
        for part in parts {
            entries.extend(part?);
        }
    }
    Ok(PlueckerTable {
        labels: labels.to_vec(),
        rank: r,
        entries,
        total_subsets: total_u64,
    })
}

fn walk(
    columns: &[Vec<Rational>],
    state: EliminationState<usize>,
    next: usize,
    out: &mut Vec<(Vec<usize>, Rational)>,
) -> Result<()> {
    if state.is_full() {
        let det = state.determinant().expect("full state");
        out.push((state.selected().to_vec(), det));
        return Ok(());
    }
    let missing = state.ambient() - state.len();
    for c in next..=columns.len() - missing {
        if let Some(child) = state.extended(&columns[c], c)? {
            walk(columns, child, c + 1, out)?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrutePoint {
    pub m: Point,
    pub witness: Vec<Exponent>,
}

/// Distinct `m_J` over the nonzero coordinates, each with its first witness.
pub fn brute_m(table: &PlueckerTable) -> Vec<BrutePoint> {
    let mut seen: BTreeMap<Point, Vec<Exponent>> = BTreeMap::new();
    for cols in table.entries.keys() {
        let witness: Vec<Exponent> = cols.iter().map(|&c| table.labels[c]).collect();
        let mut m = [0i64; 3];
        for e in &witness {
            for (acc, v) in m.iter_mut().zip(e.as_i64()) {
                *acc += v;
            }
        }
        seen.entry(m).or_insert(witness);
    }
    seen.into_iter()
        .map(|(m, witness)| BrutePoint { m, witness })
        .collect()
}

fn cross(o: &Point, a: &Point, b: &Point) -> i128 {
    let (ax, ay) = (i128::from(a[0] - o[0]), i128::from(a[1] - o[1]));
    let (bx, by) = (i128::from(b[0] - o[0]), i128::from(b[1] - o[1]));
    ax * by - ay * bx
}

/// Hull vertices of coplanar points in the `(m1, m2)` projection, by the
/// monotone chain algorithm, counterclockwise. Collinear boundary points are
/// not vertices.
pub fn brute_vertices(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable_by_key(|p| (p[0], p[1]));
    pts.dedup_by_key(|p| (p[0], p[1]));
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

/// `brute_vertices ∘ brute_m ∘ all_pluecker`, sorted.
pub fn brute_hull(a: &Matrix, labels: &[Exponent], limit: u64) -> Result<Vec<Point>> {
    let table = all_pluecker(a, labels, limit)?;
    if table.rank == 0 {
        return Err(Error::NoBasis);
    }
    let ms: Vec<Point> = brute_m(&table).into_iter().map(|b| b.m).collect();
    let mut v = brute_vertices(&ms);
    v.sort_unstable();
    Ok(v)
}
