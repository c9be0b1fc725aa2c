//! Degree components of the Gröbner fan via the column matroid of a
//! coefficient matrix.
//!
//! For a matrix `A` whose row space is `I_e` and whose columns are labelled by
//! the degree-`e` monomials, the nonzero Plücker coordinates of `I_e` are the
//! column bases `J` of `A`. A weight `ω` lies in the maximal cone belonging to
//! `m` iff `ω·m < ω·m_J` for every other point `m_J`, so the maximal cones are
//! the vertices of the polygon `conv{m_J}`. The minimum of `ω·m_J` over all
//! bases is a minimum-weight basis problem on the column matroid, solved
//! exactly by the greedy algorithm.
//!
//! All points lie in a plane `Σ m_i = const`, and weights differing by a
//! multiple of `(1, 1, 1)` act identically, so directions are handled as
//! primitive integer pairs `(a, b)` standing for `ω = (a, b, 0)`.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, EliminationState, Matrix, Rational};
use crate::par;
use crate::poly::{DegreeMatrix, Exponent};

pub type Point = [i64; 3];

/// Integer weight vector, not a multiple of `(1, 1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightVector(pub [i64; 3]);

impl WeightVector {
    pub fn new(w: [i64; 3]) -> Result<Self> {
        if w[0] == w[1] && w[1] == w[2] {
            return Err(Error::InvalidDirection(w[0] - w[2], w[1] - w[2]));
        }
        Ok(WeightVector(w))
    }

    pub fn dot(&self, m: &Point) -> i64 {
        self.0.iter().zip(m).map(|(a, b)| a * b).sum()
    }

    pub fn shifted(&self, c: i64) -> WeightVector {
        WeightVector(self.0.map(|v| v + c))
    }

    /// The primitive pair representing this weight modulo `(1, 1, 1)`.
    pub fn direction(&self) -> Direction {
        Direction::primitive(self.0[0] - self.0[2], self.0[1] - self.0[2])
            .expect("weight is not a multiple of (1,1,1)")
    }
}

/// Primitive integer direction `(a, b)`, standing for `ω = (a, b, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Direction {
    a: i64,
    b: i64,
}

impl Direction {
    /// Accepts only primitive pairs.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if (a, b) == (0, 0) || a.gcd(&b) != 1 {
            return Err(Error::InvalidDirection(a, b));
        }
        Ok(Direction { a, b })
    }

    /// Divides out the gcd.
    pub fn primitive(a: i64, b: i64) -> Result<Self> {
        if (a, b) == (0, 0) {
            return Err(Error::InvalidDirection(a, b));
        }
        let g = a.gcd(&b);
        Ok(Direction { a: a / g, b: b / g })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn weight(&self) -> WeightVector {
        WeightVector([self.a, self.b, 0])
    }

    pub fn value(&self, m: &Point) -> i64 {
        self.a * m[0] + self.b * m[1]
    }

    fn neg(&self) -> Direction {
        Direction {
            a: -self.a,
            b: -self.b,
        }
    }

    /// Rotation by +90°: the inward normal of a counterclockwise edge.
    fn left_normal(&self) -> Direction {
        Direction {
            a: -self.b,
            b: self.a,
        }
    }
}

fn sub2(p: &Point, q: &Point) -> (i64, i64) {
    (p[0] - q[0], p[1] - q[1])
}

/// Column basis `J` together with `m_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisIndexSet {
    pub columns: Vec<usize>,
    pub elements: Vec<Exponent>,
    pub m: Point,
}

impl BasisIndexSet {
    fn from_columns(mut columns: Vec<usize>, labels: &[Exponent]) -> Self {
        columns.sort_unstable();
        let elements: Vec<Exponent> = columns.iter().map(|&c| labels[c]).collect();
        let mut m = [0i64; 3];
        for e in &elements {
            for (acc, v) in m.iter_mut().zip(e.as_i64()) {
                *acc += v;
            }
        }
        BasisIndexSet {
            columns,
            elements,
            m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanVertex {
    pub m: Point,
    pub certificate: WeightVector,
    pub witness: BasisIndexSet,
}

/// All vertices of `conv{m_J}` for one coefficient matrix, counterclockwise in
/// the `(m1, m2)` projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFanComponent {
    pub degree: u32,
    pub ideal_dim: usize,
    pub vertices: Vec<FanVertex>,
}

impl DegreeFanComponent {
    pub fn count(&self) -> usize {
        self.vertices.len()
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|v| v.m).collect()
    }

    pub fn sorted_points(&self) -> Vec<Point> {
        let mut p = self.points();
        p.sort_unstable();
        p
    }

    pub fn contains(&self, m: &Point) -> bool {
        self.vertices.iter().any(|v| &v.m == m)
    }

    /// `Σ m_i` shared by every point of the component.
    pub fn plane_sum(&self) -> i64 {
        i64::from(self.degree) * self.ideal_dim as i64
    }
}

/// Column matroid of a coefficient matrix, reduced to a row basis.
#[derive(Clone, Debug)]
pub struct ColumnMatroid {
    degree: u32,
    rank: usize,
    columns: Vec<Vec<Rational>>,
    labels: Vec<Exponent>,
    /// Column indices sorted by the frozen tie-break: descending reverse
    /// lexicographic order of the labels.
    tie_order: Vec<usize>,
}

impl ColumnMatroid {
    pub fn new(a: &Matrix, labels: Vec<Exponent>) -> Result<Self> {
        if labels.len() != a.cols() {
            return Err(Error::Dimension(format!(
                "{} column labels for {} columns",
                labels.len(),
                a.cols()
            )));
        }
        let degree = labels.first().map_or(0, Exponent::degree);
        if labels.iter().any(|e| e.degree() != degree) {
            return Err(Error::Dimension("column labels of mixed degree".into()));
        }
        let basis = linalg::row_basis(a);
        if basis.rows() == 0 {
            return Err(Error::NoBasis);
        }
        let columns = (0..basis.cols()).map(|j| basis.column(j)).collect();
        let mut tie_order: Vec<usize> = (0..labels.len()).collect();
        tie_order.sort_by(|&i, &j| labels[j].cmp(&labels[i]));
        Ok(ColumnMatroid {
            degree,
            rank: basis.rows(),
            columns,
            labels,
            tie_order,
        })
    }

    pub fn from_degree_matrix(dm: &DegreeMatrix) -> Result<Self> {
        Self::new(&dm.matrix, dm.columns.clone())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn labels(&self) -> &[Exponent] {
        &self.labels
    }

    pub fn plane_sum(&self) -> i64 {
        i64::from(self.degree) * self.rank as i64
    }

    /// Minimum of `ω·m_J` over all column bases, by the matroid greedy
    /// algorithm. Columns of equal weight are taken in descending reverse
    /// lexicographic order of their labels.
    ///
    /// The tie-break acts like a lexicographic perturbation of `ω` by
    /// `(0, 0, 1)` and then `(0, 1, 0)`, which are independent modulo
    /// `(1, 1, 1)`. Hence the returned `m_J` is always a vertex of the
    /// polygon, even when `ω` is normal to one of its edges.
    pub fn greedy_min_basis(&self, w: &WeightVector) -> BasisIndexSet {
        let mut order: Vec<(i64, usize)> = self
            .tie_order
            .iter()
            .map(|&c| (self.labels[c].dot(&w.0), c))
            .collect();
        // stable: preserves the tie order among equal weights
        order.sort_by_key(|&(v, _)| v);
        let mut state: EliminationState<usize> = EliminationState::new(self.rank);
        for (_, c) in order {
            if let Some(next) = state
                .extended(&self.columns[c], c)
                .expect("column length equals rank")
            {
                state = next;
                if state.is_full() {
                    break;
                }
            }
        }
        BasisIndexSet::from_columns(state.selected().to_vec(), &self.labels)
    }

    /// The vertex minimizing `a·m1 + b·m2`, with that minimum.
    pub fn support_vertex(&self, dir: Direction) -> (Point, i64) {
        let m = self.greedy_min_basis(&dir.weight()).m;
        (m, dir.value(&m))
    }

    /// Complete vertex set of `conv{m_J}` by gift wrapping on the support
    /// function, each vertex with a strict certificate that is re-checked
    /// against the greedy oracle.
    pub fn enumerate_vertices(&self) -> Result<DegreeFanComponent> {
        let cycle = self.sweep();
        let plane = self.plane_sum();
        if let Some(bad) = cycle.iter().find(|m| m.iter().sum::<i64>() != plane) {
            return Err(Error::Internal(format!(
                "point {bad:?} is off the plane sum {plane}"
            )));
        }
        let certs = certificates(&cycle);
        let checked = par::map(cycle.into_iter().zip(certs).collect(), |(m, cert)| {
            let witness = self.greedy_min_basis(&cert);
            (m, cert, witness)
        });
        let mut vertices = Vec::with_capacity(checked.len());
        for (m, certificate, witness) in checked {
            if witness.m != m {
                return Err(Error::Internal(format!(
                    "certificate {:?} for {m:?} selects {:?}",
                    certificate.0, witness.m
                )));
            }
            vertices.push(FanVertex {
                m,
                certificate,
                witness,
            });
        }
        for v in &vertices {
            let own = v.certificate.dot(&v.m);
            if vertices
                .iter()
                .any(|o| o.m != v.m && v.certificate.dot(&o.m) <= own)
            {
                return Err(Error::Internal(format!(
                    "certificate {:?} is not strict at {:?}",
                    v.certificate.0, v.m
                )));
            }
        }
        Ok(DegreeFanComponent {
            degree: self.degree,
            ideal_dim: self.rank,
            vertices,
        })
    }

    /// Vertices in counterclockwise order in the `(m1, m2)` projection.
    fn sweep(&self) -> Vec<Point> {
        let x = Direction { a: 1, b: 0 };
        let y = Direction { a: 0, b: 1 };
        let (mut p, mut q) = par::join(
            || self.support_vertex(x).0,
            || self.support_vertex(x.neg()).0,
        );
        if p == q {
            // zero width along m1: a point or a segment with constant m1
            (p, q) = par::join(
                || self.support_vertex(y).0,
                || self.support_vertex(y.neg()).0,
            );
            if p == q {
                return vec![p];
            }
        }
        let (upper, lower) = par::join(|| self.chain(&p, &q), || self.chain(&q, &p));
        let mut out = Vec::with_capacity(upper.len() + lower.len() + 2);
        out.push(p);
        out.extend(upper);
        out.push(q);
        out.extend(lower);
        out
    }

    /// Vertices strictly to the right of the directed segment `p -> q`, in
    /// order from `p` to `q`.
    fn chain(&self, p: &Point, q: &Point) -> Vec<Point> {
        let (dx, dy) = sub2(q, p);
        let n = Direction::primitive(-dy, dx).expect("p != q");
        let (r, value) = self.support_vertex(n);
        if value >= n.value(p) {
            return Vec::new();
        }
        let (mut left, right) = par::join(|| self.chain(p, &r), || self.chain(&r, q));
        left.push(r);
        left.extend(right);
        left
    }
}

/// Strict certificate directions for a counterclockwise vertex cycle.
fn certificates(cycle: &[Point]) -> Vec<WeightVector> {
    let k = cycle.len();
    match k {
        1 => vec![Direction { a: 1, b: 0 }.weight()],
        2 => {
            let (dx, dy) = sub2(&cycle[1], &cycle[0]);
            let d = Direction::primitive(dx, dy).expect("distinct endpoints");
            vec![d.weight(), d.neg().weight()]
        }
        _ => (0..k)
            .map(|i| {
                let prev = &cycle[(i + k - 1) % k];
                let cur = &cycle[i];
                let next = &cycle[(i + 1) % k];
                let (ax, ay) = sub2(cur, prev);
                let (bx, by) = sub2(next, cur);
                let na = Direction::primitive(ax, ay).expect("distinct").left_normal();
                let nb = Direction::primitive(bx, by).expect("distinct").left_normal();
                Direction::primitive(na.a + nb.a, na.b + nb.b)
                    .expect("adjacent edges of a convex polygon are not antiparallel")
                    .weight()
            })
            .collect(),
    }
}

pub fn greedy_min_basis(a: &Matrix, labels: &[Exponent], w: &WeightVector) -> Result<BasisIndexSet> {
    Ok(ColumnMatroid::new(a, labels.to_vec())?.greedy_min_basis(w))
}

pub fn support_vertex(a: &Matrix, labels: &[Exponent], dir: Direction) -> Result<(Point, i64)> {
    Ok(ColumnMatroid::new(a, labels.to_vec())?.support_vertex(dir))
}

pub fn enumerate_vertices(a: &Matrix, labels: &[Exponent]) -> Result<DegreeFanComponent> {
    ColumnMatroid::new(a, labels.to_vec())?.enumerate_vertices()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeLocation {
    pub index: usize,
    pub m: Point,
    /// `true` iff the minimum of `ω·m` over the vertices is attained once,
    /// i.e. `ω` is interior to a maximal cone.
    pub strict: bool,
}

/// The vertex minimizing `ω·m`, and whether the minimum is unique.
pub fn locate_cone(component: &DegreeFanComponent, w: &WeightVector) -> ConeLocation {
    let values: Vec<i64> = component.vertices.iter().map(|v| w.dot(&v.m)).collect();
    let (index, min) = values
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map(|(i, v)| (i, *v))
        .expect("component has at least one vertex");
    let strict = values.iter().filter(|v| **v == min).count() == 1;
    ConeLocation {
        index,
        m: component.vertices[index].m,
        strict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedCone {
    pub certificate: WeightVector,
    /// Per input component, the vertex selected by the certificate.
    pub parts: Vec<Point>,
    /// Sum of `parts`: the vertex of the Minkowski sum.
    pub m: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedFan {
    pub count: usize,
    pub cones: Vec<RefinedCone>,
}

fn half(d: &Direction) -> u8 {
    if d.b > 0 || (d.b == 0 && d.a > 0) {
        0
    } else {
        1
    }
}

/// Angular order starting at `(1, 0)`, counterclockwise.
fn angle_cmp(p: &Direction, q: &Direction) -> Ordering {
    half(p).cmp(&half(q)).then_with(|| {
        let cross = p.a as i128 * q.b as i128 - p.b as i128 * q.a as i128;
        0.cmp(&cross)
    })
}

fn edge_directions(component: &DegreeFanComponent) -> Vec<Direction> {
    let pts = component.points();
    let k = pts.len();
    if k < 2 {
        return Vec::new();
    }
    (0..k)
        .map(|i| {
            let (dx, dy) = sub2(&pts[(i + 1) % k], &pts[i]);
            Direction::primitive(dx, dy).expect("distinct vertices")
        })
        .collect()
}

/// Common refinement of the normal fans, realized as the normal fan of the
/// Minkowski sum: the merged, angle-sorted edge directions of all inputs.
pub fn refine(components: &[DegreeFanComponent]) -> Result<RefinedFan> {
    if components.is_empty() {
        return Err(Error::Precondition("refine needs at least one component".into()));
    }
    let mut dirs: Vec<Direction> = components.iter().flat_map(edge_directions).collect();
    dirs.sort_by(angle_cmp);
    dirs.dedup();
    let certs: Vec<WeightVector> = match dirs.len() {
        0 => vec![Direction { a: 1, b: 0 }.weight()],
        k => (0..k)
            .map(|i| {
                let cur = dirs[i];
                let next = dirs[(i + 1) % k];
                let (na, nb) = (cur.left_normal(), next.left_normal());
                match Direction::primitive(na.a + nb.a, na.b + nb.b) {
                    Ok(d) => d.weight(),
                    // antiparallel neighbours: the sum is a segment
                    Err(_) => next.weight(),
                }
            })
            .collect(),
    };
    let mut cones = Vec::with_capacity(certs.len());
    for certificate in certs {
        let mut parts = Vec::with_capacity(components.len());
        let mut m = [0i64; 3];
        for c in components {
            let loc = locate_cone(c, &certificate);
            if !loc.strict {
                return Err(Error::Internal(format!(
                    "refined certificate {:?} is not strict in degree {}",
                    certificate.0, c.degree
                )));
            }
            for (acc, v) in m.iter_mut().zip(loc.m) {
                *acc += v;
            }
            parts.push(loc.m);
        }
        cones.push(RefinedCone {
            certificate,
            parts,
            m,
        });
    }
    Ok(RefinedFan {
        count: cones.len(),
        cones,
    })
}
