//! Randomized realization of "generic".
//!
//! A property holding on a nonempty Zariski-open set is tested by evaluating
//! at random integer points. All randomness comes from ChaCha8
//! (`rand_chacha::ChaCha8Rng`, whose output is stable across releases),
//! seeded with the user seed and split into independent streams per sample
//! index. Integers are drawn from `[-height, height]` by rejection sampling on
//! raw 64-bit outputs, so results do not depend on any distribution code.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{locate_cone, ColumnMatroid, DegreeFanComponent, Point};
use crate::family::{self, omega_lambda, valid_n_count};
use crate::linalg::{self, rat, Matrix};
use crate::par;
use crate::poly::{degree_matrix, graded_dimension, monomial_basis, IdealSpec, LinearChange, Poly};

pub const DEFAULT_SEED: u64 = 2_718_281_828;
pub const DEFAULT_HEIGHT: u64 = 1000;
pub const DEFAULT_SAMPLES: usize = 5;
pub const MAX_ATTEMPTS: usize = 1000;

const GL3_STREAM: u64 = 1 << 40;
const IDEAL_STREAM: u64 = 2 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub height: u64,
    pub samples: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: DEFAULT_SEED,
            height: DEFAULT_HEIGHT,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.height == 0 {
            return Err(Error::Domain("height must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".into()));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Uniform integer in `[-height, height]` by rejection.
fn draw(rng: &mut ChaCha8Rng, height: u64) -> i64 {
    let span = 2 * height + 1;
    let zone = u64::MAX - (u64::MAX % span);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % span) as i64 - height as i64;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampledChange {
    pub index: u64,
    pub entries: [[i64; 3]; 3],
    pub resamples: usize,
}

impl SampledChange {
    pub fn change(&self) -> LinearChange {
        LinearChange::from_i64(self.entries)
    }
}

/// Deterministic invertible integer matrix for `(seed, index)`.
pub fn random_gl3(config: &SamplerConfig, index: u64) -> Result<SampledChange> {
    config.validate()?;
    let mut rng = config.rng(GL3_STREAM + index);
    for attempt in 0..MAX_ATTEMPTS {
        let mut entries = [[0i64; 3]; 3];
        for row in entries.iter_mut() {
            for v in row.iter_mut() {
                *v = draw(&mut rng, config.height);
            }
        }
        if LinearChange::from_i64(entries).is_invertible() {
            return Ok(SampledChange {
                index,
                entries,
                resamples: attempt,
            });
        }
    }
    Err(Error::ResampleCap(MAX_ATTEMPTS))
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericFanResult {
    /// The component of the first sample; equal to all others iff `agreement`.
    pub component: DegreeFanComponent,
    pub agreement: bool,
    pub per_sample_counts: Vec<usize>,
    /// Distinct vertex sets seen across samples, sorted.
    pub distinct_sets: Vec<Vec<Point>>,
    pub used_matrices: Vec<SampledChange>,
}

/// Degree-`e` fan component of `g(I)` for `config.samples` random `g`.
pub fn generic_degree_fan(ideal: &IdealSpec, e: u32, config: &SamplerConfig) -> Result<GenericFanResult> {
    config.validate()?;
    let runs = par::map((0..config.samples as u64).collect(), |i| -> Result<_> {
        let g = random_gl3(config, i)?;
        let moved = ideal.apply(&g.change());
        let dm = degree_matrix(&moved, e)?;
        let matroid = ColumnMatroid::from_degree_matrix(&dm).map_err(|err| match err {
            Error::NoBasis => Error::Precondition(format!("dim I_{e} = 0")),
            other => other,
        })?;
        Ok((g, matroid.enumerate_vertices()?))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut distinct_sets: Vec<Vec<Point>> = runs.iter().map(|(_, c)| c.sorted_points()).collect();
    distinct_sets.sort();
    distinct_sets.dedup();
    let per_sample_counts = runs.iter().map(|(_, c)| c.count()).collect();
    let used_matrices = runs.iter().map(|(g, _)| g.clone()).collect();
    let component = runs.into_iter().next().expect("samples >= 1").1;
    Ok(GenericFanResult {
        agreement: distinct_sets.len() == 1,
        component,
        per_sample_counts,
        distinct_sets,
        used_matrices,
    })
}

fn stability_error(fan: &GenericFanResult) -> Error {
    Error::Stability(format!(
        "per-sample vertex counts {:?}, {} distinct vertex sets",
        fan.per_sample_counts,
        fan.distinct_sets.len()
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct GinBound {
    pub count: usize,
    pub fan: GenericFanResult,
}

/// Vertex count of the stabilized generic degree-`d` component: a lower bound
/// for the number of generic initial ideals.
pub fn gin_lower_bound(ideal: &IdealSpec, d: u32, config: &SamplerConfig) -> Result<GinBound> {
    if ideal.degrees().iter().any(|&g| g != d) {
        return Err(Error::Precondition(format!("generators are not all of degree {d}")));
    }
    let dim = graded_dimension(ideal, d)?;
    if dim != d as usize + 1 {
        return Err(Error::Precondition(format!(
            "dim I_{d} = {dim}, expected {}",
            d + 1
        )));
    }
    let fan = generic_degree_fan(ideal, d, config)?;
    if !fan.agreement {
        return Err(stability_error(&fan));
    }
    Ok(GinBound {
        count: fan.component.count(),
        fan,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocatedCone {
    pub n: u32,
    pub omega: [i64; 3],
    pub m: Point,
    pub strict: bool,
    /// `m_{J(n)}`, and whether it is a vertex of the component.
    pub m_j: Point,
    pub j_realized: bool,
}

/// Locates the cone of `ω(n)` for every `0 <= n < d/3`.
pub fn locate_separating_cones(d: u32, component: &DegreeFanComponent) -> Result<Vec<LocatedCone>> {
    (0..valid_n_count(d))
        .map(|n| {
            let sep = omega_lambda(d, n)?;
            let loc = locate_cone(component, &sep.omega);
            let m_j = sep.m_j();
            Ok(LocatedCone {
                n,
                omega: sep.omega.0,
                m: loc.m,
                strict: loc.strict,
                m_j,
                j_realized: component.contains(&m_j),
            })
        })
        .collect()
}

/// All located cones strict and pairwise distinct.
pub fn cones_distinct(located: &[LocatedCone]) -> bool {
    let mut ms: Vec<Point> = located.iter().map(|l| l.m).collect();
    ms.sort_unstable();
    ms.dedup();
    ms.len() == located.len() && located.iter().all(|l| l.strict)
}

/// `⌊(d-1)/3⌋ + 1`, the number of `n` with `3n < d`.
pub fn expected_bound(d: u32) -> usize {
    valid_n_count(d) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyBoundReport {
    pub d: u32,
    pub bound: usize,
    pub count: usize,
    pub located: Vec<LocatedCone>,
    pub cones_distinct: bool,
    pub count_ok: bool,
    pub fan: GenericFanResult,
}

impl FamilyBoundReport {
    pub fn passed(&self) -> bool {
        self.count_ok && self.cones_distinct
    }
}

/// Generic degree-`d` component of `I(d)` with the `ω(n)` cone checks.
pub fn family_bound(d: u32, config: &SamplerConfig) -> Result<FamilyBoundReport> {
    let ideal = family::family_ideal(d)?.to_ideal();
    let gb = gin_lower_bound(&ideal, d, config)?;
    let located = locate_separating_cones(d, &gb.fan.component)?;
    let bound = expected_bound(d);
    Ok(FamilyBoundReport {
        d,
        bound,
        count: gb.count,
        cones_distinct: cones_distinct(&located),
        count_ok: gb.count >= bound,
        located,
        fan: gb.fan,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomIdealSpec {
    pub d: u32,
    /// `q[i][k]` is the coefficient of the `k`-th monomial of
    /// [`monomial_basis`]`(d)` in the `i`-th generator.
    pub q: Vec<Vec<i64>>,
}

impl RandomIdealSpec {
    pub fn to_ideal(&self) -> Result<IdealSpec> {
        let basis = monomial_basis(self.d);
        IdealSpec::new(
            self.q
                .iter()
                .map(|row| Poly::from_terms(basis.iter().zip(row).map(|(e, &c)| (*e, rat(c)))))
                .collect(),
        )
    }

    pub fn coefficient_matrix(&self) -> Matrix {
        Matrix::from_fn(self.q.len(), self.q[0].len(), |i, j| rat(self.q[i][j]))
    }
}

#[derive(Clone, Debug)]
pub struct RandomIdeal {
    pub spec: RandomIdealSpec,
    pub ideal: IdealSpec,
    pub resamples: usize,
}

/// `d+1` dense degree-`d` forms with coefficients in `[-height, height]`,
/// resampled until they are linearly independent.
pub fn random_dense_ideal(d: u32, config: &SamplerConfig, trial: u64) -> Result<RandomIdeal> {
    if d < 3 {
        return Err(Error::Domain(format!("need d >= 3, got {d}")));
    }
    config.validate()?;
    let cols = monomial_basis(d).len();
    let mut rng = config.rng(IDEAL_STREAM + trial);
    for attempt in 0..MAX_ATTEMPTS {
        let q: Vec<Vec<i64>> = (0..=d)
            .map(|_| (0..cols).map(|_| draw(&mut rng, config.height)).collect())
            .collect();
        let spec = RandomIdealSpec { d, q };
        if linalg::rank(&spec.coefficient_matrix()) != d as usize + 1 {
            continue;
        }
        return Ok(RandomIdeal {
            ideal: spec.to_ideal()?,
            spec,
            resamples: attempt,
        });
    }
    Err(Error::ResampleCap(MAX_ATTEMPTS))
}

/// A `q` whose generators all coincide (dimension 1).
pub fn degenerate_dense_ideal(d: u32, config: &SamplerConfig, trial: u64) -> Result<RandomIdeal> {
    let base = random_dense_ideal(d, config, trial)?;
    let row = base.spec.q[0].clone();
    let spec = RandomIdealSpec {
        d,
        q: vec![row; d as usize + 1],
    };
    Ok(RandomIdeal {
        ideal: spec.to_ideal()?,
        spec,
        resamples: base.resamples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub resamples: usize,
    pub dimension: usize,
    pub dimension_ok: bool,
    pub agreement: bool,
    pub count: Option<usize>,
    pub count_ok: bool,
    pub located: Vec<LocatedCone>,
    pub cones_distinct: bool,
    pub passed: bool,
    pub error: Option<String>,
    pub q: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub d: u32,
    pub bound: usize,
    pub trials: Vec<TrialOutcome>,
    pub passes: usize,
}

fn run_trial(d: u32, config: &SamplerConfig, trial: u64, degenerate: bool) -> TrialOutcome {
    let mut out = TrialOutcome {
        trial,
        resamples: 0,
        dimension: 0,
        dimension_ok: false,
        agreement: false,
        count: None,
        count_ok: false,
        located: Vec::new(),
        cones_distinct: false,
        passed: false,
        error: None,
        q: Vec::new(),
    };
    let sampled = if degenerate {
        degenerate_dense_ideal(d, config, trial)
    } else {
        random_dense_ideal(d, config, trial)
    };
    let ri = match sampled {
        Ok(ri) => ri,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.resamples = ri.resamples;
    out.q = ri.spec.q.clone();
    out.dimension = linalg::rank(&ri.spec.coefficient_matrix());
    out.dimension_ok = out.dimension == d as usize + 1;
    if !out.dimension_ok {
        out.error = Some(format!("dim I_{d} = {}, expected {}", out.dimension, d + 1));
        return out;
    }
    let fan = match generic_degree_fan(&ri.ideal, d, config) {
        Ok(f) => f,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.agreement = fan.agreement;
    if !fan.agreement {
        out.error = Some(stability_error(&fan).to_string());
        return out;
    }
    let count = fan.component.count();
    out.count = Some(count);
    out.count_ok = count >= expected_bound(d);
    match locate_separating_cones(d, &fan.component) {
        Ok(located) => {
            out.cones_distinct = cones_distinct(&located);
            out.located = located;
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out.passed = out.count_ok && out.cones_distinct;
    out
}

/// Samples `trials` dense ideals and checks the lower bound on each.
pub fn theorem_generic_experiment(
    d: u32,
    trials: u64,
    config: &SamplerConfig,
    degenerate: bool,
) -> Result<ExperimentReport> {
    if d < 3 {
        return Err(Error::Domain(format!("need d >= 3, got {d}")));
    }
    config.validate()?;
    let outcomes = par::map((0..trials).collect(), |t| run_trial(d, config, t, degenerate));
    Ok(ExperimentReport {
        d,
        bound: expected_bound(d),
        passes: outcomes.iter().filter(|t| t.passed).count(),
        trials: outcomes,
    })
}
