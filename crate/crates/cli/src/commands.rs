use std::path::Path;
use std::time::Instant;

use ginfan_core::fan::{refine, DegreeFanComponent};
use ginfan_core::family::{appendix_reduction, check_separation, valid_n_count};
use ginfan_core::generic::{self, family_bound, generic_degree_fan, theorem_generic_experiment, GenericFanResult};
use ginfan_core::oracle::{brute_hull, default_limit};
use ginfan_core::poly::degree_matrix;
use ginfan_core::{Error, IdealSpec};
use serde_json::{json, Value};

use crate::report::{triple, vertex_rows, vertex_table, RunReport, Table, Timings, Verdict};
use crate::{CliError, Command, Sampling};

/// Largest `d` at which the block-determinant chain must also be factor-consistent.
pub const CHAIN_CHECK_DMAX: u32 = 10;

pub fn execute(command: &Command) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (name, params, results, ok, table) = match command {
        Command::VerifyVertices { dmax } => verify_vertices(*dmax)?,
        Command::VerifyAppendix { dmax } => verify_appendix(*dmax)?,
        Command::FamilyBound { d, sampling } => cmd_family_bound(*d, sampling)?,
        Command::Fan {
            ideal,
            degree,
            sampling,
            brute,
            brute_limit,
        } => cmd_fan(ideal, *degree, sampling, *brute, *brute_limit)?,
        Command::Refine {
            ideal,
            degrees,
            sampling,
        } => cmd_refine(ideal, *degrees, sampling)?,
        Command::RandomQ {
            d,
            trials,
            sampling,
            min_rate,
            degenerate,
        } => cmd_random_q(*d, *trials, sampling, *min_rate, *degenerate)?,
    };
    Ok(RunReport {
        command: name.to_string(),
        params,
        results,
        verdict: Verdict::from_bool(ok),
        timings: Timings::from_duration(start.elapsed()),
        table,
    })
}

type Parts = (&'static str, Value, Value, bool, Table);

fn sampling_params(s: &Sampling) -> Value {
    json!({ "seed": s.seed, "height": s.height, "samples": s.samples })
}

fn read_ideal(path: &Path) -> Result<IdealSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(IdealSpec::from_json(&text)?)
}

fn verify_vertices(dmax: u32) -> Result<Parts, CliError> {
    let mut rows = Vec::new();
    let mut table = Table::new(&["d", "n", "omega", "lambda", "m_j", "boundary", "passed"]);
    for d in 3..=dmax {
        for n in 0..valid_n_count(d) {
            let r = check_separation(d, n)?;
            table.push(vec![
                d.to_string(),
                n.to_string(),
                triple(&r.omega.0),
                r.lambda.to_string(),
                triple(&r.m_j),
                r.boundary.len().to_string(),
                r.passed.to_string(),
            ]);
            rows.push(r);
        }
    }
    let ok = rows.iter().all(|r| r.passed);
    let results = json!({
        "checked": rows.len(),
        "failed": rows.iter().filter(|r| !r.passed).count(),
        "rows": rows,
    });
    Ok(("verify-vertices", json!({ "dmax": dmax }), results, ok, table))
}

fn verify_appendix(dmax: u32) -> Result<Parts, CliError> {
    let mut grid = Vec::new();
    for d in 1..=dmax {
        for n in 0..d {
            grid.push((d, n));
        }
    }
    let chains = grid
        .into_iter()
        .map(|(d, n)| appendix_reduction(d, n))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut table = Table::new(&[
        "d",
        "n",
        "det_b",
        "det_e",
        "factor_product",
        "det_b_nonzero",
        "det_e_unit",
        "chain_consistent",
        "passed",
    ]);
    let mut rows = Vec::new();
    let mut ok = true;
    for c in &chains {
        let chain_required = c.d <= CHAIN_CHECK_DMAX;
        let passed = c.det_b_nonzero && c.det_e_unit && (!chain_required || c.chain_consistent);
        ok &= passed;
        table.push(vec![
            c.d.to_string(),
            c.n.to_string(),
            c.det_b.clone(),
            c.det_e.clone(),
            c.factor_product.clone(),
            c.det_b_nonzero.to_string(),
            c.det_e_unit.to_string(),
            c.chain_consistent.to_string(),
            passed.to_string(),
        ]);
        let broken: Vec<&str> = c
            .steps
            .iter()
            .filter(|s| !s.formula_matches || !s.det_relation_holds)
            .map(|s| s.description.as_str())
            .collect();
        rows.push(json!({
            "d": c.d,
            "n": c.n,
            "det_b": c.det_b,
            "det_e": c.det_e,
            "factor_product": c.factor_product,
            "det_b_nonzero": c.det_b_nonzero,
            "det_e_unit": c.det_e_unit,
            "chain_consistent": c.chain_consistent,
            "chain_required": chain_required,
            "broken_steps": broken,
            "passed": passed,
        }));
    }
    let failed = rows.iter().filter(|r| r["passed"] == false).count();
    let results = json!({
        "checked": rows.len(),
        "failed": failed,
        "det_b_zero": chains.iter().filter(|c| !c.det_b_nonzero).count(),
        "chain_inconsistent": chains.iter().filter(|c| !c.chain_consistent).count(),
        "rows": rows,
    });
    Ok((
        "verify-appendix",
        json!({ "dmax": dmax, "chain_check_dmax": CHAIN_CHECK_DMAX }),
        results,
        ok,
        table,
    ))
}

fn cmd_family_bound(d: u32, s: &Sampling) -> Result<Parts, CliError> {
    let params = json!({ "d": d, "sampling": sampling_params(s) });
    match family_bound(d, &s.config()) {
        Ok(r) => {
            let vertices = vertex_rows(&r.fan.component);
            let table = vertex_table(d, &vertices);
            let ok = r.passed();
            let results = json!({
                "degree": d,
                "count": r.count,
                "bound": r.bound,
                "vertices": vertices,
                "agreement": r.fan.agreement,
                "count_ok": r.count_ok,
                "cones_distinct": r.cones_distinct,
                "located": r.located,
                "per_sample_counts": r.fan.per_sample_counts,
                "used_matrices": r.fan.used_matrices,
            });
            Ok(("family-bound", params, results, ok, table))
        }
        Err(Error::Stability(msg)) => {
            let results = json!({ "degree": d, "agreement": false, "error": msg });
            Ok(("family-bound", params, results, false, Table::new(&["degree"])))
        }
        Err(e) => Err(e.into()),
    }
}

fn disagreement(fan: &GenericFanResult) -> Value {
    json!({
        "per_sample_counts": fan.per_sample_counts,
        "distinct_sets": fan.distinct_sets,
        "used_matrices": fan.used_matrices,
    })
}

fn cmd_fan(
    path: &Path,
    degree: u32,
    s: &Sampling,
    brute: bool,
    brute_limit: Option<u64>,
) -> Result<Parts, CliError> {
    let ideal = read_ideal(path)?;
    let limit = brute_limit.unwrap_or_else(default_limit);
    let params = json!({
        "ideal": path.display().to_string(),
        "degree": degree,
        "sampling": sampling_params(s),
        "brute": brute,
        "brute_limit": limit,
    });
    let fan = generic_degree_fan(&ideal, degree, &s.config())?;
    let vertices = vertex_rows(&fan.component);
    let table = vertex_table(degree, &vertices);
    let mut ok = fan.agreement && vertices.iter().all(|v| v.strict);
    let brute_result = if brute {
        let g = fan.used_matrices[0].change();
        let dm = degree_matrix(&ideal.apply(&g), degree)?;
        let hull = brute_hull(&dm.matrix, &dm.columns, limit)?;
        let equal = hull == fan.component.sorted_points();
        ok &= equal;
        json!({ "count": hull.len(), "vertices": hull, "equal": equal })
    } else {
        Value::Null
    };
    let results = json!({
        "degree": degree,
        "count": fan.component.count(),
        "vertices": vertices,
        "agreement": fan.agreement,
        "ideal_dim": fan.component.ideal_dim,
        "samples": if fan.agreement { json!({"per_sample_counts": fan.per_sample_counts, "used_matrices": fan.used_matrices}) } else { disagreement(&fan) },
        "brute": brute_result,
    });
    Ok(("fan", params, results, ok, table))
}

fn cmd_refine(path: &Path, (lo, hi): (u32, u32), s: &Sampling) -> Result<Parts, CliError> {
    let ideal = read_ideal(path)?;
    if lo < ideal.min_degree() {
        return Err(CliError::Usage(format!(
            "LO = {lo} is below the smallest generator degree {}",
            ideal.min_degree()
        )));
    }
    let params = json!({
        "ideal": path.display().to_string(),
        "degrees": [lo, hi],
        "sampling": sampling_params(s),
    });
    let cfg = s.config();
    let mut components: Vec<DegreeFanComponent> = Vec::new();
    let mut per_degree = Vec::new();
    let mut table = Table::new(&["degree", "count", "cumulative", "agreement"]);
    let mut ok = true;
    let mut cumulative = Vec::new();
    let mut last = None;
    for e in lo..=hi {
        let fan = generic_degree_fan(&ideal, e, &cfg)?;
        ok &= fan.agreement;
        components.push(fan.component.clone());
        let refined = refine(&components)?;
        cumulative.push(refined.count);
        table.push(vec![
            e.to_string(),
            fan.component.count().to_string(),
            refined.count.to_string(),
            fan.agreement.to_string(),
        ]);
        per_degree.push(json!({
            "degree": e,
            "count": fan.component.count(),
            "cumulative": refined.count,
            "agreement": fan.agreement,
            "vertices": vertex_rows(&fan.component),
            "samples": if fan.agreement { Value::Null } else { disagreement(&fan) },
        }));
        last = Some(refined);
    }
    let monotone = cumulative.windows(2).all(|w| w[0] <= w[1]);
    ok &= monotone;
    let refined = last.expect("LO <= HI");
    let vertices: Vec<Value> = refined
        .cones
        .iter()
        .map(|c| json!({ "m": c.m, "omega": c.certificate.0, "strict": true, "parts": c.parts }))
        .collect();
    let results = json!({
        "degree": hi,
        "count": refined.count,
        "vertices": vertices,
        "cumulative": cumulative,
        "monotone": monotone,
        "per_degree": per_degree,
    });
    Ok(("refine", params, results, ok, table))
}

fn cmd_random_q(d: u32, trials: u64, s: &Sampling, min_rate: f64, degenerate: bool) -> Result<Parts, CliError> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&min_rate) {
        return Err(CliError::Usage(format!("min-rate must lie in [0, 1], got {min_rate}")));
    }
    let report = theorem_generic_experiment(d, trials, &s.config(), degenerate)?;
    let rate = report.passes as f64 / trials as f64;
    let ok = if degenerate {
        // the injected inputs must be reported as dimension failures
        report.trials.iter().all(|t| !t.dimension_ok && t.error.is_some())
    } else {
        rate >= min_rate
    };
    let mut table = Table::new(&["trial", "resamples", "dimension", "count", "cones_distinct", "passed", "error"]);
    for t in &report.trials {
        table.push(vec![
            t.trial.to_string(),
            t.resamples.to_string(),
            t.dimension.to_string(),
            t.count.map_or(String::new(), |c| c.to_string()),
            t.cones_distinct.to_string(),
            t.passed.to_string(),
            t.error.clone().unwrap_or_default(),
        ]);
    }
    let params = json!({
        "d": d,
        "trials": trials,
        "sampling": sampling_params(s),
        "min_rate": min_rate,
        "degenerate": degenerate,
    });
    let results = json!({
        "degree": d,
        "bound": generic::expected_bound(d),
        "passes": report.passes,
        "pass_rate": rate,
        "counts": report.trials.iter().map(|t| t.count).collect::<Vec<_>>(),
        "trials": report.trials,
    });
    Ok(("random-q", params, results, ok, table))
}
