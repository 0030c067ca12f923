//! Command implementations shared by the binary and the test suites.

use crate::config::RunConfig;
use crate::report::{Report, RunStatus};
use anyhow::{anyhow, bail, Context, Result};
use cifslab_core::{
    apply_line_example_routes, compare, density_bounds_at_zero, dimension_gap_threshold,
    dimension_report, leaf_discs, leaf_records, pressure_f, pressure_g_sandwich,
    pressure_g_word_refine, rasterize, sum_series_from, ClassifyBudget, DimBudget,
    DimensionReport, Family, Interval, Phenomenon, RegularityClass, SystemSpec, TermForm,
    TraceEntry, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;

fn spec_echo(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg.system.as_ref()).expect("system echo serializes")
}

fn budgets_echo(cfg: &RunConfig) -> Value {
    serde_json::to_value(&cfg.params).expect("params echo serializes")
}

fn dim_budget(cfg: &RunConfig) -> DimBudget {
    let p = &cfg.params;
    DimBudget {
        cutoff: p.cutoff,
        word_refine: (p.word_alphabet > 0 && p.word_length > 0)
            .then_some((p.word_alphabet, p.word_length)),
        classify: ClassifyBudget {
            cutoff: p.cutoff,
            escalations: 1,
            theta_samples: p.theta_samples,
        },
    }
}

pub fn run_validate(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let spec = cfg.system()?.spec()?;
    let cifs = spec.cifs_check()?;
    let report = Report::new(
        spec_echo(cfg),
        "validate",
        serde_json::to_value(&cifs)?,
        budgets_echo(cfg),
    );
    Ok((report, RunStatus::Determinate))
}

#[derive(Serialize)]
struct PressureResults {
    t: f64,
    values: Value,
}

pub fn run_pressure(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let sys = cfg.system()?;
    let spec = sys.spec()?;
    spec.require_valid()?;
    let p = &cfg.params;
    let values = match spec.family {
        Family::F => {
            let v = pressure_f(&spec, p.t, p.cutoff)?;
            json!({ "closed_form": v })
        }
        Family::G => {
            let (lower, upper) = pressure_g_sandwich(&spec, p.t, p.cutoff)?;
            let mut out = json!({ "lower": lower, "upper": upper });
            if p.word_alphabet > 0 && p.word_length > 0 {
                let refined =
                    pressure_g_word_refine(&spec, p.t, p.word_alphabet, p.word_length, None)?;
                out["word_refined"] = serde_json::to_value(&refined)?;
            }
            out
        }
    };
    let report = Report::new(
        spec_echo(cfg),
        "pressure",
        serde_json::to_value(PressureResults { t: p.t, values })?,
        budgets_echo(cfg),
    );
    Ok((report, RunStatus::Determinate))
}

/// Dimension report with one automatic budget escalation on an undetermined
/// regularity class, recorded in the trace.
fn dimension_with_escalation(
    spec: &SystemSpec,
    tol: f64,
    budget: &DimBudget,
) -> Result<(DimensionReport, Vec<TraceEntry>)> {
    let mut trace = Vec::new();
    match dimension_report(spec, tol, budget) {
        Ok(mut r) => {
            apply_line_example_routes(spec, &mut r, budget.cutoff)?;
            Ok((r, trace))
        }
        Err(cifslab_core::Error::Undetermined { width }) => {
            let escalated = DimBudget {
                cutoff: budget.cutoff.saturating_mul(10),
                classify: ClassifyBudget {
                    cutoff: budget.classify.cutoff.saturating_mul(10),
                    ..budget.classify
                },
                ..*budget
            };
            trace.push(TraceEntry {
                tag: "budget-escalation".into(),
                inputs: format!("undetermined at width {width:.3e}"),
                verdict: format!("retry with cutoff {}", escalated.cutoff),
            });
            let mut r = dimension_report(spec, tol, &escalated)?;
            apply_line_example_routes(spec, &mut r, escalated.cutoff)?;
            Ok((r, trace))
        }
        Err(e) => Err(e.into()),
    }
}

/// Build the undetermined report when escalation did not resolve the class.
fn undetermined_report(cfg: &RunConfig, command: &str, width: f64) -> (Report, RunStatus) {
    let report = Report::new(
        spec_echo(cfg),
        command,
        json!({ "Undetermined": { "width": width } }),
        budgets_echo(cfg),
    );
    (report, RunStatus::Undetermined)
}

fn undetermined_width(e: &anyhow::Error) -> Option<f64> {
    match e.downcast_ref::<cifslab_core::Error>() {
        Some(cifslab_core::Error::Undetermined { width }) => Some(*width),
        _ => None,
    }
}

pub fn run_dim(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let spec = cfg.system()?.spec()?;
    let p = &cfg.params;
    let (dim, mut trace) = match dimension_with_escalation(&spec, p.tol, &dim_budget(cfg)) {
        Ok(v) => v,
        Err(e) => match undetermined_width(&e) {
            Some(width) => return Ok(undetermined_report(cfg, "dim", width)),
            None => return Err(e),
        },
    };
    let mut results = serde_json::to_value(&dim)?;

    if p.explore_conjecture || p.radius > 0.0 {
        // Exploratory density trend at the origin; diagnostics only, no
        // flags are derived from it.
        let h = dim.h.midpoint();
        let radii: Vec<f64> = if p.radius > 0.0 {
            vec![p.radius]
        } else {
            vec![1e-2, 1e-3, 1e-4]
        };
        let mut csv = String::from("r,ratio_lo,ratio_hi\n");
        for r in radii {
            match density_bounds_at_zero(&spec, h, r, p.cutoff) {
                Ok(b) => csv.push_str(&format!("{r},{},{}\n", b.lo, b.hi)),
                Err(e) => csv.push_str(&format!("{r},error,{e}\n")),
            }
        }
        results["density_trend_csv"] = Value::String(csv);
        trace.push(TraceEntry {
            tag: "density-exploration".into(),
            inputs: format!("h midpoint {h:.6}"),
            verdict: "trend emitted; conjectures are never asserted".into(),
        });
    }

    let status = if matches!(dim.regularity, RegularityClass::Undetermined { .. }) {
        RunStatus::Undetermined
    } else {
        RunStatus::Determinate
    };
    let mut all_trace = dim.trace.clone();
    all_trace.extend(trace);
    let report = Report::new(spec_echo(cfg), "dim", results, budgets_echo(cfg))
        .with_trace(all_trace);
    Ok((report, status))
}

pub fn run_classify(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let spec = cfg.system()?.spec()?;
    let p = &cfg.params;
    let mut trace = Vec::new();
    let mut budget = ClassifyBudget {
        cutoff: p.cutoff,
        escalations: 0,
        theta_samples: p.theta_samples,
    };
    let mut class = cifslab_core::classify(&spec, &budget)?;
    if let RegularityClass::Undetermined { width } = class {
        budget.cutoff = budget.cutoff.saturating_mul(10);
        trace.push(TraceEntry {
            tag: "budget-escalation".into(),
            inputs: format!("undetermined at width {width:.3e}"),
            verdict: format!("retry with cutoff {}", budget.cutoff),
        });
        class = cifslab_core::classify(&spec, &budget)?;
    }
    let status = if matches!(class, RegularityClass::Undetermined { .. }) {
        RunStatus::Undetermined
    } else {
        RunStatus::Determinate
    };
    let report = Report::new(
        spec_echo(cfg),
        "classify",
        serde_json::to_value(class)?,
        budgets_echo(cfg),
    )
    .with_trace(trace);
    Ok((report, status))
}

#[derive(Serialize)]
struct GapResults {
    threshold: u32,
    series_at_threshold: Interval,
    series_before_threshold: Option<Interval>,
    shifted: Vec<Value>,
}

pub fn run_gap(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let sys = cfg.system()?;
    let p = &cfg.params;
    let digits = sys.digits.to_sequence()?;
    let profile = digits
        .growth_profile()
        .ok_or_else(|| anyhow!("gap threshold needs a polynomial growth profile"))?;
    let spec_f = sys.spec_for(Family::F)?;
    let q = dimension_gap_threshold(&spec_f, &profile, p.cutoff)?;
    let exponent = 1.0 / (profile.gamma + 1.0);
    let form = TermForm::PowerOfSquareMinusOne { t: exponent };
    let at_q = sum_series_from(&digits, form, q, p.cutoff)?.scale(spec_f.t());
    let before = (q > 1)
        .then(|| sum_series_from(&digits, form, q - 1, p.cutoff).map(|s| s.scale(spec_f.t())))
        .transpose()?;

    let mut shifted = Vec::new();
    for family in [Family::F, Family::G] {
        let spec = SystemSpec::new(family, digits.tail_shift(q), sys.rotations);
        let (mut dim, _) = dimension_with_escalation(&spec, p.tol, &dim_budget(cfg))?;
        if dim.h.hi < exponent {
            dim.flags.insert(Phenomenon::C3DimensionGap);
            dim.trace.push(TraceEntry {
                tag: "dimension-gap-threshold".into(),
                inputs: format!("l = {q}, h.hi = {} < {exponent:.6}", dim.h.hi),
                verdict: "Hausdorff dimension strictly below the lower box dimension".into(),
            });
        }
        shifted.push(serde_json::to_value(&dim)?);
    }

    let report = Report::new(
        spec_echo(cfg),
        "gap",
        serde_json::to_value(GapResults {
            threshold: q,
            series_at_threshold: at_q,
            series_before_threshold: before,
            shifted,
        })?,
        budgets_echo(cfg),
    );
    Ok((report, RunStatus::Determinate))
}

pub fn run_compare(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let sys = cfg.system()?;
    let p = &cfg.params;
    let spec_f = sys.spec_for(Family::F)?;
    let spec_g = sys.spec_for(Family::G)?;
    let budget = dim_budget(cfg);
    let escalated = |spec: &SystemSpec| dimension_with_escalation(spec, p.tol, &budget);
    let (report_f, trace_f) = match escalated(&spec_f) {
        Ok(v) => v,
        Err(e) => match undetermined_width(&e) {
            Some(w) => return Ok(undetermined_report(cfg, "compare", w)),
            None => return Err(e),
        },
    };
    let (report_g, trace_g) = match escalated(&spec_g) {
        Ok(v) => v,
        Err(e) => match undetermined_width(&e) {
            Some(w) => return Ok(undetermined_report(cfg, "compare", w)),
            None => return Err(e),
        },
    };
    let verdict = compare(&spec_f, &spec_g, &report_f, &report_g, p.tol)?;
    let status = if matches!(verdict, Verdict::Inconclusive { .. }) {
        RunStatus::Undetermined
    } else {
        RunStatus::Determinate
    };
    let mut trace = report_f.trace.clone();
    trace.extend(report_g.trace.clone());
    trace.extend(trace_f);
    trace.extend(trace_g);
    let report = Report::new(
        spec_echo(cfg),
        "compare",
        json!({
            "verdict": verdict,
            "affine": report_f,
            "mobius": report_g,
        }),
        budgets_echo(cfg),
    )
    .with_trace(trace);
    Ok((report, status))
}

pub fn run_render(cfg: &RunConfig) -> Result<(Report, RunStatus)> {
    let spec = cfg.system()?.spec()?;
    let opts = cfg.render.options()?;
    let leaves = leaf_discs(&spec, &opts)?;
    let image_path = cfg
        .output
        .image
        .clone()
        .unwrap_or_else(|| "limit_set.ppm".to_string());
    let rgb = rasterize(&leaves, &opts);
    match Path::new(&image_path).extension().and_then(|e| e.to_str()) {
        Some("png") => cifslab_core::write_png(Path::new(&image_path), &rgb, opts.width, opts.height)?,
        _ => cifslab_core::write_ppm(Path::new(&image_path), &rgb, opts.width, opts.height)?,
    }
    if let Some(discs_path) = &cfg.output.discs {
        std::fs::write(discs_path, leaf_records(&leaves)).context("writing disc records")?;
    }
    let report = Report::new(
        spec_echo(cfg),
        "render",
        json!({
            "image": image_path,
            "leaves": leaves.len(),
            "width": opts.width,
            "height": opts.height,
            "depth": opts.depth,
            "min_radius": opts.min_radius,
            "digit_cutoff": opts.digit_cutoff,
        }),
        budgets_echo(cfg),
    );
    Ok((report, RunStatus::Determinate))
}

pub fn run_reproduce(cfg: &RunConfig, case: Option<&str>) -> Result<(Report, RunStatus)> {
    let results = crate::reproduce::run_suite(case)?;
    if results.is_empty() {
        bail!("no reproduce case matches {case:?}");
    }
    let all_pass = results.iter().all(|r| r.pass);
    let report = Report::new(
        Value::Null,
        "reproduce",
        serde_json::to_value(&results)?,
        budgets_echo(cfg),
    );
    let status = if all_pass {
        RunStatus::Determinate
    } else {
        RunStatus::Undetermined
    };
    Ok((report, status))
}

pub fn dispatch(command: &str, cfg: &RunConfig, case: Option<&str>) -> Result<(Report, RunStatus)> {
    match command {
        "validate" => run_validate(cfg),
        "pressure" => run_pressure(cfg),
        "dim" => run_dim(cfg),
        "classify" => run_classify(cfg),
        "gap" => run_gap(cfg),
        "compare" => run_compare(cfg),
        "render" => run_render(cfg),
        "reproduce" => run_reproduce(cfg, case),
        other => bail!("unknown command {other:?}"),
    }
}
