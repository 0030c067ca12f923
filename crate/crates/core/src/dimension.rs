//! Hausdorff-dimension location and measure-phenomenon classification.
//!
//! The dimension is the zero of the pressure, located by one-sided certified
//! bisections: the returned lower endpoint carries `pressure.lo >= 0` and the
//! upper endpoint carries `pressure.hi <= 0`, so the bracket is a certificate
//! rather than a heuristic. For the Mobius family the two endpoints run on
//! the lower and upper pressure-bound curves.

use crate::digits::{Family, GrowthProfile, SystemSpec};
use crate::error::{Error, Result};
use crate::interval::{next_down, next_up, Interval};
use crate::pressure::{
    classify, finiteness_threshold, pressure_g_word_refine, ClassifyBudget, PressureCurves,
    RegularityClass,
};
use crate::series::{sum_series_from, TermForm};
use serde::Serialize;
use std::collections::BTreeSet;

/// The three infinite-alphabet phenomena plus the density diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Phenomenon {
    C1HausdorffMeasureZero,
    C2PackingMeasureInfinite,
    C3DimensionGap,
    DensityAtZeroVanishes,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub tag: String,
    pub inputs: String,
    pub verdict: String,
}

/// Everything the laboratory can certify about one system's dimensions.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub family: Family,
    pub rotations: u32,
    pub theta: Interval,
    pub theta_certified: bool,
    pub h: Interval,
    pub regularity: RegularityClass,
    pub packing_dim: Option<Interval>,
    pub flags: BTreeSet<Phenomenon>,
    pub trace: Vec<TraceEntry>,
}

impl DimensionReport {
    fn push_trace(&mut self, tag: &str, inputs: String, verdict: String) {
        self.trace.push(TraceEntry {
            tag: tag.to_string(),
            inputs,
            verdict,
        });
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DimBudget {
    pub cutoff: u32,
    /// Optional `(alphabet cutoff, word length)` for Mobius refinement.
    pub word_refine: Option<(u32, u32)>,
    pub classify: ClassifyBudget,
}

impl Default for DimBudget {
    fn default() -> Self {
        DimBudget {
            cutoff: crate::series::DEFAULT_CUTOFF,
            word_refine: None,
            classify: ClassifyBudget::default(),
        }
    }
}

const T_CAP: f64 = 64.0;

/// Certified enclosure of the Hausdorff dimension of the limit set.
///
/// Irregular systems return the finiteness threshold. A regularity class that
/// cannot be decided at the budget is an error carrying the blocking width.
pub fn hausdorff_dim(spec: &SystemSpec, tol: f64, budget: &DimBudget) -> Result<Interval> {
    assert!(tol > 0.0 && tol <= 1e-2, "tolerance must lie in (0, 1e-2]");
    spec.require_valid()?;
    let class = classify(spec, &budget.classify)?;
    dim_with_class(spec, tol, budget, class)
}

fn dim_with_class(
    spec: &SystemSpec,
    tol: f64,
    budget: &DimBudget,
    class: RegularityClass,
) -> Result<Interval> {
    let theta = finiteness_threshold(&spec.digits, budget.classify.theta_samples)?;
    match class {
        RegularityClass::Undetermined { width } => return Err(Error::Undetermined { width }),
        RegularityClass::Irregular => return Ok(theta.value),
        _ => {}
    }
    let curves = PressureCurves::new(spec, budget.cutoff)?;
    let t0 = theta.value.hi;

    // Doubling search for a right endpoint with certified negative pressure.
    let mut t_max = t0 + tol;
    loop {
        let hull = curves.pressure_hull(t_max)?;
        if hull.hi < 0.0 {
            break;
        }
        t_max = t0 + 2.0 * (t_max - t0);
        if t_max > T_CAP {
            return Err(Error::BadParameter(format!(
                "no certified negative pressure below t = {T_CAP}"
            )));
        }
    }

    // Largest t with a certified nonnegative lower curve.
    let mut a = t0;
    let mut b = t_max;
    while b - a > tol / 2.0 {
        let m = 0.5 * (a + b);
        let lo = match spec.family {
            Family::F => curves.affine_pressure(m)?.lo,
            Family::G => curves.mobius_lower(m)?.lo,
        };
        if lo >= 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let h_lo = a;

    // Smallest t with a certified nonpositive upper curve.
    let mut a2 = t0;
    let mut b2 = t_max;
    while b2 - a2 > tol / 2.0 {
        let m = 0.5 * (a2 + b2);
        let hi = match spec.family {
            Family::F => curves.affine_pressure(m)?.hi,
            Family::G => curves.mobius_upper(m)?.0.hi,
        };
        if hi <= 0.0 {
            b2 = m;
        } else {
            a2 = m;
        }
    }
    let mut h = Interval::new(h_lo.min(b2), b2);

    // Word-refined shrink for the Mobius family when the budget allows.
    if spec.family == Family::G {
        if let Some((k, n)) = budget.word_refine {
            let mut lo = h.lo;
            let mut hi = h.hi;
            for step in 1..8 {
                let t = h.lo + h.width() * step as f64 / 8.0;
                let refined = pressure_g_word_refine(spec, t, k, n, None)?;
                if refined.lower > 0.0 {
                    lo = lo.max(t);
                }
                if refined.upper < 0.0 {
                    hi = hi.min(t);
                }
            }
            if lo <= hi {
                h = Interval::new(lo, hi);
            }
        }
    }
    Ok(h)
}

/// Assemble the full report: validity, threshold, regularity, dimension, and
/// (under a growth profile) the measure phenomena.
pub fn dimension_report(spec: &SystemSpec, tol: f64, budget: &DimBudget) -> Result<DimensionReport> {
    spec.require_valid()?;
    let theta = finiteness_threshold(&spec.digits, budget.classify.theta_samples)?;
    let class = classify(spec, &budget.classify)?;
    let h = dim_with_class(spec, tol, budget, class)?;
    if theta.certified {
        debug_assert!(theta.value.lo <= h.lo + 1e-12);
    }
    let mut report = DimensionReport {
        family: spec.family,
        rotations: spec.rotations,
        theta: theta.value,
        theta_certified: theta.certified,
        h,
        regularity: class,
        packing_dim: None,
        flags: BTreeSet::new(),
        trace: Vec::new(),
    };
    if class == RegularityClass::Irregular {
        report.push_trace(
            "irregular-dimension-equals-threshold",
            format!("theta = {:?}", theta.value),
            "hausdorff dimension collapses to the finiteness threshold".into(),
        );
    }
    if let Some(profile) = spec.digits.growth_profile() {
        measure_phenomena(spec, &profile, &mut report, budget.cutoff)?;
    }
    Ok(report)
}

/// Classify the measure phenomena under a polynomial growth profile.
///
/// Flags are certificates: interval-valued dimensions are tested at the
/// adverse endpoint, and a straddling interval leaves the flags untouched
/// with a trace record.
pub fn measure_phenomena(
    spec: &SystemSpec,
    profile: &GrowthProfile,
    report: &mut DimensionReport,
    cutoff: u32,
) -> Result<()> {
    let gamma = profile.gamma;
    let inv_gamma = 1.0 / gamma;
    let h = report.h;

    // Packing dimension from the orbit box dimension: max(h, 1/(gamma+1)).
    let orbit_box = 1.0 / (gamma + 1.0);
    report.packing_dim = Some(Interval::new(h.lo.max(orbit_box), h.hi.max(orbit_box)));
    report.push_trace(
        "orbit-box-dimension",
        format!("gamma = {gamma}"),
        format!("packing dim = max(h, {orbit_box:.6})"),
    );

    if h.hi < inv_gamma {
        report.flags.insert(Phenomenon::C1HausdorffMeasureZero);
        report.push_trace(
            "polynomial-hausdorff-measure-zero",
            format!("h.hi = {} < 1/gamma = {inv_gamma}", h.hi),
            "Hausdorff measure vanishes at the dimension".into(),
        );
    } else if h.lo > inv_gamma {
        report.flags.insert(Phenomenon::C2PackingMeasureInfinite);
        report.packing_dim = Some(h);
        report.push_trace(
            "polynomial-packing-measure-infinite",
            format!("h.lo = {} > 1/gamma = {inv_gamma}", h.lo),
            "packing measure infinite; packing dim equals Hausdorff dim".into(),
        );
    } else {
        report.push_trace(
            "polynomial-growth-route",
            format!("h = {h:?} straddles 1/gamma = {inv_gamma}"),
            format!("undetermined at width {:.3e}", h.width()),
        );
    }

    // Large rotation count forces h > 1/gamma.
    let large_t = profile.c2.powf(2.0 / gamma) * (profile.start as f64 + 1.0);
    if spec.t() >= large_t {
        report.flags.insert(Phenomenon::C2PackingMeasureInfinite);
        report.packing_dim = Some(h);
        report.push_trace(
            "large-rotation-count",
            format!("T = {} >= c2^(2/gamma) (N+1) = {large_t:.6}", spec.rotations),
            "dimension exceeds 1/gamma; packing measure infinite".into(),
        );
    }

    // Finite pressure at half the dimension kills the density at the origin.
    if report.regularity.is_regular() && h.lo > 0.0 {
        let curves = PressureCurves::new(spec, cutoff)?;
        let at_half = curves.pressure_hull(h.lo / 2.0)?;
        if !at_half.is_divergent() {
            report.flags.insert(Phenomenon::DensityAtZeroVanishes);
            report.flags.insert(Phenomenon::C2PackingMeasureInfinite);
            report.packing_dim = Some(Interval::new(
                h.lo.max(orbit_box),
                h.hi.max(orbit_box),
            ));
            report.push_trace(
                "finite-pressure-at-half-dimension",
                format!("pressure({:.6}) = {at_half:?}", h.lo / 2.0),
                "conformal density at 0 vanishes; packing measure infinite".into(),
            );
        }
    }

    debug_assert!(
        !(report.flags.contains(&Phenomenon::C1HausdorffMeasureZero)
            && report.flags.contains(&Phenomenon::C2PackingMeasureInfinite)),
        "C1 and C2 are mutually exclusive"
    );
    Ok(())
}

/// Example-family routes for linear-growth Mobius systems, applied on top of
/// the generic phenomena.
///
/// With one or two rotations the system restricts to the real interval, and
/// a smallest digit above 2 leaves an open gap there, forcing the dimension
/// below one and hence zero Hausdorff measure at `gamma = 1`. With enough
/// rotations the worked example certifies dimension above one from
/// `T * sum d_n^(-2) > 1`, giving infinite packing measure.
pub fn apply_line_example_routes(
    spec: &SystemSpec,
    report: &mut DimensionReport,
    cutoff: u32,
) -> Result<()> {
    let Some(profile) = spec.digits.growth_profile() else {
        return Ok(());
    };
    if spec.family != Family::G || profile.gamma != 1.0 {
        return Ok(());
    }
    let d1 = spec.digits.digit(1)?;
    let c2_already = report.flags.contains(&Phenomenon::C2PackingMeasureInfinite);
    if spec.rotations <= 2 && d1 > 2.0 && !c2_already {
        report.flags.insert(Phenomenon::C1HausdorffMeasureZero);
        report.push_trace(
            "line-restriction-gap",
            format!("T = {} <= 2, d_1 = {d1} > 2", spec.rotations),
            "interval restriction leaves an open gap, so h < 1 = 1/gamma".into(),
        );
        return Ok(());
    }
    if report.flags.contains(&Phenomenon::C1HausdorffMeasureZero) {
        return Ok(());
    }
    let sq = crate::series::sum_series(&spec.digits, TermForm::PowerOfShift { t: 1.0, sigma: 0 }, cutoff)?;
    if sq.hi.is_finite() && spec.t() * sq.lo > 1.0 {
        report.flags.insert(Phenomenon::C2PackingMeasureInfinite);
        report.packing_dim = Some(report.h);
        report.push_trace(
            "reciprocal-square-exceeds-one",
            format!("T * sum d^-2 >= {:.6} > 1", spec.t() * sq.lo),
            "worked-example route: dimension exceeds 1/gamma; packing measure infinite".into(),
        );
    }
    Ok(())
}

/// Minimal `q` such that dropping the first `q - 1` digits certifies
/// `T * sum_{n>=q} (d_n^2-1)^(-1/(gamma+1)) < 1`, which forces a strict gap
/// between Hausdorff and lower box dimension for every further truncation.
pub fn dimension_gap_threshold(
    spec: &SystemSpec,
    profile: &GrowthProfile,
    cutoff: u32,
) -> Result<u32> {
    if !(profile.gamma > 1.0) {
        return Err(Error::BadParameter(
            "dimension gap threshold needs gamma > 1".into(),
        ));
    }
    let t = 1.0 / (profile.gamma + 1.0);
    let form = TermForm::PowerOfSquareMinusOne { t };
    let certified_small = |l: u32| -> Result<bool> {
        let s = sum_series_from(&spec.digits, form, l, cutoff)?;
        Ok(s.hi.is_finite() && spec.t() * s.hi < 1.0)
    };
    let mut hi = 1u32;
    while !certified_small(hi)? {
        hi = hi.saturating_mul(2);
        if hi > 1 << 26 {
            return Err(Error::BadParameter(
                "no certified gap threshold below 2^26".into(),
            ));
        }
    }
    let mut lo = hi / 2; // certified_small is false here (or hi == 1)
    while hi - lo > 1 && lo >= 1 {
        if lo == 0 {
            break;
        }
        let mid = lo + (hi - lo) / 2;
        if certified_small(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Largest index whose generator disc still reaches radius `r` from the
/// origin: `max { n : 1/(d_n + 1) >= r }`.
pub fn n_of_r(seq: &crate::digits::DigitSequence, r: f64) -> Result<u32> {
    let d1 = seq.digit(1)?;
    if !(r > 0.0 && r < 1.0 / (d1 + 1.0)) {
        return Err(Error::BadParameter(format!(
            "radius must lie in (0, 1/(d_1+1)) = (0, {:.6})",
            1.0 / (d1 + 1.0)
        )));
    }
    let bound = 1.0 / r - 1.0; // d_n <= bound
    let mut hi = 2u32;
    while seq.digit(hi)? <= bound {
        hi = hi.saturating_mul(2);
    }
    let mut lo = hi / 2; // d_lo <= bound for hi > 2, else handle below
    if hi == 2 {
        return Ok(1);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if seq.digit(mid)? <= bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Certified bounds on `m(B(0, r)) / r^h` from the conformal-measure tail
/// sums: the lower tail starts two past `n(r)`, the upper tail one past.
pub fn density_bounds_at_zero(
    spec: &SystemSpec,
    h: f64,
    r: f64,
    cutoff: u32,
) -> Result<Interval> {
    assert!(h > 0.0);
    let n0 = n_of_r(&spec.digits, r)?;
    let (low_form, high_form) = match spec.family {
        Family::F => (
            TermForm::PowerOfSquareMinusOne { t: h },
            TermForm::PowerOfSquareMinusOne { t: h },
        ),
        Family::G => (
            TermForm::PowerOfShift { t: h, sigma: 1 },
            TermForm::PowerOfShift { t: h, sigma: -1 },
        ),
    };
    let low = sum_series_from(&spec.digits, low_form, n0 + 2, cutoff)?;
    let high = sum_series_from(&spec.digits, high_form, n0 + 1, cutoff)?;
    if high.is_divergent() {
        return Err(Error::Divergent(format!(
            "measure tail diverges at exponent h = {h}; h is inconsistent"
        )));
    }
    let scale = r.powf(h);
    Ok(Interval::new(
        next_down(spec.t() * low.lo / scale),
        next_up(spec.t() * high.hi / scale),
    ))
}
