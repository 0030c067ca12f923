//! Pressure evaluation for the two families.
//!
//! The affine family has an exact closed form, `log(T * sum (d_n^2-1)^-t)`.
//! The Mobius family only admits bounds: the generic sandwich from the
//! per-letter derivative extrema, a sharper single-letter bound when `T = 1`,
//! a cosine-corrected bound for general `T`, and finite-word refinements
//! justified by the bounded-distortion constant.

use crate::digits::{DigitSequence, Family, SystemSpec};
use crate::error::{Error, Result};
use crate::interval::{next_down, next_up, CompensatedSum, Interval};
use crate::series::{sum_series, PreparedSeries, TermForm};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Which route produced a pressure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PressureMethod {
    ClosedFormF,
    SandwichG,
    GeneralTUpper,
    T1Upper,
    WordRefined,
}

/// A certified pressure value; `[inf, inf]` marks divergence.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PressureValue {
    pub value: Interval,
    pub method: PressureMethod,
}

/// Reusable evaluator: digits are cached once per `(spec, cutoff)` so that
/// bisections over `t` only pay for powers.
pub struct PressureCurves<'a> {
    prep: PreparedSeries<'a>,
    rotations: u32,
    family: Family,
}

impl<'a> PressureCurves<'a> {
    pub fn new(spec: &'a SystemSpec, cutoff: u32) -> Result<PressureCurves<'a>> {
        Ok(PressureCurves {
            prep: PreparedSeries::prepare(&spec.digits, cutoff)?,
            rotations: spec.rotations,
            family: spec.family,
        })
    }

    fn t_f64(&self) -> f64 {
        self.rotations as f64
    }

    /// Exact pressure of the affine family at `t`.
    pub fn affine_pressure(&self, t: f64) -> Result<Interval> {
        require_positive_t(t)?;
        let s = self.prep.sum(TermForm::PowerOfSquareMinusOne { t })?;
        Ok(log_scaled(s, self.t_f64()))
    }

    /// Certified lower bound curve for the Mobius pressure at `t`.
    pub fn mobius_lower(&self, t: f64) -> Result<Interval> {
        require_positive_t(t)?;
        let s = self.prep.sum(TermForm::PowerOfShift { t, sigma: 1 })?;
        Ok(log_scaled(s, self.t_f64()))
    }

    /// Best certified upper bound curve for the Mobius pressure at `t`,
    /// choosing among the generic, `T = 1`, and cosine-corrected routes.
    pub fn mobius_upper(&self, t: f64) -> Result<(Interval, PressureMethod)> {
        require_positive_t(t)?;
        let generic = log_scaled(
            self.prep.sum(TermForm::PowerOfShift { t, sigma: -1 })?,
            self.t_f64(),
        );
        let mut best = (generic, PressureMethod::SandwichG);

        if self.rotations == 1 {
            let single = log_scaled(self.prep.sum(TermForm::PowerOfShift { t, sigma: 0 })?, 1.0);
            if single.hi < best.0.hi {
                best = (single, PressureMethod::T1Upper);
            }
        } else {
            let mut acc = Interval::point(0.0);
            for j in 0..self.rotations {
                let theta = 2.0 * PI * j as f64 / self.rotations as f64;
                acc = acc.add(&self.prep.sum(TermForm::CosineQuadratic { t, theta })?);
            }
            let cosine = log_scaled(acc, 1.0);
            if cosine.hi < best.0.hi {
                best = (cosine, PressureMethod::GeneralTUpper);
            }
        }
        Ok(best)
    }

    /// Certified enclosure of the pressure of this system at `t`: exact for
    /// the affine family, sandwich hull for the Mobius family.
    pub fn pressure_hull(&self, t: f64) -> Result<Interval> {
        match self.family {
            Family::F => self.affine_pressure(t),
            Family::G => {
                let lo = self.mobius_lower(t)?;
                let (up, _) = self.mobius_upper(t)?;
                if lo.is_divergent() {
                    return Ok(Interval::DIVERGENT);
                }
                Ok(Interval::new(lo.lo, up.hi))
            }
        }
    }
}

fn require_positive_t(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("pressure needs t > 0, got {t}")))
    }
}

fn log_scaled(series: Interval, factor: f64) -> Interval {
    if series.is_divergent() {
        return Interval::DIVERGENT;
    }
    series.scale(factor).ln()
}

/// Exact pressure of the affine family: `log(T * sum (d_n^2 - 1)^-t)`.
pub fn pressure_f(spec: &SystemSpec, t: f64, cutoff: u32) -> Result<PressureValue> {
    assert_eq!(spec.family, Family::F, "closed form is for the affine family");
    let curves = PressureCurves::new(spec, cutoff)?;
    Ok(PressureValue {
        value: curves.affine_pressure(t)?,
        method: PressureMethod::ClosedFormF,
    })
}

/// Certified sandwich for the Mobius pressure: lower from the per-letter
/// infimum, upper from the best of the generic / `T = 1` / cosine routes.
pub fn pressure_g_sandwich(
    spec: &SystemSpec,
    t: f64,
    cutoff: u32,
) -> Result<(PressureValue, PressureValue)> {
    assert_eq!(spec.family, Family::G, "sandwich is for the Mobius family");
    let curves = PressureCurves::new(spec, cutoff)?;
    let lower = curves.mobius_lower(t)?;
    let (upper, method) = curves.mobius_upper(t)?;
    Ok((
        PressureValue {
            value: lower,
            method: PressureMethod::SandwichG,
        },
        PressureValue {
            value: upper,
            method,
        },
    ))
}

/// Backward-recurrence continued fraction `[a_1, ..., a_N + z]`.
///
/// Every modulus must be at least 2, which keeps all intermediate
/// denominators at modulus `>= 1`.
pub fn continued_fraction(alphas: &[Complex64], z: Complex64) -> Complex64 {
    assert!(!alphas.is_empty(), "empty continued fraction");
    debug_assert!(alphas.iter().all(|a| a.norm() >= 2.0));
    let mut x = z;
    for a in alphas.iter().rev() {
        x = (a + x).inv();
    }
    x
}

/// One symbol of a finite word: digit index (1-based) and rotation index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Letter {
    pub index: u32,
    pub rotation: u32,
}

/// A finite word over the digit alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        assert!(!letters.is_empty(), "words have length >= 1");
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The complex digits `e(j/T) d_n` of the word, front to back.
    pub fn alphas(&self, spec: &SystemSpec) -> Result<Vec<Complex64>> {
        self.letters
            .iter()
            .map(|l| {
                assert!(l.rotation < spec.rotations, "rotation index out of range");
                let d = spec.digits.digit(l.index)?;
                let phase = 2.0 * PI * l.rotation as f64 / spec.rotations as f64;
                Ok(Complex64::from_polar(d, phase))
            })
            .collect()
    }
}

/// Exact derivative of the composed word map at `z` via the product formulas:
/// a real positive product of `1/(|a|^2-1)` for the affine family, and
/// `(-1)^N` times the product of squared continued-fraction tails for the
/// Mobius family.
pub fn word_derivative(spec: &SystemSpec, word: &Word, z: Complex64) -> Result<Complex64> {
    let alphas = word.alphas(spec)?;
    match spec.family {
        Family::F => {
            let mut p = 1.0;
            for a in &alphas {
                p /= a.norm_sqr() - 1.0;
            }
            Ok(Complex64::new(p, 0.0))
        }
        Family::G => {
            let mut x = z;
            let mut prod = Complex64::new(1.0, 0.0);
            for a in alphas.iter().rev() {
                x = (a + x).inv();
                prod *= x * x;
            }
            let sign = if alphas.len() % 2 == 1 { -1.0 } else { 1.0 };
            Ok(prod * sign)
        }
    }
}

/// Composition of the word's generator maps applied to `z` (the map itself,
/// not its derivative); used by tests as the finite-difference oracle target.
pub fn word_map(spec: &SystemSpec, word: &Word, z: Complex64) -> Result<Complex64> {
    let alphas = word.alphas(spec)?;
    let mut x = z;
    for a in alphas.iter().rev() {
        match spec.family {
            Family::F => x = (x + a.conj()) / (a.norm_sqr() - 1.0),
            Family::G => x = (x + a).inv(),
        }
    }
    Ok(x)
}

/// Result of the finite-word pressure refinement for the Mobius family.
#[derive(Debug, Clone, Serialize)]
pub struct WordRefinement {
    /// Best certified bounds after combining with the single-letter sandwich.
    pub lower: f64,
    pub upper: f64,
    /// Raw word-route bounds before combination.
    pub word_lower: f64,
    pub word_upper: f64,
    /// Set when the word route could not beat the sandwich on that side.
    pub no_gain_lower: bool,
    pub no_gain_upper: bool,
    pub bdp_constant: f64,
    pub alphabet_cutoff: u32,
    pub word_length: u32,
}

const ENUMERATION_BUDGET: f64 = 2e8;
const PRUNE_FLOOR: f64 = 1e-300;

/// Finite-word refinement of the Mobius pressure bounds at `t`.
///
/// The length-`N` sums under- and over-approximate the pressure because the
/// infimum sums are supermultiplicative and the supremum sums are
/// submultiplicative; the bounded-distortion constant `B = ((2r+e)/e)^4`
/// transfers the derivative at 0 to both extremes, and the mass of words
/// leaving the truncated alphabet is charged to the upper bound.
pub fn pressure_g_word_refine(
    spec: &SystemSpec,
    t: f64,
    alphabet_cutoff: u32,
    word_length: u32,
    bdp_slack: Option<f64>,
) -> Result<WordRefinement> {
    assert_eq!(spec.family, Family::G);
    require_positive_t(t)?;
    assert!(alphabet_cutoff >= 1 && word_length >= 1);
    let r = spec.digits.digit(1)?;
    if !(r > 2.0) {
        return Err(Error::BadParameter(format!(
            "word refinement needs d_1 > 2 for the distortion constant, got {r}"
        )));
    }
    let eps_max = (r * r - 4.0).sqrt();
    let eps = bdp_slack.unwrap_or(eps_max / 2.0);
    if !(eps > 0.0 && eps < eps_max) {
        return Err(Error::BadParameter(format!(
            "distortion slack must lie in (0, {eps_max:.6}), got {eps}"
        )));
    }

    let t_count = spec.rotations;
    let letters = alphabet_cutoff as f64 * t_count as f64;
    let cost = letters.powi(word_length as i32);
    if cost > ENUMERATION_BUDGET {
        let suggest_k = (ENUMERATION_BUDGET.powf(1.0 / word_length as f64) / t_count as f64)
            .floor()
            .max(1.0) as usize;
        return Err(Error::EnumerationBudget {
            cost,
            suggest_k,
            suggest_n: word_length.saturating_sub(1).max(1) as usize,
        });
    }

    let bdp = ((2.0 * r + eps) / eps).powi(4);

    // Alphabet digits as complex numbers, fixed (n asc, j asc) order.
    let mut alphas = Vec::with_capacity((alphabet_cutoff * t_count) as usize);
    for n in 1..=alphabet_cutoff {
        let d = spec.digits.digit(n)?;
        for j in 0..t_count {
            let phase = 2.0 * PI * j as f64 / t_count as f64;
            alphas.push(Complex64::from_polar(d, phase));
        }
    }

    // Per-letter supremum sum at t, for escape mass and prune corrections.
    let sup_letter_k: f64 = (1..=alphabet_cutoff)
        .map(|n| spec.digits.digit(n).map(|d| (d - 1.0).powf(-2.0 * t)))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum::<f64>()
        * t_count as f64;

    let mut acc = CompensatedSum::new();
    let mut prune_correction = 0.0;
    // Words are built suffix-first so the continued-fraction tails accumulate
    // in one pass per tree node.
    let mut stack: Vec<(u32, Complex64, f64)> = vec![(0, Complex64::new(0.0, 0.0), 1.0)];
    while let Some((depth, x, prod)) = stack.pop() {
        if depth == word_length {
            acc.add(prod.powf(t));
            continue;
        }
        // Iterate in reverse so the stack pops letters in ascending order.
        for a in alphas.iter().rev() {
            let x_new = (a + x).inv();
            let prod_new = prod * x_new.norm_sqr();
            if prod_new < PRUNE_FLOOR {
                let remaining = (word_length - depth - 1) as i32;
                prune_correction += prod_new.powf(t) * sup_letter_k.powi(remaining);
                continue;
            }
            stack.push((depth + 1, x_new, prod_new));
        }
    }
    let word_sum = acc.enclosure();

    let n_f = word_length as f64;
    let word_lower = next_down((word_sum.lo.max(f64::MIN_POSITIVE).ln() - t * bdp.ln()) / n_f);

    let full = sum_series(
        &spec.digits,
        TermForm::PowerOfShift { t, sigma: -1 },
        crate::series::DEFAULT_CUTOFF.max(alphabet_cutoff),
    )?;
    if full.is_divergent() {
        return Err(Error::Divergent(
            "word refinement at a divergent parameter".into(),
        ));
    }
    let s_full_hi = full.hi * t_count as f64;
    let s_k_lo = sup_letter_k * (1.0 - 1e-12);
    let escape = (s_full_hi.powf(n_f) - s_k_lo.powf(n_f)).max(0.0) + prune_correction;
    let word_upper = next_up((bdp.powf(t) * word_sum.hi + escape).ln() / n_f);

    let (lower_pv, upper_pv) = pressure_g_sandwich(spec, t, crate::series::DEFAULT_CUTOFF)?;
    let sandwich_lo = lower_pv.value.lo;
    let sandwich_hi = upper_pv.value.hi;

    Ok(WordRefinement {
        lower: word_lower.max(sandwich_lo),
        upper: word_upper.min(sandwich_hi),
        word_lower,
        word_upper,
        no_gain_lower: word_lower <= sandwich_lo,
        no_gain_upper: word_upper >= sandwich_hi,
        bdp_constant: bdp,
        alphabet_cutoff,
        word_length,
    })
}

/// The finiteness threshold of the pressure (convergence abscissa of the
/// digit series).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThetaResult {
    pub value: Interval,
    /// True when a closed form applies; numeric limsup sampling is always an
    /// estimate, never a certificate.
    pub certified: bool,
}

/// Threshold `inf { t : pressure finite }`: exactly `1/(2 gamma)` under a
/// polynomial growth profile, exactly `1/2` for the log family, and a
/// windowed limsup estimate of `log N / (2 log d_N)` otherwise.
pub fn finiteness_threshold(seq: &DigitSequence, n_max: u32) -> Result<ThetaResult> {
    if let Some(profile) = seq.growth_profile() {
        return Ok(ThetaResult {
            value: Interval::point(1.0 / (2.0 * profile.gamma)),
            certified: true,
        });
    }
    if has_log_core(seq) {
        return Ok(ThetaResult {
            value: Interval::point(0.5),
            certified: true,
        });
    }
    finiteness_threshold_estimate(seq, n_max)
}

/// Numeric limsup estimate of the threshold, regardless of closed forms.
///
/// Takes the running maxima of `log N / (2 log d_N)` over the last two
/// decades up to `n_max` and extrapolates them linearly in `1/log N` to
/// compensate the slow drift of the limsup sequence; the bracket of the last
/// maximum and the extrapolation is the estimate.
pub fn finiteness_threshold_estimate(seq: &DigitSequence, n_max: u32) -> Result<ThetaResult> {
    let n_max = n_max.max(1000);
    let decade1 = n_max / 100;
    let decade2 = n_max / 10;
    let mut max_mid = f64::NEG_INFINITY;
    let mut max_last = f64::NEG_INFINITY;
    for n in 2..=n_max {
        let d = seq.digit(n)?;
        let a = (n as f64).ln() / (2.0 * d.ln());
        if n >= decade1 && n <= decade2 {
            max_mid = max_mid.max(a);
        }
        if n >= decade2 {
            max_last = max_last.max(a);
        }
    }
    let l1 = (decade2 as f64).ln();
    let l2 = (n_max as f64).ln();
    let extrapolated = (max_last * l2 - max_mid * l1) / (l2 - l1);
    Ok(ThetaResult {
        value: Interval::new(
            max_last.min(extrapolated),
            max_last.max(extrapolated),
        ),
        certified: false,
    })
}

fn has_log_core(seq: &DigitSequence) -> bool {
    match seq {
        DigitSequence::LogFamily { .. } => true,
        DigitSequence::ExplicitPrefix { tail: Some(t), .. } => has_log_core(t),
        DigitSequence::Shifted { base, .. } => has_log_core(base),
        _ => false,
    }
}

/// Regularity trichotomy of a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegularityClass {
    /// Pressure is infinite at the threshold; every cofinite subsystem has a
    /// conformal measure.
    HereditarilyRegular,
    /// Pressure is finite and nonnegative at the threshold, so a zero exists
    /// but cofinite subsystems may lose it.
    RegularNotHereditarily,
    /// Pressure is certified negative at the threshold; the Hausdorff
    /// dimension collapses to the threshold.
    Irregular,
    /// The enclosure straddles zero at the threshold at this budget.
    Undetermined { width: f64 },
}

impl RegularityClass {
    pub fn is_regular(&self) -> bool {
        matches!(
            self,
            RegularityClass::HereditarilyRegular | RegularityClass::RegularNotHereditarily
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyBudget {
    pub cutoff: u32,
    pub escalations: u32,
    pub theta_samples: u32,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        ClassifyBudget {
            cutoff: crate::series::DEFAULT_CUTOFF,
            escalations: 1,
            theta_samples: 1_000_000,
        }
    }
}

/// Classify regularity from the pressure sign at the finiteness threshold.
///
/// Divergence at the threshold is certified from the analytic envelopes
/// (never from partial sums); sign decisions take the conservative endpoint
/// of the enclosure. Without a certified threshold the class is undetermined.
pub fn classify(spec: &SystemSpec, budget: &ClassifyBudget) -> Result<RegularityClass> {
    let theta = finiteness_threshold(&spec.digits, budget.theta_samples)?;
    if !theta.certified {
        return Ok(RegularityClass::Undetermined {
            width: theta.value.width(),
        });
    }
    let theta_hi = theta.value.hi;
    let mut cutoff = budget.cutoff;
    for round in 0..=budget.escalations {
        let curves = PressureCurves::new(spec, cutoff)?;
        let hull = match spec.family {
            Family::F => curves.affine_pressure(theta_hi)?,
            Family::G => curves.pressure_hull(theta_hi)?,
        };
        if hull.is_divergent() {
            return Ok(RegularityClass::HereditarilyRegular);
        }
        if hull.hi < 0.0 {
            return Ok(RegularityClass::Irregular);
        }
        if hull.lo >= 0.0 {
            return Ok(RegularityClass::RegularNotHereditarily);
        }
        if round == budget.escalations {
            return Ok(RegularityClass::Undetermined {
                width: hull.width(),
            });
        }
        cutoff = cutoff.saturating_mul(10);
    }
    unreachable!()
}

/// A truncation of the digit alphabet to finitely many letters is always
/// hereditarily regular; exposed for explicit-table workflows that carry no
/// analytic tail.
pub fn classify_finite_truncation(_letters: u32) -> RegularityClass {
    RegularityClass::HereditarilyRegular
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitSequence as DS;

    fn spec_f_2n_t2() -> SystemSpec {
        SystemSpec::new(Family::F, DS::affine(2.0, 0.0).unwrap(), 2)
    }

    fn example_17_19_cubes() -> DS {
        DS::explicit(
            vec![17.0, 19.0],
            Some(DS::polynomial(1.0, 3.0, 0, 0.0).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn affine_pressure_zero_at_one() {
        let p = pressure_f(&spec_f_2n_t2(), 1.0, 100_000).unwrap();
        assert!(p.value.contains(0.0), "{:?}", p.value);
        assert!(p.value.width() < 1e-8);
        assert_eq!(p.method, PressureMethod::ClosedFormF);
    }

    #[test]
    fn affine_pressure_divergent_below_threshold() {
        let p = pressure_f(&spec_f_2n_t2(), 0.25, 1000).unwrap();
        assert!(p.value.is_divergent());
    }

    #[test]
    fn affine_pressure_negative_for_cube_example() {
        let spec = SystemSpec::new(Family::F, example_17_19_cubes(), 4);
        let p = pressure_f(&spec, 0.5, 100_000).unwrap();
        assert!(p.value.hi < 0.0, "{:?}", p.value);
    }

    #[test]
    fn sandwich_ordering_and_method_selection() {
        let spec = SystemSpec::new(Family::G, DS::affine(2.0, 1.1).unwrap(), 1);
        let (lo, hi) = pressure_g_sandwich(&spec, 1.0, 50_000).unwrap();
        assert!(lo.value.lo <= hi.value.hi);
        assert_eq!(hi.method, PressureMethod::T1Upper);

        // T = 1 upper bound is log(sum d^-2) with d = 2n + 1.1.
        let spec4 = SystemSpec::new(Family::G, example_17_19_cubes(), 4);
        let (lo4, hi4) = pressure_g_sandwich(&spec4, 0.4, 50_000).unwrap();
        assert!(lo4.value.lo <= hi4.value.hi);
        assert_eq!(hi4.method, PressureMethod::GeneralTUpper);
    }

    #[test]
    fn cosine_upper_never_worse_than_generic() {
        let spec = SystemSpec::new(Family::G, DS::affine(2.0, 1.1).unwrap(), 4);
        let curves = PressureCurves::new(&spec, 20_000).unwrap();
        for t in [0.4, 0.7, 1.0, 1.4] {
            let generic = log_scaled(
                curves.prep.sum(TermForm::PowerOfShift { t, sigma: -1 }).unwrap(),
                4.0,
            );
            let (best, _) = curves.mobius_upper(t).unwrap();
            assert!(best.hi <= generic.hi + 1e-14);
        }
    }

    #[test]
    fn divergence_is_shared_between_families() {
        // Finiteness of the affine and Mobius pressures coincide: same
        // convergence abscissa.
        let seqs = [
            DS::affine(2.0, 0.5).unwrap(),
            DS::polynomial(1.0, 2.0, 1, 0.0).unwrap(),
            DS::polynomial(2.0, 3.0, 0, 1.0).unwrap(),
            DS::log_family(1.8).unwrap(),
        ];
        for seq in &seqs {
            for t in [0.1, 0.2, 0.3, 0.6, 1.1] {
                let f = SystemSpec::new(Family::F, seq.clone(), 1);
                let g = SystemSpec::new(Family::G, seq.clone(), 1);
                let pf = pressure_f(&f, t, 2000).unwrap().value.is_divergent();
                let (glo, ghi) = pressure_g_sandwich(&g, t, 2000).unwrap();
                assert_eq!(pf, glo.value.is_divergent());
                assert_eq!(pf, ghi.value.is_divergent());
            }
        }
    }

    #[test]
    fn continued_fraction_values() {
        let two = Complex64::new(2.0, 0.0);
        let z0 = Complex64::new(0.0, 0.0);
        assert!((continued_fraction(&[two], z0).re - 0.5).abs() < 1e-15);
        assert!((continued_fraction(&[two, two], z0).re - 0.4).abs() < 1e-15);
        let chain = vec![two; 20];
        let fixed = 2f64.sqrt() - 1.0;
        assert!((continued_fraction(&chain, z0).re - fixed).abs() < 1e-6);
    }

    #[test]
    fn continued_fraction_contracts_per_digit() {
        let seq = DS::affine(2.0, 0.0).unwrap();
        let z0 = Complex64::new(0.0, 0.0);
        let mut chain: Vec<Complex64> = Vec::new();
        let mut values = Vec::new();
        for n in 1..=12u32 {
            chain.push(Complex64::new(seq.digit(n % 3 + 1).unwrap(), 0.0));
            values.push(continued_fraction(&chain, z0));
        }
        for w in values.windows(3) {
            let step1 = (w[1] - w[0]).norm();
            let step2 = (w[2] - w[1]).norm();
            assert!(step2 <= step1 / 3.0 + 1e-15);
        }
    }

    #[test]
    fn word_derivative_closed_cases() {
        let f = SystemSpec::new(Family::F, DS::affine(2.0, 0.0).unwrap(), 1);
        let w = Word::new(vec![
            Letter { index: 1, rotation: 0 },
            Letter { index: 1, rotation: 0 },
        ]);
        let d = word_derivative(&f, &w, Complex64::new(0.3, 0.1)).unwrap();
        assert!((d.re - 1.0 / 9.0).abs() < 1e-15 && d.im == 0.0);

        let g = SystemSpec::new(Family::G, DS::affine(2.0, 0.0).unwrap(), 1);
        let w1 = Word::new(vec![Letter { index: 1, rotation: 0 }]);
        let d1 = word_derivative(&g, &w1, Complex64::new(0.0, 0.0)).unwrap();
        assert!((d1.re + 0.25).abs() < 1e-15 && d1.im.abs() < 1e-15);
    }

    #[test]
    fn finiteness_threshold_closed_forms() {
        let p = DS::polynomial(1.0, 3.0, 0, 0.0).unwrap();
        let th = finiteness_threshold(&p, 1000).unwrap();
        assert!(th.certified);
        assert_eq!(th.value, Interval::point(1.0 / 6.0));

        let l = DS::log_family(1.7).unwrap();
        let th = finiteness_threshold(&l, 1000).unwrap();
        assert!(th.certified);
        assert_eq!(th.value, Interval::point(0.5));
    }

    #[test]
    fn finiteness_threshold_numeric_estimate() {
        // Force the numeric path by wrapping the affine family in an explicit
        // head with an affine tail (profile exists; strip it via a raw probe).
        let seq = DS::affine(2.0, 0.0).unwrap();
        // Numeric estimator on the raw sequence values.
        let mut max_last = f64::NEG_INFINITY;
        let mut max_mid = f64::NEG_INFINITY;
        let n_max = 1_000_000u32;
        for n in (2..=n_max).step_by(1) {
            let d = seq.digit(n).unwrap();
            let a = (n as f64).ln() / (2.0 * d.ln());
            if n >= n_max / 100 && n <= n_max / 10 {
                max_mid = max_mid.max(a);
            }
            if n >= n_max / 10 {
                max_last = max_last.max(a);
            }
        }
        let l1 = ((n_max / 10) as f64).ln();
        let l2 = (n_max as f64).ln();
        let extrapolated = (max_last * l2 - max_mid * l1) / (l2 - l1);
        let mid = 0.5 * (max_last.min(extrapolated) + max_last.max(extrapolated));
        assert!((mid - 0.5).abs() < 0.02, "estimate {mid}");
    }

    #[test]
    fn affine_pressure_strictly_decreasing_past_threshold() {
        // theta = 1/2 for d = 2n; sample the grid [theta + 0.05, theta + 1].
        let spec = spec_f_2n_t2();
        let curves = PressureCurves::new(&spec, 20_000).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=19 {
            let t = 0.55 + 0.05 * k as f64;
            let mid = curves.affine_pressure(t).unwrap().midpoint();
            assert!(mid < prev, "pressure midpoint not decreasing at t = {t}");
            prev = mid;
        }
    }

    #[test]
    fn finite_truncations_are_hereditarily_regular() {
        assert_eq!(
            classify_finite_truncation(25),
            RegularityClass::HereditarilyRegular
        );
    }

    #[test]
    fn classify_undetermined_inside_sandwich_gap() {
        // Just below the critical lambda the reciprocal sum exceeds one but
        // the lower sandwich curve stays below it, so the Mobius sign at the
        // threshold is structurally undecidable from the bounds.
        let spec = SystemSpec::new(Family::G, DS::log_family(1.59).unwrap(), 1);
        let class = classify(&spec, &ClassifyBudget::default()).unwrap();
        assert!(matches!(class, RegularityClass::Undetermined { .. }), "{class:?}");
    }

    #[test]
    fn classify_polynomial_hereditarily_regular() {
        for (family, t) in [(Family::F, 4), (Family::G, 4)] {
            let spec = SystemSpec::new(family, example_17_19_cubes(), t);
            let class = classify(&spec, &ClassifyBudget::default()).unwrap();
            assert_eq!(class, RegularityClass::HereditarilyRegular);
        }
    }

    #[test]
    fn classify_log_family_above_unit_sum() {
        // At lambda = 1.9 the reciprocal digit sum is certified below one, so
        // the Mobius system at T = 1 is irregular while the affine one is
        // decided by the sign of its own series.
        let seq = DS::log_family(1.9).unwrap();
        let g = SystemSpec::new(Family::G, seq.clone(), 1);
        let class = classify(&g, &ClassifyBudget::default()).unwrap();
        assert_eq!(class, RegularityClass::Irregular);
    }

    #[test]
    fn word_refine_single_letter_matches_sandwich_up_to_distortion() {
        let spec = SystemSpec::new(Family::G, DS::affine(2.0, 1.0).unwrap(), 1);
        let t = 0.8;
        let k = 40;
        let refine = pressure_g_word_refine(&spec, t, k, 1, None).unwrap();
        // Raw word lower at N = 1 is log(sum_{n<=K} d^-2t) - t log B.
        let mut s = 0.0;
        for n in 1..=k {
            s += spec.digits.digit(n).unwrap().powf(-2.0 * t);
        }
        let expect = s.ln() - t * refine.bdp_constant.ln();
        assert!((refine.word_lower - expect).abs() < 1e-9);
        // The distortion penalty makes the raw route weaker than the
        // sandwich here, and the combined bounds report no gain.
        assert!(refine.no_gain_lower);
        let (lo, hi) = pressure_g_sandwich(&spec, t, crate::series::DEFAULT_CUTOFF).unwrap();
        assert_eq!(refine.lower, lo.value.lo);
        assert_eq!(refine.upper, hi.value.hi);
    }

    #[test]
    fn word_refine_budget_guard() {
        let spec = SystemSpec::new(Family::G, DS::affine(2.0, 1.0).unwrap(), 4);
        let err = pressure_g_word_refine(&spec, 0.8, 10_000, 4, None).unwrap_err();
        assert!(matches!(err, Error::EnumerationBudget { .. }));
    }

    #[test]
    fn word_refine_nested_budgets_do_not_widen() {
        let spec = SystemSpec::new(Family::G, DS::affine(2.0, 1.0).unwrap(), 1);
        let t = 0.8;
        let small = pressure_g_word_refine(&spec, t, 20, 2, None).unwrap();
        let large = pressure_g_word_refine(&spec, t, 40, 3, None).unwrap();
        let w_small = small.upper - small.lower;
        let w_large = large.upper - large.lower;
        assert!(w_large <= w_small + 1e-12);
    }
}
