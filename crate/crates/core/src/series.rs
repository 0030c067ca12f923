//! Certified evaluation of the infinite digit series.
//!
//! Every sum is a compensated partial sum through a cutoff plus a two-sided
//! tail envelope from the integral comparison test: for positive terms
//! `f(n)` that decrease past the cutoff `M`,
//!
//! ```text
//!   integral_{M+1}^inf f(x) dx  <=  sum_{n>M} f(n)  <=  integral_M^inf f(x) dx,
//! ```
//!
//! so the enclosure width is at most `f(M)` plus the pinch slack below. Terms
//! are written as `d^(-p)` times a factor that tends monotonically to 1; the
//! factor is frozen at the first tail index ("pinch") and the pure power
//! integral is evaluated in closed form per digit family.

use crate::digits::DigitSequence;
use crate::error::{Error, Result};
use crate::interval::{next_down, next_up, CompensatedSum, Interval};

/// The closed set of term shapes the envelope machinery certifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermForm {
    /// `(d^2 - 1)^(-t)`, `t > 0`.
    PowerOfSquareMinusOne { t: f64 },
    /// `(d + sigma)^(-2t)`, `sigma` in `{-1, 0, +1}`, `t > 0`.
    PowerOfShift { t: f64, sigma: i8 },
    /// `(d^2 + 1 - 2 d cos(theta))^(-t)`, `t > 0`. Valid for `d >= 2` since
    /// the base is at least `(d - 1)^2 > 0`.
    CosineQuadratic { t: f64, theta: f64 },
    /// `d^(-1)`.
    Reciprocal,
}

impl TermForm {
    pub fn eval(&self, d: f64) -> f64 {
        match *self {
            TermForm::PowerOfSquareMinusOne { t } => (d * d - 1.0).powf(-t),
            TermForm::PowerOfShift { t, sigma } => (d + sigma as f64).powf(-2.0 * t),
            TermForm::CosineQuadratic { t, theta } => {
                (d * d + 1.0 - 2.0 * d * theta.cos()).powf(-t)
            }
            TermForm::Reciprocal => 1.0 / d,
        }
    }

    /// Decay exponent `p` in `term(d) ~ d^(-p)`.
    pub fn decay_exponent(&self) -> f64 {
        match *self {
            TermForm::PowerOfSquareMinusOne { t } => 2.0 * t,
            TermForm::PowerOfShift { t, .. } => 2.0 * t,
            TermForm::CosineQuadratic { t, .. } => 2.0 * t,
            TermForm::Reciprocal => 1.0,
        }
    }

    fn assert_valid(&self) {
        let t = match *self {
            TermForm::PowerOfSquareMinusOne { t } => t,
            TermForm::PowerOfShift { t, sigma } => {
                assert!(sigma.abs() <= 1, "shift must be -1, 0, +1");
                t
            }
            TermForm::CosineQuadratic { t, .. } => t,
            TermForm::Reciprocal => return,
        };
        assert!(t > 0.0, "power forms need t > 0");
    }

    /// Bounds on `term(d) * d^p` over the tail `d >= d0`.
    ///
    /// Each factor is monotone in `d` with limit 1, so the endpoint value and
    /// the limit bracket it.
    fn pinch_bounds(&self, d0: f64) -> (f64, f64) {
        match *self {
            TermForm::PowerOfSquareMinusOne { t } => (1.0, (1.0 - 1.0 / (d0 * d0)).powf(-t)),
            TermForm::PowerOfShift { t, sigma } => match sigma {
                -1 => (1.0, (1.0 - 1.0 / d0).powf(-2.0 * t)),
                0 => (1.0, 1.0),
                1 => ((1.0 + 1.0 / d0).powf(-2.0 * t), 1.0),
                _ => unreachable!(),
            },
            // The quadratic sits between (d-1)^2 and (d+1)^2 for any angle.
            TermForm::CosineQuadratic { t, .. } => (
                (1.0 + 1.0 / d0).powf(-2.0 * t),
                (1.0 - 1.0 / d0).powf(-2.0 * t),
            ),
            TermForm::Reciprocal => (1.0, 1.0),
        }
    }
}

/// Closed-form enclosure of `integral_A^inf d(x)^(-p) dx`, or `DIVERGENT`.
fn power_tail_integral(seq: &DigitSequence, p: f64, from: u32) -> Result<Interval> {
    let a = from as f64;
    match seq {
        DigitSequence::AffineFamily { slope, intercept } => {
            if p <= 1.0 {
                return Ok(Interval::DIVERGENT);
            }
            let v = (slope * a + intercept).powf(1.0 - p) / (slope * (p - 1.0));
            Ok(ulp_pad(v, v))
        }
        DigitSequence::PolynomialFamily {
            scale,
            exponent,
            offset,
            shift,
        } => {
            let gp = exponent * p;
            if gp <= 1.0 {
                return Ok(Interval::DIVERGENT);
            }
            let y = a + *offset as f64;
            let base = scale.powf(-p) * y.powf(1.0 - gp) / (gp - 1.0);
            // d(x) = c y^gamma (1 + s / (c y^gamma)); the shift factor only
            // lowers the integrand, monotonically toward 1.
            let sfac = (1.0 + shift / (scale * y.powf(*exponent))).powf(-p);
            Ok(ulp_pad(base * sfac, base))
        }
        DigitSequence::LogFamily { lambda } => {
            let coeff = (3f64.ln().powf(*lambda) / 2.0).powf(p);
            let b = a + 2.0;
            let mu = lambda * p;
            if p < 1.0 {
                return Ok(Interval::DIVERGENT);
            }
            if p == 1.0 {
                // Exact antiderivative of 1/((x+2) ln(x+2)^lambda).
                if *lambda <= 1.0 {
                    return Ok(Interval::DIVERGENT);
                }
                let v = coeff * b.ln().powf(1.0 - lambda) / (lambda - 1.0);
                return Ok(ulp_pad(v, v));
            }
            // integral_B^inf u^-p (ln u)^-mu du bracketed via one integration
            // by parts: upper U, lower U * (1 - mu / ((p-1) ln B)).
            let upper = coeff * b.ln().powf(-mu) * b.powf(1.0 - p) / (p - 1.0);
            let lower = upper * (1.0 - mu / ((p - 1.0) * b.ln())).max(0.0);
            Ok(ulp_pad(lower, upper))
        }
        DigitSequence::ExplicitPrefix {
            splice_index, tail, ..
        } => {
            let tail = tail.as_ref().ok_or_else(|| Error::NoTailEnvelope {
                what: "explicit table without a declared analytic tail".into(),
            })?;
            debug_assert!(from + 1 >= *splice_index, "envelope must start past the head");
            power_tail_integral(tail, p, from)
        }
        DigitSequence::Shifted { base, drop } => power_tail_integral(base, p, from + drop),
    }
}

fn ulp_pad(lo: f64, hi: f64) -> Interval {
    let pad = 4.0 * f64::EPSILON;
    Interval::new(
        next_down(lo - pad * lo.abs()).max(0.0),
        next_up(hi + pad * hi.abs()),
    )
}

/// Digit values cached through the cutoff so repeated sums (bisection over
/// `t`) skip re-evaluating the sequence.
pub struct PreparedSeries<'a> {
    seq: &'a DigitSequence,
    /// Effective cutoff: requested `M` pushed past any explicit head.
    m_eff: u32,
    /// `digits[k]` is `d_{k+1}`.
    digits: Vec<f64>,
}

impl<'a> PreparedSeries<'a> {
    pub fn prepare(seq: &'a DigitSequence, cutoff: u32) -> Result<PreparedSeries<'a>> {
        assert!(cutoff >= 1, "cutoff starts at 1");
        if !seq.has_tail() {
            return Err(Error::NoTailEnvelope {
                what: "finite explicit table".into(),
            });
        }
        let m_eff = cutoff.max(seq.analytic_start().saturating_sub(1)).max(1);
        let mut digits = Vec::with_capacity(m_eff as usize);
        for n in 1..=m_eff {
            digits.push(seq.digit(n)?);
        }
        Ok(PreparedSeries { seq, m_eff, digits })
    }

    pub fn cutoff(&self) -> u32 {
        self.m_eff
    }

    /// Enclosure of `sum_{n=1}^inf term(d_n)`.
    pub fn sum(&self, form: TermForm) -> Result<Interval> {
        self.sum_from(form, 1)
    }

    /// Enclosure of `sum_{n=start}^inf term(d_n)`.
    pub fn sum_from(&self, form: TermForm, start: u32) -> Result<Interval> {
        form.assert_valid();
        assert!(start >= 1);
        let p = form.decay_exponent();
        let m = self.m_eff.max(start.saturating_sub(1));

        let mut acc = CompensatedSum::new();
        for n in start..=m {
            let d = if n <= self.m_eff {
                self.digits[(n - 1) as usize]
            } else {
                self.seq.digit(n)?
            };
            let term = form.eval(d);
            if !term.is_finite() {
                // A degenerate digit (at the form's pole) dominates the sum.
                return Ok(Interval::DIVERGENT);
            }
            acc.add(term);
        }
        let partial = acc.enclosure();

        let d_next = self.seq.digit(m + 1)?;
        let (pinch_lo, pinch_hi) = form.pinch_bounds(d_next);
        let inner = power_tail_integral(self.seq, p, m + 1)?;
        if inner.is_divergent() {
            // The lower envelope already diverges, so the sum is certified
            // infinite.
            return Ok(Interval::DIVERGENT);
        }
        let outer = power_tail_integral(self.seq, p, m)?;
        let tail = Interval::new(
            next_down(pinch_lo * inner.lo),
            next_up(pinch_hi * outer.hi),
        );
        Ok(partial.add(&tail))
    }
}

/// Enclosure of `sum_{n=1}^inf term(d_n)` at cutoff `M`.
pub fn sum_series(seq: &DigitSequence, form: TermForm, cutoff: u32) -> Result<Interval> {
    PreparedSeries::prepare(seq, cutoff)?.sum(form)
}

/// Enclosure of `sum_{n=start}^inf term(d_n)` at cutoff `M`.
pub fn sum_series_from(
    seq: &DigitSequence,
    form: TermForm,
    start: u32,
    cutoff: u32,
) -> Result<Interval> {
    PreparedSeries::prepare(seq, cutoff)?.sum_from(form, start)
}

/// Default series cutoff; callers adapt from the reported width.
pub const DEFAULT_CUTOFF: u32 = 100_000;

/// Reciprocal digit sum of the log family, `sum_n 1/d_n` at the given lambda.
pub fn log_family_reciprocal_sum(lambda: f64, cutoff: u32) -> Result<Interval> {
    if !(lambda > 1.0) {
        return Err(Error::Divergent(format!(
            "reciprocal log-family sum needs lambda > 1, got {lambda}"
        )));
    }
    let seq = DigitSequence::log_family(lambda)?;
    sum_series(&seq, TermForm::Reciprocal, cutoff)
}

/// Analytic bracket for the reciprocal log-family sum from the two closed
/// integrals, `[ln3 / (2(l-1)), (ln2 / (2(l-1))) (ln3/ln2)^l]`.
pub fn log_family_sum_bracket(lambda: f64) -> Interval {
    let l3 = 3f64.ln();
    let l2 = 2f64.ln();
    Interval::new(
        l3 / (2.0 * (lambda - 1.0)),
        l2 / (2.0 * (lambda - 1.0)) * (l3 / l2).powf(lambda),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine_2n() -> DigitSequence {
        DigitSequence::affine(2.0, 0.0).unwrap()
    }

    #[test]
    fn telescoping_value_in_envelope_at_all_cutoffs() {
        // sum 1/(4n^2 - 1) = 1/2 exactly.
        let seq = affine_2n();
        let form = TermForm::PowerOfSquareMinusOne { t: 1.0 };
        for m in [1u32, 10, 100, 1000] {
            let s = sum_series(&seq, form, m).unwrap();
            assert!(s.contains(0.5), "cutoff {m}: {s:?}");
            assert!(s.width() < 1.0 / (4.0 * m as f64), "cutoff {m}: {s:?}");
        }
    }

    #[test]
    fn nested_and_monotone_in_cutoff() {
        let seq = affine_2n();
        let form = TermForm::PowerOfSquareMinusOne { t: 0.8 };
        let mut prev: Option<Interval> = None;
        for m in [1u32, 10, 100, 1000, 10_000] {
            let s = sum_series(&seq, form, m).unwrap();
            if let Some(p) = prev {
                assert!(s.is_subset_of(&p), "cutoff {m} not nested: {s:?} vs {p:?}");
                assert!(s.lo >= p.lo);
            }
            prev = Some(s);
        }
    }

    #[test]
    fn midpoint_strictly_decreasing_in_t() {
        let seq = affine_2n();
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let t = 0.55 + 0.1 * k as f64;
            let s = sum_series(&seq, TermForm::PowerOfSquareMinusOne { t }, 1000).unwrap();
            assert!(s.midpoint() < prev);
            prev = s.midpoint();
        }
    }

    #[test]
    fn divergence_threshold_polynomial() {
        // gamma = 2: (d^2-1)^-t diverges iff 2*gamma*t <= 1, i.e. t <= 1/4.
        let seq = DigitSequence::polynomial(1.0, 2.0, 1, 0.0).unwrap();
        let diverged = sum_series(&seq, TermForm::PowerOfSquareMinusOne { t: 0.25 }, 100).unwrap();
        assert!(diverged.is_divergent());
        let fine = sum_series(&seq, TermForm::PowerOfSquareMinusOne { t: 0.26 }, 100).unwrap();
        assert!(fine.hi.is_finite());
    }

    #[test]
    fn odd_square_sum_matches_pi_squared_over_eight() {
        // sum (2n+1)^-2 = pi^2/8 - 1.
        let seq = DigitSequence::affine(2.0, 1.0).unwrap();
        let s = sum_series(&seq, TermForm::PowerOfShift { t: 1.0, sigma: 0 }, 100_000).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 8.0 - 1.0;
        assert!(s.contains(exact));
        assert!(s.width() < 1e-9);
    }

    #[test]
    fn explicit_head_tail_reproduces_sharp_bound() {
        // 4 * (1/16 + 1/18 + (27/26) * 1/8) = 116/117 at cutoff 2.
        let seq = DigitSequence::explicit(
            vec![17.0, 19.0],
            Some(DigitSequence::polynomial(1.0, 3.0, 0, 0.0).unwrap()),
        )
        .unwrap();
        let s = sum_series(&seq, TermForm::PowerOfShift { t: 0.5, sigma: -1 }, 2).unwrap();
        let paper_bound = 116.0 / 117.0;
        assert!((4.0 * s.hi - paper_bound).abs() < 1e-12);
        assert!(4.0 * s.hi < 1.0);
        assert!(4.0 * s.lo < 4.0 * s.hi);
    }

    #[test]
    fn finite_table_has_no_envelope() {
        let seq = DigitSequence::explicit(vec![2.0, 4.0, 6.0], None).unwrap();
        assert!(matches!(
            sum_series(&seq, TermForm::Reciprocal, 10),
            Err(Error::NoTailEnvelope { .. })
        ));
    }

    #[test]
    fn log_family_sum_sits_in_analytic_bracket() {
        for lambda in [1.5, 1.8, 2.0] {
            let s = log_family_reciprocal_sum(lambda, 100_000).unwrap();
            let bracket = log_family_sum_bracket(lambda);
            assert!(s.is_subset_of(&bracket), "lambda {lambda}: {s:?} vs {bracket:?}");
        }
        assert!(log_family_reciprocal_sum(1.5, 100_000).unwrap().lo > 1.0);
        assert!(log_family_reciprocal_sum(2.0, 100_000).unwrap().hi < 1.0);
    }

    #[test]
    fn shifted_sum_matches_start_index() {
        let seq = affine_2n();
        let form = TermForm::PowerOfSquareMinusOne { t: 1.0 };
        let from_index = sum_series_from(&seq, form, 6, 5000).unwrap();
        let shifted = sum_series(&seq.tail_shift(6), form, 5000).unwrap();
        // Both enclose the telescoping tail sum_{n>=6} 1/(4n^2-1) = 1/22.
        assert!(from_index.contains(1.0 / 22.0));
        assert!(shifted.contains(1.0 / 22.0));
    }

    #[test]
    fn cosine_quadratic_between_shift_forms() {
        let seq = affine_2n();
        for theta in [0.3, 1.2, 2.9] {
            let c = sum_series(&seq, TermForm::CosineQuadratic { t: 1.0, theta }, 500).unwrap();
            let lo = sum_series(&seq, TermForm::PowerOfShift { t: 1.0, sigma: 1 }, 500).unwrap();
            let hi = sum_series(&seq, TermForm::PowerOfShift { t: 1.0, sigma: -1 }, 500).unwrap();
            assert!(lo.lo <= c.lo && c.hi <= hi.hi);
        }
    }
}
