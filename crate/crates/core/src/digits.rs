//! Digit sequences, their growth profiles, and system validity.
//!
//! A digit sequence models `d = {d_n}` with `d_1 >= 2` and gaps
//! `d_{n+1} - d_n >= 2`; together with a rotation count `T` it parameterizes
//! the affine family and the Mobius (reciprocal) family on the closed unit
//! disc. All types here are immutable and all operations are pure.

use crate::error::{Error, Result};
use serde::Serialize;

pub const MIN_DIGIT: f64 = 2.0;
pub const MIN_GAP: f64 = 2.0;

/// Which of the two generator families a system uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Similarities `z -> (z + conj(a)) / (|a|^2 - 1)`.
    F,
    /// Mobius maps `z -> 1 / (z + a)`.
    G,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::F => write!(f, "F"),
            Family::G => write!(f, "G"),
        }
    }
}

/// A digit sequence in the admissible class: built-in analytic families or an
/// explicit table spliced onto a declared analytic tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DigitSequence {
    /// `d_n = a n + b` with `a >= 2`, `b >= 0`.
    AffineFamily { slope: f64, intercept: f64 },
    /// `d_n = c (n + L)^gamma + s` with `c > 0`, `gamma >= 1`, `L >= 0`, `s >= 0`.
    PolynomialFamily {
        scale: f64,
        exponent: f64,
        offset: u32,
        shift: f64,
    },
    /// `d_n = 2 (n+2) (ln(n+2))^lambda / (ln 3)^lambda` with `lambda > 1`.
    LogFamily { lambda: f64 },
    /// Finite head table; `tail` supplies indices past the head. A missing
    /// tail restricts the sequence to finite-index queries only.
    ExplicitPrefix {
        head: Vec<f64>,
        splice_index: u32,
        tail: Option<Box<DigitSequence>>,
    },
    /// Reindexing `d'_n = base_{n + drop}` (a shift by `l` drops `l - 1` terms).
    Shifted { base: Box<DigitSequence>, drop: u32 },
}

use DigitSequence::*;

impl DigitSequence {
    pub fn affine(slope: f64, intercept: f64) -> Result<DigitSequence> {
        if !(slope >= 2.0) {
            return Err(Error::BadSequence(format!("affine slope {slope} < 2")));
        }
        if !(intercept >= 0.0) {
            return Err(Error::BadSequence(format!(
                "affine intercept {intercept} < 0"
            )));
        }
        Ok(AffineFamily { slope, intercept })
    }

    pub fn polynomial(scale: f64, exponent: f64, offset: u32, shift: f64) -> Result<DigitSequence> {
        if !(scale > 0.0) {
            return Err(Error::BadSequence(format!("polynomial scale {scale} <= 0")));
        }
        if !(exponent >= 1.0) {
            return Err(Error::BadSequence(format!(
                "polynomial exponent {exponent} < 1"
            )));
        }
        if !(shift >= 0.0) {
            return Err(Error::BadSequence(format!("polynomial shift {shift} < 0")));
        }
        Ok(PolynomialFamily {
            scale,
            exponent,
            offset,
            shift,
        })
    }

    pub fn log_family(lambda: f64) -> Result<DigitSequence> {
        if !(lambda > 1.0) {
            return Err(Error::BadSequence(format!("log-family lambda {lambda} <= 1")));
        }
        Ok(LogFamily { lambda })
    }

    pub fn explicit(head: Vec<f64>, tail: Option<DigitSequence>) -> Result<DigitSequence> {
        if head.is_empty() {
            return Err(Error::BadSequence("explicit head is empty".into()));
        }
        if head.iter().any(|d| !d.is_finite()) {
            return Err(Error::BadSequence("explicit head has non-finite entry".into()));
        }
        let splice_index = head.len() as u32 + 1;
        Ok(ExplicitPrefix {
            head,
            splice_index,
            tail: tail.map(Box::new),
        })
    }

    /// Pointwise evaluation `d_n`, `n >= 1`.
    pub fn digit(&self, n: u32) -> Result<f64> {
        assert!(n >= 1, "digit index starts at 1");
        match self {
            AffineFamily { slope, intercept } => Ok(slope * n as f64 + intercept),
            PolynomialFamily {
                scale,
                exponent,
                offset,
                shift,
            } => Ok(scale * (n as f64 + *offset as f64).powf(*exponent) + shift),
            LogFamily { lambda } => {
                let x = n as f64 + 2.0;
                Ok(2.0 * x * (x.ln() / 3f64.ln()).powf(*lambda))
            }
            ExplicitPrefix { head, tail, .. } => {
                if (n as usize) <= head.len() {
                    Ok(head[n as usize - 1])
                } else {
                    match tail {
                        Some(t) => t.digit(n),
                        None => Err(Error::BeyondHead { index: n }),
                    }
                }
            }
            Shifted { base, drop } => base.digit(n + drop),
        }
    }

    /// First index whose value comes from an analytic formula (1 for the
    /// built-in families; the splice index for explicit tables).
    pub fn analytic_start(&self) -> u32 {
        match self {
            ExplicitPrefix { splice_index, tail, .. } => match tail {
                Some(t) => (*splice_index).max(t.analytic_start()),
                None => u32::MAX,
            },
            Shifted { base, drop } => base.analytic_start().saturating_sub(*drop).max(1),
            _ => 1,
        }
    }

    /// Whether infinite-tail operations (series envelopes) are available.
    pub fn has_tail(&self) -> bool {
        match self {
            ExplicitPrefix { tail, .. } => tail.as_ref().is_some_and(|t| t.has_tail()),
            Shifted { base, .. } => base.has_tail(),
            _ => true,
        }
    }

    /// `d'_n = d_{n + l - 1}`; membership in the admissible class is
    /// preserved because gaps are inherited. Shifting a shift flattens, so
    /// composing shifts by `l` and `m` equals one shift by `l + m - 1`.
    pub fn tail_shift(&self, l: u32) -> DigitSequence {
        assert!(l >= 1, "shift index starts at 1");
        if l == 1 {
            return self.clone();
        }
        match self {
            Shifted { base, drop } => Shifted {
                base: base.clone(),
                drop: drop + (l - 1),
            },
            other => Shifted {
                base: Box::new(other.clone()),
                drop: l - 1,
            },
        }
    }

    /// Membership check for the admissible class: `d_1 >= 2` and all gaps
    /// `>= 2`.
    ///
    /// Variants with an analytic gap certificate are checked through their
    /// closed-form bound (probing stops at the analytic region, covering any
    /// explicit head and the splice); otherwise the first `probe` gaps are
    /// checked pointwise with a small slack absorbing evaluation rounding.
    pub fn validate_membership(&self, probe: u32) -> Result<MembershipReport> {
        assert!(probe >= 2);
        let d1 = self.digit(1)?;
        if d1 < MIN_DIGIT - GAP_EVAL_SLACK {
            return Ok(MembershipReport::violation(d1, 1, "d_1 < 2"));
        }
        let certificate = self.tail_gap_certificate(probe);
        let probe_end = match certificate {
            TailCertificate::Analytic => probe.min(self.analytic_start()),
            TailCertificate::ProbeOnly { .. } => probe.min(self.finite_horizon()),
        };
        let mut prev = d1;
        for n in 2..=probe_end {
            let d = self.digit(n)?;
            if d - prev < MIN_GAP - GAP_EVAL_SLACK {
                return Ok(MembershipReport::violation(d1, n - 1, "gap < 2"));
            }
            prev = d;
        }
        Ok(MembershipReport {
            valid: true,
            d1,
            witness: None,
            detail: String::new(),
            certificate,
        })
    }

    /// Largest index that must be probed pointwise (finite heads only).
    fn finite_horizon(&self) -> u32 {
        match self {
            ExplicitPrefix { head, tail, .. } => match tail {
                Some(_) => u32::MAX,
                None => head.len() as u32,
            },
            _ => u32::MAX,
        }
    }

    /// Analytic tail-gap certificate where the formula provides one.
    fn tail_gap_certificate(&self, probe: u32) -> TailCertificate {
        match self {
            AffineFamily { slope, .. } => {
                // gap is exactly the slope
                if *slope >= MIN_GAP {
                    TailCertificate::Analytic
                } else {
                    TailCertificate::ProbeOnly { probe }
                }
            }
            PolynomialFamily {
                scale,
                exponent,
                offset,
                ..
            } => {
                // gap_n >= c*gamma*(n+L)^(gamma-1), nondecreasing in n, so the
                // derivative bound at n = 1 certifies every gap at once.
                let floor = scale * exponent * (1.0 + *offset as f64).powf(exponent - 1.0);
                if floor >= MIN_GAP {
                    TailCertificate::Analytic
                } else {
                    TailCertificate::ProbeOnly { probe }
                }
            }
            // gap >= 2 (ln(n+2)/ln 3)^lambda >= 2 for every n.
            LogFamily { .. } => TailCertificate::Analytic,
            ExplicitPrefix { tail, .. } => match tail {
                Some(t) => t.tail_gap_certificate(probe),
                None => TailCertificate::ProbeOnly { probe },
            },
            Shifted { base, .. } => base.tail_gap_certificate(probe),
        }
    }

    /// Polynomial growth profile when one exists analytically.
    ///
    /// The log family is super-polynomial (no profile); explicit tables
    /// inherit the tail's profile with the start bumped past the splice.
    pub fn growth_profile(&self) -> Option<GrowthProfile> {
        match self {
            AffineFamily { slope, intercept } => Some(GrowthProfile {
                c1: *slope,
                c2: slope + intercept,
                c3: *slope,
                gamma: 1.0,
                start: 1,
            }),
            PolynomialFamily {
                scale,
                exponent,
                offset,
                shift,
            } => {
                let mut start = 1u32;
                while *scale * (start as f64).powf(*exponent) <= 1.0 {
                    start += 1;
                }
                let nf = start as f64;
                let c2 = scale * (1.0 + *offset as f64 / nf).powf(*exponent)
                    + shift / nf.powf(*exponent);
                Some(GrowthProfile {
                    c1: *scale,
                    c2,
                    c3: scale * exponent,
                    gamma: *exponent,
                    start,
                })
            }
            LogFamily { .. } => None,
            ExplicitPrefix {
                splice_index, tail, ..
            } => {
                let p = tail.as_ref()?.growth_profile()?;
                Some(GrowthProfile {
                    start: p.start.max(*splice_index),
                    ..p
                })
            }
            Shifted { base, drop } => {
                let p = base.growth_profile()?;
                let mut start = p.start.saturating_sub(*drop).max(1);
                while p.c1 * (start as f64).powf(p.gamma) <= 1.0 {
                    start += 1;
                }
                let nf = start as f64;
                let c2 = p.c2 * (1.0 + *drop as f64 / nf).powf(p.gamma);
                Some(GrowthProfile {
                    c1: p.c1,
                    c2,
                    c3: p.c3,
                    gamma: p.gamma,
                    start,
                })
            }
        }
    }
}

/// How the tail of the gap condition was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailCertificate {
    /// A formula-level bound covers every index past the probe window.
    Analytic,
    /// Only the probed window is covered; confidence is "probe-only".
    ProbeOnly { probe: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub valid: bool,
    pub d1: f64,
    /// Index of the first violated gap (the gap between `witness` and
    /// `witness + 1`), or 1 for a `d_1` violation.
    pub witness: Option<u32>,
    pub detail: String,
    pub certificate: TailCertificate,
}

impl MembershipReport {
    fn violation(d1: f64, witness: u32, what: &str) -> MembershipReport {
        MembershipReport {
            valid: false,
            d1,
            witness: Some(witness),
            detail: format!("{what} at index {witness}"),
            certificate: TailCertificate::ProbeOnly { probe: witness },
        }
    }
}

/// Verified polynomial growth data: `c1 n^gamma <= d_n <= c2 n^gamma` and
/// `d_{n+1} - d_n >= c3 n^(gamma-1)` for `n >= start`, with `c1 start^gamma > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthProfile {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub gamma: f64,
    pub start: u32,
}

/// Full parameterization of one system: family, digits, rotation count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSpec {
    pub family: Family,
    pub digits: DigitSequence,
    pub rotations: u32,
}

impl SystemSpec {
    pub fn new(family: Family, digits: DigitSequence, rotations: u32) -> SystemSpec {
        assert!(rotations >= 1, "rotation count starts at 1");
        SystemSpec {
            family,
            digits,
            rotations,
        }
    }

    pub fn t(&self) -> f64 {
        self.rotations as f64
    }

    /// Sufficient-condition check that the generated family is a uniformly
    /// contracting conformal system with disjoint (at worst tangent)
    /// generator discs: `T <= pi / arcsin(1 / d_1)`, and `d_1 > 2` for the
    /// Mobius family.
    pub fn cifs_check(&self) -> Result<CifsReport> {
        let membership = self.digits.validate_membership(DEFAULT_PROBE)?;
        let d1 = membership.d1;
        let rotation_bound = std::f64::consts::PI / (1.0 / d1).asin();
        let mut failing = Vec::new();
        if !membership.valid {
            failing.push(format!("digit membership: {}", membership.detail));
        }
        if self.t() > rotation_bound + ROTATION_SLACK {
            failing.push(format!(
                "rotation count {} exceeds pi/arcsin(1/d_1) = {rotation_bound:.6}",
                self.rotations
            ));
        }
        if self.family == Family::G && !(d1 > 2.0) {
            failing.push("Mobius family needs d_1 > 2".into());
        }
        Ok(CifsReport {
            valid: failing.is_empty(),
            rotation_bound,
            membership,
            failing,
        })
    }

    pub fn require_valid(&self) -> Result<CifsReport> {
        let report = self.cifs_check()?;
        if report.valid {
            Ok(report)
        } else {
            Err(Error::InvalidSystem {
                reason: report.failing.join("; "),
            })
        }
    }
}

const DEFAULT_PROBE: u32 = 10_000;
/// Absorbs libm rounding so e.g. `d_1 = 2, T = 6` sits exactly on the bound.
const ROTATION_SLACK: f64 = 1e-9;
/// Absorbs evaluation rounding in probed gap checks.
const GAP_EVAL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct CifsReport {
    pub valid: bool,
    /// The numeric bound `pi / arcsin(1 / d_1)`.
    pub rotation_bound: f64,
    pub membership: MembershipReport,
    pub failing: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_17_19_cubes() -> DigitSequence {
        DigitSequence::explicit(
            vec![17.0, 19.0],
            Some(DigitSequence::polynomial(1.0, 3.0, 0, 0.0).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn digit_formulas() {
        let a = DigitSequence::affine(2.0, 0.0).unwrap();
        assert_eq!(a.digit(3).unwrap(), 6.0);

        let l = DigitSequence::log_family(1.5).unwrap();
        assert!((l.digit(1).unwrap() - 6.0).abs() < 1e-12);

        let e = example_17_19_cubes();
        assert_eq!(e.digit(1).unwrap(), 17.0);
        assert_eq!(e.digit(2).unwrap(), 19.0);
        assert_eq!(e.digit(4).unwrap(), 64.0);
    }

    #[test]
    fn explicit_without_tail_errors_past_head() {
        let e = DigitSequence::explicit(vec![2.0, 4.0], None).unwrap();
        assert_eq!(e.digit(2).unwrap(), 4.0);
        assert!(matches!(e.digit(3), Err(Error::BeyondHead { index: 3 })));
    }

    #[test]
    fn membership_checks() {
        let a = DigitSequence::affine(2.0, 0.0).unwrap();
        let r = a.validate_membership(100).unwrap();
        assert!(r.valid);
        assert_eq!(r.certificate, TailCertificate::Analytic);

        let l = DigitSequence::log_family(1.5).unwrap();
        assert!(l.validate_membership(100).unwrap().valid);

        let bad = DigitSequence::explicit(vec![2.0, 3.0], None).unwrap();
        let r = bad.validate_membership(2).unwrap();
        assert!(!r.valid);
        assert_eq!(r.witness, Some(1));
    }

    #[test]
    fn growth_profiles() {
        let p = DigitSequence::polynomial(1.0, 3.0, 0, 0.0).unwrap();
        let g = p.growth_profile().unwrap();
        assert_eq!((g.c1, g.c2, g.c3, g.gamma, g.start), (1.0, 1.0, 3.0, 3.0, 2));

        let e = example_17_19_cubes();
        let g = e.growth_profile().unwrap();
        assert_eq!((g.c1, g.c2, g.gamma, g.start), (1.0, 1.0, 3.0, 3));

        assert!(DigitSequence::log_family(2.0).unwrap().growth_profile().is_none());
    }

    #[test]
    fn profile_bounds_hold_on_samples() {
        let seqs = [
            DigitSequence::affine(2.0, 5.0).unwrap(),
            DigitSequence::polynomial(0.5, 2.0, 3, 1.0).unwrap(),
            example_17_19_cubes().tail_shift(4),
        ];
        for seq in &seqs {
            let p = seq.growth_profile().unwrap();
            assert!(p.c1 * (p.start as f64).powf(p.gamma) > 1.0);
            for k in 0..1000u32 {
                let n = p.start + k;
                let d = seq.digit(n).unwrap();
                let nf = (n as f64).powf(p.gamma);
                assert!(p.c1 * nf <= d && d <= p.c2 * nf, "profile violated at n={n}");
                let gap = seq.digit(n + 1).unwrap() - d;
                let floor = p.c3 * (n as f64).powf(p.gamma - 1.0);
                assert!(gap >= floor * (1.0 - 1e-12), "gap floor violated at n={n}");
            }
        }
    }

    #[test]
    fn shift_reindexes_and_composes() {
        let a = DigitSequence::affine(2.0, 0.0).unwrap();
        let s = a.tail_shift(3);
        assert_eq!(s.digit(1).unwrap(), 6.0);

        let id = a.tail_shift(1);
        for n in 1..=100 {
            assert_eq!(id.digit(n).unwrap(), a.digit(n).unwrap());
        }

        let twice = a.tail_shift(3).tail_shift(4);
        let once = a.tail_shift(6);
        for n in 1..=100 {
            assert_eq!(twice.digit(n).unwrap(), once.digit(n).unwrap());
        }

        let e = example_17_19_cubes().tail_shift(3);
        assert_eq!(e.digit(1).unwrap(), 27.0);
        assert_eq!(e.digit(2).unwrap(), 64.0);
    }

    #[test]
    fn cifs_bound_cases() {
        let d2 = DigitSequence::affine(2.0, 0.0).unwrap();
        let spec = SystemSpec::new(Family::F, d2.clone(), 6);
        let r = spec.cifs_check().unwrap();
        assert!(r.valid, "T = 6 sits exactly on the d_1 = 2 bound");
        assert!((r.rotation_bound - 6.0).abs() < 1e-9);

        let g = SystemSpec::new(Family::G, d2, 1);
        assert!(!g.cifs_check().unwrap().valid, "Mobius family needs d_1 > 2");

        let d17 = example_17_19_cubes();
        let spec = SystemSpec::new(Family::F, d17, 4);
        let r = spec.cifs_check().unwrap();
        assert!(r.valid);
        assert!((r.rotation_bound - 53.4).abs() < 0.1);
    }

    #[test]
    fn cifs_monotone_in_rotations() {
        let d = DigitSequence::affine(2.0, 1.0).unwrap();
        let mut valid_up_to = 0;
        for t in 1..=12 {
            let ok = SystemSpec::new(Family::F, d.clone(), t)
                .cifs_check()
                .unwrap()
                .valid;
            if ok {
                assert_eq!(valid_up_to, t - 1, "validity must be an initial segment");
                valid_up_to = t;
            }
        }
        assert!(valid_up_to >= 6);
    }
}
