//! Exact disc geometry of the generators and their compositions.
//!
//! Both generator families map discs to discs: the affine maps are
//! similarities and the reciprocal maps send circles avoiding the pole to
//! circles. Compositions are tracked as 2x2 complex matrices acting as
//! fractional-linear maps, so every word's image disc comes out in closed
//! form.

use crate::digits::{Family, SystemSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// A closed disc in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Disc {
        assert!(radius >= 0.0);
        Disc {
            center_re: center.re,
            center_im: center.im,
            radius,
        }
    }

    pub const UNIT: Disc = Disc {
        center_re: 0.0,
        center_im: 0.0,
        radius: 1.0,
    };

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center_re, self.center_im)
    }

    /// `self` contains `other`, up to `slack`.
    pub fn contains_disc(&self, other: &Disc, slack: f64) -> bool {
        (other.center() - self.center()).norm() + other.radius <= self.radius + slack
    }
}

/// Divide a complex number by a real scalar, componentwise.
///
/// Shared by the closed forms and the matrix path so that both produce
/// bit-identical discs.
fn div_by_real(z: Complex64, x: f64) -> Complex64 {
    Complex64::new(z.re / x, z.im / x)
}

/// Image of the closed unit disc under either generator with digit `a`:
/// center `conj(a) / (|a|^2 - 1)`, radius `1 / (|a|^2 - 1)`.
pub fn generator_disc(alpha: Complex64) -> Disc {
    assert!(alpha.norm_sqr() >= 4.0 - 1e-12, "digit modulus below 2");
    let denom = alpha.norm_sqr() - 1.0;
    Disc::new(div_by_real(alpha.conj(), denom), 1.0 / denom)
}

/// Image of a disc under the affine generator `z -> (z + conj(a)) / (|a|^2 - 1)`.
pub fn affine_image(alpha: Complex64, disc: &Disc) -> Disc {
    let denom = alpha.norm_sqr() - 1.0;
    Disc::new(
        div_by_real(disc.center() + alpha.conj(), denom),
        disc.radius / denom,
    )
}

/// Image of a disc under the reciprocal generator `z -> 1 / (z + a)`.
///
/// Translate by `a`, then invert: a disc `B(c, rho)` with `|c| > rho` maps
/// under `z -> 1/z` to `B(conj(c) / (|c|^2 - rho^2), rho / (|c|^2 - rho^2))`.
pub fn mobius_image(alpha: Complex64, disc: &Disc) -> Result<Disc> {
    let c = disc.center() + alpha;
    let denom = c.norm_sqr() - disc.radius * disc.radius;
    if denom <= 0.0 {
        return Err(Error::BadParameter(
            "disc meets the pole of the reciprocal map".into(),
        ));
    }
    Ok(Disc::new(
        div_by_real(c.conj(), denom),
        disc.radius / denom,
    ))
}

/// A fractional-linear map `z -> (a z + b) / (c z + d)` tracked as its
/// coefficient matrix.
#[derive(Debug, Clone, Copy)]
pub struct MobiusMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMatrix {
    pub const IDENTITY: MobiusMatrix = MobiusMatrix {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// Coefficients of one generator.
    pub fn generator(family: Family, alpha: Complex64) -> MobiusMatrix {
        match family {
            // (z + conj(a)) / (|a|^2 - 1)
            Family::F => MobiusMatrix {
                a: Complex64::new(1.0, 0.0),
                b: alpha.conj(),
                c: Complex64::new(0.0, 0.0),
                d: Complex64::new(alpha.norm_sqr() - 1.0, 0.0),
            },
            // 1 / (z + a)
            Family::G => MobiusMatrix {
                a: Complex64::new(0.0, 0.0),
                b: Complex64::new(1.0, 0.0),
                c: Complex64::new(1.0, 0.0),
                d: alpha,
            },
        }
    }

    /// `self` composed-after `rhs` as maps: `(self * rhs)(z) = self(rhs(z))`.
    pub fn compose(&self, rhs: &MobiusMatrix) -> MobiusMatrix {
        let m = MobiusMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        };
        m.normalized()
    }

    /// Rescale coefficients to keep magnitudes bounded; the map is unchanged.
    fn normalized(&self) -> MobiusMatrix {
        let scale = self
            .a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm());
        if scale > 1e100 || (scale > 0.0 && scale < 1e-100) {
            MobiusMatrix {
                a: self.a / scale,
                b: self.b / scale,
                c: self.c / scale,
                d: self.d / scale,
            }
        } else {
            *self
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Exact image of a disc avoiding the pole.
    ///
    /// Decomposes as `A + B / (z + d/c)` when `c != 0`, falling back to the
    /// affine branch otherwise.
    pub fn image_disc(&self, disc: &Disc) -> Result<Disc> {
        if self.c.norm_sqr() == 0.0 {
            // Real denominators (every affine-family word) divide
            // componentwise so the result matches the closed form bit for
            // bit.
            if self.d.im == 0.0 {
                let denom = self.d.re;
                return Ok(Disc::new(
                    div_by_real(self.a * disc.center() + self.b, denom),
                    disc.radius * self.a.norm() / denom.abs(),
                ));
            }
            let center = (self.a * disc.center() + self.b) / self.d;
            let radius = disc.radius * (self.a / self.d).norm();
            return Ok(Disc::new(center, radius));
        }
        let shift = self.d / self.c;
        let residue = (self.b * self.c - self.a * self.d) / (self.c * self.c);
        let w = disc.center() + shift;
        let denom = w.norm_sqr() - disc.radius * disc.radius;
        if denom <= 0.0 {
            return Err(Error::BadParameter(
                "disc meets the pole of the composed map".into(),
            ));
        }
        let inv_center = div_by_real(w.conj(), denom);
        let inv_radius = disc.radius / denom;
        Ok(Disc::new(
            self.a / self.c + residue * inv_center,
            inv_radius * residue.norm(),
        ))
    }
}

/// Complex digit `e(j/T) d_n` of a letter.
pub fn letter_alpha(spec: &SystemSpec, index: u32, rotation: u32) -> Result<Complex64> {
    assert!(rotation < spec.rotations);
    let d = spec.digits.digit(index)?;
    Ok(Complex64::from_polar(
        d,
        2.0 * PI * rotation as f64 / spec.rotations as f64,
    ))
}

/// Pairwise placement of the first-level discs.
#[derive(Debug, Clone, Serialize)]
pub struct OscReport {
    /// Pairs `((n, j), (n', j'))` whose discs touch in exactly one point.
    pub tangencies: Vec<((u32, u32), (u32, u32))>,
    /// Pairs whose discs overlap on an open set (separation failure).
    pub overlaps: Vec<((u32, u32), (u32, u32))>,
    /// Half-angle `arcsin(1/d_1)` of the sector containing every disc of one
    /// rotation class.
    pub sector_half_angle: f64,
    /// Sector budget per rotation class, `pi / T`.
    pub sector_allowance: f64,
    pub all_disjoint: bool,
}

const TANGENCY_TOL: f64 = 1e-12;

/// Check pairwise interior-disjointness of the `K * T` first-level discs.
pub fn osc_report(spec: &SystemSpec, digits_to_check: u32) -> Result<OscReport> {
    let mut discs = Vec::new();
    for n in 1..=digits_to_check {
        for j in 0..spec.rotations {
            let alpha = letter_alpha(spec, n, j)?;
            discs.push(((n, j), generator_disc(alpha)));
        }
    }
    let mut tangencies = Vec::new();
    let mut overlaps = Vec::new();
    for i in 0..discs.len() {
        for k in (i + 1)..discs.len() {
            let (id_a, a) = discs[i];
            let (id_b, b) = discs[k];
            let gap = (a.center() - b.center()).norm() - (a.radius + b.radius);
            if gap < -TANGENCY_TOL {
                overlaps.push((id_a, id_b));
            } else if gap <= TANGENCY_TOL {
                tangencies.push((id_a, id_b));
            }
        }
    }
    let d1 = spec.digits.digit(1)?;
    Ok(OscReport {
        all_disjoint: overlaps.is_empty(),
        tangencies,
        overlaps,
        sector_half_angle: (1.0 / d1).asin(),
        sector_allowance: PI / spec.t(),
    })
}
