//! Configuration documents and compact sequence descriptors.
//!
//! A run is described either by CLI flags or by a TOML document with the
//! schema below (unknown keys are rejected). The full schema with worked
//! examples lives in `docs/config.md`.
//!
//! ```toml
//! command = "dim"
//!
//! [system]
//! family = "F"            # F | G; compare and gap ignore it
//! rotations = 2
//!
//! [system.digits]
//! kind = "affine"         # affine | polynomial | log | explicit | shifted
//! slope = 2.0
//! intercept = 0.0
//!
//! [params]
//! t = 1.0
//! tol = 1e-6
//! cutoff = 100000
//!
//! [output]
//! report = "report.json"
//! pretty = true
//! ```

use anyhow::{anyhow, bail, Context, Result};
use cifslab_core::{DigitSequence, Family, SystemSpec};
use serde::{Deserialize, Serialize};

/// Digit-sequence descriptor with a `kind` discriminator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DigitConfig {
    Affine {
        slope: f64,
        intercept: f64,
    },
    Polynomial {
        scale: f64,
        exponent: f64,
        #[serde(default)]
        offset: u32,
        #[serde(default)]
        shift: f64,
    },
    Log {
        lambda: f64,
    },
    Explicit {
        head: Vec<f64>,
        #[serde(default)]
        tail: Option<Box<DigitConfig>>,
    },
    Shifted {
        drop: u32,
        base: Box<DigitConfig>,
    },
}

impl DigitConfig {
    pub fn to_sequence(&self) -> Result<DigitSequence> {
        let seq = match self {
            DigitConfig::Affine { slope, intercept } => {
                DigitSequence::affine(*slope, *intercept)
            }
            DigitConfig::Polynomial {
                scale,
                exponent,
                offset,
                shift,
            } => DigitSequence::polynomial(*scale, *exponent, *offset, *shift),
            DigitConfig::Log { lambda } => DigitSequence::log_family(*lambda),
            DigitConfig::Explicit { head, tail } => {
                let tail = tail.as_ref().map(|t| t.to_sequence()).transpose()?;
                DigitSequence::explicit(head.clone(), tail)
            }
            DigitConfig::Shifted { drop, base } => {
                Ok(base.to_sequence()?.tail_shift(drop + 1))
            }
        }?;
        Ok(seq)
    }

    /// Parse the compact flag form, e.g. `affine:2,0`, `poly:1,3,0,0`,
    /// `log:1.7`, `explicit:17,19;poly:1,3,0,0`, `shift:3;affine:2,0`.
    pub fn parse_compact(text: &str) -> Result<DigitConfig> {
        let (head, rest) = match text.split_once(';') {
            Some((h, r)) => (h, Some(r)),
            None => (text, None),
        };
        let (kind, args) = head
            .split_once(':')
            .ok_or_else(|| anyhow!("sequence descriptor needs kind:args, got {text:?}"))?;
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|s| s.trim().parse::<f64>().context("bad number in sequence"))
                .collect::<Result<_>>()?
        };
        match kind {
            "affine" => {
                if nums.len() != 2 {
                    bail!("affine:a,b needs two numbers");
                }
                Ok(DigitConfig::Affine {
                    slope: nums[0],
                    intercept: nums[1],
                })
            }
            "poly" | "polynomial" => {
                if !(2..=4).contains(&nums.len()) {
                    bail!("poly:c,gamma[,L[,s]] needs two to four numbers");
                }
                Ok(DigitConfig::Polynomial {
                    scale: nums[0],
                    exponent: nums[1],
                    offset: *nums.get(2).unwrap_or(&0.0) as u32,
                    shift: *nums.get(3).unwrap_or(&0.0),
                })
            }
            "log" => {
                if nums.len() != 1 {
                    bail!("log:lambda needs one number");
                }
                Ok(DigitConfig::Log { lambda: nums[0] })
            }
            "explicit" => {
                let tail = rest
                    .map(DigitConfig::parse_compact)
                    .transpose()?
                    .map(Box::new);
                if nums.is_empty() {
                    bail!("explicit needs head values");
                }
                Ok(DigitConfig::Explicit { head: nums, tail })
            }
            "shift" => {
                if nums.len() != 1 {
                    bail!("shift:l;<base> needs the shift index");
                }
                let base = rest
                    .ok_or_else(|| anyhow!("shift:l;<base> needs a base sequence"))?;
                let l = nums[0] as u32;
                if l < 1 {
                    bail!("shift index starts at 1");
                }
                Ok(DigitConfig::Shifted {
                    drop: l - 1,
                    base: Box::new(DigitConfig::parse_compact(base)?),
                })
            }
            other => bail!("unknown sequence kind {other:?}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default)]
    pub family: Option<String>,
    pub rotations: u32,
    pub digits: DigitConfig,
}

impl SystemConfig {
    pub fn family(&self) -> Result<Family> {
        match self.family.as_deref() {
            Some("F") | Some("f") => Ok(Family::F),
            Some("G") | Some("g") => Ok(Family::G),
            Some(other) => bail!("family must be F or G, got {other:?}"),
            None => bail!("this command needs a family (F or G)"),
        }
    }

    pub fn spec(&self) -> Result<SystemSpec> {
        Ok(SystemSpec::new(
            self.family()?,
            self.digits.to_sequence()?,
            self.rotations,
        ))
    }

    pub fn spec_for(&self, family: Family) -> Result<SystemSpec> {
        Ok(SystemSpec::new(
            family,
            self.digits.to_sequence()?,
            self.rotations,
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    /// Pressure evaluation point.
    pub t: f64,
    pub tol: f64,
    /// Series cutoff.
    pub cutoff: u32,
    /// Word-refinement alphabet size; 0 disables.
    pub word_alphabet: u32,
    /// Word-refinement word length; 0 disables.
    pub word_length: u32,
    pub theta_samples: u32,
    /// Ball radius for density diagnostics; 0 disables.
    pub radius: f64,
    pub explore_conjecture: bool,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            t: 1.0,
            tol: 1e-6,
            cutoff: cifslab_core::DEFAULT_CUTOFF,
            word_alphabet: 0,
            word_length: 0,
            theta_samples: 1_000_000,
            radius: 0.0,
            explore_conjecture: false,
        }
    }
}

impl ParamsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            bail!("tol must lie in (0, 1e-2], got {}", self.tol);
        }
        if self.cutoff == 0 {
            bail!("cutoff must be positive");
        }
        if self.t <= 0.0 {
            bail!("t must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RenderConfig {
    pub depth: u32,
    /// 0 selects half a pixel.
    pub min_radius: f64,
    pub digit_cutoff: u32,
    pub width: u32,
    pub height: u32,
    pub shade_by_depth: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            depth: 50,
            min_radius: 0.0,
            digit_cutoff: 200,
            width: 800,
            height: 800,
            shade_by_depth: false,
        }
    }
}

impl RenderConfig {
    pub fn options(&self) -> Result<cifslab_core::RenderOptions> {
        if self.width == 0 || self.height == 0 {
            bail!("render area must be positive");
        }
        if self.depth == 0 {
            bail!("render depth must be at least 1");
        }
        let min_radius = if self.min_radius > 0.0 {
            self.min_radius
        } else {
            1.0 / self.width as f64
        };
        Ok(cifslab_core::RenderOptions {
            depth: self.depth,
            min_radius,
            digit_cutoff: self.digit_cutoff,
            width: self.width,
            height: self.height,
            shade_by_depth: self.shade_by_depth,
        })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub report: Option<String>,
    pub image: Option<String>,
    pub discs: Option<String>,
    pub pretty: bool,
}

/// A full run description (TOML document root).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<String>,
    pub system: Option<SystemConfig>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub render: RenderConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| anyhow!("config error: {e}"))?;
        cfg.params.validate()?;
        Ok(cfg)
    }

    pub fn system(&self) -> Result<&SystemConfig> {
        self.system
            .as_ref()
            .ok_or_else(|| anyhow!("missing [system] section or --d/--T flags"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_affine_document_parses() {
        let cfg = RunConfig::from_toml(
            r#"
command = "dim"
[system]
family = "F"
rotations = 2
[system.digits]
kind = "affine"
slope = 2.0
intercept = 0.0
"#,
        )
        .unwrap();
        let spec = cfg.system().unwrap().spec().unwrap();
        assert_eq!(spec.rotations, 2);
        assert_eq!(spec.digits.digit(3).unwrap(), 6.0);
    }

    #[test]
    fn polynomial_document_parses() {
        let cfg = RunConfig::from_toml(
            r#"
[system]
family = "G"
rotations = 4
[system.digits]
kind = "polynomial"
scale = 1.0
exponent = 3.0
"#,
        )
        .unwrap();
        let spec = cfg.system().unwrap().spec().unwrap();
        assert_eq!(spec.digits.digit(2).unwrap(), 8.0);
    }

    #[test]
    fn negative_tol_rejected() {
        let err = RunConfig::from_toml(
            r#"
[system]
family = "F"
rotations = 1
[system.digits]
kind = "log"
lambda = 1.5
[params]
tol = -1.0
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("tol"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::from_toml(
            r#"
[system]
family = "F"
rotations = 1
frobnicate = 3
[system.digits]
kind = "log"
lambda = 1.5
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("frobnicate"));
    }

    #[test]
    fn compact_descriptors_round_trip() {
        let cases = [
            "affine:2,0",
            "poly:1,3,0,0",
            "log:1.7",
            "explicit:17,19;poly:1,3",
            "shift:3;affine:2,0",
        ];
        for c in cases {
            let cfg = DigitConfig::parse_compact(c).unwrap();
            cfg.to_sequence().unwrap();
        }
        let seq = DigitConfig::parse_compact("explicit:17,19;poly:1,3")
            .unwrap()
            .to_sequence()
            .unwrap();
        assert_eq!(seq.digit(4).unwrap(), 64.0);
        let shifted = DigitConfig::parse_compact("shift:3;affine:2,0")
            .unwrap()
            .to_sequence()
            .unwrap();
        assert_eq!(shifted.digit(1).unwrap(), 6.0);
    }
}
