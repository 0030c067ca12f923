use anyhow::{Context, Result};
use cifslab_cli::commands::dispatch;
use cifslab_cli::config::{DigitConfig, OutputConfig, ParamsConfig, RenderConfig, RunConfig, SystemConfig};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Certified dimension laboratory for two infinite conformal IFS families on
/// the closed unit disc.
#[derive(Parser)]
#[command(name = "cifslab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check digit membership and the contracting-family conditions.
    Validate(CommonArgs),
    /// Evaluate the pressure at a parameter (closed form or sandwich).
    Pressure(CommonArgs),
    /// Locate the Hausdorff dimension and classify measure phenomena.
    Dim(CommonArgs),
    /// Classify regularity from the pressure sign at the threshold.
    Classify(CommonArgs),
    /// Compute the dimension-gap truncation threshold.
    Gap(CommonArgs),
    /// Compare the affine and Mobius dimensions for shared digits.
    Compare(CommonArgs),
    /// Render a limit-set approximation to an image file.
    Render(CommonArgs),
    /// Run the worked-example reproduction suite.
    Reproduce {
        /// Case name or `all`.
        #[arg(default_value = "all")]
        case: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Compact digit descriptor, e.g. `affine:2,0`, `poly:1,3,0,0`,
    /// `log:1.7`, `explicit:17,19;poly:1,3`, `shift:3;affine:2,0`.
    #[arg(long)]
    d: Option<String>,
    /// Rotation count.
    #[arg(long = "T")]
    rotations: Option<u32>,
    /// Family, F or G.
    #[arg(long)]
    family: Option<String>,
    /// Dimension tolerance, in (0, 1e-2].
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Series cutoff.
    #[arg(long = "M")]
    cutoff: Option<u32>,
    /// Word-refinement alphabet size.
    #[arg(long = "K")]
    word_alphabet: Option<u32>,
    /// Word-refinement word length.
    #[arg(long = "N")]
    word_length: Option<u32>,
    /// Pressure evaluation point.
    #[arg(long)]
    t: Option<f64>,
    /// Ball radius for density diagnostics.
    #[arg(long)]
    radius: Option<f64>,
    /// Emit the density ratio trend at the origin (diagnostics only).
    #[arg(long)]
    explore_conjecture: bool,
    /// Report output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Human-readable report rendering.
    #[arg(long)]
    pretty: bool,
    /// Image output path for `render`.
    #[arg(long)]
    image: Option<PathBuf>,
    /// Disc-record output path for `render` (line-delimited).
    #[arg(long)]
    discs: Option<PathBuf>,
    /// Word-tree depth for `render`.
    #[arg(long)]
    depth: Option<u32>,
    /// Radius pruning floor for `render` (0 = half a pixel).
    #[arg(long)]
    min_radius: Option<f64>,
    /// Digit cutoff for `render`.
    #[arg(long)]
    digit_cutoff: Option<u32>,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    /// Shade leaves by depth instead of solid black.
    #[arg(long)]
    shade_by_depth: bool,
}

impl CommonArgs {
    fn build(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                RunConfig::from_toml(&text)?
            }
            None => RunConfig {
                command: None,
                system: None,
                params: ParamsConfig::default(),
                render: RenderConfig::default(),
                output: OutputConfig::default(),
            },
        };
        if let Some(d) = &self.d {
            let digits = DigitConfig::parse_compact(d)?;
            let rotations = self
                .rotations
                .or(cfg.system.as_ref().map(|s| s.rotations))
                .unwrap_or(1);
            let family = self
                .family
                .clone()
                .or(cfg.system.as_ref().and_then(|s| s.family.clone()));
            cfg.system = Some(SystemConfig {
                family,
                rotations,
                digits,
            });
        } else if let Some(sys) = cfg.system.as_mut() {
            if let Some(t) = self.rotations {
                sys.rotations = t;
            }
            if let Some(f) = &self.family {
                sys.family = Some(f.clone());
            }
        } else if self.rotations.is_some() || self.family.is_some() {
            anyhow::bail!("--T/--family need --d or a [system] section");
        }

        let p = &mut cfg.params;
        if let Some(v) = self.tol {
            p.tol = v;
        }
        if let Some(v) = self.cutoff {
            p.cutoff = v;
        }
        if let Some(v) = self.word_alphabet {
            p.word_alphabet = v;
        }
        if let Some(v) = self.word_length {
            p.word_length = v;
        }
        if let Some(v) = self.t {
            p.t = v;
        }
        if let Some(v) = self.radius {
            p.radius = v;
        }
        if self.explore_conjecture {
            p.explore_conjecture = true;
        }
        p.validate()?;

        let r = &mut cfg.render;
        if let Some(v) = self.depth {
            r.depth = v;
        }
        if let Some(v) = self.min_radius {
            r.min_radius = v;
        }
        if let Some(v) = self.digit_cutoff {
            r.digit_cutoff = v;
        }
        if let Some(v) = self.width {
            r.width = v;
        }
        if let Some(v) = self.height {
            r.height = v;
        }
        if self.shade_by_depth {
            r.shade_by_depth = true;
        }

        let o = &mut cfg.output;
        if let Some(v) = &self.out {
            o.report = Some(v.display().to_string());
        }
        if let Some(v) = &self.image {
            o.image = Some(v.display().to_string());
        }
        if let Some(v) = &self.discs {
            o.discs = Some(v.display().to_string());
        }
        if self.pretty {
            o.pretty = true;
        }
        Ok(cfg)
    }
}

fn run() -> Result<i32> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return Ok(0);
        }
        Err(e) => {
            let _ = e.print();
            return Ok(1);
        }
    };
    let (name, common, case): (&str, &CommonArgs, Option<String>) = match &cli.command {
        Command::Validate(a) => ("validate", a, None),
        Command::Pressure(a) => ("pressure", a, None),
        Command::Dim(a) => ("dim", a, None),
        Command::Classify(a) => ("classify", a, None),
        Command::Gap(a) => ("gap", a, None),
        Command::Compare(a) => ("compare", a, None),
        Command::Render(a) => ("render", a, None),
        Command::Reproduce { case, common } => ("reproduce", common, Some(case.clone())),
    };
    let cfg = common.build()?;
    let (report, status) = dispatch(name, &cfg, case.as_deref())?;
    let text = report.to_json(cfg.output.pretty);
    match &cfg.output.report {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {path}"))?,
        None => print!("{text}"),
    }
    if name == "reproduce" {
        // Human-readable pass/fail table alongside the report.
        if let Ok(results) = serde_json::from_value::<Vec<cifslab_cli::reproduce::CaseResult>>(
            report.results.clone(),
        ) {
            eprint!("{}", cifslab_cli::reproduce::format_table(&results));
        }
    }
    Ok(status.exit_code())
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
