use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;

use crscatter::checks::{run_all, run_check, CheckSummary};
use crscatter::config::{OutputFormat, RunConfig};
use crscatter::curvature::curvature_report;
use crscatter::field::c_m;
use crscatter::geometry::ModeSpec;
use crscatter::mp::{parse_rational, DIGITS_ENV};
use crscatter::report::{emit, to_csv, to_json, SpectrumRow, VolumeSample};
use crscatter::scattering::{contour_samples, gjms_eigenvalue_exact, laurent_at_m};
use crscatter::volume::{fit_expansion, volume_of_sublevel, EpsGrid};
use crscatter::Error;

#[derive(Parser)]
#[command(name = "crscatter", version, about = "Scattering invariants of the complex hyperbolic ball")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GJMS and P' spectra, Q and Q'.
    Spectra,
    /// Volume expansion of {x > eps}.
    Volume,
    /// Laurent data of the scattering eigenvalue at s = m on one mode.
    Laurent {
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
    },
    /// Runs the acceptance criteria; exit status 1 if any fails.
    CheckAll {
        /// Restrict to these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 2)]
    m: u32,
    /// Constant rescale c of the contact form, as a decimal or fraction.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    conf_const: String,
    #[arg(long, global = true, default_value_t = 3)]
    max_pq: u32,
    #[arg(long, global = true, env = DIGITS_ENV, default_value_t = 40)]
    digits: u32,
    /// Truncation of the exact formal series in doubled grades.
    #[arg(long, global = true, default_value_t = 30)]
    trunc_order: u32,
    #[arg(long, global = true, default_value = "0.1")]
    contour_radius: String,
    #[arg(long, global = true, default_value_t = 32)]
    contour_points: usize,
    #[arg(long, global = true, default_value_t = 24)]
    eps_points: usize,
    /// log10 of the largest eps.
    #[arg(long, global = true, default_value_t = -1.0, allow_hyphen_values = true)]
    eps_max_exp: f64,
    /// log10 of the smallest eps.
    #[arg(long, global = true, default_value_t = -3.5, allow_hyphen_values = true)]
    eps_min_exp: f64,
    /// Matching point in 1 - |z|^2.
    #[arg(long, global = true, default_value = "1/2")]
    t_match: String,
    /// Overrides the tolerance of every numeric check.
    #[arg(long, global = true)]
    numeric_tol: Option<f64>,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let rational = |name: &str, text: &str| {
            parse_rational(text).ok_or_else(|| Error::Config(format!("{name}: cannot parse '{text}'")))
        };
        let cfg = RunConfig {
            m: self.m,
            conf_const: rational("conf-const", &self.conf_const)?,
            max_pq: self.max_pq,
            digits: self.digits,
            trunc_order: self.trunc_order,
            contour_radius: rational("contour-radius", &self.contour_radius)?,
            contour_points: self.contour_points,
            eps_grid: EpsGrid {
                points: self.eps_points,
                log10_max: self.eps_max_exp,
                log10_min: self.eps_min_exp,
            },
            t_match: rational("t-match", &self.t_match)?,
            numeric_tol: self.numeric_tol,
            output: self.output.clone(),
            format: match self.format {
                Format::Json => OutputFormat::Json,
                Format::Csv => OutputFormat::Csv,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct LaurentRecord {
    m: u32,
    p: u32,
    q: u32,
    conf_const: f64,
    res: f64,
    #[serde(rename = "const")]
    constant: f64,
    deriv: f64,
    contour_radius: f64,
    est_error: f64,
    gjms_contour: f64,
    gjms_exact: Option<f64>,
    pprime: f64,
}

#[derive(Serialize)]
struct VolumeRecord<'a> {
    expansion: &'a crscatter::volume::VolumeExpansion,
    samples: Vec<VolumeSample>,
}

fn spectra(cfg: &RunConfig) -> Result<String, Error> {
    let geom = cfg.geometry()?;
    let report = curvature_report(&geom, cfg.max_pq, &cfg.settings())?;
    match cfg.format {
        OutputFormat::Json => to_json("curvature", &report),
        OutputFormat::Csv => {
            let rows: Vec<SpectrumRow> = report
                .p_spec
                .iter()
                .zip(&report.p_spec_contour)
                .zip(&report.pprime_spec)
                .map(|((e, c), pp)| SpectrumRow {
                    m: report.m,
                    p: e.p,
                    q: e.q,
                    p_exact: e.val,
                    p_contour: c.val,
                    pprime: pp.val,
                })
                .collect();
            to_csv(&rows)
        }
    }
}

fn volume(cfg: &RunConfig) -> Result<String, Error> {
    let geom = cfg.geometry()?;
    let prec = cfg.precision();
    let grid = cfg.eps_grid.values(&prec);
    let expansion = fit_expansion(&geom, &grid, &prec)?;
    let samples = grid
        .iter()
        .map(|e| {
            Ok(VolumeSample {
                eps: e.to_f64(),
                volume: volume_of_sublevel(&geom, e, &prec)?.to_f64(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    match cfg.format {
        OutputFormat::Json => to_json(
            "volume",
            &VolumeRecord {
                expansion: &expansion,
                samples,
            },
        ),
        OutputFormat::Csv => to_csv(&samples),
    }
}

fn laurent(cfg: &RunConfig, p: u32, q: u32) -> Result<String, Error> {
    let geom = cfg.geometry()?;
    let mode = ModeSpec::new(p, q, geom.n());
    let settings = cfg.settings();
    match cfg.format {
        OutputFormat::Json => {
            let data = laurent_at_m(&geom, mode, &settings.contour, &settings.numeric)?;
            let cm = c_m(geom.m()).to_f64();
            let exact = if *geom.conf_const() == Rational::new() {
                Some(gjms_eigenvalue_exact(mode, geom.m())?.to_f64())
            } else {
                None
            };
            to_json(
                "laurent",
                &LaurentRecord {
                    m: geom.m(),
                    p,
                    q,
                    conf_const: geom.conf_const().to_f64(),
                    res: data.res.to_f64(),
                    constant: data.constant.to_f64(),
                    deriv: data.deriv.to_f64(),
                    contour_radius: data.contour_radius,
                    est_error: data.est_error,
                    gjms_contour: -data.res.to_f64() / cm,
                    gjms_exact: exact,
                    pprime: data.constant.to_f64() / cm,
                },
            )
        }
        OutputFormat::Csv => {
            let rows: Vec<_> = contour_samples(&geom, mode, &settings.contour, &settings.numeric)?
                .iter()
                .map(|s| s.row(geom.m(), mode))
                .collect();
            to_csv(&rows)
        }
    }
}

fn check_all(cfg: &RunConfig, only: &[u32]) -> Result<(String, bool), Error> {
    let summary = if only.is_empty() {
        run_all(cfg)
    } else {
        let outcomes = only
            .iter()
            .map(|&id| run_check(id, cfg).ok_or_else(|| Error::Config(format!("no criterion {id}"))))
            .collect::<Result<Vec<_>, Error>>()?;
        CheckSummary {
            passed: outcomes.iter().all(|o| o.passed),
            outcomes,
        }
    };
    for o in &summary.outcomes {
        eprintln!("{}", o.line());
    }
    let text = match cfg.format {
        OutputFormat::Json => to_json("check-all", &summary)?,
        OutputFormat::Csv => to_csv(&summary.outcomes)?,
    };
    Ok((text, summary.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.common.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Spectra => spectra(&cfg).map(|t| (t, true)),
        Command::Volume => volume(&cfg).map(|t| (t, true)),
        Command::Laurent { p, q } => laurent(&cfg, *p, *q).map(|t| (t, true)),
        Command::CheckAll { only } => check_all(&cfg, only),
    };
    match result.and_then(|(text, ok)| emit(cfg.output.as_deref(), &text).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
