use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stransform_core::spherical::ContourConfig;
use stransform_core::InversionConfig;
use stransform_lab::checks::{run_suite, VerifyLevel};
use stransform_lab::commands::{self, McJob};
use stransform_lab::config::{check_z_grid, parse_n_list, parse_z_grid, ExperimentConfig};
use stransform_lab::pool::{build_pool, thread_count};
use stransform_lab::spec::{discretize, parse_list, parse_measure};
use stransform_lab::{LabError, LabResult};

/// Free-probability transforms, spherical integrals and their oracle checks.
#[derive(Parser)]
#[command(name = "stransform-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// key = value file; flags given on the command line take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// uniform:lo:hi, ones:N, point:c, atoms:x@w,..., empirical:x,... or file:path
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    /// single z value, shorthand for a one-point grid
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// start:stop:step or a comma list
    #[arg(long)]
    z_grid: Option<String>,
    /// comma list of increasing sizes
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// output file (directory for fig1); stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// also write an SVG figure (fig1, needs --out)
    #[arg(long)]
    svg: bool,
}

impl Common {
    /// Merges defaults, the config file and flags. `--z` is a grid unless `z_is_grid` is false.
    fn resolve(&self, z_is_grid: bool) -> LabResult<ExperimentConfig> {
        let mut c = ExperimentConfig::default();
        if let Some(p) = &self.config {
            c.apply_file(p)?;
        }
        if let Some(m) = &self.measure {
            c.measure = m.clone();
        }
        if let Some(b) = self.beta {
            c.beta = b;
        }
        if let Some(g) = &self.z_grid {
            c.z_grid = parse_z_grid(g)?;
        }
        if let Some(z) = self.z.as_ref().filter(|_| z_is_grid) {
            c.z_grid = parse_list(z, "z")?;
            check_z_grid(&c.z_grid)?;
        }
        if let Some(n) = &self.n_list {
            c.n_list = parse_n_list(n)?;
        }
        if let Some(s) = self.samples {
            c.samples = s;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(o) = &self.out {
            c.output_dir = Some(o.clone());
        }
        c.emit_svg |= self.svg;
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum McKind {
    RankOne,
    HeckmanOpdam,
    Multiplicativity,
    DixonAnderson,
}

#[derive(Subcommand)]
enum Command {
    /// T⁻¹, S̃, ln S̃, H^S and H^R of a measure on a z-grid
    Transforms(#[command(flatten)] Common),
    /// normalized ln h_k against H^S across N, with the 1/N inset at z = 1
    Fig1(#[command(flatten)] Common),
    /// run the oracle cross-checks and print one JSON record per check
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        perturb_s_tilde: bool,
    },
    /// two-row spherical integral against H^S(z1) + H^S(z2) at β = 2
    Conjecture {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        z1: f64,
        #[arg(long, default_value_t = 1.0)]
        z2: f64,
    },
    /// Monte Carlo estimators with their exact reference values
    Mc {
        #[arg(value_enum)]
        kind: McKind,
        #[command(flatten)]
        common: Common,
        /// spectrum as a comma list (overrides --measure)
        #[arg(long)]
        a: Option<String>,
        /// second spectrum for multiplicativity
        #[arg(long)]
        b: Option<String>,
        /// size used to discretize a continuous --measure
        #[arg(long)]
        n: Option<usize>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> LabResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| LabError::Io { path: p.to_path_buf(), source: e }),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| LabError::Io { path: "<stdout>".into(), source: e })
        }
    }
}

fn spectrum(cfg: &ExperimentConfig, a: Option<&str>, n: Option<usize>) -> LabResult<Vec<f64>> {
    if let Some(a) = a {
        return parse_list(a, "spectrum entry");
    }
    let mu = parse_measure(&cfg.measure)?;
    match (mu.eigenvalues(), n) {
        (Some(ev), None) => Ok(ev.to_vec()),
        (_, Some(n)) => discretize(&mu, n),
        (None, None) => Err(LabError::Usage(format!("{} is continuous; pass --n or --a", cfg.measure))),
    }
}

fn run(cli: Cli) -> LabResult<()> {
    let inv = InversionConfig::default();
    let contour = ContourConfig::default();
    match cli.command {
        Command::Transforms(common) => {
            let cfg = common.resolve(true)?;
            let mu = parse_measure(&cfg.measure)?;
            let t = commands::transforms_table(&mu, &cfg.z_grid, &inv)?;
            emit(cfg.output_dir.as_deref(), &t.render())
        }
        Command::Fig1(common) => {
            let cfg = common.resolve(true)?;
            if cfg.emit_svg && cfg.output_dir.is_none() {
                return Err(LabError::Usage("--svg needs --out DIR".into()));
            }
            let mu = parse_measure(&cfg.measure)?;
            let out = commands::fig1(&mu, &cfg.z_grid, &cfg.n_list, &build_pool(thread_count()), &inv)?;
            match &cfg.output_dir {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| LabError::Io { path: dir.clone(), source: e })?;
                    emit(Some(&dir.join("fig1.csv")), &out.table.render())?;
                    emit(Some(&dir.join("fig1_inset.csv")), &out.inset.render())?;
                    if cfg.emit_svg {
                        emit(Some(&dir.join("fig1.svg")), &out.svg)?;
                    }
                    Ok(())
                }
                None => emit(None, &out.table.render()),
            }
        }
        Command::Verify { level, seed, out, perturb_s_tilde } => {
            let level = match level {
                Level::Fast => VerifyLevel::Fast,
                Level::Full => VerifyLevel::Full,
            };
            let factor = if perturb_s_tilde { 1.01 } else { 1.0 };
            let results = run_suite(level, seed, factor);
            let report: String = results.iter().map(|r| r.json_line() + "\n").collect();
            emit(out.as_deref(), &report)?;
            let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.name.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(LabError::VerifyFailed { failed })
            }
        }
        Command::Conjecture { common, z1, z2 } => {
            let cfg = common.resolve(true)?;
            if cfg.beta != 2.0 {
                return Err(LabError::Usage(format!("conjecture runs at beta = 2 only, got {}", cfg.beta)));
            }
            let mu = parse_measure(&cfg.measure)?;
            let t = commands::conjecture(&mu, z1, z2, &cfg.n_list, &build_pool(thread_count()), &contour, &inv)?;
            emit(cfg.output_dir.as_deref(), &t.render())
        }
        Command::Mc { kind, common, a, b, n } => {
            let cfg = common.resolve(false)?;
            let spec = spectrum(&cfg, a.as_deref(), n)?;
            let z_list = match &common.z {
                Some(z) => parse_list(z, "z")?,
                None => vec![1.0],
            };
            let single_z = || -> LabResult<f64> {
                match z_list.as_slice() {
                    [z] => Ok(*z),
                    _ => Err(LabError::Usage("this estimator takes a single --z".into())),
                }
            };
            let pool = build_pool(thread_count());
            let text = match kind {
                McKind::RankOne => {
                    let job = McJob::RankOne { a: spec, z: single_z()?, beta: cfg.beta };
                    commands::mc_estimate(&job, cfg.samples, cfg.seed, &pool)?.render()
                }
                McKind::HeckmanOpdam => {
                    let job = McJob::HeckmanOpdam { a: spec, z: z_list.clone(), beta: cfg.beta };
                    commands::mc_estimate(&job, cfg.samples, cfg.seed, &pool)?.render()
                }
                McKind::Multiplicativity => {
                    let b = parse_list(b.as_deref().ok_or_else(|| LabError::Usage("multiplicativity needs --b".into()))?, "b")?;
                    let job = McJob::Multiplicativity { a: spec, b, z: single_z()? };
                    commands::mc_estimate(&job, cfg.samples, cfg.seed, &pool)?.render()
                }
                McKind::DixonAnderson => {
                    let mut top = spec;
                    top.sort_by(|x, y| y.partial_cmp(x).unwrap());
                    commands::corner_draws(&top, cfg.beta, cfg.samples, cfg.seed)?
                }
            };
            emit(cfg.output_dir.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stransform-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
