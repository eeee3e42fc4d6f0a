//! Experiment runner. Subcommands mirror the library's analyses:
//! phase-diagram, witness, repair, noise-floor. Parameters come from flags,
//! falling back to a config file section named after the subcommand, then
//! to built-in defaults. Exit codes: 0 success, 1 I/O or parameter error,
//! 2 usage (clap), 3 analysis violation (a science check failed inside an
//! otherwise successful run).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gaussrev::trajectory::WeightSource;
use gaussrev_cli::config::{parse_config, ConfigFile};
use gaussrev_cli::gridspec::{parse_class, parse_grid};
use gaussrev_cli::output;
use gaussrev_cli::runners::{
    self, NoiseFloorParams, PhaseDiagramParams, RepairParams, RepairWeight, RunError,
    WitnessParams,
};

const OUT_DIR_ENV: &str = "GAUSSREV_OUT_DIR";
const EXIT_ANALYSIS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gaussrev",
    version,
    about = "Complete-positivity analysis of Gaussian score reversal: \
             phase diagrams, CP witnesses, minimal repairs and noise-floor curves"
)]
struct Cli {
    /// Config file with one `[subcommand]` section per command; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory; falls back to $GAUSSREV_OUT_DIR, then the working
    /// directory. Relative --out paths are placed inside it.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep (nu, r): threshold eigenvalue and minimal repair trace.
    PhaseDiagram(PhaseDiagramArgs),
    /// TMSV Schur-complement witness report for identity, attenuator and
    /// Bayes-step channels.
    Witness(WitnessArgs),
    /// Minimal Fisher-weighted repair at a single (gamma, nu, r).
    Repair(RepairArgs),
    /// Worst-case infidelity vs the geometric bound over a depth grid.
    NoiseFloor(NoiseFloorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightSourceArg {
    Reference,
    Actual,
}

impl From<WeightSourceArg> for WeightSource {
    fn from(w: WeightSourceArg) -> Self {
        match w {
            WeightSourceArg::Reference => WeightSource::Reference,
            WeightSourceArg::Actual => WeightSource::Actual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepairWeightArg {
    Identity,
    Bkm,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    #[arg(long)]
    gamma: Option<f64>,
    /// Grid spec: `a:b:n` linspace or comma list.
    #[arg(long, value_name = "SPEC")]
    nu_grid: Option<String>,
    #[arg(long, value_name = "SPEC")]
    r_grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write a standalone python plot script to this path.
    #[arg(long, value_name = "FILE")]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    gamma: Option<f64>,
    /// Finite attenuator step duration.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Infinitesimal step size for the Bayes-step witness.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_name = "SPEC")]
    mu_list: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepairArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// SDP weight: plain trace or the reference BKM metric.
    #[arg(long, value_enum)]
    weight: Option<RepairWeightArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseFloorArgs {
    #[arg(long)]
    gamma: Option<f64>,
    /// Class of initial states: `nu,r; nu,r; ...`.
    #[arg(long, value_name = "SPEC")]
    class: Option<String>,
    #[arg(long, value_name = "SPEC")]
    s_grid: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    weight_source: Option<WeightSourceArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, value_name = "FILE")]
    plot_script: Option<PathBuf>,
    /// Self-test hook: invert the per-row inequality check so healthy rows
    /// are reported as violations.
    #[arg(long, hide = true)]
    flip_bound_sign: bool,
}

/// Flag-over-config-over-default resolution for one subcommand section.
struct Resolver<'a> {
    config: &'a ConfigFile,
    section: &'a str,
}

impl<'a> Resolver<'a> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.config.get(self.section, key)
    }

    fn string(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.or_else(|| self.raw(key).map(str::to_string))
            .unwrap_or_else(|| default.to_string())
    }

    fn f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        match flag {
            Some(v) => Ok(v),
            None => match self.raw(key) {
                Some(s) => s
                    .parse()
                    .with_context(|| format!("config key `{key}` in [{}]", self.section)),
                None => Ok(default),
            },
        }
    }

    fn usize(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        match flag {
            Some(v) => Ok(v),
            None => match self.raw(key) {
                Some(s) => s
                    .parse()
                    .with_context(|| format!("config key `{key}` in [{}]", self.section)),
                None => Ok(default),
            },
        }
    }

    fn path(&self, flag: Option<PathBuf>, key: &str, default: &str) -> PathBuf {
        flag.or_else(|| self.raw(key).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(default))
    }
}

fn out_path(out_dir: &Path, out: &Path) -> PathBuf {
    if out.is_absolute() {
        out.to_path_buf()
    } else {
        out_dir.join(out)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
        None => ConfigFile::default(),
    };
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if !out_dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&out_dir)
            .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    }

    match cli.command {
        Command::PhaseDiagram(args) => phase_diagram(args, &config, &out_dir),
        Command::Witness(args) => witness(args, &config, &out_dir),
        Command::Repair(args) => repair(args, &config, &out_dir),
        Command::NoiseFloor(args) => noise_floor(args, &config, &out_dir),
    }
}

fn map_run_error(err: RunError) -> anyhow::Error {
    anyhow::Error::new(err)
}

fn phase_diagram(args: PhaseDiagramArgs, config: &ConfigFile, out_dir: &Path) -> Result<ExitCode> {
    let r = Resolver {
        config,
        section: "phase-diagram",
    };
    let gamma = r.f64(args.gamma, "gamma", 1.0)?;
    let nu_spec = r.string(args.nu_grid, "nu-grid", "1:4:101");
    let r_spec = r.string(args.r_grid, "r-grid", "0:1.5:101");
    let format = resolve_format(&r, args.format, "format")?;
    let out = out_path(out_dir, &r.path(args.out, "out", "phase_diagram.csv"));

    let params = PhaseDiagramParams {
        gamma,
        nu_grid: parse_grid(&nu_spec).map_err(|e| anyhow!("--nu-grid: {e}"))?,
        r_grid: parse_grid(&r_spec).map_err(|e| anyhow!("--r-grid: {e}"))?,
    };
    let data = match runners::run_phase_diagram(&params) {
        Ok(data) => data,
        Err(RunError::Analysis(msg)) => {
            eprintln!("analysis violation: {msg}");
            return Ok(ExitCode::from(EXIT_ANALYSIS));
        }
        Err(e) => return Err(map_run_error(e)),
    };

    let boundary = output::companion_path(&out, "boundary");
    match format {
        OutputFormat::Csv => {
            output::write_phase_csv(&out, &data)?;
            output::write_boundary_csv(&boundary, &data)?;
        }
        OutputFormat::Json => {
            output::write_json(
                &out,
                &json!({
                    "rows": output::phase_rows_json(&data.rows),
                    "boundary": data.boundary,
                }),
            )?;
        }
    }
    output::write_meta_sidecar(
        &out,
        "phase-diagram",
        json!({
            "gamma": gamma,
            "nu-grid": nu_spec,
            "r-grid": r_spec,
            "points": data.rows.len(),
            "format": format_name(format),
        }),
    )?;
    if let Some(script) = args.plot_script {
        let script_path = out_path(out_dir, &script);
        std::fs::write(&script_path, output::phase_plot_script(&out, &boundary))?;
        println!("wrote {}", script_path.display());
    }
    let defects = data.rows.iter().filter(|row| row.lambda_min < 0.0).count();
    println!(
        "phase diagram: {} points, {} with a CP defect -> {}",
        data.rows.len(),
        defects,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn witness(args: WitnessArgs, config: &ConfigFile, out_dir: &Path) -> Result<ExitCode> {
    let r = Resolver {
        config,
        section: "witness",
    };
    let params = WitnessParams {
        gamma: r.f64(args.gamma, "gamma", 1.0)?,
        t: r.f64(args.t, "t", 0.3)?,
        nu: r.f64(args.nu, "nu", 1.2)?,
        r: r.f64(args.r, "r", 0.6)?,
        dt: r.f64(args.dt, "dt", 1e-6)?,
        mu_list: parse_grid(&r.string(args.mu_list, "mu-list", "1.1,1.5,2,5,20"))
            .map_err(|e| anyhow!("--mu-list: {e}"))?,
    };
    let out = out_path(out_dir, &r.path(args.out, "out", "witness.json"));
    let report = runners::run_witness(&params).map_err(map_run_error)?;
    output::write_json(&out, &report)?;
    output::write_meta_sidecar(
        &out,
        "witness",
        json!({
            "gamma": params.gamma,
            "t": params.t,
            "nu": params.nu,
            "r": params.r,
            "dt": params.dt,
            "mu-list": params.mu_list,
        }),
    )?;
    let worst = report
        .channels
        .iter()
        .map(|c| c.max_pairwise_deviation)
        .fold(0.0f64, f64::max);
    println!(
        "witness: {} channels, max mu-dependence {:.3e} -> {}",
        report.channels.len(),
        worst,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn repair(args: RepairArgs, config: &ConfigFile, out_dir: &Path) -> Result<ExitCode> {
    let r = Resolver {
        config,
        section: "repair",
    };
    let weight = match args.weight {
        Some(RepairWeightArg::Identity) => RepairWeight::Identity,
        Some(RepairWeightArg::Bkm) => RepairWeight::Bkm,
        None => match r.raw("weight") {
            Some("identity") => RepairWeight::Identity,
            Some("bkm") | None => RepairWeight::Bkm,
            Some(other) => return Err(anyhow!("config key `weight`: unknown value {other:?}")),
        },
    };
    let params = RepairParams {
        gamma: r.f64(args.gamma, "gamma", 1.0)?,
        nu: r.f64(args.nu, "nu", 1.2)?,
        r: r.f64(args.r, "r", 0.6)?,
        weight,
    };
    let out = out_path(out_dir, &r.path(args.out, "out", "repair.json"));
    let report = runners::run_repair(&params).map_err(map_run_error)?;
    output::write_json(&out, &report)?;
    output::write_meta_sidecar(
        &out,
        "repair",
        json!({
            "gamma": params.gamma,
            "nu": params.nu,
            "r": params.r,
            "weight": match weight {
                RepairWeight::Identity => "identity",
                RepairWeight::Bkm => "bkm",
            },
        }),
    )?;
    println!(
        "repair: lambda_minus = {:.6}, cost = {:.6}, trace = {:.6} -> {}",
        report.lambda_minus,
        report.cost,
        report.repair_trace,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn noise_floor(args: NoiseFloorArgs, config: &ConfigFile, out_dir: &Path) -> Result<ExitCode> {
    let r = Resolver {
        config,
        section: "noise-floor",
    };
    let class_spec = r.string(args.class, "class", "1.5,0.8; 2,0.5; 1.2,1.0");
    let s_spec = r.string(args.s_grid, "s-grid", "0.25,0.5,1,2");
    let weight_source = match args.weight_source {
        Some(w) => w.into(),
        None => match r.raw("weight-source") {
            Some("reference") => WeightSource::Reference,
            Some("actual") | None => WeightSource::Actual,
            Some(other) => {
                return Err(anyhow!("config key `weight-source`: unknown value {other:?}"))
            }
        },
    };
    let format = resolve_format(&r, args.format, "format")?;
    let params = NoiseFloorParams {
        gamma: r.f64(args.gamma, "gamma", 1.0)?,
        class: parse_class(&class_spec).map_err(|e| anyhow!("--class: {e}"))?,
        s_grid: parse_grid(&s_spec).map_err(|e| anyhow!("--s-grid: {e}"))?,
        steps: r.usize(args.steps, "steps", 256)?,
        weight_source,
    };
    let out = out_path(out_dir, &r.path(args.out, "out", "noise_floor.csv"));
    let report = runners::run_noise_floor(&params).map_err(map_run_error)?;

    match format {
        OutputFormat::Csv => output::write_noise_floor_csv(&out, &report)?,
        OutputFormat::Json => output::write_json(
            &out,
            &json!({
                "rows": report.rows.iter().map(|row| json!({
                    "s": row.s,
                    "neg2lnf_wc": row.neg2lnf_wc,
                    "bound": row.bound,
                    "defect_flag": row.defect_flag,
                })).collect::<Vec<_>>(),
            }),
        )?,
    }
    let members = output::companion_path(&out, "members").with_extension("json");
    output::write_json(&members, &output::noise_floor_members_json(&report))?;
    output::write_meta_sidecar(
        &out,
        "noise-floor",
        json!({
            "gamma": params.gamma,
            "class": class_spec,
            "s-grid": s_spec,
            "steps": params.steps,
            "weight-source": match weight_source {
                WeightSource::Reference => "reference",
                WeightSource::Actual => "actual",
            },
            "flip-bound-sign": args.flip_bound_sign,
            "format": format_name(format),
        }),
    )?;
    if let Some(script) = args.plot_script {
        let script_path = out_path(out_dir, &script);
        std::fs::write(&script_path, output::noise_floor_plot_script(&out))?;
        println!("wrote {}", script_path.display());
    }

    let violations = runners::violating_rows(&report, args.flip_bound_sign);
    println!(
        "noise floor: {} rows -> {} (members: {})",
        report.rows.len(),
        out.display(),
        members.display()
    );
    if violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for s in &violations {
            let row = report.rows.iter().find(|row| row.s == *s).unwrap();
            eprintln!(
                "inequality check failed at S={}: -2lnF_wc={:.6e}, bound={:.6e}",
                row.s, row.neg2lnf_wc, row.bound
            );
        }
        Ok(ExitCode::from(EXIT_ANALYSIS))
    }
}

fn resolve_format(
    r: &Resolver<'_>,
    flag: Option<OutputFormat>,
    key: &str,
) -> Result<OutputFormat> {
    match flag {
        Some(f) => Ok(f),
        None => match r.raw(key) {
            Some("csv") | None => Ok(OutputFormat::Csv),
            Some("json") => Ok(OutputFormat::Json),
            Some(other) => Err(anyhow!("config key `{key}`: unknown format {other:?}")),
        },
    }
}

fn format_name(f: OutputFormat) -> &'static str {
    match f {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}
