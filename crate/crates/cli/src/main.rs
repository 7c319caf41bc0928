#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod error;
mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use orfkit_core::grid::{circle_points, disk_points};
use orfkit_core::transforms::{arf_explicit_with, arf_recurrence};
use orfkit_core::{MeasureSpec, OrfSystem};
use serde::Serialize;

use config::JobConfig;
use error::CliError;

/// Largest explicit-vs-recurrence gap accepted by `arf`.
const ARF_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "orfkit", version, about = "Orthogonal rational functions on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an ORF system and write orf.json and orf_table.csv.
    Synth {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compute associated rational functions of a given order.
    Arf {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `arf_order` from the config.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check identities on the configured system and write verify.json.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Restrict to the named checks; repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Worked example with closed-form answers.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        /// Second pole as `re,im`.
        #[arg(long, default_value = "0.5,0", allow_hyphen_values = true)]
        beta1: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    Lebesgue,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { config, out } => synth(&config, &out),
        Command::Arf { config, order, out } => arf(&config, order, &out),
        Command::Verify { config, checks, out } => verify_cmd(&config, &checks, &out),
        Command::Example {
            name: ExampleName::Lebesgue,
            beta1,
            n,
            out,
        } => example_lebesgue(&beta1, n, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("orfkit: {e}");
            e.exit_code()
        }
    }
}

fn write_system(sys: &OrfSystem, out: &Path) -> Result<(), CliError> {
    output::write_json(out, "orf.json", sys)?;
    let names: Vec<String> = (0..=sys.n_max()).map(|n| format!("phi_{n}")).collect();
    let fs: Vec<_> = sys.levels().iter().map(|l| &l.phi).collect();
    output::write_atomic(out, "orf_table.csv", output::boundary_table(&names, &fs)?.as_bytes())
}

fn synth(config: &Path, out: &Path) -> Result<(), CliError> {
    let cfg = JobConfig::load(config)?;
    let sys = cfg.build_system()?;
    write_system(&sys, out)?;
    println!("wrote orf.json and orf_table.csv for levels 0..={}", sys.n_max());
    Ok(())
}

fn arf(config: &Path, order: Option<usize>, out: &Path) -> Result<(), CliError> {
    let cfg = JobConfig::load(config)?;
    let k = order
        .or(cfg.arf_order)
        .ok_or_else(|| CliError::Config("no ARF order: pass --order or set arf_order".into()))?;
    if k > cfg.n_max {
        return Err(CliError::Config(format!("ARF order {k} exceeds n_max = {}", cfg.n_max)));
    }
    let sys = cfg.build_system()?;
    let arf = arf_recurrence(&sys, k, sys.n_max())?;
    let f = sys.caratheodory()?;
    let grid = circle_points(1.0, output::TABLE_POINTS, 0.0);
    let mut gap: f64 = 0.0;
    for n in k..=sys.n_max() {
        let pair = arf_explicit_with(&sys, &f, k, n)?;
        let rec = arf.level(n)?;
        gap = gap.max(pair.phi.grid_distance(&rec.phi, &grid)?);
        gap = gap.max(pair.psi.grid_distance(&rec.psi, &grid)?);
    }
    println!("ARF order {k}: explicit vs recurrence max discrepancy {gap:.3e}");
    if !(gap < ARF_TOLERANCE) {
        return Err(CliError::Numerical(format!(
            "explicit and recurrence ARFs of order {k} differ by {gap:e} (limit {ARF_TOLERANCE:e})"
        )));
    }
    output::write_json(out, &format!("arf_{k}.json"), &arf)?;
    output::write_atomic(
        out,
        &format!("mu_{k}.csv"),
        output::weight_table(&arf.weight_table()).as_bytes(),
    )?;
    let names: Vec<String> = (k..=arf.n_max()).map(|n| format!("phi_{n}_{k}")).collect();
    let fs: Vec<_> = arf.as_system().levels().iter().map(|l| &l.phi).collect();
    output::write_atomic(
        out,
        &format!("arf_{k}_table.csv"),
        output::boundary_table(&names, &fs)?.as_bytes(),
    )?;
    println!("wrote arf_{k}.json, mu_{k}.csv and arf_{k}_table.csv");
    Ok(())
}

fn verify_cmd(config: &Path, checks: &[String], out: &Path) -> Result<(), CliError> {
    let cfg = JobConfig::load(config)?;
    let sys = cfg.build_system()?;
    let report = verify::run(&cfg, &sys, checks)?;
    output::write_json(out, "verify.json", &report)?;
    let mut failed = Vec::new();
    for (name, o) in &report {
        let residual = o.residual.map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}"));
        println!(
            "{} {name}: residual {residual} (tolerance {:.0e}){}",
            if o.pass { "PASS" } else { "FAIL" },
            o.tolerance,
            o.error.as_ref().map(|e| format!(" [{e}]")).unwrap_or_default()
        );
        if !o.pass {
            failed.push(name.as_str());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct ExampleReport {
    beta1: Complex64,
    n: usize,
    phi1_error: f64,
    max_lambda: f64,
    caratheodory_error: f64,
    arf_weight_error: f64,
    pass: bool,
}

fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Config(format!("expected 're,im', got '{s}'"));
    match parts.as_slice() {
        [re, im] => Ok(Complex64::new(
            re.parse().map_err(|_| bad())?,
            im.parse().map_err(|_| bad())?,
        )),
        [re] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, 0.0)),
        _ => Err(bad()),
    }
}

/// Lebesgue measure with poles `0, beta1, 0, ..., 0`: `phi_1` is
/// `eta_1 sqrt(1 - |beta1|^2) z / (1 - conj(beta1) z)`, every `lambda_n` vanishes,
/// `F = 1`, and the order-1 ARF weight is the Poisson kernel at `beta1`.
fn example_lebesgue(beta1: &str, n: usize, out: Option<&Path>) -> Result<(), CliError> {
    let beta1 = parse_complex(beta1)?;
    if n < 1 {
        return Err(CliError::Config("the example needs n >= 1".into()));
    }
    let mut poles = vec![Complex64::new(0.0, 0.0); n + 1];
    poles[1] = beta1;
    let cfg = JobConfig {
        poles,
        lambdas: None,
        measure: Some(MeasureSpec::Lebesgue),
        n_max: n,
        arf_order: Some(1),
        tolerances: Default::default(),
        seed: 0,
        allow_large_poles: false,
    };
    cfg.validate()?;
    let sys = cfg.build_system()?;

    let h = (1.0 - beta1.norm_sqr()).sqrt() * sys.poles().eta(1);
    let mut phi1_error: f64 = 0.0;
    for z in circle_points(1.0, 256, 0.0) {
        let expect = h * z / (1.0 - beta1.conj() * z);
        phi1_error = phi1_error.max((sys.level(1)?.phi.eval(z)? - expect).norm());
    }
    let max_lambda = sys.lambdas().iter().map(|l| l.norm()).fold(0.0, f64::max);
    let f = sys.caratheodory()?;
    let mut caratheodory_error: f64 = 0.0;
    for z in disk_points(0.95, 5, 10, &[], 0.0) {
        caratheodory_error = caratheodory_error.max((f.eval(z)? - 1.0).norm());
    }
    let arf = arf_recurrence(&sys, 1, n)?;
    let mut arf_weight_error: f64 = 0.0;
    for (theta, w) in arf.weight_table() {
        let t = Complex64::from_polar(1.0, theta);
        let expect = (1.0 - beta1.norm_sqr()) / (t - beta1).norm_sqr();
        arf_weight_error = arf_weight_error.max((w - expect).abs());
    }
    let pass = phi1_error < 1e-10 && max_lambda < 1e-10 && caratheodory_error < 1e-10 && arf_weight_error < 1e-8;
    let report = ExampleReport {
        beta1,
        n,
        phi1_error,
        max_lambda,
        caratheodory_error,
        arf_weight_error,
        pass,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?
    );
    if let Some(dir) = out {
        write_system(&sys, dir)?;
        output::write_json(dir, "arf_1.json", &arf)?;
        output::write_atomic(dir, "mu_1.csv", output::weight_table(&arf.weight_table()).as_bytes())?;
        output::write_json(dir, "example.json", &report)?;
    }
    if pass {
        Ok(())
    } else {
        Err(CliError::Verification(
            "Lebesgue example deviates from its closed forms".into(),
        ))
    }
}
