use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cusp_excursion::arithmetic::NumberSpec;
use cusp_excursion::cli::{
    exit_code_for, registry_entry, registry_list, run, write_artifacts, Command, ExperimentConfig, Outcome,
};
use cusp_excursion::hyperbolic::Group;
use cusp_excursion::lattice::LatticeSpecFile;
use cusp_excursion::origami::OrigamiFile;
use cusp_excursion::{Error, Result};

#[derive(Parser)]
#[command(name = "excursion", version, about = "Cusp excursions, Diophantine exponents and Markoff constants")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Records, exponents and both identities for a lattice.
    VerifyAxiomatic(Opts),
    Mu(Opts),
    Beta(Opts),
    Gamma(Opts),
    Markoff(Opts),
    OneSided(Opts),
    /// Cusp depth against 2 log alpha_1 along the geodesic ray.
    Mahler(Opts),
    HyperbolicExcursion(Opts),
    Deviation(Opts),
    #[command(subcommand)]
    Origami(OrigamiCmd),
    /// List the reference experiments, or run one with --run.
    Registry {
        #[arg(long)]
        run: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a saved experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OrigamiCmd {
    Trace(Opts),
    Cylinders(Opts),
    Probe(Opts),
    Excursion(Opts),
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// Number spec (`golden`, `sqrt:2/1`, `liouville:...`) or a lattice JSON file.
    #[arg(long)]
    spec: Option<String>,
    /// Origami JSON file `{"n", "h", "v"}`.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    shear: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision_bits: Option<u32>,
    /// `sl2z` or `gamma2`.
    #[arg(long)]
    group: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn apply_spec(config: &mut ExperimentConfig, spec: &str) -> Result<()> {
    let path = Path::new(spec);
    if !path.is_file() {
        config.spec = Some(spec.parse()?);
        return Ok(());
    }
    let text = read(path)?;
    if let Ok(s) = serde_json::from_str::<NumberSpec>(&text) {
        config.spec = Some(s);
        return Ok(());
    }
    let file: LatticeSpecFile = serde_json::from_str(&text)?;
    // a single-entry lattice also serves as the scalar for the hyperbolic commands
    if file.m == 1 && file.n == 1 && file.offsets.is_empty() && !file.primitive_only {
        config.spec = Some(file.a[0][0].clone());
    } else {
        config.lattice = Some(file);
    }
    Ok(())
}

fn build(command: Command, opts: Opts) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::new(command);
    if let Some(s) = &opts.spec {
        apply_spec(&mut c, s)?;
    }
    if let Some(f) = &opts.file {
        let file: OrigamiFile = serde_json::from_str(&read(f)?)?;
        c.origami = Some(file);
    }
    if let Some(g) = &opts.group {
        c.group = Some(match g.to_ascii_lowercase().as_str() {
            "sl2z" => Group::SL2Z,
            "gamma2" => Group::Gamma2,
            other => return Err(Error::InvalidArgument(format!("unknown group {other}"))),
        });
    }
    c.radius = opts.radius;
    c.time = opts.time;
    c.shear = opts.shear;
    c.samples = opts.samples;
    c.out = opts.out;
    if let Some(s) = opts.seed {
        c.seed = s;
    }
    if let Some(t) = opts.tol {
        c.tolerance = t;
    }
    if let Some(p) = opts.precision_bits {
        c.precision_bits = p;
    }
    Ok(c)
}

/// Registry entries keep their own settings; only the output directory is taken from the flags.
fn registry_config(name: Option<String>, opts: Opts) -> Result<ExperimentConfig> {
    match name {
        None => build(Command::Registry, opts),
        Some(n) => {
            let mut c = registry_entry(&n)
                .ok_or_else(|| Error::InvalidArgument(format!("no registry entry named {n}")))?
                .config;
            c.out = opts.out;
            Ok(c)
        }
    }
}

fn config(cli: Cli) -> Result<ExperimentConfig> {
    match cli.command {
        Cmd::VerifyAxiomatic(o) => build(Command::VerifyAxiomatic, o),
        Cmd::Mu(o) => build(Command::Mu, o),
        Cmd::Beta(o) => build(Command::Beta, o),
        Cmd::Gamma(o) => build(Command::Gamma, o),
        Cmd::Markoff(o) => build(Command::Markoff, o),
        Cmd::OneSided(o) => build(Command::OneSided, o),
        Cmd::Mahler(o) => build(Command::Mahler, o),
        Cmd::HyperbolicExcursion(o) => build(Command::HyperbolicExcursion, o),
        Cmd::Deviation(o) => build(Command::Deviation, o),
        Cmd::Origami(OrigamiCmd::Trace(o)) => build(Command::OrigamiTrace, o),
        Cmd::Origami(OrigamiCmd::Cylinders(o)) => build(Command::OrigamiCylinders, o),
        Cmd::Origami(OrigamiCmd::Probe(o)) => build(Command::OrigamiProbe, o),
        Cmd::Origami(OrigamiCmd::Excursion(o)) => build(Command::OrigamiExcursion, o),
        Cmd::Registry { run, opts } => registry_config(run, opts),
        Cmd::Run { config, out } => {
            let mut c = ExperimentConfig::from_json(&read(&config)?)?;
            if out.is_some() {
                c.out = out;
            }
            Ok(c)
        }
    }
}

fn summary(outcome: &Outcome, out: &mut String) {
    let _ = writeln!(out, "{}: {:?}", outcome.command.name(), outcome.status);
    for (k, v) in &outcome.metrics {
        let _ = writeln!(out, "  {k} = {v}");
    }
    for (k, v) in &outcome.flags {
        let _ = writeln!(out, "  {k}: {v}");
    }
    for f in &outcome.failures {
        let _ = writeln!(out, "  FAIL {f}");
    }
}

fn execute(cli: Cli) -> Result<u8> {
    let list_registry = matches!(&cli.command, Cmd::Registry { run: None, .. });
    let config = config(cli)?;
    let outcome = run(&config)?;
    let mut text = String::new();
    if list_registry {
        for e in registry_list() {
            let _ = writeln!(text, "{:<32} {:<22} {}", e.name, e.config.command.name(), e.description);
        }
    } else {
        summary(&outcome, &mut text);
    }
    match &config.out {
        Some(dir) => {
            for p in write_artifacts(&outcome, &config, dir)? {
                let _ = writeln!(text, "wrote {}", p.display());
            }
        }
        None if !list_registry => {
            if let Some(a) = outcome.artifacts.iter().find(|a| a.name != "plot.csv") {
                let _ = write!(text, "\n{}", a.contents);
            }
        }
        None => {}
    }
    // a closed pipe (`| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    Ok(outcome.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
