use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{registry_list, Command, ExperimentConfig};
use crate::analytics::{
    beta_hat_ln, default_windows, gamma_hat, markoff_sigma, mu_hat, one_sided, running_series,
    verify_axiomatic, Budget, ExcursionReport, Side,
};
use crate::arithmetic::{scalar_from_spec, ExactScalar};
use crate::hyperbolic::{
    deviation_experiment, geodesic_trajectory, horocycle_excursion, quantitative_mahler_check,
    DeviationParams, FuchsianContext, Group,
};
use crate::lattice::{records, LatticeProvider, LatticeSpec, RecordTable};
use crate::origami::{cylinders, minkowski_probe, qd_excursion, saddle_connections, HolonomySpectrum, Origami};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    AssertionFailure,
    InvalidSpec,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::AssertionFailure => 1,
            Status::InvalidSpec => 2,
        }
    }
}

/// Exit status for a run that stopped with an error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MalformedSpec(_)
        | Error::LiouvilleGrowth(_)
        | Error::InvalidArgument(_)
        | Error::ShapeMismatch(..)
        | Error::RankDeficient
        | Error::Disconnected
        | Error::VerticalVector
        | Error::ExactSolution
        | Error::Cuspidal
        | Error::Json(_)
        | Error::Io(_) => Status::InvalidSpec.exit_code(),
        _ => Status::AssertionFailure.exit_code(),
    }
}

/// A named CSV artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub command: Command,
    pub status: Status,
    pub metrics: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    pub failures: Vec<String>,
    pub details: Value,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub fn artifact(&self, name: &str) -> Option<&str> {
        self.artifacts.iter().find(|a| a.name == name).map(|a| a.contents.as_str())
    }

    pub fn report_json(&self, config: &ExperimentConfig) -> String {
        let v = json!({
            "config": config,
            "status": self.status,
            "metrics": self.metrics,
            "flags": self.flags,
            "failures": self.failures,
            "details": self.details,
        });
        serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
    }
}

/// Schema lines (`# column: meaning`) followed by the CSV body, whose first line is the header.
fn with_schema(columns: &[(&str, &str)], body: String) -> String {
    let mut out = String::new();
    for (c, d) in columns {
        let _ = writeln!(out, "# {c}: {d}");
    }
    out + &body
}

struct Collected {
    metrics: BTreeMap<String, f64>,
    flags: BTreeMap<String, bool>,
    details: Value,
    artifacts: Vec<Artifact>,
}

impl Collected {
    fn new() -> Self {
        Collected { metrics: BTreeMap::new(), flags: BTreeMap::new(), details: Value::Null, artifacts: Vec::new() }
    }

    fn metric(&mut self, k: &str, v: f64) {
        self.metrics.insert(k.into(), v);
    }

    fn flag(&mut self, k: &str, v: bool) {
        self.flags.insert(k.into(), v);
    }

    fn artifact(&mut self, name: &str, columns: &[(&str, &str)], body: String) {
        self.artifacts.push(Artifact { name: name.into(), contents: with_schema(columns, body) });
    }
}

fn scalar(config: &ExperimentConfig) -> Result<ExactScalar> {
    let spec = config.spec.as_ref().ok_or_else(|| Error::InvalidArgument("--spec is required".into()))?;
    scalar_from_spec(spec, config.precision_bits)
}

fn provider(config: &ExperimentConfig) -> Result<LatticeProvider> {
    let spec = match (&config.lattice, &config.spec) {
        (Some(file), _) => file.materialise(config.precision_bits)?,
        (None, Some(_)) => LatticeSpec::planar(scalar(config)?),
        (None, None) => return Err(Error::InvalidArgument("a lattice spec is required".into())),
    };
    LatticeProvider::new(spec)
}

fn surface(config: &ExperimentConfig) -> Result<Origami> {
    let file = config.origami.as_ref().ok_or_else(|| Error::InvalidArgument("--file is required".into()))?;
    Origami::from_file(file)
}

fn context(config: &ExperimentConfig) -> FuchsianContext {
    match config.group.unwrap_or(Group::SL2Z) {
        Group::SL2Z => FuchsianContext::sl2z(),
        Group::Gamma2 => FuchsianContext::gamma2(),
    }
}

fn radius(config: &ExperimentConfig, default: f64) -> f64 {
    config.radius.unwrap_or(default)
}

const RECORD_COLUMNS: [(&str, &str); 4] = [
    ("q_norm", "||p_2|| of the record"),
    ("p_norm", "||p_1|| of the record"),
    ("exponent", "1 + ln(1/||p_1||)/ln||p_2||"),
    ("markoff_product", "||p_1|| ||p_2||^{n/m}"),
];

fn record_table(config: &ExperimentConfig, out: &mut Collected) -> Result<RecordTable> {
    let p = provider(config)?;
    let table = records(&p, radius(config, 1e6))?;
    out.flag("certified", table.is_certified());
    out.metric("record_count", table.len() as f64);
    out.artifact("records.csv", &RECORD_COLUMNS, table.to_csv());
    Ok(table)
}

fn report_metrics(prefix: &str, r: &ExcursionReport, out: &mut Collected) {
    out.metric(&format!("{prefix}mu_hat"), r.mu_hat);
    out.metric(&format!("{prefix}beta_hat"), r.beta_hat);
    out.metric(&format!("{prefix}gamma_hat"), r.gamma_hat);
    out.metric(&format!("{prefix}markoff_hat"), r.markoff_hat);
    if let Some(s) = r.sigma_hat {
        out.metric(&format!("{prefix}sigma_hat"), s);
    }
    out.metric(&format!("{prefix}residual_beta_gamma"), r.residuals.beta_gamma);
    out.metric(&format!("{prefix}residual_beta_mu"), r.residuals.beta_mu);
    if let Some(s) = r.residuals.sigma_markoff {
        out.metric(&format!("{prefix}residual_sigma_markoff"), s);
    }
    out.flag(&format!("{prefix}pass"), r.pass);
}

const REPORT_COLUMNS: [(&str, &str); 2] = [("quantity", "estimate or setting name"), ("value", "its value")];

fn plot_data(table: &RecordTable) -> String {
    let mut body = String::from("q_norm,mu,beta,gamma,c_tilde\n");
    for (y, e) in running_series(table) {
        let _ = writeln!(body, "{y:.12e},{:.12e},{:.12e},{:.12e},{:.12e}", e.mu, e.beta, e.gamma, e.c_tilde);
    }
    body
}

const PLOT_COLUMNS: [(&str, &str); 5] = [
    ("q_norm", "record ||p_2||"),
    ("mu", "running exponent estimate"),
    ("beta", "running horospherical rate"),
    ("gamma", "running geodesic rate"),
    ("c_tilde", "running Markoff product minimum"),
];

fn spectrum_artifact(name: &str, s: &HolonomySpectrum, out: &mut Collected) {
    out.metric("distinct_vectors", s.len() as f64);
    out.metric("total_multiplicity", s.entries.iter().map(|e| e.multiplicity as f64).sum());
    out.flag("symmetric", s.is_symmetric());
    out.artifact(
        name,
        &[
            ("a", "horizontal holonomy"),
            ("b", "vertical holonomy"),
            ("multiplicity", "number of saddle connections or cylinders with this holonomy"),
            ("kind", "saddle or cylinder"),
        ],
        s.to_csv(),
    );
}

fn quantity_csv(rows: &[(&str, String)]) -> String {
    let mut body = String::from("quantity,value\n");
    for (k, v) in rows {
        let _ = writeln!(body, "{k},{v}");
    }
    body
}

fn execute(config: &ExperimentConfig) -> Result<Collected> {
    let mut out = Collected::new();
    let tol = config.tolerance;
    match config.command {
        Command::VerifyAxiomatic => {
            let p = provider(config)?;
            let budget = Budget { r_max: radius(config, 1e6), tolerance: tol };
            let report = verify_axiomatic(&p, budget)?;
            let table = records(&p, budget.r_max)?;
            report_metrics("", &report, &mut out);
            out.flag("certified", report.certified);
            out.metric("record_count", report.record_count as f64);
            if let Some(m) = report.minkowski_consistent {
                out.flag("minkowski_consistent", m);
            }
            out.artifact("report.csv", &REPORT_COLUMNS, report.to_csv());
            out.artifact("records.csv", &RECORD_COLUMNS, table.to_csv());
            out.artifact("plot.csv", &PLOT_COLUMNS, plot_data(&table));
            out.details = serde_json::to_value(&report)?;
        }
        Command::Mu => {
            let table = record_table(config, &mut out)?;
            let (mu, recs) = mu_hat(&table, table.radius_reached)?;
            out.metric("mu_hat", mu);
            let mut body = String::from("id,q_norm,p_norm,exponent\n");
            for r in &recs {
                let _ = writeln!(body, "{},{:.12e},{:.12e},{:.12e}", r.id, r.q_norm, r.p_norm, r.exponent);
            }
            out.artifact(
                "exponents.csv",
                &[
                    ("id", "index in the record table"),
                    ("q_norm", "||p_2||"),
                    ("p_norm", "||p_1||"),
                    ("exponent", "normalised per-record exponent"),
                ],
                body,
            );
            out.artifact("plot.csv", &PLOT_COLUMNS, plot_data(&table));
        }
        Command::Beta => {
            let table = record_table(config, &mut out)?;
            let ln_s = match config.shear {
                Some(s) => s.ln(),
                None => default_windows(&table)?.1,
            };
            let b = beta_hat_ln(&table, ln_s)?;
            out.metric("beta_hat", b);
            out.metric("ln_shear", ln_s);
            out.artifact("beta.csv", &REPORT_COLUMNS, quantity_csv(&[("ln_shear", format!("{ln_s:.12e}")), ("beta_hat", format!("{b:.12e}"))]));
        }
        Command::Gamma => {
            let table = record_table(config, &mut out)?;
            let t = match config.time {
                Some(t) => t,
                None => default_windows(&table)?.2,
            };
            let g = gamma_hat(&table, t)?;
            out.metric("gamma_hat", g);
            out.metric("time", t);
            out.artifact("gamma.csv", &REPORT_COLUMNS, quantity_csv(&[("time", format!("{t:.12e}")), ("gamma_hat", format!("{g:.12e}"))]));
        }
        Command::Markoff => {
            let table = record_table(config, &mut out)?;
            let ms = markoff_sigma(&table)?;
            out.metric("c_tilde", ms.c_tilde);
            let mut rows = vec![("c_tilde", format!("{:.12e}", ms.c_tilde))];
            match ms.sigma {
                Some(s) => {
                    out.metric("sigma", s);
                    out.metric("residual_sigma_markoff", (s - ms.c_tilde.powf(-(table.shape.m as f64) / table.shape.d() as f64)).abs());
                    rows.push(("sigma", format!("{s:.12e}")));
                }
                None => rows.push(("sigma", "inf".into())),
            }
            out.artifact("markoff.csv", &REPORT_COLUMNS, quantity_csv(&rows));
        }
        Command::OneSided => {
            let table = record_table(config, &mut out)?;
            let (mu, _) = mu_hat(&table, table.radius_reached)?;
            out.metric("mu_hat", mu);
            let mut rows = vec![("mu_hat", format!("{mu:.12e}"))];
            for (side, name) in [(Side::Plus, "plus"), (Side::Minus, "minus")] {
                let o = one_sided(&table, side)?;
                if let Some(m) = o.mu {
                    out.metric(&format!("mu_{name}"), m);
                }
                if let Some(c) = o.c_tilde {
                    out.metric(&format!("c_tilde_{name}"), c);
                }
                rows.push((if side == Side::Plus { "mu_plus" } else { "mu_minus" }, o.mu.map_or("none".into(), |m| format!("{m:.12e}"))));
            }
            let max_side = ["mu_plus", "mu_minus"].iter().filter_map(|k| out.metrics.get(*k).copied()).fold(f64::NEG_INFINITY, f64::max);
            out.flag("max_side_equals_mu", max_side == mu);
            out.artifact("one_sided.csv", &REPORT_COLUMNS, quantity_csv(&rows));
        }
        Command::Mahler => {
            let ctx = context(config);
            let t_end = config.time.unwrap_or(30.0);
            let steps = config.samples.unwrap_or(30).max(1);
            let times: Vec<f64> = (1..=steps).map(|k| t_end * k as f64 / steps as f64).collect();
            let traj = geodesic_trajectory(ctx.base(), &times);
            let samples = quantitative_mahler_check(&ctx, &traj, &ctx.all_cusps())?;
            let last = samples.last().expect("non-empty");
            out.metric("ratio", last.ratio.unwrap_or(f64::NAN));
            out.metric("depth", last.depth);
            out.metric("log_alpha1", last.log_alpha1);
            let defect = samples.iter().map(|s| (s.log_alpha1 - s.parameter / 2.0).abs()).fold(0.0, f64::max);
            out.metric("log_alpha1_defect", defect);
            let mut body = String::from("t,depth,log_alpha1,ratio\n");
            for s in &samples {
                let r = s.ratio.map_or("nan".into(), |r| format!("{r:.12e}"));
                let _ = writeln!(body, "{:.12e},{:.12e},{:.12e},{r}", s.parameter, s.depth, s.log_alpha1);
            }
            out.artifact(
                "mahler.csv",
                &[
                    ("t", "geodesic time"),
                    ("depth", "cusp depth of g_{-t}x0"),
                    ("log_alpha1", "log of the inverse shortest orbit covector"),
                    ("ratio", "depth / (2 log_alpha1)"),
                ],
                body,
            );
        }
        Command::HyperbolicExcursion => {
            let ctx = context(config);
            let ex = horocycle_excursion(&ctx, &scalar(config)?, config.shear.unwrap_or(1e6))?;
            out.metric("beta_dist", ex.beta_dist);
            out.metric("gamma_dist", ex.gamma_dist);
            out.metric("residual", ex.residual);
            let mut body = String::from("flow,parameter,depth\n");
            for (s, d) in &ex.s_samples {
                let _ = writeln!(body, "horocycle,{s:.12e},{d:.12e}");
            }
            for (t, d) in &ex.t_samples {
                let _ = writeln!(body, "geodesic,{t:.12e},{d:.12e}");
            }
            out.artifact(
                "excursion.csv",
                &[("flow", "horocycle or geodesic"), ("parameter", "s or t"), ("depth", "distance to the base point")],
                body,
            );
        }
        Command::Deviation => {
            let ctx = context(config);
            let mut params = DeviationParams { seed: config.seed, ..DeviationParams::default() };
            if let Some(n) = config.samples {
                params.mc_samples = n;
            }
            if let Some(s) = config.shear {
                params.excursion_scale = s;
            }
            let rec = deviation_experiment(&ctx, &scalar(config)?, &params)?;
            for (k, v) in [
                ("s_0", rec.s_0),
                ("gamma", rec.gamma),
                ("epsilon", rec.epsilon),
                ("kappa", rec.kappa),
                ("c", rec.c),
                ("deviation", rec.deviation),
                ("bound", rec.bound),
            ] {
                out.metric(k, v);
            }
            out.flag("pass", rec.pass);
            let value = serde_json::to_value(&rec)?;
            let rows: Vec<(String, String)> = value
                .as_object()
                .expect("record object")
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect();
            let mut body = String::from("quantity,value\n");
            for (k, v) in rows {
                let _ = writeln!(body, "{k},{v}");
            }
            out.artifact("deviation.csv", &REPORT_COLUMNS, body);
            out.details = value;
        }
        Command::OrigamiTrace => {
            let s = saddle_connections(&surface(config)?, radius(config, 30.0));
            spectrum_artifact("saddles.csv", &s, &mut out);
        }
        Command::OrigamiCylinders => {
            let s = cylinders(&surface(config)?, radius(config, 30.0));
            spectrum_artifact("cylinders.csv", &s, &mut out);
        }
        Command::OrigamiProbe => {
            let o = surface(config)?;
            let report = minkowski_probe(&o, config.samples.unwrap_or(1000), config.radius, config.seed);
            out.metric("empirical_max", report.empirical_max);
            out.metric("bound", report.bound);
            out.metric("failures", report.failures as f64);
            out.flag("pass", report.pass);
            let mut body = String::from("g11,g12,g21,g22,shortest,p,q,multiple\n");
            for s in &report.samples {
                let g = s.g;
                let len = s.shortest.map_or("none".into(), |l| format!("{l:.12e}"));
                let (p, q, m) = s.witness.map_or(("".into(), "".into(), "".into()), |(p, q, m)| (p.to_string(), q.to_string(), m.to_string()));
                let _ = writeln!(body, "{:.12e},{:.12e},{:.12e},{:.12e},{len},{p},{q},{m}", g[0][0], g[0][1], g[1][0], g[1][1]);
            }
            out.artifact(
                "probe.csv",
                &[
                    ("g11..g22", "entries of the random element g"),
                    ("shortest", "shortest |g w| over cylinder core holonomies w"),
                    ("p,q", "primitive direction of the witness"),
                    ("multiple", "core holonomy is multiple*(p,q)"),
                ],
                body,
            );
        }
        Command::OrigamiExcursion => {
            let o = surface(config)?;
            let budget = Budget { r_max: radius(config, 1e3), tolerance: tol };
            let qd = qd_excursion(&o, &scalar(config)?, budget)?;
            report_metrics("saddle_", &qd.saddle, &mut out);
            report_metrics("cylinder_", &qd.cylinder, &mut out);
            out.artifact("saddle_report.csv", &REPORT_COLUMNS, qd.saddle.to_csv());
            out.artifact("cylinder_report.csv", &REPORT_COLUMNS, qd.cylinder.to_csv());
            out.details = serde_json::to_value(&qd)?;
        }
        Command::Registry => {
            let entries = registry_list();
            out.metric("entries", entries.len() as f64);
            let mut body = String::from("name,command,description\n");
            for e in &entries {
                let _ = writeln!(body, "{},{},\"{}\"", e.name, e.config.command.name(), e.description);
            }
            out.artifact(
                "registry.csv",
                &[("name", "experiment name"), ("command", "subcommand it runs"), ("description", "what it checks")],
                body,
            );
        }
    }
    Ok(out)
}

/// Runs one experiment and checks its assertions and built-in pass flags.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let collected = execute(config)?;
    let mut failures = Vec::new();
    for a in &config.assertions {
        match collected.metrics.get(&a.metric) {
            None => failures.push(format!("{}: not reported", a.metric)),
            Some(&v) if !a.holds(v) => failures.push(format!(
                "{}: {v} differs from {} by more than {}{}",
                a.metric,
                a.expected,
                a.tolerance,
                if a.relative { " (relative)" } else { "" }
            )),
            Some(_) => {}
        }
    }
    for (k, v) in &collected.flags {
        if (k == "pass" || k.ends_with("_pass")) && !v {
            failures.push(format!("{k} is false"));
        }
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::AssertionFailure };
    Ok(Outcome {
        command: config.command,
        status,
        metrics: collected.metrics,
        flags: collected.flags,
        failures,
        details: collected.details,
        artifacts: collected.artifacts,
    })
}

/// Writes `report.json` and every CSV artifact into `dir`.
pub fn write_artifacts(outcome: &Outcome, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let report = dir.join("report.json");
    std::fs::write(&report, outcome.report_json(config))?;
    written.push(report);
    for a in &outcome.artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents)?;
        written.push(path);
    }
    Ok(written)
}
