//! Experiment configuration, the runner behind the `excursion` binary, and the registry of
//! reference experiments.

mod registry;
mod run;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::arithmetic::NumberSpec;
use crate::hyperbolic::Group;
use crate::lattice::LatticeSpecFile;
use crate::origami::OrigamiFile;

pub use registry::{registry_entry, registry_list, RegistryEntry};
pub use run::{exit_code_for, run, write_artifacts, Artifact, Outcome, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyAxiomatic,
    Mu,
    Beta,
    Gamma,
    Markoff,
    OneSided,
    /// `d_Δ / (2 log α_1)` along `g_{-t}x0`.
    Mahler,
    HyperbolicExcursion,
    Deviation,
    OrigamiTrace,
    OrigamiCylinders,
    OrigamiProbe,
    /// Excursion reports of a sheared square-tiled surface.
    OrigamiExcursion,
    Registry,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyAxiomatic => "verify-axiomatic",
            Command::Mu => "mu",
            Command::Beta => "beta",
            Command::Gamma => "gamma",
            Command::Markoff => "markoff",
            Command::OneSided => "one-sided",
            Command::Mahler => "mahler",
            Command::HyperbolicExcursion => "hyperbolic-excursion",
            Command::Deviation => "deviation",
            Command::OrigamiTrace => "origami-trace",
            Command::OrigamiCylinders => "origami-cylinders",
            Command::OrigamiProbe => "origami-probe",
            Command::OrigamiExcursion => "origami-excursion",
            Command::Registry => "registry",
        }
    }
}

/// A check on one reported metric: `|value - expected| ≤ tolerance`, with the tolerance
/// taken relative to `|expected|` when `relative` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub metric: String,
    pub expected: f64,
    pub tolerance: f64,
    #[serde(default)]
    pub relative: bool,
}

impl Assertion {
    pub fn absolute(metric: &str, expected: f64, tolerance: f64) -> Self {
        Assertion { metric: metric.into(), expected, tolerance, relative: false }
    }

    pub fn relative(metric: &str, expected: f64, tolerance: f64) -> Self {
        Assertion { metric: metric.into(), expected, tolerance, relative: true }
    }

    pub fn holds(&self, value: f64) -> bool {
        let tol = if self.relative { self.tolerance * self.expected.abs() } else { self.tolerance };
        (value - self.expected).abs() <= tol
    }
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Planar lattice `x_α`, or `α` for the hyperbolic and sheared-surface commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<NumberSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpecFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origami: Option<OrigamiFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Group>,
    /// `R_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// `S`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear: Option<f64>,
    /// `T`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_tolerance() -> f64 {
    0.05
}

fn default_precision() -> u32 {
    512
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            spec: None,
            lattice: None,
            origami: None,
            group: None,
            radius: None,
            shear: None,
            time: None,
            samples: None,
            seed: 0,
            tolerance: default_tolerance(),
            precision_bits: default_precision(),
            assertions: Vec::new(),
            out: None,
        }
    }

    pub fn with_spec(mut self, spec: &str) -> crate::Result<Self> {
        self.spec = Some(spec.parse()?);
        Ok(self)
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialisable")
    }
}
