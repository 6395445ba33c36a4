use serde::{Deserialize, Serialize};

use super::{Assertion, Command, ExperimentConfig};
use crate::hyperbolic::Group;
use crate::lattice::LatticeSpecFile;
use crate::origami::Origami;

/// A reference experiment with its expected outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub description: String,
    pub config: ExperimentConfig,
}

const LIOUVILLE: &str = "liouville:b=2,nu=3,b1=2,k=7";

fn entry(name: &str, description: &str, config: ExperimentConfig) -> RegistryEntry {
    RegistryEntry { name: name.into(), description: description.into(), config }
}

fn planar(command: Command, spec: &str) -> ExperimentConfig {
    ExperimentConfig::new(command).with_spec(spec).expect("registry specs parse")
}

/// The built-in experiments, each runnable with `excursion registry --run <name>`.
pub fn registry_list() -> Vec<RegistryEntry> {
    let mut out = Vec::new();

    let mut c = planar(Command::VerifyAxiomatic, "golden");
    c.radius = Some(1e6);
    c.precision_bits = 256;
    c.assertions = vec![
        Assertion::absolute("mu_hat", 2.0, 0.02),
        Assertion::absolute("beta_hat", 0.5, 0.03),
        Assertion::absolute("gamma_hat", 0.0, 0.02),
    ];
    out.push(entry("golden-ratio-mu2", "golden-ratio lattice: mu = 2, beta = 1/2, gamma = 0", c));

    let mut c = planar(Command::VerifyAxiomatic, LIOUVILLE);
    c.radius = Some(2f64.powi(200));
    c.precision_bits = 4096;
    c.assertions = vec![
        Assertion::absolute("mu_hat", 3.0, 0.05),
        Assertion::absolute("beta_hat", 2.0 / 3.0, 0.03),
        Assertion::absolute("gamma_hat", 1.0 / 6.0, 0.03),
        Assertion::absolute("residual_beta_gamma", 0.0, 0.05),
        Assertion::absolute("residual_beta_mu", 0.0, 0.05),
    ];
    out.push(entry("liouville-nu3-identity", "Liouville lattice with exponent 3: both identities hold", c));

    let mut c = planar(Command::Markoff, "golden");
    c.radius = Some(1e6);
    c.precision_bits = 256;
    c.assertions = vec![
        Assertion::relative("c_tilde", 1.0 / 5f64.sqrt(), 0.005),
        Assertion::relative("sigma", 1.4953, 0.005),
        Assertion::absolute("residual_sigma_markoff", 0.0, 1e-3),
    ];
    out.push(entry("golden-markoff-sigma", "golden-ratio Markoff constant 1/sqrt 5 and sigma", c));

    let mut c = planar(Command::OneSided, "sqrt:2/1");
    c.radius = Some(1e6);
    c.precision_bits = 256;
    c.assertions = vec![Assertion::absolute("mu_plus", 2.0, 0.05), Assertion::absolute("mu_minus", 2.0, 0.05)];
    out.push(entry("sqrt2-one-sided", "one-sided exponents of sqrt 2 are both 2", c));

    let mut c = ExperimentConfig::new(Command::VerifyAxiomatic);
    c.lattice = Some(LatticeSpecFile {
        m: 1,
        n: 1,
        a: vec![vec!["liouville:b=2,nu=3,b1=1,k=7".parse().expect("spec")]],
        offsets: vec![vec!["1/2".into(), "1/2".into()]],
        primitive_only: false,
    });
    c.radius = Some(2f64.powi(120));
    c.precision_bits = 4096;
    c.tolerance = 0.1;
    c.assertions = vec![
        Assertion::absolute("residual_beta_gamma", 0.0, 0.1),
        Assertion::absolute("residual_beta_mu", 0.0, 0.1),
    ];
    out.push(entry("affine-liouville-identity", "Liouville lattice shifted by (1/2, 1/2): identities hold", c));

    let mut c = ExperimentConfig::new(Command::Mahler);
    c.group = Some(Group::SL2Z);
    c.time = Some(30.0);
    c.assertions = vec![Assertion::absolute("ratio", 1.0, 0.05), Assertion::absolute("log_alpha1_defect", 0.0, 1e-9)];
    out.push(entry("sl2z-quantitative-mahler", "cusp depth against 2 log alpha_1 along g_{-t}x0 at t = 30", c));

    let mut c = planar(Command::HyperbolicExcursion, LIOUVILLE);
    c.group = Some(Group::SL2Z);
    c.shear = Some(1e6);
    c.assertions = vec![Assertion::absolute("residual", 0.0, 0.1)];
    out.push(entry("liouville-hyperbolic-identity", "beta_dist - gamma_dist = 1 for the embedded Liouville point", c));

    let mut c = planar(Command::Deviation, LIOUVILLE);
    c.group = Some(Group::SL2Z);
    c.seed = 2024;
    out.push(entry("liouville-deviation", "horocycle deviation lower bound at the located s_0", c));

    let torus = Origami::torus().to_file();
    let l_shape = Origami::l_shape().to_file();

    let mut c = ExperimentConfig::new(Command::OrigamiProbe);
    c.origami = Some(torus);
    c.samples = Some(1000);
    c.seed = 1;
    c.assertions = vec![Assertion::absolute("failures", 0.0, 0.0)];
    out.push(entry("torus-minkowski-probe", "shortest cylinder of the marked torus under random g", c));

    let mut c = ExperimentConfig::new(Command::OrigamiProbe);
    c.origami = Some(l_shape.clone());
    c.samples = Some(1000);
    c.seed = 1;
    c.assertions = vec![Assertion::absolute("failures", 0.0, 0.0)];
    out.push(entry("l-shape-minkowski-probe", "shortest cylinder of the three-square L under random g", c));

    let mut c = ExperimentConfig::new(Command::OrigamiTrace);
    c.origami = Some(l_shape);
    c.radius = Some(30.0);
    c.assertions = vec![Assertion::absolute("distinct_vectors", 2224.0, 0.0)];
    out.push(entry("l-shape-saddles", "saddle connections of the three-square L up to radius 30", c));

    out
}

pub fn registry_entry(name: &str) -> Option<RegistryEntry> {
    registry_list().into_iter().find(|e| e.name == name)
}
