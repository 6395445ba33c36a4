//! Build an experiment config, save it as JSON, run it, and run a registry entry.

use cusp_excursion::cli::{registry_entry, run, Assertion, Command, ExperimentConfig};

fn main() -> cusp_excursion::Result<()> {
    let mut config = ExperimentConfig::new(Command::VerifyAxiomatic).with_spec("sqrt:2/1")?;
    config.radius = Some(1e5);
    config.assertions = vec![Assertion::absolute("mu_hat", 2.0, 0.05)];
    let json = config.to_json();
    println!("{json}");

    let outcome = run(&ExperimentConfig::from_json(&json)?)?;
    println!("status {:?}, exit code {}", outcome.status, outcome.exit_code());
    for (k, v) in &outcome.metrics {
        println!("  {k} = {v}");
    }

    let entry = registry_entry("golden-markoff-sigma").expect("built-in entry");
    let outcome = run(&entry.config)?;
    println!("{}: {:?}", entry.name, outcome.status);
    Ok(())
}
