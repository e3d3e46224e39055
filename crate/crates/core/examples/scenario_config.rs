//! Scenario file to run directory to report, the same path the CLI takes.
//!
//! cargo run --example scenario_config

use reulab::lab::{execute, parse_config, report};

const SCENARIO: &str = "\
[scenario]
name = tg-small
kind = single-run

[solver]
n = 16
omega = 20
dt = 5e-3
t_end = 0.5
snapshot_stride = 25

[data]
generator = taylor-green
amplitude = 1.5
";

fn main() -> reulab::Result<()> {
    let mut spec = parse_config(SCENARIO)?;
    spec.output = std::env::temp_dir().join("reulab_scenario_example");
    println!("--- persisted config ---\n{}", spec.to_config_text());

    let run = execute(&spec, true)?;
    println!("--- report.txt ---\n{}", run.report);
    let checks = report(&run.dir)?;
    println!("--- report ---\n{}", checks.text);
    println!("all checks pass: {}", checks.passed());
    Ok(())
}
