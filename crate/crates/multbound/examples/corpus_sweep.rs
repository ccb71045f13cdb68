//! Run the full verification sweep over the builtin corpus and print
//! the summary, as the `multbound sweep` subcommand does.

use multbound::sweep::{exit_code, run_sweep, SweepOptions};

fn main() {
    let options = SweepOptions {
        max_order: 64,
        reproducible: true,
        ..SweepOptions::default()
    };
    let report = run_sweep(&options).unwrap();

    println!(
        "{} groups: {} pass, {} fail, {} vacuous, {} skipped, {} errors",
        report.summary.groups,
        report.summary.pass,
        report.summary.fail,
        report.summary.vacuous,
        report.summary.skipped,
        report.summary.errors
    );
    for g in &report.groups {
        let m = g
            .multiplier
            .as_ref()
            .map(|m| format!("M = {}", m.type_display))
            .unwrap_or_else(|| "M not computed".to_string());
        let failures = g
            .bounds
            .iter()
            .map(|b| b.verdict.as_str())
            .chain(g.properties.iter().map(|p| p.verdict.as_str()))
            .filter(|&v| v == "fail")
            .count();
        println!("  {:<28} order {:>3}  {m:<16} failures: {failures}", g.id, g.order.unwrap_or(0));
    }
    std::process::exit(exit_code(&report));
}
