//! Thin command-line wrapper over the sweep, oracle and bound modules.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use multbound::bounds;
use multbound::cohomology::{multiplier_type, DEFAULT_ORACLE_CAP};
use multbound::corpus::parse_entry_spec;
use multbound::group::group_profile;
use multbound::pc::DEFAULT_TABLE_CAP;
use multbound::sweep::{self, SweepOptions};

#[derive(Parser)]
#[command(name = "multbound", version, about = "Schur multiplier bounds on finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every bound and property checker over a corpus
    Sweep {
        /// `all` or a comma-separated list of family names
        #[arg(long, default_value = "all")]
        families: String,
        /// additional presentation files
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        /// skip builtin groups larger than this
        #[arg(long, default_value_t = 128)]
        max_order: u64,
        /// largest order handled by the cohomology oracle
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
        /// worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        /// write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// suppress the timestamp for byte-identical reruns
        #[arg(long)]
        reproducible: bool,
    },
    /// Print the multiplier type of one group
    Multiplier {
        /// `family(args)` or a presentation file path
        entry: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
    },
    /// Print every bound evaluated on one group
    Bounds {
        entry: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
    },
    /// Parse a presentation file and run the consistency checks
    Check { file: PathBuf },
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(3)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep {
            families,
            inputs,
            max_order,
            oracle_cap,
            jobs,
            format,
            out,
            reproducible,
        } => {
            let families = match families.as_str() {
                "all" => None,
                list => Some(list.split(',').map(|s| s.trim().to_string()).collect()),
            };
            let options = SweepOptions {
                families,
                inputs,
                max_order,
                oracle_cap,
                jobs,
                reproducible,
            };
            let report = match sweep::run_sweep(&options) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let rendered = match format.as_str() {
                "json" => sweep::render_json(&report),
                "csv" => sweep::render_csv(&report),
                other => return input_error(format!("unknown format `{other}`")),
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered) {
                        return input_error(format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::from(sweep::exit_code(&report) as u8)
        }
        Command::Multiplier { entry, oracle_cap } => {
            let entry = match parse_entry_spec(&entry) {
                Ok(e) => e,
                Err(e) => return input_error(e),
            };
            let g = match entry.presentation.materialize_table(DEFAULT_TABLE_CAP) {
                Ok(g) => g,
                Err(e) => return input_error(e),
            };
            let m = match multiplier_type(&g, oracle_cap) {
                Ok(m) => m,
                Err(e) => return input_error(e),
            };
            println!("group: {} (order {})", entry.id, g.order());
            println!("multiplier: {} (order {}^{})", m.ty, g.p(), m.order_log);
            for (j, h) in &m.levels {
                println!("  |H^2(G, Z/{}^{})| = {}^{}", g.p(), j, g.p(), h);
            }
            ExitCode::SUCCESS
        }
        Command::Bounds { entry, oracle_cap } => {
            let entry = match parse_entry_spec(&entry) {
                Ok(e) => e,
                Err(e) => return input_error(e),
            };
            let g = match entry.presentation.materialize_table(DEFAULT_TABLE_CAP) {
                Ok(g) => g,
                Err(e) => return input_error(e),
            };
            let profile = group_profile(&g);
            let oracle_log = if (g.order() as u64) <= oracle_cap {
                match multiplier_type(&g, oracle_cap) {
                    Ok(m) => Some(m.order_log),
                    Err(e) => return input_error(e),
                }
            } else {
                None
            };
            let report = bounds::check_report(&profile, oracle_log);
            println!("group: {} (order {})", entry.id, g.order());
            println!(
                "profile: p={} n={} k={} d={} c={} delta={} gamma={} t={}",
                profile.p,
                profile.n,
                profile.k,
                profile.d,
                profile.c,
                profile.delta,
                profile.gamma,
                profile.t
            );
            match oracle_log {
                Some(m) => println!("|M(G)| = {}^{m}", profile.p),
                None => println!("|M(G)| not computed (order above oracle cap)"),
            }
            let mut failed = false;
            for b in &report.bounds {
                let v = &b.value;
                let kind = match v.kind {
                    bounds::BoundKind::Upper => "upper",
                    bounds::BoundKind::Lower => "lower",
                };
                failed |= b.verdict == bounds::Verdict::Fail;
                let status = b.verdict.as_str();
                match v.reason {
                    Some(reason) if !v.applicable => {
                        println!("  {:<22} {kind:<5} {status:<8} ({reason})", v.name)
                    }
                    _ => println!(
                        "  {:<22} {kind:<5} {status:<8} exponent {}",
                        v.name, v.exponent
                    ),
                }
            }
            if let Some(d) = &report.dominance {
                failed |= !d.holds();
                println!("dominance: {}", if d.holds() { "pass" } else { "fail" });
            }
            if failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Check { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return input_error(format!("cannot read {}: {e}", file.display())),
            };
            let pres = match multbound::pc::parse_presentation(&text) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            match pres.consistency_check() {
                Ok(()) => {
                    println!(
                        "consistent: order {}^{} = {}",
                        pres.p,
                        pres.ngens,
                        (pres.p as u128).pow(pres.ngens as u32)
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(format!("inconsistent: {e}")),
            }
        }
    }
}
