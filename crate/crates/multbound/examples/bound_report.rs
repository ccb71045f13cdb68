//! Evaluate every multiplier bound on one group and check each against
//! the oracle value.

use multbound::bounds::{check_report, BoundKind};
use multbound::cohomology::{multiplier_type, DEFAULT_ORACLE_CAP};
use multbound::corpus::parse_entry_spec;
use multbound::group::group_profile;
use multbound::pc::DEFAULT_TABLE_CAP;

fn main() {
    for spec in ["extraspecial(3, 1, p2)", "dihedral(16)"] {
        report_on(spec);
    }
}

fn report_on(spec: &str) {
    let entry = parse_entry_spec(spec).unwrap();
    let g = entry.presentation.materialize_table(DEFAULT_TABLE_CAP).unwrap();
    let profile = group_profile(&g);
    let m = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
    println!("{}: order {}, |M(G)| = {}^{}", entry.id, g.order(), profile.p, m.order_log);

    let report = check_report(&profile, Some(m.order_log));
    for cb in &report.bounds {
        let v = &cb.value;
        let kind = match v.kind {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
        };
        match v.reason {
            Some(reason) if !v.applicable => {
                println!("  {:<22} {kind:<5} {:<8} ({reason})", v.name, cb.verdict.as_str())
            }
            _ => println!(
                "  {:<22} {kind:<5} {:<8} exponent {}",
                v.name,
                cb.verdict.as_str(),
                v.exponent
            ),
        }
    }
    if let Some(d) = &report.dominance {
        println!("dominance orderings hold: {}", d.holds());
    }
}
