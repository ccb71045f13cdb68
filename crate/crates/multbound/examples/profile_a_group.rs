//! Compute the structural profile of a few groups: the invariants
//! n, k, d, c, delta, gamma, t that parameterise every bound.

use multbound::corpus::builtin_family;
use multbound::group::group_profile;
use multbound::pc::DEFAULT_TABLE_CAP;

fn show(spec: (&str, &[&str])) {
    let entry = builtin_family(spec.0, spec.1).unwrap();
    let g = entry.presentation.materialize_table(DEFAULT_TABLE_CAP).unwrap();
    let pr = group_profile(&g);
    println!("{} (order {}):", entry.id, g.order());
    println!(
        "  n={} k={} d={} c={} delta={} gamma={} t={}",
        pr.n, pr.k, pr.d, pr.c, pr.delta, pr.gamma, pr.t
    );
    let mut flags = Vec::new();
    if pr.is_abelian {
        flags.push("abelian");
    }
    if pr.is_special {
        flags.push("special");
    }
    if pr.is_maximal_class {
        flags.push("maximal class");
    }
    if pr.has_gp_in_gamma2 {
        flags.push("G^p inside derived subgroup");
    }
    println!("  flags: {}", if flags.is_empty() { "none".into() } else { flags.join(", ") });
}

fn main() {
    show(("dihedral", &["16"]));
    show(("heisenberg", &["3"]));
    show(("extraspecial", &["3", "1", "p2"]));
    show(("wreath_pp", &["3"]));
    show(("free_class2_exp_p", &["5", "2"]));
}
