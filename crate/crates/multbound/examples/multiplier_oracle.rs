//! Compute Schur multipliers with the cohomological oracle and compare
//! against the closed form for abelian groups.

use multbound::cohomology::{multiplier_type, DEFAULT_ORACLE_CAP};
use multbound::corpus::parse_entry_spec;
use multbound::linalg::{abelian_multiplier, AbelianType};
use multbound::pc::DEFAULT_TABLE_CAP;

fn oracle(spec: &str) {
    let entry = parse_entry_spec(spec).unwrap();
    let g = entry.presentation.materialize_table(DEFAULT_TABLE_CAP).unwrap();
    let m = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
    println!("M({}) = {} (order {}^{})", entry.id, m.ty, g.p(), m.order_log);
    for (j, h) in &m.levels {
        println!("  |H^2(G, Z/{}^{j})| = {}^{h}", g.p(), g.p());
    }
}

fn main() {
    // Nonabelian classics: the two extraspecial groups of order 8.
    oracle("dihedral(8)");
    oracle("quaternion(8)");
    oracle("heisenberg(3)");

    // For an abelian p-group of type (a1 >= a2 >= ...) the multiplier
    // has the closed form with a_j appearing j - 1 times.
    let ty = AbelianType::new(2, vec![2, 1, 1]);
    println!("closed form: M(Z4 x Z2 x Z2) = {}", abelian_multiplier(&ty));
    oracle("abelian(4, 2, 2)");
}
