//! The master inequality relating |M(G)| to tensor products of central
//! sections, and the image sizes of the maps that sharpen it.
//!
//! For the Heisenberg group of order 27 the inequality is tight:
//! both sides equal 3^3.

use multbound::cohomology::{multiplier_type, DEFAULT_ORACLE_CAP};
use multbound::corpus::parse_entry_spec;
use multbound::ew::{ew_inequality, v_subgroup_log, PsiContext};
use multbound::pc::DEFAULT_TABLE_CAP;

fn main() {
    for spec in ["heisenberg(3)", "wreath_pp(3)", "free_class2_exp_p(3, 2)"] {
        let entry = parse_entry_spec(spec).unwrap();
        let g = entry.presentation.materialize_table(DEFAULT_TABLE_CAP).unwrap();
        let p = g.p();
        let m = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();

        let ctx = PsiContext::new(&g).unwrap();
        println!("{} (order {}, class {}):", entry.id, g.order(), ctx.class());
        for i in 2..=ctx.class() {
            let im = ctx.psi_image_log(i).unwrap();
            println!("  |Im Psi_{i}| = {p}^{im}");
        }

        let ineq = ew_inequality(&g, m.order_log).unwrap();
        println!(
            "  master inequality: {p}^{} <= {p}^{} <= {p}^{} ({})",
            ineq.lhs_log,
            ineq.rhs_log,
            ineq.rhs_relaxed_log,
            if ineq.lhs_log == ineq.rhs_log { "tight" } else { "strict" }
        );

        // For p odd, class 2 and G^p inside the derived subgroup, the
        // span of the elements x^p (x) x-bar has a closed-form order.
        match v_subgroup_log(&g) {
            Ok(v) => println!("  |V| = {p}^{v}"),
            Err(e) => println!("  V subgroup not defined here: {e}"),
        }
    }
}
