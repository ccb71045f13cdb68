//! Brute-force Schur multiplier oracle.
//!
//! `|H²(G, ℤ/pʲ)|` is computed from the normalized 2-cocycle condition
//! by exact elimination over ℤ/pʲ, and the abelian type of `M(G)` is
//! recovered from the level sweep `j = 1, 2, …` through the universal
//! coefficient factorisation `H²(G, A) ≅ Ext(G^ab, A) ⊕ Hom(M(G), A)`.

use serde::Serialize;
use thiserror::Error;

use crate::group::{self, TableGroup};
use crate::linalg::{AbelianType, SpanBuilder};

/// Default cap on `|G|` for oracle runs; covers all 2-groups up to 2^7,
/// 3-groups up to 3^4 and 5-groups up to 5^3.
pub const DEFAULT_ORACLE_CAP: u64 = 128;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("group order {order} exceeds oracle cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// The multiplier of one group, with the per-level cohomology sizes the
/// sweep went through.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplierResult {
    /// abelian type of `M(G)`
    pub ty: AbelianType,
    /// `log_p |M(G)|`
    pub order_log: u64,
    /// `(j, log_p |H²(G, ℤ/pʲ)|)` for each computed level
    pub levels: Vec<(u32, u64)>,
}

/// A small generating set, grown greedily over the element list.
fn greedy_generators(g: &TableGroup) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span = group::generated_subgroup(g, &[]);
    for x in 1..g.order() {
        if !span.contains(x) {
            gens.push(x);
            span = group::generated_subgroup(g, &gens);
            if span.order() == g.order() {
                break;
            }
        }
    }
    gens
}

/// `log_p |H²(G, ℤ/pʲ)|` by normalized 2-cocycle linear algebra.
///
/// Variables are `f(x, y)` for `x, y ≠ 1`; constraint rows are the
/// cocycle conditions `(x, y, z)` with `x, y` arbitrary and `z` in a
/// generating set: for a normalized cochain the condition at `(x, y,
/// zs)` follows from the conditions at `(·, ·, z)`, `(·, ·, s)` and
/// `(x, y, z)` (associativity induction on the word length of the last
/// entry), so the span of rows is unchanged. Triples containing the
/// identity hold automatically once `f(1, ·) = f(·, 1) = 0`.
/// `|H²| = |Z²| / |B²|` with both orders exact.
pub fn h2_size_log(g: &TableGroup, j: u32) -> u64 {
    let p = g.p();
    let n = g.order();
    if n == 1 {
        return 0;
    }
    let m = n - 1; // non-identity elements, indices 1..n
    let nvars = m * m;
    let var = |x: usize, y: usize| (x - 1) * m + (y - 1);
    let q = p.pow(j);
    let gens = greedy_generators(g);

    // span of the cocycle constraint rows
    let mut constraints = SpanBuilder::new(p, j, nvars);
    let mut row: Vec<(usize, i64)> = Vec::with_capacity(4);
    for x in 1..n {
        for y in 1..n {
            let xy = g.mul(x, y);
            for &z in &gens {
                let yz = g.mul(y, z);
                row.clear();
                row.push((var(x, y), 1));
                if xy != 0 {
                    row.push((var(xy, z), 1));
                }
                row.push((var(y, z), -1));
                if yz != 0 {
                    row.push((var(x, yz), -1));
                }
                row.sort_unstable_by_key(|&(c, _)| c);
                // merge duplicate variables
                let mut merged: Vec<(usize, u64)> = Vec::with_capacity(4);
                for &(c, coef) in &row {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => {
                            last.1 = (last.1 + coef.rem_euclid(q as i64) as u64) % q;
                        }
                        _ => merged.push((c, coef.rem_euclid(q as i64) as u64)),
                    }
                }
                merged.retain(|&(_, v)| v != 0);
                if !merged.is_empty() {
                    constraints.add_row(&merged);
                }
            }
        }
    }
    let z2_log = j as u64 * nvars as u64 - constraints.span_log();

    // span of the coboundaries of normalized 1-cochains
    let mut coboundaries = SpanBuilder::new(p, j, nvars);
    for gen in 1..n {
        // δ(e_gen)(x, y) = [x = gen] + [y = gen] - [xy = gen]
        let mut entries: Vec<(usize, i64)> = Vec::new();
        for x in 1..n {
            for y in 1..n {
                let mut coef = 0i64;
                if x == gen {
                    coef += 1;
                }
                if y == gen {
                    coef += 1;
                }
                if g.mul(x, y) == gen {
                    coef -= 1;
                }
                if coef != 0 {
                    entries.push((var(x, y), coef));
                }
            }
        }
        let reduced: Vec<(usize, u64)> = entries
            .into_iter()
            .filter_map(|(c, v)| {
                let v = v.rem_euclid(q as i64) as u64;
                (v != 0).then_some((c, v))
            })
            .collect();
        coboundaries.add_row(&reduced);
    }
    let b2_log = coboundaries.span_log();

    z2_log - b2_log
}

/// Compute the abelian type of `M(G)` by sweeping coefficient levels.
pub fn multiplier_type(g: &TableGroup, cap: u64) -> Result<MultiplierResult, CohomologyError> {
    let order = g.order() as u64;
    if order > cap {
        return Err(CohomologyError::CapExceeded { order, cap });
    }
    let p = g.p();
    let e = g.log_order().max(1);

    let gab = {
        let series = group::lower_central_series(g);
        let gamma2 = &series[1.min(series.len() - 1)];
        if series.len() == 1 {
            // trivial group
            AbelianType::trivial(p)
        } else {
            let (q, _) = group::quotient(g, gamma2).expect("γ2 is normal");
            group::abelian_invariants(&q).expect("G/γ2 is abelian")
        }
    };

    // r_j = log_p |Hom(M(G), ℤ/pʲ)|, from h_j after dividing out the
    // Ext(G^ab, ·) closed form
    let mut levels = Vec::new();
    let mut r: Vec<u64> = vec![0];
    let mut j = 0;
    while j < e {
        j += 1;
        let h_log = h2_size_log(g, j);
        levels.push((j, h_log));
        let ext_log: u64 = gab.exps().iter().map(|&a| a.min(j) as u64).sum();
        if h_log < ext_log {
            return Err(CohomologyError::Inconsistent(format!(
                "|H²| at level {j} smaller than the Ext closed form ({h_log} < {ext_log})"
            )));
        }
        let rj = h_log - ext_log;
        if rj < *r.last().unwrap() {
            return Err(CohomologyError::Inconsistent(format!(
                "non-monotone Hom size sequence at level {j}"
            )));
        }
        r.push(rj);
        let len = r.len();
        if r[len - 1] == r[len - 2] {
            break; // no invariant of order >= p^j; higher levels repeat
        }
    }

    // counts c_j = #{m_i >= j} = r_j - r_{j-1}
    let mut exps = Vec::new();
    for jj in (1..r.len()).rev() {
        let at_least = r[jj] - r[jj - 1];
        let at_least_next = if jj + 1 < r.len() { r[jj + 1] - r[jj] } else { 0 };
        for _ in 0..(at_least - at_least_next) {
            exps.push(jj as u32);
        }
    }
    let ty = AbelianType::new(p, exps);
    let order_log = ty.size_log();
    Ok(MultiplierResult { ty, order_log, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::direct_product;
    use crate::linalg::{abelian_multiplier, tensor_type};
    use crate::pc::{parse_presentation, DEFAULT_TABLE_CAP};

    fn table(text: &str) -> TableGroup {
        parse_presentation(text)
            .unwrap()
            .materialize_table(DEFAULT_TABLE_CAP)
            .unwrap()
    }

    /// Fully independent oracle: enumerate every normalized 2-cochain
    /// and count cocycles and coboundaries directly.  Only usable for
    /// tiny `|G|^2 · j`.
    fn h2_brute(g: &TableGroup, j: u32) -> u64 {
        let p = g.p();
        let q = p.pow(j);
        let n = g.order();
        let m = n - 1;
        let nvars = m * m;
        let total = (q as u128).pow(nvars as u32);
        assert!(total <= 1 << 22, "brute force too large");
        let decode = |mut code: u128| -> Vec<u64> {
            let mut f = vec![0u64; nvars];
            for slot in f.iter_mut() {
                *slot = (code % q as u128) as u64;
                code /= q as u128;
            }
            f
        };
        let value = |f: &[u64], x: usize, y: usize| -> u64 {
            if x == 0 || y == 0 {
                0
            } else {
                f[(x - 1) * m + (y - 1)]
            }
        };
        let is_cocycle = |f: &[u64]| -> bool {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = value(f, x, y) + value(f, g.mul(x, y), z);
                        let rhs = value(f, y, z) + value(f, x, g.mul(y, z));
                        if lhs % q != rhs % q {
                            return false;
                        }
                    }
                }
            }
            true
        };
        let z2 = (0..total).filter(|&code| is_cocycle(&decode(code))).count() as u64;
        // coboundaries: image of normalized 1-cochains
        use std::collections::HashSet;
        let mut b2: HashSet<Vec<u64>> = HashSet::new();
        let hcount = (q as u128).pow(m as u32);
        for mut code in 0..hcount {
            let mut h = vec![0u64; n];
            for x in 1..n {
                h[x] = (code % q as u128) as u64;
                code /= q as u128;
            }
            let mut f = vec![0u64; nvars];
            for x in 1..n {
                for y in 1..n {
                    f[(x - 1) * m + (y - 1)] = (h[x] + h[y] + q - h[g.mul(x, y)] % q) % q;
                }
            }
            b2.insert(f);
        }
        z2 / b2.len() as u64
    }

    #[test]
    fn h2_trivial_group() {
        let g = TableGroup::trivial(3);
        assert_eq!(h2_size_log(&g, 1), 0);
    }

    #[test]
    fn h2_cyclic_matches_brute_force() {
        for (text, j) in [("p 2 / n 1", 1), ("p 3 / n 1", 1), ("p 2 / n 1", 2)] {
            let g = table(text);
            let p = g.p();
            let brute = h2_brute(&g, j);
            let fast = (p as u128).pow(h2_size_log(&g, j) as u32);
            assert_eq!(fast, brute as u128, "{text} at level {j}");
        }
        // |H²(Z_p, Z/p)| = p
        let g = table("p 3 / n 1");
        assert_eq!(h2_size_log(&g, 1), 1);
    }

    #[test]
    fn h2_klein_four_matches_brute_force() {
        let g = table("p 2 / n 2");
        assert_eq!(2u128.pow(h2_size_log(&g, 1) as u32), 8);
        assert_eq!(h2_brute(&g, 1), 8);
    }

    #[test]
    fn multiplier_dihedral8_and_quaternion8() {
        let d8 = table("p 2 / n 3 / pow 2 : g3 1 / comm 2 1 : g3 1");
        let r = multiplier_type(&d8, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(r.ty.exps(), &[1]);
        assert_eq!(r.order_log, 1);

        let q8 = table("p 2 / n 3 / pow 1 : g3 1 / pow 2 : g3 1 / comm 2 1 : g3 1");
        let r = multiplier_type(&q8, DEFAULT_ORACLE_CAP).unwrap();
        assert!(r.ty.is_trivial());
    }

    #[test]
    fn multiplier_elementary_abelian_27() {
        let g = table("p 3 / n 3");
        let r = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(r.order_log, 3);
        assert!(r.ty.is_elementary());
        let closed = abelian_multiplier(&crate::group::abelian_invariants(&g).unwrap());
        assert_eq!(r.ty, closed);
    }

    #[test]
    fn multiplier_z4_x_z2() {
        let g = table(&corpus::abelian_presentation_text(2, &[2, 1]));
        let r = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(r.ty.exps(), &[1]);
    }

    #[test]
    fn multiplier_agrees_with_closed_form_on_small_abelians() {
        let cases: Vec<(u64, Vec<u32>)> = vec![
            (2, vec![1]),
            (2, vec![2]),
            (2, vec![1, 1]),
            (2, vec![2, 1]),
            (2, vec![1, 1, 1]),
            (2, vec![3, 1]),
            (3, vec![1, 1]),
            (3, vec![2, 1]),
            (5, vec![1, 1]),
        ];
        for (p, exps) in cases {
            let g = table(&corpus::abelian_presentation_text(p, &exps));
            let r = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
            let closed = abelian_multiplier(&AbelianType::new(p, exps.clone()));
            assert_eq!(r.ty, closed, "p={p} exps={exps:?}");
        }
    }

    #[test]
    fn h2_invariant_under_relabeling() {
        let g = table("p 2 / n 3 / pow 2 : g3 1 / comm 2 1 : g3 1");
        // a deterministic non-trivial permutation fixing the identity
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm[1..].rotate_left(3);
        let h = g.relabel(&perm);
        h.check_group_axioms().unwrap();
        for j in 1..=2 {
            assert_eq!(h2_size_log(&g, j), h2_size_log(&h, j));
        }
    }

    #[test]
    fn kunneth_with_cyclic_factor() {
        // |M(G x Z_p)| = |M(G)| · |G^ab ⊗ Z_p| for G = D8 and Heisenberg
        for (text, ptext) in [
            ("p 2 / n 3 / pow 2 : g3 1 / comm 2 1 : g3 1", "p 2 / n 1"),
            ("p 3 / n 3 / comm 2 1 : g3 1", "p 3 / n 1"),
        ] {
            let g = table(text);
            let zp = table(ptext);
            let prod = direct_product(&g, &zp);
            let m_prod = multiplier_type(&prod, DEFAULT_ORACLE_CAP).unwrap();
            let m_g = multiplier_type(&g, DEFAULT_ORACLE_CAP).unwrap();
            let series = crate::group::lower_central_series(&g);
            let (q, _) = crate::group::quotient(&g, &series[1]).unwrap();
            let gab = crate::group::abelian_invariants(&q).unwrap();
            let cyclic = AbelianType::new(g.p(), vec![1]);
            let tensor = tensor_type(&gab, &cyclic).unwrap();
            assert_eq!(
                m_prod.order_log,
                m_g.order_log + tensor.size_log(),
                "{text}"
            );
        }
    }

    #[test]
    fn oracle_cap_enforced() {
        let g = table("p 3 / n 3");
        assert!(matches!(
            multiplier_type(&g, 10),
            Err(CohomologyError::CapExceeded { order: 27, cap: 10 })
        ));
    }
}
