//! Exact linear algebra over ℤ and ℤ/pᵉ, plus closed forms for tensor,
//! hom, ext and the Schur multiplier of abelian p-groups.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
}

/// A finite abelian p-group `⊕ᵢ ℤ_{p^aᵢ}` as its descending exponent
/// list.  The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianType {
    p: u64,
    exps: Vec<u32>,
}

impl AbelianType {
    pub fn new(p: u64, mut exps: Vec<u32>) -> Self {
        assert!(exps.iter().all(|&a| a >= 1), "exponents must be positive");
        exps.sort_unstable_by(|a, b| b.cmp(a));
        AbelianType { p, exps }
    }

    pub fn trivial(p: u64) -> Self {
        AbelianType { p, exps: Vec::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.is_empty()
    }

    /// `log_p` of the group order.
    pub fn size_log(&self) -> u64 {
        self.exps.iter().map(|&a| a as u64).sum()
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.size_log() as u32)
    }

    pub fn is_elementary(&self) -> bool {
        self.exps.iter().all(|&a| a == 1)
    }

    /// Exponent of the group as a power of p (0 for trivial).
    pub fn exponent_log(&self) -> u32 {
        self.exps.first().copied().unwrap_or(0)
    }
}

impl std::fmt::Display for AbelianType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&a| format!("Z{}", (self.p as u128).pow(a)))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// `A ⊗ B` via the closed form `ℤ_{p^a} ⊗ ℤ_{p^b} = ℤ_{p^min(a,b)}`
/// extended bilinearly.
pub fn tensor_type(a: &AbelianType, b: &AbelianType) -> Result<AbelianType, LinalgError> {
    if a.p != b.p {
        return Err(LinalgError::PrimeMismatch(a.p, b.p));
    }
    let mut exps = Vec::with_capacity(a.exps.len() * b.exps.len());
    for &u in &a.exps {
        for &v in &b.exps {
            exps.push(u.min(v));
        }
    }
    Ok(AbelianType::new(a.p, exps))
}

/// `(Hom(A, ℤ/pʲ), Ext(A, ℤ/pʲ))`; both are `⊕ᵢ ℤ_{p^min(aᵢ, j)}`.
pub fn hom_ext_type(a: &AbelianType, j: u32) -> (AbelianType, AbelianType) {
    assert!(j >= 1);
    let exps: Vec<u32> = a.exps.iter().map(|&u| u.min(j)).collect();
    (AbelianType::new(a.p, exps.clone()), AbelianType::new(a.p, exps))
}

/// Schur multiplier of an abelian p-group:
/// `M(⊕ᵢ ℤ_{p^aᵢ}) = ⊕_{i<j} ℤ_{p^min(aᵢ,aⱼ)}`.
pub fn abelian_multiplier(a: &AbelianType) -> AbelianType {
    let mut exps = Vec::new();
    for i in 0..a.exps.len() {
        for j in i + 1..a.exps.len() {
            exps.push(a.exps[i].min(a.exps[j]));
        }
    }
    AbelianType::new(a.p, exps)
}

// ---------------------------------------------------------------------
// Smith normal form over the integers

fn abs_i128(x: i128) -> i128 {
    if x < 0 {
        -x
    } else {
        x
    }
}

/// Invariant factors `d1 | d2 | …` of an integer matrix (non-negative,
/// zeros trailing).  The matrix is given as rows.
pub fn smith_normal_form(mat: &[Vec<i128>]) -> Vec<i128> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<i128>> = mat.to_vec();
    for r in &m {
        assert_eq!(r.len(), cols, "ragged matrix");
    }

    let dim = rows.min(cols);
    let mut diag = Vec::with_capacity(dim);
    let mut top = 0usize;
    while top < dim {
        // find a nonzero entry with minimal absolute value in the
        // remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if m[i][j] != 0 {
                    match pivot {
                        Some((pi, pj)) if abs_i128(m[pi][pj]) <= abs_i128(m[i][j]) => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }
        // clear row and column with euclidean steps; repeat until clean
        loop {
            let mut dirty = false;
            for i in top + 1..rows {
                if m[i][top] != 0 {
                    let q = m[i][top].div_euclid(m[top][top]);
                    for j in top..cols {
                        m[i][j] -= q.checked_mul(m[top][j]).expect("overflow in smith form");
                    }
                    if m[i][top] != 0 {
                        m.swap(top, i);
                        dirty = true;
                    }
                }
            }
            for j in top + 1..cols {
                if m[top][j] != 0 {
                    let q = m[top][j].div_euclid(m[top][top]);
                    for i in top..rows {
                        let sub = q.checked_mul(m[i][top]).expect("overflow in smith form");
                        m[i][j] -= sub;
                    }
                    if m[top][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(top, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility: pivot must divide every remaining entry
        let mut fixed = false;
        'outer: for i in top + 1..rows {
            for j in top + 1..cols {
                if m[i][j] % m[top][top] != 0 {
                    // fold the offending row into the pivot row and redo
                    for jj in top..cols {
                        let add = m[i][jj];
                        m[top][jj] += add;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        diag.push(abs_i128(m[top][top]));
        top += 1;
    }
    while diag.len() < dim {
        diag.push(0);
    }
    diag
}

// ---------------------------------------------------------------------
// Row spans over ℤ/pᵉ (Howell-style echelon)

fn p_val(p: u64, x: u64, e: u32) -> u32 {
    if x == 0 {
        return e;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    // extended euclid; a must be a unit mod q
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let d = r0 / r1;
        (r0, r1) = (r1, r0 - d * r1);
        (t0, t1) = (t1, t0 - d * t1);
    }
    assert_eq!(r0, 1, "{a} is not a unit mod {q}");
    t0.rem_euclid(q as i128) as u64
}

#[derive(Debug, Clone)]
struct PivotRow {
    lead_val: u32,
    /// sorted by column; the first entry is the lead, exactly p^lead_val
    entries: Vec<(usize, u64)>,
}

/// Incremental row-span accumulator over `(ℤ/p^e)^ncols`.
///
/// Rows are added one at a time and reduced to an echelon set whose
/// leading entries are powers of p; shadow rows `p^(e-v) * row` are fed
/// back so the set is closed under annihilators and the span order is
/// exactly `∏ p^(e - v)` over the pivots. Rows are not fully reduced
/// against each other; only the echelon shape and shadow closure are
/// needed for the order count, and the reduced form is quadratically
/// more expensive on the near-full-rank cocycle systems.
pub struct SpanBuilder {
    p: u64,
    e: u32,
    q: u64,
    ncols: usize,
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<PivotRow>,
    scratch: Vec<u64>,
}

impl SpanBuilder {
    pub fn new(p: u64, e: u32, ncols: usize) -> Self {
        let q = p.checked_pow(e).expect("modulus overflow");
        assert!(e >= 1);
        SpanBuilder {
            p,
            e,
            q,
            ncols,
            pivot_of_col: vec![None; ncols],
            rows: Vec::new(),
            scratch: vec![0; ncols],
        }
    }

    pub fn add_row(&mut self, entries: &[(usize, u64)]) {
        debug_assert!(entries.iter().all(|&(c, _)| c < self.ncols));
        let mut queue: Vec<Vec<(usize, u64)>> = vec![entries
            .iter()
            .filter_map(|&(c, v)| {
                let v = v % self.q;
                (v != 0).then_some((c, v))
            })
            .collect()];
        while let Some(row) = queue.pop() {
            self.reduce_and_insert(row, &mut queue);
        }
    }

    fn reduce_and_insert(&mut self, row: Vec<(usize, u64)>, queue: &mut Vec<Vec<(usize, u64)>>) {
        // load into dense scratch
        let mut support: Vec<usize> = Vec::with_capacity(row.len() * 4);
        for (c, v) in row {
            if self.scratch[c] == 0 {
                support.push(c);
            }
            self.scratch[c] = (self.scratch[c] + v) % self.q;
        }
        support.sort_unstable();

        let mut install_col: Option<usize> = None;
        let mut i = 0;
        while i < support.len() {
            let c = support[i];
            i += 1;
            let v = self.scratch[c];
            if v == 0 {
                continue;
            }
            if install_col.is_some_and(|ic| ic == c) {
                continue;
            }
            match self.pivot_of_col[c] {
                Some(r) => {
                    let lead_val = self.rows[r].lead_val;
                    let vr = p_val(self.p, v, self.e);
                    if vr >= lead_val {
                        // eliminate with the pivot
                        let coeff = v / self.p.pow(lead_val);
                        let coeff = (self.q - coeff) % self.q;
                        let pivot_entries = self.rows[r].entries.clone();
                        for (pc, pv) in pivot_entries {
                            let add = (pv as u128 * coeff as u128 % self.q as u128) as u64;
                            if add == 0 {
                                continue;
                            }
                            let old = self.scratch[pc];
                            let new = ((old as u128 + add as u128) % self.q as u128) as u64;
                            if old == 0 && new != 0 {
                                // keep ascending processing order
                                let pos = support[i..].partition_point(|&x| x < pc) + i;
                                if pos == support.len() || support[pos] != pc {
                                    support.insert(pos, pc);
                                }
                            }
                            self.scratch[pc] = new;
                        }
                        debug_assert_eq!(self.scratch[c], 0);
                    } else {
                        // incoming row is a better pivot: swap
                        if install_col.is_none() {
                            let old = std::mem::replace(
                                &mut self.rows[r],
                                PivotRow { lead_val: 0, entries: Vec::new() },
                            );
                            queue.push(old.entries);
                            install_col = Some(c);
                            // finalized below once the remaining columns
                            // have been reduced where possible
                        }
                        // when install_col is already set (further left),
                        // this column simply stays in the installed row
                    }
                }
                None => {
                    if install_col.is_none() {
                        self.rows.push(PivotRow { lead_val: 0, entries: Vec::new() });
                        self.pivot_of_col[c] = Some(self.rows.len() - 1);
                        install_col = Some(c);
                    }
                }
            }
        }

        let Some(c) = install_col else {
            // row reduced to zero
            for s in support {
                self.scratch[s] = 0;
            }
            return;
        };

        // normalize: scale so the lead entry is exactly p^v
        let lead = self.scratch[c];
        debug_assert!(lead != 0);
        let v = p_val(self.p, lead, self.e);
        let unit = lead / self.p.pow(v);
        let unit_inv = mod_inverse(unit, self.q);
        let mut entries: Vec<(usize, u64)> = Vec::new();
        for s in support {
            let x = self.scratch[s];
            self.scratch[s] = 0;
            if x != 0 {
                debug_assert!(s >= c);
                let scaled = (x as u128 * unit_inv as u128 % self.q as u128) as u64;
                if scaled != 0 {
                    entries.push((s, scaled));
                }
            }
        }
        let r = self.pivot_of_col[c].unwrap();
        self.rows[r] = PivotRow { lead_val: v, entries: entries.clone() };

        // Howell completion: the annihilator shadow of a non-unit lead
        if v > 0 {
            let shift = self.p.pow(self.e - v);
            let shadow: Vec<(usize, u64)> = entries
                .iter()
                .filter_map(|&(col, x)| {
                    let y = (x as u128 * shift as u128 % self.q as u128) as u64;
                    (y != 0).then_some((col, y))
                })
                .collect();
            if !shadow.is_empty() {
                queue.push(shadow);
            }
        }

    }

    /// `log_p` of the order of the row span.
    pub fn span_log(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| (self.e - r.lead_val) as u64)
            .sum()
    }

    pub fn span_size(&self) -> u128 {
        (self.p as u128).pow(self.span_log() as u32)
    }
}

/// Order of the row span of a dense matrix over ℤ/pᵉ.
pub fn span_size_mod(p: u64, e: u32, rows: &[Vec<u64>]) -> u128 {
    let ncols = rows.first().map_or(0, |r| r.len());
    if ncols == 0 {
        return 1;
    }
    let mut sb = SpanBuilder::new(p, e, ncols);
    for row in rows {
        let entries: Vec<(usize, u64)> = row.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
        sb.add_row(&entries);
    }
    sb.span_size()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn type_display_and_size() {
        let a = AbelianType::new(3, vec![1, 2]);
        assert_eq!(a.exps(), &[2, 1]);
        assert_eq!(a.size(), 27);
        assert_eq!(a.to_string(), "Z9 x Z3");
        assert_eq!(AbelianType::trivial(2).to_string(), "1");
    }

    #[test]
    fn tensor_examples() {
        let p3 = |e: Vec<u32>| AbelianType::new(3, e);
        let trivial = AbelianType::trivial(3);
        assert!(tensor_type(&trivial, &p3(vec![2, 1])).unwrap().is_trivial());
        // [p] ⊗ [p, p] = [p, p]
        let t = tensor_type(&p3(vec![1]), &p3(vec![1, 1])).unwrap();
        assert_eq!(t.exps(), &[1, 1]);
        // [p^2] ⊗ [p] = [p]
        let t = tensor_type(&p3(vec![2]), &p3(vec![1])).unwrap();
        assert_eq!(t.exps(), &[1]);
        assert!(tensor_type(&p3(vec![1]), &AbelianType::trivial(5)).is_err());
    }

    /// Brute-force order of the image of the canonical bilinear pairing
    /// of two abelian p-groups given as exponent vectors: the subgroup
    /// of ⊕ Z_{p^min} generated by all coordinate products.
    fn tensor_order_brute(p: u64, a: &[u32], b: &[u32]) -> u128 {
        let e = a
            .iter()
            .chain(b.iter())
            .copied()
            .max()
            .unwrap_or(1);
        let ncols = a.len() * b.len();
        if ncols == 0 {
            return 1;
        }
        let mut sb = SpanBuilder::new(p, e, ncols);
        // generators x_u ⊗ y_v for unit vectors suffice, but to stay
        // independent we enumerate all pairs of group elements
        let enumerate = |exps: &[u32]| -> Vec<Vec<u64>> {
            let mut out = vec![vec![]];
            for &ex in exps {
                let m = p.pow(ex);
                out = out
                    .into_iter()
                    .flat_map(|v: Vec<u64>| {
                        (0..m).map(move |c| {
                            let mut w = v.clone();
                            w.push(c);
                            w
                        })
                    })
                    .collect();
            }
            out
        };
        for x in enumerate(a) {
            for y in enumerate(b) {
                let mut row = Vec::new();
                for (u, &xu) in x.iter().enumerate() {
                    for (v, &yv) in y.iter().enumerate() {
                        let m = a[u].min(b[v]);
                        // embed Z_{p^m} into Z_{p^e} scaled by p^(e-m)
                        let val = (xu * yv % p.pow(m)) * p.pow(e - m);
                        row.push((u * b.len() + v, val % p.pow(e)));
                    }
                }
                sb.add_row(&row);
            }
        }
        sb.span_size()
    }

    #[test]
    fn tensor_matches_brute_force_bilinear_span() {
        let types: Vec<(u64, Vec<u32>)> = vec![
            (2, vec![]),
            (2, vec![1]),
            (2, vec![2]),
            (2, vec![1, 1]),
            (2, vec![2, 1]),
            (2, vec![3]),
            (3, vec![1]),
            (3, vec![2]),
            (3, vec![1, 1]),
            (3, vec![2, 1]),
        ];
        for (p, a) in &types {
            for (p2, b) in &types {
                if p != p2 {
                    continue;
                }
                let ta = AbelianType::new(*p, a.clone());
                let tb = AbelianType::new(*p, b.clone());
                if ta.size() > 81 || tb.size() > 81 {
                    continue;
                }
                let closed = tensor_type(&ta, &tb).unwrap().size();
                assert_eq!(closed, tensor_order_brute(*p, a, b), "{ta} ⊗ {tb}");
            }
        }
    }

    #[test]
    fn tensor_symmetry() {
        let a = AbelianType::new(2, vec![3, 1]);
        let b = AbelianType::new(2, vec![2, 2, 1]);
        assert_eq!(tensor_type(&a, &b).unwrap(), tensor_type(&b, &a).unwrap());
    }

    #[test]
    fn hom_ext_examples() {
        let (h, e) = hom_ext_type(&AbelianType::trivial(2), 3);
        assert!(h.is_trivial() && e.is_trivial());
        let (h, e) = hom_ext_type(&AbelianType::new(3, vec![2]), 1);
        assert_eq!(h.exps(), &[1]);
        assert_eq!(e.exps(), &[1]);
        let (h, e) = hom_ext_type(&AbelianType::new(2, vec![1, 1]), 2);
        assert_eq!(h.exps(), &[1, 1]);
        assert_eq!(e.exps(), &[1, 1]);
    }

    #[test]
    fn hom_matches_enumeration_z2_into_z4() {
        // Hom(Z2 ⊕ Z2, Z4): each generator can map to an element killed
        // by 2, i.e. {0, 2} — four homomorphisms, type [2, 2] mod 2^1
        let count = {
            let mut c = 0u32;
            for a in 0..4u32 {
                for b in 0..4u32 {
                    if (2 * a) % 4 == 0 && (2 * b) % 4 == 0 {
                        c += 1;
                    }
                }
            }
            c
        };
        let (h, _) = hom_ext_type(&AbelianType::new(2, vec![1, 1]), 2);
        assert_eq!(h.size(), count as u128);
    }

    #[test]
    fn multiplier_examples() {
        assert!(abelian_multiplier(&AbelianType::new(5, vec![3])).is_trivial());
        let m = abelian_multiplier(&AbelianType::new(3, vec![1, 1, 1]));
        assert_eq!(m.size(), 27);
        assert!(m.is_elementary());
        let m = abelian_multiplier(&AbelianType::new(2, vec![2, 1]));
        assert_eq!(m.exps(), &[1]);
    }

    #[test]
    fn multiplier_elementary_rank_d() {
        for d in 1..6u32 {
            let a = AbelianType::new(2, vec![1; d as usize]);
            assert_eq!(abelian_multiplier(&a).size_log(), (d * (d - 1) / 2) as u64);
        }
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_normal_form(&[vec![1]]), vec![1]);
        assert_eq!(smith_normal_form(&[vec![0]]), vec![0]);
        assert_eq!(smith_normal_form(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn smith_rectangular() {
        assert_eq!(smith_normal_form(&[vec![2, 4, 4]]), vec![2]);
        assert_eq!(
            smith_normal_form(&[vec![2, 0], vec![0, 2], vec![2, 2]]),
            vec![2, 2]
        );
    }

    proptest! {
        #[test]
        fn smith_divisibility_and_unimodular_invariance(
            entries in proptest::collection::vec(-6i128..=6, 9),
            ops in proptest::collection::vec((0usize..3, 0usize..3, -2i128..=2), 0..8),
        ) {
            let m: Vec<Vec<i128>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let d = smith_normal_form(&m);
            for w in d.windows(2) {
                prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
            }
            // random unimodular row and column operations preserve the factors
            let mut m2 = m.clone();
            for &(i, j, c) in &ops {
                if i == j { continue; }
                for col in 0..3 {
                    let add = c * m2[j][col];
                    m2[i][col] += add;
                }
                for row in 0..3 {
                    let add = c * m2[row][i];
                    m2[row][j] += add;
                }
            }
            prop_assert_eq!(smith_normal_form(&m2), d);
        }
    }

    /// Closure of the subgroup generated by rows, by enumeration.
    fn span_brute(q: u64, rows: &[Vec<u64>]) -> usize {
        use std::collections::HashSet;
        let ncols = rows[0].len();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        seen.insert(vec![0; ncols]);
        let mut queue: Vec<Vec<u64>> = vec![vec![0; ncols]];
        while let Some(v) = queue.pop() {
            for r in rows {
                let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % q).collect();
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_size_mod(3, 2, &[vec![0, 0]]), 1);
        // identity k x k mod p
        assert_eq!(span_size_mod(5, 1, &[vec![1, 0], vec![0, 1]]), 25);
        // rows {(1,0), (0,2)} mod 4 span a subgroup of order 8
        let rows = vec![vec![1, 0], vec![0, 2]];
        assert_eq!(span_size_mod(2, 2, &rows), 8);
        assert_eq!(span_brute(4, &rows), 8);
    }

    #[test]
    fn span_howell_shadow_case() {
        // rows over Z/8: (2, 1) alone spans order 8; its shadow 4*(2,1)
        // = (0,4) matters when combined with others
        let rows = vec![vec![2, 1]];
        assert_eq!(span_size_mod(2, 3, &rows), span_brute(8, &rows) as u128);
        let rows = vec![vec![2, 1], vec![0, 2]];
        assert_eq!(span_size_mod(2, 3, &rows), span_brute(8, &rows) as u128);
        let rows = vec![vec![4, 2], vec![2, 0]];
        assert_eq!(span_size_mod(2, 3, &rows), span_brute(8, &rows) as u128);
    }

    proptest! {
        #[test]
        fn span_matches_brute_closure(
            entries in proptest::collection::vec(0u64..8, 6),
            e in 1u32..=3,
        ) {
            let q = 2u64.pow(e);
            let rows: Vec<Vec<u64>> = entries
                .chunks(2)
                .map(|c| c.iter().map(|&x| x % q).collect())
                .collect();
            prop_assert_eq!(span_size_mod(2, e, &rows), span_brute(q, &rows) as u128);
        }

        #[test]
        fn span_matches_brute_closure_p3(
            entries in proptest::collection::vec(0u64..9, 9),
            e in 1u32..=2,
        ) {
            let q = 3u64.pow(e);
            let rows: Vec<Vec<u64>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&x| x % q).collect())
                .collect();
            prop_assert_eq!(span_size_mod(3, e, &rows), span_brute(q, &rows) as u128);
        }
    }
}
