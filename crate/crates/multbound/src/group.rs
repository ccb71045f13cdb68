//! Structure algorithms on materialised p-groups.
//!
//! Everything here works on a full multiplication table over element
//! indices.  Subgroups are plain element sets; at desk scale that makes
//! closure, normality and quotient construction straightforward and
//! exact.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::AbelianType;
use crate::pc::NormalWord;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("group table violates {0}")]
    BadTable(&'static str),
}

/// A finite p-group given by its full composition table.
#[derive(Debug, Clone)]
pub struct TableGroup {
    p: u64,
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<NormalWord>>,
}

impl TableGroup {
    /// Build from a flat `order x order` table.  The identity must be
    /// element 0; inverses are derived from the table.
    pub fn from_table(p: u64, table: Vec<u32>, labels: Option<Vec<NormalWord>>) -> Self {
        let order = (table.len() as f64).sqrt().round() as usize;
        assert_eq!(order * order, table.len(), "table must be square");
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if table[x * order + y] == 0 {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        assert!(inv.iter().all(|&v| v != u32::MAX), "element without inverse");
        TableGroup { p, order, table, inv, labels }
    }

    pub fn trivial(p: u64) -> Self {
        TableGroup { p, order: 1, table: vec![0], inv: vec![0], labels: None }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `log_p |G|`.
    pub fn log_order(&self) -> u32 {
        log_p(self.p, self.order as u64)
    }

    pub fn id(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv_of(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `x^-1 y^-1 x y`.
    pub fn comm(&self, x: usize, y: usize) -> usize {
        let a = self.mul(self.inv_of(x), self.inv_of(y));
        let b = self.mul(a, x);
        self.mul(b, y)
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut ord = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            ord += 1;
        }
        ord
    }

    pub fn label(&self, x: usize) -> Option<&NormalWord> {
        self.labels.as_ref().map(|l| &l[x])
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Identity, inverse and full associativity laws; `O(|G|^3)`, meant
    /// for tests and small groups.
    pub fn check_group_axioms(&self) -> Result<(), GroupError> {
        for x in 0..self.order {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::BadTable("identity law"));
            }
            if self.mul(x, self.inv_of(x)) != 0 {
                return Err(GroupError::BadTable("inverse law"));
            }
        }
        for x in 0..self.order {
            for y in 0..self.order {
                let xy = self.mul(x, y);
                for z in 0..self.order {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(GroupError::BadTable("associativity"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabel elements by a permutation `perm` (new index of old `x` is
    /// `perm[x]`); `perm[0]` must be 0.
    pub fn relabel(&self, perm: &[usize]) -> TableGroup {
        assert_eq!(perm[0], 0, "identity must stay at index 0");
        let mut table = vec![0u32; self.order * self.order];
        let mut inv_perm = vec![0usize; self.order];
        for (old, &new) in perm.iter().enumerate() {
            inv_perm[new] = old;
        }
        for x in 0..self.order {
            for y in 0..self.order {
                table[x * self.order + y] = perm[self.mul(inv_perm[x], inv_perm[y])] as u32;
            }
        }
        TableGroup::from_table(self.p, table, None)
    }
}

/// A subgroup, stored as its sorted element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(g: &TableGroup) -> Self {
        Subgroup { elements: (0..g.order()).collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Closure of `{1} ∪ gens` under the group operation.
pub fn generated_subgroup(g: &TableGroup, gens: &[usize]) -> Subgroup {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut list = vec![0usize];
    let mut queue: Vec<usize> = Vec::new();
    for &x in gens {
        if !member[x] {
            member[x] = true;
            list.push(x);
            queue.push(x);
        }
    }
    while let Some(x) = queue.pop() {
        // multiply against everything currently in the subgroup
        let snapshot = list.clone();
        for &y in &snapshot {
            for z in [g.mul(x, y), g.mul(y, x)] {
                if !member[z] {
                    member[z] = true;
                    list.push(z);
                    queue.push(z);
                }
            }
        }
    }
    list.sort_unstable();
    Subgroup { elements: list }
}

pub fn is_subgroup(g: &TableGroup, s: &Subgroup) -> bool {
    if !s.contains(0) {
        return false;
    }
    s.elements.iter().all(|&x| {
        s.contains(g.inv_of(x)) && s.elements.iter().all(|&y| s.contains(g.mul(x, y)))
    })
}

pub fn is_normal(g: &TableGroup, s: &Subgroup) -> bool {
    (0..g.order()).all(|x| {
        let xi = g.inv_of(x);
        s.elements.iter().all(|&n| s.contains(g.mul(g.mul(xi, n), x)))
    })
}

/// Subgroup generated by the union of two subgroups.
pub fn join(g: &TableGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let gens: Vec<usize> = a.elements.iter().chain(b.elements.iter()).copied().collect();
    generated_subgroup(g, &gens)
}

/// `Z(G) = { x : xy = yx for all y }`.
pub fn center(g: &TableGroup) -> Subgroup {
    let elements = (0..g.order())
        .filter(|&x| (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Subgroup { elements }
}

/// `[A, G]`, the subgroup generated by all `[a, x]` with `a ∈ A`,
/// `x ∈ G`.
fn commutator_with_group(g: &TableGroup, a: &Subgroup) -> Subgroup {
    let mut gens = Vec::new();
    for &x in &a.elements {
        for y in 0..g.order() {
            let c = g.comm(x, y);
            if c != 0 {
                gens.push(c);
            }
        }
    }
    gens.sort_unstable();
    gens.dedup();
    generated_subgroup(g, &gens)
}

/// Lower central series `γ1 = G ⊇ γ2 ⊇ …` down to the trivial subgroup.
/// The returned list ends with the trivial subgroup; its length minus
/// one is the nilpotency class (0 for the trivial group).
pub fn lower_central_series(g: &TableGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = commutator_with_group(g, last);
        assert!(next.order() < last.order(), "lower central series must strictly descend");
        series.push(next);
    }
    series
}

/// `(Φ(G), G^p)`: the Frattini subgroup `G^p γ2(G)` and the agemo
/// subgroup generated by all p-th powers.
pub fn frattini_agemo(g: &TableGroup) -> (Subgroup, Subgroup) {
    let p = g.p();
    let mut pows: Vec<usize> = (0..g.order()).map(|x| g.pow(x, p)).collect();
    pows.sort_unstable();
    pows.dedup();
    let agemo = generated_subgroup(g, &pows);
    let gamma2 = commutator_with_group(g, &Subgroup::whole(g));
    let frattini = join(g, &agemo, &gamma2);
    (frattini, agemo)
}

/// Quotient `G/N` with the projection map from old indices to coset
/// indices.  Coset representatives are ordered by their minimal member,
/// so the identity coset is element 0.
pub fn quotient(g: &TableGroup, n: &Subgroup) -> Result<(TableGroup, Vec<usize>), GroupError> {
    if !is_subgroup(g, n) {
        return Err(GroupError::NotASubgroup);
    }
    if !is_normal(g, n) {
        return Err(GroupError::NotNormal);
    }
    // canonical representative: minimal index in the coset xN
    let mut coset_rep = vec![usize::MAX; g.order()];
    for x in 0..g.order() {
        if coset_rep[x] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = n.elements.iter().map(|&m| g.mul(x, m)).collect();
        members.sort_unstable();
        let rep = members[0];
        for m in members {
            coset_rep[m] = rep;
        }
    }
    let mut reps: Vec<usize> = coset_rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let index_of = |rep: usize| reps.binary_search(&rep).unwrap();
    let q = reps.len();
    let mut table = vec![0u32; q * q];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            table[i * q + j] = index_of(coset_rep[g.mul(x, y)]) as u32;
        }
    }
    let proj: Vec<usize> = (0..g.order()).map(|x| index_of(coset_rep[x])).collect();
    Ok((TableGroup::from_table(g.p(), table, None), proj))
}

/// Re-index a subgroup as a group in its own right.  Returns the new
/// group together with the embedding (new index -> parent index).
pub fn subgroup_group(g: &TableGroup, s: &Subgroup) -> (TableGroup, Vec<usize>) {
    debug_assert!(is_subgroup(g, s));
    let embed = s.elements.clone();
    let index_of = |x: usize| embed.binary_search(&x).unwrap();
    let m = embed.len();
    let mut table = vec![0u32; m * m];
    for (i, &x) in embed.iter().enumerate() {
        for (j, &y) in embed.iter().enumerate() {
            table[i * m + j] = index_of(g.mul(x, y)) as u32;
        }
    }
    (TableGroup::from_table(g.p(), table, None), embed)
}

/// Direct product of two groups over the same prime.
pub fn direct_product(a: &TableGroup, b: &TableGroup) -> TableGroup {
    assert_eq!(a.p(), b.p());
    let (oa, ob) = (a.order(), b.order());
    let order = oa * ob;
    let mut table = vec![0u32; order * order];
    for xa in 0..oa {
        for xb in 0..ob {
            let x = xa * ob + xb;
            for ya in 0..oa {
                for yb in 0..ob {
                    let y = ya * ob + yb;
                    table[x * order + y] = (a.mul(xa, ya) * ob + b.mul(xb, yb)) as u32;
                }
            }
        }
    }
    TableGroup::from_table(a.p(), table, None)
}

/// `log_p m`, panicking unless `m` is a power of `p`.
pub fn log_p(p: u64, mut m: u64) -> u32 {
    let mut e = 0;
    while m > 1 {
        assert_eq!(m % p, 0, "{m} is not a power of {p}");
        m /= p;
        e += 1;
    }
    e
}

/// Abelian invariants of an abelian group, recovered from the
/// order-counting sequence `|Ω_j| = #{x : x^(p^j) = 1}`.
pub fn abelian_invariants(g: &TableGroup) -> Result<AbelianType, GroupError> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let p = g.p();
    let orders: Vec<u64> = (0..g.order()).map(|x| g.element_order(x)).collect();
    // s_j = log_p #{x : ord(x) divides p^j}
    let mut s = vec![0u32];
    let mut j = 0;
    loop {
        j += 1;
        let bound = p.pow(j);
        let count = orders.iter().filter(|&&o| o <= bound && bound % o == 0).count();
        s.push(log_p(p, count as u64));
        if count == g.order() {
            break;
        }
    }
    // number of invariants >= j is s_j - s_{j-1}
    let mut exps = Vec::new();
    for j in (1..s.len()).rev() {
        let at_least_j = s[j] - s[j - 1];
        let at_least_j1 = if j + 1 < s.len() { s[j + 1] - s[j] } else { 0 };
        for _ in 0..(at_least_j - at_least_j1) {
            exps.push(j as u32);
        }
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    Ok(AbelianType::new(p, exps))
}

/// Abelian invariants of a subgroup of `g`.
pub fn subgroup_abelian_invariants(g: &TableGroup, s: &Subgroup) -> Result<AbelianType, GroupError> {
    let (sg, _) = subgroup_group(g, s);
    abelian_invariants(&sg)
}

/// Minimal number of generators, via the Frattini quotient order
/// (Burnside basis theorem).
pub fn minimal_generators(g: &TableGroup) -> u32 {
    let (frattini, _) = frattini_agemo(g);
    g.log_order() - log_p(g.p(), frattini.order() as u64)
}

/// The numeric invariants parameterising the multiplier bounds.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct GroupProfile {
    pub p: u64,
    /// `log_p |G|`
    pub n: u32,
    /// `log_p |γ2(G)|`
    pub k: u32,
    /// minimal number of generators
    pub d: u32,
    /// nilpotency class
    pub c: u32,
    /// `d(G/Z(G))`
    pub delta: u32,
    /// `d(γ2(G)/γ3(G))`
    pub gamma: u32,
    /// `log_p |G^p|`
    pub t: u32,
    pub is_abelian: bool,
    pub is_special: bool,
    pub is_maximal_class: bool,
    pub has_gp_in_gamma2: bool,
    pub has_gp_cyclic_p: bool,
    pub has_gp_equal_gamma2: bool,
}

impl GroupProfile {
    /// `μ = min(d, c)`.
    pub fn mu(&self) -> u32 {
        self.d.min(self.c)
    }

    /// `ν = min(d, γ+1)`.
    pub fn nu(&self) -> u32 {
        self.d.min(self.gamma + 1)
    }
}

pub fn group_profile(g: &TableGroup) -> GroupProfile {
    let p = g.p();
    let n = g.log_order();
    let series = lower_central_series(g);
    let c = (series.len() - 1) as u32;
    let gamma2 = if series.len() > 1 { series[1].clone() } else { Subgroup::trivial() };
    let gamma3 = if series.len() > 2 { series[2].clone() } else { Subgroup::trivial() };
    let k = log_p(p, gamma2.order() as u64);
    let (frattini, agemo) = frattini_agemo(g);
    let d = n - log_p(p, frattini.order() as u64);
    let t = log_p(p, agemo.order() as u64);
    let z = center(g);

    let delta = {
        let (q, _) = quotient(g, &z).expect("center is normal");
        minimal_generators(&q)
    };
    let gamma = {
        // d(γ2/γ3) = rank of the abelian section
        let (sg, embed) = subgroup_group(g, &gamma2);
        let g3: Vec<usize> = gamma3
            .elements()
            .iter()
            .map(|&x| embed.binary_search(&x).unwrap())
            .collect();
        let (q, _) = quotient(&sg, &Subgroup { elements: g3 }).expect("γ3 normal in γ2");
        if q.order() == 1 {
            0
        } else {
            minimal_generators(&q)
        }
    };

    let is_abelian = c <= 1;
    let is_special = c == 2 && z == gamma2 && z == frattini;
    let is_maximal_class = n >= 1 && c == n - 1;
    let has_gp_in_gamma2 = agemo.elements().iter().all(|&x| gamma2.contains(x));
    let has_gp_cyclic_p = agemo.order() as u64 == p;
    let has_gp_equal_gamma2 = agemo == gamma2;

    GroupProfile {
        p,
        n,
        k,
        d,
        c,
        delta,
        gamma,
        t,
        is_abelian,
        is_special,
        is_maximal_class,
        has_gp_in_gamma2,
        has_gp_cyclic_p,
        has_gp_equal_gamma2,
    }
}
