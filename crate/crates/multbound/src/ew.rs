//! The maps Ψᵢ on tensor powers of abelian sections, their image sizes,
//! and the master inequality
//! `|M(G)| |γ₂| ∏ᵢ |Im Ψᵢ| ≤ |M(G^ab)| ∏ᵢ |γᵢ/γᵢ₊₁ ⊗ Ḡ^ab|`,
//! where `Ḡ^ab = G / γ₂(G)Z(G)`.

use thiserror::Error;

use crate::group::{
    self, generated_subgroup, GroupError, Subgroup, TableGroup,
};
use crate::linalg::{tensor_type, AbelianType, SpanBuilder};

#[derive(Debug, Error)]
pub enum EwError {
    #[error("normed commutator of an empty list")]
    EmptyCommutator,
    #[error("weight {0} out of range (need i >= 2)")]
    WeightOutOfRange(u32),
    #[error("tuple of length {got}, expected {expected}")]
    TupleLength { expected: usize, got: usize },
    #[error("group is abelian")]
    Abelian,
    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}

// ---------------------------------------------------------------------
// Abelian sections with a fixed basis

/// An abelian section `A = H/K` of a parent group, with a basis
/// realizing `A = ⊕ᵤ ℤ_{p^aᵤ}` and a full element-to-coordinates table.
#[derive(Debug, Clone)]
pub struct SectionBasis {
    group: TableGroup,
    /// parent index -> section index (`None` outside `H`)
    proj: Vec<Option<usize>>,
    ty: AbelianType,
    /// section indices of the basis elements, aligned with `ty.exps()`
    basis: Vec<usize>,
    /// section index -> coordinate vector, entry `u` reduced mod `p^aᵤ`
    coords: Vec<Vec<u64>>,
    /// section index -> minimal parent representative
    transversal: Vec<usize>,
}

impl SectionBasis {
    pub fn group(&self) -> &TableGroup {
        &self.group
    }

    pub fn ty(&self) -> &AbelianType {
        &self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn project(&self, parent: usize) -> Option<usize> {
        self.proj[parent]
    }

    /// Coordinates of a parent element's image, if the element lies in
    /// the section's numerator.
    pub fn coords_of(&self, parent: usize) -> Option<&[u64]> {
        self.proj[parent].map(|s| self.coords[s].as_slice())
    }

    /// Minimal parent representatives of the basis elements.
    pub fn basis_reps(&self) -> Vec<usize> {
        self.basis.iter().map(|&b| self.transversal[b]).collect()
    }

    /// Minimal parent representatives of every section element.
    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }
}

/// Basis of an abelian group: elements `(b, a)` with `ord(b) = p^a`,
/// descending in `a`, realizing the group as their direct sum.
fn abelian_basis_elems(q: &TableGroup) -> Vec<(usize, u32)> {
    if q.order() == 1 {
        return Vec::new();
    }
    let p = q.p();
    let b1 = (0..q.order())
        .max_by_key(|&x| q.element_order(x))
        .unwrap();
    let a1 = group::log_p(p, q.element_order(b1));
    let h1 = generated_subgroup(q, &[b1]);
    let (quot, proj) = group::quotient(q, &h1).expect("cyclic subgroup of abelian group");
    let rest = abelian_basis_elems(&quot);

    let mut basis = vec![(b1, a1)];
    for (xbar, ai) in rest {
        let x = (0..q.order()).find(|&x| proj[x] == xbar).unwrap();
        // x^(p^ai) lies in <b1>; divide the discrete log out of x so the
        // lift has the same order as its image
        let xp = q.pow(x, p.pow(ai));
        let mut s = 0u64;
        let mut acc = 0usize;
        while acc != xp {
            acc = q.mul(acc, b1);
            s += 1;
        }
        assert_eq!(s % p.pow(ai), 0, "lift adjustment must divide out");
        let y = q.mul(x, q.pow(q.inv_of(b1), s / p.pow(ai)));
        debug_assert_eq!(proj[y], xbar);
        debug_assert_eq!(q.element_order(y), p.pow(ai));
        basis.push((y, ai));
    }
    basis
}

/// Build the section `H/K` of `g` with a basis and coordinate table.
pub fn section_basis(g: &TableGroup, h: &Subgroup, k: &Subgroup) -> Result<SectionBasis, EwError> {
    let (hg, embed) = group::subgroup_group(g, h);
    // K in the coordinates of H; closure of an existing subgroup is itself
    let k_in_h: Vec<usize> = k
        .elements()
        .iter()
        .map(|&x| {
            embed
                .binary_search(&x)
                .expect("denominator must lie inside numerator")
        })
        .collect();
    let k_sub = generated_subgroup(&hg, &k_in_h);
    let (a, proj_h) = group::quotient(&hg, &k_sub)?;
    if !a.is_abelian() {
        return Err(GroupError::NotAbelian.into());
    }

    let mut proj = vec![None; g.order()];
    for (hx, &gx) in embed.iter().enumerate() {
        proj[gx] = Some(proj_h[hx]);
    }

    let p = a.p();
    let basis_elems = abelian_basis_elems(&a);
    let exps: Vec<u32> = basis_elems.iter().map(|&(_, e)| e).collect();
    debug_assert!(exps.windows(2).all(|w| w[0] >= w[1]));
    let ty = AbelianType::new(p, exps.clone());

    // fill the coordinate table by enumerating mixed-radix tuples
    let mut coords: Vec<Option<Vec<u64>>> = vec![None; a.order()];
    let mut tuple = vec![0u64; basis_elems.len()];
    loop {
        let mut x = 0usize;
        for (&(b, _), &c) in basis_elems.iter().zip(&tuple) {
            x = a.mul(x, a.pow(b, c));
        }
        assert!(coords[x].is_none(), "basis is not independent");
        coords[x] = Some(tuple.clone());
        // increment
        let mut pos = basis_elems.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < p.pow(exps[pos]) {
                break;
            }
            tuple[pos] = 0;
        }
        if tuple.iter().all(|&c| c == 0) {
            break;
        }
    }
    let coords: Vec<Vec<u64>> = coords
        .into_iter()
        .map(|c| c.expect("basis must generate the section"))
        .collect();

    let mut transversal = vec![usize::MAX; a.order()];
    for x in 0..g.order() {
        if let Some(s) = proj[x] {
            if transversal[s] == usize::MAX {
                transversal[s] = x;
            }
        }
    }

    Ok(SectionBasis {
        group: a,
        proj,
        ty,
        basis: basis_elems.into_iter().map(|(b, _)| b).collect(),
        coords,
        transversal,
    })
}

// ---------------------------------------------------------------------
// Tensor targets

/// The target `A ⊗ B` for fixed bases of `A` and `B`; coordinate
/// `(u, v)` lives in `ℤ_{p^min(aᵤ, bᵥ)}`.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    p: u64,
    cols: usize,
    /// flattened row-major local moduli exponents
    moduli: Vec<u32>,
}

/// An element of a [`TensorSpace`], entries reduced mod their local
/// modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    pub entries: Vec<u64>,
}

impl TensorElement {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

impl TensorSpace {
    pub fn new(a: &AbelianType, b: &AbelianType) -> Self {
        assert_eq!(a.p(), b.p());
        let mut moduli = Vec::with_capacity(a.rank() * b.rank());
        for &au in a.exps() {
            for &bv in b.exps() {
                moduli.push(au.min(bv));
            }
        }
        TensorSpace { p: a.p(), cols: b.rank(), moduli }
    }

    pub fn zero(&self) -> TensorElement {
        TensorElement { entries: vec![0; self.moduli.len()] }
    }

    /// The pure tensor of two coordinate vectors.
    pub fn pure(&self, a: &[u64], b: &[u64]) -> TensorElement {
        let mut entries = Vec::with_capacity(self.moduli.len());
        for (u, &au) in a.iter().enumerate() {
            for (v, &bv) in b.iter().enumerate() {
                let m = self.p.pow(self.moduli[u * self.cols + v]);
                entries.push((au as u128 * bv as u128 % m as u128) as u64);
            }
        }
        TensorElement { entries }
    }

    pub fn add(&self, x: &TensorElement, y: &TensorElement) -> TensorElement {
        let entries = x
            .entries
            .iter()
            .zip(&y.entries)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| (a + b) % self.p.pow(m))
            .collect();
        TensorElement { entries }
    }

    /// `log_p` of the full target order.
    pub fn size_log(&self) -> u64 {
        self.moduli.iter().map(|&m| m as u64).sum()
    }

    fn emax(&self) -> u32 {
        self.moduli.iter().copied().max().unwrap_or(0)
    }

    /// Embed an element into `(ℤ/p^E)^dim`, coordinate `(u,v)` scaled by
    /// `p^(E - mᵤᵥ)`, so subgroup spans can be measured uniformly.
    fn span_row(&self, x: &TensorElement) -> Vec<(usize, u64)> {
        let e = self.emax();
        x.entries
            .iter()
            .zip(&self.moduli)
            .enumerate()
            .filter_map(|(c, (&v, &m))| (v != 0).then(|| (c, v * self.p.pow(e - m))))
            .collect()
    }

    /// `log_p` of the subgroup generated by a set of elements.
    pub fn span_log(&self, elems: &[TensorElement]) -> u64 {
        let e = self.emax();
        if e == 0 {
            return 0;
        }
        let mut sb = SpanBuilder::new(self.p, e, self.moduli.len());
        for x in elems {
            sb.add_row(&self.span_row(x));
        }
        sb.span_log()
    }
}

// ---------------------------------------------------------------------
// Normed commutators and the maps Ψᵢ

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `[[..[x1, x2], x3], .., xm]` (left) or `[x1, [.. [x_{m-1}, xm]..]]`
/// (right); a single element is returned unchanged.
pub fn normed_commutator(g: &TableGroup, elems: &[usize], side: Side) -> Result<usize, EwError> {
    let (&first, rest) = elems.split_first().ok_or(EwError::EmptyCommutator)?;
    match side {
        Side::Left => Ok(rest.iter().fold(first, |acc, &x| g.comm(acc, x))),
        Side::Right => {
            let (&last, body) = elems.split_last().unwrap();
            Ok(body.iter().rev().fold(last, |acc, &x| g.comm(x, acc)))
        }
    }
}

/// Cached sections and tensor targets for evaluating Ψᵢ on one group.
pub struct PsiContext<'a> {
    g: &'a TableGroup,
    class: u32,
    ab: SectionBasis,
    /// `gamma[i - 2]` is the section `γᵢ/γᵢ₊₁` with its tensor target
    gamma: Vec<(SectionBasis, TensorSpace)>,
}

impl<'a> PsiContext<'a> {
    pub fn new(g: &'a TableGroup) -> Result<Self, EwError> {
        let series = group::lower_central_series(g);
        let class = (series.len() - 1) as u32;
        let z = group::center(g);
        let gamma2 = series.get(1).cloned().unwrap_or_else(Subgroup::trivial);
        let denom = group::join(g, &gamma2, &z);
        let ab = section_basis(g, &Subgroup::whole(g), &denom)?;

        let mut gamma = Vec::new();
        // series[i - 1] is γᵢ
        for i in 2..=class as usize {
            let next = series.get(i).cloned().unwrap_or_else(Subgroup::trivial);
            let sec = section_basis(g, &series[i - 1], &next)?;
            let space = TensorSpace::new(sec.ty(), ab.ty());
            gamma.push((sec, space));
        }
        Ok(PsiContext { g, class, ab, gamma })
    }

    /// The section `Ḡ^ab = G/γ₂(G)Z(G)`.
    pub fn ab(&self) -> &SectionBasis {
        &self.ab
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    /// The target `(γᵢ/γᵢ₊₁) ⊗ Ḡ^ab`, when `2 ≤ i ≤ c`.
    pub fn target(&self, i: u32) -> Option<&TensorSpace> {
        (i >= 2).then(|| self.gamma.get(i as usize - 2).map(|(_, s)| s)).flatten()
    }

    /// Ψᵢ on an `(i+1)`-tuple of parent-group representatives:
    /// the sum over slots `j` of `[R_j, L_j] ⊗ x̄_j`, where `R_j` is the
    /// right-normed commutator of the entries after slot `j`, `L_j` the
    /// left-normed commutator of the entries before it, and a one-sided
    /// term keeps the nonempty side alone.
    pub fn psi_eval(&self, i: u32, tuple: &[usize]) -> Result<TensorElement, EwError> {
        if i < 2 {
            return Err(EwError::WeightOutOfRange(i));
        }
        if tuple.len() != i as usize + 1 {
            return Err(EwError::TupleLength { expected: i as usize + 1, got: tuple.len() });
        }
        let Some((sec, space)) = self.gamma.get(i as usize - 2) else {
            // γᵢ is trivial beyond the class; the target is trivial
            return Ok(TensorElement { entries: Vec::new() });
        };
        let mut acc = space.zero();
        for j in 0..tuple.len() {
            let left = &tuple[..j];
            let right = &tuple[j + 1..];
            let c = match (left.is_empty(), right.is_empty()) {
                (true, false) => normed_commutator(self.g, right, Side::Right)?,
                (false, true) => normed_commutator(self.g, left, Side::Left)?,
                (false, false) => {
                    let r = normed_commutator(self.g, right, Side::Right)?;
                    let l = normed_commutator(self.g, left, Side::Left)?;
                    self.g.comm(r, l)
                }
                (true, true) => unreachable!("tuples have length >= 3"),
            };
            let a = sec.coords_of(c).expect("weight-i commutator lies in γᵢ");
            let b = self.ab.coords_of(tuple[j]).expect("Ḡ^ab is a quotient of G");
            let term = space.pure(a, b);
            acc = space.add(&acc, &term);
        }
        Ok(acc)
    }

    /// `log_p |Im Ψᵢ|`: the span of Ψᵢ over all `(i+1)`-tuples drawn
    /// from parent representatives of a basis of `Ḡ^ab`.
    pub fn psi_image_log(&self, i: u32) -> Result<u64, EwError> {
        let reps = self.ab.basis_reps();
        self.psi_span_log(i, &reps)
    }

    /// Same span, but over tuples from an arbitrary set of parent
    /// representatives (used to cross-check the basis shortcut).
    pub fn psi_span_log(&self, i: u32, reps: &[usize]) -> Result<u64, EwError> {
        if i < 2 {
            return Err(EwError::WeightOutOfRange(i));
        }
        let Some((_, space)) = self.gamma.get(i as usize - 2) else {
            return Ok(0);
        };
        let len = i as usize + 1;
        let mut values = Vec::new();
        let mut tuple = vec![0usize; len];
        loop {
            let elems: Vec<usize> = tuple.iter().map(|&t| reps[t]).collect();
            values.push(self.psi_eval(i, &elems)?);
            let mut pos = len;
            loop {
                if pos == 0 {
                    return Ok(space.span_log(&values));
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < reps.len() {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }
}

// ---------------------------------------------------------------------
// The master inequality and the V-subgroup

/// Both sides of the master inequality, as `log_p` values.
#[derive(Debug, Clone)]
pub struct MasterInequality {
    /// `log_p (|M(G)| |γ₂| ∏ᵢ |Im Ψᵢ|)`
    pub lhs_log: u64,
    /// `log_p (|M(G^ab)| ∏ᵢ |γᵢ/γᵢ₊₁ ⊗ Ḡ^ab|)` with exact tensor sizes
    pub rhs_log: u64,
    /// `log_p (|M(G^ab)| p^(kδ))`
    pub rhs_relaxed_log: u64,
    /// `(i, log_p |Im Ψᵢ|)` for `2 ≤ i ≤ c`
    pub psi_logs: Vec<(u32, u64)>,
}

impl MasterInequality {
    pub fn holds(&self) -> bool {
        self.lhs_log <= self.rhs_log && self.rhs_log <= self.rhs_relaxed_log
    }
}

/// Evaluate the master inequality for a nonabelian group whose
/// multiplier order `p^m_log` is already known.
pub fn ew_inequality(g: &TableGroup, m_log: u64) -> Result<MasterInequality, EwError> {
    let series = group::lower_central_series(g);
    if series.len() < 3 {
        return Err(EwError::Abelian);
    }
    let p = g.p();
    let k = group::log_p(p, series[1].order() as u64) as u64;
    let ctx = PsiContext::new(g)?;
    let delta = ctx.ab.rank() as u64;

    let gab = {
        let (q, _) = group::quotient(g, &series[1])?;
        group::abelian_invariants(&q)?
    };
    let m_ab_log = crate::linalg::abelian_multiplier(&gab).size_log();

    let mut lhs_log = m_log + k;
    let mut rhs_log = m_ab_log;
    let mut psi_logs = Vec::new();
    for i in 2..=ctx.class() {
        let im = ctx.psi_image_log(i)?;
        psi_logs.push((i, im));
        lhs_log += im;
        let sec_ty = &ctx.gamma[i as usize - 2].0.ty;
        rhs_log += tensor_type(sec_ty, ctx.ab.ty())
            .expect("same prime")
            .size_log();
    }
    let rhs_relaxed_log = m_ab_log + k * delta;
    Ok(MasterInequality { lhs_log, rhs_log, rhs_relaxed_log, psi_logs })
}

/// `log_p |V|` for the subgroup `V ≤ γ₂(G) ⊗ G/γ₂(G)` generated by all
/// `x^p ⊗ x̄`.  Requires p odd, class exactly 2, and `G/γ₂` elementary
/// abelian; under those hypotheses `|V| = p^(t(2d-t+1)/2)`.
pub fn v_subgroup_log(g: &TableGroup) -> Result<u64, EwError> {
    let p = g.p();
    if p == 2 {
        return Err(EwError::Hypothesis("p must be odd"));
    }
    let series = group::lower_central_series(g);
    if series.len() != 3 {
        return Err(EwError::Hypothesis("nilpotency class must be 2"));
    }
    let gamma2 = series[1].clone();
    let sec_gamma2 = section_basis(g, &gamma2, &Subgroup::trivial())?;
    let sec_ab = section_basis(g, &Subgroup::whole(g), &gamma2)?;
    if !sec_ab.ty().is_elementary() {
        return Err(EwError::Hypothesis("G/γ₂ must be elementary abelian"));
    }
    let space = TensorSpace::new(sec_gamma2.ty(), sec_ab.ty());
    let mut gens = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let xp = g.pow(x, p);
        let a = sec_gamma2.coords_of(xp).expect("x^p lies in γ₂");
        let b = sec_ab.coords_of(x).unwrap();
        gens.push(space.pure(a, b));
    }
    Ok(space.span_log(&gens))
}
