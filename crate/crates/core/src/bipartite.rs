//! Compound systems: the going-up map Ψ, the going-down maps τᵢ, and the
//! checks relating them to the lattice operations.

use crate::convex::{face_or_empty, feasible_point, Feasibility};
use crate::error::{Error, Result};
use crate::herm::{partial_trace, tensor, to_coords, DensityOp, HermOp, SpaceShape};
use crate::lattice::{Lattice, LatticeElement};
use crate::random::{mix64, random_density};
use crate::separability::{is_separable, SeparabilityStatus};
use crate::subspace::HermSubspace;

/// A bipartite space `𝓗₁ ⊗ 𝓗₂` with the lattice settings used on all three
/// lattices.
#[derive(Debug, Clone)]
pub struct BipartiteContext {
    shape: SpaceShape,
    lattice: Lattice,
}

impl BipartiteContext {
    pub fn new(n1: usize, n2: usize, lattice: Lattice) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidParameter(format!("invalid factors {n1}x{n2}")));
        }
        Ok(BipartiteContext { shape: SpaceShape::bipartite(n1, n2), lattice })
    }

    pub fn from_shape(shape: &SpaceShape, lattice: Lattice) -> Result<Self> {
        match shape.factors() {
            [n1, n2] => Self::new(*n1, *n2, lattice),
            other => Err(Error::UnsupportedDims(format!("expected two factors, got {other:?}"))),
        }
    }

    pub fn shape(&self) -> &SpaceShape {
        &self.shape
    }

    pub fn n1(&self) -> usize {
        self.shape.factors()[0]
    }

    pub fn n2(&self) -> usize {
        self.shape.factors()[1]
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Shape of factor 1 or 2.
    pub fn factor_shape(&self, i: usize) -> SpaceShape {
        SpaceShape::simple(self.shape.factors()[i - 1])
    }

    fn check_factor(&self, a: &LatticeElement, i: usize) -> Result<()> {
        let n = self.shape.factors()[i - 1];
        if a.hilbert_dim() != n {
            return Err(Error::ShapeMismatch { shape: a.shape().factors().to_vec(), dim: n });
        }
        Ok(())
    }

    fn check_joint(&self, l: &LatticeElement) -> Result<()> {
        if l.hilbert_dim() != self.shape.total() {
            return Err(Error::ShapeMismatch { shape: self.shape.factors().to_vec(), dim: l.hilbert_dim() });
        }
        Ok(())
    }

    /// `Ψ([S₁], [S₂]) = [S₁ ⊗ S₂]`; the tensor product of good
    /// representatives is good.
    pub fn psi(&self, a: &LatticeElement, b: &LatticeElement) -> Result<LatticeElement> {
        self.check_factor(a, 1)?;
        self.check_factor(b, 2)?;
        let n = self.shape.total();
        let mut cols = Vec::with_capacity(a.dim() * b.dim());
        for x in a.rep().basis() {
            for y in b.rep().basis() {
                cols.push(to_coords(&tensor(&x, &y)));
            }
        }
        let rep = HermSubspace::from_coord_columns(n, &cols, self.lattice.tol.rank);
        debug_assert!(self.lattice.is_good(&rep).unwrap_or(true), "tensor product of good representatives is not good");
        Ok(LatticeElement::from_good(rep, self.shape.clone()))
    }

    /// `τ_keep([S]) = [tr_other(S)]`, an element of factor `keep`.
    pub fn tau(&self, l: &LatticeElement, keep: usize) -> Result<LatticeElement> {
        self.check_joint(l)?;
        if keep != 1 && keep != 2 {
            return Err(Error::SubsystemOutOfRange { index: keep, factors: 2 });
        }
        let n = self.shape.factors()[keep - 1];
        let gens = l
            .rep()
            .basis()
            .iter()
            .map(|x| partial_trace(x, &self.shape, keep))
            .collect::<Result<Vec<_>>>()?;
        let span = HermSubspace::span(n, &gens, &self.lattice.tol)?;
        self.lattice.close(&span, SpaceShape::simple(n))
    }

    pub fn atom1(&self, rho: &DensityOp) -> Result<LatticeElement> {
        self.lattice.atom_in(rho, self.factor_shape(1))
    }

    pub fn atom2(&self, rho: &DensityOp) -> Result<LatticeElement> {
        self.lattice.atom_in(rho, self.factor_shape(2))
    }

    pub fn atom(&self, rho: &DensityOp) -> Result<LatticeElement> {
        self.lattice.atom_in(rho, self.shape.clone())
    }
}

/// `|Φ⁺⟩⟨Φ⁺|` on `n ⊗ n` with `|Φ⁺⟩ = Σ|ii⟩/√n`.
pub fn bell_state(n: usize) -> DensityOp {
    let mut v = crate::herm::CVector::zeros(n * n);
    for i in 0..n {
        v[i * n + i] = num_complex::Complex64::new(1.0, 0.0);
    }
    DensityOp::pure(&v)
}

/// `w·|Φ⁺⟩⟨Φ⁺| + (1 − w)·I/4` on two qubits.
pub fn werner_state(w: f64) -> DensityOp {
    let bell = bell_state(2);
    let op = &bell.op().scale(w) + &HermOp::identity(4).scale((1.0 - w) / 4.0);
    DensityOp::from_op_unchecked(op)
}

/// A state of `a`, when there is one.
pub fn some_state(lat: &Lattice, a: &LatticeElement) -> Result<Option<DensityOp>> {
    if a.is_zero() {
        return Ok(None);
    }
    let r = feasible_point(a.rep(), &lat.tol, lat.budget)?;
    Ok(match r.status {
        Feasibility::Feasible => r.witness,
        Feasibility::Empty => None,
    })
}

/// A maximum-rank state of `a`.
pub fn interior_state(lat: &Lattice, a: &LatticeElement) -> Result<Option<DensityOp>> {
    Ok(face_or_empty(a.rep(), &lat.tol, lat.budget)?.map(|c| c.interior_point))
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct PsiSlotReport {
    pub pairs: usize,
    pub meet_preserved: usize,
    pub join_preserved: usize,
    pub injective: usize,
    /// `Ψ(¬a, ρ₂) ≤ ¬Ψ(a, ρ₂)` over the sample.
    pub neg_inclusions: usize,
    pub neg_strict: usize,
    /// Strictness for `a = |0⟩⟨0|`: `ρ₁ ⊗ ρ₂′` lies in `¬Ψ(a, ρ₂)` but not in `Ψ(¬a, ρ₂)`.
    pub strict_witness_found: bool,
    /// Indices of pairs that failed a check.
    pub failures: Vec<usize>,
}

impl PsiSlotReport {
    pub fn all_hold(&self) -> bool {
        self.meet_preserved == self.pairs
            && self.join_preserved == self.pairs
            && self.injective == self.pairs
            && self.neg_inclusions == self.pairs
            && self.strict_witness_found
    }
}

/// Checks that `Ψ(·, U)` preserves meets and joins and is injective on
/// consecutive pairs of `sample`, and that it only weakly preserves negation.
pub fn psi_fixed_slot_report(
    sample: &[LatticeElement],
    fixed: &LatticeElement,
    rho2: &DensityOp,
    ctx: &BipartiteContext,
    seed: u64,
) -> Result<PsiSlotReport> {
    let lat = ctx.lattice();
    let mut report = PsiSlotReport::default();
    let atom2 = ctx.atom2(rho2)?;
    for (i, pair) in sample.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        report.pairs += 1;
        let mut ok = true;
        let (pa, pb) = (ctx.psi(a, fixed)?, ctx.psi(b, fixed)?);
        if lat.eq(&ctx.psi(&lat.meet(a, b)?, fixed)?, &lat.meet(&pa, &pb)?)? {
            report.meet_preserved += 1;
        } else {
            ok = false;
        }
        if lat.eq(&ctx.psi(&lat.join(a, b)?, fixed)?, &lat.join(&pa, &pb)?)? {
            report.join_preserved += 1;
        } else {
            ok = false;
        }
        if lat.eq(&pa, &pb)? == lat.eq(a, b)? || fixed.is_zero() {
            report.injective += 1;
        } else {
            ok = false;
        }
        let lhs = ctx.psi(&lat.neg(a)?, &atom2)?;
        let rhs = lat.neg(&ctx.psi(a, &atom2)?)?;
        if lat.leq(&lhs, &rhs)? {
            report.neg_inclusions += 1;
            if !lat.leq(&rhs, &lhs)? {
                report.neg_strict += 1;
            }
        } else {
            ok = false;
        }
        if !ok {
            report.failures.push(i);
        }
    }
    report.strict_witness_found = neg_strict_witness(ctx, rho2, seed)?;
    Ok(report)
}

/// For `a = |0⟩⟨0|`: some `ρ₁ ⊗ ρ₂′` with `ρ₁` a state of `¬a` and `ρ₂′ ≠ ρ₂`
/// lies in `¬Ψ(a, ρ₂)` but not in `Ψ(¬a, ρ₂)`.
pub fn neg_strict_witness(ctx: &BipartiteContext, rho2: &DensityOp, seed: u64) -> Result<bool> {
    let lat = ctx.lattice();
    let tol = &lat.tol;
    let a = ctx.atom1(&DensityOp::from_op_unchecked(HermOp::ket_bra(ctx.n1(), 0)))?;
    let atom2 = ctx.atom2(rho2)?;
    let lhs = ctx.psi(&lat.neg(&a)?, &atom2)?;
    let rhs = lat.neg(&ctx.psi(&a, &atom2)?)?;
    let Some(rho1) = some_state(lat, &lat.neg(&a)?)? else {
        return Ok(false);
    };
    for k in 0..16u64 {
        let other = random_density(ctx.n2(), ctx.n2(), mix64(seed, k))?;
        let w = tensor(rho1.op(), other.op());
        if rhs.rep().contains_op(&w, tol)? && !lhs.rep().contains_op(&w, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct TauReport {
    pub pairs: usize,
    /// `τᵢ(a ∨ b) = τᵢ(a) ∨ τᵢ(b)` for both i.
    pub join_preserved: usize,
    /// `τᵢ(a ∧ b) ≤ τᵢ(a) ∧ τᵢ(b)` for both i.
    pub meet_below: usize,
    /// `τ₁({ρ₁⊗ρ₂} ∧ {ρ₁⊗ρ₂′}) = 𝟎` while `τ₁({ρ₁⊗ρ₂}) ∧ τ₁({ρ₁⊗ρ₂′}) = {ρ₁}`.
    pub meet_counterexample: bool,
    pub targets: usize,
    /// `τ₁(Ψ(L₁, ρ₂)) = L₁`.
    pub surjective: usize,
    /// `Ψ(L₁, ρ₂) ≠ Ψ(L₁, ρ₂′)` with equal images.
    pub non_injective: usize,
    pub failures: Vec<usize>,
}

impl TauReport {
    pub fn all_hold(&self) -> bool {
        self.join_preserved == self.pairs
            && self.meet_below == self.pairs
            && self.meet_counterexample
            && self.surjective == self.targets
            && self.non_injective >= 1
    }
}

pub fn tau_morphism_report(
    pairs: &[(LatticeElement, LatticeElement)],
    targets: &[LatticeElement],
    ctx: &BipartiteContext,
    seed: u64,
) -> Result<TauReport> {
    let lat = ctx.lattice();
    let mut report = TauReport::default();
    for (i, (a, b)) in pairs.iter().enumerate() {
        report.pairs += 1;
        let (join, meet) = (lat.join(a, b)?, lat.meet(a, b)?);
        let mut joins = true;
        let mut meets = true;
        for keep in [1, 2] {
            let (ta, tb) = (ctx.tau(a, keep)?, ctx.tau(b, keep)?);
            joins &= lat.eq(&ctx.tau(&join, keep)?, &lat.join(&ta, &tb)?)?;
            meets &= lat.leq(&ctx.tau(&meet, keep)?, &lat.meet(&ta, &tb)?)?;
        }
        report.join_preserved += joins as usize;
        report.meet_below += meets as usize;
        if !(joins && meets) {
            report.failures.push(i);
        }
    }

    let rho1 = random_density(ctx.n1(), ctx.n1(), mix64(seed, 1))?;
    let rho2 = random_density(ctx.n2(), ctx.n2(), mix64(seed, 2))?;
    let rho2b = random_density(ctx.n2(), ctx.n2(), mix64(seed, 3))?;
    let x = ctx.atom(&product(&rho1, &rho2))?;
    let y = ctx.atom(&product(&rho1, &rho2b))?;
    let down_of_meet = ctx.tau(&lat.meet(&x, &y)?, 1)?;
    let meet_of_downs = lat.meet(&ctx.tau(&x, 1)?, &ctx.tau(&y, 1)?)?;
    report.meet_counterexample =
        down_of_meet.is_zero() && lat.eq(&meet_of_downs, &ctx.atom1(&rho1)?)?;

    let (a2, b2) = (ctx.atom2(&rho2)?, ctx.atom2(&rho2b)?);
    for target in targets {
        report.targets += 1;
        let up = ctx.psi(target, &a2)?;
        let up_other = ctx.psi(target, &b2)?;
        let back = ctx.tau(&up, 1)?;
        if lat.eq(&back, target)? {
            report.surjective += 1;
        }
        if !target.is_zero() && !lat.eq(&up, &up_other)? && lat.eq(&ctx.tau(&up_other, 1)?, &back)? {
            report.non_injective += 1;
        }
    }
    Ok(report)
}

fn product(a: &DensityOp, b: &DensityOp) -> DensityOp {
    DensityOp::from_op_unchecked(tensor(a.op(), b.op()))
}

#[derive(Debug, Clone)]
pub struct Sublattice {
    pub elements: Vec<LatticeElement>,
    pub truncated: bool,
}

/// Closure of `seeds` under meet and join, deduplicated by mutual order.
pub fn generate_sublattice(lat: &Lattice, seeds: &[LatticeElement], cap: usize) -> Result<Sublattice> {
    let mut elements: Vec<LatticeElement> = Vec::new();
    for s in seeds {
        if !contains_element(lat, &elements, s)? {
            elements.push(s.clone());
        }
    }
    let mut checked = 0;
    while checked < elements.len() {
        let end = elements.len();
        for i in checked..end {
            for j in 0..=i {
                for candidate in [lat.meet(&elements[i], &elements[j])?, lat.join(&elements[i], &elements[j])?] {
                    if !contains_element(lat, &elements, &candidate)? {
                        if elements.len() >= cap {
                            return Ok(Sublattice { elements, truncated: true });
                        }
                        elements.push(candidate);
                    }
                }
            }
        }
        checked = end;
    }
    Ok(Sublattice { elements, truncated: false })
}

/// Whether every pairwise meet and join of `elements` is already present.
pub fn is_closed(lat: &Lattice, elements: &[LatticeElement]) -> Result<bool> {
    for i in 0..elements.len() {
        for j in 0..=i {
            for candidate in [lat.meet(&elements[i], &elements[j])?, lat.join(&elements[i], &elements[j])?] {
                if !contains_element(lat, elements, &candidate)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn contains_element(lat: &Lattice, elements: &[LatticeElement], x: &LatticeElement) -> Result<bool> {
    for e in elements {
        if e.dim() == x.dim() && lat.eq(e, x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct ImPsiReport {
    pub pairs: usize,
    /// A product of states of `a` and `b` lies in `Ψ(a, b)` and is separable.
    pub product_states_inside: usize,
    /// The basis of `Ψ(a, b)` is spanned by products of elements of `a` and `b`.
    pub product_spans: usize,
    pub separable_samples: usize,
    /// Separable `ρ = Σ pₖ ρₖ¹ ⊗ ρₖ²` lies in `Ψ([span ρₖ¹], [span ρₖ²])`.
    pub separable_contained: usize,
    /// The entangled atom equals no sampled image and lies below none that is
    /// not also above separable states.
    pub entangled_outside_image: bool,
    pub failures: Vec<usize>,
}

impl ImPsiReport {
    pub fn all_hold(&self) -> bool {
        self.product_states_inside == self.pairs
            && self.product_spans == self.pairs
            && self.separable_contained == self.separable_samples
            && self.entangled_outside_image
    }
}

pub fn im_psi_separability_report(
    pairs: &[(LatticeElement, LatticeElement)],
    separable_samples: usize,
    ctx: &BipartiteContext,
    seed: u64,
) -> Result<ImPsiReport> {
    let lat = ctx.lattice();
    let tol = &lat.tol;
    let mut report = ImPsiReport::default();
    let bell = ctx.atom(&bell_state_for(ctx))?;
    let mut bell_outside = true;
    for (i, (a, b)) in pairs.iter().enumerate() {
        report.pairs += 1;
        let image = ctx.psi(a, b)?;
        let mut ok = true;
        match (some_state(lat, a)?, some_state(lat, b)?) {
            (Some(r1), Some(r2)) => {
                let p = product(&r1, &r2);
                let inside = image.rep().contains_op(p.op(), tol)?;
                let sep = is_separable(&p, ctx, lat.budget, mix64(seed, i as u64))?.status == SeparabilityStatus::Separable;
                if inside && sep {
                    report.product_states_inside += 1;
                } else {
                    ok = false;
                }
            }
            _ => ok = false,
        }
        if spanned_by_products(&image, a, b, ctx)? {
            report.product_spans += 1;
        } else {
            ok = false;
        }
        if lat.eq(&image, &bell)? {
            bell_outside = false;
        }
        if lat.leq(&bell, &image)? && image.dim() == 1 {
            bell_outside = false;
        }
        if !ok {
            report.failures.push(i);
        }
    }

    for k in 0..separable_samples {
        report.separable_samples += 1;
        let s = mix64(seed, 1000 + k as u64);
        let terms = 3;
        let mut rho = HermOp::zeros(ctx.shape().total());
        let mut firsts = Vec::new();
        let mut seconds = Vec::new();
        let weights = random_density(terms, terms, mix64(s, 0))?.op().eigenvalues();
        for (t, &w) in weights.iter().enumerate() {
            let r1 = random_density(ctx.n1(), 1 + t % ctx.n1(), mix64(s, 1 + 2 * t as u64))?;
            let r2 = random_density(ctx.n2(), 1 + t % ctx.n2(), mix64(s, 2 + 2 * t as u64))?;
            rho = &rho + &tensor(r1.op(), r2.op()).scale(w);
            firsts.push(r1.into_op());
            seconds.push(r2.into_op());
        }
        let l1 = lat.close(&HermSubspace::span(ctx.n1(), &firsts, tol)?, ctx.factor_shape(1))?;
        let l2 = lat.close(&HermSubspace::span(ctx.n2(), &seconds, tol)?, ctx.factor_shape(2))?;
        if ctx.psi(&l1, &l2)?.rep().contains_op(&rho, tol)? {
            report.separable_contained += 1;
        } else {
            report.failures.push(pairs.len() + k);
        }
    }
    report.entangled_outside_image = bell_outside;
    Ok(report)
}

/// A maximally entangled state on `min(n₁, n₂)` levels of each factor.
pub fn bell_state_for(ctx: &BipartiteContext) -> DensityOp {
    let (n1, n2) = (ctx.n1(), ctx.n2());
    let mut v = crate::herm::CVector::zeros(n1 * n2);
    for i in 0..n1.min(n2) {
        v[i * n2 + i] = num_complex::Complex64::new(1.0, 0.0);
    }
    DensityOp::pure(&v)
}

/// Each basis element of `image` expands exactly over `{x ⊗ y}` with `x`, `y`
/// basis elements of `a` and `b`.
fn spanned_by_products(image: &LatticeElement, a: &LatticeElement, b: &LatticeElement, ctx: &BipartiteContext) -> Result<bool> {
    let tol = &ctx.lattice().tol;
    let (ba, bb) = (a.rep().basis(), b.rep().basis());
    for z in image.rep().basis() {
        let mut rebuilt = HermOp::zeros(z.dim());
        for x in &ba {
            for y in &bb {
                let p = tensor(x, y);
                let c = crate::herm::hs_inner(&z, &p)?;
                rebuilt = &rebuilt + &p.scale(c);
            }
        }
        if (&z - &rebuilt).hs_norm() > tol.inclusion {
            return Ok(false);
        }
    }
    Ok(true)
}
