//! The lattice 𝓛 of density operators.
//!
//! An element is a set `S ∩ 𝓒` stored by its good representative, the least
//! subspace cutting out the same states. Order is inclusion of
//! representatives, join is their sum (already good), while meet and negation
//! are re-closed through facial reduction.

use crate::convex::{good_representative, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::herm::{DensityOp, HermOp, SpaceShape, Tolerances};
use crate::subspace::HermSubspace;

/// An element of 𝓛 in good-representative form.
#[derive(Debug, Clone)]
pub struct LatticeElement {
    rep: HermSubspace,
    shape: SpaceShape,
}

impl LatticeElement {
    /// Wraps a subspace already known to be good.
    pub(crate) fn from_good(rep: HermSubspace, shape: SpaceShape) -> Self {
        debug_assert_eq!(rep.ambient_hilbert_dim(), shape.total());
        LatticeElement { rep, shape }
    }

    /// The bottom element 𝟎 (no states).
    pub fn zero(shape: SpaceShape) -> Self {
        LatticeElement { rep: HermSubspace::zero(shape.total()), shape }
    }

    /// The top element 𝟏 (all of 𝓒).
    pub fn one(shape: SpaceShape) -> Self {
        LatticeElement { rep: HermSubspace::full(shape.total()), shape }
    }

    pub fn rep(&self) -> &HermSubspace {
        &self.rep
    }

    pub fn shape(&self) -> &SpaceShape {
        &self.shape
    }

    pub fn hilbert_dim(&self) -> usize {
        self.shape.total()
    }

    /// Dimension of the good representative.
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.dim() == self.hilbert_dim() * self.hilbert_dim()
    }

    /// Same element read over another tensor structure of the same space.
    pub fn with_shape(self, shape: SpaceShape) -> Result<Self> {
        shape.check(self.hilbert_dim())?;
        Ok(LatticeElement { rep: self.rep, shape })
    }
}

/// Result of a modular-law check.
#[derive(Debug, Clone)]
pub struct ModularReport {
    pub holds: bool,
    /// `a ∨ (b ∧ c)`.
    pub lhs: LatticeElement,
    /// `(a ∨ b) ∧ c`.
    pub rhs: LatticeElement,
}

/// Lattice operations with a fixed tolerance set and facial-reduction budget.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    pub tol: Tolerances,
    pub budget: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice { tol: Tolerances::default(), budget: DEFAULT_BUDGET }
    }
}

impl Lattice {
    pub fn new(tol: Tolerances, budget: usize) -> Self {
        Lattice { tol, budget }
    }

    /// The element `[S]`: closes `s` to its good representative.
    pub fn close(&self, s: &HermSubspace, shape: SpaceShape) -> Result<LatticeElement> {
        shape.check(s.ambient_hilbert_dim())?;
        let rep = good_representative(s, &self.tol, self.budget)?;
        Ok(LatticeElement { rep, shape })
    }

    /// Accepts `s` as an element only if it already is a good representative.
    pub fn element(&self, s: HermSubspace, shape: SpaceShape) -> Result<LatticeElement> {
        shape.check(s.ambient_hilbert_dim())?;
        if !self.is_good(&s)? {
            return Err(Error::Precondition("subspace is not a good representative".into()));
        }
        Ok(LatticeElement { rep: s, shape })
    }

    pub fn is_good(&self, s: &HermSubspace) -> Result<bool> {
        let closed = good_representative(s, &self.tol, self.budget)?;
        closed.same_as(s, &self.tol)
    }

    /// `{ρ}`, represented by `span{ρ}`.
    pub fn atom(&self, rho: &DensityOp) -> Result<LatticeElement> {
        self.atom_in(rho, SpaceShape::simple(rho.dim()))
    }

    pub fn atom_in(&self, rho: &DensityOp, shape: SpaceShape) -> Result<LatticeElement> {
        shape.check(rho.dim())?;
        let rep = HermSubspace::span(rho.dim(), std::slice::from_ref(rho.op()), &self.tol)?;
        Ok(LatticeElement { rep, shape })
    }

    pub fn meet(&self, a: &LatticeElement, b: &LatticeElement) -> Result<LatticeElement> {
        check_same(a, b)?;
        let raw = a.rep.intersect(&b.rep, &self.tol)?;
        self.close(&raw, a.shape.clone())
    }

    pub fn join(&self, a: &LatticeElement, b: &LatticeElement) -> Result<LatticeElement> {
        check_same(a, b)?;
        let rep = a.rep.sum(&b.rep, &self.tol)?;
        debug_assert!(
            self.is_good(&rep).unwrap_or(true),
            "sum of good representatives is not good"
        );
        Ok(LatticeElement { rep, shape: a.shape.clone() })
    }

    pub fn neg(&self, a: &LatticeElement) -> Result<LatticeElement> {
        self.close(&a.rep.orth_complement(), a.shape.clone())
    }

    pub fn leq(&self, a: &LatticeElement, b: &LatticeElement) -> Result<bool> {
        check_same(a, b)?;
        b.rep.contains(&a.rep, &self.tol)
    }

    /// Equality as mutual order.
    pub fn eq(&self, a: &LatticeElement, b: &LatticeElement) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    pub fn is_atom(&self, a: &LatticeElement) -> bool {
        a.dim() == 1
    }

    /// Whether `op` is a state of `a`.
    pub fn contains_state(&self, a: &LatticeElement, op: &HermOp) -> Result<bool> {
        a.rep.contains_op(op, &self.tol)
    }

    /// Evaluates both sides of the modular law for `a ≤ c`.
    pub fn check_modular(&self, a: &LatticeElement, b: &LatticeElement, c: &LatticeElement) -> Result<ModularReport> {
        check_same(a, b)?;
        check_same(a, c)?;
        if !self.leq(a, c)? {
            return Err(Error::Precondition("modular check needs a ≤ c".into()));
        }
        let lhs = self.join(a, &self.meet(b, c)?)?;
        let rhs = self.meet(&self.join(a, b)?, c)?;
        let holds = self.eq(&lhs, &rhs)?;
        Ok(ModularReport { holds, lhs, rhs })
    }
}

fn check_same(a: &LatticeElement, b: &LatticeElement) -> Result<()> {
    if a.hilbert_dim() != b.hilbert_dim() {
        return Err(Error::DimensionMismatch { left: a.hilbert_dim(), right: b.hilbert_dim() });
    }
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch { shape: b.shape.factors().to_vec(), dim: a.hilbert_dim() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::default()
    }

    fn ket(n: usize, k: usize) -> DensityOp {
        DensityOp::new(HermOp::ket_bra(n, k), &Tolerances::default()).unwrap()
    }

    #[test]
    fn atoms_and_bounds() {
        let l = lat();
        let a = l.atom(&ket(2, 0)).unwrap();
        assert!(l.is_atom(&a));
        let mixed = l.atom(&DensityOp::maximally_mixed(2)).unwrap();
        assert!(l.is_atom(&mixed));
        let zero = LatticeElement::zero(SpaceShape::simple(2));
        let one = LatticeElement::one(SpaceShape::simple(2));
        assert!(!l.is_atom(&zero) && !l.is_atom(&one));
        assert!(l.leq(&zero, &a).unwrap() && l.leq(&a, &one).unwrap());
    }

    #[test]
    fn meet_and_join_examples() {
        let l = lat();
        let a = l.atom(&ket(2, 0)).unwrap();
        let b = l.atom(&ket(2, 1)).unwrap();
        assert!(l.meet(&a, &b).unwrap().is_zero());
        assert!(l.eq(&l.meet(&a, &a).unwrap(), &a).unwrap());
        let j = l.join(&a, &b).unwrap();
        assert_eq!(j.dim(), 2);
        assert!(!l.is_atom(&j));
        let zero = LatticeElement::zero(SpaceShape::simple(2));
        let one = LatticeElement::one(SpaceShape::simple(2));
        assert!(l.eq(&l.join(&a, &zero).unwrap(), &a).unwrap());
        assert!(l.join(&a, &one).unwrap().is_one());
    }

    #[test]
    fn negation_examples() {
        let l = lat();
        let mixed = l.atom(&DensityOp::maximally_mixed(2)).unwrap();
        let n1 = l.neg(&mixed).unwrap();
        assert!(n1.is_zero());
        assert!(l.neg(&n1).unwrap().is_one());
        let zero = LatticeElement::zero(SpaceShape::simple(2));
        assert!(l.neg(&zero).unwrap().is_one());
        let up = l.atom(&ket(2, 0)).unwrap();
        let down = l.atom(&ket(2, 1)).unwrap();
        assert!(l.eq(&l.neg(&up).unwrap(), &down).unwrap());
    }

    #[test]
    fn modular_edge_cases() {
        let l = lat();
        let zero = LatticeElement::zero(SpaceShape::simple(2));
        let one = LatticeElement::one(SpaceShape::simple(2));
        let b = l.atom(&ket(2, 1)).unwrap();
        let c = l.join(&l.atom(&ket(2, 0)).unwrap(), &b).unwrap();
        let r = l.check_modular(&zero, &b, &c).unwrap();
        assert!(r.holds);
        assert!(l.eq(&r.lhs, &l.meet(&b, &c).unwrap()).unwrap());
        let a = l.atom(&ket(2, 0)).unwrap();
        let r = l.check_modular(&a, &b, &one).unwrap();
        assert!(r.holds);
        assert!(l.eq(&r.rhs, &l.join(&a, &b).unwrap()).unwrap());
        assert!(l.check_modular(&one, &b, &a).is_err());
    }
}
