//! The von Neumann lattice of projectors and its embedding into 𝓛 as faces.

use crate::linalg::{svd_complex, svd_complex_thin};
use crate::error::{Error, Result};
use crate::herm::{herm_basis, to_coords, CMatrix, HermOp, SpaceShape, Tolerances};
use crate::lattice::{Lattice, LatticeElement};
use crate::subspace::HermSubspace;

/// An orthogonal projector on the Hilbert space.
#[derive(Debug, Clone)]
pub struct VNElement {
    projector: HermOp,
    rank: usize,
    /// Orthonormal basis of the range.
    range: CMatrix,
}

impl VNElement {
    /// Validates idempotency (`‖P² − P‖ ≤ tol.proj`) and the 0/1 spectrum.
    pub fn new(p: HermOp, tol: &Tolerances) -> Result<Self> {
        let deviation = (&p.jordan_square() - &p).hs_norm();
        let (values, vectors) = p.eigh();
        let spectral = values.iter().map(|&l| l.abs().min((l - 1.0).abs())).fold(0.0, f64::max);
        if deviation > tol.proj.max(1e-12 * p.dim() as f64) || spectral > 1e-8 {
            return Err(Error::NotProjector { deviation: deviation.max(spectral) });
        }
        let cols: Vec<_> = values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0.5)
            .map(|(i, _)| vectors.column(i).into_owned())
            .collect();
        Ok(Self::from_orthonormal(p.dim(), cols))
    }

    /// Projector onto the span of the columns of `v`.
    pub fn from_columns(v: &CMatrix, tol: &Tolerances) -> Self {
        let n = v.nrows();
        Self::from_orthonormal_matrix(n, complex_range(v, tol.rank))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_orthonormal_matrix(n, CMatrix::zeros(n, 0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_orthonormal_matrix(n, CMatrix::identity(n, n))
    }

    fn from_orthonormal(n: usize, cols: Vec<nalgebra::DVector<num_complex::Complex64>>) -> Self {
        let range = if cols.is_empty() { CMatrix::zeros(n, 0) } else { CMatrix::from_columns(&cols) };
        Self::from_orthonormal_matrix(n, range)
    }

    fn from_orthonormal_matrix(n: usize, range: CMatrix) -> Self {
        let projector = if range.ncols() == 0 {
            HermOp::zeros(n)
        } else {
            HermOp::identity(range.ncols()).expand(&range)
        };
        VNElement { rank: range.ncols(), projector, range }
    }

    pub fn projector(&self) -> &HermOp {
        &self.projector
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    pub fn range(&self) -> &CMatrix {
        &self.range
    }
}

fn check_dims(p: &VNElement, q: &VNElement) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    Ok(())
}

/// Projector onto `range(p) ∩ range(q)`.
pub fn vn_meet(p: &VNElement, q: &VNElement, tol: &Tolerances) -> Result<VNElement> {
    check_dims(p, q)?;
    let n = p.dim();
    let id = CMatrix::identity(n, n);
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked.rows_mut(0, n).copy_from(&(&id - p.projector.matrix()));
    stacked.rows_mut(n, n).copy_from(&(&id - q.projector.matrix()));
    Ok(VNElement::from_orthonormal_matrix(n, complex_null(&stacked, tol.rank)))
}

/// Projector onto `range(p) + range(q)`.
pub fn vn_join(p: &VNElement, q: &VNElement, tol: &Tolerances) -> Result<VNElement> {
    check_dims(p, q)?;
    let n = p.dim();
    let mut cols = CMatrix::zeros(n, p.rank + q.rank);
    cols.columns_mut(0, p.rank).copy_from(&p.range);
    cols.columns_mut(p.rank, q.rank).copy_from(&q.range);
    Ok(VNElement::from_columns(&cols, tol))
}

/// `I − p`.
pub fn vn_neg(p: &VNElement) -> VNElement {
    let n = p.dim();
    let comp = CMatrix::identity(n, n) - p.projector.matrix();
    VNElement::from_orthonormal_matrix(n, complex_range(&comp, 0.5))
}

/// The face `{ρ ∈ 𝓒 : supp ρ ⊆ range(p)}` as an element of 𝓛. Its good
/// representative `{X : X = pXp}` is written down directly.
pub fn face_embed(p: &VNElement) -> LatticeElement {
    face_embed_in(p, SpaceShape::simple(p.dim()))
}

pub fn face_embed_in(p: &VNElement, shape: SpaceShape) -> LatticeElement {
    let n = p.dim();
    let r = p.rank;
    let rep = if r == 0 {
        HermSubspace::zero(n)
    } else {
        let cols: Vec<_> = herm_basis(r).iter().map(|e| to_coords(&e.expand(&p.range))).collect();
        HermSubspace::from_orthonormal(n, nalgebra::DMatrix::from_columns(&cols))
    };
    LatticeElement::from_good(rep, shape)
}

/// How the vN operations compare with the 𝓛 operations on faces.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CompareReport {
    /// `F(p ∧ q) = F(p) ∧ F(q)`.
    pub meet_preserved: bool,
    /// `F(p) ∨ F(q) ≤ F(p ∨ q)`.
    pub join_below: bool,
    /// The join inequality is strict.
    pub join_strict: bool,
    /// `¬F(p) ≤ F(¬p)`.
    pub neg_below: bool,
    pub neg_strict: bool,
    /// When `F(p) ≤ F(q)`: both joins equal `F(q)`.
    pub nested_joins_agree: Option<bool>,
    pub lattice_join_dim: usize,
    pub face_join_dim: usize,
}

impl CompareReport {
    pub fn all_hold(&self) -> bool {
        self.meet_preserved && self.join_below && self.neg_below && self.nested_joins_agree.unwrap_or(true)
    }
}

pub fn compare_ops(lat: &Lattice, p: &VNElement, q: &VNElement) -> Result<CompareReport> {
    check_dims(p, q)?;
    let tol = &lat.tol;
    let (fp, fq) = (face_embed(p), face_embed(q));
    let meet_preserved = lat.eq(&face_embed(&vn_meet(p, q, tol)?), &lat.meet(&fp, &fq)?)?;
    let l_join = lat.join(&fp, &fq)?;
    let f_join = face_embed(&vn_join(p, q, tol)?);
    let join_below = lat.leq(&l_join, &f_join)?;
    let join_strict = join_below && !lat.leq(&f_join, &l_join)?;
    let l_neg = lat.neg(&fp)?;
    let f_neg = face_embed(&vn_neg(p));
    let neg_below = lat.leq(&l_neg, &f_neg)?;
    let neg_strict = neg_below && !lat.leq(&f_neg, &l_neg)?;
    let nested_joins_agree = if lat.leq(&fp, &fq)? {
        Some(lat.eq(&l_join, &f_join)? && lat.eq(&l_join, &fq)?)
    } else {
        None
    };
    Ok(CompareReport {
        meet_preserved,
        join_below,
        join_strict,
        neg_below,
        neg_strict,
        nested_joins_agree,
        lattice_join_dim: l_join.dim(),
        face_join_dim: f_join.dim(),
    })
}

/// Orthonormal basis of the column range; singular values above
/// `rel·max(σ_max, 1)` count.
pub(crate) fn complex_range(m: &CMatrix, rel: f64) -> CMatrix {
    let n = m.nrows();
    let d = svd_complex_thin(m);
    let cut = rel * d.s.first().copied().unwrap_or(0.0).max(1.0);
    let cols: Vec<_> = (0..d.s.len()).filter(|&i| d.s[i] > cut).map(|i| d.u.column(i).into_owned()).collect();
    if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the null space.
pub(crate) fn complex_null(m: &CMatrix, rel: f64) -> CMatrix {
    let cols = m.ncols();
    let d = svd_complex(m);
    let cut = rel * d.s.first().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<_> =
        (0..cols).filter(|&i| i >= d.s.len() || d.s[i] <= cut).map(|i| d.v.column(i).into_owned()).collect();
    if keep.is_empty() {
        CMatrix::zeros(cols, 0)
    } else {
        CMatrix::from_columns(&keep)
    }
}
