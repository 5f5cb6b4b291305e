//! Real-linear subspaces of the Hermitian operators under the HS inner product.
//!
//! A subspace is stored as an orthonormal coordinate basis in the real
//! coordinates of [`crate::herm::herm_basis`]. Every rank decision goes through
//! one relative singular-value cutoff (`Tolerances::rank`); equality is mutual
//! inclusion, never a comparison of bases.

use crate::linalg::{svd_real, svd_real_thin};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::herm::{from_coords, real_dim, to_coords, HermOp, Tolerances};

#[derive(Debug, Clone)]
pub struct HermSubspace {
    n: usize,
    /// `n² × k`, orthonormal columns.
    q: DMatrix<f64>,
}

impl HermSubspace {
    pub fn zero(n: usize) -> Self {
        HermSubspace { n, q: DMatrix::zeros(real_dim(n), 0) }
    }

    pub fn full(n: usize) -> Self {
        HermSubspace { n, q: DMatrix::identity(real_dim(n), real_dim(n)) }
    }

    /// HS-orthonormalized span of `generators`, all of Hilbert dimension `n`.
    pub fn span(n: usize, generators: &[HermOp], tol: &Tolerances) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch { left: n, right: g.dim() });
        }
        let cols: Vec<DVector<f64>> = generators.iter().map(to_coords).collect();
        Ok(Self::from_coord_columns(n, &cols, tol.rank))
    }

    /// Span of coordinate vectors with the relative cutoff `rank_tol`.
    pub fn from_coord_columns(n: usize, cols: &[DVector<f64>], rank_tol: f64) -> Self {
        if cols.is_empty() {
            return Self::zero(n);
        }
        let m = DMatrix::from_columns(cols);
        HermSubspace { n, q: range_basis(&m, rank_tol) }
    }

    /// Wraps columns already known to be orthonormal.
    pub(crate) fn from_orthonormal(n: usize, q: DMatrix<f64>) -> Self {
        debug_assert_eq!(q.nrows(), real_dim(n));
        HermSubspace { n, q }
    }

    /// Hilbert dimension of the underlying space.
    pub fn ambient_hilbert_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.q.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn basis(&self) -> Vec<HermOp> {
        self.q.column_iter().map(|c| from_coords(self.n, &c.into_owned())).collect()
    }

    fn check_ambient(&self, other: &HermSubspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Orthogonal projection of a coordinate vector.
    pub fn project_coords(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.q * (self.q.transpose() * c)
    }

    pub fn project(&self, x: &HermOp) -> HermOp {
        from_coords(self.n, &self.project_coords(&to_coords(x)))
    }

    /// `‖x − Px‖ / ‖x‖` (zero for the zero vector).
    pub fn relative_residual(&self, c: &DVector<f64>) -> f64 {
        let norm = c.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (c - self.project_coords(c)).norm() / norm
    }

    pub fn contains_op(&self, x: &HermOp, tol: &Tolerances) -> Result<bool> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: x.dim() });
        }
        Ok(self.relative_residual(&to_coords(x)) <= tol.inclusion)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &HermSubspace, tol: &Tolerances) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other
            .q
            .column_iter()
            .all(|c| self.relative_residual(&c.into_owned()) <= tol.inclusion))
    }

    /// Equality as mutual inclusion.
    pub fn same_as(&self, other: &HermSubspace, tol: &Tolerances) -> Result<bool> {
        Ok(self.contains(other, tol)? && other.contains(self, tol)?)
    }

    pub fn intersect(&self, other: &HermSubspace, tol: &Tolerances) -> Result<HermSubspace> {
        self.intersect_with_cutoff(other, tol.rank)
    }

    /// Null space of the stacked complement projectors `[I − P_s; I − P_t]`.
    pub fn intersect_with_cutoff(&self, other: &HermSubspace, cutoff: f64) -> Result<HermSubspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let big = real_dim(self.n);
        let id = DMatrix::<f64>::identity(big, big);
        let cs = &id - &self.q * self.q.transpose();
        let ct = &id - &other.q * other.q.transpose();
        let mut stacked = DMatrix::zeros(2 * big, big);
        stacked.rows_mut(0, big).copy_from(&cs);
        stacked.rows_mut(big, big).copy_from(&ct);
        Ok(HermSubspace { n: self.n, q: null_basis(&stacked, cutoff) })
    }

    pub fn sum(&self, other: &HermSubspace, tol: &Tolerances) -> Result<HermSubspace> {
        self.check_ambient(other)?;
        let cols: Vec<DVector<f64>> = self
            .q
            .column_iter()
            .chain(other.q.column_iter())
            .map(|c| c.into_owned())
            .collect();
        Ok(Self::from_coord_columns(self.n, &cols, tol.rank))
    }

    pub fn orth_complement(&self) -> HermSubspace {
        let big = real_dim(self.n);
        if self.is_zero() {
            return Self::full(self.n);
        }
        let comp = DMatrix::<f64>::identity(big, big) - &self.q * self.q.transpose();
        // Singular values of a projector are 0 or 1; 0.5 separates them.
        HermSubspace { n: self.n, q: range_basis_absolute(&comp, 0.5) }
    }

    /// Largest principal angle in radians; `π/2` when dimensions differ.
    pub fn distance(&self, other: &HermSubspace) -> Result<f64> {
        self.check_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(std::f64::consts::FRAC_PI_2);
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let cosines = (self.q.transpose() * &other.q).singular_values();
        let smallest = cosines.iter().copied().fold(f64::INFINITY, f64::min).min(1.0);
        // sin is better conditioned than acos near zero.
        let residual = &other.q - &self.q * (self.q.transpose() * &other.q);
        let sine = residual.singular_values().iter().copied().fold(0.0, f64::max);
        Ok(if smallest > 0.9 { sine.min(1.0).asin() } else { smallest.acos() })
    }

    /// A trace-one element of minimal HS norm, or `None` when every element is
    /// traceless.
    pub fn min_norm_trace_one(&self, tol: &Tolerances) -> Option<HermOp> {
        let trace_row = self.trace_functional();
        let norm_sq = trace_row.norm_squared();
        if norm_sq.sqrt() <= tol.rank {
            return None;
        }
        let c = &self.q * trace_row.unscale(norm_sq);
        Some(from_coords(self.n, &c))
    }

    /// Traces of the basis elements.
    pub fn trace_functional(&self) -> DVector<f64> {
        // Only the first coordinate (identity direction) carries trace.
        let s = (self.n as f64).sqrt();
        DVector::from_iterator(self.dim(), self.q.row(0).iter().map(|&x| x * s))
    }
}

/// Orthonormal basis of the column range, relative cutoff.
pub(crate) fn range_basis(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let d = svd_real_thin(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let keep: Vec<_> = (0..d.s.len()).filter(|&i| d.s[i] > rel * smax).map(|i| d.u.column(i).into_owned()).collect();
    columns_or_empty(m.nrows(), keep)
}

/// Left singular vectors whose singular value exceeds `cut`.
fn range_basis_absolute(m: &DMatrix<f64>, cut: f64) -> DMatrix<f64> {
    let d = svd_real_thin(m);
    let keep: Vec<_> = (0..d.s.len()).filter(|&i| d.s[i] > cut).map(|i| d.u.column(i).into_owned()).collect();
    columns_or_empty(m.nrows(), keep)
}

/// Orthonormal basis of the null space; singular values up to
/// `rel·max(σ_max, 1)` count as zero.
pub(crate) fn null_basis(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    let d = svd_real(m);
    let cut = rel * d.s.first().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<DVector<f64>> =
        (0..cols).filter(|&i| i >= d.s.len() || d.s[i] <= cut).map(|i| d.v.column(i).into_owned()).collect();
    columns_or_empty(cols, keep)
}

fn columns_or_empty(rows: usize, cols: Vec<DVector<f64>>) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(rows, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::pauli;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn span_examples() {
        let t = tol();
        let s = HermSubspace::span(2, &[pauli::x(), pauli::x().scale(2.0)], &t).unwrap();
        assert_eq!(s.dim(), 1);
        let full = HermSubspace::span(
            2,
            &[HermOp::identity(2), pauli::x(), pauli::y(), pauli::z()],
            &t,
        )
        .unwrap();
        assert_eq!(full.dim(), 4);
        assert!(HermSubspace::span(2, &[], &t).unwrap().is_zero());
        assert!(matches!(
            HermSubspace::span(2, &[HermOp::identity(3)], &t),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersect_examples() {
        let t = tol();
        let a = HermSubspace::span(2, &[HermOp::identity(2), pauli::z()], &t).unwrap();
        let b = HermSubspace::span(2, &[HermOp::identity(2), pauli::x()], &t).unwrap();
        let ab = a.intersect(&b, &t).unwrap();
        let id = HermSubspace::span(2, &[HermOp::identity(2)], &t).unwrap();
        assert!(ab.same_as(&id, &t).unwrap());
        assert!(a.intersect(&a, &t).unwrap().same_as(&a, &t).unwrap());
        assert!(a.intersect(&HermSubspace::zero(2), &t).unwrap().is_zero());
        assert!(a.intersect(&HermSubspace::zero(3), &t).is_err());
    }

    #[test]
    fn sum_examples() {
        let t = tol();
        let x = HermSubspace::span(2, &[pauli::x()], &t).unwrap();
        let y = HermSubspace::span(2, &[pauli::y()], &t).unwrap();
        assert_eq!(x.sum(&y, &t).unwrap().dim(), 2);
        assert!(x.sum(&HermSubspace::zero(2), &t).unwrap().same_as(&x, &t).unwrap());
    }

    #[test]
    fn complement_examples() {
        let t = tol();
        let id = HermSubspace::span(2, &[HermOp::identity(2)], &t).unwrap();
        let traceless = HermSubspace::span(2, &[pauli::x(), pauli::y(), pauli::z()], &t).unwrap();
        assert!(id.orth_complement().same_as(&traceless, &t).unwrap());
        assert_eq!(HermSubspace::zero(3).orth_complement().dim(), 9);
        assert!(HermSubspace::full(2).orth_complement().is_zero());
        // Round-off in a spanned full space must not survive as a complement.
        let x = pauli::x().scale(0.3);
        let gens = [HermOp::identity(2), &pauli::z() + &x, &pauli::x() + &pauli::y().scale(0.7), pauli::y()];
        let full = HermSubspace::span(2, &gens, &t).unwrap();
        assert_eq!(full.dim(), 4);
        assert!(full.orth_complement().is_zero());
    }

    #[test]
    fn contains_examples() {
        let t = tol();
        let diag = HermSubspace::span(2, &[HermOp::identity(2), pauli::z()], &t).unwrap();
        assert!(diag.contains_op(&HermOp::diag(&[0.3, 0.7]), &t).unwrap());
        let z = HermSubspace::span(2, &[pauli::z()], &t).unwrap();
        assert!(!z.contains_op(&HermOp::identity(2), &t).unwrap());
    }

    #[test]
    fn min_norm_trace_one() {
        let t = tol();
        let z = HermSubspace::span(2, &[pauli::z()], &t).unwrap();
        assert!(z.min_norm_trace_one(&t).is_none());
        let s = HermSubspace::span(2, &[HermOp::ket_bra(2, 0), pauli::x()], &t).unwrap();
        let x0 = s.min_norm_trace_one(&t).unwrap();
        assert!((&x0 - &HermOp::ket_bra(2, 0)).hs_norm() < 1e-14);
    }

    #[test]
    fn distance_is_zero_for_equal_subspaces() {
        let t = tol();
        let a = HermSubspace::span(2, &[HermOp::identity(2), pauli::z()], &t).unwrap();
        let b = HermSubspace::span(2, &[HermOp::ket_bra(2, 0), HermOp::ket_bra(2, 1)], &t).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-12);
        let c = HermSubspace::span(2, &[HermOp::identity(2), pauli::x()], &t).unwrap();
        assert!((a.distance(&c).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
