//! Hermitian operators on finite-dimensional Hilbert spaces.
//!
//! The real vector space of n×n Hermitian matrices carries the Hilbert–Schmidt
//! inner product `<A, B> = tr(A·B)`. Everything above this module works in the
//! real coordinates of [`herm_basis`], an HS-orthonormal basis made of the
//! normalized identity and the generalized Gell-Mann matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Numerical tolerances threaded through every operation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Hermiticity check on construction.
    pub herm: f64,
    /// `|tr ρ − 1|` allowed for a density.
    pub trace: f64,
    /// Smallest eigenvalue accepted as nonnegative.
    pub psd: f64,
    /// HS norm of `ρ² − ρ` accepted for a pure state.
    pub pure_state: f64,
    /// Relative singular-value cutoff deciding every subspace rank.
    pub rank: f64,
    /// Projector idempotency and eigenvalue tolerance.
    pub proj: f64,
    /// Compressed minimum eigenvalue above which a support counts as interior.
    pub interior: f64,
    /// Below `−infeasible` the state slice is declared empty.
    pub infeasible: f64,
    /// Relative projection residual allowed for membership and inclusion.
    pub inclusion: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            pure_state: 1e-8,
            rank: 1e-9,
            proj: 1e-9,
            interior: 1e-7,
            infeasible: 1e-6,
            inclusion: 1e-7,
        }
    }
}

/// Tensor structure of a Hilbert space: the dimensions of its factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SpaceShape {
    factors: Vec<usize>,
}

impl SpaceShape {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidParameter(format!("invalid shape {factors:?}")));
        }
        Ok(SpaceShape { factors })
    }

    pub fn simple(n: usize) -> Self {
        assert!(n >= 1, "Hilbert dimension must be positive");
        SpaceShape { factors: vec![n] }
    }

    pub fn bipartite(n1: usize, n2: usize) -> Self {
        assert!(n1 >= 1 && n2 >= 1, "Hilbert dimensions must be positive");
        SpaceShape { factors: vec![n1, n2] }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn is_bipartite(&self) -> bool {
        self.factors.len() == 2
    }

    /// Parses `"3"` or `"2x3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let factors = text
            .split(['x', 'X', '*'])
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad shape `{text}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        SpaceShape::new(factors)
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::ShapeMismatch { shape: self.factors.clone(), dim });
        }
        Ok(())
    }
}

impl fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A Hermitian operator, an element of the real space of observables.
#[derive(Clone, PartialEq)]
pub struct HermOp {
    m: CMatrix,
}

impl fmt::Debug for HermOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermOp{}", self.m)
    }
}

impl HermOp {
    /// Checks hermiticity within `tol.herm` (relative to the entry scale) and
    /// stores the exactly symmetrized matrix.
    pub fn with_tol(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        let adj = m.adjoint();
        let deviation = (&m - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if deviation > tol.herm * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(HermOp { m: (&m + &adj).scale(0.5) })
    }

    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tol(m, &Tolerances::default())
    }

    /// Symmetrizes without checking. For matrices Hermitian by construction.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermOp { m: (&m + &adj).scale(0.5) }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "{} entries for dimension {n}",
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_iterator(
            n,
            n,
            entries.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn zeros(n: usize) -> Self {
        HermOp { m: CMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        HermOp { m: CMatrix::identity(n, n) }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        HermOp { m }
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn projector_onto(v: &CVector) -> Self {
        let norm_sq = v.norm_squared();
        HermOp::from_matrix_unchecked((v * v.adjoint()).unscale(norm_sq))
    }

    /// Rank-one projector onto the computational basis vector `|k⟩`.
    pub fn ket_bra(n: usize, k: usize) -> Self {
        let mut v = CVector::zeros(n);
        v[k] = Complex64::new(1.0, 0.0);
        Self::projector_onto(&v)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermOp { m: self.m.scale(s) }
    }

    /// Product `A·B`, Hermitian only when the factors commute; symmetrized.
    pub fn jordan_square(&self) -> Self {
        HermOp::from_matrix_unchecked(&self.m * &self.m)
    }

    /// Conjugation `V† A V` for a (possibly rectangular) `V`.
    pub fn compress(&self, v: &CMatrix) -> Self {
        HermOp::from_matrix_unchecked(v.adjoint() * &self.m * v)
    }

    /// Embedding `V A V†`.
    pub fn expand(&self, v: &CMatrix) -> Self {
        HermOp::from_matrix_unchecked(v * &self.m * v.adjoint())
    }

    /// Eigenvalues in ascending order with matching eigenvector columns.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let eig = self.m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_columns(
            &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Clips negative eigenvalues to zero.
    pub fn psd_part(&self) -> Self {
        let (values, vectors) = self.eigh();
        let d = CMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| Complex64::new(v.max(0.0), 0.0)),
        ));
        HermOp::from_matrix_unchecked(&vectors * d * vectors.adjoint())
    }

    /// Transpose of the second tensor factor.
    pub fn partial_transpose(&self, shape: &SpaceShape) -> Result<Self> {
        shape.check(self.dim())?;
        if !shape.is_bipartite() {
            return Err(Error::InvalidParameter("partial transpose needs a bipartite shape".into()));
        }
        let (n1, n2) = (shape.factors()[0], shape.factors()[1]);
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for a in 0..n1 {
            for b in 0..n1 {
                for c in 0..n2 {
                    for d in 0..n2 {
                        out[(a * n2 + c, b * n2 + d)] = self.m[(a * n2 + d, b * n2 + c)];
                    }
                }
            }
        }
        Ok(HermOp { m: out })
    }
}

impl Add for &HermOp {
    type Output = HermOp;
    fn add(self, rhs: &HermOp) -> HermOp {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator sum");
        HermOp { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermOp {
    type Output = HermOp;
    fn sub(self, rhs: &HermOp) -> HermOp {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator difference");
        HermOp { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermOp {
    type Output = HermOp;
    fn mul(self, rhs: f64) -> HermOp {
        self.scale(rhs)
    }
}

impl Neg for &HermOp {
    type Output = HermOp;
    fn neg(self) -> HermOp {
        self.scale(-1.0)
    }
}

/// A positive semidefinite, trace-one Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    op: HermOp,
}

impl DensityOp {
    pub fn new(op: HermOp, tol: &Tolerances) -> Result<Self> {
        let trace = op.trace();
        let min_eigenvalue = op.min_eigenvalue();
        if (trace - 1.0).abs() > tol.trace || min_eigenvalue < -tol.psd {
            return Err(Error::NotDensity { trace, min_eigenvalue });
        }
        Ok(DensityOp { op })
    }

    /// Rescales a nonzero PSD operator to unit trace.
    pub fn normalized(op: &HermOp, tol: &Tolerances) -> Result<Self> {
        let trace = op.trace();
        if trace <= 0.0 {
            return Err(Error::NotDensity { trace, min_eigenvalue: op.min_eigenvalue() });
        }
        DensityOp::new(op.scale(1.0 / trace), tol)
    }

    /// For operators that are densities by construction.
    pub(crate) fn from_op_unchecked(op: HermOp) -> Self {
        DensityOp { op }
    }

    pub fn pure(v: &CVector) -> Self {
        DensityOp { op: HermOp::projector_onto(v) }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityOp { op: HermOp::identity(n).scale(1.0 / n as f64) }
    }

    pub fn op(&self) -> &HermOp {
        &self.op
    }

    pub fn into_op(self) -> HermOp {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

impl AsRef<HermOp> for DensityOp {
    fn as_ref(&self) -> &HermOp {
        &self.op
    }
}

fn check_dims(a: &HermOp, b: &HermOp) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// `tr(A·B)`.
pub fn hs_inner(a: &HermOp, b: &HermOp) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.m.iter().zip(b.m.iter()).map(|(x, y)| (x * y.conj()).re).sum())
}

pub fn is_density(a: &HermOp, tol: &Tolerances) -> bool {
    (a.trace() - 1.0).abs() <= tol.trace && a.min_eigenvalue() >= -tol.psd
}

pub fn is_pure(rho: &DensityOp, tol: &Tolerances) -> bool {
    (&rho.op.jordan_square() - &rho.op).hs_norm() <= tol.pure_state
}

/// Mean value `tr(ρ·M)`.
pub fn expectation(rho: &DensityOp, m: &HermOp) -> Result<f64> {
    hs_inner(&rho.op, m)
}

/// Kronecker product; the left operand acts on the first factor.
pub fn tensor(a: &HermOp, b: &HermOp) -> HermOp {
    HermOp { m: a.m.kronecker(&b.m) }
}

/// Reduced operator on factor `keep` (1 = left, 2 = right) of a bipartite space.
pub fn partial_trace(op: &HermOp, shape: &SpaceShape, keep: usize) -> Result<HermOp> {
    shape.check(op.dim())?;
    if !shape.is_bipartite() {
        return Err(Error::InvalidParameter("partial trace needs a bipartite shape".into()));
    }
    let (n1, n2) = (shape.factors()[0], shape.factors()[1]);
    let m = &op.m;
    let out = match keep {
        1 => CMatrix::from_fn(n1, n1, |a, b| (0..n2).map(|c| m[(a * n2 + c, b * n2 + c)]).sum()),
        2 => CMatrix::from_fn(n2, n2, |c, d| (0..n1).map(|a| m[(a * n2 + c, a * n2 + d)]).sum()),
        index => return Err(Error::SubsystemOutOfRange { index, factors: 2 }),
    };
    Ok(HermOp { m: out })
}

/// Number of real coordinates of an n×n Hermitian matrix.
pub fn real_dim(n: usize) -> usize {
    n * n
}

/// HS-orthonormal basis: `I/√n`, the n−1 diagonal Gell-Mann matrices, then for
/// each pair j<k the symmetric and antisymmetric off-diagonal generators.
pub fn herm_basis(n: usize) -> Vec<HermOp> {
    (0..real_dim(n))
        .map(|i| {
            let mut c = DVector::zeros(real_dim(n));
            c[i] = 1.0;
            from_coords(n, &c)
        })
        .collect()
}

/// Coordinates of `a` in [`herm_basis`]; an isometry onto `R^(n²)`.
pub fn to_coords(a: &HermOp) -> DVector<f64> {
    let n = a.dim();
    let m = &a.m;
    let mut c = DVector::zeros(real_dim(n));
    c[0] = a.trace() / (n as f64).sqrt();
    let mut partial = 0.0;
    for l in 1..n {
        partial += m[(l - 1, l - 1)].re;
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        c[l] = norm * (partial - l as f64 * m[(l, l)].re);
    }
    let mut idx = n;
    let s2 = std::f64::consts::SQRT_2;
    for j in 0..n {
        for k in (j + 1)..n {
            c[idx] = s2 * m[(j, k)].re;
            c[idx + 1] = -s2 * m[(j, k)].im;
            idx += 2;
        }
    }
    c
}

/// Inverse of [`to_coords`].
pub fn from_coords(n: usize, c: &DVector<f64>) -> HermOp {
    assert_eq!(c.len(), real_dim(n), "coordinate vector length");
    let mut m = CMatrix::zeros(n, n);
    let base = c[0] / (n as f64).sqrt();
    for j in 0..n {
        m[(j, j)].re = base;
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        for j in 0..l {
            m[(j, j)].re += norm * c[l];
        }
        m[(l, l)].re -= l as f64 * norm * c[l];
    }
    let mut idx = n;
    let inv_s2 = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        for k in (j + 1)..n {
            let z = Complex64::new(c[idx] * inv_s2, -c[idx + 1] * inv_s2);
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
            idx += 2;
        }
    }
    HermOp { m }
}

/// Pauli matrices, handy for examples and tests.
pub mod pauli {
    use super::{CMatrix, Complex64, HermOp};

    fn build(entries: [Complex64; 4]) -> HermOp {
        HermOp::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &entries))
    }

    pub fn x() -> HermOp {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        build([o, l, l, o])
    }

    pub fn y() -> HermOp {
        let o = Complex64::new(0.0, 0.0);
        build([o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o])
    }

    pub fn z() -> HermOp {
        HermOp::diag(&[1.0, -1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> DensityOp {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_vec(vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ]);
        DensityOp::pure(&v)
    }

    fn approx_eq(a: &HermOp, b: &HermOp, eps: f64) -> bool {
        (a - b).hs_norm() <= eps
    }

    #[test]
    fn hs_inner_examples() {
        assert_eq!(hs_inner(&HermOp::identity(2), &HermOp::identity(2)).unwrap(), 2.0);
        assert_eq!(hs_inner(&pauli::x(), &pauli::y()).unwrap(), 0.0);
        let rho = HermOp::ket_bra(2, 0);
        assert!((hs_inner(&rho, &rho).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            hs_inner(&HermOp::identity(2), &HermOp::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_predicates() {
        let tol = Tolerances::default();
        assert!(is_density(&HermOp::diag(&[0.5, 0.5]), &tol));
        assert!(!is_density(&HermOp::diag(&[1.5, -0.5]), &tol));
        assert!(is_density(&HermOp::identity(4).scale(0.25), &tol));

        let zero = DensityOp::new(HermOp::ket_bra(2, 0), &tol).unwrap();
        assert!(is_pure(&zero, &tol));
        assert!(!is_pure(&DensityOp::maximally_mixed(2), &tol));
        let almost = DensityOp::new(HermOp::diag(&[0.99, 0.01]), &tol).unwrap();
        assert!(!is_pure(&almost, &tol));
    }

    #[test]
    fn expectation_examples() {
        let mixed = DensityOp::maximally_mixed(2);
        assert_eq!(expectation(&mixed, &pauli::z()).unwrap(), 0.0);
        let zero = DensityOp::pure(&CVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        assert_eq!(expectation(&zero, &pauli::z()).unwrap(), 1.0);
    }

    #[test]
    fn tensor_examples() {
        assert!(approx_eq(
            &tensor(&HermOp::identity(2), &HermOp::identity(2)),
            &HermOp::identity(4),
            0.0
        ));
        let p = tensor(&HermOp::ket_bra(2, 0), &HermOp::ket_bra(2, 1));
        assert!(approx_eq(&p, &HermOp::ket_bra(4, 1), 0.0));
    }

    #[test]
    fn partial_trace_examples() {
        let tol = Tolerances::default();
        let shape = SpaceShape::bipartite(2, 2);
        let reduced = partial_trace(bell().op(), &shape, 1).unwrap();
        assert!(approx_eq(&reduced, &HermOp::identity(2).scale(0.5), 1e-15));
        let reduced = partial_trace(&HermOp::identity(4).scale(0.25), &shape, 2).unwrap();
        assert!(approx_eq(&reduced, &HermOp::identity(2).scale(0.5), 1e-15));

        let a = HermOp::diag(&[0.3, 0.7]);
        let b = HermOp::diag(&[0.1, 0.2, 0.7]);
        let shape = SpaceShape::bipartite(2, 3);
        let ab = tensor(&a, &b);
        assert!(approx_eq(&partial_trace(&ab, &shape, 1).unwrap(), &a, 1e-15));
        assert!(approx_eq(&partial_trace(&ab, &shape, 2).unwrap(), &b, 1e-15));
        assert!(is_density(&ab, &tol));

        assert!(matches!(
            partial_trace(&ab, &shape, 3),
            Err(Error::SubsystemOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            partial_trace(&ab, &SpaceShape::bipartite(2, 2), 1),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn basis_is_orthonormal() {
        for n in 1..=4 {
            let basis = herm_basis(n);
            assert_eq!(basis.len(), n * n);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((hs_inner(a, b).unwrap() - expected).abs() < 1e-14, "n={n} i={i} j={j}");
                }
            }
        }
        let basis = herm_basis(2);
        assert!(approx_eq(&basis[0], &HermOp::identity(2).scale(std::f64::consts::FRAC_1_SQRT_2), 1e-15));
    }

    #[test]
    fn coordinates_match_inner_products() {
        let a = HermOp::new(CMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::new(0.2, 0.0),
                Complex64::new(0.1, -0.3),
                Complex64::new(-0.4, 0.2),
                Complex64::new(0.1, 0.3),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.5, 0.5),
                Complex64::new(-0.4, -0.2),
                Complex64::new(0.5, -0.5),
                Complex64::new(0.7, 0.0),
            ],
        ))
        .unwrap();
        let c = to_coords(&a);
        for (i, b) in herm_basis(3).iter().enumerate() {
            assert!((c[i] - hs_inner(&a, b).unwrap()).abs() < 1e-14);
        }
        assert!(approx_eq(&from_coords(3, &c), &a, 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(matches!(HermOp::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn shape_parsing() {
        assert_eq!(SpaceShape::parse("2x3").unwrap(), SpaceShape::bipartite(2, 3));
        assert_eq!(SpaceShape::parse("4").unwrap(), SpaceShape::simple(4));
        assert!(SpaceShape::parse("2x").is_err());
        assert_eq!(SpaceShape::bipartite(2, 3).to_string(), "2x3");
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_half() {
        let pt = bell().op().partial_transpose(&SpaceShape::bipartite(2, 2)).unwrap();
        let values = pt.eigenvalues();
        assert!((values[0] + 0.5).abs() < 1e-12);
        assert!((values[3] - 0.5).abs() < 1e-12);
    }
}
