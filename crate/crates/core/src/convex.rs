//! Geometry of `K = S ∩ 𝓒`: feasibility, minimal faces and the good
//! representative `⟨S ∩ 𝓒⟩`.
//!
//! The good representative is computed by facial reduction. Each round
//! maximizes the smallest eigenvalue of the compression of the trace-one slice
//! of `S` onto the current support candidate. A strictly positive optimum
//! means the candidate is the support of a maximum-rank point of `K`. An
//! optimum at zero comes with a dual PSD matrix orthogonal to the slice; its
//! kernel is the next, smaller support candidate. The last round's subspace
//! `S ∩ {X : X = PXP}` is the good representative.

use nalgebra::{DMatrix, DVector};

use crate::barrier::{Lmi, PathPoint, Schedule};
use crate::error::{Error, Result};
use crate::herm::{from_coords, hs_inner, to_coords, CMatrix, DensityOp, HermOp, Tolerances};
use crate::linalg::{svd_complex_thin, svd_real, svd_real_thin};
use crate::subspace::{null_basis, HermSubspace};

pub mod oracle;

pub use oracle::brute_force_span;

/// Default Newton iteration cap shared by all rounds of one computation.
pub const DEFAULT_BUDGET: usize = 5000;

/// Relative eigenvalue cutoff splitting a dual certificate into range and kernel.
const CERTIFICATE_SPLIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Empty,
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub status: Feasibility,
    /// Present iff feasible.
    pub witness: Option<DensityOp>,
    pub best_lambda_min: f64,
}

/// Audit trail of a facial reduction.
#[derive(Debug, Clone)]
pub struct FaceCertificate {
    /// Projector onto the support of a maximum-rank point of `K`.
    pub support: HermOp,
    /// PSD matrices orthogonal to `S`, one per reduction round.
    pub reduction_steps: Vec<HermOp>,
    /// Relative-interior point; positive definite on the support.
    pub interior_point: DensityOp,
    /// Smallest eigenvalue of the interior point compressed to the support.
    pub interior_lambda_min: f64,
    spectrahedron: Spectrahedron,
}

impl FaceCertificate {
    pub fn rank(&self) -> usize {
        self.spectrahedron.support.ncols()
    }

    /// `S ∩ {X : X = PXP}`, the good representative.
    pub fn face_space(&self) -> &HermSubspace {
        &self.spectrahedron.space
    }

    pub fn spectrahedron(&self) -> &Spectrahedron {
        &self.spectrahedron
    }
}

/// `K` described on its own support: `{X0 + Σ yⱼ Dⱼ : V†(X0 + Σ yⱼ Dⱼ)V ⪰ 0}`
/// with a known strictly feasible `y`.
#[derive(Debug, Clone)]
pub struct Spectrahedron {
    n: usize,
    support: CMatrix,
    space: HermSubspace,
    slice: Slice,
    interior: DVector<f64>,
}

#[derive(Debug, Clone)]
struct Slice {
    x0: HermOp,
    directions: Vec<HermOp>,
    c0: CMatrix,
    cdirs: Vec<CMatrix>,
}

impl Slice {
    /// Trace-one slice of `space` compressed onto the columns of `v`.
    fn new(space: &HermSubspace, v: &CMatrix, tol: &Tolerances) -> Option<Slice> {
        let x0 = space.min_norm_trace_one(tol)?;
        let trace_row = space.trace_functional();
        let perp = null_basis(&nalgebra::DMatrix::from_row_slice(1, trace_row.len(), trace_row.as_slice()), tol.rank);
        let q = space.coords();
        let n = space.ambient_hilbert_dim();
        let directions: Vec<HermOp> =
            perp.column_iter().map(|e| from_coords(n, &(q * e))).collect();
        let c0 = x0.compress(v).into_matrix();
        let cdirs = directions.iter().map(|d| d.compress(v).into_matrix()).collect();
        Some(Slice { x0, directions, c0, cdirs })
    }

    fn point(&self, y: &DVector<f64>) -> HermOp {
        let mut x = self.x0.clone();
        for (d, &c) in self.directions.iter().zip(y.iter()) {
            x = &x + &d.scale(c);
        }
        x
    }
}

impl Spectrahedron {
    pub fn hilbert_dim(&self) -> usize {
        self.n
    }

    /// Orthonormal columns spanning the support.
    pub fn support_basis(&self) -> &CMatrix {
        &self.support
    }

    pub fn face_space(&self) -> &HermSubspace {
        &self.space
    }

    pub fn interior_point(&self) -> HermOp {
        self.slice.point(&self.interior)
    }

    /// Dimension of the affine hull of `K`.
    pub fn affine_dim(&self) -> usize {
        self.slice.directions.len()
    }

    /// A point of `K` (numerically interior) approximately maximizing `⟨L, X⟩`.
    pub fn maximize_linear(&self, l: &HermOp, budget: usize) -> Result<HermOp> {
        if self.slice.directions.is_empty() {
            return Ok(self.slice.x0.clone());
        }
        let scale = l.hs_norm().max(1e-300);
        let w = DVector::from_iterator(
            self.slice.directions.len(),
            self.slice.directions.iter().map(|d| hs_inner(l, d).unwrap_or(0.0) / scale),
        );
        let lmi = Lmi { a0: self.slice.c0.clone(), a: self.slice.cdirs.clone(), w };
        let schedule = Schedule { mu_start: 1e-1, mu_final: 1e-10, shrink: 0.1 };
        let mut remaining = budget;
        let point = match lmi.follow(self.interior.clone(), schedule, &mut remaining, |_| false) {
            Ok(p) => p,
            Err(e) => e.last,
        };
        Ok(self.slice.point(&point.z))
    }
}

enum Outcome {
    Empty,
    Face { certificate: FaceCertificate },
}

struct Reduction {
    /// Best minimum eigenvalue of the uncompressed first round.
    best_lambda_min: f64,
    first_point: Option<HermOp>,
    outcome: Outcome,
}

/// `S ∩ {X : (I − VV†)X = 0}` together with a possibly refined `V`.
///
/// `noise` is the expected error of `V`. When it is above the rank tolerance,
/// singular values of the restriction map up to a multiple of `noise` count
/// as zero, and `V` is polished by alternating between the kernel of the map
/// and the joint range of that kernel until the map is numerically singular.
fn restrict_to_support(s: &HermSubspace, v: &CMatrix, tol: &Tolerances, noise: f64) -> (HermSubspace, CMatrix) {
    const POLISH_ROUNDS: usize = 30;
    let n = s.ambient_hilbert_dim();
    if v.ncols() == n {
        return (s.clone(), v.clone());
    }
    if v.ncols() == 0 || s.is_zero() {
        return (HermSubspace::zero(n), CMatrix::zeros(n, 0));
    }
    let basis = s.basis();
    let mut v = v.clone();
    let mut polish = noise > tol.rank;
    if polish {
        if let Some(refined) = newton_support(&basis, &v, noise) {
            v = refined;
        }
    }
    for round in 0.. {
        let (values, vt) = restriction_svd(&basis, &v);
        let scale = values.iter().copied().fold(1.0, f64::max);
        let exact = tol.rank * scale;
        let loose = if polish { (100.0 * noise).max(tol.rank) * scale } else { exact };
        let null: Vec<usize> = (0..values.len()).filter(|&i| values[i] <= loose).collect();
        let done = null.iter().all(|&i| values[i] <= exact) || round == POLISH_ROUNDS;
        if null.is_empty() || !polish || done {
            let cols: Vec<DVector<f64>> = null.iter().map(|&i| vt.row(i).transpose()).collect();
            if cols.is_empty() {
                return (HermSubspace::zero(n), v);
            }
            let kernel = nalgebra::DMatrix::from_columns(&cols);
            return (HermSubspace::from_orthonormal(n, s.coords() * kernel), v);
        }
        // Joint range of the approximate kernel elements.
        let k = v.ncols();
        let mut stack = CMatrix::zeros(n, n * null.len());
        for (slot, &i) in null.iter().enumerate() {
            let coeffs = vt.row(i).transpose();
            let mut m = CMatrix::zeros(n, n);
            for (b, &c) in basis.iter().zip(coeffs.iter()) {
                m += b.matrix().scale(c);
            }
            stack.columns_mut(slot * n, n).copy_from(&m);
        }
        let svd = svd_complex_thin(&stack);
        let sv = &svd.s;
        let top = sv[0];
        let kth = sv[k - 1];
        let next = sv.get(k).copied().unwrap_or(0.0);
        if kth <= 1e3 * next || kth <= 1e-6 * top {
            // The kernel elements do not single out a k-dimensional range.
            polish = false;
            continue;
        }
        let cols: Vec<_> = (0..k).map(|i| svd.u.column(i).into_owned()).collect();
        v = CMatrix::from_columns(&cols);
    }
    unreachable!()
}

/// Support of a rank-`k` element of `S` near the approximate kernel of the
/// restriction map, found by Gauss-Newton on the block of `X` outside its top
/// `k` eigenvectors. In the eigenbasis of `X` the Schur complement is that
/// block itself and its derivative along `E` is the same block of `E`, so each
/// step is a minimum-norm least-squares solve. Converges quadratically where
/// the alternating polish below is only linear.
fn newton_support(basis: &[HermOp], v: &CMatrix, noise: f64) -> Option<CMatrix> {
    const STEPS: usize = 25;
    const GOAL: f64 = 1e-13;
    let n = v.nrows();
    let k = v.ncols();
    let (values, vt) = restriction_svd(basis, v);
    let scale = values.iter().copied().fold(1.0, f64::max);
    let null: Vec<usize> = (0..values.len()).filter(|&i| values[i] <= 100.0 * noise * scale).collect();
    if null.is_empty() {
        return None;
    }
    // A generic combination of the kernel directions has full rank on the support.
    let mut c = DVector::zeros(basis.len());
    for (j, &i) in null.iter().enumerate() {
        c += vt.row(i).transpose() * (1.0 + 0.618_033_988_749_895 * j as f64);
    }
    let traces: Vec<f64> = basis.iter().map(HermOp::trace).collect();
    let tr: f64 = c.iter().zip(&traces).map(|(a, b)| a * b).sum();
    if tr.abs() < 1e-12 {
        return None;
    }
    c /= tr;
    let outer = (n - k) * (n - k);
    for _ in 0..=STEPS {
        let x = combine(basis, &c);
        let (vals, vecs) = x.eigh();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()));
        let top = CMatrix::from_columns(&order[..k].iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>());
        if k == n {
            return Some(top);
        }
        let rest = CMatrix::from_columns(&order[k..].iter().map(|&i| vecs.column(i).into_owned()).collect::<Vec<_>>());
        let residual = x.compress(&rest);
        let tr_err = 1.0 - x.trace();
        let mut jac = DMatrix::zeros(outer + 1, basis.len());
        for (j, b) in basis.iter().enumerate() {
            jac.view_mut((0, j), (outer, 1)).copy_from(&to_coords(&b.compress(&rest)));
            jac[(outer, j)] = traces[j];
        }
        if residual.hs_norm() <= GOAL && tr_err.abs() <= GOAL {
            // At a singular solution the residual is quadratic in the error of
            // the support, so a small residual proves nothing; leave those to
            // the alternating polish.
            let (face, _) = restriction_svd(basis, &top);
            let face_dim = face.iter().filter(|&&x| x <= 1e-9 * scale).count();
            let sv = svd_real_thin(&jac).s;
            let rank = sv.iter().filter(|&&x| x > 1e-8 * sv[0]).count();
            return (face_dim >= 1 && rank + face_dim - 1 == basis.len()).then_some(top);
        }
        let mut rhs = -to_coords(&residual);
        rhs = rhs.push(tr_err);
        c += least_squares(&jac, &rhs);
    }
    None
}

fn combine(basis: &[HermOp], c: &DVector<f64>) -> HermOp {
    let n = basis[0].dim();
    basis.iter().zip(c.iter()).fold(HermOp::zeros(n), |acc, (b, &w)| &acc + &b.scale(w))
}

/// Minimum-norm solution of `a·x ≈ b`.
fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let d = svd_real_thin(a);
    let cut = 1e-12 * d.s.first().copied().unwrap_or(0.0);
    let ub = d.u.transpose() * b;
    let mut y = DVector::zeros(d.s.len());
    for (i, &sv) in d.s.iter().enumerate() {
        if sv > cut {
            y[i] = ub[i] / sv;
        }
    }
    d.v * y
}

/// Singular values and right singular vectors (as rows) of
/// `X ↦ (I − VV†)X` on the basis of `S`, one row of `vt` per basis coefficient direction.
fn restriction_svd(basis: &[HermOp], v: &CMatrix) -> (Vec<f64>, nalgebra::DMatrix<f64>) {
    let n = v.nrows();
    let comp = CMatrix::identity(n, n) - v * v.adjoint();
    let m = basis.len();
    let rows = (2 * n * n).max(m);
    let mut map = nalgebra::DMatrix::<f64>::zeros(rows, m);
    for (j, b) in basis.iter().enumerate() {
        let image = &comp * b.matrix();
        for (i, z) in image.iter().enumerate() {
            map[(2 * i, j)] = z.re;
            map[(2 * i + 1, j)] = z.im;
        }
    }
    let svd = svd_real(&map);
    (svd.s, svd.v.transpose())
}

fn max_min_eigenvalue(
    slice: &Slice,
    r: usize,
    tol: &Tolerances,
    budget: &mut usize,
    round: usize,
) -> Result<PathPoint> {
    let p = slice.cdirs.len();
    let mut a = slice.cdirs.clone();
    a.push(-CMatrix::identity(r, r));
    let mut w = DVector::zeros(p + 1);
    w[p] = 1.0;
    let lmi = Lmi { a0: slice.c0.clone(), a, w };
    let start_t = HermOp::from_matrix_unchecked(slice.c0.clone()).min_eigenvalue() - 1.0;
    let mut z0 = DVector::zeros(p + 1);
    z0[p] = start_t;
    let infeasible = tol.infeasible;
    lmi.follow(z0, Schedule::default(), budget, |pt| pt.z[p] + r as f64 * pt.mu < -infeasible)
        .map_err(|e| Error::NonConvergence { round, best: e.last.z[p] })
}

fn reduce(s: &HermSubspace, tol: &Tolerances, budget: usize, first_round_only: bool) -> Result<Reduction> {
    let n = s.ambient_hilbert_dim();
    let mut remaining = budget;
    let mut v = CMatrix::identity(n, n);
    let mut steps: Vec<HermOp> = Vec::new();
    let mut best_lambda_min = f64::NEG_INFINITY;
    let mut first_point = None;
    let mut noise = 0.0;

    for round in 0..=n {
        let space = if round == 0 {
            s.clone()
        } else {
            let (space, polished) = restrict_to_support(s, &v, tol, noise);
            v = polished;
            space
        };
        let empty = |best| Ok(Reduction { best_lambda_min: best, first_point: None, outcome: Outcome::Empty });
        let slice = match Slice::new(&space, &v, tol) {
            Some(slice) => slice,
            None => return empty(best_lambda_min),
        };
        let r = v.ncols();
        let point = max_min_eigenvalue(&slice, r, tol, &mut remaining, round)?;
        let p = slice.cdirs.len();
        let t = point.z[p];
        let y = point.z.rows(0, p).into_owned();
        if round == 0 {
            best_lambda_min = t;
            first_point = Some(slice.point(&y));
        }
        if t + r as f64 * point.mu < -tol.infeasible {
            return empty(best_lambda_min);
        }
        if t > tol.interior || (first_round_only && t >= -tol.psd) {
            let interior_point = settle(slice.point(&y), tol, noise)?;
            let spectrahedron = Spectrahedron { n, support: v.clone(), space, slice, interior: y };
            let certificate = FaceCertificate {
                support: HermOp::from_matrix_unchecked(&v * v.adjoint()),
                reduction_steps: steps,
                interior_point,
                interior_lambda_min: t,
                spectrahedron,
            };
            return Ok(Reduction { best_lambda_min, first_point, outcome: Outcome::Face { certificate } });
        }
        if t < -tol.psd {
            return Err(Error::Undecided { best_lambda_min: t });
        }

        // Boundary optimum: shrink the support to the kernel of a certificate.
        // Off-face parts of the dual decay like √μ when no strictly
        // complementary certificate exists.
        noise = (point.mu * r as f64).sqrt();
        let kernel = certificate_kernel(&point, &space, &v, tol, noise)
            .ok_or(Error::NonConvergence { round, best: t })?;
        let (z, new_v) = kernel;
        steps.push(z.expand(&v));
        if new_v.ncols() == 0 {
            return empty(best_lambda_min);
        }
        v = &v * new_v;
    }
    Err(Error::NonConvergence { round: n + 1, best: best_lambda_min })
}

/// A density from a slice point whose negative part is within the noise left
/// by earlier reduction rounds; larger violations are still rejected.
fn settle(x: HermOp, tol: &Tolerances, noise: f64) -> Result<DensityOp> {
    let lambda = x.min_eigenvalue();
    if lambda < -tol.psd && lambda >= -noise {
        return DensityOp::normalized(&x.psd_part(), tol);
    }
    DensityOp::new(x, tol)
}

/// Cleans the dual matrix into a PSD operator orthogonal to `space` and returns
/// it with an orthonormal basis of its kernel (in compressed coordinates).
fn certificate_kernel(
    point: &PathPoint,
    space: &HermSubspace,
    v: &CMatrix,
    tol: &Tolerances,
    noise: f64,
) -> Option<(HermOp, CMatrix)> {
    let dual = HermOp::from_matrix_unchecked(point.dual());
    let dual = dual.scale(1.0 / dual.trace());
    let compressed: Vec<HermOp> = space.basis().iter().map(|b| b.compress(v)).collect();
    let mut z = dual;
    for b in &compressed {
        let c = hs_inner(&z, b).ok()?;
        z = &z - &b.scale(c);
    }
    let (values, vectors) = z.eigh();
    let top = values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return None;
    }
    // Eigenvalues near the noise level certify nothing; leaving them out only
    // costs another round.
    let cut = (1e3 * noise).clamp(CERTIFICATE_SPLIT, 1e-2) * top;
    let r = values.len();
    let mut cleaned = CMatrix::zeros(r, r);
    let mut kernel = Vec::new();
    for (i, &lambda) in values.iter().enumerate() {
        let col = vectors.column(i).into_owned();
        if lambda > cut {
            cleaned += (&col * col.adjoint()).scale(lambda);
        } else {
            kernel.push(col);
        }
    }
    let cleaned = HermOp::from_matrix_unchecked(cleaned);
    let norm = cleaned.hs_norm();
    for b in &compressed {
        if hs_inner(&cleaned, b).ok()?.abs() > tol.interior.max(10.0 * noise) * norm {
            return None;
        }
    }
    let kernel = if kernel.is_empty() {
        CMatrix::zeros(r, 0)
    } else {
        CMatrix::from_columns(&kernel)
    };
    Some((cleaned, kernel))
}

/// Decides whether `S ∩ 𝓒` is empty by maximizing the smallest eigenvalue
/// over the trace-one slice of `S`.
pub fn feasible_point(s: &HermSubspace, tol: &Tolerances, budget: usize) -> Result<FeasibilityResult> {
    if s.is_zero() {
        return Ok(FeasibilityResult {
            status: Feasibility::Empty,
            witness: None,
            best_lambda_min: f64::NEG_INFINITY,
        });
    }
    let reduction = reduce(s, tol, budget, true)?;
    match reduction.outcome {
        Outcome::Empty => Ok(FeasibilityResult {
            status: Feasibility::Empty,
            witness: None,
            best_lambda_min: reduction.best_lambda_min,
        }),
        Outcome::Face { .. } => {
            let point = reduction.first_point.expect("first round ran");
            Ok(FeasibilityResult {
                status: Feasibility::Feasible,
                witness: Some(DensityOp::new(point, tol)?),
                best_lambda_min: reduction.best_lambda_min,
            })
        }
    }
}

/// Support of a maximum-rank point of `S ∩ 𝓒`, with certificates.
pub fn minimal_face(s: &HermSubspace, tol: &Tolerances, budget: usize) -> Result<FaceCertificate> {
    if s.is_zero() {
        return Err(Error::Precondition("zero subspace has no state".into()));
    }
    match reduce(s, tol, budget, false)?.outcome {
        Outcome::Empty => Err(Error::Precondition("S ∩ 𝓒 is empty".into())),
        Outcome::Face { certificate } => Ok(certificate),
    }
}

/// The least-dimensional subspace with the same intersection with `𝓒`.
pub fn good_representative(s: &HermSubspace, tol: &Tolerances, budget: usize) -> Result<HermSubspace> {
    Ok(match face_or_empty(s, tol, budget)? {
        Some(cert) => cert.spectrahedron.space,
        None => HermSubspace::zero(s.ambient_hilbert_dim()),
    })
}

/// Facial reduction result, or `None` when `S ∩ 𝓒` is empty.
pub fn face_or_empty(s: &HermSubspace, tol: &Tolerances, budget: usize) -> Result<Option<FaceCertificate>> {
    if s.is_zero() {
        return Ok(None);
    }
    Ok(match reduce(s, tol, budget, false)?.outcome {
        Outcome::Empty => None,
        Outcome::Face { certificate } => Some(certificate),
    })
}

/// Whether `x` is PSD up to `eps`.
pub(crate) fn is_psd(x: &HermOp, eps: f64) -> bool {
    x.min_eigenvalue() >= -eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::pauli;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn span(n: usize, gens: &[HermOp]) -> HermSubspace {
        HermSubspace::span(n, gens, &tol()).unwrap()
    }

    fn close(a: &HermOp, b: &HermOp, eps: f64) -> bool {
        (a - b).hs_norm() <= eps
    }

    #[test]
    fn feasible_point_examples() {
        let t = tol();
        let rho = HermOp::diag(&[0.2, 0.8]);
        let res = feasible_point(&span(2, std::slice::from_ref(&rho)), &t, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, Feasibility::Feasible);
        assert!(close(res.witness.unwrap().op(), &rho, 1e-12));

        let res = feasible_point(&span(2, &[pauli::z()]), &t, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, Feasibility::Empty);
        assert!(res.witness.is_none());

        let s = span(2, &[HermOp::ket_bra(2, 0), HermOp::ket_bra(2, 1)]);
        let res = feasible_point(&s, &t, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, Feasibility::Feasible);
        assert!(close(res.witness.unwrap().op(), &HermOp::diag(&[0.5, 0.5]), 1e-8));
        assert!((res.best_lambda_min - 0.5).abs() < 1e-10);

        let res = feasible_point(&HermSubspace::zero(2), &t, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.status, Feasibility::Empty);
    }

    #[test]
    fn minimal_face_examples() {
        let t = tol();
        let cert = minimal_face(&HermSubspace::full(2), &t, DEFAULT_BUDGET).unwrap();
        assert!(close(&cert.support, &HermOp::identity(2), 1e-12));
        assert!(cert.reduction_steps.is_empty());

        let s = span(2, &[HermOp::ket_bra(2, 0), pauli::x()]);
        let cert = minimal_face(&s, &t, DEFAULT_BUDGET).unwrap();
        assert!(close(&cert.support, &HermOp::ket_bra(2, 0), 1e-9), "{:?}", cert.support);
        assert_eq!(cert.reduction_steps.len(), 1);
        let z = &cert.reduction_steps[0];
        assert!(z.min_eigenvalue() >= -1e-12);
        assert!(hs_inner(z, cert.interior_point.op()).unwrap().abs() <= t.psd);

        let full_rank = HermOp::diag(&[0.1, 0.3, 0.6]);
        let cert = minimal_face(&span(3, &[full_rank]), &t, DEFAULT_BUDGET).unwrap();
        assert!(close(&cert.support, &HermOp::identity(3), 1e-12));

        assert!(minimal_face(&span(2, &[pauli::z()]), &t, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn good_representative_examples() {
        let t = tol();
        let rho = HermOp::diag(&[0.25, 0.75]);
        let s = span(2, std::slice::from_ref(&rho));
        assert!(good_representative(&s, &t, DEFAULT_BUDGET).unwrap().same_as(&s, &t).unwrap());
        assert!(good_representative(&span(2, &[pauli::z()]), &t, DEFAULT_BUDGET).unwrap().is_zero());

        let s = span(2, &[HermOp::ket_bra(2, 0), pauli::x()]);
        let g = good_representative(&s, &t, DEFAULT_BUDGET).unwrap();
        assert!(g.same_as(&span(2, &[HermOp::ket_bra(2, 0)]), &t).unwrap());
    }

    #[test]
    fn complement_of_pure_state_reduces_to_orthogonal_state() {
        let t = tol();
        let s = span(2, &[HermOp::ket_bra(2, 0)]).orth_complement();
        let g = good_representative(&s, &t, DEFAULT_BUDGET).unwrap();
        assert!(g.same_as(&span(2, &[HermOp::ket_bra(2, 1)]), &t).unwrap());
    }

    #[test]
    fn complement_of_maximally_mixed_state_is_empty() {
        let t = tol();
        for n in 2..=3 {
            let s = span(n, &[HermOp::identity(n)]).orth_complement();
            assert!(good_representative(&s, &t, DEFAULT_BUDGET).unwrap().is_zero());
        }
    }

    #[test]
    fn two_round_reduction() {
        // X = [[a, b, c], [b, c, 0], [c, 0, 0]]: X₂₂ = 0 forces c = 0, and only
        // then does X₁₁ = c = 0 force b = 0. K = {|0⟩⟨0|}.
        let t = tol();
        let sym = |entries: &[(usize, usize)]| {
            let mut m = CMatrix::zeros(3, 3);
            for &(i, j) in entries {
                m[(i, j)] = Complex64::new(1.0, 0.0);
                m[(j, i)] = Complex64::new(1.0, 0.0);
            }
            HermOp::new(m).unwrap()
        };
        let s = span(3, &[sym(&[(0, 0)]), sym(&[(0, 1)]), sym(&[(0, 2), (1, 1)])]);
        let cert = minimal_face(&s, &t, DEFAULT_BUDGET).unwrap();
        assert!(close(&cert.support, &HermOp::ket_bra(3, 0), 1e-8), "{:?}", cert.support);
        assert_eq!(cert.reduction_steps.len(), 2);
        let g = good_representative(&s, &t, DEFAULT_BUDGET).unwrap();
        assert!(g.same_as(&span(3, &[HermOp::ket_bra(3, 0)]), &t).unwrap());
    }

    #[test]
    fn pure_state_with_generic_direction_is_recovered_exactly() {
        use rand_distr::{Distribution, StandardNormal};
        let t = tol();
        for seed in [6749160149183047487u64, 7731637718611820708, 16250084666057830868] {
            let rho = crate::random::random_density(3, 1, seed).unwrap().into_op();
            let mut r = crate::random::rng(seed ^ 1);
            let h = from_coords(3, &DVector::from_iterator(9, (0..9).map(|_| StandardNormal.sample(&mut r))));
            let g = good_representative(&span(3, &[rho.clone(), h]), &t, DEFAULT_BUDGET).unwrap();
            assert_eq!(g.dim(), 1);
            assert!(g.relative_residual(&to_coords(&rho)) < 1e-12, "seed {seed}");
        }
    }

}
