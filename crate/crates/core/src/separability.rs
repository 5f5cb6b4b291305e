//! Separability and membership in the convex tensor product `a ⊗̃ b`.
//!
//! Negative answers are certified by a linear functional `W` that is
//! nonnegative on every member and negative on the input: either the residual
//! of the input against `span(a ⊗ b)`, or the partial transpose of a negative
//! eigenvector of the input's partial transpose. Positive answers carry an
//! explicit decomposition found by column generation: nonnegative least
//! squares over a dictionary of product states, grown by an alternating
//! maximization of the residual over product states.

use nalgebra::DVector;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::bipartite::BipartiteContext;
use crate::convex::{minimal_face, Spectrahedron};
use crate::error::Result;
use crate::herm::{hs_inner, partial_trace, tensor, to_coords, CMatrix, CVector, DensityOp, HermOp, Tolerances};
use crate::lattice::{Lattice, LatticeElement};
use crate::random::{complex_gaussian, haar_vector, rng};

/// Reconstruction residual a decomposition must reach to count.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-7;

/// Initial dictionary size for full factors.
const DICTIONARY: usize = 500;
/// Initial dictionary size when drawing a point needs an optimization.
const GENERAL_DICTIONARY: usize = 24;
const ALTERNATING_STEPS: usize = 12;
const RESTARTS: usize = 4;
/// Stop once the fit is this good; well below the acceptance tolerance.
const FIT_TARGET: f64 = 1e-10;
const MAX_ATOMS: usize = 800;

#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub weight: f64,
    pub first: HermOp,
    pub second: HermOp,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub terms: Vec<ProductTerm>,
    /// HS norm of `ρ − Σ wᵢ xᵢ ⊗ yᵢ`.
    pub residual: f64,
}

impl Decomposition {
    pub fn reconstruct(&self) -> Option<HermOp> {
        let first = self.terms.first()?;
        let mut acc = HermOp::zeros(first.first.dim() * first.second.dim());
        for t in &self.terms {
            acc = &acc + &tensor(&t.first, &t.second).scale(t.weight);
        }
        Some(acc)
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparabilityStatus {
    Separable,
    Entangled,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub enum SeparabilityWitness {
    Decomposition(Decomposition),
    /// Negative eigenvalue of the partial transpose and its eigenvector.
    PartialTranspose { eigenvalue: f64, eigenvector: CVector },
}

#[derive(Debug, Clone)]
pub struct SeparabilityVerdict {
    pub status: SeparabilityStatus,
    pub witness: Option<SeparabilityWitness>,
    pub ppt_min_eigenvalue: f64,
    /// Whether positivity of the partial transpose decides separability here.
    pub ppt_exact: bool,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipStatus {
    Member,
    Outside,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub status: MembershipStatus,
    pub decomposition: Option<Decomposition>,
    /// `W` with `⟨W, σ⟩ ≥ 0` on all members and `⟨W, ρ⟩ < 0`.
    pub functional: Option<HermOp>,
    pub functional_value: f64,
    pub note: String,
}

/// Smallest eigenvalue of the partial transpose, with its eigenvector.
pub fn ppt_min_eigen(rho: &HermOp, ctx: &BipartiteContext) -> Result<(f64, CVector)> {
    let pt = rho.partial_transpose(ctx.shape())?;
    let (values, vectors) = pt.eigh();
    Ok((values[0], vectors.column(0).into_owned()))
}

/// Whether PPT is equivalent to separability for these factor dimensions.
pub fn ppt_is_exact(n1: usize, n2: usize) -> bool {
    matches!((n1.min(n2), n1.max(n2)), (1, _) | (2, 2) | (2, 3))
}

/// Separability verdict: PPT violation proves entanglement; otherwise a
/// decomposition into product states is searched.
pub fn is_separable(rho: &DensityOp, ctx: &BipartiteContext, budget: usize, seed: u64) -> Result<SeparabilityVerdict> {
    ctx.shape().check(rho.dim())?;
    let tol = ctx.lattice().tol;
    let (lambda, vector) = ppt_min_eigen(rho.op(), ctx)?;
    let exact = ppt_is_exact(ctx.n1(), ctx.n2());
    if lambda < -tol.psd {
        return Ok(SeparabilityVerdict {
            status: SeparabilityStatus::Entangled,
            witness: Some(SeparabilityWitness::PartialTranspose { eigenvalue: lambda, eigenvector: vector }),
            ppt_min_eigenvalue: lambda,
            ppt_exact: exact,
            note: "partial transpose has a negative eigenvalue".into(),
        });
    }
    let side_a = Side::Face { range: CMatrix::identity(ctx.n1(), ctx.n1()) };
    let side_b = Side::Face { range: CMatrix::identity(ctx.n2(), ctx.n2()) };
    let found = decompose(rho.op(), ctx, &side_a, &side_b, budget, seed);
    match found {
        Some(d) if d.residual <= DECOMPOSITION_TOLERANCE => Ok(SeparabilityVerdict {
            status: SeparabilityStatus::Separable,
            witness: Some(SeparabilityWitness::Decomposition(d)),
            ppt_min_eigenvalue: lambda,
            ppt_exact: exact,
            note: if exact {
                "PPT holds and a product decomposition was found".into()
            } else {
                "product decomposition found".into()
            },
        }),
        other => Ok(SeparabilityVerdict {
            status: SeparabilityStatus::Inconclusive,
            witness: None,
            ppt_min_eigenvalue: lambda,
            ppt_exact: exact,
            note: match (exact, other) {
                (true, Some(d)) => format!(
                    "PPT holds, so the state is separable, but the best decomposition only reached residual {:.3e}",
                    d.residual
                ),
                (true, None) => "PPT holds, so the state is separable, but no decomposition was found".into(),
                (false, _) => "PPT holds; PPT does not decide separability at these dimensions".into(),
            },
        }),
    }
}

/// Classification by the partial transpose alone; exact only where
/// [`ppt_is_exact`] holds.
pub fn ppt_status(rho: &HermOp, ctx: &BipartiteContext, tol: &Tolerances) -> Result<SeparabilityStatus> {
    let (lambda, _) = ppt_min_eigen(rho, ctx)?;
    Ok(if lambda < -tol.psd {
        SeparabilityStatus::Entangled
    } else if ppt_is_exact(ctx.n1(), ctx.n2()) {
        SeparabilityStatus::Separable
    } else {
        SeparabilityStatus::Inconclusive
    })
}

/// Membership of `ρ` in `a ⊗̃ b`, the convex hull of `x ⊗ y` with `x` a state
/// of `a` and `y` a state of `b`.
pub fn convex_tensor_membership(
    rho: &DensityOp,
    a: &LatticeElement,
    b: &LatticeElement,
    ctx: &BipartiteContext,
    budget: usize,
    seed: u64,
) -> Result<MembershipVerdict> {
    ctx.shape().check(rho.dim())?;
    let lat = ctx.lattice();
    let tol = lat.tol;
    if a.is_zero() || b.is_zero() {
        return Ok(outside(HermOp::identity(rho.dim()).scale(-1.0), -1.0, "a factor is the empty element (no members)"));
    }
    let span = ctx.psi(a, b)?;
    let residual = rho.op() - &span.rep().project(rho.op());
    let off = residual.hs_norm();
    if off > tol.inclusion * rho.op().hs_norm() {
        let w = residual.scale(-1.0 / off);
        let value = -off;
        return Ok(outside(w, value, "ρ is not in span(a ⊗ b)"));
    }
    let (lambda, vector) = ppt_min_eigen(rho.op(), ctx)?;
    if lambda < -tol.psd {
        let w = HermOp::projector_onto(&vector).partial_transpose(ctx.shape())?;
        return Ok(outside(w, lambda, "partial transpose has a negative eigenvalue"));
    }
    let side_a = Side::new(lat, a)?;
    let side_b = Side::new(lat, b)?;
    let found = decompose(rho.op(), ctx, &side_a, &side_b, budget, seed);
    Ok(match found {
        Some(d) if d.residual <= DECOMPOSITION_TOLERANCE => MembershipVerdict {
            status: MembershipStatus::Member,
            decomposition: Some(d),
            functional: None,
            functional_value: 0.0,
            note: "decomposition found".into(),
        },
        other => MembershipVerdict {
            status: MembershipStatus::Inconclusive,
            note: format!(
                "no decomposition within {DECOMPOSITION_TOLERANCE:e} (best residual {:.3e})",
                other.as_ref().map_or(f64::INFINITY, |d| d.residual)
            ),
            decomposition: other,
            functional: None,
            functional_value: 0.0,
        },
    })
}

fn outside(w: HermOp, value: f64, note: &str) -> MembershipVerdict {
    MembershipVerdict {
        status: MembershipStatus::Outside,
        decomposition: None,
        functional: Some(w),
        functional_value: value,
        note: note.into(),
    }
}

/// The states of one factor, as seen by the decomposition search.
#[derive(Debug, Clone)]
pub(crate) enum Side {
    /// A whole face: all states supported in the range of the columns.
    Face { range: CMatrix },
    /// Any other state set; linear maximization runs the barrier solver.
    General { spectrahedron: Spectrahedron, budget: usize },
}

impl Side {
    pub(crate) fn new(lat: &Lattice, a: &LatticeElement) -> Result<Side> {
        if a.is_one() {
            let n = a.hilbert_dim();
            return Ok(Side::Face { range: CMatrix::identity(n, n) });
        }
        let cert = minimal_face(a.rep(), &lat.tol, lat.budget)?;
        let r = cert.rank();
        if r * r == a.dim() {
            return Ok(Side::Face { range: cert.spectrahedron().support_basis().clone() });
        }
        Ok(Side::General { spectrahedron: cert.spectrahedron().clone(), budget: lat.budget })
    }

    /// A state maximizing `⟨h, x⟩`.
    fn argmax(&self, h: &HermOp) -> HermOp {
        match self {
            Side::Face { range } => {
                let (_, vectors) = h.compress(range).eigh();
                let top = vectors.column(vectors.ncols() - 1).into_owned();
                HermOp::projector_onto(&(range * top))
            }
            Side::General { spectrahedron, budget } => spectrahedron
                .maximize_linear(h, *budget)
                .unwrap_or_else(|_| spectrahedron.interior_point()),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> HermOp {
        match self {
            Side::Face { range } => HermOp::projector_onto(&(range * haar_vector(rng, range.ncols()))),
            Side::General { spectrahedron, .. } => {
                let n = spectrahedron.hilbert_dim();
                let g = HermOp::from_matrix_unchecked(CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng)));
                self.argmax(&g)
            }
        }
    }

    fn dictionary_size(&self) -> usize {
        match self {
            Side::Face { .. } => DICTIONARY,
            Side::General { .. } => GENERAL_DICTIONARY,
        }
    }
}

/// `H` with `⟨H, x⟩ = ⟨R, x ⊗ y⟩` for all `x`.
fn contract_second(r: &CMatrix, y: &HermOp, n1: usize, n2: usize) -> HermOp {
    let ym = y.matrix();
    let m = CMatrix::from_fn(n1, n1, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n2 {
            for l in 0..n2 {
                acc += r[(i * n2 + k, j * n2 + l)] * ym[(l, k)];
            }
        }
        acc
    });
    HermOp::from_matrix_unchecked(m)
}

/// `H` with `⟨H, y⟩ = ⟨R, x ⊗ y⟩` for all `y`.
fn contract_first(r: &CMatrix, x: &HermOp, n1: usize, n2: usize) -> HermOp {
    let xm = x.matrix();
    let m = CMatrix::from_fn(n2, n2, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n1 {
            for j in 0..n1 {
                acc += r[(i * n2 + k, j * n2 + l)] * xm[(j, i)];
            }
        }
        acc
    });
    HermOp::from_matrix_unchecked(m)
}

struct Atom {
    first: HermOp,
    second: HermOp,
    coords: DVector<f64>,
}

impl Atom {
    fn new(first: HermOp, second: HermOp) -> Atom {
        let coords = to_coords(&tensor(&first, &second));
        Atom { first, second, coords }
    }
}

fn solve_weights(atoms: &[Atom], target: &DVector<f64>) -> Vec<f64> {
    let rows = target.len();
    let a = Array2::from_shape_fn((rows, atoms.len()), |(i, j)| atoms[j].coords[i]);
    let b = Array1::from_iter(target.iter().copied());
    let (x, _) = nnls::nnls(a.view(), b.view());
    x.to_vec()
}

fn build(atoms: &[Atom], weights: &[f64], rho: &HermOp) -> Decomposition {
    let terms: Vec<ProductTerm> = atoms
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(a, &w)| ProductTerm { weight: w, first: a.first.clone(), second: a.second.clone() })
        .collect();
    let mut d = Decomposition { terms, residual: f64::INFINITY };
    d.residual = match d.reconstruct() {
        Some(x) => (rho - &x).hs_norm(),
        None => rho.hs_norm(),
    };
    d
}

/// Column-generation search for `ρ = Σ wᵢ xᵢ ⊗ yᵢ` with `wᵢ ≥ 0` and `xᵢ`, `yᵢ`
/// states of the two sides. Returns the best fit found.
pub(crate) fn decompose(
    rho: &HermOp,
    ctx: &BipartiteContext,
    side_a: &Side,
    side_b: &Side,
    budget: usize,
    seed: u64,
) -> Option<Decomposition> {
    let (n1, n2) = (ctx.n1(), ctx.n2());
    let shape = ctx.shape();
    let mut rng = rng(seed);
    let target = to_coords(rho);
    let mut atoms: Vec<Atom> = Vec::new();

    // A product input decomposes in one term.
    if let (Ok(r1), Ok(r2)) = (partial_trace(rho, shape, 1), partial_trace(rho, shape, 2)) {
        atoms.push(Atom::new(r1, r2));
        let d = build(&atoms, &solve_weights(&atoms, &target), rho);
        if d.residual <= FIT_TARGET && side_contains(ctx, side_a, &atoms[0].first) && side_contains(ctx, side_b, &atoms[0].second) {
            return Some(d);
        }
        atoms.clear();
    }

    let initial = side_a.dictionary_size().min(side_b.dictionary_size());
    for _ in 0..initial {
        let x = side_a.sample(&mut rng);
        let y = side_b.sample(&mut rng);
        atoms.push(Atom::new(x, y));
    }
    let rounds = (budget / 10).max(1);
    let mut best: Option<Decomposition> = None;
    for _ in 0..rounds {
        let weights = solve_weights(&atoms, &target);
        let d = build(&atoms, &weights, rho);
        let improved = best.as_ref().is_none_or(|b| d.residual < b.residual);
        let done = d.residual <= FIT_TARGET;
        if improved {
            best = Some(d);
        }
        if done {
            break;
        }
        let fit = best_fit_matrix(&atoms, &weights, rho.dim());
        let r = rho.matrix() - fit;

        // Alternating maximization of ⟨R, x ⊗ y⟩ from several starts.
        let mut order: Vec<usize> = (0..atoms.len()).filter(|&i| weights[i] > 0.0).collect();
        order.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]));
        let mut starts: Vec<HermOp> = order.iter().take(2).map(|&i| atoms[i].second.clone()).collect();
        while starts.len() < RESTARTS {
            starts.push(side_b.sample(&mut rng));
        }
        let mut added = 0;
        for mut y in starts {
            let mut x = side_a.argmax(&contract_second(&r, &y, n1, n2));
            for _ in 0..ALTERNATING_STEPS {
                y = side_b.argmax(&contract_first(&r, &x, n1, n2));
                x = side_a.argmax(&contract_second(&r, &y, n1, n2));
            }
            let gain = hs_inner(&contract_second(&r, &y, n1, n2), &x).unwrap_or(0.0);
            if gain > 1e-16 {
                atoms.push(Atom::new(x, y));
                added += 1;
            }
        }
        if added == 0 {
            break;
        }
        if atoms.len() > MAX_ATOMS {
            let keep: Vec<bool> = (0..atoms.len()).map(|i| i >= weights.len() || weights[i] > 0.0).collect();
            let mut k = keep.iter();
            atoms.retain(|_| *k.next().unwrap());
        }
    }
    best
}

fn best_fit_matrix(atoms: &[Atom], weights: &[f64], n: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(n, n);
    for (a, &w) in atoms.iter().zip(weights) {
        if w > 0.0 {
            acc += tensor(&a.first, &a.second).matrix().scale(w);
        }
    }
    acc
}

fn side_contains(ctx: &BipartiteContext, side: &Side, x: &HermOp) -> bool {
    let tol = ctx.lattice().tol;
    if x.min_eigenvalue() < -tol.psd {
        return false;
    }
    match side {
        Side::Face { range } => {
            let n = range.nrows();
            let comp = CMatrix::identity(n, n) - range * range.adjoint();
            (&comp * x.matrix()).norm() <= tol.inclusion * x.hs_norm().max(1.0)
        }
        Side::General { spectrahedron, .. } => {
            spectrahedron.face_space().contains_op(x, &tol).unwrap_or(false)
        }
    }
}
