//! Sampling oracle for `span(S ∩ 𝓒)`, independent of facial reduction.
//!
//! Points of the trace-one slice are drawn uniformly from the ball that must
//! contain every state (a trace-one PSD operator has HS norm at most one) and
//! kept when positive semidefinite. From an accepted point a hit-and-run walk
//! continues: along a random slice direction the chord of PSD points is found
//! by bisection, its two inner endpoints are recorded, and the walk moves to a
//! uniform point of the chord. The span of everything accepted is returned.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::is_psd;
use crate::error::{Error, Result};
use crate::herm::{from_coords, to_coords, CMatrix, HermOp, Tolerances};
use crate::subspace::{null_basis, range_basis, HermSubspace};

/// Largest slice dimension the oracle accepts.
pub const MAX_SLICE_DIM: usize = 6;

const BISECTION_STEPS: usize = 20;

/// Eigenvalue floor for accepting a sample. Much stricter than the PSD
/// tolerance: a floor of ε admits points √ε away from a lower-dimensional
/// state set, which would add spurious directions to the span.
const PSD_FLOOR: f64 = 1e-14;

/// Relative singular value cut for the span of the samples. Accepted points
/// may sit up to √PSD_FLOOR off a lower-dimensional state set, far below this.
const SPAN_CUT: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub span: HermSubspace,
    pub accepted: usize,
    pub draws: usize,
}

/// Span of sampled states of `S ∩ 𝓒`; see [`brute_force_span_run`].
pub fn brute_force_span(s: &HermSubspace, samples: usize, seed: u64, tol: &Tolerances) -> Result<HermSubspace> {
    brute_force_span_run(s, samples, seed, tol).map(|run| run.span)
}

pub fn brute_force_span_run(s: &HermSubspace, samples: usize, seed: u64, tol: &Tolerances) -> Result<OracleRun> {
    let n = s.ambient_hilbert_dim();
    let x0 = s
        .min_norm_trace_one(tol)
        .ok_or_else(|| Error::OracleInconclusive("subspace has no trace-one element".into()))?;
    let trace_row = s.trace_functional();
    let perp = null_basis(&nalgebra::DMatrix::from_row_slice(1, trace_row.len(), trace_row.as_slice()), tol.rank);
    let m = perp.ncols();
    if m > MAX_SLICE_DIM {
        return Err(Error::Precondition(format!("slice dimension {m} exceeds {MAX_SLICE_DIM}")));
    }
    let dirs = s.coords() * &perp;
    let c0 = to_coords(&x0);
    // When X0 is itself pure the ball degenerates to the single point X0.
    let room = 1.0 - c0.norm_squared();
    let radius = if room <= 1e-10 { 0.0 } else { room.sqrt() + 1e-12 };
    // X + floor·I has a Cholesky factor exactly when λ_min(X) > −floor, which
    // is far cheaper than an eigendecomposition per probe.
    let base = from_coords(n, &c0).into_matrix() + CMatrix::identity(n, n).scale(PSD_FLOOR);
    let slice: Vec<CMatrix> = dirs.column_iter().map(|d| from_coords(n, &d.into_owned()).into_matrix()).collect();
    let accept = |y: &DVector<f64>| {
        let mut x = base.clone();
        for (m, &c) in slice.iter().zip(y.iter()) {
            x += m.scale(c);
        }
        x.cholesky().is_some()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted: Vec<DVector<f64>> = Vec::new();
    let mut draws = 0usize;

    // The slice center is the one grid point every instance shares.
    let center = DVector::zeros(m);
    draws += 1;
    if accept(&center) {
        accepted.push(center);
    }
    let rejection_draws = if m == 0 || radius == 0.0 { 0 } else { samples.clamp(1, 20_000) };
    for _ in 0..rejection_draws {
        draws += 1;
        let y = uniform_in_ball(&mut rng, m, radius);
        if accept(&y) {
            accepted.push(y);
        }
    }
    if accepted.is_empty() {
        return Err(Error::OracleInconclusive(format!("no state among {draws} draws")));
    }

    if m > 0 && radius > 0.0 {
        let mut current = accepted[accepted.len() - 1].clone();
        while accepted.len() < samples {
            draws += 1;
            let d = random_unit(&mut rng, m);
            let forward = chord_end(&current, &d, 2.5 * radius, &accept);
            let backward = chord_end(&current, &(-&d), 2.5 * radius, &accept);
            let lo = &current - &d * backward;
            let hi = &current + &d * forward;
            let u: f64 = rng.random();
            current = &lo + (&hi - &lo) * u;
            accepted.push(lo);
            accepted.push(hi);
            accepted.push(current.clone());
        }
    }

    // Span in slice coordinates (1, y), mapped back to the ambient space.
    let lifted = DMatrix::from_fn(m + 1, accepted.len(), |i, j| if i == 0 { 1.0 } else { accepted[j][i - 1] });
    let range = range_basis(&lifted, SPAN_CUT);
    let mut frame = DMatrix::zeros(c0.len(), m + 1);
    frame.set_column(0, &c0);
    if m > 0 {
        frame.columns_mut(1, m).copy_from(&dirs);
    }
    let cols: Vec<DVector<f64>> = range.column_iter().map(|c| &frame * c).collect();
    Ok(OracleRun {
        span: HermSubspace::from_coord_columns(n, &cols, tol.rank),
        accepted: accepted.len(),
        draws,
    })
}

/// Largest certified step `s ∈ [0, max]` with `x + s·d` accepted.
fn chord_end(x: &DVector<f64>, d: &DVector<f64>, max: f64, accept: &impl Fn(&DVector<f64>) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0, max);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if accept(&(x + d * mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> DVector<f64> {
    loop {
        let g = DVector::from_iterator(m, (0..m).map(|_| StandardNormal.sample(rng)));
        let norm: f64 = g.norm();
        if norm > 1e-12 {
            return g / norm;
        }
    }
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, m: usize, radius: f64) -> DVector<f64> {
    let u: f64 = rng.random();
    random_unit(rng, m) * (radius * u.powf(1.0 / m as f64))
}

/// Whether an operator is a state of `S` up to tolerances; used in tests.
pub fn is_state_of(s: &HermSubspace, x: &HermOp, tol: &Tolerances) -> bool {
    s.contains_op(x, tol).unwrap_or(false) && is_psd(x, tol.psd) && (x.trace() - 1.0).abs() <= tol.trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herm::pauli;

    #[test]
    fn diagonal_segment_spans_both_generators() {
        let t = Tolerances::default();
        let s = HermSubspace::span(2, &[HermOp::ket_bra(2, 0), HermOp::ket_bra(2, 1)], &t).unwrap();
        let run = brute_force_span_run(&s, 2000, 7, &t).unwrap();
        assert_eq!(run.span.dim(), 2);
        assert!(run.accepted >= 2000);
    }

    #[test]
    fn single_state() {
        let t = Tolerances::default();
        let s = HermSubspace::span(2, &[HermOp::diag(&[0.3, 0.7])], &t).unwrap();
        assert_eq!(brute_force_span(&s, 100, 1, &t).unwrap().dim(), 1);
    }

    #[test]
    fn boundary_point_found_at_center() {
        let t = Tolerances::default();
        let s = HermSubspace::span(2, &[HermOp::ket_bra(2, 0), pauli::x()], &t).unwrap();
        let run = brute_force_span_run(&s, 1000, 3, &t).unwrap();
        let span = run.span;
        let expected = HermSubspace::span(2, &[HermOp::ket_bra(2, 0)], &t).unwrap();
        assert!(span.same_as(&expected, &t).unwrap());
    }

    #[test]
    fn traceless_subspace_is_inconclusive() {
        let t = Tolerances::default();
        let s = HermSubspace::span(2, &[pauli::z()], &t).unwrap();
        assert!(matches!(brute_force_span(&s, 10, 0, &t), Err(Error::OracleInconclusive(_))));
    }

    #[test]
    fn deterministic_per_seed() {
        let t = Tolerances::default();
        let s = HermSubspace::full(2);
        let a = brute_force_span_run(&s, 500, 11, &t).unwrap();
        let b = brute_force_span_run(&s, 500, 11, &t).unwrap();
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.draws, b.draws);
    }
}
