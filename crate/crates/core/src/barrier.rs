//! Log-barrier path following for small linear matrix inequalities.
//!
//! Maximizes `wᵀz` subject to `A0 + Σ zᵢ Aᵢ ⪰ 0` by following the central path
//! of `wᵀz + μ·log det(A0 + Σ zᵢ Aᵢ)` with damped Newton steps while `μ`
//! shrinks geometrically. At a central point the duality gap is `μ·r` (r the
//! matrix size) and `μ·(A0 + Σ zᵢ Aᵢ)⁻¹` is a feasible dual matrix.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::herm::CMatrix;

pub(crate) struct Lmi {
    pub a0: CMatrix,
    pub a: Vec<CMatrix>,
    pub w: DVector<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    pub mu_start: f64,
    pub mu_final: f64,
    pub shrink: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { mu_start: 1.0, mu_final: 1e-12, shrink: 0.1 }
    }
}

pub(crate) struct PathPoint {
    pub z: DVector<f64>,
    pub mu: f64,
    /// `A0 + Σ zᵢ Aᵢ` at `z`.
    pub slack: CMatrix,
}

impl PathPoint {
    /// `μ·slack⁻¹`, the dual matrix of the central point.
    pub fn dual(&self) -> CMatrix {
        let inv = hermitian_inverse(&self.slack);
        inv.scale(self.mu)
    }
}

/// Error: the Newton budget ran out; carries the last point reached.
pub(crate) struct BudgetExhausted {
    pub last: PathPoint,
}

impl Lmi {
    pub fn slack(&self, z: &DVector<f64>) -> CMatrix {
        let mut m = self.a0.clone();
        for (ai, &zi) in self.a.iter().zip(z.iter()) {
            m += ai.scale(zi);
        }
        m
    }

    fn value(&self, z: &DVector<f64>, mu: f64) -> Option<f64> {
        // Eigenvalues rather than Cholesky: the complex factorization does not
        // reliably reject indefinite input.
        let eig = hermitize(self.slack(z)).symmetric_eigenvalues();
        if eig.iter().any(|&l| l.is_nan() || l <= 0.0) {
            return None;
        }
        let logdet: f64 = eig.iter().map(|l| l.ln()).sum();
        Some(self.w.dot(z) + mu * logdet)
    }

    /// Follows the central path from the strictly feasible `z0`. `stop` is
    /// consulted after each completed `μ` stage and ends the run early.
    pub fn follow(
        &self,
        z0: DVector<f64>,
        schedule: Schedule,
        budget: &mut usize,
        mut stop: impl FnMut(&PathPoint) -> bool,
    ) -> Result<PathPoint, BudgetExhausted> {
        let mut z = z0;
        let mut mu = schedule.mu_start;
        loop {
            let exhausted = self.center(&mut z, mu, budget);
            let point = PathPoint { slack: self.slack(&z), z: z.clone(), mu };
            if exhausted {
                return Err(BudgetExhausted { last: point });
            }
            if mu <= schedule.mu_final || stop(&point) {
                return Ok(point);
            }
            mu = (mu * schedule.shrink).max(schedule.mu_final);
        }
    }

    /// Damped Newton centering at fixed `μ`. Returns true when the budget ran out.
    fn center(&self, z: &mut DVector<f64>, mu: f64, budget: &mut usize) -> bool {
        const MAX_STEPS: usize = 80;
        let p = z.len();
        for _ in 0..MAX_STEPS {
            if *budget == 0 {
                return true;
            }
            *budget -= 1;

            let slack = hermitize(self.slack(z));
            let inv = hermitian_inverse(&slack);
            let g_mats: Vec<CMatrix> = self.a.iter().map(|ai| &inv * ai).collect();
            let mut grad = self.w.clone();
            for (i, gi) in g_mats.iter().enumerate() {
                grad[i] += mu * trace(gi).re;
            }
            let mut hess = DMatrix::<f64>::zeros(p, p);
            for i in 0..p {
                for j in i..p {
                    let h = mu * trace_product(&g_mats[i], &g_mats[j]);
                    hess[(i, j)] = h;
                    hess[(j, i)] = h;
                }
            }
            let step = solve_spd(&hess, &grad);
            let decrement = grad.dot(&step);
            // `decrement / μ` is the squared Newton decrement of the scaled barrier.
            if !decrement.is_finite() || decrement <= 1e-9 * mu {
                return false;
            }

            let f0 = match self.value(z, mu) {
                Some(v) => v,
                None => return false,
            };
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-14 {
                let trial = &*z + &step * alpha;
                if let Some(f1) = self.value(&trial, mu) {
                    if f1 >= f0 + 0.25 * alpha * decrement {
                        *z = trial;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                return false;
            }
        }
        false
    }
}

fn hermitize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}

fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub(crate) fn hermitian_inverse(m: &CMatrix) -> CMatrix {
    let eig = hermitize(m.clone()).symmetric_eigen();
    let inv_vals = eig.eigenvalues.map(|v| Complex64::new(1.0 / v, 0.0));
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&inv_vals) * v.adjoint()
}

/// Solves `H x = g` for symmetric positive (semi)definite `H` with Jacobi
/// scaling; falls back to a clamped eigen-solve when Cholesky fails.
fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let p = g.len();
    let d = DVector::from_iterator(p, (0..p).map(|i| 1.0 / h[(i, i)].max(1e-300).sqrt()));
    let scaled = DMatrix::from_fn(p, p, |i, j| h[(i, j)] * d[i] * d[j]);
    let rhs = g.component_mul(&d);
    let y = match Cholesky::new(scaled.clone()) {
        Some(chol) => chol.solve(&rhs),
        None => {
            let eig = scaled.symmetric_eigen();
            let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
            let floor = lmax * 1e-14;
            let coeffs = eig.eigenvectors.transpose() * &rhs;
            let coeffs = DVector::from_iterator(
                p,
                coeffs.iter().zip(eig.eigenvalues.iter()).map(|(&c, &l)| {
                    if l > floor {
                        c / l
                    } else {
                        0.0
                    }
                }),
            );
            &eig.eigenvectors * coeffs
        }
    };
    y.component_mul(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(m: &[f64], n: usize) -> CMatrix {
        CMatrix::from_row_iterator(n, n, m.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn maximizes_min_eigenvalue_of_diagonal_segment() {
        // diag(p, 1−p) − t·I ⪰ 0, maximize t: optimum t = 1/2 at p = 1/2.
        let lmi = Lmi {
            a0: real(&[0.0, 0.0, 0.0, 1.0], 2),
            a: vec![real(&[1.0, 0.0, 0.0, -1.0], 2), real(&[-1.0, 0.0, 0.0, -1.0], 2)],
            w: DVector::from_vec(vec![0.0, 1.0]),
        };
        let mut budget = 5000;
        let point = lmi
            .follow(DVector::from_vec(vec![0.5, -1.0]), Schedule::default(), &mut budget, |_| false)
            .ok()
            .unwrap();
        assert!((point.z[1] - 0.5).abs() < 1e-10);
        assert!((point.z[0] - 0.5).abs() < 1e-8);
        let dual = point.dual();
        assert!((trace(&dual).re - 1.0).abs() < 1e-3);
    }

    #[test]
    fn reaches_zero_on_a_boundary_optimum() {
        // [[1, c], [c, 0]] − t·I: the best t is 0 at c = 0.
        let lmi = Lmi {
            a0: real(&[1.0, 0.0, 0.0, 0.0], 2),
            a: vec![real(&[0.0, 1.0, 1.0, 0.0], 2), real(&[-1.0, 0.0, 0.0, -1.0], 2)],
            w: DVector::from_vec(vec![0.0, 1.0]),
        };
        let mut budget = 5000;
        let point = lmi
            .follow(DVector::from_vec(vec![0.0, -1.0]), Schedule::default(), &mut budget, |_| false)
            .ok()
            .unwrap();
        let t = point.z[1];
        assert!(t <= 0.0 && t > -1e-10, "t = {t}");
        // The dual concentrates on |1⟩⟨1|.
        let dual = point.dual();
        assert!((dual[(1, 1)].re - 1.0).abs() < 1e-6);
    }
}
