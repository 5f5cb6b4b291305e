//! Full singular value decompositions.
//!
//! nalgebra's SVD loses accuracy on rank-deficient inputs (singular vectors
//! of an exact 2×2 projector come out tens of degrees off), and every rank
//! decision here goes through an SVD, so the decompositions are delegated to
//! faer and converted back.

use nalgebra::{ComplexField, DMatrix};

/// `M = U·diag(s)·V†` with `s` nonincreasing. `U` and `V` are square for the
/// full decomposition and have `min(rows, cols)` columns for the thin one.
#[derive(Debug, Clone)]
pub(crate) struct Svd<T: ComplexField> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v: DMatrix<T>,
}

macro_rules! svd_pair {
    ($full:ident, $thin:ident, $t:ty, $re:expr) => {
        pub(crate) fn $full(m: &DMatrix<$t>) -> Svd<$t> {
            let (r, c) = m.shape();
            if r == 0 || c == 0 {
                return Svd { u: DMatrix::identity(r, r), s: Vec::new(), v: DMatrix::identity(c, c) };
            }
            let f = faer::Mat::<$t>::from_fn(r, c, |i, j| m[(i, j)]);
            let svd = f.svd().expect("SVD did not converge");
            let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
            Svd {
                u: DMatrix::from_fn(r, r, |i, j| u[(i, j)]),
                s: (0..r.min(c)).map(|i| $re(s[i])).collect(),
                v: DMatrix::from_fn(c, c, |i, j| v[(i, j)]),
            }
        }

        /// Thin variant; use when only the range matters and one side is long.
        pub(crate) fn $thin(m: &DMatrix<$t>) -> Svd<$t> {
            let (r, c) = m.shape();
            let k = r.min(c);
            if k == 0 {
                return Svd { u: DMatrix::zeros(r, 0), s: Vec::new(), v: DMatrix::zeros(c, 0) };
            }
            let f = faer::Mat::<$t>::from_fn(r, c, |i, j| m[(i, j)]);
            let svd = f.thin_svd().expect("SVD did not converge");
            let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
            Svd {
                u: DMatrix::from_fn(r, k, |i, j| u[(i, j)]),
                s: (0..k).map(|i| $re(s[i])).collect(),
                v: DMatrix::from_fn(c, k, |i, j| v[(i, j)]),
            }
        }
    };
}

svd_pair!(svd_real, svd_real_thin, f64, |x: f64| x);
svd_pair!(svd_complex, svd_complex_thin, num_complex::Complex64, |x: num_complex::Complex64| x.re);

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn projector_singular_vectors_are_exact() {
        let v = DVector::from_vec(vec![0.9940492615765455, -0.10893147184870698]).normalize();
        let comp = DMatrix::<f64>::identity(2, 2) - &v * v.transpose();
        let d = svd_real(&comp);
        assert!((d.s[0] - 1.0).abs() < 1e-14 && d.s[1] < 1e-14);
        assert!(d.u.column(0).dot(&v).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_wide_and_tall() {
        for (r, c) in [(1, 3), (3, 1), (2, 5), (4, 4)] {
            let m = DMatrix::<f64>::from_fn(r, c, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
            let d = svd_real(&m);
            let mut sigma = DMatrix::zeros(r, c);
            for (i, &x) in d.s.iter().enumerate() {
                sigma[(i, i)] = x;
            }
            assert!((&d.u * sigma * d.v.transpose() - &m).norm() < 1e-12);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
            let t = svd_real_thin(&m);
            assert!((&t.u * DMatrix::from_diagonal(&DVector::from_vec(t.s.clone())) * t.v.transpose() - &m).norm() < 1e-12);
        }
    }
}
