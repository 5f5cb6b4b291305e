//! Flat JSON files for matrices, subspaces, lattice elements and verdicts.
//!
//! Matrices are `{"dim": n, "re": [[..]], "im": [[..]]}`, row-major.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convex::FaceCertificate;
use crate::error::{Error, Result};
use crate::herm::{to_coords, CMatrix, DensityOp, HermOp, SpaceShape, Tolerances};
use crate::lattice::{Lattice, LatticeElement};
use crate::separability::{
    Decomposition, MembershipStatus, MembershipVerdict, SeparabilityStatus, SeparabilityVerdict, SeparabilityWitness,
};
use crate::subspace::HermSubspace;
use crate::vn::VNElement;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        MatrixJson {
            dim: n,
            re: (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }

    pub fn from_op(op: &HermOp) -> Self {
        Self::from_matrix(op.matrix())
    }

    /// Square matrix, checked against `dim`.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(Error::Malformed(format!("matrix rows do not match dim {n}")));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(self.re[i][j], self.im[i][j])))
    }

    pub fn to_op(&self, tol: &Tolerances) -> Result<HermOp> {
        HermOp::with_tol(self.to_matrix()?, tol)
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityOp> {
        DensityOp::new(self.to_op(tol)?, tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient_hilbert_dim: usize,
    pub basis: Vec<MatrixJson>,
}

impl SubspaceJson {
    pub fn from_subspace(s: &HermSubspace) -> Self {
        SubspaceJson {
            ambient_hilbert_dim: s.ambient_hilbert_dim(),
            basis: s.basis().iter().map(MatrixJson::from_op).collect(),
        }
    }

    pub fn to_subspace(&self, tol: &Tolerances) -> Result<HermSubspace> {
        let n = self.ambient_hilbert_dim;
        let mut cols = Vec::with_capacity(self.basis.len());
        for m in &self.basis {
            if m.dim != n {
                return Err(Error::DimensionMismatch { left: n, right: m.dim });
            }
            cols.push(to_coords(&m.to_op(tol)?));
        }
        Ok(HermSubspace::from_coord_columns(n, &cols, tol.rank))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementJson {
    pub ambient_hilbert_dim: usize,
    pub basis: Vec<MatrixJson>,
    pub shape: Vec<usize>,
}

impl ElementJson {
    pub fn from_element(a: &LatticeElement) -> Self {
        let s = SubspaceJson::from_subspace(a.rep());
        ElementJson { ambient_hilbert_dim: s.ambient_hilbert_dim, basis: s.basis, shape: a.shape().factors().to_vec() }
    }

    /// Reads an element, re-closing the stored subspace so that hand-written
    /// files need not be good representatives.
    pub fn to_element(&self, lat: &Lattice) -> Result<LatticeElement> {
        let s = SubspaceJson { ambient_hilbert_dim: self.ambient_hilbert_dim, basis: self.basis.clone() }
            .to_subspace(&lat.tol)?;
        let shape = SpaceShape::new(self.shape.clone())?;
        lat.close(&s, shape)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VNJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub rank: usize,
}

impl VNJson {
    pub fn from_vn(p: &VNElement) -> Self {
        VNJson { matrix: MatrixJson::from_op(p.projector()), rank: p.rank() }
    }

    pub fn to_vn(&self, tol: &Tolerances) -> Result<VNElement> {
        let p = VNElement::new(self.matrix.to_op(tol)?, tol)?;
        if p.rank() != self.rank {
            return Err(Error::Malformed(format!("stated rank {} but projector has rank {}", self.rank, p.rank())));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub support: MatrixJson,
    pub interior_point: MatrixJson,
    pub reduction_steps: Vec<MatrixJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &FaceCertificate) -> Self {
        CertificateJson {
            support: MatrixJson::from_op(&c.support),
            interior_point: MatrixJson::from_op(c.interior_point.op()),
            reduction_steps: c.reduction_steps.iter().map(MatrixJson::from_op).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: f64,
    pub first: MatrixJson,
    pub second: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub terms: Vec<TermJson>,
    pub residual: f64,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionJson {
            terms: d
                .terms
                .iter()
                .map(|t| TermJson { weight: t.weight, first: MatrixJson::from_op(&t.first), second: MatrixJson::from_op(&t.second) })
                .collect(),
            residual: d.residual,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: SeparabilityStatus,
    pub ppt_min_eigenvalue: f64,
    pub ppt_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
    /// Eigenvector of the partial transpose, as `[re, im]` pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppt_eigenvector: Option<Vec<[f64; 2]>>,
    pub note: String,
}

impl VerdictJson {
    pub fn from_verdict(v: &SeparabilityVerdict) -> Self {
        let (decomposition, ppt_eigenvector) = match &v.witness {
            Some(SeparabilityWitness::Decomposition(d)) => (Some(DecompositionJson::from_decomposition(d)), None),
            Some(SeparabilityWitness::PartialTranspose { eigenvector, .. }) => {
                (None, Some(eigenvector.iter().map(|z| [z.re, z.im]).collect()))
            }
            None => (None, None),
        };
        VerdictJson {
            status: v.status,
            ppt_min_eigenvalue: v.ppt_min_eigenvalue,
            ppt_exact: v.ppt_exact,
            decomposition,
            ppt_eigenvector,
            note: v.note.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipJson {
    pub status: MembershipStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<MatrixJson>,
    pub functional_value: f64,
    pub note: String,
}

impl MembershipJson {
    pub fn from_verdict(v: &MembershipVerdict) -> Self {
        MembershipJson {
            status: v.status,
            decomposition: v.decomposition.as_ref().map(DecompositionJson::from_decomposition),
            functional: v.functional.as_ref().map(MatrixJson::from_op),
            functional_value: v.functional_value,
            note: v.note.clone(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json_string(value)?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_density;

    #[test]
    fn matrix_round_trip() {
        let t = Tolerances::default();
        let rho = random_density(3, 2, 1).unwrap();
        let j = MatrixJson::from_op(rho.op());
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        let read = back.to_density(&t).unwrap();
        assert!((read.op() - rho.op()).hs_norm() < 1e-15);
    }

    #[test]
    fn rejects_ragged_rows() {
        let j = MatrixJson { dim: 2, re: vec![vec![1.0, 0.0]], im: vec![vec![0.0, 0.0], vec![0.0, 0.0]] };
        assert!(j.to_matrix().is_err());
    }

    #[test]
    fn element_round_trip() {
        let lat = Lattice::default();
        let a = lat.atom(&random_density(2, 2, 4).unwrap()).unwrap();
        let b = lat.atom(&random_density(2, 1, 5).unwrap()).unwrap();
        let j = lat.join(&a, &b).unwrap();
        let text = serde_json::to_string(&ElementJson::from_element(&j)).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert!(lat.eq(&back.to_element(&lat).unwrap(), &j).unwrap());
    }

    #[test]
    fn vn_round_trip_checks_rank() {
        let t = Tolerances::default();
        let p = VNElement::new(HermOp::ket_bra(3, 1), &t).unwrap();
        let mut j = VNJson::from_vn(&p);
        let value = serde_json::to_value(&j).unwrap();
        assert!(value.get("rank").is_some() && value.get("dim").is_some());
        assert_eq!(j.to_vn(&t).unwrap().rank(), 1);
        j.rank = 2;
        assert!(j.to_vn(&t).is_err());
    }
}
