//! Full symmetric eigendecomposition of an [`OperatorMatrix`] with
//! certified residuals.

pub mod jacobi;
pub mod tridiagonal;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;

pub use jacobi::jacobi_eigen;

/// Eigenpairs closer than `DEGENERACY_GAP * (1 + |λ|)` form one cluster.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Residual certificate: `‖A v − λ v‖₂ ≤ RESIDUAL_TOLERANCE · (1 + ‖A‖_∞)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Ascending eigenvalues `λ_1 ≤ … ≤ λ_N` (stored 0-based) with eigenfunctions
/// orthonormal in `ℓ²(X, m)`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Column `n` is `f_n`.
    eigenfunctions: DMatrix<f64>,
    measure: Vec<f64>,
    residual_bound: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of vertices the eigenfunctions live on.
    pub fn dim(&self) -> usize {
        self.measure.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        self.eigenvalues[n]
    }

    pub fn eigenfunctions(&self) -> &DMatrix<f64> {
        &self.eigenfunctions
    }

    pub fn eigenfunction(&self, n: usize) -> Vec<f64> {
        self.eigenfunctions.column(n).iter().copied().collect()
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// `max_n ‖A v_n − λ_n v_n‖₂` achieved by the solve.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    /// Distance from λ_n to its nearest neighbour (`+∞` for N = 1).
    pub fn gap(&self, n: usize) -> f64 {
        let l = &self.eigenvalues;
        let below = if n > 0 { l[n] - l[n - 1] } else { f64::INFINITY };
        let above = if n + 1 < l.len() { l[n + 1] - l[n] } else { f64::INFINITY };
        below.min(above)
    }

    pub fn is_simple(&self, n: usize) -> bool {
        self.gap(n) >= DEGENERACY_GAP * (1.0 + self.eigenvalues[n].abs())
    }

    /// `max_{i,j} |⟨f_i, f_j⟩ − δ_ij|` in `ℓ²(X, m)`.
    pub fn orthonormality_defect(&self) -> f64 {
        let weighted = DMatrix::from_fn(self.dim(), self.len(), |x, n| {
            self.eigenfunctions[(x, n)] * self.measure[x]
        });
        let gram = self.eigenfunctions.transpose() * weighted;
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in 0..self.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Unit eigenvector `v_n = M^{1/2} f_n` of the symmetric matrix.
    pub fn unweighted_vector(&self, n: usize) -> Vec<f64> {
        self.eigenfunctions
            .column(n)
            .iter()
            .zip(&self.measure)
            .map(|(f, m)| f * m.sqrt())
            .collect()
    }
}

/// Householder tridiagonalization followed by implicit QL.
///
/// Eigenvectors `v_n` of `A` are mapped to `f_n = v_n / sqrt(m)`. Within a
/// numerically degenerate cluster the vectors are re-orthonormalized. Each
/// `f_n` is signed so that its first largest-magnitude entry is positive.
pub fn eigendecompose(op: &OperatorMatrix) -> Result<Spectrum> {
    let a = op.matrix();
    let n = op.dim();
    let mut z: Vec<f64> = a.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonal::householder(&mut z, n, &mut d, &mut e);
    tridiagonal::implicit_ql(&mut z, n, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DMatrix::from_fn(n, n, |r, c| z[r + order[c] * n]);

    reorthonormalize_clusters(&eigenvalues, &mut vectors);

    let measure = op.graph().measure().to_vec();
    let mut eigenfunctions = DMatrix::from_fn(n, n, |x, k| vectors[(x, k)] / measure[x].sqrt());
    for k in 0..n {
        let mut col = eigenfunctions.column_mut(k);
        let mut lead = 0;
        for x in 1..n {
            if col[x].abs() > col[lead].abs() {
                lead = x;
            }
        }
        if n > 0 && col[lead] < 0.0 {
            col.neg_mut();
            vectors.column_mut(k).neg_mut();
        }
    }

    let residuals = a * &vectors - &vectors * DMatrix::from_diagonal(&eigenvalues.clone().into());
    let residual_bound = residuals
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let bound = RESIDUAL_TOLERANCE * (1.0 + op.inf_norm());
    if residual_bound > bound || residual_bound.is_nan() {
        return Err(Error::Uncertified {
            residual: residual_bound,
            bound,
        });
    }

    Ok(Spectrum {
        eigenvalues,
        eigenfunctions,
        measure,
        residual_bound,
    })
}

/// Modified Gram–Schmidt inside each run of eigenvalues closer than the
/// degeneracy gap. The unweighted inner product on `v` is the weighted one
/// on `f = v / sqrt(m)`.
fn reorthonormalize_clusters(eigenvalues: &[f64], vectors: &mut DMatrix<f64>) {
    let n = eigenvalues.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eigenvalues[end] - eigenvalues[end - 1]
                < DEGENERACY_GAP * (1.0 + eigenvalues[end].abs())
        {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                for j in start..k {
                    let proj = vectors.column(j).dot(&vectors.column(k));
                    let vj = vectors.column(j).clone_owned();
                    vectors.column_mut(k).axpy(-proj, &vj, 1.0);
                }
                let norm = vectors.column(k).norm();
                vectors.column_mut(k).unscale_mut(norm);
            }
        }
        start = end;
    }
}

/// `#{n : λ_n ≤ t}`.
pub fn eigenvalue_counting(spectrum: &Spectrum, t: f64) -> usize {
    spectrum.eigenvalues.partition_point(|&l| l <= t)
}
