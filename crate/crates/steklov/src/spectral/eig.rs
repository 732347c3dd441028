//! Dense symmetric eigensolvers and factorization helpers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const EIG_EPS: f64 = 1e-13;
const EIG_MAX_ITER: usize = 0; // 0 lets nalgebra iterate until convergence

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let decomp = a
        .clone()
        .try_symmetric_eigen(EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure(format!("symmetric QR stalled on {n}x{n} matrix")))?;
    let mut eigs: Vec<f64> = decomp.eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Full symmetric eigendecomposition with ascending eigenvalues.
pub fn sym_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let decomp = a
        .clone()
        .try_symmetric_eigen(EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure(format!("symmetric QR stalled on {n}x{n} matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomp.eigenvalues[i].partial_cmp(&decomp.eigenvalues[j]).unwrap());
    let eigs: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &decomp.eigenvectors.column(i));
    }
    Ok((eigs, vecs))
}

/// Generalized symmetric eigenvalues of `A x = λ B x` with `B` positive
/// definite, ascending, via Cholesky congruence.
pub fn sym_pair_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::EigensolverFailure("right-hand matrix is not positive definite".into()))?;
    let l_inv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(b.nrows(), b.ncols()))
        .ok_or_else(|| Error::EigensolverFailure("singular Cholesky factor".into()))?;
    let c = &l_inv * a * l_inv.transpose();
    let sym = (&c + c.transpose()) * 0.5;
    sym_eigenvalues(&sym)
}

/// Generalized symmetric eigenpairs, eigenvectors in original coordinates.
pub fn sym_pair_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::EigensolverFailure("right-hand matrix is not positive definite".into()))?;
    let l_inv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(b.nrows(), b.ncols()))
        .ok_or_else(|| Error::EigensolverFailure("singular Cholesky factor".into()))?;
    let c = &l_inv * a * l_inv.transpose();
    let sym = (&c + c.transpose()) * 0.5;
    let (eigs, y) = sym_eigen(&sym)?;
    // x = L⁻ᵗ y
    let x = l_inv.transpose() * y;
    Ok((eigs, x))
}

/// Partial-pivot LU with the relative magnitude of its smallest pivot.
pub struct FactoredBlock {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    /// min |U_ii| / ||A||_inf.
    pub pivot_margin: f64,
}

impl FactoredBlock {
    pub fn new(a: DMatrix<f64>) -> Self {
        let norm = a
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let n = a.nrows();
        let lu = a.lu();
        let min_pivot = (0..n)
            .map(|i| lu.u()[(i, i)].abs())
            .fold(f64::INFINITY, f64::min);
        let pivot_margin = if n == 0 { f64::INFINITY } else { min_pivot / norm };
        FactoredBlock { lu, pivot_margin }
    }

    pub fn solve(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.lu
            .solve(rhs)
            .ok_or_else(|| Error::EigensolverFailure("singular interior block".into()))
    }

    pub fn solve_vec(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        self.lu
            .solve(rhs)
            .ok_or_else(|| Error::EigensolverFailure("singular interior block".into()))
    }
}
