//! Lowest eigenvalue of a sparse sector block by Lanczos with full
//! reorthogonalization, optionally restricted to the complement of known
//! eigenvectors.

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-11, max_iter: 600 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(q, v);
        axpy(-c, q, v);
    }
}

fn ritz_lowest(alphas: &[f64], betas: &[f64], b: f64) -> (f64, f64) {
    let m = alphas.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let (imin, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    (theta, (b * eig.eigenvectors[(m - 1, imin)]).abs())
}

/// Smallest eigenvalue of `op` on the orthogonal complement of `deflate`
/// (orthonormal vectors that are exact eigenvectors of `op`).
pub fn lowest_eigenvalue(op: &HermitianOperator, deflate: &[Vec<f64>], opts: LanczosOptions) -> Result<f64> {
    let n = op.dim();
    let free = n.saturating_sub(deflate.len());
    if free == 0 {
        return Err(Error::Domain("nothing left after deflation".into()));
    }
    // deterministic start with no special symmetry
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919 + 13) % 101) as f64 / 101.0).collect();
    project_out(&mut v, deflate);
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|a| *a /= norm);

    let mut qs: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut last = f64::NAN;
    let max_iter = opts.max_iter.min(free);
    for k in 0..max_iter {
        op.apply(&qs[k], &mut w);
        let a = dot(&qs[k], &w);
        alphas.push(a);
        for _ in 0..2 {
            project_out(&mut w, deflate);
            for q in &qs {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        project_out(&mut w, deflate);
        let b = dot(&w, &w).sqrt();
        let m = alphas.len();
        let done = b < 1e-14 || m == free || k + 1 == max_iter;
        if done || m % 8 == 0 {
            let (theta, resid) = ritz_lowest(&alphas, &betas, b);
            if resid < opts.tol || done {
                if resid < opts.tol || b < 1e-14 || m == free {
                    return Ok(theta);
                }
                last = theta;
                break;
            }
            last = theta;
        }
        betas.push(b);
        qs.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::Numeric(format!("Lanczos did not converge in {max_iter} steps, last estimate {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::MagnonSectorBasis;
    use crate::hilbert::{assemble_heisenberg, enumerate_sector_basis, zero_mode};
    use crate::lattice::SpinLattice;
    use crate::linalg::eigenvalues;
    use crate::spin::SpinMagnitude;

    #[test]
    fn matches_dense_after_deflation() {
        let lat = SpinLattice::chain(7).unwrap();
        let b: MagnonSectorBasis = enumerate_sector_basis(&lat, SpinMagnitude::new(2).unwrap(), 4).unwrap();
        let h = assemble_heisenberg(&b).unwrap();
        let dense = eigenvalues(&h);
        assert!(dense[0].abs() < 1e-12);
        let z = zero_mode(&b);
        let low = lowest_eigenvalue(&h, &[z], LanczosOptions::default()).unwrap();
        assert!((low - dense[1]).abs() < 1e-10, "{low} vs {}", dense[1]);
    }
}
