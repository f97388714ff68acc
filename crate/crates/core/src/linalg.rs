//! Dense symmetric eigensolvers with ascending ordering.

use crate::operator::HermitianOperator;
use nalgebra::{DMatrix, DVector};

/// Eigenvalues and column eigenvectors, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn eigenvalues(op: &HermitianOperator) -> Vec<f64> {
    sorted_eigenvalues(op.to_dense())
}

pub fn symmetric_eigen(m: DMatrix<f64>) -> Spectrum {
    let n = m.nrows();
    if n == 0 {
        return Spectrum { values: Vec::new(), vectors: m };
    }
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Spectrum { values, vectors }
}

pub fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    sorted_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let v = sorted_eigenvalues(m.clone());
    match (v.first(), v.last()) {
        (Some(a), Some(b)) => a.abs().max(b.abs()),
        _ => 0.0,
    }
}

pub fn column(m: &DMatrix<f64>, k: usize) -> Vec<f64> {
    m.column(k).iter().copied().collect()
}

pub fn to_vector(x: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_vectors() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = symmetric_eigen(m.clone());
        assert!((s.values[0] - 1.0).abs() < 1e-14 && (s.values[1] - 3.0).abs() < 1e-14);
        let v = s.vectors.column(0);
        assert!((&m * v - v * 1.0).amax() < 1e-14);
        assert_eq!(spectral_norm(&m), s.values[1]);
        assert!(sorted_eigenvalues(DMatrix::zeros(0, 0)).is_empty());
    }
}
