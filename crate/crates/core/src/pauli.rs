//! Spin-1/2 Heisenberg chain assembled from Pauli tensor products, used as an
//! independent oracle for the boson assembly.

use crate::error::{domain, Result};
use nalgebra::{Complex, DMatrix};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn paulis() -> [DMatrix<C>; 3] {
    let z = c(0.0, 0.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
    ]
}

/// `σ^a_x σ^a_{x+1}` embedded in the `2^l` dimensional space.
fn bond_op(l: usize, x: usize, s: &DMatrix<C>) -> DMatrix<C> {
    let id = DMatrix::<C>::identity(2, 2);
    let mut out = DMatrix::<C>::identity(1, 1);
    for site in 0..l {
        let f = if site == x || site == x + 1 { s } else { &id };
        out = out.kronecker(f);
    }
    out
}

/// Dense `H = Σ_x (1/4 − S_x·S_{x+1})` with `S = σ/2`.
pub fn tensor_heisenberg(l: usize) -> Result<DMatrix<C>> {
    if !(2..=10).contains(&l) {
        return domain(format!("tensor oracle supports 2 <= l <= 10, got {l}"));
    }
    let dim = 1usize << l;
    let mut h = DMatrix::<C>::identity(dim, dim) * c(0.25 * (l - 1) as f64, 0.0);
    for s in paulis() {
        for x in 0..l - 1 {
            h -= bond_op(l, x, &s) * c(0.25, 0.0);
        }
    }
    Ok(h)
}

/// Ascending spectrum of the tensor-product Hamiltonian.
pub fn tensor_spectrum(l: usize) -> Result<Vec<f64>> {
    let h = tensor_heisenberg(l)?;
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sites() {
        let e = tensor_spectrum(2).unwrap();
        for (a, b) in e.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let h = tensor_heisenberg(3).unwrap();
        assert!((&h - h.adjoint()).camax() < 1e-15);
    }
}
