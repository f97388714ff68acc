//! Sparse real symmetric sector operators.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Real symmetric matrix on one sector, stored as sorted coordinate triplets
/// holding both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    /// Magnon number of the sector the matrix acts on.
    pub sector: usize,
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl HermitianOperator {
    /// Builds from unsorted triplets, summing duplicates and dropping exact zeros.
    pub fn from_triplets(sector: usize, dim: usize, mut entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = entries.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::Consistency(format!("entry ({r},{c}) outside dimension {dim}")));
        }
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != 0.0);
        let op = Self { sector, dim, entries: merged };
        let res = op.hermiticity_residual();
        if res > 1e-12 * op.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Consistency(format!("assembled matrix not symmetric, residual {res:e}")));
        }
        Ok(op)
    }

    pub fn zero(sector: usize, dim: usize) -> Self {
        Self { sector, dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.2.abs()))
    }

    /// Largest entrywise |M − Mᵀ|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for &(r, c, v) in &self.entries {
            if r < c {
                worst = worst.max((v - self.get(c, r)).abs());
            } else if r > c && self.get(c, r) == 0.0 {
                worst = worst.max(v.abs());
            }
        }
        worst
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(r, c))) {
            Ok(i) => self.entries[i].2,
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
    }

    pub fn expectation(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(r, c, v)| x[r] * v * x[c]).sum()
    }

    /// `self + a * other`, on the same sector.
    pub fn add_scaled(&self, a: f64, other: &HermitianOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Consistency("dimension mismatch".into()));
        }
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().map(|&(r, c, v)| (r, c, a * v)));
        Self::from_triplets(self.sector, self.dim, e)
    }

    /// `self + a * I`.
    pub fn shift(&self, a: f64) -> Self {
        let mut e = self.entries.clone();
        e.extend((0..self.dim).map(|i| (i, i, a)));
        Self::from_triplets(self.sector, self.dim, e).expect("diagonal shift keeps symmetry")
    }
}

/// Diagonal operator with one weight per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalProjector {
    pub sector: usize,
    pub weights: Vec<f64>,
}

impl DiagonalProjector {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}
