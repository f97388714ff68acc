use crate::error::{domain, Result};
use std::f64::consts::PI;

/// `ε(p) = 2(1 − cos p)`, evaluated as `4 sin²(p/2)` to keep small momenta accurate.
pub fn eps(p: f64) -> f64 {
    let s = (0.5 * p).sin();
    4.0 * s * s
}

/// `ln(1 − e^{−x})` for `x > 0`.
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x <= 1.0 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeFamily {
    /// `π m/(ℓ+1)`, `m = 1..ℓ`.
    Dirichlet,
    /// `π m/ℓ`, `m = 1..ℓ−1`, the nonzero Neumann modes.
    Neumann,
}

impl ModeFamily {
    pub fn momenta(self, l: usize) -> Vec<f64> {
        match self {
            ModeFamily::Dirichlet => (1..=l).map(|m| PI * m as f64 / (l + 1) as f64).collect(),
            ModeFamily::Neumann => (1..l).map(|m| PI * m as f64 / l as f64).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirichletModeSet {
    pub dimension: usize,
    pub l: usize,
    /// One momentum tuple per mode, sorted by energy.
    pub modes: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
}

impl DirichletModeSet {
    /// `φ_p(x) = [2/(ℓ+1)]^{d/2} Π sin(x_i p_i)` with 1-based site coordinates.
    pub fn eigenfunction(&self, mode: usize, x: &[usize]) -> f64 {
        let norm = (2.0 / (self.l + 1) as f64).powf(0.5 * self.dimension as f64);
        norm * self.modes[mode].iter().zip(x).map(|(p, &xi)| (xi as f64 * p).sin()).product::<f64>()
    }

    /// Largest `|Σ_x φ_p(x)² − 1|` over the modes.
    pub fn normalization_residual(&self) -> f64 {
        let sites: Vec<Vec<usize>> = match self.dimension {
            1 => (1..=self.l).map(|x| vec![x]).collect(),
            _ => (1..=self.l).flat_map(|a| (1..=self.l).map(move |b| vec![a, b])).collect(),
        };
        (0..self.modes.len())
            .map(|k| (sites.iter().map(|x| self.eigenfunction(k, x).powi(2)).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn dirichlet_modes(l: usize, dimension: usize) -> Result<DirichletModeSet> {
    if l < 2 {
        return domain(format!("mode set needs l >= 2, got {l}"));
    }
    let one = ModeFamily::Dirichlet.momenta(l);
    let mut modes: Vec<Vec<f64>> = match dimension {
        1 => one.iter().map(|&p| vec![p]).collect(),
        2 => one.iter().flat_map(|&p| one.iter().map(move |&q| vec![p, q])).collect(),
        d => return domain(format!("dimension must be 1 or 2, got {d}")),
    };
    let energy = |m: &Vec<f64>| m.iter().map(|&p| eps(p)).sum::<f64>();
    modes.sort_by(|a, b| energy(a).total_cmp(&energy(b)));
    let energies = modes.iter().map(energy).collect();
    Ok(DirichletModeSet { dimension, l, modes, energies })
}
