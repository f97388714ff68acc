use crate::error::{domain, Result};
use crate::lattice::SpinLattice;
use crate::magnon::{cutoff_energy, lemma53_split_bound, E0Source};
use crate::spin::SpinMagnitude;
use crate::thermo::{free_energy, full_spectrum};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundBudget {
    pub beta: f64,
    pub s: f64,
    pub l: usize,
    pub e0: f64,
    pub n0: f64,
    pub delta: f64,
    /// `√(4βS / ln βS)`, only for `βS > 1`.
    pub ell0: Option<f64>,
    /// `C` with `f_ℓ(β) = −C (ln βS)^{1/2} β^{−3/2} S^{−1/2} ln(βS³)`, when both logs are positive.
    pub implied_c: Option<f64>,
    pub e0_source: E0Source,
    /// `δ < 1`.
    pub informative: bool,
}

pub fn ell0(beta: f64, s: f64) -> Option<f64> {
    let x = beta * s;
    (x > 1.0).then(|| (4.0 * x / x.ln()).sqrt())
}

/// `(2 + 9/√8) E₀² ℓ³ / S²`.
pub fn budget_delta(e0: f64, l: usize, s: f64) -> f64 {
    (2.0 + 9.0 / 8f64.sqrt()) * e0 * e0 * (l as f64).powi(3) / (s * s)
}

pub fn compute_budget(l: usize, beta: f64, spin: SpinMagnitude, source: E0Source) -> Result<LowerBoundBudget> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    let s = spin.s();
    let l0 = ell0(beta, s);
    let f_l = match source {
        E0Source::Lemma53 => {
            let Some(l0v) = l0 else {
                return domain(format!("the preliminary bound needs beta*S > 1, got {}", beta * s));
            };
            if (l as f64) < 0.5 * l0v {
                return domain(format!("the preliminary bound needs l >= l0/2 = {:.3}, got l = {l}", 0.5 * l0v));
            }
            lemma53_split_bound(l, beta, s)
        }
        E0Source::ExactEd => free_energy(&full_spectrum(&SpinLattice::chain(l)?, spin)?, beta)?,
    };
    let e0 = cutoff_energy(l, beta, spin, source)?.max(0.0);
    let n0 = e0 * (l * l) as f64 / (2.0 * s);
    let delta = budget_delta(e0, l, s);
    let (a, b) = ((beta * s).ln(), (beta * s.powi(3)).ln());
    let implied_c = (a > 0.0 && b > 0.0).then(|| -f_l * beta.powf(1.5) * s.sqrt() / (a.sqrt() * b));
    Ok(LowerBoundBudget { beta, s, l, e0, n0, delta, ell0: l0, implied_c, e0_source: source, informative: delta < 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell0_arithmetic() {
        let v = ell0(1e4, 1.0).unwrap();
        assert!((v - 65.9).abs() < 0.05, "{v}");
        assert!((v - (4e4f64 / 1e4f64.ln()).sqrt()).abs() < 1e-12);
        assert!(ell0(1.0, 1.0).is_none());
    }

    #[test]
    fn delta_arithmetic() {
        let d = budget_delta(0.1, 10, 0.5);
        assert!((d - 207.28).abs() < 0.01, "{d}");
    }

    #[test]
    fn exact_path() {
        let b = compute_budget(6, 8.0, SpinMagnitude::half(), E0Source::ExactEd).unwrap();
        assert!(b.e0 >= 0.0 && b.e0.is_finite());
        assert!((b.n0 - b.e0 * 36.0).abs() < 1e-12);
        // βS³ = 1
        assert!(b.implied_c.is_none());
        let cold = compute_budget(6, 64.0, SpinMagnitude::half(), E0Source::ExactEd).unwrap();
        assert!(cold.implied_c.unwrap() > 0.0);
        // E₀ <= ℓ ln(2S+1)/(β/2)
        assert!(b.e0 <= 6.0 * 2f64.ln() / 4.0);
    }

    #[test]
    fn lemma_path_preconditions() {
        let spin = SpinMagnitude::half();
        assert!(compute_budget(10, 1.0, spin, E0Source::Lemma53).is_err());
        let l0 = ell0(2e4 * 0.5, 0.5).unwrap();
        let small = (0.5 * l0).floor() as usize - 1;
        assert!(compute_budget(small, 2e4, spin, E0Source::Lemma53).is_err());
        let b = compute_budget(60, 2e4, spin, E0Source::Lemma53).unwrap();
        assert!(b.e0 >= 0.0 && b.implied_c.unwrap() > 0.0);
    }
}
