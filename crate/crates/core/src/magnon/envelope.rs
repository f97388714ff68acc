use super::constants::{C1, C2};
use super::modes::ModeFamily;
use super::sums::{
    free_boson_integral_from, free_boson_sum, lemma53_split_bound, lemma_entropy_error, lemma_trace_ratio_bound,
    log_integral,
};
use crate::error::{domain, Result};
use crate::lattice::SpinLattice;
use crate::spin::SpinMagnitude;
use crate::thermo::{free_energy, full_spectrum};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Upper,
    Lower,
}

/// Where the cutoff energy `E₀ = −ℓ f_ℓ(β/2)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum E0Source {
    /// Exact diagonalization of the open chain; small `ℓ` only.
    #[serde(rename = "exact-ED")]
    ExactEd,
    /// The preliminary Casimir bound, maximized over subadditive splits.
    #[serde(rename = "lemma-5.3")]
    Lemma53,
}

impl E0Source {
    pub fn name(&self) -> &'static str {
        match self {
            E0Source::ExactEd => "exact-ED",
            E0Source::Lemma53 => "lemma-5.3",
        }
    }
}

/// The free prefactors of the box-size choices.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeConfig {
    pub c_upper: f64,
    pub c_lower: f64,
    pub e0_source: E0Source,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        Self { c_upper: 1.0, c_lower: 1.0, e0_source: E0Source::Lemma53 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEnvelope {
    pub kind: EnvelopeKind,
    pub beta: f64,
    pub s: f64,
    pub dimension: usize,
    pub ell: usize,
    /// The assembled bound on `f`; the trivial bound when not informative.
    pub value: f64,
    pub leading: f64,
    pub ratio: f64,
    pub relative_error: f64,
    pub informative: bool,
    pub trace_ratio: Option<f64>,
    pub delta: Option<f64>,
    pub e0: Option<f64>,
}

/// `C₁S^{−1/2}β^{−3/2}` in 1D, `C₂S^{−1}β^{−2}` in 2D.
pub fn leading_term(beta: f64, s: f64, dimension: usize) -> f64 {
    match dimension {
        1 => C1 / (s.sqrt() * beta.powf(1.5)),
        _ => C2 / (s * beta * beta),
    }
}

fn round_ell(v: f64) -> usize {
    if v.is_finite() {
        (v.round() as usize).max(2)
    } else {
        2
    }
}

/// `c(βS)^{5/8}(ln βS)^{1/4}` in 1D, `c(βS)^{5/6}(ln βS)^{−2/3}` in 2D.
pub fn upper_ell_choice(bs: f64, dimension: usize, c: f64) -> usize {
    if bs <= std::f64::consts::E {
        return 2;
    }
    match dimension {
        1 => round_ell(c * bs.powf(0.625) * bs.ln().powf(0.25)),
        _ => round_ell(c * bs.powf(5.0 / 6.0) * bs.ln().powf(-2.0 / 3.0)),
    }
}

/// `c(βS)^{7/12}(ln βS³)^{−1/3}`.
pub fn lower_ell_choice(beta: f64, s: f64, c: f64) -> usize {
    let lg = (beta * s * s * s).ln();
    if lg <= 1.0 {
        return 2;
    }
    round_ell(c * (beta * s).powf(7.0 / 12.0) * lg.powf(-1.0 / 3.0))
}

fn checked(beta: f64, s: f64, dimension: usize) -> Result<()> {
    if !(beta > 0.0 && s > 0.0) {
        return domain(format!("beta and S must be positive, got beta={beta}, S={s}"));
    }
    if dimension != 1 && dimension != 2 {
        return domain(format!("dimension must be 1 or 2, got {dimension}"));
    }
    Ok(())
}

fn finish(mut e: ErrorEnvelope) -> ErrorEnvelope {
    e.ratio = e.value / e.leading;
    e.relative_error = (e.ratio - 1.0).abs();
    e
}

/// Upper bound on `f` at an explicit box size:
/// `(1/π^dβ)∫_{[π/(ℓ+1),π]^d} + (1+ℓ⁻¹)^{−d}[−ln R/(βℓ^d) + E/(ℓ^d R)]`.
pub fn upper_envelope_at(beta: f64, s: f64, dimension: usize, ell: usize) -> Result<ErrorEnvelope> {
    checked(beta, s, dimension)?;
    if ell < 2 {
        return domain(format!("box size must be at least 2, got {ell}"));
    }
    let r = lemma_trace_ratio_bound(ell, dimension, beta, s);
    let leading = leading_term(beta, s, dimension);
    let mut env = ErrorEnvelope {
        kind: EnvelopeKind::Upper,
        beta,
        s,
        dimension,
        ell,
        value: 0.0,
        leading,
        ratio: 0.0,
        relative_error: 0.0,
        informative: false,
        trace_ratio: Some(r),
        delta: None,
        e0: None,
    };
    if r > 0.0 {
        let lf = ell as f64;
        let vol = lf.powi(dimension as i32);
        let loc = (1.0 + 1.0 / lf).powi(-(dimension as i32));
        let err = lemma_entropy_error(ell, dimension, beta, s);
        let integral = free_boson_integral_from(beta, s, dimension, PI / (ell + 1) as f64)?;
        let v = integral + loc * (-r.ln() / (beta * vol) + err / (vol * r));
        if v < 0.0 {
            env.value = v;
            env.informative = true;
        }
    }
    Ok(finish(env))
}

pub fn upper_envelope(beta: f64, s: f64, dimension: usize, cfg: &EnvelopeConfig) -> Result<ErrorEnvelope> {
    upper_envelope_at(beta, s, dimension, upper_ell_choice(beta * s, dimension, cfg.c_upper))
}

/// Lower bound on `f` at an explicit box size and cutoff energy:
/// `(1/βℓ)Σ_{m=1}^{ℓ−1} ln(1−e^{−βS(1−δ)ε(πm/ℓ)}) − ln(1+(2Sℓ+1)(N₀+1))/(βℓ)`.
pub fn lower_envelope_at(beta: f64, s: f64, ell: usize, e0: f64) -> Result<ErrorEnvelope> {
    checked(beta, s, 1)?;
    if ell < 2 {
        return domain(format!("box size must be at least 2, got {ell}"));
    }
    if !(e0 >= 0.0) {
        return domain(format!("cutoff energy must be nonnegative, got {e0}"));
    }
    let lf = ell as f64;
    let n0 = e0 * lf * lf / (2.0 * s);
    let delta = (2.0 + 9.0 / 8f64.sqrt()) * e0 * e0 * lf.powi(3) / (s * s);
    // f ≥ f_1 always holds
    let trivial = -(2.0 * s + 1.0).ln() / beta;
    let mut env = ErrorEnvelope {
        kind: EnvelopeKind::Lower,
        beta,
        s,
        dimension: 1,
        ell,
        value: trivial,
        leading: leading_term(beta, s, 1),
        ratio: 0.0,
        relative_error: 0.0,
        informative: false,
        trace_ratio: None,
        delta: Some(delta),
        e0: Some(e0),
    };
    if delta < 1.0 {
        let sum = if ell <= 4_000_000 {
            free_boson_sum(ell, 1, beta, s, delta, ModeFamily::Neumann)?
        } else {
            // the mode sum dominates the integral over [0, π]
            log_integral(beta * s * (1.0 - delta), 0.0, 0.0, PI)? / (PI * beta)
        };
        let v = sum - (1.0 + (2.0 * s * lf + 1.0) * (n0 + 1.0)).ln() / (beta * lf);
        if v > trivial {
            env.value = v;
            env.informative = true;
        }
    }
    Ok(finish(env))
}

/// `E₀ = −ℓ f_ℓ(β/2)` or its lower bound from the preliminary estimate.
pub fn cutoff_energy(ell: usize, beta: f64, spin: SpinMagnitude, source: E0Source) -> Result<f64> {
    match source {
        E0Source::Lemma53 => Ok(-(ell as f64) * lemma53_split_bound(ell, 0.5 * beta, spin.s())),
        E0Source::ExactEd => {
            let spec = full_spectrum(&SpinLattice::chain(ell)?, spin)?;
            Ok(-(ell as f64) * free_energy(&spec, 0.5 * beta)?)
        }
    }
}

/// Lower bound with the configured box-size prefactor and `E₀` source.
/// The spin enters through `βS` and `S`; `s` must be a half integer for the
/// exact-ED source.
pub fn lower_envelope(beta: f64, s: f64, cfg: &EnvelopeConfig) -> Result<ErrorEnvelope> {
    checked(beta, s, 1)?;
    let ell = lower_ell_choice(beta, s, cfg.c_lower);
    let e0 = match cfg.e0_source {
        E0Source::Lemma53 => -(ell as f64) * lemma53_split_bound(ell, 0.5 * beta, s),
        E0Source::ExactEd => {
            let two_s = (2.0 * s).round();
            if (two_s - 2.0 * s).abs() > 1e-12 {
                return domain(format!("exact-ED cutoff needs a half-integer spin, got {s}"));
            }
            cutoff_energy(ell, beta, SpinMagnitude::new(two_s as u32)?, E0Source::ExactEd)?
        }
    };
    lower_envelope_at(beta, s, ell, e0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_choices() {
        assert_eq!(upper_ell_choice(1.0, 1, 1.0), 2);
        assert!(upper_ell_choice(1e6, 1, 1.0) > upper_ell_choice(1e4, 1, 1.0));
        assert_eq!(lower_ell_choice(2.0, 0.5, 1.0), 2);
        let l = lower_ell_choice(2e8, 0.5, 1.0);
        let want = (1e8f64).powf(7.0 / 12.0) * (2e8f64 * 0.125).ln().powf(-1.0 / 3.0);
        assert_eq!(l, want.round() as usize);
    }

    #[test]
    fn small_beta_not_informative() {
        let e = upper_envelope(20.0, 0.5, 1, &EnvelopeConfig::default()).unwrap();
        assert!(!e.informative);
        assert!(e.value.is_finite());
        let low = lower_envelope(200.0, 0.5, &EnvelopeConfig::default()).unwrap();
        assert!(!low.informative);
        assert!(low.value.is_finite());
    }

    #[test]
    fn large_beta_upper_below_leading_magnitude() {
        let cfg = EnvelopeConfig { c_upper: 0.5, ..Default::default() };
        let e = upper_envelope(2e8, 0.5, 1, &cfg).unwrap();
        assert!(e.informative);
        assert!(e.ratio > 0.0 && e.ratio < 1.0, "{}", e.ratio);
        let d2 = upper_envelope(2e6, 0.5, 2, &EnvelopeConfig::default()).unwrap();
        assert!(d2.ratio < 1.0);
    }

    #[test]
    fn lower_below_upper_where_both_informative() {
        let cfg = EnvelopeConfig { c_upper: 0.5, ..Default::default() };
        for bs in [1e6, 1e8] {
            let beta = bs / 0.5;
            let lo = lower_envelope(beta, 0.5, &cfg).unwrap();
            let up = upper_envelope(beta, 0.5, 1, &cfg).unwrap();
            if lo.informative && up.informative {
                assert!(lo.value <= up.value);
            }
        }
    }
}
