use super::constants::zeta_3_2;
use super::modes::{dirichlet_modes, eps, ln_one_minus_exp_neg, ModeFamily};
use crate::error::{domain, Result};
use crate::quadrature::{integrate, QuadOptions};
use std::f64::consts::PI;

fn check_positive(beta: f64, s: f64) -> Result<()> {
    if !(beta > 0.0 && s > 0.0) || !beta.is_finite() || !s.is_finite() {
        return domain(format!("beta and S must be positive and finite, got beta={beta}, S={s}"));
    }
    Ok(())
}

fn check_dimension(dimension: usize) -> Result<()> {
    if dimension == 1 || dimension == 2 {
        Ok(())
    } else {
        domain(format!("dimension must be 1 or 2, got {dimension}"))
    }
}

/// `(1/βℓ^d) Σ_p ln(1 − e^{−βS(1−δ)ε(p)})` over the chosen mode family.
pub fn free_boson_sum(l: usize, dimension: usize, beta: f64, s: f64, delta: f64, family: ModeFamily) -> Result<f64> {
    check_positive(beta, s)?;
    check_dimension(dimension)?;
    if !(0.0..1.0).contains(&delta) {
        return domain(format!("dilution delta must lie in [0, 1), got {delta}"));
    }
    if l < 2 {
        return domain(format!("l must be at least 2, got {l}"));
    }
    let x = beta * s * (1.0 - delta);
    let e: Vec<f64> = family.momenta(l).into_iter().map(eps).collect();
    let total: f64 = match dimension {
        1 => e.iter().map(|&a| ln_one_minus_exp_neg(x * a)).sum(),
        _ => e.iter().flat_map(|&a| e.iter().map(move |&b| ln_one_minus_exp_neg(x * (a + b)))).sum(),
    };
    Ok(total / (beta * (l as f64).powi(dimension as i32)))
}

fn opts(rel: f64) -> QuadOptions {
    QuadOptions { rel_tol: rel, ..QuadOptions::default() }
}

/// `∫_a^b ln(1 − e^{−(c + x ε(p))}) dp` for `0 <= a <= b <= π`.
///
/// Near `p = 0` the integrand varies on the scale `x^{−1/2}` and is log-singular
/// when `c = 0`; that stretch is integrated in `t = √p`.
pub fn log_integral(x: f64, c: f64, a: f64, b: f64) -> Result<f64> {
    log_integral_tol(x, c, a, b, 1e-12)
}

fn log_integral_tol(x: f64, c: f64, a: f64, b: f64, rel: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let g = |p: f64| ln_one_minus_exp_neg(c + x * eps(p));
    let cut = (12.0 / x.sqrt()).clamp(a, b);
    let mut total = 0.0;
    if cut > a {
        let h = |t: f64| if t > 0.0 { 2.0 * t * g(t * t) } else { 0.0 };
        total += integrate(h, a.sqrt(), cut.sqrt(), opts(rel))?.value;
    }
    if b > cut {
        total += integrate(g, cut, b, opts(rel))?.value;
    }
    Ok(total)
}

fn grid_integral(x: f64, a: f64) -> Result<f64> {
    // outer integrand is bounded but kinked on the thermal scale; reuse the same split
    let inner = |p: f64| -> f64 { log_integral_tol(x, x * eps(p), a, PI, 1e-12).unwrap_or(f64::NAN) };
    let cut = (12.0 / x.sqrt()).clamp(a, PI);
    let mut total = 0.0;
    if cut > a {
        let h = |t: f64| 2.0 * t * inner(t * t);
        total += integrate(h, a.sqrt(), cut.sqrt(), opts(1e-11))?.value;
    }
    if PI > cut {
        total += integrate(inner, cut, PI, opts(1e-11))?.value;
    }
    if !total.is_finite() {
        return Err(crate::error::Error::Numeric("inner quadrature failed in the 2D integral".into()));
    }
    Ok(total)
}

/// `(1/πβ)∫₀^π ln(1−e^{−βSε(p)})dp` in 1D, `(1/π²β)∫_{[0,π]²}` in 2D.
pub fn free_boson_integral(beta: f64, s: f64, dimension: usize) -> Result<f64> {
    free_boson_integral_from(beta, s, dimension, 0.0)
}

/// As [`free_boson_integral`] with every momentum restricted to `[a, π]`.
pub fn free_boson_integral_from(beta: f64, s: f64, dimension: usize, a: f64) -> Result<f64> {
    check_positive(beta, s)?;
    check_dimension(dimension)?;
    if !(0.0..=PI).contains(&a) {
        return domain(format!("lower momentum must lie in [0, π], got {a}"));
    }
    let x = beta * s;
    Ok(match dimension {
        1 => log_integral(x, 0.0, a, PI)? / (PI * beta),
        _ => grid_integral(x, a)? / (PI * PI * beta),
    })
}

/// `−(1/πβ)∫₀^{π/(ℓ+1)} ln(1−e^{−βSε(p)})dp`.
pub fn missing_mode_term(l: usize, beta: f64, s: f64) -> Result<f64> {
    check_positive(beta, s)?;
    if l < 2 {
        return domain(format!("l must be at least 2, got {l}"));
    }
    Ok(-log_integral(beta * s, 0.0, 0.0, PI / (l + 1) as f64)? / (PI * beta))
}

/// `ln Tr_F e^{−βT} = −Σ_p ln(1 − e^{−βSε(p)})` over Dirichlet modes.
pub fn free_boson_log_partition(l: usize, dimension: usize, beta: f64, s: f64) -> Result<f64> {
    check_positive(beta, s)?;
    let m = dirichlet_modes(l, dimension)?;
    Ok(-m.energies.iter().map(|&e| ln_one_minus_exp_neg(beta * s * e)).sum::<f64>())
}

/// `Tr_F T e^{−βT} / Tr_F e^{−βT} = Σ_p Sε(p)/(e^{βSε(p)} − 1)`.
pub fn free_boson_mean_energy(l: usize, dimension: usize, beta: f64, s: f64) -> Result<f64> {
    check_positive(beta, s)?;
    let m = dirichlet_modes(l, dimension)?;
    Ok(m.energies.iter().map(|&e| s * e / (beta * s * e).exp_m1()).sum())
}

#[derive(Debug, Clone, Copy)]
pub struct WickOccupation {
    /// `⟨n_x⟩` in the free Dirichlet Gibbs state.
    pub value: f64,
    /// `(π²/12)(ℓ+1)/(βS)` in 1D, `(π/2)ln(1+2ℓ)/(βS)` in 2D.
    pub cap: f64,
}

/// `⟨n_x⟩ = Σ_p |φ_p(x)|²/(e^{βSε(p)} − 1)`, with 1-based coordinates `x`.
pub fn wick_occupation(l: usize, dimension: usize, beta: f64, s: f64, x: &[usize]) -> Result<WickOccupation> {
    check_positive(beta, s)?;
    let m = dirichlet_modes(l, dimension)?;
    if x.len() != dimension || x.iter().any(|&xi| xi == 0 || xi > l) {
        return domain(format!("site {x:?} outside [1, {l}]^{dimension}"));
    }
    let value = (0..m.modes.len())
        .map(|k| m.eigenfunction(k, x).powi(2) / (beta * s * m.energies[k]).exp_m1())
        .sum();
    let bs = beta * s;
    let cap = match dimension {
        1 => PI * PI / 12.0 * (l + 1) as f64 / bs,
        _ => PI / 2.0 * (1.0 + 2.0 * l as f64).ln() / bs,
    };
    Ok(WickOccupation { value, cap })
}

/// Lower bound on `Tr 𝒫e^{−βT}𝒫 / Tr e^{−βT}`; may be negative.
pub fn lemma_trace_ratio_bound(l: usize, dimension: usize, beta: f64, s: f64) -> f64 {
    let bs = beta * s;
    let lf = l as f64;
    match dimension {
        1 => 1.0 - (PI * PI / 12.0).powi(2) * lf * (lf + 1.0).powi(2) / (bs * bs),
        _ => 1.0 - (PI * lf * (1.0 + 2.0 * lf).ln() / (2.0 * bs)).powi(2),
    }
}

/// Additive entropy error, before the `Tr e^{−βT}/Tr 𝒫e^{−βT}𝒫` factor.
pub fn lemma_entropy_error(l: usize, dimension: usize, beta: f64, s: f64) -> f64 {
    let bs = beta * s;
    let lf = l as f64;
    match dimension {
        1 => {
            s * (PI * PI / 12.0).powi(2) * lf * (lf + 1.0).powi(3) / bs.powf(3.5)
                * (PI.sqrt() * zeta_3_2() / 8.0 + bs.sqrt() / lf)
        }
        _ => {
            let inner = PI / 2.0 * lf * (lf + 1.0) * (1.0 + 2.0 * lf).ln() / (bs * bs);
            0.5 * s * inner * inner * (PI.powi(3) / 48.0 + bs / (lf * lf))
        }
    }
}

/// `−ln(1+2Sℓ)/(βℓ) + ln(1 − e^{−2βS/ℓ²})/β`, a lower bound on `f_ℓ(β)`.
pub fn lemma53_bound(l: usize, beta: f64, s: f64) -> f64 {
    let lf = l as f64;
    -(1.0 + 2.0 * s * lf).ln() / (beta * lf) + ln_one_minus_exp_neg(2.0 * beta * s / (lf * lf)) / beta
}

/// Best lower bound on `f_ℓ(β)` from splitting `[1, ℓ]` into `k` near-equal
/// pieces and applying [`lemma53_bound`] to each.
pub fn lemma53_split_bound(l: usize, beta: f64, s: f64) -> f64 {
    let lf = l as f64;
    let mut best = f64::NEG_INFINITY;
    for k in 1..=l {
        let base = l / k;
        let rem = l % k;
        let mut v = (k - rem) as f64 * base as f64 * lemma53_bound(base, beta, s);
        if rem > 0 {
            v += rem as f64 * (base + 1) as f64 * lemma53_bound(base + 1, beta, s);
        }
        best = best.max(v / lf);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn three_mode_sum() {
        let r2 = 2f64.sqrt();
        let want = ((1.0 - (-(2.0 - r2)).exp()).ln() + (1.0 - (-2.0f64).exp()).ln() + (1.0 - (-(2.0 + r2)).exp()).ln()) / 3.0;
        let got = free_boson_sum(3, 1, 1.0, 1.0, 0.0, ModeFamily::Dirichlet).unwrap();
        assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        let diluted = free_boson_sum(3, 1, 1.0, 1.0, 0.5, ModeFamily::Dirichlet).unwrap();
        assert!(diluted < got);
        assert!(free_boson_sum(3, 1, 1.0, 1.0, 1.0, ModeFamily::Dirichlet).is_err());
        let cold = free_boson_sum(3, 1, 1e4, 1.0, 0.0, ModeFamily::Dirichlet).unwrap();
        assert!(cold <= 0.0 && cold > -1e-100);
    }

    #[test]
    fn integral_against_plain_quadrature() {
        // plain GK on a mild case where no substitution is needed
        let x = 2.0;
        let plain = integrate(|p| ln_one_minus_exp_neg(x * eps(p)), 0.0, PI, opts(1e-13)).unwrap().value;
        let ours = log_integral(x, 0.0, 0.0, PI).unwrap();
        assert_abs_diff_eq!(plain, ours, epsilon = 1e-9);
    }

    #[test]
    fn riemann_sandwich_at_fifty() {
        let (l, beta, s) = (50usize, 20.0, 0.5);
        let sum = free_boson_sum(l, 1, beta, s, 0.0, ModeFamily::Dirichlet).unwrap();
        let shifted = (1.0 + 1.0 / l as f64) * free_boson_integral_from(beta, s, 1, PI / (l + 1) as f64).unwrap();
        let full = free_boson_integral(beta, s, 1).unwrap();
        assert!(full <= sum && sum <= shifted, "{full} {sum} {shifted}");
    }

    #[test]
    fn missing_term_scaling() {
        let m = missing_mode_term(100, 200.0, 0.5).unwrap();
        assert!(m > 0.0);
        let display = (100f64 * 100.0 / 100.0).ln() / (200.0 * 100.0);
        assert!(m / display > 1.0 / 3.0 && m / display < 3.0, "{}", m / display);
        assert!(missing_mode_term(10_000, 200.0, 0.5).unwrap() < m);
    }

    #[test]
    fn wick_caps_and_symmetry() {
        for x in 1..=10 {
            let w = wick_occupation(10, 1, 40.0, 0.5, &[x]).unwrap();
            assert!(w.value <= w.cap);
            let mirror = wick_occupation(10, 1, 40.0, 0.5, &[11 - x]).unwrap();
            assert_abs_diff_eq!(w.value, mirror.value, epsilon = 1e-12);
        }
        for a in 1..=8 {
            for b in 1..=8 {
                let w = wick_occupation(8, 2, 100.0, 0.5, &[a, b]).unwrap();
                assert!(w.value <= w.cap);
            }
        }
        assert!(wick_occupation(8, 1, 1.0, 1.0, &[9]).is_err());
    }

    #[test]
    fn lemma_formula_values() {
        assert_abs_diff_eq!(lemma_trace_ratio_bound(2, 1, 100.0, 1.0), 1.0 - (PI * PI / 12.0).powi(2) * 18.0 / 1e4, epsilon = 1e-15);
        assert_abs_diff_eq!(lemma_trace_ratio_bound(2, 1, 100.0, 1.0), 0.998782, epsilon = 1e-6);
        assert_abs_diff_eq!(lemma_trace_ratio_bound(2, 2, 100.0, 1.0), 0.997443, epsilon = 1e-6);
        assert!((lemma_trace_ratio_bound(5, 1, 1e12, 1.0) - 1.0).abs() < 1e-20);
        let e = lemma_entropy_error(4, 1, 100.0, 0.5);
        let bs = 50f64;
        let direct = 0.5 * (PI * PI / 12.0).powi(2) * 4.0 * 125.0 / bs.powf(3.5) * (PI.sqrt() * 2.612375348685488 / 8.0 + bs.sqrt() / 4.0);
        assert_abs_diff_eq!(e, direct, epsilon = 1e-15);
        // explicit S at fixed βS and ℓ
        assert_abs_diff_eq!(lemma_entropy_error(4, 1, 50.0, 1.0), 2.0 * e, epsilon = 1e-15);
    }

    #[test]
    fn lemma53_split_not_worse() {
        for l in [2usize, 7, 40, 300] {
            assert!(lemma53_split_bound(l, 50.0, 0.5) >= lemma53_bound(l, 50.0, 0.5));
        }
    }

    #[test]
    fn closed_traces_match_modes() {
        let lz = free_boson_log_partition(3, 1, 2.0, 0.5).unwrap();
        let direct = -(2.0 * 3.0) * free_boson_sum(3, 1, 2.0, 0.5, 0.0, ModeFamily::Dirichlet).unwrap();
        assert_abs_diff_eq!(lz, direct, epsilon = 1e-13);
        assert!(free_boson_mean_energy(3, 1, 2.0, 0.5).unwrap() > 0.0);
    }
}
