use super::modes::ln_one_minus_exp_neg;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use std::f64::consts::PI;

/// `−ζ(3/2)/(2√π)`.
pub const C1: f64 = -0.736_937_480_022_645_1;
/// `−π/24`.
pub const C2: f64 = -PI / 24.0;

/// `ζ(3/2)` by Euler–Maclaurin summation.
pub fn zeta_3_2() -> f64 {
    let s = 1.5f64;
    let n = 16usize;
    let nf = n as f64;
    let mut sum: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // B_{2j}/(2j)!
    let b = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1_209_600.0, 1.0 / 47_900_160.0];
    let mut rising = s;
    for (j, bj) in b.iter().enumerate() {
        let k = 2 * j + 1;
        sum += bj * rising * nf.powf(-s - k as f64);
        rising *= (s + k as f64) * (s + k as f64 + 1.0);
    }
    sum
}

#[derive(Debug, Clone, Copy)]
pub struct AsymptoticConstants {
    pub c1: f64,
    pub c2: f64,
    /// `(1/2π)∫_ℝ ln(1 − e^{−p²})dp`.
    pub c1_quadrature: f64,
    /// `(1/4π)∫₀^∞ ln(1 − e^{−u})du`.
    pub c2_quadrature: f64,
    pub zeta_3_2: f64,
}

fn half_line(g: impl Fn(f64) -> f64) -> Result<f64> {
    let o = QuadOptions { rel_tol: 1e-13, ..QuadOptions::default() };
    let near = integrate(|t: f64| 2.0 * t * g(t * t), 0.0, 1.0, o)?.value;
    let mid = integrate(&g, 1.0, 8.0, o)?.value;
    let far = integrate(&g, 8.0, 40.0, o)?.value;
    Ok(near + mid + far)
}

pub fn continuum_constants() -> Result<AsymptoticConstants> {
    let zeta = zeta_3_2();
    let c1 = -zeta / (2.0 * PI.sqrt());
    let c1_quadrature = half_line(|p| ln_one_minus_exp_neg(p * p))? / PI;
    let c2_quadrature = half_line(ln_one_minus_exp_neg)? / (4.0 * PI);
    if (c1 - c1_quadrature).abs() > 1e-10 || (c1 - C1).abs() > 1e-14 {
        return Err(Error::Consistency(format!("C1 closed form {c1} vs quadrature {c1_quadrature}")));
    }
    if (C2 - c2_quadrature).abs() > 1e-10 {
        return Err(Error::Consistency(format!("C2 = {C2} vs quadrature {c2_quadrature}")));
    }
    Ok(AsymptoticConstants { c1, c2: C2, c1_quadrature, c2_quadrature, zeta_3_2: zeta })
}
