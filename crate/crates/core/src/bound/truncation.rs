use crate::certificate::InequalityCertificate;
use crate::error::Result;
use crate::lattice::SpinLattice;
use crate::spin::SpinMagnitude;
use crate::thermo::{free_energy, full_spectrum, log_sum_exp};

#[derive(Debug, Clone)]
pub struct TruncationReport {
    /// `E₀ = −ℓ f_ℓ(β/2)` from the exact spectrum.
    pub e0: f64,
    /// `N₀ = E₀ℓ²/2S`.
    pub n0: f64,
    /// `1 + Σ_{E<E₀} e^{−βE} − Tr e^{−βH}`.
    pub trace: InequalityCertificate,
    /// `N₀ − max(Sℓ − t)` over multiplets with energy below `E₀`.
    pub sectors: InequalityCertificate,
    /// Largest `Sℓ − t` below `E₀`; `None` if no state lies below.
    pub max_deficit: Option<usize>,
}

/// `Tr e^{−βH} <= 1 + Tr e^{−βH} 1(H < E₀)` on the open chain, plus the restriction of the
/// low-energy states to `Sℓ − t < N₀`.
pub fn verify_low_energy_truncation(l: usize, spin: SpinMagnitude, beta: f64) -> Result<TruncationReport> {
    let spec = full_spectrum(&SpinLattice::chain(l)?, spin)?;
    let e0 = -(l as f64) * free_energy(&spec, 0.5 * beta)?;
    let n0 = e0 * (l * l) as f64 / (2.0 * spin.s());
    let all: Vec<f64> = spec.all_values().collect();
    let low: Vec<f64> = all.iter().copied().filter(|&e| e < e0).map(|e| -beta * e).collect();
    let lhs = log_sum_exp(&all.iter().map(|&e| -beta * e).collect::<Vec<_>>()).exp();
    let rhs = 1.0 + if low.is_empty() { 0.0 } else { log_sum_exp(&low).exp() };
    let tol = 1e-12 * rhs.max(1.0);
    // for n <= Sℓ the multiplets new to sector n are those with Sℓ − t = n
    let below: Vec<usize> = spec.sectors.iter().map(|sec| sec.iter().filter(|&&e| e < e0).count()).collect();
    let half = spin.two_s() as usize * l / 2;
    let max_deficit = (0..=half).rev().find(|&n| below[n] > if n == 0 { 0 } else { below[n - 1] });
    let sector_slack = match max_deficit {
        Some(m) => n0 - m as f64,
        None => n0,
    };
    let tag = |c: InequalityCertificate| c.param("l", l).param("two_s", spin.two_s()).param("beta", beta);
    Ok(TruncationReport {
        e0,
        n0,
        trace: tag(InequalityCertificate::new("truncation", rhs - lhs, tol)),
        // strict inequality n < N₀
        sectors: tag(InequalityCertificate::new("truncation-sectors", sector_slack, 0.0)),
        max_deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(two_s: u32) -> SpinMagnitude {
        SpinMagnitude::new(two_s).unwrap()
    }

    #[test]
    fn examples() {
        for (l, two_s, beta) in [(4, 1, 8.0), (3, 2, 4.0), (5, 1, 2.0)] {
            let r = verify_low_energy_truncation(l, spin(two_s), beta).unwrap();
            assert!(r.e0 >= 0.0);
            assert!(r.trace.passed(), "{:?}", r.trace);
            assert!(r.sectors.passed() && r.sectors.slack > 0.0, "{:?}", r);
        }
    }

    #[test]
    fn cold_limit() {
        // the ground multiplet has 2Sℓ+1 states at E = 0 < E₀
        let r = verify_low_energy_truncation(3, spin(1), 200.0).unwrap();
        assert_eq!(r.max_deficit, Some(0));
        assert!(r.trace.slack > 1.0 - 1e-9);
    }
}
