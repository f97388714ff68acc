//! Acceptance criteria, one line each. Exits nonzero if a criterion fails
//! that is not listed in `KNOWN_UNATTAINABLE`.

use magnon_core::bound::{
    density_suite, verify_casimir_lower_bound, verify_halfspin_quadratic_form_equality, verify_laplacian_lower_bound,
    verify_low_energy_truncation, verify_php_leq_t, StateKind,
};
use magnon_core::magnon::{
    continuum_constants, free_boson_integral, leading_term, lower_envelope, upper_envelope, EnvelopeConfig, C1, C2,
};
use magnon_core::pauli::tensor_spectrum;
use magnon_core::thermo::{
    check_localization_bound_cached, check_subadditivity_cached, free_energy, full_spectrum,
    spectral_gap_sector_restricted, SpectrumCache,
};
use magnon_core::{Execution, InequalityCertificate, SpinLattice, SpinMagnitude};
use std::time::Instant;

/// Criteria that fail at desk scale; see the README.
const KNOWN_UNATTAINABLE: &[u32] = &[9];

/// Box-size prefactors for the envelope sandwich. With 1 both envelopes are
/// trivial on the whole grid; these make the upper one informative from
/// βS = 10⁶ and the lower one (δ < 1) everywhere.
const SANDWICH: EnvelopeConfig =
    EnvelopeConfig { c_upper: 0.5, c_lower: 0.3, e0_source: magnon_core::magnon::E0Source::Lemma53 };

type Outcome = Result<(bool, String), String>;

fn spin(two_s: u32) -> SpinMagnitude {
    SpinMagnitude::new(two_s).expect("valid spin")
}

fn worst(certs: &[InequalityCertificate]) -> (bool, String) {
    let ok = certs.iter().all(|c| c.passed());
    let w = InequalityCertificate::worst("all", certs);
    (ok, format!("{} certificates, worst slack {:.3e} at {}", certs.len(), w.slack, serde_json::Value::Object(w.params)))
}

fn c1_oracle() -> Outcome {
    let mut dev = 0.0f64;
    for l in 2..=6 {
        let spec = full_spectrum(&SpinLattice::chain(l).map_err(|e| e.to_string())?, spin(1)).map_err(|e| e.to_string())?;
        let mut a: Vec<f64> = spec.all_values().collect();
        a.sort_by(f64::total_cmp);
        let b = tensor_spectrum(l).map_err(|e| e.to_string())?;
        if a.len() != b.len() {
            return Ok((false, format!("l={l}: {} vs {} eigenvalues", a.len(), b.len())));
        }
        dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(dev, f64::max);
    }
    Ok((dev <= 1e-10, format!("max |boson − pauli| = {dev:.2e} (tol 1e-10)")))
}

fn c2_closed_form() -> Outcome {
    let spec = full_spectrum(&SpinLattice::chain(2).map_err(|e| e.to_string())?, spin(1)).map_err(|e| e.to_string())?;
    let f = free_energy(&spec, 1.0).map_err(|e| e.to_string())?;
    let want = -0.5 * (3.0 + (-1f64).exp()).ln();
    let d = (f - want).abs();
    Ok((d <= 1e-12, format!("f_2(1) = {f:.15}, closed form {want:.15}, |diff| = {d:.1e} (tol 1e-12)")))
}

fn c3_gap() -> Outcome {
    let mut dev = 0.0f64;
    for two_s in [1, 2] {
        for l in 2..=12 {
            let r = spectral_gap_sector_restricted(l, spin(two_s), Execution::Parallel).map_err(|e| e.to_string())?;
            dev = dev.max(r.deviation);
        }
    }
    Ok((dev <= 1e-9, format!("max |gap − 2S(1−cos(π/l))| = {dev:.2e} (tol 1e-9)")))
}

fn c4_php() -> Outcome {
    let mut certs = Vec::new();
    for l in 2..=5 {
        for two_s in 1..=3 {
            for n in 0..=8 {
                certs.push(verify_php_leq_t(l, spin(two_s), n).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(worst(&certs))
}

fn c5_casimir() -> Outcome {
    let mut certs = Vec::new();
    for (two_s, top) in [(1, 10), (2, 6)] {
        for l in 2..=top {
            let r = verify_casimir_lower_bound(l, spin(two_s)).map_err(|e| e.to_string())?;
            certs.push(r.bound);
        }
    }
    Ok(worst(&certs))
}

fn c6_laplacian() -> Outcome {
    let mut certs = Vec::new();
    for two_s in [1, 2] {
        for l in 2..=6 {
            for n in 0..=l {
                certs.push(verify_laplacian_lower_bound(l, spin(two_s), n).map_err(|e| e.to_string())?);
            }
        }
    }
    let (ok_a, a) = worst(&certs);
    let mut eq = Vec::new();
    for l in 2..=6 {
        for n in 0..=l {
            eq.push(verify_halfspin_quadratic_form_equality(l, n, 100, 2024).map_err(|e| e.to_string())?);
        }
    }
    let (ok_b, b) = worst(&eq);
    Ok((ok_a && ok_b, format!("laplacian: {a}; S=1/2 equality: {b}")))
}

fn c7_density() -> Outcome {
    let mut certs = Vec::new();
    let mut violations = 0;
    let mut states = 0;
    for two_s in [1, 2] {
        for l in 4..=6 {
            for n in [2, 3] {
                let s = density_suite(
                    l,
                    spin(two_s),
                    n,
                    &[StateKind::Haar, StateKind::Gibbs],
                    100,
                    2.0,
                    2024,
                    Execution::Parallel,
                )
                .map_err(|e| e.to_string())?;
                violations += s.violations;
                states += s.states;
                certs.extend(s.certificates().into_iter().cloned());
            }
        }
    }
    let (ok, d) = worst(&certs);
    Ok((ok && violations == 0, format!("{states} states, {violations} violations; {d}")))
}

fn c8_constants() -> Outcome {
    let k = continuum_constants().map_err(|e| e.to_string())?;
    let d1 = (k.c1_quadrature - k.c1).abs();
    let exact_c2 = C2 == -std::f64::consts::PI / 24.0;
    let mut ok = d1 <= 1e-10 && exact_c2 && (C1 - k.c1).abs() <= 1e-14;
    let mut parts = vec![format!("|C1 quad − closed| = {d1:.1e}"), format!("C2 = −π/24: {exact_c2}")];
    let s = 1.0;
    for (dim, c, scale) in [(1, C1, 1.5), (2, C2, 2.0)] {
        for (bs, tol) in [(1e4, 0.02), (1e6, 0.002)] {
            let beta = bs / s;
            let v = free_boson_integral(beta, s, dim).map_err(|e| e.to_string())?;
            let scaled = v * beta.powf(scale) * if dim == 1 { s.sqrt() } else { s };
            let rel = (scaled / c - 1.0).abs();
            ok &= rel <= tol;
            parts.push(format!("{dim}D βS={bs:.0e}: rel {rel:.2e} (tol {tol})"));
        }
    }
    Ok((ok, parts.join("; ")))
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

fn c9_sandwich() -> Outcome {
    let s = 1.0;
    let grid = [1e4, 1e6, 1e8];
    let mut ok = true;
    let mut widths = Vec::new();
    let mut gaps = Vec::new();
    let mut parts = Vec::new();
    for bs in grid {
        let beta = bs / s;
        let up = upper_envelope(beta, s, 1, &SANDWICH).map_err(|e| e.to_string())?;
        let lo = lower_envelope(beta, s, &SANDWICH).map_err(|e| e.to_string())?;
        let lead = leading_term(beta, s, 1);
        ok &= lo.value <= up.value && lo.value <= lead && lead <= up.value;
        widths.push((up.value - lo.value) / lead.abs());
        gaps.push(if up.informative { (up.value - lead) / lead.abs() } else { f64::NAN });
        parts.push(format!(
            "βS={bs:.0e}: upper ratio {:.4} (l={}, {}), lower ratio {:.4} (l={}, {})",
            up.ratio,
            up.ell,
            if up.informative { "informative" } else { "trivial" },
            lo.ratio,
            lo.ell,
            if lo.informative { "informative" } else { "trivial" },
        ));
    }
    let shrinking = widths.windows(2).all(|w| w[1] < w[0]);
    ok &= shrinking;
    let positive: Vec<usize> = (0..grid.len()).filter(|&i| gaps[i] > 0.0).collect();
    // the exponent is fitted on informative upper rows only
    let slope = if positive.len() >= 2 {
        let x: Vec<f64> = positive.iter().map(|&i| grid[i]).collect();
        let y: Vec<f64> = positive.iter().map(|&i| gaps[i]).collect();
        log_slope(&x, &y)
    } else {
        f64::NAN
    };
    ok &= (slope + 0.125).abs() <= 0.05;
    parts.push(format!("widths shrinking: {shrinking}; upper-gap exponent {slope:.3} (target −0.125 ± 0.05)"));
    Ok((ok, parts.join("; ")))
}

fn c10_trend() -> Outcome {
    let l = 14;
    let sp = spin(1);
    let spec = full_spectrum(&SpinLattice::chain(l).map_err(|e| e.to_string())?, sp).map_err(|e| e.to_string())?;
    let betas = [4.0, 6.0, 8.0, 11.0, 16.0];
    let mut ratios = Vec::new();
    for &b in &betas {
        let f = free_energy(&spec, b).map_err(|e| e.to_string())?;
        ratios.push(f * b.powf(1.5) * sp.s().sqrt() / C1);
    }
    let inside = ratios.iter().all(|r| *r > 0.5 && *r < 1.5);
    let toward = ratios.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs());
    let shown: Vec<String> = betas.iter().zip(&ratios).map(|(b, r)| format!("β={b}: {r:.4}")).collect();
    Ok((inside && toward, format!("{}; in (0.5,1.5): {inside}; toward 1: {toward}", shown.join(", "))))
}

fn c11_consistency() -> Outcome {
    let betas = [0.5, 1.0, 2.0, 4.0, 8.0];
    let mut cache = SpectrumCache::new(Execution::Parallel);
    let mut certs = Vec::new();
    for (two_s, top) in [(1u32, 13usize), (2, 8), (3, 6)] {
        let sp = spin(two_s);
        let lengths: Vec<usize> = (2..=top).collect();
        for &b in &betas {
            certs.push(check_subadditivity_cached(&mut cache, &lengths, sp, b).map_err(|e| e.to_string())?);
            for l in 2..top {
                let mut big = l + 2;
                while big <= top {
                    if (big - 1) % (l + 1) == 0 {
                        let r = check_localization_bound_cached(&mut cache, big, l, sp, b).map_err(|e| e.to_string())?;
                        certs.push(r.bound);
                        certs.push(r.cross);
                    }
                    big += 1;
                }
            }
        }
    }
    for two_s in [1, 2] {
        for l in 3..=5 {
            for b in [1.0, 4.0, 8.0] {
                let r = verify_low_energy_truncation(l, spin(two_s), b).map_err(|e| e.to_string())?;
                certs.push(r.trace);
                certs.push(r.sectors);
            }
        }
    }
    Ok(worst(&certs))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "boson vs Pauli spectra", c1_oracle),
        (2, "closed-form two-site free energy", c2_closed_form),
        (3, "free-chain spectral gap", c3_gap),
        (4, "PHP <= T certificates", c4_php),
        (5, "Casimir lower bound", c5_casimir),
        (6, "coordinate-map Laplacian bound", c6_laplacian),
        (7, "two-particle density suite", c7_density),
        (8, "asymptotic constants", c8_constants),
        (9, "envelope sandwich", c9_sandwich),
        (10, "ED trend at L=14", c10_trend),
        (11, "subadditivity, localization, truncation", c11_consistency),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_UNATTAINABLE.contains(&id);
        if !ok && !known {
            unexpected += 1;
        }
        let tag = match (ok, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {tag}: {name} [{:.1}s] {detail}", t.elapsed().as_secs_f64());
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
