//! Gibbs variational upper bound with the projected free-boson trial state
//! `Γ = 𝒫e^{−βT}𝒫 / Tr 𝒫e^{−βT}𝒫` on a Dirichlet chain.

use crate::certificate::InequalityCertificate;
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::hilbert::{assemble_dirichlet_heisenberg, assemble_free_boson_t, assemble_projector_p, enumerate_fock_sector, enumerate_sector_basis};
use crate::lattice::SpinLattice;
use crate::linalg::{sorted_eigenvalues, symmetric_eigen};
use crate::magnon::{
    dirichlet_modes, free_boson_log_partition, free_boson_mean_energy, lemma_entropy_error, lemma_trace_ratio_bound,
    ln_one_minus_exp_neg,
};
use crate::spin::SpinMagnitude;
use crate::thermo::dirichlet_free_energy;
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy)]
pub struct GibbsOptions {
    /// Highest magnon sector summed; `None` sums every sector where `𝒫` is nonzero.
    pub n_cap: Option<usize>,
    /// Largest uncapped sector dimension handled densely.
    pub max_sector_dim: usize,
    /// Allowed discarded fraction of `Tr 𝒫e^{−βT}𝒫`.
    pub tail_tol: f64,
    pub exec: Execution,
}

impl Default for GibbsOptions {
    fn default() -> Self {
        Self { n_cap: None, max_sector_dim: 8000, tail_tol: 1e-10, exec: Execution::default() }
    }
}

#[derive(Debug, Clone)]
pub struct GibbsReport {
    pub l: usize,
    pub spin: SpinMagnitude,
    pub beta: f64,
    pub n_cap: usize,
    /// `(1/ℓ)[Tr H^D Γ + β⁻¹ Tr Γ ln Γ]`.
    pub value: f64,
    pub energy: f64,
    pub entropy_term: f64,
    pub dirichlet: f64,
    /// `(1/βℓ)Σ_p ln(1 − e^{−βSε(p)})`.
    pub free_boson: f64,
    pub z_p: f64,
    pub z_t: f64,
    pub trace_ratio: f64,
    pub tail_bound: f64,
    /// `|Tr Γ − 1|` from the eigenvalues of the projected blocks.
    pub normalization_residual: f64,
    pub variational: InequalityCertificate,
    pub trace_ratio_bound: InequalityCertificate,
    pub energy_bound: InequalityCertificate,
    pub entropy_bound: InequalityCertificate,
    pub entropy_exact_bound: InequalityCertificate,
}

struct SectorSums {
    trace: f64,
    energy: f64,
    eig_trace: f64,
    t_p2: f64,
    eigs: Vec<f64>,
}

fn sector_sums(lattice: &SpinLattice, spin: SpinMagnitude, beta: f64, n: usize, max_dim: usize) -> Result<SectorSums> {
    let fock = enumerate_fock_sector(lattice, spin, n)?;
    if fock.dim() > max_dim {
        return Err(Error::Resource(format!("Fock sector n={n} has dimension {} above {max_dim}", fock.dim())));
    }
    let t = assemble_free_boson_t(&fock)?;
    let weights = assemble_projector_p(&fock, spin).weights;
    let eig = symmetric_eigen(t.to_dense());
    let phys = enumerate_sector_basis(lattice, spin, n)?;
    let rows: Vec<usize> = phys.states().map(|st| fock.index_of(st).expect("physical state in Fock sector")).collect();
    let d = fock.dim();
    // M = W U diag(e^{−βλ/2}) on the physical rows; A = M Mᵀ
    let half: Vec<f64> = eig.values.iter().map(|&l| (-0.5 * beta * l).exp()).collect();
    let m = DMatrix::from_fn(rows.len(), d, |i, k| weights[rows[i]] * eig.vectors[(rows[i], k)] * half[k]);
    let a = &m * m.transpose();
    let h = assemble_dirichlet_heisenberg(&phys)?;
    let energy: f64 = h.entries().iter().map(|&(r, c, v)| v * a[(c, r)]).sum();
    let trace = a.trace();
    // Tr T 𝒫² e^{−βT} = Σ_k λ_k e^{−βλ_k} Σ_x w_x² U_{xk}²
    let t_p2: f64 = (0..d)
        .map(|k| {
            let lw: f64 = (0..d).map(|x| (weights[x] * eig.vectors[(x, k)]).powi(2)).sum();
            eig.values[k] * (-beta * eig.values[k]).exp() * lw
        })
        .sum();
    let eigs = sorted_eigenvalues(a);
    Ok(SectorSums { trace, energy, eig_trace: eigs.iter().sum(), t_p2, eigs })
}

/// Chernoff bound `y^{−(n+1)} Π_p (1 − y e^{−βSε(p)})^{−1}` on `Σ_{m>n} Tr_m e^{−βT}`, minimized over `y`.
fn chernoff_tail(energies: &[f64], beta: f64, s: f64, n: usize) -> f64 {
    let qmax = energies.iter().map(|&e| (-beta * s * e).exp()).fold(0.0, f64::max);
    let ln_z = |y: f64| -> f64 { -energies.iter().map(|&e| (1.0 - y * (-beta * s * e).exp()).ln()).sum::<f64>() };
    let mut best = f64::INFINITY;
    let top = 1.0 / qmax;
    for k in 1..400 {
        let y = 1.0 + (top - 1.0) * (k as f64 / 400.0);
        best = best.min(ln_z(y) - (n + 1) as f64 * y.ln());
    }
    best.exp()
}

pub fn gibbs_variational_upper(l: usize, spin: SpinMagnitude, beta: f64, opts: &GibbsOptions) -> Result<GibbsReport> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    if !(2..=6).contains(&l) {
        return domain(format!("exact trial-state sums need 2 <= l <= 6, got {l}"));
    }
    let lattice = SpinLattice::chain(l)?;
    let s = spin.s();
    let full = spin.two_s() as usize * l;
    let n_cap = opts.n_cap.unwrap_or(full).min(full);
    let modes = dirichlet_modes(l, 1)?;

    let sums: Vec<Result<SectorSums>> = opts
        .exec
        .map_range(n_cap + 1, |n| sector_sums(&lattice, spin, beta, n, opts.max_sector_dim));
    let sums = match sums.into_iter().collect::<Result<Vec<_>>>() {
        Ok(v) => v,
        Err(Error::Resource(msg)) => {
            return Err(Error::Resource(format!("{msg}; the trial state needs sectors up to n_cap = {n_cap}")))
        }
        Err(e) => return Err(e),
    };
    let z_p: f64 = sums.iter().map(|x| x.trace).sum();
    // 𝒫 annihilates every sector above 2Sℓ
    let tail_bound = if n_cap >= full { 0.0 } else { chernoff_tail(&modes.energies, beta, s, n_cap) };
    if tail_bound > opts.tail_tol * z_p {
        let required = (n_cap..=full)
            .find(|&n| chernoff_tail(&modes.energies, beta, s, n) <= opts.tail_tol * z_p)
            .unwrap_or(full);
        return Err(Error::Resource(format!(
            "discarded tail {tail_bound:e} exceeds {:e} of the trace; required n_cap = {required}",
            opts.tail_tol
        )));
    }
    let energy: f64 = sums.iter().map(|x| x.energy).sum::<f64>() / z_p;
    let floor = 1e-30 * z_p;
    let a_ln_a: f64 = sums
        .iter()
        .flat_map(|x| x.eigs.iter())
        .filter(|&&a| a > floor)
        .map(|&a| a * a.ln())
        .sum();
    let tr_g_ln_g = a_ln_a / z_p - z_p.ln();
    let eig_trace: f64 = sums.iter().map(|x| x.eig_trace).sum();
    let t_p2: f64 = sums.iter().map(|x| x.t_p2).sum();

    let lf = l as f64;
    let value = (energy + tr_g_ln_g / beta) / lf;
    let dirichlet = dirichlet_free_energy(l, spin, beta)?;
    let free_boson = modes.energies.iter().map(|&e| ln_one_minus_exp_neg(beta * s * e)).sum::<f64>() / (beta * lf);
    let ln_zt = free_boson_log_partition(l, 1, beta, s)?;
    let z_t = ln_zt.exp();
    let trace_ratio = z_p / z_t;
    let mean_t = free_boson_mean_energy(l, 1, beta, s)?;
    let tr_t_e = mean_t * z_t;

    let scale = value.abs().max(dirichlet.abs()).max(1e-300);
    let tag = |c: InequalityCertificate| c.param("l", l).param("two_s", spin.two_s()).param("beta", beta);
    let variational = tag(InequalityCertificate::new("gibbs-variational", value - dirichlet, 1e-10 * scale));
    let r_lb = lemma_trace_ratio_bound(l, 1, beta, s);
    let trace_ratio_bound = tag(InequalityCertificate::new("trace-ratio", trace_ratio - r_lb, 1e-12));
    let e_scale = (tr_t_e / z_p).abs().max(1e-300);
    let energy_bound = tag(InequalityCertificate::new("energy-bound", tr_t_e / z_p - energy, 1e-10 * e_scale));
    let ent_lhs = tr_g_ln_g / beta;
    let ent_rhs = -z_p.ln() / beta - tr_t_e / z_p + lemma_entropy_error(l, 1, beta, s) / trace_ratio;
    let ent_exact = -z_p.ln() / beta - t_p2 / z_p;
    let ent_scale = ent_lhs.abs().max(1e-300);
    let entropy_bound = tag(InequalityCertificate::new("entropy-bound", ent_rhs - ent_lhs, 1e-10 * ent_scale));
    let entropy_exact_bound = tag(InequalityCertificate::new("entropy-monotone", ent_exact - ent_lhs, 1e-10 * ent_scale));

    Ok(GibbsReport {
        l,
        spin,
        beta,
        n_cap,
        value,
        energy,
        entropy_term: tr_g_ln_g / beta,
        dirichlet,
        free_boson,
        z_p,
        z_t,
        trace_ratio,
        tail_bound,
        normalization_residual: (eig_trace / z_p - 1.0).abs(),
        variational,
        trace_ratio_bound,
        energy_bound,
        entropy_bound,
        entropy_exact_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(two_s: u32) -> SpinMagnitude {
        SpinMagnitude::new(two_s).unwrap()
    }

    #[test]
    fn two_site_half_spin() {
        let r = gibbs_variational_upper(2, spin(1), 4.0, &GibbsOptions::default()).unwrap();
        assert!(r.variational.passed());
        assert!(r.variational.slack > 0.0);
        assert!(r.normalization_residual < 1e-12);
        assert!(r.energy_bound.passed() && r.entropy_exact_bound.passed());
        assert!(r.trace_ratio > 0.0 && r.trace_ratio <= 1.0);
    }

    #[test]
    fn three_site_spin_one() {
        let r = gibbs_variational_upper(3, spin(2), 6.0, &GibbsOptions::default()).unwrap();
        assert!(r.variational.passed(), "{:?}", r.variational);
        assert!(r.entropy_bound.passed(), "{:?}", r.entropy_bound);
        assert!(r.entropy_exact_bound.passed());
    }

    #[test]
    fn tail_and_budget_errors() {
        let tight = GibbsOptions { n_cap: Some(1), ..Default::default() };
        match gibbs_variational_upper(4, spin(2), 0.5, &tight) {
            Err(Error::Resource(msg)) => assert!(msg.contains("required n_cap"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let small = GibbsOptions { max_sector_dim: 10, ..Default::default() };
        assert!(matches!(gibbs_variational_upper(4, spin(2), 1.0, &small), Err(Error::Resource(_))));
        assert!(gibbs_variational_upper(7, spin(1), 1.0, &GibbsOptions::default()).is_err());
        // cold enough that a short cutoff is certified
        let ok = gibbs_variational_upper(3, spin(2), 40.0, &GibbsOptions { n_cap: Some(4), ..Default::default() }).unwrap();
        assert!(ok.tail_bound > 0.0 && ok.variational.passed());
    }
}
