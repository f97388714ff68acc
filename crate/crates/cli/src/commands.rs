use crate::config::RunConfig;
use crate::output::{Cell, Table};
use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use magnon_core::bound::{
    compute_budget, density_suite, verify_casimir_lower_bound, verify_halfspin_quadratic_form_equality,
    verify_laplacian_lower_bound, verify_low_energy_truncation, verify_php_leq_t, StateKind,
};
use magnon_core::hilbert::verify_su2_representation;
use magnon_core::magnon::{leading_term, lower_envelope, upper_envelope, E0Source, EnvelopeConfig};
use magnon_core::thermo::{
    check_localization_bound_cached, check_subadditivity_cached, dirichlet_spectrum, full_spectrum_with,
    SpectrumCache, SpectrumOptions, ThermoCurve, THERMO_CSV_HEADER,
};
use magnon_core::{Error, Execution, InequalityCertificate, SpinLattice, SpinMagnitude, Verdict};

fn spin(two_s: u32) -> Result<SpinMagnitude> {
    Ok(SpinMagnitude::new(two_s)?)
}

fn guidance(e: Error) -> anyhow::Error {
    match e {
        Error::Resource(_) => anyhow::Error::new(e)
            .context("system too large for exact diagonalization; lower --length/--extent or --two-s"),
        other => other.into(),
    }
}

pub fn free_energy(cfg: &RunConfig, exec: Execution) -> Result<Table> {
    let betas = cfg.betas_or(&crate::config::parse_beta_grid("logspace:0:1.5:7")?);
    let two_s = cfg.two_s.clone().unwrap_or_else(|| vec![1]);
    let mut header: Vec<&'static str> = THERMO_CSV_HEADER.to_vec();
    if cfg.ratio {
        header.push("scaled_f");
    }
    let mut table = Table::new("free-energy/1", &header);
    let lattices: Vec<SpinLattice> = match cfg.extent {
        Some(e) => vec![SpinLattice::grid(e, e)?],
        None => cfg.lengths.clone().unwrap_or_else(|| vec![8]).into_iter().map(SpinLattice::chain).collect::<Result<_, _>>()?,
    };
    for &t in &two_s {
        let sp = spin(t)?;
        for lattice in &lattices {
            let opts = SpectrumOptions { exec, ..Default::default() };
            let mut curves = vec![ThermoCurve::from_spectrum(&full_spectrum_with(lattice, sp, &opts).map_err(guidance)?, &betas)?];
            if lattice.dimension() == 1 {
                let d = dirichlet_spectrum(lattice.sites(), sp, exec).map_err(guidance)?;
                curves.push(ThermoCurve::from_spectrum(&d, &betas)?);
            }
            for c in curves {
                for (&b, &f) in c.betas.iter().zip(&c.values) {
                    let mut row: Vec<Cell> =
                        vec![b.into(), f.into(), c.variant.name().into(), c.size.clone().into(), t.into()];
                    if cfg.ratio {
                        let scale = match lattice.dimension() {
                            1 => b.powf(1.5) * sp.s().sqrt(),
                            _ => b * b * sp.s(),
                        };
                        row.push((f * scale).into());
                    }
                    table.push(row);
                }
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Su2,
    PhpLeqT,
    Casimir,
    Laplacian,
    Vnorm,
    Density,
    Truncation,
    Subadditivity,
    Localization,
}

fn retol(c: InequalityCertificate, tol: Option<f64>) -> InequalityCertificate {
    match tol {
        Some(t) => {
            let mut c = c;
            c.tolerance = t;
            c.verdict = if c.slack >= -t { Verdict::Pass } else { Verdict::Fail };
            c
        }
        None => c,
    }
}

/// Certificates for `check` over the configured grid, in a fixed order.
pub fn verify(cfg: &RunConfig, check: Check, exec: Execution) -> Result<Vec<InequalityCertificate>> {
    let quick = match cfg.grid.as_str() {
        "default" => false,
        "quick" => true,
        g => bail!("unknown grid {g:?}, expected default or quick"),
    };
    let pick_s = |default: &[u32]| cfg.two_s.clone().unwrap_or_else(|| default.to_vec());
    let pick_l = |default: Vec<usize>| cfg.lengths.clone().unwrap_or(default);
    let top = |hi: usize, lo: usize| if quick { lo } else { hi };
    let samples = if quick { 10 } else { 100 };
    let mut certs = Vec::new();
    match check {
        Check::Su2 => {
            for t in pick_s(&[1, 2, 3, 4, 5, 6]) {
                let sp = spin(t)?;
                certs.push(verify_su2_representation(sp, sp.local_dim())?);
            }
        }
        Check::PhpLeqT => {
            for t in pick_s(&[1, 2, 3]) {
                for l in pick_l((2..=top(5, 3)).collect()) {
                    for n in 0..=top(8, 4) {
                        certs.push(verify_php_leq_t(l, spin(t)?, n).map_err(guidance)?);
                    }
                }
            }
        }
        Check::Casimir => {
            for t in pick_s(&[1, 2]) {
                let hi = if t == 1 { top(10, 6) } else { top(6, 4) };
                for l in pick_l((2..=hi).collect()) {
                    let r = verify_casimir_lower_bound(l, spin(t)?).map_err(guidance)?;
                    certs.push(r.bound);
                    certs.push(r.chained);
                }
            }
        }
        Check::Laplacian => {
            for t in pick_s(&[1, 2]) {
                for l in pick_l((2..=top(6, 4)).collect()) {
                    for n in 0..=l {
                        certs.push(verify_laplacian_lower_bound(l, spin(t)?, n).map_err(guidance)?);
                        if t == 1 {
                            certs.push(verify_halfspin_quadratic_form_equality(l, n, samples, cfg.seed)?);
                        }
                    }
                }
            }
        }
        Check::Vnorm | Check::Density => {
            let beta = cfg.betas.as_ref().map_or(2.0, |b| b[0]);
            for t in pick_s(&[1, 2]) {
                for l in pick_l((4..=top(6, 4)).collect()) {
                    for n in [2, 3] {
                        let kinds = [StateKind::Haar, StateKind::Gibbs];
                        let s = density_suite(l, spin(t)?, n, &kinds, samples, beta, cfg.seed, exec).map_err(guidance)?;
                        if check == Check::Vnorm {
                            certs.extend([s.vnorm, s.contraction]);
                        } else {
                            certs.extend([s.off_diagonal, s.diagonal]);
                        }
                    }
                }
            }
        }
        Check::Truncation => {
            let betas = cfg.betas_or(&[1.0, 4.0, 8.0]);
            for t in pick_s(&[1, 2]) {
                for l in pick_l((3..=top(5, 4)).collect()) {
                    for &b in &betas {
                        let r = verify_low_energy_truncation(l, spin(t)?, b).map_err(guidance)?;
                        certs.extend([r.trace, r.sectors]);
                    }
                }
            }
        }
        Check::Subadditivity | Check::Localization => {
            let betas = cfg.betas_or(&[0.5, 1.0, 2.0, 4.0, 8.0]);
            let mut cache = SpectrumCache::new(exec);
            for t in pick_s(&[1, 2]) {
                let hi = match t {
                    1 => top(13, 9),
                    2 => top(8, 6),
                    _ => top(6, 4),
                };
                let lengths = pick_l((2..=hi).collect());
                let sp = spin(t)?;
                for &b in &betas {
                    if check == Check::Subadditivity {
                        certs.push(check_subadditivity_cached(&mut cache, &lengths, sp, b).map_err(guidance)?);
                        continue;
                    }
                    let big_max = lengths.iter().copied().max().unwrap_or(0);
                    for &l in lengths.iter().filter(|&&l| l >= 2) {
                        for big in (l + 2..=big_max).filter(|big| (big - 1) % (l + 1) == 0) {
                            let r = check_localization_bound_cached(&mut cache, big, l, sp, b).map_err(guidance)?;
                            certs.extend([r.bound, r.cross]);
                        }
                    }
                }
            }
        }
    }
    Ok(certs.into_iter().map(|c| retol(c, cfg.tol)).collect())
}

pub fn certificate_table(certs: &[InequalityCertificate]) -> Table {
    let mut t = Table::new("certificates/1", &["name", "params", "slack", "tolerance", "verdict", "seed"]);
    for c in certs {
        let verdict = if c.passed() { "pass" } else { "fail" };
        t.push(vec![
            c.name.clone().into(),
            serde_json::Value::Object(c.params.clone()).to_string().into(),
            c.slack.into(),
            c.tolerance.into(),
            verdict.into(),
            c.seed.map(|s| Cell::Text(s.to_string())).unwrap_or(Cell::Null),
        ]);
    }
    t
}

fn e0_source(cfg: &RunConfig, default: E0Source) -> Result<E0Source> {
    match cfg.e0_source.as_deref() {
        None => Ok(default),
        Some("exact-ED") => Ok(E0Source::ExactEd),
        Some("lemma-5.3") => Ok(E0Source::Lemma53),
        Some(o) => bail!("unknown e0-source {o:?}, expected exact-ED or lemma-5.3"),
    }
}

pub fn asymptotics(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.betas_or(&[1e4, 1e6, 1e8]);
    let t = cfg.two_s.as_ref().map_or(1, |v| v[0]);
    let s = spin(t)?.s();
    let dim = cfg.dimension;
    let env = EnvelopeConfig { c_upper: cfg.c_upper, c_lower: cfg.c_lower, e0_source: e0_source(cfg, E0Source::Lemma53)? };
    let mut table = Table::new(
        "asymptotics/1",
        &[
            "beta_s", "beta", "two_s", "dimension", "leading", "upper", "upper_ratio", "upper_ell", "upper_informative",
            "upper_rate", "lower", "lower_ratio", "lower_ell", "lower_informative",
        ],
    );
    let mut prev: Option<(f64, f64)> = None;
    for &bs in &grid {
        let beta = bs / s;
        let up = upper_envelope(beta, s, dim, &env)?;
        // local exponent of the relative upper error against βS
        let rate = match (prev, up.informative) {
            (Some((pb, pe)), true) if pb != bs => Some((up.relative_error / pe).ln() / (bs / pb).ln()),
            _ => None,
        };
        prev = up.informative.then_some((bs, up.relative_error));
        let mut row: Vec<Cell> = vec![
            bs.into(),
            beta.into(),
            t.into(),
            dim.into(),
            leading_term(beta, s, dim).into(),
            up.value.into(),
            up.ratio.into(),
            up.ell.into(),
            up.informative.into(),
            rate.into(),
        ];
        if dim == 1 {
            let lo = lower_envelope(beta, s, &env)?;
            row.extend([lo.value.into(), lo.ratio.into(), lo.ell.into(), lo.informative.into()]);
        } else {
            row.extend([Cell::Null, Cell::Null, Cell::Null, Cell::Null]);
        }
        table.push(row);
    }
    Ok(table)
}

pub fn budget(cfg: &RunConfig) -> Result<Table> {
    let source = e0_source(cfg, E0Source::ExactEd)?;
    let mut table = Table::new(
        "budget/1",
        &["l", "beta", "two_s", "e0_source", "e0", "n0", "delta", "ell0", "implied_c", "informative", "error"],
    );
    for t in cfg.two_s.clone().unwrap_or_else(|| vec![1]) {
        let sp = spin(t)?;
        for l in cfg.lengths.clone().unwrap_or_else(|| vec![4, 6]) {
            for &b in &cfg.betas_or(&[8.0, 32.0]) {
                let head: Vec<Cell> = vec![l.into(), b.into(), t.into(), source.name().into()];
                let row = match compute_budget(l, b, sp, source) {
                    Ok(r) => vec![
                        r.e0.into(),
                        r.n0.into(),
                        r.delta.into(),
                        r.ell0.into(),
                        r.implied_c.into(),
                        r.informative.into(),
                        Cell::Null,
                    ],
                    Err(e @ Error::Domain(_)) => {
                        let mut r = vec![Cell::Null; 6];
                        r.push(e.to_string().into());
                        r
                    }
                    Err(e) => return Err(guidance(e)).with_context(|| format!("budget at l={l}, beta={b}")),
                };
                table.push(head.into_iter().chain(row).collect());
            }
        }
    }
    Ok(table)
}
