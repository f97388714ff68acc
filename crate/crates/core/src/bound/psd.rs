use crate::certificate::InequalityCertificate;
use crate::error::{Error, Result};
use crate::hilbert::{
    assemble_dirichlet_heisenberg, assemble_free_boson_t, assemble_heisenberg, assemble_projector_p,
    assemble_total_spin_squared, enumerate_fock_sector, enumerate_sector_basis,
};
use crate::lattice::SpinLattice;
use crate::linalg::{min_eigenvalue, spectral_norm, symmetric_eigen};
use crate::spin::SpinMagnitude;
use nalgebra::DMatrix;

/// Largest sector dimension handed to a dense PSD check.
pub const PSD_DIM_CAP: usize = 6000;

/// Slack is the smallest eigenvalue of `diff`; tolerance `1e-10 · norm`.
pub fn psd_certificate(name: &str, diff: DMatrix<f64>, norm: f64) -> InequalityCertificate {
    let slack = min_eigenvalue(diff);
    InequalityCertificate::new(name, slack, 1e-10 * norm.max(1.0))
}

fn dim_guard(dim: usize, what: &str) -> Result<()> {
    if dim > PSD_DIM_CAP {
        return Err(Error::Resource(format!("{what} has dimension {dim} above {PSD_DIM_CAP}")));
    }
    Ok(())
}

/// `T − 𝒫H^D𝒫 ⪰ 0` on the uncapped `n`-boson sector of a chain.
pub fn verify_php_leq_t(l: usize, spin: SpinMagnitude, n: usize) -> Result<InequalityCertificate> {
    let lattice = SpinLattice::chain(l)?;
    let fock = enumerate_fock_sector(&lattice, spin, n)?;
    dim_guard(fock.dim(), "Fock sector")?;
    let t = assemble_free_boson_t(&fock)?.to_dense();
    let w = assemble_projector_p(&fock, spin).weights;
    let mut diff = t.clone();
    if n <= spin.two_s() as usize * l {
        // 𝒫 vanishes off the physical states, so 𝒫H^D𝒫 is H^D embedded with weights
        let phys = enumerate_sector_basis(&lattice, spin, n)?;
        let idx: Vec<usize> = phys.states().map(|st| fock.index_of(st).expect("physical state")).collect();
        let hd = assemble_dirichlet_heisenberg(&phys)?;
        for &(r, c, v) in hd.entries() {
            let (i, j) = (idx[r], idx[c]);
            diff[(i, j)] -= w[i] * v * w[j];
        }
    }
    let norm = spectral_norm(&t);
    Ok(psd_certificate("php-leq-t", diff, norm)
        .param("l", l)
        .param("two_s", spin.two_s())
        .param("n", n))
}

#[derive(Debug, Clone)]
pub struct CasimirReport {
    /// `H − (2/ℓ³)(Sℓ(Sℓ+1) − S_tot²) ⪰ 0`.
    pub bound: InequalityCertificate,
    /// `H − (2S/ℓ²)(Sℓ − t) ⪰ 0` with `S_tot² = t(t+1)`.
    pub chained: InequalityCertificate,
}

pub fn verify_casimir_lower_bound(l: usize, spin: SpinMagnitude) -> Result<CasimirReport> {
    let lattice = SpinLattice::chain(l)?;
    let total = (spin.local_dim() as f64).powi(l as i32);
    if total > (1u64 << 20) as f64 {
        return Err(Error::Resource(format!("Hilbert dimension {total:e} above 2^20")));
    }
    let s = spin.s();
    let lf = l as f64;
    let top = s * lf;
    let mut bounds = Vec::new();
    let mut chained = Vec::new();
    for n in 0..=spin.two_s() as usize * l {
        let basis = enumerate_sector_basis(&lattice, spin, n)?;
        dim_guard(basis.dim(), "spin sector")?;
        let h = assemble_heisenberg(&basis)?.to_dense();
        let s2 = assemble_total_spin_squared(&basis)?.to_dense();
        let norm = spectral_norm(&h);
        let id = DMatrix::<f64>::identity(basis.dim(), basis.dim());
        let diff = &h - (&id * (top * (top + 1.0)) - &s2) * (2.0 / lf.powi(3));
        bounds.push(psd_certificate("casimir", diff, norm).param("n", n));
        // t as a function of S_tot² through its eigendecomposition
        let eig = symmetric_eigen(s2);
        let t_vals: Vec<f64> = eig.values.iter().map(|&c| 0.5 * ((1.0 + 4.0 * c.max(0.0)).sqrt() - 1.0)).collect();
        let u = &eig.vectors;
        let t_op = u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(t_vals)) * u.transpose();
        let diff2 = &h - (&id * top - t_op) * (2.0 * s / (lf * lf));
        chained.push(psd_certificate("casimir-chained", diff2, norm).param("n", n));
    }
    let tag = |c: InequalityCertificate| c.param("l", l).param("two_s", spin.two_s());
    Ok(CasimirReport {
        bound: tag(InequalityCertificate::worst("casimir", &bounds)),
        chained: tag(InequalityCertificate::worst("casimir-chained", &chained)),
    })
}
