use crate::certificate::InequalityCertificate;
use crate::error::Result;
use crate::exec::Execution;
use crate::hilbert::{assemble_heisenberg, enumerate_sector_basis};
use crate::lattice::SpinLattice;
use crate::linalg::{column, symmetric_eigen};
use crate::rng::{gibbs_index, job_rng};
use crate::spin::SpinMagnitude;

use super::coordinate::{verify_density_bounds, verify_vnorm_lower_bound, CoordinateState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Haar,
    /// Eigenstate drawn with probability `∝ e^{−βE}`.
    Gibbs,
}

impl StateKind {
    fn tag(self) -> u64 {
        match self {
            StateKind::Haar => 1,
            StateKind::Gibbs => 2,
        }
    }
}

/// Worst certificates over the sampled states of one `(ℓ, n, S)` cell.
#[derive(Debug, Clone)]
pub struct DensitySuite {
    pub vnorm: InequalityCertificate,
    /// `1 − ‖𝕍Ψ‖²`.
    pub contraction: InequalityCertificate,
    pub off_diagonal: InequalityCertificate,
    pub diagonal: InequalityCertificate,
    pub violations: usize,
    pub states: usize,
}

impl DensitySuite {
    pub fn certificates(&self) -> [&InequalityCertificate; 4] {
        [&self.vnorm, &self.contraction, &self.off_diagonal, &self.diagonal]
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Runs the `𝕍`-norm and density inequalities on `samples` states of each kind.
/// Each state has its own stream from `(root, kind, ℓ, two_s, n, k)`.
pub fn density_suite(
    l: usize,
    spin: SpinMagnitude,
    n: usize,
    kinds: &[StateKind],
    samples: usize,
    beta: f64,
    root: u64,
    exec: Execution,
) -> Result<DensitySuite> {
    let basis = enumerate_sector_basis(&SpinLattice::chain(l)?, spin, n)?;
    let eig = if kinds.contains(&StateKind::Gibbs) {
        Some(symmetric_eigen(assemble_heisenberg(&basis)?.to_dense()))
    } else {
        None
    };
    let jobs: Vec<(StateKind, usize)> =
        kinds.iter().flat_map(|&k| (0..samples).map(move |i| (k, i))).collect();
    let results = exec.map(&jobs, |&(kind, k)| -> Result<[InequalityCertificate; 4]> {
        let params = [kind.tag(), l as u64, spin.two_s() as u64, n as u64, k as u64];
        let (state, seed) = match kind {
            StateKind::Haar => CoordinateState::haar(basis.clone(), root, &params),
            StateKind::Gibbs => {
                let eig = eig.as_ref().expect("spectrum");
                let (mut rng, seed) = job_rng(root, &params);
                let i = gibbs_index(&eig.values, beta, &mut rng);
                (CoordinateState::new(basis.clone(), column(&eig.vectors, i))?, seed)
            }
        };
        let density = verify_density_bounds(&state)?;
        let contraction = InequalityCertificate::new("vnorm-contraction", 1.0 - state.v_norm_squared(), 1e-12);
        Ok([
            verify_vnorm_lower_bound(&state)?.with_seed(seed),
            contraction.with_seed(seed),
            density.off_diagonal.with_seed(seed),
            density.diagonal.with_seed(seed),
        ])
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = results.iter().filter(|r| r.iter().any(|c| !c.passed())).count();
    let pick = |i: usize, name: &str| {
        let certs: Vec<InequalityCertificate> = results.iter().map(|r| r[i].clone()).collect();
        InequalityCertificate::worst(name, &certs)
            .param("l", l)
            .param("two_s", spin.two_s())
            .param("n", n)
    };
    Ok(DensitySuite {
        vnorm: pick(0, "vnorm"),
        contraction: pick(1, "vnorm-contraction"),
        off_diagonal: pick(2, "density-offdiagonal"),
        diagonal: pick(3, "density-diagonal"),
        violations,
        states: results.len(),
    })
}
