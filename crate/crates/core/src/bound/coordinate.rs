use crate::basis::MagnonSectorBasis;
use crate::certificate::InequalityCertificate;
use crate::error::{domain, Error, Result};
use crate::hilbert::{assemble_heisenberg, enumerate_fock_sector, enumerate_sector_basis, second_quantized_one_body};
use crate::lattice::SpinLattice;
use crate::linalg::spectral_norm;
use crate::rng::{haar_vector, job_rng};
use crate::spin::SpinMagnitude;
use nalgebra::DMatrix;
use std::collections::BTreeSet;

use super::psd::{psd_certificate, PSD_DIM_CAP};

/// `V(X)_i = x_i − #{j : x_j < x_i}` for distinct 1-based coordinates.
pub fn apply_v(x: &[usize]) -> Vec<usize> {
    x.iter().map(|&xi| xi - x.iter().filter(|&&xj| xj < xi).count()).collect()
}

/// `V` on the sorted representatives of `𝒳_{ℓ,n}`, with its image in `[1, ℓ−n+1]^n`.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    pub l: usize,
    pub n: usize,
    /// `(x₁ < … < xₙ, V(x))`.
    pub table: Vec<(Vec<usize>, Vec<usize>)>,
    /// Distinct ordered image points reached from all of `𝒳_{ℓ,n}`.
    pub image_size: usize,
    pub surjective: bool,
}

fn increasing_tuples(l: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, l: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..=l + 1 - left {
            cur.push(x);
            rec(x + 1, l, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, l, n, &mut Vec::new(), &mut out);
    out
}

/// Every ordered tuple of distinct coordinates in `[1, ℓ]^n`.
fn distinct_tuples(l: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=l).filter(|x| !t.contains(x)).map(|x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                }).collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

pub fn build_coordinate_map_v(l: usize, n: usize) -> Result<CoordinateMap> {
    if n > l {
        return domain(format!("the map needs n <= l, got n = {n}, l = {l}"));
    }
    let table = increasing_tuples(l, n).into_iter().map(|x| {
        let v = apply_v(&x);
        (x, v)
    }).collect();
    let image: BTreeSet<Vec<usize>> = distinct_tuples(l, n).iter().map(|x| apply_v(x)).collect();
    let m = l - n + 1;
    let full = m.pow(n as u32);
    let inside = image.iter().all(|a| a.iter().all(|&ai| (1..=m).contains(&ai)));
    Ok(CoordinateMap { l, n, table, image_size: image.len(), surjective: inside && image.len() == full })
}

fn occupation_to_positions(st: &[u8]) -> Vec<usize> {
    st.iter().enumerate().flat_map(|(x, &k)| std::iter::repeat(x + 1).take(k as usize)).collect()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Matrix of `𝕍` from the capped `n`-magnon sector on `ℓ` sites to the symmetric
/// `n`-boson space on `ℓ−n+1` sites, both in normalized occupation bases.
/// Hard-core sources map with weight `1/√(Π_a n'_a!)`; multiply occupied sources map to zero.
pub fn v_matrix(source: &MagnonSectorBasis, target: Option<&MagnonSectorBasis>) -> Result<DMatrix<f64>> {
    let n = source.n();
    let l = source.sites();
    if n > l {
        return domain(format!("the map needs n <= l, got n = {n}, l = {l}"));
    }
    let m = l - n + 1;
    let tdim = target.map_or(1, |t| t.dim());
    let mut out = DMatrix::zeros(tdim, source.dim());
    let mut occ = vec![0u8; m];
    for (i, st) in source.states().enumerate() {
        if st.iter().any(|&k| k > 1) {
            continue;
        }
        let img = apply_v(&occupation_to_positions(st));
        occ.iter_mut().for_each(|o| *o = 0);
        for a in img {
            occ[a - 1] += 1;
        }
        let row = match target {
            Some(t) => t
                .index_of(&occ)
                .ok_or_else(|| Error::Consistency(format!("image {occ:?} outside the target sector")))?,
            None => 0,
        };
        let w: f64 = occ.iter().map(|&k| factorial(k as usize)).product();
        out[(row, i)] = 1.0 / w.sqrt();
    }
    Ok(out)
}

/// Free (Neumann) graph Laplacian `−Δ` second quantized on `n` bosons over `m` sites.
pub fn neumann_laplacian(target: &MagnonSectorBasis) -> Result<DMatrix<f64>> {
    let degree: Vec<f64> = (0..target.sites())
        .map(|x| if x == 0 || x + 1 == target.sites() { 1.0 } else { 2.0 })
        .collect();
    Ok(second_quantized_one_body(target, &degree, 1.0)?.to_dense())
}

/// `H_ℓ|_n − S𝕍†(−Δ)𝕍 ⪰ 0` on the capped sector.
pub fn verify_laplacian_lower_bound(l: usize, spin: SpinMagnitude, n: usize) -> Result<InequalityCertificate> {
    if n > l {
        return domain(format!("the map needs n <= l, got n = {n}, l = {l}"));
    }
    let lattice = SpinLattice::chain(l)?;
    let source = enumerate_sector_basis(&lattice, spin, n)?;
    if source.dim() > PSD_DIM_CAP {
        return Err(Error::Resource(format!("sector dimension {} above {PSD_DIM_CAP}", source.dim())));
    }
    let h = assemble_heisenberg(&source)?.to_dense();
    let m = l - n + 1;
    let rhs = if m >= 2 {
        let target = enumerate_fock_sector(&SpinLattice::chain(m)?, spin, n)?;
        let v = v_matrix(&source, Some(&target))?;
        v.transpose() * neumann_laplacian(&target)? * &v * spin.s()
    } else {
        // a single target point: −Δ = 0
        DMatrix::zeros(source.dim(), source.dim())
    };
    let norm = spectral_norm(&h);
    Ok(psd_certificate("laplacian", h - rhs, norm)
        .param("l", l)
        .param("two_s", spin.two_s())
        .param("n", n))
}

/// Symmetric `n`-particle state stored by occupation-basis coefficients.
#[derive(Debug, Clone)]
pub struct CoordinateState {
    pub basis: MagnonSectorBasis,
    pub amplitudes: Vec<f64>,
    pub norm: f64,
}

impl CoordinateState {
    /// Normalizes `amplitudes`; the original norm is kept in `norm`.
    pub fn new(basis: MagnonSectorBasis, mut amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return domain(format!("{} amplitudes for a sector of dimension {}", amplitudes.len(), basis.dim()));
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return domain("zero state");
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { basis, amplitudes, norm })
    }

    pub fn occupation(basis: MagnonSectorBasis, state: &[u8]) -> Result<Self> {
        let i = basis.index_of(state).ok_or_else(|| Error::Domain(format!("{state:?} not in the sector")))?;
        let mut a = vec![0.0; basis.dim()];
        a[i] = 1.0;
        Self::new(basis, a)
    }

    pub fn haar(basis: MagnonSectorBasis, root: u64, params: &[u64]) -> (Self, u64) {
        let (mut rng, seed) = job_rng(root, params);
        let v = haar_vector(basis.dim(), &mut rng);
        (Self::new(basis, v).expect("unit vector"), seed)
    }

    pub fn l(&self) -> usize {
        self.basis.sites()
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// `Ψ(x₁, …, xₙ)` for 1-based coordinates, with `Ψ = (1/√n!) Σ Ψ(X) a†…|Ω⟩`.
    pub fn wavefunction(&self, x: &[usize]) -> f64 {
        let mut occ = vec![0u8; self.l()];
        for &xi in x {
            occ[xi - 1] += 1;
        }
        match self.basis.index_of(&occ) {
            Some(i) => {
                let mult: f64 = occ.iter().map(|&k| factorial(k as usize)).product();
                self.amplitudes[i] * (mult / factorial(self.n())).sqrt()
            }
            None => 0.0,
        }
    }

    /// `‖𝕍Ψ‖²`.
    pub fn v_norm_squared(&self) -> f64 {
        let mut occ = vec![0u8; self.l() + 1];
        self.basis
            .states()
            .zip(&self.amplitudes)
            .filter(|(st, _)| st.iter().all(|&k| k <= 1))
            .map(|(st, c)| {
                occ.iter_mut().for_each(|o| *o = 0);
                for a in apply_v(&occupation_to_positions(st)) {
                    occ[a] += 1;
                }
                c * c / occ.iter().map(|&k| factorial(k as usize)).product::<f64>()
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct TwoParticleDensity {
    /// `ρ(x, y) = ⟨a†_x a†_y a_y a_x⟩`, 0-based indices.
    pub rho: DMatrix<f64>,
}

impl TwoParticleDensity {
    pub fn total(&self) -> f64 {
        self.rho.sum()
    }

    /// `Σ_x ρ(x+1, x)`.
    pub fn nearest_neighbour(&self) -> f64 {
        (0..self.rho.nrows().saturating_sub(1)).map(|x| self.rho[(x + 1, x)]).sum()
    }

    pub fn diagonal(&self) -> f64 {
        self.rho.diagonal().sum()
    }
}

pub fn two_particle_density(state: &CoordinateState) -> Result<TwoParticleDensity> {
    let l = state.l();
    let n = state.n();
    let mut rho = DMatrix::<f64>::zeros(l, l);
    for (st, c) in state.basis.states().zip(&state.amplitudes) {
        let p = c * c;
        for x in 0..l {
            let nx = st[x] as f64;
            if nx == 0.0 {
                continue;
            }
            for y in 0..l {
                let ny = st[y] as f64;
                rho[(x, y)] += p * if x == y { nx * (nx - 1.0) } else { nx * ny };
            }
        }
    }
    let want = (n * n.saturating_sub(1)) as f64;
    let asym: f64 = (&rho - rho.transpose()).amax();
    if (rho.sum() - want).abs() > 1e-10 * want.max(1.0) || asym > 1e-14 || rho.min() < 0.0 {
        return Err(Error::Consistency(format!("two-particle density sums to {} instead of {want}", rho.sum())));
    }
    Ok(TwoParticleDensity { rho })
}

/// `‖𝕍Ψ‖² − [1 − ½Σρ(x,x) − Σρ(x,x+1)] >= 0`.
pub fn verify_vnorm_lower_bound(state: &CoordinateState) -> Result<InequalityCertificate> {
    if state.n() > state.l() {
        return domain("the map needs n <= l");
    }
    let rho = two_particle_density(state)?;
    let rhs = 1.0 - 0.5 * rho.diagonal() - rho.nearest_neighbour();
    Ok(InequalityCertificate::new("vnorm", state.v_norm_squared() - rhs, 1e-10)
        .param("l", state.l())
        .param("two_s", state.basis.spin().two_s())
        .param("n", state.n()))
}

#[derive(Debug, Clone)]
pub struct DensityReport {
    pub energy: f64,
    /// `Σρ(x+1,x) <= 4n(n−1)/ℓ + 4(n−1)√(n/S)⟨H⟩^{1/2}`.
    pub off_diagonal: InequalityCertificate,
    /// `Σρ(x,x) <= 4n(n−1)/ℓ + (4+√3)(n−1)√(n/S)⟨H⟩^{1/2}`.
    pub diagonal: InequalityCertificate,
}

pub fn verify_density_bounds(state: &CoordinateState) -> Result<DensityReport> {
    let h = assemble_heisenberg(&state.basis)?;
    let energy = h.expectation(&state.amplitudes).max(0.0);
    let rho = two_particle_density(state)?;
    let (l, n) = (state.l() as f64, state.n() as f64);
    let s = state.basis.spin().s();
    let base = 4.0 * n * (n - 1.0) / l;
    let grow = (n - 1.0) * (n / s).sqrt() * energy.sqrt();
    let tag = |c: InequalityCertificate| {
        c.param("l", state.l()).param("two_s", state.basis.spin().two_s()).param("n", state.n())
    };
    Ok(DensityReport {
        energy,
        off_diagonal: tag(InequalityCertificate::new("density-offdiagonal", base + 4.0 * grow - rho.nearest_neighbour(), 1e-10)),
        diagonal: tag(InequalityCertificate::new(
            "density-diagonal",
            base + (4.0 + 3f64.sqrt()) * grow - rho.diagonal(),
            1e-10,
        )),
    })
}

/// For `S = 1/2`: `⟨Ψ|HΨ⟩ = (S/2) Σ_{X,Y∈𝒳, |X−Y|=1} |Ψ(X) − Ψ(Y)|²` on random states.
pub fn verify_halfspin_quadratic_form_equality(l: usize, n: usize, samples: usize, root: u64) -> Result<InequalityCertificate> {
    if n > l {
        return domain(format!("the map needs n <= l, got n = {n}, l = {l}"));
    }
    let spin = SpinMagnitude::half();
    let basis = enumerate_sector_basis(&SpinLattice::chain(l)?, spin, n)?;
    let h = assemble_heisenberg(&basis)?;
    let tuples = distinct_tuples(l, n);
    let mut worst = 0.0f64;
    let (_, seed) = job_rng(root, &[0x4853, l as u64, n as u64]);
    for k in 0..samples {
        let (state, _) = CoordinateState::haar(basis.clone(), root, &[0x4853, l as u64, n as u64, k as u64]);
        let lhs = h.expectation(&state.amplitudes);
        let mut rhs = 0.0;
        for x in &tuples {
            let px = state.wavefunction(x);
            for j in 0..n {
                for step in [-1i64, 1] {
                    let yj = x[j] as i64 + step;
                    if yj < 1 || yj > l as i64 || x.contains(&(yj as usize)) {
                        continue;
                    }
                    let mut y = x.clone();
                    y[j] = yj as usize;
                    rhs += (px - state.wavefunction(&y)).powi(2);
                }
            }
        }
        rhs *= 0.5 * spin.s();
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(InequalityCertificate::new("halfspin-equality", -worst, 1e-10)
        .param("l", l)
        .param("n", n)
        .param("samples", samples)
        .with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spin(two_s: u32) -> SpinMagnitude {
        SpinMagnitude::new(two_s).unwrap()
    }

    fn sector(l: usize, two_s: u32, n: usize) -> MagnonSectorBasis {
        enumerate_sector_basis(&SpinLattice::chain(l).unwrap(), spin(two_s), n).unwrap()
    }

    #[test]
    fn map_examples() {
        assert_eq!(apply_v(&[1, 2, 3]), vec![1, 1, 1]);
        assert_eq!(apply_v(&[1, 3, 5]), vec![1, 2, 3]);
        assert_eq!(apply_v(&[3, 1]), vec![2, 1]);
        let m = build_coordinate_map_v(4, 2).unwrap();
        assert_eq!(m.table.len(), 6);
        assert_eq!(m.image_size, 9);
        assert!(m.surjective);
        assert!(build_coordinate_map_v(2, 3).is_err());
        assert!(build_coordinate_map_v(6, 3).unwrap().surjective);
    }

    #[test]
    fn laplacian_examples() {
        assert!(verify_laplacian_lower_bound(4, spin(1), 2).unwrap().passed());
        assert!(verify_laplacian_lower_bound(3, spin(2), 2).unwrap().passed());
        for two_s in [1, 2] {
            assert!(verify_laplacian_lower_bound(3, spin(two_s), 3).unwrap().passed());
        }
        let one = verify_laplacian_lower_bound(5, spin(1), 1).unwrap();
        // n = 1: V is the identity and both sides are S times the free Laplacian
        assert!(one.slack.abs() < 1e-12);
    }

    #[test]
    fn halfspin_equality() {
        let c = verify_halfspin_quadratic_form_equality(4, 2, 100, 7).unwrap();
        assert!(c.passed(), "{c:?}");
        assert!(verify_halfspin_quadratic_form_equality(4, 1, 10, 7).unwrap().passed());
        let zero = verify_halfspin_quadratic_form_equality(4, 0, 3, 7).unwrap();
        assert!(zero.slack == 0.0);
    }

    #[test]
    fn density_examples() {
        let a = CoordinateState::occupation(sector(4, 1, 2), &[1, 1, 0, 0]).unwrap();
        let rho = two_particle_density(&a).unwrap();
        assert_eq!(rho.rho[(0, 1)], 1.0);
        assert_eq!(rho.rho[(1, 0)], 1.0);
        assert_eq!(rho.total(), 2.0);
        let b = CoordinateState::occupation(sector(3, 2, 2), &[2, 0, 0]).unwrap();
        assert_eq!(two_particle_density(&b).unwrap().rho[(0, 0)], 2.0);
        let (r, _) = CoordinateState::haar(sector(5, 2, 3), 3, &[1]);
        assert!((two_particle_density(&r).unwrap().total() - 6.0).abs() < 1e-10);
    }

    #[test]
    fn vnorm_examples() {
        let spread = CoordinateState::occupation(sector(5, 1, 2), &[1, 0, 1, 0, 0]).unwrap();
        assert!((spread.v_norm_squared() - 1.0).abs() < 1e-15);
        assert!(verify_vnorm_lower_bound(&spread).unwrap().passed());
        let packed = CoordinateState::occupation(sector(4, 1, 2), &[1, 1, 0, 0]).unwrap();
        let c = verify_vnorm_lower_bound(&packed).unwrap();
        assert!(c.passed());
        assert!((c.slack - packed.v_norm_squared()).abs() < 1e-15);
        for k in 0..100 {
            let (s, _) = CoordinateState::haar(sector(5, 2, 3), 11, &[k]);
            assert!(verify_vnorm_lower_bound(&s).unwrap().passed());
            assert!(s.v_norm_squared() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn v_matrix_matches_norm() {
        let b = sector(5, 2, 3);
        let t = enumerate_fock_sector(&SpinLattice::chain(3).unwrap(), spin(2), 3).unwrap();
        let v = v_matrix(&b, Some(&t)).unwrap();
        let (s, _) = CoordinateState::haar(b, 5, &[2]);
        let img = &v * nalgebra::DVector::from_vec(s.amplitudes.clone());
        assert!((img.norm_squared() - s.v_norm_squared()).abs() < 1e-13);
    }

    #[test]
    fn ground_state_density() {
        let b = sector(6, 2, 3);
        let z = crate::hilbert::zero_mode(&b);
        let s = CoordinateState::new(b, z).unwrap();
        let r = verify_density_bounds(&s).unwrap();
        assert!(r.energy.abs() < 1e-12);
        assert!(r.off_diagonal.passed() && r.diagonal.passed());
        let half = CoordinateState::occupation(sector(4, 1, 2), &[0, 1, 1, 0]).unwrap();
        let r = verify_density_bounds(&half).unwrap();
        assert!(r.diagonal.passed());
        assert_eq!(two_particle_density(&half).unwrap().diagonal(), 0.0);
    }
}
