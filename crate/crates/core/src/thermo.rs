//! Sector spectra, exact free energies, gaps, and the subadditivity and
//! localization checks that connect finite chains.

use crate::basis::MagnonSectorBasis;
use crate::certificate::InequalityCertificate;
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::hilbert::{assemble_dirichlet_heisenberg, assemble_heisenberg, enumerate_sector_basis, zero_mode};
use crate::lanczos::{lowest_eigenvalue, LanczosOptions};
use crate::lattice::SpinLattice;
use crate::linalg::sorted_eigenvalues;
use crate::operator::HermitianOperator;
use crate::spin::SpinMagnitude;
use nalgebra::DMatrix;
use std::collections::HashMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    /// `H` with open boundaries.
    Free,
    /// `H^D`, both outer neighbours pinned down.
    Dirichlet,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub kind: SpectrumKind,
    /// Cap on the total Hilbert dimension `(2S+1)^sites`.
    pub hilbert_cap: f64,
    /// Largest sector handed to the dense eigensolver.
    pub dense_sector_cap: usize,
    pub exec: Execution,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { kind: SpectrumKind::Free, hilbert_cap: (1u64 << 20) as f64, dense_sector_cap: 6000, exec: Execution::default() }
    }
}

/// Eigenvalues of every magnon sector `n = 0 ..= 2S·sites`, ascending within each sector.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub lattice: SpinLattice,
    pub spin: SpinMagnitude,
    pub kind: SpectrumKind,
    pub sectors: Vec<Vec<f64>>,
}

impl SectorSpectrum {
    pub fn all_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.sectors.iter().flatten().copied()
    }

    pub fn count(&self) -> usize {
        self.sectors.iter().map(Vec::len).sum()
    }

    pub fn scale(&self) -> f64 {
        self.all_values().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// `ln Tr e^{−βH}` with a max shift.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let xs: Vec<f64> = self.all_values().map(|e| -beta * e).collect();
        log_sum_exp(&xs)
    }
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `(even, odd)` blocks of a chain operator under site reflection `x -> ℓ+1−x`.
pub fn reflection_blocks(basis: &MagnonSectorBasis, op: &HermitianOperator) -> (DMatrix<f64>, DMatrix<f64>) {
    let dim = basis.dim();
    let mut rev = Vec::with_capacity(basis.sites());
    let mirror: Vec<usize> = (0..dim)
        .map(|i| {
            rev.clear();
            rev.extend(basis.state(i).iter().rev());
            basis.index_of(&rev).expect("reflection preserves the sector")
        })
        .collect();
    // orbit index and coefficient in the even / odd combinations
    let mut even_of = vec![0usize; dim];
    let mut odd_of = vec![usize::MAX; dim];
    let mut even_c = vec![0.0; dim];
    let mut odd_c = vec![0.0; dim];
    let (mut ne, mut no) = (0usize, 0usize);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..dim {
        let j = mirror[i];
        if j == i {
            even_of[i] = ne;
            even_c[i] = 1.0;
            ne += 1;
        } else if i < j {
            even_of[i] = ne;
            even_of[j] = ne;
            even_c[i] = h;
            even_c[j] = h;
            ne += 1;
            odd_of[i] = no;
            odd_of[j] = no;
            odd_c[i] = h;
            odd_c[j] = -h;
            no += 1;
        }
    }
    let mut even = DMatrix::zeros(ne, ne);
    let mut odd = DMatrix::zeros(no, no);
    for &(r, c, v) in op.entries() {
        even[(even_of[r], even_of[c])] += even_c[r] * even_c[c] * v;
        if odd_of[r] != usize::MAX && odd_of[c] != usize::MAX {
            odd[(odd_of[r], odd_of[c])] += odd_c[r] * odd_c[c] * v;
        }
    }
    (even, odd)
}

/// Dense eigenvalues of one sector block; chains are split by reflection parity.
pub fn sector_eigenvalues(basis: &MagnonSectorBasis, op: &HermitianOperator) -> Vec<f64> {
    if basis.lattice().dimension() == 1 && basis.dim() > 64 {
        let (even, odd) = reflection_blocks(basis, op);
        let mut v = sorted_eigenvalues(even);
        v.extend(sorted_eigenvalues(odd));
        v.sort_by(f64::total_cmp);
        v
    } else {
        sorted_eigenvalues(op.to_dense())
    }
}

fn assemble(kind: SpectrumKind, basis: &MagnonSectorBasis) -> Result<HermitianOperator> {
    match kind {
        SpectrumKind::Free => assemble_heisenberg(basis),
        SpectrumKind::Dirichlet => assemble_dirichlet_heisenberg(basis),
    }
}

pub fn full_spectrum(lattice: &SpinLattice, spin: SpinMagnitude) -> Result<SectorSpectrum> {
    full_spectrum_with(lattice, spin, &SpectrumOptions::default())
}

pub fn full_spectrum_with(lattice: &SpinLattice, spin: SpinMagnitude, opts: &SpectrumOptions) -> Result<SectorSpectrum> {
    let sites = lattice.sites();
    let total = (spin.local_dim() as f64).powi(sites as i32);
    if total > opts.hilbert_cap {
        return Err(Error::Resource(format!(
            "Hilbert dimension {total:e} exceeds the cap {:e}; use sector-restricted mode (single sectors or Lanczos gap)",
            opts.hilbert_cap
        )));
    }
    let nmax = spin.two_s() as usize * sites;
    // spin flip maps sector n to nmax − n for the open Hamiltonian
    let computed = match opts.kind {
        SpectrumKind::Free => nmax / 2,
        SpectrumKind::Dirichlet => nmax,
    };
    let kind = opts.kind;
    let cap = opts.dense_sector_cap;
    let blocks: Vec<Result<Vec<f64>>> = opts.exec.map_range(computed + 1, |n| {
        let basis = enumerate_sector_basis(lattice, spin, n)?;
        if basis.dim() > cap {
            return Err(Error::Resource(format!(
                "sector n={n} has dimension {} above the dense cap {cap}; use sector-restricted mode",
                basis.dim()
            )));
        }
        let op = assemble(kind, &basis)?;
        Ok(sector_eigenvalues(&basis, &op))
    });
    let mut sectors = blocks.into_iter().collect::<Result<Vec<_>>>()?;
    for n in computed + 1..=nmax {
        sectors.push(sectors[nmax - n].clone());
    }
    Ok(SectorSpectrum { lattice: lattice.clone(), spin, kind, sectors })
}

/// `f = −(1/(β·sites)) ln Tr e^{−βH}`.
pub fn free_energy(spectrum: &SectorSpectrum, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    Ok(-spectrum.log_partition(beta) / (beta * spectrum.lattice.sites() as f64))
}

pub fn dirichlet_spectrum(l: usize, spin: SpinMagnitude, exec: Execution) -> Result<SectorSpectrum> {
    let opts = SpectrumOptions { kind: SpectrumKind::Dirichlet, exec, ..Default::default() };
    full_spectrum_with(&SpinLattice::chain(l)?, spin, &opts)
}

/// `f_ℓ^D(β) = −(1/βℓ) ln Tr e^{−βH^D}`.
pub fn dirichlet_free_energy(l: usize, spin: SpinMagnitude, beta: f64) -> Result<f64> {
    free_energy(&dirichlet_spectrum(l, spin, Execution::default())?, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Free,
    Dirichlet,
    VariationalUpper,
    AssembledLower,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Free => "free",
            Variant::Dirichlet => "dirichlet",
            Variant::VariationalUpper => "variational-upper",
            Variant::AssembledLower => "assembled-lower",
        }
    }
}

/// Free energy per site over an explicit β grid.
#[derive(Debug, Clone)]
pub struct ThermoCurve {
    pub variant: Variant,
    /// Lattice label, `"ℓ"` for chains, `"LxxLy"` for grids.
    pub size: String,
    pub two_s: u32,
    pub betas: Vec<f64>,
    pub values: Vec<f64>,
}

pub const THERMO_CSV_HEADER: [&str; 5] = ["beta", "f", "variant", "l", "two_s"];

pub fn lattice_label(lattice: &SpinLattice) -> String {
    lattice.extents().iter().map(|e| e.to_string()).collect::<Vec<_>>().join("x")
}

impl ThermoCurve {
    pub fn from_spectrum(spectrum: &SectorSpectrum, betas: &[f64]) -> Result<Self> {
        if betas.is_empty() {
            return domain("empty beta grid");
        }
        let values = betas.iter().map(|&b| free_energy(spectrum, b)).collect::<Result<Vec<_>>>()?;
        let variant = match spectrum.kind {
            SpectrumKind::Free => Variant::Free,
            SpectrumKind::Dirichlet => Variant::Dirichlet,
        };
        Ok(Self {
            variant,
            size: lattice_label(&spectrum.lattice),
            two_s: spectrum.spin.two_s(),
            betas: betas.to_vec(),
            values,
        })
    }

    /// Rows in the fixed column order `(beta, f, variant, l, two_s)`.
    pub fn rows(&self) -> Vec<[String; 5]> {
        self.betas
            .iter()
            .zip(&self.values)
            .map(|(b, f)| [b.to_string(), f.to_string(), self.variant.name().to_string(), self.size.clone(), self.two_s.to_string()])
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub l: usize,
    pub spin: SpinMagnitude,
    pub gap: f64,
    pub reference: f64,
    pub deviation: f64,
    pub method: &'static str,
}

pub fn reference_gap(l: usize, spin: SpinMagnitude) -> f64 {
    2.0 * spin.s() * (1.0 - (PI / l as f64).cos())
}

/// Smallest eigenvalue above the zero-mode tolerance `1e-10 · scale`.
pub fn spectral_gap(spectrum: &SectorSpectrum) -> Result<GapReport> {
    if spectrum.kind != SpectrumKind::Free || spectrum.lattice.dimension() != 1 {
        return domain("spectral gap is reported for the open chain only");
    }
    let tol = 1e-10 * spectrum.scale().max(1.0);
    let gap = spectrum
        .all_values()
        .filter(|&e| e > tol)
        .fold(f64::INFINITY, f64::min);
    let l = spectrum.lattice.sites();
    let reference = reference_gap(l, spectrum.spin);
    Ok(GapReport { l, spin: spectrum.spin, gap, reference, deviation: (gap - reference).abs(), method: "dense" })
}

/// Gap without a full spectrum: the lowest eigenvalue orthogonal to the zero
/// mode in every sector `1 <= n <= Sℓ`, via Lanczos for large sectors.
pub fn spectral_gap_sector_restricted(l: usize, spin: SpinMagnitude, exec: Execution) -> Result<GapReport> {
    let lattice = SpinLattice::chain(l)?;
    let top = spin.two_s() as usize * l / 2;
    let lows: Vec<Result<f64>> = exec.map_range(top, |k| {
        let n = k + 1;
        let basis = enumerate_sector_basis(&lattice, spin, n)?;
        let h = assemble_heisenberg(&basis)?;
        if basis.dim() <= 1500 {
            let v = sector_eigenvalues(&basis, &h);
            // exactly one zero mode per sector n <= Sℓ
            return Ok(v[1]);
        }
        lowest_eigenvalue(&h, &[zero_mode(&basis)], LanczosOptions::default())
    });
    let gap = lows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(f64::INFINITY, f64::min);
    let reference = reference_gap(l, spin);
    Ok(GapReport { l, spin, gap, reference, deviation: (gap - reference).abs(), method: "lanczos" })
}

/// Memoized chain spectra keyed by `(ℓ, two_s, kind)`.
#[derive(Debug, Default)]
pub struct SpectrumCache {
    map: HashMap<(usize, u32, SpectrumKind), SectorSpectrum>,
    pub exec: Execution,
}

impl SpectrumCache {
    pub fn new(exec: Execution) -> Self {
        Self { map: HashMap::new(), exec }
    }

    pub fn chain(&mut self, l: usize, spin: SpinMagnitude, kind: SpectrumKind) -> Result<&SectorSpectrum> {
        let key = (l, spin.two_s(), kind);
        if !self.map.contains_key(&key) {
            let opts = SpectrumOptions { kind, exec: self.exec, ..Default::default() };
            let s = full_spectrum_with(&SpinLattice::chain(l)?, spin, &opts)?;
            self.map.insert(key, s);
        }
        Ok(&self.map[&key])
    }

    /// `f_ℓ(β)`, with the single site value `−ln(2S+1)/β` for `ℓ = 1`.
    pub fn free_energy(&mut self, l: usize, spin: SpinMagnitude, kind: SpectrumKind, beta: f64) -> Result<f64> {
        if l == 1 {
            if !(beta > 0.0) {
                return domain("beta must be positive");
            }
            return Ok(match kind {
                SpectrumKind::Free => -(spin.local_dim() as f64).ln() / beta,
                SpectrumKind::Dirichlet => {
                    let s = spin.s();
                    // single site with both neighbours pinned: energy 2S·n
                    let xs: Vec<f64> = (0..spin.local_dim()).map(|n| -beta * 2.0 * s * n as f64).collect();
                    let lz = log_sum_exp(&xs);
                    -lz / beta
                }
            });
        }
        free_energy(self.chain(l, spin, kind)?, beta)
    }
}

/// `L f_L >= ℓ f_ℓ + (L−ℓ) f_{L−ℓ}` for every split of every `L` in `lengths`.
pub fn check_subadditivity(lengths: &[usize], spin: SpinMagnitude, beta: f64) -> Result<InequalityCertificate> {
    check_subadditivity_cached(&mut SpectrumCache::default(), lengths, spin, beta)
}

pub fn check_subadditivity_cached(
    cache: &mut SpectrumCache,
    lengths: &[usize],
    spin: SpinMagnitude,
    beta: f64,
) -> Result<InequalityCertificate> {
    let mut certs = Vec::new();
    for &big in lengths {
        if big < 2 {
            return domain(format!("subadditivity needs L >= 2, got {big}"));
        }
        let lf = big as f64 * cache.free_energy(big, spin, SpectrumKind::Free, beta)?;
        for l in 1..big {
            let a = l as f64 * cache.free_energy(l, spin, SpectrumKind::Free, beta)?;
            let b = (big - l) as f64 * cache.free_energy(big - l, spin, SpectrumKind::Free, beta)?;
            let tol = 1e-10 * lf.abs().max(1.0);
            certs.push(
                InequalityCertificate::new("subadditivity", lf - a - b, tol)
                    .param("L", big)
                    .param("l", l)
                    .param("two_s", spin.two_s())
                    .param("beta", beta),
            );
        }
    }
    Ok(InequalityCertificate::worst("subadditivity", &certs))
}

#[derive(Debug, Clone)]
pub struct LocalizationReport {
    /// `f_L <= (1+ℓ⁻¹)⁻¹ f_ℓ^D`.
    pub bound: InequalityCertificate,
    /// `(1+ℓ⁻¹)⁻¹ f_ℓ^D >= f_ℓ`.
    pub cross: InequalityCertificate,
}

pub fn check_localization_bound(big: usize, l: usize, spin: SpinMagnitude, beta: f64) -> Result<LocalizationReport> {
    check_localization_bound_cached(&mut SpectrumCache::default(), big, l, spin, beta)
}

pub fn check_localization_bound_cached(
    cache: &mut SpectrumCache,
    big: usize,
    l: usize,
    spin: SpinMagnitude,
    beta: f64,
) -> Result<LocalizationReport> {
    if l < 2 {
        return domain(format!("localization needs l >= 2, got {l}"));
    }
    if big < l + 2 || (big - 1) % (l + 1) != 0 {
        return domain(format!("L = {big} is not of the form k(l+1)+1 with l = {l}"));
    }
    let fl = cache.free_energy(big, spin, SpectrumKind::Free, beta)?;
    let fd = cache.free_energy(l, spin, SpectrumKind::Dirichlet, beta)?;
    let f_small = cache.free_energy(l, spin, SpectrumKind::Free, beta)?;
    let factor = 1.0 / (1.0 + 1.0 / l as f64);
    let tol = 1e-10 * fd.abs().max(fl.abs()).max(1e-300);
    let bound = InequalityCertificate::new("localization", factor * fd - fl, tol)
        .param("L", big)
        .param("l", l)
        .param("two_s", spin.two_s())
        .param("beta", beta);
    let cross = InequalityCertificate::new("localization-cross", factor * fd - f_small, tol)
        .param("l", l)
        .param("two_s", spin.two_s())
        .param("beta", beta);
    Ok(LocalizationReport { bound, cross })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spin(two_s: u32) -> SpinMagnitude {
        SpinMagnitude::new(two_s).unwrap()
    }

    fn chain_spec(l: usize, two_s: u32) -> SectorSpectrum {
        full_spectrum(&SpinLattice::chain(l).unwrap(), spin(two_s)).unwrap()
    }

    #[test]
    fn small_spectra() {
        let s = chain_spec(2, 1);
        let mut all: Vec<f64> = s.all_values().collect();
        all.sort_by(f64::total_cmp);
        for (a, b) in all.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let s = chain_spec(2, 2);
        assert_eq!(s.count(), 9);
        assert_eq!(s.all_values().filter(|e| e.abs() < 1e-12).count(), 5);
        let s = chain_spec(3, 1);
        let mut all: Vec<f64> = s.all_values().collect();
        all.sort_by(f64::total_cmp);
        // from the tensor-product oracle: quartet at 0, two doublets at 1/2 and 3/2
        for (a, b) in all.iter().zip([0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 1.5, 1.5]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn reflection_split_matches_direct() {
        let lat = SpinLattice::chain(8).unwrap();
        let b = enumerate_sector_basis(&lat, spin(2), 5).unwrap();
        let h = assemble_heisenberg(&b).unwrap();
        let direct = sorted_eigenvalues(h.to_dense());
        let split = sector_eigenvalues(&b, &h);
        assert_eq!(direct.len(), split.len());
        for (a, c) in direct.iter().zip(&split) {
            assert_abs_diff_eq!(*a, *c, epsilon = 1e-11);
        }
    }

    #[test]
    fn free_energy_values() {
        let s = chain_spec(2, 1);
        assert_abs_diff_eq!(free_energy(&s, 1.0).unwrap(), -0.5 * (3.0 + (-1.0f64).exp()).ln(), epsilon = 1e-14);
        assert!(free_energy(&s, 0.0).is_err());
        assert!(free_energy(&s, -1.0).is_err());
        let hot = free_energy(&s, 0.01).unwrap();
        assert_abs_diff_eq!(hot, -50.0 * (3.0 + (-0.01f64).exp()).ln(), epsilon = 1e-12);
        assert!((hot + 50.0 * 4f64.ln()).abs() < 0.15, "{hot}");
        let cold = free_energy(&s, 200.0).unwrap();
        assert!(cold < 0.0 && cold > -0.01);
        let big = chain_spec(12, 1);
        assert!(free_energy(&big, 1e3).unwrap().is_finite());
    }

    #[test]
    fn dirichlet_small() {
        let fd = dirichlet_free_energy(2, spin(1), 4.0).unwrap();
        // oracle: H^D eigenvalues for two spins 1/2 are {0, 1/2, 3/2, 1}
        let oracle = -(1.0 + (-2.0f64).exp() + (-6.0f64).exp() + (-4.0f64).exp()).ln() / 8.0;
        assert_abs_diff_eq!(fd, oracle, epsilon = 1e-14);
        let f = free_energy(&chain_spec(2, 1), 4.0).unwrap();
        assert!(fd >= f && fd <= 0.0);
    }

    #[test]
    fn degeneracy_law() {
        for l in 2..=4 {
            for two_s in 1..=3 {
                let s = chain_spec(l, two_s);
                let zeros = s.all_values().filter(|e| e.abs() < 1e-10).count();
                assert_eq!(zeros, two_s as usize * l + 1, "l={l} two_s={two_s}");
                assert_eq!(s.count(), (two_s as usize + 1).pow(l as u32));
            }
        }
    }

    #[test]
    fn gaps() {
        let g = spectral_gap(&chain_spec(4, 1)).unwrap();
        assert_abs_diff_eq!(g.gap, 1.0 - 0.5f64.sqrt(), epsilon = 1e-12);
        let g = spectral_gap(&chain_spec(2, 1)).unwrap();
        assert_abs_diff_eq!(g.gap, 1.0, epsilon = 1e-12);
        let g = spectral_gap(&chain_spec(6, 2)).unwrap();
        assert_abs_diff_eq!(g.gap, 0.267949192431123, epsilon = 1e-12);
        let r = spectral_gap_sector_restricted(6, spin(2), Execution::Sequential).unwrap();
        assert_abs_diff_eq!(r.gap, g.gap, epsilon = 1e-11);
    }

    #[test]
    fn resource_error() {
        let lat = SpinLattice::chain(21).unwrap();
        assert!(matches!(full_spectrum(&lat, spin(1)), Err(Error::Resource(_))));
    }

    #[test]
    fn subadditivity_examples() {
        assert!(check_subadditivity(&[4], spin(1), 2.0).unwrap().passed());
        assert!(check_subadditivity(&[6], spin(1), 8.0).unwrap().passed());
        assert!(check_subadditivity(&[4], spin(2), 1.0).unwrap().passed());
    }

    #[test]
    fn localization_examples() {
        let r = check_localization_bound(7, 2, spin(1), 4.0).unwrap();
        assert!(r.bound.passed() && r.cross.passed());
        assert!(check_localization_bound(5, 1, spin(1), 4.0).is_err());
        assert!(check_localization_bound(8, 2, spin(1), 4.0).is_err());
        for beta in [2.0, 8.0] {
            let r = check_localization_bound(11, 4, spin(1), beta).unwrap();
            assert!(r.cross.passed(), "{:?}", r.cross);
        }
    }

    #[test]
    fn curve_rows() {
        let c = ThermoCurve::from_spectrum(&chain_spec(2, 1), &[1.0, 2.0]).unwrap();
        let rows = c.rows();
        assert_eq!(rows[0][2], "free");
        assert_eq!(rows[1][3], "2");
        assert!(ThermoCurve::from_spectrum(&chain_spec(2, 1), &[]).is_err());
    }
}
