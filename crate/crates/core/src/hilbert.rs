//! Operator assembly on magnon sectors through the Holstein–Primakoff map.
//!
//! With `S⁺ = √(2S) a† √(1 − n/2S)`, `S⁻ = √(2S) √(1 − n/2S) a` and `S³ = n − S`
//! a bond term `S² − S_x·S_y` becomes
//! `S(n_x + n_y) − n_x n_y` on the diagonal plus a dressed hop whose matrix element
//! `|n_x, n_y⟩ → |n_x+1, n_y−1⟩` is `−½ √((n_x+1)(2S−n_x) n_y (2S+1−n_y))`.
//! All radicands are formed in exact integer arithmetic.

use crate::basis::{MagnonSectorBasis, SiteCap};
use crate::certificate::InequalityCertificate;
use crate::error::{domain, Error, Result};
use crate::lattice::{Boundary, SpinLattice};
use crate::operator::{DiagonalProjector, HermitianOperator};
use crate::spin::SpinMagnitude;
use nalgebra::DMatrix;

pub fn enumerate_sector_basis(lattice: &SpinLattice, spin: SpinMagnitude, n: usize) -> Result<MagnonSectorBasis> {
    MagnonSectorBasis::enumerate(lattice, spin, n, SiteCap::Spin)
}

/// Free-boson sector: no per-site cap.
pub fn enumerate_fock_sector(lattice: &SpinLattice, spin: SpinMagnitude, n: usize) -> Result<MagnonSectorBasis> {
    MagnonSectorBasis::enumerate(lattice, spin, n, SiteCap::Unbounded)
}

fn require_capped(basis: &MagnonSectorBasis, what: &str) -> Result<()> {
    if basis.cap() != SiteCap::Spin {
        return Err(Error::CapMismatch(format!("{what} needs the 2S-capped spin basis")));
    }
    Ok(())
}

/// Moves one particle `from -> to` in `state`, writing into `buf`.
fn hopped<'a>(state: &[u8], from: usize, to: usize, buf: &'a mut Vec<u8>) -> &'a [u8] {
    buf.clear();
    buf.extend_from_slice(state);
    buf[from] -= 1;
    buf[to] += 1;
    buf
}

fn lookup(basis: &MagnonSectorBasis, state: &[u8]) -> Result<usize> {
    basis
        .index_of(state)
        .ok_or_else(|| Error::Consistency(format!("hop left the sector: {state:?}")))
}

fn bond_terms(basis: &MagnonSectorBasis, extra_diag: &[f64]) -> Result<HermitianOperator> {
    let two_s = basis.spin().two_s() as u64;
    let s = basis.spin().s();
    let bonds = basis.lattice().bonds();
    let mut entries = Vec::with_capacity(basis.dim() * (1 + bonds.len()));
    let mut buf = Vec::with_capacity(basis.sites());
    for (i, st) in basis.states().enumerate() {
        let mut diag: f64 = st.iter().zip(extra_diag).map(|(&n, &c)| c * n as f64).sum();
        for &(x, y) in &bonds {
            let (nx, ny) = (st[x] as u64, st[y] as u64);
            diag += s * (nx + ny) as f64 - (nx * ny) as f64;
            for (a, b) in [(x, y), (y, x)] {
                let (na, nb) = (st[a] as u64, st[b] as u64);
                if nb == 0 || na >= two_s {
                    continue;
                }
                let rad = (na + 1) * (two_s - na) * nb * (two_s + 1 - nb);
                let j = lookup(basis, hopped(st, b, a, &mut buf))?;
                entries.push((j, i, -0.5 * (rad as f64).sqrt()));
            }
        }
        entries.push((i, i, diag));
    }
    HermitianOperator::from_triplets(basis.n(), basis.dim(), entries)
}

/// Sector block of `H = Σ_bonds (S² − S_x·S_y)`.
pub fn assemble_heisenberg(basis: &MagnonSectorBasis) -> Result<HermitianOperator> {
    require_capped(basis, "the Heisenberg Hamiltonian")?;
    bond_terms(basis, &vec![0.0; basis.sites()])
}

/// Sector block of `H^D = H + S(n_1 + n_ℓ)`: the chain with both outer neighbours pinned down.
pub fn assemble_dirichlet_heisenberg(basis: &MagnonSectorBasis) -> Result<HermitianOperator> {
    require_capped(basis, "the Dirichlet Hamiltonian")?;
    if basis.lattice().dimension() != 1 {
        return Err(Error::UnsupportedBoundary(
            "pinned Hamiltonian is only assembled for chains; 2D uses free bosons".into(),
        ));
    }
    let s = basis.spin().s();
    let extra: Vec<f64> = basis.lattice().with_boundary(Boundary::DirichletPinned)?.missing_neighbours()
        .iter()
        .map(|&m| s * m as f64)
        .collect();
    bond_terms(basis, &extra)
}

/// `Σ_x onsite[x] n_x − hop Σ_bonds (a†_x a_y + a†_y a_x)` on an uncapped sector.
pub fn second_quantized_one_body(basis: &MagnonSectorBasis, onsite: &[f64], hop: f64) -> Result<HermitianOperator> {
    if basis.cap() != SiteCap::Unbounded {
        return Err(Error::CapMismatch("one-body boson operators live on the uncapped Fock sector".into()));
    }
    let bonds = basis.lattice().bonds();
    let mut entries = Vec::with_capacity(basis.dim() * (1 + 2 * bonds.len()));
    let mut buf = Vec::with_capacity(basis.sites());
    for (i, st) in basis.states().enumerate() {
        let diag: f64 = st.iter().zip(onsite).map(|(&n, &c)| c * n as f64).sum();
        entries.push((i, i, diag));
        for &(x, y) in &bonds {
            for (a, b) in [(x, y), (y, x)] {
                let (na, nb) = (st[a] as u64, st[b] as u64);
                if nb == 0 {
                    continue;
                }
                let j = lookup(basis, hopped(st, b, a, &mut buf))?;
                entries.push((j, i, -hop * (((na + 1) * nb) as f64).sqrt()));
            }
        }
    }
    HermitianOperator::from_triplets(basis.n(), basis.dim(), entries)
}

/// Free bosons with Dirichlet hopping, `T = S Σ (−Δ^D)(x,y) a†_x a_y`.
pub fn assemble_free_boson_t(basis: &MagnonSectorBasis) -> Result<HermitianOperator> {
    if basis.cap() != SiteCap::Unbounded {
        return Err(Error::CapMismatch("T must be assembled on the uncapped Fock sector".into()));
    }
    let s = basis.spin().s();
    let d = basis.lattice().dimension() as f64;
    second_quantized_one_body(basis, &vec![2.0 * d * s; basis.sites()], s)
}

/// Squared single-site weight `f(n)² = Π_{j=1}^{n} (1 − (j−1)/2S)`.
pub fn f_weight_squared(two_s: u32, n: usize) -> f64 {
    let two_s = two_s as u128;
    if n as u128 > two_s {
        return 0.0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..n as u128 {
        match (num.checked_mul(two_s - j), den.checked_mul(two_s)) {
            (Some(a), Some(b)) => {
                num = a;
                den = b;
            }
            _ => {
                let mut v = num as f64 / den as f64;
                for k in j..n as u128 {
                    v *= (two_s - k) as f64 / two_s as f64;
                }
                return v;
            }
        }
    }
    num as f64 / den as f64
}

pub fn f_weight(two_s: u32, n: usize) -> f64 {
    f_weight_squared(two_s, n).sqrt()
}

/// Diagonal weights `Π_x f(n_x)`; zero on any state with `n_x > 2S`.
pub fn assemble_projector_p(basis: &MagnonSectorBasis, spin: SpinMagnitude) -> DiagonalProjector {
    let table: Vec<f64> = (0..=basis.n()).map(|k| f_weight_squared(spin.two_s(), k)).collect();
    let weights = basis
        .states()
        .map(|st| st.iter().map(|&k| table[k as usize]).product::<f64>().sqrt())
        .collect();
    DiagonalProjector { sector: basis.n(), weights }
}

/// Sector block of `S_tot²`.
pub fn assemble_total_spin_squared(basis: &MagnonSectorBasis) -> Result<HermitianOperator> {
    require_capped(basis, "total spin")?;
    let two_s = basis.spin().two_s() as i64;
    let sites = basis.sites();
    let mut entries = Vec::new();
    let mut buf = Vec::with_capacity(sites);
    // Work in units of 1/4 to keep the diagonal integral: (2m)² with m = n − S.
    let m_tot2 = 2 * basis.n() as i64 - two_s * sites as i64;
    let casimir4 = two_s * (two_s + 2);
    for (i, st) in basis.states().enumerate() {
        let mut diag4 = m_tot2 * m_tot2;
        for &k in st {
            let m2 = 2 * k as i64 - two_s;
            diag4 += casimir4 - m2 * m2;
        }
        entries.push((i, i, diag4 as f64 / 4.0));
        for x in 0..sites {
            for y in 0..sites {
                let (nx, ny) = (st[x] as i64, st[y] as i64);
                if x == y || ny == 0 || nx >= two_s {
                    continue;
                }
                let rad = (nx + 1) * (two_s - nx) * ny * (two_s + 1 - ny);
                let j = lookup(basis, hopped(st, y, x, &mut buf))?;
                entries.push((j, i, (rad as f64).sqrt()));
            }
        }
    }
    HermitianOperator::from_triplets(basis.n(), basis.dim(), entries)
}

/// Normalized zero-energy state of a capped sector, amplitudes `∝ Π_x √C(2S, n_x)`.
pub fn zero_mode(basis: &MagnonSectorBasis) -> Vec<f64> {
    let two_s = basis.spin().two_s() as usize;
    let binom: Vec<f64> = (0..=two_s).map(|k| binomial(two_s, k)).collect();
    let mut v: Vec<f64> = basis
        .states()
        .map(|st| st.iter().map(|&k| binom[k as usize]).product::<f64>().sqrt())
        .collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut out = 1.0;
    for j in 0..k.min(n - k) {
        out = out * (n - j) as f64 / (j + 1) as f64;
    }
    out
}

/// Single-site `(S⁺, S⁻, S³)` built directly from the boson formulas on `ℓ²([0, 2S])`.
pub fn single_site_operators(spin: SpinMagnitude) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let d = spin.local_dim();
    let two_s = spin.two_s() as f64;
    let s = spin.s();
    let mut sp = DMatrix::zeros(d, d);
    let mut sm = DMatrix::zeros(d, d);
    let mut sz = DMatrix::zeros(d, d);
    for n in 0..d {
        let nf = n as f64;
        sz[(n, n)] = nf - s;
        if n + 1 < d {
            // a† √(1 − n/2S) acting on |n⟩
            sp[(n + 1, n)] = two_s.sqrt() * (nf + 1.0).sqrt() * (1.0 - nf / two_s).max(0.0).sqrt();
        }
        if n > 0 {
            // √(1 − n/2S) a acting on |n⟩
            sm[(n - 1, n)] = two_s.sqrt() * (1.0 - (nf - 1.0) / two_s).sqrt() * nf.sqrt();
        }
    }
    (sp, sm, sz)
}

/// Checks the su(2) commutation relations and the Casimir of the single-site map.
pub fn verify_su2_representation(spin: SpinMagnitude, site_dim_check: usize) -> Result<InequalityCertificate> {
    if site_dim_check != spin.local_dim() {
        return domain(format!(
            "site dimension {site_dim_check} does not match 2S+1 = {}",
            spin.local_dim()
        ));
    }
    let (sp, sm, sz) = single_site_operators(spin);
    let s = spin.s();
    let d = spin.local_dim();
    let comm = |a: &DMatrix<f64>, b: &DMatrix<f64>| a * b - b * a;
    let r1 = (comm(&sz, &sp) - &sp).amax();
    let r2 = (comm(&sz, &sm) + &sm).amax();
    let r3 = (comm(&sp, &sm) - &sz * 2.0).amax();
    let casimir = &sz * &sz + (&sp * &sm + &sm * &sp) * 0.5;
    let r4 = (casimir - DMatrix::identity(d, d) * (s * (s + 1.0))).amax();
    let residual = r1.max(r2).max(r3).max(r4);
    Ok(InequalityCertificate::new("su2-representation", -residual, 1e-12)
        .param("two_s", spin.two_s())
        .param("site_dim", d))
}
