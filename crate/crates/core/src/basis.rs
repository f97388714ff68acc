//! Fixed-magnon-number occupation bases.

use crate::error::{domain, Result};
use crate::lattice::SpinLattice;
use crate::spin::SpinMagnitude;

/// Per-site occupation cap used during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteCap {
    /// Physical spin space, `n_x <= 2S`.
    Spin,
    /// Free bosons; effective cap is the sector particle number.
    Unbounded,
}

/// All occupation vectors of a sector, in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnonSectorBasis {
    lattice: SpinLattice,
    spin: SpinMagnitude,
    n: usize,
    cap: SiteCap,
    sites: usize,
    /// Flattened occupation vectors, `sites` entries per state.
    occ: Vec<u8>,
}

impl MagnonSectorBasis {
    pub fn enumerate(lattice: &SpinLattice, spin: SpinMagnitude, n: usize, cap: SiteCap) -> Result<Self> {
        let sites = lattice.sites();
        let site_cap = match cap {
            SiteCap::Spin => {
                let max = spin.two_s() as usize * sites;
                if n > max {
                    return domain(format!("magnon number {n} exceeds 2S*sites = {max}"));
                }
                spin.two_s() as usize
            }
            SiteCap::Unbounded => n,
        };
        if n > u8::MAX as usize {
            return domain(format!("magnon number {n} exceeds 255"));
        }
        let mut occ = Vec::new();
        let mut cur = vec![0u8; sites];
        fill(&mut cur, 0, n, site_cap, &mut occ);
        Ok(Self { lattice: lattice.clone(), spin, n, cap, sites, occ })
    }

    pub fn lattice(&self) -> &SpinLattice {
        &self.lattice
    }

    pub fn spin(&self) -> SpinMagnitude {
        self.spin
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> SiteCap {
        self.cap
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        if self.sites == 0 {
            0
        } else {
            self.occ.len() / self.sites
        }
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.occ[i * self.sites..(i + 1) * self.sites]
    }

    pub fn states(&self) -> impl Iterator<Item = &[u8]> {
        self.occ.chunks_exact(self.sites)
    }

    /// Ordinal of an occupation vector, by binary search.
    pub fn index_of(&self, state: &[u8]) -> Option<usize> {
        if state.len() != self.sites {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.dim());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.state(mid).cmp(state) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// True if every state respects `n_x <= 2S`.
    pub fn is_physical(&self) -> bool {
        self.cap == SiteCap::Spin || self.n <= self.spin.two_s() as usize
    }
}

fn fill(cur: &mut [u8], pos: usize, remaining: usize, cap: usize, out: &mut Vec<u8>) {
    let sites = cur.len();
    if pos + 1 == sites {
        if remaining <= cap {
            cur[pos] = remaining as u8;
            out.extend_from_slice(cur);
        }
        return;
    }
    let rest = (sites - pos - 1) * cap;
    let lo = remaining.saturating_sub(rest);
    for v in lo..=remaining.min(cap) {
        cur[pos] = v as u8;
        fill(cur, pos + 1, remaining - v, cap, out);
    }
    cur[pos] = 0;
}

/// Number of compositions of `n` into `sites` parts bounded by `cap`.
pub fn bounded_compositions(n: usize, sites: usize, cap: usize) -> u128 {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for _ in 0..sites {
        let mut next = vec![0u128; n + 1];
        for (tot, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for v in 0..=cap.min(n - tot) {
                next[tot + v] += w;
            }
        }
        ways = next;
    }
    ways[n]
}
