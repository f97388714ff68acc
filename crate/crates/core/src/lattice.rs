use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    /// Open chain, no boundary field.
    FreeChain,
    /// Chain or square whose outer neighbours are pinned to S³ = −S.
    DirichletPinned,
    /// Open rectangular grid.
    Free2dGrid,
}

impl Boundary {
    pub fn name(&self) -> &'static str {
        match self {
            Boundary::FreeChain => "free-chain",
            Boundary::DirichletPinned => "dirichlet-pinned",
            Boundary::Free2dGrid => "free-2d-grid",
        }
    }
}

/// Lattice geometry. Sites are numbered row-major, the first extent varying slowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinLattice {
    extents: Vec<usize>,
    boundary: Boundary,
}

impl SpinLattice {
    pub fn new(extents: Vec<usize>, boundary: Boundary) -> Result<Self> {
        match extents.len() {
            1 | 2 => {}
            d => return domain(format!("dimension must be 1 or 2, got {d}")),
        }
        if let Some(e) = extents.iter().find(|&&e| e < 2) {
            return domain(format!("every extent must be >= 2, got {e}"));
        }
        match (extents.len(), boundary) {
            (1, Boundary::Free2dGrid) => return domain("free-2d-grid needs two extents"),
            (2, Boundary::FreeChain) => return domain("free-chain needs one extent"),
            _ => {}
        }
        if extents.iter().product::<usize>() > 255 {
            return domain("more than 255 sites");
        }
        Ok(Self { extents, boundary })
    }

    pub fn chain(l: usize) -> Result<Self> {
        Self::new(vec![l], Boundary::FreeChain)
    }

    pub fn dirichlet_chain(l: usize) -> Result<Self> {
        Self::new(vec![l], Boundary::DirichletPinned)
    }

    pub fn grid(lx: usize, ly: usize) -> Result<Self> {
        Self::new(vec![lx, ly], Boundary::Free2dGrid)
    }

    pub fn dirichlet_square(l: usize) -> Result<Self> {
        Self::new(vec![l, l], Boundary::DirichletPinned)
    }

    pub fn dimension(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn sites(&self) -> usize {
        self.extents.iter().product()
    }

    /// Nearest-neighbour bonds `(x, y)` with `x < y`, in lexicographic order.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self.extents[..] {
            [l] => {
                for x in 0..l - 1 {
                    out.push((x, x + 1));
                }
            }
            [lx, ly] => {
                for i in 0..lx {
                    for j in 0..ly {
                        let x = i * ly + j;
                        if j + 1 < ly {
                            out.push((x, x + 1));
                        }
                        if i + 1 < lx {
                            out.push((x, x + ly));
                        }
                    }
                }
                out.sort_unstable();
            }
            _ => unreachable!(),
        }
        out
    }

    /// Number of lattice neighbours missing at each site (pinned neighbours
    /// for Dirichlet boundaries).
    pub fn missing_neighbours(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.sites()];
        for (x, y) in self.bonds() {
            deg[x] += 1;
            deg[y] += 1;
        }
        deg.iter().map(|d| 2 * self.dimension() - d).collect()
    }

    /// Lattice coordinates (0-based) of site `x`.
    pub fn coords(&self, x: usize) -> Vec<usize> {
        match self.extents[..] {
            [_] => vec![x],
            [_, ly] => vec![x / ly, x % ly],
            _ => unreachable!(),
        }
    }

    /// The same geometry with a different boundary tag.
    pub fn with_boundary(&self, boundary: Boundary) -> Result<Self> {
        Self::new(self.extents.clone(), boundary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_grid_bonds() {
        assert_eq!(SpinLattice::chain(3).unwrap().bonds(), vec![(0, 1), (1, 2)]);
        let g = SpinLattice::grid(2, 2).unwrap();
        assert_eq!(g.bonds(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(g.missing_neighbours(), vec![2, 2, 2, 2]);
        let c = SpinLattice::dirichlet_chain(4).unwrap();
        assert_eq!(c.missing_neighbours(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SpinLattice::chain(1).is_err());
        assert!(SpinLattice::new(vec![3], Boundary::Free2dGrid).is_err());
        assert!(SpinLattice::new(vec![3, 3], Boundary::FreeChain).is_err());
        assert!(SpinLattice::new(vec![2, 2, 2], Boundary::Free2dGrid).is_err());
    }
}
