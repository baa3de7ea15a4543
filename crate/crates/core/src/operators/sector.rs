use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::scalar::{Real, C};
use crate::states::BasisTag;

use super::{Hermiticity, SparseOperator};

/// Permutation-symmetric sector of the complete bipartite graph.
///
/// Two Dicke ladders (one per partition, `N/2` spins each, collective spin
/// `S = N/4`) joined at the shared vacuum. Index 0 is the vacuum, indices
/// `1..=N/2` hold the A ladder with `n = 1..=N/2` excitations (B empty) and
/// indices `N/2+1..=N` the mirror ladder for B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSector {
    n_sites: usize,
}

impl SpinSector {
    pub fn new(n_sites: usize) -> Result<Self> {
        if !n_sites.is_multiple_of(2) || n_sites < 2 {
            return Err(Error::Argument(format!("sector needs an even number of sites >= 2, got {n_sites}")));
        }
        Ok(Self { n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Spins per partition, `2S`.
    pub fn side(&self) -> usize {
        self.n_sites / 2
    }

    pub fn spin<T: Real>(&self) -> T {
        T::of_usize(self.n_sites) / T::of(4.0)
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    pub const VACUUM: usize = 0;

    /// Sector index of the ladder state with `n` excitations on `side`.
    pub fn index(&self, side: Partition, n: usize) -> usize {
        assert!(n <= self.side(), "ladder has {} rungs", self.side());
        match (side, n) {
            (_, 0) => Self::VACUUM,
            (Partition::A, n) => n,
            (Partition::B, n) => self.side() + n,
        }
    }

    /// `(side, excitations)` of a sector index; the vacuum reports `None`.
    pub fn locate(&self, index: usize) -> Option<(Partition, usize)> {
        match index {
            0 => None,
            i if i <= self.side() => Some((Partition::A, i)),
            i => Some((Partition::B, i - self.side())),
        }
    }

    /// `<n+1| S^+ |n>` for a ladder of `2S = side` spins.
    pub fn raising_element<T: Real>(&self, n: usize) -> T {
        let side = self.side();
        debug_assert!(n < side);
        (T::of_usize((side - n) * (n + 1))).sqrt()
    }
}

/// Collective-spin Hamiltonian `omega (S^x_A |phi><phi|_B + |phi><phi|_A S^x_B)`
/// in the sector basis.
pub fn build_cbg_sector_hamiltonian<T: Real>(sector: &SpinSector, omega: T) -> Result<SparseOperator<T>> {
    if sector.n_sites() < 4 {
        return Err(Error::Argument("sector Hamiltonian needs N >= 4".into()));
    }
    let half = T::of(0.5);
    let mut triplets = Vec::with_capacity(4 * sector.side());
    for side in [Partition::A, Partition::B] {
        for n in 0..sector.side() {
            let v = C::new(omega * half * sector.raising_element::<T>(n), T::zero());
            let (lo, hi) = (sector.index(side, n), sector.index(side, n + 1));
            triplets.push((hi, lo, v));
            triplets.push((lo, hi, v));
        }
    }
    SparseOperator::from_triplets(sector.dim(), triplets, Hermiticity::Hermitian, BasisTag::DickeSector)
}
