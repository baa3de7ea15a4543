use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::hilbert::{neighbor_masks, ConstrainedBasis};
use crate::scalar::{Real, C};
use crate::states::BasisTag;

use super::{Hermiticity, SparseOperator};

/// Largest site count for full `2^N` space operators.
pub const FULL_SPACE_SITE_CAP: usize = 28;

/// PXP Hamiltonian `(omega/2) sum_i P sigma^x_i P` in the constrained basis.
///
/// Every pair of basis configurations differing by a single flip is coupled
/// with `omega/2`; membership in the basis enforces the projectors.
pub fn build_pxp<T: Real>(graph: &BipartiteGraph, basis: &ConstrainedBasis, omega: T) -> Result<SparseOperator<T>> {
    pxp_weighted(graph, basis, |_, _| omega * T::of(0.5))
}

/// PXP Hamiltonian with a per-flip weight `w(config, site)` evaluated on the
/// source configuration.
pub(super) fn pxp_weighted<T: Real>(
    graph: &BipartiteGraph,
    basis: &ConstrainedBasis,
    weight: impl Fn(u32, usize) -> T,
) -> Result<SparseOperator<T>> {
    if basis.graph() != graph {
        return Err(Error::Argument("basis was enumerated from a different graph".into()));
    }
    let masks = basis.neighbor_masks();
    let mut triplets = Vec::with_capacity(basis.dim() * 2);
    for (col, &c) in basis.configs().iter().enumerate() {
        for (s, &mask) in masks.iter().enumerate() {
            if c & mask != 0 {
                continue;
            }
            let flipped = c ^ (1 << s);
            let row = basis
                .index_of(flipped as u64)?
                .expect("single flips of unblockaded sites stay in the constrained space");
            triplets.push((row, col, C::new(weight(c, s), T::zero())));
        }
    }
    SparseOperator::from_triplets(basis.dim(), triplets, Hermiticity::Hermitian, BasisTag::Constrained)
}

/// Matrix-free PXP Hamiltonian on the full `2^N` space; configurations
/// outside the constrained space are annihilated.
pub fn build_full_pxp<T: Real>(graph: &BipartiteGraph, omega: T) -> Result<SparseOperator<T>> {
    let n = graph.n_vertices();
    if n > FULL_SPACE_SITE_CAP {
        return Err(Error::Resource(format!("full-space operators limited to {FULL_SPACE_SITE_CAP} sites, got {n}")));
    }
    Ok(SparseOperator::full_pxp(n, neighbor_masks(graph), omega * T::of(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Partition::*;
    use crate::operators::LinearOperator;

    #[test]
    fn single_edge_action() {
        let g = BipartiteGraph::custom(vec![A, B], vec![(0, 1)]).unwrap();
        let b = ConstrainedBasis::new(&g).unwrap();
        let h = build_pxp(&g, &b, 1.0).unwrap();
        let z = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        let mut y = vec![z; 3];
        // basis order: 00, 01 (site 0 up), 10 (site 1 up)
        h.apply(&[one, z, z], &mut y);
        assert_eq!(y, vec![z, C::new(0.5, 0.0), C::new(0.5, 0.0)]);
        h.apply(&[z, one, z], &mut y);
        assert_eq!(y, vec![C::new(0.5, 0.0), z, z]);
        assert_eq!(h.hermiticity_residual().unwrap(), 0.0);
    }

    #[test]
    fn mismatched_basis_rejected() {
        let g4 = BipartiteGraph::ring(4).unwrap();
        let g6 = BipartiteGraph::ring(6).unwrap();
        let b6 = ConstrainedBasis::new(&g6).unwrap();
        assert!(matches!(build_pxp(&g4, &b6, 1.0_f64), Err(Error::Argument(_))));
    }

    #[test]
    fn omega_scales_entries() {
        let g = BipartiteGraph::ring(6).unwrap();
        let b = ConstrainedBasis::new(&g).unwrap();
        let h = build_pxp(&g, &b, 3.0_f64).unwrap();
        assert!(h.entries().unwrap().iter().all(|&(_, _, v)| v == C::new(1.5, 0.0)));
    }

    #[test]
    fn full_space_matches_constrained_on_allowed_configs() {
        let g = BipartiteGraph::ring(6).unwrap();
        let b = ConstrainedBasis::new(&g).unwrap();
        let h = build_pxp(&g, &b, 1.0_f64).unwrap();
        let hf = build_full_pxp(&g, 1.0_f64).unwrap();
        assert!(hf.is_matrix_free());
        let mut full = std::collections::HashMap::new();
        for (r, c, v) in hf.entries().unwrap() {
            full.insert((r, c), v);
        }
        let restricted: Vec<_> = h
            .entries()
            .unwrap()
            .into_iter()
            .map(|(r, c, v)| ((b.config(r) as usize, b.config(c) as usize), v))
            .collect();
        assert_eq!(restricted.len(), full.len());
        for (k, v) in restricted {
            assert_eq!(full[&k], v);
        }
    }
}
