use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GraphKind, Partition};
use crate::hilbert::Config;
use crate::scalar::{Real, C};
use crate::states::BasisTag;

use super::pxp::FULL_SPACE_SITE_CAP;
use super::{Hermiticity, SparseOperator, SpinSector};

/// Where a global squeezing generator acts.
#[derive(Clone, Copy, Debug)]
pub enum SqueezeTarget<'a> {
    /// The CBG sector; the generator acts on the A ladder and the shared vacuum.
    Sector(&'a SpinSector),
    /// The full `2^N` space of a lattice; collective spin of partition A.
    Lattice(&'a BipartiteGraph),
}

/// Generator `(chi/2)((S^+)^2 - (S^-)^2)` of global squeezing on partition A.
///
/// In the sector the generator is the exact restriction to states supported on
/// the A ladder (including the vacuum); B-ladder rows are left zero since
/// squeezing A there leaves the sector.
pub fn build_global_squeeze_generator<T: Real>(target: SqueezeTarget<'_>, chi: T) -> Result<SparseOperator<T>> {
    if !chi.is_finite() {
        return Err(Error::Argument("squeezing strength must be finite".into()));
    }
    match target {
        SqueezeTarget::Sector(sector) => {
            let half_chi = chi * T::of(0.5);
            let mut triplets = Vec::new();
            for n in 0..sector.side().saturating_sub(1) {
                let amp = sector.raising_element::<T>(n) * sector.raising_element::<T>(n + 1);
                let (lo, hi) = (sector.index(Partition::A, n), sector.index(Partition::A, n + 2));
                triplets.push((hi, lo, C::new(half_chi * amp, T::zero())));
                triplets.push((lo, hi, C::new(-half_chi * amp, T::zero())));
            }
            SparseOperator::from_triplets(sector.dim(), triplets, Hermiticity::AntiHermitian, BasisTag::DickeSector)
        }
        SqueezeTarget::Lattice(graph) => {
            check_full_space(graph)?;
            // (S^+)^2 = 2 sum_{i<j} s+_i s+_j over A
            let a = graph.vertices_in(Partition::A);
            let mut pairs = Vec::with_capacity(a.len() * a.len() / 2);
            for (x, &i) in a.iter().enumerate() {
                for &j in &a[x + 1..] {
                    pairs.push(((1 << i) | (1 << j), chi));
                }
            }
            Ok(SparseOperator::pair_squeeze(graph.n_vertices(), pairs))
        }
    }
}

/// Generator `(chi/2) sum_{i in B} ((S_i^+)^2 - (S_i^-)^2)` of local squeezing,
/// with `S_i^± = (1/2) sum_{j ~ i} sigma_j^±` over the neighbours of `i`.
///
/// Expanded into pair terms `(chi/4)(s+_j s+_l - s-_j s-_l)` for every
/// unordered neighbour pair `j < l` of each B site, accumulated when a pair is
/// shared by several B sites. Acts on the full `2^N` space.
pub fn build_local_squeeze_generator<T: Real>(graph: &BipartiteGraph, chi: T) -> Result<SparseOperator<T>> {
    if let GraphKind::CompleteBipartite { .. } = graph.kind() {
        return Err(Error::UnsupportedGraph(
            "local squeezing is defined for lattices; on the complete bipartite graph use the \
             global squeeze generator"
                .into(),
        ));
    }
    if !chi.is_finite() {
        return Err(Error::Argument("squeezing strength must be finite".into()));
    }
    check_full_space(graph)?;
    let quarter_chi = chi * T::of(0.25);
    let nbrs = graph.neighbors();
    let mut acc: BTreeMap<Config, T> = BTreeMap::new();
    for i in graph.vertices_in(Partition::B) {
        let around = &nbrs[i];
        for (x, &j) in around.iter().enumerate() {
            for &l in &around[x + 1..] {
                *acc.entry((1 << j) | (1 << l)).or_insert_with(T::zero) += quarter_chi;
            }
        }
    }
    Ok(SparseOperator::pair_squeeze(graph.n_vertices(), acc.into_iter().collect()))
}

fn check_full_space(graph: &BipartiteGraph) -> Result<()> {
    let n = graph.n_vertices();
    if n > FULL_SPACE_SITE_CAP {
        return Err(Error::Resource(format!("full-space operators limited to {FULL_SPACE_SITE_CAP} sites, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Hermiticity;

    #[test]
    fn zero_chi_is_zero_operator() {
        let s = SpinSector::new(8).unwrap();
        assert!(build_global_squeeze_generator(SqueezeTarget::Sector(&s), 0.0_f64).unwrap().is_zero());
        let g = BipartiteGraph::ring(8).unwrap();
        assert!(build_local_squeeze_generator(&g, 0.0_f64).unwrap().is_zero());
        assert!(build_global_squeeze_generator(SqueezeTarget::Lattice(&g), 0.0_f64).unwrap().is_zero());
    }

    #[test]
    fn generators_are_anti_hermitian() {
        let s = SpinSector::new(12).unwrap();
        let g1 = build_global_squeeze_generator(SqueezeTarget::Sector(&s), 0.3_f64).unwrap();
        assert_eq!(g1.hermiticity(), Hermiticity::AntiHermitian);
        assert_eq!(g1.hermiticity_residual().unwrap(), 0.0);
        let ring = BipartiteGraph::ring(8).unwrap();
        let g2 = build_local_squeeze_generator(&ring, 0.3_f64).unwrap();
        assert_eq!(g2.hermiticity_residual().unwrap(), 0.0);
        let torus = BipartiteGraph::torus(4, 4).unwrap();
        let g3 = build_local_squeeze_generator(&torus, 0.3_f64).unwrap();
        assert!(g3.is_matrix_free());
        let g4 = build_global_squeeze_generator(SqueezeTarget::Lattice(&ring), 0.3_f64).unwrap();
        assert_eq!(g4.hermiticity_residual().unwrap(), 0.0);
    }

    #[test]
    fn ring_local_terms_are_next_nearest_pairs() {
        let chi = 0.4_f64;
        let g = BipartiteGraph::ring(8).unwrap();
        let gen = build_local_squeeze_generator(&g, chi).unwrap();
        // vacuum couples only to configurations with one pair (i-1, i+1), i odd
        let e = gen.entries().unwrap();
        let from_vacuum: Vec<_> = e.iter().filter(|&&(_, c, _)| c == 0).collect();
        assert_eq!(from_vacuum.len(), 4);
        for &&(r, _, v) in &from_vacuum {
            assert_eq!(r.count_ones(), 2);
            let lo = r.trailing_zeros() as usize;
            let hi = (usize::BITS - 1 - r.leading_zeros()) as usize;
            assert_eq!(lo % 2, 0, "pairs live on partition A");
            assert!(hi - lo == 2 || (lo, hi) == (0, 6));
            assert!((v.re - chi / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cbg_local_rejected() {
        let g = BipartiteGraph::complete_bipartite(3).unwrap();
        assert!(matches!(build_local_squeeze_generator(&g, 0.1_f64), Err(Error::UnsupportedGraph(_))));
    }

    #[test]
    fn sector_elements() {
        // side 2: only the vacuum <-> n=2 element, r(0) r(1) = sqrt(2) sqrt(2) = 2
        let s = SpinSector::new(4).unwrap();
        let g = build_global_squeeze_generator(SqueezeTarget::Sector(&s), 1.0_f64).unwrap();
        let e = g.entries().unwrap();
        assert_eq!(e.iter().map(|&(r, c, _)| (r, c)).collect::<Vec<_>>(), vec![(0, 2), (2, 0)]);
        assert!((e[0].2 + 1.0).norm() < 1e-15 && (e[1].2 - 1.0).norm() < 1e-15);
    }
}
