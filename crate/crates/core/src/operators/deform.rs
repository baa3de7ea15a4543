use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GraphKind};
use crate::hilbert::ConstrainedBasis;
use crate::scalar::Real;

use super::pxp::pxp_weighted;
use super::SparseOperator;

/// First-order deformed ring Hamiltonian
/// `H - (omega chi / 2) sum_i P sigma^x_i P sigma^z_{i+2}`.
///
/// With `sigma^z|1> = +|1>` each flip of site `i` carries the weight
/// `(omega/2)(1 - chi z_{i+2})`. The sign is the one generated by conjugating
/// `H` with the local squeezer `exp(G_chi)` for `chi > 0`, i.e. the direction
/// in which squeezing enhances revivals.
pub fn build_deformed_pxp_first_order<T: Real>(
    graph: &BipartiteGraph,
    basis: &ConstrainedBasis,
    omega: T,
    chi: T,
) -> Result<SparseOperator<T>> {
    let GraphKind::Ring { n } = graph.kind() else {
        return Err(Error::UnsupportedGraph(format!(
            "first-order deformation is defined on rings, got {}",
            graph.kind()
        )));
    };
    let half_omega = omega * T::of(0.5);
    pxp_weighted(graph, basis, |config, site| {
        let z = if config >> ((site + 2) % n) & 1 == 1 { T::one() } else { -T::one() };
        half_omega * (T::one() - chi * z)
    })
}
