//! End-to-end runs: prepare a (squeezed) Z2 state, evolve, read off revivals.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GraphKind, Partition};
use crate::hilbert::ConstrainedBasis;
use crate::operators::{
    build_cbg_sector_hamiltonian, build_full_pxp, build_global_squeeze_generator, build_local_squeeze_generator,
    build_pxp, SpinSector, SqueezeTarget,
};
use crate::propagate::{evolve, find_first_revival, EvolveOptions, Trajectory};
use crate::scalar::Real;
use crate::states::{apply_exp_generator, z2_state, ExpMethod, SqueezeMode, SqueezeSpec, StateVector, Z2Target};

/// Outcome of a squeezed-state evolution.
#[derive(Clone, Debug)]
pub struct RunOutcome<T: Real> {
    pub trajectory: Trajectory<T>,
    pub initial: StateVector<T>,
    /// Probability removed when projecting onto the constrained space.
    pub discarded_weight: Option<T>,
}

/// Evolves the squeezed `|Z2^A>` in the spin sector of the complete bipartite
/// graph on `n_sites` sites. Channel populations are always recorded.
pub fn cbg_sector_run<T: Real>(
    n_sites: usize,
    spec: SqueezeSpec<T>,
    omega: T,
    times: &[T],
    opts: EvolveOptions<'_, T>,
) -> Result<RunOutcome<T>> {
    let sector = SpinSector::new(n_sites)?;
    let h = build_cbg_sector_hamiltonian(&sector, omega)?;
    let z2 = z2_state(Z2Target::Sector(&sector), Partition::A)?;
    let initial = match spec.mode {
        SqueezeMode::None => z2,
        SqueezeMode::Global => {
            let g = build_global_squeeze_generator(SqueezeTarget::Sector(&sector), spec.chi)?;
            apply_exp_generator(&g, &z2, ExpMethod::default())?
        }
        SqueezeMode::Local => {
            return Err(Error::UnsupportedGraph(
                "local squeezing is not defined on the complete bipartite graph; use global".into(),
            ))
        }
    };
    let trajectory = evolve(&h, &initial, times, EvolveOptions { channels: Some(&sector), ..opts })?;
    Ok(RunOutcome { trajectory, initial, discarded_weight: None })
}

/// Evolves the squeezed `|Z2^A>` on a lattice.
///
/// Squeezing acts on the full `2^N` space. With `project` the squeezed state
/// is restricted to the constrained space and renormalised before evolution;
/// otherwise it evolves in the full space, where configurations outside the
/// constrained space are frozen.
pub fn lattice_run<T: Real>(
    graph: &BipartiteGraph,
    spec: SqueezeSpec<T>,
    project: bool,
    omega: T,
    times: &[T],
    opts: EvolveOptions<'_, T>,
) -> Result<RunOutcome<T>> {
    let generator = match spec.mode {
        SqueezeMode::None => None,
        SqueezeMode::Global => Some(build_global_squeeze_generator(SqueezeTarget::Lattice(graph), spec.chi)?),
        SqueezeMode::Local => Some(build_local_squeeze_generator(graph, spec.chi)?),
    };
    let Some(generator) = generator else {
        let basis = ConstrainedBasis::new(graph)?;
        let h = build_pxp(graph, &basis, omega)?;
        let initial = z2_state(Z2Target::Basis(&basis), Partition::A)?;
        let trajectory = evolve(&h, &initial, times, opts)?;
        return Ok(RunOutcome { trajectory, initial, discarded_weight: project.then(T::zero) });
    };
    let full = z2_state(Z2Target::Full(graph), Partition::A)?;
    let squeezed = apply_exp_generator(&generator, &full, ExpMethod::default())?;
    if project {
        let basis = ConstrainedBasis::new(graph)?;
        let (initial, discarded) = basis.project(&squeezed)?;
        let h = build_pxp(graph, &basis, omega)?;
        let trajectory = evolve(&h, &initial, times, opts)?;
        Ok(RunOutcome { trajectory, initial, discarded_weight: Some(discarded) })
    } else {
        let h = build_full_pxp(graph, omega)?;
        let trajectory = evolve(&h, &squeezed, times, opts)?;
        Ok(RunOutcome { trajectory, initial: squeezed, discarded_weight: None })
    }
}

/// Dispatches to the sector run for complete bipartite graphs and to the
/// lattice run otherwise.
pub fn run_graph<T: Real>(
    graph: &BipartiteGraph,
    spec: SqueezeSpec<T>,
    project: bool,
    omega: T,
    times: &[T],
    opts: EvolveOptions<'_, T>,
) -> Result<RunOutcome<T>> {
    match graph.kind() {
        GraphKind::CompleteBipartite { .. } => cbg_sector_run(graph.n_vertices(), spec, omega, times, opts),
        _ => lattice_run(graph, spec, project, omega, times, opts),
    }
}

/// Height and position of the largest revival in `window`.
pub fn revival<T: Real>(outcome: &RunOutcome<T>, window: (T, T)) -> Result<(T, T)> {
    find_first_revival(&outcome.trajectory.fidelity, &outcome.trajectory.times, window)
}
