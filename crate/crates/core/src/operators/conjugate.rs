use crate::error::{Error, Result};
use crate::expm::{expm_krylov, KrylovOptions};
use crate::hilbert::ConstrainedBasis;
use crate::scalar::{Real, C};
use crate::states::{apply_exp_generator, BasisTag, ExpMethod, StateVector};

use super::{Hermiticity, SparseOperator};

/// `U^dag exp(-iHt) U |state>` with `U = exp(generator)`, without forming
/// the conjugated Hamiltonian.
///
/// `state` and `generator` live on the same basis. When `H` acts on a
/// constrained basis and the state on the full space, `embed` names that
/// basis: the part of `U|state>` inside it evolves, the rest is frozen.
pub fn apply_conjugated_hamiltonian<T: Real>(
    h: &SparseOperator<T>,
    generator: &SparseOperator<T>,
    state: &StateVector<T>,
    t: T,
    embed: Option<&ConstrainedBasis>,
    opts: KrylovOptions<T>,
) -> Result<StateVector<T>> {
    let squeezed = apply_exp_generator(generator, state, ExpMethod::default())?;
    let evolved = evolve_maybe_embedded(h, &squeezed, t, embed, opts)?;
    apply_exp_generator(&generator.scaled(-T::one()), &evolved, ExpMethod::default())
}

/// `|<psi0| U^dag exp(-iHt) U |psi0>|` on a time grid. The squeezed state is
/// propagated incrementally and unsqueezed at every sample.
pub fn conjugated_fidelity_trace<T: Real>(
    h: &SparseOperator<T>,
    generator: &SparseOperator<T>,
    psi0: &StateVector<T>,
    times: &[T],
    embed: Option<&ConstrainedBasis>,
    opts: KrylovOptions<T>,
) -> Result<Vec<T>> {
    let unsqueeze = generator.scaled(-T::one());
    let mut current = apply_exp_generator(generator, psi0, ExpMethod::default())?;
    let mut t_now = T::zero();
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        current = evolve_maybe_embedded(h, &current, t - t_now, embed, opts)?;
        t_now = t;
        let back = apply_exp_generator(&unsqueeze, &current, ExpMethod::default())?;
        out.push(psi0.overlap(&back)?.norm());
    }
    Ok(out)
}

fn evolve_maybe_embedded<T: Real>(
    h: &SparseOperator<T>,
    state: &StateVector<T>,
    t: T,
    embed: Option<&ConstrainedBasis>,
    opts: KrylovOptions<T>,
) -> Result<StateVector<T>> {
    if h.hermiticity() != Hermiticity::Hermitian {
        return Err(Error::Contract("time evolution needs a Hermitian operator".into()));
    }
    if t == T::zero() {
        return Ok(state.clone());
    }
    if h.basis_tag() == state.tag() && h.dim() == state.dim() {
        let out = expm_krylov(h, state.amplitudes(), t, opts)?;
        return StateVector::new(state.tag(), out);
    }
    let Some(basis) = embed else {
        return Err(Error::Argument(format!(
            "Hamiltonian on {} (dim {}) cannot evolve a state on {} (dim {})",
            h.basis_tag(),
            h.dim(),
            state.tag(),
            state.dim()
        )));
    };
    if h.basis_tag() != BasisTag::Constrained
        || h.dim() != basis.dim()
        || state.tag() != BasisTag::Full
        || state.dim() != 1usize << basis.n_sites()
    {
        return Err(Error::Argument("embedding does not match the operator and state".into()));
    }
    let full = state.amplitudes();
    let inside: Vec<C<T>> = basis.configs().iter().map(|&c| full[c as usize]).collect();
    let evolved = expm_krylov(h, &inside, t, opts)?;
    let mut out = full.to_vec();
    for (&c, &v) in basis.configs().iter().zip(&evolved) {
        out[c as usize] = v;
    }
    StateVector::new(BasisTag::Full, out)
}
