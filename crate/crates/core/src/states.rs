//! Initial states: Z2 product states, spin coherent states, squeezed states and
//! the analytic Holstein-Primakoff wavefunctions.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::{expm_krylov, expm_taylor, KrylovOptions};
use crate::graph::{BipartiteGraph, Partition};
use crate::hilbert::ConstrainedBasis;
use crate::operators::{Hermiticity, ScaledOperator, SparseOperator, SpinSector};
use crate::scalar::{inner, norm_sqr, Real, C};

/// Which basis a vector or operator is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// Independent-set basis of a graph.
    Constrained,
    /// Full `2^N` computational basis.
    Full,
    /// Joined Dicke ladders of the complete bipartite graph.
    DickeSector,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisTag::Constrained => "constrained",
            BasisTag::Full => "full",
            BasisTag::DickeSector => "dicke_sector",
        })
    }
}

/// Complex amplitudes over a tagged basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    tag: BasisTag,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(tag: BasisTag, amplitudes: Vec<C<T>>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("state amplitudes must be finite".into()));
        }
        Ok(Self { tag, amplitudes })
    }

    /// Unit vector on basis position `index`.
    pub fn basis_state(tag: BasisTag, dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Argument(format!("index {index} outside dimension {dim}")));
        }
        let mut amps = vec![C::new(T::zero(), T::zero()); dim];
        amps[index] = C::new(T::one(), T::zero());
        Ok(Self { tag, amplitudes: amps })
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`; both states must live on the same basis.
    pub fn overlap(&self, other: &Self) -> Result<C<T>> {
        if self.tag != other.tag || self.dim() != other.dim() {
            return Err(Error::Argument("overlap between states on different bases".into()));
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Writes `index,re,im` rows preceded by a header comment with the basis.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# basis_tag={} dim={}", self.tag, self.dim())?;
        writeln!(out, "index,re,im")?;
        for (i, z) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{i},{:e},{:e}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// How the initial state is squeezed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqueezeMode {
    None,
    Global,
    Local,
}

impl fmt::Display for SqueezeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SqueezeMode::None => "none",
            SqueezeMode::Global => "global",
            SqueezeMode::Local => "local",
        })
    }
}

/// Squeezing parameter `xi` together with the generator strength `chi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSpec<T> {
    pub mode: SqueezeMode,
    pub xi: T,
    pub chi: T,
}

impl<T: Real> SqueezeSpec<T> {
    pub fn none() -> Self {
        Self { mode: SqueezeMode::None, xi: T::zero(), chi: T::zero() }
    }

    /// Global squeezing on `n_sites` sites: `xi = chi N / 2`.
    pub fn global(xi: T, n_sites: usize) -> Result<Self> {
        check_xi(xi)?;
        if n_sites == 0 {
            return Err(Error::Argument("global squeezing needs N > 0".into()));
        }
        Ok(Self { mode: SqueezeMode::Global, xi, chi: T::of(2.0) * xi / T::of_usize(n_sites) })
    }

    /// Local squeezing with coordination number `z`: `xi = chi z`.
    pub fn local(xi: T, coordination: usize) -> Result<Self> {
        check_xi(xi)?;
        if coordination == 0 {
            return Err(Error::Argument("local squeezing needs a positive coordination".into()));
        }
        Ok(Self { mode: SqueezeMode::Local, xi, chi: xi / T::of_usize(coordination) })
    }

    /// Builds the spec for `graph` from `xi` using its coordination number
    /// for local mode and its size for global mode.
    pub fn for_graph(mode: SqueezeMode, xi: T, graph: &BipartiteGraph) -> Result<Self> {
        match mode {
            SqueezeMode::None => Ok(Self::none()),
            SqueezeMode::Global => Self::global(xi, graph.n_vertices()),
            SqueezeMode::Local => {
                let z = graph
                    .coordination()
                    .ok_or_else(|| Error::UnsupportedGraph("local squeezing needs a uniform coordination".into()))?;
                Self::local(xi, z)
            }
        }
    }
}

fn check_xi<T: Real>(xi: T) -> Result<()> {
    if !xi.is_finite() {
        return Err(Error::Argument("squeezing parameter must be finite".into()));
    }
    Ok(())
}

/// Spin coherent state `|S, theta, phi>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinCoherent<T> {
    /// `2S`, the number of spin-1/2 constituents.
    pub two_s: usize,
    pub theta: T,
    pub phi: T,
}

impl<T: Real> SpinCoherent<T> {
    /// Dicke coefficients ordered by `S + m = 0..=2S`.
    pub fn coefficients(&self) -> Result<Vec<C<T>>> {
        spin_coherent_dicke(self.two_s, self.theta, self.phi)
    }
}

/// Dicke coefficients `C_m = binom(2S, S+m)^{1/2} cos^{2S}(theta/2)
/// tan^{S+m}(theta/2) e^{-i phi (S+m)}`, indexed by `j = S + m`.
///
/// Evaluated in log space as `cos^{2S-j} sin^j`; the endpoint `theta = pi`
/// is exact.
pub fn spin_coherent_dicke<T: Real>(two_s: usize, theta: T, phi: T) -> Result<Vec<C<T>>> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::Argument("spin coherent angles must be finite".into()));
    }
    let half = theta * T::of(0.5);
    let (s, c) = half.sin_cos();
    let phase = |j: usize| C::new(T::zero(), -phi * T::of_usize(j)).exp();
    if theta == T::PI() {
        let mut out = vec![C::new(T::zero(), T::zero()); two_s + 1];
        out[two_s] = phase(two_s);
        return Ok(out);
    }
    let ln_fact = ln_factorials::<T>(two_s);
    let (lc, ls) = (c.abs().ln(), s.abs().ln());
    let pow_ln = |ln: T, e: usize| if e == 0 { T::zero() } else { ln * T::of_usize(e) };
    Ok((0..=two_s)
        .map(|j| {
            let ln_binom = ln_fact[two_s] - ln_fact[j] - ln_fact[two_s - j];
            let mag = (T::of(0.5) * ln_binom + pow_ln(lc, two_s - j) + pow_ln(ls, j)).exp();
            let mut sign = T::one();
            if c < T::zero() && (two_s - j) % 2 == 1 {
                sign = -sign;
            }
            if s < T::zero() && j % 2 == 1 {
                sign = -sign;
            }
            phase(j) * (sign * mag)
        })
        .collect())
}

fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    out.push(acc);
    for k in 1..=n {
        acc += T::of_usize(k).ln();
        out.push(acc);
    }
    out
}

/// `<phi|S, theta, phi> = cos^{2S}(theta/2)`.
pub fn vacuum_overlap<T: Real>(two_s: usize, theta: T) -> T {
    // cos(theta/2) written so that theta = pi gives an exact zero
    let c = ((T::PI() - theta) * T::of(0.5)).sin();
    if c == T::zero() || two_s == 0 {
        return if two_s == 0 { T::one() } else { T::zero() };
    }
    let mag = (T::of_usize(two_s) * c.abs().ln()).exp();
    if c < T::zero() && two_s % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// Where a Z2 state is built.
#[derive(Clone, Copy, Debug)]
pub enum Z2Target<'a> {
    Basis(&'a ConstrainedBasis),
    Sector(&'a SpinSector),
    /// The full `2^N` space of a graph.
    Full(&'a BipartiteGraph),
}

/// Product state with every site of `active` excited.
pub fn z2_state<T: Real>(target: Z2Target<'_>, active: Partition) -> Result<StateVector<T>> {
    match target {
        Z2Target::Basis(basis) => {
            let config = basis.z2_config(active);
            let index = basis
                .index_of(config as u64)?
                .ok_or_else(|| Error::Contract("Z2 configuration missing from the constrained basis".into()))?;
            StateVector::basis_state(BasisTag::Constrained, basis.dim(), index)
        }
        Z2Target::Sector(sector) => {
            StateVector::basis_state(BasisTag::DickeSector, sector.dim(), sector.index(active, sector.side()))
        }
        Z2Target::Full(graph) => {
            let n = graph.n_vertices();
            if n > crate::operators::FULL_SPACE_SITE_CAP {
                return Err(Error::Resource(format!("full space of {n} sites is too large")));
            }
            let config = graph.vertices_in(active).iter().fold(0usize, |acc, &v| acc | 1 << v);
            StateVector::basis_state(BasisTag::Full, 1 << n, config)
        }
    }
}

/// Exponential-apply method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpMethod {
    TaylorScaled,
    Krylov { dim: usize },
}

impl Default for ExpMethod {
    fn default() -> Self {
        ExpMethod::Krylov { dim: 30 }
    }
}

/// `exp(G)|state>` for an anti-Hermitian generator `G`.
pub fn apply_exp_generator<T: Real>(
    generator: &SparseOperator<T>,
    state: &StateVector<T>,
    method: ExpMethod,
) -> Result<StateVector<T>> {
    if generator.hermiticity() != Hermiticity::AntiHermitian {
        return Err(Error::Contract("exponential-apply expects an anti-Hermitian generator".into()));
    }
    if generator.dim() != state.dim() || generator.basis_tag() != state.tag() {
        return Err(Error::Argument(format!(
            "generator on {} (dim {}) cannot act on a state on {} (dim {})",
            generator.basis_tag(),
            generator.dim(),
            state.tag(),
            state.dim()
        )));
    }
    if generator.is_zero() {
        return Ok(state.clone());
    }
    let out = match method {
        ExpMethod::TaylorScaled => {
            expm_taylor(generator, C::new(T::one(), T::zero()), generator.norm_bound(), state.amplitudes())?
        }
        ExpMethod::Krylov { dim } => {
            // exp(G) = exp(-i A) with A = i G Hermitian
            let a = ScaledOperator { op: generator, factor: C::new(T::zero(), T::one()) };
            let tol = T::of(1e-13).max(T::epsilon() * T::of(10.0));
            expm_krylov(&a, state.amplitudes(), T::one(), KrylovOptions { dim, tol })?
        }
    };
    StateVector::new(state.tag(), out)
}

/// Squeezed momentum-space wavepacket
/// `A(k; xi) = 2^{1/2} pi^{1/4} exp(-k^2 e^{2 xi} / 2 + xi / 2)`.
pub fn squeezed_momentum_amplitude<T: Real>(xi: T, k: T) -> T {
    let two = T::of(2.0);
    two.sqrt() * T::PI().powf(T::of(0.25)) * (-k * k * (two * xi).exp() / two + xi / two).exp()
}

/// Holstein-Primakoff vacuum `pi^{-1/4} exp(-x^2/2)`.
pub fn hp_vacuum_wavefunction<T: Real>(x: T) -> T {
    T::PI().powf(T::of(-0.25)) * (-x * x * T::of(0.5)).exp()
}

/// Momentum profile of the A-ladder part of a sector state.
///
/// The ladder (vacuum plus A states) is expanded in eigenstates of the
/// collective `S^x_A`; eigenvalue `s` maps to `k = s / sqrt(S)` and the
/// returned magnitude is rescaled to the continuum normalisation
/// `(1/2pi) int |A|^2 dk = 1`. Output is sorted by `k`.
pub fn sector_momentum_profile<T: Real>(sector: &SpinSector, state: &StateVector<T>) -> Result<Vec<(T, T)>> {
    if state.tag() != BasisTag::DickeSector || state.dim() != sector.dim() {
        return Err(Error::Contract("momentum profile needs a Dicke-sector state".into()));
    }
    let side = sector.side();
    let n = side + 1;
    let mut sx = vec![T::zero(); n * n];
    for j in 0..side {
        let v = sector.raising_element::<T>(j) * T::of(0.5);
        sx[(j + 1) * n + j] = v;
        sx[j * n + j + 1] = v;
    }
    let (vals, vecs) = T::symmetric_eigen(n, sx);
    let ladder: Vec<C<T>> = (0..n).map(|j| state.amplitudes()[sector.index(Partition::A, j)]).collect();
    let sqrt_s = sector.spin::<T>().sqrt();
    let dk = sqrt_s.recip();
    let scale = (T::of(2.0) * T::PI() / dk).sqrt();
    Ok((0..n)
        .map(|col| {
            let amp = (0..n).fold(C::new(T::zero(), T::zero()), |acc, r| acc + ladder[r] * vecs[r * n + col]);
            (vals[col] / sqrt_s, amp.norm() * scale)
        })
        .collect())
}
