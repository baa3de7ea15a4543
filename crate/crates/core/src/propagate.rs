//! Time evolution and revival observables.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::{expm_krylov, KrylovOptions};
use crate::graph::Partition;
use crate::operators::{build_cbg_sector_hamiltonian, Hermiticity, LinearOperator, SparseOperator, SpinSector};
use crate::scalar::{inner, norm_sqr, Real, C};
use crate::states::{z2_state, BasisTag, StateVector, Z2Target};

/// Largest dimension accepted by the dense engine.
pub const DENSE_MAX_DIM: usize = 4096;

/// Propagation engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    DenseEig,
    Krylov,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::DenseEig => "dense_eig",
            Engine::Krylov => "krylov",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions<'a, T> {
    pub engine: Engine,
    /// Local error bound per Krylov substep.
    pub tol: T,
    pub krylov_dim: usize,
    /// Keep every sampled state.
    pub store_states: bool,
    /// Record `(p_A, p_B, p_vac)` for sector states.
    pub channels: Option<&'a SpinSector>,
}

impl<T: Real> Default for EvolveOptions<'_, T> {
    fn default() -> Self {
        Self { engine: Engine::Krylov, tol: T::of(1e-12), krylov_dim: 30, store_states: false, channels: None }
    }
}

/// Sampled time evolution.
#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub times: Vec<T>,
    pub states: Option<Vec<StateVector<T>>>,
    /// `g(t) = |<psi0|psi(t)>|`.
    pub fidelity: Vec<T>,
    pub channel_pops: Option<Vec<(T, T, T)>>,
    /// `<psi(t)|psi(t)>`.
    pub norms: Vec<T>,
    /// `<psi(t)|H|psi(t)>`.
    pub energies: Vec<T>,
}

/// Uniform grid `0, dt, 2dt, ...` up to `t_max` inclusive (within half a step).
pub fn time_grid<T: Real>(dt: T, t_max: T) -> Result<Vec<T>> {
    if !(dt > T::zero()) || !(t_max >= T::zero()) {
        return Err(Error::Argument("time grid needs dt > 0 and t_max >= 0".into()));
    }
    let n = (t_max / dt + T::of(0.5)).floor().to_usize().unwrap_or(0);
    Ok((0..=n).map(|j| dt * T::of_usize(j)).collect())
}

/// `exp(-iHt)|psi0>` sampled on `times` (nondecreasing, measured from 0).
pub fn evolve<T: Real>(
    h: &SparseOperator<T>,
    psi0: &StateVector<T>,
    times: &[T],
    opts: EvolveOptions<'_, T>,
) -> Result<Trajectory<T>> {
    if h.hermiticity() != Hermiticity::Hermitian {
        return Err(Error::Contract("evolution needs a Hermitian operator".into()));
    }
    if h.dim() != psi0.dim() || h.basis_tag() != psi0.tag() {
        return Err(Error::Argument(format!(
            "operator on {} (dim {}) cannot evolve a state on {} (dim {})",
            h.basis_tag(),
            h.dim(),
            psi0.tag(),
            psi0.dim()
        )));
    }
    if times.windows(2).any(|w| !(w[1] >= w[0])) || times.first().is_some_and(|t| !(*t >= T::zero())) {
        return Err(Error::Argument("times must be nonnegative and nondecreasing".into()));
    }
    if let Some(s) = opts.channels {
        if psi0.tag() != BasisTag::DickeSector || s.dim() != psi0.dim() {
            return Err(Error::Contract("channel populations need a Dicke-sector state".into()));
        }
    }
    let mut traj = Trajectory {
        times: times.to_vec(),
        states: opts.store_states.then(Vec::new),
        fidelity: Vec::with_capacity(times.len()),
        channel_pops: opts.channels.map(|_| Vec::with_capacity(times.len())),
        norms: Vec::with_capacity(times.len()),
        energies: Vec::with_capacity(times.len()),
    };
    let mut hv = vec![C::new(T::zero(), T::zero()); h.dim()];
    let mut record = |traj: &mut Trajectory<T>, amps: Vec<C<T>>| -> Result<()> {
        traj.fidelity.push(inner(psi0.amplitudes(), &amps).norm());
        traj.norms.push(norm_sqr(&amps));
        h.apply(&amps, &mut hv);
        traj.energies.push(inner(&amps, &hv).re);
        let state = StateVector::new(psi0.tag(), amps)?;
        if let (Some(pops), Some(sector)) = (traj.channel_pops.as_mut(), opts.channels) {
            pops.push(channel_populations(sector, &state)?);
        }
        if let Some(states) = traj.states.as_mut() {
            states.push(state);
        }
        Ok(())
    };
    match opts.engine {
        Engine::DenseEig => {
            let n = h.dim();
            if n > DENSE_MAX_DIM {
                return Err(Error::Resource(format!("dense engine limited to dimension {DENSE_MAX_DIM}, got {n}")));
            }
            let (vals, vecs) = T::symmetric_eigen(n, h.to_dense_real()?);
            // coefficients in the eigenbasis
            let mut coef = vec![C::new(T::zero(), T::zero()); n];
            for (r, a) in psi0.amplitudes().iter().enumerate() {
                for (k, c) in coef.iter_mut().enumerate() {
                    *c += a * vecs[r * n + k];
                }
            }
            for &t in times {
                let phased: Vec<C<T>> =
                    coef.iter().zip(&vals).map(|(c, &l)| c * C::new(T::zero(), -l * t).exp()).collect();
                let amps: Vec<C<T>> = (0..n)
                    .map(|r| {
                        let row = &vecs[r * n..(r + 1) * n];
                        phased.iter().zip(row).fold(C::new(T::zero(), T::zero()), |acc, (p, &v)| acc + p * v)
                    })
                    .collect();
                record(&mut traj, amps)?;
            }
        }
        Engine::Krylov => {
            let kopts = KrylovOptions { dim: opts.krylov_dim, tol: opts.tol };
            let mut psi = psi0.amplitudes().to_vec();
            let mut t_now = T::zero();
            for &t in times {
                if t > t_now {
                    psi = expm_krylov(h, &psi, t - t_now, kopts)?;
                    t_now = t;
                }
                record(&mut traj, psi.clone())?;
            }
        }
    }
    Ok(traj)
}

/// `|<psi0|psi(t)>|` from the stored snapshots.
pub fn fidelity_series<T: Real>(traj: &Trajectory<T>, psi0: &StateVector<T>) -> Result<Vec<T>> {
    let states = traj.states.as_ref().ok_or_else(|| Error::Argument("trajectory has no stored snapshots".into()))?;
    states.iter().map(|s| psi0.overlap(s).map(|z| z.norm())).collect()
}

/// `(p_A, p_B, p_vac)` of a sector state.
pub fn channel_populations<T: Real>(sector: &SpinSector, state: &StateVector<T>) -> Result<(T, T, T)> {
    if state.tag() != BasisTag::DickeSector || state.dim() != sector.dim() {
        return Err(Error::Contract("channel populations need a Dicke-sector state".into()));
    }
    let a = state.amplitudes();
    let side = sector.side();
    let pa = norm_sqr(&a[1..=side]);
    let pb = norm_sqr(&a[side + 1..]);
    Ok((pa, pb, a[0].norm_sqr()))
}

/// Location and height of the largest `g` inside `window`, refined by the
/// parabola through the maximum sample and its two neighbours.
pub fn find_first_revival<T: Real>(g: &[T], times: &[T], window: (T, T)) -> Result<(T, T)> {
    if g.len() != times.len() {
        return Err(Error::Argument("fidelity and time arrays differ in length".into()));
    }
    let (lo, hi) = window;
    let best = (0..g.len())
        .filter(|&i| times[i] >= lo && times[i] <= hi)
        .max_by(|&i, &j| g[i].partial_cmp(&g[j]).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or_else(|| Error::Argument(format!("no samples inside the window [{lo}, {hi}]")))?;
    if best == 0 || best + 1 >= g.len() {
        return Ok((times[best], g[best]));
    }
    let (x0, x1, x2) = (times[best - 1], times[best], times[best + 1]);
    let (y0, y1, y2) = (g[best - 1], g[best], g[best + 1]);
    // vertex of the interpolating parabola
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if !(curv < T::zero()) {
        return Ok((x1, y1));
    }
    let tv = ((x0 + x1) * T::of(0.5)) - d01 / (T::of(2.0) * curv);
    let tv = tv.max(x0).min(x2);
    // Newton form p(t) = y0 + d01 (t - x0) + curv (t - x0)(t - x1)
    let value = y0 + d01 * (tv - x0) + curv * (tv - x0) * (tv - x1);
    Ok((tv, value.max(y1)))
}

/// `p_B` at `t = 2pi` after evolving `|Z2^A>` in the sector of `n_sites`.
pub fn numeric_p1<T: Real>(n_sites: usize, engine: Engine, tol: T) -> Result<T> {
    let pops = sector_channel_trace(n_sites, &[T::of(2.0) * T::PI()], engine, tol)?;
    Ok(pops[0].1)
}

/// Largest `p_B` within `2pi +- half_width`, sampled with spacing `step`.
pub fn numeric_p1_window<T: Real>(n_sites: usize, half_width: T, step: T, engine: Engine, tol: T) -> Result<T> {
    let centre = T::of(2.0) * T::PI();
    let grid = time_grid(step, half_width * T::of(2.0))?;
    let times: Vec<T> = grid.iter().map(|&s| centre - half_width + s).collect();
    let pops = sector_channel_trace(n_sites, &times, engine, tol)?;
    Ok(pops.iter().map(|p| p.1).fold(T::neg_infinity(), T::max))
}

fn sector_channel_trace<T: Real>(n_sites: usize, times: &[T], engine: Engine, tol: T) -> Result<Vec<(T, T, T)>> {
    if n_sites < 8 || n_sites % 2 == 1 {
        return Err(Error::Argument(format!("numeric P1 needs an even N >= 8, got {n_sites}")));
    }
    let sector = SpinSector::new(n_sites)?;
    let h = build_cbg_sector_hamiltonian(&sector, T::one())?;
    let psi0 = z2_state(Z2Target::Sector(&sector), Partition::A)?;
    let opts = EvolveOptions { engine, tol, channels: Some(&sector), ..Default::default() };
    let traj = evolve(&h, &psi0, times, opts)?;
    Ok(traj.channel_pops.unwrap())
}

/// Large-N extrapolation of `p_B(N)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct P1Extrapolation {
    pub points: Vec<(usize, f64)>,
    /// Intercept of the fit `p = a + b / sqrt(N)`.
    pub asymptote: f64,
    pub slope: f64,
}

/// Least-squares line in `1/sqrt(N)` through the three largest sizes.
pub fn extrapolate_p1(points: &[(usize, f64)]) -> Result<P1Extrapolation> {
    if points.len() < 3 {
        return Err(Error::Argument("extrapolation needs at least three sizes".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by_key(|p| p.0);
    let fit = &sorted[sorted.len() - 3..];
    let xs: Vec<f64> = fit.iter().map(|p| 1.0 / (p.0 as f64).sqrt()).collect();
    let ys: Vec<f64> = fit.iter().map(|p| p.1).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(P1Extrapolation { points: sorted, asymptote: my - slope * mx, slope })
}

/// `numeric_p1` over several sizes followed by [`extrapolate_p1`].
pub fn numeric_p1_extrapolated(sizes: &[usize], engine: Engine, tol: f64) -> Result<P1Extrapolation> {
    let points =
        sizes.iter().map(|&n| numeric_p1::<f64>(n, engine, tol).map(|p| (n, p))).collect::<Result<Vec<_>>>()?;
    extrapolate_p1(&points)
}

/// Metadata written as comment lines above a trajectory CSV.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryHeader {
    pub lines: Vec<(String, String)>,
}

/// Writes `t,g,p_A,p_B,p_vac`; populations are empty when not recorded.
pub fn write_trajectory_csv<T: Real, W: Write>(
    traj: &Trajectory<T>,
    header: &TrajectoryHeader,
    mut out: W,
) -> Result<()> {
    for (k, v) in &header.lines {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "t,g,p_A,p_B,p_vac")?;
    for (i, (&t, &g)) in traj.times.iter().zip(&traj.fidelity).enumerate() {
        match traj.channel_pops.as_ref().map(|p| p[i]) {
            Some((a, b, v)) => writeln!(out, "{t:.6},{g:.12e},{a:.12e},{b:.12e},{v:.12e}")?,
            None => writeln!(out, "{t:.6},{g:.12e},,,")?,
        }
    }
    Ok(())
}
