//! Chiral two-channel scattering off the vacuum of the complete bipartite graph.
//!
//! The closed forms used here:
//!
//! * `G(k) = sqrt(2) pi^{1/4} exp(-k^2/2)`, `H(k) = i k G(k)`;
//! * `F(k) = 1 - 2k D(k) + i k sqrt(pi) exp(-k^2)` with `D` the Dawson
//!   integral, so that `1 - F = k q(k)` with `q = 2D - i sqrt(pi) exp(-k^2)`.
//!
//! Writing `G H / (1 - F^2) = i G^2 / (q (1 + F))` removes the removable
//! singularity at `k = 0` exactly, so the transmission amplitudes need no
//! special branch near zero energy.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::scalar::{Real, C};
use crate::special::{dawson, erf_complex};
use crate::states::{hp_vacuum_wavefunction, squeezed_momentum_amplitude};

/// Which algebraic form of the transmission amplitudes is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    /// `t0 = 1 + G F H / (1 - F^2)`, `t1 = -G H / (1 - F^2)`.
    Appendix,
    /// `t0 = (1 + G F H) / (1 - F^2)`, `t1 = G H / (1 - F^2)`.
    MainText,
}

impl fmt::Display for FormulaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaVariant::Appendix => "appendix",
            FormulaVariant::MainText => "main_text",
        })
    }
}

/// Largest unitarity residual tolerated by [`ScatterModel::transmission`].
pub const UNITARITY_GUARD: f64 = 1e-6;

/// Momenta at which the formula variants are checked against the ODE oracle.
pub const PROBE_MOMENTA: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 4.0];

pub fn integral_g<T: Real>(k: T) -> T {
    T::of(2.0).sqrt() * T::PI().powf(T::of(0.25)) * (-k * k * T::of(0.5)).exp()
}

/// `H(k) = lim_{x -> inf} H(k, x) = i k G(k)`.
pub fn integral_h<T: Real>(k: T) -> C<T> {
    C::new(T::zero(), k * integral_g(k))
}

/// `H(k, x) = int_{-inf}^x phi'(z) e^{-ikz} dz` through the complex error
/// function.
pub fn integral_h_at<T: Real>(k: T, x: T) -> Result<C<T>> {
    if x.abs() > T::of(8.0) || k.abs() > T::of(8.0) {
        return Err(Error::Range("H(k, x) is evaluated for |k|, |x| <= 8".into()));
    }
    let sqrt2 = T::of(2.0).sqrt();
    let phase = C::new(T::zero(), -k * x).exp();
    let erf = erf_complex(C::new(x, k) / sqrt2)?;
    let pref = T::PI().powf(T::of(0.25)) / sqrt2 * (-k * k * T::of(0.5)).exp();
    Ok(phase * hp_vacuum_wavefunction(x) + C::new(T::zero(), k) * (erf + C::new(T::one(), T::zero())) * pref)
}

/// `q(k) = (1 - F(k)) / k`.
fn q_factor<T: Real>(k: T) -> C<T> {
    C::new(T::of(2.0) * dawson(k), -T::PI().sqrt() * (-k * k).exp())
}

/// `F(k)` in closed form.
pub fn integral_f<T: Real>(k: T) -> C<T> {
    C::new(T::one(), T::zero()) - q_factor(k) * k
}

/// The Hermite-series representation of `F(k)`:
/// `1 + i k sqrt(pi) e^{-k^2} - 2k e^{-k^2/2} D(k/sqrt2)
///  - 2ik e^{-k^2/2} sum_{n>=1} H_{n-1}(ik/sqrt2) H_n(k/sqrt2) / ((2i)^n n!)`.
///
/// The series is summed until three consecutive terms fall below `tol`, with a cap of 300
/// terms. For `k != 0` its terms decay only algebraically, so the cap is
/// reached and a convergence error carries the partial sum.
pub fn integral_f_series<T: Real>(k: T, tol: T) -> Result<C<T>> {
    const CAP: usize = 300;
    if !(tol > T::zero()) {
        return Err(Error::Argument("series tolerance must be positive".into()));
    }
    let sqrt2 = T::of(2.0).sqrt();
    let a = C::new(T::zero(), k / sqrt2);
    let b = C::new(k / sqrt2, T::zero());
    // normalised Hermite values h_n(z) = H_n(z) / sqrt(2^n n!)
    let step = |n: usize, z: C<T>, cur: C<T>, prev: C<T>| {
        let nf = T::of_usize(n);
        z * cur * (T::of(2.0) / (nf + T::one())).sqrt() - prev * (nf / (nf + T::one())).sqrt()
    };
    let one = C::new(T::one(), T::zero());
    let (mut ha_prev, mut ha) = (C::new(T::zero(), T::zero()), one); // h_{n-1}(a) at n = 1
    let (mut hb_prev, mut hb) = (one, b * sqrt2); // h_0(b), h_1(b)
    let mut sum = C::new(T::zero(), T::zero());
    let mut last = T::zero();
    let mut converged = false;
    // consecutive small terms; a single one can be an isolated Hermite zero
    let mut small = 0;
    let mut phase = C::new(T::zero(), -T::one()); // i^{-n}
    for n in 1..=CAP {
        // H_{n-1}(a) H_n(b) / ((2i)^n n!) = h_{n-1}(a) h_n(b) i^{-n} / sqrt(2n)
        let term = ha * hb * phase / (T::of(2.0) * T::of_usize(n)).sqrt();
        sum += term;
        last = term.norm();
        small = if last < tol { small + 1 } else { 0 };
        if small == 3 {
            converged = true;
            break;
        }
        let ha_next = step(n - 1, a, ha, ha_prev);
        ha_prev = ha;
        ha = ha_next;
        let hb_next = step(n, b, hb, hb_prev);
        hb_prev = hb;
        hb = hb_next;
        phase *= C::new(T::zero(), -T::one());
    }
    let e = (-k * k * T::of(0.5)).exp();
    let value = C::new(T::one() - T::of(2.0) * k * e * dawson(k / sqrt2), k * T::PI().sqrt() * (-k * k).exp())
        - C::new(T::zero(), T::of(2.0) * k * e) * sum;
    if !converged {
        return Err(Error::Convergence {
            terms: CAP,
            last_term: last.to_f64().unwrap_or(f64::NAN),
            partial_re: value.re.to_f64().unwrap_or(f64::NAN),
            partial_im: value.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(value)
}

/// `(t0, t1)` from the chosen formula variant, without guards.
pub fn transmission_variant<T: Real>(k: T, variant: FormulaVariant) -> (C<T>, C<T>) {
    let g = integral_g(k);
    let f = integral_f(k);
    let one = C::new(T::one(), T::zero());
    // G H / (1 - F^2), regular at k = 0
    let ratio = C::new(T::zero(), g * g) / (q_factor(k) * (one + f));
    match variant {
        FormulaVariant::Appendix => {
            let t1 = -ratio;
            (one - f * t1, t1)
        }
        FormulaVariant::MainText => {
            let h = integral_h(k);
            ((one + f * h * g) / (one - f * f), ratio)
        }
    }
}

/// `| |t0|^2 + |t1|^2 - 1 |`; infinite for non-finite amplitudes.
pub fn unitarity_residual<T: Real>(t0: C<T>, t1: C<T>) -> T {
    let r = (t0.norm_sqr() + t1.norm_sqr() - T::one()).abs();
    if r.is_finite() {
        r
    } else {
        T::infinity()
    }
}

/// Discretisation of the ODE oracle.
#[derive(Clone, Copy, Debug)]
pub struct OdeGrid<T> {
    pub x_min: T,
    pub x_max: T,
    pub step: T,
}

impl<T: Real> Default for OdeGrid<T> {
    fn default() -> Self {
        Self { x_min: T::of(-8.0), x_max: T::of(8.0), step: T::of(1e-3) }
    }
}

/// Transmission amplitudes from direct integration of the coupled channel
/// equations `A' = ikA - <phi|B> phi'`, `B' = ikB - <phi|A> phi'`.
///
/// The response `I(x) = int_{x0}^x e^{ik(x-z)} phi'(z) dz` is integrated by
/// RK4; the overlaps `<phi|A>`, `<phi|B>` then follow from a 2x2 linear
/// system built from Simpson quadratures, and `t0`, `t1` are read off at
/// `x_max`.
pub fn ode_oracle_transmission<T: Real>(k: T, grid: OdeGrid<T>) -> Result<(C<T>, C<T>)> {
    let span = grid.x_max - grid.x_min;
    if !(grid.step > T::zero()) || !(span > T::zero()) {
        return Err(Error::Argument("ODE grid needs x_max > x_min and step > 0".into()));
    }
    let mut n = (span / grid.step).ceil().to_usize().unwrap_or(0).max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = span / T::of_usize(n);
    let ik = C::new(T::zero(), k);
    let dphi = |x: T| -x * hp_vacuum_wavefunction(x);
    let rhs = |x: T, y: C<T>| ik * y + C::new(dphi(x), T::zero());
    let mut response = Vec::with_capacity(n + 1);
    let mut y = C::new(T::zero(), T::zero());
    response.push(y);
    let half = h * T::of(0.5);
    for j in 0..n {
        let x = grid.x_min + h * T::of_usize(j);
        let k1 = rhs(x, y);
        let k2 = rhs(x + half, y + k1 * half);
        let k3 = rhs(x + half, y + k2 * half);
        let k4 = rhs(x + h, y + k3 * h);
        y += (k1 + k2 * T::of(2.0) + k3 * T::of(2.0) + k4) * (h / T::of(6.0));
        response.push(y);
    }
    let simpson = |f: &dyn Fn(usize) -> C<T>| {
        let mut acc = f(0) + f(n);
        for j in 1..n {
            acc += f(j) * if j % 2 == 1 { T::of(4.0) } else { T::of(2.0) };
        }
        acc * (h / T::of(3.0))
    };
    let xs = |j: usize| grid.x_min + h * T::of_usize(j);
    let g = simpson(&|j| C::new(T::zero(), k * xs(j)).exp() * hp_vacuum_wavefunction(xs(j)));
    let f = simpson(&|j| response[j] * hp_vacuum_wavefunction(xs(j)));
    // [1 f; f 1] [a; b] = [g; 0]
    let det = C::new(T::one(), T::zero()) - f * f;
    if det.norm() < T::of(1e-12) {
        return Err(Error::Numeric {
            message: "singular self-consistency system in the ODE oracle".into(),
            residual: det.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = g / det;
    let b = -f * g / det;
    let out = response[n] * C::new(T::zero(), -k * grid.x_max).exp();
    Ok((C::new(T::one(), T::zero()) - b * out, -a * out))
}

/// Oracle comparison of both formula variants at one momentum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VariantProbe {
    pub k: f64,
    pub appendix_deviation: f64,
    pub appendix_unitarity: f64,
    pub main_text_deviation: f64,
    pub main_text_unitarity: f64,
}

/// Per-momentum scattering record.
#[derive(Clone, Copy, Debug)]
pub struct ScatterResult<T: Real> {
    pub k: T,
    pub g: T,
    pub h: C<T>,
    pub f: C<T>,
    pub t0: C<T>,
    pub t1: C<T>,
    pub unitarity_residual: T,
}

/// Derived scattering functionals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatterFunctionals {
    #[serde(rename = "P1")]
    pub p1: f64,
    pub g_max: f64,
    pub tau_star: f64,
    pub g_max_at_2zeta1: f64,
    pub zeta1: f64,
    pub formula_variant: FormulaVariant,
}

/// Transmission amplitudes with a validated formula variant.
#[derive(Clone, Debug)]
pub struct ScatterModel<T: Real> {
    variant: FormulaVariant,
    probes: Vec<VariantProbe>,
    k_max: T,
    quad: QuadOptions<T>,
}

impl<T: Real> ScatterModel<T> {
    /// Selects the formula variant that agrees with the ODE oracle (within
    /// `1e-6`) and is unitary at every probe momentum.
    pub fn new() -> Result<Self> {
        let probes = probe_variants::<T>()?;
        let ok = |dev: f64, uni: f64| dev <= 1e-6 && uni <= 1e-6;
        let variant = if probes.iter().all(|p| ok(p.appendix_deviation, p.appendix_unitarity)) {
            FormulaVariant::Appendix
        } else if probes.iter().all(|p| ok(p.main_text_deviation, p.main_text_unitarity)) {
            FormulaVariant::MainText
        } else {
            return Err(Error::Numeric {
                message: "no transmission formula variant agrees with the ODE oracle".into(),
                residual: probes.iter().map(|p| p.appendix_deviation.min(p.main_text_deviation)).fold(0.0, f64::max),
            });
        };
        Ok(Self { variant, probes, k_max: T::of(8.0), quad: default_quad() })
    }

    /// Forces a formula variant; the unitarity guard still applies.
    pub fn with_variant(variant: FormulaVariant) -> Result<Self> {
        Ok(Self { variant, probes: probe_variants::<T>()?, k_max: T::of(8.0), quad: default_quad() })
    }

    /// Momentum cutoff of every `k` integral (default 8).
    pub fn with_k_max(mut self, k_max: T) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn variant(&self) -> FormulaVariant {
        self.variant
    }

    pub fn probes(&self) -> &[VariantProbe] {
        &self.probes
    }

    pub fn k_max(&self) -> T {
        self.k_max
    }

    /// `(t0, t1)`; errors when the unitarity residual exceeds
    /// [`UNITARITY_GUARD`].
    pub fn transmission(&self, k: T) -> Result<(C<T>, C<T>)> {
        if !(k.abs() <= self.k_max) {
            return Err(Error::Range(format!("|k| = {} exceeds {}", k.abs(), self.k_max)));
        }
        let (t0, t1) = transmission_variant(k, self.variant);
        let r = unitarity_residual(t0, t1);
        if r > T::of(UNITARITY_GUARD) {
            return Err(Error::Contract(format!(
                "{} transmission violates unitarity at k = {k}: residual {r:e}",
                self.variant
            )));
        }
        Ok((t0, t1))
    }

    pub fn result(&self, k: T) -> Result<ScatterResult<T>> {
        let (t0, t1) = self.transmission(k)?;
        Ok(ScatterResult {
            k,
            g: integral_g(k),
            h: integral_h(k),
            f: integral_f(k),
            t0,
            t1,
            unitarity_residual: unitarity_residual(t0, t1),
        })
    }

    /// `P1 = (1/2pi) int |t1(k) A(k)|^2 dk` with the unsqueezed wavepacket.
    pub fn p1(&self) -> Result<T> {
        self.p1_squeezed(T::zero())
    }

    /// `P1` for the wavepacket squeezed by `xi`.
    pub fn p1_squeezed(&self, xi: T) -> Result<T> {
        self.check_variant()?;
        let v = self.variant;
        p1_with(|k| transmission_variant(k, v).1, |k| squeezed_momentum_amplitude(xi, k), self.k_max, self.quad)
    }

    /// Revival fidelity at phase `tau`, or its maximum over `tau` in
    /// `[0, 2pi)` when `tau` is `None`. Returns `(g, tau)`.
    pub fn gmax(&self, tau: Option<T>) -> Result<(T, T)> {
        self.gmax_squeezed(tau, T::zero())
    }

    pub fn gmax_squeezed(&self, tau: Option<T>, xi: T) -> Result<(T, T)> {
        self.check_variant()?;
        let v = self.variant;
        let pair = |k: T| {
            let (t0, t1) = transmission_variant(k, v);
            t0 * t0 + t1 * t1
        };
        let profile = |k: T| squeezed_momentum_amplitude(xi, k);
        match tau {
            Some(tau) => Ok((fidelity_at_phase(pair, profile, tau, self.k_max, self.quad)?, tau)),
            None => maximize_phase(pair, profile, self.k_max, self.quad),
        }
    }

    /// `zeta1 = i t1'(0) / t1(0)` by Richardson-extrapolated central
    /// differences with steps `1e-2, 5e-3, 2.5e-3`. The returned value is
    /// complex so callers can check that it is real.
    pub fn zeta1_complex(&self) -> Result<C<T>> {
        self.check_variant()?;
        let v = self.variant;
        let t1 = |k: T| transmission_variant(k, v).1;
        let d = |h: T| (t1(h) - t1(-h)) / (h * T::of(2.0));
        let h = T::of(1e-2);
        let (d1, d2, d3) = (d(h), d(h * T::of(0.5)), d(h * T::of(0.25)));
        let r1 = (d2 * T::of(4.0) - d1) / T::of(3.0);
        let r2 = (d3 * T::of(4.0) - d2) / T::of(3.0);
        let r = (r2 * T::of(16.0) - r1) / T::of(15.0);
        let change = (r - r2).norm();
        if change > T::of(1e-6) {
            return Err(Error::Numeric {
                message: "Richardson extrapolation of dt1/dk did not settle".into(),
                residual: change.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(C::new(T::zero(), T::one()) * r / t1(T::zero()))
    }

    /// Real part of [`Self::zeta1_complex`]; errors when the imaginary part
    /// exceeds `1e-6`.
    pub fn zeta1(&self) -> Result<T> {
        let z = self.zeta1_complex()?;
        if z.im.abs() > T::of(1e-6) {
            return Err(Error::Numeric {
                message: "zeta1 is not real".into(),
                residual: z.im.abs().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(z.re)
    }

    pub fn functionals(&self) -> Result<ScatterFunctionals> {
        let p1 = self.p1()?;
        let (g_max, tau_star) = self.gmax(None)?;
        let zeta1 = self.zeta1()?;
        let (g_2z, _) = self.gmax(Some(zeta1 * T::of(2.0)))?;
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        Ok(ScatterFunctionals {
            p1: f(p1),
            g_max: f(g_max),
            tau_star: f(tau_star),
            g_max_at_2zeta1: f(g_2z),
            zeta1: f(zeta1),
            formula_variant: self.variant,
        })
    }

    /// The forced main-text variant is not unitary near `k = 0`; reject it
    /// before integrating over that region.
    fn check_variant(&self) -> Result<()> {
        for k in [T::zero(), T::of(1e-3), T::of(0.5)] {
            self.transmission(k)?;
        }
        Ok(())
    }
}

fn default_quad<T: Real>() -> QuadOptions<T> {
    QuadOptions { abs_tol: T::of(1e-11), rel_tol: T::of(1e-11), max_panels: 4000 }
}

fn probe_variants<T: Real>() -> Result<Vec<VariantProbe>> {
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    PROBE_MOMENTA
        .iter()
        .map(|&k| {
            let kt = T::of(k);
            let (o0, o1) = ode_oracle_transmission(kt, OdeGrid::default())?;
            let dev = |(t0, t1): (C<T>, C<T>)| {
                let d = (t0 - o0).norm().max((t1 - o1).norm());
                if d.is_finite() {
                    f(d)
                } else {
                    f64::INFINITY
                }
            };
            let app = transmission_variant(kt, FormulaVariant::Appendix);
            let main = transmission_variant(kt, FormulaVariant::MainText);
            Ok(VariantProbe {
                k,
                appendix_deviation: dev(app),
                appendix_unitarity: f(unitarity_residual(app.0, app.1)),
                main_text_deviation: dev(main),
                main_text_unitarity: f(unitarity_residual(main.0, main.1)),
            })
        })
        .collect()
}

/// `(1/2pi) int_{-k_max}^{k_max} |t1(k) A(k)|^2 dk`.
pub fn p1_with<T: Real>(t1: impl Fn(T) -> C<T>, profile: impl Fn(T) -> T, k_max: T, quad: QuadOptions<T>) -> Result<T> {
    let v = integrate(|k| t1(k).norm_sqr() * profile(k).powi(2), -k_max, k_max, quad)?;
    Ok(v / (T::of(2.0) * T::PI()))
}

/// `|(1/2pi) int e^{i tau k} a2(k) |A(k)|^2 dk|` with `a2 = t0^2 + t1^2`.
pub fn fidelity_at_phase<T: Real>(
    a2: impl Fn(T) -> C<T>,
    profile: impl Fn(T) -> T,
    tau: T,
    k_max: T,
    quad: QuadOptions<T>,
) -> Result<T> {
    let v = integrate(|k| C::new(T::zero(), tau * k).exp() * a2(k) * profile(k).powi(2), -k_max, k_max, quad)?;
    Ok(v.norm() / (T::of(2.0) * T::PI()))
}

/// Maximises [`fidelity_at_phase`] over `tau` in `[0, 2pi)`: a 128-point scan
/// followed by golden-section search to `1e-6`.
pub fn maximize_phase<T: Real>(
    a2: impl Fn(T) -> C<T> + Copy,
    profile: impl Fn(T) -> T + Copy,
    k_max: T,
    quad: QuadOptions<T>,
) -> Result<(T, T)> {
    let two_pi = T::of(2.0) * T::PI();
    let samples = 128usize;
    let step = two_pi / T::of_usize(samples);
    let g = |tau: T| fidelity_at_phase(a2, profile, tau, k_max, quad);
    let mut best = (T::zero(), T::neg_infinity());
    for j in 0..samples {
        let tau = step * T::of_usize(j);
        let v = g(tau)?;
        if v > best.1 {
            best = (tau, v);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let ratio = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1)?, g(x2)?);
    while hi - lo > T::of(1e-6) {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2)?;
        }
    }
    let tau = (lo + hi) * T::of(0.5);
    let v = g(tau)?;
    let tau = if tau < T::zero() {
        tau + two_pi
    } else if tau >= two_pi {
        tau - two_pi
    } else {
        tau
    };
    Ok((v, tau))
}

/// Writes the scatter CSV.
pub fn write_scatter_csv<T: Real, W: Write>(results: &[ScatterResult<T>], mut out: W) -> Result<()> {
    writeln!(out, "k,ReG,ReH,ImH,ReF,ImF,Ret0,Imt0,Ret1,Imt1,unitarity_residual")?;
    for r in results {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.k, r.g, r.h.re, r.h.im, r.f.re, r.f.im, r.t0.re, r.t0.im, r.t1.re, r.t1.im, r.unitarity_residual
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_and_h_closed_forms() {
        let g0 = integral_g(0.0_f64);
        assert!((g0 - 2f64.sqrt() * std::f64::consts::PI.powf(0.25)).abs() < 1e-15);
        assert_eq!(integral_g(1.7_f64), integral_g(-1.7));
        assert_eq!(integral_h(0.0_f64), C::new(0.0, 0.0));
        for k in [0.5, 1.0, 2.0_f64] {
            let r = integral_h(k) / integral_g(k);
            assert!((r - C::new(0.0, k)).norm() < 1e-15);
        }
        let sat = integral_h_at(1.0_f64, 8.0).unwrap();
        assert!((sat - integral_h(1.0)).norm() < 1e-8);
        assert!(integral_h_at(1.0_f64, 9.0).is_err());
    }

    #[test]
    fn f_properties() {
        assert_eq!(integral_f(0.0_f64), C::new(1.0, 0.0));
        for k in [0.3, 1.0, 2.5, 6.0_f64] {
            assert!((integral_f(-k) - integral_f(k).conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn hermite_series_does_not_converge() {
        assert_eq!(integral_f_series(0.0_f64, 1e-14).unwrap(), C::new(1.0, 0.0));
        match integral_f_series(1.0_f64, 1e-14) {
            Err(Error::Convergence { terms, last_term, .. }) => {
                assert_eq!(terms, 300);
                assert!(last_term > 1e-14);
            }
            other => panic!("expected a convergence error, got {other:?}"),
        }
    }

    #[test]
    fn zero_energy_transfer() {
        let (t0, t1) = transmission_variant(0.0_f64, FormulaVariant::Appendix);
        assert!(t0.norm() < 1e-15);
        assert!((t1.norm() - 1.0).abs() < 1e-15);
        let (m0, _) = transmission_variant(0.0_f64, FormulaVariant::MainText);
        assert!(!m0.norm().is_finite());
    }

    #[test]
    fn variants_against_oracle() {
        let model = ScatterModel::<f64>::new().unwrap();
        assert_eq!(model.variant(), FormulaVariant::Appendix);
        for p in model.probes() {
            assert!(p.appendix_deviation < 1e-6, "{p:?}");
            assert!(p.main_text_unitarity > 1e-3 || p.main_text_deviation > 1e-3, "{p:?}");
        }
        let forced = ScatterModel::<f64>::with_variant(FormulaVariant::MainText).unwrap();
        assert!(matches!(forced.transmission(0.01), Err(Error::Contract(_))));
        assert!(forced.p1().is_err());
    }

    #[test]
    fn trivial_functionals() {
        let q = default_quad::<f64>();
        let p = p1_with(|_| C::new(1.0, 0.0), |k| squeezed_momentum_amplitude(0.0, k), 8.0, q).unwrap();
        assert!((p - 1.0).abs() < 1e-10);
        let g = fidelity_at_phase(|_| C::new(1.0, 0.0), |k| squeezed_momentum_amplitude(0.0, k), 0.0, 8.0, q).unwrap();
        assert!((g - 1.0).abs() < 1e-10);
        let n = p1_with(|_| C::new(1.0, 0.0), |k| squeezed_momentum_amplitude(0.7, k), 8.0, q).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csv_layout() {
        let model = ScatterModel::<f64>::new().unwrap();
        let rows = vec![model.result(0.0).unwrap(), model.result(1.0).unwrap()];
        let mut buf = Vec::new();
        write_scatter_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 11);
    }
}
