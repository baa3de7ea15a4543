//! Brute-force reference implementations for validating the optimised paths.
//!
//! Nothing here reuses the bitmask machinery of `hilbert` or `operators`:
//! blockade checks scan the edge list and Hamiltonians are dense.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, GraphKind};
use crate::hilbert::ConstrainedBasis;
use crate::quad::{integrate, QuadOptions};
use crate::states::{BasisTag, StateVector};
use num_complex::Complex64;

/// Largest site count for the brute-force basis.
pub const BASIS_SITE_CAP: usize = 20;
/// Largest site count for dense full-space evolution.
pub const EVOLVE_SITE_CAP: usize = 12;
/// Largest dense dimension.
pub const DENSE_CAP: usize = 4096;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim > DENSE_CAP {
            return Err(Error::Resource(format!("dense oracle limited to dimension {DENSE_CAP}")));
        }
        Ok(Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data.chunks(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data.chunks(self.dim).map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

fn blockade_ok(graph: &BipartiteGraph, config: usize) -> bool {
    graph.edges().iter().all(|&(u, v)| !(config >> u & 1 == 1 && config >> v & 1 == 1))
}

/// All `2^N` configurations filtered by an edge scan.
pub fn brute_force_basis(graph: &BipartiteGraph) -> Result<ConstrainedBasis> {
    let n = graph.n_vertices();
    if n > BASIS_SITE_CAP {
        return Err(Error::Resource(format!("brute-force basis limited to {BASIS_SITE_CAP} sites")));
    }
    let configs = (0..1usize << n).filter(|&c| blockade_ok(graph, c)).map(|c| c as u32).collect();
    Ok(ConstrainedBasis::from_configs(graph, configs))
}

/// Dense `(omega/2) sum_i P sigma^x_i P` on the full space, `P` projecting
/// onto blockade-satisfying configurations.
pub fn dense_full_pxp(graph: &BipartiteGraph, omega: f64) -> Result<DenseOperator> {
    let n = graph.n_vertices();
    if n > EVOLVE_SITE_CAP {
        return Err(Error::Resource(format!("dense full-space oracle limited to {EVOLVE_SITE_CAP} sites")));
    }
    let mut h = DenseOperator::zeros(1 << n)?;
    for c in 0..1usize << n {
        if !blockade_ok(graph, c) {
            continue;
        }
        for site in 0..n {
            let flipped = c ^ (1 << site);
            if blockade_ok(graph, flipped) {
                h.set(flipped, c, Complex64::new(omega / 2.0, 0.0));
            }
        }
    }
    Ok(h)
}

/// Dense `sum_i P sigma^x_i P sigma^z_{i+2}` on the full space of a ring,
/// with `sigma^z|1> = +|1>`.
pub fn dense_pxz_perturbation(graph: &BipartiteGraph) -> Result<DenseOperator> {
    let GraphKind::Ring { n } = graph.kind() else {
        return Err(Error::UnsupportedGraph("the PXZ perturbation is defined on rings".into()));
    };
    if n > EVOLVE_SITE_CAP {
        return Err(Error::Resource(format!("dense full-space oracle limited to {EVOLVE_SITE_CAP} sites")));
    }
    let mut v = DenseOperator::zeros(1 << n)?;
    for c in 0..1usize << n {
        if !blockade_ok(graph, c) {
            continue;
        }
        for site in 0..n {
            let flipped = c ^ (1 << site);
            if !blockade_ok(graph, flipped) {
                continue;
            }
            // sigma^z acts first, on site i+2 which the flip leaves untouched
            let z = if c >> ((site + 2) % n) & 1 == 1 { 1.0 } else { -1.0 };
            v.set(flipped, c, v.get(flipped, c) + Complex64::new(z, 0.0));
        }
    }
    Ok(v)
}

/// `exp(-iHt)|psi0>` with the dense full-space PXP Hamiltonian, by a Taylor
/// series on substeps of norm at most one.
pub fn brute_force_evolve(graph: &BipartiteGraph, psi0: &StateVector<f64>, t: f64) -> Result<StateVector<f64>> {
    let n = graph.n_vertices();
    if n > EVOLVE_SITE_CAP {
        return Err(Error::Resource(format!("brute-force evolution limited to {EVOLVE_SITE_CAP} sites")));
    }
    if psi0.tag() != BasisTag::Full || psi0.dim() != 1 << n {
        return Err(Error::Argument("brute-force evolution needs a full-space state".into()));
    }
    let h = dense_full_pxp(graph, 1.0)?;
    let steps = (t.abs() * h.norm_inf()).ceil().max(1.0) as usize;
    let dt = Complex64::new(0.0, -t / steps as f64);
    let mut psi = psi0.amplitudes().to_vec();
    for _ in 0..steps {
        let mut term = psi.clone();
        for k in 1..80 {
            term = h.apply(&term).into_iter().map(|z| z * dt / k as f64).collect();
            let size: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            psi.iter_mut().zip(&term).for_each(|(p, q)| *p += q);
            if size < 1e-18 {
                break;
            }
        }
    }
    StateVector::new(BasisTag::Full, psi)
}

fn quad_opts() -> QuadOptions<f64> {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 4000 }
}

fn phi(x: f64) -> f64 {
    std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp()
}

/// Integration range standing in for the real line.
const L: f64 = 12.0;

/// `int phi(z) e^{ikz} dz` by adaptive quadrature.
pub fn quadrature_g(k: f64) -> Result<Complex64> {
    integrate(|z: f64| Complex64::new(0.0, k * z).exp() * phi(z), -L, L, quad_opts())
}

/// `int_{-inf}^x phi'(z) e^{-ikz} dz` by adaptive quadrature.
pub fn quadrature_h_at(k: f64, x: f64) -> Result<Complex64> {
    if x <= -L {
        return Ok(Complex64::new(0.0, 0.0));
    }
    integrate(|z: f64| Complex64::new(0.0, -k * z).exp() * (-z * phi(z)), -L, x, quad_opts())
}

pub fn quadrature_h(k: f64) -> Result<Complex64> {
    quadrature_h_at(k, L)
}

/// `int phi(x) e^{ikx} H(k, x) dx` by nested adaptive quadrature.
pub fn quadrature_f(k: f64) -> Result<Complex64> {
    let mut failure = None;
    let outer = integrate(
        |x: f64| match quadrature_h_at(k, x) {
            Ok(h) => Complex64::new(0.0, k * x).exp() * phi(x) * h,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        -L,
        L,
        QuadOptions { abs_tol: 1e-11, rel_tol: 1e-11, max_panels: 4000 },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}
