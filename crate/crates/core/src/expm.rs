//! Action of matrix exponentials on vectors.
//!
//! [`expm_krylov`] propagates `exp(-i A t) v` for Hermitian `A` with a Lanczos
//! basis and adaptive substepping; [`expm_taylor`] applies `exp(c A) v` by a
//! truncated series on substeps short enough for the series to converge.

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::scalar::{inner, norm, Real, C};

/// Lanczos propagation settings.
#[derive(Clone, Copy, Debug)]
pub struct KrylovOptions<T> {
    /// Largest subspace dimension.
    pub dim: usize,
    /// Bound on the local error estimate of each substep.
    pub tol: T,
}

impl<T: Real> Default for KrylovOptions<T> {
    fn default() -> Self {
        Self { dim: 30, tol: T::of(1e-12) }
    }
}

const MAX_HALVINGS: usize = 60;

struct Lanczos<T: Real> {
    basis: Vec<Vec<C<T>>>,
    alpha: Vec<T>,
    beta: Vec<T>,
    /// The subspace is invariant under the operator.
    exhausted: bool,
}

/// Builds an orthonormal Krylov basis from the unit vector `v0`, with full
/// reorthogonalisation.
///
/// `enough(alpha, beta)` is consulted every other step and ends the build
/// early once the current subspace is accurate enough.
fn lanczos<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    v0: Vec<C<T>>,
    m: usize,
    enough: impl Fn(&[T], &[T]) -> bool,
) -> Lanczos<T> {
    let n = v0.len();
    let m = m.min(n).max(1);
    let zero = C::new(T::zero(), T::zero());
    let mut basis = vec![v0];
    let mut alpha = Vec::with_capacity(m);
    let mut beta: Vec<T> = Vec::with_capacity(m);
    let mut w = vec![zero; n];
    let floor = T::epsilon() * T::of(100.0);
    loop {
        let j = basis.len() - 1;
        op.apply(&basis[j], &mut w);
        let a = inner(&basis[j], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = inner(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        beta.push(b);
        let scale = T::one().max(a.abs()).max(if j > 0 { beta[j - 1] } else { T::zero() });
        if b <= floor * scale {
            return Lanczos { basis, alpha, beta, exhausted: true };
        }
        if basis.len() == m || (basis.len() >= 4 && basis.len() % 2 == 0 && enough(&alpha, &beta)) {
            return Lanczos { basis, alpha, beta, exhausted: false };
        }
        let inv = b.recip();
        basis.push(w.iter().map(|x| x * inv).collect());
    }
}

/// `exp(-i T h) e_1` for the tridiagonal Lanczos matrix.
fn small_propagator<T: Real>(alpha: &[T], beta: &[T], h: T) -> Vec<C<T>> {
    let m = alpha.len();
    let mut t = vec![T::zero(); m * m];
    for i in 0..m {
        t[i * m + i] = alpha[i];
        if i + 1 < m {
            t[i * m + i + 1] = beta[i];
            t[(i + 1) * m + i] = beta[i];
        }
    }
    let (vals, vecs) = T::symmetric_eigen(m, t);
    (0..m)
        .map(|r| {
            (0..m).fold(C::new(T::zero(), T::zero()), |acc, k| {
                let phase = C::new(T::zero(), -vals[k] * h).exp();
                acc + phase * (vecs[r * m + k] * vecs[k])
            })
        })
        .collect()
}

/// `exp(-i A t) v` for Hermitian `A`.
///
/// Each substep reuses one Lanczos basis; its length is halved until the
/// a-posteriori local error estimate falls below `opts.tol`.
pub fn expm_krylov<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    v: &[C<T>],
    t: T,
    opts: KrylovOptions<T>,
) -> Result<Vec<C<T>>> {
    if op.dim() != v.len() {
        return Err(Error::Argument(format!(
            "operator dimension {} does not match vector length {}",
            op.dim(),
            v.len()
        )));
    }
    if !(opts.tol > T::zero()) || opts.dim < 1 {
        return Err(Error::Argument("Krylov propagation needs tol > 0 and dim >= 1".into()));
    }
    let mut psi = v.to_vec();
    let mut remaining = t.abs();
    let direction = t.signum();
    let mut h_try = remaining;
    while remaining > T::zero() {
        let beta0 = norm(&psi);
        if beta0 == T::zero() {
            return Ok(psi);
        }
        let inv = beta0.recip();
        let mut h = h_try.min(remaining);
        let target = h * direction;
        let lz = lanczos(op, psi.iter().map(|x| x * inv).collect(), opts.dim, |a, b| {
            let y = small_propagator(a, b, target);
            beta0 * *b.last().unwrap() * y.last().unwrap().norm() <= opts.tol * T::of(0.1)
        });
        let mut accepted = None;
        let mut last_err = T::infinity();
        for _ in 0..MAX_HALVINGS {
            let y = small_propagator(&lz.alpha, &lz.beta, h * direction);
            let err =
                if lz.exhausted { T::zero() } else { beta0 * *lz.beta.last().unwrap() * y.last().unwrap().norm() };
            if err <= opts.tol {
                accepted = Some(y);
                break;
            }
            last_err = err;
            h *= T::of(0.5);
        }
        let Some(y) = accepted else {
            return Err(Error::Numeric {
                message: "Krylov substep did not reach the requested tolerance".into(),
                residual: last_err.to_f64().unwrap_or(f64::NAN),
            });
        };
        psi.iter_mut().for_each(|x| *x = C::new(T::zero(), T::zero()));
        for (coef, b) in y.iter().zip(&lz.basis) {
            let c = coef * beta0;
            psi.iter_mut().zip(b).for_each(|(x, bv)| *x += c * bv);
        }
        remaining = if h >= remaining { T::zero() } else { remaining - h };
        // let the next substep grow again after a successful one
        h_try = h * T::of(2.0);
    }
    Ok(psi)
}

/// `exp(c A) v` by a truncated Taylor series on `ceil(|c| norm_bound)`
/// substeps. `norm_bound` must bound an induced norm of `A`.
pub fn expm_taylor<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    c: C<T>,
    norm_bound: T,
    v: &[C<T>],
) -> Result<Vec<C<T>>> {
    const MAX_TERMS: usize = 60;
    if op.dim() != v.len() {
        return Err(Error::Argument(format!(
            "operator dimension {} does not match vector length {}",
            op.dim(),
            v.len()
        )));
    }
    let steps = (c.norm() * norm_bound).ceil().to_usize().unwrap_or(1).max(1);
    let cs = c / T::of_usize(steps);
    let thresh = T::of(1e-15).max(T::epsilon());
    let mut psi = v.to_vec();
    let mut term = vec![C::new(T::zero(), T::zero()); v.len()];
    let mut next = term.clone();
    for _ in 0..steps {
        term.copy_from_slice(&psi);
        let mut converged = false;
        let mut last = T::zero();
        for k in 1..=MAX_TERMS {
            op.apply(&term, &mut next);
            let f = cs / T::of_usize(k);
            next.iter_mut().for_each(|x| *x *= f);
            std::mem::swap(&mut term, &mut next);
            psi.iter_mut().zip(&term).for_each(|(p, t)| *p += t);
            last = norm(&term);
            if last <= thresh * norm(&psi) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric {
                message: format!("Taylor series did not converge in {MAX_TERMS} terms"),
                residual: last.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(psi)
}
