//! Hamiltonians and squeezing generators.
//!
//! Operators are immutable after construction. Small operators keep explicit
//! CSR entries; full `2^N` space operators are applied matrix-free.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Config;
use crate::scalar::{Real, C};
use crate::states::BasisTag;

mod conjugate;
mod deform;
mod pxp;
mod sector;
mod squeeze;

pub use conjugate::{apply_conjugated_hamiltonian, conjugated_fidelity_trace};
pub use deform::build_deformed_pxp_first_order;
pub use pxp::{build_full_pxp, build_pxp, FULL_SPACE_SITE_CAP};
pub use sector::{build_cbg_sector_hamiltonian, SpinSector};
pub use squeeze::{build_global_squeeze_generator, build_local_squeeze_generator, SqueezeTarget};

/// Stored-entry operators above this dimension must be matrix-free.
pub const MATRIX_FREE_THRESHOLD: usize = 1 << 20;

/// Largest dimension accepted by the coordinate-format dump.
pub const DUMP_MAX_DIM: usize = 10_000;

/// Declared symmetry of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hermiticity {
    Hermitian,
    AntiHermitian,
    General,
}

/// Anything that can be applied to a complex vector.
pub trait LinearOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[C<T>], y: &mut [C<T>]);
}

#[derive(Clone, Debug)]
enum Repr<T> {
    Csr {
        row_ptr: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<C<T>>,
    },
    /// `amplitude * sum_i P sigma^x_i P` on the full `2^N` space.
    FullPxp {
        neighbor_masks: Vec<Config>,
        amplitude: T,
    },
    /// `sum_p c_p (sigma^+ sigma^+ - sigma^- sigma^-)` over site pairs `p`.
    PairSqueeze {
        pairs: Vec<(Config, T)>,
    },
}

/// Operator on a constrained, full or Dicke-sector basis.
#[derive(Clone, Debug)]
pub struct SparseOperator<T: Real> {
    dim: usize,
    hermiticity: Hermiticity,
    basis: BasisTag,
    repr: Repr<T>,
}

impl<T: Real> SparseOperator<T> {
    /// Builds a stored operator from `(row, col, value)` triplets; duplicate
    /// positions are summed and exact zeros dropped. The declared hermiticity
    /// is verified.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C<T>)>,
        hermiticity: Hermiticity,
        basis: BasisTag,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, C<T>)> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = t.iter().find(|&&(r, c, _)| r >= dim || c >= dim) {
            return Err(Error::Argument(format!("entry ({r}, {c}) outside dimension {dim}")));
        }
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<C<T>> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let op = Self { dim, hermiticity, basis, repr: Repr::Csr { row_ptr, cols, vals } }.drop_zeros();
        op.check_hermiticity()?;
        Ok(op)
    }

    fn drop_zeros(self) -> Self {
        let Repr::Csr { row_ptr, cols, vals } = &self.repr else {
            return self;
        };
        let zero = C::new(T::zero(), T::zero());
        let mut new_ptr = vec![0usize; self.dim + 1];
        let mut new_cols = Vec::with_capacity(cols.len());
        let mut new_vals = Vec::with_capacity(vals.len());
        for r in 0..self.dim {
            for k in row_ptr[r]..row_ptr[r + 1] {
                if vals[k] != zero {
                    new_cols.push(cols[k]);
                    new_vals.push(vals[k]);
                }
            }
            new_ptr[r + 1] = new_cols.len();
        }
        Self { repr: Repr::Csr { row_ptr: new_ptr, cols: new_cols, vals: new_vals }, ..self }
    }

    pub(crate) fn full_pxp(n_sites: usize, neighbor_masks: Vec<Config>, amplitude: T) -> Self {
        Self {
            dim: 1usize << n_sites,
            hermiticity: Hermiticity::Hermitian,
            basis: BasisTag::Full,
            repr: Repr::FullPxp { neighbor_masks, amplitude },
        }
    }

    pub(crate) fn pair_squeeze(n_sites: usize, pairs: Vec<(Config, T)>) -> Self {
        let pairs = pairs.into_iter().filter(|&(_, c)| c != T::zero()).collect();
        Self {
            dim: 1usize << n_sites,
            hermiticity: Hermiticity::AntiHermitian,
            basis: BasisTag::Full,
            repr: Repr::PairSqueeze { pairs },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hermiticity(&self) -> Hermiticity {
        self.hermiticity
    }

    pub fn basis_tag(&self) -> BasisTag {
        self.basis
    }

    pub fn is_matrix_free(&self) -> bool {
        !matches!(self.repr, Repr::Csr { .. })
    }

    /// Number of stored (or implied) nonzero entries.
    pub fn nnz(&self) -> usize {
        match &self.repr {
            Repr::Csr { vals, .. } => vals.len(),
            _ => self.entries().map_or(0, |e| e.len()),
        }
    }

    /// True when no entry is nonzero.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Csr { vals, .. } => vals.is_empty(),
            Repr::FullPxp { amplitude, .. } => *amplitude == T::zero(),
            Repr::PairSqueeze { pairs } => pairs.is_empty(),
        }
    }

    /// Explicit `(row, col, value)` entries in row-major order. Matrix-free
    /// operators are expanded, which is refused above
    /// [`MATRIX_FREE_THRESHOLD`].
    pub fn entries(&self) -> Result<Vec<(usize, usize, C<T>)>> {
        match &self.repr {
            Repr::Csr { row_ptr, cols, vals } => Ok((0..self.dim)
                .flat_map(|r| (row_ptr[r]..row_ptr[r + 1]).map(move |k| (r, k)))
                .map(|(r, k)| (r, cols[k], vals[k]))
                .collect()),
            _ => {
                if self.dim > MATRIX_FREE_THRESHOLD {
                    return Err(Error::Resource(format!(
                        "refusing to expand a matrix-free operator of dimension {}",
                        self.dim
                    )));
                }
                let mut out = Vec::new();
                for row in 0..self.dim {
                    self.for_each_in_row(row, |col, v| out.push((row, col, v)));
                }
                Ok(out)
            }
        }
    }

    /// Visits the nonzero entries of one row.
    fn for_each_in_row(&self, row: usize, mut f: impl FnMut(usize, C<T>)) {
        match &self.repr {
            Repr::Csr { row_ptr, cols, vals } => {
                for k in row_ptr[row]..row_ptr[row + 1] {
                    f(cols[k], vals[k]);
                }
            }
            Repr::FullPxp { neighbor_masks, amplitude } => {
                let c = row as Config;
                if !independent(c, neighbor_masks) {
                    return;
                }
                for (s, &mask) in neighbor_masks.iter().enumerate() {
                    // flipping s keeps the configuration independent iff no
                    // neighbour of s is excited
                    if c & mask == 0 {
                        f((c ^ (1 << s)) as usize, C::new(*amplitude, T::zero()));
                    }
                }
            }
            Repr::PairSqueeze { pairs } => {
                let c = row as Config;
                for &(mask, coeff) in pairs {
                    if c & mask == mask {
                        // raised from the configuration with both sites empty
                        f((c & !mask) as usize, C::new(coeff, T::zero()));
                    } else if c & mask == 0 {
                        // lowered from the configuration with both sites excited
                        f((c | mask) as usize, C::new(-coeff, T::zero()));
                    }
                }
            }
        }
    }

    /// Largest deviation from the declared (anti-)Hermiticity.
    pub fn hermiticity_residual(&self) -> Result<T> {
        let sign = match self.hermiticity {
            Hermiticity::Hermitian => T::one(),
            Hermiticity::AntiHermitian => -T::one(),
            Hermiticity::General => return Ok(T::zero()),
        };
        let entries = self.entries()?;
        let mut map = std::collections::HashMap::with_capacity(entries.len());
        for &(r, c, v) in &entries {
            map.insert((r, c), v);
        }
        let zero = C::new(T::zero(), T::zero());
        let mut worst = T::zero();
        for &(r, c, v) in &entries {
            let t = map.get(&(c, r)).copied().unwrap_or(zero);
            worst = worst.max((v - t.conj() * sign).norm());
        }
        Ok(worst)
    }

    fn check_hermiticity(&self) -> Result<()> {
        let residual = self.hermiticity_residual()?;
        if residual > T::zero() {
            return Err(Error::Contract(format!(
                "declared {:?} operator violates its symmetry by {residual:e}",
                self.hermiticity
            )));
        }
        Ok(())
    }

    /// Upper bound on the induced infinity norm (max absolute row sum).
    pub fn norm_bound(&self) -> T {
        match &self.repr {
            Repr::Csr { row_ptr, vals, .. } => (0..self.dim)
                .map(|r| vals[row_ptr[r]..row_ptr[r + 1]].iter().map(|v| v.norm()).sum::<T>())
                .fold(T::zero(), T::max),
            Repr::FullPxp { neighbor_masks, amplitude } => amplitude.abs() * T::of_usize(neighbor_masks.len()),
            Repr::PairSqueeze { pairs } => pairs.iter().map(|&(_, c)| c.abs()).sum(),
        }
    }

    /// Dense row-major real part; errors when any entry has an imaginary part.
    pub fn to_dense_real(&self) -> Result<Vec<T>> {
        let n = self.dim;
        let mut m = vec![T::zero(); n * n];
        for (r, c, v) in self.entries()? {
            if v.im != T::zero() {
                return Err(Error::Contract("operator has complex entries".into()));
            }
            m[r * n + c] += v.re;
        }
        Ok(m)
    }

    /// Entrywise scaled copy; the result is materialised when the factor is
    /// complex.
    pub fn scaled(&self, factor: T) -> Self {
        let repr = match &self.repr {
            Repr::Csr { row_ptr, cols, vals } => Repr::Csr {
                row_ptr: row_ptr.clone(),
                cols: cols.clone(),
                vals: vals.iter().map(|v| v * factor).collect(),
            },
            Repr::FullPxp { neighbor_masks, amplitude } => {
                Repr::FullPxp { neighbor_masks: neighbor_masks.clone(), amplitude: *amplitude * factor }
            }
            Repr::PairSqueeze { pairs } => {
                Repr::PairSqueeze { pairs: pairs.iter().map(|&(m, c)| (m, c * factor)).collect() }
            }
        };
        Self { repr, ..self.clone() }
    }

    /// Writes coordinate-format text `row col re im`, one entry per line.
    pub fn write_coo<W: Write>(&self, mut out: W) -> Result<()> {
        if self.dim > DUMP_MAX_DIM {
            return Err(Error::Resource(format!(
                "operator dump limited to dimension {DUMP_MAX_DIM}, got {}",
                self.dim
            )));
        }
        writeln!(out, "# dim={} hermiticity={:?} basis={:?}", self.dim, self.hermiticity, self.basis)?;
        for (r, c, v) in self.entries()? {
            writeln!(out, "{r} {c} {} {}", v.re, v.im)?;
        }
        Ok(())
    }
}

impl<T: Real> LinearOperator<T> for SparseOperator<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        assert_eq!(x.len(), self.dim, "operator/vector dimension mismatch");
        assert_eq!(y.len(), self.dim, "operator/vector dimension mismatch");
        let zero = C::new(T::zero(), T::zero());
        let row = |r: usize| {
            let mut acc = zero;
            self.for_each_in_row(r, |c, v| acc += v * x[c]);
            acc
        };
        if self.dim < 2048 {
            y.iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        } else {
            y.par_iter_mut().with_min_len(512).enumerate().for_each(|(r, yr)| *yr = row(r));
        }
    }
}

/// Whether `config` is an independent set for the given neighbour masks.
pub(crate) fn independent(config: Config, masks: &[Config]) -> bool {
    let mut bits = config;
    while bits != 0 {
        let s = bits.trailing_zeros() as usize;
        if config & masks[s] != 0 {
            return false;
        }
        bits &= bits - 1;
    }
    true
}

/// `factor * A`, applied lazily.
pub struct ScaledOperator<'a, T: Real, O: LinearOperator<T> + ?Sized> {
    pub op: &'a O,
    pub factor: C<T>,
}

impl<T: Real, O: LinearOperator<T> + ?Sized> LinearOperator<T> for ScaledOperator<'_, T, O> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        self.op.apply(x, y);
        let f = self.factor;
        y.iter_mut().for_each(|v| *v *= f);
    }
}
