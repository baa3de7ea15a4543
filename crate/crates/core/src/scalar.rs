//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All algorithms are written against [`Real`]; `f64` is the working precision
//! for the reported numbers, `f32` is supported for cheap exploratory runs.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into this scalar.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Eigen-decomposition of a dense real symmetric matrix stored row-major.
    ///
    /// Returns eigenvalues (ascending) and the eigenvectors as columns of a
    /// row-major `n x n` matrix.
    fn symmetric_eigen(n: usize, matrix: Vec<Self>) -> (Vec<Self>, Vec<Self>);

    /// Eigenvalues (ascending) of a dense real symmetric matrix stored row-major.
    fn symmetric_eigenvalues(n: usize, matrix: Vec<Self>) -> Vec<Self>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn symmetric_eigen(n: usize, matrix: Vec<Self>) -> (Vec<Self>, Vec<Self>) {
                let m = nalgebra::DMatrix::<$t>::from_row_slice(n, n, &matrix);
                let eig = m.symmetric_eigen();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
                let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
                let mut vectors = vec![0.0; n * n];
                for (col, &src) in order.iter().enumerate() {
                    for row in 0..n {
                        vectors[row * n + col] = eig.eigenvectors[(row, src)];
                    }
                }
                (values, vectors)
            }

            fn symmetric_eigenvalues(n: usize, matrix: Vec<Self>) -> Vec<Self> {
                let m = nalgebra::DMatrix::<$t>::from_row_slice(n, n, &matrix);
                let mut values: Vec<$t> = m.symmetric_eigenvalues().iter().copied().collect();
                values.sort_by(|a, b| a.total_cmp(b));
                values
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Complex amplitude over a real scalar.
pub type C<T> = Complex<T>;

/// Imaginary unit.
#[inline]
pub fn i_unit<T: Real>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// Purely real complex number.
#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}

/// Euclidean norm of a complex vector.
pub fn norm<T: Real>(v: &[C<T>]) -> T {
    norm_sqr(v).sqrt()
}

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Inner product `<a|b>` (conjugate-linear in `a`).
pub fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}
