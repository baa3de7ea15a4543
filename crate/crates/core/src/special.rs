//! Error function, Dawson integral and Hermite polynomials.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Real error function.
pub fn erf<T: Real>(x: T) -> T {
    if x < T::zero() {
        return -erf(-x);
    }
    if x < T::of(3.0) {
        erf_series(x)
    } else {
        T::one() - erfc_cf(x)
    }
}

/// Complementary error function, accurate in the far tail.
pub fn erfc<T: Real>(x: T) -> T {
    if x < T::zero() {
        T::of(2.0) - erfc(-x)
    } else if x < T::of(3.0) {
        T::one() - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// `2/sqrt(pi) exp(-x^2) sum 2^n x^{2n+1} / (2n+1)!!`; every term positive.
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    while term > sum * T::epsilon() * T::of(0.1) && n < 500 {
        n += 1;
        term = term * T::of(2.0) * x2 / T::of_usize(2 * n + 1);
        sum += term;
    }
    T::of(2.0) / T::PI().sqrt() * (-x2).exp() * sum
}

/// Continued fraction for `erfc(x)`, `x >= 3`, evaluated by Lentz's method.
fn erfc_cf<T: Real>(x: T) -> T {
    // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = T::min_positive_value() / T::epsilon();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..300 {
        let a = T::of_usize(n) * T::of(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f *= delta;
        if (delta - T::one()).abs() < T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (T::PI().sqrt() * f)
}

/// Complex error function on the strip `|Im z| <= 12`.
///
/// Uses the rapidly convergent exponential sum for `erf(x + iy)` built on the
/// real error function; the `x -> 0` terms are written with `sinc` so the
/// imaginary axis is covered without cancellation.
pub fn erf_complex<T: Real>(z: C<T>) -> Result<C<T>> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Range("complex error function needs a finite argument".into()));
    }
    if z.im.abs() > T::of(12.0) {
        return Err(Error::Range(format!("|Im z| = {} exceeds 12", z.im.abs())));
    }
    if z.re < T::zero() {
        return erf_complex(-z).map(|w| -w);
    }
    let (x, y) = (z.re, z.im);
    let pi = T::PI();
    let two = T::of(2.0);
    let ex2 = (-x * x).exp();
    let sinc = |u: T| if u == T::zero() { T::one() } else { u.sin() / u };
    let (s2, c2) = (two * x * y).sin_cos();
    // e^{-x^2}/(2 pi x) [(1 - cos 2xy) + i sin 2xy]
    let lead_re = ex2 * (y / pi) * (x * y).sin() * sinc(x * y);
    let lead_im = ex2 * (y / pi) * sinc(two * x * y);
    let mut sum_re = T::zero();
    let mut sum_im = T::zero();
    let n_max = (two * y.abs()).to_usize().unwrap_or(0) + 30;
    for n in 1..=n_max {
        let nf = T::of_usize(n);
        let w = (-nf * nf / T::of(4.0)).exp() / (nf * nf + T::of(4.0) * x * x);
        let (ch, sh) = ((nf * y).cosh(), (nf * y).sinh());
        let f = two * x - two * x * ch * c2 + nf * sh * s2;
        let g = two * x * ch * s2 + nf * sh * c2;
        sum_re += w * f;
        sum_im += w * g;
    }
    let k = two / pi * ex2;
    Ok(C::new(erf(x) + lead_re + k * sum_re, lead_im + k * sum_im))
}

/// Dawson integral `D(x) = exp(-x^2) int_0^x exp(t^2) dt`.
pub fn dawson<T: Real>(x: T) -> T {
    if x < T::zero() {
        return -dawson(-x);
    }
    if x <= T::of(7.0) {
        // exp(-x^2) sum x^{2n+1} / (n! (2n+1)), all terms positive
        let x2 = x * x;
        let mut power = x;
        let mut sum = x;
        let mut n = 0usize;
        loop {
            n += 1;
            power = power * x2 / T::of_usize(n);
            let term = power / T::of_usize(2 * n + 1);
            sum += term;
            if term <= sum * T::epsilon() * T::of(0.1) || n > 1000 {
                break;
            }
        }
        (-x2).exp() * sum
    } else {
        // 1/(2x) sum (2k-1)!! / (2x^2)^k
        let inv = (T::of(2.0) * x * x).recip();
        let mut term = T::one();
        let mut sum = T::one();
        for k in 1..60 {
            let next = term * T::of_usize(2 * k - 1) * inv;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < sum * T::epsilon() * T::of(0.1) {
                break;
            }
        }
        sum / (T::of(2.0) * x)
    }
}

/// Physicists' Hermite polynomial `H_n(z)` by the three-term recurrence.
pub fn hermite<T: Real>(n: usize, z: C<T>) -> Result<C<T>> {
    if n > 400 {
        return Err(Error::Range(format!("Hermite order {n} exceeds 400")));
    }
    let two = T::of(2.0);
    let mut prev = C::new(T::one(), T::zero());
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = z * two;
    for m in 1..n {
        let next = z * cur * two - prev * (two * T::of_usize(m));
        prev = cur;
        cur = next;
    }
    if !cur.re.is_finite() || !cur.im.is_finite() {
        return Err(Error::Numeric {
            message: format!("Hermite polynomial H_{n} overflowed"),
            residual: f64::INFINITY,
        });
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series of erf, used as an independent reference.
    fn erf_maclaurin(z: C<f64>, terms: usize) -> C<f64> {
        let mut sum = C::new(0.0, 0.0);
        let mut fact = 1.0;
        for n in 0..terms {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += z.powu(2 * n as u32 + 1) * (sign / (fact * (2 * n + 1) as f64));
        }
        sum * (2.0 / std::f64::consts::PI.sqrt())
    }

    #[test]
    fn erf_real_values() {
        assert_eq!(erf(0.0_f64), 0.0);
        assert!((erf(1.0_f64) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(2.5_f64) - 0.999_593_047_982_555).abs() < 1e-15);
        assert!((erf(6.0_f64) - 1.0).abs() < 1e-12);
        assert!((erfc(4.0_f64) - 1.541_725_790_028_002e-8).abs() < 1e-20);
        assert!((erf(-0.3_f64) + erf(0.3)).abs() < 1e-16);
        assert!((erfc(3.0_f64) - 2.209_049_699_858_544e-5).abs() < 1e-17);
    }

    #[test]
    fn erf_complex_against_maclaurin() {
        let w = erf_complex(C::new(0.0_f64, 1.0)).unwrap();
        assert_eq!(w.re, 0.0);
        let m = erf_maclaurin(C::new(0.0, 1.0), 40);
        assert!((w - m).norm() < 1e-13, "{w} vs {m}");
        assert_eq!(erf_complex(C::new(0.0_f64, 0.0)).unwrap(), C::new(0.0, 0.0));
        for &(x, y) in &[(0.3, 0.4), (1.1, -0.7), (-0.8, 1.5), (2.0, 2.0), (0.05, 2.5)] {
            let z = C::new(x, y);
            let a = erf_complex(z).unwrap();
            let b = erf_maclaurin(z, 80);
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{z}: {a} vs {b}");
        }
        assert!(erf_complex(C::new(0.0_f64, 12.5)).is_err());
    }

    #[test]
    fn erf_complex_conjugate_and_odd() {
        for &(x, y) in &[(0.5, 3.0), (4.0, -5.0), (7.0, 5.5), (1.0, 5.6)] {
            let z = C::new(x, y);
            let w = erf_complex(z).unwrap();
            assert!((erf_complex(z.conj()).unwrap() - w.conj()).norm() <= 1e-14 * w.norm());
            assert!((erf_complex(-z).unwrap() + w).norm() <= 1e-14 * w.norm());
        }
    }

    #[test]
    fn dawson_values() {
        assert_eq!(dawson(0.0_f64), 0.0);
        assert!((dawson(1.0_f64) - 0.538_079_506_912_768_4).abs() < 1e-15);
        assert!((dawson(-2.0_f64) + dawson(2.0)).abs() < 1e-16);
        // either side of the switch between series and asymptotic expansion
        assert!((dawson(6.9_f64) - 0.073_250_120_258_635_27).abs() < 1e-16);
        assert!((dawson(7.0_f64) - 0.072_180_974_658_236_3).abs() < 1e-16);
        assert!((dawson(7.5_f64) - 0.067_275_811_644_630_6).abs() < 1e-16);
        assert!((dawson(10.0_f64) - 0.050_253_847_187_598_53).abs() < 1e-15);
    }

    #[test]
    fn hermite_low_orders() {
        let z = C::new(0.3_f64, -1.2);
        assert_eq!(hermite(0, z).unwrap(), C::new(1.0, 0.0));
        assert_eq!(hermite(1, z).unwrap(), z * 2.0);
        assert_eq!(hermite(3, C::new(1.0_f64, 0.0)).unwrap(), C::new(-4.0, 0.0));
        assert!(hermite(401, z).is_err());
        assert!(hermite(400, C::new(1e300_f64, 0.0)).is_err());
    }

    #[test]
    fn hermite_matches_explicit_sum() {
        // H_n(z) = n! sum_m (-1)^m (2z)^{n-2m} / (m! (n-2m)!)
        let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
        for &z in &[C::new(0.7_f64, 0.2), C::new(-1.3, 0.9), C::new(0.1, -2.0)] {
            for n in 0..=10usize {
                let explicit = (0..=n / 2).fold(C::new(0.0, 0.0), |acc, m| {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    acc + (z * 2.0).powu((n - 2 * m) as u32) * (sign * fact(n) / (fact(m) * fact(n - 2 * m)))
                });
                let rec = hermite(n, z).unwrap();
                assert!((rec - explicit).norm() < 1e-12 * explicit.norm().max(1.0), "n={n}");
            }
        }
    }
}
