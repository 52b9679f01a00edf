use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_CF_ITERATIONS: usize = 20_000;

/// Exponential integral E(x) = ∫ₓ^∞ e^{−t}/t dt for x > 0.
///
/// Power series for x ≤ 1, Lentz continued fraction above.
pub fn e1_real<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() && x.is_nan() {
        return Err(Error::domain("e1_real", format!("x must be positive, got {x}")));
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    if x <= T::one() {
        Ok(-T::EULER_GAMMA - x.ln() + ein_series_real(x))
    } else {
        Ok(e1_cf_real(x))
    }
}

// Σ_{k≥1} (−1)^{k+1} x^k / (k·k!)
fn ein_series_real<T: Real>(x: T) -> T {
    let mut p = x;
    let mut sum = x;
    let mut k = 1usize;
    loop {
        k += 1;
        let kf = T::from_usize_lossy(k);
        p = -p * x / kf;
        let term = p / kf;
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.25) || k > 500 {
            return sum;
        }
    }
}

fn e1_cf_real<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let two = T::lit(2.0);
    let mut b = x + T::one();
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_CF_ITERATIONS {
        let fi = T::from_usize_lossy(i);
        let an = -fi * fi;
        b += two;
        d = T::one() / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    h * (-x).exp()
}

/// Principal-branch exponential integral E(z) for complex z off the cut
/// (−∞, 0].
///
/// The power series is used near the origin and wherever it cannot cancel
/// badly (left half-plane close to the cut); the continued fraction elsewhere.
pub fn e1_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("e1_complex", "non-finite argument"));
    }
    if z.im == T::zero() && z.re <= T::zero() {
        return Err(Error::domain(
            "e1_complex",
            format!("argument {} lies on the branch cut", z.re),
        ));
    }
    let r = z.norm();
    let use_series = r <= T::lit(2.0) || (z.re < T::zero() && r + z.re < T::lit(10.0));
    if use_series {
        Ok(-z.ln() - Complex::from(T::EULER_GAMMA) + ein_complex_series(z))
    } else {
        Ok(e1_cf_complex(z))
    }
}

/// Entire function Ein(z) = ∫₀^z (1 − e^{−t})/t dt = E(z) + γ + ln z.
pub fn ein_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() <= T::lit(2.0) || z.re < T::zero() {
        ein_complex_series(z)
    } else {
        e1_cf_complex(z) + Complex::from(T::EULER_GAMMA) + z.ln()
    }
}

fn ein_complex_series<T: Real>(z: Complex<T>) -> Complex<T> {
    let mut p = z;
    let mut sum = z;
    let mut k = 1usize;
    loop {
        k += 1;
        let kf = T::from_usize_lossy(k);
        p = -p * z / kf;
        let term = p / kf;
        sum += term;
        if term.norm() <= T::epsilon() * sum.norm() * T::lit(0.25) || k > 2000 {
            return sum;
        }
    }
}

fn e1_cf_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let one = Complex::from(T::one());
    let two = Complex::from(T::lit(2.0));
    let mut b = z + one;
    let mut c = Complex::from(T::one() / tiny);
    let mut d = one / b;
    let mut h = d;
    for i in 1..MAX_CF_ITERATIONS {
        let fi = T::from_usize_lossy(i);
        let an = Complex::from(-fi * fi);
        b += two;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex::from(tiny);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex::from(tiny);
        }
        d = one / d;
        let del = c * d;
        h *= del;
        if (del - one).norm() <= T::epsilon() {
            break;
        }
    }
    h * (-z).exp()
}
