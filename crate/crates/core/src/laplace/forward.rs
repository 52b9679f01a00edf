use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::{Adaptive, Estimate};
use crate::scalar::Real;

// dyadic panels [2^j, 2^{j+1}] are tried up to this exponent
const MAX_DYADIC: i32 = 40;

/// ∫₀^∞ e^{−ηξ} f(ξ) dξ for Re η > 0.
///
/// [0, 1] is integrated in ξ = u² (which removes ξ^{−1/2} endpoint
/// behaviour), then dyadic panels [2^j, 2^{j+1}] until two consecutive
/// panels fall below the tolerance.
pub fn forward_laplace<T, F>(mut f: F, eta: Complex<T>, tol: T) -> Result<Estimate<Complex<T>, T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !(eta.re > T::zero()) {
        return Err(Error::domain("forward_laplace", "Re η must be positive"));
    }
    let quad = Adaptive::new(tol * T::lit(0.01), T::lit(1e-13)).with_max_segments(4000);
    let two = T::lit(2.0);
    let head = quad.estimate(
        |u: T| {
            let x = u * u;
            if x == T::zero() {
                return Complex::from(T::zero());
            }
            (-eta * x).exp() * (f(x) * two * u)
        },
        &[T::zero(), T::lit(0.5), T::one()],
    );
    let mut value = head.value;
    let mut error = head.error;
    let mut evals = head.evaluations;
    let mut small = 0;
    let mut last = T::infinity();
    for j in 0..MAX_DYADIC {
        let a = two.powi(j);
        let b = a * two;
        let mid = (a + b) * T::lit(0.5);
        let part = quad.estimate(|x: T| (-eta * x).exp() * f(x), &[a, mid, b]);
        value += part.value;
        error += part.error;
        evals += part.evaluations;
        last = part.value.norm();
        if last < tol * T::lit(0.01) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let converged = error <= tol && last < tol;
    if !converged {
        return Err(Error::Accuracy {
            estimate: error.max(last).to_f64_lossy(),
            requested: tol.to_f64_lossy(),
        });
    }
    Ok(Estimate {
        value,
        error,
        evaluations: evals,
        converged,
    })
}

/// Real η convenience wrapper returning the value only.
pub fn forward_laplace_real<T, F>(f: F, eta: T, tol: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    Ok(forward_laplace(f, Complex::new(eta, T::zero()), tol)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{e1_real, erfcx};

    #[test]
    fn constant_and_gaussian() {
        let v = forward_laplace_real(|_| 1.0f64, 2.0, 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let v = forward_laplace_real(|x: f64| c * (-0.5 * x * x).exp(), 1.0, 1e-10).unwrap();
        // mpmath: e^{1/2} erfc(1/√2)
        assert!((v - 0.523_156_583_730_246_7).abs() < 1e-10);
        assert!((v - erfcx(0.5f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity() {
        // ξ^{−1/2} e^{−ξ} ↔ √(π/(η+1))
        let v = forward_laplace_real(|x: f64| (-x).exp() / x.sqrt(), 0.5, 1e-10).unwrap();
        assert!((v - (std::f64::consts::PI / 1.5).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn complex_argument() {
        // h(ξ) = [ξ ≥ 1]/ξ ↔ E(η)
        let eta = Complex::new(1.0, 0.0);
        let v = forward_laplace(|x: f64| if x >= 1.0 { 1.0 / x } else { 0.0 }, eta, 1e-10).unwrap();
        assert!((v.value.re - e1_real(1.0).unwrap()).abs() < 1e-10);
        let w = forward_laplace(|x: f64| (-x).exp(), Complex::new(1.0, 2.0), 1e-10).unwrap();
        assert!((w.value - Complex::new(2.0, 2.0).inv()).norm() < 1e-10);
    }

    #[test]
    fn slow_tail_is_reported() {
        let r = forward_laplace(|_| 1.0f64, Complex::new(1e-12, 0.0), 1e-10);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }
}
