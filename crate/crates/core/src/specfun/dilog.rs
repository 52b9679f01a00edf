use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dilogarithm Li₂(x) = Σ_{k≥1} x^k/k² for real x ≤ 1.
///
/// Direct series on |x| ≤ 1/2; the reflection, duplication and inversion
/// identities map every other argument into that disc.
pub fn dilog<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x > T::one() {
        return Err(Error::domain("dilog", format!("x must be <= 1, got {x}")));
    }
    Ok(dilog_unchecked(x))
}

fn dilog_unchecked<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    let pi2_6 = T::PI() * T::PI() / T::lit(6.0);
    if x == T::one() {
        pi2_6
    } else if x.abs() <= half {
        series(x)
    } else if x > half {
        // Li₂(x) + Li₂(1−x) = π²/6 − ln x ln(1−x)
        pi2_6 - x.ln() * (-x).ln_1p() - series(T::one() - x)
    } else if x >= -T::one() {
        // Li₂(x) + Li₂(−x) = ½ Li₂(x²)
        half * dilog_unchecked(x * x) - dilog_unchecked(-x)
    } else {
        // Li₂(x) + Li₂(1/x) = −π²/6 − ½ ln²(−x) for x < 0
        let l = (-x).ln();
        -pi2_6 - half * l * l - dilog_unchecked(x.recip())
    }
}

fn series<T: Real>(x: T) -> T {
    let mut p = x;
    let mut sum = x;
    for k in 2..400usize {
        p *= x;
        let kf = T::from_usize_lossy(k);
        let term = p / (kf * kf);
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() * T::lit(0.25) {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn special_values() {
        assert_eq!(dilog(0.0f64).unwrap(), 0.0);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((dilog(1.0f64).unwrap() - pi2 / 6.0).abs() < 1e-15);
        let l2 = std::f64::consts::LN_2;
        let v = dilog(0.5f64).unwrap();
        assert!((v - (pi2 / 12.0 - l2 * l2 / 2.0)).abs() < 1e-15);
        assert!((v - 0.582_240_526_465_012_5).abs() < 1e-15);
        assert!((dilog(-1.0f64).unwrap() + pi2 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn against_reference_values() {
        // mpmath polylog(2, x)
        for (x, want) in [
            (-0.7, -0.605_158_402_337_705_3),
            (-3.0, -1.939_375_420_766_709),
            (0.9, 1.299_714_723_004_958_8),
        ] {
            let v = dilog(x).unwrap();
            assert!((v / want - 1.0f64).abs() < 1e-14, "x={x}: {v}");
        }
    }

    #[test]
    fn domain() {
        assert!(dilog(1.000_001f64).is_err());
    }

    proptest! {
        #[test]
        fn reflection_identity(x in 0.001f64..0.999) {
            let lhs = dilog(x).unwrap() + dilog(1.0 - x).unwrap();
            let rhs = std::f64::consts::PI.powi(2) / 6.0 - x.ln() * (1.0 - x).ln();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
