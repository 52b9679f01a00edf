use num_complex::Complex;

use crate::scalar::Real;

// Below this the positive-term erf series is used; above it the Laplace
// continued fraction for e^{x²}erfc(x).
const REAL_SWITCH: f64 = 1.5;
const COMPLEX_SWITCH: f64 = 2.5;
const MAX_CF_TERMS: usize = 5_000;

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::lit(2.0) - erfc(-x);
    }
    if x < T::lit(REAL_SWITCH) {
        T::one() - erf_series(x)
    } else {
        (-x * x).exp() * erfcx_cf(x)
    }
}

/// Scaled complementary error function e^{x²} erfc(x).
pub fn erfcx<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::lit(2.0) * (x * x).exp() - erfcx(-x);
    }
    if x < T::lit(REAL_SWITCH) {
        (x * x).exp() * (T::one() - erf_series(x))
    } else {
        erfcx_cf(x)
    }
}

// erf(x) = (2/√π) e^{−x²} Σ 2ⁿ x^{2n+1}/(2n+1)!!, all terms positive.
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..500usize {
        term *= T::lit(2.0) * x2 / T::from_usize_lossy(2 * n + 1);
        sum += term;
        if term <= T::epsilon() * sum * T::lit(0.25) {
            break;
        }
    }
    T::lit(2.0) / T::PI().sqrt() * (-x2).exp() * sum
}

fn erfcx_cf<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut f = x;
    let mut c = f;
    let mut d = T::zero();
    for n in 1..MAX_CF_TERMS {
        let a = T::from_usize_lossy(n) * T::lit(0.5);
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
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (T::PI().sqrt() * f).recip()
}

/// Scaled complementary error function e^{z²} erfc(z) for complex z.
///
/// Accurate in the closed right half-plane, which is where every transform
/// in this crate evaluates it; the left half-plane is reached through
/// erfcx(z) = 2e^{z²} − erfcx(−z).
pub fn erfcx_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re < T::zero() {
        return (z * z).exp() * T::lit(2.0) - erfcx_complex(-z);
    }
    if z.norm() < T::lit(COMPLEX_SWITCH) {
        // e^{z²} − (2z/√π) Σ (2z²)ⁿ/(2n+1)!!
        let w = z * z * T::lit(2.0);
        let mut term = Complex::from(T::one());
        let mut sum = term;
        for n in 1..500usize {
            term = term * w / T::from_usize_lossy(2 * n + 1);
            sum += term;
            if term.norm() <= T::epsilon() * sum.norm() * T::lit(0.25) {
                break;
            }
        }
        (z * z).exp() - z * sum * (T::lit(2.0) / T::PI().sqrt())
    } else {
        erfcx_cf_complex(z)
    }
}

fn erfcx_cf_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let tiny = T::min_positive_value() / T::epsilon();
    let one = Complex::from(T::one());
    let mut f = z;
    let mut c = f;
    let mut d = Complex::from(T::zero());
    for n in 1..MAX_CF_TERMS {
        let a = T::from_usize_lossy(n) * T::lit(0.5);
        d = z + d * a;
        if d.norm() < tiny {
            d = Complex::from(tiny);
        }
        c = z + c.inv() * a;
        if c.norm() < tiny {
            c = Complex::from(tiny);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - one).norm() <= T::epsilon() {
            break;
        }
    }
    (f * T::PI().sqrt()).inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Adaptive;

    #[test]
    fn erfc_reference_values() {
        assert_eq!(erfc(0.0f64), 1.0);
        // mpmath
        for (x, want) in [
            (0.3, 0.671_373_240_540_872_6),
            (1.0, 0.157_299_207_050_285_13),
            (1.5, 0.033_894_853_524_689_27),
            (2.5, 4.069_520_174_449_589_4e-4),
            (5.0, 1.537_459_794_428_034_9e-12),
            (-1.2, 1.910_313_978_229_635_4),
        ] {
            let v = erfc(x);
            assert!((v / want - 1.0f64).abs() < 1e-14, "x={x}: {v}");
        }
        // deep tail: only the 1e−300 absolute floor is promised
        assert!(erfc(27.0f64).abs() < 1e-300);
    }

    #[test]
    fn erfc_at_one_by_quadrature() {
        let q = Adaptive::new(1e-15, 1e-13);
        let tail = q
            .integrate(|t: f64| (-t * t).exp(), &[1.0, 2.0, 4.0, 8.0])
            .unwrap()
            .value;
        let v = 2.0 / std::f64::consts::PI.sqrt() * tail;
        assert!((erfc(1.0f64) - v).abs() < 1e-13);
    }

    #[test]
    fn erfc_symmetry_grid() {
        for i in -400..=400 {
            let x = i as f64 * 0.0125;
            assert!((erfc(x) + erfc(-x) - 2.0).abs() <= 1e-15, "x={x}");
        }
    }

    #[test]
    fn scaled_real() {
        for (x, want) in [
            (0.5, 0.615_690_344_192_925_9),
            (3.0, 0.179_001_151_181_389_95),
            (30.0, 0.018_795_888_861_416_75),
        ] {
            assert!((erfcx(x) / want - 1.0f64).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn scaled_complex() {
        let s2 = 2f64.sqrt();
        let sp = std::f64::consts::PI.sqrt();
        let cases = [
            (Complex::new(1.0, 1.0) / s2, Complex::new(0.415_588_095_907_848_66, -0.230_319_787_554_910_64)),
            (Complex::new(1.0, 3.0) / s2, Complex::new(0.108_752_128_954_652_3, -0.248_513_777_867_919_2)),
            (Complex::new(1.0, 10.0) / sp, Complex::new(0.010_395_535_315_244_813, -0.100_556_911_360_409_61)),
            (Complex::new(1.0, 40.0) / s2, Complex::new(4.993_023_690_281_66e-4, -0.019_947_098_358_066_297)),
            (Complex::new(0.1, 2.4), Complex::new(0.017_396_928_002_164_938, -0.263_201_173_396_862_25)),
            (Complex::new(-1.0, 0.5), Complex::new(1.896_405_959_545_300_3, -3.689_990_588_519_449)),
        ];
        for (z, want) in cases {
            let v = erfcx_complex(z);
            assert!((v - want).norm() / want.norm() < 1e-13, "z={z}: {v} vs {want}");
        }
        let x = 0.8f64;
        assert!((erfcx_complex(Complex::new(x, 0.0)).re - erfcx(x)).abs() < 1e-15);
    }
}
