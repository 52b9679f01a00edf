use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fixed Talbot inversion on the modified cotangent contour
/// z(θ) = (n/t)(−0.6122 + 0.5017 θ cot(0.6407 θ) + 0.2645 iθ), midpoint rule
/// in θ with `n` nodes. The transform must be analytic off (−∞, 0] and real
/// on the positive axis.
pub fn talbot<T, F>(f: F, t: T, n: usize) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    if !(t > T::zero()) {
        return Err(Error::domain("talbot", format!("t must be positive, got {t}")));
    }
    let (a, b, c, d) = (T::lit(-0.6122), T::lit(0.5017), T::lit(0.6407), T::lit(0.2645));
    let scale = T::from_usize_lossy(n) / t;
    let h = T::PI() * T::lit(2.0) / T::from_usize_lossy(n);
    let mut acc = T::zero();
    // nodes θ_k = (k + ½)h − π for θ_k > 0; the others are conjugates
    for k in n / 2..n {
        let th = (T::from_usize_lossy(k) + T::lit(0.5)) * h - T::PI();
        let ct = (c * th).cos() / (c * th).sin();
        let z = Complex::new(a + b * th * ct, d * th) * scale;
        let csc2 = T::one() / (c * th).sin().powi(2);
        let dz = Complex::new(b * (ct - c * th * csc2), d) * scale;
        let v = (z * t).exp() * f(z)? * dz;
        acc += v.im;
    }
    Ok(acc * T::lit(2.0) / T::from_usize_lossy(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_pairs() {
        // 1/(η+1) ↔ e^{−t}
        for t in [0.1, 1.0, 5.0] {
            let v = talbot(|z: Complex<f64>| Ok((z + 1.0).inv()), t, 32).unwrap();
            assert!((v - (-t as f64).exp()).abs() < 1e-12, "t={t}");
        }
        // 1/η² ↔ t
        let v = talbot(|z: Complex<f64>| Ok((z * z).inv()), 3.0, 32).unwrap();
        assert!((v - 3.0).abs() < 1e-11);
        // 1/√η ↔ 1/√(πt)
        let v = talbot(|z: Complex<f64>| Ok(z.sqrt().inv()), 2.0, 32).unwrap();
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }
}
