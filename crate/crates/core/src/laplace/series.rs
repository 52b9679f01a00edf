//! The convolution series for ρ and σ̃ in terms of h(ξ) = [ξ ≥ 1]/ξ,
//! whose transform is E(η).

use super::{invert_with, InversionOptions, Method, Transform, TransformSpec};
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use crate::scalar::Real;
use crate::specfun::{arctanh, dilog};

const INNER_TOL: f64 = 1e-12;

/// L⁻¹[E(η)^k/η] in closed form for k ≤ 2.
pub fn hk_closed_form<T: Real>(k: usize, xi: T) -> Result<T> {
    if xi.is_nan() {
        return Err(Error::domain("hk_closed_form", "NaN argument"));
    }
    match k {
        0 => Ok(if xi >= T::zero() { T::one() } else { T::zero() }),
        1 => Ok(if xi >= T::one() { xi.ln() } else { T::zero() }),
        2 => {
            if xi < T::lit(2.0) {
                return Ok(T::zero());
            }
            let l = xi.ln();
            Ok(-T::PI() * T::PI() / T::lit(6.0) + l * l + T::lit(2.0) * dilog(xi.recip())?)
        }
        _ => Err(Error::Unsupported(format!("no closed form for k = {k}"))),
    }
}

// ∫_1^{ξ−k+1} inner(ξ − t)/t dt, split where the inner function has kinks
fn convolve_once<T: Real, F>(k: usize, xi: T, mut inner: F) -> Result<T>
where
    F: FnMut(T) -> Result<T>,
{
    let upper = xi - T::from_usize_lossy(k) + T::one();
    let mut points = vec![T::one()];
    let mut j = xi.floor();
    if j == xi {
        j = j - T::one();
    }
    let lowest = T::from_usize_lossy(k - 1);
    while j > lowest {
        let t = xi - j;
        if t > T::one() && t < upper {
            points.push(t);
        }
        j = j - T::one();
    }
    points.push(upper);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let quad = Adaptive::new(T::lit(INNER_TOL).max(T::epsilon() * T::lit(64.0)), T::lit(1e-13).max(T::epsilon() * T::lit(64.0)));
    let mut failure = None;
    let est = quad.estimate(
        |t: T| match inner(xi - t) {
            Ok(v) => v / t,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        &points,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value)
}

fn h_cumulative<T: Real>(k: usize, xi: T, closed_base: bool) -> Result<T> {
    if xi < T::from_usize_lossy(k) {
        return Ok(T::zero());
    }
    if k <= 1 || (closed_base && k == 2) {
        return hk_closed_form(k, xi);
    }
    convolve_once(k, xi, |s| h_cumulative(k - 1, s, closed_base))
}

/// L⁻¹[E(η)^k/η](ξ) = ∫_{t₁+…+t_k ≤ ξ} Π h(t_i) by iterated numerical
/// convolution; exactly 0 for ξ < k.
pub fn convolve_h<T: Real>(k: usize, xi: T) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("convolve_h", "k must be >= 1"));
    }
    h_cumulative(k, xi, false)
}

/// L⁻¹[E(η)^k/√η](ξ); J₀ = 1/√(πξ), J₁ = (2/√(πξ)) arctanh √(1 − 1/ξ).
pub fn convolve_j<T: Real>(k: usize, xi: T) -> Result<T> {
    if xi <= T::from_usize_lossy(k) {
        return Ok(T::zero());
    }
    match k {
        0 => Ok((T::PI() * xi).sqrt().recip()),
        1 => Ok(T::lit(2.0) / (T::PI() * xi).sqrt() * arctanh((T::one() - xi.recip()).sqrt())?),
        _ => convolve_once(k, xi, |s| convolve_j(k - 1, s)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// ρ(1/a) = Σ (−1)^k/k! · L⁻¹[E^k/η](1/a)
    Permutation,
    /// σ̃(1/a) = Σ (−1)^k/(2^k k!) · √(π/a) L⁻¹[E^k/√η](1/a)
    Component,
}

/// The finite alternating series at ξ = 1/a; terms past ⌊1/a⌋ vanish
/// identically.
pub fn stepanov_series<T: Real>(a: T, kind: SeriesKind) -> Result<T> {
    if !(a > T::zero()) || a > T::one() {
        return Err(Error::domain("stepanov_series", format!("a = {a} outside (0, 1]")));
    }
    let xi = a.recip();
    let last = xi.floor().to_usize().unwrap_or(0);
    let mut sum = T::zero();
    let mut weight = T::one();
    for k in 0..=last {
        if k > 0 {
            weight = -weight / T::from_usize_lossy(k);
        }
        let term = match kind {
            SeriesKind::Permutation => h_cumulative(k, xi, true)?,
            SeriesKind::Component => {
                let w = weight / T::lit(2.0).powi(k as i32);
                sum += w * (T::PI() * xi).sqrt() * convolve_j(k, xi)?;
                continue;
            }
        };
        sum += weight * term;
    }
    Ok(sum)
}

/// Limiting P{Λ ≤ b√n} for the longest cycle of a random mapping:
/// √(π/b) · L⁻¹[e^{−E(√(2bη))}/√η](1/b), by Talbot inversion.
pub fn cycle_cdf_contour<T: Real>(b: T) -> Result<T> {
    let spec = TransformSpec::new(Transform::CycleCdf(b))?;
    let opts = InversionOptions {
        tol: T::lit(1e-9).max(T::epsilon() * T::lit(1e3)),
        ..InversionOptions::default()
    };
    let inv = invert_with(&spec, b.recip(), Some(Method::Talbot), &opts)?;
    Ok((T::PI() / b).sqrt() * inv.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dde::{rho_closed_form, sigma_closed_form};

    #[test]
    fn closed_forms() {
        assert_eq!(hk_closed_form(0, 0.3f64).unwrap(), 1.0);
        assert!((hk_closed_form(1, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(hk_closed_form(2, 2.0f64).unwrap().abs() < 1e-15);
        // mpmath
        assert!((hk_closed_form(2, 3.0f64).unwrap() - 0.294_441_353_918_482_5).abs() < 1e-14);
        assert!(matches!(hk_closed_form(3, 4.0f64), Err(Error::Unsupported(_))));
    }

    #[test]
    fn numerical_convolution_matches() {
        assert_eq!(convolve_h(1, 0.5f64).unwrap(), 0.0);
        assert_eq!(convolve_h(3, 2.999f64).unwrap(), 0.0);
        for xi in [2.5f64, 3.0, 4.0, 5.5] {
            let d = (convolve_h(2, xi).unwrap() - hk_closed_form(2, xi).unwrap()).abs();
            assert!(d < 1e-11, "xi={xi}: {d}");
        }
        assert!(convolve_h(3, 3.5f64).unwrap() > 0.0);
    }

    #[test]
    fn j1_closed_form() {
        let quad = Adaptive::new(1e-13, 1e-12);
        for xi in [1.5f64, 2.0, 3.7] {
            // t = ξ − s² removes the endpoint singularity
            let v = quad
                .integrate(|s: f64| 2.0 / ((xi - s * s) * std::f64::consts::PI.sqrt()), &[0.0, (xi - 1.0).sqrt()])
                .unwrap()
                .value;
            assert!((v - convolve_j(1, xi).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn series_match_closed_forms() {
        assert!((stepanov_series(1.0f64, SeriesKind::Permutation).unwrap() - 1.0).abs() < 1e-15);
        for i in 1..=20 {
            let a = 1.0 / 3.0 + i as f64 * (2.0 / 3.0) / 20.0;
            let d = stepanov_series(a, SeriesKind::Permutation).unwrap() - rho_closed_form(1.0 / a).unwrap();
            assert!(d.abs() < 1e-10, "a={a}: {d}");
        }
        for i in 1..=20 {
            let a = 0.5 + i as f64 * 0.5 / 20.0;
            let xi = 1.0 / a;
            let d = stepanov_series(a, SeriesKind::Component).unwrap() - xi.sqrt() * sigma_closed_form(xi).unwrap();
            assert!(d.abs() < 1e-10, "a={a}: {d}");
        }
        // mpmath: 1 − artanh(√0.4)
        assert!((stepanov_series(0.6f64, SeriesKind::Component).unwrap() - 0.254_501_845_502_595_8).abs() < 1e-12);
        assert!(stepanov_series(0.0f64, SeriesKind::Permutation).is_err());
    }

    #[test]
    fn cycle_cdf_limits() {
        assert!((cycle_cdf_contour(20.0f64).unwrap() - 1.0).abs() < 1e-6);
        assert!((cycle_cdf_contour(0.6842f64).unwrap() - 0.5).abs() < 2e-4);
        let mut prev = 0.0;
        for i in 1..30 {
            let v = cycle_cdf_contour(0.1 * i as f64).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }
}
