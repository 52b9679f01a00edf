use super::{forward_laplace_real, invert_with, InversionOptions, Transform, TransformSpec};
use crate::error::Result;
use crate::scalar::Real;
use crate::specfun::erfcx;

/// One grid point of the divisibility probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisibilityRow<T> {
    pub eta: T,
    /// π/(√(2π) + πη)
    pub lower: T,
    /// √(π/2) e^{η²/2} erfc(η/√2)
    pub center: T,
    /// π/(√(2π) + 2η)
    pub upper: T,
    pub chain_holds: bool,
    /// |√(Rayleigh transform) − e^{η²/π}erfc(η/√π)| / √(Rayleigh transform)
    pub approx_rel_error: T,
    /// |L[lower inverse bound] − 1/√(1 + √(π/2)η)|
    pub lower_roundtrip_error: T,
    /// |L[upper inverse bound] − 1/√(1 + √(2/π)η)|
    pub upper_roundtrip_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityReport<T> {
    pub rows: Vec<DivisibilityRow<T>>,
    pub chain_holds_everywhere: bool,
    pub max_approx_rel_error: T,
    pub max_roundtrip_error: T,
    /// (ξ, L⁻¹[√(half-normal transform)](ξ)) at ξ = 0.01 and ξ = 1
    pub root_inverse_small: (T, T),
    pub root_inverse_one: (T, T),
    pub root_inverse_ratio: T,
    /// Failures while computing a row are kept as messages, not raised.
    pub failures: Vec<String>,
}

const ROUNDTRIP_TOL: f64 = 1e-11;

fn rayleigh_transform<T: Real>(eta: T) -> T {
    T::one() - T::FRAC_PI_2().sqrt() * eta * erfcx(eta * T::lit(0.5).sqrt())
}

fn row<T: Real>(eta: T) -> Result<DivisibilityRow<T>> {
    let pi = T::PI();
    let s2pi = (pi * T::lit(2.0)).sqrt();
    let lower = pi / (s2pi + pi * eta);
    let center = T::FRAC_PI_2().sqrt() * erfcx(eta * T::lit(0.5).sqrt());
    let upper = pi / (s2pi + T::lit(2.0) * eta);
    let root = rayleigh_transform(eta).sqrt();
    let approx = erfcx(eta / pi.sqrt());

    let a_lo = (T::lit(2.0) / pi).sqrt();
    let a_hi = T::FRAC_PI_2().sqrt();
    let c_lo = T::lit(2.0).powf(T::lit(0.25)) / pi.powf(T::lit(0.75));
    let c_hi = T::one() / (T::lit(2.0) * pi).powf(T::lit(0.25));
    let tol = T::lit(ROUNDTRIP_TOL).max(T::epsilon() * T::lit(1e4));
    let fl = forward_laplace_real(|x: T| c_lo / x.sqrt() * (-a_lo * x).exp(), eta, tol)?;
    let fu = forward_laplace_real(|x: T| c_hi / x.sqrt() * (-a_hi * x).exp(), eta, tol)?;
    let tl = (T::one() + a_hi * eta).sqrt().recip();
    let tu = (T::one() + a_lo * eta).sqrt().recip();
    Ok(DivisibilityRow {
        eta,
        lower,
        center,
        upper,
        chain_holds: lower < center && center < upper,
        approx_rel_error: ((root - approx) / root).abs(),
        lower_roundtrip_error: (fl - tl).abs(),
        upper_roundtrip_error: (fu - tu).abs(),
    })
}

/// Bound chain, approximation quality, inverse-bound round trips and the
/// m = 2 root inversion, evaluated on a grid of positive η.
pub fn divisibility_report<T: Real>(eta_grid: &[T]) -> DivisibilityReport<T> {
    let mut rows = Vec::with_capacity(eta_grid.len());
    let mut failures = Vec::new();
    for &eta in eta_grid {
        if !(eta > T::zero()) {
            failures.push(format!("eta = {eta}: not positive"));
            continue;
        }
        match row(eta) {
            Ok(r) => rows.push(r),
            Err(e) => failures.push(format!("eta = {eta}: {e}")),
        }
    }
    let chain = !rows.is_empty() && rows.iter().all(|r| r.chain_holds);
    let max_approx = rows.iter().fold(T::zero(), |m, r| m.max(r.approx_rel_error));
    let max_rt = rows
        .iter()
        .fold(T::zero(), |m, r| m.max(r.lower_roundtrip_error).max(r.upper_roundtrip_error));

    let small = T::lit(0.01);
    let one = T::one();
    let mut root_at = |xi: T| -> T {
        let spec = TransformSpec::new(Transform::HalfNormalRoot(2)).expect("valid root order");
        let opts = InversionOptions {
            tol: T::lit(1e-4),
            ..InversionOptions::default()
        };
        match invert_with(&spec, xi, None, &opts) {
            Ok(v) => v.value,
            Err(e) => {
                failures.push(format!("root inverse at {xi}: {e}"));
                T::nan()
            }
        }
    };
    let v_small = root_at(small);
    let v_one = root_at(one);
    DivisibilityReport {
        rows,
        chain_holds_everywhere: chain,
        max_approx_rel_error: max_approx,
        max_roundtrip_error: max_rt,
        root_inverse_small: (small, v_small),
        root_inverse_one: (one, v_one),
        root_inverse_ratio: v_small / v_one,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_approximation() {
        let grid: Vec<f64> = (1..=200).map(|i| i as f64 * 0.1).collect();
        let r = divisibility_report(&grid);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert!(r.chain_holds_everywhere);
        assert!(r.max_approx_rel_error < 0.005);
        assert!(r.max_roundtrip_error < 1e-8);
        assert!(r.root_inverse_ratio > 5.0, "{}", r.root_inverse_ratio);
    }
}
