//! Laplace transforms: forward quadrature, Talbot and Bromwich inversion,
//! the h_k convolution series, and the divisibility probes.

mod bromwich;
mod divisibility;
mod forward;
mod series;
mod talbot;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{e1_complex, erfcx_complex, gamma};

pub use bromwich::{bromwich, BromwichOptions};
pub use divisibility::{divisibility_report, DivisibilityReport, DivisibilityRow};
pub use forward::{forward_laplace, forward_laplace_real};
pub use series::{convolve_h, convolve_j, cycle_cdf_contour, hk_closed_form, stepanov_series, SeriesKind};
pub use talbot::talbot;

/// Default absolute accuracy target for inversions.
pub const INVERSION_TOL: f64 = 1e-8;

/// Where a transform may be continued to the left of its abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analyticity {
    /// Analytic off (−∞, 0] and bounded on a contour wrapping that cut.
    BranchCut,
    /// Entire, but large on the left (e.g. e^{−E(η)} or e^{η²/2}); only
    /// vertical lines are safe.
    Entire,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Talbot,
    Bromwich,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Talbot => "talbot",
            Method::Bromwich => "bromwich",
        })
    }
}

/// coeff · e^{−shift·η} · η^{−power}, whose inverse is
/// coeff · (ξ − shift)₊^{power−1} / Γ(power).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTerm<T> {
    pub coeff: T,
    pub shift: T,
    pub power: T,
}

impl<T: Real> AsymptoticTerm<T> {
    pub fn transform(&self, eta: Complex<T>) -> Complex<T> {
        let mut v = eta.powf(-self.power) * self.coeff;
        if self.shift != T::zero() {
            v = v * (-eta * self.shift).exp();
        }
        v
    }

    pub fn inverse(&self, xi: T) -> T {
        let s = xi - self.shift;
        if s <= T::zero() {
            return T::zero();
        }
        self.coeff * s.powf(self.power - T::one()) / gamma(self.power)
    }
}

pub type TransformFn<T> = Arc<dyn Fn(Complex<T>) -> Complex<T> + Send + Sync>;

#[derive(Clone)]
pub enum Transform<T> {
    /// e^{−E(η)}/η, the transform of ρ.
    Dickman,
    /// √π e^{−E(η)/2}/√η, the transform of σ.
    Watterson,
    /// Γ(θ) e^{−θE(η)}/η^θ, the transform of g(·; θ).
    Theta(T),
    /// e^{−E(√(2bη))}/√η.
    CycleCdf(T),
    /// e^{η²/2} erfc(η/√2), the transform of √(2/π) e^{−ξ²/2}.
    HalfNormal,
    /// 1 − √(π/2) η e^{η²/2} erfc(η/√2), the transform of ξ e^{−ξ²/2}.
    Rayleigh,
    /// e^{η²/π} erfc(η/√π), the transform of e^{−πξ²/4}.
    ErfcGauss,
    /// (e^{η²/2} erfc(η/√2))^{1/m}, principal branch.
    HalfNormalRoot(u32),
    Custom {
        name: String,
        f: TransformFn<T>,
        terms: Vec<AsymptoticTerm<T>>,
    },
}

impl<T: Real> fmt::Debug for Transform<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Dickman => f.write_str("Dickman"),
            Transform::Watterson => f.write_str("Watterson"),
            Transform::Theta(t) => write!(f, "Theta({t})"),
            Transform::CycleCdf(b) => write!(f, "CycleCdf({b})"),
            Transform::HalfNormal => f.write_str("HalfNormal"),
            Transform::Rayleigh => f.write_str("Rayleigh"),
            Transform::ErfcGauss => f.write_str("ErfcGauss"),
            Transform::HalfNormalRoot(m) => write!(f, "HalfNormalRoot({m})"),
            Transform::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A transform together with its declared analyticity.
#[derive(Clone)]
pub struct TransformSpec<T> {
    pub transform: Transform<T>,
    pub analyticity: Analyticity,
}

impl<T: Real> fmt::Debug for TransformSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformSpec")
            .field("transform", &self.transform)
            .field("analyticity", &self.analyticity)
            .finish()
    }
}

// terms kept in the θ-family expansion: k + j ≤ ORDER
const THETA_ORDER: usize = 5;
// terms kept in the erfc-type expansions
const ERFC_ORDER: usize = 6;

impl<T: Real> TransformSpec<T> {
    pub fn new(transform: Transform<T>) -> Result<Self> {
        let analyticity = match &transform {
            Transform::Theta(t) if !(*t > T::zero()) => {
                return Err(Error::InvalidSpec(format!("theta must be positive, got {t}")))
            }
            Transform::CycleCdf(b) if !(*b > T::zero()) => {
                return Err(Error::InvalidSpec(format!("b must be positive, got {b}")))
            }
            Transform::HalfNormalRoot(0) => return Err(Error::InvalidSpec("root order must be >= 1".into())),
            Transform::CycleCdf(_) => Analyticity::BranchCut,
            Transform::Custom { .. } => Analyticity::BranchCut,
            _ => Analyticity::Entire,
        };
        Ok(Self { transform, analyticity })
    }

    pub fn custom(
        name: impl Into<String>,
        f: TransformFn<T>,
        analyticity: Analyticity,
        terms: Vec<AsymptoticTerm<T>>,
    ) -> Self {
        Self {
            transform: Transform::Custom {
                name: name.into(),
                f,
                terms,
            },
            analyticity,
        }
    }

    fn theta(&self) -> Option<T> {
        match self.transform {
            Transform::Dickman => Some(T::one()),
            Transform::Watterson => Some(T::lit(0.5)),
            Transform::Theta(t) => Some(t),
            _ => None,
        }
    }

    /// Evaluates the transform at η (Re η > 0 for the entire ones).
    pub fn eval(&self, eta: Complex<T>) -> Result<Complex<T>> {
        let sqrt_half = T::lit(0.5).sqrt();
        if let Some(theta) = self.theta() {
            let e = e1_complex(eta)?;
            return Ok((-e * theta).exp() * eta.powf(-theta) * gamma(theta));
        }
        Ok(match &self.transform {
            Transform::CycleCdf(b) => {
                let w = (eta * (*b + *b)).sqrt();
                (-e1_complex(w)?).exp() / eta.sqrt()
            }
            Transform::HalfNormal => erfcx_complex(eta * sqrt_half),
            Transform::Rayleigh => {
                let c = T::FRAC_PI_2().sqrt();
                Complex::from(T::one()) - eta * erfcx_complex(eta * sqrt_half) * c
            }
            Transform::ErfcGauss => erfcx_complex(eta / T::PI().sqrt()),
            Transform::HalfNormalRoot(m) => {
                erfcx_complex(eta * sqrt_half).powf(T::one() / T::from_usize_lossy(*m as usize))
            }
            Transform::Custom { f, .. } => f(eta),
            _ => unreachable!("theta family handled above"),
        })
    }

    /// Large-|η| expansion on vertical lines, each term with an exact inverse.
    pub fn asymptotic_terms(&self) -> Vec<AsymptoticTerm<T>> {
        if let Some(theta) = self.theta() {
            return theta_terms(theta, THETA_ORDER);
        }
        let two_over_pi = T::lit(2.0) / T::PI();
        match &self.transform {
            Transform::CycleCdf(_) => vec![AsymptoticTerm {
                coeff: T::one(),
                shift: T::zero(),
                power: T::lit(0.5),
            }],
            Transform::HalfNormal => erfc_terms(two_over_pi.sqrt(), T::one(), ERFC_ORDER),
            Transform::ErfcGauss => erfc_terms(T::one(), T::PI() * T::lit(0.5), ERFC_ORDER),
            Transform::Rayleigh => (1..=ERFC_ORDER)
                .map(|k| AsymptoticTerm {
                    coeff: sign::<T>(k + 1) * double_factorial::<T>(2 * k as i64 - 1),
                    shift: T::zero(),
                    power: T::from_usize_lossy(2 * k),
                })
                .collect(),
            Transform::HalfNormalRoot(m) => {
                let p = T::one() / T::from_usize_lossy(*m as usize);
                let s: Vec<T> = (0..=ERFC_ORDER)
                    .map(|k| sign::<T>(k) * double_factorial::<T>(2 * k as i64 - 1))
                    .collect();
                let g = series_power(&s, p);
                let lead = two_over_pi.powf(p * T::lit(0.5));
                g.iter()
                    .enumerate()
                    .map(|(j, &gj)| AsymptoticTerm {
                        coeff: lead * gj,
                        shift: T::zero(),
                        power: p + T::from_usize_lossy(2 * j),
                    })
                    .collect()
            }
            Transform::Custom { terms, .. } => terms.clone(),
            _ => Vec::new(),
        }
    }
}

fn sign<T: Real>(k: usize) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

// (2k−1)!! with (−1)!! = 1
fn double_factorial<T: Real>(n: i64) -> T {
    let mut acc = T::one();
    let mut i = n;
    while i > 1 {
        acc *= T::lit(i as f64);
        i -= 2;
    }
    acc
}

// lead · Σ_k (−1)^k (2k−1)!! scale^k η^{−(2k+1)}
fn erfc_terms<T: Real>(lead: T, scale: T, order: usize) -> Vec<AsymptoticTerm<T>> {
    (0..=order)
        .map(|k| AsymptoticTerm {
            coeff: lead * sign(k) * double_factorial::<T>(2 * k as i64 - 1) * scale.powi(k as i32),
            shift: T::zero(),
            power: T::from_usize_lossy(2 * k + 1),
        })
        .collect()
}

// f^p for a series with f_0 = 1 (Miller's recurrence).
fn series_power<T: Real>(f: &[T], p: T) -> Vec<T> {
    let n = f.len();
    let mut g = vec![T::zero(); n];
    g[0] = T::one();
    for m in 1..n {
        let mut acc = T::zero();
        for k in 1..=m {
            let w = (p + T::one()) * T::from_usize_lossy(k) - T::from_usize_lossy(m);
            acc += w * f[k] * g[m - k];
        }
        g[m] = acc / T::from_usize_lossy(m);
    }
    g
}

fn poly_mul<T: Real>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

// Γ(θ) e^{−θE(η)}/η^θ with E(η) = e^{−η}η^{−1}P(1/η), P(u) = Σ (−1)^j j! u^j:
// Γ(θ) Σ_k (−θ)^k/k! [P^k]_j e^{−kη} η^{−(θ+k+j)}.
fn theta_terms<T: Real>(theta: T, order: usize) -> Vec<AsymptoticTerm<T>> {
    let len = order + 1;
    let mut p = vec![T::zero(); len];
    let mut fact = T::one();
    for (j, pj) in p.iter_mut().enumerate() {
        if j > 0 {
            fact *= T::from_usize_lossy(j);
        }
        *pj = sign::<T>(j) * fact;
    }
    let g = gamma(theta);
    let mut terms = Vec::new();
    let mut pk = vec![T::zero(); len];
    pk[0] = T::one();
    let mut ck = g;
    for k in 0..=order {
        if k > 0 {
            pk = poly_mul(&pk, &p, len);
            ck = ck * (-theta) / T::from_usize_lossy(k);
        }
        for (j, &pkj) in pk.iter().enumerate().take(order - k + 1) {
            if pkj == T::zero() {
                continue;
            }
            terms.push(AsymptoticTerm {
                coeff: ck * pkj,
                shift: T::from_usize_lossy(k),
                power: theta + T::from_usize_lossy(k + j),
            });
        }
    }
    terms
}

/// Result of an inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion<T> {
    pub value: T,
    pub error: T,
    pub method: Method,
}

#[derive(Debug, Clone, Copy)]
pub struct InversionOptions<T> {
    pub tol: T,
    pub talbot_nodes: usize,
    pub bromwich: BromwichOptions<T>,
}

impl<T: Real> Default for InversionOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(INVERSION_TOL),
            talbot_nodes: 64,
            bromwich: BromwichOptions::default(),
        }
    }
}

/// The method used when none is forced.
pub fn default_method(a: Analyticity) -> Method {
    match a {
        Analyticity::BranchCut => Method::Talbot,
        Analyticity::Entire => Method::Bromwich,
    }
}

/// f(ξ) from its transform, choosing the contour from the declared
/// analyticity.
pub fn invert<T: Real>(spec: &TransformSpec<T>, xi: T) -> Result<T> {
    Ok(invert_with(spec, xi, None, &InversionOptions::default())?.value)
}

pub fn invert_with<T: Real>(
    spec: &TransformSpec<T>,
    xi: T,
    method: Option<Method>,
    opts: &InversionOptions<T>,
) -> Result<Inversion<T>> {
    if !(xi > T::zero()) || !xi.is_finite() {
        return Err(Error::domain("invert", format!("xi must be positive, got {xi}")));
    }
    let method = method.unwrap_or(default_method(spec.analyticity));
    let f = |z: Complex<T>| spec.eval(z);
    match method {
        Method::Talbot => {
            if spec.analyticity == Analyticity::Entire {
                return Err(Error::MethodMismatch(format!(
                    "{:?} grows without bound for Re η → −∞; a Talbot contour is invalid",
                    spec.transform
                )));
            }
            let n = opts.talbot_nodes.max(8);
            let hi = talbot(&f, xi, n)?;
            let lo = talbot(&f, xi, n * 3 / 4)?;
            let err = (hi - lo).abs();
            if err > opts.tol {
                return Err(Error::Accuracy {
                    estimate: err.to_f64_lossy(),
                    requested: opts.tol.to_f64_lossy(),
                });
            }
            Ok(Inversion {
                value: hi,
                error: err,
                method,
            })
        }
        Method::Bromwich => {
            let terms = spec.asymptotic_terms();
            let mut o = opts.bromwich;
            o.tol = opts.tol;
            let est = bromwich(&f, &terms, xi, &o)?;
            Ok(Inversion {
                value: est.value,
                error: est.error,
                method,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dde::{rho_closed_form, sigma_closed_form};

    #[test]
    fn asymptotic_terms_match_transform_far_out() {
        for tr in [Transform::Dickman, Transform::Theta(1.5), Transform::HalfNormal, Transform::Rayleigh, Transform::ErfcGauss, Transform::HalfNormalRoot(2)] {
            let spec = TransformSpec::<f64>::new(tr.clone()).unwrap();
            let eta = Complex::new(1.0, 60.0);
            let exact = spec.eval(eta).unwrap();
            let approx: Complex<f64> = spec.asymptotic_terms().iter().map(|t| t.transform(eta)).sum();
            assert!((exact - approx).norm() < 1e-8 * exact.norm(), "{tr:?}: {exact} vs {approx}");
        }
    }

    #[test]
    fn entire_transforms_invert() {
        let d = TransformSpec::new(Transform::Dickman).unwrap();
        assert!((invert(&d, 2.0f64).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-9);
        assert!((invert(&d, 2.5f64).unwrap() - rho_closed_form(2.5).unwrap()).abs() < 1e-9);
        let w = TransformSpec::new(Transform::Watterson).unwrap();
        assert!((invert(&w, 1.5f64).unwrap() - sigma_closed_form(1.5).unwrap()).abs() < 1e-9);
        let e = TransformSpec::new(Transform::ErfcGauss).unwrap();
        let want = (-std::f64::consts::PI / 4.0).exp();
        assert!((invert(&e, 1.0f64).unwrap() - want).abs() < 1e-9);
        let h = TransformSpec::new(Transform::HalfNormal).unwrap();
        let want = (2.0 / std::f64::consts::PI).sqrt() * (-0.5f64 * 1.7 * 1.7).exp();
        assert!((invert(&h, 1.7f64).unwrap() - want).abs() < 1e-9);
        let r = TransformSpec::new(Transform::Rayleigh).unwrap();
        assert!((invert(&r, 1.2f64).unwrap() - 1.2 * (-0.72f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn talbot_refused_for_entire() {
        let d = TransformSpec::<f64>::new(Transform::Dickman).unwrap();
        let r = invert_with(&d, 2.0, Some(Method::Talbot), &InversionOptions::default());
        assert!(matches!(r, Err(Error::MethodMismatch(_))));
    }

    #[test]
    fn custom_branch_cut_transform() {
        // 1/√(η + 1) ↔ e^{−ξ}/√(πξ)
        let spec = TransformSpec::custom(
            "shifted-root",
            Arc::new(|z: Complex<f64>| (z + 1.0).sqrt().inv()),
            Analyticity::BranchCut,
            Vec::new(),
        );
        let xi = 0.7f64;
        let want = (-xi).exp() / (std::f64::consts::PI * xi).sqrt();
        assert!((invert(&spec, xi).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn invalid_specs() {
        assert!(TransformSpec::<f64>::new(Transform::Theta(0.0)).is_err());
        assert!(TransformSpec::<f64>::new(Transform::CycleCdf(-1.0)).is_err());
        let d = TransformSpec::<f64>::new(Transform::Dickman).unwrap();
        assert!(invert(&d, -1.0).is_err());
    }
}
