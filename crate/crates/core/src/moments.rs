//! Moment constants of the longest cycles, and the mode and median of the
//! longest one.
//!
//! Everything rests on
//! G_{r,h} = 1/(h!(r−1)!) ∫_0^∞ x^{h−1} E(x)^{r−1} e^{−E(x)−x} dx,
//! which is E[V_r^h] for the r-th largest part V_r of a Poisson–Dirichlet(1)
//! partition. A cycle length is N·V_r with N independent of V, so every
//! moment factors through the regime's moments of N.

use rayon::prelude::*;

use crate::distributions::{connected_cycle_cdf, LimitLaws, Regime};
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use crate::roots::brent;
use crate::scalar::Real;
use crate::specfun::e1_real;

/// Quadrature target used by [`moment_table`] callers that have no opinion.
pub const DEFAULT_TOL: f64 = 1e-12;

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

// x^{h−1} E(x)^{r−1} e^{−E(x)−x}
fn g_integrand<T: Real>(x: T, r: usize, h: usize) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let e = e1_real(x).unwrap_or(T::zero());
    x.powi(h as i32 - 1) * e.powi(r as i32 - 1) * (-e - x).exp()
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if !(tol > T::zero()) {
        return Err(Error::domain("tol", format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

/// G_{r,h}, to absolute accuracy `tol`.
///
/// On (0, 1] the substitution x = e^{−u} turns the logarithmic endpoint into
/// an exponentially decaying tail in u.
pub fn g_constant<T: Real>(r: usize, h: usize, tol: T) -> Result<T> {
    if r == 0 || h == 0 {
        return Err(Error::domain("g_constant", format!("need r, h >= 1, got r = {r}, h = {h}")));
    }
    check_tol(tol)?;
    let quad = Adaptive::new(tol * T::lit(0.1), T::epsilon() * T::lit(32.0)).with_max_segments(4000);
    // integrand ≈ e^{γ} u^{r−1} e^{−(h+1)u} for large u
    let decay = T::from_usize_lossy(h + 1);
    let mut u_top = T::lit(8.0);
    while -(decay * u_top) + T::from_usize_lossy(r - 1) * u_top.ln() > T::lit(-46.0) {
        u_top += T::lit(4.0);
    }
    let near = quad.integrate(
        |u: T| {
            let x = (-u).exp();
            g_integrand(x, r, h) * x
        },
        &[T::zero(), T::one(), T::lit(4.0), T::lit(12.0), u_top],
    )?;
    let mut x_top = T::lit(16.0);
    while T::from_usize_lossy(h - 1) * x_top.ln() - x_top > T::lit(-46.0) {
        x_top += T::lit(4.0);
    }
    let far = quad.integrate(
        |x: T| g_integrand(x, r, h),
        &[T::one(), T::lit(2.0), T::lit(4.0), T::lit(8.0), x_top],
    )?;
    Ok((near.value + far.value) / (factorial::<T>(h) * factorial::<T>(r - 1)))
}

/// One rank of a [`MomentReport`]. Mean and variance are coefficients of √n
/// and n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankMoments<T> {
    pub rank: usize,
    pub g1: T,
    pub g2: T,
    pub mean: T,
    pub variance: T,
    /// Correlation of Λ_r with N.
    pub correlation: T,
}

/// Correlation of Λ_r with Λ_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCorrelation<T> {
    pub r: usize,
    pub s: usize,
    pub value: T,
}

/// Moment constants of Λ_1..Λ_4 in one regime, plus mode and median of Λ_1.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    pub regime: Regime<T>,
    pub ranks: Vec<RankMoments<T>>,
    /// None when the mode could not be located.
    pub mode: Option<T>,
    pub median: T,
    pub cross: Vec<CrossCorrelation<T>>,
}

/// Options for [`moment_table`].
#[derive(Debug, Clone, Copy)]
pub struct MomentOptions<T> {
    pub tol: T,
    pub max_rank: usize,
    /// Also compute corr(Λ_r, Λ_s) for r < s ≤ `max_rank`.
    pub cross_correlations: bool,
}

impl<T: Real> Default for MomentOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOL),
            max_rank: 4,
            cross_correlations: false,
        }
    }
}

/// Mean, variance and correlation with N for rank `r` from the G constants.
pub fn rank_moments<T: Real>(r: usize, g1: T, g2: T, regime: &Regime<T>) -> RankMoments<T> {
    let m1 = regime.moment(1);
    let m2 = regime.moment(2);
    let mean = m1 * g1;
    let variance = m2 * g2 - mean * mean;
    let correlation = regime.variance().sqrt() * g1 / variance.sqrt();
    RankMoments {
        rank: r,
        g1,
        g2,
        mean,
        variance,
        correlation,
    }
}

/// The moment table for `regime`, ranks computed in parallel.
pub fn moment_table<T: Real>(laws: &LimitLaws<T>, regime: Regime<T>, opts: &MomentOptions<T>) -> Result<MomentReport<T>> {
    regime.validate()?;
    check_tol(opts.tol)?;
    let gs: Vec<(T, T)> = (1..=opts.max_rank)
        .into_par_iter()
        .map(|r| Ok((g_constant(r, 1, opts.tol)?, g_constant(r, 2, opts.tol)?)))
        .collect::<Result<_>>()?;
    let ranks = gs
        .iter()
        .enumerate()
        .map(|(i, &(g1, g2))| rank_moments(i + 1, g1, g2, &regime))
        .collect::<Vec<_>>();
    let mode = match regime {
        Regime::Rayleigh => Some(mode_lambda1(laws, regime)?),
        _ => {
            if density_decreasing(laws, regime)? {
                Some(T::zero())
            } else {
                None
            }
        }
    };
    let median = median_lambda(laws, 1, regime)?;
    let mut cross = Vec::new();
    if opts.cross_correlations {
        let pairs: Vec<(usize, usize)> = (1..=opts.max_rank)
            .flat_map(|r| ((r + 1)..=opts.max_rank).map(move |s| (r, s)))
            .collect();
        cross = pairs
            .into_par_iter()
            .map(|(r, s)| {
                let v = cross_correlation(&ranks[r - 1], &ranks[s - 1], &regime, opts.tol.max(T::lit(1e-10)))?;
                Ok(CrossCorrelation { r, s, value: v })
            })
            .collect::<Result<_>>()?;
    }
    Ok(MomentReport {
        regime,
        ranks,
        mode,
        median,
        cross,
    })
}

/// E[V_r V_s] for r < s, from the joint law of the r-th and s-th largest
/// points of a Poisson process with intensity e^{−x}/x:
/// ½ ∬_{y<x} e^{−x−y} E(x)^{r−1} (E(y)−E(x))^{s−r−1} e^{−E(y)} dy dx / ((r−1)!(s−r−1)!).
pub fn cross_moment<T: Real>(r: usize, s: usize, tol: T) -> Result<T> {
    if r == 0 || s <= r {
        return Err(Error::domain("cross_moment", format!("need 1 <= r < s, got r = {r}, s = {s}")));
    }
    check_tol(tol)?;
    let inner_quad = Adaptive::new(tol * T::lit(0.01), T::lit(1e-11)).with_max_segments(2000);
    let outer_quad = Adaptive::new(tol * T::lit(0.1), T::lit(1e-10)).with_max_segments(2000);
    let k = (s - r - 1) as i32;
    let inner = |x: T| -> Result<T> {
        let ex = e1_real(x)?;
        let pts: Vec<T> = if x > T::one() {
            vec![T::zero(), T::one(), x]
        } else {
            vec![T::zero(), x * T::lit(0.5), x]
        };
        let v = inner_quad.integrate(
            |y: T| {
                if y <= T::zero() {
                    return T::zero();
                }
                let ey = e1_real(y).unwrap_or(T::zero());
                (-y - ey).exp() * (ey - ex).max(T::zero()).powi(k)
            },
            &pts,
        )?;
        Ok((-x).exp() * ex.powi(r as i32 - 1) * v.value)
    };
    let mut failure = None;
    let mut guard = |x: T| match inner(x) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            T::zero()
        }
    };
    let near = outer_quad.estimate(
        |u: T| {
            let x = (-u).exp();
            guard(x) * x
        },
        &[T::zero(), T::one(), T::lit(4.0), T::lit(12.0), T::lit(40.0)],
    );
    let far = outer_quad.estimate(&mut guard, &[T::one(), T::lit(4.0), T::lit(16.0), T::lit(48.0)]);
    if let Some(e) = failure {
        return Err(e);
    }
    if !near.converged || !far.converged {
        return Err(Error::Accuracy {
            estimate: (near.error + far.error).to_f64_lossy(),
            requested: tol.to_f64_lossy(),
        });
    }
    let scale = T::lit(2.0) * factorial::<T>(r - 1) * factorial::<T>(s - r - 1);
    Ok((near.value + far.value) / scale)
}

/// corr(Λ_r, Λ_s) for two ranks of the same regime.
pub fn cross_correlation<T: Real>(a: &RankMoments<T>, b: &RankMoments<T>, regime: &Regime<T>, tol: T) -> Result<T> {
    let m2 = regime.moment(2);
    let cov = m2 * cross_moment(a.rank, b.rank, tol)? - a.mean * b.mean;
    Ok(cov / (a.variance * b.variance).sqrt())
}

/// Left side minus right side of the stationarity condition for the density
/// of Λ_1 under the Rayleigh regime:
/// (1/λ²) ∫_λ^∞ [−ρ((ν−λ)/λ) + ν/(ν−λ)·ρ((ν−2λ)/λ)] ν e^{−ν²/2} dν − e^{−λ²/2}.
pub fn mode_residual<T: Real>(laws: &LimitLaws<T>, lambda: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::domain("mode_residual", format!("lambda = {lambda} must be positive")));
    }
    let regime = Regime::<T>::Rayleigh;
    let cut = regime.upper_cutoff();
    if lambda >= cut {
        return Ok(-(-lambda * lambda * T::lit(0.5)).exp());
    }
    let quad = Adaptive::new(T::lit(1e-13), T::epsilon() * T::lit(64.0)).with_max_segments(4000);
    let mut pts = vec![T::zero()];
    let mut k = 1;
    while k <= 48 && lambda * T::from_usize_lossy(k) < cut - lambda {
        pts.push(lambda * T::from_usize_lossy(k));
        k += 1;
    }
    pts.push(cut - lambda);
    let mut failure = None;
    // ν = λ + s
    let est = quad.integrate(
        |s: T| {
            let nu = lambda + s;
            let first = laws.rho(1, s / lambda);
            let second = laws.rho(1, (s - lambda) / lambda);
            match (first, second) {
                (Ok(a), Ok(b)) => {
                    let jump = if s > T::zero() { nu / s * b } else { T::zero() };
                    (jump - a) * regime.density(nu)
                }
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            }
        },
        &pts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value / (lambda * lambda) - (-lambda * lambda * T::lit(0.5)).exp())
}

/// Mode of Λ_1/√n for unconstrained mappings, bracketed on [0.1, 1.5].
pub fn mode_lambda1<T: Real>(laws: &LimitLaws<T>, regime: Regime<T>) -> Result<T> {
    if regime != Regime::Rayleigh {
        return Err(Error::Unsupported(format!("mode equation is for the rayleigh regime, not {}", regime.name())));
    }
    brent(|l| mode_residual(laws, l), T::lit(0.1), T::lit(1.5), T::lit(1e-10))
}

/// Whether the density of Λ_1/√n decreases along λ = 0.05, 0.10, …, 1.00.
pub fn density_decreasing<T: Real>(laws: &LimitLaws<T>, regime: Regime<T>) -> Result<bool> {
    let mut prev = T::infinity();
    for i in 1..=20 {
        let d = laws.mapping_longest_cycle_density(T::lit(0.05) * T::from_usize_lossy(i), 1, regime)?;
        if !(d < prev) {
            return Ok(false);
        }
        prev = d;
    }
    Ok(true)
}

/// Median of Λ_r/√n.
pub fn median_lambda<T: Real>(laws: &LimitLaws<T>, r: usize, regime: Regime<T>) -> Result<T> {
    regime.validate()?;
    let lo = if r == 1 {
        T::lit(0.02)
    } else {
        // smallest b whose mixture stays inside the solved range
        (regime.upper_cutoff() / laws.x_max()) * T::lit(1.001)
    };
    let hi = regime.upper_cutoff();
    brent(
        |b| Ok(laws.mapping_longest_cycle_cdf(b, r, regime)? - T::lit(0.5)),
        lo,
        hi,
        T::lit(1e-9),
    )
}

/// Median of the half-normal cycle length of a connected mapping.
pub fn connected_median<T: Real>() -> Result<T> {
    brent(|b| Ok(connected_cycle_cdf(b)? - T::lit(0.5)), T::zero(), T::lit(5.0), T::lit(1e-13))
}

/// Mean and variance of the half-normal law by direct quadrature.
pub fn connected_moments<T: Real>(tol: T) -> Result<(T, T)> {
    check_tol(tol)?;
    let reg = Regime::<T>::HalfNormal;
    let top = reg.upper_cutoff();
    let quad = Adaptive::new(tol * T::lit(0.1), T::epsilon() * T::lit(64.0));
    let pts = [T::zero(), T::one(), T::lit(3.0), top];
    let m1 = quad.integrate(|v: T| v * reg.density(v), &pts)?.value;
    let m2 = quad.integrate(|v: T| v * v * reg.density(v), &pts)?.value;
    Ok((m1, m2 - m1 * m1))
}
