//! Limit laws for the longest cycle of a permutation, the largest component
//! of a mapping, and the longest cycles of a mapping mixed over the number of
//! cyclic points.
//!
//! Lengths of mapping cycles are in units of √n, permutation cycles and
//! components in units of n.

use std::sync::Arc;

use crate::dde::{self, DdeSpec, PiecewiseSolution};
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use crate::scalar::Real;
use crate::specfun::{erfc, ln_gamma};

/// Law of the scaled number of cyclic points N/√n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<T> {
    /// Unconstrained mappings: ν e^{−ν²/2}.
    Rayleigh,
    /// A fixed or slowly growing number of components: √(2/π) e^{−ν²/2}.
    HalfNormal,
    /// About c·ln n components: ∝ ν^{2c} e^{−ν²/2}.
    Pavlov(T),
}

impl<T: Real> Regime<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::Pavlov(c) if !(c >= T::zero()) || !c.is_finite() => {
                Err(Error::domain("regime", format!("pavlov parameter c = {c} must be >= 0")))
            }
            _ => Ok(()),
        }
    }

    // exponent 2c of ν, or None for the half-normal shape
    fn power(&self) -> Option<T> {
        match *self {
            Regime::Rayleigh => Some(T::one()),
            Regime::HalfNormal => None,
            Regime::Pavlov(c) if c == T::zero() => None,
            Regime::Pavlov(c) => Some(c + c),
        }
    }

    // ln of the normalising constant
    fn log_norm(&self) -> T {
        match *self {
            Regime::Rayleigh => T::zero(),
            Regime::HalfNormal => T::lit(0.5) * (T::lit(2.0) / T::PI()).ln(),
            Regime::Pavlov(c) if c == T::zero() => Regime::<T>::HalfNormal.log_norm(),
            Regime::Pavlov(c) => {
                c * T::LN_2() + ln_gamma(c) - T::lit(0.5) * (T::lit(2.0) * T::PI()).ln() - ln_gamma(c + c)
            }
        }
    }

    /// Density of N/√n at ν; 0 for ν < 0.
    pub fn density(&self, nu: T) -> T {
        if nu < T::zero() {
            return T::zero();
        }
        let gauss = -nu * nu * T::lit(0.5);
        match self.power() {
            None => (self.log_norm() + gauss).exp(),
            Some(p) if nu == T::zero() => {
                if p == T::zero() {
                    self.log_norm().exp()
                } else {
                    T::zero()
                }
            }
            Some(p) => (self.log_norm() + p * nu.ln() + gauss).exp(),
        }
    }

    /// E[N^k] for the scaled variable.
    pub fn moment(&self, k: u32) -> T {
        let kf = T::from_usize_lossy(k as usize);
        let p = self.power().unwrap_or(T::zero());
        // ∫ ν^{p+k} e^{−ν²/2} dν = 2^{(p+k−1)/2} Γ((p+k+1)/2)
        let s = p + kf;
        (self.log_norm() + T::lit(0.5) * (s - T::one()) * T::LN_2() + ln_gamma((s + T::one()) * T::lit(0.5))).exp()
    }

    pub fn mean(&self) -> T {
        self.moment(1)
    }

    pub fn variance(&self) -> T {
        let m = self.mean();
        self.moment(2) - m * m
    }

    /// Point past which the remaining mass is below 1e−18.
    pub fn upper_cutoff(&self) -> T {
        let p = self.power().unwrap_or(T::zero());
        let floor = T::lit(-41.5);
        let mut nu = T::lit(6.0).max(p.sqrt() + T::one());
        loop {
            let logw = self.log_norm() + p * nu.ln() - nu * nu * T::lit(0.5);
            // Gaussian tail ≈ w(ν)/(ν − p/ν)
            if logw - (nu - p / nu).ln() < floor {
                return nu;
            }
            nu += T::lit(0.25);
        }
    }

    pub fn name(&self) -> String {
        match self {
            Regime::Rayleigh => "rayleigh".into(),
            Regime::HalfNormal => "halfnormal".into(),
            Regime::Pavlov(c) => format!("pavlov(c={c})"),
        }
    }
}

/// Density of N/√n under `regime`.
pub fn cyclic_points_density<T: Real>(nu: T, regime: Regime<T>) -> Result<T> {
    regime.validate()?;
    if !(nu > T::zero()) {
        return Err(Error::domain("cyclic_points_density", format!("nu = {nu} must be positive")));
    }
    Ok(regime.density(nu))
}

/// P{Λ ≤ b√n} for the cycle of a connected mapping, which is half-normal.
pub fn connected_cycle_cdf<T: Real>(b: T) -> Result<T> {
    if !(b >= T::zero()) {
        return Err(Error::domain("connected_cycle_cdf", format!("b = {b} must be >= 0")));
    }
    Ok(T::one() - erfc(b / T::SQRT_2()))
}

/// A point (λ, ν) of the joint law of a cycle length and the cyclic-point
/// count, both scaled by √n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPoint<T> {
    pub lambda: T,
    pub nu: T,
}

/// Solved ρ_1, …, ρ_R and σ, shared by every limit law that needs them.
#[derive(Debug, Clone)]
pub struct LimitLaws<T> {
    ranks: Vec<Arc<PiecewiseSolution<T>>>,
    sigma: Arc<PiecewiseSolution<T>>,
    quad_tol: T,
}

impl<T: Real> LimitLaws<T> {
    /// Ranks 1..=`r_max` on the default range.
    pub fn new(r_max: usize) -> Result<Self> {
        Self::with_range(r_max, T::lit(dde::DEFAULT_X_MAX), T::lit(dde::DEFAULT_TOL))
    }

    pub fn with_range(r_max: usize, x_max: T, tol: T) -> Result<Self> {
        if r_max == 0 {
            return Err(Error::domain("LimitLaws", "need at least rank 1"));
        }
        let ranks = dde::solve_generalized_family(r_max, x_max, tol)?;
        let sigma = Arc::new(dde::solve_theta_dde(&DdeSpec::sigma().with_x_max(x_max).with_tol(tol))?);
        Ok(Self {
            ranks,
            sigma,
            quad_tol: T::lit(1e-11).max(T::epsilon() * T::lit(64.0)),
        })
    }

    /// Absolute tolerance handed to the mixture quadratures.
    pub fn with_quad_tol(mut self, tol: T) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.len()
    }

    pub fn x_max(&self) -> T {
        self.sigma.x_max()
    }

    pub fn rank_solution(&self, r: usize) -> Result<&Arc<PiecewiseSolution<T>>> {
        self.ranks
            .get(r.wrapping_sub(1))
            .ok_or_else(|| Error::domain("rank", format!("rank {r} not in 1..={}", self.ranks.len())))
    }

    pub fn sigma(&self) -> &Arc<PiecewiseSolution<T>> {
        &self.sigma
    }

    /// ρ_r(x), with ρ_0 ≡ 0 on (0, ∞). Past the solved range ρ_1 is treated
    /// as 0 once it has decayed below 1e−30; higher ranks report
    /// [`Error::OutOfRange`].
    pub fn rho(&self, r: usize, x: T) -> Result<T> {
        if x < T::zero() {
            return Ok(T::zero());
        }
        if r == 0 {
            return Ok(if x > T::zero() { T::zero() } else { T::one() });
        }
        let sol = self.rank_solution(r)?;
        if x > sol.x_max() && r == 1 && sol.eval(sol.x_max())? < T::lit(1e-30) {
            return Ok(T::zero());
        }
        sol.eval(x)
    }

    fn rho_tail_free(&self, r: usize) -> bool {
        r == 1 && self.rho(1, self.x_max()).map(|v| v < T::lit(1e-30)).unwrap_or(false)
    }

    /// lim P{Λ_r ≤ a n} for a random permutation: ρ_r(1/a).
    pub fn perm_longest_cycle_cdf(&self, a: T, r: usize) -> Result<T> {
        if !(a > T::zero() && a <= T::one()) {
            return Err(Error::domain("perm_longest_cycle_cdf", format!("a = {a} outside (0, 1]")));
        }
        self.rho(r, a.recip())
    }

    /// lim P{Λ ≤ a n} for the largest component of a mapping: σ̃(1/a).
    pub fn largest_component_cdf(&self, a: T) -> Result<T> {
        if !(a > T::zero() && a <= T::one()) {
            return Err(Error::domain("largest_component_cdf", format!("a = {a} outside (0, 1]")));
        }
        dde::sigma_tilde(&self.sigma, a.recip())
    }

    /// Density of the largest component fraction: σ((1−t)/t) / (2 t^{3/2}).
    pub fn largest_component_density(&self, t: T) -> Result<T> {
        if !(t > T::zero() && t < T::one()) {
            return Err(Error::domain("largest_component_density", format!("t = {t} outside (0, 1)")));
        }
        Ok(self.sigma.eval((T::one() - t) / t)? / (T::lit(2.0) * t * t.sqrt()))
    }

    /// P{lo < Λ/n ≤ hi} by integrating [`Self::largest_component_density`].
    pub fn largest_component_probability(&self, lo: T, hi: T) -> Result<T> {
        if !(lo > T::zero() && lo < hi && hi < T::one()) {
            return Err(Error::domain(
                "largest_component_probability",
                format!("need 0 < lo < hi < 1, got ({lo}, {hi})"),
            ));
        }
        // kinks where (1 − t)/t is an integer
        let mut pts = vec![lo];
        for k in 1..=64usize {
            let t = T::one() / T::from_usize_lossy(k + 1);
            if t > lo && t < hi {
                pts.push(t);
            }
        }
        pts.push(hi);
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        let mut failure = None;
        let est = self.quadrature().integrate(
            |t| match self.largest_component_density(t) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            &pts,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(est.value),
        }
    }

    fn quadrature(&self) -> Adaptive<T> {
        Adaptive::new(self.quad_tol, T::epsilon() * T::lit(64.0)).with_max_segments(4000)
    }

    // integrates g over (0, top) with breakpoints at multiples of `step`
    fn mixture_integral<F>(&self, mut g: F, top: T, step: T, extra: &[T]) -> Result<T>
    where
        F: FnMut(T) -> Result<T>,
    {
        let mut pts = vec![T::zero()];
        let mut k = 1usize;
        while k <= 48 {
            let p = step * T::from_usize_lossy(k);
            if p >= top {
                break;
            }
            pts.push(p);
            k += 1;
        }
        for &p in extra {
            if p > T::zero() && p < top {
                pts.push(p);
            }
        }
        pts.push(top);
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        pts.dedup();
        let mut failure = None;
        let est = self.quadrature().integrate(
            |v| match g(v) {
                Ok(x) => x,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            &pts,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(est.value),
        }
    }

    // upper end of the ν-range with ρ_r(ν/scale) still available
    fn nu_top(&self, r: usize, scale: T, regime: &Regime<T>) -> Result<T> {
        let cut = regime.upper_cutoff();
        if self.rho_tail_free(r) {
            return Ok(cut);
        }
        let reach = scale * self.x_max();
        if reach < cut {
            return Err(Error::OutOfRange {
                x: (cut / scale).to_f64_lossy(),
                x_max: self.x_max().to_f64_lossy(),
            });
        }
        Ok(cut)
    }

    /// lim P{Λ_r ≤ b√n} = ∫ w(ν) ρ_r(ν/b) dν.
    pub fn mapping_longest_cycle_cdf(&self, b: T, r: usize, regime: Regime<T>) -> Result<T> {
        regime.validate()?;
        if !(b > T::zero()) || !b.is_finite() {
            return Err(Error::domain("mapping_longest_cycle_cdf", format!("b = {b} must be positive")));
        }
        self.rank_solution(r)?;
        let top = self.nu_top(r, b, &regime)?;
        let v = self.mixture_integral(|nu| Ok(regime.density(nu) * self.rho(r, nu / b)?), top, b, &[])?;
        Ok(v.min(T::one()))
    }

    /// Joint density of (Λ_r, N) at `p`: w(ν)/λ · [ρ_r − ρ_{r−1}]((ν−λ)/λ)
    /// on 0 < λ < ν, 0 elsewhere.
    pub fn joint_density(&self, p: JointPoint<T>, r: usize, regime: Regime<T>) -> Result<T> {
        regime.validate()?;
        if !(p.lambda > T::zero() && p.nu > T::zero()) {
            return Err(Error::domain("joint_density", "coordinates must be positive"));
        }
        self.rank_solution(r)?;
        if p.nu <= p.lambda {
            return Ok(T::zero());
        }
        let x = (p.nu - p.lambda) / p.lambda;
        let bracket = self.rho(r, x)? - self.rho(r - 1, x)?;
        Ok(regime.density(p.nu) / p.lambda * bracket)
    }

    /// Marginal density of Λ_r/√n: ∫_λ^∞ joint_density dν.
    pub fn mapping_longest_cycle_density(&self, lambda: T, r: usize, regime: Regime<T>) -> Result<T> {
        regime.validate()?;
        if !(lambda > T::zero()) {
            return Err(Error::domain("mapping_longest_cycle_density", format!("lambda = {lambda} must be positive")));
        }
        self.rank_solution(r)?;
        let cut = self.nu_top(r, lambda, &regime)?;
        if lambda >= cut {
            return Ok(T::zero());
        }
        // substitute ν = λ + s so the breakpoints sit at multiples of λ
        let top = cut - lambda;
        self.mixture_integral(
            |s| {
                self.joint_density(
                    JointPoint {
                        lambda,
                        nu: lambda + s,
                    },
                    r,
                    regime,
                )
            },
            top,
            lambda,
            &[],
        )
    }
}
