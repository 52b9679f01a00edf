//! Method-of-steps solver for the Dickman-type delay equations
//!
//! ```text
//! x g'(x) + (1 − θ) g(x) + θ g(x − 1) = θ u(x − 1),   g(x) = x^{θ−1} on (0, 1]
//! ```
//!
//! with u ≡ 0 for the θ-family (θ = 1 gives Dickman's ρ, θ = ½ Watterson's σ)
//! and θ = 1, u = ρ_{r−1} for the generalized Dickman functions ρ_r.
//!
//! On (1, 2] the solution is the exact series
//! x^{θ−1}[1 − θ y^θ Σ yⁿ/(θ+n)], y = 1 − 1/x. Beyond that each unit
//! interval is advanced through the window identity
//!
//! ```text
//! x g(x) = θ ∫_{x−1}^{x} g(t) dt + θ ∫_0^{x−1} u(t) dt
//! ```
//!
//! which is the equation integrated once. Every term is nonnegative, so the
//! super-exponential decay of ρ costs no relative accuracy; the naive
//! integrated form g(x) = g(k) − ∫… loses everything to cancellation by
//! x ≈ 10. On each sub-panel the identity is a second-kind Volterra equation
//! solved by collocation at 17 Lobatto points (degree 16). Sub-panels are
//! graded geometrically toward each integer, where the solution has
//! (x − k)^{θ+k−1} terms, and split further while the trailing Chebyshev
//! coefficients exceed the tolerance.

use std::fmt;
use std::sync::Arc;

use crate::chebyshev;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{arctanh, dilog};

const DEGREE: usize = 16;
const GRADING_DEPTH: i32 = 40;
const MAX_PANELS_PER_INTERVAL: usize = 2_000;
const HEAD_SERIES_TERMS: usize = 400;

pub const DEFAULT_X_MAX: f64 = 64.0;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DdeKind<T> {
    ThetaFamily { theta: T },
    GeneralizedDickman { rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdeSpec<T> {
    pub kind: DdeKind<T>,
    pub x_max: T,
    pub tol: T,
}

impl<T: Real> DdeSpec<T> {
    pub fn theta(theta: T) -> Self {
        Self {
            kind: DdeKind::ThetaFamily { theta },
            x_max: T::lit(DEFAULT_X_MAX),
            tol: T::lit(DEFAULT_TOL),
        }
    }

    pub fn rho() -> Self {
        Self::theta(T::one())
    }

    pub fn sigma() -> Self {
        Self::theta(T::lit(0.5))
    }

    pub fn generalized(rank: usize) -> Self {
        Self {
            kind: DdeKind::GeneralizedDickman { rank },
            x_max: T::lit(DEFAULT_X_MAX),
            tol: T::lit(DEFAULT_TOL),
        }
    }

    pub fn with_x_max(mut self, x_max: T) -> Self {
        self.x_max = x_max;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max >= T::one()) || !self.x_max.is_finite() {
            return Err(Error::InvalidSpec(format!("x_max must be finite and >= 1, got {}", self.x_max)));
        }
        if !(self.tol > T::zero()) || self.tol > T::lit(1e-6) {
            return Err(Error::InvalidSpec(format!("tol must lie in (0, 1e-6], got {}", self.tol)));
        }
        match self.kind {
            DdeKind::ThetaFamily { theta } if !(theta > T::zero()) || !theta.is_finite() => {
                Err(Error::InvalidSpec(format!("theta must be positive, got {theta}")))
            }
            DdeKind::GeneralizedDickman { rank: 0 } => Err(Error::InvalidSpec("rank must be >= 1".into())),
            _ => Ok(()),
        }
    }

    fn theta_value(&self) -> T {
        match self.kind {
            DdeKind::ThetaFamily { theta } => theta,
            DdeKind::GeneralizedDickman { .. } => T::one(),
        }
    }
}

/// The analytic part of a solution on (0, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Head<T> {
    /// x^{θ−1} on (0, 1], exact series on (1, 2].
    Power { theta: T },
    /// 1 on [0, 2]; the generalized functions of rank ≥ 2.
    Unit,
}

impl<T: Real> fmt::Display for Head<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Power { theta } => write!(
                f,
                "x^({theta}-1) on (0,1]; x^(θ-1)[1 - θ y^θ Σ y^n/(θ+n)], y = 1-1/x on (1,2]"
            ),
            Head::Unit => write!(f, "1 on [0,2]"),
        }
    }
}

#[derive(Debug, Clone)]
struct Interval<T> {
    // offsets from the left integer, 0 = o_0 < o_1 < … < o_m = 1
    offsets: Vec<T>,
    // Chebyshev coefficients of g on each sub-panel
    panels: Vec<Vec<T>>,
    // antiderivative of each panel series, zero at the panel's left end
    anti: Vec<Vec<T>>,
    // prefix[i] = ∫ over panels < i, suffix[i] = ∫ over panels ≥ i
    prefix: Vec<T>,
    suffix: Vec<T>,
}

impl<T: Real> Interval<T> {
    fn new(offsets: Vec<T>, panels: Vec<Vec<T>>) -> Self {
        let anti: Vec<Vec<T>> = panels
            .iter()
            .zip(offsets.windows(2))
            .map(|(c, w)| {
                let half = (w[1] - w[0]) * T::lit(0.5);
                chebyshev::antiderivative(c).into_iter().map(|a| a * half).collect()
            })
            .collect();
        let totals: Vec<T> = anti.iter().map(|a| a.iter().copied().sum()).collect();
        let mut prefix = vec![T::zero(); totals.len() + 1];
        let mut suffix = vec![T::zero(); totals.len() + 1];
        for i in 0..totals.len() {
            prefix[i + 1] = prefix[i] + totals[i];
        }
        for i in (0..totals.len()).rev() {
            suffix[i] = suffix[i + 1] + totals[i];
        }
        Self {
            offsets,
            panels,
            anti,
            prefix,
            suffix,
        }
    }

    fn locate(&self, s: T) -> usize {
        let i = self.offsets.partition_point(|&o| o <= s);
        i.saturating_sub(1).min(self.panels.len() - 1)
    }

    fn local(&self, i: usize, s: T) -> T {
        let (p, q) = (self.offsets[i], self.offsets[i + 1]);
        let t = ((s - p) - (q - s)) / (q - p);
        t.max(-T::one()).min(T::one())
    }

    fn value(&self, s: T) -> T {
        let i = self.locate(s);
        chebyshev::clenshaw(&self.panels[i], self.local(i, s))
    }

    // ∫ from offset s to 1
    fn integral_from(&self, s: T) -> T {
        let i = self.locate(s);
        let a = &self.anti[i];
        let full: T = a.iter().copied().sum();
        (full - chebyshev::clenshaw(a, self.local(i, s))).max(T::zero()) + self.suffix[i + 1]
    }

    // ∫ from offset 0 to s
    fn integral_to(&self, s: T) -> T {
        let i = self.locate(s);
        self.prefix[i] + chebyshev::clenshaw(&self.anti[i], self.local(i, s)).max(T::zero())
    }

    fn total(&self) -> T {
        self.suffix[0]
    }
}

/// A solved delay equation: analytic head plus Chebyshev pieces on
/// [k, k+1] for k = 1, 2, … (the piece on [1, 2] only backs the integrals;
/// values there come from the exact series).
#[derive(Debug, Clone)]
pub struct PiecewiseSolution<T> {
    pub spec: DdeSpec<T>,
    pub head: Head<T>,
    theta: T,
    // intervals[k − 1] covers [k, k + 1]
    intervals: Vec<Interval<T>>,
    // cumulative[k] = ∫_0^k g
    cumulative: Vec<T>,
    // the solution is identically 0 (below the underflow floor) from here on
    zero_from: Option<usize>,
    // ρ_r ≡ 1 on [0, r]
    unit_until: usize,
}

impl<T: Real> PiecewiseSolution<T> {
    pub fn x_max(&self) -> T {
        self.spec.x_max
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// Number of stored sub-panels, all intervals together.
    pub fn panel_count(&self) -> usize {
        self.intervals.iter().map(|iv| iv.panels.len()).sum()
    }

    fn check_range(&self, x: T) -> Result<()> {
        if x.is_nan() {
            return Err(Error::domain("eval", "NaN argument"));
        }
        if x > self.spec.x_max {
            return Err(Error::OutOfRange {
                x: x.to_f64_lossy(),
                x_max: self.spec.x_max.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Evaluates the solution. Arguments below zero give 0.
    pub fn eval(&self, x: T) -> Result<T> {
        self.check_range(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn split(x: T) -> (usize, T) {
        let k = x.floor();
        let (k, s) = if k == x && k > T::zero() { (k - T::one(), T::one()) } else { (k, x - k) };
        (k.to_usize().unwrap_or(usize::MAX), s)
    }

    fn eval_unchecked(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        let (k, s) = Self::split(x);
        self.eval_local(k, s)
    }

    fn initial(&self, x: T) -> T {
        match self.head {
            Head::Unit => T::one(),
            Head::Power { theta } => power(x, theta - T::one()),
        }
    }

    fn past_end(&self, k: usize) -> bool {
        self.zero_from.is_some_and(|z| k >= z) || k > self.intervals.len()
    }

    // value at k + s, s ∈ [0, 1]
    fn eval_local(&self, k: usize, s: T) -> T {
        if k < self.unit_until {
            return T::one();
        }
        match k {
            0 => self.initial(s),
            1 => match self.head {
                Head::Unit => T::one(),
                Head::Power { theta } => head_series(theta, s),
            },
            _ if self.past_end(k) => T::zero(),
            _ => self.intervals[k - 1].value(s),
        }
    }

    // ∫ from k + s to k + 1
    fn tail_local(&self, k: usize, s: T) -> T {
        match k {
            0 => match self.head {
                Head::Unit => T::one() - s,
                Head::Power { theta } => (T::one() - power(s, theta)) / theta,
            },
            _ if self.past_end(k) => T::zero(),
            _ => self.intervals[k - 1].integral_from(s),
        }
    }

    // ∫ from 0 to k + s
    fn cumulative_local(&self, k: usize, s: T) -> T {
        match k {
            0 => match self.head {
                Head::Unit => s,
                Head::Power { theta } => power(s, theta) / theta,
            },
            _ if self.past_end(k) => *self.cumulative.last().expect("nonempty"),
            _ => self.cumulative[k] + self.intervals[k - 1].integral_to(s),
        }
    }

    /// ∫_0^x g(t) dt.
    pub fn integral(&self, x: T) -> Result<T> {
        self.check_range(x)?;
        if x <= T::zero() {
            return Ok(T::zero());
        }
        let (k, s) = Self::split(x);
        Ok(self.cumulative_local(k, s))
    }

    /// First derivative: exact on the analytic head, from the interpolants
    /// elsewhere.
    pub fn derivative(&self, x: T) -> Result<T> {
        self.check_range(x)?;
        if x < T::zero() {
            return Ok(T::zero());
        }
        let (k, s) = Self::split(x);
        let th = self.theta;
        Ok(match k {
            0 => match self.head {
                Head::Unit => T::zero(),
                Head::Power { theta } => (theta - T::one()) * power(s, theta - T::lit(2.0)),
            },
            1 => match self.head {
                Head::Unit => T::zero(),
                Head::Power { .. } => {
                    let g = self.eval_unchecked(x);
                    let lag = self.eval_unchecked(x - T::one());
                    -((T::one() - th) * g + th * lag) / x
                }
            },
            _ if self.past_end(k) => T::zero(),
            _ => {
                let iv = &self.intervals[k - 1];
                let i = iv.locate(s);
                let h = iv.offsets[i + 1] - iv.offsets[i];
                let d = chebyshev::derivative(&iv.panels[i]);
                chebyshev::clenshaw(&d, iv.local(i, s)) * T::lit(2.0) / h
            }
        })
    }
}

fn power<T: Real>(x: T, e: T) -> T {
    if e == T::zero() {
        T::one()
    } else {
        x.powf(e)
    }
}

// Exact solution on (1, 2] at x = 1 + s.
fn head_series<T: Real>(theta: T, s: T) -> T {
    if s == T::zero() {
        return T::one();
    }
    let x = T::one() + s;
    let y = s / x;
    let mut yn = T::one();
    let mut sum = T::zero();
    for n in 0..HEAD_SERIES_TERMS {
        let term = yn / (theta + T::from_usize_lossy(n));
        sum += term;
        if term < T::epsilon() * sum * T::lit(0.1) {
            break;
        }
        yn *= y;
    }
    power(x, theta - T::one()) * (T::one() - theta * y.powf(theta) * sum)
}

/// Solves the θ-family equation.
pub fn solve_theta_dde<T: Real>(spec: &DdeSpec<T>) -> Result<PiecewiseSolution<T>> {
    spec.validate()?;
    let DdeKind::ThetaFamily { theta } = spec.kind else {
        return Err(Error::InvalidSpec("expected a theta-family spec".into()));
    };
    march(*spec, Head::Power { theta }, None)
}

/// Solves for ρ_r, building ρ_1, …, ρ_{r−1} on the way.
pub fn solve_generalized_dickman<T: Real>(spec: &DdeSpec<T>) -> Result<PiecewiseSolution<T>> {
    spec.validate()?;
    let DdeKind::GeneralizedDickman { rank } = spec.kind else {
        return Err(Error::InvalidSpec("expected a generalized-dickman spec".into()));
    };
    let mut family = solve_generalized_family(rank, spec.x_max, spec.tol)?;
    let top = family.pop().expect("rank >= 1");
    Ok(Arc::try_unwrap(top).unwrap_or_else(|a| (*a).clone()))
}

/// ρ_1, …, ρ_{r_max} with a shared range and tolerance.
pub fn solve_generalized_family<T: Real>(
    r_max: usize,
    x_max: T,
    tol: T,
) -> Result<Vec<Arc<PiecewiseSolution<T>>>> {
    let mut out: Vec<Arc<PiecewiseSolution<T>>> = Vec::with_capacity(r_max);
    for rank in 1..=r_max {
        let spec = DdeSpec {
            kind: DdeKind::GeneralizedDickman { rank },
            x_max,
            tol,
        };
        spec.validate()?;
        let head = if rank == 1 {
            Head::Power { theta: T::one() }
        } else {
            Head::Unit
        };
        let lower = out.last().cloned();
        out.push(Arc::new(march(spec, head, lower.as_deref())?));
    }
    Ok(out)
}

fn initial_offsets<T: Real>() -> Vec<T> {
    let mut o = vec![T::zero()];
    for j in (1..=GRADING_DEPTH).rev() {
        o.push(T::lit(0.5f64.powi(j)));
    }
    o.push(T::one());
    o
}

fn lu_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Vec<T> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[row][c] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    x
}

// q[i][j] = ∫_{-1}^{t_i} ℓ_j(t) dt for the Lagrange basis on the Lobatto points.
fn integration_matrix<T: Real>(nodes: &[T]) -> Vec<Vec<T>> {
    let m = nodes.len();
    let mut q = vec![vec![T::zero(); m]; m];
    for j in 0..m {
        let mut e = vec![T::zero(); m];
        e[j] = T::one();
        let a = chebyshev::antiderivative(&chebyshev::coefficients(&e));
        for (i, &t) in nodes.iter().enumerate() {
            q[i][j] = chebyshev::clenshaw(&a, t);
        }
    }
    q
}

struct Refiner<T> {
    tol: T,
    floor: T,
}

impl<T: Real> Refiner<T> {
    fn resolved(&self, c: &[T], values: &[T]) -> bool {
        let vmax = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tail = c[DEGREE].abs() + c[DEGREE - 1].abs();
        tail <= self.tol * T::lit(0.1) * vmax + self.floor
    }
}

// Builds one interval by walking a mesh left to right; `panel` returns the
// values at the Lobatto nodes of [p, q] given the integral over [0, p].
fn build_interval<T: Real, F>(mesh: &[T], refiner: &Refiner<T>, mut panel: F) -> Result<Interval<T>>
where
    F: FnMut(T, T, T) -> Vec<T>,
{
    let mut offsets = vec![T::zero()];
    let mut panels = Vec::with_capacity(mesh.len());
    let mut pending: Vec<T> = mesh.iter().skip(1).rev().copied().collect();
    let mut p = T::zero();
    let mut done = T::zero();
    while let Some(q) = pending.pop() {
        let values = panel(p, q, done);
        let c = chebyshev::coefficients(&values);
        if p > T::zero() && !refiner.resolved(&c, &values) {
            let mid = p + (q - p) * T::lit(0.5);
            if panels.len() + pending.len() > MAX_PANELS_PER_INTERVAL || mid <= p || mid >= q {
                return Err(Error::Tolerance(format!("cannot resolve the solution near offset {p}")));
            }
            pending.push(q);
            pending.push(mid);
            continue;
        }
        let half = (q - p) * T::lit(0.5);
        done += chebyshev::antiderivative(&c).into_iter().sum::<T>() * half;
        panels.push(c);
        offsets.push(q);
        p = q;
    }
    Ok(Interval::new(offsets, panels))
}

fn march<T: Real>(
    spec: DdeSpec<T>,
    head: Head<T>,
    forcing: Option<&PiecewiseSolution<T>>,
) -> Result<PiecewiseSolution<T>> {
    let theta = spec.theta_value();
    let refiner = Refiner {
        tol: spec.tol.max(T::lit(64.0) * T::epsilon()),
        floor: T::underflow_floor(),
    };
    let nodes: Vec<T> = chebyshev::lobatto_points(DEGREE);
    let qmat = integration_matrix(&nodes);
    let to_offset = |p: T, q: T, t: T| p + (t + T::one()) * T::lit(0.5) * (q - p);

    let first_total = match head {
        Head::Unit => T::one(),
        Head::Power { theta } => theta.recip(),
    };
    let mut sol = PiecewiseSolution {
        spec,
        head,
        theta,
        intervals: Vec::new(),
        cumulative: vec![T::zero(), first_total],
        zero_from: None,
        unit_until: match spec.kind {
            DdeKind::GeneralizedDickman { rank } => rank,
            DdeKind::ThetaFamily { .. } => 0,
        },
    };

    // [1, 2]: interpolate the exact head so the window integrals can use it
    let mut mesh = initial_offsets::<T>();
    let iv = build_interval(&mesh, &refiner, |p, q, _| {
        nodes.iter().map(|&t| sol.eval_local(1, to_offset(p, q, t))).collect()
    })?;
    mesh = iv.offsets.clone();
    let total = iv.total();
    sol.intervals.push(iv);
    sol.cumulative.push(first_total + total);

    let last = spec.x_max.ceil().to_usize().unwrap_or(1);
    for k in 2..last {
        let kf = T::from_usize_lossy(k);
        let iv = build_interval(&mesh, &refiner, |p, q, done| {
            let h = q - p;
            // (k+s_i) g_i − θ (h/2) Σ_j Q_ij g_j = θ [∫_{k−1+s_i}^{k} g + ∫_k^{k+p} g + ∫_0^{k−1+s_i} u]
            let m = nodes.len();
            let mut a = vec![vec![T::zero(); m]; m];
            let mut b = vec![T::zero(); m];
            for (i, &t) in nodes.iter().enumerate() {
                let s = to_offset(p, q, t);
                for j in 0..m {
                    a[i][j] = -theta * h * T::lit(0.5) * qmat[i][j];
                }
                a[i][i] += kf + s;
                let window = sol.tail_local(k - 1, s) + done;
                let forced = forcing.map_or(T::zero(), |f| f.cumulative_local(k - 1, s));
                b[i] = theta * (window + forced);
            }
            lu_solve(a, b)
        })?;
        mesh = iv.offsets.clone();
        let total = iv.total();
        let end = iv.value(T::one());
        sol.intervals.push(iv);
        let prev = *sol.cumulative.last().expect("nonempty");
        sol.cumulative.push(prev + total);
        if end.abs() < refiner.floor {
            sol.zero_from = Some(k + 1);
            break;
        }
    }
    Ok(sol)
}

/// ρ(x) on [0, 3] from its explicit piecewise formula.
pub fn rho_closed_form<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero()) || x > T::lit(3.0) {
        return Err(Error::domain("rho_closed_form", format!("x = {x} outside [0, 3]")));
    }
    if x <= T::one() {
        return Ok(T::one());
    }
    let l = x.ln();
    if x <= T::lit(2.0) {
        return Ok(T::one() - l);
    }
    let pi2 = T::PI() * T::PI();
    Ok(T::one() - pi2 / T::lit(12.0) - l + T::lit(0.5) * l * l + dilog(x.recip())?)
}

/// σ(x) on (0, 2] from its explicit piecewise formula.
pub fn sigma_closed_form<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || x > T::lit(2.0) {
        return Err(Error::domain("sigma_closed_form", format!("x = {x} outside (0, 2]")));
    }
    let r = x.sqrt().recip();
    if x <= T::one() {
        return Ok(r);
    }
    let v = (T::one() - x.recip()).sqrt();
    Ok(r * (T::one() - arctanh(v)?))
}

/// σ̃(x) = √x σ(x) for a solved σ.
pub fn sigma_tilde<T: Real>(sigma: &PiecewiseSolution<T>, x: T) -> Result<T> {
    if x <= T::zero() {
        return Ok(T::zero());
    }
    Ok(x.sqrt() * sigma.eval(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> PiecewiseSolution<f64> {
        solve_theta_dde(&DdeSpec::rho()).unwrap()
    }

    #[test]
    fn initial_segments_and_support() {
        let r = rho();
        assert_eq!(r.eval(0.5).unwrap(), 1.0);
        assert_eq!(r.eval(1.0).unwrap(), 1.0);
        assert_eq!(r.eval(-1.0).unwrap(), 0.0);
        let s = solve_theta_dde(&DdeSpec::<f64>::sigma()).unwrap();
        assert!((s.eval(0.5).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rho_matches_closed_form() {
        let r = rho();
        assert!((r.eval(2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        // mpmath
        assert!((r.eval(3.0).unwrap() - 0.048_608_388_291_131_54).abs() < 1e-14);
        assert!((rho_closed_form(2.5f64).unwrap() - 0.130_319_561_832_250_77).abs() < 1e-14);
        for i in 0..=2000 {
            let x = 1.0 + i as f64 * 1e-3;
            let d = (r.eval(x).unwrap() - rho_closed_form(x).unwrap()).abs();
            assert!(d < 1e-12, "x={x}: {d}");
        }
    }

    #[test]
    fn sigma_matches_closed_form() {
        let s = solve_theta_dde(&DdeSpec::<f64>::sigma()).unwrap();
        assert!((sigma_closed_form(1.0f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.eval(2.0).unwrap() - 0.083_881_541_046_317_01).abs() < 1e-14);
        assert!((sigma_tilde(&s, 2.0).unwrap() - 0.118_626_412_980_456_97).abs() < 1e-14);
        for i in 1..=1000 {
            let x = 1.0 + i as f64 * 1e-3;
            let d = (s.eval(x).unwrap() - sigma_closed_form(x).unwrap()).abs();
            assert!(d < 1e-12, "x={x}: {d}");
        }
    }

    #[test]
    fn residual_on_later_intervals() {
        for theta in [0.5, 1.0, 1.5, 3.0] {
            let g = solve_theta_dde(&DdeSpec::theta(theta).with_x_max(20.0)).unwrap();
            for i in 0..500 {
                let x = 2.013 + i as f64 * 0.0357;
                let gx = g.eval(x).unwrap();
                let lag = g.eval(x - 1.0).unwrap();
                let res = x * g.derivative(x).unwrap() + (1.0 - theta) * gx + theta * lag;
                let scale = gx.abs().max(lag.abs());
                assert!(res.abs() <= 1e-9 * scale, "θ={theta} x={x}: {res} vs {scale}");
            }
        }
    }

    #[test]
    fn continuity_at_integers() {
        let r = rho();
        for k in 2..20 {
            let x = k as f64;
            let left = r.eval(x - 1e-13).unwrap();
            let right = r.eval(x + 1e-13).unwrap();
            assert!((left - right).abs() <= 1e-11 * left.abs() + 1e-300, "k={k}");
        }
    }

    #[test]
    fn generalized_ranks() {
        let fam = solve_generalized_family(3, 12.0, 1e-12).unwrap();
        let r1 = &fam[0];
        let r2 = &fam[1];
        let rho = rho();
        for i in 0..200 {
            let x = 0.05 * i as f64 + 0.01;
            assert!((r1.eval(x).unwrap() - rho.eval(x).unwrap()).abs() < 1e-14);
            assert!(r2.eval(x).unwrap() >= r1.eval(x).unwrap() - 1e-15);
            assert!(fam[2].eval(x).unwrap() >= r2.eval(x).unwrap() - 1e-15);
        }
        assert_eq!(r2.eval(1.7).unwrap(), 1.0);
        assert_eq!(r2.eval(2.0).unwrap(), 1.0);
        assert_eq!(fam[2].eval(3.0).unwrap(), 1.0);
        // mpmath: 1 − ∫₂^{2.5} ln(t−1)/t dt
        assert!((r2.eval(2.5).unwrap() - 0.953_389_706_293_594_2).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_and_invalid_spec() {
        let r = solve_theta_dde(&DdeSpec::<f64>::rho().with_x_max(5.0)).unwrap();
        assert!(matches!(r.eval(5.5), Err(Error::OutOfRange { .. })));
        assert!(r.eval(5.0).is_ok());
        assert!(solve_theta_dde(&DdeSpec::<f64>::theta(-1.0)).is_err());
        assert!(solve_theta_dde(&DdeSpec::<f64>::rho().with_tol(1e-3)).is_err());
        assert!(solve_generalized_dickman(&DdeSpec::<f64>::generalized(0)).is_err());
        assert!(solve_theta_dde(&DdeSpec::<f64>::generalized(2)).is_err());
    }

    #[test]
    fn underflow_to_zero() {
        let r = solve_theta_dde(&DdeSpec::<f64>::rho().with_x_max(200.0)).unwrap();
        assert_eq!(r.eval(199.0).unwrap(), 0.0);
        assert!(r.eval(60.0).unwrap() > 0.0);
    }

    #[test]
    fn integral_of_rho_is_e_gamma() {
        let r = rho();
        let v = r.integral(64.0).unwrap();
        assert!((v - 0.577_215_664_901_532_9f64.exp()).abs() < 1e-12, "{v}");
        assert!((r.integral(2.0).unwrap() - (3.0 - 2.0 * 2f64.ln())).abs() < 1e-13);
    }

    #[test]
    fn single_precision() {
        let r = solve_theta_dde(&DdeSpec::<f32>::rho().with_x_max(6.0).with_tol(1e-6)).unwrap();
        assert!((r.eval(3.0f32).unwrap() - 0.048_608_39).abs() < 1e-5);
    }
}
