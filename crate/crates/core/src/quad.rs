//! Quadrature: adaptive Gauss–Kronrod (7/15) and Gauss–Legendre rules.
//!
//! The adaptive driver works on any value type that forms a vector space
//! over the scalar (real or complex integrands) via [`QuadValue`].

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Integrand values: reals or complex numbers over a [`Real`].
pub trait QuadValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Zero
{
    fn magnitude(self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    #[inline]
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    #[inline]
    fn magnitude(self) -> T {
        self.norm()
    }
}

// Kronrod abscissae, positive half, with the Gauss-7 nodes at odd positions.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One application of the 15-point Kronrod rule on `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct RuleOutput<V, T> {
    pub value: V,
    pub error: T,
}

fn rescale_error<T: Real>(err: T, resabs: T, resasc: T) -> T {
    let mut e = err.abs();
    if resasc != T::zero() && e != T::zero() {
        let scale = (T::lit(200.0) * e / resasc).powf(T::lit(1.5));
        e = if scale < T::one() { resasc * scale } else { resasc };
    }
    let tiny = T::min_positive_value() / (T::lit(50.0) * T::epsilon());
    if resabs > tiny {
        let floor = T::lit(50.0) * T::epsilon() * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

/// Gauss–Kronrod 7/15 on `[a, b]`, with the QUADPACK error heuristic.
pub fn gk15<T, V, F>(f: &mut F, a: T, b: T) -> RuleOutput<V, T>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let center = (a + b) * T::lit(0.5);
    let half = (b - a) * T::lit(0.5);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut res_g = f_center * T::lit(WG[3]);
    let mut res_k = f_center * T::lit(WGK[7]);
    let mut res_abs = f_center.magnitude() * T::lit(WGK[7]);
    let mut fv1 = [V::zero(); 7];
    let mut fv2 = [V::zero(); 7];

    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * w;
        res_abs += (f1.magnitude() + f2.magnitude()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG[j / 2]);
        }
    }

    let mean = res_k * T::lit(0.5);
    let mut res_asc = (f_center - mean).magnitude() * T::lit(WGK[7]);
    for j in 0..7 {
        res_asc += T::lit(WGK[j]) * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }

    let value = res_k * half;
    let err = (res_k - res_g).magnitude() * abs_half;
    RuleOutput {
        value,
        error: rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Globally adaptive bisection driver around [`gk15`].
#[derive(Debug, Clone, Copy)]
pub struct Adaptive<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_segments: usize,
}

impl<T: Real> Default for Adaptive<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-12).max(T::epsilon() * T::lit(16.0)),
            rel_tol: T::lit(1e-12).max(T::epsilon() * T::lit(16.0)),
            max_segments: 2000,
        }
    }
}

struct Segment<V, T> {
    a: T,
    b: T,
    value: V,
    error: T,
    splittable: bool,
}

impl<T: Real> Adaptive<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_max_segments(mut self, n: usize) -> Self {
        self.max_segments = n;
        self
    }

    /// Integrates over consecutive breakpoints `points[0] < points[1] < …`,
    /// returning the estimate whether or not the tolerance was met.
    pub fn estimate<V, F>(&self, mut f: F, points: &[T]) -> Estimate<V, T>
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let mut segs: Vec<Segment<V, T>> = Vec::with_capacity(64);
        let mut evals = 0usize;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b == a {
                continue;
            }
            let r = gk15(&mut f, a, b);
            evals += 15;
            segs.push(Segment {
                a,
                b,
                value: r.value,
                error: r.error,
                splittable: true,
            });
        }

        loop {
            let total = segs.iter().fold(V::zero(), |acc, s| acc + s.value);
            let err: T = segs.iter().map(|s| s.error).sum();
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            if err <= target {
                return Estimate {
                    value: total,
                    error: err,
                    evaluations: evals,
                    converged: true,
                };
            }
            let worst = segs
                .iter()
                .enumerate()
                .filter(|(_, s)| s.splittable)
                .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
                .map(|(i, _)| i);
            let Some(i) = worst else {
                return Estimate {
                    value: total,
                    error: err,
                    evaluations: evals,
                    converged: false,
                };
            };
            if segs.len() >= self.max_segments {
                return Estimate {
                    value: total,
                    error: err,
                    evaluations: evals,
                    converged: false,
                };
            }
            let (a, b) = (segs[i].a, segs[i].b);
            let mid = (a + b) * T::lit(0.5);
            let width_floor = T::lit(64.0) * T::epsilon() * (a.abs() + b.abs()) + T::min_positive_value();
            if (b - a).abs() <= width_floor || mid == a || mid == b {
                segs[i].splittable = false;
                continue;
            }
            let left = gk15(&mut f, a, mid);
            let right = gk15(&mut f, mid, b);
            evals += 30;
            segs[i] = Segment {
                a,
                b: mid,
                value: left.value,
                error: left.error,
                splittable: true,
            };
            segs.push(Segment {
                a: mid,
                b,
                value: right.value,
                error: right.error,
                splittable: true,
            });
        }
    }

    /// Like [`Adaptive::estimate`] but fails with [`Error::Accuracy`] when the
    /// tolerance was not reached.
    pub fn integrate<V, F>(&self, f: F, points: &[T]) -> Result<Estimate<V, T>>
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let est = self.estimate(f, points);
        if est.converged {
            Ok(est)
        } else {
            Err(Error::Accuracy {
                estimate: est.error.to_f64_lossy(),
                requested: self
                    .abs_tol
                    .max(self.rel_tol * est.value.magnitude())
                    .to_f64_lossy(),
            })
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, refined by Newton in f64 then in T.
        let mut x = ((i as f64 + 0.75) / (nf + 0.5) * std::f64::consts::PI).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = T::lit(-x);
        nodes[n - 1 - i] = T::lit(x);
        weights[i] = T::lit(w);
        weights[n - 1 - i] = T::lit(w);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped onto panels.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule on `[a, b]`.
    pub fn panel<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: QuadValue<T>,
        F: FnMut(T) -> V,
    {
        let c = (a + b) * T::lit(0.5);
        let h = (b - a) * T::lit(0.5);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(c + h * *x) * *w;
        }
        acc * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gk15_exact_on_polynomials() {
        // Kronrod-15 integrates degree 22 exactly.
        let r = gk15(&mut |x: f64| x.powi(22) + 3.0 * x.powi(5), -1.0, 1.0);
        assert!((r.value - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let q = Adaptive::new(1e-12, 1e-12);
        let r = q.integrate(|x: f64| 1.0 / x.sqrt(), &[0.0, 1.0]).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn adaptive_complex_integrand() {
        let q = Adaptive::new(1e-13, 1e-13);
        let r = q
            .integrate(|t: f64| Complex::new(0.0, t).exp(), &[0.0, std::f64::consts::PI])
            .unwrap();
        // ∫₀^π e^{it} dt = 2i
        assert!((r.value - Complex::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn gauss_legendre_matches_known_rule() {
        let (x, w) = gauss_legendre::<f64>(3);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        let gl = GaussLegendre::<f64>::new(20);
        let v: f64 = gl.panel(0.0, 2.0, |t| t.powi(39));
        assert!((v / (2f64.powi(40) / 40.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn single_precision_instantiation() {
        let q = Adaptive::<f32>::new(1e-5, 1e-5);
        let r = q.integrate(|x: f32| x.exp(), &[0.0, 1.0]).unwrap();
        assert!((r.value - (1f32.exp() - 1.0)).abs() < 1e-5);
    }
}
