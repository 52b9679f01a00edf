//! Chebyshev series on a finite interval: interpolation at Lobatto points,
//! Clenshaw evaluation, term-wise calculus.

use crate::scalar::Real;

/// Lobatto points cos(πj/n), j = 0..=n, on [-1, 1] (descending).
pub fn lobatto_points<T: Real>(n: usize) -> Vec<T> {
    (0..=n)
        .map(|j| T::lit((std::f64::consts::PI * j as f64 / n as f64).cos()))
        .collect()
}

/// Interpolation coefficients from values at [`lobatto_points`].
///
/// Returns `c` with f ≈ Σ c_k T_k(x); the leading coefficient is not halved.
pub fn coefficients<T: Real>(values: &[T]) -> Vec<T> {
    let n = values.len() - 1;
    assert!(n >= 1, "need at least two samples");
    let nf = n as f64;
    let mut c = vec![T::zero(); n + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut s = T::zero();
        for (j, &v) in values.iter().enumerate() {
            // (jk mod 2n) keeps the cosine argument small
            let w = T::lit((std::f64::consts::PI * ((j * k) % (2 * n)) as f64 / nf).cos());
            let half = if j == 0 || j == n { T::lit(0.5) } else { T::one() };
            s += half * v * w;
        }
        let scale = if k == 0 || k == n { T::one() / T::lit(nf) } else { T::lit(2.0 / nf) };
        *ck = s * scale;
    }
    c
}

/// Clenshaw recurrence for Σ c_k T_k(x).
pub fn clenshaw<T: Real>(c: &[T], x: T) -> T {
    let two_x = x + x;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(T::zero()) + x * b1 - b2
}

/// Coefficients of the antiderivative vanishing at x = -1, in the variable
/// x ∈ [-1, 1]. The result has one more term than the input.
pub fn antiderivative<T: Real>(c: &[T]) -> Vec<T> {
    let n = c.len();
    let get = |k: usize| if k < n { c[k] } else { T::zero() };
    let mut out = vec![T::zero(); n + 1];
    for k in 1..=n {
        let prev = if k == 1 { get(0) + get(0) } else { get(k - 1) };
        out[k] = (prev - get(k + 1)) / T::from_usize_lossy(2 * k);
    }
    let mut at_minus_one = T::zero();
    for (k, &v) in out.iter().enumerate().skip(1) {
        if k % 2 == 0 {
            at_minus_one += v;
        } else {
            at_minus_one -= v;
        }
    }
    out[0] = -at_minus_one;
    out
}

/// Coefficients of the derivative in x ∈ [-1, 1].
pub fn derivative<T: Real>(c: &[T]) -> Vec<T> {
    let n = c.len();
    if n <= 1 {
        return vec![T::zero()];
    }
    let mut d = vec![T::zero(); n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + T::from_usize_lossy(2 * k) * c[k];
    }
    d[0] = d[0] * T::lit(0.5);
    d.truncate(n - 1);
    d
}
