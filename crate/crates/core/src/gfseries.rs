//! Exact bivariate power series over the rationals, used to count mappings by
//! components and cyclic points through
//! Σ a_{nmℓ} x^n y^ℓ / n! = ln(1/(1 − y τ(x)))^m / m!,
//! where τ = x e^τ is the tree function.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest order accepted for the component/cycle series.
pub const MAX_EGF_ORDER: usize = 12;
/// Largest order accepted for the tree function alone.
pub const MAX_TREE_ORDER: usize = 16;

/// Truncated series Σ c_{ij} x^i y^j with i, j ≤ `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    order: usize,
    // coeffs[i][j] multiplies x^i y^j
    coeffs: Vec<Vec<BigRational>>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![vec![BigRational::zero(); order + 1]; order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0][0] = BigRational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of x^i y^j; zero beyond the truncation order.
    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.coeffs[i][j] = v;
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::InvalidSpec(format!(
                "series orders differ: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (row, orow) in out.coeffs.iter_mut().zip(&other.coeffs) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = Self::zero(n);
        for i1 in 0..=n {
            for j1 in 0..=n {
                let a = &self.coeffs[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(n - i1) {
                    for j2 in 0..=(n - j1) {
                        let b = &other.coeffs[i2][j2];
                        if !b.is_zero() {
                            out.coeffs[i1 + i2][j1 + j2] += a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for c in row {
                *c *= k;
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.order);
        for _ in 0..k {
            out = out.try_mul(self).expect("same order");
        }
        out
    }

    /// exp of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0][0].is_zero() {
            return Err(Error::InvalidSpec("exp needs a zero constant term".into()));
        }
        let mut out = Self::one(self.order);
        let mut term = Self::one(self.order);
        // every factor raises the total degree, so 2·order + 1 terms suffice
        for k in 1..=(2 * self.order + 1) {
            term = term.try_mul(self)?.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: Self) -> BivariateSeries {
        self.try_add(rhs).expect("same order")
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: Self) -> BivariateSeries {
        self.try_mul(rhs).expect("same order")
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// τ(x) = Σ n^{n−1} x^n / n! through x^`n_max`.
pub fn tree_function_series(n_max: usize) -> Result<BivariateSeries> {
    if n_max == 0 || n_max > MAX_TREE_ORDER {
        return Err(Error::Size(format!("tree series order {n_max} outside 1..={MAX_TREE_ORDER}")));
    }
    let mut s = BivariateSeries::zero(n_max);
    for n in 1..=n_max {
        let num = BigInt::from(n).pow(n as u32 - 1);
        s.set(n, 0, BigRational::new(num, factorial(n)));
    }
    Ok(s)
}

/// τ − x e^τ, truncated; zero for a correct τ.
pub fn tree_function_residual(n_max: usize) -> Result<BivariateSeries> {
    let tau = tree_function_series(n_max)?;
    let mut x = BivariateSeries::zero(n_max);
    x.set(1, 0, BigRational::one());
    let rhs = x.try_mul(&tau.exp()?)?;
    tau.try_add(&rhs.scale(&-BigRational::one()))
}

/// ln(1/(1 − yτ))^m / m! = (Σ_j y^j τ^j / j)^m / m!.
pub fn component_cycle_egf(m: usize, n_max: usize) -> Result<BivariateSeries> {
    if m == 0 || m > n_max || n_max > MAX_EGF_ORDER {
        return Err(Error::Size(format!(
            "need 1 <= m <= n_max <= {MAX_EGF_ORDER}, got m = {m}, n_max = {n_max}"
        )));
    }
    let tau = tree_function_series(n_max)?;
    let mut log = BivariateSeries::zero(n_max);
    let mut power = BivariateSeries::one(n_max);
    for j in 1..=n_max {
        power = power.try_mul(&tau)?;
        let inv_j = BigRational::new(BigInt::one(), BigInt::from(j));
        for i in j..=n_max {
            let c = power.coeff(i, 0);
            if !c.is_zero() {
                log.set(i, j, c * &inv_j);
            }
        }
    }
    Ok(log.pow(m).scale(&BigRational::new(BigInt::one(), factorial(m))))
}

/// n! [x^n y^ℓ] of the series: the number of mappings on n points with m
/// components and ℓ cyclic points.
pub fn a_count_in(egf: &BivariateSeries, n: usize, l: usize) -> Result<BigInt> {
    let v = egf.coeff(n, l) * BigRational::from_integer(factorial(n));
    if !v.denom().is_one() {
        return Err(Error::NonInteger(format!("n! [x^{n} y^{l}] = {v}")));
    }
    Ok(v.to_integer())
}

/// a_{nmℓ} from the generating function.
pub fn a_count(n: usize, m: usize, l: usize) -> Result<BigInt> {
    if n == 0 || n > MAX_EGF_ORDER {
        return Err(Error::Size(format!("n = {n} outside 1..={MAX_EGF_ORDER}")));
    }
    if m == 0 || m > n {
        return Ok(BigInt::zero());
    }
    a_count_in(&component_cycle_egf(m, n)?, n, l)
}

/// a_{nmℓ} keyed by (m, ℓ).
pub type CountTable = BTreeMap<(usize, usize), u64>;

/// All nonzero a_{nmℓ} for one n.
pub fn count_table(n: usize) -> Result<CountTable> {
    if n == 0 || n > MAX_EGF_ORDER {
        return Err(Error::Size(format!("n = {n} outside 1..={MAX_EGF_ORDER}")));
    }
    let mut out = CountTable::new();
    for m in 1..=n {
        let egf = component_cycle_egf(m, n)?;
        for l in m..=n {
            let a = a_count_in(&egf, n, l)?;
            if !a.is_zero() {
                let v = a.to_u64().ok_or_else(|| Error::Size(format!("a_{{{n},{m},{l}}} exceeds u64")))?;
                out.insert((m, l), v);
            }
        }
    }
    Ok(out)
}

/// One row of the weighted-sum trend: Σ_ℓ ℓ a_{nmℓ} / n^n next to
/// ln(n)^{m−1} / (2^{m−1} (m−1)!).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendRow {
    pub n: usize,
    pub m: usize,
    pub weighted: f64,
    pub asymptotic: f64,
    pub ratio: f64,
}

/// Trend rows for 2 ≤ n ≤ `n_max` and the given m.
pub fn weighted_sum_trend(n_max: usize, ms: &[usize]) -> Result<Vec<TrendRow>> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let table = count_table(n)?;
        let total = (n as f64).powi(n as i32);
        for &m in ms {
            let num: u64 = table
                .iter()
                .filter(|((mm, _), _)| *mm == m)
                .map(|((_, l), a)| *l as u64 * a)
                .sum();
            let weighted = num as f64 / total;
            let fact: f64 = (1..m).map(|k| k as f64).product();
            let asymptotic = (n as f64).ln().powi(m as i32 - 1) / (2f64.powi(m as i32 - 1) * fact);
            rows.push(TrendRow {
                n,
                m,
                weighted,
                asymptotic,
                ratio: weighted / asymptotic,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn tree_coefficients() {
        let t = tree_function_series(6).unwrap();
        assert_eq!(t.coeff(1, 0), q(1, 1));
        assert_eq!(t.coeff(3, 0), q(3, 2));
        assert_eq!(t.coeff(0, 0), q(0, 1));
        assert!(tree_function_residual(10).unwrap().is_zero());
        assert!(tree_function_series(17).is_err());
    }

    #[test]
    fn small_counts() {
        let e1 = component_cycle_egf(1, 2).unwrap();
        assert_eq!(e1.coeff(2, 1) * q(2, 1), q(2, 1));
        assert_eq!(e1.coeff(2, 2) * q(2, 1), q(1, 1));
        let e2 = component_cycle_egf(2, 2).unwrap();
        assert_eq!(e2.coeff(2, 2) * q(2, 1), q(1, 1));
        assert_eq!(a_count(1, 1, 1).unwrap(), BigInt::from(1));
        assert_eq!(a_count(2, 1, 1).unwrap(), BigInt::from(2));
    }

    #[test]
    fn row_sums() {
        for n in 1..=10usize {
            let total: u64 = count_table(n).unwrap().values().sum();
            assert_eq!(total, (n as u64).pow(n as u32), "n = {n}");
        }
    }

    #[test]
    fn order_mismatch() {
        assert!(BivariateSeries::zero(3).try_mul(&BivariateSeries::zero(4)).is_err());
        assert!(component_cycle_egf(1, 13).is_err());
    }
}
