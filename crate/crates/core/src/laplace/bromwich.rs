use num_complex::Complex;

use super::AsymptoticTerm;
use crate::error::{Error, Result};
use crate::quad::{Estimate, GaussLegendre};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct BromwichOptions<T> {
    /// Abscissa c of the line Re η = c.
    pub abscissa: T,
    pub tol: T,
    /// Hard cap on the truncation height.
    pub max_height: T,
}

impl<T: Real> Default for BromwichOptions<T> {
    fn default() -> Self {
        Self {
            abscissa: T::one(),
            tol: T::lit(super::INVERSION_TOL),
            max_height: T::lit(2e4),
        }
    }
}

/// Vertical-line inversion with the asymptotic part removed:
///
/// f(ξ) = Σ L⁻¹[terms](ξ) + (e^{cξ}/π) ∫₀^∞ Re[e^{iyξ} R(c+iy)] dy,
/// R = F − Σ terms.
///
/// The remainder decays like the first omitted power. Past height Y the
/// oscillatory tail is about e^{iYξ}R(c+iY)/(iξ), which sets the truncation.
/// Assumes f is real.
pub fn bromwich<T, F>(f: F, terms: &[AsymptoticTerm<T>], xi: T, opts: &BromwichOptions<T>) -> Result<Estimate<T, T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let c = opts.abscissa;
    let remainder = |y: T| -> Result<Complex<T>> {
        let eta = Complex::new(c, y);
        let mut v = f(eta)?;
        for t in terms {
            v = v - t.transform(eta);
        }
        Ok(v)
    };
    let gl = GaussLegendre::<T>::new(16);
    // poles of the subtracted terms sit at distance c from the line
    let width = T::one().min(T::lit(8.0) / xi).min(c * T::lit(0.25));
    let amp = (c * xi).exp() / T::PI();
    let target = opts.tol * T::lit(0.01);
    let min_height = T::lit(20.0);

    let mut acc = T::zero();
    let mut y0 = T::zero();
    let mut evals = 0usize;
    let mut tail;
    loop {
        let y1 = y0 + width;
        let mut failure = None;
        let part = gl.panel(y0, y1, |y: T| match remainder(y) {
            Ok(r) => (Complex::new(T::zero(), y * xi).exp() * r).re,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        evals += gl.len();
        acc += part;
        y0 = y1;
        tail = amp * remainder(y0)?.norm() * T::lit(2.0) / xi;
        if y0 >= min_height && tail < target {
            break;
        }
        if y0 >= opts.max_height {
            break;
        }
    }
    let base: T = terms.iter().map(|t| t.inverse(xi)).sum();
    let value = base + amp * acc;
    let converged = tail <= opts.tol;
    if !converged {
        return Err(Error::Accuracy {
            estimate: tail.to_f64_lossy(),
            requested: opts.tol.to_f64_lossy(),
        });
    }
    Ok(Estimate {
        value,
        error: tail,
        evaluations: evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_with_and_without_terms() {
        // 1/(η+1): remainder after 1/η is −1/(η(η+1)) ~ η^{−2}
        let f = |z: Complex<f64>| Ok((z + 1.0).inv());
        let terms = [AsymptoticTerm { coeff: 1.0, shift: 0.0, power: 1.0 }];
        let mut o = BromwichOptions::default();
        o.tol = 1e-6;
        let v = bromwich(f, &terms, 1.3, &o).unwrap().value;
        assert!((v - (-1.3f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn shifted_terms_invert_exactly() {
        let t = AsymptoticTerm { coeff: 2.0, shift: 1.0, power: 3.0 };
        assert_eq!(t.inverse(0.5f64), 0.0);
        assert!((t.inverse(3.0f64) - 4.0).abs() < 1e-14);
        let f = move |z: Complex<f64>| Ok(t.transform(z));
        let v = bromwich(f, &[t], 3.0, &BromwichOptions::default()).unwrap().value;
        assert!((v - 4.0).abs() < 1e-12);
    }
}
