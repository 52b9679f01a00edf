use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7), with reflection below 1/2.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        let pi = T::PI();
        pi / ((pi * x).sin() * gamma(T::one() - x))
    } else {
        let (t, s) = lanczos_sum(x);
        T::lit(2.0 * std::f64::consts::PI).sqrt() * t.powf(x - T::lit(0.5)) * (-t).exp() * s
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        let pi = T::PI();
        (pi / (pi * x).sin()).abs().ln() - ln_gamma(T::one() - x)
    } else {
        let (t, s) = lanczos_sum(x);
        T::lit(0.5) * T::lit(2.0 * std::f64::consts::PI).ln() + (x - T::lit(0.5)) * t.ln() - t + s.ln()
    }
}

fn lanczos_sum<T: Real>(x: T) -> (T, T) {
    let x = x - T::one();
    let mut s = T::lit(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += T::lit(*c) / (x + T::from_usize_lossy(i));
    }
    (x + T::lit(LANCZOS_G + 0.5), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5f64) / sqrt_pi - 1.0).abs() < 1e-14);
        assert!((gamma(1.5f64) / (0.5 * sqrt_pi) - 1.0).abs() < 1e-14);
        assert!((gamma(0.1f64) / 9.513_507_698_668_732 - 1.0).abs() < 1e-14);
        assert!((gamma(7.3f64) / 1_271.423_633_663_908_8 - 1.0).abs() < 1e-13);
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-12);
        assert!((ln_gamma(50.5f64) / 146.519_255_490_720_63 - 1.0).abs() < 1e-14);
    }
}
