use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Upper tail of the standard normal, `P(N(0,1) > x) = erfc(x/√2)/2`.
pub fn q_function(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::invalid("q_function: NaN argument"));
    }
    Ok(upper_tail(x))
}

/// Lower tail `Φ(x)`.
pub fn normal_cdf(x: f64) -> Result<f64> {
    q_function(-x)
}

#[inline]
pub(crate) fn upper_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of [`q_function`] on `(0, 1)`.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("q_inverse: {p} outside (0, 1)")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let mut x = if p < 0.5 {
        rational_guess(p)
    } else {
        -rational_guess(1.0 - p)
    };
    // Newton on Q(x) − p; the starting error is below 5e−4.
    for _ in 0..8 {
        let density = INV_SQRT_2PI * (-0.5 * x * x).exp();
        if density == 0.0 {
            break;
        }
        let step = (upper_tail(x) - p) / density;
        x += step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    Ok(x)
}

/// Abramowitz–Stegun 26.2.23 starting point for `0 < p ≤ 0.5`.
fn rational_guess(p: f64) -> f64 {
    let t = (-2.0 * p.ln()).sqrt();
    t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
        / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Reference values from a 50-digit erfc evaluation.
    const Q_TABLE: &[(f64, f64)] = &[
        (1.2815515655, 0.10000000000782729966),
        (-1.5, 0.933192798731141934),
        (2.0, 0.0227501319481792072),
        (3.5, 0.00023262907903552503635),
        (5.0, 2.8665157187919391167e-7),
        (8.0, 6.2209605742717841235e-16),
        (-8.0, 0.9999999999999993779),
        (10.0, 7.619853024160526066e-24),
        (20.0, 2.7536241186062336951e-89),
    ];

    #[test]
    fn q_reference_values() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
        for &(x, q) in Q_TABLE {
            let got = q_function(x).unwrap();
            let tol = if x.abs() <= 8.0 { 1e-12 } else { 1e-9 };
            assert!(rel(got, q) < tol, "Q({x}) = {got}, want {q}");
        }
        assert!((q_function(1.2815515655).unwrap() - 0.1).abs() < 1e-9);
    }

    #[test]
    fn q_far_tail() {
        let q = q_function(40.0).unwrap();
        assert!((0.0..1e-300).contains(&q));
        assert_eq!(q_function(f64::INFINITY).unwrap(), 0.0);
        assert!(q_function(f64::NAN).is_err());
    }

    #[test]
    fn q_inverse_reference_values() {
        assert_eq!(q_inverse(0.5).unwrap(), 0.0);
        let table = [
            (0.1, 1.2815515655446004353),
            (1e-6, 4.7534243088228989573),
            (0.01, 2.3263478740408410931),
            (0.25, 0.6744897501960817432),
            (0.75, -0.6744897501960817432),
            (0.999, -3.0902323061678132778),
        ];
        for (p, x) in table {
            let got = q_inverse(p).unwrap();
            assert!((got - x).abs() < 1e-12, "Q⁻¹({p}) = {got}, want {x}");
            assert!(rel(q_function(got).unwrap(), p) < 1e-10);
        }
        assert!((q_inverse(0.1).unwrap() - 1.2815515655).abs() < 1e-8);
    }

    #[test]
    fn q_inverse_domain() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(q_inverse(p), Err(Error::Domain(_))));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn symmetry(x in -8.0f64..8.0) {
                let s = q_function(x).unwrap() + q_function(-x).unwrap();
                prop_assert!((s - 1.0).abs() < 1e-12);
            }

            #[test]
            fn monotone(x in -10.0f64..10.0, dx in 0.0f64..1.0) {
                prop_assert!(q_function(x + dx).unwrap() <= q_function(x).unwrap());
            }

            #[test]
            fn inverse_round_trip(p in 1e-12f64..(1.0 - 1e-9)) {
                let x = q_inverse(p).unwrap();
                prop_assert!(((q_function(x).unwrap() - p) / p).abs() < 1e-10);
            }
        }
    }
}
