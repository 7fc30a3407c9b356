//! Gamma function via the Lanczos approximation.
//!
//! The normalizing constant of the component density and the L_p ball
//! volumes both need Γ at double precision. The g = 7, 9-term Lanczos
//! coefficient set is accurate to better than 1e-13 relative error on
//! the positive real axis, comfortably inside the 1e-12 budget for
//! norm orders up to 64.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x (poles at non-positive integers return NaN).
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1−x) = π / sin(πx).
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let rel = ((actual - expected) / expected).abs();
        assert!(rel < tol, "got {actual}, want {expected}, rel err {rel:e}");
    }

    #[test]
    fn matches_high_precision_references() {
        // Frozen from a 30-digit arbitrary-precision evaluation.
        let cases = [
            (0.015625, 63.43802046989131),
            (0.125, 7.533941598797612),
            (0.2, 4.590843711998803),
            (1.0 / 3.0, 2.6789385347077476),
            (0.5, 1.7724538509055160),
            (1.0, 1.0),
            (1.5, 0.8862269254527580),
            (2.75, 1.6083594219855457),
            (7.5, 1871.2543057977883),
            (21.0, 2.43290200817664e18),
            (33.5, 1.5058569756267019e36),
            (64.0, 1.9826083154044400e87),
        ];
        for (x, want) in cases {
            assert_rel(gamma(x), want, 1e-12);
        }
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        // The direct form overflows its intermediate t^(z+1/2) past
        // x ~ 140; ln_gamma is the large-argument path.
        for &x in &[0.03, 0.25, 1.5, 3.5, 12.0, 64.5, 120.0] {
            assert_rel(ln_gamma(x), gamma(x).ln(), 1e-11);
        }
        assert!((ln_gamma(300.0) - 1409.2020674704118).abs() < 1e-9);
    }

    #[test]
    fn half_integer_identity() {
        // Γ(1/2) = √π.
        assert_rel(gamma(0.5), PI.sqrt(), 1e-14);
    }
}
