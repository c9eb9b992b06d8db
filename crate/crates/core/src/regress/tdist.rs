//! Student-t distribution function for integer degrees of freedom.

use core::f64::consts::PI;

/// `P(T <= t)` for a Student-t variable with `df` degrees of freedom.
///
/// Uses the finite trigonometric series that exists for integer `df`
/// (odd and even cases), so the result is exact up to rounding.
///
/// # Panics
/// If `df == 0`.
pub fn t_cdf(t: f64, df: u32) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if t.is_nan() {
        return f64::NAN;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    if t == f64::NEG_INFINITY {
        return 0.0;
    }
    let central = central_probability(t.abs(), df);
    if t >= 0.0 {
        0.5 + 0.5 * central
    } else {
        0.5 - 0.5 * central
    }
}

/// Upper tail `P(T > t)`.
pub fn t_sf(t: f64, df: u32) -> f64 {
    t_cdf(-t, df)
}

/// `P(|T| < x)` for `x >= 0`.
fn central_probability(x: f64, df: u32) -> f64 {
    let nu = df as f64;
    let denom = nu + x * x;
    // sin(theta) and cos^2(theta) for theta = atan(x / sqrt(nu)).
    let sin = x / libm::sqrt(denom);
    let cos2 = nu / denom;
    if df % 2 == 1 {
        let theta = libm::atan(x / libm::sqrt(nu));
        if df == 1 {
            return 2.0 * theta / PI;
        }
        // 1 + (2/3) c^2 + (2*4)/(3*5) c^4 + ... up to c^(df-3)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=(df - 3) / 2 {
            term *= cos2 * (2 * k) as f64 / (2 * k + 1) as f64;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        let cos = libm::sqrt(cos2);
        (2.0 / PI * (theta + sin * cos * sum)).min(1.0)
    } else {
        // 1 + (1/2) c^2 + (1*3)/(2*4) c^4 + ... up to c^(df-2)
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=(df - 2) / 2 {
            term *= cos2 * (2 * k - 1) as f64 / (2 * k) as f64;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        (sin * sum).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Density of the t distribution.
    fn density(x: f64, df: u32) -> f64 {
        let nu = df as f64;
        let ln_c = libm::lgamma((nu + 1.0) / 2.0) - libm::lgamma(nu / 2.0) - 0.5 * libm::log(nu * PI);
        libm::exp(ln_c - (nu + 1.0) / 2.0 * libm::log1p(x * x / nu))
    }

    #[allow(clippy::too_many_arguments)]
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }

    /// Quadrature of the density from 0 to t, independent of the series.
    fn cdf_by_quadrature(t: f64, df: u32) -> f64 {
        let f = |x: f64| density(x, df);
        let (a, b) = (0.0, t.abs());
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let half = simpson(&f, a, b, fa, fm, fb, whole, 1e-13, 50);
        if t >= 0.0 { 0.5 + half } else { 0.5 - half }
    }

    #[test]
    fn zero_is_the_median() {
        for df in [1, 2, 3, 7, 30, 1000] {
            assert_eq!(t_cdf(0.0, df), 0.5);
        }
    }

    #[test]
    fn closed_forms_for_one_and_two_df() {
        assert!((t_cdf(1.0, 1) - 0.75).abs() < 1e-15);
        assert!((t_cdf(1.0, 2) - 0.788675134594813).abs() < 1e-12);
        for t in -3..=3 {
            let t = t as f64;
            let cauchy = 0.5 + libm::atan(t) / PI;
            let two = 0.5 + t / (2.0 * libm::sqrt(2.0 + t * t));
            assert!((t_cdf(t, 1) - cauchy).abs() < 1e-12);
            assert!((t_cdf(t, 2) - two).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_quadrature() {
        for df in [1, 2, 3, 4, 5, 7, 10, 25, 60] {
            for &t in &[-4.0, -2.5, -1.0, -0.3, 0.2, 1.0, 1.7, 2.0, 3.3, 6.0] {
                let q = cdf_by_quadrature(t, df);
                assert!((t_cdf(t, df) - q).abs() < 1e-9, "df {df} t {t}: {} vs {q}", t_cdf(t, df));
            }
        }
    }

    #[test]
    fn upper_tail_at_two_with_seven_df() {
        let oracle = 1.0 - cdf_by_quadrature(2.0, 7);
        assert!((oracle - 0.042_809_664).abs() < 1e-8);
        assert!((t_sf(2.0, 7) - oracle).abs() < 1e-9);
    }

    #[test]
    fn large_df_approaches_normal() {
        // Phi(1.96) = 0.9750021048517795
        assert!((t_cdf(1.96, 1_000_000) - 0.9750021048517795).abs() < 1e-6);
    }

    #[test]
    fn infinities() {
        assert_eq!(t_cdf(f64::INFINITY, 3), 1.0);
        assert_eq!(t_cdf(f64::NEG_INFINITY, 3), 0.0);
        assert!(t_cdf(f64::NAN, 3).is_nan());
    }

    proptest! {
        #[test]
        fn symmetric(t in -50.0f64..50.0, df in 1u32..200) {
            prop_assert!((t_cdf(t, df) + t_cdf(-t, df) - 1.0).abs() <= 1e-10);
        }

        #[test]
        fn monotone(a in -20.0f64..20.0, d in 0.0f64..5.0, df in 1u32..200) {
            prop_assert!(t_cdf(a + d, df) >= t_cdf(a, df) - 4.0 * f64::EPSILON);
        }

        #[test]
        fn in_unit_interval(t in -1e6f64..1e6, df in 1u32..500) {
            let p = t_cdf(t, df);
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
