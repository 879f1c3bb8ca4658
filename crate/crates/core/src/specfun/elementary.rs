//! Dawson's integral, the sine and cosine integrals, and the Kummer function
//! M(1, 3/2, s).

use num_complex::Complex64;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Dawson's integral `D+(x) = exp(-x^2) * integral_0^x exp(y^2) dy`.
///
/// For `|x| < 6` the positive series `exp(-x^2) sum x^(2n+1) / (n! (2n+1))`
/// is summed (no cancellation); beyond that the asymptotic series
/// `sum (2n-1)!! / (2^(n+1) x^(2n+1))` is truncated at its smallest term,
/// whose size is below `exp(-36)`.
pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax == 0.0 {
        0.0
    } else if ax < 6.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut n = 0usize;
        loop {
            n += 1;
            term *= x2 / n as f64;
            let contrib = term / (2 * n + 1) as f64;
            sum += contrib;
            if contrib < 1e-17 * sum && n as f64 > x2 {
                break;
            }
        }
        (-x2).exp() * sum
    } else if ax.is_infinite() {
        0.0
    } else {
        let inv2x2 = 1.0 / (2.0 * ax * ax);
        let mut term = 0.5 / ax;
        let mut sum = term;
        let mut n = 0usize;
        loop {
            let next = term * (2 * n + 1) as f64 * inv2x2;
            if next >= term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            n += 1;
        }
        sum
    };
    v.copysign(x)
}

/// `dD+/dx = 1 - 2 x D+(x)`.
pub fn dawson_derivative(x: f64) -> f64 {
    1.0 - 2.0 * x * dawson(x)
}

/// Sine and cosine integrals `(Si(x), Ci(x))` for `x > 0`.
///
/// Power series for `x <= 2`; beyond that the continued fraction for
/// `E1(ix)` evaluated with the modified Lentz method.
fn cisi(t: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 200;
    if t > 2.0 {
        let one = Complex64::new(1.0, 0.0);
        let mut b = Complex64::new(1.0, t);
        let mut c = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 2..=MAXIT {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += 2.0;
            d = one / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        let h = Complex64::new(t.cos(), -t.sin()) * h;
        (std::f64::consts::FRAC_PI_2 + h.im, -h.re)
    } else {
        let (mut sum, mut sums, mut sumc) = (0.0, 0.0, 0.0);
        let mut sign = 1.0;
        let mut fact = 1.0;
        let mut odd = true;
        for k in 1..=MAXIT {
            fact *= t / k as f64;
            let term = fact / k as f64;
            sum += sign * term;
            let err = term / sum.abs();
            if odd {
                sign = -sign;
                sums = sum;
                sum = sumc;
            } else {
                sumc = sum;
                sum = sums;
            }
            if err < EPS {
                break;
            }
            odd = !odd;
        }
        (sums, sumc + t.ln() + EULER_GAMMA)
    }
}

/// Sine integral `Si(x) = integral_0^x sin(t)/t dt`; odd in `x`.
pub fn sine_integral(x: f64) -> f64 {
    if x == 0.0 || x.is_nan() {
        return x;
    }
    if x.is_infinite() {
        return std::f64::consts::FRAC_PI_2.copysign(x);
    }
    cisi(x.abs()).0.copysign(x)
}

/// Cosine integral `Ci(x) = -integral_x^inf cos(t)/t dt` for `x > 0`.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "cosine_integral",
            format!("requires x > 0 (logarithmic singularity at 0), got {x}"),
        ));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(cisi(x).1)
}

/// Kummer's confluent hypergeometric function `M(1, 3/2, s)`.
///
/// `s >= 0`: direct series `sum s^n / (3/2)_n` (positive terms).
/// `s < 0`: `M(1, 3/2, -x^2) = D+(x) / x`.
pub fn conf_hyp_m_1_32(s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s == 0.0 {
        return 1.0;
    }
    if s < 0.0 {
        let x = (-s).sqrt();
        return dawson(x) / x;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0usize;
    loop {
        term *= s / (1.5 + n as f64);
        sum += term;
        n += 1;
        if (term < 1e-17 * sum && n as f64 > s) || !sum.is_finite() {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn dawson_reference_points() {
        assert_eq!(dawson(0.0), 0.0);
        // tabulated (Abramowitz & Stegun 7.1)
        assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-14);
        assert!((dawson(0.5) - 0.424_436_383_502_022_3).abs() < 1e-14);
        assert!((dawson(2.0) - 0.301_340_388_923_791_97).abs() < 1e-14);
        assert!((dawson(-1.0) + dawson(1.0)).abs() == 0.0);
    }

    #[test]
    fn dawson_continuous_across_series_switch() {
        let lo = dawson(6.0 - 1e-12);
        let hi = dawson(6.0);
        assert!((lo - hi).abs() < 1e-13, "{lo} vs {hi}");
    }

    #[test]
    fn dawson_large_argument_series() {
        let x: f64 = 10.0;
        let series = 1.0 / (2.0 * x) + 1.0 / (4.0 * x.powi(3)) + 3.0 / (8.0 * x.powi(5));
        assert!((dawson(x) - series).abs() < 2e-7);
    }

    #[test]
    fn sine_integral_values() {
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(5.0) - 1.549_931_244_944_674).abs() < 1e-14);
        assert_eq!(sine_integral(-3.0), -sine_integral(3.0));
        assert!((sine_integral(100.0) - FRAC_PI_2).abs() < 0.02);
    }

    #[test]
    fn cosine_integral_values() {
        assert!((cosine_integral(1.0).unwrap() - 0.337_403_922_900_968_1).abs() < 1e-14);
        assert!((cosine_integral(2.0).unwrap() - 0.422_980_828_774_864_9).abs() < 1e-14);
        assert!((cosine_integral(10.0).unwrap() + 0.045_456_433_004_455_37).abs() < 1e-14);
        assert!(matches!(cosine_integral(0.0), Err(Error::Domain { .. })));
        assert!(cosine_integral(-1.0).is_err());
    }

    #[test]
    fn kummer_values() {
        assert_eq!(conf_hyp_m_1_32(0.0), 1.0);
        // M(1, 3/2, x^2) = sqrt(pi) exp(x^2) erf(x) / (2 x); at x = 1: erf(1) = 0.8427007929497149
        let want = PI.sqrt() * 1f64.exp() * 0.842_700_792_949_714_9 / 2.0;
        assert!((conf_hyp_m_1_32(1.0) - want).abs() < 1e-13);
        assert!((conf_hyp_m_1_32(1.0) - 2.030_078_469_278_705).abs() < 1e-14);
        assert!(conf_hyp_m_1_32(-10.0) <= 0.1 + 0.05);
    }
}
