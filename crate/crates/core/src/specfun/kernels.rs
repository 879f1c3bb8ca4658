//! `S1(s, u)` and the subcritical kernels `I1+-(s, u)`.
//!
//! ```text
//! S1(s, u)     = int_0^1 exp(s sqrt(1-x^2)) sin(u x) / sqrt(1-x^2) dx
//! dS1/ds(s, u) = int_0^1 exp(s sqrt(1-x^2)) sin(u x) dx
//! I1+-(s, u)   = int_0^1 (1 +- 1/sqrt(1-x^2)) exp(-s +- s sqrt(1-x^2)) sin(u x) dx
//!              = +- exp(-s) (d/ds + 1) S1(+-s, u)
//! ```
//!
//! All evaluations go through versions scaled by `exp(-shift)` so that the
//! `exp(-s)` prefactor of the kernels is applied inside the integrand and
//! large `s` never overflows.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, QuadratureControl, SpecfunValue};

/// Sign selector for the `+-` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

fn check_finite(function: &'static str, s: f64, u: f64) -> Result<()> {
    if s.is_finite() && u.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, format!("non-finite argument (s = {s}, u = {u})")))
    }
}

/// `sin(u z) / z`, continuous at `z = 0`.
fn sinc_scaled(u: f64, z: f64) -> f64 {
    let uz = u * z;
    if uz.abs() < 1e-4 {
        u * (1.0 - uz * uz / 6.0)
    } else {
        uz.sin() / z
    }
}

/// `exp(-shift) S1(sigma, u)`, integrated in `y = sqrt(1 - x^2)` where the
/// integrand `exp(sigma y) sin(u sqrt(1-y^2)) / sqrt(1-y^2)` is smooth.
pub(crate) fn s1_scaled(sigma: f64, u: f64, shift: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    if u == 0.0 {
        return Ok(SpecfunValue::exact(0.0));
    }
    let f = |y: f64| {
        let z = ((1.0 - y) * (1.0 + y)).max(0.0).sqrt();
        (sigma * y - shift).exp() * sinc_scaled(u, z)
    };
    // The integrand is concentrated within ~1/|sigma| of y = 1 (sigma > 0)
    // or y = 0 (sigma < 0).
    let mut breaks = vec![0.0];
    let width = 40.0 / sigma.abs();
    if width < 1.0 {
        breaks.push(if sigma > 0.0 { 1.0 - width } else { width });
    }
    breaks.push(1.0);
    integrate_with_breaks(f, &breaks, qc)
}

/// `exp(-shift) dS1/dsigma(sigma, u)`, integrated in `x = sin(theta)`:
/// `int_0^{pi/2} exp(sigma cos t) sin(u sin t) cos t dt`.
pub(crate) fn s1_ds_scaled(sigma: f64, u: f64, shift: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    if u == 0.0 {
        return Ok(SpecfunValue::exact(0.0));
    }
    let f = |t: f64| {
        let (st, ct) = t.sin_cos();
        (sigma * ct - shift).exp() * (u * st).sin() * ct
    };
    let mut breaks = vec![0.0];
    if sigma > 0.0 {
        // exp(sigma (cos t - 1)) ~ exp(-sigma t^2 / 2)
        let w = 9.0 / sigma.sqrt();
        if w < FRAC_PI_2 {
            breaks.push(w);
        }
    } else if sigma < 0.0 {
        // exp(sigma cos t) is concentrated near t = pi/2
        let w = 40.0 / sigma.abs();
        if w < FRAC_PI_2 {
            breaks.push(FRAC_PI_2 - w);
        }
    }
    breaks.push(FRAC_PI_2);
    integrate_with_breaks(f, &breaks, qc)
}

/// `S1(s, u)`. Overflows to infinity for `s` beyond ~700.
pub fn s1(s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    check_finite("s1", s, u)?;
    let shift = s.max(0.0);
    let v = s1_scaled(s, u, shift, qc)?;
    Ok(v.scale(shift.exp()))
}

/// `dS1/ds(s, u) = int_0^1 exp(s sqrt(1-x^2)) sin(u x) dx`.
pub fn s1_ds(s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    check_finite("s1_ds", s, u)?;
    let shift = s.max(0.0);
    let v = s1_ds_scaled(s, u, shift, qc)?;
    Ok(v.scale(shift.exp()))
}

/// `I1+-(s, u) = +- exp(-s) (d/ds + 1) S1(+-s, u)` for `s >= 0`, where
/// `d/ds` acts on `s -> S1(+-s, u)`.
///
/// Written out: `I1+ = e^-s (S1'(s) + S1(s))`, `I1- = e^-s (S1'(-s) - S1(-s))`,
/// with `'` the derivative in the first argument.
pub fn i1_kernel(sign: Sign, s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    check_finite("i1_kernel", s, u)?;
    if s < 0.0 {
        return Err(Error::domain("i1_kernel", format!("requires s >= 0, got {s}")));
    }
    let sigma = sign.factor() * s;
    let ds = s1_ds_scaled(sigma, u, s, qc)?;
    let v = s1_scaled(sigma, u, s, qc)?;
    Ok(match sign {
        Sign::Plus => ds + v,
        Sign::Minus => ds - v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::conf_hyp_m_1_32;
    use std::f64::consts::PI;

    fn qc() -> QuadratureControl {
        QuadratureControl::default()
    }

    #[test]
    fn vanish_at_zero_u() {
        for s in [-3.0, 0.0, 2.5, 40.0] {
            assert_eq!(s1(s, 0.0, &qc()).unwrap().value, 0.0);
            assert_eq!(s1_ds(s, 0.0, &qc()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn derivative_at_zero_s_is_closed_form() {
        let v = s1_ds(0.0, PI / 2.0, &qc()).unwrap();
        assert!((v.value - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn s1_at_zero_s_is_half_pi_bessel_like() {
        // S1(0, u) = int_0^{pi/2} sin(u sin t) dt = (pi/2) H0(u) (Struve);
        // H0(1) = 0.5686566270482879
        let v = s1(0.0, 1.0, &qc()).unwrap();
        assert!((v.value - PI / 2.0 * 0.568_656_627_048_287_9).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-4;
        let fd = (s1(1.0 + h, 1.0, &qc()).unwrap().value - s1(1.0 - h, 1.0, &qc()).unwrap().value) / (2.0 * h);
        let an = s1_ds(1.0, 1.0, &qc()).unwrap().value;
        assert!((fd - an).abs() < 1e-6, "{fd} vs {an}");
    }

    #[test]
    fn kernels_sum_at_zero_time() {
        for u in [0.3, 1.0, 4.0, 11.0] {
            let p = i1_kernel(Sign::Plus, 0.0, u, &qc()).unwrap().value;
            let m = i1_kernel(Sign::Minus, 0.0, u, &qc()).unwrap().value;
            let want = 2.0 * (1.0 - u.cos()) / u;
            assert!((p + m - want).abs() < 1e-11, "u = {u}");
        }
    }

    #[test]
    fn minus_kernel_is_exponentially_small() {
        let v = i1_kernel(Sign::Minus, 20.0, 1.3, &qc()).unwrap().value;
        assert!(v.abs() <= 1.5 / 20.0);
        assert!(v.abs() < 1e-8);
    }

    #[test]
    fn large_s_does_not_overflow() {
        let v = i1_kernel(Sign::Plus, 2.0e4, 2.0, &qc()).unwrap();
        assert!(v.value.is_finite());
        // both e^-s S1(s) and e^-s S1'(s) behave like u / s for large s
        assert!((v.value * 2.0e4 / (2.0 * 2.0) - 1.0).abs() < 0.01, "{v:?}");
    }

    #[test]
    fn kummer_bound() {
        for s in [0.5, 2.0, 8.0] {
            for u in [0.2, 1.0, 3.0] {
                let v = s1(s, u, &qc()).unwrap().value;
                assert!(v.abs() < 2.0 * conf_hyp_m_1_32(s));
            }
        }
    }

    #[test]
    fn rejects_negative_time() {
        assert!(i1_kernel(Sign::Plus, -1.0, 1.0, &qc()).is_err());
        assert!(s1(f64::NAN, 1.0, &qc()).is_err());
    }
}
