//! Classical heat conduction on `r >= r0` with the Joule source `beta / r^4`.
//!
//! The transient is built from the sine transform of `r T` after the
//! steady profile `b / (2 r^2)` is continued into `r < r0` by the constant
//! `b / (2 r0^2)`. The `b / (r0 r)` term of the steady state corresponds to
//! the `k = 0` mode, which never decays, so the transient tends to
//! `T_inf - b / (2 r^2)` rather than to the steady state and eventually
//! drops below `T_inf`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{DerivedParams, PhysicalParams};
use crate::quad::{integrate_with_breaks, QuadratureControl};
use crate::roots::brent;
use crate::specfun::{dawson, sine_integral};

/// Evaluation route for [`transient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParabolicMode {
    /// `f1(k) = b / 2`, giving a closed form in the Dawson function.
    SmallElectrodeClosedForm,
    /// Exact `f1(k)`, integrated over `k`.
    FullQuadrature,
}

/// Upper limit of `x = r / (2 sqrt(a t))` used by the horizon search.
const UNDERSHOOT_HORIZON_X: f64 = 1e-4;

fn check_radius(function: &'static str, r: f64, p: &PhysicalParams) -> Result<()> {
    if !(r.is_finite() && r >= p.r0) {
        return Err(Error::domain(function, format!("requires r >= r0 = {}, got {r}", p.r0)));
    }
    Ok(())
}

/// Steady state `T_inf + b / (r0 r) - b / (2 r^2)`.
pub fn steady_state(r: f64, dp: &DerivedParams, p: &PhysicalParams) -> Result<f64> {
    check_radius("steady_state", r, p)?;
    Ok(p.t_ambient + dp.b / (p.r0 * r) - dp.b / (2.0 * r * r))
}

/// `(sin z - z cos z) / z^2`, accurate for small `z`.
fn sin_minus_cos(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        let z2 = z * z;
        z * (1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0)
    } else {
        (z.sin() - z * z.cos()) / (z * z)
    }
}

/// Sine-transform amplitude of `r T` for the continued initial profile:
/// `b/2 - (b/pi) Si(k r0) + b (sin k r0 - k r0 cos k r0) / (pi k^2 r0^2)`.
pub fn f1_exact(k: f64, dp: &DerivedParams, p: &PhysicalParams) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain("f1_exact", format!("requires k > 0, got {k}")));
    }
    let z = k * p.r0;
    Ok(dp.b / 2.0 - dp.b / PI * sine_integral(z) + dp.b / PI * sin_minus_cos(z))
}

/// Temperature at `(t, r)`. Returns exactly `T_inf` for `t <= 0`.
pub fn transient(t: f64, r: f64, dp: &DerivedParams, p: &PhysicalParams, mode: ParabolicMode) -> Result<f64> {
    check_radius("transient", r, p)?;
    if !t.is_finite() {
        return Err(Error::domain("transient", format!("requires finite t, got {t}")));
    }
    if t <= 0.0 {
        return Ok(p.t_ambient);
    }
    let base = p.t_ambient - dp.b / (2.0 * r * r);
    match mode {
        ParabolicMode::SmallElectrodeClosedForm => {
            let root = (dp.a * t).sqrt();
            Ok(base + dp.b / (2.0 * r * root) * dawson(r / (2.0 * root)))
        }
        ParabolicMode::FullQuadrature => Ok(base + k_integral(t, r, dp, p)? / r),
    }
}

/// `int_0^inf exp(-k^2 a t) f1(k) sin(k r) dk`, cut where the Gaussian
/// falls below 1e-16 and split at the zeros of `sin(k r)`.
fn k_integral(t: f64, r: f64, dp: &DerivedParams, p: &PhysicalParams) -> Result<f64> {
    let at = dp.a * t;
    let k_max = (-(1e-16f64).ln() / at).sqrt();
    let period = PI / r;
    let n = ((k_max / period).ceil() as usize).clamp(1, 200_000);
    let step = k_max / n as f64;
    let breaks: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let f = |k: f64| {
        if k == 0.0 {
            return 0.0;
        }
        let z = k * p.r0;
        let f1 = dp.b / 2.0 - dp.b / PI * sine_integral(z) + dp.b / PI * sin_minus_cos(z);
        (-k * k * at).exp() * f1 * (k * r).sin()
    };
    let qc = QuadratureControl {
        abs_tol: 1e-13 * dp.b / p.r0,
        rel_tol: 1e-12,
        max_subdivisions: 4 * n + 2000,
    };
    Ok(integrate_with_breaks(f, &breaks, &qc)?.value)
}

/// Earliest time at which `transient(t, r) < T_inf`.
///
/// For the closed form the crossing is at `r / (2 sqrt(a t)) = x*` with
/// `2 x* D(x*) = 1`; the search brackets it on a geometric time scan and
/// refines with Brent's method to a relative width of 1e-14.
pub fn undershoot_time(r: f64, dp: &DerivedParams, p: &PhysicalParams, mode: ParabolicMode) -> Result<f64> {
    if !(r.is_finite() && r > p.r0) {
        return Err(Error::domain("undershoot_time", format!("requires r > r0 = {}, got {r}", p.r0)));
    }
    let defect = |t: f64| transient(t, r, dp, p, mode).map(|v| v - p.t_ambient);
    let scale = r * r / (4.0 * dp.a);
    let horizon = scale / (UNDERSHOOT_HORIZON_X * UNDERSHOOT_HORIZON_X);
    let mut lo = scale * 1e-2;
    if defect(lo)? < 0.0 {
        return Err(Error::domain("undershoot_time", "temperature already below ambient at the earliest scan time"));
    }
    loop {
        let hi = lo * 1.5;
        if hi > horizon {
            return Err(Error::HorizonExceeded {
                what: "no undershoot below T_inf found",
                horizon,
            });
        }
        if defect(hi)? < 0.0 {
            // A failing evaluation inside Brent is reported as NaN.
            let t = brent(|t| defect(t).unwrap_or(f64::NAN), lo, hi, 1e-14 * hi, 200)?;
            return Ok(t);
        }
        lo = hi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;
    use crate::quad::integrate;

    fn desk() -> (PhysicalParams, DerivedParams) {
        let p = PhysicalParams::default().unbounded();
        (p, derive_params(&p).unwrap())
    }

    #[test]
    fn steady_state_at_electrode_and_far_field() {
        let (p, dp) = desk();
        let t0 = steady_state(p.r0, &dp, &p).unwrap();
        assert!((t0 - (p.t_ambient + dp.b / (2.0 * p.r0 * p.r0))).abs() < 1e-9);
        let far = steady_state(1e6, &dp, &p).unwrap();
        assert!((far - p.t_ambient).abs() < 1e-6);
        assert!(steady_state(0.5 * p.r0, &dp, &p).is_err());
    }

    #[test]
    fn steady_state_has_no_flux_at_electrode() {
        let (p, dp) = desk();
        let h = 1e-7 * p.r0;
        // one-sided second-order difference (r < r0 is outside the domain)
        let f = |r| steady_state(r, &dp, &p).unwrap();
        let slope = (-3.0 * f(p.r0) + 4.0 * f(p.r0 + h) - f(p.r0 + 2.0 * h)) / (2.0 * h);
        assert!(slope.abs() < 1e-6 * dp.b / p.r0.powi(3), "{slope}");
    }

    #[test]
    fn f1_small_argument_limit() {
        let (p, dp) = desk();
        let v = f1_exact(1e-6 / p.r0, &dp, &p).unwrap();
        assert!((v - dp.b / 2.0).abs() < 1e-6 * dp.b);
        assert!(f1_exact(0.0, &dp, &p).is_err());
    }

    #[test]
    fn f1_matches_defining_integrals() {
        // f1(k) = (2/pi) [ int_0^r0 b r sin(kr) / (2 r0^2) dr + int_r0^inf b sin(kr) / (2 r) dr ]
        let mut p = PhysicalParams::default().unbounded();
        p.r0 = 1.0;
        let mut dp = derive_params(&p).unwrap();
        dp.b = 2.0;
        let qc = QuadratureControl::default();
        for kr0 in [PI, 10.0] {
            let k = kr0 / p.r0;
            let inner = integrate(|r| dp.b * r * (k * r).sin() / (2.0 * p.r0 * p.r0), 0.0, p.r0, &qc)
                .unwrap()
                .value;
            // int_r0^inf sin(kr)/r dr = pi/2 - Si(k r0), by per-period summation
            let mut tail = 0.0;
            let mut lo = p.r0;
            for m in 1..20000 {
                let hi = p.r0 + m as f64 * PI / k;
                tail += integrate(|r| (k * r).sin() / r, lo, hi, &qc).unwrap().value;
                lo = hi;
            }
            let last = integrate(|r| (k * r).sin() / r, lo, lo + PI / k, &qc).unwrap().value;
            let tail = tail + 0.5 * last;
            let want = 2.0 / PI * (inner + dp.b / 2.0 * tail);
            let got = f1_exact(k, &dp, &p).unwrap();
            assert!((got - want).abs() < 1e-8, "k r0 = {kr0}: {got} vs {want}");
        }
    }

    #[test]
    fn initial_condition() {
        let (p, dp) = desk();
        for mode in [ParabolicMode::SmallElectrodeClosedForm, ParabolicMode::FullQuadrature] {
            assert_eq!(transient(0.0, 2.0 * p.r0, &dp, &p, mode).unwrap(), p.t_ambient);
        }
        let v = transient(1e-6, 3.0 * p.r0, &dp, &p, ParabolicMode::FullQuadrature).unwrap();
        assert!((v - p.t_ambient).abs() < 1e-6 * dp.rise_scale(&p), "{v}");
    }

    #[test]
    fn large_time_undershoot() {
        let (p, dp) = desk();
        let r = 2.0 * p.r0;
        let late = 100.0 * r * r / dp.a;
        for mode in [ParabolicMode::SmallElectrodeClosedForm, ParabolicMode::FullQuadrature] {
            let v = transient(late, r, &dp, &p, mode).unwrap();
            assert!(v < p.t_ambient, "{mode:?}: {v}");
        }
    }

    #[test]
    fn tends_to_defective_limit() {
        let (p, dp) = desk();
        let r = 3.0 * p.r0;
        let t = 1e6 * r * r / dp.a;
        let v = transient(t, r, &dp, &p, ParabolicMode::SmallElectrodeClosedForm).unwrap();
        let steady = steady_state(r, &dp, &p).unwrap();
        let defect = steady - v;
        assert!((defect - dp.b / (p.r0 * r)).abs() < 1e-3 * dp.b / (p.r0 * r));
    }

    #[test]
    fn undershoot_crossing() {
        let (p, dp) = desk();
        let r = 2.0 * p.r0;
        let mode = ParabolicMode::SmallElectrodeClosedForm;
        let t = undershoot_time(r, &dp, &p, mode).unwrap();
        let v = transient(t, r, &dp, &p, mode).unwrap();
        assert!((v - p.t_ambient).abs() <= 1e-9 * dp.b / (p.r0 * p.r0));
        // crossing at 2 x D(x) = 1, x = 0.9241388730
        let x = r / (2.0 * (dp.a * t).sqrt());
        assert!((x - 0.924_138_873).abs() < 1e-8, "{x}");
        let t2 = undershoot_time(2.0 * r, &dp, &p, mode).unwrap();
        assert!((t2 / t - 4.0).abs() < 1e-8);
    }

    #[test]
    fn early_growth() {
        let (p, dp) = desk();
        let r = 2.0 * p.r0;
        let t = 1e-3 * r * r / dp.a;
        for mode in [ParabolicMode::SmallElectrodeClosedForm, ParabolicMode::FullQuadrature] {
            let h = 1e-3 * t;
            let up = transient(t + h, r, &dp, &p, mode).unwrap();
            let down = transient(t - h, r, &dp, &p, mode).unwrap();
            assert!(up > down, "{mode:?}");
        }
    }
}
