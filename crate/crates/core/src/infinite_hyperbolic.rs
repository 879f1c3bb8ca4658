//! Damped-wave (Cattaneo-Vernotte) heat conduction on `r >= r0`.
//!
//! In the dimensionless variables `s = t / (2 tau)`, `u = r k0` and with
//! `alpha = 2 sqrt(a tau) = 1 / k0`,
//!
//! ```text
//! T = T_inf + b/(r0 r) (1 - exp(-t/tau)) - b/(2 r^2)
//!     + b/(4 r alpha) [ I1+(s, u) + I1-(s, u) + I2(s, u) ]
//! I2 = 2 exp(-s) (d/ds + 1) S2(s, u)
//! ```
//!
//! `I1+-` collect the wavenumbers `k < k0` (two real decay rates), `I2` the
//! thermal waves `k > k0`, damped as `exp(-t / (2 tau))`.

use crate::error::{Error, Result};
use crate::infinite_parabolic::{transient as parabolic_transient, ParabolicMode};
use crate::params::{omega_roots, DerivedParams, PhysicalParams, RootBranch};
use crate::quad::{QuadratureControl, SpecfunValue};
use crate::specfun::{dawson, dawson_derivative, i1_kernel, s2, s2_ds, Sign};

/// Beyond this `s` the thermal-wave term is below `exp(-60)` and skipped.
pub const WAVE_TERM_CUTOFF: f64 = 60.0;

/// The pair `(s, u) = (t / (2 tau), r / (2 sqrt(a tau)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    pub s: f64,
    pub u: f64,
}

impl DimensionlessPoint {
    pub fn new(t: f64, r: f64, dp: &DerivedParams, tau: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain("DimensionlessPoint", format!("requires t >= 0, got {t}")));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain("DimensionlessPoint", format!("requires r > 0, got {r}")));
        }
        Ok(DimensionlessPoint {
            s: t / (2.0 * tau),
            u: r * dp.k0,
        })
    }
}

/// The separate contributions to the temperature at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicTerms {
    pub point: DimensionlessPoint,
    /// `T_inf - b / (2 r^2)`.
    pub base: f64,
    /// `b / (r0 r) (1 - exp(-t / tau))`.
    pub zero_mode: f64,
    /// `b / (4 r alpha) (I1+ + I1-)`.
    pub subcritical: SpecfunValue,
    /// `b / (4 r alpha) I2`.
    pub supercritical: SpecfunValue,
}

impl HyperbolicTerms {
    pub fn total(&self) -> f64 {
        self.base + self.zero_mode + self.subcritical.value + self.supercritical.value
    }

    pub fn est_error(&self) -> f64 {
        self.subcritical.est_error + self.supercritical.est_error
    }
}

/// `I2(s, u) = 2 exp(-s) (d/ds + 1) S2(s, u)`; zero beyond [`WAVE_TERM_CUTOFF`].
///
/// At `s = 0` the value is `2 cos(u) / u`.
pub fn wave_kernel(s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    if s > WAVE_TERM_CUTOFF {
        return Ok(SpecfunValue::exact(0.0));
    }
    let ds = s2_ds(s, u, qc)?;
    let v = s2(s, u, qc)?;
    Ok((ds + v).scale(2.0 * (-s).exp()))
}

/// Evaluates every term of the solution, including at `t = 0`, where the
/// spectral integrals must reconstruct `b / (2 r^2)`.
pub fn components(t: f64, r: f64, dp: &DerivedParams, p: &PhysicalParams, qc: &QuadratureControl) -> Result<HyperbolicTerms> {
    if r < p.r0 {
        return Err(Error::domain("components", format!("requires r >= r0 = {}, got {r}", p.r0)));
    }
    let point = DimensionlessPoint::new(t, r, dp, p.tau)?;
    let pre = dp.b * dp.k0 / (4.0 * r);
    let plus = i1_kernel(Sign::Plus, point.s, point.u, qc)?;
    let minus = i1_kernel(Sign::Minus, point.s, point.u, qc)?;
    let base = p.t_ambient - dp.b / (2.0 * r * r);
    let zero_mode = dp.b / (p.r0 * r) * -(-t / p.tau).exp_m1();
    let subcritical = (plus + minus).scale(pre);
    let supercritical = match wave_kernel(point.s, point.u, qc) {
        Ok(v) => v.scale(pre),
        Err(Error::Accuracy { estimate, est_error, .. }) => {
            // report the best estimate of the temperature itself
            let partial = base + zero_mode + subcritical.value;
            return Err(Error::Accuracy {
                what: "hyperbolic thermal-wave term",
                estimate: partial + pre * estimate,
                est_error: pre * est_error,
            });
        }
        Err(e) => return Err(e),
    };
    Ok(HyperbolicTerms {
        point,
        base,
        zero_mode,
        subcritical,
        supercritical,
    })
}

/// Temperature at `(t, r)`; exactly `T_inf` at `t = 0`.
pub fn transient(t: f64, r: f64, dp: &DerivedParams, p: &PhysicalParams, qc: &QuadratureControl) -> Result<f64> {
    if t == 0.0 && r.is_finite() && r >= p.r0 {
        return Ok(p.t_ambient);
    }
    components(t, r, dp, p, qc).map(|c| c.total())
}

/// Splits `b / 2` between the two decay rates of a subcritical wavenumber
/// so that the mode starts with zero time derivative:
/// `f1 = (b/2) w- / (w- - w+)`, `g1 = (b/2) w+ / (w+ - w-)`.
pub fn coefficient_split(k: f64, dp: &DerivedParams, tau: f64) -> Result<(f64, f64)> {
    let roots = omega_roots(k, dp, tau);
    if !(k > 0.0) || roots.branch != RootBranch::SubcriticalRealPair {
        return Err(Error::Branch(format!(
            "coefficient split needs 0 < k < k0 = {}, got k = {k}",
            dp.k0
        )));
    }
    // with x = k/k0 and R = sqrt(1 - x^2): w- - w+ = -R/tau, so
    // f1 = (b/2)(1 + R)/(2R) and g1 = -(b/2) x^2/((1 + R) 2R)
    let x = k / dp.k0;
    let r = ((1.0 - x) * (1.0 + x)).sqrt();
    let half = dp.b / 2.0;
    let f1 = half * (1.0 + r) / (2.0 * r);
    let g1 = -half * x * x / ((1.0 + r) * 2.0 * r);
    Ok((f1, g1))
}

/// `(1 / sqrt(a t)) D(r / (2 sqrt(a t)))` and its time derivative.
fn dawson_term(t: f64, r: f64, a: f64) -> (f64, f64) {
    let root = (a * t).sqrt();
    let x = r / (2.0 * root);
    let d = dawson(x);
    let value = d / root;
    // d/dt [D(x) / sqrt(a t)] with dx/dt = -x / (2 t)
    let slope = -(d + x * dawson_derivative(x)) / (2.0 * t * root);
    (value, slope)
}

/// Small-`tau` form of the subcritical kernel,
/// `2 (1 - tau d/dt) [ D(r / (2 sqrt(a t))) / sqrt(a t) ]`, for `t > 0`.
///
/// It approximates `(I1+ + I1- + I2)(s, u) / alpha`; at `tau = 0` it is the
/// kernel of the parabolic solution.
pub fn small_tau_kernel(t: f64, r: f64, dp: &DerivedParams, tau: f64) -> f64 {
    let (value, slope) = dawson_term(t, r, dp.a);
    2.0 * (value - tau * slope)
}

/// The parabolic closed form with the steady `b / (r0 r)` term restored,
/// i.e. the `tau -> 0` limit of [`transient`] for `t >> tau`.
pub fn parabolic_limit(t: f64, r: f64, dp: &DerivedParams, p: &PhysicalParams) -> Result<f64> {
    Ok(parabolic_transient(t, r, dp, p, ParabolicMode::SmallElectrodeClosedForm)? + dp.b / (p.r0 * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;

    fn desk() -> (PhysicalParams, DerivedParams) {
        let p = PhysicalParams::default().unbounded();
        (p, derive_params(&p).unwrap())
    }

    fn qc() -> QuadratureControl {
        QuadratureControl::default()
    }

    #[test]
    fn dimensionless_point() {
        let (p, dp) = desk();
        let pt = DimensionlessPoint::new(3.0, 2.0 * p.r0, &dp, p.tau).unwrap();
        assert_eq!(pt.s, 1.5);
        assert!((pt.u - 2.0 * p.r0 * dp.k0).abs() < 1e-15);
        assert!(DimensionlessPoint::new(-1.0, p.r0, &dp, p.tau).is_err());
    }

    #[test]
    fn spectral_sum_reconstructs_initial_state() {
        let (p, dp) = desk();
        for m in [1.0, 1.7, 3.0, 10.0] {
            let c = components(0.0, m * p.r0, &dp, &p, &qc()).unwrap();
            assert!((c.total() - p.t_ambient).abs() < 1e-8 * dp.rise_scale(&p), "r = {m} r0");
        }
    }

    #[test]
    fn zero_mode_ends() {
        let (p, dp) = desk();
        let r = 2.0 * p.r0;
        let at = |t| components(t, r, &dp, &p, &qc()).unwrap().zero_mode;
        assert_eq!(at(0.0), 0.0);
        assert!((at(200.0 * p.tau) - dp.b / (p.r0 * r)).abs() < 1e-12 * dp.b / (p.r0 * r));
    }

    #[test]
    fn split_limits() {
        let (p, dp) = desk();
        let (f1, g1) = coefficient_split(1e-6 * dp.k0, &dp, p.tau).unwrap();
        assert!((f1 - dp.b / 2.0).abs() < 1e-10 * dp.b);
        assert!(g1.abs() < 1e-10 * dp.b);
        let (f1, g1) = coefficient_split((1.0 - 1e-12) * dp.k0, &dp, p.tau).unwrap();
        assert!(f1.abs() > 1e3 * dp.b);
        assert!(((f1 + g1) - dp.b / 2.0).abs() < 1e-6 * f1.abs());
        assert!(matches!(coefficient_split(dp.k0, &dp, p.tau), Err(Error::Branch(_))));
        assert!(coefficient_split(2.0 * dp.k0, &dp, p.tau).is_err());
    }

    #[test]
    fn split_satisfies_both_initial_conditions() {
        let (p, dp) = desk();
        for x in [0.1, 0.5, 1.0 / 2f64.sqrt(), 0.99] {
            let k = x * dp.k0;
            let (f1, g1) = coefficient_split(k, &dp, p.tau).unwrap();
            let roots = omega_roots(k, &dp, p.tau);
            assert!(((f1 + g1) - dp.b / 2.0).abs() < 1e-14 * dp.b);
            let slope = roots.omega_plus.re * f1 + roots.omega_minus.re * g1;
            let scale = (roots.omega_plus.re * f1).abs() + (roots.omega_minus.re * g1).abs();
            assert!(slope.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn small_tau_kernel_is_parabolic_at_zero_tau() {
        let (p, dp) = desk();
        let (t, r) = (5.0, 3.0 * p.r0);
        let k = small_tau_kernel(t, r, &dp, 0.0);
        let root = (dp.a * t).sqrt();
        assert_eq!(k, 2.0 * dawson(r / (2.0 * root)) / root);
    }

    #[test]
    fn small_tau_derivative_matches_finite_difference() {
        let (p, dp) = desk();
        let (t, r) = (5.0, 3.0 * p.r0);
        let h = 1e-4 * t;
        let fd = (dawson_term(t + h, r, dp.a).0 - dawson_term(t - h, r, dp.a).0) / (2.0 * h);
        let an = dawson_term(t, r, dp.a).1;
        assert!((fd - an).abs() < 1e-6 * an.abs(), "{fd} vs {an}");
    }

    #[test]
    fn identity_branch_at_zero_time() {
        let (p, dp) = desk();
        assert_eq!(transient(0.0, 2.0 * p.r0, &dp, &p, &qc()).unwrap(), p.t_ambient);
    }
}
