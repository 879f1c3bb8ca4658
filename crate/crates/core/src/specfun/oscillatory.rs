//! The supercritical (thermal wave) functions.
//!
//! ```text
//! J2+-(s, u) = int_0^inf cos(u sqrt(y^2+1) +- s y) / sqrt(y^2+1) dy
//!            = 2 int_0^1 cos((u x^2 +- 2 s x + u) / (1 - x^2)) / (1 - x^2) dx
//! S2(s, u)   = int_0^inf sin(u sqrt(y^2+1)) sin(s y) / sqrt(y^2+1) dy
//!            = (J2-(s, u) - J2+(s, u)) / 2
//! ```
//!
//! The two forms of `J2` are related by `sqrt(y^2+1) = x y + 1`, i.e.
//! `y = 2x / (1 - x^2)`; each half-oscillation of the integrand in `y` is a
//! segment `[x_m, x_(m+1)]` accumulating at `x = 1`. The integral is cut at
//! the zeros of the cosine, the segments are integrated in `y` (where they
//! have bounded width and no cancellation in `1 - x^2`), and the alternating
//! partial sums are extrapolated with Wynn's epsilon algorithm.
//!
//! `dS2/ds` is only conditionally (Abel) summable: its integrand does not
//! decay. The same segmentation and extrapolation yields the Abel sum.

use crate::error::{Error, Result};
use crate::quad::{integrate, wynn_epsilon, QuadratureControl, SpecfunValue};
use crate::roots::brent;
use crate::specfun::Sign;

/// Minimum number of tail segments before the extrapolation is trusted.
const MIN_SEGMENTS: usize = 10;

#[derive(Debug, Clone, Copy)]
enum Trig {
    Cos,
    Sin,
}

struct Phase {
    u: f64,
    slope: f64,
}

impl Phase {
    fn new(sign: Sign, s: f64, u: f64) -> Phase {
        Phase {
            u,
            slope: sign.factor() * s,
        }
    }

    fn value(&self, y: f64) -> f64 {
        self.u * y.hypot(1.0) + self.slope * y
    }

    /// Slope of the phase as `y -> inf`.
    fn asymptotic_slope(&self) -> f64 {
        self.u + self.slope
    }

    /// Point after which the phase is strictly monotone.
    fn monotone_from(&self) -> f64 {
        // derivative increases from `slope` (y = 0) to `u + slope` (y = inf)
        if self.slope < 0.0 && self.u + self.slope > 0.0 {
            -self.slope / (self.u * self.u - self.slope * self.slope).sqrt()
        } else {
            0.0
        }
    }

    /// Solves `value(y) = level` on `[lo, inf)` where the phase is monotone.
    fn solve(&self, level: f64, lo: f64) -> Result<f64> {
        let g = |y: f64| self.value(y) - level;
        let g_lo = g(lo);
        let mut hi = lo.max(1.0);
        let mut step = 1.0;
        while g(hi).signum() == g_lo.signum() && g(hi) != 0.0 {
            hi += step;
            step *= 2.0;
            if !hi.is_finite() || step > 1e300 {
                return Err(Error::RootFinding(format!("phase level {level} not bracketed")));
            }
        }
        brent(g, lo, hi, 1e-15 * hi.max(1.0), 200)
    }
}

/// `int_0^inf amp(y) trig(phase(y)) dy` by zero segmentation and Wynn
/// extrapolation.
fn oscillatory<A: Fn(f64) -> f64>(
    what: &'static str,
    amp: A,
    trig: Trig,
    phase: &Phase,
    qc: &QuadratureControl,
) -> Result<SpecfunValue> {
    let f = |y: f64| {
        let p = phase.value(y);
        amp(y)
            * match trig {
                Trig::Cos => p.cos(),
                Trig::Sin => p.sin(),
            }
    };
    let seg_qc = QuadratureControl {
        abs_tol: qc.abs_tol * 1e-2,
        rel_tol: qc.rel_tol * 1e-2,
        max_subdivisions: qc.max_subdivisions,
    };

    let slope = phase.asymptotic_slope();
    let scale = phase.u.abs() + phase.slope.abs();
    let y_mono = phase.monotone_from();
    let head = if y_mono > 0.0 {
        integrate(&f, 0.0, y_mono, &seg_qc)?
    } else {
        SpecfunValue::exact(0.0)
    };

    if slope.abs() <= 1e-14 * scale {
        // No oscillation at infinity: the tail does not converge.
        return Err(Error::Accuracy {
            what,
            estimate: head.value,
            est_error: f64::INFINITY,
        });
    }

    // Zeros of trig(phase): cos at (m + 1/2) pi, sin at m pi.
    let offset = match trig {
        Trig::Cos => 0.5,
        Trig::Sin => 0.0,
    };
    let dir = slope.signum();
    let p0 = phase.value(y_mono);
    let mut m = if dir > 0.0 {
        (p0 / std::f64::consts::PI - offset).floor() + 1.0
    } else {
        (p0 / std::f64::consts::PI - offset).ceil() - 1.0
    };

    let mut sums = Vec::new();
    let mut acc = head;
    let mut y_prev = y_mono;
    let mut best = None;
    let limit = qc.max_subdivisions.max(MIN_SEGMENTS + 2);
    for count in 0..limit {
        let level = (m + offset) * std::f64::consts::PI;
        let y_next = phase.solve(level, y_prev)?;
        acc = acc + integrate(&f, y_prev, y_next, &seg_qc)?;
        sums.push(acc.value);
        y_prev = y_next;
        m += dir;

        if count + 1 >= MIN_SEGMENTS {
            // keep the table small: the last 40 partial sums suffice
            let window = &sums[sums.len().saturating_sub(40)..];
            let ex = wynn_epsilon(window);
            let err = ex.est_error + acc.est_error;
            let target = qc.target(ex.value);
            best = Some(SpecfunValue::new(ex.value, err));
            if err <= target {
                return Ok(SpecfunValue::new(ex.value, err));
            }
        }
    }
    let b = best.unwrap_or(acc);
    Err(Error::Accuracy {
        what,
        estimate: b.value,
        est_error: b.est_error,
    })
}

fn check_args(function: &'static str, s: f64, u: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::domain(function, format!("requires finite s >= 0, got {s}")));
    }
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::domain(function, format!("requires finite u > 0, got {u}")));
    }
    Ok(())
}

/// `J2+-(s, u)` for `s >= 0`, `u > 0`.
///
/// `J2+(s, s) = -Ci(s)`. For the minus sign at `u = s` the phase stops
/// oscillating and the integral diverges logarithmically; an accuracy
/// error is returned.
pub fn j2(sign: Sign, s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    check_args("j2", s, u)?;
    let phase = Phase::new(sign, s, u);
    oscillatory("J2 oscillatory tail", |y: f64| 1.0 / y.hypot(1.0), Trig::Cos, &phase, qc)
}

/// `dJ2+-/ds(s, u) = -+ int_0^inf y sin(u sqrt(y^2+1) +- s y) / sqrt(y^2+1) dy`
/// (Abel sum).
pub fn j2_ds(sign: Sign, s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    check_args("j2_ds", s, u)?;
    let phase = Phase::new(sign, s, u);
    let f = sign.factor();
    oscillatory(
        "dJ2/ds oscillatory tail",
        move |y: f64| -f * y / y.hypot(1.0),
        Trig::Sin,
        &phase,
        qc,
    )
}

/// `S2(s, u) = (J2-(s, u) - J2+(s, u)) / 2`.
pub fn s2(s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    if s == 0.0 && u > 0.0 {
        return Ok(SpecfunValue::exact(0.0));
    }
    let minus = j2(Sign::Minus, s, u, qc)?;
    let plus = j2(Sign::Plus, s, u, qc)?;
    Ok((minus - plus).scale(0.5))
}

/// `dS2/ds(s, u) = int_1^inf cos(s sqrt(x^2-1)) sin(u x) dx` (Abel sum);
/// equals `cos(u) / u` at `s = 0`.
pub fn s2_ds(s: f64, u: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    let minus = j2_ds(Sign::Minus, s, u, qc)?;
    let plus = j2_ds(Sign::Plus, s, u, qc)?;
    Ok((minus - plus).scale(0.5))
}

/// Evaluates the Euler-substituted integrand of `J2+-` at `x` in `[0, 1)`:
/// `2 cos((u x^2 +- 2 s x + u) / (1 - x^2)) / (1 - x^2)`.
pub fn j2_euler_integrand(sign: Sign, s: f64, u: f64, x: f64) -> f64 {
    let w = (1.0 - x) * (1.0 + x);
    2.0 * ((u * x * x + sign.factor() * 2.0 * s * x + u) / w).cos() / w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::cosine_integral;

    fn qc() -> QuadratureControl {
        QuadratureControl::default()
    }

    #[test]
    fn plus_on_diagonal_is_minus_ci() {
        for s in [0.5, 1.0, 2.0, 5.0] {
            let v = j2(Sign::Plus, s, s, &qc()).unwrap();
            let want = -cosine_integral(s).unwrap();
            assert!((v.value - want).abs() < 1e-9, "s = {s}: {v:?} vs {want}");
        }
    }

    #[test]
    fn minus_on_diagonal_diverges() {
        assert!(matches!(
            j2(Sign::Minus, 1.0, 1.0, &qc()),
            Err(Error::Accuracy { .. })
        ));
    }

    #[test]
    fn euler_form_agrees_on_a_segment() {
        // int over x in [0, 1/2] equals int over y in [0, 4/3]
        let (s, u) = (0.7, 1.9);
        for sign in [Sign::Plus, Sign::Minus] {
            let ex = integrate(|x| j2_euler_integrand(sign, s, u, x), 0.0, 0.5, &qc()).unwrap();
            let phase = Phase::new(sign, s, u);
            let ey = integrate(
                |y: f64| phase.value(y).cos() / y.hypot(1.0),
                0.0,
                4.0 / 3.0,
                &qc(),
            )
            .unwrap();
            assert!((ex.value - ey.value).abs() < 1e-12);
        }
    }

    #[test]
    fn s2_vanishes_at_zero_time() {
        assert_eq!(s2(0.0, 2.0, &qc()).unwrap().value, 0.0);
        let v = s2(1e-9, 2.0, &qc()).unwrap();
        assert!(v.value.abs() < 1e-8);
    }

    #[test]
    fn s2_ds_at_zero_time() {
        for u in [0.5, 1.0, 3.0, 7.5] {
            let v = s2_ds(0.0, u, &qc()).unwrap();
            assert!((v.value - u.cos() / u).abs() < 1e-9, "u = {u}: {v:?}");
        }
    }

    #[test]
    fn s2_ds_matches_finite_difference() {
        let h = 1e-4;
        for (s, u) in [(1.0, 3.0), (2.0, 0.7), (0.4, 1.5)] {
            let fd = (s2(s + h, u, &qc()).unwrap().value - s2(s - h, u, &qc()).unwrap().value) / (2.0 * h);
            let an = s2_ds(s, u, &qc()).unwrap().value;
            assert!((fd - an).abs() < 1e-6, "(s, u) = ({s}, {u}): {fd} vs {an}");
        }
    }

    #[test]
    fn domain_checks() {
        assert!(j2(Sign::Plus, -1.0, 1.0, &qc()).is_err());
        assert!(j2(Sign::Plus, 1.0, 0.0, &qc()).is_err());
    }
}
