//! Series solutions on the shell `r0 <= r <= r1`.
//!
//! With `y = r (T - T1)` the time-dependent part satisfies `-y'' = k^2 y`
//! with `y(r1) = 0` and `r0 y'(r0) = y(r0)`. The eigenfunctions are
//! `sin(k_n (r1 - r))`, with `tan(k_n L) = -k_n r0`, `L = r1 - r0`; the
//! `n`-th root lies in `((n + 1/2) pi, (n + 1) pi)` in the variable `k L`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{omega_roots, DerivedParams, Equation, PhysicalParams, RootBranch};
use crate::quad::{integrate_with_breaks, QuadratureControl};
use crate::roots::brent;

/// Truncation and coefficient-quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub n_max: usize,
    pub coeff_quadrature: QuadratureControl,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            n_max: 400,
            coeff_quadrature: QuadratureControl {
                abs_tol: 1e-12,
                rel_tol: 1e-12,
                max_subdivisions: 2000,
            },
        }
    }
}

impl SeriesControl {
    pub fn with_n_max(n_max: usize) -> Self {
        SeriesControl {
            n_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::InvalidParameter {
                field: "n_max",
                value: self.n_max as f64,
                reason: "must be >= 1",
            });
        }
        self.coeff_quadrature.validate()
    }
}

/// One term of the shell series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub n: usize,
    pub k_n: f64,
    /// `sqrt(int_r0^r1 sin^2(k_n (r1 - r)) dr)`.
    pub norm: f64,
    /// Projection of the initial deviation onto the normalized mode.
    pub c_n: f64,
    /// Weight of `exp(w+ t)`.
    pub a_n: Complex64,
    /// Weight of `exp(w- t)`.
    pub b_n: Complex64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    /// Branch of the damped-wave roots (the parabolic model ignores it).
    pub branch: RootBranch,
    pub equation: Equation,
}

impl EigenMode {
    /// Time factor of the mode, equal to 1 at `t = 0`.
    ///
    /// Hyperbolic modes are written as `exp(-t/(2 tau)) [C(t) + S(t)/(2 tau)]`
    /// with `C = cosh(mu t)`, `S = sinh(mu t)/mu` (real roots, `w+- = -1/(2 tau) +- mu`),
    /// `C = cos(nu t)`, `S = sin(nu t)/nu` (complex roots) or `C = 1`, `S = t`
    /// (double root). This form is real, starts with zero slope and does not
    /// lose accuracy near the double root.
    pub fn time_factor(&self, t: f64, dp: &DerivedParams, tau: f64) -> f64 {
        self.time_factor_and_slope(t, dp, tau).0
    }

    /// Time derivative of [`EigenMode::time_factor`].
    pub fn time_slope(&self, t: f64, dp: &DerivedParams, tau: f64) -> f64 {
        self.time_factor_and_slope(t, dp, tau).1
    }

    fn time_factor_and_slope(&self, t: f64, dp: &DerivedParams, tau: f64) -> (f64, f64) {
        let ak2 = dp.a * self.k_n * self.k_n;
        match self.equation {
            Equation::Parabolic => {
                let e = (-ak2 * t).exp();
                (e, -ak2 * e)
            }
            Equation::Hyperbolic => {
                let (c, s) = damped_parts(t, self, tau);
                (c + s / (2.0 * tau), -ak2 / tau * s)
            }
        }
    }
}

/// `exp(-t/(2 tau)) C(t)` and `exp(-t/(2 tau)) S(t)` for a hyperbolic mode.
fn damped_parts(t: f64, mode: &EigenMode, tau: f64) -> (f64, f64) {
    let h = 1.0 / (2.0 * tau);
    match mode.branch {
        RootBranch::SubcriticalRealPair => {
            let mu = mode.omega_plus.re + h;
            if mu * t < 1.0 {
                let e = (-h * t).exp();
                (e * (mu * t).cosh(), e * (mu * t).sinh() / mu)
            } else {
                // exp(w+ t) and exp(w- t) separately; w+ is computed without
                // cancellation by the root solver.
                let ep = (mode.omega_plus.re * t).exp();
                let em = (mode.omega_minus.re * t).exp();
                (0.5 * (ep + em), 0.5 * (ep - em) / mu)
            }
        }
        RootBranch::CriticalDouble => {
            let e = (-h * t).exp();
            (e, e * t)
        }
        RootBranch::SupercriticalComplexPair => {
            let nu = mode.omega_plus.im;
            let e = (-h * t).exp();
            let (sn, cs) = (nu * t).sin_cos();
            (e * cs, e * sn / nu)
        }
    }
}

fn shell(p: &PhysicalParams) -> Result<(f64, f64, f64)> {
    let r1 = p.shell_radius()?;
    Ok((p.r0, r1, r1 - p.r0))
}

/// `|sin(k L) + k r0 cos(k L)| / (1 + k r0)`, the scaled residual of
/// `tan(k L) = -k r0`.
pub fn eigen_residual(k: f64, p: &PhysicalParams) -> Result<f64> {
    let (r0, _, l) = shell(p)?;
    let (s, c) = (k * l).sin_cos();
    Ok((s + k * r0 * c).abs() / (1.0 + k * r0))
}

/// The first `n_max` positive roots of `tan(k (r1 - r0)) = -k r0`.
///
/// Root `n` is written `k L = (n + 1/2) pi + delta` with `delta` in
/// `(0, pi/2)` solving `r0 theta sin(delta) = L cos(delta)`, which has no
/// poles and exactly one sign change on the interval.
pub fn eigenvalues(p: &PhysicalParams, n_max: usize) -> Result<Vec<f64>> {
    let (r0, _, l) = shell(p)?;
    (0..n_max)
        .map(|n| {
            let base = (n as f64 + 0.5) * std::f64::consts::PI;
            let g = |delta: f64| r0 * (base + delta) * delta.sin() - l * delta.cos();
            let delta = brent(g, 0.0, std::f64::consts::FRAC_PI_2, 1e-15 * base, 200)?;
            Ok((base + delta) / l)
        })
        .collect()
}

/// Two-term large-`n` approximation
/// `k_n ~ (2n+1) pi / (2 L) + 2 / ((2n+1) pi r0)`.
pub fn eigenvalue_asymptotic(n: usize, p: &PhysicalParams) -> Result<f64> {
    let (r0, _, l) = shell(p)?;
    let m = (2 * n + 1) as f64 * std::f64::consts::PI;
    Ok(m / (2.0 * l) + 2.0 / (m * r0))
}

fn norm_of(k: f64, l: f64) -> f64 {
    (l / 2.0 - (2.0 * k * l).sin() / (4.0 * k)).sqrt()
}

/// Mode table with `c_n = 0`, parabolic time factors.
pub fn modes_from_eigenvalues(ks: &[f64], p: &PhysicalParams, dp: &DerivedParams) -> Result<Vec<EigenMode>> {
    let (_, _, l) = shell(p)?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(n, &k)| {
            let roots = omega_roots(k, dp, p.tau);
            EigenMode {
                n,
                k_n: k,
                norm: norm_of(k, l),
                c_n: 0.0,
                a_n: Complex64::new(0.0, 0.0),
                b_n: Complex64::new(0.0, 0.0),
                omega_plus: Complex64::new(-dp.a * k * k, 0.0),
                omega_minus: Complex64::new(0.0, 0.0),
                branch: roots.branch,
                equation: Equation::Parabolic,
            }
        })
        .collect())
}

/// Normalized eigenfunction `sin(k_n (r1 - r)) / norm_n`.
pub fn eigenfunction(n: usize, r: f64, modes: &[EigenMode], p: &PhysicalParams) -> Result<f64> {
    let (r0, r1, _) = shell(p)?;
    if !(r >= r0 && r <= r1) {
        return Err(Error::domain("eigenfunction", format!("r = {r} outside [{r0}, {r1}]")));
    }
    let m = modes
        .get(n)
        .ok_or_else(|| Error::domain("eigenfunction", format!("mode {n} not computed")))?;
    Ok((m.k_n * (r1 - r)).sin() / m.norm)
}

/// `r (T(0) - T_steady)` on the shell:
/// `b/(2r) - b/r0 + r (b/(r0 r1) - b/(2 r1^2))`.
pub fn initial_deviation(r: f64, p: &PhysicalParams, dp: &DerivedParams) -> Result<f64> {
    let (r0, r1, _) = shell(p)?;
    let b = dp.b;
    Ok(b / (2.0 * r) - b / r0 + r * (b / (r0 * r1) - b / (2.0 * r1 * r1)))
}

/// Steady state on the shell:
/// `T01 - b/(r0 r1) + b/(2 r1^2) + b/(r0 r) - b/(2 r^2)`.
pub fn shell_steady_state(r: f64, p: &PhysicalParams, dp: &DerivedParams) -> Result<f64> {
    let (r0, r1, _) = shell(p)?;
    let b = dp.b;
    Ok(p.t_ambient - b / (r0 * r1) + b / (2.0 * r1 * r1) + b / (r0 * r) - b / (2.0 * r * r))
}

/// Fills `c_n = <initial_deviation, phi_n>` by adaptive quadrature, split
/// at the half-periods of the mode.
pub fn fourier_coefficients(
    modes: &[EigenMode],
    p: &PhysicalParams,
    dp: &DerivedParams,
    sc: &SeriesControl,
) -> Result<Vec<EigenMode>> {
    sc.validate()?;
    let (r0, r1, l) = shell(p)?;
    modes
        .par_iter()
        .map(|m| {
            let pieces = ((m.k_n * l / std::f64::consts::PI).ceil() as usize).max(1);
            let breaks: Vec<f64> = (0..=pieces).map(|i| r0 + l * i as f64 / pieces as f64).collect();
            let f = |r: f64| {
                let g = initial_deviation(r, p, dp).unwrap_or(f64::NAN);
                g * (m.k_n * (r1 - r)).sin() / m.norm
            };
            let qc = QuadratureControl {
                max_subdivisions: sc.coeff_quadrature.max_subdivisions.max(4 * pieces),
                ..sc.coeff_quadrature
            };
            let c = integrate_with_breaks(f, &breaks, &qc)?;
            Ok(EigenMode { c_n: c.value, ..*m })
        })
        .collect()
}

/// Sets the time-factor weights for the chosen equation.
///
/// Parabolic: `a_n = c_n`, `b_n = 0`. Hyperbolic, real roots:
/// `a_n = c_n w- / (w- - w+)`, `b_n = -(w+ / w-) a_n`; complex roots use the
/// same formulas with complex `w+-`, which combine to the real damped
/// oscillation. At the double root `a_n = c_n`, `b_n = 0` and the time
/// factor is `(1 + t/(2 tau)) exp(-t/(2 tau))`.
pub fn coefficient_split_finite(modes: &[EigenMode], dp: &DerivedParams, tau: f64, equation: Equation) -> Vec<EigenMode> {
    modes
        .iter()
        .map(|m| {
            let c = Complex64::new(m.c_n, 0.0);
            match equation {
                Equation::Parabolic => EigenMode {
                    a_n: c,
                    b_n: Complex64::new(0.0, 0.0),
                    omega_plus: Complex64::new(-dp.a * m.k_n * m.k_n, 0.0),
                    omega_minus: Complex64::new(0.0, 0.0),
                    equation,
                    ..*m
                },
                Equation::Hyperbolic => {
                    let roots = omega_roots(m.k_n, dp, tau);
                    let (wp, wm) = (roots.omega_plus, roots.omega_minus);
                    let (a_n, b_n) = if roots.branch == RootBranch::CriticalDouble {
                        (c, Complex64::new(0.0, 0.0))
                    } else {
                        let a_n = c * wm / (wm - wp);
                        (a_n, c - a_n)
                    };
                    EigenMode {
                        a_n,
                        b_n,
                        omega_plus: wp,
                        omega_minus: wm,
                        branch: roots.branch,
                        equation,
                        ..*m
                    }
                }
            }
        })
        .collect()
}

/// Series value with the size of the last retained term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// `|c_N time_N(t)| / (norm_N r)` for the last mode `N`.
    pub truncation_estimate: f64,
}

impl SeriesValue {
    pub fn converged(&self, tol: f64) -> bool {
        self.truncation_estimate <= tol
    }
}

/// Temperature from the truncated series at `(t, r)`.
pub fn series_temperature(
    t: f64,
    r: f64,
    modes: &[EigenMode],
    p: &PhysicalParams,
    dp: &DerivedParams,
) -> Result<SeriesValue> {
    let (r0, r1, _) = shell(p)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain("series_temperature", format!("requires t >= 0, got {t}")));
    }
    if !(r >= r0 && r <= r1) {
        return Err(Error::domain("series_temperature", format!("r = {r} outside [{r0}, {r1}]")));
    }
    let mut sum = 0.0;
    let mut last = 0.0;
    for m in modes {
        let term = m.c_n * m.time_factor(t, dp, p.tau);
        sum += term * (m.k_n * (r1 - r)).sin() / m.norm;
        last = term.abs() / m.norm;
    }
    Ok(SeriesValue {
        value: shell_steady_state(r, p, dp)? + sum / r,
        truncation_estimate: last / r,
    })
}

/// Time derivative of the truncated series at `(t, r)`.
pub fn series_time_derivative(
    t: f64,
    r: f64,
    modes: &[EigenMode],
    p: &PhysicalParams,
    dp: &DerivedParams,
) -> Result<f64> {
    let (r0, r1, _) = shell(p)?;
    if !(r >= r0 && r <= r1) {
        return Err(Error::domain("series_time_derivative", format!("r = {r} outside [{r0}, {r1}]")));
    }
    let sum: f64 = modes
        .iter()
        .map(|m| m.c_n * m.time_slope(t, dp, p.tau) * (m.k_n * (r1 - r)).sin() / m.norm)
        .sum();
    Ok(sum / r)
}

/// Slowest decay rate of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    /// Rate `w` of the slowest `exp(w t)` [1/s], negative.
    pub rate: f64,
    pub branch: RootBranch,
}

/// The decay rate of the lowest mode: `-a k_0^2` (parabolic) or the root
/// `w0+` (hyperbolic), which equals `-a k_0^2 (1 + O(a tau k_0^2))` on the
/// real branch and `-1/(2 tau)` on the complex branch.
pub fn slowest_decay_rate(modes: &[EigenMode], dp: &DerivedParams, tau: f64, equation: Equation) -> Result<DecayRate> {
    let first = modes
        .first()
        .ok_or_else(|| Error::domain("slowest_decay_rate", "empty mode table"))?;
    let k = first.k_n;
    let roots = omega_roots(k, dp, tau);
    let rate = match equation {
        Equation::Parabolic => -dp.a * k * k,
        Equation::Hyperbolic => roots.omega_plus.re,
    };
    Ok(DecayRate {
        rate,
        branch: roots.branch,
    })
}

/// Eigenvalues, coefficients and time factors for one shell problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSeries {
    pub params: PhysicalParams,
    pub derived: DerivedParams,
    pub equation: Equation,
    pub modes: Vec<EigenMode>,
}

impl ShellSeries {
    pub fn new(p: &PhysicalParams, dp: &DerivedParams, equation: Equation, sc: &SeriesControl) -> Result<Self> {
        sc.validate()?;
        let ks = eigenvalues(p, sc.n_max)?;
        let modes = modes_from_eigenvalues(&ks, p, dp)?;
        let modes = fourier_coefficients(&modes, p, dp, sc)?;
        let modes = coefficient_split_finite(&modes, dp, p.tau, equation);
        Ok(ShellSeries {
            params: *p,
            derived: *dp,
            equation,
            modes,
        })
    }

    /// Same eigenvalues and coefficients, other equation.
    pub fn with_equation(&self, equation: Equation) -> Self {
        ShellSeries {
            equation,
            modes: coefficient_split_finite(&self.modes, &self.derived, self.params.tau, equation),
            ..self.clone()
        }
    }

    /// Keeps only the first `n` modes.
    pub fn truncated(&self, n: usize) -> Self {
        ShellSeries {
            modes: self.modes[..n.min(self.modes.len())].to_vec(),
            ..self.clone()
        }
    }

    pub fn temperature(&self, t: f64, r: f64) -> Result<SeriesValue> {
        series_temperature(t, r, &self.modes, &self.params, &self.derived)
    }

    pub fn time_derivative(&self, t: f64, r: f64) -> Result<f64> {
        series_time_derivative(t, r, &self.modes, &self.params, &self.derived)
    }

    pub fn slowest_decay_rate(&self) -> Result<DecayRate> {
        slowest_decay_rate(&self.modes, &self.derived, self.params.tau, self.equation)
    }
}
