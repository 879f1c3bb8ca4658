//! Physical constants, derived constants and the characteristic frequencies
//! of the damped (Cattaneo-Vernotte) heat equation.
//!
//! Conventions used throughout the crate:
//!
//! * `a = kappa / (rho c)` is the thermal diffusivity,
//! * `beta = sigma (V0 r0)^2 / (rho c)` is the Joule source `Q r^4 / (rho c)`,
//! * `b = beta / a`,
//! * `eps = tau / a`, so the time-dependent part satisfies
//!   `eps T_tt + T_t / a = Laplacian T`,
//! * `d = beta / tau` is the source constant of the damped wave form,
//! * `k0 = 1 / (2 sqrt(a tau))` separates real from complex frequency pairs,
//! * `wave_speed = sqrt(a / tau) = 1 / sqrt(eps)`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// User-supplied geometry, material and source constants (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Electrode radius [m].
    pub r0: f64,
    /// Outer shell radius [m]; `None` selects the unbounded medium.
    pub r1: Option<f64>,
    /// Thermal conductivity [W/(m K)].
    pub kappa: f64,
    /// Mass density [kg/m^3].
    pub rho: f64,
    /// Specific heat [J/(kg K)].
    pub c: f64,
    /// Electrical conductivity [S/m].
    pub sigma: f64,
    /// Applied electrode potential [V].
    pub v0: f64,
    /// Thermal relaxation time [s].
    pub tau: f64,
    /// Temperature far away (unbounded medium) or on the outer shell [K].
    pub t_ambient: f64,
}

impl Default for PhysicalParams {
    /// The desk-scale case: 1 mm electrode in a 50 mm shell of water-like
    /// tissue driven at 20 V, with a 1 s relaxation time.
    fn default() -> Self {
        PhysicalParams {
            r0: 1.0e-3,
            r1: Some(50.0e-3),
            kappa: 0.5,
            rho: 1000.0,
            c: 4000.0,
            sigma: 0.5,
            v0: 20.0,
            tau: 1.0,
            t_ambient: 310.0,
        }
    }
}

/// Configuration keys, in dump order.
pub const CONFIG_KEYS: [&str; 9] = [
    "r0",
    "r1",
    "kappa",
    "rho",
    "c",
    "sigma",
    "V0",
    "tau",
    "T_ambient",
];

impl PhysicalParams {
    /// Same constants with the outer shell removed.
    pub fn unbounded(self) -> Self {
        PhysicalParams { r1: None, ..self }
    }

    /// Same constants with the outer shell at `r1`.
    pub fn with_shell(self, r1: f64) -> Self {
        PhysicalParams {
            r1: Some(r1),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, value: f64) -> Result<()> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "must be finite and > 0",
                })
            }
        }
        positive("r0", self.r0)?;
        if let Some(r1) = self.r1 {
            if !(r1.is_finite() && r1 > self.r0) {
                return Err(Error::InvalidParameter {
                    field: "r1",
                    value: r1,
                    reason: "must be finite and > r0",
                });
            }
        }
        positive("kappa", self.kappa)?;
        positive("rho", self.rho)?;
        positive("c", self.c)?;
        positive("sigma", self.sigma)?;
        positive("tau", self.tau)?;
        if !self.v0.is_finite() {
            return Err(Error::InvalidParameter {
                field: "V0",
                value: self.v0,
                reason: "must be finite",
            });
        }
        if !self.t_ambient.is_finite() {
            return Err(Error::InvalidParameter {
                field: "T_ambient",
                value: self.t_ambient,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Outer radius, or a domain error when the medium is unbounded.
    pub fn shell_radius(&self) -> Result<f64> {
        self.r1
            .ok_or_else(|| Error::domain("shell_radius", "no outer shell radius r1 configured"))
    }

    /// Sets one parameter by its configuration key.
    ///
    /// `r1` additionally accepts `inf` / `none` to select the unbounded medium.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let value = value.trim();
        if key == "r1" && matches!(value.to_ascii_lowercase().as_str(), "inf" | "none" | "") {
            self.r1 = None;
            return Ok(());
        }
        let x: f64 = value
            .parse()
            .map_err(|_| format!("cannot parse `{value}` as a number for `{key}`"))?;
        match key {
            "r0" => self.r0 = x,
            "r1" => self.r1 = Some(x),
            "kappa" => self.kappa = x,
            "rho" => self.rho = x,
            "c" => self.c = x,
            "sigma" => self.sigma = x,
            "V0" => self.v0 = x,
            "tau" => self.tau = x,
            "T_ambient" => self.t_ambient = x,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Applies a `name = value` configuration text on top of `self`.
    /// Blank lines and `#` comments are ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: idx + 1,
                reason: format!("expected `name = value`, got `{line}`"),
            })?;
            self.set(key.trim(), value)
                .map_err(|reason| Error::Config {
                    line: idx + 1,
                    reason,
                })?;
        }
        Ok(())
    }

    /// Parses a configuration text on top of the default case.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut p = PhysicalParams::default();
        p.apply_config(text)?;
        p.validate()?;
        Ok(p)
    }

    /// Serializes to the configuration format. Values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        for key in CONFIG_KEYS {
            let _ = match key {
                "r1" => match self.r1 {
                    Some(r1) => writeln!(out, "r1 = {r1:e}"),
                    None => writeln!(out, "r1 = inf"),
                },
                _ => writeln!(out, "{key} = {:e}", self.get(key).unwrap_or(f64::NAN)),
            };
        }
        out
    }

    fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "r0" => self.r0,
            "r1" => self.r1?,
            "kappa" => self.kappa,
            "rho" => self.rho,
            "c" => self.c,
            "sigma" => self.sigma,
            "V0" => self.v0,
            "tau" => self.tau,
            "T_ambient" => self.t_ambient,
            _ => return None,
        })
    }
}

/// Every derived symbol the closed-form solutions use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Thermal diffusivity [m^2/s].
    pub a: f64,
    /// Source constant [K m^4 / s].
    pub beta: f64,
    /// Steady-state constant [K m^2].
    pub b: f64,
    /// `tau / a` [s^2/m^2].
    pub eps: f64,
    /// Critical wavenumber [1/m].
    pub k0: f64,
    /// Source constant of the damped wave form [K m^4 / s^2].
    pub d: f64,
    /// Thermal wave speed [m/s].
    pub wave_speed: f64,
}

impl DerivedParams {
    /// Characteristic temperature rise `b / (2 r0^2)` at the electrode.
    pub fn rise_scale(&self, p: &PhysicalParams) -> f64 {
        self.b / (2.0 * p.r0 * p.r0)
    }

    /// Length `2 sqrt(a tau) = 1 / k0` used to make radii dimensionless.
    pub fn wave_length(&self) -> f64 {
        1.0 / self.k0
    }
}

pub fn derive_params(p: &PhysicalParams) -> Result<DerivedParams> {
    p.validate()?;
    let rho_c = p.rho * p.c;
    let a = p.kappa / rho_c;
    let beta = p.sigma * (p.v0 * p.r0).powi(2) / rho_c;
    let b = beta / a;
    let eps = p.tau / a;
    let k0 = 1.0 / (2.0 * (a * p.tau).sqrt());
    let d = beta / p.tau;
    let wave_speed = (a / p.tau).sqrt();
    Ok(DerivedParams {
        a,
        beta,
        b,
        eps,
        k0,
        d,
        wave_speed,
    })
}

/// Which heat equation a shell solver integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `T_t = a Laplacian T + beta / r^4`.
    Parabolic,
    /// `tau T_tt + T_t = a Laplacian T + beta / r^4`.
    Hyperbolic,
}

impl Equation {
    pub fn as_str(self) -> &'static str {
        match self {
            Equation::Parabolic => "parabolic",
            Equation::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootBranch {
    /// `k < k0`: two distinct negative real roots.
    SubcriticalRealPair,
    /// `k = k0`: double root `-1/(2 tau)`.
    CriticalDouble,
    /// `k > k0`: complex-conjugate pair with real part `-1/(2 tau)`.
    SupercriticalComplexPair,
}

impl RootBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootBranch::SubcriticalRealPair => "subcritical",
            RootBranch::CriticalDouble => "critical",
            RootBranch::SupercriticalComplexPair => "supercritical",
        }
    }
}

/// The two roots of `eps w^2 + w / a + k^2 = 0` at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaRoots {
    pub k: f64,
    pub branch: RootBranch,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
}

/// Roots of the characteristic quadratic at wavenumber `k >= 0`.
///
/// The root closest to zero is computed in the cancellation-free form
/// `-(x^2 / (1 + R)) / (2 tau)` with `x = k / k0`, `R = sqrt(1 - x^2)`.
pub fn omega_roots(k: f64, dp: &DerivedParams, tau: f64) -> OmegaRoots {
    let x = k / dp.k0;
    let half_rate = 1.0 / (2.0 * tau);
    if x < 1.0 {
        let r = ((1.0 - x) * (1.0 + x)).sqrt();
        let plus = -half_rate * x * x / (1.0 + r);
        let minus = -half_rate * (1.0 + r);
        OmegaRoots {
            k,
            branch: RootBranch::SubcriticalRealPair,
            omega_plus: Complex64::new(plus, 0.0),
            omega_minus: Complex64::new(minus, 0.0),
        }
    } else if x == 1.0 {
        OmegaRoots {
            k,
            branch: RootBranch::CriticalDouble,
            omega_plus: Complex64::new(-half_rate, 0.0),
            omega_minus: Complex64::new(-half_rate, 0.0),
        }
    } else {
        let q = ((x - 1.0) * (x + 1.0)).sqrt();
        OmegaRoots {
            k,
            branch: RootBranch::SupercriticalComplexPair,
            omega_plus: Complex64::new(-half_rate, half_rate * q),
            omega_minus: Complex64::new(-half_rate, -half_rate * q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalParams {
        PhysicalParams {
            r0: 1.0,
            r1: None,
            kappa: 1.0,
            rho: 1.0,
            c: 1.0,
            sigma: 1.0,
            v0: 1.0,
            tau: 0.25,
            t_ambient: 0.0,
        }
    }

    #[test]
    fn diffusivity_is_conductivity_over_heat_capacity() {
        let p = PhysicalParams {
            kappa: 2.0,
            rho: 1000.0,
            c: 2.0,
            ..unit()
        };
        let dp = derive_params(&p).unwrap();
        assert!((dp.a - 0.001).abs() < 1e-18);
    }

    #[test]
    fn all_ones_case() {
        let dp = derive_params(&unit()).unwrap();
        assert_eq!(dp.beta, 1.0);
        assert_eq!(dp.a, 1.0);
        assert_eq!(dp.b, 1.0);
        assert_eq!(dp.k0, 1.0);
        assert_eq!(dp.d, 4.0);
    }

    #[test]
    fn wave_speed_and_eps_are_reciprocal() {
        let dp = derive_params(&PhysicalParams::default()).unwrap();
        assert!((dp.wave_speed * dp.wave_speed * dp.eps - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn rejects_non_positive_constants() {
        for field in ["kappa", "rho", "c", "sigma", "tau", "r0"] {
            let mut p = unit();
            p.set(field, "0").unwrap();
            match derive_params(&p) {
                Err(Error::InvalidParameter { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{field}: {other:?}"),
            }
        }
        let p = unit().with_shell(0.5);
        assert!(matches!(
            derive_params(&p),
            Err(Error::InvalidParameter { field: "r1", .. })
        ));
    }

    #[test]
    fn zero_wavenumber_roots() {
        let p = unit();
        let dp = derive_params(&p).unwrap();
        let w = omega_roots(0.0, &dp, p.tau);
        assert_eq!(w.omega_plus.re, 0.0);
        assert_eq!(w.omega_minus.re, -1.0 / p.tau);
    }

    #[test]
    fn critical_double_root() {
        let p = unit();
        let dp = derive_params(&p).unwrap();
        let w = omega_roots(dp.k0, &dp, p.tau);
        assert_eq!(w.branch, RootBranch::CriticalDouble);
        assert_eq!(w.omega_plus, w.omega_minus);
        assert_eq!(w.omega_plus.re, -1.0 / (2.0 * p.tau));
    }

    #[test]
    fn supercritical_pair_at_twice_k0() {
        // a = 1, tau = 1: eps w^2 + w + k^2 = 0 with k = 2 k0 = 1 gives
        // w = (-1 +- i sqrt(3)) / 2.
        let p = PhysicalParams { tau: 1.0, ..unit() };
        let dp = derive_params(&p).unwrap();
        let w = omega_roots(2.0 * dp.k0, &dp, 1.0);
        assert_eq!(w.branch, RootBranch::SupercriticalComplexPair);
        assert!((w.omega_plus.re + 0.5).abs() < 1e-15);
        assert!((w.omega_plus.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(w.omega_minus, w.omega_plus.conj());
    }

    #[test]
    fn branch_switches_at_k0() {
        let p = PhysicalParams::default();
        let dp = derive_params(&p).unwrap();
        let k0 = 1.0 / (2.0 * (dp.a * p.tau).sqrt());
        let below = f64::from_bits(k0.to_bits() - 1);
        let above = f64::from_bits(k0.to_bits() + 1);
        assert_eq!(
            omega_roots(below, &dp, p.tau).branch,
            RootBranch::SubcriticalRealPair
        );
        assert_eq!(
            omega_roots(above, &dp, p.tau).branch,
            RootBranch::SupercriticalComplexPair
        );
    }

    #[test]
    fn config_round_trip() {
        let p = PhysicalParams {
            r1: Some(0.0371),
            v0: 13.25,
            ..PhysicalParams::default()
        };
        let text = p.to_config();
        let q = PhysicalParams::from_config(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(derive_params(&p).unwrap(), derive_params(&q).unwrap());

        let q = PhysicalParams::from_config(&p.unbounded().to_config()).unwrap();
        assert_eq!(q.r1, None);
    }

    #[test]
    fn config_comments_and_errors() {
        let p = PhysicalParams::from_config("# case\n tau = 2.5 # relaxation\n\nV0=10\n").unwrap();
        assert_eq!(p.tau, 2.5);
        assert_eq!(p.v0, 10.0);
        assert!(matches!(
            PhysicalParams::from_config("tau 2"),
            Err(Error::Config { line: 1, .. })
        ));
        assert!(matches!(
            PhysicalParams::from_config("x = 1\nfoo = 2"),
            Err(Error::Config { line: 1, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn root_sum_and_product(k in 0.0f64..50.0, a in 1e-3f64..10.0, tau in 1e-3f64..10.0) {
                let p = PhysicalParams { kappa: a, rho: 1.0, c: 1.0, tau, ..unit() };
                let dp = derive_params(&p).unwrap();
                let w = omega_roots(k, &dp, tau);
                let sum = w.omega_plus + w.omega_minus;
                let prod = w.omega_plus * w.omega_minus;
                let want_sum = -1.0 / tau;
                let want_prod = dp.a * k * k / tau;
                prop_assert!((sum.re - want_sum).abs() <= 1e-12 * want_sum.abs());
                prop_assert!(sum.im.abs() <= 1e-12 * want_sum.abs());
                prop_assert!((prod.re - want_prod).abs() <= 1e-12 * want_prod.max(f64::MIN_POSITIVE));
                prop_assert!(prod.im.abs() <= 1e-12 * want_prod.max(1e-300));
                // residual of the quadratic itself
                for w in [w.omega_plus, w.omega_minus] {
                    let res = dp.eps * w * w + w / dp.a + k * k;
                    let scale = dp.eps * w.norm_sqr() + w.norm() / dp.a + k * k;
                    prop_assert!(res.norm() <= 1e-12 * scale.max(1e-300));
                }
                match w.branch {
                    RootBranch::SubcriticalRealPair => {
                        prop_assert!(w.omega_plus.re <= 0.0);
                        prop_assert!(w.omega_minus.re <= w.omega_plus.re);
                    }
                    RootBranch::SupercriticalComplexPair => {
                        prop_assert!((w.omega_plus.re + 0.5 / tau).abs() <= 1e-15 / tau);
                        prop_assert_eq!(w.omega_minus, w.omega_plus.conj());
                    }
                    RootBranch::CriticalDouble => {}
                }
            }
        }
    }
}
