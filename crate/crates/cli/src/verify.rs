//! `verify`: the property checks of each module, printed as
//! `suite,check,status,detail`.

use std::time::Instant;

use ablation_heat::fd_oracle::{self, detect_wavefront, richardson, FrontDetection, Grid, Recording, Scheme};
use ablation_heat::finite_spectral::{
    eigen_residual, eigenvalues, initial_deviation, shell_steady_state, SeriesControl, ShellSeries,
};
use ablation_heat::infinite_hyperbolic::{self, coefficient_split, wave_kernel, DimensionlessPoint};
use ablation_heat::infinite_parabolic::{self, ParabolicMode};
use ablation_heat::quad::integrate_with_breaks;
use ablation_heat::specfun::{self, Sign};
use ablation_heat::{
    compare, derive_params, omega_roots, DerivedParams, Equation, Norm, PhysicalParams, QuadratureControl,
    Result, RootBranch,
};

use crate::args::{Suite, VerifyCmd};
use crate::output::open;
use crate::{CliError, CliResult};

type Outcome = Result<(bool, String)>;

struct Check {
    suite: &'static str,
    name: &'static str,
    run: fn() -> Outcome,
}

const CHECKS: &[Check] = &[
    Check { suite: "params", name: "derive-examples", run: params_examples },
    Check { suite: "params", name: "root-identities", run: params_root_identities },
    Check { suite: "params", name: "branch-switch-at-k0", run: params_branch_switch },
    Check { suite: "params", name: "wave-speed-eps", run: params_wave_speed },
    Check { suite: "params", name: "config-round-trip", run: params_round_trip },
    Check { suite: "specfun", name: "dawson-ode", run: specfun_dawson_ode },
    Check { suite: "specfun", name: "s1-pde-identity", run: specfun_s1_pde },
    Check { suite: "specfun", name: "s1-pde-identity-alt-sign", run: specfun_s1_pde_alt_sign },
    Check { suite: "specfun", name: "s1-kummer-bound", run: specfun_s1_bound },
    Check { suite: "specfun", name: "j2-plus-equals-minus-ci", run: specfun_j2_plus_ci },
    Check { suite: "specfun", name: "j2-minus-equals-minus-ci", run: specfun_j2_minus_ci },
    Check { suite: "specfun", name: "deterministic", run: specfun_deterministic },
    Check { suite: "infinite-parabolic", name: "steady-state-defect", run: par_defect },
    Check { suite: "infinite-parabolic", name: "modes-agree-to-order-r0", run: par_modes_agree },
    Check { suite: "infinite-parabolic", name: "early-growth", run: par_early_growth },
    Check { suite: "infinite-parabolic", name: "undershoot", run: par_undershoot },
    Check { suite: "infinite-hyperbolic", name: "zero-mode-ends", run: hyp_zero_mode },
    Check { suite: "infinite-hyperbolic", name: "wave-envelope-fit-at-tau", run: hyp_envelope_at_tau },
    Check { suite: "infinite-hyperbolic", name: "wave-envelope-after-front", run: hyp_envelope_after_front },
    Check { suite: "infinite-hyperbolic", name: "initial-slope", run: hyp_initial_slope },
    Check { suite: "infinite-hyperbolic", name: "mode-initial-slope", run: hyp_mode_slope },
    Check { suite: "finite-spectral", name: "eigenvalue-count", run: fin_count },
    Check { suite: "finite-spectral", name: "mode-equation", run: fin_mode_equation },
    Check { suite: "finite-spectral", name: "parseval", run: fin_parseval },
    Check { suite: "finite-spectral", name: "dirichlet-at-r1", run: fin_dirichlet },
    Check { suite: "finite-spectral", name: "late-time-model-gap", run: fin_late_gap },
    Check { suite: "fd-oracle", name: "equilibrium", run: fd_equilibrium },
    Check { suite: "fd-oracle", name: "maximum-principle", run: fd_maximum_principle },
    Check { suite: "fd-oracle", name: "deterministic", run: fd_deterministic },
    Check { suite: "fd-oracle", name: "convergence-order", run: fd_convergence },
    Check { suite: "fd-oracle", name: "small-tau-gap", run: fd_small_tau },
    Check { suite: "fd-oracle", name: "long-time-steady-state", run: fd_long_time },
    Check { suite: "fd-oracle", name: "wavefront", run: fd_wavefront },
];

fn suite_name(s: Suite) -> Option<&'static str> {
    match s {
        Suite::All => None,
        Suite::Params => Some("params"),
        Suite::Specfun => Some("specfun"),
        Suite::InfiniteParabolic => Some("infinite-parabolic"),
        Suite::InfiniteHyperbolic => Some("infinite-hyperbolic"),
        Suite::FiniteSpectral => Some("finite-spectral"),
        Suite::FdOracle => Some("fd-oracle"),
    }
}

pub fn run(c: &VerifyCmd) -> CliResult<()> {
    let wanted = suite_name(c.suite);
    let mut w = open(c.out.output.as_deref())?;
    w.write_record(["suite", "check", "status", "detail"])?;
    let mut failed = 0;
    for check in CHECKS.iter().filter(|k| wanted.is_none_or(|s| s == k.suite)) {
        let start = Instant::now();
        let (ok, detail) = match (check.run)() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let detail = format!("{detail} ({:.2} s)", start.elapsed().as_secs_f64());
        w.write_record([check.suite, check.name, if ok { "PASS" } else { "FAIL" }, &detail])?;
        w.flush()?;
        failed += usize::from(!ok);
    }
    if failed > 0 {
        return Err(CliError::Accuracy(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn desk() -> (PhysicalParams, DerivedParams) {
    let p = PhysicalParams::default();
    let dp = derive_params(&p).expect("default case is valid");
    (p, dp)
}

fn desk_unbounded() -> (PhysicalParams, DerivedParams) {
    let (p, dp) = desk();
    (p.unbounded(), dp)
}

fn unit(kappa: f64, rho: f64, c: f64, tau: f64) -> PhysicalParams {
    PhysicalParams {
        r0: 1.0,
        r1: None,
        kappa,
        rho,
        c,
        sigma: 1.0,
        v0: 1.0,
        tau,
        t_ambient: 0.0,
    }
}

fn qc() -> QuadratureControl {
    QuadratureControl::default()
}

// ---- params

fn params_examples() -> Outcome {
    let a = derive_params(&unit(2.0, 1000.0, 2.0, 1.0))?.a;
    let ones = derive_params(&unit(1.0, 1.0, 1.0, 1.0))?;
    let k0 = derive_params(&unit(1.0, 1.0, 1.0, 0.25))?.k0;
    let ok = (a - 1e-3).abs() < 1e-18 && ones.beta == 1.0 && ones.a == 1.0 && ones.b == 1.0 && k0 == 1.0;
    Ok((ok, format!("a = {a}, beta = {}, b = {}, k0 = {k0}", ones.beta, ones.b)))
}

fn params_root_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            for l in 0..10 {
                let a = 10f64.powf(-7.0 + 0.8 * i as f64);
                let tau = 10f64.powf(-4.0 + 0.7 * j as f64);
                let dp = derive_params(&unit(a, 1.0, 1.0, tau))?;
                let k = dp.k0 * 10f64.powf(-3.0 + 0.66 * l as f64);
                let w = omega_roots(k, &dp, tau);
                let sum = w.omega_plus + w.omega_minus;
                let prod = w.omega_plus * w.omega_minus;
                let e1 = (sum.re + 1.0 / tau).abs() * tau + sum.im.abs() * tau;
                let target = dp.a * k * k / tau;
                let e2 = ((prod.re - target).abs() + prod.im.abs()) / target;
                worst = worst.max(e1).max(e2);
            }
        }
    }
    Ok((worst <= 1e-12, format!("max relative residual {worst:.3e} over 1000 samples")))
}

fn params_branch_switch() -> Outcome {
    let (p, dp) = desk();
    let below = omega_roots(dp.k0 * (1.0 - 1e-14), &dp, p.tau).branch;
    let at = omega_roots(dp.k0, &dp, p.tau).branch;
    let above = omega_roots(dp.k0 * (1.0 + 1e-14), &dp, p.tau).branch;
    let ok = below == RootBranch::SubcriticalRealPair
        && at == RootBranch::CriticalDouble
        && above == RootBranch::SupercriticalComplexPair;
    Ok((ok, format!("{} / {} / {}", below.as_str(), at.as_str(), above.as_str())))
}

fn params_wave_speed() -> Outcome {
    let (_, dp) = desk();
    let e = (dp.wave_speed * dp.wave_speed * dp.eps - 1.0).abs();
    Ok((e <= 4.0 * f64::EPSILON, format!("|c^2 eps - 1| = {e:.3e}")))
}

fn params_round_trip() -> Outcome {
    let mut p = PhysicalParams::default();
    p.tau = 0.3;
    p.v0 = 1.0 / 3.0;
    let q = PhysicalParams::from_config(&p.to_config())?;
    let ok = q == p && derive_params(&q)? == derive_params(&p)?;
    Ok((ok, "dump and parse give identical parameters".into()))
}

// ---- specfun

fn specfun_dawson_ode() -> Outcome {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let x = 0.1 * (i as f64 + 0.5);
        let fd = (specfun::dawson(x + h) - specfun::dawson(x - h)) / (2.0 * h);
        worst = worst.max((fd - (1.0 - 2.0 * x * specfun::dawson(x))).abs());
    }
    Ok((worst <= 1e-6, format!("max |D' - (1 - 2 x D)| = {worst:.3e}")))
}

/// `(s, u)` points of the 10 x 10 grid on `[-3, 3] x [0.1, 5]`.
fn s1_grid() -> impl Iterator<Item = (f64, f64)> {
    (0..10).flat_map(|i| (0..10).map(move |j| (-3.0 + 6.0 * i as f64 / 9.0, 0.1 + 4.9 * j as f64 / 9.0)))
}

fn specfun_s1_pde() -> Outcome {
    let q = qc();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for (s, u) in s1_grid() {
        let ds = specfun::s1_ds(s, u, &q)?.value;
        let du = (specfun::s1(s, u + h, &q)?.value - specfun::s1(s, u - h, &q)?.value) / (2.0 * h);
        worst = worst.max((u * ds + s * du + u.cos() - s.exp()).abs());
    }
    Ok((worst <= 1e-6, format!("max |u S1_s + s S1_u + cos u - e^s| = {worst:.3e}")))
}

/// Sign pattern `u S1_s - s S1_u = cos u - e^s`; kept to document that it does not hold.
fn specfun_s1_pde_alt_sign() -> Outcome {
    let q = qc();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for (s, u) in s1_grid() {
        let ds = specfun::s1_ds(s, u, &q)?.value;
        let du = (specfun::s1(s, u + h, &q)?.value - specfun::s1(s, u - h, &q)?.value) / (2.0 * h);
        worst = worst.max((u * ds - s * du - u.cos() + s.exp()).abs());
    }
    Ok((worst <= 1e-6, format!("max |u S1_s - s S1_u - cos u + e^s| = {worst:.3e}")))
}

fn specfun_s1_bound() -> Outcome {
    let q = qc();
    let mut worst: f64 = 0.0;
    for (s, u) in s1_grid().filter(|p| p.0 > 0.0) {
        worst = worst.max(specfun::s1(s, u, &q)?.value.abs() / (2.0 * specfun::conf_hyp_m_1_32(s)));
    }
    Ok((worst < 1.0, format!("max |S1| / (2 M(1, 3/2, s)) = {worst:.4}")))
}

fn j2_ci(sign: Sign) -> Outcome {
    let q = qc();
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.0, 2.0, 5.0] {
        let ci = specfun::cosine_integral(s)?;
        match specfun::j2(sign, s, s, &q) {
            Ok(v) => worst = worst.max((v.value + ci).abs()),
            Err(e) => return Ok((false, format!("j2({}, {s}, {s}): {e}", sign.as_str()))),
        }
    }
    Ok((worst <= 1e-6, format!("max |J2 + Ci| = {worst:.3e}")))
}

fn specfun_j2_plus_ci() -> Outcome {
    j2_ci(Sign::Plus)
}

fn specfun_j2_minus_ci() -> Outcome {
    j2_ci(Sign::Minus)
}

fn specfun_deterministic() -> Outcome {
    let q = qc();
    let a = specfun::s2(2.0, 1.0, &q)?;
    let b = specfun::s2(2.0, 1.0, &q)?;
    let c = specfun::i1_kernel(Sign::Plus, 1.5, 2.5, &q)?;
    let d = specfun::i1_kernel(Sign::Plus, 1.5, 2.5, &q)?;
    Ok((a == b && c == d, format!("S2(2, 1) = {:.17e}", a.value)))
}

// ---- infinite parabolic

fn par_defect() -> Outcome {
    let (p, dp) = desk_unbounded();
    let r = 2.0 * p.r0;
    let t = (1e4 * r).powi(2) / dp.a;
    let tr = infinite_parabolic::transient(t, r, &dp, &p, ParabolicMode::SmallElectrodeClosedForm)?;
    let st = infinite_parabolic::steady_state(r, &dp, &p)?;
    let defect = st - tr;
    let expected = dp.b / (p.r0 * r);
    let rel = (defect / expected - 1.0).abs();
    Ok((rel < 1e-3, format!("steady - T(t -> inf) = {defect:.6e}, b/(r0 r) = {expected:.6e}")))
}

fn par_modes_agree() -> Outcome {
    let (p, dp) = desk_unbounded();
    let r = 3.0 * p.r0;
    let t = 0.05 * r * r / dp.a;
    let gap = |p: &PhysicalParams| -> Result<f64> {
        let dp = derive_params(p)?;
        let a = infinite_parabolic::transient(t, r, &dp, p, ParabolicMode::SmallElectrodeClosedForm)?;
        let b = infinite_parabolic::transient(t, r, &dp, p, ParabolicMode::FullQuadrature)?;
        Ok((a - b).abs())
    };
    let g1 = gap(&p)?;
    // r0 shrunk 10x with b held fixed
    let small = PhysicalParams {
        r0: p.r0 / 10.0,
        v0: p.v0 * 10.0,
        ..p
    };
    let g2 = gap(&small)?;
    let _ = dp;
    Ok((g2 * 5.0 <= g1, format!("gap {g1:.3e} K -> {g2:.3e} K (ratio {:.1})", g1 / g2)))
}

fn par_early_growth() -> Outcome {
    let (p, dp) = desk_unbounded();
    let mut ok = true;
    let mut detail = String::new();
    for m in [2.0, 5.0, 10.0] {
        let r = m * p.r0;
        let t = 1e-3 * r * r / dp.a;
        let h = 1e-3 * t;
        let f = |t| infinite_parabolic::transient(t, r, &dp, &p, ParabolicMode::SmallElectrodeClosedForm);
        let slope = (f(t + h)? - f(t - h)?) / (2.0 * h);
        ok &= slope > 0.0;
        detail += &format!("r = {m} r0: {slope:.3e} K/s; ");
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

fn par_undershoot() -> Outcome {
    let (p, dp) = desk_unbounded();
    let r = 2.0 * p.r0;
    let t = infinite_parabolic::undershoot_time(r, &dp, &p, ParabolicMode::SmallElectrodeClosedForm)?;
    let after = infinite_parabolic::transient(2.0 * t, r, &dp, &p, ParabolicMode::SmallElectrodeClosedForm)?;
    Ok((t.is_finite() && after < p.t_ambient, format!("t* = {t:.6e} s, T(2 t*) - T_inf = {:.3e} K", after - p.t_ambient)))
}

// ---- infinite hyperbolic

fn hyp_zero_mode() -> Outcome {
    let (p, dp) = desk_unbounded();
    let r = 2.0 * p.r0;
    let z0 = infinite_hyperbolic::components(0.0, r, &dp, &p, &qc())?.zero_mode;
    let z1 = infinite_hyperbolic::components(100.0 * p.tau, r, &dp, &p, &qc())?.zero_mode;
    let end = dp.b / (p.r0 * r);
    Ok((z0 == 0.0 && (z1 - end).abs() <= 1e-12 * end, format!("{z0} at t = 0, {z1:.6e} vs {end:.6e} late")))
}

/// `|I2(s)| <= C exp(-s)` for `s = s_fit x {1.5, 2, 3, 4}` with `C` fit at `s_fit`.
fn envelope(u: f64, s_fit: f64) -> Outcome {
    let q = qc();
    let c = wave_kernel(s_fit, u, &q)?.value.abs() * s_fit.exp();
    let mut worst: f64 = 0.0;
    for f in [1.5, 2.0, 3.0, 4.0] {
        let s = s_fit * f;
        worst = worst.max(wave_kernel(s, u, &q)?.value.abs() * s.exp() / c);
    }
    Ok((worst <= 1.0, format!("u = {u:.3}, s_fit = {s_fit:.3}: max |I2| e^s / C = {worst:.4}")))
}

fn hyp_envelope_at_tau() -> Outcome {
    let (p, dp) = desk_unbounded();
    let pt = DimensionlessPoint::new(p.tau, 2.0 * p.r0, &dp, p.tau)?;
    envelope(pt.u, pt.s)
}

fn hyp_envelope_after_front() -> Outcome {
    let (p, dp) = desk_unbounded();
    let pt = DimensionlessPoint::new(p.tau, 2.0 * p.r0, &dp, p.tau)?;
    envelope(pt.u, pt.u + 2.0)
}

fn hyp_initial_slope() -> Outcome {
    let (p, dp) = desk_unbounded();
    let mut worst: f64 = 0.0;
    for m in [1.5, 3.0] {
        let r = m * p.r0;
        let h = 1e-4 * p.tau;
        let t1 = infinite_hyperbolic::components(h, r, &dp, &p, &qc())?.total();
        let t2 = infinite_hyperbolic::components(2.0 * h, r, &dp, &p, &qc())?.total();
        // one-sided second-order difference at t = 0
        let slope = (4.0 * t1 - t2 - 3.0 * p.t_ambient) / (2.0 * h);
        let expected = dp.b / (p.r0 * r * p.tau);
        worst = worst.max((slope / expected - 1.0).abs());
    }
    Ok((worst <= 1e-2, format!("max |dT/dt(0) / (b/(r0 r tau)) - 1| = {worst:.3e}")))
}

fn hyp_mode_slope() -> Outcome {
    let (p, dp) = desk_unbounded();
    let mut worst: f64 = 0.0;
    for i in 1..100 {
        let k = dp.k0 * i as f64 / 100.0;
        let (f1, g1) = coefficient_split(k, &dp, p.tau)?;
        let w = omega_roots(k, &dp, p.tau);
        let scale = (w.omega_plus.re * f1).abs() + (w.omega_minus.re * g1).abs();
        worst = worst.max((w.omega_plus.re * f1 + w.omega_minus.re * g1).abs() / scale);
    }
    Ok((worst <= 1e-12, format!("max relative |w+ f1 + w- g1| = {worst:.3e}")))
}

// ---- finite spectral

fn fin_count() -> Outcome {
    let (p, _) = desk();
    let ks = eigenvalues(&p, 400)?;
    let min_gap = ks.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let mut worst: f64 = 0.0;
    for &k in &ks {
        worst = worst.max(eigen_residual(k, &p)?);
    }
    let ok = ks.len() == 400 && min_gap > 1e-12 * ks[0] && worst <= 1e-12;
    Ok((ok, format!("{} roots, min gap {min_gap:.3e}, max residual {worst:.3e}", ks.len())))
}

fn fin_mode_equation() -> Outcome {
    let (p, _) = desk();
    let r1 = p.shell_radius()?;
    let ks = eigenvalues(&p, 50)?;
    let mut worst: f64 = 0.0;
    for &k in ks.iter().step_by(7) {
        let y = |r: f64| (k * (r1 - r)).sin();
        // -y'' = k^2 y at interior points
        let h = 1e-3 / k;
        for i in 1..10 {
            let r = p.r0 + (r1 - p.r0) * i as f64 / 10.0;
            let ypp = (y(r + h) - 2.0 * y(r) + y(r - h)) / (h * h);
            worst = worst.max((ypp + k * k * y(r)).abs() / (k * k));
        }
        // r0 y'(r0) = y(r0)
        let yp = -k * (k * (r1 - p.r0)).cos();
        worst = worst.max((p.r0 * yp - y(p.r0)).abs());
        worst = worst.max(y(r1).abs());
    }
    Ok((worst <= 1e-6, format!("max residual {worst:.3e}")))
}

fn fin_parseval() -> Outcome {
    let (p, dp) = desk();
    let r1 = p.shell_radius()?;
    let s = ShellSeries::new(&p, &dp, Equation::Parabolic, &SeriesControl::default())?;
    let sum: f64 = s.modes.iter().map(|m| m.c_n * m.c_n).sum();
    // g is r (T01 - T_steady), the deviation in y = r T
    let breaks: Vec<f64> = (0..=200).map(|i| p.r0 + (r1 - p.r0) * (i as f64 / 200.0).powi(2)).collect();
    let q = QuadratureControl::new(1e-14, 1e-13, 20000)?;
    let norm2 = integrate_with_breaks(|r| initial_deviation(r, &p, &dp).unwrap_or(f64::NAN).powi(2), &breaks, &q)?.value;
    let ratio = sum / norm2;
    Ok((ratio <= 1.0 + 1e-10 && ratio > 0.999, format!("sum c_n^2 / int g^2 = {ratio:.9}")))
}

fn fin_dirichlet() -> Outcome {
    let (p, dp) = desk();
    let r1 = p.shell_radius()?;
    let s = ShellSeries::new(&p, &dp, Equation::Hyperbolic, &SeriesControl::default())?;
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.5, 10.0, 1000.0] {
        for eq in [Equation::Parabolic, Equation::Hyperbolic] {
            worst = worst.max((s.with_equation(eq).temperature(t, r1)?.value - p.t_ambient).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |T(t, r1) - T01| = {worst:.3e} K")))
}

fn fin_late_gap() -> Outcome {
    let (p, dp) = desk();
    let r1 = p.shell_radius()?;
    let par = ShellSeries::new(&p, &dp, Equation::Parabolic, &SeriesControl::default())?;
    let hyp = par.with_equation(Equation::Hyperbolic);
    let m0 = par.modes[0];
    let r = 0.5 * (p.r0 + r1);
    let mut ok = true;
    let mut detail = String::new();
    for f in [3.0, 6.0, 10.0] {
        let t = f / (dp.a * m0.k_n * m0.k_n);
        let gap = (par.temperature(t, r)?.value - hyp.temperature(t, r)?.value).abs();
        let amp = (m0.c_n * (m0.k_n * (r1 - r)).sin() / (m0.norm * r)).abs() * (-dp.a * m0.k_n * m0.k_n * t).exp();
        ok &= gap < amp;
        detail += &format!("t = {f}/(a k0^2): gap {gap:.2e} K vs mode {amp:.2e} K; ");
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

// ---- fd oracle

fn fd_equilibrium() -> Outcome {
    let (mut p, _) = desk();
    p.v0 = 0.0;
    let dp = derive_params(&p)?;
    let mut worst: f64 = 0.0;
    for scheme in [Scheme::ExplicitParabolic, Scheme::ExplicitHyperbolic] {
        let g = Grid::new(&p, &dp, scheme, 101, 100.0, 0.95, None)?;
        let prof = fd_oracle::solve(&p, &dp, &g, &Recording::every(&g, 97, 1))?;
        for s in &prof.samples {
            worst = worst.max((s.temperature - p.t_ambient).abs());
        }
    }
    Ok((worst <= 1e-13 * p.t_ambient, format!("max |T - T01| = {worst:.3e} K")))
}

fn fd_maximum_principle() -> Outcome {
    let (p, dp) = desk();
    let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 246, 500.0, 1.0, None)?;
    let prof = fd_oracle::solve(&p, &dp, &g, &Recording::every(&g, 50, 1))?;
    let min = prof.samples.iter().map(|s| s.temperature).fold(f64::INFINITY, f64::min);
    Ok((min >= p.t_ambient - 1e-12, format!("min T - T01 = {:.3e} K", min - p.t_ambient)))
}

fn fd_deterministic() -> Outcome {
    let (p, dp) = desk();
    let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 246, 50.0, 1.0, None)?;
    let rec = Recording::every(&g, 11, 1);
    let a = fd_oracle::solve(&p, &dp, &g, &rec)?;
    let b = fd_oracle::solve(&p, &dp, &g, &rec)?;
    Ok((a == b, format!("{} samples bit-identical", a.samples.len())))
}

/// L-infinity distance of the parabolic scheme to the series at `t = 1/(a k0^2)`
/// for the given node counts.
fn fd_errors(nrs: &[usize]) -> Result<Vec<f64>> {
    let (p, dp) = desk();
    let series = ShellSeries::new(&p, &dp, Equation::Parabolic, &SeriesControl::default())?;
    let k0 = series.modes[0].k_n;
    let t = 1.0 / (dp.a * k0 * k0);
    let mut out = Vec::new();
    for &nr in nrs {
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, nr, t, 0.95, None)?;
        let prof = fd_oracle::solve(&p, &dp, &g, &Recording::at_times(&g, &[t], 1)?)?;
        let mut worst: f64 = 0.0;
        for s in &prof.samples {
            worst = worst.max((s.temperature - series.temperature(s.t, s.r)?.value).abs());
        }
        out.push(worst);
    }
    Ok(out)
}

fn fd_convergence() -> Outcome {
    let e = fd_errors(&[123, 245, 489])?;
    let r1 = e[0] / e[1];
    let r2 = e[1] / e[2];
    Ok((r1 >= 3.0 && r2 >= 3.0, format!("errors {:.3e}, {:.3e}, {:.3e} K; ratios {r1:.2}, {r2:.2}", e[0], e[1], e[2])))
}

fn fd_small_tau() -> Outcome {
    let (p, _) = desk();
    let t_end = 20.0;
    let gap = |tau: f64| -> Result<f64> {
        let p = PhysicalParams { tau, ..p };
        let dp = derive_params(&p)?;
        // shared step well inside both limits, so the schemes differ only through tau
        let base = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 246, t_end, 0.95, Some(t_end))?;
        let nt = (t_end / (0.05 * tau)).ceil() as usize;
        let gh = Grid { nt, dt: t_end / nt as f64, ..base };
        let gp = Grid { scheme: Scheme::ExplicitParabolic, ..gh };
        let h = fd_oracle::solve(&p, &dp, &gh, &Recording::at_times(&gh, &[t_end], 1)?)?;
        let q = fd_oracle::solve(&p, &dp, &gp, &Recording::at_times(&gp, &[t_end], 1)?)?;
        compare(&h, &q, Norm::Linf)
    };
    let g1 = gap(0.02)?;
    let g2 = gap(0.01)?;
    let ratio = g1 / g2;
    Ok(((ratio - 2.0).abs() <= 0.4 * 2.0, format!("gap {g1:.3e} K (tau = 0.02 s), {g2:.3e} K (tau = 0.01 s), ratio {ratio:.3}")))
}

fn fd_long_time() -> Outcome {
    let (p, dp) = desk();
    let t = 2.0e4;
    let run = |nr: usize| -> Result<ablation_heat::TemperatureProfile> {
        let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, nr, t, 0.95, Some(t))?;
        fd_oracle::solve(&p, &dp, &g, &Recording::at_times(&g, &[t], 2 * (nr / 491).max(1))?)
    };
    let coarse = run(491)?;
    let fine = run(981)?;
    let e = richardson(&coarse, &fine, 2)?;
    let mut worst: f64 = 0.0;
    for s in &e.samples {
        worst = worst.max((s.temperature - shell_steady_state(s.r, &p, &dp)?).abs());
    }
    let tol = 1e-3 * dp.rise_scale(&p);
    Ok((worst <= tol, format!("max |T - T_steady| = {worst:.3e} K at t = {t} s (tolerance {tol:.3e} K)")))
}

fn fd_wavefront() -> Outcome {
    let run = |tau: f64, eq: Equation| -> Result<ablation_heat::TemperatureProfile> {
        let p = PhysicalParams {
            r0: 1.0,
            r1: Some(5.0),
            kappa: 1.0,
            rho: 1.0,
            c: 1.0,
            sigma: 1.0,
            v0: 1.0,
            tau,
            t_ambient: 1.0,
        };
        let dp = derive_params(&p)?;
        let gh = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 801, 3.5, 1.0, None)?;
        let g = Grid::new(&p, &dp, Scheme::for_equation(eq), 801, 3.5, 1.0, Some(gh.dt))?;
        fd_oracle::solve(&p, &dp, &g, &Recording::every(&g, g.nt / gh.nt, 1))
    };
    let opts = FrontDetection::default();
    let w1 = detect_wavefront(&run(1.0, Equation::Hyperbolic)?, &opts)?;
    let w2 = detect_wavefront(&run(2.0, Equation::Hyperbolic)?, &opts)?;
    let wp = detect_wavefront(&run(1.0, Equation::Parabolic)?, &opts)?;
    let (Some(v1), Some(v2)) = (w1.speed, w2.speed) else {
        return Ok((false, "no hyperbolic front found".into()));
    };
    let (v1, v2) = (v1.abs(), v2.abs());
    let ok = (v1 - 1.0).abs() <= 0.05
        && (v1 / v2 / 2f64.sqrt() - 1.0).abs() <= 0.05
        && w1.peak_ratio >= opts.threshold
        && wp.is_empty();
    Ok((
        ok,
        format!(
            "speed {v1:.4} (expected 1), ratio for 2 tau {:.4} (expected {:.4}), peak {:.1}x background, parabolic tracks {}",
            v1 / v2,
            2f64.sqrt(),
            w1.peak_ratio,
            wp.tracks.len()
        ),
    ))
}
