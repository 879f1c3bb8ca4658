use std::fs;
use std::io::Write;
use std::path::Path;

use ablation_heat::fd_oracle::{self, detect_wavefront, richardson, FrontDetection, Grid, Recording, Scheme};
use ablation_heat::finite_spectral::{shell_steady_state, SeriesControl, ShellSeries};
use ablation_heat::infinite_parabolic::{self, ParabolicMode};
use ablation_heat::specfun::{self, Sign};
use ablation_heat::{
    derive_params, infinite_hyperbolic, DerivedParams, Equation, Model, PhysicalParams, QuadratureControl, Sample,
    SpecfunValue, TemperatureProfile,
};

use crate::args::*;
use crate::output::{num, open, write_profile};
use crate::sampling;
use crate::{CliError, CliResult};

pub fn load_params(a: &ParamArgs) -> CliResult<PhysicalParams> {
    let mut p = PhysicalParams::default();
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        p.apply_config(&text)?;
    }
    for item in &a.overrides {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("--set expects KEY=VALUE, got `{item}`")))?;
        p.set(k.trim(), v).map_err(CliError::Invalid)?;
    }
    p.validate()?;
    Ok(p)
}

fn model_of(m: ModelArg) -> Model {
    match m {
        ModelArg::ParabolicInfinite => Model::ParabolicInfinite,
        ModelArg::HyperbolicInfinite => Model::HyperbolicInfinite,
        ModelArg::ParabolicFinite => Model::ParabolicFinite,
        ModelArg::HyperbolicFinite => Model::HyperbolicFinite,
        ModelArg::OracleParabolic => Model::OracleParabolic,
        ModelArg::OracleHyperbolic => Model::OracleHyperbolic,
    }
}

fn equation_of(e: EquationArg) -> Equation {
    match e {
        EquationArg::Parabolic => Equation::Parabolic,
        EquationArg::Hyperbolic => Equation::Hyperbolic,
    }
}

fn series_model(eq: Equation) -> Model {
    match eq {
        Equation::Parabolic => Model::ParabolicFinite,
        Equation::Hyperbolic => Model::HyperbolicFinite,
    }
}

pub fn params(c: &ParamsCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    let dp = derive_params(&p)?;
    if c.dump {
        let text = p.to_config();
        match &c.out.output {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        return Ok(());
    }
    let mut w = open(c.out.output.as_deref())?;
    w.write_record(["quantity", "value"])?;
    let rows = [
        ("a", dp.a),
        ("beta", dp.beta),
        ("b", dp.b),
        ("eps", dp.eps),
        ("k0", dp.k0),
        ("d", dp.d),
        ("wave_speed", dp.wave_speed),
        ("rise_scale", dp.rise_scale(&p)),
    ];
    for (name, v) in rows {
        w.write_record([name, &num(v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn steady(c: &SteadyCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    let dp = derive_params(&p)?;
    let model = c.model.map(model_of).unwrap_or(if p.r1.is_some() {
        Model::ParabolicFinite
    } else {
        Model::ParabolicInfinite
    });
    let finite = model.is_finite();
    let radii = sampling::radii(&c.radii, &p, finite)?;
    let pu = p.unbounded();
    let prof = TemperatureProfile::evaluate(model, &[f64::INFINITY], &radii, dp, |_, r| {
        if finite {
            shell_steady_state(r, &p, &dp)
        } else {
            infinite_parabolic::steady_state(r, &dp, &pu)
        }
    })?;
    write_profile(&mut open(c.out.output.as_deref())?, &prof)
}

fn series_profile(
    p: &PhysicalParams,
    dp: &DerivedParams,
    eq: Equation,
    n_max: usize,
    times: &[f64],
    radii: &[f64],
) -> CliResult<TemperatureProfile> {
    let s = ShellSeries::new(p, dp, eq, &SeriesControl::with_n_max(n_max))?;
    Ok(TemperatureProfile::evaluate(series_model(eq), times, radii, *dp, |t, r| {
        s.temperature(t, r).map(|v| v.value)
    })?)
}

/// Common step for every multiple of `quantum` in `times`, if one exists.
fn time_quantum(times: &[f64]) -> Option<f64> {
    let mut sorted: Vec<f64> = times.iter().copied().filter(|t| *t > 0.0).collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let first = *sorted.first()?;
    let h = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(first, f64::min);
    let aligned = sorted
        .iter()
        .all(|t| ((t / h).round() * h - t).abs() <= 1e-9 * t.max(h));
    aligned.then_some(h)
}

/// Finite-difference profile at (or, without a common time step, at the
/// steps nearest to) `times`, on every `stride`-th node.
fn fd_profile(
    p: &PhysicalParams,
    dp: &DerivedParams,
    eq: Equation,
    times: &[f64],
    o: &OracleOptions,
) -> CliResult<TemperatureProfile> {
    let t_end = times.iter().copied().fold(0.0, f64::max);
    if !(t_end > 0.0) {
        return Err(CliError::Invalid("the oracle needs a sample time > 0".into()));
    }
    let quantum = time_quantum(times);
    let g = Grid::new(p, dp, Scheme::for_equation(eq), o.nr, t_end, o.safety, quantum)?;
    let stride = o.r_stride.max(1);
    let record = |g: &Grid, stride: usize| -> CliResult<Recording> {
        Ok(match quantum {
            Some(_) => Recording::at_times(g, times, stride)?,
            None => Recording::nearest(g, times, stride)?,
        })
    };
    let coarse = fd_oracle::solve(p, dp, &g, &record(&g, stride)?)?;
    if !o.refine {
        return Ok(coarse);
    }
    if quantum.is_none() {
        return Err(CliError::Invalid(
            "--refine needs sample times that are multiples of a common step".into(),
        ));
    }
    let gf = g.refined(p, dp, o.safety, quantum)?;
    let fine = fd_oracle::solve(p, dp, &gf, &record(&gf, 2 * stride)?)?;
    Ok(richardson(&coarse, &fine, 2)?)
}

pub fn transient(c: &TransientCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    let dp = derive_params(&p)?;
    let model = model_of(c.model);
    let times = sampling::times(&c.times)?;
    let prof = match model {
        Model::ParabolicInfinite | Model::HyperbolicInfinite => {
            let pu = p.unbounded();
            let radii = sampling::radii(&c.radii, &pu, false)?;
            let qc = QuadratureControl::default();
            let mode = match c.mode {
                ModeArg::ClosedForm => ParabolicMode::SmallElectrodeClosedForm,
                ModeArg::Quadrature => ParabolicMode::FullQuadrature,
            };
            TemperatureProfile::evaluate(model, &times, &radii, dp, |t, r| {
                if model == Model::ParabolicInfinite {
                    infinite_parabolic::transient(t, r, &dp, &pu, mode)
                } else {
                    infinite_hyperbolic::transient(t, r, &dp, &pu, &qc)
                }
            })?
        }
        Model::ParabolicFinite | Model::HyperbolicFinite => {
            let radii = sampling::radii(&c.radii, &p, true)?;
            let eq = if model.is_hyperbolic() { Equation::Hyperbolic } else { Equation::Parabolic };
            series_profile(&p, &dp, eq, c.series.n_max, &times, &radii)?
        }
        Model::OracleParabolic | Model::OracleHyperbolic => {
            let eq = if model.is_hyperbolic() { Equation::Hyperbolic } else { Equation::Parabolic };
            fd_profile(&p, &dp, eq, &times, &c.oracle)?
        }
    };
    write_profile(&mut open(c.out.output.as_deref())?, &prof)
}

pub fn eigen(c: &EigenCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    let dp = derive_params(&p)?;
    let s = ShellSeries::new(&p, &dp, equation_of(c.equation), &SeriesControl::with_n_max(c.series.n_max))?;
    let mut w = open(c.out.output.as_deref())?;
    w.write_record(["n", "k_n", "norm", "c_n", "branch"])?;
    for m in &s.modes {
        w.write_record([&m.n.to_string(), &num(m.k_n), &num(m.norm), &num(m.c_n), m.branch.as_str()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn series(c: &SeriesCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    let dp = derive_params(&p)?;
    let eq = equation_of(c.equation);
    if c.decay {
        let s = ShellSeries::new(&p, &dp, eq, &SeriesControl::with_n_max(c.series.n_max))?;
        let rate = s.slowest_decay_rate()?;
        let mut w = open(c.out.output.as_deref())?;
        w.write_record(["equation", "rate", "branch"])?;
        w.write_record([eq.as_str(), &num(rate.rate), rate.branch.as_str()])?;
        w.flush()?;
        return Ok(());
    }
    let times = sampling::times(&c.times)?;
    let radii = sampling::radii(&c.radii, &p, true)?;
    let prof = series_profile(&p, &dp, eq, c.series.n_max, &times, &radii)?;
    write_profile(&mut open(c.out.output.as_deref())?, &prof)
}

/// Largest number of stored samples for front detection.
const FRONT_SAMPLE_LIMIT: usize = 40_000_000;

fn write_front(p: &PhysicalParams, dp: &DerivedParams, eq: Equation, t_end: f64, c: &OracleCmd, path: &Path) -> CliResult<()> {
    let o = &c.oracle;
    // record on the hyperbolic step of the same spacing for both equations
    let gh = Grid::new(p, dp, Scheme::ExplicitHyperbolic, o.nr, t_end, o.safety, None)?;
    let g = Grid::new(p, dp, Scheme::for_equation(eq), o.nr, t_end, o.safety, Some(gh.dt))?;
    let every = (g.nt / gh.nt).max(1);
    if (g.nt / every + 1) * g.nr > FRONT_SAMPLE_LIMIT {
        return Err(CliError::Invalid(format!(
            "front detection would store {} x {} samples; reduce --nr or the final time",
            g.nt / every + 1,
            g.nr
        )));
    }
    let prof = fd_oracle::solve(p, dp, &g, &Recording::every(&g, every, 1))?;
    let opts = FrontDetection {
        threshold: c.front_threshold,
        ..FrontDetection::default()
    };
    let front = detect_wavefront(&prof, &opts)?;
    let mut w = open(Some(path))?;
    w.write_record(["t", "r_front"])?;
    for (t, r) in &front.points {
        w.write_record([num(*t), num(*r)])?;
    }
    w.flush()?;
    if let Some(v) = front.speed {
        eprintln!(
            "front: {} points, fitted speed {:.6e} m/s (wave speed {:.6e} m/s)",
            front.points.len(),
            v,
            dp.wave_speed
        );
    } else {
        eprintln!("front: none detected");
    }
    Ok(())
}

pub fn oracle(c: &OracleCmd) -> CliResult<()> {
    let p = load_params(&c.params)?;
    p.shell_radius()?;
    let dp = derive_params(&p)?;
    let eq = equation_of(c.equation);
    let times = sampling::times(&c.times)?;
    let fd = fd_profile(&p, &dp, eq, &times, &c.oracle)?;
    if let Some(path) = &c.front {
        let t_end = fd.times().last().copied().unwrap_or(0.0);
        write_front(&p, &dp, eq, t_end, c, path)?;
    }
    if !c.comparison {
        return write_profile(&mut open(c.out.output.as_deref())?, &fd);
    }

    let par = ShellSeries::new(&p, &dp, Equation::Parabolic, &SeriesControl::with_n_max(c.series.n_max))?;
    let hyp = par.with_equation(Equation::Hyperbolic);
    let mut w = open(c.out.output.as_deref())?;
    w.write_record(["t", "r", "T_parabolic", "T_hyperbolic", "T_oracle"])?;
    let mut linf: Vec<(f64, [f64; 3])> = Vec::new();
    for (t, slice) in fd.slices() {
        let mut worst = [0.0f64; 3];
        for s in slice {
            let Sample { r, temperature, .. } = *s;
            let tp = par.temperature(t, r)?.value;
            let th = hyp.temperature(t, r)?.value;
            worst[0] = worst[0].max((tp - th).abs());
            worst[1] = worst[1].max((tp - temperature).abs());
            worst[2] = worst[2].max((th - temperature).abs());
            w.write_record([num(t), num(r), num(tp), num(th), num(temperature)])?;
        }
        linf.push((t, worst));
    }
    w.flush()?;
    if let Some(path) = &c.linf_output {
        let mut l = open(Some(path))?;
        l.write_record(["t", "linf_parabolic_hyperbolic", "linf_parabolic_oracle", "linf_hyperbolic_oracle"])?;
        for (t, v) in linf {
            l.write_record([num(t), num(v[0]), num(v[1]), num(v[2])])?;
        }
        l.flush()?;
    }
    Ok(())
}

fn parse_f64(s: &str) -> CliResult<f64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("cannot parse `{s}` as a number")))
}

fn parse_sign(s: &str) -> CliResult<Sign> {
    match s {
        "plus" | "+" | "+1" => Ok(Sign::Plus),
        "minus" | "-" | "-1" => Ok(Sign::Minus),
        _ => Err(CliError::Invalid(format!("expected plus or minus, got `{s}`"))),
    }
}

/// Relative accuracy the closed-form approximations are validated to.
const ELEMENTARY_REL_ERROR: f64 = 1e-13;

fn elementary(v: f64) -> SpecfunValue {
    SpecfunValue::new(v, ELEMENTARY_REL_ERROR * v.abs())
}

pub fn specfun(c: &SpecfunCmd) -> CliResult<()> {
    use SpecfunName as N;
    let qc = QuadratureControl::new(c.abs_tol, c.rel_tol, c.max_subdivisions)?;
    let want = |n: usize| -> CliResult<()> {
        if c.args.len() == n {
            Ok(())
        } else {
            Err(CliError::Invalid(format!(
                "{:?} takes {n} argument(s), got {}",
                c.name,
                c.args.len()
            )))
        }
    };
    let x = |i: usize| parse_f64(&c.args[i]);
    let value = match c.name {
        N::Dawson | N::DawsonDerivative | N::Si | N::Ci | N::Kummer => {
            want(1)?;
            let v = x(0)?;
            match c.name {
                N::Dawson => elementary(specfun::dawson(v)),
                N::DawsonDerivative => elementary(specfun::dawson_derivative(v)),
                N::Si => elementary(specfun::sine_integral(v)),
                N::Ci => elementary(specfun::cosine_integral(v)?),
                _ => elementary(specfun::conf_hyp_m_1_32(v)),
            }
        }
        N::S1 | N::S1Ds | N::S2 | N::S2Ds => {
            want(2)?;
            let (s, u) = (x(0)?, x(1)?);
            match c.name {
                N::S1 => specfun::s1(s, u, &qc)?,
                N::S1Ds => specfun::s1_ds(s, u, &qc)?,
                N::S2 => specfun::s2(s, u, &qc)?,
                _ => specfun::s2_ds(s, u, &qc)?,
            }
        }
        N::I1 | N::J2 | N::J2Ds => {
            want(3)?;
            let sign = parse_sign(&c.args[0])?;
            let (s, u) = (x(1)?, x(2)?);
            match c.name {
                N::I1 => specfun::i1_kernel(sign, s, u, &qc)?,
                N::J2 => specfun::j2(sign, s, u, &qc)?,
                _ => specfun::j2_ds(sign, s, u, &qc)?,
            }
        }
    };
    let mut w = open(c.out.output.as_deref())?;
    w.write_record(["value", "est_error"])?;
    w.write_record([num(value.value), num(value.est_error)])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_detection() {
        assert_eq!(time_quantum(&[0.0, 100.0, 400.0, 2000.0]), Some(100.0));
        assert_eq!(time_quantum(&[0.0, 1.5, 3.0]), Some(1.5));
        assert_eq!(time_quantum(&[1.0, 2.5]), None);
        assert_eq!(time_quantum(&[0.0]), None);
    }
}
