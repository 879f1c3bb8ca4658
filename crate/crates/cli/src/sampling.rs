//! Sample grids from the `--t*` and `--r*` flags.

use ablation_heat::PhysicalParams;

use crate::args::{RadiusArgs, Scale, TimeArgs};
use crate::{CliError, CliResult};

fn invalid(msg: String) -> CliError {
    CliError::Invalid(msg)
}

/// `count` points from `min` to `max` inclusive.
pub fn spaced(what: &str, min: f64, max: f64, count: usize, scale: Scale) -> CliResult<Vec<f64>> {
    if count < 1 {
        return Err(invalid(format!("{what}: count must be >= 1")));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(invalid(format!("{what}: bounds must be finite")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    if !(min < max) {
        return Err(invalid(format!("{what}: need min < max, got {min} and {max}")));
    }
    let last = (count - 1) as f64;
    match scale {
        Scale::Linear => Ok((0..count)
            .map(|i| if i + 1 == count { max } else { min + (max - min) * i as f64 / last })
            .collect()),
        Scale::Log => {
            if !(min > 0.0) {
                return Err(invalid(format!("{what}: log spacing needs min > 0, got {min}")));
            }
            let (l0, l1) = (min.ln(), max.ln());
            Ok((0..count)
                .map(|i| if i + 1 == count { max } else { (l0 + (l1 - l0) * i as f64 / last).exp() })
                .collect())
        }
    }
}

pub fn times(a: &TimeArgs) -> CliResult<Vec<f64>> {
    let t = if a.t.is_empty() {
        spaced("time grid", a.t_min, a.t_max, a.t_count, a.t_scale)?
    } else {
        a.t.clone()
    };
    if let Some(bad) = t.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(invalid(format!("sample time {bad} must be finite and >= 0")));
    }
    Ok(t)
}

pub fn radii(a: &RadiusArgs, p: &PhysicalParams, finite: bool) -> CliResult<Vec<f64>> {
    let r = if a.r.is_empty() {
        let min = a.r_min.unwrap_or(p.r0);
        let max = match (a.r_max, finite) {
            (Some(m), _) => m,
            (None, true) => p.shell_radius()?,
            (None, false) => 10.0 * p.r0,
        };
        spaced("radius grid", min, max, a.r_count, a.r_scale)?
    } else {
        a.r.clone()
    };
    let hi = if finite { p.shell_radius()? } else { f64::INFINITY };
    let tol = 1e-12 * p.r0;
    if let Some(bad) = r.iter().find(|r| !(r.is_finite() && **r >= p.r0 - tol && **r <= hi + tol)) {
        return Err(invalid(format!("radius {bad} outside [{}, {hi}]", p.r0)));
    }
    Ok(r)
}
