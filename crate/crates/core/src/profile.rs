//! Sampled temperature fields and discrepancy norms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{DerivedParams, PhysicalParams};

/// Which model produced a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    ParabolicInfinite,
    HyperbolicInfinite,
    ParabolicFinite,
    HyperbolicFinite,
    OracleParabolic,
    OracleHyperbolic,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::ParabolicInfinite,
        Model::HyperbolicInfinite,
        Model::ParabolicFinite,
        Model::HyperbolicFinite,
        Model::OracleParabolic,
        Model::OracleHyperbolic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::ParabolicInfinite => "parabolic-infinite",
            Model::HyperbolicInfinite => "hyperbolic-infinite",
            Model::ParabolicFinite => "parabolic-finite",
            Model::HyperbolicFinite => "hyperbolic-finite",
            Model::OracleParabolic => "oracle-parabolic",
            Model::OracleHyperbolic => "oracle-hyperbolic",
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(
            self,
            Model::HyperbolicInfinite | Model::HyperbolicFinite | Model::OracleHyperbolic
        )
    }

    /// True for the models defined on the shell `[r0, r1]`.
    pub fn is_finite(self) -> bool {
        !matches!(self, Model::ParabolicInfinite | Model::HyperbolicInfinite)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Model::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown model `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub r: f64,
    pub temperature: f64,
}

fn by_time_then_radius(a: &Sample, b: &Sample) -> Ordering {
    a.t.total_cmp(&b.t).then(a.r.total_cmp(&b.r))
}

/// A field `T(t, r)` sampled on a set of points, sorted by `(t, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureProfile {
    pub model: Model,
    pub samples: Vec<Sample>,
    pub meta: DerivedParams,
}

impl TemperatureProfile {
    pub fn new(model: Model, mut samples: Vec<Sample>, meta: DerivedParams) -> Self {
        samples.sort_by(by_time_then_radius);
        TemperatureProfile { model, samples, meta }
    }

    /// Evaluates `f(t, r)` on the tensor grid `times x radii` in parallel.
    /// The output order does not depend on scheduling.
    pub fn evaluate<F>(model: Model, times: &[f64], radii: &[f64], meta: DerivedParams, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        let points: Vec<(f64, f64)> = times
            .iter()
            .flat_map(|&t| radii.iter().map(move |&r| (t, r)))
            .collect();
        let samples = points
            .par_iter()
            .map(|&(t, r)| {
                f(t, r).map(|temperature| Sample { t, r, temperature })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(model, samples, meta))
    }

    /// Checks that every radius lies in `[r0, r1]` (or `[r0, inf)`).
    pub fn check_radii(&self, p: &PhysicalParams) -> Result<()> {
        let r1 = p.r1.unwrap_or(f64::INFINITY);
        let tol = 1e-12 * p.r0;
        match self.samples.iter().find(|s| s.r < p.r0 - tol || s.r > r1 + tol) {
            Some(s) => Err(Error::Shape(format!("radius {} outside [{}, {}]", s.r, p.r0, r1))),
            None => Ok(()),
        }
    }

    /// Distinct sample times, ascending.
    pub fn times(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for s in &self.samples {
            if out.last() != Some(&s.t) {
                out.push(s.t);
            }
        }
        out
    }

    /// Consecutive runs of samples sharing one time, ascending in `t`.
    pub fn slices(&self) -> Vec<(f64, &[Sample])> {
        self.samples
            .chunk_by(|a, b| a.t == b.t)
            .map(|c| (c[0].t, c))
            .collect()
    }

    /// Samples at time `t` (exact match), ascending in `r`.
    pub fn slice(&self, t: f64) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.t == t)
    }

    /// Restricts the profile to the given times and radii (nearest grid
    /// points within relative tolerance `1e-9`).
    pub fn select(&self, times: &[f64], radii: &[f64]) -> Result<Self> {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
        let mut samples = Vec::with_capacity(times.len() * radii.len());
        for &t in times {
            for &r in radii {
                let s = self
                    .samples
                    .iter()
                    .find(|s| close(s.t, t) && close(s.r, r))
                    .ok_or_else(|| Error::Shape(format!("no sample at (t = {t}, r = {r})")))?;
                samples.push(Sample { t, r, temperature: s.temperature });
            }
        }
        Ok(Self::new(self.model, samples, self.meta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Linf,
    /// Root mean square over the samples.
    L2,
}

/// Discrepancy between two profiles sampled at the same `(t, r)` points.
pub fn compare(a: &TemperatureProfile, b: &TemperatureProfile, norm: Norm) -> Result<f64> {
    if a.samples.len() != b.samples.len() {
        return Err(Error::Shape(format!(
            "{} samples vs {} samples",
            a.samples.len(),
            b.samples.len()
        )));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    let mut linf: f64 = 0.0;
    let mut sq = 0.0;
    for (x, y) in a.samples.iter().zip(&b.samples) {
        if !(close(x.t, y.t) && close(x.r, y.r)) {
            return Err(Error::Shape(format!(
                "sample (t = {}, r = {}) vs (t = {}, r = {})",
                x.t, x.r, y.t, y.r
            )));
        }
        let d = (x.temperature - y.temperature).abs();
        linf = linf.max(d);
        sq += d * d;
    }
    Ok(match norm {
        Norm::Linf => linf,
        Norm::L2 if a.samples.is_empty() => 0.0,
        Norm::L2 => (sq / a.samples.len() as f64).sqrt(),
    })
}

/// Formats with 17 significant digits, e.g. `3.1000000000000000e2`.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;

    fn meta() -> DerivedParams {
        derive_params(&PhysicalParams::default()).unwrap()
    }

    fn profile(shift: f64) -> TemperatureProfile {
        TemperatureProfile::evaluate(Model::ParabolicFinite, &[1.0, 0.0], &[0.02, 0.01], meta(), |t, r| {
            Ok(300.0 + t + r + shift)
        })
        .unwrap()
    }

    #[test]
    fn sorted_by_time_then_radius() {
        let p = profile(0.0);
        let keys: Vec<(f64, f64)> = p.samples.iter().map(|s| (s.t, s.r)).collect();
        assert_eq!(keys, vec![(0.0, 0.01), (0.0, 0.02), (1.0, 0.01), (1.0, 0.02)]);
        assert_eq!(p.times(), vec![0.0, 1.0]);
    }

    #[test]
    fn identical_profiles_compare_to_zero() {
        assert_eq!(compare(&profile(0.0), &profile(0.0), Norm::Linf).unwrap(), 0.0);
        assert_eq!(compare(&profile(0.0), &profile(0.0), Norm::L2).unwrap(), 0.0);
    }

    #[test]
    fn constant_offset() {
        let d = compare(&profile(0.0), &profile(0.25), Norm::Linf).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        let d = compare(&profile(0.0), &profile(0.25), Norm::L2).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mismatched_samples() {
        let mut q = profile(0.0);
        q.samples.pop();
        assert!(matches!(compare(&profile(0.0), &q, Norm::Linf), Err(Error::Shape(_))));
        let mut q = profile(0.0);
        q.samples[0].r *= 2.0;
        assert!(matches!(compare(&profile(0.0), &q, Norm::L2), Err(Error::Shape(_))));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [310.0, 1.0 / 3.0, -2.5e-17, 6.02214076e23] {
            let s = format_sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_sig17(310.0), "3.1000000000000000e2");
    }

    #[test]
    fn model_names_round_trip() {
        for m in Model::ALL {
            assert_eq!(m.as_str().parse::<Model>().unwrap(), m);
        }
        assert!("elliptic".parse::<Model>().is_err());
    }
}
