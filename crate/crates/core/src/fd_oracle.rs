//! Explicit finite-difference solver on the shell `[r0, r1]`, used as an
//! independent check of the closed-form and series solutions.
//!
//! Both equations are marched in `y = r T`, where the radial operator is a
//! plain second derivative:
//!
//! ```text
//! parabolic:   y_t = a y_rr + beta / r^3
//! hyperbolic:  y_tt + y_t / tau = (a / tau) y_rr + d / r^3
//! ```
//!
//! `dT/dr = 0` at `r0` becomes `r0 y' = y` and is imposed through a ghost
//! node; `y(r1) = r1 T01`. The initial state is `T = T01` (and `T_t = 0`).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{DerivedParams, Equation, PhysicalParams};
use crate::profile::{Model, Sample, TemperatureProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    ExplicitParabolic,
    ExplicitHyperbolic,
}

impl Scheme {
    pub fn for_equation(eq: Equation) -> Scheme {
        match eq {
            Equation::Parabolic => Scheme::ExplicitParabolic,
            Equation::Hyperbolic => Scheme::ExplicitHyperbolic,
        }
    }
}

/// Uniform space-time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    /// Radial nodes including both boundaries.
    pub nr: usize,
    /// Number of time steps.
    pub nt: usize,
    pub dr: f64,
    pub dt: f64,
    pub scheme: Scheme,
}


impl Grid {
    /// Grid with `nr` nodes on the shell marching to `t_end` with the
    /// largest stable step times `safety` (in `(0, 1]`). If `quantum` is
    /// given, `t_end` and every multiple of `quantum` fall on a step.
    pub fn new(
        p: &PhysicalParams,
        dp: &DerivedParams,
        scheme: Scheme,
        nr: usize,
        t_end: f64,
        safety: f64,
        quantum: Option<f64>,
    ) -> Result<Grid> {
        let r1 = p.shell_radius()?;
        if nr < 3 {
            return Err(Error::InvalidParameter {
                field: "nr",
                value: nr as f64,
                reason: "needs at least 3 radial nodes",
            });
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::InvalidParameter {
                field: "t_end",
                value: t_end,
                reason: "must be finite and > 0",
            });
        }
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(Error::InvalidParameter {
                field: "safety",
                value: safety,
                reason: "must lie in (0, 1]",
            });
        }
        let dr = (r1 - p.r0) / (nr - 1) as f64;
        let dt_max = safety * Self::stable_step(scheme, dr, p.r0, dp, p.tau);
        let mut nt = (t_end / dt_max).ceil() as usize;
        if let Some(q) = quantum {
            let blocks = (t_end / q).round().max(1.0) as usize;
            nt = nt.div_ceil(blocks) * blocks;
        }
        let nt = nt.max(1);
        Ok(Grid {
            nr,
            nt,
            dr,
            dt: t_end / nt as f64,
            scheme,
        })
    }

    /// Largest stable step. The ghost node adds `2 dr / r0` to the first
    /// diagonal entry, which tightens the usual bounds `a dt / dr^2 <= 1/2`
    /// and `dt <= dr sqrt(tau / a)` slightly (Gershgorin).
    pub fn stable_step(scheme: Scheme, dr: f64, r0: f64, dp: &DerivedParams, tau: f64) -> f64 {
        let e = dr / r0;
        match scheme {
            Scheme::ExplicitParabolic => dr * dr / (dp.a * (2.0 + e)),
            Scheme::ExplicitHyperbolic => dr * (tau / dp.a).sqrt() / (1.0 + 0.5 * e).sqrt(),
        }
    }

    /// Same time span with the radial spacing halved.
    pub fn refined(&self, p: &PhysicalParams, dp: &DerivedParams, safety: f64, quantum: Option<f64>) -> Result<Grid> {
        Grid::new(p, dp, self.scheme, 2 * self.nr - 1, self.t_end(), safety, quantum)
    }

    pub fn t_end(&self) -> f64 {
        self.nt as f64 * self.dt
    }

    /// Checks the stability bound (with a relative slack of 1e-12).
    pub fn validate(&self, p: &PhysicalParams, dp: &DerivedParams) -> Result<()> {
        if self.nr < 3 || self.nt < 1 || !(self.dr > 0.0) || !(self.dt > 0.0) {
            return Err(Error::InvalidParameter {
                field: "grid",
                value: self.nr as f64,
                reason: "needs nr >= 3, nt >= 1 and positive spacings",
            });
        }
        let limit = Self::stable_step(self.scheme, self.dr, p.r0, dp, p.tau);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter {
                field: "dt",
                value: self.dt,
                reason: match self.scheme {
                    Scheme::ExplicitParabolic => "violates a dt / dr^2 <= 1 / (2 + dr / r0)",
                    Scheme::ExplicitHyperbolic => "violates the CFL bound dt <= dr sqrt(tau / a) / sqrt(1 + dr / (2 r0))",
                },
            });
        }
        Ok(())
    }

    pub fn radii(&self, r0: f64) -> Vec<f64> {
        (0..self.nr).map(|i| r0 + i as f64 * self.dr).collect()
    }
}

/// Which steps and radial nodes are stored in the output profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    /// Step indices in `0..=nt`, ascending.
    pub steps: Vec<usize>,
    /// Time stamped on each recorded step.
    pub times: Vec<f64>,
    /// Keep every `radius_stride`-th radial node (the outer node is always kept).
    pub radius_stride: usize,
}

impl Recording {
    /// Records the steps closest to `times`; fails if a time is off the
    /// grid by more than `1e-9 dt`.
    pub fn at_times(grid: &Grid, times: &[f64], radius_stride: usize) -> Result<Recording> {
        let mut steps = Vec::with_capacity(times.len());
        let mut sorted = times.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        for &t in &sorted {
            let s = (t / grid.dt).round();
            if !(s >= 0.0 && s <= grid.nt as f64) || (s * grid.dt - t).abs() > 1e-9 * grid.dt.max(t) {
                return Err(Error::Shape(format!("time {t} is not a step of the grid (dt = {})", grid.dt)));
            }
            steps.push(s as usize);
        }
        Ok(Recording {
            steps,
            times: sorted,
            radius_stride: radius_stride.max(1),
        })
    }

    /// Records the steps nearest to `times`, stamped with their own step
    /// time `step dt`.
    pub fn nearest(grid: &Grid, times: &[f64], radius_stride: usize) -> Result<Recording> {
        let mut steps = Vec::with_capacity(times.len());
        for &t in times {
            if !(t.is_finite() && t >= 0.0 && t <= grid.t_end() * (1.0 + 1e-12)) {
                return Err(Error::Shape(format!("time {t} outside [0, {}]", grid.t_end())));
            }
            steps.push(((t / grid.dt).round() as usize).min(grid.nt));
        }
        steps.sort_unstable();
        steps.dedup();
        Ok(Recording {
            times: steps.iter().map(|&s| s as f64 * grid.dt).collect(),
            steps,
            radius_stride: radius_stride.max(1),
        })
    }

    /// Records every `every`-th step.
    pub fn every(grid: &Grid, every: usize, radius_stride: usize) -> Recording {
        let steps: Vec<usize> = (0..=grid.nt).step_by(every.max(1)).collect();
        Recording {
            times: steps.iter().map(|&s| s as f64 * grid.dt).collect(),
            steps,
            radius_stride: radius_stride.max(1),
        }
    }
}

struct Setup {
    r: Vec<f64>,
    /// source term in y-space per node
    source: Vec<f64>,
    y_outer: f64,
    r0: f64,
}

fn setup(p: &PhysicalParams, grid: &Grid, coefficient: f64) -> Result<Setup> {
    let r1 = p.shell_radius()?;
    let r = grid.radii(p.r0);
    let source = r.iter().map(|&x| coefficient / (x * x * x)).collect();
    Ok(Setup {
        r,
        source,
        y_outer: r1 * p.t_ambient,
        r0: p.r0,
    })
}

/// `y[i-1] - 2 y[i] + y[i+1]` with the ghost node `y[-1] = y[1] - 2 dr y[0] / r0`.
fn second_difference(y: &[f64], out: &mut [f64], dr: f64, r0: f64) {
    let n = y.len();
    out[0] = 2.0 * y[1] - 2.0 * y[0] - 2.0 * dr * y[0] / r0;
    out[1..n - 1]
        .par_iter_mut()
        .with_min_len(4096)
        .enumerate()
        .for_each(|(j, o)| {
            let i = j + 1;
            *o = y[i - 1] - 2.0 * y[i] + y[i + 1];
        });
    out[n - 1] = 0.0;
}

struct Recorder<'a> {
    recording: &'a Recording,
    next: usize,
    samples: Vec<Sample>,
    stride: usize,
}

impl<'a> Recorder<'a> {
    fn new(recording: &'a Recording) -> Self {
        Recorder {
            recording,
            next: 0,
            samples: Vec::new(),
            stride: recording.radius_stride,
        }
    }

    fn offer(&mut self, step: usize, y: &[f64], r: &[f64]) {
        while self.next < self.recording.steps.len() && self.recording.steps[self.next] == step {
            let t = self.recording.times[self.next];
            let n = r.len();
            for i in (0..n).filter(|&i| i % self.stride == 0 || i == n - 1) {
                self.samples.push(Sample {
                    t,
                    r: r[i],
                    temperature: y[i] / r[i],
                });
            }
            self.next += 1;
        }
    }
}

/// Aborts on NaN or on a deviation from `T01` beyond ten times the
/// steady-state range `b / (2 r0^2)` (plus a small floor for `b = 0`).
fn check(step: usize, t: f64, y: &[f64], r: &[f64], p: &PhysicalParams, range: f64) -> Result<()> {
    for (i, (&yi, &ri)) in y.iter().zip(r).enumerate() {
        let dev = yi / ri - p.t_ambient;
        if !dev.is_finite() || dev.abs() > 10.0 * range + 1e-9 * p.t_ambient.abs() {
            return Err(Error::Instability {
                step,
                t,
                reason: format!("T - T01 = {dev} at node {i} (r = {ri}) exceeds 10 x {range}"),
            });
        }
    }
    Ok(())
}

/// Explicit Euler march of the parabolic equation.
pub fn solve_parabolic(p: &PhysicalParams, dp: &DerivedParams, grid: &Grid, recording: &Recording) -> Result<TemperatureProfile> {
    if grid.scheme != Scheme::ExplicitParabolic {
        return Err(Error::InvalidParameter {
            field: "scheme",
            value: 0.0,
            reason: "solve_parabolic needs an ExplicitParabolic grid",
        });
    }
    grid.validate(p, dp)?;
    let s = setup(p, grid, dp.beta)?;
    let range = dp.rise_scale(p);
    let lambda = dp.a * grid.dt / (grid.dr * grid.dr);
    let n = grid.nr;
    let mut y: Vec<f64> = s.r.iter().map(|&x| x * p.t_ambient).collect();
    let mut lap = vec![0.0; n];
    let mut rec = Recorder::new(recording);
    rec.offer(0, &y, &s.r);
    for step in 1..=grid.nt {
        second_difference(&y, &mut lap, grid.dr, s.r0);
        for i in 0..n - 1 {
            y[i] += lambda * lap[i] + grid.dt * s.source[i];
        }
        y[n - 1] = s.y_outer;
        let t = step as f64 * grid.dt;
        if step % 1024 == 0 || step == grid.nt {
            check(step, t, &y, &s.r, p, range)?;
        }
        rec.offer(step, &y, &s.r);
    }
    Ok(TemperatureProfile::new(Model::OracleParabolic, rec.samples, *dp))
}

/// Three-level central scheme for the damped wave equation; the damping
/// term uses the centred difference `(y^{n+1} - y^{n-1}) / (2 dt)`.
pub fn solve_hyperbolic(p: &PhysicalParams, dp: &DerivedParams, grid: &Grid, recording: &Recording) -> Result<TemperatureProfile> {
    if grid.scheme != Scheme::ExplicitHyperbolic {
        return Err(Error::InvalidParameter {
            field: "scheme",
            value: 1.0,
            reason: "solve_hyperbolic needs an ExplicitHyperbolic grid",
        });
    }
    grid.validate(p, dp)?;
    let s = setup(p, grid, dp.d)?;
    let range = dp.rise_scale(p);
    let nu2 = dp.a * grid.dt * grid.dt / (p.tau * grid.dr * grid.dr);
    let gamma = grid.dt / (2.0 * p.tau);
    let dt2 = grid.dt * grid.dt;
    let n = grid.nr;
    let mut prev: Vec<f64> = s.r.iter().map(|&x| x * p.t_ambient).collect();
    let mut lap = vec![0.0; n];
    let mut rec = Recorder::new(recording);
    rec.offer(0, &prev, &s.r);

    // first step from y_t(0) = 0: y^1 = y^0 + (nu^2 lap y^0 + dt^2 S) / 2
    second_difference(&prev, &mut lap, grid.dr, s.r0);
    let mut cur: Vec<f64> = (0..n)
        .map(|i| prev[i] + 0.5 * (nu2 * lap[i] + dt2 * s.source[i]))
        .collect();
    cur[n - 1] = s.y_outer;
    rec.offer(1, &cur, &s.r);

    let inv = 1.0 / (1.0 + gamma);
    for step in 2..=grid.nt {
        second_difference(&cur, &mut lap, grid.dr, s.r0);
        for i in 0..n - 1 {
            prev[i] = inv * (2.0 * cur[i] - (1.0 - gamma) * prev[i] + nu2 * lap[i] + dt2 * s.source[i]);
        }
        prev[n - 1] = s.y_outer;
        std::mem::swap(&mut prev, &mut cur);
        let t = step as f64 * grid.dt;
        if step % 1024 == 0 || step == grid.nt {
            check(step, t, &cur, &s.r, p, range)?;
        }
        rec.offer(step, &cur, &s.r);
    }
    Ok(TemperatureProfile::new(Model::OracleHyperbolic, rec.samples, *dp))
}

/// Solves with the scheme matching `equation`.
pub fn solve(p: &PhysicalParams, dp: &DerivedParams, grid: &Grid, recording: &Recording) -> Result<TemperatureProfile> {
    match grid.scheme {
        Scheme::ExplicitParabolic => solve_parabolic(p, dp, grid, recording),
        Scheme::ExplicitHyperbolic => solve_hyperbolic(p, dp, grid, recording),
    }
}

/// `fine + (fine - coarse) / (2^order - 1)` on the samples of `coarse`.
pub fn richardson(coarse: &TemperatureProfile, fine: &TemperatureProfile, order: i32) -> Result<TemperatureProfile> {
    let mut out = Vec::with_capacity(coarse.samples.len());
    let factor = 1.0 / (2f64.powi(order) - 1.0);
    let fine_slices = fine.slices();
    for (t, slice) in coarse.slices() {
        let (_, fs) = fine_slices
            .iter()
            .find(|(tf, _)| (tf - t).abs() <= 1e-9 * t.abs().max(f64::MIN_POSITIVE))
            .ok_or_else(|| Error::Shape(format!("fine profile has no slice at t = {t}")))?;
        let mut j = 0;
        for c in slice {
            while j < fs.len() && fs[j].r < c.r - 1e-9 * c.r {
                j += 1;
            }
            let g = fs
                .get(j)
                .filter(|g| (g.r - c.r).abs() <= 1e-9 * c.r)
                .ok_or_else(|| Error::Shape(format!("fine profile has no node at r = {}", c.r)))?;
            out.push(Sample {
                t,
                r: c.r,
                temperature: g.temperature + (g.temperature - c.temperature) * factor,
            });
        }
    }
    Ok(TemperatureProfile::new(fine.model, out, fine.meta))
}

/// Options of [`detect_wavefront`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontDetection {
    /// A node is a front candidate when its signal exceeds this multiple of
    /// the background median.
    pub threshold: f64,
    /// Time slices ignored at the start (start-up transient).
    pub skip_steps: usize,
    /// Half-width, in nodes, of the local background window.
    pub window: usize,
    /// Shorter tracks are discarded.
    pub min_track: usize,
}

const FRONT_CORE: usize = 2;

impl Default for FrontDetection {
    fn default() -> Self {
        FrontDetection {
            threshold: 10.0,
            skip_steps: 4,
            window: 16,
            min_track: 5,
        }
    }
}

/// Located fronts. `points` is the longest track and the straight-line fit
/// `r = intercept + speed t` refers to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefront {
    pub points: Vec<(f64, f64)>,
    /// Fitted `dr/dt` (signed); `None` with fewer than two points.
    pub speed: Option<f64>,
    pub intercept: Option<f64>,
    /// Largest signal-to-background ratio seen on the track.
    pub peak_ratio: f64,
    /// Every track, longest first.
    pub tracks: Vec<Vec<(f64, f64)>>,
}

impl Wavefront {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    *m
}

/// Locates a travelling kink of `T_t` in a profile recorded on uniform time
/// steps.
///
/// At each radius the signal is the second difference in time of the
/// discrete `T_t`, i.e. `T[j+1] - 3 T[j] + 3 T[j-1] - T[j-2]`, which is
/// `O(dt^3)` where `T` is smooth and `O(dt)` where `T_t` kinks. Each node
/// is compared with a background: the larger of the median over the whole
/// field and the median over neighbouring nodes of the same slice (the two
/// nodes either side excluded). Local maxima of the ratio above `threshold`
/// are linked from slice to slice into tracks.
pub fn detect_wavefront(profile: &TemperatureProfile, opts: &FrontDetection) -> Result<Wavefront> {
    let empty = Wavefront {
        points: Vec::new(),
        speed: None,
        intercept: None,
        peak_ratio: 0.0,
        tracks: Vec::new(),
    };
    let slices = profile.slices();
    if slices.len() < 4 {
        return Ok(empty);
    }
    let times: Vec<f64> = slices.iter().map(|s| s.0).collect();
    let radii: Vec<f64> = slices[0].1.iter().map(|s| s.r).collect();
    let nr = radii.len();
    if nr < 3 || slices.iter().any(|s| s.1.len() != nr) {
        return Err(Error::Shape("time slices need the same three or more radii".into()));
    }
    let field: Vec<Vec<f64>> = slices
        .iter()
        .map(|s| s.1.iter().map(|x| x.temperature).collect())
        .collect();
    let dt0 = times[1] - times[0];
    if times.windows(2).any(|w| ((w[1] - w[0]) - dt0).abs() > 1e-6 * dt0) {
        return Err(Error::Shape("front detection needs uniform time steps".into()));
    }

    // signal[j][i] for slices j = 2..len-1
    let signal: Vec<Vec<f64>> = (2..times.len() - 1)
        .map(|j| {
            (0..nr)
                .map(|i| (field[j + 1][i] - 3.0 * field[j][i] + 3.0 * field[j - 1][i] - field[j - 2][i]).abs())
                .collect()
        })
        .collect();
    let global = median(signal.iter().flatten().copied().collect());
    let local = |row: &[f64], i: usize| {
        let lo = i.saturating_sub(opts.window).max(1);
        let hi = (i + opts.window).min(nr - 2);
        median(
            (lo..=hi)
                .filter(|&j| j.abs_diff(i) > FRONT_CORE)
                .map(|j| row[j])
                .collect(),
        )
    };

    // candidates: local maxima of the ratio above the threshold
    let mut tracks: Vec<Track> = Vec::new();
    for (j, row) in signal.iter().enumerate().skip(opts.skip_steps) {
        let ratio: Vec<f64> = (0..nr)
            .map(|i| {
                if i == 0 || i == nr - 1 {
                    return 0.0;
                }
                let background = global.max(local(row, i));
                if background > 0.0 {
                    row[i] / background
                } else {
                    0.0
                }
            })
            .collect();
        let slice = j + 2;
        for i in 1..nr - 1 {
            let lo = i.saturating_sub(FRONT_CORE);
            let hi = (i + FRONT_CORE).min(nr - 1);
            let is_peak = (lo..=hi).all(|k| k == i || ratio[k] < ratio[i] || (ratio[k] == ratio[i] && k > i));
            if !(is_peak && ratio[i] >= opts.threshold) {
                continue;
            }
            // extend the track whose head is nearest, if it is close enough
            let near = tracks
                .iter_mut()
                .filter(|tr| slice - tr.last_slice <= MAX_GAP && tr.last_slice < slice)
                .filter(|tr| tr.last_node.abs_diff(i) <= MAX_STEP * (slice - tr.last_slice))
                .min_by_key(|tr| tr.last_node.abs_diff(i));
            match near {
                Some(tr) => tr.push(slice, i, ratio[i], &times, &radii),
                None => {
                    let mut tr = Track::default();
                    tr.push(slice, i, ratio[i], &times, &radii);
                    tracks.push(tr);
                }
            }
        }
    }
    tracks.retain(|tr| tr.points.len() >= opts.min_track);
    // longest first; ties by peak ratio
    tracks.sort_by(|x, y| {
        y.points
            .len()
            .cmp(&x.points.len())
            .then(y.peak_ratio.total_cmp(&x.peak_ratio))
    });
    let Some(main) = tracks.first() else {
        return Ok(empty);
    };
    let (speed, intercept) = match line_fit(&main.points) {
        Some((v, r)) => (Some(v), Some(r)),
        None => (None, None),
    };
    Ok(Wavefront {
        points: main.points.clone(),
        speed,
        intercept,
        peak_ratio: main.peak_ratio,
        tracks: tracks.into_iter().map(|tr| tr.points).collect(),
    })
}

/// Slices a track may skip before it is closed.
const MAX_GAP: usize = 3;
/// Nodes a front may move per slice.
const MAX_STEP: usize = 3;

#[derive(Debug, Default)]
struct Track {
    points: Vec<(f64, f64)>,
    last_slice: usize,
    last_node: usize,
    peak_ratio: f64,
}

impl Track {
    fn push(&mut self, slice: usize, node: usize, ratio: f64, times: &[f64], radii: &[f64]) {
        self.points.push((times[slice], radii[node]));
        self.last_slice = slice;
        self.last_node = node;
        self.peak_ratio = self.peak_ratio.max(ratio);
    }
}

/// Least-squares line `r = intercept + speed t`.
fn line_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mr = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let str_: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - mr)).sum();
    (stt > 0.0).then(|| {
        let v = str_ / stt;
        (v, mr - v * mt)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_spectral::shell_steady_state;
    use crate::params::derive_params;

    fn desk() -> (PhysicalParams, DerivedParams) {
        let p = PhysicalParams::default();
        (p, derive_params(&p).unwrap())
    }

    #[test]
    fn stability_bounds() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 50, 10.0, 1.0, None).unwrap();
        assert!(dp.a * g.dt / (g.dr * g.dr) <= 0.5);
        let mut bad = g;
        bad.dt *= 1.5;
        assert!(bad.validate(&p, &dp).is_err());
        let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 50, 10.0, 1.0, Some(1.0)).unwrap();
        assert!(g.dt <= g.dr * (p.tau / dp.a).sqrt());
        assert_eq!(g.nt % 10, 0);
        assert!(Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 2, 10.0, 1.0, None).is_err());
        assert!(Grid::new(&p.unbounded(), &dp, Scheme::ExplicitHyperbolic, 20, 10.0, 1.0, None).is_err());
    }

    #[test]
    fn no_source_keeps_uniform_field() {
        let (mut p, _) = desk();
        p.v0 = 0.0;
        let dp = derive_params(&p).unwrap();
        for scheme in [Scheme::ExplicitParabolic, Scheme::ExplicitHyperbolic] {
            let g = Grid::new(&p, &dp, scheme, 40, 50.0, 0.9, None).unwrap();
            let rec = Recording::every(&g, 7, 1);
            let prof = solve(&p, &dp, &g, &rec).unwrap();
            for s in &prof.samples {
                assert!((s.temperature - p.t_ambient).abs() < 1e-13 * p.t_ambient, "{scheme:?}");
            }
        }
    }

    /// Discrete steady state of the parabolic scheme (tridiagonal solve).
    fn discrete_steady(p: &PhysicalParams, dp: &DerivedParams, g: &Grid) -> Vec<f64> {
        let s = setup(p, g, dp.beta).unwrap();
        let n = g.nr;
        let h2 = g.dr * g.dr;
        // a (y[i-1] - 2 y[i] + y[i+1]) / h2 = -S[i]
        let mut lower = vec![1.0; n];
        let mut diag = vec![-2.0; n];
        let mut upper = vec![1.0; n];
        let mut rhs: Vec<f64> = s.source.iter().map(|q| -q * h2 / dp.a).collect();
        diag[0] = -2.0 - 2.0 * g.dr / s.r0;
        upper[0] = 2.0;
        lower[n - 1] = 0.0;
        diag[n - 1] = 1.0;
        rhs[n - 1] = s.y_outer;
        for i in 1..n {
            let m = lower[i] / diag[i - 1];
            diag[i] -= m * upper[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        let mut y = vec![0.0; n];
        y[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (rhs[i] - upper[i] * y[i + 1]) / diag[i];
        }
        y
    }

    #[test]
    fn steady_state_drift() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 200, 1.0, 0.9, None).unwrap();
        let s = setup(&p, &g, dp.beta).unwrap();
        let lambda = dp.a * g.dt / (g.dr * g.dr);
        let mut y = discrete_steady(&p, &dp, &g);
        let y0 = y.clone();
        let mut lap = vec![0.0; g.nr];
        for _ in 0..1000 {
            second_difference(&y, &mut lap, g.dr, s.r0);
            for i in 0..g.nr - 1 {
                y[i] += lambda * lap[i] + g.dt * s.source[i];
            }
        }
        let drift = y
            .iter()
            .zip(&y0)
            .zip(&s.r)
            .map(|((a, b), r)| ((a - b) / r).abs())
            .fold(0.0, f64::max);
        assert!(drift <= 1e-8 * dp.rise_scale(&p), "{drift}");
        // and the discrete steady state approximates the exact one
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 2000, 1.0, 0.9, None).unwrap();
        let y0 = discrete_steady(&p, &dp, &g);
        let worst = y0
            .iter()
            .zip(&g.radii(p.r0))
            .map(|(y, &r)| (y / r - shell_steady_state(r, &p, &dp).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-2 * dp.rise_scale(&p), "{worst}");
    }

    #[test]
    fn maximum_principle() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 100, 200.0, 1.0, None).unwrap();
        let prof = solve_parabolic(&p, &dp, &g, &Recording::every(&g, 50, 1)).unwrap();
        assert!(prof.samples.iter().all(|s| s.temperature >= p.t_ambient - 1e-12));
    }

    #[test]
    fn deterministic() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 60, 20.0, 1.0, None).unwrap();
        let rec = Recording::every(&g, 3, 2);
        let a = solve_hyperbolic(&p, &dp, &g, &rec).unwrap();
        let b = solve_hyperbolic(&p, &dp, &g, &rec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn blow_up_is_reported() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitParabolic, 60, 20.0, 1.0, None).unwrap();
        let g = Grid { dt: g.dt * 3.0, ..g };
        assert!(solve_parabolic(&p, &dp, &g, &Recording::every(&g, 1, 1)).is_err());
        let r = check(1, 0.1, &[1.0, f64::NAN], &[1.0, 2.0], &p, 1.0);
        assert!(matches!(r, Err(Error::Instability { .. })));
    }

    #[test]
    fn recording_snaps_to_steps() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 30, 100.0, 1.0, Some(10.0)).unwrap();
        let rec = Recording::at_times(&g, &[10.0, 50.0, 100.0], 1).unwrap();
        assert_eq!(rec.steps.len(), 3);
        assert!(Recording::at_times(&g, &[10.0 + 0.3 * g.dt], 1).is_err());
    }

    #[test]
    fn richardson_of_identical_profiles() {
        let (p, dp) = desk();
        let g = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, 30, 10.0, 1.0, Some(1.0)).unwrap();
        let rec = Recording::at_times(&g, &[5.0, 10.0], 1).unwrap();
        let a = solve(&p, &dp, &g, &rec).unwrap();
        let e = richardson(&a, &a, 2).unwrap();
        assert_eq!(e.samples, a.samples);
    }

    /// Unit shell `[1, 5]` with `a = 1`, `beta = 1`, recorded on the
    /// hyperbolic time step for either equation.
    fn unit_run(tau: f64, eq: Equation, nr: usize) -> TemperatureProfile {
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
        let dp = derive_params(&p).unwrap();
        let gh = Grid::new(&p, &dp, Scheme::ExplicitHyperbolic, nr, 3.5, 1.0, None).unwrap();
        let g = Grid::new(&p, &dp, Scheme::for_equation(eq), nr, 3.5, 1.0, Some(gh.dt)).unwrap();
        solve(&p, &dp, &g, &Recording::every(&g, g.nt / gh.nt, 1)).unwrap()
    }

    #[test]
    fn front_speed_and_scaling() {
        let opts = FrontDetection::default();
        let w1 = detect_wavefront(&unit_run(1.0, Equation::Hyperbolic, 801), &opts).unwrap();
        let w2 = detect_wavefront(&unit_run(2.0, Equation::Hyperbolic, 801), &opts).unwrap();
        let v1 = w1.speed.unwrap().abs();
        let v2 = w2.speed.unwrap().abs();
        assert!((v1 - 1.0).abs() < 0.05, "{v1}");
        assert!((v2 - 0.5f64.sqrt()).abs() < 0.05 * 0.5f64.sqrt(), "{v2}");
        assert!((v1 / v2 / 2f64.sqrt() - 1.0).abs() < 0.05);
        assert!(w1.peak_ratio >= 10.0);
        assert!(w1.points.len() >= 20);
    }

    #[test]
    fn parabolic_run_has_no_front() {
        let w = detect_wavefront(&unit_run(1.0, Equation::Parabolic, 801), &FrontDetection::default()).unwrap();
        assert!(w.is_empty(), "{:?}", w.tracks);
    }
}
