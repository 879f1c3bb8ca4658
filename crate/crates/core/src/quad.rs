//! Adaptive Gauss-Legendre quadrature and Wynn's epsilon acceleration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Tolerances and work limit for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        QuadratureControl {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureControl {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let qc = QuadratureControl {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        qc.validate()?;
        Ok(qc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "abs_tol",
                value: self.abs_tol,
                reason: "must be > 0",
            });
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "rel_tol",
                value: self.rel_tol,
                reason: "must be > 0",
            });
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter {
                field: "max_subdivisions",
                value: self.max_subdivisions as f64,
                reason: "must be >= 1",
            });
        }
        Ok(())
    }

    /// Error target for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureControl { abs_tol, ..self }
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecfunValue {
    pub value: f64,
    pub est_error: f64,
}

impl SpecfunValue {
    pub fn new(value: f64, est_error: f64) -> Self {
        SpecfunValue {
            value,
            est_error: est_error.abs(),
        }
    }

    pub fn exact(value: f64) -> Self {
        SpecfunValue {
            value,
            est_error: 0.0,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        SpecfunValue::new(self.value * factor, self.est_error * factor.abs())
    }
}

impl std::ops::Add for SpecfunValue {
    type Output = SpecfunValue;
    fn add(self, rhs: SpecfunValue) -> SpecfunValue {
        SpecfunValue::new(self.value + rhs.value, self.est_error + rhs.est_error)
    }
}

impl std::ops::Sub for SpecfunValue {
    type Output = SpecfunValue;
    fn sub(self, rhs: SpecfunValue) -> SpecfunValue {
        SpecfunValue::new(self.value - rhs.value, self.est_error + rhs.est_error)
    }
}

const GL_ORDER: usize = 12;

struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// from Newton iteration on the three-term recurrence.
fn gauss_legendre(n: usize) -> GaussLegendre {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussLegendre { nodes, weights }
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// One fixed Gauss-Legendre panel on [a, b].
pub fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let g = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    g.nodes
        .iter()
        .zip(&g.weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Panel {
        let m = 0.5 * (a + b);
        let left = gl_panel(f, a, m);
        let right = gl_panel(f, m, b);
        let err = (left + right - whole).abs();
        Panel {
            a,
            b,
            left,
            right,
            err,
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive quadrature of `f` over `[a, b]`.
///
/// Each panel is estimated by a 12-point Gauss-Legendre rule on both
/// halves; the difference from the whole-panel rule is the error estimate.
/// The panel with the largest error is bisected until the total error is
/// below `qc.target(total)` or `qc.max_subdivisions` panels exist.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, qc: &QuadratureControl) -> Result<SpecfunValue> {
    integrate_with_breaks(f, &[a, b], qc)
}

/// As [`integrate`], starting from the panels delimited by `points`
/// (which must be non-decreasing).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    qc: &QuadratureControl,
) -> Result<SpecfunValue> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b > a {
            let whole = gl_panel(&f, a, b);
            heap.push(Panel::new(&f, a, b, whole));
        }
    }
    if heap.is_empty() {
        return Ok(SpecfunValue::exact(0.0));
    }
    let limit = qc.max_subdivisions.max(heap.len());
    loop {
        let (total, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value(), e + p.err));
        if err <= qc.target(total) {
            return Ok(SpecfunValue::new(total, err));
        }
        if heap.len() >= limit {
            return Err(Error::Accuracy {
                what: "adaptive quadrature",
                estimate: total,
                est_error: err,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            // Panel cannot be split further in floating point.
            heap.push(Panel { err: 0.0, ..worst });
            if heap.iter().all(|p| p.err == 0.0) {
                return Ok(SpecfunValue::new(total, err));
            }
            continue;
        }
        heap.push(Panel::new(&f, worst.a, m, worst.left));
        heap.push(Panel::new(&f, m, worst.b, worst.right));
    }
}

/// Result of sequence acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    pub est_error: f64,
}

/// Wynn's epsilon algorithm applied to the partial sums `sums`.
///
/// Returns the deepest even-column entry of the epsilon table and the
/// distance to the previous even-column entry as error estimate.
pub fn wynn_epsilon(sums: &[f64]) -> Extrapolation {
    let n = sums.len();
    match n {
        0 => {
            return Extrapolation {
                value: 0.0,
                est_error: f64::INFINITY,
            }
        }
        1 | 2 => {
            let last = sums[n - 1];
            let err = if n == 2 {
                (sums[1] - sums[0]).abs()
            } else {
                f64::INFINITY
            };
            return Extrapolation {
                value: last,
                est_error: err,
            };
        }
        _ => {}
    }
    // prev2 = column k-1, prev = column k (epsilon_{-1} = 0, epsilon_0 = sums)
    let mut prev2 = vec![0.0; n + 1];
    let mut prev: Vec<f64> = sums.to_vec();
    let mut best = Extrapolation {
        value: sums[n - 1],
        est_error: (sums[n - 1] - sums[n - 2]).abs(),
    };
    let mut last_even = sums[n - 1];
    let mut col = 0;
    while prev.len() > 1 {
        col += 1;
        let mut next = Vec::with_capacity(prev.len() - 1);
        for i in 0..prev.len() - 1 {
            let diff = prev[i + 1] - prev[i];
            if diff == 0.0 || !diff.is_finite() {
                // Sequence already converged at this depth.
                return best;
            }
            next.push(prev2[i + 1] + 1.0 / diff);
        }
        prev2 = prev;
        prev = next;
        if col % 2 == 0 {
            let value = *prev.last().expect("non-empty column");
            if !value.is_finite() {
                return best;
            }
            let est_error = (value - last_even).abs();
            best = Extrapolation { value, est_error };
            last_even = value;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let g = gauss_legendre(GL_ORDER);
        let s: f64 = g.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // exact for x^22
        let m: f64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(x, w)| w * x.powi(22))
            .sum();
        assert!((m - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_integrals() {
        let qc = QuadratureControl::default();
        let v = integrate(|x: f64| x.sin(), 0.0, PI, &qc).unwrap();
        assert!((v.value - 2.0).abs() < 1e-13);
        let v = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, &qc).unwrap();
        assert!((v.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let qc = QuadratureControl::default();
        let v = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &qc).unwrap();
        assert!((v.value - 2.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn subdivision_limit_reports_best_estimate() {
        let qc = QuadratureControl::new(1e-14, 1e-14, 3).unwrap();
        match integrate(|x: f64| (50.0 * x).sin() / x.sqrt(), 0.0, 10.0, &qc) {
            Err(Error::Accuracy { estimate, .. }) => assert!(estimate.is_finite()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_control() {
        assert!(QuadratureControl::new(0.0, 1e-3, 10).is_err());
        assert!(QuadratureControl::new(1e-3, 1e-3, 0).is_err());
    }

    #[test]
    fn wynn_sums_alternating_harmonic() {
        let mut sums = Vec::new();
        let mut s = 0.0;
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            sums.push(s);
        }
        let e = wynn_epsilon(&sums);
        assert!((e.value - 2f64.ln()).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn wynn_gives_abel_sum_of_grandi_like_series() {
        // 1 - 1 + 1 - ... has Abel sum 1/2
        let sums: Vec<f64> = (0..10).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let e = wynn_epsilon(&sums);
        assert!((e.value - 0.5).abs() < 1e-14, "{e:?}");
    }
}
