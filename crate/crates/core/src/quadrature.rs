//! Composite Gauss–Legendre quadrature with panels graded toward a peak.

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Hard cap on panels per side before reporting non-convergence.
const MAX_PANELS_PER_SIDE: usize = 1 << 13;

/// Rule order, starting panel count and relative tolerance of a
/// panel-doubling quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    nodes: usize,
    panels: usize,
    tolerance: T,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(nodes: usize, panels: usize, tolerance: T) -> Result<Self> {
        if nodes < 8 {
            return domain("nodes", nodes as f64, ">= 8");
        }
        if panels == 0 {
            return domain("panels", 0.0, ">= 1");
        }
        if !(tolerance > T::zero()) || !tolerance.is_finite() {
            return domain("tolerance", tolerance.as_f64(), "finite and > 0");
        }
        Ok(Self {
            nodes,
            panels,
            tolerance,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }
}

impl<T: Real> Default for QuadratureSpec<T> {
    /// 20-point rule, 2 panels per side, tolerance `1e-13` (or `64 ε`).
    fn default() -> Self {
        Self {
            nodes: 20,
            panels: 2,
            tolerance: T::lit(1e-13).max(T::epsilon() * T::lit(64.0)),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Computes the `n`-point rule by Newton iteration on `P_n` in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        let mut sum = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum = sum + *w * f(mid + half * *x);
        }
        sum * half
    }

    /// `(∫ f, ∫ |f|)` over consecutive breakpoints.
    pub fn integrate_composite<F: FnMut(T) -> T>(&self, breaks: &[T], mut f: F) -> (T, T) {
        let mut total = T::zero();
        let mut total_abs = T::zero();
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let half = (b - a) / T::lit(2.0);
            let mid = (b + a) / T::lit(2.0);
            let mut sum = T::zero();
            let mut sum_abs = T::zero();
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let v = f(mid + half * *x);
                sum = sum + *w * v;
                sum_abs = sum_abs + *w * v.abs();
            }
            total = total + sum * half;
            total_abs = total_abs + sum_abs * half;
        }
        (total, total_abs)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Breakpoints on `[lo, hi]` with `panels` panels on each side of `peak`,
/// quadratically clustered toward `peak`.
pub fn graded_breakpoints<T: Real>(lo: T, peak: T, hi: T, panels: usize) -> Vec<T> {
    let peak = peak.max(lo).min(hi);
    let m = T::from_count(panels);
    let mut out = Vec::with_capacity(2 * panels + 1);
    if peak > lo {
        let len = peak - lo;
        for k in (1..=panels).rev() {
            let s = T::from_count(k) / m;
            out.push(peak - len * s * s);
        }
        out[0] = lo;
    }
    out.push(peak);
    if hi > peak {
        let len = hi - peak;
        for k in 1..=panels {
            let s = T::from_count(k) / m;
            out.push(peak + len * s * s);
        }
        *out.last_mut().expect("non-empty") = hi;
    }
    out
}

/// Integrates `f` over `[lo, hi]` on graded panels, doubling the panel
/// count until two successive estimates differ by at most
/// `tolerance · ∫|f|`.
pub fn integrate_graded<T: Real, F: FnMut(T) -> T>(
    rule: &GaussLegendre<T>,
    lo: T,
    peak: T,
    hi: T,
    spec: &QuadratureSpec<T>,
    mut f: F,
) -> Result<T> {
    let mut panels = spec.panels;
    let (mut prev, _) = rule.integrate_composite(&graded_breakpoints(lo, peak, hi, panels), &mut f);
    loop {
        panels *= 2;
        let (cur, cur_abs) =
            rule.integrate_composite(&graded_breakpoints(lo, peak, hi, panels), &mut f);
        let change = (cur - prev).abs();
        if change <= spec.tolerance * cur_abs || cur_abs == T::zero() {
            return Ok(cur);
        }
        if panels >= MAX_PANELS_PER_SIDE || !cur.is_finite() {
            return Err(Error::Convergence {
                tolerance: spec.tolerance.as_f64(),
                change: (change / cur_abs).as_f64(),
                panels,
            });
        }
        prev = cur;
    }
}
