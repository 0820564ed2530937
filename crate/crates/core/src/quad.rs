//! Adaptive Gauss-Legendre quadrature.
//!
//! Panels use a 16-node rule whose nodes and weights are generated at run
//! time by Newton iteration on the Legendre recurrence, so there are no
//! typed-in tables to get wrong. Adaptivity is worst-segment-first
//! bisection with a per-segment depth cap.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Tolerances and budget for every numerical integral in the toolkit.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of a single segment.
    pub max_refinement: u32,
    /// Seed for quasi-random sampling paths.
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_refinement: 20,
            seed: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Value plus an absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

const PANEL_NODES: usize = 16;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = libm::cos(math::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if math::fabs(dx) < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
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

/// One 16-node panel over `[a, b]`.
fn panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let (nodes, weights) = gauss_legendre(PANEL_NODES);
    let eval = |f: &mut F, a: f64, b: f64| -> (f64, f64) {
        let coarse = panel(f, a, b, &nodes, &weights);
        let mid = 0.5 * (a + b);
        let fine = panel(f, a, mid, &nodes, &weights) + panel(f, mid, b, &nodes, &weights);
        (fine, math::fabs(fine - coarse))
    };

    let (v, e) = eval(&mut f, a, b);
    let mut segments = alloc::vec![Segment {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    }];

    let max_iter = 20_000usize;
    for _ in 0..max_iter {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * math::fabs(total));
        if total_err <= tol {
            return Ok(Estimate {
                value: total,
                abs_error: total_err,
            });
        }
        // split the worst refinable segment
        let mut worst: Option<usize> = None;
        let mut worst_err = 0.0;
        for (i, s) in segments.iter().enumerate() {
            if s.depth < spec.max_refinement && s.error > worst_err {
                worst_err = s.error;
                worst = Some(i);
            }
        }
        let Some(idx) = worst else {
            return Err(Error::QuadratureFailure {
                achieved: total_err,
                requested: tol,
            });
        };
        let seg = segments.swap_remove(idx);
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (v, e) = eval(&mut f, lo, hi);
            segments.push(Segment {
                a: lo,
                b: hi,
                value: v,
                error: e,
                depth: seg.depth + 1,
            });
        }
    }

    let total: f64 = segments.iter().map(|s| s.value).sum();
    let total_err: f64 = segments.iter().map(|s| s.error).sum();
    let tol = spec.abs_tol.max(spec.rel_tol * math::fabs(total));
    if total_err <= tol {
        Ok(Estimate {
            value: total,
            abs_error: total_err,
        })
    } else {
        Err(Error::QuadratureFailure {
            achieved: total_err,
            requested: tol,
        })
    }
}

/// Integral `int_lo^hi g(r) dr` computed in the log variable `r = 2^u`,
/// which turns a dyadic singularity at the origin into a uniform grid.
///
/// `head_rate`/`tail_rate` are the local power-law rates of `g` near the
/// endpoints (g ~ r^head_rate near lo when lo is effectively 0, g ~
/// r^tail_rate near hi when hi is effectively infinite); they set how far
/// the log-domain truncation must reach so the discarded mass is below
/// tolerance. Callers with symbolic integrands pass the exact exponents.
pub fn integrate_radial<F: FnMut(f64) -> f64>(
    mut g: F,
    lo: f64,
    hi: f64,
    head_rate: Option<f64>,
    tail_rate: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    debug_assert!(lo >= 0.0 && hi > lo);
    let tol_exp = math::log2(spec.rel_tol.min(1e-6)) - 4.0; // extra margin
                                                            // stay within f64 range: 2^{+-1020} is representable, 2^{1024} is not
    let u_lo = if lo > 0.0 {
        math::log2(lo)
    } else {
        // g ~ r^h, so the mass below 2^u scales like 2^{u (h+1)}; pick u with
        // 2^{u (h+1)} <= tol. h + 1 > 0 is the caller's integrability claim.
        let h = head_rate.unwrap_or(0.0);
        let rate = (h + 1.0).max(1e-3);
        (tol_exp / rate).clamp(-1020.0, -8.0)
    };
    let u_hi = if hi.is_finite() {
        math::log2(hi)
    } else {
        let t = tail_rate.unwrap_or(-2.0);
        let rate = (-(t + 1.0)).max(1e-3);
        (-tol_exp / rate).clamp(8.0, 1020.0)
    };
    let transformed = |u: f64| -> f64 {
        let r = math::exp2(u);
        let v = g(r) * r * math::LN_2;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(transformed, u_lo, u_hi, spec)
}
