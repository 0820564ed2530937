//! Test functions and the four norm functionals: weighted Lebesgue,
//! two-weighted central Morrey, Herz, and Morrey-Herz.
//!
//! Symbolic (radial piecewise-power) test functions against power-law
//! weights reduce every norm to the exact radial engine in [`crate::radial`],
//! so dyadic sums and suprema carry no quadrature error beyond the engine's
//! series tolerance. Opaque functions fall back to quasi-Monte-Carlo shell
//! integration with a reported standard error and a truncation warning.

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad::QuadratureSpec;
use crate::radial::{lq_weighted_integral, mul_power_sums, IntegralOutcome, PowerSum};
use crate::rng;
use crate::weights::{ball_mass, Weight};

/// Region of an indicator function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `|x| <= radius`
    Ball { radius: f64 },
    /// `r0 < |x| <= r1`
    Annulus { r0: f64, r1: f64 },
}

/// A test function on `R^n`. All symbolic kinds are radial.
#[derive(Clone)]
pub enum TestFunction {
    /// `|x|^a` on `r0 < |x| <= r1` (`r0 = 0`, `r1 = inf` for a pure power).
    PowerLaw {
        a: f64,
        r0: f64,
        r1: f64,
    },
    Indicator(Region),
    Scaled {
        c: f64,
        f: Box<TestFunction>,
    },
    Sum {
        terms: Vec<TestFunction>,
    },
    /// Arbitrary pointwise evaluator; norms become quasi-Monte-Carlo
    /// estimates.
    Opaque {
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl core::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TestFunction::PowerLaw { a, r0, r1 } => {
                write!(f, "PowerLaw{{a={a}, r0={r0}, r1={r1}}}")
            }
            TestFunction::Indicator(r) => write!(f, "Indicator({r:?})"),
            TestFunction::Scaled { c, f: inner } => write!(f, "Scaled{{c={c}, f={inner:?}}}"),
            TestFunction::Sum { terms } => write!(f, "Sum({terms:?})"),
            TestFunction::Opaque { .. } => write!(f, "Opaque"),
        }
    }
}

impl TestFunction {
    /// Pure power `|x|^a` on all of `R^n`.
    pub fn power(a: f64) -> Self {
        TestFunction::PowerLaw {
            a,
            r0: 0.0,
            r1: f64::INFINITY,
        }
    }

    /// `|x|^a` restricted to `r0 < |x| <= r1`.
    pub fn power_cut(a: f64, r0: f64, r1: f64) -> Result<Self> {
        if !(r0 >= 0.0 && r0 < r1) {
            return Err(Error::InvalidParameter(
                "cutoffs need 0 <= r0 < r1".to_string(),
            ));
        }
        Ok(TestFunction::PowerLaw { a, r0, r1 })
    }

    pub fn indicator_ball(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(
                "radius must be positive".to_string(),
            ));
        }
        Ok(TestFunction::Indicator(Region::Ball { radius }))
    }

    pub fn indicator_annulus(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 >= 0.0 && r0 < r1) {
            return Err(Error::InvalidParameter(
                "annulus needs 0 <= r0 < r1".to_string(),
            ));
        }
        Ok(TestFunction::Indicator(Region::Annulus { r0, r1 }))
    }

    pub fn scaled(c: f64, f: TestFunction) -> Self {
        TestFunction::Scaled { c, f: Box::new(f) }
    }

    pub fn sum(terms: Vec<TestFunction>) -> Self {
        TestFunction::Sum { terms }
    }

    pub fn opaque<F>(eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        TestFunction::Opaque {
            eval: Arc::new(eval),
        }
    }

    pub fn zero() -> Self {
        TestFunction::Sum { terms: Vec::new() }
    }

    /// Whether the function is symbolic (admits the exact radial reduction).
    pub fn is_symbolic(&self) -> bool {
        match self {
            TestFunction::Opaque { .. } => false,
            TestFunction::Scaled { f, .. } => f.is_symbolic(),
            TestFunction::Sum { terms } => terms.iter().all(|t| t.is_symbolic()),
            _ => true,
        }
    }

    /// Evaluate at a point of `R^n`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Opaque { eval } => eval(x),
            _ => self.eval_radius(math::euclid_norm(x)),
        }
    }

    /// Evaluate a symbolic (radial) function at radius `r`.
    /// Panics on `Opaque`.
    pub fn eval_radius(&self, r: f64) -> f64 {
        match self {
            TestFunction::PowerLaw { a, r0, r1 } => {
                if r > *r0 && r <= *r1 {
                    math::abs_pow(r, *a)
                } else {
                    0.0
                }
            }
            TestFunction::Indicator(Region::Ball { radius }) => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::Indicator(Region::Annulus { r0, r1 }) => {
                if r > *r0 && r <= *r1 {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::Scaled { c, f } => c * f.eval_radius(r),
            TestFunction::Sum { terms } => terms.iter().map(|t| t.eval_radius(r)).sum(),
            TestFunction::Opaque { .. } => panic!("eval_radius on an opaque function"),
        }
    }

    /// `x -> f(delta x)`.
    pub fn dilate(&self, delta: f64) -> Self {
        assert!(delta > 0.0);
        match self {
            TestFunction::PowerLaw { a, r0, r1 } => TestFunction::Scaled {
                c: math::pow(delta, *a),
                f: Box::new(TestFunction::PowerLaw {
                    a: *a,
                    r0: r0 / delta,
                    r1: if r1.is_finite() {
                        r1 / delta
                    } else {
                        f64::INFINITY
                    },
                }),
            },
            TestFunction::Indicator(Region::Ball { radius }) => {
                TestFunction::Indicator(Region::Ball {
                    radius: radius / delta,
                })
            }
            TestFunction::Indicator(Region::Annulus { r0, r1 }) => {
                TestFunction::Indicator(Region::Annulus {
                    r0: r0 / delta,
                    r1: r1 / delta,
                })
            }
            TestFunction::Scaled { c, f } => TestFunction::Scaled {
                c: *c,
                f: Box::new(f.dilate(delta)),
            },
            TestFunction::Sum { terms } => TestFunction::Sum {
                terms: terms.iter().map(|t| t.dilate(delta)).collect(),
            },
            TestFunction::Opaque { eval } => {
                let eval = eval.clone();
                TestFunction::Opaque {
                    eval: Arc::new(move |x: &[f64]| {
                        let scaled: Vec<f64> = x.iter().map(|v| v * delta).collect();
                        eval(&scaled)
                    }),
                }
            }
        }
    }

    /// Leaf terms `(coeff, exponent, lo, hi)` of a symbolic function.
    fn leaves(&self, coeff: f64, out: &mut Vec<(f64, f64, f64, f64)>) -> bool {
        match self {
            TestFunction::PowerLaw { a, r0, r1 } => {
                out.push((coeff, *a, *r0, *r1));
                true
            }
            TestFunction::Indicator(Region::Ball { radius }) => {
                out.push((coeff, 0.0, 0.0, *radius));
                true
            }
            TestFunction::Indicator(Region::Annulus { r0, r1 }) => {
                out.push((coeff, 0.0, *r0, *r1));
                true
            }
            TestFunction::Scaled { c, f } => f.leaves(coeff * c, out),
            TestFunction::Sum { terms } => terms.iter().all(|t| t.leaves(coeff, out)),
            TestFunction::Opaque { .. } => false,
        }
    }

    /// The exact radial piecewise-power form, or `None` for opaque kinds.
    pub fn radial_pieces(&self) -> Option<Vec<RadialPiece>> {
        let mut leaves = Vec::new();
        if !self.leaves(1.0, &mut leaves) {
            return None;
        }
        let mut cuts: Vec<f64> = alloc::vec![0.0];
        for (_, _, lo, hi) in &leaves {
            if *lo > 0.0 {
                cuts.push(*lo);
            }
            if hi.is_finite() {
                cuts.push(*hi);
            }
        }
        cuts.push(f64::INFINITY);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let probe = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * lo + 1.0
            };
            let mut sum = PowerSum::zero();
            for (c, a, l, h) in &leaves {
                if probe > *l && probe <= *h {
                    sum.push(*c, *a);
                }
            }
            sum.normalize();
            if !sum.is_zero() {
                pieces.push(RadialPiece { lo, hi, sum });
            }
        }
        Some(pieces)
    }

    /// Exact pointwise product of symbolic functions, as a symbolic
    /// function. Returns `None` if any factor is opaque.
    pub fn pointwise_product(factors: &[TestFunction]) -> Option<TestFunction> {
        let mut piece_sets = Vec::with_capacity(factors.len());
        for f in factors {
            piece_sets.push(f.radial_pieces()?);
        }
        let mut cuts: Vec<f64> = alloc::vec![0.0, f64::INFINITY];
        for set in &piece_sets {
            for p in set {
                cuts.push(p.lo);
                if p.hi.is_finite() {
                    cuts.push(p.hi);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut terms = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let probe = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * lo + 1.0
            };
            let mut prod = PowerSum::single(1.0, 0.0);
            let mut alive = true;
            for set in &piece_sets {
                match set.iter().find(|p| probe > p.lo && probe <= p.hi) {
                    Some(p) => prod = mul_power_sums(&prod, &p.sum),
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if !alive || prod.is_zero() {
                continue;
            }
            for t in &prod.terms {
                terms.push(TestFunction::Scaled {
                    c: t.coeff,
                    f: Box::new(TestFunction::PowerLaw {
                        a: t.exponent,
                        r0: lo,
                        r1: hi,
                    }),
                });
            }
        }
        Some(TestFunction::Sum { terms })
    }
}

/// One maximal interval on which a symbolic function is a fixed power sum.
#[derive(Debug, Clone)]
pub struct RadialPiece {
    pub lo: f64,
    pub hi: f64,
    pub sum: PowerSum,
}

/// Which space a norm is taken in, with its parameters.
#[derive(Debug, Clone)]
pub enum SpaceSpec {
    Lebesgue {
        q: f64,
        omega: Weight,
    },
    CentralMorrey {
        q: f64,
        lambda: f64,
        v: Weight,
        omega: Weight,
    },
    Herz {
        alpha: f64,
        p: f64,
        q: f64,
        v: Weight,
        omega: Weight,
    },
    MorreyHerz {
        alpha: f64,
        lambda: f64,
        p: f64,
        q: f64,
        v: Weight,
        omega: Weight,
    },
}

impl SpaceSpec {
    pub fn validate(&self) -> Result<()> {
        let q = self.q();
        if !(q >= 1.0) {
            return Err(Error::InvalidParameter("q must be >= 1".to_string()));
        }
        match self {
            SpaceSpec::Lebesgue { .. } => {}
            SpaceSpec::CentralMorrey { q, lambda, .. } => {
                if !(1.0 + lambda * q > 0.0) {
                    return Err(Error::InvalidParameter(
                        "central Morrey requires 1 + lambda*q > 0".to_string(),
                    ));
                }
            }
            SpaceSpec::Herz { p, .. } => {
                if !(*p > 0.0) {
                    return Err(Error::InvalidParameter("Herz requires p > 0".to_string()));
                }
            }
            SpaceSpec::MorreyHerz { p, lambda, .. } => {
                if !(*p > 0.0) {
                    return Err(Error::InvalidParameter(
                        "Morrey-Herz requires p > 0".to_string(),
                    ));
                }
                if !(*lambda >= 0.0) {
                    return Err(Error::InvalidParameter(
                        "Morrey-Herz requires lambda >= 0".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> f64 {
        match self {
            SpaceSpec::Lebesgue { q, .. }
            | SpaceSpec::CentralMorrey { q, .. }
            | SpaceSpec::Herz { q, .. }
            | SpaceSpec::MorreyHerz { q, .. } => *q,
        }
    }

    pub fn omega(&self) -> &Weight {
        match self {
            SpaceSpec::Lebesgue { omega, .. }
            | SpaceSpec::CentralMorrey { omega, .. }
            | SpaceSpec::Herz { omega, .. }
            | SpaceSpec::MorreyHerz { omega, .. } => omega,
        }
    }

    pub fn dim(&self) -> usize {
        self.omega().dim()
    }

    /// The Herz definition in the source material assumes `1 < q`; `q = 1`
    /// is accepted here but flagged as outside that stated range.
    pub fn outside_stated_q_range(&self) -> bool {
        matches!(self, SpaceSpec::Herz { .. } | SpaceSpec::MorreyHerz { .. }) && self.q() == 1.0
    }
}

/// Dyadic truncation and supremum grids.
#[derive(Debug, Clone)]
pub struct DyadicRange {
    pub k_min: i32,
    pub k_max: i32,
    /// Radii for central Morrey suprema.
    pub r_grid: Vec<f64>,
    /// Truncation indices for Morrey-Herz suprema.
    pub k0_grid: Vec<i32>,
}

impl DyadicRange {
    pub fn new(k_min: i32, k_max: i32, r_grid: Vec<f64>, k0_grid: Vec<i32>) -> Result<Self> {
        if k_min >= k_max {
            return Err(Error::InvalidParameter(
                "k_min < k_max required".to_string(),
            ));
        }
        if k_min < -1020 || k_max > 1020 {
            // 2^k must stay inside the f64 range
            return Err(Error::InvalidParameter(
                "shell indices must lie in [-1020, 1020]".to_string(),
            ));
        }
        if r_grid.is_empty() || k0_grid.is_empty() {
            return Err(Error::InvalidParameter(
                "grids must be nonempty".to_string(),
            ));
        }
        Ok(Self {
            k_min,
            k_max,
            r_grid,
            k0_grid,
        })
    }

    /// Shells `[-40, 40]`, `R` in `2^{-30} .. 2^{30}` (61 points), `k0` in
    /// `[-30, 30]`.
    pub fn standard() -> Self {
        Self::with_shells(-40, 40)
    }

    /// A range with the given shell bounds; the Morrey and Morrey-Herz grids
    /// stay inside the shell range by a margin of 10 shells.
    pub fn with_shells(k_min: i32, k_max: i32) -> Self {
        let r_lo = (k_min + 10).min(-1);
        let r_hi = (k_max - 10).max(1);
        let r_grid = (r_lo..=r_hi).map(|k| math::exp2(k as f64)).collect();
        let k0_grid = (r_lo..=r_hi).collect();
        Self {
            k_min,
            k_max,
            r_grid,
            k0_grid,
        }
    }
}

impl Default for DyadicRange {
    fn default() -> Self {
        Self::standard()
    }
}

/// A computed norm with its uncertainty metadata.
#[derive(Debug, Clone, Copy)]
pub struct NormValue {
    pub value: f64,
    /// Standard error of quasi-Monte-Carlo paths; `0` on exact paths.
    pub std_error: f64,
    /// Set when a truncated sum had no symbolic tail test (opaque inputs).
    pub truncation_warning: bool,
}

impl NormValue {
    fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            truncation_warning: false,
        }
    }
}

/// A norm that may diverge for analytic reasons.
#[derive(Debug, Clone, Copy)]
pub enum NormOutcome {
    Finite(NormValue),
    Divergent,
}

impl NormOutcome {
    pub fn finite(self) -> Option<NormValue> {
        match self {
            NormOutcome::Finite(v) => Some(v),
            NormOutcome::Divergent => None,
        }
    }

    pub fn value(self) -> Option<f64> {
        self.finite().map(|v| v.value)
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, NormOutcome::Divergent)
    }
}

/// `int_{r_lo < |x| <= r_hi} |f|^q omega dx` for a symbolic `f` and a
/// power-law weight, via the exact radial engine.
fn symbolic_shell_integral(
    pieces: &[RadialPiece],
    q: f64,
    gamma: f64,
    n: usize,
    r_lo: f64,
    r_hi: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    let sphere = math::unit_sphere_area(n);
    let w = gamma + n as f64 - 1.0;
    let mut total = 0.0;
    for p in pieces {
        let lo = p.lo.max(r_lo);
        let hi = p.hi.min(r_hi);
        if lo >= hi {
            continue;
        }
        match lq_weighted_integral(&p.sum, q, w, lo, hi, spec)? {
            IntegralOutcome::Finite(v) => total += sphere * v,
            IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
        }
    }
    Ok(IntegralOutcome::Finite(total))
}

/// Quasi-Monte-Carlo `int_{r_lo < |x| <= r_hi} |f|^q omega dx` for opaque
/// inputs: `(value, std_error)`.
fn sampled_shell_integral(
    f: &TestFunction,
    q: f64,
    omega: &Weight,
    n: usize,
    r_lo: f64,
    r_hi: f64,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let nf = n as f64;
    let vol = math::unit_ball_volume(n) * (math::pow(r_hi, nf) - math::pow(r_lo, nf));
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut u = [0.0f64; 8];
    let mut prng = rng::SplitMix64::new(seed ^ 0x0511_0e11);
    for i in 0..samples {
        rng::halton_point(i, (n + 1).min(8), &mut u);
        let radius = math::pow(
            math::pow(r_lo, nf) + u[n.min(7)] * (math::pow(r_hi, nf) - math::pow(r_lo, nf)),
            1.0 / nf,
        );
        let dir = rng::sphere_direction(&u[..n], n, &mut prng);
        let x: Vec<f64> = dir.iter().map(|d| d * radius).collect();
        let v = math::pow(math::fabs(f.eval(&x)), q) * omega.eval(&x);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    (vol * mean, vol * math::sqrt(var / samples as f64))
}

/// `(int_{C_k} |f|^q omega dx)^{1/q}`, the annulus norm over
/// `C_k = {2^{k-1} < |x| <= 2^k}`.
pub fn annulus_norm(
    f: &TestFunction,
    k: i32,
    q: f64,
    omega: &Weight,
    spec: &QuadratureSpec,
) -> Result<NormValue> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter("q must be >= 1".to_string()));
    }
    let n = omega.dim();
    let r_lo = math::exp2(k as f64 - 1.0);
    let r_hi = math::exp2(k as f64);
    match (f.radial_pieces(), omega.power_exponent()) {
        (Some(pieces), Some(gamma)) => {
            match symbolic_shell_integral(&pieces, q, gamma, n, r_lo, r_hi, spec)? {
                IntegralOutcome::Finite(v) => Ok(NormValue::exact(math::pow(v, 1.0 / q))),
                // annuli exclude both 0 and infinity, so symbolic integrands
                // cannot actually diverge here
                IntegralOutcome::Divergent => Err(Error::DivergentNorm),
            }
        }
        _ => {
            let (v, se) = sampled_shell_integral(f, q, omega, n, r_lo, r_hi, 4096, spec.seed);
            let value = math::pow(v, 1.0 / q);
            let std_error = if v > 0.0 { value * se / (q * v) } else { se };
            Ok(NormValue {
                value,
                std_error,
                truncation_warning: false,
            })
        }
    }
}

/// Shell terms `t_k = v(B_k)^{alpha p / n} || f chi_k ||_{L^q_omega}^p` for
/// `k` in the range, shared by the Herz and Morrey-Herz paths.
fn herz_terms(
    f: &TestFunction,
    alpha: f64,
    p: f64,
    q: f64,
    v: &Weight,
    omega: &Weight,
    range: &DyadicRange,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, f64, bool)> {
    let n = v.dim();
    let mut terms = Vec::with_capacity((range.k_max - range.k_min + 1) as usize);
    let mut se_sq = 0.0;
    let warn = !f.is_symbolic();
    for k in range.k_min..=range.k_max {
        let nv = annulus_norm(f, k, q, omega, spec)?;
        let vb = ball_mass(v, &alloc::vec![0.0; n], math::exp2(k as f64), spec)?;
        let factor = math::pow(vb, alpha * p / n as f64);
        let t = factor * math::pow(nv.value, p);
        let dse = if nv.value > 0.0 {
            p * factor * math::pow(nv.value, p - 1.0) * nv.std_error
        } else {
            0.0
        };
        se_sq += dse * dse;
        terms.push(t);
    }
    Ok((terms, math::sqrt(se_sq), warn))
}

/// Geometric tail-decay check at the truncated ends: consecutive nonzero
/// term ratios toward each end must stay below `0.999`, else the truncated
/// sum is declared divergent. Only meaningful on symbolic paths, where the
/// terms are exact.
fn tails_converge(terms: &[f64], check_upper: bool, check_lower: bool) -> bool {
    let m = terms.len();
    if m < 2 {
        return true;
    }
    if check_upper {
        let last = terms[m - 1];
        let prev = terms[m - 2];
        if last > 0.0 && (prev == 0.0 || last / prev >= 0.999) {
            return false;
        }
    }
    if check_lower {
        let first = terms[0];
        let next = terms[1];
        if first > 0.0 && (next == 0.0 || first / next >= 0.999) {
            return false;
        }
    }
    true
}

/// The norm of `f` in the given space, by dyadic decomposition.
pub fn space_norm(
    spec: &SpaceSpec,
    f: &TestFunction,
    range: &DyadicRange,
    quad: &QuadratureSpec,
) -> Result<NormOutcome> {
    spec.validate()?;
    let n = spec.dim();
    match spec {
        SpaceSpec::Lebesgue { q, omega } => match (f.radial_pieces(), omega.power_exponent()) {
            (Some(pieces), Some(gamma)) => {
                // exact full-space integral, tails included
                match symbolic_shell_integral(&pieces, *q, gamma, n, 0.0, f64::INFINITY, quad)? {
                    IntegralOutcome::Finite(v) => {
                        Ok(NormOutcome::Finite(NormValue::exact(math::pow(v, 1.0 / q))))
                    }
                    IntegralOutcome::Divergent => Ok(NormOutcome::Divergent),
                }
            }
            _ => {
                // truncated shell summation, no tail test available
                let mut total = 0.0;
                let mut se_sq = 0.0;
                for k in range.k_min..=range.k_max {
                    let r_lo = math::exp2(k as f64 - 1.0);
                    let r_hi = math::exp2(k as f64);
                    let (v, se) =
                        sampled_shell_integral(f, *q, omega, n, r_lo, r_hi, 4096, quad.seed);
                    total += v;
                    se_sq += se * se;
                }
                Ok(NormOutcome::Finite(NormValue {
                    value: math::pow(total, 1.0 / q),
                    std_error: math::sqrt(se_sq),
                    truncation_warning: true,
                }))
            }
        },
        SpaceSpec::CentralMorrey {
            q,
            lambda,
            v,
            omega,
        } => {
            let mut best = 0.0f64;
            let mut best_se = 0.0;
            let mut warn = false;
            for &radius in &range.r_grid {
                let vb = ball_mass(v, &alloc::vec![0.0; n], radius, quad)?;
                let denom = math::pow(vb, lambda + 1.0 / q);
                let num = match (f.radial_pieces(), omega.power_exponent()) {
                    (Some(pieces), Some(gamma)) => {
                        match symbolic_shell_integral(&pieces, *q, gamma, n, 0.0, radius, quad)? {
                            IntegralOutcome::Finite(x) => NormValue::exact(math::pow(x, 1.0 / q)),
                            IntegralOutcome::Divergent => return Ok(NormOutcome::Divergent),
                        }
                    }
                    _ => {
                        warn = true;
                        let (x, se) =
                            sampled_shell_integral(f, *q, omega, n, 0.0, radius, 8192, quad.seed);
                        NormValue {
                            value: math::pow(x, 1.0 / q),
                            std_error: if x > 0.0 {
                                math::pow(x, 1.0 / q) * se / (q * x)
                            } else {
                                se
                            },
                            truncation_warning: false,
                        }
                    }
                };
                let quotient = num.value / denom;
                if quotient > best {
                    best = quotient;
                    best_se = num.std_error / denom;
                }
            }
            Ok(NormOutcome::Finite(NormValue {
                value: best,
                std_error: best_se,
                truncation_warning: warn,
            }))
        }
        SpaceSpec::Herz {
            alpha,
            p,
            q,
            v,
            omega,
        } => {
            let (terms, se, warn) = herz_terms(f, *alpha, *p, *q, v, omega, range, quad)?;
            if f.is_symbolic() && !tails_converge(&terms, true, true) {
                return Ok(NormOutcome::Divergent);
            }
            let total: f64 = terms.iter().sum();
            Ok(NormOutcome::Finite(NormValue {
                value: math::pow(total, 1.0 / p),
                std_error: if total > 0.0 {
                    math::pow(total, 1.0 / p) * se / (p * total)
                } else {
                    0.0
                },
                truncation_warning: warn,
            }))
        }
        SpaceSpec::MorreyHerz {
            alpha,
            lambda,
            p,
            q,
            v,
            omega,
        } => {
            let (terms, se, warn) = herz_terms(f, *alpha, *p, *q, v, omega, range, quad)?;
            if f.is_symbolic() && !tails_converge(&terms, false, true) {
                return Ok(NormOutcome::Divergent);
            }
            let mut best = 0.0f64;
            for &k0 in &range.k0_grid {
                if k0 < range.k_min {
                    continue;
                }
                let upto = (k0.min(range.k_max) - range.k_min) as usize;
                let partial: f64 = terms[..=upto].iter().sum();
                let vb = ball_mass(v, &alloc::vec![0.0; n], math::exp2(k0 as f64), quad)?;
                let quotient = math::pow(vb, -lambda / n as f64) * math::pow(partial, 1.0 / p);
                best = best.max(quotient);
            }
            Ok(NormOutcome::Finite(NormValue {
                value: best,
                std_error: se,
                truncation_warning: warn,
            }))
        }
    }
}
