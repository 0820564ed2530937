//! Weight functions, ball masses, and Muckenhoupt machinery.
//!
//! Power-law weights `|x|^gamma` get closed-form centered ball masses and
//! fully analytic divergence decisions; everything off-center reduces to a
//! 1-D radial integral against the spherical-cap fraction. Sampled weights
//! integrate by deterministic quasi-random sampling with a reported
//! standard error and make no divergence claims.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad::{self, QuadratureSpec};
use crate::radial::{power_integral, IntegralOutcome};
use crate::rng::{self, SplitMix64};

/// A nonnegative locally integrable weight on `R^n`.
#[derive(Clone)]
pub struct Weight {
    kind: WeightKind,
    dim: usize,
}

#[derive(Clone)]
enum WeightKind {
    /// `|x|^gamma`
    PowerLaw { gamma: f64 },
    /// Arbitrary evaluator; integrals are quasi-Monte-Carlo estimates.
    Sampled {
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl core::fmt::Debug for Weight {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.kind {
            WeightKind::PowerLaw { gamma } => {
                write!(f, "Weight::power_law(gamma={}, n={})", gamma, self.dim)
            }
            WeightKind::Sampled { .. } => write!(f, "Weight::sampled(n={})", self.dim),
        }
    }
}

impl Weight {
    /// Power weight `|x|^gamma` on `R^n`. Rejects `gamma <= -n`, for which
    /// the weight is not locally integrable around the origin.
    pub fn power_law(gamma: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be positive".to_string(),
            ));
        }
        if gamma <= -(n as f64) {
            return Err(Error::InvalidParameter(
                "power weight needs gamma > -n for finite centered ball mass".to_string(),
            ));
        }
        Ok(Self {
            kind: WeightKind::PowerLaw { gamma },
            dim: n,
        })
    }

    /// Constant weight `1`.
    pub fn constant(n: usize) -> Self {
        Self::power_law(0.0, n).unwrap()
    }

    pub fn sampled<F>(n: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: WeightKind::Sampled {
                eval: Arc::new(eval),
            },
            dim: n,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The exponent of a power-law weight, if that is the kind.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            WeightKind::PowerLaw { gamma } => Some(gamma),
            WeightKind::Sampled { .. } => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            WeightKind::PowerLaw { gamma } => math::abs_pow(math::euclid_norm(x), *gamma),
            WeightKind::Sampled { eval } => eval(x),
        }
    }

    /// Mass of the centered ball `B(0, R)` for power weights, in closed form:
    /// `|S_{n-1}| R^{n+gamma} / (n+gamma)`.
    pub fn centered_ball_mass(&self, radius: f64) -> Result<f64> {
        match self.kind {
            WeightKind::PowerLaw { gamma } => {
                let n = self.dim as f64;
                Ok(math::unit_sphere_area(self.dim) * math::pow(radius, n + gamma) / (n + gamma))
            }
            WeightKind::Sampled { .. } => Err(Error::InvalidParameter(
                "centered closed form requires a power-law weight".to_string(),
            )),
        }
    }
}

/// A ball `B(center, radius)`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn centered(n: usize, radius: f64) -> Self {
        Self {
            center: alloc::vec![0.0; n],
            radius,
        }
    }

    /// Whether the closed ball contains the origin.
    pub fn contains_origin(&self) -> bool {
        math::euclid_norm(&self.center) <= self.radius
    }

    pub fn volume(&self, n: usize) -> f64 {
        math::unit_ball_volume(n) * math::pow(self.radius, n as f64)
    }
}

/// Discretization of "for all balls B in R^n".
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub balls: Vec<Ball>,
}

impl BallGrid {
    pub fn new(balls: Vec<Ball>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::InvalidParameter(
                "ball grid must be nonempty".to_string(),
            ));
        }
        for b in &balls {
            if !(b.radius > 0.0) {
                return Err(Error::InvalidParameter(
                    "ball radii must be positive".to_string(),
                ));
            }
        }
        Ok(Self { balls })
    }

    pub fn singleton(ball: Ball) -> Self {
        Self {
            balls: alloc::vec![ball],
        }
    }

    /// Default grid: centers `{0}` plus 8 seeded random off-center points,
    /// radii `2^{-20} .. 2^{20}` log-spaced (41 values).
    pub fn default_grid(n: usize, seed: u64) -> Self {
        let mut centers = alloc::vec![alloc::vec![0.0; n]];
        let mut rng = SplitMix64::new(seed ^ 0x9a11_0b1d);
        for _ in 0..8 {
            let mut c = Vec::with_capacity(n);
            for _ in 0..n {
                c.push(rng.uniform(-4.0, 4.0));
            }
            if math::euclid_norm(&c) < 0.25 {
                c[0] += 0.5;
            }
            centers.push(c);
        }
        let mut balls = Vec::new();
        for c in centers {
            for k in 0..41 {
                let r = math::exp2(-20.0 + k as f64);
                balls.push(Ball::new(c.clone(), r));
            }
        }
        Self { balls }
    }
}

/// `sup { r > 1 : omega in RH_r }`, which may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalIndex {
    Finite(f64),
    Unbounded,
}

impl CriticalIndex {
    /// Conjugate exponent `r' = r/(r-1)`; taken as `1` when the index is
    /// unbounded.
    pub fn conjugate_or_one(self) -> f64 {
        match self {
            CriticalIndex::Finite(r) => r / (r - 1.0),
            CriticalIndex::Unbounded => 1.0,
        }
    }
}

/// Parameter pack for the Muckenhoupt-weighted theorems.
#[derive(Debug, Clone, Copy)]
pub struct MuckenhouptParams {
    pub xi: f64,
    pub eta: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub r_omega: CriticalIndex,
    pub r_v: CriticalIndex,
}

impl MuckenhouptParams {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.xi >= 1.0) {
            bad.push("xi >= 1");
        }
        if !(self.eta >= 1.0) {
            bad.push("eta >= 1");
        }
        if !(self.delta1 > 1.0) {
            bad.push("delta1 > 1");
        }
        if !(self.delta2 > 1.0) {
            bad.push("delta2 > 1");
        }
        if let CriticalIndex::Finite(r) = self.r_omega {
            if !(self.delta1 < r) {
                bad.push("delta1 < r_omega");
            }
        }
        if let CriticalIndex::Finite(r) = self.r_v {
            if !(self.delta2 < r) {
                bad.push("delta2 < r_v");
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(bad.join("; ")))
        }
    }
}

/// `int_{B(center, radius)} |x|^e dx`, with analytic divergence detection:
/// divergent exactly when the closed ball contains the origin and
/// `e <= -n`.
pub fn power_ball_integral(
    e: f64,
    n: usize,
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    let nf = n as f64;
    let c = math::euclid_norm(&ball.center);
    let r = ball.radius;
    if c <= r && e <= -nf {
        return Ok(IntegralOutcome::Divergent);
    }
    if c == 0.0 {
        return Ok(IntegralOutcome::Finite(
            math::unit_sphere_area(n) * math::pow(r, nf + e) / (nf + e),
        ));
    }
    if n == 1 {
        // interval [c - r, c + r]; |x|^e integrates piecewise exactly
        let (a, b) = (ball.center[0] - r, ball.center[0] + r);
        let mut total = 0.0;
        if a < 0.0 {
            match power_integral(e, 0.0f64.max(-b), -a) {
                IntegralOutcome::Finite(x) => total += x,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            }
        }
        if b > 0.0 {
            match power_integral(e, 0.0f64.max(a), b) {
                IntegralOutcome::Finite(x) => total += x,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            }
        }
        return Ok(IntegralOutcome::Finite(total));
    }
    // n >= 2, off-center: radial decomposition around the origin against the
    // spherical cap fraction.
    let sphere = math::unit_sphere_area(n);
    let mut total = 0.0;
    let partial_lo = if c < r {
        // ball contains the origin: full spheres up to r - c
        match power_integral(e + nf - 1.0, 0.0, r - c) {
            IntegralOutcome::Finite(v) => total += sphere * v,
            IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
        }
        r - c
    } else {
        c - r
    };
    let cap = |rho: f64| -> f64 {
        let cos_theta = (rho * rho + c * c - r * r) / (2.0 * rho * c);
        sphere * cap_fraction(n, cos_theta)
    };
    let est = quad::integrate(
        |rho| math::pow(rho, e + nf - 1.0) * cap(rho),
        partial_lo,
        c + r,
        spec,
    )?;
    total += est.value;
    Ok(IntegralOutcome::Finite(total))
}

/// Fraction of the unit sphere `S_{n-1}` within polar angle `theta_0` of a
/// fixed direction, given `cos(theta_0)`.
fn cap_fraction(n: usize, cos_theta: f64) -> f64 {
    if cos_theta >= 1.0 {
        return 0.0;
    }
    if cos_theta <= -1.0 {
        return 1.0;
    }
    let theta = libm::acos(cos_theta);
    match n {
        2 => theta / math::PI,
        3 => 0.5 * (1.0 - cos_theta),
        _ => {
            // int_0^theta sin^{n-2} t dt / int_0^pi sin^{n-2} t dt
            let m = (n - 2) as f64;
            let full =
                math::sqrt(math::PI) * math::tgamma((m + 1.0) / 2.0) / math::tgamma(m / 2.0 + 1.0);
            let (nodes, wts) = quad::gauss_legendre(32);
            let mut acc = 0.0;
            let half = 0.5 * theta;
            for (x, w) in nodes.iter().zip(&wts) {
                let t = half + half * x;
                acc += w * math::pow(libm::sin(t), m);
            }
            (acc * half) / full
        }
    }
}

/// Quasi-Monte-Carlo integral of an arbitrary function over a ball, with
/// standard error.
pub fn sampled_ball_integral<F: Fn(&[f64]) -> f64>(
    f: F,
    n: usize,
    ball: &Ball,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let pts = rng::ball_sample(&ball.center, ball.radius, samples, seed);
    let vol = ball.volume(n);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for p in &pts {
        let v = f(p);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    (vol * mean, vol * math::sqrt(var / samples as f64))
}

/// `omega(B(center, radius))` -- the weighted ball mass.
///
/// Power-law weights centered at the origin use the closed form; off-center
/// power-law balls use the exact radial-cap reduction; sampled weights use
/// quasi-Monte-Carlo.
pub fn ball_mass(w: &Weight, center: &[f64], radius: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(
            "radius must be positive".to_string(),
        ));
    }
    let ball = Ball::new(center.to_vec(), radius);
    match &w.kind {
        WeightKind::PowerLaw { gamma } => match power_ball_integral(*gamma, w.dim, &ball, spec)? {
            IntegralOutcome::Finite(v) => Ok(v),
            IntegralOutcome::Divergent => Err(Error::DivergentMass),
        },
        WeightKind::Sampled { eval } => {
            let e = eval.clone();
            Ok(sampled_ball_integral(move |x| e(x), w.dim, &ball, 4096, spec.seed).0)
        }
    }
}

/// The `A_xi` quotient of a single ball:
/// `(avg_B omega) * (avg_B omega^{-1/(xi-1)})^{xi-1}` for `xi > 1`, and
/// `(avg_B omega) / essinf_B omega` for `xi = 1` (essential infimum
/// estimated from below by a 4096-point low-discrepancy sample).
pub fn ap_quotient(
    w: &Weight,
    xi: f64,
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    if !(xi >= 1.0) {
        return Err(Error::InvalidParameter("xi must be >= 1".to_string()));
    }
    let n = w.dim;
    let vol = ball.volume(n);
    if xi == 1.0 {
        let avg = ball_mass(w, &ball.center, ball.radius, spec)? / vol;
        let pts = rng::ball_sample(&ball.center, ball.radius, 4096, spec.seed);
        let mut inf = f64::INFINITY;
        for p in &pts {
            inf = inf.min(w.eval(p));
        }
        if inf <= 0.0 {
            return Ok(IntegralOutcome::Divergent);
        }
        return Ok(IntegralOutcome::Finite(avg / inf));
    }
    match &w.kind {
        WeightKind::PowerLaw { gamma } => {
            let dual_e = -gamma / (xi - 1.0);
            let primal = match power_ball_integral(*gamma, n, ball, spec)? {
                IntegralOutcome::Finite(v) => v,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            };
            let dual = match power_ball_integral(dual_e, n, ball, spec)? {
                IntegralOutcome::Finite(v) => v,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            };
            Ok(IntegralOutcome::Finite(
                (primal / vol) * math::pow(dual / vol, xi - 1.0),
            ))
        }
        WeightKind::Sampled { eval } => {
            let e1 = eval.clone();
            let (primal, _) = sampled_ball_integral(move |x| e1(x), n, ball, 4096, spec.seed);
            let e2 = eval.clone();
            let (dual, _) = sampled_ball_integral(
                move |x| math::pow(e2(x).max(1e-300), -1.0 / (xi - 1.0)),
                n,
                ball,
                4096,
                spec.seed,
            );
            Ok(IntegralOutcome::Finite(
                (primal / vol) * math::pow(dual / vol, xi - 1.0),
            ))
        }
    }
}

/// The `A_xi` characteristic over a grid: the maximum quotient, or
/// `Divergent` when the dual integral diverges on some grid ball.
pub fn ap_characteristic(
    w: &Weight,
    xi: f64,
    grid: &BallGrid,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    let mut best = 0.0f64;
    for ball in &grid.balls {
        match ap_quotient(w, xi, ball, spec)? {
            IntegralOutcome::Finite(v) => best = best.max(v),
            IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
        }
    }
    Ok(IntegralOutcome::Finite(best))
}

/// Reverse Holder quotient of a single ball:
/// `(avg_B omega^r)^{1/r} / (avg_B omega)`.
pub fn rh_quotient(
    w: &Weight,
    r: f64,
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    if !(r > 1.0) {
        return Err(Error::InvalidParameter(
            "reverse Holder order must be > 1".to_string(),
        ));
    }
    let n = w.dim;
    let vol = ball.volume(n);
    match &w.kind {
        WeightKind::PowerLaw { gamma } => {
            let mean = match power_ball_integral(*gamma, n, ball, spec)? {
                IntegralOutcome::Finite(v) => v / vol,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            };
            let r_mean = match power_ball_integral(gamma * r, n, ball, spec)? {
                IntegralOutcome::Finite(v) => v / vol,
                IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
            };
            Ok(IntegralOutcome::Finite(math::pow(r_mean, 1.0 / r) / mean))
        }
        WeightKind::Sampled { eval } => {
            let e1 = eval.clone();
            let (m1, _) = sampled_ball_integral(move |x| e1(x), n, ball, 4096, spec.seed);
            let e2 = eval.clone();
            let (mr, _) =
                sampled_ball_integral(move |x| math::pow(e2(x), r), n, ball, 4096, spec.seed);
            Ok(IntegralOutcome::Finite(
                math::pow(mr / vol, 1.0 / r) / (m1 / vol),
            ))
        }
    }
}

/// Reverse Holder constant over a grid: max quotient or `Divergent`.
pub fn rh_constant(
    w: &Weight,
    r: f64,
    grid: &BallGrid,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    let mut best = 0.0f64;
    for ball in &grid.balls {
        match rh_quotient(w, r, ball, spec)? {
            IntegralOutcome::Finite(v) => best = best.max(v),
            IntegralOutcome::Divergent => return Ok(IntegralOutcome::Divergent),
        }
    }
    Ok(IntegralOutcome::Finite(best))
}

/// Critical reverse Holder index `r_omega = sup { r > 1 : omega in RH_r }`.
///
/// Power-law weights use the analytic value (`gamma >= 0` is unbounded,
/// otherwise `n/|gamma|`). Other weights fall back to the grid scan in
/// [`critical_index_scan`].
pub fn critical_index_estimate(
    w: &Weight,
    r_grid: &[f64],
    grid: &BallGrid,
    spec: &QuadratureSpec,
) -> Result<CriticalIndex> {
    match w.kind {
        WeightKind::PowerLaw { gamma } => {
            if gamma >= 0.0 {
                Ok(CriticalIndex::Unbounded)
            } else {
                Ok(CriticalIndex::Finite(w.dim as f64 / math::fabs(gamma)))
            }
        }
        WeightKind::Sampled { .. } => critical_index_scan(w, r_grid, grid, spec),
    }
}

/// Grid-scan estimate of the critical index: the largest `r` in the grid
/// whose reverse Holder constant stays finite, refined by bisection between
/// the last finite and first divergent grid values.
///
/// For sampled weights divergence cannot be decided analytically; a
/// quotient above `1e6` is treated as a blow-up, so the result is a
/// heuristic estimate there.
pub fn critical_index_scan(
    w: &Weight,
    r_grid: &[f64],
    grid: &BallGrid,
    spec: &QuadratureSpec,
) -> Result<CriticalIndex> {
    if r_grid.is_empty() {
        return Err(Error::InvalidParameter(
            "r_grid must be nonempty".to_string(),
        ));
    }
    for pair in r_grid.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidParameter(
                "r_grid must be sorted ascending".to_string(),
            ));
        }
    }
    let finite_at = |r: f64| -> Result<bool> {
        Ok(match rh_constant(w, r, grid, spec)? {
            IntegralOutcome::Finite(v) => v.is_finite() && v < 1e6,
            IntegralOutcome::Divergent => false,
        })
    };
    let mut last_finite: Option<f64> = None;
    let mut first_divergent: Option<f64> = None;
    for &r in r_grid {
        if finite_at(r)? {
            last_finite = Some(r);
        } else {
            first_divergent = Some(r);
            break;
        }
    }
    match (last_finite, first_divergent) {
        (Some(_), None) => Ok(CriticalIndex::Unbounded),
        (None, Some(first)) => Ok(CriticalIndex::Finite(first.min(1.0 + 1e-9))),
        (Some(mut lo), Some(mut hi)) => {
            // bracketing refinement to resolution 0.05
            while hi - lo > 0.05 {
                let mid = 0.5 * (lo + hi);
                if finite_at(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(CriticalIndex::Finite(0.5 * (lo + hi)))
        }
        (None, None) => unreachable!("r_grid is nonempty"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_radial;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn ball_mass_lebesgue_cases() {
        let w1 = Weight::constant(1);
        assert!((ball_mass(&w1, &[0.0], 1.0, &spec()).unwrap() - 2.0).abs() < 1e-14);
        let w2 = Weight::constant(2);
        assert!((ball_mass(&w2, &[0.0, 0.0], 1.0, &spec()).unwrap() - math::PI).abs() < 1e-12);
    }

    #[test]
    fn ball_mass_power_weight_closed_form_and_oracle() {
        // gamma = 1, n = 1, R = 2: 2 * R^2 / 2 = 4
        let w = Weight::power_law(1.0, 1).unwrap();
        let v = ball_mass(&w, &[0.0], 2.0, &spec()).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        // independent oracle: adaptive quadrature of 2 * r over (0, 2)
        let oracle = integrate_radial(|r| 2.0 * r, 0.0, 2.0, Some(1.0), None, &spec())
            .unwrap()
            .value;
        assert!((v - oracle).abs() < 1e-9);
    }

    #[test]
    fn ball_mass_scaling_law() {
        // mass(R2)/mass(R1) = (R2/R1)^{n+gamma} on the analytic path
        let w = Weight::power_law(0.7, 2).unwrap();
        let m1 = ball_mass(&w, &[0.0, 0.0], 0.5, &spec()).unwrap();
        let m2 = ball_mass(&w, &[0.0, 0.0], 3.0, &spec()).unwrap();
        let expect = math::pow(3.0 / 0.5, 2.0 + 0.7);
        assert!(((m2 / m1) - expect).abs() / expect < 1e-10);
    }

    #[test]
    fn ball_mass_off_center_1d_exact() {
        // gamma = 1, interval (-1, 3): int |x| = 1/2 + 9/2 = 5
        let w = Weight::power_law(1.0, 1).unwrap();
        let v = ball_mass(&w, &[1.0], 2.0, &spec()).unwrap();
        assert!((v - 5.0).abs() < 1e-13, "v = {v}");
    }

    #[test]
    fn ball_mass_off_center_2d_against_sampling_oracle() {
        let ball = Ball::new(alloc::vec![0.3, -0.2], 1.0);
        let exact = match power_ball_integral(0.5, 2, &ball, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => v,
            _ => panic!("unexpected divergence"),
        };
        let (mc, se) = sampled_ball_integral(
            |x| math::pow(math::euclid_norm(x), 0.5),
            2,
            &ball,
            200_000,
            11,
        );
        assert!(
            (exact - mc).abs() < 5e-3 + 6.0 * se,
            "exact = {exact}, mc = {mc}, se = {se}"
        );
    }

    #[test]
    fn power_ball_integral_divergence_rule() {
        // e = -1.5 <= -n = -1 diverges on balls containing the origin only
        let ball = Ball::centered(1, 1.0);
        assert!(power_ball_integral(-1.5, 1, &ball, &spec())
            .unwrap()
            .is_divergent());
        let ball = Ball::new(alloc::vec![2.0], 1.0);
        assert!(!power_ball_integral(-1.5, 1, &ball, &spec())
            .unwrap()
            .is_divergent());
    }

    #[test]
    fn ap_constant_weight_is_one() {
        let w = Weight::constant(1);
        let grid = BallGrid::default_grid(1, 3);
        match ap_characteristic(&w, 2.0, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => assert!((v - 1.0).abs() < 1e-10, "v = {v}"),
            _ => panic!("divergent"),
        }
    }

    #[test]
    fn ap_sqrt_weight_on_unit_ball() {
        // (1/2 int |x|^{1/2}) * (1/2 int |x|^{-1/2}) over (-1,1) = (2/3)*2 = 4/3
        let w = Weight::power_law(0.5, 1).unwrap();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        let v = match ap_characteristic(&w, 2.0, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => v,
            _ => panic!("divergent"),
        };
        assert!((v - 4.0 / 3.0).abs() < 1e-12, "v = {v}");
        // quadrature oracle for both factors
        let primal = integrate_radial(|r| 2.0 * math::sqrt(r), 0.0, 1.0, Some(0.5), None, &spec())
            .unwrap()
            .value
            / 2.0;
        let dual = integrate_radial(|r| 2.0 / math::sqrt(r), 0.0, 1.0, Some(-0.5), None, &spec())
            .unwrap()
            .value
            / 2.0;
        assert!((v - primal * dual).abs() < 1e-8);
    }

    #[test]
    fn ap_a1_essential_infimum_path() {
        // constant weight: quotient exactly 1
        let w = Weight::constant(1);
        let ball = Ball::centered(1, 1.0);
        match ap_quotient(&w, 1.0, &ball, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => assert!((v - 1.0).abs() < 1e-9, "v = {v}"),
            _ => panic!("divergent"),
        }
        // |x|^{-1/2} on B(0,1): average 2, essential infimum 1 (attained at
        // the boundary). The sampled minimum over-estimates the infimum, so
        // the quotient estimates the true value 2 from below.
        let w = Weight::power_law(-0.5, 1).unwrap();
        match ap_quotient(&w, 1.0, &ball, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => {
                assert!(v <= 2.0 + 1e-9 && v > 1.9, "v = {v}");
            }
            _ => panic!("divergent"),
        }
    }

    #[test]
    fn ap_divergent_dual_integral() {
        // gamma = 1, xi = 2: dual exponent -1 <= -n = -1, divergent on any
        // ball containing the origin
        let w = Weight::power_law(1.0, 1).unwrap();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        assert!(ap_characteristic(&w, 2.0, &grid, &spec())
            .unwrap()
            .is_divergent());
    }

    #[test]
    fn ap_monotone_nonincreasing_in_xi() {
        let w = Weight::power_law(0.5, 1).unwrap();
        let grid = BallGrid::default_grid(1, 5);
        // |x|^{1/2} lies in A_xi exactly for xi > 3/2
        let mut prev = f64::INFINITY;
        for xi in [1.6, 2.0, 3.0, 5.0] {
            let v = match ap_characteristic(&w, xi, &grid, &spec()).unwrap() {
                IntegralOutcome::Finite(v) => v,
                _ => panic!("divergent at xi = {xi}"),
            };
            assert!(v <= prev + 1e-9, "xi = {xi}: {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn rh_constant_weight_is_one() {
        let w = Weight::constant(1);
        let grid = BallGrid::default_grid(1, 9);
        match rh_constant(&w, 2.0, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => assert!((v - 1.0).abs() < 1e-10),
            _ => panic!("divergent"),
        }
    }

    #[test]
    fn rh_gamma_one_r_two() {
        // (int x^2 / 2)^{1/2} / (int |x| / 2) = (1/3)^{1/2} / (1/2) = 2/sqrt(3)
        let w = Weight::power_law(1.0, 1).unwrap();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        let v = match rh_constant(&w, 2.0, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => v,
            _ => panic!("divergent"),
        };
        let expect = 2.0 / math::sqrt(3.0);
        assert!((v - expect).abs() < 1e-12, "v = {v}");
        // oracle
        let mean_sq = integrate_radial(|r| 2.0 * r * r, 0.0, 1.0, Some(2.0), None, &spec())
            .unwrap()
            .value
            / 2.0;
        let mean = integrate_radial(|r| 2.0 * r, 0.0, 1.0, Some(1.0), None, &spec())
            .unwrap()
            .value
            / 2.0;
        assert!((v - math::sqrt(mean_sq) / mean).abs() < 1e-8);
    }

    #[test]
    fn rh_negative_gamma_divergence_boundary() {
        // gamma = -1/2: r * gamma <= -1 exactly at r = 2, so the quotient is
        // divergent there and finite just below
        let w = Weight::power_law(-0.5, 1).unwrap();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        assert!(rh_constant(&w, 2.0, &grid, &spec()).unwrap().is_divergent());
        assert!(rh_constant(&w, 2.1, &grid, &spec()).unwrap().is_divergent());
        let v = match rh_constant(&w, 1.9, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => v,
            _ => panic!("should be finite at r = 1.9"),
        };
        assert!(v.is_finite() && v > 0.0);
        // r = 1.5: (mean |x|^{-3/4})^{2/3} / mean |x|^{-1/2} = 4^{2/3} / 2
        let v = match rh_constant(&w, 1.5, &grid, &spec()).unwrap() {
            IntegralOutcome::Finite(v) => v,
            _ => panic!("finite"),
        };
        let expect = math::pow(4.0, 2.0 / 3.0) / 2.0;
        assert!((v - expect).abs() < 1e-12, "v = {v}, expect = {expect}");
    }

    #[test]
    fn critical_index_analytic_values() {
        let spec = spec();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        let r_grid: Vec<f64> = (1..60).map(|i| 1.0 + i as f64 * 0.1).collect();
        let w = Weight::constant(1);
        assert_eq!(
            critical_index_estimate(&w, &r_grid, &grid, &spec).unwrap(),
            CriticalIndex::Unbounded
        );
        let w = Weight::power_law(1.0, 1).unwrap();
        assert_eq!(
            critical_index_estimate(&w, &r_grid, &grid, &spec).unwrap(),
            CriticalIndex::Unbounded
        );
        let w = Weight::power_law(-0.5, 1).unwrap();
        match critical_index_estimate(&w, &r_grid, &grid, &spec).unwrap() {
            CriticalIndex::Finite(r) => assert!((r - 2.0).abs() < 1e-12),
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn critical_index_scan_brackets_analytic_value() {
        // the numeric scan on the power-law path (analytic divergence per r)
        // must bracket n/|gamma| = 2 to the 0.05 refinement resolution
        let spec = spec();
        let w = Weight::power_law(-0.5, 1).unwrap();
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        let r_grid: Vec<f64> = (1..=40).map(|i| 1.0 + i as f64 * 0.1).collect();
        match critical_index_scan(&w, &r_grid, &grid, &spec).unwrap() {
            CriticalIndex::Finite(r) => {
                assert!((r - 2.0).abs() <= 0.05, "r = {r}");
            }
            CriticalIndex::Unbounded => panic!("expected finite estimate"),
        }
    }

    #[test]
    fn critical_index_scan_on_sampled_weight_is_heuristic_only() {
        // sampled weights claim no divergence detection; the scan must still
        // terminate and produce some estimate
        let spec = spec();
        let w = Weight::sampled(1, |x| math::pow(math::fabs(x[0]).max(1e-280), -0.5));
        let grid = BallGrid::singleton(Ball::centered(1, 1.0));
        let r_grid: Vec<f64> = (1..=10).map(|i| 1.0 + i as f64).collect();
        let out = critical_index_scan(&w, &r_grid, &grid, &spec).unwrap();
        if let CriticalIndex::Finite(r) = out {
            assert!(r > 1.0);
        }
    }

    #[test]
    fn doubling_ratio_matches_power_law() {
        // Prop 2.2 specialization: omega(B(0, lambda R)) / omega(B(0, R)) =
        // lambda^{n+gamma} <= lambda^{n xi} whenever gamma <= n(xi-1)
        let mut rng = SplitMix64::new(77);
        for _ in 0..100 {
            let n = 1 + rng.uniform_usize(3);
            let xi = rng.uniform(1.0, 4.0);
            let gamma = rng.uniform(-(n as f64) + 0.1, n as f64 * (xi - 1.0));
            let w = Weight::power_law(gamma, n).unwrap();
            let r = rng.uniform(0.1, 10.0);
            let lam = rng.uniform(1.0 + 1e-6, 8.0);
            let m1 = w.centered_ball_mass(r).unwrap();
            let m2 = w.centered_ball_mass(lam * r).unwrap();
            let ratio = m2 / m1;
            let exact = math::pow(lam, n as f64 + gamma);
            assert!((ratio - exact).abs() / exact < 1e-10);
            assert!(ratio <= math::pow(lam, n as f64 * xi) * (1.0 + 1e-12));
        }
    }
}
