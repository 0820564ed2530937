//! Exact and semi-exact radial integrals of power sums.
//!
//! Everything symbolic in this crate reduces to integrals of the form
//! `int_lo^hi |sum_j c_j r^{a_j}|^q r^w dr` with `lo` possibly `0` and `hi`
//! possibly infinite. Single power terms integrate in closed form. Sums of
//! several powers integrate by adaptive quadrature on finite ranges and by
//! a dominant-term binomial series on the unbounded ends, so slowly
//! decaying tails (the interesting regime for sharpness sweeps) lose no
//! accuracy to truncation.

use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::quad::{self, QuadratureSpec};

/// Outcome of an integral that may diverge for analytic reasons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralOutcome {
    Finite(f64),
    Divergent,
}

impl IntegralOutcome {
    pub fn finite(self) -> Option<f64> {
        match self {
            IntegralOutcome::Finite(v) => Some(v),
            IntegralOutcome::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, IntegralOutcome::Divergent)
    }
}

/// `c * r^a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// A finite linear combination of powers of the radius.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerSum {
    pub terms: Vec<PowerTerm>,
}

const EXPONENT_MERGE_TOL: f64 = 1e-12;

impl PowerSum {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(coeff: f64, exponent: f64) -> Self {
        Self {
            terms: alloc::vec![PowerTerm { coeff, exponent }],
        }
    }

    pub fn push(&mut self, coeff: f64, exponent: f64) {
        self.terms.push(PowerTerm { coeff, exponent });
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge terms with (numerically) equal exponents, drop zero coefficients,
    /// sort by exponent ascending.
    pub fn normalize(&mut self) {
        self.terms
            .sort_by(|a, b| a.exponent.partial_cmp(&b.exponent).unwrap());
        let mut merged: Vec<PowerTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(last) = merged.last_mut() {
                if math::fabs(last.exponent - t.exponent) <= EXPONENT_MERGE_TOL {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * math::abs_pow(r, t.exponent))
            .sum()
    }

    pub fn scale(&mut self, c: f64) {
        for t in self.terms.iter_mut() {
            t.coeff *= c;
        }
    }
}

/// Closed form of `int_lo^hi r^e dr`, with analytic divergence detection at
/// an endpoint `lo = 0` or `hi = inf`.
pub fn power_integral(e: f64, lo: f64, hi: f64) -> IntegralOutcome {
    debug_assert!(lo >= 0.0 && hi >= lo);
    if lo == hi {
        return IntegralOutcome::Finite(0.0);
    }
    let e1 = e + 1.0;
    if math::fabs(e1) <= 1e-13 {
        // logarithmic case
        if lo == 0.0 || !hi.is_finite() {
            return IntegralOutcome::Divergent;
        }
        return IntegralOutcome::Finite(math::log(hi / lo));
    }
    if !hi.is_finite() {
        if e1 >= 0.0 {
            return IntegralOutcome::Divergent;
        }
        // -lo^{e1}/e1, finite since e1 < 0 and lo > 0 required
        if lo == 0.0 {
            return IntegralOutcome::Divergent;
        }
        return IntegralOutcome::Finite(-math::pow(lo, e1) / e1);
    }
    if lo == 0.0 {
        if e1 <= 0.0 {
            return IntegralOutcome::Divergent;
        }
        return IntegralOutcome::Finite(math::pow(hi, e1) / e1);
    }
    // stable form lo^{e1} * expm1(e1 * log1p((hi-lo)/lo)) / e1; log1p on the
    // exact difference avoids cancellation on thin shells
    let v = math::pow(lo, e1) * libm::expm1(e1 * libm::log1p((hi - lo) / lo)) / e1;
    IntegralOutcome::Finite(v)
}

/// `int_lo^hi |sum(r)|^q r^w dr`, `q >= 1`.
///
/// Divergence at unbounded endpoints is decided from the dominant exponent,
/// never from numerical overflow.
pub fn lq_weighted_integral(
    sum: &PowerSum,
    q: f64,
    w: f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralOutcome> {
    debug_assert!(lo >= 0.0 && hi >= lo && q > 0.0);
    let mut s = sum.clone();
    s.normalize();
    if s.is_zero() || lo == hi {
        return Ok(IntegralOutcome::Finite(0.0));
    }
    if s.terms.len() == 1 {
        let t = s.terms[0];
        let c = math::pow(math::fabs(t.coeff), q);
        return Ok(match power_integral(t.exponent * q + w, lo, hi) {
            IntegralOutcome::Finite(v) => IntegralOutcome::Finite(c * v),
            IntegralOutcome::Divergent => IntegralOutcome::Divergent,
        });
    }

    // multi-term: terms sorted ascending by exponent
    let a_min = s.terms.first().unwrap().exponent;
    let a_max = s.terms.last().unwrap().exponent;
    if lo == 0.0 && a_min * q + w + 1.0 <= 1e-13 {
        return Ok(IntegralOutcome::Divergent);
    }
    if !hi.is_finite() && a_max * q + w + 1.0 >= -1e-13 {
        return Ok(IntegralOutcome::Divergent);
    }

    let mut total = 0.0;
    let mut cur_lo = lo;
    let mut cur_hi = hi;

    if lo == 0.0 {
        let head_split = series_split_radius(&s, true).min(hi);
        if head_split > 0.0 {
            total += endpoint_series(&s, q, w, 0.0, head_split, true, spec)?;
            cur_lo = head_split;
        }
    }
    if !hi.is_finite() {
        let tail_split = series_split_radius(&s, false).max(cur_lo);
        total += endpoint_series(&s, q, w, tail_split, f64::INFINITY, false, spec)?;
        cur_hi = tail_split;
    }

    if cur_hi > cur_lo {
        let est = if cur_lo > 0.0 && cur_hi / cur_lo > 16.0 {
            // wide range: integrate in log coordinates
            quad::integrate_radial(
                |r| math::pow(math::fabs(s.eval(r)), q) * math::pow(r, w),
                cur_lo,
                cur_hi,
                None,
                None,
                spec,
            )?
        } else {
            quad::integrate(
                |r| math::pow(math::fabs(s.eval(r)), q) * math::pow(r, w),
                cur_lo,
                cur_hi,
                spec,
            )?
        };
        total += est.value;
    }
    Ok(IntegralOutcome::Finite(total))
}

/// Radius beyond which (tail) or below which (head) the non-dominant part of
/// the sum is at most 1/2 of the dominant term, so the binomial series in
/// `endpoint_series` converges geometrically.
fn series_split_radius(s: &PowerSum, head: bool) -> f64 {
    let dom = if head {
        s.terms[0]
    } else {
        *s.terms.last().unwrap()
    };
    let others: Vec<&PowerTerm> = s
        .terms
        .iter()
        .filter(|t| t.exponent != dom.exponent)
        .collect();
    let budget = 0.5 / others.len() as f64;
    let mut split = if head { f64::INFINITY } else { 0.0 };
    for t in others {
        let ratio = math::fabs(t.coeff / dom.coeff);
        let dexp = t.exponent - dom.exponent;
        // ratio * r^dexp = budget  =>  r = (budget/ratio)^{1/dexp}
        let r = math::pow(budget / ratio, 1.0 / dexp);
        if head {
            split = split.min(r);
        } else {
            split = split.max(r);
        }
    }
    split
}

/// Series evaluation of `int |sum|^q r^w dr` over `[0, hi]` (head) or
/// `[lo, inf)` (tail): factor the dominant power, expand `(1+h)^q` by the
/// generalized binomial theorem, and integrate the power terms exactly.
fn endpoint_series(
    s: &PowerSum,
    q: f64,
    w: f64,
    lo: f64,
    hi: f64,
    head: bool,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let dom = if head {
        s.terms[0]
    } else {
        *s.terms.last().unwrap()
    };
    // h(r) = sum of (c_j/c_dom) r^{a_j - a_dom}, |h| <= 1/2 on the range
    let mut h = PowerSum::zero();
    for t in &s.terms {
        if t.exponent != dom.exponent {
            h.push(t.coeff / dom.coeff, t.exponent - dom.exponent);
        }
    }
    let base_exp = dom.exponent * q + w;
    let lead = math::pow(math::fabs(dom.coeff), q);

    let integrate_term = |e: f64| -> f64 {
        // inner endpoints are never the problematic ones: convergence at the
        // unbounded end was checked by the caller, and the series exponents
        // only move away from the divergence boundary
        match power_integral(e, lo, hi) {
            IntegralOutcome::Finite(v) => v,
            IntegralOutcome::Divergent => f64::NAN,
        }
    };

    let mut total = integrate_term(base_exp);
    let mut hk = PowerSum::single(1.0, 0.0); // h^0
    let mut binom = 1.0;
    let tol = spec.abs_tol.max(spec.rel_tol * math::fabs(total) * 1e-2);
    for k in 1..=200u32 {
        binom *= (q - (k as f64 - 1.0)) / k as f64;
        hk = mul_power_sums(&hk, &h);
        prune(&mut hk, 1e-18);
        let mut contrib = 0.0;
        for t in &hk.terms {
            contrib += t.coeff * integrate_term(base_exp + t.exponent);
        }
        total += binom * contrib;
        if math::fabs(binom * contrib) < tol && k > 4 {
            break;
        }
    }
    Ok(lead * total)
}

/// Product of two power sums (exponents add, coefficients multiply).
pub fn mul_power_sums(a: &PowerSum, b: &PowerSum) -> PowerSum {
    let mut out = PowerSum::zero();
    for ta in &a.terms {
        for tb in &b.terms {
            out.push(ta.coeff * tb.coeff, ta.exponent + tb.exponent);
        }
    }
    out.normalize();
    out
}

fn prune(s: &mut PowerSum, tol: f64) {
    let max = s
        .terms
        .iter()
        .map(|t| math::fabs(t.coeff))
        .fold(0.0f64, f64::max);
    s.terms.retain(|t| math::fabs(t.coeff) > tol * max);
}
