//! Hypothesis validation and the boundedness constants.
//!
//! Each theorem-flavored parameter set names a constant: the Morrey, Herz
//! and Morrey-Herz families (with their hybrid and averaging-operator
//! corollaries), and the Muckenhoupt-weighted sufficient conditions with
//! their piecewise norm factors. Constants evaluate in closed form whenever
//! the kernel and the matrix families stay inside the grammar; a forced
//! quadrature path serves as a cross-check.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result, Violation};
use crate::math;
use crate::operators::{
    reduce_kernel_terms, reduced_power_integral, KernelConvention, MatrixFamily, OperatorSpec,
    ReducedTerm, ReducedVar, ScalarMap,
};
use crate::quad::{self, QuadratureSpec};
use crate::radial::{power_integral, IntegralOutcome};
use crate::spaces::SpaceSpec;
use crate::weights::{CriticalIndex, MuckenhouptParams, Weight};

/// Which boundedness statement the parameters instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    /// Morrey-to-Morrey, general matrix families.
    T3_1,
    /// Morrey corollary for the hybrid operator.
    C3_1_1,
    /// Morrey corollary for the averaging operator on the unit cube.
    C3_1_2,
    /// Herz-to-Herz.
    T3_2,
    C3_2_1,
    C3_2_2,
    /// Morrey-Herz-to-Morrey-Herz.
    T3_3,
    C3_3_1,
    /// Morrey with Muckenhoupt weights.
    T3_4,
    /// Morrey-Herz with Muckenhoupt weights, two weights.
    T3_5,
    /// Morrey-Herz with one Muckenhoupt weight (`v = omega`).
    T3_6,
}

impl TheoremId {
    pub fn family(self) -> SpaceFamily {
        match self {
            TheoremId::T3_1 | TheoremId::C3_1_1 | TheoremId::C3_1_2 => SpaceFamily::Morrey,
            TheoremId::T3_2 | TheoremId::C3_2_1 | TheoremId::C3_2_2 => SpaceFamily::Herz,
            TheoremId::T3_3 | TheoremId::C3_3_1 => SpaceFamily::MorreyHerz,
            TheoremId::T3_4 => SpaceFamily::MuckenhouptMorrey,
            TheoremId::T3_5 | TheoremId::T3_6 => SpaceFamily::MuckenhouptMorreyHerz,
        }
    }

    pub fn is_corollary(self) -> bool {
        matches!(
            self,
            TheoremId::C3_1_1
                | TheoremId::C3_1_2
                | TheoremId::C3_2_1
                | TheoremId::C3_2_2
                | TheoremId::C3_3_1
        )
    }

    pub fn is_muckenhoupt(self) -> bool {
        matches!(self, TheoremId::T3_4 | TheoremId::T3_5 | TheoremId::T3_6)
    }
}

impl core::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::C3_1_1 => "C3.1.1",
            TheoremId::C3_1_2 => "C3.1.2",
            TheoremId::T3_2 => "T3.2",
            TheoremId::C3_2_1 => "C3.2.1",
            TheoremId::C3_2_2 => "C3.2.2",
            TheoremId::T3_3 => "T3.3",
            TheoremId::C3_3_1 => "C3.3.1",
            TheoremId::T3_4 => "T3.4",
            TheoremId::T3_5 => "T3.5",
            TheoremId::T3_6 => "T3.6",
        };
        write!(f, "{s}")
    }
}

/// The space family a theorem acts between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceFamily {
    Morrey,
    Herz,
    MorreyHerz,
    MuckenhouptMorrey,
    MuckenhouptMorreyHerz,
}

/// Which constant a computation produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantId {
    C1,
    C1_1,
    C1_2,
    C2,
    C2_1,
    C2_2,
    C3,
    C3_1,
    C4,
    C5_1,
    C5_2,
    C6_1,
    C6_2,
}

impl core::fmt::Display for ConstantId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            ConstantId::C1 => "C1",
            ConstantId::C1_1 => "C1.1",
            ConstantId::C1_2 => "C1.2",
            ConstantId::C2 => "C2",
            ConstantId::C2_1 => "C2.1",
            ConstantId::C2_2 => "C2.2",
            ConstantId::C3 => "C3",
            ConstantId::C3_1 => "C3.1",
            ConstantId::C4 => "C4",
            ConstantId::C5_1 => "C5.1",
            ConstantId::C5_2 => "C5.2",
            ConstantId::C6_1 => "C6.1",
            ConstantId::C6_2 => "C6.2",
        };
        write!(f, "{s}")
    }
}

/// Per-argument exponents. Fields not used by a theorem family are ignored.
#[derive(Debug, Clone, Copy)]
pub struct IndexParams {
    pub beta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
}

impl IndexParams {
    pub fn morrey(beta: f64, gamma: f64, lambda: f64, q: f64) -> Self {
        Self {
            beta,
            gamma,
            alpha: 0.0,
            lambda,
            p: 1.0,
            q,
        }
    }

    pub fn herz(beta: f64, gamma: f64, alpha: f64, p: f64, q: f64) -> Self {
        Self {
            beta,
            gamma,
            alpha,
            lambda: 0.0,
            p,
            q,
        }
    }

    pub fn morrey_herz(beta: f64, gamma: f64, alpha: f64, lambda: f64, p: f64, q: f64) -> Self {
        Self {
            beta,
            gamma,
            alpha,
            lambda,
            p,
            q,
        }
    }
}

/// Target-side exponents.
#[derive(Debug, Clone, Copy)]
pub struct TargetParams {
    pub beta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    /// Muckenhoupt theorems: the target integrability exponent `q*`.
    pub q_star: f64,
    pub alpha_star: f64,
    pub lambda_star: f64,
}

impl Default for TargetParams {
    fn default() -> Self {
        Self {
            beta: 0.0,
            gamma: 0.0,
            alpha: 0.0,
            lambda: 0.0,
            p: 1.0,
            q: 1.0,
            q_star: 1.0,
            alpha_star: 0.0,
            lambda_star: 0.0,
        }
    }
}

/// Full parameter set for one boundedness statement.
#[derive(Debug, Clone)]
pub struct TheoremParams {
    pub theorem: TheoremId,
    pub m: usize,
    pub n: usize,
    pub index: Vec<IndexParams>,
    pub target: TargetParams,
    pub muckenhoupt: Option<MuckenhouptParams>,
    /// Shared weights for the Muckenhoupt theorems.
    pub weight_v: Option<Weight>,
    pub weight_omega: Option<Weight>,
    pub operator: OperatorSpec,
}

const BALANCE_TOL: f64 = 1e-12;

impl TheoremParams {
    /// Parameters for the power-weight families, with the target exponents
    /// derived from the balance equations exactly.
    pub fn balanced_power(
        theorem: TheoremId,
        n: usize,
        index: Vec<IndexParams>,
        operator: OperatorSpec,
    ) -> Result<Self> {
        if theorem.is_muckenhoupt() {
            return Err(Error::InvalidParameter(
                "balanced_power covers the power-weight families only".to_string(),
            ));
        }
        if index.is_empty() {
            return Err(Error::InvalidParameter("need m >= 1".to_string()));
        }
        let m = index.len();
        let nf = n as f64;
        let q = 1.0 / index.iter().map(|i| 1.0 / i.q).sum::<f64>();
        let p = 1.0 / index.iter().map(|i| 1.0 / i.p).sum::<f64>();
        let beta = q * index.iter().map(|i| i.beta / i.q).sum::<f64>();
        let gamma = q * index.iter().map(|i| i.gamma / i.q).sum::<f64>();
        let lambda = index.iter().map(|i| (nf + i.beta) * i.lambda).sum::<f64>() / (nf + beta);
        let alpha = index
            .iter()
            .map(|i| (1.0 + i.beta / nf) * i.alpha)
            .sum::<f64>()
            / (1.0 + beta / nf);
        Ok(Self {
            theorem,
            m,
            n,
            index,
            target: TargetParams {
                beta,
                gamma,
                alpha,
                lambda,
                p,
                q,
                ..TargetParams::default()
            },
            muckenhoupt: None,
            weight_v: None,
            weight_omega: None,
            operator,
        })
    }

    /// Parameters for the Muckenhoupt-weighted theorems; `lambda_star` and
    /// `alpha_star` are derived from the stated conditions.
    pub fn muckenhoupt(
        theorem: TheoremId,
        n: usize,
        index: Vec<IndexParams>,
        operator: OperatorSpec,
        muck: MuckenhouptParams,
        q_star: f64,
        weight_v: Weight,
        weight_omega: Weight,
    ) -> Result<Self> {
        if !theorem.is_muckenhoupt() {
            return Err(Error::InvalidParameter(
                "expected a Muckenhoupt-family theorem".to_string(),
            ));
        }
        let m = index.len();
        let nf = n as f64;
        let q = 1.0 / index.iter().map(|i| 1.0 / i.q).sum::<f64>();
        let p = 1.0 / index.iter().map(|i| 1.0 / i.p).sum::<f64>();
        let lambda_star = index.iter().map(|i| i.lambda).sum::<f64>();
        let alpha_star = match theorem {
            TheoremId::T3_5 => {
                nf * (m as f64 * (index[0].alpha / nf + 1.0 / index[0].q) - 1.0 / q_star)
            }
            TheoremId::T3_6 => {
                nf * (index.iter().map(|i| i.alpha).sum::<f64>() / nf + 1.0 / q - 1.0 / q_star)
            }
            _ => 0.0,
        };
        Ok(Self {
            theorem,
            m,
            n,
            index,
            target: TargetParams {
                p,
                q,
                q_star,
                alpha_star,
                lambda_star,
                ..TargetParams::default()
            },
            muckenhoupt: Some(muck),
            weight_v: Some(weight_v),
            weight_omega: Some(weight_omega),
            operator,
        })
    }

    /// Extremal-input exponent for argument `i` (the power realizing the
    /// constant in the corresponding necessity proof).
    pub fn extremal_exponent(&self, i: usize) -> f64 {
        let nf = self.n as f64;
        let ix = &self.index[i];
        match self.theorem.family() {
            SpaceFamily::Morrey | SpaceFamily::MuckenhouptMorrey => {
                (ix.beta + nf) * ix.lambda + (ix.beta - ix.gamma) / ix.q
            }
            SpaceFamily::Herz => -(1.0 + ix.beta / nf) * ix.alpha - (nf + ix.gamma) / ix.q,
            SpaceFamily::MorreyHerz | SpaceFamily::MuckenhouptMorreyHerz => {
                (ix.lambda - ix.alpha) * (1.0 + ix.beta / nf) - (nf + ix.gamma) / ix.q
            }
        }
    }

    /// Source space of argument `i`.
    pub fn source_space(&self, i: usize) -> Result<SpaceSpec> {
        let ix = &self.index[i];
        let (v, omega) = self.weights_for(ix)?;
        Ok(match self.theorem.family() {
            SpaceFamily::Morrey | SpaceFamily::MuckenhouptMorrey => SpaceSpec::CentralMorrey {
                q: ix.q,
                lambda: ix.lambda,
                v,
                omega,
            },
            SpaceFamily::Herz => SpaceSpec::Herz {
                alpha: ix.alpha,
                p: ix.p,
                q: ix.q,
                v,
                omega,
            },
            SpaceFamily::MorreyHerz | SpaceFamily::MuckenhouptMorreyHerz => SpaceSpec::MorreyHerz {
                alpha: ix.alpha,
                lambda: ix.lambda,
                p: ix.p,
                q: ix.q,
                v,
                omega,
            },
        })
    }

    /// Target space of the operator.
    pub fn target_space(&self) -> Result<SpaceSpec> {
        let t = &self.target;
        match self.theorem.family() {
            SpaceFamily::Morrey => Ok(SpaceSpec::CentralMorrey {
                q: t.q,
                lambda: t.lambda,
                v: Weight::power_law(t.beta, self.n)?,
                omega: Weight::power_law(t.gamma, self.n)?,
            }),
            SpaceFamily::Herz => Ok(SpaceSpec::Herz {
                alpha: t.alpha,
                p: t.p,
                q: t.q,
                v: Weight::power_law(t.beta, self.n)?,
                omega: Weight::power_law(t.gamma, self.n)?,
            }),
            SpaceFamily::MorreyHerz => Ok(SpaceSpec::MorreyHerz {
                alpha: t.alpha,
                lambda: t.lambda,
                p: t.p,
                q: t.q,
                v: Weight::power_law(t.beta, self.n)?,
                omega: Weight::power_law(t.gamma, self.n)?,
            }),
            SpaceFamily::MuckenhouptMorrey => {
                let (v, omega) = self.shared_weights()?;
                Ok(SpaceSpec::CentralMorrey {
                    q: t.q_star,
                    lambda: t.lambda_star,
                    v,
                    omega,
                })
            }
            SpaceFamily::MuckenhouptMorreyHerz => {
                let (v, omega) = self.shared_weights()?;
                Ok(SpaceSpec::MorreyHerz {
                    alpha: t.alpha_star,
                    lambda: t.lambda_star,
                    p: t.p,
                    q: t.q_star,
                    v,
                    omega,
                })
            }
        }
    }

    fn weights_for(&self, ix: &IndexParams) -> Result<(Weight, Weight)> {
        if self.theorem.is_muckenhoupt() {
            self.shared_weights()
        } else {
            Ok((
                Weight::power_law(ix.beta, self.n)?,
                Weight::power_law(ix.gamma, self.n)?,
            ))
        }
    }

    fn shared_weights(&self) -> Result<(Weight, Weight)> {
        let v = self
            .weight_v
            .clone()
            .ok_or_else(|| Error::InvalidParameter("weight v required".to_string()))?;
        let omega = self
            .weight_omega
            .clone()
            .ok_or_else(|| Error::InvalidParameter("weight omega required".to_string()))?;
        Ok((v, omega))
    }

    /// The constant this parameter set computes.
    pub fn constant_id(&self) -> ConstantId {
        match self.theorem {
            TheoremId::T3_1 => ConstantId::C1,
            TheoremId::C3_1_1 => ConstantId::C1_1,
            TheoremId::C3_1_2 => ConstantId::C1_2,
            TheoremId::T3_2 => ConstantId::C2,
            TheoremId::C3_2_1 => ConstantId::C2_1,
            TheoremId::C3_2_2 => ConstantId::C2_2,
            TheoremId::T3_3 => ConstantId::C3,
            TheoremId::C3_3_1 => ConstantId::C3_1,
            TheoremId::T3_4 => ConstantId::C4,
            TheoremId::T3_5 => {
                let t = &self.target;
                if t.alpha_star / self.n as f64 + 1.0 / t.q_star <= 0.0 {
                    ConstantId::C5_1
                } else {
                    ConstantId::C5_2
                }
            }
            TheoremId::T3_6 => {
                let ix = &self.index[0];
                if ix.alpha / self.n as f64 + 1.0 / ix.q <= 0.0 {
                    ConstantId::C6_1
                } else {
                    ConstantId::C6_2
                }
            }
        }
    }
}

fn check(violations: &mut Vec<Violation>, ok: bool, condition: &str, detail: String) {
    if !ok {
        violations.push(Violation {
            condition: condition.to_string(),
            detail,
        });
    }
}

fn near(a: f64, b: f64) -> bool {
    math::fabs(a - b) <= BALANCE_TOL * (1.0 + math::fabs(a).max(math::fabs(b)))
}

/// Check every stated hypothesis of the selected theorem; the returned list
/// is empty exactly when the parameters are admissible.
pub fn validate_hypotheses(params: &TheoremParams) -> Vec<Violation> {
    let mut v = Vec::new();
    let nf = params.n as f64;
    let t = &params.target;
    check(
        &mut v,
        params.index.len() == params.m && params.m >= 1,
        "m = len(index) >= 1",
        format!("m = {}, len = {}", params.m, params.index.len()),
    );
    check(
        &mut v,
        params.operator.m == params.m && params.operator.n == params.n,
        "operator shape matches (m, n)",
        format!(
            "operator (m, n) = ({}, {})",
            params.operator.m, params.operator.n
        ),
    );
    if params.theorem.is_corollary() {
        let all_diag = params
            .operator
            .families
            .iter()
            .all(|f| matches!(f, MatrixFamily::DiagonalScalar { .. }));
        check(
            &mut v,
            all_diag,
            "corollaries use scalar-diagonal families",
            "non-diagonal family present".to_string(),
        );
        if matches!(params.theorem, TheoremId::C3_1_2 | TheoremId::C3_2_2) {
            check(
                &mut v,
                params.operator.kernel.convention() == KernelConvention::HardyCesaroPsi,
                "averaging corollaries use the unit-cube kernel",
                format!("convention = {:?}", params.operator.kernel.convention()),
            );
        }
    }
    for (i, ix) in params.index.iter().enumerate() {
        check(
            &mut v,
            ix.q >= 1.0 && ix.q.is_finite(),
            "1 <= q_i < inf",
            format!("q_{} = {}", i + 1, ix.q),
        );
    }
    let inv_q: f64 = params.index.iter().map(|i| 1.0 / i.q).sum();

    match params.theorem.family() {
        SpaceFamily::Morrey => {
            for (i, ix) in params.index.iter().enumerate() {
                check(
                    &mut v,
                    ix.beta > -nf && ix.gamma > -nf,
                    "beta_i, gamma_i > -n",
                    format!("i = {}: beta = {}, gamma = {}", i + 1, ix.beta, ix.gamma),
                );
                check(
                    &mut v,
                    1.0 + ix.lambda * ix.q > 0.0,
                    "1+lambda*q>0",
                    format!("i = {}: lambda = {}, q = {}", i + 1, ix.lambda, ix.q),
                );
            }
            check(
                &mut v,
                t.beta > -nf && t.gamma > -nf,
                "beta, gamma > -n",
                format!("beta = {}, gamma = {}", t.beta, t.gamma),
            );
            check(
                &mut v,
                1.0 + t.lambda * t.q > 0.0,
                "1+lambda*q>0",
                format!("target lambda = {}, q = {}", t.lambda, t.q),
            );
            check(
                &mut v,
                near(inv_q, 1.0 / t.q),
                "sum 1/q_i = 1/q",
                format!("sum = {}, 1/q = {}", inv_q, 1.0 / t.q),
            );
            let beta_bal: f64 = params.index.iter().map(|i| i.beta / i.q).sum();
            check(
                &mut v,
                near(beta_bal, t.beta / t.q),
                "sum beta_i/q_i = beta/q",
                format!("sum = {}, beta/q = {}", beta_bal, t.beta / t.q),
            );
            let gamma_bal: f64 = params.index.iter().map(|i| i.gamma / i.q).sum();
            check(
                &mut v,
                near(gamma_bal, t.gamma / t.q),
                "sum gamma_i/q_i = gamma/q",
                format!("sum = {}, gamma/q = {}", gamma_bal, t.gamma / t.q),
            );
            let lambda_bal: f64 = params
                .index
                .iter()
                .map(|i| (nf + i.beta) / (nf + t.beta) * i.lambda)
                .sum();
            check(
                &mut v,
                near(lambda_bal, t.lambda),
                "sum ((n+beta_i)/(n+beta)) lambda_i = lambda",
                format!("sum = {}, lambda = {}", lambda_bal, t.lambda),
            );
            // derived redundant condition; a mismatch signals an internally
            // inconsistent parameter set
            let derived: f64 = params
                .index
                .iter()
                .map(|i| (i.beta + nf) * (i.lambda + 1.0 / i.q))
                .sum();
            check(
                &mut v,
                near(derived, (t.beta + nf) * (t.lambda + 1.0 / t.q)),
                "internal consistency: sum (beta_i+n)(lambda_i+1/q_i) = (beta+n)(lambda+1/q)",
                format!(
                    "sum = {}, target = {}",
                    derived,
                    (t.beta + nf) * (t.lambda + 1.0 / t.q)
                ),
            );
        }
        SpaceFamily::Herz | SpaceFamily::MorreyHerz => {
            for (i, ix) in params.index.iter().enumerate() {
                check(
                    &mut v,
                    ix.beta > -nf && ix.gamma > -nf,
                    "beta_i, gamma_i > -n",
                    format!("i = {}: beta = {}, gamma = {}", i + 1, ix.beta, ix.gamma),
                );
                check(
                    &mut v,
                    ix.p >= 1.0 && ix.p.is_finite(),
                    "1 <= p_i < inf",
                    format!("p_{} = {}", i + 1, ix.p),
                );
                if params.theorem.family() == SpaceFamily::MorreyHerz {
                    check(
                        &mut v,
                        ix.lambda > 0.0,
                        "lambda_i > 0",
                        format!("lambda_{} = {}", i + 1, ix.lambda),
                    );
                }
            }
            let inv_p: f64 = params.index.iter().map(|i| 1.0 / i.p).sum();
            check(
                &mut v,
                near(inv_p, 1.0 / t.p),
                "sum 1/p_i = 1/p",
                format!("sum = {}, 1/p = {}", inv_p, 1.0 / t.p),
            );
            check(
                &mut v,
                near(inv_q, 1.0 / t.q),
                "sum 1/q_i = 1/q",
                format!("sum = {}, 1/q = {}", inv_q, 1.0 / t.q),
            );
            let gamma_bal: f64 = params.index.iter().map(|i| i.gamma / i.q).sum();
            check(
                &mut v,
                near(gamma_bal, t.gamma / t.q),
                "sum gamma_i/q_i = gamma/q",
                format!("sum = {}, gamma/q = {}", gamma_bal, t.gamma / t.q),
            );
            let alpha_bal: f64 = params
                .index
                .iter()
                .map(|i| (1.0 + i.beta / nf) * i.alpha)
                .sum();
            check(
                &mut v,
                near(alpha_bal, (1.0 + t.beta / nf) * t.alpha),
                "sum (1+beta_i/n) alpha_i = (1+beta/n) alpha",
                format!(
                    "sum = {}, target = {}",
                    alpha_bal,
                    (1.0 + t.beta / nf) * t.alpha
                ),
            );
            if params.theorem.family() == SpaceFamily::MorreyHerz {
                let lambda_bal: f64 = params
                    .index
                    .iter()
                    .map(|i| (1.0 + i.beta / nf) * i.lambda)
                    .sum();
                check(
                    &mut v,
                    near(lambda_bal, (1.0 + t.beta / nf) * t.lambda),
                    "sum (1+beta_i/n) lambda_i = (1+beta/n) lambda",
                    format!(
                        "sum = {}, target = {}",
                        lambda_bal,
                        (1.0 + t.beta / nf) * t.lambda
                    ),
                );
            }
        }
        SpaceFamily::MuckenhouptMorrey | SpaceFamily::MuckenhouptMorreyHerz => {
            let Some(muck) = &params.muckenhoupt else {
                check(
                    &mut v,
                    false,
                    "muckenhoupt parameters present",
                    "missing".to_string(),
                );
                return v;
            };
            if let Err(e) = muck.validate() {
                check(&mut v, false, "muckenhoupt ranges", format!("{e}"));
            }
            check(
                &mut v,
                t.q_star >= 1.0 && muck.xi >= 1.0 && muck.eta >= 1.0,
                "1 <= q*, xi, eta < inf",
                format!("q* = {}, xi = {}, eta = {}", t.q_star, muck.xi, muck.eta),
            );
            let lambda_sum: f64 = params.index.iter().map(|i| i.lambda).sum();
            check(
                &mut v,
                near(lambda_sum, t.lambda_star),
                "lambda* = sum lambda_i",
                format!("sum = {}, lambda* = {}", lambda_sum, t.lambda_star),
            );
            check(
                &mut v,
                near(inv_q, 1.0 / t.q),
                "sum 1/q_i = 1/q",
                format!("sum = {}, 1/q = {}", inv_q, 1.0 / t.q),
            );
            let r_omega_conj = muck.r_omega.conjugate_or_one();
            match params.theorem {
                TheoremId::T3_4 => {
                    for (i, ix) in params.index.iter().enumerate() {
                        check(
                            &mut v,
                            -1.0 / ix.q < ix.lambda && ix.lambda < 0.0,
                            "-1/q_i < lambda_i < 0",
                            format!("lambda_{} = {}", i + 1, ix.lambda),
                        );
                    }
                    check(
                        &mut v,
                        t.q > t.q_star * muck.xi * r_omega_conj,
                        "q > q* xi r'_omega",
                        format!(
                            "q = {}, q* xi r' = {}",
                            t.q,
                            t.q_star * muck.xi * r_omega_conj
                        ),
                    );
                }
                TheoremId::T3_5 => {
                    for (i, ix) in params.index.iter().enumerate() {
                        check(
                            &mut v,
                            ix.alpha < 0.0,
                            "alpha_i < 0",
                            format!("alpha_{} = {}", i + 1, ix.alpha),
                        );
                        check(
                            &mut v,
                            ix.lambda >= 0.0,
                            "lambda_i >= 0",
                            format!("lambda_{} = {}", i + 1, ix.lambda),
                        );
                        check(
                            &mut v,
                            near(
                                (t.alpha_star / nf + 1.0 / t.q_star) / params.m as f64,
                                ix.alpha / nf + 1.0 / ix.q,
                            ),
                            "(1/m)(alpha*/n + 1/q*) = alpha_i/n + 1/q_i",
                            format!("i = {}", i + 1),
                        );
                    }
                    let bound = (params.m as f64 * t.q_star).max(t.q_star * muck.xi * r_omega_conj);
                    check(
                        &mut v,
                        t.q > bound,
                        "q > max{m q*, q* xi r'_omega}",
                        format!("q = {}, bound = {}", t.q, bound),
                    );
                }
                TheoremId::T3_6 => {
                    let mut signs_pos = 0;
                    let mut signs_nonpos = 0;
                    for (i, ix) in params.index.iter().enumerate() {
                        check(
                            &mut v,
                            ix.alpha < 0.0,
                            "alpha_i < 0",
                            format!("alpha_{} = {}", i + 1, ix.alpha),
                        );
                        check(
                            &mut v,
                            ix.lambda >= 0.0,
                            "lambda_i >= 0",
                            format!("lambda_{} = {}", i + 1, ix.lambda),
                        );
                        if ix.alpha / nf + 1.0 / ix.q > 0.0 {
                            signs_pos += 1;
                        } else {
                            signs_nonpos += 1;
                        }
                    }
                    check(
                        &mut v,
                        signs_pos == 0 || signs_nonpos == 0,
                        "alpha_i/n + 1/q_i has one sign across i",
                        format!("{signs_pos} positive, {signs_nonpos} nonpositive"),
                    );
                    check(
                        &mut v,
                        t.q > t.q_star * muck.xi * r_omega_conj,
                        "q > q* xi r'_omega",
                        format!(
                            "q = {}, q* xi r' = {}",
                            t.q,
                            t.q_star * muck.xi * r_omega_conj
                        ),
                    );
                    let alpha_bal: f64 =
                        params.index.iter().map(|i| i.alpha).sum::<f64>() / nf + 1.0 / t.q;
                    check(
                        &mut v,
                        near(alpha_bal, t.alpha_star / nf + 1.0 / t.q_star),
                        "alpha*/n + 1/q* = sum alpha_i/n + 1/q",
                        format!(
                            "lhs = {}, rhs = {}",
                            t.alpha_star / nf + 1.0 / t.q_star,
                            alpha_bal
                        ),
                    );
                }
                _ => unreachable!(),
            }
            // omega(B) <= C v(B) over all radii: for power weights this
            // forces equal exponents
            if let (Some(v_w), Some(o_w)) = (&params.weight_v, &params.weight_omega) {
                if let (Some(bv), Some(bo)) = (v_w.power_exponent(), o_w.power_exponent()) {
                    check(
                        &mut v,
                        near(bv, bo),
                        "omega(B(0,R)) <~ v(B(0,R)) for all R",
                        format!("power weights need equal exponents: {bo} vs {bv}"),
                    );
                }
                // A-class membership and critical-index consistency, decided
                // analytically on the power-law paths: |x|^g lies in A_s for
                // -n < g < n(s-1) (g <= 0 at s = 1) and has reverse Holder
                // index n/|g| for g < 0, unbounded otherwise
                let mut check_weight = |w: &Weight, s: f64, supplied: CriticalIndex, who: &str| {
                    if let Some(g) = w.power_exponent() {
                        let in_class = if s > 1.0 {
                            g > -nf && g < nf * (s - 1.0)
                        } else {
                            g > -nf && g <= 0.0
                        };
                        check(
                            &mut v,
                            in_class,
                            "weight lies in its Muckenhoupt class",
                            format!("{who}: exponent {g} outside A_{s}"),
                        );
                        let consistent = match supplied {
                            CriticalIndex::Unbounded => g >= 0.0,
                            CriticalIndex::Finite(r) => g < 0.0 && near(r, nf / math::fabs(g)),
                        };
                        check(
                            &mut v,
                            consistent,
                            "critical index matches the weight",
                            format!("{who}: exponent {g}, supplied index {supplied:?}"),
                        );
                    }
                };
                check_weight(o_w, muck.xi, muck.r_omega, "omega");
                check_weight(v_w, muck.eta, muck.r_v, "v");
            } else {
                check(
                    &mut v,
                    false,
                    "weights v, omega present",
                    "missing".to_string(),
                );
            }
        }
    }
    v
}

fn require_valid(params: &TheoremParams) -> Result<()> {
    let violations = validate_hypotheses(params);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(violations))
    }
}

/// A computed constant.
#[derive(Debug, Clone, Copy)]
pub struct ConstantReport {
    pub id: ConstantId,
    /// `+inf` when the defining integral diverges (decided analytically on
    /// closed-form paths).
    pub value: f64,
    /// Set when some family's norm equals 1 on a positive-measure set and
    /// the branch split is ambiguous (mass assigned to the `>= 1` branch).
    pub branch_ambiguous: bool,
}

/// `||A_i(t)||` as `coeff * t^exp` along the reduced variable.
fn family_norm_power(fam: &MatrixFamily, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
    let nf = n as f64;
    match fam {
        MatrixFamily::DiagonalScalar { map, .. } => {
            let (s_c, s_e) = magnitude(map, var, n)?;
            Some((math::sqrt(nf) * s_c, s_e))
        }
        MatrixFamily::Rotation(_) => Some((math::sqrt(nf), 0.0)),
        MatrixFamily::GeneralTable { .. } => None,
    }
}

/// `||A_i^{-1}(t)||` as `coeff * t^exp`.
fn family_inv_norm_power(fam: &MatrixFamily, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
    let nf = n as f64;
    match fam {
        MatrixFamily::DiagonalScalar { map, .. } => {
            let (s_c, s_e) = magnitude(map, var, n)?;
            Some((math::sqrt(nf) / s_c, -s_e))
        }
        MatrixFamily::Rotation(_) => Some((math::sqrt(nf), 0.0)),
        MatrixFamily::GeneralTable { .. } => None,
    }
}

/// `|det A_i^{-1}(t)|` as `coeff * t^exp`.
fn family_det_inv_power(fam: &MatrixFamily, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
    let nf = n as f64;
    match fam {
        MatrixFamily::DiagonalScalar { map, .. } => {
            let (s_c, s_e) = magnitude(map, var, n)?;
            Some((math::pow(s_c, -nf), -s_e * nf))
        }
        MatrixFamily::Rotation(_) => Some((1.0, 0.0)),
        MatrixFamily::GeneralTable { .. } => None,
    }
}

fn magnitude(map: &ScalarMap, var: ReducedVar, n: usize) -> Option<(f64, f64)> {
    match (map, var) {
        (ScalarMap::RadialPower { c, e }, ReducedVar::Radius) => Some((math::fabs(*c), *e)),
        (ScalarMap::RadialPower { c, e }, ReducedVar::Coord1) if n == 1 => {
            Some((math::fabs(*c), *e))
        }
        (ScalarMap::CoordPower { c, e }, ReducedVar::Coord1) => Some((math::fabs(*c), *e)),
        (ScalarMap::CoordPower { c, e }, ReducedVar::Radius) if n == 1 => {
            Some((math::fabs(*c), *e))
        }
        _ => None,
    }
}

/// Kernel terms with absolute coefficients (the constants integrate
/// `|Phi|`). Exact when coefficients share a sign or supports are disjoint;
/// otherwise callers must use the pointwise quadrature path.
fn abs_kernel_terms(params: &TheoremParams) -> Result<Vec<ReducedTerm>> {
    let Some(mut reduced) = reduce_kernel_terms(&params.operator.kernel, params.n) else {
        return Err(Error::InvalidParameter(
            "constant evaluation needs a grammar kernel".to_string(),
        ));
    };
    if !params.operator.kernel.constant_sign() {
        // mixed signs with overlapping supports would make |sum| != sum
        // of absolute terms
        let mut sorted: Vec<(f64, f64)> = reduced.iter().map(|t| (t.lo, t.hi)).collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sorted.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::InvalidParameter(
                    "mixed-sign kernel terms with overlapping supports".to_string(),
                ));
            }
        }
    }
    for t in reduced.iter_mut() {
        t.coeff = math::fabs(t.coeff);
    }
    Ok(reduced)
}

/// The power exponent of `||A_i^{-1}||` in the theorem constants.
fn inv_norm_exponent(params: &TheoremParams, i: usize) -> f64 {
    let nf = params.n as f64;
    let ix = &params.index[i];
    match params.theorem.family() {
        SpaceFamily::Morrey => -(ix.beta + nf) * ix.lambda + (ix.gamma - ix.beta) / ix.q,
        SpaceFamily::Herz => (1.0 + ix.beta / nf) * ix.alpha + (nf + ix.gamma) / ix.q,
        SpaceFamily::MorreyHerz => {
            (1.0 + ix.beta / nf) * (ix.alpha - ix.lambda) + (nf + ix.gamma) / ix.q
        }
        _ => unreachable!("Muckenhoupt constants use their own integrands"),
    }
}

/// Compute the constant for the power-weight theorems (C1 .. C3.1) in
/// closed form, or dispatch to the Muckenhoupt path.
pub fn compute_constant(params: &TheoremParams, quad: &QuadratureSpec) -> Result<ConstantReport> {
    if params.theorem.is_muckenhoupt() {
        return compute_muckenhoupt_constant(params, quad);
    }
    require_valid(params)?;
    let reduced = abs_kernel_terms(params)?;
    let id = params.constant_id();
    if reduced.is_empty() {
        return Ok(ConstantReport {
            id,
            value: 0.0,
            branch_ambiguous: false,
        });
    }
    let var = reduced[0].var;
    if reduced.iter().any(|t| t.var != var) {
        return Err(Error::InvalidParameter(
            "kernel terms must share a support kind for the closed form".to_string(),
        ));
    }
    let mut shift = 0.0;
    let mut scale = 1.0;
    for (i, fam) in params.operator.families.iter().enumerate() {
        let e = inv_norm_exponent(params, i);
        let (c, t_exp) = if params.theorem.is_corollary() {
            // corollaries integrate |s_i(y)|^{-e}
            let MatrixFamily::DiagonalScalar { map, .. } = fam else {
                return Err(Error::InvalidParameter(
                    "corollary constants need scalar-diagonal families".to_string(),
                ));
            };
            let (s_c, s_e) = magnitude(map, var, params.n).ok_or_else(|| {
                Error::InvalidParameter("scalar map incompatible with the kernel".to_string())
            })?;
            (math::pow(s_c, -e), -s_e * e)
        } else {
            let (b_c, b_e) = family_inv_norm_power(fam, var, params.n).ok_or_else(|| {
                Error::InvalidParameter(
                    "general-table families have no closed-form constant".to_string(),
                )
            })?;
            (math::pow(b_c, e), b_e * e)
        };
        scale *= c;
        shift += t_exp;
    }
    let value = match reduced_power_integral(&reduced, shift, scale) {
        IntegralOutcome::Finite(v) => v,
        IntegralOutcome::Divergent => f64::INFINITY,
    };
    Ok(ConstantReport {
        id,
        value,
        branch_ambiguous: false,
    })
}

/// Forced-quadrature evaluation of the same integrand, used as a
/// cross-check of the closed form.
pub fn compute_constant_quadrature(
    params: &TheoremParams,
    quad: &QuadratureSpec,
) -> Result<ConstantReport> {
    if params.theorem.is_muckenhoupt() {
        return compute_muckenhoupt_quadrature(params, quad);
    }
    require_valid(params)?;
    let reduced = abs_kernel_terms(params)?;
    let id = params.constant_id();
    let var = reduced.first().map(|t| t.var).unwrap_or(ReducedVar::Radius);
    let mut shift = 0.0;
    let mut scale = 1.0;
    for (i, fam) in params.operator.families.iter().enumerate() {
        let e = inv_norm_exponent(params, i);
        if params.theorem.is_corollary() {
            let MatrixFamily::DiagonalScalar { map, .. } = fam else {
                return Err(Error::InvalidParameter(
                    "corollary constants need scalar-diagonal families".to_string(),
                ));
            };
            let (s_c, s_e) = magnitude(map, var, params.n).ok_or_else(|| {
                Error::InvalidParameter("scalar map incompatible with the kernel".to_string())
            })?;
            scale *= math::pow(s_c, -e);
            shift += -s_e * e;
        } else {
            let (b_c, b_e) = family_inv_norm_power(fam, var, params.n).ok_or_else(|| {
                Error::InvalidParameter(
                    "general-table families have no closed-form constant".to_string(),
                )
            })?;
            scale *= math::pow(b_c, e);
            shift += b_e * e;
        }
    }
    let mut value = 0.0;
    for t in &reduced {
        let p = t.power + shift;
        // divergence is still decided analytically, never by overflow
        match power_integral(p, t.lo, t.hi) {
            IntegralOutcome::Divergent => {
                return Ok(ConstantReport {
                    id,
                    value: f64::INFINITY,
                    branch_ambiguous: false,
                })
            }
            IntegralOutcome::Finite(_) => {}
        }
        let est = quad::integrate_radial(
            |x| scale * t.coeff * math::pow(x, p),
            t.lo,
            t.hi,
            Some(p),
            Some(p),
            quad,
        )?;
        value += est.value;
    }
    Ok(ConstantReport {
        id,
        value,
        branch_ambiguous: false,
    })
}

/// Piecewise branch factors of the Muckenhoupt constants, as exponents of
/// `||A_i(t)||` on the two branches.
struct BranchExponents {
    below_one: f64,
    at_least_one: f64,
}

fn muckenhoupt_branches(params: &TheoremParams, i: usize) -> Result<Vec<BranchExponents>> {
    let muck = params.muckenhoupt.as_ref().unwrap();
    let nf = params.n as f64;
    let mf = params.m as f64;
    let t = &params.target;
    let d1 = (muck.delta1 - 1.0) / muck.delta1;
    let d2 = (muck.delta2 - 1.0) / muck.delta2;
    match params.theorem {
        TheoremId::T3_4 => {
            // A_i(y): the v-mass ratio and the omega-mass ratio each switch
            // at ||A_i|| = 1
            let ix = &params.index[i];
            let lam = ix.lambda + 1.0 / ix.q;
            Ok(alloc::vec![
                BranchExponents {
                    below_one: nf * lam * d2,
                    at_least_one: nf * muck.eta * lam,
                },
                BranchExponents {
                    below_one: -muck.xi * nf / ix.q,
                    at_least_one: -(nf / ix.q) * d1,
                },
            ])
        }
        TheoremId::T3_5 => {
            let ix = &params.index[i];
            let a_star = t.alpha_star;
            if a_star / nf + 1.0 / t.q_star <= 0.0 {
                Ok(alloc::vec![BranchExponents {
                    below_one: -((nf / t.q_star + a_star) * d1 + (a_star - mf * ix.lambda) * d2
                        - muck.xi * a_star),
                    at_least_one: -((nf / t.q_star + a_star) * muck.xi
                        + muck.eta * (a_star - mf * ix.lambda)
                        - a_star * d1),
                }])
            } else {
                Ok(alloc::vec![BranchExponents {
                    below_one: -(muck.xi * nf / t.q_star + (a_star - mf * ix.lambda) * d2),
                    at_least_one: -((nf / t.q_star) * d1 + muck.eta * (a_star - mf * ix.lambda)),
                }])
            }
        }
        TheoremId::T3_6 => {
            let ix = &params.index[i];
            let d = d1; // single delta in the one-weight case
            let s = ix.alpha / nf + 1.0 / ix.q;
            if s <= 0.0 {
                Ok(alloc::vec![BranchExponents {
                    below_one: mf * (ix.lambda - nf * s * d),
                    at_least_one: mf * muck.xi * (ix.lambda - nf * s),
                }])
            } else {
                Ok(alloc::vec![BranchExponents {
                    below_one: mf * (ix.lambda * d - nf * muck.xi * s),
                    at_least_one: mf * (ix.lambda * muck.xi - nf * s * d),
                }])
            }
        }
        _ => Err(Error::InvalidParameter(
            "not a Muckenhoupt theorem".to_string(),
        )),
    }
}

/// One per-family integral of the Muckenhoupt constants:
/// `int |Phi|/|y|^n |det A_i^{-1}|^{E_det} ||A_i||^{E_norm} * branch(y) dy`,
/// split exactly at the radii where `||A_i(t)|| = 1`.
#[allow(clippy::too_many_arguments)]
fn muckenhoupt_factor(
    reduced: &[ReducedTerm],
    norm_c: f64,
    norm_e: f64,
    det_c: f64,
    det_e: f64,
    det_exp: f64,
    norm_exp: f64,
    branches: &[BranchExponents],
    numeric: Option<&QuadratureSpec>,
) -> Result<(f64, bool)> {
    let mut ambiguous = false;
    let base_scale = math::pow(det_c, det_exp) * math::pow(norm_c, norm_exp);
    let base_shift = det_e * det_exp + norm_e * norm_exp;

    // switch radius of ||A(t)|| = norm_c * t^{norm_e}
    let split = if norm_e != 0.0 {
        Some(math::pow(1.0 / norm_c, 1.0 / norm_e))
    } else {
        if math::fabs(norm_c - 1.0) < 1e-14 {
            ambiguous = true;
        }
        None
    };

    let mut total = 0.0;
    for term in reduced {
        let mut segs: Vec<(f64, f64)> = Vec::new();
        match split {
            Some(s) if s > term.lo && s < term.hi => {
                segs.push((term.lo, s));
                segs.push((s, term.hi));
            }
            _ => segs.push((term.lo, term.hi)),
        }
        for (lo, hi) in segs {
            // probe which branch this segment is on
            let probe = if hi.is_finite() {
                if lo > 0.0 {
                    math::sqrt(lo * hi)
                } else {
                    0.5 * hi
                }
            } else {
                2.0 * lo.max(1.0)
            };
            let norm_at_probe = norm_c * math::pow(probe, norm_e);
            let mut scale = base_scale * term.coeff;
            let mut shift = base_shift;
            for b in branches {
                let e = if norm_at_probe < 1.0 {
                    b.below_one
                } else {
                    b.at_least_one
                };
                scale *= math::pow(norm_c, e);
                shift += norm_e * e;
            }
            let p = term.power + shift;
            match power_integral(p, lo, hi) {
                IntegralOutcome::Divergent => return Ok((f64::INFINITY, ambiguous)),
                IntegralOutcome::Finite(v) => match numeric {
                    None => total += scale * v,
                    Some(quadspec) => {
                        let est = quad::integrate_radial(
                            |x| scale * math::pow(x, p),
                            lo,
                            hi,
                            Some(p),
                            Some(p),
                            quadspec,
                        )?;
                        total += est.value;
                    }
                },
            }
        }
    }
    Ok((total, ambiguous))
}

fn muckenhoupt_compute(
    params: &TheoremParams,
    numeric: Option<&QuadratureSpec>,
) -> Result<ConstantReport> {
    require_valid(params)?;
    let reduced = abs_kernel_terms(params)?;
    let id = params.constant_id();
    let var = reduced.first().map(|t| t.var).unwrap_or(ReducedVar::Radius);
    if reduced.iter().any(|t| t.var != var) {
        return Err(Error::InvalidParameter(
            "kernel terms must share a support kind".to_string(),
        ));
    }
    let muck = params.muckenhoupt.as_ref().unwrap();
    let nf = params.n as f64;
    let mf = params.m as f64;
    let mut ambiguous = false;

    match params.theorem {
        TheoremId::T3_4 => {
            // single integral with the product of all family factors
            let mut scale = 1.0;
            let mut shift = 0.0;
            let mut branch_list = Vec::new();
            let mut norms = Vec::new();
            for (i, fam) in params.operator.families.iter().enumerate() {
                let (n_c, n_e) = family_norm_power(fam, var, params.n).ok_or_else(|| {
                    Error::InvalidParameter("family outside the grammar".to_string())
                })?;
                let (d_c, d_e) = family_det_inv_power(fam, var, params.n).unwrap();
                let det_exp = muck.xi / params.index[i].q;
                let norm_exp = muck.xi * nf / params.index[i].q;
                scale *= math::pow(d_c, det_exp) * math::pow(n_c, norm_exp);
                shift += d_e * det_exp + n_e * norm_exp;
                branch_list.push((n_c, n_e, muckenhoupt_branches(params, i)?));
                norms.push((n_c, n_e));
            }
            // split at every family's unit-norm radius
            let mut splits: Vec<f64> = Vec::new();
            for (n_c, n_e) in &norms {
                if *n_e != 0.0 {
                    splits.push(math::pow(1.0 / n_c, 1.0 / n_e));
                } else if math::fabs(n_c - 1.0) < 1e-14 {
                    ambiguous = true;
                }
            }
            let mut total = 0.0;
            for term in &reduced {
                let mut cuts = alloc::vec![term.lo, term.hi];
                for s in &splits {
                    if *s > term.lo && *s < term.hi {
                        cuts.push(*s);
                    }
                }
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.dedup();
                for w in cuts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let probe = if hi.is_finite() {
                        if lo > 0.0 {
                            math::sqrt(lo * hi)
                        } else {
                            0.5 * hi
                        }
                    } else {
                        2.0 * lo.max(1.0)
                    };
                    let mut seg_scale = scale * term.coeff;
                    let mut seg_shift = shift;
                    for (n_c, n_e, branches) in &branch_list {
                        let norm_at = n_c * math::pow(probe, *n_e);
                        for b in branches {
                            let e = if norm_at < 1.0 {
                                b.below_one
                            } else {
                                b.at_least_one
                            };
                            seg_scale *= math::pow(*n_c, e);
                            seg_shift += n_e * e;
                        }
                    }
                    let p = term.power + seg_shift;
                    match power_integral(p, lo, hi) {
                        IntegralOutcome::Divergent => {
                            return Ok(ConstantReport {
                                id,
                                value: f64::INFINITY,
                                branch_ambiguous: ambiguous,
                            })
                        }
                        IntegralOutcome::Finite(v) => match numeric {
                            None => total += seg_scale * v,
                            Some(quadspec) => {
                                let est = quad::integrate_radial(
                                    |x| seg_scale * math::pow(x, p),
                                    lo,
                                    hi,
                                    Some(p),
                                    Some(p),
                                    quadspec,
                                )?;
                                total += est.value;
                            }
                        },
                    }
                }
            }
            Ok(ConstantReport {
                id,
                value: total,
                branch_ambiguous: ambiguous,
            })
        }
        TheoremId::T3_5 | TheoremId::T3_6 => {
            // product over i of the 1/m-th power of per-family integrals
            let mut product = 1.0;
            for (i, fam) in params.operator.families.iter().enumerate() {
                let (n_c, n_e) = family_norm_power(fam, var, params.n).ok_or_else(|| {
                    Error::InvalidParameter("family outside the grammar".to_string())
                })?;
                let (d_c, d_e) = family_det_inv_power(fam, var, params.n).unwrap();
                let det_exp = mf * muck.xi / params.index[i].q;
                let norm_exp = mf * muck.xi * nf / params.index[i].q;
                let branches = muckenhoupt_branches(params, i)?;
                let (factor, amb) = muckenhoupt_factor(
                    &reduced, n_c, n_e, d_c, d_e, det_exp, norm_exp, &branches, numeric,
                )?;
                ambiguous |= amb;
                if factor.is_infinite() {
                    return Ok(ConstantReport {
                        id,
                        value: f64::INFINITY,
                        branch_ambiguous: ambiguous,
                    });
                }
                product *= math::pow(factor, 1.0 / mf);
            }
            Ok(ConstantReport {
                id,
                value: product,
                branch_ambiguous: ambiguous,
            })
        }
        _ => Err(Error::InvalidParameter(
            "not a Muckenhoupt theorem".to_string(),
        )),
    }
}

/// The Muckenhoupt-family constants (C4, C5.*, C6.*) in closed form.
pub fn compute_muckenhoupt_constant(
    params: &TheoremParams,
    _quad: &QuadratureSpec,
) -> Result<ConstantReport> {
    muckenhoupt_compute(params, None)
}

/// Forced-quadrature evaluation of the Muckenhoupt constants.
pub fn compute_muckenhoupt_quadrature(
    params: &TheoremParams,
    quad: &QuadratureSpec,
) -> Result<ConstantReport> {
    muckenhoupt_compute(params, Some(quad))
}
