//! JSON experiment configuration: schema types and conversion into core
//! domain objects.
//!
//! The schema is versioned (`"v": 1`) and every payload validates before
//! any computation runs. Errors carry the offending field where serde or
//! the converters can name it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use hausdorff_core::constants::{IndexParams, TheoremId, TheoremParams};
use hausdorff_core::operators::{
    KernelConvention, KernelSpec, KernelTerm, Matrix, MatrixFamily, OperatorSpec, RotationFamily,
    ScalarMap, SupportRegion,
};
use hausdorff_core::spaces::{DyadicRange, SpaceSpec, TestFunction};
use hausdorff_core::weights::{Ball, BallGrid, CriticalIndex, MuckenhouptParams, Weight};
use hausdorff_core::QuadratureSpec;

/// Error produced while reading or validating a configuration.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub type ConfigResult<T> = Result<T, ConfigError>;

fn field_err<T>(field: &str, detail: impl std::fmt::Display) -> ConfigResult<T> {
    Err(ConfigError(format!("{field}: {detail}")))
}

/// A number that may be written as the string `"inf"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaybeInf {
    Num(f64),
    Word(MaybeInfWord),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum MaybeInfWord {
    #[serde(rename = "inf")]
    Inf,
    #[serde(rename = "unbounded")]
    Unbounded,
}

impl MaybeInf {
    pub fn value(&self) -> f64 {
        match self {
            MaybeInf::Num(v) => *v,
            MaybeInf::Word(_) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Norm,
    Apply,
    Constant,
    Verify,
    Weights,
    Sweep,
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Command::Norm => "norm",
            Command::Apply => "apply",
            Command::Constant => "constant",
            Command::Verify => "verify",
            Command::Weights => "weights",
            Command::Sweep => "sweep",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_max_refinement")]
    pub max_refinement: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_rel_tol() -> f64 {
    1e-8
}
fn default_abs_tol() -> f64 {
    1e-12
}
fn default_max_refinement() -> u32 {
    20
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            max_refinement: default_max_refinement(),
            seed: 0,
        }
    }
}

impl QuadConfig {
    pub fn to_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_refinement: self.max_refinement,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeConfig {
    #[serde(default = "default_k_min")]
    pub k_min: i32,
    #[serde(default = "default_k_max")]
    pub k_max: i32,
}

fn default_k_min() -> i32 {
    -40
}
fn default_k_max() -> i32 {
    40
}

impl Default for RangeConfig {
    fn default() -> Self {
        Self {
            k_min: default_k_min(),
            k_max: default_k_max(),
        }
    }
}

impl RangeConfig {
    pub fn to_range(&self) -> DyadicRange {
        DyadicRange::with_shells(self.k_min, self.k_max)
    }
}

/// Top-level experiment file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Schema version; must be 1.
    pub v: u32,
    pub command: Command,
    pub payload: serde_json::Value,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub range: RangeConfig,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> ConfigResult<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        if cfg.v != 1 {
            return field_err("v", format!("unsupported schema version {}", cfg.v));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> ConfigResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightConfig {
    Power { gamma: f64, n: usize },
    Sampled { table: String, n: usize },
}

impl WeightConfig {
    pub fn build(&self) -> ConfigResult<Weight> {
        match self {
            WeightConfig::Power { gamma, n } => {
                Weight::power_law(*gamma, *n).map_err(|e| ConfigError(format!("weight: {e}")))
            }
            WeightConfig::Sampled { table, n } => {
                let rows = load_table(Path::new(table), *n + 1)?;
                let n = *n;
                let entries: Vec<(Vec<f64>, f64)> = rows
                    .into_iter()
                    .map(|row| (row[..n].to_vec(), row[n]))
                    .collect();
                Ok(Weight::sampled(n, move |x: &[f64]| nearest(&entries, x)))
            }
        }
    }
}

fn nearest(entries: &[(Vec<f64>, f64)], x: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    let mut value = 0.0;
    for (p, v) in entries {
        let d: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best {
            best = d;
            value = *v;
        }
    }
    value
}

fn load_table(path: &Path, columns: usize) -> ConfigResult<Vec<Vec<f64>>> {
    let text =
        fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let row =
            row.map_err(|e| ConfigError(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        if row.len() != columns {
            return field_err(
                "table",
                format!(
                    "{}:{}: expected {columns} columns, found {}",
                    path.display(),
                    lineno + 1,
                    row.len()
                ),
            );
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return field_err("table", "empty table");
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    Named(String),
    Balls { balls: Vec<BallConfig> },
}

impl GridConfig {
    pub fn build(&self, n: usize, seed: u64) -> ConfigResult<BallGrid> {
        match self {
            GridConfig::Named(name) if name == "default" => Ok(BallGrid::default_grid(n, seed)),
            GridConfig::Named(name) if name == "unit_ball" => {
                Ok(BallGrid::singleton(Ball::centered(n, 1.0)))
            }
            GridConfig::Named(name) => field_err("grid", format!("unknown grid `{name}`")),
            GridConfig::Balls { balls } => {
                let balls = balls
                    .iter()
                    .map(|b| Ball::new(b.center.clone(), b.radius))
                    .collect();
                BallGrid::new(balls).map_err(|e| ConfigError(format!("grid: {e}")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// test functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionConfig {
    Power {
        a: f64,
        #[serde(default)]
        r0: f64,
        #[serde(default = "default_inf")]
        r1: MaybeInf,
    },
    Indicator {
        shape: String,
        #[serde(rename = "R", default)]
        radius: Option<f64>,
        #[serde(default)]
        r0: Option<f64>,
        #[serde(default)]
        r1: Option<f64>,
    },
    Scaled {
        c: f64,
        f: Box<TestFunctionConfig>,
    },
    Sum {
        terms: Vec<TestFunctionConfig>,
    },
}

fn default_inf() -> MaybeInf {
    MaybeInf::Word(MaybeInfWord::Inf)
}

impl TestFunctionConfig {
    pub fn build(&self) -> ConfigResult<TestFunction> {
        match self {
            TestFunctionConfig::Power { a, r0, r1 } => TestFunction::power_cut(*a, *r0, r1.value())
                .map_err(|e| ConfigError(format!("power: {e}"))),
            TestFunctionConfig::Indicator {
                shape,
                radius,
                r0,
                r1,
            } => match shape.as_str() {
                "ball" => {
                    let r = radius.ok_or_else(|| ConfigError("indicator: missing R".into()))?;
                    TestFunction::indicator_ball(r).map_err(|e| ConfigError(format!("{e}")))
                }
                "annulus" => {
                    let r0 = r0.ok_or_else(|| ConfigError("indicator: missing r0".into()))?;
                    let r1 = r1.ok_or_else(|| ConfigError("indicator: missing r1".into()))?;
                    TestFunction::indicator_annulus(r0, r1).map_err(|e| ConfigError(format!("{e}")))
                }
                other => field_err("indicator.shape", format!("unknown shape `{other}`")),
            },
            TestFunctionConfig::Scaled { c, f } => Ok(TestFunction::scaled(*c, f.build()?)),
            TestFunctionConfig::Sum { terms } => Ok(TestFunction::sum(
                terms
                    .iter()
                    .map(|t| t.build())
                    .collect::<ConfigResult<_>>()?,
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// spaces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceConfig {
    Lebesgue {
        q: f64,
        omega: WeightConfig,
    },
    CentralMorrey {
        q: f64,
        lambda: f64,
        v: WeightConfig,
        omega: WeightConfig,
    },
    Herz {
        alpha: f64,
        p: f64,
        q: f64,
        v: WeightConfig,
        omega: WeightConfig,
    },
    MorreyHerz {
        alpha: f64,
        lambda: f64,
        p: f64,
        q: f64,
        v: WeightConfig,
        omega: WeightConfig,
    },
}

impl SpaceConfig {
    pub fn build(&self) -> ConfigResult<SpaceSpec> {
        let spec = match self {
            SpaceConfig::Lebesgue { q, omega } => SpaceSpec::Lebesgue {
                q: *q,
                omega: omega.build()?,
            },
            SpaceConfig::CentralMorrey {
                q,
                lambda,
                v,
                omega,
            } => SpaceSpec::CentralMorrey {
                q: *q,
                lambda: *lambda,
                v: v.build()?,
                omega: omega.build()?,
            },
            SpaceConfig::Herz {
                alpha,
                p,
                q,
                v,
                omega,
            } => SpaceSpec::Herz {
                alpha: *alpha,
                p: *p,
                q: *q,
                v: v.build()?,
                omega: omega.build()?,
            },
            SpaceConfig::MorreyHerz {
                alpha,
                lambda,
                p,
                q,
                v,
                omega,
            } => SpaceSpec::MorreyHerz {
                alpha: *alpha,
                lambda: *lambda,
                p: *p,
                q: *q,
                v: v.build()?,
                omega: omega.build()?,
            },
        };
        spec.validate()
            .map_err(|e| ConfigError(format!("space: {e}")))?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportConfig {
    Cube([f64; 2]),
    Annulus([MaybeInf; 2]),
}

impl SupportConfig {
    fn build(&self) -> SupportRegion {
        match self {
            SupportConfig::Cube([lo, hi]) => SupportRegion::Cube { lo: *lo, hi: *hi },
            SupportConfig::Annulus([lo, hi]) => SupportRegion::Annulus {
                lo: lo.value(),
                hi: hi.value(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelTermConfig {
    pub expr: String,
    pub support: SupportConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelConfig {
    Closed {
        #[serde(default)]
        expr: Option<String>,
        #[serde(default)]
        support: Option<SupportConfig>,
        #[serde(default)]
        terms: Option<Vec<KernelTermConfig>>,
        convention: ConventionConfig,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionConfig {
    HausdorffPhi,
    HybridPhi,
    HardyCesaroPsi,
}

impl ConventionConfig {
    fn build(&self) -> KernelConvention {
        match self {
            ConventionConfig::HausdorffPhi => KernelConvention::HausdorffPhi,
            ConventionConfig::HybridPhi => KernelConvention::HybridPhi,
            ConventionConfig::HardyCesaroPsi => KernelConvention::HardyCesaroPsi,
        }
    }
}

/// Parse a kernel grammar expression: a product of an optional coefficient
/// and optional `|y|^e` factors, e.g. `"1"`, `"2.5*|y|^-0.25"`.
pub fn parse_kernel_expr(expr: &str) -> ConfigResult<(f64, f64)> {
    let mut coeff = 1.0;
    let mut power = 0.0;
    for part in expr.split('*') {
        let part = part.trim();
        if part.is_empty() {
            return field_err("kernel.expr", "empty factor");
        }
        if let Some(rest) = part.strip_prefix("|y|") {
            if rest.is_empty() {
                power += 1.0;
            } else if let Some(e) = rest.strip_prefix('^') {
                power += e
                    .parse::<f64>()
                    .map_err(|e| ConfigError(format!("kernel.expr: bad exponent: {e}")))?;
            } else {
                return field_err("kernel.expr", format!("unrecognized factor `{part}`"));
            }
        } else {
            coeff *= part
                .parse::<f64>()
                .map_err(|e| ConfigError(format!("kernel.expr: bad coefficient `{part}`: {e}")))?;
        }
    }
    Ok((coeff, power))
}

/// Parse a scalar-map expression: `"y1"`, `"2*y1^0.5"`, `"|y|^-1"`,
/// `"3*|y|^2"`, or a bare constant.
pub fn parse_map_expr(expr: &str) -> ConfigResult<ScalarMap> {
    let mut coeff = 1.0;
    let mut power = 0.0;
    let mut radial = false;
    let mut coord = false;
    for part in expr.split('*') {
        let part = part.trim();
        if let Some(rest) = part.strip_prefix("|y|") {
            radial = true;
            if rest.is_empty() {
                power += 1.0;
            } else if let Some(e) = rest.strip_prefix('^') {
                power += e
                    .parse::<f64>()
                    .map_err(|e| ConfigError(format!("family.expr: bad exponent: {e}")))?;
            } else {
                return field_err("family.expr", format!("unrecognized factor `{part}`"));
            }
        } else if let Some(rest) = part.strip_prefix("y1") {
            coord = true;
            if rest.is_empty() {
                power += 1.0;
            } else if let Some(e) = rest.strip_prefix('^') {
                power += e
                    .parse::<f64>()
                    .map_err(|e| ConfigError(format!("family.expr: bad exponent: {e}")))?;
            } else {
                return field_err("family.expr", format!("unrecognized factor `{part}`"));
            }
        } else {
            coeff *= part
                .parse::<f64>()
                .map_err(|e| ConfigError(format!("family.expr: bad coefficient `{part}`: {e}")))?;
        }
    }
    if radial && coord {
        return field_err("family.expr", "cannot mix |y| and y1 factors");
    }
    if coord {
        Ok(ScalarMap::CoordPower { c: coeff, e: power })
    } else if radial {
        Ok(ScalarMap::RadialPower { c: coeff, e: power })
    } else {
        // a constant map: zero-power coordinate form
        Ok(ScalarMap::CoordPower { c: coeff, e: 0.0 })
    }
}

impl KernelConfig {
    pub fn build(&self) -> ConfigResult<KernelSpec> {
        let KernelConfig::Closed {
            expr,
            support,
            terms,
            convention,
        } = self;
        let mut out = Vec::new();
        if let Some(list) = terms {
            for t in list {
                let (coeff, power) = parse_kernel_expr(&t.expr)?;
                out.push(KernelTerm {
                    coeff,
                    power,
                    support: t.support.build(),
                });
            }
        } else {
            let expr = expr
                .as_ref()
                .ok_or_else(|| ConfigError("kernel: need expr or terms".into()))?;
            let support = support
                .as_ref()
                .ok_or_else(|| ConfigError("kernel: need support".into()))?;
            let (coeff, power) = parse_kernel_expr(expr)?;
            out.push(KernelTerm {
                coeff,
                power,
                support: support.build(),
            });
        }
        Ok(KernelSpec::ClosedForm {
            terms: out,
            convention: convention.build(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyConfig {
    DiagScalar {
        expr: String,
    },
    Rotation {
        #[serde(default)]
        angle_expr: Option<String>,
        #[serde(default)]
        matrix: Option<Vec<Vec<f64>>>,
    },
    Table {
        entries: Vec<TableEntryConfig>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableEntryConfig {
    pub y: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
}

fn build_matrix(rows: &[Vec<f64>]) -> ConfigResult<Matrix> {
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        if row.len() != n {
            return field_err("matrix", "must be square");
        }
        data.extend_from_slice(row);
    }
    Matrix::new(n, data).map_err(|e| ConfigError(format!("matrix: {e}")))
}

impl FamilyConfig {
    pub fn build(&self, n: usize) -> ConfigResult<MatrixFamily> {
        match self {
            FamilyConfig::DiagScalar { expr } => Ok(MatrixFamily::DiagonalScalar {
                dim: n,
                map: parse_map_expr(expr)?,
            }),
            FamilyConfig::Rotation { angle_expr, matrix } => match (angle_expr, matrix) {
                (Some(expr), None) => {
                    if n != 2 {
                        return field_err("rotation", "angle families are 2-D");
                    }
                    Ok(MatrixFamily::Rotation(RotationFamily::Angle2D {
                        angle: parse_map_expr(expr)?,
                    }))
                }
                (None, Some(rows)) => Ok(MatrixFamily::Rotation(RotationFamily::Fixed(
                    build_matrix(rows)?,
                ))),
                _ => field_err("rotation", "need exactly one of angle_expr or matrix"),
            },
            FamilyConfig::Table { entries } => {
                let entries = entries
                    .iter()
                    .map(|e| Ok((e.y.clone(), build_matrix(&e.matrix)?)))
                    .collect::<ConfigResult<Vec<_>>>()?;
                Ok(MatrixFamily::GeneralTable { entries })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub m: usize,
    pub n: usize,
    pub kernel: KernelConfig,
    pub families: Vec<FamilyConfig>,
}

impl OperatorConfig {
    pub fn build(&self) -> ConfigResult<OperatorSpec> {
        let families = self
            .families
            .iter()
            .map(|f| f.build(self.n))
            .collect::<ConfigResult<Vec<_>>>()?;
        OperatorSpec::new(self.m, self.n, self.kernel.build()?, families)
            .map_err(|e| ConfigError(format!("operator: {e}")))
    }
}

// ---------------------------------------------------------------------------
// theorem parameters
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexConfig {
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub p: f64,
    pub q: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuckenhouptConfig {
    pub xi: f64,
    pub eta: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub r_omega: MaybeInf,
    pub r_v: MaybeInf,
}

impl MuckenhouptConfig {
    fn build(&self) -> MuckenhouptParams {
        let to_index = |m: &MaybeInf| {
            let v = m.value();
            if v.is_infinite() {
                CriticalIndex::Unbounded
            } else {
                CriticalIndex::Finite(v)
            }
        };
        MuckenhouptParams {
            xi: self.xi,
            eta: self.eta,
            delta1: self.delta1,
            delta2: self.delta2,
            r_omega: to_index(&self.r_omega),
            r_v: to_index(&self.r_v),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremConfig {
    pub theorem: String,
    pub n: usize,
    pub index: Vec<IndexConfig>,
    pub operator: OperatorConfig,
    #[serde(default)]
    pub muckenhoupt: Option<MuckenhouptConfig>,
    #[serde(default)]
    pub q_star: Option<f64>,
    #[serde(default)]
    pub v: Option<WeightConfig>,
    #[serde(default)]
    pub omega: Option<WeightConfig>,
}

pub fn parse_theorem_id(name: &str) -> ConfigResult<TheoremId> {
    Ok(match name {
        "T3.1" => TheoremId::T3_1,
        "C3.1.1" => TheoremId::C3_1_1,
        "C3.1.2" => TheoremId::C3_1_2,
        "T3.2" => TheoremId::T3_2,
        "C3.2.1" => TheoremId::C3_2_1,
        "C3.2.2" => TheoremId::C3_2_2,
        "T3.3" => TheoremId::T3_3,
        "C3.3.1" => TheoremId::C3_3_1,
        "T3.4" => TheoremId::T3_4,
        "T3.5" => TheoremId::T3_5,
        "T3.6" => TheoremId::T3_6,
        other => return field_err("theorem", format!("unknown theorem id `{other}`")),
    })
}

impl TheoremConfig {
    pub fn build(&self) -> ConfigResult<TheoremParams> {
        let theorem = parse_theorem_id(&self.theorem)?;
        let index: Vec<IndexParams> = self
            .index
            .iter()
            .map(|i| IndexParams {
                beta: i.beta,
                gamma: i.gamma,
                alpha: i.alpha,
                lambda: i.lambda,
                p: i.p,
                q: i.q,
            })
            .collect();
        let operator = self.operator.build()?;
        if theorem.is_muckenhoupt() {
            let muck = self
                .muckenhoupt
                .as_ref()
                .ok_or_else(|| ConfigError("muckenhoupt: required for T3.4-T3.6".into()))?
                .build();
            let q_star = self
                .q_star
                .ok_or_else(|| ConfigError("q_star: required for T3.4-T3.6".into()))?;
            let v = self
                .v
                .as_ref()
                .ok_or_else(|| ConfigError("v: required for T3.4-T3.6".into()))?
                .build()?;
            let omega = self
                .omega
                .as_ref()
                .ok_or_else(|| ConfigError("omega: required for T3.4-T3.6".into()))?
                .build()?;
            TheoremParams::muckenhoupt(theorem, self.n, index, operator, muck, q_star, v, omega)
                .map_err(|e| ConfigError(format!("theorem params: {e}")))
        } else {
            TheoremParams::balanced_power(theorem, self.n, index, operator)
                .map_err(|e| ConfigError(format!("theorem params: {e}")))
        }
    }
}

// ---------------------------------------------------------------------------
// per-command payloads
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormPayload {
    pub space: SpaceConfig,
    pub f: TestFunctionConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApplyPayload {
    pub operator: OperatorConfig,
    pub functions: Vec<TestFunctionConfig>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub params: TheoremConfig,
    #[serde(default = "default_k_upper")]
    pub k_upper: f64,
}

fn default_k_upper() -> f64 {
    10.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPayload {
    pub params: TheoremConfig,
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum WeightsPayload {
    BallMass {
        weight: WeightConfig,
        center: Vec<f64>,
        radius: f64,
    },
    ApCharacteristic {
        weight: WeightConfig,
        xi: f64,
        #[serde(default)]
        grid: Option<GridConfig>,
    },
    RhConstant {
        weight: WeightConfig,
        r: f64,
        #[serde(default)]
        grid: Option<GridConfig>,
    },
    CriticalIndex {
        weight: WeightConfig,
        #[serde(default)]
        r_grid: Option<Vec<f64>>,
        #[serde(default)]
        grid: Option<GridConfig>,
    },
}
