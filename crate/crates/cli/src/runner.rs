//! Experiment dispatch and CSV emission.
//!
//! Each payload item produces one or more result records. Module errors are
//! surfaced per record (`verdict = "error"`) without aborting the batch.

use std::io::Write;
use std::time::Instant;

use serde_json::{json, Value};

use hausdorff_core::constants::compute_constant;
use hausdorff_core::operators::apply_operator;
use hausdorff_core::radial::IntegralOutcome;
use hausdorff_core::spaces::{space_norm, DyadicRange, NormOutcome, TestFunction};
use hausdorff_core::verify::{build_extremal, sharpness_sweep, two_sided_check};
use hausdorff_core::weights::rh_constant;
use hausdorff_core::weights::{
    ap_characteristic, ball_mass, critical_index_estimate, CriticalIndex,
};
use hausdorff_core::QuadratureSpec;

use crate::config::{
    ApplyPayload, Command, ConfigError, ConfigResult, ExperimentConfig, GridConfig, NormPayload,
    SweepPayload, VerifyPayload, WeightsPayload,
};

/// One CSV row.
#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub command: String,
    pub id: String,
    pub value: f64,
    pub error: f64,
    pub verdict: String,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub inputs_json: String,
}

impl ResultRecord {
    fn is_failure(&self) -> bool {
        self.verdict == "error" || self.verdict == "violation"
    }
}

/// Whether any record in the batch carries an error or a violation verdict
/// (drives the process exit code).
pub fn any_failure(records: &[ResultRecord]) -> bool {
    records.iter().any(|r| r.is_failure())
}

#[allow(clippy::too_many_arguments)]
fn record(
    command: Command,
    id: String,
    value: f64,
    error: f64,
    verdict: String,
    seed: u64,
    started: Instant,
    inputs: &Value,
) -> ResultRecord {
    ResultRecord {
        command: command.to_string(),
        id,
        value,
        error,
        verdict,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
        inputs_json: inputs.to_string(),
    }
}

fn error_record(
    command: Command,
    id: String,
    seed: u64,
    started: Instant,
    inputs: &Value,
    message: impl std::fmt::Display,
) -> ResultRecord {
    let inputs = json!({ "input": inputs, "error": message.to_string() });
    record(
        command,
        id,
        f64::NAN,
        f64::NAN,
        "error".into(),
        seed,
        started,
        &inputs,
    )
}

/// Run every payload item of the experiment. Payload items are processed in
/// order; per-item failures become `verdict = "error"` records.
pub fn run_experiment(cfg: &ExperimentConfig) -> ConfigResult<Vec<ResultRecord>> {
    let quad = cfg.quad.to_spec();
    let range = cfg.range.to_range();
    let mut records = Vec::new();
    match cfg.command {
        Command::Norm => {
            let items: Vec<NormPayload> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_norm(idx, &item, &range, &quad));
            }
        }
        Command::Apply => {
            let items: Vec<ApplyPayload> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_apply(idx, &item, &quad));
            }
        }
        Command::Constant => {
            let items: Vec<crate::config::TheoremConfig> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_constant(idx, &item, &quad));
            }
        }
        Command::Verify => {
            let items: Vec<VerifyPayload> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_verify(idx, &item, &range, &quad));
            }
        }
        Command::Weights => {
            let items: Vec<WeightsPayload> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_weights(idx, &item, &quad));
            }
        }
        Command::Sweep => {
            let items: Vec<SweepPayload> = parse_payload_items(&cfg.payload)?;
            for (idx, item) in items.into_iter().enumerate() {
                records.extend(run_sweep(idx, &item, &range, &quad));
            }
        }
    }
    Ok(records)
}

/// A payload is either one item or an array of items; parsing per element
/// keeps serde's field-level error messages intact.
fn parse_payload_items<T: serde::de::DeserializeOwned>(value: &Value) -> ConfigResult<Vec<T>> {
    match value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                serde_json::from_value(v.clone())
                    .map_err(|e| ConfigError(format!("payload[{i}]: {e}")))
            })
            .collect(),
        other => Ok(vec![serde_json::from_value(other.clone())
            .map_err(|e| ConfigError(format!("payload: {e}")))?]),
    }
}

fn inputs_of<T: serde::Serialize>(item: &T) -> Value {
    serde_json::to_value(item).unwrap_or(Value::Null)
}

fn run_norm(
    idx: usize,
    item: &NormPayload,
    range: &DyadicRange,
    quad: &QuadratureSpec,
) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let id = format!("norm[{idx}]");
    let built = (|| -> ConfigResult<_> { Ok((item.space.build()?, item.f.build()?)) })();
    let (space, f) = match built {
        Ok(x) => x,
        Err(e) => {
            return vec![error_record(
                Command::Norm,
                id,
                quad.seed,
                started,
                &inputs,
                e,
            )]
        }
    };
    match space_norm(&space, &f, range, quad) {
        Ok(NormOutcome::Finite(v)) => {
            let verdict = if v.truncation_warning {
                "ok_truncated".to_string()
            } else {
                "ok".to_string()
            };
            vec![record(
                Command::Norm,
                id,
                v.value,
                v.std_error,
                verdict,
                quad.seed,
                started,
                &inputs,
            )]
        }
        Ok(NormOutcome::Divergent) => vec![record(
            Command::Norm,
            id,
            f64::INFINITY,
            0.0,
            "divergent".into(),
            quad.seed,
            started,
            &inputs,
        )],
        Err(e) => vec![error_record(
            Command::Norm,
            id,
            quad.seed,
            started,
            &inputs,
            e,
        )],
    }
}

fn run_apply(idx: usize, item: &ApplyPayload, quad: &QuadratureSpec) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let built = (|| -> ConfigResult<_> {
        let op = item.operator.build()?;
        let fs = item
            .functions
            .iter()
            .map(|f| f.build())
            .collect::<ConfigResult<Vec<_>>>()?;
        Ok((op, fs))
    })();
    let (op, fs) = match built {
        Ok(x) => x,
        Err(e) => {
            return vec![error_record(
                Command::Apply,
                format!("apply[{idx}]"),
                quad.seed,
                started,
                &inputs,
                e,
            )]
        }
    };
    let refs: Vec<&TestFunction> = fs.iter().collect();
    item.points
        .iter()
        .enumerate()
        .map(|(pi, x)| {
            let started = Instant::now();
            let id = format!("apply[{idx}].x{pi}");
            match apply_operator(&op, &refs, x, quad) {
                Ok(v) => record(
                    Command::Apply,
                    id,
                    v,
                    0.0,
                    "ok".into(),
                    quad.seed,
                    started,
                    &json!({ "point": x }),
                ),
                Err(e) => error_record(
                    Command::Apply,
                    id,
                    quad.seed,
                    started,
                    &json!({ "point": x }),
                    e,
                ),
            }
        })
        .collect()
}

fn run_constant(
    idx: usize,
    item: &crate::config::TheoremConfig,
    quad: &QuadratureSpec,
) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let params = match item.build() {
        Ok(p) => p,
        Err(e) => {
            return vec![error_record(
                Command::Constant,
                format!("constant[{idx}]"),
                quad.seed,
                started,
                &inputs,
                e,
            )]
        }
    };
    match compute_constant(&params, quad) {
        Ok(report) => {
            let verdict = if report.value.is_infinite() {
                "divergent".to_string()
            } else if report.branch_ambiguous {
                "ok_branch_ambiguous".to_string()
            } else {
                "ok".to_string()
            };
            vec![record(
                Command::Constant,
                report.id.to_string(),
                report.value,
                0.0,
                verdict,
                quad.seed,
                started,
                &inputs,
            )]
        }
        Err(e) => vec![error_record(
            Command::Constant,
            format!("constant[{idx}]"),
            quad.seed,
            started,
            &inputs,
            e,
        )],
    }
}

fn run_verify(
    idx: usize,
    item: &VerifyPayload,
    range: &DyadicRange,
    quad: &QuadratureSpec,
) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let params = match item.params.build() {
        Ok(p) => p,
        Err(e) => {
            return vec![error_record(
                Command::Verify,
                format!("verify[{idx}]"),
                quad.seed,
                started,
                &inputs,
                e,
            )]
        }
    };
    match two_sided_check(&params, item.k_upper, range, quad) {
        Ok(report) => {
            let inputs = json!({
                "input": inputs,
                "constant": report.constant,
                "gap": report.relative_gap,
                "vacuous": report.vacuous,
            });
            vec![record(
                Command::Verify,
                format!("{}", report.theorem),
                report.ratio,
                report.quadrature_error,
                report.verdict.to_string(),
                quad.seed,
                started,
                &inputs,
            )]
        }
        Err(e) => vec![error_record(
            Command::Verify,
            format!("verify[{idx}]"),
            quad.seed,
            started,
            &inputs,
            e,
        )],
    }
}

fn run_weights(idx: usize, item: &WeightsPayload, quad: &QuadratureSpec) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let id = format!("weights[{idx}]");
    let outcome = (|| -> Result<(f64, String), String> {
        match item {
            WeightsPayload::BallMass {
                weight,
                center,
                radius,
            } => {
                let w = weight.build().map_err(|e| e.to_string())?;
                let v = ball_mass(&w, center, *radius, quad).map_err(|e| e.to_string())?;
                Ok((v, "ok".into()))
            }
            WeightsPayload::ApCharacteristic { weight, xi, grid } => {
                let w = weight.build().map_err(|e| e.to_string())?;
                let g = grid
                    .clone()
                    .unwrap_or(GridConfig::Named("default".into()))
                    .build(w.dim(), quad.seed)
                    .map_err(|e| e.to_string())?;
                match ap_characteristic(&w, *xi, &g, quad).map_err(|e| e.to_string())? {
                    IntegralOutcome::Finite(v) => Ok((v, "ok".into())),
                    IntegralOutcome::Divergent => Ok((f64::INFINITY, "divergent".into())),
                }
            }
            WeightsPayload::RhConstant { weight, r, grid } => {
                let w = weight.build().map_err(|e| e.to_string())?;
                let g = grid
                    .clone()
                    .unwrap_or(GridConfig::Named("default".into()))
                    .build(w.dim(), quad.seed)
                    .map_err(|e| e.to_string())?;
                match rh_constant(&w, *r, &g, quad).map_err(|e| e.to_string())? {
                    IntegralOutcome::Finite(v) => Ok((v, "ok".into())),
                    IntegralOutcome::Divergent => Ok((f64::INFINITY, "divergent".into())),
                }
            }
            WeightsPayload::CriticalIndex {
                weight,
                r_grid,
                grid,
            } => {
                let w = weight.build().map_err(|e| e.to_string())?;
                let g = grid
                    .clone()
                    .unwrap_or(GridConfig::Named("default".into()))
                    .build(w.dim(), quad.seed)
                    .map_err(|e| e.to_string())?;
                let default_r: Vec<f64> = (1..=100).map(|i| 1.0 + i as f64 * 0.1).collect();
                let r = r_grid.clone().unwrap_or(default_r);
                match critical_index_estimate(&w, &r, &g, quad).map_err(|e| e.to_string())? {
                    CriticalIndex::Finite(v) => Ok((v, "ok".into())),
                    CriticalIndex::Unbounded => Ok((f64::INFINITY, "unbounded".into())),
                }
            }
        }
    })();
    match outcome {
        Ok((value, verdict)) => vec![record(
            Command::Weights,
            id,
            value,
            0.0,
            verdict,
            quad.seed,
            started,
            &inputs,
        )],
        Err(e) => vec![error_record(
            Command::Weights,
            id,
            quad.seed,
            started,
            &inputs,
            e,
        )],
    }
}

fn run_sweep(
    idx: usize,
    item: &SweepPayload,
    range: &DyadicRange,
    quad: &QuadratureSpec,
) -> Vec<ResultRecord> {
    let started = Instant::now();
    let inputs = inputs_of(item);
    let params = match item.params.build() {
        Ok(p) => p,
        Err(e) => {
            return vec![error_record(
                Command::Sweep,
                format!("sweep[{idx}]"),
                quad.seed,
                started,
                &inputs,
                e,
            )]
        }
    };
    // double-check the extremal family exists before sweeping
    if let Err(e) = build_extremal(&params, item.eps_list.first().copied().unwrap_or(0.1)) {
        return vec![error_record(
            Command::Sweep,
            format!("sweep[{idx}]"),
            quad.seed,
            started,
            &inputs,
            e,
        )];
    }
    match sharpness_sweep(&params, &item.eps_list, range, quad) {
        Ok(sweep) => {
            let mut out = Vec::new();
            for (i, rep) in sweep.reports.iter().enumerate() {
                let started = Instant::now();
                out.push(record(
                    Command::Sweep,
                    format!("{}.eps={}", rep.theorem, item.eps_list[i]),
                    rep.ratio,
                    rep.quadrature_error,
                    rep.verdict.to_string(),
                    quad.seed,
                    started,
                    &json!({ "constant": rep.constant, "gap": rep.relative_gap }),
                ));
            }
            let verdict = if sweep.nondecreasing && sweep.below_constant {
                "nondecreasing".to_string()
            } else {
                "violation".to_string()
            };
            out.push(record(
                Command::Sweep,
                format!("{}.summary", params.theorem),
                sweep.final_ratio,
                0.0,
                verdict,
                quad.seed,
                started,
                &json!({ "constant": sweep.constant }),
            ));
            out
        }
        Err(e) => vec![error_record(
            Command::Sweep,
            format!("sweep[{idx}]"),
            quad.seed,
            started,
            &inputs,
            e,
        )],
    }
}

/// CSV escaping: quote fields containing separators or quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        // 17 significant digits round-trip f64 exactly
        format!("{v:.16e}")
    }
}

/// Write records as UTF-8 CSV with a fixed column order.
pub fn emit_csv<W: Write>(records: &[ResultRecord], out: &mut W) -> std::io::Result<()> {
    writeln!(
        out,
        "command,id,value,error,verdict,seed,elapsed_ms,inputs_json"
    )?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_field(&r.command),
            csv_field(&r.id),
            fmt_float(r.value),
            fmt_float(r.error),
            csv_field(&r.verdict),
            r.seed,
            r.elapsed_ms,
            csv_field(&r.inputs_json),
        )?;
    }
    Ok(())
}
