//! `simulate`: one configured run and its machine-readable record.

use hyperpure_core::efficiency::{p_one, p_two, ratio_r, EfficiencyParams};
use hyperpure_core::noise::ghz_weights;
use hyperpure_core::protocol::{
    closed_form_fidelity_general, closed_form_fidelity_pair, closed_form_success_pair,
};
use hyperpure_core::state::{ghz_index_count, make_ghz_pol, Ensemble, Sign};
use hyperpure_core::{NoiseKind, Protocol, ProtocolResult};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Mode, Prepared, ProtocolConfig};
use crate::format::{csv_text, json_text, sig12};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRecord {
    pub pattern: String,
    pub probability: f64,
    pub accepted: bool,
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Comparison {
    pub quantity: String,
    pub simulated: f64,
    pub closed_form: f64,
    pub deviation: f64,
}

impl Comparison {
    fn new(quantity: impl Into<String>, simulated: f64, closed_form: f64) -> Self {
        Self {
            quantity: quantity.into(),
            simulated,
            closed_form,
            deviation: (simulated - closed_form).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormRecord {
    pub formula: String,
    pub comparisons: Vec<Comparison>,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyRecord {
    pub p1: f64,
    pub eta_t: f64,
    pub p_one: f64,
    pub p_two: f64,
    #[serde(rename = "R")]
    pub ratio_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema_version: u32,
    pub tool_version: String,
    pub timestamp: Option<String>,
    pub config: ProtocolConfig,
    pub photons: usize,
    pub success_probability: f64,
    pub rejected_probability: f64,
    pub output_fidelity: Option<f64>,
    pub patterns: Vec<PatternRecord>,
    pub closed_form: Option<ClosedFormRecord>,
    pub efficiency: Option<EfficiencyRecord>,
}

/// Weights on `Φ_i^+` for every index, zero where absent.
fn plus_weights(ensemble: &Ensemble) -> Result<Vec<f64>> {
    let mut w = vec![0.0; ghz_index_count(ensemble.photons())];
    for ((index, sign), p) in ghz_weights(ensemble)? {
        if sign == Sign::Plus {
            w[index] += p;
        }
    }
    Ok(w)
}

fn closed_form(
    config: &ProtocolConfig,
    prepared: &Prepared,
    result: &ProtocolResult,
) -> Result<Option<ClosedFormRecord>> {
    let mut comparisons = Vec::new();
    let formula = match config.mode {
        Mode::Bitflip => {
            let pw = plus_weights(&prepared.pol)?;
            let sw = plus_weights(&prepared.spatial)?;
            let success: f64 = pw.iter().zip(&sw).map(|(a, b)| a * b).sum();
            comparisons.push(Comparison::new(
                "success_probability",
                result.success_probability,
                success,
            ));
            if let Some(f) = result.output_fidelity {
                let fs = closed_form_fidelity_general(&pw, &sw)?;
                let expect = match config.target.sign {
                    Sign::Plus => fs[config.target.index],
                    Sign::Minus => 0.0,
                };
                comparisons.push(Comparison::new("fidelity", f, expect));
            }
            "matched-index"
        }
        Mode::Phaseflip => {
            let off_zero = config
                .pol_noise
                .iter()
                .chain(&config.spatial_noise)
                .any(|e| e.kind != NoiseKind::PhaseFlip || e.target_index != 0);
            if off_zero || config.target != hyperpure_core::GhzLabel::PHI0_PLUS {
                return Ok(None);
            }
            let fa = 1.0 - config.pol_noise.iter().map(|e| e.weight).sum::<f64>();
            let fb = 1.0 - config.spatial_noise.iter().map(|e| e.weight).sum::<f64>();
            comparisons.push(Comparison::new(
                "success_probability",
                result.success_probability,
                closed_form_success_pair(fa, fb),
            ));
            if let Some(f) = result.output_fidelity {
                comparisons.push(Comparison::new(
                    "fidelity",
                    f,
                    closed_form_fidelity_pair(fa, fb)?,
                ));
            }
            "pair"
        }
        Mode::General => {
            let pw = plus_weights(&prepared.pol)?;
            let sw = plus_weights(&prepared.spatial)?;
            let matched = Protocol::bitflip(config.m)?.run(&prepared.input)?;
            let success: f64 = pw.iter().zip(&sw).map(|(a, b)| a * b).sum();
            comparisons.push(Comparison::new(
                "matched_success",
                matched.success_probability,
                success,
            ));
            if success > 0.0 {
                let fs = closed_form_fidelity_general(&pw, &sw)?;
                for i in (0..pw.len()).filter(|&i| pw[i] > 0.0 || sw[i] > 0.0) {
                    let sim = matched
                        .fidelity_against(&make_ghz_pol(config.m, i, Sign::Plus)?)?
                        .unwrap_or(0.0);
                    comparisons.push(Comparison::new(
                        format!("matched_fidelity[{i}]"),
                        sim,
                        fs[i],
                    ));
                }
            }
            "matched-index"
        }
        Mode::DeterministicDemo => {
            comparisons.push(Comparison::new(
                "success_probability",
                result.success_probability,
                1.0,
            ));
            comparisons.push(Comparison::new(
                "fidelity",
                result.output_fidelity.unwrap_or(0.0),
                1.0,
            ));
            "deterministic"
        }
    };
    let max_deviation = comparisons.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(Some(ClosedFormRecord {
        formula: formula.into(),
        comparisons,
        max_deviation,
    }))
}

fn efficiency(config: &ProtocolConfig, p1: f64) -> Result<Option<EfficiencyRecord>> {
    let Some(e) = config.efficiency else {
        return Ok(None);
    };
    let params = EfficiencyParams {
        eta_d: e.eta_d,
        eta_c: e.eta_c,
        distance_km: e.distance_km,
        attenuation_km: e.attenuation_km,
        photons: config.m as u32,
        p1,
    };
    Ok(Some(EfficiencyRecord {
        p1,
        eta_t: params.eta_t(),
        p_one: p_one(&params)?,
        p_two: p_two(&params)?,
        ratio_r: ratio_r(&params)?,
    }))
}

pub fn simulate(config: &ProtocolConfig, timestamp: Option<String>) -> Result<RunRecord> {
    let prepared = config.prepare()?;
    let result = prepared.protocol.run(&prepared.input)?;
    let mut patterns = Vec::new();
    for (pattern, &probability) in &result.pattern_probabilities {
        let accepted = result.accepted.contains_key(pattern);
        let fidelity = if accepted {
            result.pattern_fidelity(pattern, &result.target)?
        } else {
            None
        };
        patterns.push(PatternRecord {
            pattern: pattern.to_string(),
            probability,
            accepted,
            fidelity,
        });
    }
    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        timestamp,
        config: config.clone(),
        photons: result.photons,
        success_probability: result.success_probability,
        rejected_probability: result.rejected_probability,
        output_fidelity: result.output_fidelity,
        patterns,
        closed_form: closed_form(config, &prepared, &result)?,
        efficiency: efficiency(config, result.success_probability.clamp(0.0, 1.0))?,
    })
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        json_text(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::CliError::Parse(e.to_string()))
    }

    /// `field,value` rows with dotted/indexed paths mirroring the JSON.
    pub fn to_csv(&self) -> Result<String> {
        let value = serde_json::to_value(self).expect("records serialize");
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        csv_text(
            &["field", "value"],
            rows.into_iter().map(|(k, v)| vec![k, v]),
        )
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Null => out.push((prefix.into(), String::new())),
        Value::Bool(b) => out.push((prefix.into(), b.to_string())),
        Value::Number(n) => {
            let text = match (n.as_u64(), n.as_i64(), n.as_f64()) {
                (Some(u), _, _) => u.to_string(),
                (_, Some(i), _) => i.to_string(),
                (_, _, Some(f)) => sig12(f),
                _ => n.to_string(),
            };
            out.push((prefix.into(), text));
        }
        Value::String(s) => out.push((prefix.into(), s.clone())),
    }
}
