//! `sweep`: efficiency curves over L or N, and closed-form fidelity grids.

use hyperpure_core::efficiency::{self, sweep_points, EfficiencyParams, SweepAxis, SweepRow};
use hyperpure_core::protocol::{closed_form_fidelity_pair, closed_form_success_pair};
use hyperpure_core::scenario::{bitflip_pair, phaseflip_pair};
use hyperpure_core::Protocol;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{csv_text, json_text, sig12, sig12_opt};
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridMode {
    #[serde(rename = "bitflip")]
    Bitflip,
    #[serde(rename = "phaseflip")]
    Phaseflip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyTable {
    pub axis: String,
    pub params: EfficiencyParams,
    pub rows: Vec<SweepRow>,
}

pub fn efficiency_table(
    template: EfficiencyParams,
    axis: SweepAxis,
    from: f64,
    to: f64,
    step: f64,
) -> Result<EfficiencyTable> {
    let points = sweep_points(from, to, step)
        .map_err(|_| CliError::Usage(format!("empty range {from}..{to} step {step}")))?;
    let rows = points
        .par_iter()
        .map(|&x| efficiency::sweep(&template, axis, x, x, 1.0).map(|r| r[0]))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(EfficiencyTable {
        axis: match axis {
            SweepAxis::Distance => "L",
            SweepAxis::Photons => "N",
        }
        .into(),
        params: template,
        rows,
    })
}

impl EfficiencyTable {
    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &["axis_value", "R"],
            self.rows
                .iter()
                .map(|r| vec![sig12(r.axis_value), sig12(r.r)]),
        )
    }

    pub fn to_json(&self) -> String {
        json_text(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub fa: f64,
    pub fb: f64,
    pub simulated_fidelity: Option<f64>,
    pub closed_form_fidelity: Option<f64>,
    pub simulated_success: f64,
    pub closed_form_success: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityTable {
    pub mode: GridMode,
    pub m: usize,
    pub rows: Vec<FidelityRow>,
    pub max_deviation: f64,
}

/// Parses `from:to:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("grid `{spec}` must look like from:to:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let points = sweep_points(nums[0], nums[1], nums[2])
        .map_err(|_| CliError::Usage(format!("grid `{spec}` is empty")))?;
    if points.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(CliError::Usage(format!("grid `{spec}` leaves [0, 1]")));
    }
    Ok(points)
}

fn grid_row(mode: GridMode, m: usize, fa: f64, fb: f64) -> Result<FidelityRow> {
    let (input, protocol) = match mode {
        GridMode::Bitflip => (bitflip_pair(m, fa, fb)?, Protocol::bitflip(m)?),
        GridMode::Phaseflip => (phaseflip_pair(m, fa, fb)?, Protocol::phaseflip(m)?),
    };
    let r = protocol.run(&input)?;
    let closed_form_fidelity = closed_form_fidelity_pair(fa, fb).ok();
    let closed_form_success = closed_form_success_pair(fa, fb);
    let fid_dev = match (r.output_fidelity, closed_form_fidelity) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    Ok(FidelityRow {
        fa,
        fb,
        simulated_fidelity: r.output_fidelity,
        closed_form_fidelity,
        simulated_success: r.success_probability,
        closed_form_success,
        deviation: fid_dev.max((r.success_probability - closed_form_success).abs()),
    })
}

/// Every `(F_a, F_b)` pair on `grid × grid`, row-major in `F_a`.
pub fn fidelity_table(mode: GridMode, m: usize, grid: &[f64]) -> Result<FidelityTable> {
    let pairs: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(a, b)| grid_row(mode, m, a, b))
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(FidelityTable {
        mode,
        m,
        rows,
        max_deviation,
    })
}

impl FidelityTable {
    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &[
                "F_a",
                "F_b",
                "simulated_fidelity",
                "closed_form_fidelity",
                "simulated_success",
                "closed_form_success",
                "deviation",
            ],
            self.rows.iter().map(|r| {
                vec![
                    sig12(r.fa),
                    sig12(r.fb),
                    sig12_opt(r.simulated_fidelity),
                    sig12_opt(r.closed_form_fidelity),
                    sig12(r.simulated_success),
                    sig12(r.closed_form_success),
                    sig12(r.deviation),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> String {
        json_text(self)
    }
}
