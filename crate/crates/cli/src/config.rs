//! TOML run configuration.
//!
//! ```toml
//! m = 3
//! mode = "bitflip"
//!
//! [[pol_noise]]
//! kind = "bit-flip"
//! target_index = 1
//! weight = 0.2
//!
//! [[spatial_noise]]
//! kind = "bit-flip"
//! target_index = 1
//! weight = 0.3
//! ```

use std::fs;
use std::path::Path;

use hyperpure_core::efficiency::EfficiencyParams;
use hyperpure_core::noise::{dof_ensemble, product_ensemble};
use hyperpure_core::state::{ghz_index_count, Ensemble, GhzLabel, MAX_PHOTONS};
use hyperpure_core::{CorrectionPlan, NoiseDof, NoiseKind, NoiseSpec, Protocol};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Bitflip,
    Phaseflip,
    General,
    DeterministicDemo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Bitflip => "bitflip",
            Mode::Phaseflip => "phaseflip",
            Mode::General => "general",
            Mode::DeterministicDemo => "deterministic-demo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corrections {
    /// Flip toward the most likely spatial error consistent with the pattern.
    Decode,
    /// Flip the photons in the smaller port group.
    Minority,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseEntry {
    pub kind: NoiseKind,
    #[serde(default)]
    pub target_index: usize,
    pub weight: f64,
}

impl NoiseEntry {
    pub fn spec(&self, dof: NoiseDof) -> NoiseSpec {
        NoiseSpec {
            dof,
            kind: self.kind,
            target_index: self.target_index,
            weight: self.weight,
        }
    }
}

/// Link parameters for attaching one-copy/two-copy efficiencies to a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyConfig {
    #[serde(rename = "L")]
    pub distance_km: f64,
    #[serde(rename = "L0", default = "default_l0")]
    pub attenuation_km: f64,
    #[serde(default = "default_eta_d")]
    pub eta_d: f64,
    #[serde(default = "default_eta_c")]
    pub eta_c: f64,
}

fn default_l0() -> f64 {
    EfficiencyParams::DEFAULT_ATTENUATION_KM
}

fn default_eta_d() -> f64 {
    EfficiencyParams::DEFAULT_ETA_D
}

fn default_eta_c() -> f64 {
    EfficiencyParams::DEFAULT_ETA_C
}

fn default_target() -> GhzLabel {
    GhzLabel::PHI0_PLUS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub m: usize,
    pub mode: Mode,
    #[serde(default)]
    pub pol_noise: Vec<NoiseEntry>,
    #[serde(default)]
    pub spatial_noise: Vec<NoiseEntry>,
    #[serde(default = "default_target")]
    pub target: GhzLabel,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrections: Option<Corrections>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<EfficiencyConfig>,
}

/// A validated configuration turned into a runnable protocol and input.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub protocol: Protocol,
    pub pol: Ensemble,
    pub spatial: Ensemble,
    pub input: Ensemble,
}

impl ProtocolConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Schema-level checks: photon count, kinds allowed by the mode, index
    /// ranges and the corrections switch.
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_PHOTONS).contains(&self.m) {
            return Err(CliError::config(
                "m",
                format!("must be in 2..={MAX_PHOTONS}, got {}", self.m),
            ));
        }
        let limit = ghz_index_count(self.m);
        if self.target.index >= limit {
            return Err(CliError::config(
                "target.index",
                format!("must be below {limit} for m = {}", self.m),
            ));
        }
        let allowed = match self.mode {
            Mode::Phaseflip => NoiseKind::PhaseFlip,
            _ => NoiseKind::BitFlip,
        };
        for (name, list) in [
            ("pol_noise", &self.pol_noise),
            ("spatial_noise", &self.spatial_noise),
        ] {
            for (i, entry) in list.iter().enumerate() {
                let field = |f: &str| format!("{name}[{i}].{f}");
                if entry.kind != allowed {
                    return Err(CliError::config(
                        field("kind"),
                        format!(
                            "mode `{}` does not accept {:?} noise",
                            self.mode.name(),
                            entry.kind
                        ),
                    ));
                }
                let min = if entry.kind == NoiseKind::BitFlip {
                    1
                } else {
                    0
                };
                if entry.target_index < min || entry.target_index >= limit {
                    return Err(CliError::config(
                        field("target_index"),
                        format!("must be in {min}..{limit} for m = {}", self.m),
                    ));
                }
                if !(0.0..=1.0).contains(&entry.weight) {
                    return Err(CliError::config(field("weight"), "must lie in [0, 1]"));
                }
            }
        }
        if self.corrections.is_some() && self.mode != Mode::General {
            return Err(CliError::config(
                "corrections",
                "only valid with mode = \"general\"",
            ));
        }
        if self.mode == Mode::DeterministicDemo {
            if self.m < 3 {
                return Err(CliError::config(
                    "m",
                    "deterministic-demo needs at least 3 photons",
                ));
            }
            if self.pol_noise.len() != 1 || self.spatial_noise.len() != 1 {
                return Err(CliError::config(
                    "pol_noise",
                    "deterministic-demo takes exactly one pol_noise and one spatial_noise entry",
                ));
            }
        }
        Ok(())
    }

    pub fn prepare(&self) -> Result<Prepared> {
        let specs: Vec<NoiseSpec> = self
            .pol_noise
            .iter()
            .map(|e| e.spec(NoiseDof::Polarization))
            .chain(self.spatial_noise.iter().map(|e| e.spec(NoiseDof::Spatial)))
            .collect();
        let pol = dof_ensemble(self.m, NoiseDof::Polarization, &specs)?;
        let spatial = dof_ensemble(self.m, NoiseDof::Spatial, &specs)?;
        let input = product_ensemble(&pol, &spatial)?;
        let protocol = match self.mode {
            Mode::Bitflip => Protocol::bitflip(self.m)?,
            Mode::Phaseflip => Protocol::phaseflip(self.m)?,
            Mode::General => {
                Protocol::general(match self.corrections.unwrap_or(Corrections::Decode) {
                    Corrections::Decode => CorrectionPlan::syndrome_decoding_for(&pol, &spatial)?,
                    Corrections::Minority => CorrectionPlan::minority_flip(self.m)?,
                    Corrections::None => CorrectionPlan::none(self.m)?,
                })
            }
            Mode::DeterministicDemo => {
                if self.pol_noise[0].target_index == self.spatial_noise[0].target_index {
                    return Err(CliError::Domain(hyperpure_core::Error::Parameter {
                        name: "spatial_noise.target_index",
                        value: self.spatial_noise[0].target_index as f64,
                    }));
                }
                Protocol::general(CorrectionPlan::syndrome_decoding_for(&pol, &spatial)?)
            }
        };
        Ok(Prepared {
            protocol: protocol.with_target(self.target),
            pol,
            spatial,
            input,
        })
    }
}
