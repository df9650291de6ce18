//! One-copy vs two-copy purification efficiency under fiber loss.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Link and detector parameters. Distances in km.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EfficiencyParams {
    pub eta_d: f64,
    pub eta_c: f64,
    pub distance_km: f64,
    pub attenuation_km: f64,
    pub photons: u32,
    pub p1: f64,
}

impl EfficiencyParams {
    pub const DEFAULT_ETA_D: f64 = 0.9;
    pub const DEFAULT_ETA_C: f64 = 0.95;
    pub const DEFAULT_ATTENUATION_KM: f64 = 25.0;

    pub fn new(photons: u32, distance_km: f64) -> Self {
        Self {
            eta_d: Self::DEFAULT_ETA_D,
            eta_c: Self::DEFAULT_ETA_C,
            distance_km,
            attenuation_km: Self::DEFAULT_ATTENUATION_KM,
            photons,
            p1: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Parameter { name, value: v })
            }
        };
        unit("eta_d", self.eta_d)?;
        unit("eta_c", self.eta_c)?;
        unit("p1", self.p1)?;
        if !(self.distance_km >= 0.0 && self.distance_km.is_finite()) {
            return Err(Error::Parameter {
                name: "L",
                value: self.distance_km,
            });
        }
        if !(self.attenuation_km > 0.0 && self.attenuation_km.is_finite()) {
            return Err(Error::Parameter {
                name: "L0",
                value: self.attenuation_km,
            });
        }
        if self.photons < 2 {
            return Err(Error::Parameter {
                name: "N",
                value: f64::from(self.photons),
            });
        }
        Ok(())
    }

    /// Channel transmission `e^{-L/L0}`.
    pub fn eta_t(&self) -> f64 {
        libm::exp(-self.distance_km / self.attenuation_km)
    }

    /// Per-photon survival `η_t η_d η_c`.
    pub fn eta_product(&self) -> f64 {
        self.eta_t() * self.eta_d * self.eta_c
    }

    fn eta_pow(&self, factor: u32) -> f64 {
        libm::pow(self.eta_product(), f64::from(self.photons * factor))
    }
}

pub fn p_one(params: &EfficiencyParams) -> Result<f64> {
    params.validate()?;
    Ok(params.p1 * params.eta_pow(1))
}

pub fn p_two(params: &EfficiencyParams) -> Result<f64> {
    params.validate()?;
    Ok(0.25 * params.p1 * params.eta_pow(2))
}

/// `p_one / p_two = 4 / (η_t η_d η_c)^N`; `p1` cancels.
pub fn ratio_r(params: &EfficiencyParams) -> Result<f64> {
    params.validate()?;
    Ok(4.0 / params.eta_pow(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SweepAxis {
    Distance,
    Photons,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub axis_value: f64,
    #[cfg_attr(feature = "serde", serde(rename = "R"))]
    pub r: f64,
}

/// Evaluation points `from, from+step, ..., to` (inclusive, up to rounding).
pub fn sweep_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::EmptyRange);
    }
    let n = libm::floor((to - from) / step + 1e-9) as usize + 1;
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

pub fn sweep(
    template: &EfficiencyParams,
    axis: SweepAxis,
    from: f64,
    to: f64,
    step: f64,
) -> Result<Vec<SweepRow>> {
    let points = sweep_points(from, to, step)?;
    points
        .into_iter()
        .map(|x| {
            let mut p = *template;
            match axis {
                SweepAxis::Distance => p.distance_km = x,
                SweepAxis::Photons => {
                    if libm::trunc(x) != x || x < 0.0 {
                        return Err(Error::Parameter {
                            name: "N",
                            value: x,
                        });
                    }
                    p.photons = x as u32;
                }
            }
            Ok(SweepRow {
                axis_value: x,
                r: ratio_r(&p)?,
            })
        })
        .collect()
}
