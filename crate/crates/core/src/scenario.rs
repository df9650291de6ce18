//! Canned inputs and protocols for the standard purification scenarios.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::noise::{mix_general, mix_two, product_ensemble};
use crate::protocol::{CorrectionPlan, Protocol};
use crate::state::{ghz_index_count, make_ghz_pol, make_ghz_spatial, Ensemble, Sign};

/// `(F_a Φ_0^+ + (1-F_a) Φ_1^+) ⊗ (F_b φ_0^+ + (1-F_b) φ_1^+)`.
pub fn bitflip_pair(photons: usize, fa: f64, fb: f64) -> Result<Ensemble> {
    let pol = mix_two(
        &make_ghz_pol(photons, 0, Sign::Plus)?,
        &make_ghz_pol(photons, 1, Sign::Plus)?,
        fa,
    )?;
    let spatial = mix_two(
        &make_ghz_spatial(photons, 0, Sign::Plus)?,
        &make_ghz_spatial(photons, 1, Sign::Plus)?,
        fb,
    )?;
    product_ensemble(&pol, &spatial)
}

/// `(F_a Φ_0^+ + (1-F_a) Φ_0^-) ⊗ (F_b φ_0^+ + (1-F_b) φ_0^-)`.
pub fn phaseflip_pair(photons: usize, fa: f64, fb: f64) -> Result<Ensemble> {
    let pol = mix_two(
        &make_ghz_pol(photons, 0, Sign::Plus)?,
        &make_ghz_pol(photons, 0, Sign::Minus)?,
        fa,
    )?;
    let spatial = mix_two(
        &make_ghz_spatial(photons, 0, Sign::Plus)?,
        &make_ghz_spatial(photons, 0, Sign::Minus)?,
        fb,
    )?;
    product_ensemble(&pol, &spatial)
}

/// Bit-flip mixtures over `Φ_0^+ .. Φ_{k-1}^+` and `φ_0^+ .. φ_{k-1}^+`
/// with `k = weights.len()`.
pub fn general_mixture(
    photons: usize,
    pol_weights: &[f64],
    spatial_weights: &[f64],
) -> Result<Ensemble> {
    let pol: Vec<_> = (0..pol_weights.len())
        .map(|i| make_ghz_pol(photons, i, Sign::Plus))
        .collect::<Result<_>>()?;
    let spatial: Vec<_> = (0..spatial_weights.len())
        .map(|i| make_ghz_spatial(photons, i, Sign::Plus))
        .collect::<Result<_>>()?;
    product_ensemble(
        &mix_general(&pol, pol_weights)?,
        &mix_general(&spatial, spatial_weights)?,
    )
}

/// Polarization error `Φ_1^+` (last photon) against spatial error `φ_2^+`
/// (second to last photon). Needs at least three photons.
pub fn deterministic_pair(photons: usize, fa: f64, fb: f64) -> Result<(Ensemble, CorrectionPlan)> {
    if photons < 3 {
        return Err(Error::GhzIndex {
            index: 2,
            photons,
            limit: ghz_index_count(photons),
        });
    }
    let pol = mix_two(
        &make_ghz_pol(photons, 0, Sign::Plus)?,
        &make_ghz_pol(photons, 1, Sign::Plus)?,
        fa,
    )?;
    let spatial = mix_two(
        &make_ghz_spatial(photons, 0, Sign::Plus)?,
        &make_ghz_spatial(photons, 2, Sign::Plus)?,
        fb,
    )?;
    let plan = CorrectionPlan::syndrome_decoding_for(&pol, &spatial)?;
    Ok((product_ensemble(&pol, &spatial)?, plan))
}

/// Four-term weight vector `[f, 0.5(1-f), 0.3(1-f), 0.2(1-f)]`, truncated
/// to the number of available bit-flip indices and renormalised.
pub fn spread_weights(photons: usize, f: f64) -> Vec<f64> {
    let k = ghz_index_count(photons).min(4);
    let tail = [0.5, 0.3, 0.2];
    let rest: f64 = tail[..k - 1].iter().sum();
    let mut w = alloc::vec![f];
    w.extend(tail[..k - 1].iter().map(|t| (1.0 - f) * t / rest));
    w
}

/// One engine-vs-oracle comparison point.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub mode: &'static str,
    pub label: String,
    pub protocol: Protocol,
    pub input: Ensemble,
}

pub const MODES: [&str; 4] = ["bitflip", "phaseflip", "general", "deterministic-demo"];

pub const STANDARD_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

/// Every mode over [`STANDARD_GRID`]². The deterministic scenario is skipped
/// below three photons.
pub fn standard_cases(photons: usize) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for &fa in &STANDARD_GRID {
        for &fb in &STANDARD_GRID {
            let label = format!("m={photons} Fa={fa} Fb={fb}");
            cases.push(Case {
                mode: MODES[0],
                label: label.clone(),
                protocol: Protocol::bitflip(photons)?,
                input: bitflip_pair(photons, fa, fb)?,
            });
            cases.push(Case {
                mode: MODES[1],
                label: label.clone(),
                protocol: Protocol::phaseflip(photons)?,
                input: phaseflip_pair(photons, fa, fb)?,
            });
            let (pw, sw) = (spread_weights(photons, fa), spread_weights(photons, fb));
            let pol_idx: Vec<_> = pw.iter().copied().enumerate().collect();
            let sp_idx: Vec<_> = sw.iter().copied().enumerate().collect();
            cases.push(Case {
                mode: MODES[2],
                label: label.clone(),
                protocol: Protocol::general(CorrectionPlan::syndrome_decoding(
                    photons, &pol_idx, &sp_idx,
                )?),
                input: general_mixture(photons, &pw, &sw)?,
            });
            if photons >= 3 {
                let (input, plan) = deterministic_pair(photons, fa, fb)?;
                cases.push(Case {
                    mode: MODES[3],
                    label,
                    protocol: Protocol::general(plan),
                    input,
                });
            }
        }
    }
    Ok(cases)
}
