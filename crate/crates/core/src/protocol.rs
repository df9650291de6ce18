//! Purification runs: network evolution, port-pattern post-selection,
//! per-pattern corrections and fidelity bookkeeping.
//!
//! Members of the input ensemble are evaluated independently
//! ([`Protocol::evaluate_member`]) and folded together in input order
//! ([`Protocol::merge`]), so callers may evaluate members in parallel and
//! still get bit-identical results.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::noise::ghz_weights;
use crate::optics::{
    apply_network_with, bit_flip_pol_mask, hadamard_pol, hadamard_spatial, LocalGateTable,
};
use crate::state::{
    check_photons, fidelity, full_mask, ghz_index_count, photon_bit, BasisLabel, Ensemble,
    GhzLabel, Layout, PortBit, PureState, NORM_TOL,
};

/// Which detector group each photon reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortPattern {
    photons: usize,
    swaps: u32,
}

impl PortPattern {
    /// `swaps` has bit `m - 1 - k` set when photon `k` went to the swap group.
    pub fn new(photons: usize, swaps: u32) -> Result<Self> {
        check_photons(photons)?;
        Ok(Self {
            photons,
            swaps: swaps & full_mask(photons),
        })
    }

    pub fn from_ports(ports: &[PortBit]) -> Result<Self> {
        let swaps = ports
            .iter()
            .fold(0u32, |acc, p| (acc << 1) | u32::from(p.bit()));
        Self::new(ports.len(), swaps)
    }

    /// Parses `"kks"`-style strings.
    pub fn parse(s: &str) -> Option<Self> {
        let swaps = BasisLabel::parse_modes(s)?;
        Self::new(s.chars().count(), swaps).ok()
    }

    pub fn all(photons: usize) -> impl Iterator<Item = PortPattern> {
        (0..1u32 << photons).map(move |swaps| PortPattern { photons, swaps })
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn swaps(&self) -> u32 {
        self.swaps
    }

    pub fn swap_count(&self) -> usize {
        self.swaps.count_ones() as usize
    }

    pub fn port(&self, photon: usize) -> PortBit {
        PortBit::from_bit(self.swaps & photon_bit(photon, self.photons) != 0)
    }

    pub fn ports(&self) -> Vec<PortBit> {
        (0..self.photons).map(|k| self.port(k)).collect()
    }

    /// Photons in the smaller port group; on a tie, the keep group.
    pub fn minority_mask(&self) -> u32 {
        let swap = self.swap_count();
        let keep = self.photons - swap;
        if swap < keep {
            self.swaps
        } else {
            !self.swaps & full_mask(self.photons)
        }
    }
}

impl fmt::Display for PortPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.photons {
            f.write_str(match self.port(k) {
                PortBit::Keep => "k",
                PortBit::Swap => "s",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AcceptanceRule {
    /// All-keep or all-swap.
    BitFlip,
    /// Even number of swap-group photons.
    PhaseFlip,
    /// Every pattern.
    All,
}

impl AcceptanceRule {
    pub fn accepts(&self, pattern: &PortPattern) -> bool {
        match self {
            AcceptanceRule::BitFlip => {
                pattern.swap_count() == 0 || pattern.swap_count() == pattern.photons()
            }
            AcceptanceRule::PhaseFlip => pattern.swap_count().is_multiple_of(2),
            AcceptanceRule::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionOp {
    /// Polarization bit flip on the photons in the mask (photon 1 = MSB).
    FlipPol(u32),
    /// Polarization Hadamard on every photon.
    HadamardPol,
}

/// Deterministic per-pattern correction, applied after post-selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionPlan {
    photons: usize,
    ops: Vec<Vec<CorrectionOp>>,
}

impl CorrectionPlan {
    pub fn from_fn(
        photons: usize,
        mut f: impl FnMut(&PortPattern) -> Vec<CorrectionOp>,
    ) -> Result<Self> {
        check_photons(photons)?;
        Ok(Self {
            photons,
            ops: PortPattern::all(photons).map(|p| f(&p)).collect(),
        })
    }

    pub fn none(photons: usize) -> Result<Self> {
        Self::from_fn(photons, |_| Vec::new())
    }

    /// Bit flip on every photon followed by a Hadamard on every photon,
    /// for every pattern.
    pub fn phase_flip(photons: usize) -> Result<Self> {
        let all = full_mask(photons);
        Self::from_fn(photons, |_| {
            alloc::vec![CorrectionOp::FlipPol(all), CorrectionOp::HadamardPol]
        })
    }

    /// Flips the polarization of the photons in the minority port group.
    ///
    /// The output polarization of `Φ_i ⊗ φ_j` is `Φ_j` on pattern
    /// `x_i ⊕ x_j`, so this rule returns `Φ_i`: it undoes the spatial error
    /// and reinstates the polarization error.
    pub fn minority_flip(photons: usize) -> Result<Self> {
        Self::from_fn(photons, |p| {
            let mask = p.minority_mask();
            if mask == 0 {
                Vec::new()
            } else {
                alloc::vec![CorrectionOp::FlipPol(mask)]
            }
        })
    }

    /// Most-likely-error decoding for bit-flip mixtures.
    ///
    /// `Φ_i ⊗ φ_j` leaves the polarization in `Φ_j` on pattern `x_i ⊕ x_j`
    /// (or its complement). For each pattern this picks the spatial index
    /// `j` with the largest total weight `Σ_i w_pol(i) w_spatial(j)` among
    /// the pairs that produce the pattern, and flips the photons of `x_j`.
    /// Ties go to the smaller index.
    pub fn syndrome_decoding(
        photons: usize,
        pol_weights: &[(usize, f64)],
        spatial_weights: &[(usize, f64)],
    ) -> Result<Self> {
        check_photons(photons)?;
        let limit = ghz_index_count(photons);
        for &(index, _) in pol_weights.iter().chain(spatial_weights) {
            if index >= limit {
                return Err(Error::GhzIndex {
                    index,
                    photons,
                    limit,
                });
            }
        }
        let all = full_mask(photons);
        Self::from_fn(photons, |pattern| {
            let s = pattern.swaps();
            let mut scores: BTreeMap<usize, f64> = BTreeMap::new();
            for &(i, wi) in pol_weights {
                for &(j, wj) in spatial_weights {
                    let syndrome = (i ^ j) as u32;
                    if syndrome == s || syndrome == !s & all {
                        *scores.entry(j).or_insert(0.0) += wi * wj;
                    }
                }
            }
            let best = scores
                .iter()
                .fold(None::<(usize, f64)>, |best, (&j, &w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((j, w)),
                });
            match best {
                Some((j, _)) if j != 0 => alloc::vec![CorrectionOp::FlipPol(j as u32)],
                _ => Vec::new(),
            }
        })
    }

    /// [`CorrectionPlan::syndrome_decoding`] with weights read from the
    /// single-DOF ensembles.
    pub fn syndrome_decoding_for(pol: &Ensemble, spatial: &Ensemble) -> Result<Self> {
        let collapse = |e: &Ensemble| -> Result<Vec<(usize, f64)>> {
            let mut by_index: BTreeMap<usize, f64> = BTreeMap::new();
            for ((index, _), w) in ghz_weights(e)? {
                *by_index.entry(index).or_insert(0.0) += w;
            }
            Ok(by_index.into_iter().collect())
        };
        Self::syndrome_decoding(pol.photons(), &collapse(pol)?, &collapse(spatial)?)
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn ops(&self, pattern: &PortPattern) -> &[CorrectionOp] {
        &self.ops[pattern.swaps() as usize]
    }

    /// Applies the pattern's operations to a polarization state.
    pub fn apply(&self, pattern: &PortPattern, state: &PureState) -> Result<PureState> {
        let mut out = state.clone();
        for op in self.ops(pattern) {
            out = match *op {
                CorrectionOp::FlipPol(mask) => bit_flip_pol_mask(&out, mask)?,
                CorrectionOp::HadamardPol => hadamard_pol(&out)?,
            };
        }
        Ok(out)
    }
}

/// Conditional outcome of one accepted pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternOutcome {
    pub probability: f64,
    /// Corrected polarization ensemble, conditioned on the pattern.
    pub ensemble: Ensemble,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub photons: usize,
    /// Probability of every pattern with non-zero weight, accepted or not.
    pub pattern_probabilities: BTreeMap<PortPattern, f64>,
    pub accepted: BTreeMap<PortPattern, PatternOutcome>,
    pub success_probability: f64,
    pub rejected_probability: f64,
    pub target: PureState,
    /// Fidelity of the merged accepted output with `target`; `None` when
    /// nothing is accepted.
    pub output_fidelity: Option<f64>,
}

impl ProtocolResult {
    /// All accepted outputs as one ensemble, weighted by pattern probability.
    pub fn merged_ensemble(&self) -> Option<Ensemble> {
        if self.success_probability <= 0.0 {
            return None;
        }
        let members =
            self.accepted
                .values()
                .flat_map(|o| {
                    o.ensemble.members().iter().map(move |(w, s)| {
                        (o.probability * w / self.success_probability, s.clone())
                    })
                })
                .collect();
        Ensemble::new(members).ok()
    }

    pub fn fidelity_against(&self, target: &PureState) -> Result<Option<f64>> {
        if self.success_probability <= 0.0 {
            return Ok(None);
        }
        let mut acc = 0.0;
        for outcome in self.accepted.values() {
            acc += outcome.probability * fidelity(&outcome.ensemble, target)?;
        }
        Ok(Some(acc / self.success_probability))
    }

    /// Fidelity of a single accepted pattern's output with `target`.
    pub fn pattern_fidelity(
        &self,
        pattern: &PortPattern,
        target: &PureState,
    ) -> Result<Option<f64>> {
        self.accepted
            .get(pattern)
            .map(|o| fidelity(&o.ensemble, target))
            .transpose()
    }
}

/// Post-selected, corrected polarization output of one input member.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberOutcome {
    /// `(pattern, conditional probability, corrected state if accepted)`.
    pub patterns: Vec<(PortPattern, f64, Option<PureState>)>,
}

/// A configured purification run.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub pre_hadamard: bool,
    pub acceptance: AcceptanceRule,
    pub corrections: CorrectionPlan,
    pub target: GhzLabel,
    pub table: LocalGateTable,
}

impl Protocol {
    /// Network only; keep all-keep and all-swap patterns; no corrections.
    pub fn bitflip(photons: usize) -> Result<Self> {
        Ok(Self {
            pre_hadamard: false,
            acceptance: AcceptanceRule::BitFlip,
            corrections: CorrectionPlan::none(photons)?,
            target: GhzLabel::PHI0_PLUS,
            table: LocalGateTable::standard(),
        })
    }

    /// Hadamard on both degrees of freedom, network, even-parity patterns,
    /// then flip-all and Hadamard on the polarization.
    pub fn phaseflip(photons: usize) -> Result<Self> {
        Ok(Self {
            pre_hadamard: true,
            acceptance: AcceptanceRule::PhaseFlip,
            corrections: CorrectionPlan::phase_flip(photons)?,
            target: GhzLabel::PHI0_PLUS,
            table: LocalGateTable::standard(),
        })
    }

    /// Network, every pattern accepted, caller-supplied corrections.
    pub fn general(corrections: CorrectionPlan) -> Self {
        Self {
            pre_hadamard: false,
            acceptance: AcceptanceRule::All,
            corrections,
            target: GhzLabel::PHI0_PLUS,
            table: LocalGateTable::standard(),
        }
    }

    pub fn with_table(mut self, table: LocalGateTable) -> Self {
        self.table = table;
        self
    }

    pub fn with_target(mut self, target: GhzLabel) -> Self {
        self.target = target;
        self
    }

    pub fn with_acceptance(mut self, acceptance: AcceptanceRule) -> Self {
        self.acceptance = acceptance;
        self
    }

    pub fn photons(&self) -> usize {
        self.corrections.photons()
    }

    fn check_input(&self, state: &PureState) -> Result<()> {
        if state.photons() != self.photons() {
            return Err(Error::DimensionMismatch {
                left: state.photons(),
                right: self.photons(),
            });
        }
        if state.layout() != Layout::Hyper {
            return Err(Error::LayoutMismatch {
                expected: Layout::Hyper,
                found: state.layout(),
            });
        }
        Ok(())
    }

    pub fn evaluate_member(&self, state: &PureState) -> Result<MemberOutcome> {
        self.check_input(state)?;
        let m = state.photons();
        let evolved = if self.pre_hadamard {
            hadamard_pol(&hadamard_spatial(state)?)?
        } else {
            state.clone()
        };
        let out = apply_network_with(&self.table, &evolved)?;

        let mut groups: BTreeMap<u32, Vec<_>> = BTreeMap::new();
        for term in out.terms() {
            groups
                .entry(term.label.mode)
                .or_default()
                .push((BasisLabel::new(term.label.pol, 0), term.amplitude));
        }

        let mut patterns = Vec::with_capacity(groups.len());
        for (swaps, terms) in groups {
            let pattern = PortPattern { photons: m, swaps };
            let Some((prob, conditional)) =
                PureState::collect(m, Layout::Polarization, terms).normalized()
            else {
                continue;
            };
            let corrected = if self.acceptance.accepts(&pattern) {
                Some(self.corrections.apply(&pattern, &conditional)?)
            } else {
                None
            };
            patterns.push((pattern, prob, corrected));
        }
        Ok(MemberOutcome { patterns })
    }

    /// Folds member outcomes, in the order given, into a result.
    pub fn merge<I>(&self, outcomes: I) -> Result<ProtocolResult>
    where
        I: IntoIterator<Item = (f64, MemberOutcome)>,
    {
        let m = self.photons();
        let mut pattern_probabilities: BTreeMap<PortPattern, f64> = BTreeMap::new();
        let mut accepted_members: BTreeMap<PortPattern, Vec<(f64, PureState)>> = BTreeMap::new();
        let mut seen = false;
        for (p, outcome) in outcomes {
            seen = true;
            for (pattern, q, state) in outcome.patterns {
                let w = p * q;
                if w <= 0.0 {
                    continue;
                }
                *pattern_probabilities.entry(pattern).or_insert(0.0) += w;
                if let Some(state) = state {
                    accepted_members
                        .entry(pattern)
                        .or_default()
                        .push((w, state));
                }
            }
        }
        if !seen {
            return Err(Error::EmptyEnsemble);
        }

        let mut accepted = BTreeMap::new();
        let mut success = 0.0;
        for (pattern, members) in accepted_members {
            let probability = pattern_probabilities[&pattern];
            success += probability;
            let members = members
                .into_iter()
                .map(|(w, s)| (w / probability, s))
                .collect();
            accepted.insert(
                pattern,
                PatternOutcome {
                    probability,
                    ensemble: Ensemble::new(members)?,
                },
            );
        }
        let rejected = pattern_probabilities
            .iter()
            .filter(|(pat, _)| !accepted.contains_key(*pat))
            .fold(0.0, |acc, (_, p)| acc + p);

        let target = self.target.polarization(m)?;
        let mut result = ProtocolResult {
            photons: m,
            pattern_probabilities,
            accepted,
            success_probability: success,
            rejected_probability: rejected,
            target: target.clone(),
            output_fidelity: None,
        };
        result.output_fidelity = result.fidelity_against(&target)?;
        Ok(result)
    }

    pub fn run(&self, input: &Ensemble) -> Result<ProtocolResult> {
        let mut outcomes = Vec::with_capacity(input.len());
        for (p, state) in input.members() {
            outcomes.push((*p, self.evaluate_member(state)?));
        }
        self.merge(outcomes)
    }
}

pub fn run_bitflip(input: &Ensemble) -> Result<ProtocolResult> {
    Protocol::bitflip(input.photons())?.run(input)
}

pub fn run_phaseflip(input: &Ensemble) -> Result<ProtocolResult> {
    Protocol::phaseflip(input.photons())?.run(input)
}

pub fn run_general(input: &Ensemble, corrections: &CorrectionPlan) -> Result<ProtocolResult> {
    Protocol::general(corrections.clone()).run(input)
}

fn check_weight(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Parameter { name, value })
    }
}

/// `F_a F_b / (F_a F_b + (1 - F_a)(1 - F_b))`.
pub fn closed_form_fidelity_pair(fa: f64, fb: f64) -> Result<f64> {
    check_weight("fa", fa)?;
    check_weight("fb", fb)?;
    let good = fa * fb;
    let denom = closed_form_success_pair(fa, fb);
    if denom <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(good / denom)
}

/// `F_a F_b + (1 - F_a)(1 - F_b)`.
pub fn closed_form_success_pair(fa: f64, fb: f64) -> f64 {
    fa * fb + (1.0 - fa) * (1.0 - fb)
}

/// `F'_i = P_i S_i / Σ_j P_j S_j` for matched GHZ indices.
pub fn closed_form_fidelity_general(
    pol_weights: &[f64],
    spatial_weights: &[f64],
) -> Result<Vec<f64>> {
    if pol_weights.len() != spatial_weights.len() {
        return Err(Error::LengthMismatch {
            states: pol_weights.len(),
            weights: spatial_weights.len(),
        });
    }
    for ws in [pol_weights, spatial_weights] {
        for &w in ws {
            // weights recovered from overlaps can overshoot by rounding
            if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&w) {
                return Err(Error::Parameter {
                    name: "weight",
                    value: w,
                });
            }
        }
        let total: f64 = ws.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::ProbabilitySum(total));
        }
    }
    let products: Vec<f64> = pol_weights
        .iter()
        .zip(spatial_weights)
        .map(|(a, b)| a * b)
        .collect();
    let denom: f64 = products.iter().sum();
    if denom <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(products.into_iter().map(|p| p / denom).collect())
}
