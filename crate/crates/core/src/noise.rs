//! Bit-flip and phase-flip mixtures over the GHZ basis.
//!
//! Errors are modelled at the state level: each [`NoiseSpec`] names the GHZ
//! component that the error produces and its probability.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::state::{
    ghz_index_count, make_ghz_pol, make_ghz_spatial, tensor_hyper, Ensemble, Layout, PureState,
    Sign, NORM_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseDof {
    Polarization,
    Spatial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum NoiseKind {
    /// Produces `Φ_i^+` (resp. `φ_i^+`) with `i = target_index ≥ 1`.
    BitFlip,
    /// Produces `Φ_i^-` (resp. `φ_i^-`); `target_index` defaults to 0.
    PhaseFlip,
}

/// One error component of a single degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    pub dof: NoiseDof,
    pub kind: NoiseKind,
    #[cfg_attr(feature = "serde", serde(default))]
    pub target_index: usize,
    /// Probability of this error, `1 - F` for a single-error channel.
    pub weight: f64,
}

impl NoiseSpec {
    pub fn bit_flip(dof: NoiseDof, target_index: usize, weight: f64) -> Self {
        Self {
            dof,
            kind: NoiseKind::BitFlip,
            target_index,
            weight,
        }
    }

    pub fn phase_flip(dof: NoiseDof, weight: f64) -> Self {
        Self {
            dof,
            kind: NoiseKind::PhaseFlip,
            target_index: 0,
            weight,
        }
    }

    pub fn validate(&self, photons: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.weight) {
            return Err(Error::Weight(self.weight));
        }
        let limit = ghz_index_count(photons);
        let low = match self.kind {
            NoiseKind::BitFlip => 1,
            NoiseKind::PhaseFlip => 0,
        };
        if self.target_index < low || self.target_index >= limit {
            return Err(Error::GhzIndex {
                index: self.target_index,
                photons,
                limit,
            });
        }
        Ok(())
    }

    /// GHZ label `(index, sign)` of the erroneous component.
    pub fn error_label(&self) -> (usize, Sign) {
        match self.kind {
            NoiseKind::BitFlip => (self.target_index, Sign::Plus),
            NoiseKind::PhaseFlip => (self.target_index, Sign::Minus),
        }
    }

    pub fn error_state(&self, photons: usize) -> Result<PureState> {
        self.validate(photons)?;
        let (index, sign) = self.error_label();
        match self.dof {
            NoiseDof::Polarization => make_ghz_pol(photons, index, sign),
            NoiseDof::Spatial => make_ghz_spatial(photons, index, sign),
        }
    }
}

fn check_orthogonal(states: &[&PureState]) -> Result<()> {
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i + 1) {
            let overlap = a.overlap(b)?;
            if overlap > NORM_TOL {
                return Err(Error::NotOrthogonal(i, j, overlap));
            }
        }
    }
    Ok(())
}

/// `{F: good, 1 - F: bad}`; a zero weight drops its member.
pub fn mix_two(good: &PureState, bad: &PureState, fidelity: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Weight(fidelity));
    }
    check_orthogonal(&[good, bad])?;
    let members = [(fidelity, good), (1.0 - fidelity, bad)]
        .into_iter()
        .filter(|(p, _)| *p > 0.0)
        .map(|(p, s)| (p, s.clone()))
        .collect();
    Ensemble::new(members)
}

/// Mixture of pairwise-orthogonal states. Zero-weight members are dropped.
pub fn mix_general(states: &[PureState], weights: &[f64]) -> Result<Ensemble> {
    if states.len() != weights.len() {
        return Err(Error::LengthMismatch {
            states: states.len(),
            weights: weights.len(),
        });
    }
    if states.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    for &w in weights {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Weight(w));
        }
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::ProbabilitySum(total));
    }
    let refs: Vec<&PureState> = states.iter().collect();
    check_orthogonal(&refs)?;
    Ensemble::new(
        states
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(s, &w)| (w, s.clone()))
            .collect(),
    )
}

/// Joint ensemble over all (polarization, spatial) member pairs.
pub fn product_ensemble(pol: &Ensemble, spatial: &Ensemble) -> Result<Ensemble> {
    if pol.photons() != spatial.photons() {
        return Err(Error::DimensionMismatch {
            left: pol.photons(),
            right: spatial.photons(),
        });
    }
    let mut members = Vec::with_capacity(pol.len() * spatial.len());
    for (pp, ps) in pol.members() {
        for (sp, ss) in spatial.members() {
            members.push((pp * sp, tensor_hyper(ps, ss)?));
        }
    }
    Ensemble::new(members)
}

/// Single-DOF mixture: `Φ_0^+` (or `φ_0^+`) with the leftover weight plus
/// every error component in `specs`. Repeated components accumulate.
pub fn dof_ensemble(photons: usize, dof: NoiseDof, specs: &[NoiseSpec]) -> Result<Ensemble> {
    let mut weights: BTreeMap<(usize, Sign), f64> = BTreeMap::new();
    for spec in specs.iter().filter(|s| s.dof == dof) {
        spec.validate(photons)?;
        *weights.entry(spec.error_label()).or_insert(0.0) += spec.weight;
    }
    let noise: f64 = weights.values().sum();
    if noise > 1.0 + NORM_TOL {
        return Err(Error::ProbabilitySum(noise));
    }
    let make = |index, sign| match dof {
        NoiseDof::Polarization => make_ghz_pol(photons, index, sign),
        NoiseDof::Spatial => make_ghz_spatial(photons, index, sign),
    };
    let mut states = alloc::vec![make(0, Sign::Plus)?];
    let mut ws = alloc::vec![(1.0 - noise).max(0.0)];
    for (&(index, sign), &w) in &weights {
        states.push(make(index, sign)?);
        ws.push(w);
    }
    mix_general(&states, &ws)
}

/// Weights of a single-DOF ensemble on each GHZ basis state `(index, sign)`.
pub fn ghz_weights(ensemble: &Ensemble) -> Result<BTreeMap<(usize, Sign), f64>> {
    let m = ensemble.photons();
    let layout = ensemble.layout();
    let mut out = BTreeMap::new();
    for (p, state) in ensemble.members() {
        for index in 0..ghz_index_count(m) {
            for sign in [Sign::Plus, Sign::Minus] {
                let ghz = match layout {
                    Layout::Polarization => make_ghz_pol(m, index, sign)?,
                    Layout::Spatial => make_ghz_spatial(m, index, sign)?,
                    other => return Err(Error::UnsupportedLayout(other)),
                };
                let w = ghz.overlap(state)?;
                if w > NORM_TOL {
                    *out.entry((index, sign)).or_insert(0.0) += p * w;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::fidelity;

    fn phi(i: usize, s: Sign) -> PureState {
        make_ghz_pol(3, i, s).unwrap()
    }

    fn sphi(i: usize, s: Sign) -> PureState {
        make_ghz_spatial(3, i, s).unwrap()
    }

    #[test]
    fn mix_two_examples() {
        let e = mix_two(&phi(0, Sign::Plus), &phi(1, Sign::Plus), 0.8).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.members()[0].0, 0.8);
        assert!((e.members()[1].0 - 0.2).abs() < 1e-15);

        let e = mix_two(&sphi(0, Sign::Plus), &sphi(1, Sign::Plus), 1.0).unwrap();
        assert_eq!(e.len(), 1);

        let e = mix_two(&phi(0, Sign::Plus), &phi(0, Sign::Minus), 0.6).unwrap();
        assert_eq!(e.members()[1].1, phi(0, Sign::Minus));
        assert!((e.members()[1].0 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn mix_two_rejects_overlap() {
        assert!(matches!(
            mix_two(&phi(0, Sign::Plus), &phi(0, Sign::Plus), 0.5),
            Err(Error::NotOrthogonal(0, 1, _))
        ));
        assert_eq!(
            mix_two(&phi(0, Sign::Plus), &phi(1, Sign::Plus), 1.5),
            Err(Error::Weight(1.5))
        );
    }

    #[test]
    fn mix_general_examples() {
        let states: Vec<_> = (0..4).map(|i| phi(i, Sign::Plus)).collect();
        let e = mix_general(&states, &[0.7, 0.1, 0.1, 0.1]).unwrap();
        assert_eq!(e.len(), 4);

        let sstates: Vec<_> = (0..4).map(|i| sphi(i, Sign::Plus)).collect();
        let e = mix_general(&sstates, &[0.25; 4]).unwrap();
        assert_eq!(e.len(), 4);

        let e = mix_general(&states[..1], &[1.0]).unwrap();
        assert_eq!(e.len(), 1);

        assert!(matches!(
            mix_general(&states, &[0.7, 0.1, 0.1, 0.2]),
            Err(Error::ProbabilitySum(_))
        ));
        assert!(matches!(
            mix_general(&states, &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn product_weights() {
        let p = mix_two(&phi(0, Sign::Plus), &phi(1, Sign::Plus), 0.8).unwrap();
        let s = mix_two(&sphi(0, Sign::Plus), &sphi(1, Sign::Plus), 0.7).unwrap();
        let e = product_ensemble(&p, &s).unwrap();
        let probs: Vec<f64> = e.members().iter().map(|(p, _)| *p).collect();
        let expect = [0.56, 0.24, 0.14, 0.06];
        for (a, b) in probs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(e.layout(), Layout::Hyper);

        let pure = product_ensemble(
            &Ensemble::pure(phi(0, Sign::Plus)),
            &Ensemble::pure(sphi(0, Sign::Plus)),
        )
        .unwrap();
        assert_eq!(pure.len(), 1);
        assert_eq!(pure.members()[0].0, 1.0);
    }

    #[test]
    fn product_fidelity_factorizes() {
        let p = mix_two(&phi(0, Sign::Plus), &phi(1, Sign::Plus), 0.8).unwrap();
        let s = mix_two(&sphi(0, Sign::Plus), &sphi(1, Sign::Plus), 0.7).unwrap();
        let target = tensor_hyper(&phi(0, Sign::Plus), &sphi(0, Sign::Plus)).unwrap();
        let f = fidelity(&product_ensemble(&p, &s).unwrap(), &target).unwrap();
        let fp = fidelity(&p, &phi(0, Sign::Plus)).unwrap();
        let fs = fidelity(&s, &sphi(0, Sign::Plus)).unwrap();
        assert!((f - fp * fs).abs() < 1e-15);
    }

    #[test]
    fn dof_ensemble_builds_mixture() {
        let specs = [
            NoiseSpec::bit_flip(NoiseDof::Polarization, 1, 0.2),
            NoiseSpec::bit_flip(NoiseDof::Spatial, 2, 0.3),
        ];
        let e = dof_ensemble(3, NoiseDof::Polarization, &specs).unwrap();
        assert_eq!(e.len(), 2);
        assert!((fidelity(&e, &phi(0, Sign::Plus)).unwrap() - 0.8).abs() < 1e-15);
        let e = dof_ensemble(3, NoiseDof::Spatial, &specs).unwrap();
        assert!((fidelity(&e, &sphi(2, Sign::Plus)).unwrap() - 0.3).abs() < 1e-15);

        let w = ghz_weights(&e).unwrap();
        assert_eq!(w.len(), 2);
        assert!((w[&(2, Sign::Plus)] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::bit_flip(NoiseDof::Spatial, 0, 0.1)
            .validate(3)
            .is_err());
        assert!(NoiseSpec::bit_flip(NoiseDof::Spatial, 4, 0.1)
            .validate(3)
            .is_err());
        assert_eq!(
            NoiseSpec::phase_flip(NoiseDof::Spatial, -0.1).validate(3),
            Err(Error::Weight(-0.1))
        );
        let too_much = [
            NoiseSpec::bit_flip(NoiseDof::Polarization, 1, 0.6),
            NoiseSpec::bit_flip(NoiseDof::Polarization, 2, 0.6),
        ];
        assert!(dof_ensemble(3, NoiseDof::Polarization, &too_much).is_err());
    }
}
