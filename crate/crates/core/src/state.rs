//! Labelled computational basis, pure states, ensembles and GHZ constructors.
//!
//! Every photon carries a polarization qubit and a "mode" qubit. Before the
//! purification network the mode qubit is the spatial path (`k1`/`k2`); after
//! it, the mode qubit records which detector group (keep or swap) fired.
//! A [`BasisLabel`] packs these as two bitmasks with photon `k` (0-based,
//! photon 1 first) stored at bit `m - 1 - k`, so a GHZ index is directly the
//! mask of flipped photons.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest photon count accepted by the sparse engine.
pub const MAX_PHOTONS: usize = 16;

/// Normalization and orthogonality tolerance.
pub const NORM_TOL: f64 = 1e-12;

/// Amplitudes below this magnitude are dropped after interference.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PolBit {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpatialBit {
    Mode1,
    Mode2,
}

/// Detector group reached after the network: `Keep` is D1..Dm, `Swap` is
/// D(m+1)..D(2m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PortBit {
    Keep,
    Swap,
}

macro_rules! binary_bit {
    ($ty:ident, $zero:ident, $one:ident) => {
        impl $ty {
            pub const fn from_bit(bit: bool) -> Self {
                if bit {
                    $ty::$one
                } else {
                    $ty::$zero
                }
            }

            pub const fn bit(self) -> bool {
                matches!(self, $ty::$one)
            }

            pub const fn flipped(self) -> Self {
                Self::from_bit(!self.bit())
            }
        }
    };
}

binary_bit!(PolBit, H, V);
binary_bit!(SpatialBit, Mode1, Mode2);
binary_bit!(PortBit, Keep, Swap);

/// Which registers a state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Layout {
    /// Polarization only.
    Polarization,
    /// Spatial mode only.
    Spatial,
    /// Joint polarization and spatial mode, before the network.
    Hyper,
    /// Joint polarization and detector port, after the network.
    Ports,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Input,
    Output,
}

impl Layout {
    pub const fn stage(self) -> Stage {
        match self {
            Layout::Ports => Stage::Output,
            _ => Stage::Input,
        }
    }

    pub const fn has_pol(self) -> bool {
        !matches!(self, Layout::Spatial)
    }

    pub const fn has_mode(self) -> bool {
        !matches!(self, Layout::Polarization)
    }
}

/// Degree of freedom addressed by a local operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dof {
    Polarization,
    /// Spatial path or detector port, whichever the layout carries.
    Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisLabel {
    /// Polarization bits, `V` = 1.
    pub pol: u32,
    /// Spatial (`Mode2` = 1) or port (`Swap` = 1) bits.
    pub mode: u32,
}

#[inline]
pub(crate) const fn photon_bit(photon: usize, photons: usize) -> u32 {
    1 << (photons - 1 - photon)
}

#[inline]
pub(crate) const fn full_mask(photons: usize) -> u32 {
    if photons >= 32 {
        u32::MAX
    } else {
        (1u32 << photons) - 1
    }
}

impl BasisLabel {
    pub const fn new(pol: u32, mode: u32) -> Self {
        Self { pol, mode }
    }

    pub fn pol_bit(&self, photon: usize, photons: usize) -> PolBit {
        PolBit::from_bit(self.pol & photon_bit(photon, photons) != 0)
    }

    pub fn spatial_bit(&self, photon: usize, photons: usize) -> SpatialBit {
        SpatialBit::from_bit(self.mode & photon_bit(photon, photons) != 0)
    }

    pub fn port_bit(&self, photon: usize, photons: usize) -> PortBit {
        PortBit::from_bit(self.mode & photon_bit(photon, photons) != 0)
    }

    /// Parses a polarization string such as `"HHV"`.
    pub fn parse_pol(s: &str) -> Option<u32> {
        parse_bits(s, |c| match c {
            'H' | 'h' => Some(false),
            'V' | 'v' => Some(true),
            _ => None,
        })
    }

    /// Parses a mode string: `1`/`2` for spatial modes, `k`/`s` for ports.
    pub fn parse_modes(s: &str) -> Option<u32> {
        parse_bits(s, |c| match c {
            '1' | 'k' | 'K' => Some(false),
            '2' | 's' | 'S' => Some(true),
            _ => None,
        })
    }
}

fn parse_bits(s: &str, f: impl Fn(char) -> Option<bool>) -> Option<u32> {
    let mut mask = 0u32;
    let mut n = 0;
    for c in s.chars() {
        mask = (mask << 1) | u32::from(f(c)?);
        n += 1;
    }
    (n > 0 && n <= 32).then_some(mask)
}

/// One ket of a [`PureState`] together with its amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTerm {
    pub label: BasisLabel,
    pub amplitude: Complex64,
}

pub(crate) fn check_photons(photons: usize) -> Result<()> {
    if (2..=MAX_PHOTONS).contains(&photons) {
        Ok(())
    } else {
        Err(Error::PhotonCount(photons))
    }
}

/// A normalized superposition of basis kets over a fixed photon count and
/// layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    photons: usize,
    layout: Layout,
    terms: BTreeMap<BasisLabel, Complex64>,
}

impl PureState {
    /// Builds a state, merging duplicate labels by amplitude addition and
    /// pruning cancelled terms. Fails unless the result has unit norm.
    pub fn from_terms<I>(photons: usize, layout: Layout, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisLabel, Complex64)>,
    {
        check_photons(photons)?;
        let state = Self::collect(photons, layout, terms);
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// A single basis ket with amplitude 1.
    pub fn basis(photons: usize, layout: Layout, label: BasisLabel) -> Result<Self> {
        Self::from_terms(photons, layout, [(label, Complex64::new(1.0, 0.0))])
    }

    pub(crate) fn collect<I>(photons: usize, layout: Layout, terms: I) -> Self
    where
        I: IntoIterator<Item = (BasisLabel, Complex64)>,
    {
        let mask = full_mask(photons);
        let mut map: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in terms {
            let label = BasisLabel::new(
                if layout.has_pol() {
                    label.pol & mask
                } else {
                    0
                },
                if layout.has_mode() {
                    label.mode & mask
                } else {
                    0
                },
            );
            *map.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        map.retain(|_, amp| amp.norm_sqr() >= PRUNE_TOL * PRUNE_TOL);
        Self {
            photons,
            layout,
            terms: map,
        }
    }

    /// Rescales to unit norm. Returns `None` for the zero vector.
    pub(crate) fn normalized(mut self) -> Option<(f64, Self)> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr <= 0.0 {
            return None;
        }
        let scale = 1.0 / libm::sqrt(norm_sqr);
        for amp in self.terms.values_mut() {
            *amp *= scale;
        }
        Some((norm_sqr, self))
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn stage(&self) -> Stage {
        self.layout.stage()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = BasisTerm> + '_ {
        self.terms
            .iter()
            .map(|(&label, &amplitude)| BasisTerm { label, amplitude })
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        self.terms
            .get(&label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.photons != other.photons {
            return Err(Error::DimensionMismatch {
                left: self.photons,
                right: other.photons,
            });
        }
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch {
                expected: self.layout,
                found: other.layout,
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let (small, large, conj_small) = if self.terms.len() <= other.terms.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (label, a) in &small.terms {
            if let Some(b) = large.terms.get(label) {
                acc += if conj_small {
                    a.conj() * b
                } else {
                    b.conj() * a
                };
            }
        }
        Ok(acc)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Amplitude-wise comparison, global phase included.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.photons != other.photons || self.layout != other.layout {
            return false;
        }
        let close = |a: &Self, b: &Self| {
            a.terms
                .iter()
                .all(|(label, amp)| (amp - b.amplitude(*label)).norm() <= tol)
        };
        close(self, other) && close(other, self)
    }

    /// Relabels every ket; amplitudes are untouched.
    pub(crate) fn relabel(
        &self,
        layout: Layout,
        mut f: impl FnMut(BasisLabel) -> BasisLabel,
    ) -> Self {
        Self::collect(
            self.photons,
            layout,
            self.terms.iter().map(|(&label, &amp)| (f(label), amp)),
        )
    }

    /// Applies the same 2x2 matrix (`gate[out][in]`) to one qubit of every
    /// photon selected by `photon_mask`.
    pub(crate) fn apply_local_gate(
        &self,
        dof: Dof,
        photon_mask: u32,
        gate: &[[Complex64; 2]; 2],
    ) -> Self {
        let mut current = self.clone();
        for photon in 0..self.photons {
            let bit = photon_bit(photon, self.photons);
            if photon_mask & bit == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(current.terms.len() * 2);
            for (&label, &amp) in &current.terms {
                let reg = match dof {
                    Dof::Polarization => label.pol,
                    Dof::Mode => label.mode,
                };
                let input = usize::from(reg & bit != 0);
                for (output, row) in gate.iter().enumerate() {
                    let coeff = row[input];
                    if coeff == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let reg = if output == 1 { reg | bit } else { reg & !bit };
                    let label = match dof {
                        Dof::Polarization => BasisLabel::new(reg, label.mode),
                        Dof::Mode => BasisLabel::new(label.pol, reg),
                    };
                    next.push((label, amp * coeff));
                }
            }
            current = Self::collect(self.photons, self.layout, next);
        }
        current
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, amp) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|", amp.re, amp.im)?;
            for k in 0..self.photons {
                if k > 0 {
                    f.write_str(",")?;
                }
                if self.layout.has_pol() {
                    let c = if label.pol_bit(k, self.photons).bit() {
                        'V'
                    } else {
                        'H'
                    };
                    write!(f, "{c}")?;
                }
                match self.layout {
                    Layout::Spatial | Layout::Hyper => {
                        let c = if label.spatial_bit(k, self.photons).bit() {
                            '2'
                        } else {
                            '1'
                        };
                        write!(f, "{c}")?;
                    }
                    Layout::Ports => {
                        let c = if label.port_bit(k, self.photons).bit() {
                            's'
                        } else {
                            'k'
                        };
                        write!(f, "{c}")?;
                    }
                    Layout::Polarization => {}
                }
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}

/// Probability-weighted list of pure states sharing photon count and layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let (_, first) = members.first().ok_or(Error::EmptyEnsemble)?;
        let mut total = 0.0;
        for (p, state) in &members {
            if !(*p > 0.0 && *p <= 1.0 + NORM_TOL) {
                return Err(Error::Probability(*p));
            }
            first.check_compatible(state)?;
            total += p;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::ProbabilitySum(total));
        }
        Ok(Self { members })
    }

    pub fn pure(state: PureState) -> Self {
        Self {
            members: alloc::vec![(1.0, state)],
        }
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn photons(&self) -> usize {
        self.members[0].1.photons
    }

    pub fn layout(&self) -> Layout {
        self.members[0].1.layout
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    #[cfg_attr(feature = "serde", serde(rename = "+"))]
    Plus,
    #[cfg_attr(feature = "serde", serde(rename = "-"))]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Names one member of the GHZ basis: index of flipped photons plus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GhzLabel {
    pub index: usize,
    pub sign: Sign,
}

impl GhzLabel {
    pub const PHI0_PLUS: Self = Self {
        index: 0,
        sign: Sign::Plus,
    };

    pub const fn new(index: usize, sign: Sign) -> Self {
        Self { index, sign }
    }

    pub fn polarization(self, photons: usize) -> Result<PureState> {
        make_ghz_pol(photons, self.index, self.sign)
    }
}

/// Number of GHZ indices for `photons` photons, `2^(m-1)`.
pub fn ghz_index_count(photons: usize) -> usize {
    1usize << (photons - 1)
}

fn ghz_masks(photons: usize, index: usize) -> Result<(u32, u32)> {
    check_photons(photons)?;
    let limit = ghz_index_count(photons);
    if index >= limit {
        return Err(Error::GhzIndex {
            index,
            photons,
            limit,
        });
    }
    let x = index as u32;
    Ok((x, !x & full_mask(photons)))
}

fn ghz_pair(
    photons: usize,
    sign: Sign,
    a: BasisLabel,
    b: BasisLabel,
    layout: Layout,
) -> Result<PureState> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    PureState::from_terms(
        photons,
        layout,
        [
            (a, Complex64::new(h, 0.0)),
            (b, Complex64::new(h * sign.factor(), 0.0)),
        ],
    )
}

/// Polarization GHZ state `(|x> ± |not x>)/√2`, where bit `j` of `index`
/// flips photon `m - j` of `|H...H>`.
pub fn make_ghz_pol(photons: usize, index: usize, sign: Sign) -> Result<PureState> {
    let (x, nx) = ghz_masks(photons, index)?;
    ghz_pair(
        photons,
        sign,
        BasisLabel::new(x, 0),
        BasisLabel::new(nx, 0),
        Layout::Polarization,
    )
}

/// Spatial-mode GHZ state, same index convention as [`make_ghz_pol`].
pub fn make_ghz_spatial(photons: usize, index: usize, sign: Sign) -> Result<PureState> {
    let (x, nx) = ghz_masks(photons, index)?;
    ghz_pair(
        photons,
        sign,
        BasisLabel::new(0, x),
        BasisLabel::new(0, nx),
        Layout::Spatial,
    )
}

/// Joint polarization ⊗ spatial state.
pub fn tensor_hyper(pol: &PureState, spatial: &PureState) -> Result<PureState> {
    if pol.layout != Layout::Polarization {
        return Err(Error::LayoutMismatch {
            expected: Layout::Polarization,
            found: pol.layout,
        });
    }
    if spatial.layout != Layout::Spatial {
        return Err(Error::LayoutMismatch {
            expected: Layout::Spatial,
            found: spatial.layout,
        });
    }
    if pol.photons != spatial.photons {
        return Err(Error::DimensionMismatch {
            left: pol.photons,
            right: spatial.photons,
        });
    }
    let terms = pol.terms.iter().flat_map(|(lp, ap)| {
        spatial
            .terms
            .iter()
            .map(move |(ls, as_)| (BasisLabel::new(lp.pol, ls.mode), ap * as_))
    });
    PureState::from_terms(pol.photons, Layout::Hyper, terms)
}

/// `Σ_k p_k |<target|ψ_k>|^2`.
pub fn fidelity(ensemble: &Ensemble, target: &PureState) -> Result<f64> {
    let mut acc = 0.0;
    for (p, state) in &ensemble.members {
        acc += p * target.overlap(state)?;
    }
    Ok(acc)
}
