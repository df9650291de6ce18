//! Optical elements and the party-local purification gate.
//!
//! Each party sends its photon through two polarizing beam splitters (one per
//! spatial mode), half-wave plates at 45° on two of the four arms and two
//! beam displacers that recombine the arms onto a keep detector and a swap
//! detector. The composite action is a 4-row permutation,
//! [`LocalGateTable`]; [`elements`] rebuilds the same table from the
//! individual components.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    full_mask, photon_bit, BasisLabel, Dof, Layout, PolBit, PortBit, PureState, SpatialBit,
};

/// Component-level model of the local network.
pub mod elements {
    use crate::state::{PolBit, PortBit, SpatialBit};

    /// Output arm of the polarizing beam splitter sitting on one input mode.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Arm {
        Transmitted(SpatialBit),
        Reflected(SpatialBit),
    }

    /// Transmits `H`, reflects `V`.
    pub fn polarizing_beam_splitter(pol: PolBit, mode: SpatialBit) -> Arm {
        match pol {
            PolBit::H => Arm::Transmitted(mode),
            PolBit::V => Arm::Reflected(mode),
        }
    }

    /// Half-wave plate at 45°: `H <-> V`.
    pub fn half_wave_plate_45(pol: PolBit) -> PolBit {
        pol.flipped()
    }

    /// Arms that carry a 45° wave plate.
    pub fn has_wave_plate(arm: Arm) -> bool {
        matches!(
            arm,
            Arm::Transmitted(SpatialBit::Mode1) | Arm::Reflected(SpatialBit::Mode2)
        )
    }

    /// The keep displacer merges the `V` photon of the mode-1 transmitted arm
    /// with the `H` photon of the mode-2 reflected arm; the swap displacer
    /// merges the mode-1 reflected `V` with the mode-2 transmitted `H`.
    /// Any other combination would leave through an unmonitored port.
    pub fn beam_displacer(pol: PolBit, arm: Arm) -> Option<PortBit> {
        match (arm, pol) {
            (Arm::Transmitted(SpatialBit::Mode1), PolBit::V)
            | (Arm::Reflected(SpatialBit::Mode2), PolBit::H) => Some(PortBit::Keep),
            (Arm::Reflected(SpatialBit::Mode1), PolBit::V)
            | (Arm::Transmitted(SpatialBit::Mode2), PolBit::H) => Some(PortBit::Swap),
            _ => None,
        }
    }

    /// PBS → HWP45 → BD for one photon.
    pub fn route(pol: PolBit, mode: SpatialBit) -> Option<(PolBit, PortBit)> {
        let arm = polarizing_beam_splitter(pol, mode);
        let pol = if has_wave_plate(arm) {
            half_wave_plate_45(pol)
        } else {
            pol
        };
        beam_displacer(pol, arm).map(|port| (pol, port))
    }
}

/// The composite input `(pol, spatial)` → output `(pol, port)` map of one
/// party's gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalGateTable {
    rows: [(PolBit, PortBit); 4],
}

const fn row_index(pol: PolBit, spatial: SpatialBit) -> usize {
    ((pol.bit() as usize) << 1) | spatial.bit() as usize
}

const ALL_INPUTS: [(PolBit, SpatialBit); 4] = [
    (PolBit::H, SpatialBit::Mode1),
    (PolBit::H, SpatialBit::Mode2),
    (PolBit::V, SpatialBit::Mode1),
    (PolBit::V, SpatialBit::Mode2),
];

impl Default for LocalGateTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl LocalGateTable {
    /// Out-port is keep iff polarization equals the spatial bit; the output
    /// polarization is the complement of the spatial bit.
    pub const fn standard() -> Self {
        let mut rows = [(PolBit::H, PortBit::Keep); 4];
        rows[row_index(PolBit::H, SpatialBit::Mode1)] = (PolBit::V, PortBit::Keep);
        rows[row_index(PolBit::V, SpatialBit::Mode2)] = (PolBit::H, PortBit::Keep);
        rows[row_index(PolBit::V, SpatialBit::Mode1)] = (PolBit::V, PortBit::Swap);
        rows[row_index(PolBit::H, SpatialBit::Mode2)] = (PolBit::H, PortBit::Swap);
        Self { rows }
    }

    /// Chains the individual elements. `None` if some input is lost.
    pub fn from_elements() -> Option<Self> {
        let mut rows = [(PolBit::H, PortBit::Keep); 4];
        for (pol, spatial) in ALL_INPUTS {
            rows[row_index(pol, spatial)] = elements::route(pol, spatial)?;
        }
        Some(Self { rows })
    }

    pub fn row(&self, pol: PolBit, spatial: SpatialBit) -> (PolBit, PortBit) {
        self.rows[row_index(pol, spatial)]
    }

    /// Overrides one row. Used to inject faults in verification runs.
    pub fn with_row(mut self, pol: PolBit, spatial: SpatialBit, out: (PolBit, PortBit)) -> Self {
        self.rows[row_index(pol, spatial)] = out;
        self
    }

    /// Exchanges the outputs of two rows; the result is still a bijection.
    pub fn with_swapped_rows(mut self, a: (PolBit, SpatialBit), b: (PolBit, SpatialBit)) -> Self {
        self.rows.swap(row_index(a.0, a.1), row_index(b.0, b.1));
        self
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = [false; 4];
        for (pol, port) in self.rows {
            let idx = ((pol.bit() as usize) << 1) | port.bit() as usize;
            if seen[idx] {
                return false;
            }
            seen[idx] = true;
        }
        true
    }

    /// The inverse map `(pol, port)` → `(pol, spatial)`.
    pub fn inverse(&self) -> Result<[(PolBit, SpatialBit); 4]> {
        if !self.is_bijection() {
            return Err(Error::NotReversible);
        }
        let mut inv = [(PolBit::H, SpatialBit::Mode1); 4];
        for (pol, spatial) in ALL_INPUTS {
            let (q, port) = self.row(pol, spatial);
            inv[((q.bit() as usize) << 1) | port.bit() as usize] = (pol, spatial);
        }
        Ok(inv)
    }
}

/// Row of the standard gate table.
pub fn local_gate_row(pol: PolBit, spatial: SpatialBit) -> (PolBit, PortBit) {
    LocalGateTable::standard().row(pol, spatial)
}

fn expect_layout(state: &PureState, layout: Layout) -> Result<()> {
    if state.layout() == layout {
        Ok(())
    } else {
        Err(Error::LayoutMismatch {
            expected: layout,
            found: state.layout(),
        })
    }
}

/// Sends every photon through the standard local gate.
pub fn apply_network(state: &PureState) -> Result<PureState> {
    apply_network_with(&LocalGateTable::standard(), state)
}

pub fn apply_network_with(table: &LocalGateTable, state: &PureState) -> Result<PureState> {
    expect_layout(state, Layout::Hyper)?;
    if !table.is_bijection() {
        return Err(Error::NotReversible);
    }
    let m = state.photons();
    Ok(state.relabel(Layout::Ports, |label| {
        let mut out = BasisLabel::default();
        for k in 0..m {
            let (pol, port) = table.row(label.pol_bit(k, m), label.spatial_bit(k, m));
            let bit = photon_bit(k, m);
            if pol.bit() {
                out.pol |= bit;
            }
            if port.bit() {
                out.mode |= bit;
            }
        }
        out
    }))
}

/// Runs the network backwards, `Ports` → `Hyper`.
pub fn undo_network_with(table: &LocalGateTable, state: &PureState) -> Result<PureState> {
    expect_layout(state, Layout::Ports)?;
    let inv = table.inverse()?;
    let m = state.photons();
    Ok(state.relabel(Layout::Hyper, |label| {
        let mut out = BasisLabel::default();
        for k in 0..m {
            let q = label.pol_bit(k, m);
            let port = label.port_bit(k, m);
            let (pol, spatial) = inv[((q.bit() as usize) << 1) | port.bit() as usize];
            let bit = photon_bit(k, m);
            if pol.bit() {
                out.pol |= bit;
            }
            if spatial.bit() {
                out.mode |= bit;
            }
        }
        out
    }))
}

fn hadamard_gate() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// HWP at 22.5° on every photon: `H → (H+V)/√2`, `V → (H−V)/√2`.
pub fn hadamard_pol(state: &PureState) -> Result<PureState> {
    if !state.layout().has_pol() {
        return Err(Error::UnsupportedLayout(state.layout()));
    }
    Ok(state.apply_local_gate(
        Dof::Polarization,
        full_mask(state.photons()),
        &hadamard_gate(),
    ))
}

/// 50:50 beam splitter on every photon's spatial modes.
pub fn hadamard_spatial(state: &PureState) -> Result<PureState> {
    match state.layout() {
        Layout::Spatial | Layout::Hyper => {
            Ok(state.apply_local_gate(Dof::Mode, full_mask(state.photons()), &hadamard_gate()))
        }
        other => Err(Error::UnsupportedLayout(other)),
    }
}

/// Complements the polarization of the listed photons (0-based).
pub fn bit_flip_pol(state: &PureState, photons: &[usize]) -> Result<PureState> {
    let m = state.photons();
    let mut mask = 0;
    for &k in photons {
        if k >= m {
            return Err(Error::PhotonIndex {
                index: k,
                photons: m,
            });
        }
        mask |= photon_bit(k, m);
    }
    bit_flip_pol_mask(state, mask)
}

/// Complements the polarization bits selected by `mask` (photon 1 = MSB).
pub fn bit_flip_pol_mask(state: &PureState, mask: u32) -> Result<PureState> {
    if !state.layout().has_pol() {
        return Err(Error::UnsupportedLayout(state.layout()));
    }
    let mask = mask & full_mask(state.photons());
    Ok(state.relabel(state.layout(), |l| BasisLabel::new(l.pol ^ mask, l.mode)))
}
