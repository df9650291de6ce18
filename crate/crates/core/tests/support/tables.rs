//! Hand-transcribed Hadamard-basis GHZ states for three photons.

use hyperpure_core::state::{BasisLabel, Layout, PureState};
use num_complex::Complex64;

const EVEN: [&str; 4] = ["HHH", "HVV", "VHV", "VVH"];
const ODD: [&str; 4] = ["HHV", "HVH", "VHH", "VVV"];

/// Sign pattern of the four kets for index 0..4 (identical for ±).
const SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

fn build(layout: Layout, index: usize, plus: bool) -> PureState {
    let kets = if plus { EVEN } else { ODD };
    let terms = kets.iter().zip(SIGNS[index]).map(|(ket, s)| {
        let bits = BasisLabel::parse_pol(ket).unwrap();
        let label = match layout {
            Layout::Polarization => BasisLabel::new(bits, 0),
            _ => BasisLabel::new(0, bits),
        };
        (label, Complex64::new(0.5 * s, 0.0))
    });
    PureState::from_terms(3, layout, terms).unwrap()
}

/// `Ψ_index^±` over polarization.
pub fn printed_pol(index: usize, plus: bool) -> PureState {
    build(Layout::Polarization, index, plus)
}

/// `ψ_index^±` over spatial modes (`a1 ↔ 1`, `a2 ↔ 2`).
pub fn printed_spatial(index: usize, plus: bool) -> PureState {
    build(Layout::Spatial, index, plus)
}

/// Index of the printed state that `H^{⊗3}` sends `Φ_i` / `φ_i` to.
pub const IMAGE_INDEX: [usize; 4] = [0, 3, 2, 1];

/// Largest per-term amplitude difference between `a` and `sign·b`.
pub fn term_deviation(a: &PureState, b: &PureState, sign: f64) -> f64 {
    let labels: Vec<_> = a.terms().chain(b.terms()).map(|t| t.label).collect();
    labels
        .into_iter()
        .map(|l| (a.amplitude(l) - b.amplitude(l) * sign).norm())
        .fold(0.0, f64::max)
}
