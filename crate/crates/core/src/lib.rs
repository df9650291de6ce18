//! Exact simulation of one-copy GHZ purification using polarization and
//! spatial-mode hyperentanglement.
//!
//! States are sparse superpositions over joint (polarization, mode) basis
//! labels; mixed inputs are finite ensembles of pure states. The linear-optics
//! network is evaluated per ensemble member and the outcomes are grouped by
//! output port pattern. A dense density-matrix [`oracle`] cross-checks the
//! engine for small photon counts.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod efficiency;
pub mod error;
pub mod noise;
pub mod optics;
pub mod oracle;
pub mod protocol;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
pub use noise::{NoiseDof, NoiseKind, NoiseSpec};
pub use optics::LocalGateTable;
pub use protocol::{AcceptanceRule, CorrectionPlan, PortPattern, Protocol, ProtocolResult};
pub use state::{BasisLabel, Ensemble, GhzLabel, Layout, PureState, Sign};
