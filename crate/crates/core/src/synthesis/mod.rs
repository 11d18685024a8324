//! Realizations of a transfer function as cavity networks.
//!
//! [`cascade`] chains single-mode cavities behind a static network;
//! [`feedback`] closes a bank of cavities through a static gain between
//! static pre- and post-networks. All static blocks are stored in
//! doubled-up form, also for passive systems.

pub mod cascade;
pub mod feedback;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lqss::CavitySpec;
use crate::scalar::{CMatrix, Real};

pub use cascade::{cascade_general, cascade_passive, CascadeRealization};
pub use feedback::{
    feedback_general, feedback_passive, Channel, FeedbackRealization, FreeParams, PairBlock, PlacedCavity,
    SpectrumAudit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Passive,
    General,
}

/// Reads per-port couplings off a `2m x 2` doubled-up column pair:
/// `kappa = |N1_i|^2`, `phi = arg N1_i`, `g = |N2_i|^2`, `theta = arg N2_i`,
/// with zero phases for zero couplings.
pub fn extract_cavity_params<T: Real>(column_pair: &CMatrix<T>, detuning: T) -> Result<CavitySpec<T>> {
    CavitySpec::from_coupling(column_pair, detuning)
}
