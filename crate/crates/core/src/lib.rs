//! Synthesis of linear quantum stochastic systems as optical networks.
//!
//! A system is a triple `(S, N, M)` of scattering, coupling and Hamiltonian
//! matrices. The crate realizes its transfer function either as a cascade of
//! single-mode cavities behind a static network, or as a bank of cavities
//! closed through a static feedback gain between static pre- and
//! post-networks, and checks the result by comparing transfer functions.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod krein;
pub mod linalg;
pub mod lqss;
pub mod random;
pub mod scalar;
pub mod serde_cmatrix;
pub mod static_decomposition;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use krein::cayley::{cayley, inverse_cayley};
pub use krein::schur::{krein_schur, unitary_schur, EigenOrdering};
pub use krein::svd::krein_svd;
pub use krein::{
    bogoliubov_from_positive, doubled_up, flat_adjoint, is_bogoliubov, is_doubled_up, j_inner, j_norm,
    krein_gram_schmidt, krein_normalize, sigma_conj, DoubledUpMatrix as GenericDoubledUpMatrix,
};
pub use lqss::{CavityPort as GenericCavityPort, CavitySpec as GenericCavitySpec, ValidationReport};
pub use scalar::{CMatrix, CVector, Real};
pub use static_decomposition::{
    bloch_messiah, decompose_bogoliubov, decompose_static, elementary_matrix, reck_decompose,
};
pub use synthesis::{
    cascade_general, cascade_passive, extract_cavity_params, feedback_general, feedback_passive, Channel,
    SpectrumAudit, SystemKind,
};
pub use verify::{assemble_cascade, assemble_feedback, verify_equivalence, EquivalenceReport, FrequencySpec, Verdict};

pub type ComplexMatrix = scalar::CMatrix<f64>;
pub type ComplexVector = scalar::CVector<f64>;
pub type DoubledUpMatrix = krein::DoubledUpMatrix<f64>;
pub type KreinSchurResult = krein::schur::KreinSchurResult<f64>;
pub type KreinSvdResult = krein::svd::KreinSvdResult<f64>;
pub type Spectrum = krein::svd::Spectrum<f64>;
pub type PassiveSystem = lqss::PassiveLqss<f64>;
pub type GeneralSystem = lqss::GeneralLqss<f64>;
pub type CavitySpec = lqss::CavitySpec<f64>;
pub type CavityPort = lqss::CavityPort<f64>;
pub type CascadeRealization = synthesis::CascadeRealization<f64>;
pub type FeedbackRealization = synthesis::FeedbackRealization<f64>;
pub type FreeParams = synthesis::FreeParams<f64>;
pub type PlacedCavity = synthesis::PlacedCavity<f64>;
pub type PairBlock = synthesis::PairBlock<f64>;
pub type Device = static_decomposition::Device<f64>;
pub type Element = static_decomposition::Element<f64>;
pub type BlochMessiah = static_decomposition::BlochMessiah<f64>;
pub type StaticDecomposition = static_decomposition::StaticDecomposition<f64>;
