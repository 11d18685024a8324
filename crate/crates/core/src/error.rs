use thiserror::Error;

use crate::lqss::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("vector has (near) zero J-norm: |<v,v>_J| = {j_norm:.3e}, ||v||^2 = {euclid:.3e}")]
    NeutralVector { j_norm: f64, euclid: f64 },

    #[error("cannot complete J-orthonormal basis: remaining candidates are neutral (best |J-norm| {best:.3e})")]
    DegenerateComplement { best: f64 },

    #[error("Krein-Schur deflation step {step} of {total}: every eigenvector of the current block is neutral")]
    AssumptionIViolated { step: usize, total: usize },

    #[error("eigenvalue {re:.6}{im:+.6}i of N^flat N has algebraic multiplicity {algebraic} but geometric multiplicity {geometric}")]
    NotSemisimple { re: f64, im: f64, algebraic: usize, geometric: usize },

    #[error("ker(N^flat N) differs from ker(N): rank(N) = {rank_n}, rank(N^flat N) = {rank_nn}")]
    KernelMismatch { rank_n: usize, rank_nn: usize },

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("I - R is singular (condition number {cond:.3e}); R has an eigenvalue at 1")]
    UnitEigenvalue { cond: f64 },

    #[error("X + I is singular (condition number {cond:.3e}); choose different detunings D")]
    CayleySingular { cond: f64 },

    #[error("s = {re}{im:+}i is a pole of the transfer function (condition number {cond:.3e})")]
    PoleAt { re: f64, im: f64, cond: f64 },

    #[error("algebraic loop: I - R S_ii is singular (condition number {cond:.3e})")]
    AlgebraicLoop { cond: f64 },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("invalid system: {0}")]
    Validation(ValidationReport),

    #[error("frequency sampling failed: {0}")]
    Sampling(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for the errors a synthesis run reports when its input is outside
    /// the class the decompositions handle.
    pub fn is_synthesis_failure(&self) -> bool {
        matches!(
            self,
            Error::AssumptionIViolated { .. }
                | Error::NotSemisimple { .. }
                | Error::KernelMismatch { .. }
                | Error::UnsupportedSpectrum(_)
                | Error::CayleySingular { .. }
                | Error::UnitEigenvalue { .. }
                | Error::NeutralVector { .. }
                | Error::DegenerateComplement { .. }
                | Error::AlgebraicLoop { .. }
                | Error::PoleAt { .. }
        )
    }
}
