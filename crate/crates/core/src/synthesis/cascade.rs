//! Cascade realization: a static network followed by `n` single-mode
//! cavities, each seeing every channel.
//!
//! A state transformation `V` that makes the generator triangular turns the
//! system into a chain in which mode `i` is driven only by modes before it.
//! Column pair `(i, n + i)` of `N V^{-1}` then holds the port couplings of
//! cavity `i`, and `-Im` of the `i`-th diagonal entry its detuning.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::{extract_cavity_params, SystemKind};
use crate::error::Result;
use crate::krein::schur::{krein_schur, unitary_schur, EigenOrdering};
use crate::krein::{doubled_up, flat};
use crate::linalg::select;
use crate::lqss::{CavitySpec, GeneralLqss, PassiveLqss};
use crate::scalar::{c64_pair, CMatrix, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CascadeRealization<T: Real = f64> {
    pub kind: SystemKind,
    /// Static network applied to the inputs before the first cavity.
    #[serde(with = "crate::serde_cmatrix")]
    pub pre_network: CMatrix<T>,
    /// Cavities in the order the field passes through them; port `j` of every
    /// cavity sits on channel `j`.
    pub cavities: Vec<CavitySpec<T>>,
    /// State transformation `V` with `V F V^{-1}` triangular.
    #[serde(with = "crate::serde_cmatrix")]
    pub transform: CMatrix<T>,
    pub ordering: EigenOrdering,
    /// Diagonal of the triangular generator, top to bottom.
    #[serde(with = "crate::serde_cmatrix::complex_list")]
    pub eigen_order: Vec<Complex<f64>>,
}

impl<T: Real> CascadeRealization<T> {
    pub fn n_io(&self) -> usize {
        self.pre_network.nrows() / 2
    }

    pub fn detunings(&self) -> Vec<T> {
        self.cavities.iter().map(|c| c.detuning).collect()
    }
}

fn cavities_from<T: Real>(n_hat: &CMatrix<T>, diag: &[Complex<T>]) -> Result<Vec<CavitySpec<T>>> {
    let n = diag.len();
    let rows: Vec<usize> = (0..n_hat.nrows()).collect();
    diag.iter()
        .enumerate()
        .map(|(i, d)| extract_cavity_params(&select(n_hat, &rows, &[i, n + i]), -d.im))
        .collect()
}

fn to_f64_list<T: Real>(v: &[Complex<T>]) -> Vec<Complex<f64>> {
    v.iter()
        .map(|z| {
            let (re, im) = c64_pair(*z);
            Complex::new(re, im)
        })
        .collect()
}

/// Cascade of a multi-beam splitter `S` and `n` passive `m`-port cavities.
pub fn cascade_passive<T: Real>(sys: &PassiveLqss<T>, ordering: &EigenOrdering) -> Result<CascadeRealization<T>> {
    let schur = unitary_schur(&sys.generator(), ordering)?;
    let zeros = |r: usize, c: usize| CMatrix::<T>::zeros(r, c);
    let (m, n) = (sys.n_io(), sys.n_modes());
    let v = schur.q.adjoint();
    let n_hat = doubled_up(&(&sys.n * &schur.q), &zeros(m, n));
    Ok(CascadeRealization {
        kind: SystemKind::Passive,
        pre_network: doubled_up(&sys.s, &zeros(m, m)),
        cavities: cavities_from(&n_hat, &schur.eigen_order)?,
        transform: doubled_up(&v, &zeros(n, n)),
        ordering: ordering.clone(),
        eigen_order: to_f64_list(&schur.eigen_order),
    })
}

/// Cascade of a multi-squeezer `S` and `n` general `m`-port cavities.
///
/// Fails with [`Error::AssumptionIViolated`](crate::Error::AssumptionIViolated)
/// when a deflation step finds only neutral eigenvectors.
pub fn cascade_general<T: Real>(sys: &GeneralLqss<T>, ordering: &EigenOrdering) -> Result<CascadeRealization<T>> {
    let schur = krein_schur(&sys.generator(), ordering)?;
    let n_hat = &sys.n * &schur.w;
    Ok(CascadeRealization {
        kind: SystemKind::General,
        pre_network: sys.s.clone(),
        cavities: cavities_from(&n_hat, &schur.eigen_order)?,
        transform: flat(&schur.w),
        ordering: ordering.clone(),
        eigen_order: to_f64_list(&schur.eigen_order),
    })
}
