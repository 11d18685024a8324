//! Single-mode cavity with passive and active port couplings.

use serde::{Deserialize, Serialize};

use super::GeneralLqss;
use crate::error::{Error, Result};
use crate::krein::doubled_up;
use crate::linalg::identity;
use crate::scalar::{cabs, carg, creal, expi, lit, CMatrix, Real};

/// One port of a cavity: passive coupling `kappa` with phase `phi` and active
/// coupling `g` with phase `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CavityPort<T: Real = f64> {
    pub kappa: T,
    pub phi: T,
    pub g: T,
    pub theta: T,
}

impl<T: Real> CavityPort<T> {
    pub fn passive(kappa: T, phi: T) -> Self {
        Self {
            kappa,
            phi,
            g: T::zero(),
            theta: T::zero(),
        }
    }

    pub fn active(g: T, theta: T) -> Self {
        Self {
            kappa: T::zero(),
            phi: T::zero(),
            g,
            theta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CavitySpec<T: Real = f64> {
    pub detuning: T,
    pub ports: Vec<CavityPort<T>>,
}

impl<T: Real> CavitySpec<T> {
    /// Net decay rate `gamma = sum(kappa_i - g_i)`.
    pub fn gamma(&self) -> T {
        self.ports.iter().fold(T::zero(), |acc, p| acc + p.kappa - p.g)
    }

    /// Reads a cavity off a doubled-up `2m x 2` coupling column pair.
    pub fn from_coupling(column_pair: &CMatrix<T>, detuning: T) -> Result<Self> {
        if column_pair.ncols() != 2 || !column_pair.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "cavity coupling must be 2m x 2, got {:?}",
                column_pair.shape()
            )));
        }
        let m = column_pair.nrows() / 2;
        let ports = (0..m)
            .map(|i| {
                let a = column_pair[(i, 0)];
                let b = column_pair[(i, 1)];
                let (ka, kb) = (cabs(a), cabs(b));
                CavityPort {
                    kappa: ka * ka,
                    phi: if ka > T::zero() { carg(a) } else { T::zero() },
                    g: kb * kb,
                    theta: if kb > T::zero() { carg(b) } else { T::zero() },
                }
            })
            .collect();
        Ok(Self { detuning, ports })
    }

    /// Upper blocks `(N1, N2)` of the `2m x 2` coupling, each `m x 1`.
    pub fn coupling_blocks(&self) -> (CMatrix<T>, CMatrix<T>) {
        let m = self.ports.len();
        let n1 = CMatrix::from_fn(m, 1, |i, _| expi(self.ports[i].phi) * self.ports[i].kappa.sqrt());
        let n2 = CMatrix::from_fn(m, 1, |i, _| expi(self.ports[i].theta) * self.ports[i].g.sqrt());
        (n1, n2)
    }
}

/// The cavity as a one-mode system with identity scattering.
pub fn cavity_system<T: Real>(spec: &CavitySpec<T>) -> Result<GeneralLqss<T>> {
    for (i, p) in spec.ports.iter().enumerate() {
        if !(p.kappa >= T::zero()) || !(p.g >= T::zero()) {
            return Err(Error::Parameter(format!("port {i} has a negative or undefined coupling")));
        }
        if !p.phi.is_finite() || !p.theta.is_finite() {
            return Err(Error::Parameter(format!("port {i} has a non-finite phase")));
        }
    }
    if !spec.detuning.is_finite() {
        return Err(Error::Parameter("non-finite detuning".into()));
    }
    let m = spec.ports.len();
    let (n1, n2) = spec.coupling_blocks();
    let mm = doubled_up(
        &CMatrix::from_element(1, 1, creal(spec.detuning)),
        &CMatrix::zeros(1, 1),
    );
    GeneralLqss::new(identity(2 * m), doubled_up(&n1, &n2), mm)
}

/// Passive one-port cavity with zero phase.
pub fn one_port<T: Real>(detuning: T, kappa: T) -> CavitySpec<T> {
    CavitySpec {
        detuning,
        ports: vec![CavityPort::passive(kappa, lit(0.0))],
    }
}
