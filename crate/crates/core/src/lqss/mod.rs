//! Passive and general linear quantum stochastic systems.
//!
//! A general system is the doubled-up triple `(S, N, M)` with generator
//! `F = -i J M - N^flat N / 2` and transfer function
//! `G(s) = [I - N (sI - F)^{-1} N^flat] S`. A passive system uses the
//! annihilation blocks only, with `F = -i M - N^H N / 2`.

pub mod cavity;
pub mod compose;

use std::fmt;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{self, doubled_up, flat, j_left};
use crate::linalg::{self, checked_inverse, identity, max_abs};
use crate::scalar::{c64_pair, imag_unit, lit, to_f64, CMatrix, Real};

pub use cavity::{cavity_system, CavityPort, CavitySpec};
pub use compose::{close_feedback, concatenate, embed_channels, series, static_system};

/// Condition number of `sI - F` above which `s` is treated as a pole.
pub const POLE_COND: f64 = 1e12;

/// Default structural tolerance, relative to `max(1, max |X|)`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// One violated structural constraint with its max-norm residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub residual: f64,
}

/// Result of [`PassiveLqss::validate`] or [`GeneralLqss::validate`]; empty
/// means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.constraint.as_str()).collect()
    }

    fn check(&mut self, constraint: &str, residual: f64, limit: f64) {
        if !(residual <= limit) {
            self.violations.push(Violation {
                constraint: constraint.to_string(),
                residual,
            });
        }
    }

    fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} (residual {:.3e})", v.constraint, v.residual))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn scaled<T: Real>(tol: T, m: &CMatrix<T>) -> f64 {
    to_f64(tol) * to_f64(max_abs(m)).max(1.0)
}

/// `(S, N, M)` acting on annihilation operators only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PassiveLqss<T: Real = f64> {
    #[serde(with = "crate::serde_cmatrix")]
    pub s: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub n: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub m: CMatrix<T>,
}

impl<T: Real> PassiveLqss<T> {
    /// Checks shapes only; see [`validate`](Self::validate) for the
    /// structural constraints.
    pub fn new(s: CMatrix<T>, n: CMatrix<T>, m: CMatrix<T>) -> Result<Self> {
        let io = s.nrows();
        if !s.is_square() {
            return Err(Error::Dimension(format!("S is {:?}; non-square scattering is not supported", s.shape())));
        }
        if n.nrows() != io {
            return Err(Error::Dimension(format!("N has {} rows, S has {io}", n.nrows())));
        }
        if m.shape() != (n.ncols(), n.ncols()) {
            return Err(Error::Dimension(format!("M is {:?}, expected {}x{}", m.shape(), n.ncols(), n.ncols())));
        }
        Ok(Self { s, n, m })
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_io(&self) -> usize {
        self.s.nrows()
    }

    pub fn validate(&self, tol: T) -> ValidationReport {
        let mut r = ValidationReport::default();
        for (name, x) in [("S", &self.s), ("N", &self.n), ("M", &self.m)] {
            if !linalg::is_finite(x) {
                r.check(&format!("{name} finite"), f64::INFINITY, 0.0);
            }
        }
        let herm = to_f64(max_abs(&(&self.m - self.m.adjoint())));
        r.check("M Hermitian", herm, scaled(tol, &self.m));
        let id = identity::<T>(self.n_io());
        let u1 = to_f64(max_abs(&(self.s.adjoint() * &self.s - &id)));
        let u2 = to_f64(max_abs(&(&self.s * self.s.adjoint() - &id)));
        r.check("S unitary", u1.max(u2), to_f64(tol));
        r
    }

    /// `F = -i M - N^H N / 2`
    pub fn generator(&self) -> CMatrix<T> {
        self.m.map(|z| -imag_unit::<T>() * z) - (self.n.adjoint() * &self.n).scale(lit(0.5))
    }

    /// `G(s) = [I - N (sI - F)^{-1} N^H] S`
    pub fn transfer_function(&self, s: Complex<T>) -> Result<CMatrix<T>> {
        let resolvent = resolvent(&self.generator(), s)?;
        let io = self.n_io();
        Ok((identity::<T>(io) - &self.n * resolvent * self.n.adjoint()) * &self.s)
    }

    /// Doubled-up embedding with zero active blocks.
    pub fn embed(&self) -> GeneralLqss<T> {
        let z = |x: &CMatrix<T>| CMatrix::<T>::zeros(x.nrows(), x.ncols());
        GeneralLqss {
            s: doubled_up(&self.s, &z(&self.s)),
            n: doubled_up(&self.n, &z(&self.n)),
            m: doubled_up(&self.m, &z(&self.m)),
        }
    }

    /// `(S, N U^H, U M U^H)` for unitary `U`.
    pub fn state_transform(&self, u: &CMatrix<T>) -> Result<Self> {
        if u.shape() != (self.n_modes(), self.n_modes()) {
            return Err(Error::Dimension(format!("transform is {:?}", u.shape())));
        }
        if !linalg::is_unitary(u, lit(1e-8)) {
            return Err(Error::Structure("state transform is not unitary".into()));
        }
        Ok(Self {
            s: self.s.clone(),
            n: &self.n * u.adjoint(),
            m: u * &self.m * u.adjoint(),
        })
    }
}

/// Doubled-up `(S, N, M)`: `S` is `2m x 2m`, `N` is `2m x 2n`, `M` is
/// `2n x 2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GeneralLqss<T: Real = f64> {
    #[serde(with = "crate::serde_cmatrix")]
    pub s: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub n: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub m: CMatrix<T>,
}

impl<T: Real> GeneralLqss<T> {
    /// Checks shapes only; see [`validate`](Self::validate) for the
    /// structural constraints.
    pub fn new(s: CMatrix<T>, n: CMatrix<T>, m: CMatrix<T>) -> Result<Self> {
        if !s.is_square() || !s.nrows().is_multiple_of(2) {
            return Err(Error::Dimension(format!(
                "S is {:?}; expected an even square matrix",
                s.shape()
            )));
        }
        if n.nrows() != s.nrows() || !n.ncols().is_multiple_of(2) {
            return Err(Error::Dimension(format!("N is {:?}, S is {:?}", n.shape(), s.shape())));
        }
        if m.shape() != (n.ncols(), n.ncols()) {
            return Err(Error::Dimension(format!("M is {:?}, N is {:?}", m.shape(), n.shape())));
        }
        Ok(Self { s, n, m })
    }

    /// Builds the system from the upper blocks of `S`, `N` and `M`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_blocks(
        s1: &CMatrix<T>,
        s2: &CMatrix<T>,
        n1: &CMatrix<T>,
        n2: &CMatrix<T>,
        m1: &CMatrix<T>,
        m2: &CMatrix<T>,
    ) -> Result<Self> {
        for (name, a, b) in [("S", s1, s2), ("N", n1, n2), ("M", m1, m2)] {
            if a.shape() != b.shape() {
                return Err(Error::Dimension(format!(
                    "{name} blocks have shapes {:?} and {:?}",
                    a.shape(),
                    b.shape()
                )));
            }
        }
        Self::new(doubled_up(s1, s2), doubled_up(n1, n2), doubled_up(m1, m2))
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn n_io(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn validate(&self, tol: T) -> ValidationReport {
        let mut r = ValidationReport::default();
        for (name, x) in [("S", &self.s), ("N", &self.n), ("M", &self.m)] {
            if !linalg::is_finite(x) {
                r.check(&format!("{name} finite"), f64::INFINITY, 0.0);
            }
        }
        let herm = to_f64(max_abs(&(&self.m - self.m.adjoint())));
        r.check("M Hermitian", herm, scaled(tol, &self.m));
        r.check(
            "M doubled-up",
            to_f64(krein::doubled_up_residual(&self.m)),
            scaled(tol, &self.m),
        );
        r.check(
            "N doubled-up",
            to_f64(krein::doubled_up_residual(&self.n)),
            scaled(tol, &self.n),
        );
        r.check(
            "S Bogoliubov",
            to_f64(krein::bogoliubov_residual(&self.s)),
            scaled(tol, &self.s),
        );
        r
    }

    /// Returns the system unchanged if it validates, the report otherwise.
    pub fn validated(self, tol: T) -> Result<Self> {
        self.validate(tol).into_result()?;
        Ok(self)
    }

    /// `F = -i J M - N^flat N / 2`
    pub fn generator(&self) -> CMatrix<T> {
        j_left(&self.m).map(|z| -imag_unit::<T>() * z) - (flat(&self.n) * &self.n).scale(lit(0.5))
    }

    /// `G(s) = [I - N (sI - F)^{-1} N^flat] S`
    pub fn transfer_function(&self, s: Complex<T>) -> Result<CMatrix<T>> {
        if self.n_modes() == 0 {
            return Ok(self.s.clone());
        }
        let resolvent = resolvent(&self.generator(), s)?;
        Ok((identity::<T>(2 * self.n_io()) - &self.n * resolvent * flat(&self.n)) * &self.s)
    }

    /// `(S, N V^{-1}, V^{-H} M V^{-1})` for Bogoliubov `V`, where
    /// `V^{-1} = V^flat`.
    pub fn state_transform(&self, v: &CMatrix<T>) -> Result<Self> {
        if v.shape() != self.m.shape() {
            return Err(Error::Dimension(format!(
                "transform is {:?}, state space is {:?}",
                v.shape(),
                self.m.shape()
            )));
        }
        let res = krein::bogoliubov_residual(v);
        if !(res <= lit::<T>(1e-8) * max_abs(v).max(T::one())) {
            return Err(Error::Structure(format!(
                "state transform is not Bogoliubov (residual {:.3e})",
                to_f64(res)
            )));
        }
        let v_inv = flat(v);
        Ok(Self {
            s: self.s.clone(),
            n: &self.n * &v_inv,
            m: v_inv.adjoint() * &self.m * &v_inv,
        })
    }

    /// Recovers `M = i J (F + N^flat N / 2)` from a generator.
    pub fn from_generator(s: CMatrix<T>, n: CMatrix<T>, f: &CMatrix<T>) -> Result<Self> {
        let inner = f + (flat(&n) * &n).scale(lit(0.5));
        let m = j_left(&inner).map(|z| imag_unit::<T>() * z);
        Self::new(s, n, m)
    }
}

/// `(sI - F)^{-1}`, failing with [`Error::PoleAt`] near an eigenvalue.
pub fn resolvent<T: Real>(f: &CMatrix<T>, s: Complex<T>) -> Result<CMatrix<T>> {
    let n = f.nrows();
    let a = CMatrix::<T>::identity(n, n) * s - f;
    checked_inverse(&a, lit(POLE_COND)).map_err(|cond| {
        let (re, im) = c64_pair(s);
        Error::PoleAt { re, im, cond }
    })
}
