//! Cayley transform `X = (I - R)^{-1}(I + R)` and its inverse
//! `R = (X - I)(X + I)^{-1}`.
//!
//! Unitary `R` maps to skew-Hermitian `X`; Bogoliubov `R` maps to a
//! doubled-up `X` with `X^flat = -X`.

use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, identity};
use crate::scalar::{lit, CMatrix, Real};

/// Condition number above which `I - R` or `X + I` is treated as singular.
pub const SINGULAR_COND: f64 = 1e12;

pub fn cayley<T: Real>(r: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !r.is_square() {
        return Err(Error::Dimension(format!("cayley of {:?} matrix", r.shape())));
    }
    let id = identity::<T>(r.nrows());
    let inv = checked_inverse(&(&id - r), lit(SINGULAR_COND))
        .map_err(|cond| Error::UnitEigenvalue { cond })?;
    Ok(inv * (&id + r))
}

pub fn inverse_cayley<T: Real>(x: &CMatrix<T>) -> Result<CMatrix<T>> {
    if !x.is_square() {
        return Err(Error::Dimension(format!("inverse cayley of {:?} matrix", x.shape())));
    }
    let id = identity::<T>(x.nrows());
    let inv = checked_inverse(&(x + &id), lit(SINGULAR_COND))
        .map_err(|cond| Error::CayleySingular { cond })?;
    Ok((x - &id) * inv)
}
