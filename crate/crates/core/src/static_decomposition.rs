//! Static networks in terms of hardware primitives.
//!
//! A unitary `m x m` network is factored into adjacent beam splitters and
//! phase shifters by triangular nulling. A Bogoliubov `2m x 2m` network is
//! first put in Bloch–Messiah form
//! `diag(U2, U2#) [[cosh X, sinh X], [sinh X, cosh X]] diag(U1, U1#)`,
//! after which both unitaries are factored the same way.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{bogoliubov_residual, doubled_up, upper_blocks};
use crate::linalg::{complete_unitary, identity, max_abs, svd_full};
use crate::scalar::{cabs, carg, czero, expi, lit, to_f64, CMatrix, Real};
use crate::synthesis::SystemKind;

/// Input tolerance for the unitary and Bogoliubov checks, relative to
/// `max(1, max |R|^2)`.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Squeezing parameters below this are set to zero.
pub const SQUEEZE_CLAMP: f64 = 1e-10;

/// A single optical device, with the parameters of its transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "device", rename_all = "snake_case", bound = "")]
pub enum Device<T: Real = f64> {
    Phase { theta: T },
    BeamSplitter { theta: T, phi: T, psi: T, zeta: T },
    Squeezer { x: T, phi: T, psi: T },
}

/// `1 x 1` phase, `2 x 2` unitary beam splitter, or doubled-up `2 x 2`
/// Bogoliubov squeezer.
pub fn elementary_matrix<T: Real>(device: &Device<T>) -> CMatrix<T> {
    let half = lit::<T>(0.5);
    match *device {
        Device::Phase { theta } => CMatrix::from_element(1, 1, expi(theta)),
        Device::BeamSplitter { theta, phi, psi, zeta } => {
            let (c, s) = ((theta * half).cos(), (theta * half).sin());
            let g = expi(zeta);
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    g * expi((phi + psi) * half) * c,
                    g * expi((psi - phi) * half) * s,
                    -g * expi((phi - psi) * half) * s,
                    g * expi(-(phi + psi) * half) * c,
                ],
            )
        }
        Device::Squeezer { x, phi, psi } => CMatrix::from_row_slice(
            2,
            2,
            &[
                expi(phi + psi) * x.cosh(),
                expi(psi - phi) * x.sinh(),
                expi(phi - psi) * x.sinh(),
                expi(-(phi + psi)) * x.cosh(),
            ],
        ),
    }
}

/// A device placed on specific channels of a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", bound = "")]
pub enum Element<T: Real = f64> {
    PhaseShift { channel: usize, theta: T },
    BeamSplit { channels: [usize; 2], theta: T, phi: T, psi: T, zeta: T },
    Squeeze { channel: usize, x: T, phi: T, psi: T },
}

impl<T: Real> Element<T> {
    pub fn device(&self) -> Device<T> {
        match *self {
            Element::PhaseShift { theta, .. } => Device::Phase { theta },
            Element::BeamSplit { theta, phi, psi, zeta, .. } => Device::BeamSplitter { theta, phi, psi, zeta },
            Element::Squeeze { x, phi, psi, .. } => Device::Squeezer { x, phi, psi },
        }
    }

    /// Doubled-up `2m x 2m` action on an `m`-channel network.
    pub fn doubled_matrix(&self, m: usize) -> CMatrix<T> {
        let dev = elementary_matrix(&self.device());
        match *self {
            Element::Squeeze { channel, .. } => {
                let idx = [channel, m + channel];
                let mut out = identity::<T>(2 * m);
                for a in 0..2 {
                    for b in 0..2 {
                        out[(idx[a], idx[b])] = dev[(a, b)];
                    }
                }
                out
            }
            _ => doubled_up(&self.passive_matrix(m), &CMatrix::zeros(m, m)),
        }
    }

    /// `m x m` action of a passive element. Squeezers have none and give the
    /// identity.
    pub fn passive_matrix(&self, m: usize) -> CMatrix<T> {
        let mut out = identity::<T>(m);
        match *self {
            Element::PhaseShift { channel, theta } => out[(channel, channel)] = expi(theta),
            Element::BeamSplit { channels, .. } => {
                let dev = elementary_matrix(&self.device());
                for a in 0..2 {
                    for b in 0..2 {
                        out[(channels[a], channels[b])] = dev[(a, b)];
                    }
                }
            }
            Element::Squeeze { .. } => {}
        }
        out
    }

    fn channels(&self) -> Vec<usize> {
        match *self {
            Element::PhaseShift { channel, .. } | Element::Squeeze { channel, .. } => vec![channel],
            Element::BeamSplit { channels, .. } => channels.to_vec(),
        }
    }
}

/// `R = diag(U2, U2#) [[cosh X, sinh X], [sinh X, cosh X]] diag(U1, U1#)`,
/// with `X` non-negative and descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BlochMessiah<T: Real = f64> {
    #[serde(with = "crate::serde_cmatrix")]
    pub u1: CMatrix<T>,
    pub x: Vec<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub u2: CMatrix<T>,
}

impl<T: Real> BlochMessiah<T> {
    pub fn matrix(&self) -> CMatrix<T> {
        crate::random::bogoliubov_from_factors(&self.u2, &self.x, &self.u1)
    }
}

/// A static network as a list of elements in the order light meets them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StaticDecomposition<T: Real = f64> {
    pub kind: SystemKind,
    pub n_channels: usize,
    pub elements: Vec<Element<T>>,
    /// Bloch–Messiah factors, general kind only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<BlochMessiah<T>>,
}

impl<T: Real> StaticDecomposition<T> {
    /// `m x m` product for the passive kind, `2m x 2m` for the general kind.
    pub fn matrix(&self) -> CMatrix<T> {
        match self.kind {
            SystemKind::Passive => {
                let m = self.n_channels;
                self.elements
                    .iter()
                    .fold(identity(m), |acc, e| e.passive_matrix(m) * acc)
            }
            SystemKind::General => self.doubled_matrix(),
        }
    }

    /// Product of the elements as a `2m x 2m` doubled-up matrix.
    pub fn doubled_matrix(&self) -> CMatrix<T> {
        let m = self.n_channels;
        self.elements
            .iter()
            .fold(identity(2 * m), |acc, e| e.doubled_matrix(m) * acc)
    }

    pub fn beam_splitter_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::BeamSplit { .. }))
            .count()
    }

    pub fn squeezer_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, Element::Squeeze { .. }))
            .count()
    }

    /// Checks channel indices and that squeezers only occur in the general
    /// kind.
    pub fn check(&self) -> Result<()> {
        for (i, e) in self.elements.iter().enumerate() {
            let ch = e.channels();
            if ch.iter().any(|&c| c >= self.n_channels) || (ch.len() == 2 && ch[0] == ch[1]) {
                return Err(Error::Structure(format!(
                    "element {i} acts on channels {ch:?} of a {}-channel network",
                    self.n_channels
                )));
            }
            if self.kind == SystemKind::Passive && matches!(e, Element::Squeeze { .. }) {
                return Err(Error::Structure(format!("element {i} is a squeezer in a passive network")));
            }
        }
        Ok(())
    }
}

fn relative_scale<T: Real>(r: &CMatrix<T>) -> T {
    let s = max_abs(r).max(T::one());
    s * s
}

/// Beam splitters and phase shifters reproducing a unitary `u`; at most
/// `m(m-1)/2` beam splitters.
pub fn reck_decompose<T: Real>(u: &CMatrix<T>) -> Result<StaticDecomposition<T>> {
    if !u.is_square() {
        return Err(Error::Structure(format!("expected a square unitary, got {:?}", u.shape())));
    }
    let m = u.nrows();
    let residual = max_abs(&(u.adjoint() * u - identity::<T>(m)));
    if !(residual <= lit::<T>(STRUCTURE_TOL) * relative_scale(u)) {
        return Err(Error::Structure(format!(
            "matrix is not unitary: |U^H U - I| = {:.3e}",
            to_f64(residual)
        )));
    }
    Ok(StaticDecomposition {
        kind: SystemKind::Passive,
        n_channels: m,
        elements: reck_elements(u),
        factors: None,
    })
}

/// Rows `(j-1, j)` are rotated by `T = [[x*, y*], [-y, x]] / rho` to clear
/// entry `(j, c)`. At the end `T_K ... T_1 U = D`, so the light meets `D`,
/// then `T_K^H`, ..., `T_1^H`.
fn reck_elements<T: Real>(u: &CMatrix<T>) -> Vec<Element<T>> {
    let m = u.nrows();
    let tiny = lit::<T>(1e-15);
    let mut w = u.clone();
    let mut rotations = Vec::new();
    for c in 0..m {
        for j in (c + 1..m).rev() {
            let (x, y) = (w[(j - 1, c)], w[(j, c)]);
            if cabs(y) <= tiny {
                w[(j, c)] = czero();
                continue;
            }
            let rho = cabs(x).hypot(cabs(y));
            let (a, b) = (x.unscale(rho), y.unscale(rho));
            for k in 0..m {
                let (p, q) = (w[(j - 1, k)], w[(j, k)]);
                w[(j - 1, k)] = a.conj() * p + b.conj() * q;
                w[(j, k)] = -b * p + a * q;
            }
            w[(j, c)] = czero();
            // T^H = [[a, -b*], [b, a*]]
            let (ta, tb) = (a, -b.conj());
            let theta = lit::<T>(2.0) * cabs(tb).atan2(cabs(ta));
            let (pa, pb) = (carg(ta), if cabs(tb) > T::zero() { carg(tb) } else { T::zero() });
            rotations.push(Element::BeamSplit {
                channels: [j - 1, j],
                theta,
                phi: pa - pb,
                psi: pa + pb,
                zeta: T::zero(),
            });
        }
    }
    let mut elements: Vec<Element<T>> = (0..m)
        .filter_map(|i| {
            let theta = carg(w[(i, i)]);
            (theta.abs() > tiny).then_some(Element::PhaseShift { channel: i, theta })
        })
        .collect();
    elements.extend(rotations.into_iter().rev());
    elements
}

/// Bloch–Messiah factors of a Bogoliubov matrix.
///
/// `R1 = A C B` by SVD, then the Takagi factor `P` of `K = A^H R2 B^T`
/// fixes `U2 = A P`, `U1 = P^H B`.
pub fn bloch_messiah<T: Real>(r: &CMatrix<T>) -> Result<BlochMessiah<T>> {
    if !r.is_square() || !r.nrows().is_multiple_of(2) {
        return Err(Error::Structure(format!("expected a 2m x 2m Bogoliubov matrix, got {:?}", r.shape())));
    }
    let residual = bogoliubov_residual(r);
    if !(residual <= lit::<T>(STRUCTURE_TOL) * relative_scale(r)) {
        return Err(Error::Structure(format!(
            "matrix is not Bogoliubov: residual {:.3e}",
            to_f64(residual)
        )));
    }
    let m = r.nrows() / 2;
    let (r1, r2) = upper_blocks(r);
    let svd = svd_full(&r1)?;
    // `K = A^H R2 B^T` is complex symmetric. A full Takagi factorization
    // `K = P diag(sinh x) P^T` absorbs any rotation the SVD left inside
    // nearly equal squeezing values, and `K K^H = C^2 - I` makes the same
    // `P` reproduce `R1`.
    let (a, b) = (svd.u, svd.vh);
    let k = a.adjoint() * &r2 * b.transpose();
    let (p, sinh_x) = takagi(&k);
    let x: Vec<T> = sinh_x
        .into_iter()
        .map(|s| {
            let x = s.asinh();
            if x < lit(SQUEEZE_CLAMP) {
                T::zero()
            } else {
                x
            }
        })
        .collect();
    if x.iter().all(|v| v.is_zero()) {
        return Ok(BlochMessiah {
            u1: identity(m),
            x,
            u2: r1,
        });
    }
    let mut u2 = a * &p;
    let mut u1 = p.adjoint() * b;
    // Each factor column is fixed up to a sign shared with the row of U1.
    for j in 0..m {
        if let Some(z) = u2.column(j).iter().find(|z| cabs(**z) > lit(1e-9)).copied() {
            if z.re < T::zero() {
                u2.column_mut(j).neg_mut();
                u1.row_mut(j).neg_mut();
            }
        }
    }
    Ok(BlochMessiah { u1, x, u2 })
}

/// Takagi factorization `K = P diag(sigma) P^T` of a complex symmetric
/// matrix, with `sigma` descending.
///
/// `K conj(u) = sigma u` with `u = x + i y` is the real symmetric problem
/// `[[Re K, Im K], [Im K, -Re K]] [x; y] = sigma [x; y]`, whose spectrum is
/// `±sigma`. Eigenvectors of distinct positive eigenvalues give
/// orthonormal `u`; the null space is completed arbitrarily.
fn takagi<T: Real>(k: &CMatrix<T>) -> (CMatrix<T>, Vec<T>) {
    let n = k.nrows();
    let sym = (k + k.transpose()).scale(lit(0.5));
    let h = DMatrix::<T>::from_fn(2 * n, 2 * n, |i, j| {
        let z = sym[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) => z.re,
            (false, false) => -z.re,
            _ => z.im,
        }
    });
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap_or(std::cmp::Ordering::Equal));
    let kept: Vec<usize> = order
        .into_iter()
        .take(n)
        .filter(|&i| eig.eigenvalues[i] > lit(SQUEEZE_CLAMP))
        .collect();
    let cols = CMatrix::<T>::from_fn(n, kept.len(), |r, c| {
        let v = eig.eigenvectors.column(kept[c]);
        Complex::new(v[r], v[n + r])
    });
    let mut sigma: Vec<T> = kept.iter().map(|&i| eig.eigenvalues[i]).collect();
    sigma.resize(n, T::zero());
    (complete_unitary(&cols), sigma)
}

/// Bloch–Messiah factors followed by Reck meshes for both unitaries:
/// elements of `U1`, then one squeezer per nonzero `x`, then `U2`.
pub fn decompose_bogoliubov<T: Real>(r: &CMatrix<T>) -> Result<StaticDecomposition<T>> {
    let f = bloch_messiah(r)?;
    let m = f.x.len();
    let mut elements = reck_elements(&f.u1);
    elements.extend(f.x.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, &x)| Element::Squeeze {
        channel: i,
        x,
        phi: T::zero(),
        psi: T::zero(),
    }));
    elements.extend(reck_elements(&f.u2));
    Ok(StaticDecomposition {
        kind: SystemKind::General,
        n_channels: m,
        elements,
        factors: Some(f),
    })
}

/// Decomposes a doubled-up static network: a Reck mesh when it has no
/// creation-operator block, Bloch–Messiah otherwise.
pub fn decompose_static<T: Real>(r: &CMatrix<T>) -> Result<StaticDecomposition<T>> {
    if !r.is_square() || !r.nrows().is_multiple_of(2) {
        return Err(Error::Structure(format!("expected a 2m x 2m static network, got {:?}", r.shape())));
    }
    let (r1, r2) = upper_blocks(r);
    if max_abs(&r2) <= lit(SQUEEZE_CLAMP) && bogoliubov_residual(r) <= lit::<T>(STRUCTURE_TOL) * relative_scale(r) {
        reck_decompose(&r1)
    } else {
        decompose_bogoliubov(r)
    }
}
