//! Krein-space algebra on `C^{2k}` with the indefinite form `v^H J w`,
//! `J = diag(I_k, -I_k)`.
//!
//! Doubled-up matrices have the block shape `[[X1, X2], [X2#, X1#]]`, where
//! `#` is entrywise conjugation. The flat adjoint is `X^flat = J X^H J`, and a
//! Bogoliubov matrix is doubled-up and flat-unitary.

pub mod cayley;
pub mod schur;
pub mod svd;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, from_columns, max_abs, vnorm};
use crate::scalar::{lit, to_f64, CMatrix, CVector, Real};

/// Relative threshold below which a J-norm counts as zero.
pub const NEUTRAL_TOL: f64 = 1e-9;

/// Signature and swap matrices of a Krein space of half dimension `k`.
#[derive(Debug, Clone)]
pub struct KreinStructure<T: Real> {
    pub half_dim: usize,
    pub j: CMatrix<T>,
    pub sigma: CMatrix<T>,
}

impl<T: Real> KreinStructure<T> {
    pub fn new(half_dim: usize) -> Self {
        Self {
            half_dim,
            j: j_matrix(half_dim),
            sigma: sigma_matrix(half_dim),
        }
    }
}

/// `J_{2k} = diag(I_k, -I_k)`
pub fn j_matrix<T: Real>(k: usize) -> CMatrix<T> {
    let mut j = CMatrix::identity(2 * k, 2 * k);
    for i in k..2 * k {
        j[(i, i)] = -j[(i, i)];
    }
    j
}

/// `Sigma_{2k} = [[0, I_k], [I_k, 0]]`
pub fn sigma_matrix<T: Real>(k: usize) -> CMatrix<T> {
    let mut s = CMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        s[(i, k + i)] = crate::scalar::cone();
        s[(k + i, i)] = crate::scalar::cone();
    }
    s
}

fn half(n: usize, what: &str) -> Result<usize> {
    if !n.is_multiple_of(2) {
        return Err(Error::Dimension(format!("{what} has odd dimension {n}")));
    }
    Ok(n / 2)
}

/// Negates the lower half of the rows (left multiplication by `J`).
pub fn j_left<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let k = m.nrows() / 2;
    let mut out = m.clone();
    for mut row in out.rows_mut(k, m.nrows() - k).row_iter_mut() {
        row.neg_mut();
    }
    out
}

/// Negates the right half of the columns (right multiplication by `J`).
pub fn j_right<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let k = m.ncols() / 2;
    let mut out = m.clone();
    for mut col in out.columns_mut(k, m.ncols() - k).column_iter_mut() {
        col.neg_mut();
    }
    out
}

/// `X^flat = J_{2s} X^H J_{2r}` for a `2r x 2s` matrix.
pub fn flat_adjoint<T: Real>(x: &CMatrix<T>) -> Result<CMatrix<T>> {
    half(x.nrows(), "matrix")?;
    half(x.ncols(), "matrix")?;
    Ok(flat(x))
}

/// Unchecked flat adjoint for internal use on even-dimensioned matrices.
pub(crate) fn flat<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    j_right(&j_left(&x.adjoint()))
}

/// `Sigma_{2r} X Sigma_{2s}` conjugated entrywise, i.e. the matrix a
/// doubled-up `X` must equal.
fn sigma_mirror<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    let (r, s) = (x.nrows() / 2, x.ncols() / 2);
    CMatrix::from_fn(2 * r, 2 * s, |i, j| {
        let si = if i < r { i + r } else { i - r };
        let sj = if j < s { j + s } else { j - s };
        x[(si, sj)].conj()
    })
}

/// Nearest doubled-up matrix, `(X + Sigma X# Sigma) / 2`.
pub(crate) fn doubled_up_part<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    (x + sigma_mirror(x)).scale(lit(0.5))
}

pub fn is_doubled_up<T: Real>(x: &CMatrix<T>, tol: T) -> Result<bool> {
    half(x.nrows(), "matrix")?;
    half(x.ncols(), "matrix")?;
    Ok(max_abs(&(sigma_mirror(x) - x)) <= tol)
}

/// Largest violation of the doubled-up block pattern.
pub fn doubled_up_residual<T: Real>(x: &CMatrix<T>) -> T {
    max_abs(&(sigma_mirror(x) - x))
}

/// Largest of the doubled-up residual and the two flat-unitarity residuals.
pub fn bogoliubov_residual<T: Real>(r: &CMatrix<T>) -> T {
    if !r.is_square() || !r.nrows().is_multiple_of(2) {
        return T::max_value().unwrap_or(lit(f64::MAX));
    }
    let id = linalg::identity::<T>(r.nrows());
    let rf = flat(r);
    let a = max_abs(&(r * &rf - &id));
    let b = max_abs(&(&rf * r - &id));
    doubled_up_residual(r).max(a).max(b)
}

pub fn is_bogoliubov<T: Real>(r: &CMatrix<T>, tol: T) -> Result<bool> {
    half(r.nrows(), "matrix")?;
    half(r.ncols(), "matrix")?;
    if !r.is_square() {
        return Ok(false);
    }
    Ok(bogoliubov_residual(r) <= tol)
}

/// `v^H J w`
pub fn j_inner<T: Real>(v: &CVector<T>, w: &CVector<T>) -> Result<Complex<T>> {
    if v.len() != w.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            v.len(),
            w.len()
        )));
    }
    half(v.len(), "vector")?;
    Ok(jdot(v, w))
}

pub(crate) fn jdot<T: Real>(v: &CVector<T>, w: &CVector<T>) -> Complex<T> {
    let k = v.len() / 2;
    let top = v.rows(0, k).dotc(&w.rows(0, k));
    let bottom = v.rows(k, k).dotc(&w.rows(k, k));
    top - bottom
}

/// Real value `v^H J v`.
pub fn j_norm_sq<T: Real>(v: &CVector<T>) -> T {
    jdot(v, v).re
}

/// `sqrt(|v^H J v|)` together with the sign of `v^H J v` (0 when exactly zero).
pub fn j_norm<T: Real>(v: &CVector<T>) -> Result<(T, i8)> {
    half(v.len(), "vector")?;
    let q = j_norm_sq(v);
    let sign = if q > T::zero() {
        1
    } else if q < T::zero() {
        -1
    } else {
        0
    };
    Ok((q.abs().sqrt(), sign))
}

/// `Sigma v#`: swaps the halves and conjugates.
pub fn sigma_conj<T: Real>(v: &CVector<T>) -> CVector<T> {
    let k = v.len() / 2;
    CVector::from_fn(v.len(), |i, _| {
        let si = if i < k { i + k } else { i - k };
        v[si].conj()
    })
}

/// Scales `v` to unit positive J-norm. A vector of negative J-norm is first
/// replaced by `Sigma v#`; the returned sign records the original sign.
pub fn krein_normalize<T: Real>(v: &CVector<T>, tol: T) -> Result<(CVector<T>, i8)> {
    half(v.len(), "vector")?;
    let q = j_norm_sq(v);
    let e = vnorm(v);
    let euclid = e * e;
    if q.abs() <= tol * euclid || euclid == T::zero() {
        return Err(Error::NeutralVector {
            j_norm: to_f64(q.abs()),
            euclid: to_f64(euclid),
        });
    }
    if q > T::zero() {
        Ok((v.unscale(q.sqrt()), 1))
    } else {
        Ok((sigma_conj(v).unscale((-q).sqrt()), -1))
    }
}

/// Removes from `v` its components along a J-orthonormal family given by its
/// positive vectors `xs` (their `Sigma x#` partners are handled implicitly).
pub(crate) fn j_project_out<T: Real>(xs: &[CVector<T>], v: &CVector<T>) -> CVector<T> {
    let mut w = v.clone();
    for _ in 0..2 {
        for x in xs {
            let c = jdot(x, &w);
            w -= x * c;
            let y = sigma_conj(x);
            let d = jdot(&y, &w);
            w += &y * d;
        }
    }
    w
}

/// Completes a J-orthonormal family to a full J-orthonormal basis of
/// `C^{2k}`.
///
/// `fixed` must be J-orthonormal with norms `+-1` and closed under
/// `v -> Sigma v#`. Returns `[x_1, ..., x_k, Sigma x_1#, ..., Sigma x_k#]` with
/// the positive fixed vectors first, in their given order.
pub fn krein_gram_schmidt<T: Real>(
    fixed: &[CVector<T>],
    pool: &[CVector<T>],
    tol: T,
) -> Result<Vec<CVector<T>>> {
    let dim = fixed
        .first()
        .or(pool.first())
        .map(|v| v.len())
        .ok_or_else(|| Error::Dimension("empty vector family".into()))?;
    let k = half(dim, "vector")?;
    if fixed.iter().chain(pool.iter()).any(|v| v.len() != dim) {
        return Err(Error::Dimension("vectors of unequal length".into()));
    }
    let mut xs: Vec<CVector<T>> = fixed
        .iter()
        .filter(|v| j_norm_sq(*v) > T::zero())
        .cloned()
        .collect();
    if xs.len() > k {
        return Err(Error::Dimension(format!(
            "{} positive vectors in a space of half dimension {k}",
            xs.len()
        )));
    }
    let mut candidates: Vec<CVector<T>> = pool.to_vec();
    candidates.extend(pool.iter().map(sigma_conj));
    while xs.len() < k {
        let x = next_positive(&xs, &candidates, tol)?;
        xs.push(x);
    }
    let mut basis = xs.clone();
    basis.extend(xs.iter().map(sigma_conj));
    Ok(basis)
}

/// Best-conditioned positive direction in the J-orthogonal complement of
/// `xs` within the span of `candidates`.
pub(crate) fn next_positive<T: Real>(
    xs: &[CVector<T>],
    candidates: &[CVector<T>],
    tol: T,
) -> Result<CVector<T>> {
    let dim = candidates
        .first()
        .map(|v| v.len())
        .ok_or(Error::DegenerateComplement { best: 0.0 })?;
    let projected: Vec<CVector<T>> = candidates.iter().map(|c| j_project_out(xs, c)).collect();
    let p = from_columns(dim, &projected);
    let svd = linalg::svd_full(&p)?;
    let smax = svd.sigma.first().copied().unwrap_or(T::zero());
    let rank = svd
        .sigma
        .iter()
        .filter(|&&s| s > lit::<T>(1e-9) * smax && s > T::zero())
        .count();
    if rank == 0 {
        return Err(Error::DegenerateComplement { best: 0.0 });
    }
    let q = svd.u.columns(0, rank).into_owned();
    let gram = q.adjoint() * j_left(&q);
    let (vals, vecs) = linalg::hermitian_eigen(&gram);
    let (idx, best) = vals
        .iter()
        .enumerate()
        .fold((0, T::zero()), |acc, (i, &l)| if l.abs() > acc.1 { (i, l.abs()) } else { acc });
    if best <= tol {
        return Err(Error::DegenerateComplement { best: to_f64(best) });
    }
    let mut u = &q * vecs.column(idx);
    if vals[idx] < T::zero() {
        u = sigma_conj(&u);
    }
    u = j_project_out(xs, &u);
    let (x, _) = krein_normalize(&u, tol)?;
    Ok(linalg::canonicalize_phase(&x))
}

/// `[x_1 .. x_k, Sigma x_1# .. Sigma x_k#]` as a `2k x 2k` matrix.
pub fn bogoliubov_from_positive<T: Real>(xs: &[CVector<T>]) -> CMatrix<T> {
    let dim = xs.first().map(|v| v.len()).unwrap_or(0);
    let mut cols = xs.to_vec();
    cols.extend(xs.iter().map(sigma_conj));
    from_columns(dim, &cols)
}

/// Materializes `[[x1, x2], [x2#, x1#]]`.
pub fn doubled_up<T: Real>(x1: &CMatrix<T>, x2: &CMatrix<T>) -> CMatrix<T> {
    let (r, s) = x1.shape();
    let mut m = CMatrix::zeros(2 * r, 2 * s);
    m.view_mut((0, 0), (r, s)).copy_from(x1);
    m.view_mut((0, s), (r, s)).copy_from(x2);
    m.view_mut((r, 0), (r, s)).copy_from(&linalg::conj(x2));
    m.view_mut((r, s), (r, s)).copy_from(&linalg::conj(x1));
    m
}

/// Upper blocks `(X1, X2)` of an even-dimensioned matrix.
pub fn upper_blocks<T: Real>(x: &CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let (r, s) = (x.nrows() / 2, x.ncols() / 2);
    (
        x.view((0, 0), (r, s)).into_owned(),
        x.view((0, s), (r, s)).into_owned(),
    )
}

/// `diag(A, B)`
pub fn block_diag<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let mut m = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

/// Direct sum of doubled-up matrices that keeps the doubled-up layout:
/// `[[A1 (+) B1, A2 (+) B2], [..]]`.
pub fn doubled_direct_sum<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (a1, a2) = upper_blocks(a);
    let (b1, b2) = upper_blocks(b);
    doubled_up(&block_diag(&a1, &b1), &block_diag(&a2, &b2))
}

/// A doubled-up matrix stored by its upper blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DoubledUpMatrix<T: Real = f64> {
    #[serde(with = "crate::serde_cmatrix")]
    pub block1: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub block2: CMatrix<T>,
}

impl<T: Real> DoubledUpMatrix<T> {
    pub fn new(block1: CMatrix<T>, block2: CMatrix<T>) -> Result<Self> {
        if block1.shape() != block2.shape() {
            return Err(Error::Dimension(format!(
                "blocks of shape {:?} and {:?}",
                block1.shape(),
                block2.shape()
            )));
        }
        Ok(Self { block1, block2 })
    }

    /// Splits a full matrix after checking its doubled-up structure.
    pub fn from_full(x: &CMatrix<T>, tol: T) -> Result<Self> {
        if !is_doubled_up(x, tol)? {
            return Err(Error::Structure(format!(
                "matrix is not doubled-up (residual {:.3e})",
                to_f64(doubled_up_residual(x))
            )));
        }
        let (b1, b2) = upper_blocks(x);
        Ok(Self {
            block1: b1,
            block2: b2,
        })
    }

    pub fn half_rows(&self) -> usize {
        self.block1.nrows()
    }

    pub fn half_cols(&self) -> usize {
        self.block1.ncols()
    }

    pub fn to_full(&self) -> CMatrix<T> {
        doubled_up(&self.block1, &self.block2)
    }

    pub fn flat_adjoint(&self) -> Self {
        // [[X1, X2],[X2#, X1#]]^flat = [[X1^H, -X2^T], [-X2^H, X1^T]]
        Self {
            block1: self.block1.adjoint(),
            block2: -self.block2.transpose(),
        }
    }
}
