//! Ordered Schur-type triangularizations.
//!
//! [`krein_schur`] finds a Bogoliubov `W` with `W^flat A W = T`, `T1` lower
//! triangular and `T2` strictly lower triangular, by deflating one
//! eigenvector of non-zero J-norm at a time. [`unitary_schur`] is the
//! classical counterpart producing a lower-triangular `Q^H F Q`.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::{bogoliubov_from_positive, flat, j_left, jdot, krein_gram_schmidt, sigma_conj, NEUTRAL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, cluster_eigenvalues, complete_unitary, from_columns, max_abs, vnorm};
use crate::scalar::{c64_pair, cabs, cone, czero, lit, CMatrix, CVector, Real};

/// Order in which eigenvalues are placed on the diagonal of the triangular
/// factor, read top to bottom.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "OrderingRepr", try_from = "OrderingRepr")]
pub enum EigenOrdering {
    /// Descending real part, ties by descending imaginary part.
    #[default]
    DescendingReal,
    AscendingReal,
    DescendingImag,
    AscendingImag,
    /// Target values, top to bottom; each position takes the nearest
    /// available eigenvalue.
    Explicit(Vec<Complex<f64>>),
}

#[derive(Serialize, Deserialize)]
struct OrderingRepr {
    policy: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    targets: Vec<[f64; 2]>,
}

impl From<EigenOrdering> for OrderingRepr {
    fn from(o: EigenOrdering) -> Self {
        let targets = match &o {
            EigenOrdering::Explicit(t) => t.iter().map(|z| [z.re, z.im]).collect(),
            _ => Vec::new(),
        };
        Self {
            policy: o.name().into(),
            targets,
        }
    }
}

impl TryFrom<OrderingRepr> for EigenOrdering {
    type Error = String;

    fn try_from(r: OrderingRepr) -> std::result::Result<Self, String> {
        let targets = r.targets.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        EigenOrdering::from_name(&r.policy, targets)
    }
}

impl EigenOrdering {
    pub fn name(&self) -> &'static str {
        match self {
            EigenOrdering::DescendingReal => "descending-real",
            EigenOrdering::AscendingReal => "ascending-real",
            EigenOrdering::DescendingImag => "descending-imag",
            EigenOrdering::AscendingImag => "ascending-imag",
            EigenOrdering::Explicit(_) => "explicit",
        }
    }

    /// Parses a policy name; `targets` is used by `explicit` only.
    pub fn from_name(name: &str, targets: Vec<Complex<f64>>) -> std::result::Result<Self, String> {
        match name {
            "descending-real" => Ok(EigenOrdering::DescendingReal),
            "ascending-real" => Ok(EigenOrdering::AscendingReal),
            "descending-imag" => Ok(EigenOrdering::DescendingImag),
            "ascending-imag" => Ok(EigenOrdering::AscendingImag),
            "explicit" => Ok(EigenOrdering::Explicit(targets)),
            other => Err(format!("unknown eigenvalue ordering '{other}'")),
        }
    }

    /// Sort key: values later in the placement order compare greater.
    fn key(&self, z: Complex<f64>) -> (f64, f64) {
        match self {
            EigenOrdering::DescendingReal => (-z.re, -z.im),
            EigenOrdering::AscendingReal => (z.re, z.im),
            EigenOrdering::DescendingImag => (-z.im, -z.re),
            EigenOrdering::AscendingImag => (z.im, z.re),
            EigenOrdering::Explicit(_) => (0.0, 0.0),
        }
    }

    /// Index of the candidate to place at 0-based `position`, the lowest
    /// position still free.
    fn pick(&self, candidates: &[Complex<f64>], position: usize) -> Result<usize> {
        if candidates.is_empty() {
            return Err(Error::Numerical("no eigenvalue candidates".into()));
        }
        match self {
            EigenOrdering::Explicit(targets) => {
                let target = *targets.get(position).ok_or_else(|| {
                    Error::Parameter(format!(
                        "explicit ordering lists {} eigenvalues, position {} requested",
                        targets.len(),
                        position + 1
                    ))
                })?;
                let mut best = 0;
                for (i, c) in candidates.iter().enumerate() {
                    if (c - target).norm() < (candidates[best] - target).norm() {
                        best = i;
                    }
                }
                Ok(best)
            }
            _ => {
                let mut best = 0;
                for (i, c) in candidates.iter().enumerate() {
                    let (a, b) = (self.key(*c), self.key(candidates[best]));
                    if a.0 > b.0 || (a.0 == b.0 && a.1 > b.1) {
                        best = i;
                    }
                }
                Ok(best)
            }
        }
    }
}

/// `W^flat A W = T` with `W` Bogoliubov.
#[derive(Debug, Clone)]
pub struct KreinSchurResult<T: Real> {
    pub w: CMatrix<T>,
    pub t: CMatrix<T>,
    /// Diagonal of `T1`, top to bottom.
    pub eigen_order: Vec<Complex<T>>,
}

impl<T: Real> KreinSchurResult<T> {
    /// `max |A W - W T|`
    pub fn residual(&self, a: &CMatrix<T>) -> T {
        max_abs(&(a * &self.w - &self.w * &self.t))
    }
}

/// `Q^H F Q = T` with `Q` unitary and `T` lower triangular.
#[derive(Debug, Clone)]
pub struct UnitarySchurResult<T: Real> {
    pub q: CMatrix<T>,
    pub t: CMatrix<T>,
    pub eigen_order: Vec<Complex<T>>,
}

struct Candidate<T: Real> {
    value: Complex<T>,
    vector: CVector<T>,
}

fn scale_of<T: Real>(b: &CMatrix<T>) -> T {
    max_abs(b).max(T::one())
}

/// Basis of the approximate eigenspace for a cluster of `multiplicity`
/// eigenvalues near `lambda`. Always returns at least one vector.
fn eigenspace<T: Real>(b: &CMatrix<T>, lambda: Complex<T>, multiplicity: usize) -> Result<CMatrix<T>> {
    let n = b.nrows();
    let shifted = b - CMatrix::<T>::identity(n, n) * lambda;
    let svd = linalg::svd_full(&shifted)?;
    let cutoff = lit::<T>(1e-7) * scale_of(b);
    let mut count = 1;
    while count < multiplicity.min(n) && svd.sigma[n - 1 - count] <= cutoff {
        count += 1;
    }
    let v = svd.vh.adjoint();
    Ok(v.columns(n - count, count).into_owned())
}

fn cluster_tol<T: Real>(b: &CMatrix<T>) -> T {
    lit::<T>(1e-6) * scale_of(b)
}

/// Eigenvectors of non-zero J-norm, one per eigenvalue cluster, replaced by
/// `Sigma v#` (with conjugated eigenvalue) where the J-norm is negative.
fn krein_candidates<T: Real>(b: &CMatrix<T>) -> Result<Vec<Candidate<T>>> {
    let values = linalg::eigenvalues(b)?;
    let clusters = cluster_eigenvalues(&values, cluster_tol(b));
    let mut out = Vec::new();
    for c in clusters {
        let e = eigenspace(b, c.value, c.multiplicity)?;
        let gram = e.adjoint() * j_left(&e);
        let (vals, vecs) = linalg::hermitian_eigen(&gram);
        let (idx, best) = vals
            .iter()
            .enumerate()
            .fold((0, T::zero()), |acc, (i, &l)| if l.abs() > acc.1 { (i, l.abs()) } else { acc });
        if best <= lit(NEUTRAL_TOL) {
            continue;
        }
        let v: CVector<T> = &e * vecs.column(idx);
        if vals[idx] > T::zero() {
            out.push(Candidate { value: c.value, vector: v });
        } else {
            out.push(Candidate {
                value: c.value.conj(),
                vector: sigma_conj(&v),
            });
        }
    }
    Ok(out)
}

/// Inverse iteration at the Rayleigh quotient. The eigenvalues of a
/// strongly non-normal block are only accurate to `eps` times their
/// condition number, and so is a null vector of `B - lambda I`; every later
/// deflation step inherits that residual. A refined vector is kept only
/// while it lowers the residual and stays away from the neutral cone.
fn refine_eigenvector<T: Real>(b: &CMatrix<T>, lambda: Complex<T>, v: &CVector<T>) -> CVector<T> {
    let n = b.nrows();
    let residual = |v: &CVector<T>| {
        let mu = v.dotc(&(b * v)) / v.dotc(v);
        (vnorm(&(b * v - v * mu)) / vnorm(v), mu)
    };
    let mut best = v.unscale(vnorm(v));
    let (mut best_res, mut mu) = residual(&best);
    if lambda.re.is_finite() && cabs(mu - lambda) > lit::<T>(1e-6) * scale_of(b) {
        mu = lambda;
    }
    for _ in 0..3 {
        let Some(y) = (b - CMatrix::<T>::identity(n, n) * mu).lu().solve(&best) else { break };
        let norm = vnorm(&y);
        if !(norm > T::zero()) || !norm.is_finite() {
            break;
        }
        let y = y.unscale(norm);
        let (res, next_mu) = residual(&y);
        if !(res < best_res) || jdot(&y, &y).re.abs() <= lit(NEUTRAL_TOL) {
            break;
        }
        best = y;
        best_res = res;
        mu = next_mu;
    }
    best
}

/// Removes rows and columns `k-1` and `2k-1` of a `2k x 2k` matrix.
fn deflate_krein<T: Real>(b: &CMatrix<T>) -> CMatrix<T> {
    let k = b.nrows() / 2;
    let keep: Vec<usize> = (0..k - 1).chain(k..2 * k - 1).collect();
    linalg::select(b, &keep, &keep)
}

/// Embeds a `2k x 2k` doubled-up matrix into the leading blocks of `I_{2n}`.
fn embed_krein<T: Real>(wk: &CMatrix<T>, n: usize) -> CMatrix<T> {
    let k = wk.nrows() / 2;
    let mut w = CMatrix::<T>::identity(2 * n, 2 * n);
    let idx: Vec<usize> = (0..k).chain(n..n + k).collect();
    for (i, &gi) in idx.iter().enumerate() {
        for (j, &gj) in idx.iter().enumerate() {
            w[(gi, gj)] = wk[(i, j)];
        }
    }
    w
}

/// Krein-space Schur triangularization of a doubled-up `2n x 2n` matrix.
///
/// Fails with [`Error::AssumptionIViolated`] when some deflation step finds
/// only eigenvectors of zero J-norm.
pub fn krein_schur<T: Real>(a: &CMatrix<T>, ordering: &EigenOrdering) -> Result<KreinSchurResult<T>> {
    if !a.is_square() || !a.nrows().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "krein_schur needs an even square matrix, got {:?}",
            a.shape()
        )));
    }
    if !linalg::is_finite(a) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let tol = lit::<T>(1e-8) * scale_of(a);
    if !super::is_doubled_up(a, tol)? {
        return Err(Error::Structure("krein_schur input is not doubled-up".into()));
    }
    let n = a.nrows() / 2;
    let mut w = CMatrix::<T>::identity(2 * n, 2 * n);
    let mut block = a.clone();
    for k in (1..=n).rev() {
        let candidates = krein_candidates(&block)?;
        if candidates.is_empty() {
            return Err(Error::AssumptionIViolated {
                step: n - k + 1,
                total: n,
            });
        }
        let values: Vec<Complex<f64>> = candidates
            .iter()
            .map(|c| {
                let (re, im) = c64_pair(c.value);
                Complex::new(re, im)
            })
            .collect();
        let chosen = &candidates[ordering.pick(&values, k - 1)?];
        let v = refine_eigenvector(&block, chosen.value, &chosen.vector);
        let (x, _) = super::krein_normalize(&v, lit(NEUTRAL_TOL))?;
        let x = linalg::canonicalize_phase(&x);
        let pool: Vec<CVector<T>> = (0..2 * k)
            .map(|i| {
                let mut e = CVector::zeros(2 * k);
                e[i] = cone();
                e
            })
            .collect();
        let basis = krein_gram_schmidt(&[x.clone(), sigma_conj(&x)], &pool, lit(NEUTRAL_TOL))?;
        let mut positives: Vec<CVector<T>> = basis[1..k].to_vec();
        positives.push(basis[0].clone());
        let wk = bogoliubov_from_positive(&positives);
        let transformed = flat(&wk) * &block * &wk;
        w = &w * embed_krein(&wk, n);
        block = deflate_krein(&transformed);
    }
    let mut t = flat(&w) * a * &w;
    enforce_krein_triangular(&mut t);
    let eigen_order = (0..n).map(|i| t[(i, i)]).collect();
    Ok(KreinSchurResult { w, t, eigen_order })
}

/// Zeros the entries that the structure theorem requires to vanish and
/// restores exact doubled-up symmetry.
fn enforce_krein_triangular<T: Real>(t: &mut CMatrix<T>) {
    let n = t.nrows() / 2;
    for i in 0..n {
        for j in 0..n {
            if j > i {
                t[(i, j)] = czero();
            }
            if j >= i {
                t[(i, n + j)] = czero();
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            t[(n + i, n + j)] = t[(i, j)].conj();
            t[(n + i, j)] = t[(i, n + j)].conj();
        }
    }
}

/// Ordered complex Schur form with a lower-triangular factor.
pub fn unitary_schur<T: Real>(f: &CMatrix<T>, ordering: &EigenOrdering) -> Result<UnitarySchurResult<T>> {
    if !f.is_square() {
        return Err(Error::Dimension(format!("unitary_schur needs a square matrix, got {:?}", f.shape())));
    }
    if !linalg::is_finite(f) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let n = f.nrows();
    let mut q = CMatrix::<T>::identity(n, n);
    let mut block = f.clone();
    for k in (1..=n).rev() {
        let values = linalg::eigenvalues(&block)?;
        let clusters = cluster_eigenvalues(&values, cluster_tol(&block));
        let as_f64: Vec<Complex<f64>> = clusters
            .iter()
            .map(|c| {
                let (re, im) = c64_pair(c.value);
                Complex::new(re, im)
            })
            .collect();
        let chosen = &clusters[ordering.pick(&as_f64, k - 1)?];
        let e = eigenspace(&block, chosen.value, 1)?;
        let x: CVector<T> = e.column(0).into_owned();
        let x = linalg::canonicalize_phase(&x.unscale(vnorm(&x)));
        let full = complete_unitary(&from_columns(k, std::slice::from_ref(&x)));
        let mut cols: Vec<CVector<T>> = (1..k).map(|j| full.column(j).into_owned()).collect();
        cols.push(x);
        let qk = from_columns(k, &cols);
        let transformed = qk.adjoint() * &block * &qk;
        let mut embedded = CMatrix::<T>::identity(n, n);
        embedded.view_mut((0, 0), (k, k)).copy_from(&qk);
        q = &q * embedded;
        let keep: Vec<usize> = (0..k - 1).collect();
        block = linalg::select(&transformed, &keep, &keep);
    }
    let mut t = q.adjoint() * f * &q;
    for i in 0..n {
        for j in (i + 1)..n {
            t[(i, j)] = czero();
        }
    }
    let eigen_order = (0..n).map(|i| t[(i, i)]).collect();
    Ok(UnitarySchurResult { q, t, eigen_order })
}

/// Largest modulus of a J-inner product between distinct columns of `w`
/// compared with `J`; used by tests and audits.
pub fn j_orthonormality_residual<T: Real>(w: &CMatrix<T>) -> T {
    let n = w.ncols() / 2;
    let mut worst = T::zero();
    for i in 0..w.ncols() {
        for j in 0..w.ncols() {
            let expected = if i != j {
                T::zero()
            } else if i < n {
                T::one()
            } else {
                -T::one()
            };
            let g = jdot(&w.column(i).into_owned(), &w.column(j).into_owned());
            worst = worst.max(cabs(g - Complex::new(expected, T::zero())));
        }
    }
    worst
}
