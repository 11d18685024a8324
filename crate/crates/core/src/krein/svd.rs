//! Krein-space singular value decomposition `N = V Nhat W^flat` of a
//! doubled-up coupling matrix.
//!
//! The columns of `W` are built from J-orthonormal eigenvectors of
//! `N^flat N`. Real eigenvalues give one mode per eigenvector pair, each
//! non-real pair `lambda, lambda*` gives a two-mode block in canonical form,
//! and the kernel is completed by Krein Gram-Schmidt. `V` is fixed on the
//! range of `N` and completed to a Bogoliubov matrix.

use nalgebra::Complex;

use super::{bogoliubov_from_positive, flat, krein_gram_schmidt, next_positive, sigma_conj, NEUTRAL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, checked_inverse, cluster_eigenvalues, from_columns, max_abs};
use crate::scalar::{cabs, cone, creal, csqrt, czero, imag_unit, lit, to_f64, CMatrix, CVector, Real};

/// Relative singular value cutoff for rank, nullity and kernel tests.
pub const RANK_TOL: f64 = 1e-9;

/// Classified spectrum of `N^flat N`, one entry per mode (per two-mode block
/// for the non-real part).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Real> {
    /// Positive eigenvalues, descending.
    pub lambda_plus: Vec<T>,
    /// Negative eigenvalues, by descending modulus.
    pub lambda_minus: Vec<T>,
    /// Non-real eigenvalues with positive imaginary part, by descending modulus.
    pub lambda_complex: Vec<Complex<T>>,
    pub alphas: Vec<T>,
    pub betas: Vec<T>,
    /// Number of modes in the kernel.
    pub zero_modes: usize,
}

impl<T: Real> Spectrum<T> {
    pub fn r_plus(&self) -> usize {
        self.lambda_plus.len()
    }

    pub fn r_minus(&self) -> usize {
        self.lambda_minus.len()
    }

    pub fn r_c(&self) -> usize {
        self.lambda_complex.len()
    }

    /// Number of modes coupled to the fields, `r_+ + r_- + 2 r_c`.
    pub fn rank(&self) -> usize {
        self.r_plus() + self.r_minus() + 2 * self.r_c()
    }
}

#[derive(Debug, Clone)]
pub struct KreinSvdResult<T: Real> {
    pub v: CMatrix<T>,
    pub w: CMatrix<T>,
    pub n_hat: CMatrix<T>,
    pub spectrum: Spectrum<T>,
}

impl<T: Real> KreinSvdResult<T> {
    /// `max |N - V Nhat W^flat|`
    pub fn residual(&self, n: &CMatrix<T>) -> T {
        max_abs(&(n - &self.v * &self.n_hat * flat(&self.w)))
    }
}

/// `alpha = sqrt((|l| + Re l) / 2)`, `beta = Im l / sqrt(2 (|l| + Re l))`
pub fn alpha_beta<T: Real>(lambda: Complex<T>) -> (T, T) {
    let two: T = lit(2.0);
    let s = cabs(lambda) + lambda.re;
    ((s / two).sqrt(), lambda.im / (two * s).sqrt())
}

/// `sigma_2 = [[0, -i], [i, 0]]`
fn sigma2<T: Real>() -> CMatrix<T> {
    CMatrix::from_row_slice(2, 2, &[czero(), -imag_unit::<T>(), imag_unit(), czero()])
}

/// Upper blocks of `Nhat` for the given spectrum, `m x n` each.
pub fn n_hat_template<T: Real>(spectrum: &Spectrum<T>, m: usize, n: usize) -> Result<CMatrix<T>> {
    if spectrum.rank() > m.min(n) {
        return Err(Error::Dimension(format!(
            "spectrum of rank {} does not fit a {m} x {n} coupling",
            spectrum.rank()
        )));
    }
    let mut n1 = CMatrix::<T>::zeros(m, n);
    let mut n2 = CMatrix::<T>::zeros(m, n);
    let mut c = 0;
    for &l in &spectrum.lambda_plus {
        n1[(c, c)] = creal(l.sqrt());
        c += 1;
    }
    for &l in &spectrum.lambda_minus {
        n2[(c, c)] = creal(l.abs().sqrt());
        c += 1;
    }
    let s2 = sigma2::<T>();
    for (&a, &b) in spectrum.alphas.iter().zip(&spectrum.betas) {
        for i in 0..2 {
            n1[(c + i, c + i)] = creal(a);
            for j in 0..2 {
                n2[(c + i, c + j)] = -s2[(i, j)] * b;
            }
        }
        c += 2;
    }
    Ok(super::doubled_up(&n1, &n2))
}

/// Skew form `omega(a, b) = a^H J Sigma b#`.
fn omega<T: Real>(a: &CVector<T>, b: &CVector<T>) -> Complex<T> {
    super::jdot(a, &sigma_conj(b))
}

/// Basis of the `mult`-dimensional eigenspace at `lambda` and the numerical
/// nullity of `A - lambda I`, with singular values below `RANK_TOL * scale`
/// counted as zero.
fn eigen_basis<T: Real>(a: &CMatrix<T>, lambda: Complex<T>, mult: usize, scale: T) -> Result<(CMatrix<T>, usize)> {
    let n = a.nrows();
    let shifted = a - CMatrix::<T>::identity(n, n) * lambda;
    let svd = linalg::svd_full(&shifted)?;
    let nullity = svd
        .sigma
        .iter()
        .filter(|&&s| s <= lit::<T>(RANK_TOL) * scale)
        .count();
    let take = mult.min(n);
    let v = svd.vh.adjoint();
    Ok((v.columns(n - take, take).into_owned(), nullity))
}

/// Canonical eigenvectors of the model block `[[alpha I, -beta s2], ..]`:
/// `U = [u1, u2, Sigma u1#, Sigma u2#]` with `u_j = (e_j, -i s2 e_j)`.
fn canonical_block_basis<T: Real>() -> CMatrix<T> {
    let s2 = sigma2::<T>();
    let mut cols = Vec::new();
    for j in 0..2 {
        let mut u = CVector::<T>::zeros(4);
        u[j] = cone();
        for i in 0..2 {
            u[2 + i] = -imag_unit::<T>() * s2[(i, j)];
        }
        cols.push(u);
    }
    let conj: Vec<CVector<T>> = cols.iter().map(sigma_conj).collect();
    cols.extend(conj);
    from_columns(4, &cols)
}

/// Splits an eigenspace of a non-real eigenvalue into pairs `(a, b)` with
/// `omega(a, b) = -2` and vanishing `omega` across pairs.
fn symplectic_pairs<T: Real>(basis: &CMatrix<T>) -> Result<Vec<(CVector<T>, CVector<T>)>> {
    let mut pool: Vec<CVector<T>> = (0..basis.ncols()).map(|j| basis.column(j).into_owned()).collect();
    let mut pairs = Vec::new();
    let two: T = lit(2.0);
    while pool.len() >= 2 {
        let (mut bi, mut bj, mut best) = (0, 1, T::zero());
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let w = cabs(omega(&pool[i], &pool[j]));
                if w > best {
                    (bi, bj, best) = (i, j, w);
                }
            }
        }
        if best <= lit(NEUTRAL_TOL) {
            return Err(Error::UnsupportedSpectrum(
                "eigenspace of a non-real eigenvalue is degenerate under the skew pairing".into(),
            ));
        }
        let p = omega(&pool[bi], &pool[bj]);
        // omega(s a, s b) = conj(s)^2 omega(a, b)
        let s = csqrt(-creal::<T>(two) / p).conj();
        let a = &pool[bi] * s;
        let b = &pool[bj] * s;
        let rest: Vec<CVector<T>> = pool
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != bi && *k != bj)
            .map(|(_, c)| {
                let beta = (-omega(&a, c) / two).conj();
                let alpha = (omega(&b, c) / two).conj();
                c - &a * alpha - &b * beta
            })
            .collect();
        pairs.push((a, b));
        pool = orthonormal_span(&rest)?;
    }
    if !pool.is_empty() {
        return Err(Error::UnsupportedSpectrum(
            "non-real eigenvalue of N^flat N with odd multiplicity".into(),
        ));
    }
    Ok(pairs)
}

fn orthonormal_span<T: Real>(vs: &[CVector<T>]) -> Result<Vec<CVector<T>>> {
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let m = from_columns(vs[0].len(), vs);
    let svd = linalg::svd_full(&m)?;
    let smax = svd.sigma.first().copied().unwrap_or(T::zero());
    let rank = svd
        .sigma
        .iter()
        .filter(|&&s| s > lit::<T>(1e-8) * smax && s > T::zero())
        .count();
    Ok((0..rank).map(|j| svd.u.column(j).into_owned()).collect())
}

enum Class<T: Real> {
    Plus(T),
    Minus(T),
    Complex(Complex<T>),
}

/// Krein-space SVD of a doubled-up `2m x 2n` matrix.
pub fn krein_svd<T: Real>(n_mat: &CMatrix<T>, tol: T) -> Result<KreinSvdResult<T>> {
    let (rows, cols) = n_mat.shape();
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(Error::Dimension(format!("krein_svd of {:?} matrix", n_mat.shape())));
    }
    if !linalg::is_finite(n_mat) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let scale_n = max_abs(n_mat).max(T::one());
    if !super::is_doubled_up(n_mat, lit::<T>(1e-8) * scale_n)? {
        return Err(Error::Structure("krein_svd input is not doubled-up".into()));
    }
    let (m, n) = (rows / 2, cols / 2);
    let nn = flat(n_mat) * n_mat;
    let scale = max_abs(&nn).max(T::one());

    let rank_n = linalg::numerical_rank(n_mat, lit(RANK_TOL));
    let rank_nn = linalg::numerical_rank(&nn, lit(RANK_TOL));
    if rank_n != rank_nn {
        return Err(Error::KernelMismatch { rank_n, rank_nn });
    }

    let values = linalg::eigenvalues(&nn)?;
    let clusters = cluster_eigenvalues(&values, lit::<T>(1e-6) * scale);
    let zero_tol = lit::<T>(1e-8) * scale;
    let mut classes: Vec<(Class<T>, CMatrix<T>, usize)> = Vec::new();
    let mut zero_dim = 0;
    for c in &clusters {
        let is_zero = cabs(c.value) <= zero_tol;
        let (basis, nullity) = if is_zero {
            eigen_basis(&nn, czero(), c.multiplicity, scale)?
        } else {
            eigen_basis(&nn, c.value, c.multiplicity, scale)?
        };
        if nullity != c.multiplicity {
            return Err(Error::NotSemisimple {
                re: to_f64(c.value.re),
                im: to_f64(c.value.im),
                algebraic: c.multiplicity,
                geometric: nullity,
            });
        }
        if is_zero {
            zero_dim += c.multiplicity;
            continue;
        }
        if c.multiplicity % 2 != 0 {
            return Err(Error::UnsupportedSpectrum(format!(
                "eigenvalue {:.6}{:+.6}i of N^flat N has odd multiplicity {}",
                to_f64(c.value.re),
                to_f64(c.value.im),
                c.multiplicity
            )));
        }
        let modes = c.multiplicity / 2;
        if c.value.im.abs() <= zero_tol {
            let l = c.value.re;
            let class = if l > T::zero() { Class::Plus(l) } else { Class::Minus(l) };
            classes.push((class, basis, modes));
        } else if c.value.im > T::zero() {
            classes.push((Class::Complex(c.value), basis, modes));
        }
    }
    if zero_dim % 2 != 0 {
        return Err(Error::UnsupportedSpectrum("kernel of N^flat N has odd dimension".into()));
    }

    let modulus = |c: &Class<T>| match c {
        Class::Plus(l) | Class::Minus(l) => l.abs(),
        Class::Complex(z) => cabs(*z),
    };
    let rank_of = |c: &Class<T>| match c {
        Class::Plus(_) => 0,
        Class::Minus(_) => 1,
        Class::Complex(_) => 2,
    };
    classes.sort_by(|a, b| {
        rank_of(&a.0)
            .cmp(&rank_of(&b.0))
            .then(modulus(&b.0).partial_cmp(&modulus(&a.0)).unwrap_or(std::cmp::Ordering::Equal))
    });

    let mut spectrum = Spectrum {
        lambda_plus: Vec::new(),
        lambda_minus: Vec::new(),
        lambda_complex: Vec::new(),
        alphas: Vec::new(),
        betas: Vec::new(),
        zero_modes: zero_dim / 2,
    };
    let ucan_inv = checked_inverse(&canonical_block_basis::<T>(), lit(1e6))
        .map_err(|_| Error::Numerical("canonical block basis is singular".into()))?;
    let mut positives: Vec<CVector<T>> = Vec::new();
    for (class, basis, modes) in &classes {
        match class {
            Class::Plus(_) | Class::Minus(_) => {
                let pool: Vec<CVector<T>> = (0..basis.ncols()).map(|j| basis.column(j).into_owned()).collect();
                for _ in 0..*modes {
                    let x = next_positive(&positives, &pool, lit(NEUTRAL_TOL))?;
                    positives.push(x);
                    match class {
                        Class::Plus(l) => spectrum.lambda_plus.push(*l),
                        Class::Minus(l) => spectrum.lambda_minus.push(*l),
                        Class::Complex(_) => unreachable!(),
                    }
                }
            }
            Class::Complex(z) => {
                let pairs = symplectic_pairs(basis)?;
                if pairs.len() != *modes {
                    return Err(Error::UnsupportedSpectrum("complex eigenspace pairing failed".into()));
                }
                for (a, b) in pairs {
                    let act = from_columns(2 * n, &[a.clone(), b.clone(), sigma_conj(&a), sigma_conj(&b)]);
                    let blk = act * &ucan_inv;
                    positives.push(blk.column(0).into_owned());
                    positives.push(blk.column(1).into_owned());
                    let (al, be) = alpha_beta(*z);
                    spectrum.lambda_complex.push(*z);
                    spectrum.alphas.push(al);
                    spectrum.betas.push(be);
                }
            }
        }
    }
    // Positive vectors are grouped as +, -, complex; the complex blocks were
    // pushed in order, so the layout already matches the template.
    let r = positives.len();
    if r > m.min(n) {
        return Err(Error::UnsupportedSpectrum(format!(
            "{r} coupled modes exceed min(m, n) = {}",
            m.min(n)
        )));
    }
    let fixed: Vec<CVector<T>> = positives.iter().cloned().chain(positives.iter().map(sigma_conj)).collect();
    let w = if r == n {
        bogoliubov_from_positive(&positives)
    } else {
        let kernel = linalg::null_space(n_mat, lit(RANK_TOL), None)?;
        let pool: Vec<CVector<T>> = (0..kernel.ncols()).map(|j| kernel.column(j).into_owned()).collect();
        let basis = krein_gram_schmidt(&fixed, &pool, lit(NEUTRAL_TOL))?;
        bogoliubov_from_positive(&basis[..n])
    };

    let n_hat = n_hat_template(&spectrum, m, n)?;
    let v = build_v(n_mat, &w, &n_hat, m, n, r)?;
    let result = KreinSvdResult { v, w, n_hat, spectrum };
    let res = result.residual(n_mat);
    if !(res <= tol * scale_n) {
        return Err(Error::UnsupportedSpectrum(format!(
            "reconstruction residual {:.3e} exceeds tolerance",
            to_f64(res)
        )));
    }
    Ok(result)
}

/// Solves `N W = V Nhat` for the columns of `V` touching the range and
/// completes the rest by Krein Gram-Schmidt.
fn build_v<T: Real>(
    n_mat: &CMatrix<T>,
    w: &CMatrix<T>,
    n_hat: &CMatrix<T>,
    m: usize,
    n: usize,
    r: usize,
) -> Result<CMatrix<T>> {
    let mut positives: Vec<CVector<T>> = Vec::new();
    if r > 0 {
        let rows: Vec<usize> = (0..r).chain(m..m + r).collect();
        let cols: Vec<usize> = (0..r).chain(n..n + r).collect();
        let b = linalg::select(n_hat, &rows, &cols);
        let b_inv = checked_inverse(&b, lit(1e12))
            .map_err(|cond| Error::UnsupportedSpectrum(format!("singular coupling block (condition {cond:.3e})")))?;
        let nw = n_mat * w;
        let vr = linalg::select(&nw, &(0..2 * m).collect::<Vec<_>>(), &cols) * b_inv;
        positives = (0..r).map(|j| vr.column(j).into_owned()).collect();
    }
    if r == m {
        return Ok(bogoliubov_from_positive(&positives));
    }
    let fixed: Vec<CVector<T>> = positives.iter().cloned().chain(positives.iter().map(sigma_conj)).collect();
    let pool: Vec<CVector<T>> = (0..2 * m)
        .map(|i| {
            let mut e = CVector::zeros(2 * m);
            e[i] = cone();
            e
        })
        .collect();
    let basis = krein_gram_schmidt(&fixed, &pool, lit(NEUTRAL_TOL))?;
    Ok(bogoliubov_from_positive(&basis[..m]))
}
