//! Random instances for property tests: Haar unitaries, Bogoliubov matrices
//! built from their Bloch-Messiah factors, and random passive and general
//! systems.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::krein::doubled_up;
use crate::linalg::{conj, identity};
use crate::lqss::{GeneralLqss, PassiveLqss};
use crate::scalar::{cplx, creal, lit, CMatrix, Real};

/// Resampling cap for generators with acceptance conditions.
pub const RESAMPLE_CAP: usize = 50;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cplx(lit(re * scale), lit(im * scale))
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = gaussian::<T, R>(rng, n, n, 1.0).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let nrm = crate::scalar::cabs(d);
        if nrm > T::zero() {
            let phase = d.unscale(nrm);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Hermitian matrix with Gaussian entries.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix<T> {
    let a = gaussian::<T, R>(rng, n, n, scale);
    (&a + a.adjoint()).scale(lit(0.5))
}

/// Complex symmetric matrix with Gaussian entries.
pub fn random_symmetric<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> CMatrix<T> {
    let a = gaussian::<T, R>(rng, n, n, scale);
    (&a + a.transpose()).scale(lit(0.5))
}

/// `diag(U, U#) [[cosh X, sinh X], [sinh X, cosh X]] diag(V, V#)` for the
/// given squeezing parameters.
pub fn bogoliubov_from_factors<T: Real>(u2: &CMatrix<T>, x: &[T], u1: &CMatrix<T>) -> CMatrix<T> {
    let k = x.len();
    let ch = CMatrix::from_fn(k, k, |i, j| if i == j { creal(x[i].cosh()) } else { cplx(T::zero(), T::zero()) });
    let sh = CMatrix::from_fn(k, k, |i, j| if i == j { creal(x[i].sinh()) } else { cplx(T::zero(), T::zero()) });
    let zero = CMatrix::<T>::zeros(k, k);
    let left = doubled_up(u2, &zero);
    let right = doubled_up(u1, &zero);
    left * doubled_up(&ch, &sh) * right
}

/// Random Bogoliubov matrix with squeezing parameters uniform in
/// `[0, max_squeeze]`.
pub fn random_bogoliubov<T: Real, R: Rng + ?Sized>(rng: &mut R, k: usize, max_squeeze: f64) -> CMatrix<T> {
    let x: Vec<T> = (0..k).map(|_| lit(rng.random_range(0.0..=max_squeeze))).collect();
    let u2 = random_unitary(rng, k);
    let u1 = random_unitary(rng, k);
    bogoliubov_from_factors(&u2, &x, &u1)
}

/// Random passive system with `n` modes and `m` ports.
pub fn random_passive_system<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> PassiveLqss<T> {
    PassiveLqss {
        s: random_unitary(rng, m),
        n: gaussian(rng, m, n, 1.0),
        m: random_hermitian(rng, n, 1.0),
    }
}

/// Random general system; `active` scales the creation-operator blocks of
/// `N` and `M` relative to the annihilation blocks.
pub fn random_general_system<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    active: f64,
) -> GeneralLqss<T> {
    let n1 = gaussian::<T, R>(rng, m, n, 1.0);
    let n2 = gaussian::<T, R>(rng, m, n, active);
    let m1 = random_hermitian::<T, R>(rng, n, 1.0);
    let m2 = random_symmetric::<T, R>(rng, n, active);
    GeneralLqss {
        s: random_bogoliubov(rng, m, 0.5),
        n: doubled_up(&n1, &n2),
        m: doubled_up(&m1, &m2),
    }
}

/// Draws from `generate` until `accept` returns `Some`, at most
/// [`RESAMPLE_CAP`] times.
pub fn sample_until<R, X, Y>(
    rng: &mut R,
    mut generate: impl FnMut(&mut R) -> X,
    mut accept: impl FnMut(&X) -> Option<Y>,
) -> Option<(X, Y)>
where
    R: Rng + ?Sized,
{
    for _ in 0..RESAMPLE_CAP {
        let x = generate(rng);
        if let Some(y) = accept(&x) {
            return Some((x, y));
        }
    }
    None
}

/// `diag(U, U#)`
pub fn passive_bogoliubov<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    let k = u.nrows();
    let mut out = identity::<T>(2 * k);
    out.view_mut((0, 0), (k, k)).copy_from(u);
    out.view_mut((k, k), (k, k)).copy_from(&conj(u));
    out
}
