//! Dense complex helpers on top of nalgebra: full SVD, numerical rank and
//! null spaces, eigenvalue clustering, unitary completion and checked
//! inversion.

use nalgebra::{Complex, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cabs, cone, czero, lit, CMatrix, CVector, Real};

/// Largest entry modulus; zero for an empty matrix.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

pub fn conj<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.map(|z| z.conj())
}

pub fn vconj<T: Real>(v: &CVector<T>) -> CVector<T> {
    v.map(|z| z.conj())
}

pub fn is_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// Euclidean norm of a complex vector.
pub fn vnorm<T: Real>(v: &CVector<T>) -> T {
    v.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

pub fn from_columns<T: Real>(rows: usize, cols: &[CVector<T>]) -> CMatrix<T> {
    let mut m = CMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

pub fn select<T: Real>(m: &CMatrix<T>, rows: &[usize], cols: &[usize]) -> CMatrix<T> {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Full singular value decomposition `a = u * diag(sigma) * vh` with square
/// unitary `u` and `vh` and singular values sorted descending.
pub struct FullSvd<T: Real> {
    pub u: CMatrix<T>,
    pub sigma: Vec<T>,
    pub vh: CMatrix<T>,
}

pub fn svd_full<T: Real>(a: &CMatrix<T>) -> Result<FullSvd<T>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(FullSvd {
            u: identity(m),
            sigma: Vec::new(),
            vh: identity(n),
        });
    }
    if m < n {
        let t = svd_full(&a.adjoint())?;
        return Ok(FullSvd {
            u: t.vh.adjoint(),
            sigma: t.sigma,
            vh: t.u.adjoint(),
        });
    }
    if !is_finite(a) {
        return Err(Error::Numerical("SVD of a non-finite matrix".into()));
    }
    let (work, v) = jacobi_orthogonalize(a)?;
    let norms: Vec<T> = (0..n).map(|j| work.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap_or(std::cmp::Ordering::Equal));
    let sigma: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let cutoff = sigma[0] * T::default_epsilon() * lit((4 * m) as f64);
    let cols: Vec<CVector<T>> = order
        .iter()
        .take_while(|&&j| norms[j] > cutoff && norms[j] > T::zero())
        .map(|&j| work.column(j).unscale(norms[j]))
        .collect();
    let u = complete_unitary(&from_columns(m, &cols));
    let v_sorted = from_columns(n, &order.iter().map(|&j| v.column(j).into_owned()).collect::<Vec<_>>());
    Ok(FullSvd {
        u,
        sigma,
        vh: v_sorted.adjoint(),
    })
}

/// One-sided Jacobi sweeps: returns `(a * v, v)` with mutually orthogonal
/// columns in `a * v` and unitary `v`.
fn jacobi_orthogonalize<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = identity::<T>(n);
    let tol = T::default_epsilon() * lit((a.nrows().max(1)) as f64);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = cabs(gamma);
                if g <= tol * (alpha * beta).sqrt() || g == T::zero() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g).conj();
                let zeta = (beta - alpha) / (lit::<T>(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let t = if zeta == T::zero() { T::one() } else { t };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    let cp = mat.column(p).into_owned();
                    let cq = mat.column(q) * phase;
                    mat.set_column(p, &(cp.scale(c) - cq.scale(s)));
                    mat.set_column(q, &(cp.scale(s) + cq.scale(c)));
                }
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::Numerical("Jacobi SVD did not converge".into()))
}

pub fn singular_values<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    match svd_full(a) {
        Ok(svd) => svd.sigma,
        Err(_) => {
            let mut s: Vec<T> = a.singular_values().iter().copied().collect();
            s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
            s
        }
    }
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank<T: Real>(a: &CMatrix<T>, rel_tol: T) -> usize {
    let s = singular_values(a);
    match s.first() {
        None => 0,
        Some(&smax) if smax <= T::min_value().unwrap_or(T::zero()) => 0,
        Some(&smax) => s.iter().filter(|&&x| x > rel_tol * smax).count(),
    }
}

/// Orthonormal basis of the numerical null space of `a`, using a cutoff of
/// `rel_tol * scale` where `scale` defaults to the largest singular value.
pub fn null_space<T: Real>(a: &CMatrix<T>, rel_tol: T, scale: Option<T>) -> Result<CMatrix<T>> {
    let n = a.ncols();
    let svd = svd_full(a)?;
    let smax = scale.unwrap_or_else(|| svd.sigma.first().copied().unwrap_or(T::zero()));
    let cutoff = rel_tol * smax;
    let rank = svd.sigma.iter().filter(|&&x| x > cutoff).count();
    let v = svd.vh.adjoint();
    Ok(v.columns(rank, n - rank).into_owned())
}

/// Extends a matrix with orthonormal columns to a square unitary matrix by
/// Gram-Schmidt against the standard basis.
pub fn complete_unitary<T: Real>(cols: &CMatrix<T>) -> CMatrix<T> {
    let (m, k) = cols.shape();
    let mut basis: Vec<CVector<T>> = (0..k).map(|j| cols.column(j).into_owned()).collect();
    let threshold: T = lit(1e-8);
    let mut e = 0;
    while basis.len() < m && e < m {
        let mut v = CVector::zeros(m);
        v[e] = cone();
        e += 1;
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let nrm = vnorm(&v);
        if nrm > threshold {
            basis.push(v.unscale(nrm));
        }
    }
    from_columns(m, &basis)
}

/// Eigenvalues of a general complex square matrix via complex Schur form.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(a.clone(), T::default_epsilon(), 0)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenCluster<T: Real> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

/// Groups eigenvalues lying within `tol` of each other (single linkage) and
/// represents each group by its mean.
pub fn cluster_eigenvalues<T: Real>(values: &[Complex<T>], tol: T) -> Vec<EigenCluster<T>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cabs(values[i] - values[j]) <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let k = members.len();
            let sum = members.iter().fold(czero::<T>(), |acc, &i| acc + values[i]);
            EigenCluster {
                value: sum.unscale(T::from_usize(k).unwrap()),
                multiplicity: k,
            }
        })
        .collect()
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let herm = (a + a.adjoint()).scale(lit(0.5));
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// 2-norm condition number; infinite for singular or empty-rank input.
pub fn condition_number<T: Real>(a: &CMatrix<T>) -> T {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > T::zero() => hi / lo,
        (None, None) => T::one(),
        _ => T::max_value().unwrap_or(lit(f64::MAX)),
    }
}

/// Inverse with a condition-number guard. Returns the condition number on
/// failure so callers can map it to their own error.
pub fn checked_inverse<T: Real>(a: &CMatrix<T>, cond_limit: T) -> std::result::Result<CMatrix<T>, f64> {
    if a.nrows() == 0 {
        return Ok(a.clone());
    }
    let cond = condition_number(a);
    if !(cond <= cond_limit) {
        return Err(crate::scalar::to_f64(cond));
    }
    a.clone().try_inverse().ok_or(f64::INFINITY)
}

/// Multiplies `v` by a unit phase so that its first significant entry is
/// real and positive.
pub fn canonicalize_phase<T: Real>(v: &CVector<T>) -> CVector<T> {
    let nrm = vnorm(v);
    let threshold = lit::<T>(1e-9) * nrm;
    match v.iter().find(|z| cabs(**z) > threshold) {
        Some(z) => {
            let phase = z.conj().unscale(cabs(*z));
            v * phase
        }
        None => v.clone(),
    }
}

pub fn is_unitary<T: Real>(u: &CMatrix<T>, tol: T) -> bool {
    u.is_square() && max_abs(&(u.adjoint() * u - identity::<T>(u.nrows()))) <= tol
}

pub fn is_hermitian<T: Real>(a: &CMatrix<T>, tol: T) -> bool {
    a.is_square() && max_abs(&(a - a.adjoint())) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn full_svd_reconstructs_rectangular() {
        let a = CMatrix::<f64>::from_fn(3, 5, |i, j| cplx((i * 5 + j) as f64 * 0.3 - 1.0, (i as f64) - (j as f64) * 0.7));
        let svd = svd_full(&a).unwrap();
        assert_eq!(svd.u.shape(), (3, 3));
        assert_eq!(svd.vh.shape(), (5, 5));
        let mut s = CMatrix::zeros(3, 5);
        for (i, x) in svd.sigma.iter().enumerate() {
            s[(i, i)] = crate::scalar::creal(*x);
        }
        assert!(max_abs(&(&svd.u * s * &svd.vh - &a)) < 1e-12);
        assert!(is_unitary(&svd.u, 1e-12));
        assert!(is_unitary(&svd.vh, 1e-12));
        assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn full_svd_is_accurate_on_graded_and_deficient_inputs() {
        for k in 0..40usize {
            let n = 2 + k % 6;
            let mut a = CMatrix::<f64>::from_fn(n, n, |i, j| {
                let t = (k * 31 + i * 7 + j * 13) as f64;
                cplx(t.sin(), (1.3 * t).cos()).scale(10f64.powi(-((j * (k % 3)) as i32)))
            });
            if k % 4 == 0 {
                let c0 = a.column(0).into_owned();
                a.set_column(n - 1, &c0.scale(2.0));
            }
            let svd = svd_full(&a).unwrap();
            let s = CMatrix::from_diagonal(&CVector::from_iterator(n, svd.sigma.iter().map(|&x| cplx(x, 0.0))));
            assert!(max_abs(&(&svd.u * s * &svd.vh - &a)) < 1e-13 * max_abs(&a).max(1.0));
            assert!(is_unitary(&svd.u, 1e-13) && is_unitary(&svd.vh, 1e-13));
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = CMatrix::<f64>::from_fn(3, 3, |i, j| crate::scalar::creal(((i + 1) * (j + 1)) as f64));
        let ns = null_space(&a, 1e-9, None).unwrap();
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&a * &ns)) < 1e-12);
    }

    #[test]
    fn clustering_merges_close_values() {
        let vals = vec![cplx(1.0, 0.0), cplx(1.0 + 1e-9, 0.0), cplx(2.0, 1.0), cplx(1.0 - 1e-9, 1e-10)];
        let c = cluster_eigenvalues(&vals, 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c.iter().map(|g| g.multiplicity).sum::<usize>(), 4);
    }

    #[test]
    fn phase_canonicalization_makes_first_entry_positive() {
        let v = CVector::<f64>::from_vec(vec![cplx(0.0, 0.0), cplx(0.0, -2.0), cplx(1.0, 1.0)]);
        let w = canonicalize_phase(&v);
        assert!(w[1].im.abs() < 1e-15 && w[1].re > 0.0);
        assert!((vnorm(&w) - vnorm(&v)).abs() < 1e-14);
    }
}
