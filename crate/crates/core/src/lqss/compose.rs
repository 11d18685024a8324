//! Series connection, direct sums, channel embedding and feedback closure of
//! general systems.
//!
//! Inputs of a system enter as `dx = F x dt - N^flat S du`,
//! `dy = N x dt + S du`. Modes of composed systems are stacked in argument
//! order (upstream first) inside each half of the doubled-up layout.

use super::GeneralLqss;
use crate::error::{Error, Result};
use crate::krein::{doubled_direct_sum, flat};
use crate::linalg::{checked_inverse, identity, select};
use crate::scalar::{lit, CMatrix, Real};

/// Position in the doubled-up layout of the combined system for each index of
/// the blockwise layout `[a_1, a_1#, a_2, a_2#, ...]`.
fn interleave(sizes: &[usize]) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut out = Vec::with_capacity(2 * total);
    let mut offset = 0;
    for &k in sizes {
        out.extend(offset..offset + k);
        out.extend(total + offset..total + offset + k);
        offset += k;
    }
    out
}

/// Scatters a blockwise-layout matrix into the combined doubled-up layout.
fn regroup<T: Real>(m: &CMatrix<T>, row_map: Option<&[usize]>, col_map: Option<&[usize]>) -> CMatrix<T> {
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let ri = row_map.map_or(i, |r| r[i]);
        for j in 0..m.ncols() {
            let cj = col_map.map_or(j, |c| c[j]);
            out[(ri, cj)] = m[(i, j)];
        }
    }
    out
}

/// Static system with scattering `S` and no modes.
pub fn static_system<T: Real>(s: CMatrix<T>) -> Result<GeneralLqss<T>> {
    let rows = s.nrows();
    GeneralLqss::new(s, CMatrix::zeros(rows, 0), CMatrix::zeros(0, 0))
}

/// Feeds the outputs of `upstream` into the inputs of `downstream`;
/// `G = G_down G_up`.
pub fn series<T: Real>(downstream: &GeneralLqss<T>, upstream: &GeneralLqss<T>) -> Result<GeneralLqss<T>> {
    if downstream.n_io() != upstream.n_io() {
        return Err(Error::Dimension(format!(
            "series connection of {}-port and {}-port systems",
            downstream.n_io(),
            upstream.n_io()
        )));
    }
    let (nu, nd) = (upstream.n_modes(), downstream.n_modes());
    let (fu, fd) = (upstream.generator(), downstream.generator());
    let sdnu = &downstream.s * &upstream.n;
    let mut f_block = CMatrix::<T>::zeros(2 * (nu + nd), 2 * (nu + nd));
    f_block.view_mut((0, 0), (2 * nu, 2 * nu)).copy_from(&fu);
    f_block.view_mut((2 * nu, 2 * nu), (2 * nd, 2 * nd)).copy_from(&fd);
    f_block
        .view_mut((2 * nu, 0), (2 * nd, 2 * nu))
        .copy_from(&(-(flat(&downstream.n) * &sdnu)));
    let mut n_block = CMatrix::<T>::zeros(2 * downstream.n_io(), 2 * (nu + nd));
    n_block.view_mut((0, 0), sdnu.shape()).copy_from(&sdnu);
    n_block.view_mut((0, 2 * nu), downstream.n.shape()).copy_from(&downstream.n);
    let map = interleave(&[nu, nd]);
    let f = regroup(&f_block, Some(&map), Some(&map));
    let n = regroup(&n_block, None, Some(&map));
    GeneralLqss::from_generator(&downstream.s * &upstream.s, n, &f)
}

/// Direct sum: ports and modes of `a` precede those of `b`.
pub fn concatenate<T: Real>(a: &GeneralLqss<T>, b: &GeneralLqss<T>) -> GeneralLqss<T> {
    GeneralLqss {
        s: doubled_direct_sum(&a.s, &b.s),
        n: doubled_direct_sum(&a.n, &b.n),
        m: doubled_direct_sum(&a.m, &b.m),
    }
}

fn doubled_indices(channels: &[usize], total: usize) -> Vec<usize> {
    channels.iter().copied().chain(channels.iter().map(|c| c + total)).collect()
}

/// Places `sys` on the given channels of a `total`-channel system; the other
/// channels pass through unchanged.
pub fn embed_channels<T: Real>(sys: &GeneralLqss<T>, channels: &[usize], total: usize) -> Result<GeneralLqss<T>> {
    if channels.len() != sys.n_io() {
        return Err(Error::Dimension(format!(
            "{} channels given for a {}-port system",
            channels.len(),
            sys.n_io()
        )));
    }
    let mut seen = vec![false; total];
    for &c in channels {
        if c >= total || seen[c] {
            return Err(Error::Dimension(format!("invalid or repeated channel {c}")));
        }
        seen[c] = true;
    }
    let idx = doubled_indices(channels, total);
    let mut s = identity::<T>(2 * total);
    let mut n = CMatrix::<T>::zeros(2 * total, sys.n.ncols());
    for (i, &gi) in idx.iter().enumerate() {
        for (j, &gj) in idx.iter().enumerate() {
            s[(gi, gj)] = sys.s[(i, j)];
        }
        n.row_mut(gi).copy_from(&sys.n.row(i));
    }
    Ok(GeneralLqss { s, n, m: sys.m.clone() })
}

/// Closes the channels `ports` through the static gain `r`
/// (`u_int = R y_int`) and returns the system on the remaining channels, in
/// ascending order.
pub fn close_feedback<T: Real>(sys: &GeneralLqss<T>, ports: &[usize], r: &CMatrix<T>) -> Result<GeneralLqss<T>> {
    let m = sys.n_io();
    let k = ports.len();
    if r.shape() != (2 * k, 2 * k) {
        return Err(Error::Dimension(format!(
            "feedback gain is {:?} for {k} interconnection ports",
            r.shape()
        )));
    }
    let mut closed = vec![false; m];
    for &p in ports {
        if p >= m || closed[p] {
            return Err(Error::Dimension(format!("invalid or repeated interconnection port {p}")));
        }
        closed[p] = true;
    }
    let rest: Vec<usize> = (0..m).filter(|i| !closed[*i]).collect();
    let ii = doubled_indices(ports, m);
    let ee = doubled_indices(&rest, m);
    let all_modes: Vec<usize> = (0..sys.n.ncols()).collect();

    let s_ii = select(&sys.s, &ii, &ii);
    let s_ie = select(&sys.s, &ii, &ee);
    let s_ei = select(&sys.s, &ee, &ii);
    let s_ee = select(&sys.s, &ee, &ee);
    let n_i = select(&sys.n, &ii, &all_modes);
    let n_e = select(&sys.n, &ee, &all_modes);

    let loop_matrix = identity::<T>(2 * k) - r * &s_ii;
    let kk = checked_inverse(&loop_matrix, lit(super::POLE_COND)).map_err(|cond| Error::AlgebraicLoop { cond })?;
    let krn = &kk * r * &n_i;
    let krs = &kk * r * &s_ie;

    let b = -(flat(&sys.n) * &sys.s);
    let b_i = select(&b, &all_modes, &ii);
    let f = sys.generator() + &b_i * &krn;
    let c = &n_e + &s_ei * &krn;
    let d = &s_ee + &s_ei * &krs;
    GeneralLqss::from_generator(d, c, &f)
}
