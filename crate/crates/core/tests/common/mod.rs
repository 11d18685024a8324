//! Fixtures, reference values and independent oracles shared by the
//! integration tests.
//!
//! The oracles work in the frequency domain: each cavity's transfer function
//! is built from its port parameters, networks are matrix products, and
//! feedback loops are eliminated algebraically. None of them use the
//! library's state-space composition.

#![allow(dead_code)]

use lqss_core::{CMatrix, CavitySpec, Channel, FeedbackRealization, GeneralSystem, PassiveSystem};
use nalgebra::Complex;

pub type C = Complex<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn real(rows: usize, cols: usize, data: &[f64]) -> CMatrix<f64> {
    CMatrix::from_row_slice(rows, cols, &data.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

pub fn complex(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> CMatrix<f64> {
    CMatrix::from_fn(rows, cols, |i, j| c(re[i * cols + j], im[i * cols + j]))
}

pub fn max_abs(m: &CMatrix<f64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn eye(n: usize) -> CMatrix<f64> {
    CMatrix::identity(n, n)
}

pub fn doubled(x1: &CMatrix<f64>, x2: &CMatrix<f64>) -> CMatrix<f64> {
    let (r, s) = x1.shape();
    let mut out = CMatrix::zeros(2 * r, 2 * s);
    out.view_mut((0, 0), (r, s)).copy_from(x1);
    out.view_mut((0, s), (r, s)).copy_from(x2);
    out.view_mut((r, 0), (r, s)).copy_from(&x2.map(|z| z.conj()));
    out.view_mut((r, s), (r, s)).copy_from(&x1.map(|z| z.conj()));
    out
}

pub fn j(k: usize) -> CMatrix<f64> {
    CMatrix::from_fn(2 * k, 2 * k, |a, b| {
        if a != b {
            c(0.0, 0.0)
        } else if a < k {
            c(1.0, 0.0)
        } else {
            c(-1.0, 0.0)
        }
    })
}

/// `J X^H J` for a `2r x 2s` matrix.
pub fn flat(x: &CMatrix<f64>) -> CMatrix<f64> {
    j(x.ncols() / 2) * x.adjoint() * j(x.nrows() / 2)
}

// ---- worked examples ----------------------------------------------------

pub fn three_mode_passive() -> PassiveSystem {
    let m = real(3, 3, &[5.0, 1.0, -2.0, 1.0, 3.0, 0.0, -2.0, 0.0, 4.0]);
    let n = real(3, 3, &[1.0, 2.0, 1.0, 0.0, -1.0, 3.0, 2.0, 3.0, 5.0]);
    PassiveSystem::new(eye(3), n, m).unwrap()
}

pub fn two_mode_general() -> GeneralSystem {
    let m = real(
        4,
        4,
        &[2.0, 1.0, 0.0, -1.0, 1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 2.0, 1.0, -1.0, 0.0, 1.0, 2.0],
    );
    let n = real(
        4,
        4,
        &[0.0, 1.0, 2.0, 0.0, -1.0, 2.0, 1.0, -1.0, 2.0, 0.0, 0.0, 1.0, 1.0, -1.0, -1.0, 2.0],
    );
    GeneralSystem::new(eye(4), n, m).unwrap()
}

/// Expected triangular-form diagonal for the passive cascade, top to bottom.
pub const REF_PASSIVE_DIAG: [(f64, f64); 3] = [(-23.1603, -3.1301), (-1.9103, -5.5835), (-1.9294, -3.2865)];
pub const REF_PASSIVE_DETUNINGS: [f64; 3] = [3.1301, 5.5835, 3.2865];

pub const REF_PASSIVE_NHAT: [f64; 3] = [6.8092, 2.7632, 0.0];
pub fn ref_passive_w() -> CMatrix<f64> {
    real(
        3,
        3,
        &[-0.3093, 0.2717, -0.9113, -0.4409, 0.8081, 0.3906, -0.8426, -0.5226, 0.1302],
    )
}
pub fn ref_passive_m_hat() -> CMatrix<f64> {
    real(
        3,
        3,
        &[3.1315, 0.0370, -0.7200, 0.0370, 4.4278, -2.2169, -0.7200, -2.2169, 4.4407],
    )
}
pub fn ref_passive_x() -> CMatrix<f64> {
    real(
        3,
        3,
        &[6.2631, 0.0740, -1.4400, 0.0740, 8.8556, -4.4337, -1.4400, -4.4337, 8.8814],
    )
    .map(|z| z * c(0.0, 1.0))
}
#[allow(clippy::approx_constant)]
pub fn ref_passive_r() -> CMatrix<f64> {
    complex(
        3,
        3,
        &[0.9429, -0.0145, -0.0237, -0.0145, 0.9438, -0.0467, -0.0237, -0.0467, 0.9389],
        &[0.3245, 0.0276, 0.0637, 0.0276, 0.2918, 0.1449, 0.0637, 0.1449, 0.3010],
    )
}

pub const REF_GENERAL_DIAG: [(f64, f64); 2] = [(-2.0305, -2.2667), (2.0305, -2.6660)];
pub const REF_GENERAL_DETUNINGS: [f64; 2] = [2.2667, 2.6660];
pub fn ref_general_cascade_v() -> CMatrix<f64> {
    complex(
        4,
        4,
        &[
            -0.1229, 1.0111, 0.0643, -0.0352, 1.0200, 0.1032, -0.1333, 0.0529, 0.0643, -0.0352, -0.1229, 1.0111,
            -0.1333, 0.0529, 1.0200, 0.1032,
        ],
        &[
            0.2393, 0.0226, -0.2991, -0.0219, 0.0, 0.2176, 0.0392, -0.2764, 0.2991, 0.0219, -0.2393, -0.0226,
            -0.0392, 0.2764, 0.0, -0.2176,
        ],
    )
}
pub fn ref_general_cascade_nhat() -> CMatrix<f64> {
    complex(
        4,
        4,
        &[
            0.8826, 0.3697, -0.2106, 1.9872, 2.0457, -0.6276, -0.9994, 0.6779, -0.2106, 1.9872, 0.8826, 0.3697,
            -0.9994, 0.6779, 2.0457, -0.6276,
        ],
        &[
            -0.6207, -0.1391, 0.5005, 0.2764, -0.0830, -0.1196, -0.0385, 0.3744, -0.5005, -0.2764, 0.6207, 0.1391,
            0.0385, -0.3744, 0.0830, 0.1196,
        ],
    )
}

pub const REF_GENERAL_NN_EIGEN: f64 = 2.8284;
pub const REF_GENERAL_NHAT_ENTRY: f64 = 1.6818;
pub fn ref_general_w() -> CMatrix<f64> {
    real(
        4,
        4,
        &[
            0.2180, -1.0987, 0.5046, 0.0, -1.1061, -0.1609, -0.1275, 0.4827, 0.5046, 0.0, 0.2180, -1.0987, -0.1275,
            0.4827, -1.1061, -0.1609,
        ],
    )
}
pub fn ref_general_m_hat() -> CMatrix<f64> {
    real(
        4,
        4,
        &[
            3.6444, 1.0135, 0.4429, -3.3952, 1.0135, 4.3462, -3.3952, -1.7249, 0.4429, -3.3952, 3.6444, 1.0135,
            -3.3952, -1.7249, 1.0135, 4.3462,
        ],
    )
}
pub fn ref_general_x() -> CMatrix<f64> {
    real(
        4,
        4,
        &[
            7.2889, 2.0271, 0.8858, -6.7904, 2.0271, 8.6924, -6.7904, -3.4497, -0.8858, 6.7904, -7.2889, -2.0271,
            6.7904, 3.4497, -2.0271, -8.6924,
        ],
    )
    .map(|z| z * c(0.0, 1.0))
}
pub fn ref_general_r() -> CMatrix<f64> {
    complex(
        4,
        4,
        &[
            -0.3731, 0.9082, 0.0, 0.0450, 0.9082, 0.3125, -0.0450, 0.0, 0.0, 0.0450, -0.3731, 0.9082, -0.0450, 0.0,
            0.9082, 0.3125,
        ],
        &[
            7.8624, -5.2659, 7.4743, -5.8003, -5.2659, 4.4401, -5.8003, 3.7042, -7.4743, 5.8003, -7.8624, 5.2659,
            5.8003, -3.7042, 5.2659, -4.4401,
        ],
    )
}

/// Per-mode gauge `Gamma` relating two state bases, `W_ref ~ W Gamma`, with
/// each mode's block projected onto `[[c, s], [s*, c*]]`, `|c|^2 - |s|^2 = 1`.
pub fn mode_gauge(w: &CMatrix<f64>, w_ref: &CMatrix<f64>) -> CMatrix<f64> {
    let n = w.ncols() / 2;
    let raw = w.clone().try_inverse().unwrap() * w_ref;
    let mut g = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let cc = (raw[(i, i)] + raw[(n + i, n + i)].conj()) * 0.5;
        let ss = (raw[(i, n + i)] + raw[(n + i, i)].conj()) * 0.5;
        let norm = (cc.norm_sqr() - ss.norm_sqr()).sqrt();
        let (cc, ss) = (cc / norm, ss / norm);
        g[(i, i)] = cc;
        g[(i, n + i)] = ss;
        g[(n + i, i)] = ss.conj();
        g[(n + i, n + i)] = cc.conj();
    }
    g
}

/// Diagonal phase gauge `Phi` with `W_ref ~ W Phi` for unitary bases.
pub fn phase_gauge(w: &CMatrix<f64>, w_ref: &CMatrix<f64>) -> CMatrix<f64> {
    let raw = w.adjoint() * w_ref;
    CMatrix::from_fn(raw.nrows(), raw.ncols(), |i, k| {
        if i == k {
            raw[(i, i)] / raw[(i, i)].norm()
        } else {
            c(0.0, 0.0)
        }
    })
}

// ---- frequency-domain oracles -----------------------------------------

/// `G(s) = [I - N (sI + iJM + N^flat N / 2)^{-1} N^flat] S`.
pub fn transfer(s_mat: &CMatrix<f64>, n: &CMatrix<f64>, m: &CMatrix<f64>, s: C) -> CMatrix<f64> {
    let k = m.nrows() / 2;
    let io = s_mat.nrows();
    if k == 0 {
        return s_mat.clone();
    }
    let nf = flat(n);
    let a = eye(2 * k) * s + j(k) * m * c(0.0, 1.0) + &nf * n * c(0.5, 0.0);
    (eye(io) - n * a.try_inverse().expect("not a pole") * nf) * s_mat
}

pub fn system_transfer(sys: &GeneralSystem, s: C) -> CMatrix<f64> {
    transfer(&sys.s, &sys.n, &sys.m, s)
}

/// One-mode cavity with identity scattering, from its port parameters.
pub fn cavity_transfer(spec: &CavitySpec, s: C) -> CMatrix<f64> {
    let p = spec.ports.len();
    let n1 = CMatrix::from_fn(p, 1, |i, _| C::from_polar(spec.ports[i].kappa.sqrt(), spec.ports[i].phi));
    let n2 = CMatrix::from_fn(p, 1, |i, _| C::from_polar(spec.ports[i].g.sqrt(), spec.ports[i].theta));
    let m = real(2, 2, &[spec.detuning, 0.0, 0.0, spec.detuning]);
    transfer(&eye(2 * p), &doubled(&n1, &n2), &m, s)
}

/// Places a `2k x 2k` doubled-up transfer matrix on `channels` of `total`.
pub fn embed(g: &CMatrix<f64>, channels: &[usize], total: usize) -> CMatrix<f64> {
    let k = channels.len();
    let idx: Vec<usize> = channels.iter().copied().chain(channels.iter().map(|&c| c + total)).collect();
    let mut out = eye(2 * total);
    for a in 0..2 * k {
        for b in 0..2 * k {
            out[(idx[a], idx[b])] = g[(a, b)];
        }
    }
    out
}

/// `G_n ... G_1 S` for a cascade.
pub fn cascade_transfer(pre: &CMatrix<f64>, cavities: &[CavitySpec], s: C) -> CMatrix<f64> {
    cavities.iter().fold(pre.clone(), |acc, cav| cavity_transfer(cav, s) * acc)
}

/// External and interconnection blocks `(G_ee, G_ei, G_ie, G_ii)` of the
/// cavity bank on `m + n` channels.
fn bank_blocks(r: &FeedbackRealization, s: C) -> [CMatrix<f64>; 4] {
    let m = r.pre_network.nrows() / 2;
    let n = r.cavities.len();
    let total = m + n;
    let chan = |l: &Channel| match *l {
        Channel::System(k) => k,
        Channel::Interconnect(k) => m + k,
    };
    let mut bank = eye(2 * total);
    let mut i = 0;
    while i < n {
        let pair = r.pair_blocks.iter().find(|b| b.cavities[0] == i);
        let place = |k: usize| {
            let cav = &r.cavities[k];
            let channels: Vec<usize> = cav.links.iter().map(chan).collect();
            embed(&cavity_transfer(&cav.spec, s), &channels, total)
        };
        match pair {
            Some(b) => {
                let mixer = embed(
                    &doubled(&b.mixer, &CMatrix::zeros(2, 2)),
                    &[b.channels[0], b.channels[1]],
                    total,
                );
                bank = place(b.cavities[1]) * mixer * place(b.cavities[0]) * bank;
                i += 2;
            }
            None => {
                bank = place(i) * bank;
                i += 1;
            }
        }
    }
    let ext: Vec<usize> = (0..m).chain(total..total + m).collect();
    let int: Vec<usize> = (m..total).chain(total + m..2 * total).collect();
    let pick = |rows: &[usize], cols: &[usize]| CMatrix::from_fn(rows.len(), cols.len(), |a, b| bank[(rows[a], cols[b])]);
    [pick(&ext, &ext), pick(&ext, &int), pick(&int, &ext), pick(&int, &int)]
}

/// Bank of cavities on `m + n` channels, loop closed by
/// `U_int = R (G_ie U + G_ii U_int)`, then `post G pre`.
pub fn feedback_transfer(r: &FeedbackRealization, s: C) -> CMatrix<f64> {
    let n = r.cavities.len();
    let [g_ee, g_ei, g_ie, g_ii] = bank_blocks(r, s);
    let gain = &r.feedback_gain;
    let loop_inv = (eye(2 * n) - gain * &g_ii).try_inverse().expect("algebraic loop");
    let closed = &g_ee + &g_ei * loop_inv * gain * &g_ie;
    &r.post_network * closed * &r.pre_network
}

/// Spectral condition number `sigma_max / sigma_min`.
pub fn condition(a: &CMatrix<f64>) -> f64 {
    let sv = a.singular_values();
    let (hi, lo) = sv.iter().fold((0.0f64, f64::INFINITY), |(h, l), &x| (h.max(x), l.min(x)));
    hi / lo
}

/// Worst condition of `I - R G_ii(s)` over the grid: the conditioning of
/// the loop elimination in [`feedback_transfer`].
pub fn feedback_loop_condition(r: &FeedbackRealization) -> f64 {
    let n = r.cavities.len();
    grid()
        .into_iter()
        .map(|s| condition(&(eye(2 * n) - &r.feedback_gain * &bank_blocks(r, s)[3])))
        .fold(1.0, f64::max)
}

/// `[0] + 20 log-spaced w in [1e-2, 1e3]`.
pub fn grid() -> Vec<C> {
    std::iter::once(0.0)
        .chain((0..20).map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 19.0)))
        .map(|w| c(0.0, w))
        .collect()
}

/// `max |Ga - Gb| / max(1, max |Ga|)` over the grid.
pub fn max_rel_error(a: impl Fn(C) -> CMatrix<f64>, b: impl Fn(C) -> CMatrix<f64>) -> f64 {
    grid()
        .into_iter()
        .map(|s| {
            let (ga, gb) = (a(s), b(s));
            max_abs(&(&ga - &gb)) / max_abs(&ga).max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `max |G^flat G - I| / max(1, max |G|^2)` over the grid.
pub fn flat_unitarity(g: impl Fn(C) -> CMatrix<f64>) -> f64 {
    grid()
        .into_iter()
        .map(|s| {
            let gs = g(s);
            let k = gs.nrows();
            max_abs(&(flat(&gs) * &gs - eye(k))) / max_abs(&gs).max(1.0).powi(2)
        })
        .fold(0.0, f64::max)
}
