//! Feedback realization: static pre-network, a bank of cavities whose
//! interconnection ports are closed through a static gain `R`, and a static
//! post-network.
//!
//! With `N = V Nhat W^{-1}` the system is state-transformed by `W` so that
//! its coupling becomes the block-diagonal `Nhat`. The bank realizes `Nhat`
//! with Hamiltonian `Mbar`; closing the loop through
//! `R = (X - I)(X + I)^{-1}` with `X = 2i (Nt^flat)^{-1} J (Mhat - Mbar) Nt^{-1}`
//! restores `Mhat = W^H M W`, since `(I - R)^{-1} R = (X - I) / 2`.
//!
//! A non-real eigenvalue pair of `N^flat N` couples two modes to two
//! channels. That block is built from two identical cavities in series
//! with a mixer `[[0, 1], [-1, 0]]` between them; the mixer leaves a net
//! scattering of `[[0, 1], [-1, 0]]` on the two channels, which the
//! pre-network undoes.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::SystemKind;
use crate::error::{Error, Result};
use crate::krein::cayley::inverse_cayley;
use crate::krein::svd::{krein_svd, Spectrum};
use crate::krein::{doubled_up, doubled_up_part, flat, j_left};
use crate::linalg::{svd_full, identity};
use crate::lqss::{CavityPort, CavitySpec, GeneralLqss, PassiveLqss};
use crate::scalar::{creal, imag_unit, lit, to_f64, CMatrix, Real};

/// Relative cutoff below which a singular value of `N` counts as zero.
pub const COUPLING_RANK_TOL: f64 = 1e-9;

/// Reconstruction tolerance passed to the Krein SVD.
pub const SVD_TOL: f64 = 1e-8;

/// Where a cavity port is connected: a system channel or the
/// interconnection channel of a cavity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "index", rename_all = "lowercase")]
pub enum Channel {
    System(usize),
    Interconnect(usize),
}

/// A cavity and the channel each of its ports is connected to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PlacedCavity<T: Real = f64> {
    pub spec: CavitySpec<T>,
    pub links: Vec<Channel>,
}

/// Two identical cavities in series on two system channels, with a mixer
/// between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PairBlock<T: Real = f64> {
    /// Indices of the upstream and downstream cavity.
    pub cavities: [usize; 2],
    /// System channels the block acts on.
    pub channels: [usize; 2],
    /// Unitary acting on the two channels between the cavities.
    #[serde(with = "crate::serde_cmatrix")]
    pub mixer: CMatrix<T>,
}

/// Per-cavity detunings and interconnection coupling rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FreeParams<T: Real = f64> {
    pub detunings: Vec<T>,
    pub interconnect_couplings: Vec<T>,
}

impl<T: Real> FreeParams<T> {
    /// Zero detunings and unit interconnection couplings.
    pub fn standard(n: usize) -> Self {
        Self {
            detunings: vec![T::zero(); n],
            interconnect_couplings: vec![T::one(); n],
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.detunings.len() != n || self.interconnect_couplings.len() != n {
            return Err(Error::Parameter(format!(
                "{} detunings and {} interconnection couplings given for {n} modes",
                self.detunings.len(),
                self.interconnect_couplings.len()
            )));
        }
        if let Some(i) = self.detunings.iter().position(|d| !d.is_finite()) {
            return Err(Error::Parameter(format!("detuning {i} is not finite")));
        }
        if let Some(i) = self
            .interconnect_couplings
            .iter()
            .position(|k| !(k.is_finite() && *k > T::zero()))
        {
            return Err(Error::Parameter(format!("interconnection coupling {i} must be positive")));
        }
        Ok(())
    }

    /// `Nt = diag(sqrt k_1, .., sqrt k_n)` doubled up.
    pub fn n_tilde(&self) -> CMatrix<T> {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.interconnect_couplings.len(),
            self.interconnect_couplings.iter().map(|k| creal(k.sqrt())),
        ));
        let z = CMatrix::zeros(d.nrows(), d.ncols());
        doubled_up(&d, &z)
    }
}

/// Classification of the coupling spectrum that fixes the cavity layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumAudit {
    pub r_plus: usize,
    pub r_minus: usize,
    pub r_c: usize,
    pub rank: usize,
    /// Cavities without system ports.
    pub kernel: usize,
    pub lambda_plus: Vec<f64>,
    pub lambda_minus: Vec<f64>,
    #[serde(with = "crate::serde_cmatrix::complex_list")]
    pub lambda_complex: Vec<Complex<f64>>,
}

impl SpectrumAudit {
    fn from_spectrum<T: Real>(s: &Spectrum<T>, n: usize) -> Self {
        Self {
            r_plus: s.r_plus(),
            r_minus: s.r_minus(),
            r_c: s.r_c(),
            rank: s.rank(),
            kernel: n - s.rank(),
            lambda_plus: s.lambda_plus.iter().map(|&x| to_f64(x)).collect(),
            lambda_minus: s.lambda_minus.iter().map(|&x| to_f64(x)).collect(),
            lambda_complex: s
                .lambda_complex
                .iter()
                .map(|z| Complex::new(to_f64(z.re), to_f64(z.im)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FeedbackRealization<T: Real = f64> {
    pub kind: SystemKind,
    /// `P^{-1} V^{-1} S`, where `P` is the net scattering of the pair blocks.
    #[serde(with = "crate::serde_cmatrix")]
    pub pre_network: CMatrix<T>,
    /// `V`
    #[serde(with = "crate::serde_cmatrix")]
    pub post_network: CMatrix<T>,
    /// Cavity `i` holds mode `i`; its last port is on `Interconnect(i)`.
    pub cavities: Vec<PlacedCavity<T>>,
    pub pair_blocks: Vec<PairBlock<T>>,
    /// `R`, acting on the interconnection channels in cavity order.
    #[serde(with = "crate::serde_cmatrix")]
    pub feedback_gain: CMatrix<T>,
    pub free_params: FreeParams<T>,
    pub spectrum: SpectrumAudit,
    /// `W`
    #[serde(with = "crate::serde_cmatrix")]
    pub state_transform: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub n_hat: CMatrix<T>,
    /// `W^H M W`
    #[serde(with = "crate::serde_cmatrix")]
    pub m_hat: CMatrix<T>,
    /// Hamiltonian of the open cavity bank.
    #[serde(with = "crate::serde_cmatrix")]
    pub m_bar: CMatrix<T>,
    #[serde(with = "crate::serde_cmatrix")]
    pub x: CMatrix<T>,
}

impl<T: Real> FeedbackRealization<T> {
    pub fn n_io(&self) -> usize {
        self.pre_network.nrows() / 2
    }

    pub fn n_modes(&self) -> usize {
        self.cavities.len()
    }

    /// Closed-loop Hamiltonian `Mbar - (i/2) J Nt^flat X Nt`, which equals
    /// `m_hat` for a correct gain.
    pub fn network_hamiltonian(&self) -> CMatrix<T> {
        let nt = self.free_params.n_tilde();
        let loop_term = flat(&nt) * &self.x * &nt;
        &self.m_bar - j_left(&loop_term).map(|z| z * imag_unit::<T>() * lit::<T>(0.5))
    }

    /// Number of cavities with 1, 2 and 3 ports.
    pub fn port_counts(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for c in &self.cavities {
            if let Some(slot) = c.spec.ports.len().checked_sub(1).and_then(|i| out.get_mut(i)) {
                *slot += 1;
            }
        }
        out
    }
}

/// `[[0, 1], [-1, 0]]`
fn pair_mixer<T: Real>() -> CMatrix<T> {
    CMatrix::from_row_slice(2, 2, &[creal(T::zero()), creal(T::one()), creal(-T::one()), creal(T::zero())])
}

/// `Mbar = diag(D, D) + E + E^T`, with `E` coupling the two modes of each
/// complex block through `-Im(lambda) / 2`.
fn bar_hamiltonian<T: Real>(spectrum: &Spectrum<T>, detunings: &[T]) -> CMatrix<T> {
    let n = detunings.len();
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { creal(detunings[i]) } else { creal(T::zero()) });
    let mut m2 = CMatrix::<T>::zeros(n, n);
    let offset = spectrum.r_plus() + spectrum.r_minus();
    for (i, l) in spectrum.lambda_complex.iter().enumerate() {
        let (p, q) = (offset + 2 * i, offset + 2 * i + 1);
        let e = creal(-l.im * lit(0.5));
        m2[(p, q)] = e;
        m2[(q, p)] = e;
    }
    doubled_up(&d, &m2)
}

/// Cavities of the bank: port lists, links and pair blocks.
fn cavity_bank<T: Real>(spectrum: &Spectrum<T>, params: &FreeParams<T>) -> (Vec<PlacedCavity<T>>, Vec<PairBlock<T>>) {
    let n = params.detunings.len();
    let zero = T::zero();
    let interconnect = |i: usize| CavityPort::passive(params.interconnect_couplings[i], zero);
    let mut cavities = Vec::with_capacity(n);
    let mut pairs = Vec::new();
    let single = |i: usize, port: Option<CavityPort<T>>| {
        let mut ports: Vec<_> = port.into_iter().collect();
        let mut links: Vec<_> = ports.iter().map(|_| Channel::System(i)).collect();
        ports.push(interconnect(i));
        links.push(Channel::Interconnect(i));
        PlacedCavity {
            spec: CavitySpec {
                detuning: params.detunings[i],
                ports,
            },
            links,
        }
    };
    for &l in &spectrum.lambda_plus {
        let i = cavities.len();
        cavities.push(single(i, Some(CavityPort::passive(l, zero))));
    }
    for &l in &spectrum.lambda_minus {
        let i = cavities.len();
        cavities.push(single(i, Some(CavityPort::active(l.abs(), zero))));
    }
    for (&a, &b) in spectrum.alphas.iter().zip(&spectrum.betas) {
        let p = cavities.len();
        let q = p + 1;
        for i in [p, q] {
            cavities.push(PlacedCavity {
                spec: CavitySpec {
                    detuning: params.detunings[i],
                    ports: vec![
                        CavityPort::active(b * b, T::frac_pi_2()),
                        CavityPort::passive(a * a, zero),
                        interconnect(i),
                    ],
                },
                links: vec![Channel::System(p), Channel::System(q), Channel::Interconnect(i)],
            });
        }
        pairs.push(PairBlock {
            cavities: [p, q],
            channels: [p, q],
            mixer: pair_mixer(),
        });
    }
    while cavities.len() < n {
        let i = cavities.len();
        cavities.push(single(i, None));
    }
    (cavities, pairs)
}

/// Doubled-up inverse of the net pair-block scattering on `m` channels.
fn pair_correction<T: Real>(pairs: &[PairBlock<T>], m: usize) -> CMatrix<T> {
    let mut u = identity::<T>(m);
    for b in pairs {
        let inv = b.mixer.adjoint();
        for (i, &ci) in b.channels.iter().enumerate() {
            for (j, &cj) in b.channels.iter().enumerate() {
                u[(ci, cj)] = inv[(i, j)];
            }
        }
    }
    doubled_up(&u, &CMatrix::zeros(m, m))
}

struct Decomposed<T: Real> {
    kind: SystemKind,
    s: CMatrix<T>,
    m: CMatrix<T>,
    v: CMatrix<T>,
    w: CMatrix<T>,
    n_hat: CMatrix<T>,
    spectrum: Spectrum<T>,
}

fn realize<T: Real>(d: Decomposed<T>, params: &FreeParams<T>) -> Result<FeedbackRealization<T>> {
    let n = d.w.nrows() / 2;
    params.check(n)?;
    let m_hat = d.w.adjoint() * &d.m * &d.w;
    let m_hat = doubled_up_part(&(&m_hat + m_hat.adjoint()).scale(lit(0.5)));
    let m_bar = bar_hamiltonian(&d.spectrum, &params.detunings);
    let nt = params.n_tilde();
    let nt_inv = nt.map(|z| if z.re > T::zero() { creal(T::one() / z.re) } else { z });
    let x = (flat(&nt_inv) * j_left(&(&m_hat - &m_bar)) * &nt_inv).map(|z| z * imag_unit::<T>() * lit::<T>(2.0));
    let x = doubled_up_part(&(&x - flat(&x)).scale(lit(0.5)));
    let r = inverse_cayley(&x)?;
    let (cavities, pair_blocks) = cavity_bank(&d.spectrum, params);
    let m_io = d.s.nrows() / 2;
    let pre_network = pair_correction(&pair_blocks, m_io) * flat(&d.v) * &d.s;
    Ok(FeedbackRealization {
        kind: d.kind,
        pre_network,
        post_network: d.v,
        cavities,
        pair_blocks,
        feedback_gain: r,
        free_params: params.clone(),
        spectrum: SpectrumAudit::from_spectrum(&d.spectrum, n),
        state_transform: d.w,
        n_hat: d.n_hat,
        m_hat,
        m_bar,
        x,
    })
}

/// Feedback network of `n - r` one-port and `r` two-port passive cavities,
/// `r = rank N`.
pub fn feedback_passive<T: Real>(sys: &PassiveLqss<T>, params: &FreeParams<T>) -> Result<FeedbackRealization<T>> {
    let (m, n) = (sys.n_io(), sys.n_modes());
    let svd = svd_full(&sys.n)?;
    let smax = svd.sigma.first().copied().unwrap_or(T::zero());
    let kept: Vec<T> = svd
        .sigma
        .iter()
        .copied()
        .filter(|&s| s > lit::<T>(COUPLING_RANK_TOL) * smax)
        .collect();
    let mut n1 = CMatrix::<T>::zeros(m, n);
    for (i, &s) in kept.iter().enumerate() {
        n1[(i, i)] = creal(s);
    }
    let spectrum = Spectrum {
        lambda_plus: kept.iter().map(|&s| s * s).collect(),
        lambda_minus: Vec::new(),
        lambda_complex: Vec::new(),
        alphas: Vec::new(),
        betas: Vec::new(),
        zero_modes: n - kept.len(),
    };
    let up = |x: &CMatrix<T>| doubled_up(x, &CMatrix::zeros(x.nrows(), x.ncols()));
    let d = Decomposed {
        kind: SystemKind::Passive,
        s: up(&sys.s),
        m: up(&sys.m),
        v: up(&svd.u),
        w: up(&svd.vh.adjoint()),
        n_hat: up(&n1),
        spectrum,
    };
    realize(d, params)
}

/// Feedback network of `n - r` one-port, `r_+ + r_-` two-port and `2 r_c`
/// three-port cavities.
///
/// Fails when `N^flat N` is not semisimple, when its kernel differs from
/// that of `N`, or when `X + I` is singular for the chosen free parameters.
pub fn feedback_general<T: Real>(sys: &GeneralLqss<T>, params: &FreeParams<T>) -> Result<FeedbackRealization<T>> {
    let svd = krein_svd(&sys.n, lit(SVD_TOL))?;
    let d = Decomposed {
        kind: SystemKind::General,
        s: sys.s.clone(),
        m: sys.m.clone(),
        v: svd.v,
        w: svd.w,
        n_hat: svd.n_hat,
        spectrum: svd.spectrum,
    };
    realize(d, params)
}
