//! Reassembly of realizations into single systems and transfer-function
//! comparison on a frequency grid.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krein::{bogoliubov_residual, doubled_up, flat};
use crate::linalg::{identity, max_abs};
use crate::lqss::{cavity_system, close_feedback, embed_channels, series, static_system, GeneralLqss};
use crate::scalar::{cplx, lit, to_f64, CMatrix, Real};
use crate::synthesis::{CascadeRealization, Channel, FeedbackRealization};

/// Relative frequency shift applied when a sample hits a pole.
pub const POLE_JITTER: f64 = 1e-3;

/// Attempts per sample before reporting a sampling error.
const JITTER_ATTEMPTS: usize = 8;

/// Residual bound for `G^flat G = I` on the sample grid, relative to
/// `max(1, max |G|^2)`.
pub const UNITARITY_TOL: f64 = 1e-8;

/// Static network, then the cavities in order.
pub fn assemble_cascade<T: Real>(r: &CascadeRealization<T>) -> Result<GeneralLqss<T>> {
    let mut acc = static_system(r.pre_network.clone())?;
    for (i, spec) in r.cavities.iter().enumerate() {
        let cav = cavity_system(spec)?;
        if cav.n_io() != acc.n_io() {
            return Err(Error::Dimension(format!(
                "cavity {i} has {} ports, the network has {} channels",
                cav.n_io(),
                acc.n_io()
            )));
        }
        acc = series(&cav, &acc)?;
    }
    Ok(acc)
}

fn channel_index(c: Channel, m: usize, n: usize) -> Result<usize> {
    match c {
        Channel::System(k) if k < m => Ok(k),
        Channel::Interconnect(k) if k < n => Ok(m + k),
        _ => Err(Error::Dimension(format!("port link {c:?} outside {m} system and {n} loop channels"))),
    }
}

/// Cavity bank on `m + n` channels (system channels first), closed through
/// the feedback gain and sandwiched between the static networks.
pub fn assemble_feedback<T: Real>(r: &FeedbackRealization<T>) -> Result<GeneralLqss<T>> {
    let (m, n) = (r.n_io(), r.n_modes());
    let total = m + n;
    let mut pair_of = vec![None; n];
    for (b, block) in r.pair_blocks.iter().enumerate() {
        let [p, q] = block.cavities;
        if p >= n || q != p + 1 {
            return Err(Error::Dimension(format!("pair block {b} must hold consecutive cavities, got {p}, {q}")));
        }
        pair_of[p] = Some(b);
        pair_of[q] = Some(b);
    }
    let mut bank = static_system(identity::<T>(2 * total))?;
    let mut i = 0;
    while i < n {
        let unit = match pair_of[i] {
            None => {
                let c = &r.cavities[i];
                let channels = c
                    .links
                    .iter()
                    .map(|&l| channel_index(l, m, n))
                    .collect::<Result<Vec<_>>>()?;
                i += 1;
                embed_channels(&cavity_system(&c.spec)?, &channels, total)?
            }
            Some(b) => {
                i += 2;
                pair_unit(r, b, m, n)?
            }
        };
        bank = series(&unit, &bank)?;
    }
    let ports: Vec<usize> = (m..total).collect();
    let closed = close_feedback(&bank, &ports, &r.feedback_gain)?;
    let pre = static_system(r.pre_network.clone())?;
    let post = static_system(r.post_network.clone())?;
    series(&post, &series(&closed, &pre)?)
}

/// Upstream cavity, mixer, downstream cavity, on the full channel set.
fn pair_unit<T: Real>(r: &FeedbackRealization<T>, b: usize, m: usize, n: usize) -> Result<GeneralLqss<T>> {
    let block = &r.pair_blocks[b];
    let total = m + n;
    let stage = |c: usize| -> Result<GeneralLqss<T>> {
        let cav = &r.cavities[c];
        let channels = cav
            .links
            .iter()
            .map(|&l| channel_index(l, m, n))
            .collect::<Result<Vec<_>>>()?;
        embed_channels(&cavity_system(&cav.spec)?, &channels, total)
    };
    let first = stage(block.cavities[0])?;
    let second = stage(block.cavities[1])?;
    let mixer = static_system(doubled_up(&block.mixer, &CMatrix::zeros(2, 2)))?;
    let channels: Vec<usize> = block.channels.to_vec();
    let mixer = embed_channels(&mixer, &channels, total)?;
    series(&second, &series(&mixer, &first)?)
}

/// Sample points `s = i w`: `count` log-spaced `w` in `[min, max]`, plus
/// `w = 0` when requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub include_zero: bool,
}

impl Default for FrequencySpec {
    fn default() -> Self {
        Self {
            min: 1e-2,
            max: 1e3,
            count: 20,
            include_zero: true,
        }
    }
}

impl FrequencySpec {
    pub fn omegas(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite()) {
            return Err(Error::Sampling(format!(
                "frequency range [{}, {}] must be positive and ordered",
                self.min, self.max
            )));
        }
        let mut out = Vec::with_capacity(self.count + 1);
        if self.include_zero {
            out.push(0.0);
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        match self.count {
            0 => {}
            1 => out.push(self.min),
            k => out.extend((0..k).map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp())),
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl StructuralCheck {
    fn new(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Sample points as `[re, im]`, after pole avoidance.
    pub frequencies: Vec<[f64; 2]>,
    pub per_frequency_errors: Vec<f64>,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub structural_checks: Vec<StructuralCheck>,
    pub verdict: Verdict,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Evaluates both transfer functions at `s = i w`, shifting `w` by a relative
/// [`POLE_JITTER`] step when either has a pole there.
fn sample_pair<T: Real>(
    a: &GeneralLqss<T>,
    b: &GeneralLqss<T>,
    omega: f64,
    scale: f64,
) -> Result<(Complex<f64>, CMatrix<T>, CMatrix<T>)> {
    let mut w = omega;
    for attempt in 0..JITTER_ATTEMPTS {
        let s = cplx(T::zero(), lit(w));
        match (a.transfer_function(s), b.transfer_function(s)) {
            (Ok(ga), Ok(gb)) => return Ok((Complex::new(0.0, w), ga, gb)),
            (Err(Error::PoleAt { .. }), _) | (_, Err(Error::PoleAt { .. })) => {
                let step = POLE_JITTER * (attempt + 1) as f64;
                w = if omega == 0.0 { step * scale } else { omega * (1.0 + step) };
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Err(Error::Sampling(format!("pole near s = {omega}i persists after jitter")))
}

/// Compares `G_source` and `G_realized` on the grid with error
/// `max |Ga - Gb| / max(1, max |Ga|)`.
pub fn verify_equivalence<T: Real>(
    source: &GeneralLqss<T>,
    realized: &GeneralLqss<T>,
    freq: &FrequencySpec,
    tol: f64,
) -> Result<EquivalenceReport> {
    if source.n_io() != realized.n_io() {
        return Err(Error::Dimension(format!(
            "source has {} channels, realization has {}",
            source.n_io(),
            realized.n_io()
        )));
    }
    let omegas = freq.omegas()?;
    let mut frequencies = Vec::with_capacity(omegas.len());
    let mut errors = Vec::with_capacity(omegas.len());
    let mut unitarity = 0.0f64;
    let id = identity::<T>(2 * source.n_io());
    for &w in &omegas {
        let (s, ga, gb) = sample_pair(source, realized, w, freq.min)?;
        let diff = to_f64(max_abs(&(&ga - &gb)));
        let norm = to_f64(max_abs(&ga)).max(1.0);
        frequencies.push([s.re, s.im]);
        errors.push(diff / norm);
        let gbn = to_f64(max_abs(&gb)).max(1.0);
        let res = to_f64(max_abs(&(flat(&gb) * &gb - &id)));
        unitarity = unitarity.max(res / (gbn * gbn));
    }
    let max_rel_error = errors.iter().copied().fold(0.0, f64::max);
    let valid = realized.validate(lit(crate::lqss::DEFAULT_TOL));
    let scale = to_f64(max_abs(&realized.s)).max(1.0);
    let structural_checks = vec![
        StructuralCheck::new("realized constraint violations", valid.violations.len() as f64, 0.0),
        StructuralCheck::new(
            "realized S Bogoliubov residual",
            to_f64(bogoliubov_residual(&realized.s)) / (scale * scale),
            UNITARITY_TOL,
        ),
        StructuralCheck::new("realized G flat-unitarity residual", unitarity, UNITARITY_TOL),
    ];
    let pass = max_rel_error <= tol && structural_checks.iter().all(|c| c.pass);
    Ok(EquivalenceReport {
        frequencies,
        per_frequency_errors: errors,
        max_rel_error,
        tolerance: tol,
        structural_checks,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}
