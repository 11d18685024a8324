//! On-disk formats: system, netlist, static-matrix and report documents.
//!
//! Every file is a JSON object with a `format_version` field. Complex
//! numbers are `[re, im]` pairs and matrices are row-major nested arrays of
//! such pairs. Floats are written in shortest round-trip form, so writing a
//! parsed file reproduces it byte for byte.
//!
//! Static matrices inside netlists (pre/post networks, feedback gain) are
//! stored in doubled-up `2m x 2m` form for both system modes; pair-block
//! mixers are plain `2 x 2` unitaries.

use lqss_core::krein::schur::EigenOrdering;
use lqss_core::serde_cmatrix::{from_rows, to_rows};
use lqss_core::{
    decompose_static, reck_decompose, CascadeRealization, Channel, ComplexMatrix, EquivalenceReport,
    FeedbackRealization, FreeParams, GeneralSystem, PairBlock, PassiveSystem, PlacedCavity, SpectrumAudit,
    StaticDecomposition, SystemKind,
};
use nalgebra::Complex;
use serde::de::{DeserializeOwned, Error as _};
use regex::Regex;
use serde::{Deserialize, Deserializer, Serialize};
use std::sync::LazyLock;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// Rectangular complex matrix as nested `[re, im]` rows. Ragged input is
/// rejected while parsing, so the error carries the file position.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MatrixData(pub Vec<Vec<[f64; 2]>>);

impl<'de> Deserialize<'de> for MatrixData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        if let Some(first) = rows.first() {
            if let Some(i) = rows.iter().position(|r| r.len() != first.len()) {
                return Err(D::Error::custom(format!(
                    "ragged matrix: row {i} has {} entries, row 0 has {}",
                    rows[i].len(),
                    first.len()
                )));
            }
        }
        Ok(MatrixData(rows))
    }
}

impl MatrixData {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixData(to_rows(m))
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        from_rows(&self.0, None).expect("rectangularity checked while parsing")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.0.len(), self.0.first().map_or(0, Vec::len))
    }

    /// Matrix with the given shape, or a parse error naming `field`.
    fn expect(&self, field: &str, rows: usize, cols: usize) -> Result<ComplexMatrix, CliError> {
        let (r, c) = self.shape();
        // An empty row list carries no column count.
        if (r, c) != (rows, cols) && !(r == 0 && rows == 0) {
            return Err(CliError::Parse(format!("field `{field}`: expected {rows}x{cols}, found {r}x{c}")));
        }
        Ok(if r == 0 { ComplexMatrix::zeros(rows, cols) } else { self.to_matrix() })
    }
}

/// Parses a document, reporting syntax and shape errors with their position.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

pub fn read<T: DeserializeOwned>(path: &std::path::Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {what} {}: {e}", path.display())))?;
    parse(&text, &format!("{what} {}", path.display()))
}

static NUMBER_PAIR: LazyLock<Regex> = LazyLock::new(|| {
    let num = r"(-?[0-9][0-9.eE+-]*)";
    Regex::new(&format!(r"\[\n\s*{num},\n\s*{num}\n\s*\]")).expect("valid pattern")
});

/// Canonical text: two-space indentation with numeric pairs kept on one
/// line, and a trailing newline.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let pretty = serde_json::to_string_pretty(doc).expect("documents serialize");
    let mut s = NUMBER_PAIR.replace_all(&pretty, "[$1, $2]").into_owned();
    s.push('\n');
    s
}

fn check_version(v: u32, what: &str) -> Result<(), CliError> {
    if v != FORMAT_VERSION {
        return Err(CliError::Parse(format!("{what}: unsupported format_version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

fn upper(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (r, c) = (m.nrows() / 2, m.ncols() / 2);
    (m.view((0, 0), (r, c)).into_owned(), m.view((0, c), (r, c)).into_owned())
}

/// A parsed system in its declared mode.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedSystem {
    Passive(PassiveSystem),
    General(GeneralSystem),
}

impl LoadedSystem {
    pub fn kind(&self) -> SystemKind {
        match self {
            LoadedSystem::Passive(_) => SystemKind::Passive,
            LoadedSystem::General(_) => SystemKind::General,
        }
    }

    /// Doubled-up form, used for verification.
    pub fn general(&self) -> GeneralSystem {
        match self {
            LoadedSystem::Passive(p) => p.embed(),
            LoadedSystem::General(g) => g.clone(),
        }
    }

    pub fn n_io(&self) -> usize {
        match self {
            LoadedSystem::Passive(p) => p.n_io(),
            LoadedSystem::General(g) => g.n_io(),
        }
    }

    pub fn n_modes(&self) -> usize {
        match self {
            LoadedSystem::Passive(p) => p.n_modes(),
            LoadedSystem::General(g) => g.n_modes(),
        }
    }
}

/// `(S, N, M)`. Passive files hold `S`, `N`, `M`; general files hold the
/// upper blocks `S1, S2, N1, N2, M1, M2` of the doubled-up matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub format_version: u32,
    pub mode: SystemKind,
    pub n_modes: usize,
    pub n_io: usize,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixData>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<MatrixData>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<MatrixData>,
    #[serde(rename = "S1", default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<MatrixData>,
    #[serde(rename = "S2", default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<MatrixData>,
    #[serde(rename = "N1", default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<MatrixData>,
    #[serde(rename = "N2", default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<MatrixData>,
    #[serde(rename = "M1", default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<MatrixData>,
    #[serde(rename = "M2", default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<MatrixData>,
}

fn required<'a>(field: &'a Option<MatrixData>, name: &str, mode: &str) -> Result<&'a MatrixData, CliError> {
    field
        .as_ref()
        .ok_or_else(|| CliError::Parse(format!("{mode} system file is missing field `{name}`")))
}

fn forbid(fields: &[(&Option<MatrixData>, &str)], mode: &str) -> Result<(), CliError> {
    match fields.iter().find(|(f, _)| f.is_some()) {
        Some((_, name)) => Err(CliError::Parse(format!("field `{name}` is not used by {mode} system files"))),
        None => Ok(()),
    }
}

impl SystemFile {
    pub fn from_passive(sys: &PassiveSystem) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            mode: SystemKind::Passive,
            n_modes: sys.n_modes(),
            n_io: sys.n_io(),
            s: Some(MatrixData::from_matrix(&sys.s)),
            n: Some(MatrixData::from_matrix(&sys.n)),
            m: Some(MatrixData::from_matrix(&sys.m)),
            s1: None,
            s2: None,
            n1: None,
            n2: None,
            m1: None,
            m2: None,
        }
    }

    pub fn from_general(sys: &GeneralSystem) -> Self {
        let [(s1, s2), (n1, n2), (m1, m2)] = [upper(&sys.s), upper(&sys.n), upper(&sys.m)];
        let d = |m: &ComplexMatrix| Some(MatrixData::from_matrix(m));
        Self {
            format_version: FORMAT_VERSION,
            mode: SystemKind::General,
            n_modes: sys.n_modes(),
            n_io: sys.n_io(),
            s: None,
            n: None,
            m: None,
            s1: d(&s1),
            s2: d(&s2),
            n1: d(&n1),
            n2: d(&n2),
            m1: d(&m1),
            m2: d(&m2),
        }
    }

    /// Builds the system after checking the version and every shape.
    pub fn to_system(&self) -> Result<LoadedSystem, CliError> {
        check_version(self.format_version, "system file")?;
        let (n, m) = (self.n_modes, self.n_io);
        let shape_err = |e: lqss_core::Error| CliError::Parse(e.to_string());
        match self.mode {
            SystemKind::Passive => {
                forbid(
                    &[
                        (&self.s1, "S1"),
                        (&self.s2, "S2"),
                        (&self.n1, "N1"),
                        (&self.n2, "N2"),
                        (&self.m1, "M1"),
                        (&self.m2, "M2"),
                    ],
                    "passive",
                )?;
                let s = required(&self.s, "S", "passive")?.expect("S", m, m)?;
                let nm = required(&self.n, "N", "passive")?.expect("N", m, n)?;
                let mm = required(&self.m, "M", "passive")?.expect("M", n, n)?;
                Ok(LoadedSystem::Passive(PassiveSystem::new(s, nm, mm).map_err(shape_err)?))
            }
            SystemKind::General => {
                forbid(&[(&self.s, "S"), (&self.n, "N"), (&self.m, "M")], "general")?;
                let block = |f: &Option<MatrixData>, name: &str, r: usize, c: usize| {
                    required(f, name, "general")?.expect(name, r, c)
                };
                let sys = GeneralSystem::from_blocks(
                    &block(&self.s1, "S1", m, m)?,
                    &block(&self.s2, "S2", m, m)?,
                    &block(&self.n1, "N1", m, n)?,
                    &block(&self.n2, "N2", m, n)?,
                    &block(&self.m1, "M1", n, n)?,
                    &block(&self.m2, "M2", n, n)?,
                )
                .map_err(shape_err)?;
                Ok(LoadedSystem::General(sys))
            }
        }
    }
}

/// A static matrix to decompose: `S` for passive, `S1, S2` for general.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticFile {
    pub format_version: u32,
    pub mode: SystemKind,
    pub n_io: usize,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixData>,
    #[serde(rename = "S1", default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<MatrixData>,
    #[serde(rename = "S2", default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<MatrixData>,
}

impl StaticFile {
    /// The matrix in the form the decompositions take: `m x m` for passive,
    /// doubled-up `2m x 2m` for general.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        check_version(self.format_version, "static file")?;
        let m = self.n_io;
        match self.mode {
            SystemKind::Passive => {
                forbid(&[(&self.s1, "S1"), (&self.s2, "S2")], "passive")?;
                required(&self.s, "S", "passive")?.expect("S", m, m)
            }
            SystemKind::General => {
                forbid(&[(&self.s, "S")], "general")?;
                let s1 = required(&self.s1, "S1", "general")?.expect("S1", m, m)?;
                let s2 = required(&self.s2, "S2", "general")?.expect("S2", m, m)?;
                Ok(lqss_core::doubled_up(&s1, &s2))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetlistKind {
    Cascade,
    Feedback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockRole {
    Pre,
    Post,
}

/// A static network given either as a doubled-up matrix or as a list of
/// elementary devices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticBlock {
    pub role: BlockRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<StaticDecomposition>,
}

impl StaticBlock {
    fn new(role: BlockRole, doubled: &ComplexMatrix, kind: SystemKind, decompose: bool) -> Result<Self, CliError> {
        if !decompose {
            return Ok(Self {
                role,
                matrix: Some(MatrixData::from_matrix(doubled)),
                decomposition: None,
            });
        }
        let d = match kind {
            SystemKind::Passive => reck_decompose(&upper(doubled).0),
            SystemKind::General => decompose_static(doubled),
        }
        .map_err(CliError::Synthesis)?;
        Ok(Self {
            role,
            matrix: None,
            decomposition: Some(d),
        })
    }

    /// Doubled-up matrix of the block.
    pub fn doubled(&self, channels: usize) -> Result<ComplexMatrix, CliError> {
        let m = match (&self.matrix, &self.decomposition) {
            (Some(m), None) => m.to_matrix(),
            (None, Some(d)) => d.doubled_matrix(),
            _ => {
                return Err(CliError::Parse(format!(
                    "{:?} block needs exactly one of `matrix` and `decomposition`",
                    self.role
                )))
            }
        };
        if m.shape() != (2 * channels, 2 * channels) {
            return Err(CliError::Parse(format!(
                "{:?} block is {}x{}, expected {}x{}",
                self.role,
                m.nrows(),
                m.ncols(),
                2 * channels,
                2 * channels
            )));
        }
        Ok(m)
    }
}

/// Two identical cavities in series with a `2 x 2` mixer between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetlistPair {
    pub cavities: [usize; 2],
    pub channels: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixer: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixer_decomposition: Option<StaticDecomposition>,
}

/// Data that is not needed to assemble the network but documents how it was
/// obtained: ordering, spectrum and the intermediate matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Audit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<EigenOrdering>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_order: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumAudit>,
    pub state_transform: MatrixData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_hat: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_hat: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_bar: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<MatrixData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetlistFile {
    pub format_version: u32,
    pub kind: NetlistKind,
    pub mode: SystemKind,
    pub n_modes: usize,
    pub n_io: usize,
    pub static_blocks: Vec<StaticBlock>,
    /// Cascade: in the order the field passes through them. Feedback:
    /// cavity `i` holds mode `i`.
    pub cavities: Vec<PlacedCavity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pair_blocks: Vec<NetlistPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback_gain: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_params: Option<FreeParams>,
    pub audit: Audit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<EquivalenceReport>,
}

/// A netlist turned back into a realization.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Cascade(CascadeRealization),
    Feedback(Box<FeedbackRealization>),
}

impl Realization {
    pub fn assemble(&self) -> lqss_core::Result<GeneralSystem> {
        match self {
            Realization::Cascade(r) => lqss_core::assemble_cascade(r),
            Realization::Feedback(r) => lqss_core::assemble_feedback(r),
        }
    }
}

fn pairs(list: &[Complex<f64>]) -> Vec<[f64; 2]> {
    list.iter().map(|z| [z.re, z.im]).collect()
}

fn audit_matrix(m: &Option<MatrixData>, name: &str) -> Result<ComplexMatrix, CliError> {
    m.as_ref()
        .map(MatrixData::to_matrix)
        .ok_or_else(|| CliError::Parse(format!("feedback netlist is missing audit field `{name}`")))
}

impl NetlistFile {
    pub fn from_cascade(r: &CascadeRealization, decompose: bool) -> Result<Self, CliError> {
        let m = r.n_io();
        let cavities = r
            .cavities
            .iter()
            .map(|spec| PlacedCavity {
                spec: spec.clone(),
                links: (0..m).map(Channel::System).collect(),
            })
            .collect();
        Ok(Self {
            format_version: FORMAT_VERSION,
            kind: NetlistKind::Cascade,
            mode: r.kind,
            n_modes: r.cavities.len(),
            n_io: m,
            static_blocks: vec![StaticBlock::new(BlockRole::Pre, &r.pre_network, r.kind, decompose)?],
            cavities,
            pair_blocks: Vec::new(),
            feedback_gain: None,
            free_params: None,
            audit: Audit {
                ordering: Some(r.ordering.clone()),
                eigen_order: Some(pairs(&r.eigen_order)),
                spectrum: None,
                state_transform: MatrixData::from_matrix(&r.transform),
                n_hat: None,
                m_hat: None,
                m_bar: None,
                x: None,
            },
            report: None,
        })
    }

    pub fn from_feedback(r: &FeedbackRealization, decompose: bool) -> Result<Self, CliError> {
        let pair_blocks = r
            .pair_blocks
            .iter()
            .map(|b| {
                let (mixer, mixer_decomposition) = if decompose {
                    (None, Some(reck_decompose(&b.mixer).map_err(CliError::Synthesis)?))
                } else {
                    (Some(MatrixData::from_matrix(&b.mixer)), None)
                };
                Ok(NetlistPair {
                    cavities: b.cavities,
                    channels: b.channels,
                    mixer,
                    mixer_decomposition,
                })
            })
            .collect::<Result<_, CliError>>()?;
        let d = |m: &ComplexMatrix| Some(MatrixData::from_matrix(m));
        Ok(Self {
            format_version: FORMAT_VERSION,
            kind: NetlistKind::Feedback,
            mode: r.kind,
            n_modes: r.n_modes(),
            n_io: r.n_io(),
            static_blocks: vec![
                StaticBlock::new(BlockRole::Pre, &r.pre_network, r.kind, decompose)?,
                StaticBlock::new(BlockRole::Post, &r.post_network, r.kind, decompose)?,
            ],
            cavities: r.cavities.clone(),
            pair_blocks,
            feedback_gain: d(&r.feedback_gain),
            free_params: Some(r.free_params.clone()),
            audit: Audit {
                ordering: None,
                eigen_order: None,
                spectrum: Some(r.spectrum.clone()),
                state_transform: MatrixData::from_matrix(&r.state_transform),
                n_hat: d(&r.n_hat),
                m_hat: d(&r.m_hat),
                m_bar: d(&r.m_bar),
                x: d(&r.x),
            },
            report: None,
        })
    }

    fn block(&self, role: BlockRole) -> Result<ComplexMatrix, CliError> {
        let mut found = self.static_blocks.iter().filter(|b| b.role == role);
        match (found.next(), found.next()) {
            (Some(b), None) => b.doubled(self.n_io),
            _ => Err(CliError::Parse(format!("netlist needs exactly one {role:?} static block"))),
        }
    }

    pub fn to_realization(&self) -> Result<Realization, CliError> {
        check_version(self.format_version, "netlist")?;
        if self.cavities.len() != self.n_modes {
            return Err(CliError::Parse(format!(
                "netlist declares {} modes but lists {} cavities",
                self.n_modes,
                self.cavities.len()
            )));
        }
        let pre_network = self.block(BlockRole::Pre)?;
        let state_transform = self.audit.state_transform.to_matrix();
        match self.kind {
            NetlistKind::Cascade => Ok(Realization::Cascade(CascadeRealization {
                kind: self.mode,
                pre_network,
                cavities: self.cavities.iter().map(|c| c.spec.clone()).collect(),
                transform: state_transform,
                ordering: self.audit.ordering.clone().unwrap_or_default(),
                eigen_order: self
                    .audit
                    .eigen_order
                    .iter()
                    .flatten()
                    .map(|&[re, im]| Complex::new(re, im))
                    .collect(),
            })),
            NetlistKind::Feedback => {
                let pair_blocks = self
                    .pair_blocks
                    .iter()
                    .map(|p| {
                        let mixer = match (&p.mixer, &p.mixer_decomposition) {
                            (Some(m), None) => m.to_matrix(),
                            (None, Some(d)) => d.matrix(),
                            _ => {
                                return Err(CliError::Parse(
                                    "pair block needs exactly one of `mixer` and `mixer_decomposition`".into(),
                                ))
                            }
                        };
                        if mixer.shape() != (2, 2) {
                            return Err(CliError::Parse(format!("pair block mixer is {:?}, expected 2x2", mixer.shape())));
                        }
                        Ok(PairBlock {
                            cavities: p.cavities,
                            channels: p.channels,
                            mixer,
                        })
                    })
                    .collect::<Result<_, _>>()?;
                let gain = self
                    .feedback_gain
                    .as_ref()
                    .ok_or_else(|| CliError::Parse("feedback netlist is missing `feedback_gain`".into()))?
                    .expect("feedback_gain", 2 * self.n_modes, 2 * self.n_modes)?;
                let spectrum = self
                    .audit
                    .spectrum
                    .clone()
                    .ok_or_else(|| CliError::Parse("feedback netlist is missing audit field `spectrum`".into()))?;
                Ok(Realization::Feedback(Box::new(FeedbackRealization {
                    kind: self.mode,
                    pre_network,
                    post_network: self.block(BlockRole::Post)?,
                    cavities: self.cavities.clone(),
                    pair_blocks,
                    feedback_gain: gain,
                    free_params: self.free_params.clone().unwrap_or_else(|| FreeParams::standard(self.n_modes)),
                    spectrum,
                    state_transform,
                    n_hat: audit_matrix(&self.audit.n_hat, "n_hat")?,
                    m_hat: audit_matrix(&self.audit.m_hat, "m_hat")?,
                    m_bar: audit_matrix(&self.audit.m_bar, "m_bar")?,
                    x: audit_matrix(&self.audit.x, "x")?,
                })))
            }
        }
    }
}

/// Machine-readable summary of one command run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub command: String,
    pub exit_code: i32,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<EquivalenceReport>,
}

/// `G(s)` samples written by the `transfer` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferFile {
    pub format_version: u32,
    pub mode: SystemKind,
    pub n_io: usize,
    pub samples: Vec<TransferSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSample {
    pub s: [f64; 2],
    #[serde(rename = "G")]
    pub g: MatrixData,
}

/// Output of the `decompose-static` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format_version: u32,
    pub decomposition: StaticDecomposition,
}
