//! One entry point for all twelve encodings, driven by an `EncodingSpec`.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{self, CurvatureError, CurvatureNotion};
use crate::encoding::EncodingMatrix;
use crate::hypercore::{clique_expansion, clique_lifting, Input};
use crate::profiles;
use crate::randwalk::{self, WalkError, WalkScheme};
use crate::spectral::{self, LapeOptions, LaplacianKind, SignMode, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingKind {
    Ldp,
    HLdp,
    LcpFrc,
    LcpOrc,
    HcpFrc,
    HcpOrc,
    Rwpe,
    HRwpe,
    Lape,
    HLape,
    Lase,
    HLase,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 12] = [
        EncodingKind::Ldp,
        EncodingKind::HLdp,
        EncodingKind::LcpFrc,
        EncodingKind::LcpOrc,
        EncodingKind::HcpFrc,
        EncodingKind::HcpOrc,
        EncodingKind::Rwpe,
        EncodingKind::HRwpe,
        EncodingKind::Lape,
        EncodingKind::HLape,
        EncodingKind::Lase,
        EncodingKind::HLase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Ldp => "ldp",
            EncodingKind::HLdp => "h-ldp",
            EncodingKind::LcpFrc => "lcp-frc",
            EncodingKind::LcpOrc => "lcp-orc",
            EncodingKind::HcpFrc => "hcp-frc",
            EncodingKind::HcpOrc => "hcp-orc",
            EncodingKind::Rwpe => "rwpe",
            EncodingKind::HRwpe => "h-rwpe",
            EncodingKind::Lape => "lape",
            EncodingKind::HLape => "h-lape",
            EncodingKind::Lase => "lase",
            EncodingKind::HLase => "h-lase",
        }
    }

    /// Whether the encoding is defined on hypergraphs (as opposed to graphs).
    pub fn is_hypergraph_kind(self) -> bool {
        matches!(
            self,
            EncodingKind::HLdp | EncodingKind::HcpFrc | EncodingKind::HcpOrc | EncodingKind::HRwpe | EncodingKind::HLape | EncodingKind::HLase
        )
    }

    pub fn is_eigenvector_kind(self) -> bool {
        matches!(self, EncodingKind::Lape | EncodingKind::HLape)
    }

    fn uses_laplacian(self) -> bool {
        matches!(self, EncodingKind::Lape | EncodingKind::HLape | EncodingKind::Lase | EncodingKind::HLase)
    }

    fn uses_k(self) -> bool {
        self.uses_laplacian() || matches!(self, EncodingKind::Rwpe | EncodingKind::HRwpe)
    }

    fn uses_scheme(self) -> bool {
        matches!(self, EncodingKind::Rwpe | EncodingKind::HRwpe | EncodingKind::LcpOrc | EncodingKind::HcpOrc)
    }

    pub fn default_laplacian(self) -> Option<LaplacianKind> {
        match self {
            EncodingKind::Lape | EncodingKind::Lase => Some(LaplacianKind::GraphNormalized),
            EncodingKind::HLape => Some(LaplacianKind::HypergraphHodgeNode),
            EncodingKind::HLase => Some(LaplacianKind::HypergraphNormalized),
            _ => None,
        }
    }

    /// Comparison tolerance: eigenvector encodings carry solver noise.
    pub fn default_tolerance(self) -> f64 {
        if self.is_eigenvector_kind() {
            1e-6
        } else {
            1e-9
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingKind {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        EncodingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| EncodeError::BadSpec(format!("unknown encoding kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AutoConvert {
    #[default]
    None,
    /// Clique-lift graph inputs before hypergraph encodings.
    Lift,
    /// Clique-expand hypergraph inputs before graph encodings.
    Expand,
}

impl AutoConvert {
    pub fn name(self) -> &'static str {
        match self {
            AutoConvert::None => "none",
            AutoConvert::Lift => "lift",
            AutoConvert::Expand => "expand",
        }
    }
}

impl FromStr for AutoConvert {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(AutoConvert::None),
            "lift" => Ok(AutoConvert::Lift),
            "expand" => Ok(AutoConvert::Expand),
            _ => Err(EncodeError::BadSpec(format!("unknown conversion `{s}` (expected none|lift|expand)"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("{0}")]
    BadSpec(String),
    #[error("incompatible spec: {0}")]
    IncompatibleSpec(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

impl EncodeError {
    /// Errors caused by the spec not fitting the input (as opposed to a
    /// numerical failure).
    pub fn is_incompatibility(&self) -> bool {
        match self {
            EncodeError::BadSpec(_) | EncodeError::IncompatibleSpec(_) => true,
            EncodeError::Spectral(e) => !matches!(e, SpectralError::ConvergenceFailure { .. }),
            EncodeError::Walk(_) => true,
            EncodeError::Curvature(e) => matches!(
                e,
                CurvatureError::IncompatibleNotion { .. } | CurvatureError::UnknownNotion(_) | CurvatureError::Walk(_)
            ),
        }
    }
}

/// Which encoding to compute and with what parameters. Unset fields take
/// kind-specific defaults at encode time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub kind: EncodingKind,
    pub k: Option<usize>,
    pub scheme: Option<WalkScheme>,
    pub laplacian: Option<LaplacianKind>,
    pub sign_mode: SignMode,
    pub skip_trivial: bool,
    pub auto_convert: AutoConvert,
}

pub const DEFAULT_WALK_STEPS: usize = 19;

impl EncodingSpec {
    pub fn new(kind: EncodingKind) -> Self {
        EncodingSpec {
            kind,
            k: None,
            scheme: None,
            laplacian: None,
            sign_mode: SignMode::Canonical,
            skip_trivial: false,
            auto_convert: AutoConvert::None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_scheme(mut self, scheme: WalkScheme) -> Self {
        self.scheme = Some(scheme);
        self
    }

    pub fn with_laplacian(mut self, kind: LaplacianKind) -> Self {
        self.laplacian = Some(kind);
        self
    }

    pub fn with_auto_convert(mut self, c: AutoConvert) -> Self {
        self.auto_convert = c;
        self
    }

    /// Parses `kind[:key=value]*` with keys `k`, `scheme`, `laplacian`,
    /// `sign` (canonical|random), `seed`, `skip-trivial` and `convert`.
    pub fn parse(text: &str) -> Result<Self, EncodeError> {
        let mut parts = text.split(':');
        let kind: EncodingKind = parts.next().unwrap_or("").trim().parse()?;
        let mut spec = EncodingSpec::new(kind);
        let mut random = false;
        let mut seed = 0u64;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| EncodeError::BadSpec(format!("expected key=value, got `{part}`")))?;
            let bad = |what: &str| EncodeError::BadSpec(format!("bad {what} `{value}`"));
            match key.trim() {
                "k" => spec.k = Some(value.parse().map_err(|_| bad("k"))?),
                "scheme" => spec.scheme = Some(value.parse()?),
                "laplacian" => spec.laplacian = Some(value.parse()?),
                "sign" => match value {
                    "canonical" => random = false,
                    "random" => random = true,
                    _ => return Err(bad("sign mode")),
                },
                "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
                "skip-trivial" => spec.skip_trivial = value.parse().map_err(|_| bad("skip-trivial flag"))?,
                "convert" => spec.auto_convert = value.parse()?,
                other => return Err(EncodeError::BadSpec(format!("unknown spec key `{other}`"))),
            }
        }
        if random {
            spec.sign_mode = SignMode::Random(seed);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Rejects parameters that do not belong to the kind.
    pub fn validate(&self) -> Result<(), EncodeError> {
        let kind = self.kind;
        let incompatible = |msg: String| Err(EncodeError::IncompatibleSpec(msg));
        if self.k.is_some() && !kind.uses_k() {
            return incompatible(format!("`{kind}` takes no k"));
        }
        if let Some(s) = self.scheme {
            if !kind.uses_scheme() {
                return incompatible(format!("`{kind}` takes no walk scheme"));
            }
            let hyper = matches!(kind, EncodingKind::HRwpe | EncodingKind::HcpOrc);
            if hyper != s.is_hypergraph_scheme() && kind != EncodingKind::Rwpe {
                return incompatible(format!("scheme `{s}` does not fit `{kind}`"));
            }
        }
        if kind == EncodingKind::HRwpe && self.scheme.is_none() {
            return incompatible("h-rwpe needs a walk scheme (en|ee|we)".into());
        }
        if let Some(l) = self.laplacian {
            if !kind.uses_laplacian() {
                return incompatible(format!("`{kind}` takes no Laplacian"));
            }
            if l.is_graph_kind() == kind.is_hypergraph_kind() {
                return incompatible(format!("Laplacian `{l}` does not fit `{kind}`"));
            }
            if kind.is_eigenvector_kind() && !l.is_symmetric() {
                return Err(SpectralError::AsymmetricKind(l).into());
            }
        }
        if (self.sign_mode != SignMode::Canonical || self.skip_trivial) && !kind.is_eigenvector_kind() {
            return incompatible(format!("`{kind}` has no eigenvector sign or trivial-vector options"));
        }
        Ok(())
    }

    pub fn laplacian_or_default(&self) -> Option<LaplacianKind> {
        self.laplacian.or(self.kind.default_laplacian())
    }
}

impl fmt::Display for EncodingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(k) = self.k {
            write!(f, ":k={k}")?;
        }
        if let Some(s) = self.scheme {
            write!(f, ":scheme={s}")?;
        }
        if let Some(l) = self.laplacian {
            write!(f, ":laplacian={l}")?;
        }
        if let SignMode::Random(seed) = self.sign_mode {
            write!(f, ":sign=random:seed={seed}")?;
        }
        if self.skip_trivial {
            f.write_str(":skip-trivial=true")?;
        }
        if self.auto_convert != AutoConvert::None {
            write!(f, ":convert={}", self.auto_convert.name())?;
        }
        Ok(())
    }
}

impl FromStr for EncodingSpec {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EncodingSpec::parse(s)
    }
}

/// Applies the spec's auto-conversion and checks the input domain.
pub fn prepare<'a>(input: &'a Input, spec: &EncodingSpec) -> Result<Cow<'a, Input>, EncodeError> {
    let wants_hyper = spec.kind.is_hypergraph_kind();
    match (input, wants_hyper, spec.auto_convert) {
        (Input::Graph(_), false, _) | (Input::Hypergraph(_), true, _) => Ok(Cow::Borrowed(input)),
        (Input::Graph(g), true, AutoConvert::Lift) => Ok(Cow::Owned(clique_lifting(g).into())),
        (Input::Hypergraph(h), false, AutoConvert::Expand) => Ok(Cow::Owned(clique_expansion(h).into())),
        (i, _, _) => Err(EncodeError::IncompatibleSpec(format!(
            "`{}` needs a {} input but got a {} (try --auto-convert {})",
            spec.kind,
            if wants_hyper { "hypergraph" } else { "graph" },
            i.domain_name(),
            if wants_hyper { "lift" } else { "expand" },
        ))),
    }
}

/// Computes `spec` on `input`. Without an explicit `k`, walks take 19
/// steps, LAPE takes one eigenvector and LASE the whole spectrum.
pub fn encode(input: &Input, spec: &EncodingSpec) -> Result<EncodingMatrix, EncodeError> {
    spec.validate()?;
    let prepared = prepare(input, spec)?;
    let input = prepared.as_ref();
    let m = match spec.kind {
        EncodingKind::Ldp => match input {
            Input::Graph(g) => profiles::ldp(g),
            Input::Hypergraph(_) => unreachable!("checked by prepare"),
        },
        EncodingKind::HLdp => match input {
            Input::Hypergraph(h) => profiles::hldp(h),
            Input::Graph(_) => unreachable!("checked by prepare"),
        },
        EncodingKind::LcpFrc => curvature::curvature_profile(input, CurvatureNotion::Frc, None)?,
        EncodingKind::LcpOrc => curvature::curvature_profile(input, CurvatureNotion::Orc, None)?,
        EncodingKind::HcpFrc => curvature::curvature_profile(input, CurvatureNotion::HFrc, None)?,
        EncodingKind::HcpOrc => curvature::curvature_profile(input, CurvatureNotion::HOrc, spec.scheme)?,
        EncodingKind::Rwpe | EncodingKind::HRwpe => {
            let scheme = spec.scheme.unwrap_or(WalkScheme::GraphUniform);
            randwalk::rwpe(input, scheme, spec.k.unwrap_or(DEFAULT_WALK_STEPS))?
        }
        EncodingKind::Lape | EncodingKind::HLape => {
            let opts = LapeOptions { sign_mode: spec.sign_mode, skip_trivial: spec.skip_trivial, ..LapeOptions::default() };
            let lap = spec.laplacian_or_default().expect("spectral kind");
            spectral::lape_with(input, lap, spec.k.unwrap_or(1), &opts)?
        }
        EncodingKind::Lase | EncodingKind::HLase => {
            let lap = spec.laplacian_or_default().expect("spectral kind");
            let k = match spec.k {
                Some(k) => k,
                None => spectral::build_laplacian(input, lap)?.nrows(),
            };
            spectral::lase(input, lap, k)?
        }
    };
    let mut m = m;
    m.kind = spec.kind.name().to_string();
    if spec.auto_convert != AutoConvert::None {
        m = m.with_param("convert", spec.auto_convert.name());
    }
    Ok(m)
}
