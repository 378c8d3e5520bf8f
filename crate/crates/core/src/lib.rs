//! Structural and positional encodings for graphs and hypergraphs, and
//! tools for checking whether an encoding tells two inputs apart.
//!
//! Inputs are [`Graph`]s or [`Hypergraph`]s (see [`hypercore`]); every
//! encoding is produced as an [`EncodingMatrix`] with one row per node.
//! [`encode::encode`] dispatches on an [`EncodingSpec`], and
//! [`distinguish::compare`] decides whether two encodings differ up to
//! row permutation.

pub mod curvature;
pub mod distinguish;
pub mod encode;
pub mod encoding;
pub mod fixtures;
pub mod format;
pub mod hypercore;
pub mod lanczos;
pub mod profiles;
pub mod randwalk;
pub mod sparse;
pub mod spectral;
pub mod stats;

pub use distinguish::{compare, CompareOptions, ComparisonReport, Verdict};
pub use encode::{encode, AutoConvert, EncodingKind, EncodingSpec};
pub use encoding::EncodingMatrix;
pub use hypercore::{Graph, Hypergraph, Input};
pub use randwalk::WalkScheme;
pub use spectral::{LaplacianKind, SignMode};
