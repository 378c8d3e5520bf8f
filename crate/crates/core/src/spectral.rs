//! Graph and hypergraph Laplacians, their spectra, and the eigenvector
//! (LAPE) and eigenvalue (LASE) encodings built on them.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{ColumnFlag, EncodingMatrix};
use crate::hypercore::{Graph, Hypergraph, Input};
use crate::lanczos::{self, LanczosOptions};
use crate::randwalk::{self, WalkScheme};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LaplacianKind {
    /// `D − A`
    GraphStandard,
    /// `I − D^{-1/2} A D^{-1/2}`
    GraphNormalized,
    /// `I − D⁻¹A`
    GraphRandomWalk,
    /// `B1 B1ᵀ`, node × node.
    HypergraphHodgeNode,
    /// `B1ᵀ B1`, hyperedge × hyperedge.
    HypergraphHodgeEdge,
    /// `I − Dv^{-1/2} B1 De⁻¹ B1ᵀ Dv^{-1/2}`
    HypergraphNormalized,
    /// `I − P` for the EE walk.
    HypergraphRandomWalk,
}

impl LaplacianKind {
    pub const ALL: [LaplacianKind; 7] = [
        LaplacianKind::GraphStandard,
        LaplacianKind::GraphNormalized,
        LaplacianKind::GraphRandomWalk,
        LaplacianKind::HypergraphHodgeNode,
        LaplacianKind::HypergraphHodgeEdge,
        LaplacianKind::HypergraphNormalized,
        LaplacianKind::HypergraphRandomWalk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LaplacianKind::GraphStandard => "graph-standard",
            LaplacianKind::GraphNormalized => "graph-normalized",
            LaplacianKind::GraphRandomWalk => "graph-rw",
            LaplacianKind::HypergraphHodgeNode => "hodge-node",
            LaplacianKind::HypergraphHodgeEdge => "hodge-edge",
            LaplacianKind::HypergraphNormalized => "hyper-normalized",
            LaplacianKind::HypergraphRandomWalk => "hyper-rw",
        }
    }

    pub fn is_symmetric(self) -> bool {
        !matches!(self, LaplacianKind::GraphRandomWalk | LaplacianKind::HypergraphRandomWalk)
    }

    pub fn is_graph_kind(self) -> bool {
        matches!(
            self,
            LaplacianKind::GraphStandard | LaplacianKind::GraphNormalized | LaplacianKind::GraphRandomWalk
        )
    }
}

impl fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LaplacianKind {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LaplacianKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| SpectralError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("Laplacian `{kind}` does not apply to a {domain}")]
    IncompatibleKind { kind: LaplacianKind, domain: &'static str },
    #[error("Laplacian `{0}` is not symmetric; eigenvector encodings need a symmetric kind")]
    AsymmetricKind(LaplacianKind),
    #[error("Laplacian `{0}` is indexed by hyperedges, not nodes")]
    EdgeLevelKind(LaplacianKind),
    #[error("requested {k} eigenpairs of a {dim}-dimensional operator")]
    TooMany { k: usize, dim: usize },
    #[error("eigensolver converged on {found} of {wanted} eigenpairs")]
    ConvergenceFailure { found: usize, wanted: usize },
    #[error("unknown Laplacian kind `{0}`")]
    UnknownKind(String),
}

/// Solver knobs. The defaults are what the encodings use.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Largest dimension handled by the dense eigensolver.
    pub dense_limit: usize,
    /// Degeneracy threshold relative to the ∞-norm of the operator.
    pub tol_gap: f64,
    pub lanczos: LanczosOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { dense_limit: 2048, tol_gap: 1e-8, lanczos: LanczosOptions::default() }
    }
}

/// Symmetric operator sharing the spectrum of a Laplacian. For the
/// random-walk kinds this is the similar matrix `I − D^{-1/2} W D^{-1/2}`.
struct Operator {
    sym: CsrMatrix,
    zero_degree: Vec<usize>,
}

fn check_kind(input: &Input, kind: LaplacianKind) -> Result<(), SpectralError> {
    if let (Input::Hypergraph(_), true) = (input, kind.is_graph_kind()) {
        return Err(SpectralError::IncompatibleKind { kind, domain: "hypergraph" });
    }
    Ok(())
}

/// Hypergraph kinds take a graph as the 2-uniform hypergraph of its edges.
fn as_hypergraph(input: &Input) -> std::borrow::Cow<'_, Hypergraph> {
    match input {
        Input::Graph(g) => std::borrow::Cow::Owned(g.to_two_uniform()),
        Input::Hypergraph(h) => std::borrow::Cow::Borrowed(h),
    }
}

fn graph_of(input: &Input) -> &Graph {
    match input {
        Input::Graph(g) => g,
        Input::Hypergraph(_) => unreachable!("checked by check_kind"),
    }
}

fn inv_sqrt(d: &[f64]) -> Vec<f64> {
    d.iter().map(|&x| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }).collect()
}

fn identity_minus(m: &CsrMatrix) -> CsrMatrix {
    let n = m.nrows();
    let mut t: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, 1.0)).collect();
    for r in 0..n {
        t.extend(m.row(r).map(|(c, v)| (r, c, -v)));
    }
    CsrMatrix::from_triplets(n, n, t)
}

fn hodge_node(h: &Hypergraph) -> CsrMatrix {
    let n = h.node_count();
    let mut t = Vec::new();
    for e in h.hyperedges() {
        for &i in e {
            for &j in e {
                t.push((i, j, 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, t)
}

fn hodge_edge(h: &Hypergraph) -> CsrMatrix {
    let m = h.edge_count();
    let mut t = Vec::new();
    for v in 0..h.node_count() {
        let es = h.memberships(v);
        for &a in es {
            for &b in es {
                t.push((a, b, 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(m, m, t)
}

fn hyper_normalized(h: &Hypergraph) -> (CsrMatrix, Vec<usize>) {
    let n = h.node_count();
    let deg: Vec<f64> = (0..n).map(|v| h.degree(v) as f64).collect();
    let s = inv_sqrt(&deg);
    let mut t: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, 1.0)).collect();
    for e in h.hyperedges() {
        let w = 1.0 / e.len() as f64;
        for &i in e {
            for &j in e {
                t.push((i, j, -w * s[i] * s[j]));
            }
        }
    }
    let zero = (0..n).filter(|&v| deg[v] == 0.0).collect();
    (CsrMatrix::from_triplets(n, n, t), zero)
}

fn operator(input: &Input, kind: LaplacianKind) -> Result<Operator, SpectralError> {
    check_kind(input, kind)?;
    let n = input.node_count();
    let op = match kind {
        LaplacianKind::GraphStandard => {
            let g = graph_of(input);
            let mut t: Vec<(usize, usize, f64)> = (0..n).map(|i| (i, i, g.degree(i) as f64)).collect();
            for &(u, v) in g.edges() {
                t.push((u, v, -1.0));
                t.push((v, u, -1.0));
            }
            Operator { sym: CsrMatrix::from_triplets(n, n, t), zero_degree: Vec::new() }
        }
        LaplacianKind::GraphNormalized | LaplacianKind::GraphRandomWalk => {
            let w = randwalk::walk_weights(input, WalkScheme::GraphUniform).expect("graph input");
            let zero = (0..n).filter(|&i| w.d[i] == 0.0).collect();
            Operator { sym: identity_minus(&w.symmetric_normalized()), zero_degree: zero }
        }
        LaplacianKind::HypergraphRandomWalk => {
            let w = randwalk::walk_weights(input, WalkScheme::EqualEdges).expect("hypergraph scheme");
            let zero = (0..n).filter(|&i| w.d[i] == 0.0).collect();
            Operator { sym: identity_minus(&w.symmetric_normalized()), zero_degree: zero }
        }
        LaplacianKind::HypergraphHodgeNode => Operator { sym: hodge_node(&as_hypergraph(input)), zero_degree: Vec::new() },
        LaplacianKind::HypergraphHodgeEdge => Operator { sym: hodge_edge(&as_hypergraph(input)), zero_degree: Vec::new() },
        LaplacianKind::HypergraphNormalized => {
            let (sym, zero_degree) = hyper_normalized(&as_hypergraph(input));
            Operator { sym, zero_degree }
        }
    };
    Ok(op)
}

/// The Laplacian of `kind` as a dense matrix. Isolated nodes use the
/// pseudo-inverse convention (`D^{-1/2}` entry 0), which leaves a unit
/// diagonal in the normalized and random-walk kinds.
pub fn build_laplacian(input: &Input, kind: LaplacianKind) -> Result<DMatrix<f64>, SpectralError> {
    check_kind(input, kind)?;
    match kind {
        LaplacianKind::GraphRandomWalk | LaplacianKind::HypergraphRandomWalk => {
            let scheme = if kind == LaplacianKind::GraphRandomWalk {
                WalkScheme::GraphUniform
            } else {
                WalkScheme::EqualEdges
            };
            let p = randwalk::transition_matrix(input, scheme).expect("scheme matches domain").p;
            Ok(identity_minus(&p).to_dense())
        }
        _ => Ok(operator(input, kind)?.sym.to_dense()),
    }
}

/// Nodes with zero degree under `kind`'s normalization.
pub fn zero_degree_nodes(input: &Input, kind: LaplacianKind) -> Result<Vec<usize>, SpectralError> {
    Ok(operator(input, kind)?.zero_degree)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub kind: LaplacianKind,
    pub dimension: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm, sign-canonical columns aligned with `eigenvalues`. `None`
    /// for asymmetric kinds.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// Position `i` lies in a cluster of eigenvalues closer than the gap
    /// tolerance.
    pub degenerate: Vec<bool>,
    /// For degenerate positions: diagonal of the projector onto the whole
    /// cluster's eigenspace.
    pub projector_diagonals: Vec<Option<Vec<f64>>>,
    pub zero_degree_nodes: Vec<usize>,
    /// Absolute gap tolerance that was applied.
    pub gap_tolerance: f64,
}

pub fn spectrum(input: &Input, kind: LaplacianKind, k: usize) -> Result<SpectralDecomposition, SpectralError> {
    spectrum_with(input, kind, k, &SolverOptions::default())
}

pub fn spectrum_with(
    input: &Input,
    kind: LaplacianKind,
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectralDecomposition, SpectralError> {
    let op = operator(input, kind)?;
    let dim = op.sym.nrows();
    if k > dim {
        return Err(SpectralError::TooMany { k, dim });
    }
    let tol = opts.tol_gap * op.sym.inf_norm().max(f64::MIN_POSITIVE);
    let (vals, vecs) = lowest_closed(&op.sym, k, tol, opts)?;

    let clusters = clusters(&vals, tol);
    let mut degenerate = vec![false; k];
    let mut projectors = vec![None; k];
    for &(a, b) in &clusters {
        if b - a < 2 {
            continue;
        }
        let diag: Vec<f64> =
            (0..dim).map(|r| (a..b).map(|c| vecs[c][r] * vecs[c][r]).sum()).collect();
        for i in a..b.min(k) {
            degenerate[i] = true;
            if kind.is_symmetric() {
                projectors[i] = Some(diag.clone());
            }
        }
    }
    let eigenvectors = kind.is_symmetric().then(|| {
        vecs.iter()
            .take(k)
            .map(|v| {
                let mut v = v.clone();
                canonical_sign(&mut v);
                v
            })
            .collect()
    });
    Ok(SpectralDecomposition {
        kind,
        dimension: dim,
        eigenvalues: vals[..k].to_vec(),
        eigenvectors,
        degenerate,
        projector_diagonals: projectors,
        zero_degree_nodes: op.zero_degree,
        gap_tolerance: tol,
    })
}

/// Lowest eigenpairs, at least `k` of them and enough that the cluster
/// containing position `k − 1` is complete.
fn lowest_closed(
    a: &CsrMatrix,
    k: usize,
    tol: f64,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectralError> {
    let dim = a.nrows();
    if dim <= opts.dense_limit {
        return Ok(dense_eigen(a));
    }
    if k == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut want = (k + 1).min(dim);
    loop {
        let (vals, vecs) = lanczos::smallest_eigenpairs(a, want, &opts.lanczos)
            .map_err(|f| SpectralError::ConvergenceFailure { found: f.found, wanted: f.wanted })?;
        let open = want < dim && want >= 2 && vals[want - 1] - vals[want - 2] < tol;
        if !open {
            return Ok((vals, vecs));
        }
        want = (want * 2).min(dim);
    }
}

fn dense_eigen(a: &CsrMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = a.nrows();
    if dim == 0 {
        return (Vec::new(), Vec::new());
    }
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let vals = order.iter().map(|&c| eig.eigenvalues[c]).collect();
    let vecs = order.iter().map(|&c| eig.eigenvectors.column(c).iter().copied().collect()).collect();
    (vals, vecs)
}

/// Half-open index ranges of maximal runs with consecutive gaps `< tol`.
fn clusters(vals: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] >= tol {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Flips `v` so its largest-magnitude entry is positive; near-ties go to
/// the lowest index.
pub fn canonical_sign(v: &mut [f64]) {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak == 0.0 {
        return;
    }
    let lead = v.iter().position(|x| x.abs() >= peak * (1.0 - 1e-9)).unwrap();
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignMode {
    Canonical,
    /// Independent ±1 flip per column, drawn from the seed.
    Random(u64),
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignMode::Canonical => f.write_str("canonical"),
            SignMode::Random(seed) => write!(f, "random({seed})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LapeOptions {
    pub sign_mode: SignMode,
    /// Drop eigenvectors whose eigenvalue is within the gap tolerance of 0.
    pub skip_trivial: bool,
    pub solver: SolverOptions,
}

impl Default for LapeOptions {
    fn default() -> Self {
        LapeOptions { sign_mode: SignMode::Canonical, skip_trivial: false, solver: SolverOptions::default() }
    }
}

fn encoding_label(kind: LaplacianKind, base: &str) -> String {
    if kind.is_graph_kind() {
        base.to_string()
    } else {
        format!("h-{base}")
    }
}

/// Row `i` = `(U_i1, …, U_ik)` over the `k` smallest eigenvalues.
pub fn lape(input: &Input, kind: LaplacianKind, k: usize, sign_mode: SignMode) -> Result<EncodingMatrix, SpectralError> {
    lape_with(input, kind, k, &LapeOptions { sign_mode, ..LapeOptions::default() })
}

pub fn lape_with(
    input: &Input,
    kind: LaplacianKind,
    k: usize,
    opts: &LapeOptions,
) -> Result<EncodingMatrix, SpectralError> {
    check_kind(input, kind)?;
    if !kind.is_symmetric() {
        return Err(SpectralError::AsymmetricKind(kind));
    }
    if kind == LaplacianKind::HypergraphHodgeEdge {
        return Err(SpectralError::EdgeLevelKind(kind));
    }
    let n = input.node_count();
    let mut skip = 0;
    let dec = if opts.skip_trivial {
        let full = spectrum_with(input, kind, n, &opts.solver)?;
        skip = full.eigenvalues.iter().take_while(|l| l.abs() < full.gap_tolerance).count();
        if skip + k > n {
            return Err(SpectralError::TooMany { k: skip + k, dim: n });
        }
        spectrum_with(input, kind, skip + k, &opts.solver)?
    } else {
        spectrum_with(input, kind, k, &opts.solver)?
    };
    let vecs = dec.eigenvectors.as_ref().expect("symmetric kind");
    let mut cols: Vec<Vec<f64>> = vecs[skip..].to_vec();
    if let SignMode::Random(seed) = opts.sign_mode {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in &mut cols {
            if rng.gen_bool(0.5) {
                c.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    let rows = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let mut m = EncodingMatrix::from_rows(encoding_label(kind, "lape"), rows, k).expect("finite eigenvectors");
    for j in 0..k {
        if dec.degenerate[skip + j] {
            m.column_flags[j] = ColumnFlag::Degenerate;
            m.column_projectors[j] = dec.projector_diagonals[skip + j].clone();
        }
    }
    m.flagged_rows = dec.zero_degree_nodes.clone();
    let mut m = m
        .with_param("k", k)
        .with_param("laplacian", kind)
        .with_param("sign", opts.sign_mode);
    if opts.skip_trivial {
        m = m.with_param("skip_trivial", true);
    }
    Ok(m)
}

/// Every row = the `k` smallest eigenvalues.
pub fn lase(input: &Input, kind: LaplacianKind, k: usize) -> Result<EncodingMatrix, SpectralError> {
    lase_with(input, kind, k, &SolverOptions::default())
}

pub fn lase_with(input: &Input, kind: LaplacianKind, k: usize, opts: &SolverOptions) -> Result<EncodingMatrix, SpectralError> {
    let dec = spectrum_with(input, kind, k, opts)?;
    let n = input.node_count();
    let rows = vec![dec.eigenvalues.clone(); n];
    let mut m = EncodingMatrix::from_rows(encoding_label(kind, "lase"), rows, k).expect("finite eigenvalues");
    m.flagged_rows = dec.zero_degree_nodes;
    Ok(m.with_param("k", k).with_param("laplacian", kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hypercore::clique_lifting;
    use rand::SeedableRng;

    fn hg(n: usize, edges: Vec<Vec<usize>>) -> Input {
        Hypergraph::new(n, edges).unwrap().into()
    }

    fn full(input: &Input, kind: LaplacianKind) -> Vec<f64> {
        let dim = build_laplacian(input, kind).unwrap().nrows();
        spectrum(input, kind, dim).unwrap().eigenvalues
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn matrix_examples() {
        let one = hg(2, vec![vec![0, 1]]);
        let h = build_laplacian(&one, LaplacianKind::HypergraphHodgeNode).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));

        let tri = hg(3, vec![vec![0, 1, 2]]);
        let l = build_laplacian(&tri, LaplacianKind::HypergraphNormalized).unwrap();
        let want = DMatrix::identity(3, 3) - DMatrix::from_element(3, 3, 1.0 / 3.0);
        assert!((l - want).abs().max() < 1e-15);
        assert_close(&full(&tri, LaplacianKind::HypergraphNormalized), &[0.0, 1.0, 1.0], 1e-12);

        let k2: Input = fixtures::complete(2).into();
        let l = build_laplacian(&k2, LaplacianKind::GraphNormalized).unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let dec = spectrum(&k2, LaplacianKind::GraphNormalized, 2).unwrap();
        assert_close(&dec.eigenvalues, &[0.0, 2.0], 1e-12);
    }

    #[test]
    fn incompatible_and_asymmetric() {
        let tri = hg(3, vec![vec![0, 1, 2]]);
        assert!(matches!(
            build_laplacian(&tri, LaplacianKind::GraphStandard),
            Err(SpectralError::IncompatibleKind { .. })
        ));
        let k3: Input = fixtures::complete(3).into();
        assert_eq!(
            lape(&k3, LaplacianKind::GraphRandomWalk, 1, SignMode::Canonical).unwrap_err(),
            SpectralError::AsymmetricKind(LaplacianKind::GraphRandomWalk)
        );
        assert!(matches!(spectrum(&k3, LaplacianKind::GraphStandard, 4), Err(SpectralError::TooMany { .. })));
    }

    #[test]
    fn lape_examples() {
        let one = hg(2, vec![vec![0, 1]]);
        let m = lape(&one, LaplacianKind::HypergraphHodgeNode, 1, SignMode::Canonical).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.get(0, 0) - s).abs() < 1e-12 && (m.get(1, 0) + s).abs() < 1e-12);
        assert_eq!(m.kind, "h-lape");

        let k2: Input = fixtures::complete(2).into();
        let m = lape(&k2, LaplacianKind::GraphNormalized, 1, SignMode::Canonical).unwrap();
        assert!((m.get(0, 0) - s).abs() < 1e-12 && (m.get(1, 0) - s).abs() < 1e-12);
    }

    #[test]
    fn lase_examples() {
        let k2: Input = fixtures::complete(2).into();
        let m = lase(&k2, LaplacianKind::GraphNormalized, 2).unwrap();
        for i in 0..2 {
            assert!(m.get(i, 0).abs() < 1e-12 && (m.get(i, 1) - 2.0).abs() < 1e-12);
        }
        assert_eq!(lase(&k2, LaplacianKind::GraphNormalized, 0).unwrap().ncols(), 0);
    }

    #[test]
    fn rook_and_shrikhande_graph_spectra_agree_liftings_do_not() {
        let rook: Input = fixtures::rook().into();
        let shri: Input = fixtures::shrikhande().into();
        for kind in [LaplacianKind::GraphStandard, LaplacianKind::GraphNormalized, LaplacianKind::GraphRandomWalk] {
            assert_close(&full(&rook, kind), &full(&shri, kind), 1e-8);
        }
        let lr: Input = clique_lifting(&fixtures::rook()).into();
        let ls: Input = clique_lifting(&fixtures::shrikhande()).into();
        let a = full(&lr, LaplacianKind::HypergraphNormalized);
        let b = full(&ls, LaplacianKind::HypergraphNormalized);
        let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(gap > 1e-6);
        // Lifted Rook is two disjoint families of 4 size-4 hyperedges:
        // eigenvalues 0, 1/2 and 1.
        for x in &a {
            assert!([0.0, 0.5, 1.0].iter().any(|y| (x - y).abs() < 1e-9), "{x}");
        }
        assert!(a[0].abs() < 1e-12 && b[0].abs() < 1e-12);
    }

    #[test]
    fn degenerate_columns_carry_projectors() {
        let tri = hg(3, vec![vec![0, 1, 2]]);
        let m = lape(&tri, LaplacianKind::HypergraphNormalized, 3, SignMode::Canonical).unwrap();
        assert_eq!(m.column_flags, vec![ColumnFlag::Clean, ColumnFlag::Degenerate, ColumnFlag::Degenerate]);
        let p = m.column_projectors[1].as_ref().unwrap();
        assert_close(p, &[2.0 / 3.0; 3], 1e-12);
    }

    #[test]
    fn zero_degree_is_flagged_not_fatal() {
        let g: Input = Graph::new(3, &[(0, 1)]).unwrap().into();
        let dec = spectrum(&g, LaplacianKind::GraphNormalized, 3).unwrap();
        assert_eq!(dec.zero_degree_nodes, vec![2]);
        assert_close(&dec.eigenvalues, &[0.0, 1.0, 2.0], 1e-12);
        let l = build_laplacian(&g, LaplacianKind::GraphRandomWalk).unwrap();
        assert_eq!(l[(2, 2)], 1.0);
    }

    #[test]
    fn random_walk_spectrum_matches_asymmetric_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let h: Input = fixtures::random_hypergraph(12, 10, 1..=4, 12, &mut rng).into();
            let l = build_laplacian(&h, LaplacianKind::HypergraphRandomWalk).unwrap();
            let mut direct: Vec<f64> = l.complex_eigenvalues().iter().map(|c| c.re).collect();
            direct.sort_by(f64::total_cmp);
            assert_close(&full(&h, LaplacianKind::HypergraphRandomWalk), &direct, 1e-8);
        }
    }

    #[test]
    fn skip_trivial_drops_null_space() {
        let g: Input = fixtures::path(3).into();
        let opts = LapeOptions { skip_trivial: true, ..LapeOptions::default() };
        let m = lape_with(&g, LaplacianKind::GraphStandard, 1, &opts).unwrap();
        // Spectrum 0, 1, 3; the λ = 1 vector is (1, 0, −1)/√2.
        assert!((m.get(0, 0) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(m.get(1, 0).abs() < 1e-12);
    }
}
