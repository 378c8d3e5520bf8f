//! Random walks on graphs and hypergraphs and the return-probability
//! encodings built from them.
//!
//! Every scheme here has transition matrix `P = D⁻¹W` with `W` symmetric and
//! `D = rowsum(W)`:
//!
//! | scheme  | `W[i][j]` (i ≠ j)                         | `D[i]`                      |
//! |---------|-------------------------------------------|-----------------------------|
//! | uniform | graph adjacency                           | graph degree                |
//! | EN      | 1 if `i`, `j` share a hyperedge            | number of neighbors         |
//! | EE      | Σ over shared `e` with `|e|≥2` of 1/(|e|−1) | hyperedges of size ≥ 2 at i |
//! | WE      | number of shared hyperedges               | Σ over `f ∋ i` of (|f|−1)   |
//!
//! Return probabilities then satisfy `diag(Pᵗ) = diag(Sᵗ)` with the
//! symmetric `S = D^{-1/2} W D^{-1/2}`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::EncodingMatrix;
use crate::hypercore::{Graph, Hypergraph, Input};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WalkScheme {
    /// Uniform over graph neighbors.
    GraphUniform,
    /// Equal-nodes: uniform over co-membership neighbors.
    EqualNodes,
    /// Equal-edges: uniform hyperedge (size ≥ 2), then uniform other member.
    EqualEdges,
    /// Weighted-edges: hyperedge chosen with weight |e| − 1.
    WeightedEdges,
}

impl WalkScheme {
    pub fn name(self) -> &'static str {
        match self {
            WalkScheme::GraphUniform => "uniform",
            WalkScheme::EqualNodes => "en",
            WalkScheme::EqualEdges => "ee",
            WalkScheme::WeightedEdges => "we",
        }
    }

    pub fn is_hypergraph_scheme(self) -> bool {
        self != WalkScheme::GraphUniform
    }
}

impl fmt::Display for WalkScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkScheme {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(WalkScheme::GraphUniform),
            "en" => Ok(WalkScheme::EqualNodes),
            "ee" => Ok(WalkScheme::EqualEdges),
            "we" => Ok(WalkScheme::WeightedEdges),
            _ => Err(WalkError::UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("walk scheme `{scheme}` does not apply to a {domain}")]
    IncompatibleScheme { scheme: WalkScheme, domain: &'static str },
    #[error("unknown walk scheme `{0}` (expected uniform|en|ee|we)")]
    UnknownScheme(String),
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: usize, n: usize },
}

/// Sparse probability distribution over the nodes reachable in one step
/// from `center`. Empty for dead ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMeasure {
    pub center: usize,
    /// `(node, probability)`, ascending by node.
    pub support: Vec<(usize, f64)>,
}

impl NodeMeasure {
    pub fn mass(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn prob(&self, node: usize) -> f64 {
        self.support
            .binary_search_by_key(&node, |&(v, _)| v)
            .map_or(0.0, |pos| self.support[pos].1)
    }
}

/// Row-stochastic transition matrix; dead-end rows are all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub p: CsrMatrix,
    pub scheme: WalkScheme,
}

/// Symmetric weights and their row sums; `P = D⁻¹W`.
#[derive(Debug, Clone)]
pub struct WalkWeights {
    pub w: CsrMatrix,
    pub d: Vec<f64>,
}

impl WalkWeights {
    /// `D^{-1/2} W D^{-1/2}` with zero for dead ends.
    pub fn symmetric_normalized(&self) -> CsrMatrix {
        let inv_sqrt: Vec<f64> = self.d.iter().map(|&x| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 }).collect();
        self.w.scale(&inv_sqrt, &inv_sqrt)
    }
}

fn check_domain(input: &Input, scheme: WalkScheme) -> Result<(), WalkError> {
    match (input, scheme) {
        (Input::Hypergraph(_), WalkScheme::GraphUniform) => Err(WalkError::IncompatibleScheme {
            scheme,
            domain: "hypergraph",
        }),
        _ => Ok(()),
    }
}

/// Walk weights for `scheme`. Hypergraph schemes accept a graph as the
/// 2-uniform hypergraph of its edges.
pub fn walk_weights(input: &Input, scheme: WalkScheme) -> Result<WalkWeights, WalkError> {
    check_domain(input, scheme)?;
    Ok(match (input, scheme) {
        (Input::Graph(g), WalkScheme::GraphUniform) => graph_weights(g),
        (Input::Graph(g), s) => hypergraph_weights(&g.to_two_uniform(), s),
        (Input::Hypergraph(h), s) => hypergraph_weights(h, s),
    })
}

fn graph_weights(g: &Graph) -> WalkWeights {
    let mut t = Vec::with_capacity(2 * g.edge_count());
    for &(u, v) in g.edges() {
        t.push((u, v, 1.0));
        t.push((v, u, 1.0));
    }
    let w = CsrMatrix::from_triplets(g.node_count(), g.node_count(), t);
    let d = g.degrees().into_iter().map(|x| x as f64).collect();
    WalkWeights { w, d }
}

fn hypergraph_weights(h: &Hypergraph, scheme: WalkScheme) -> WalkWeights {
    let n = h.node_count();
    let mut t = Vec::new();
    for e in h.hyperedges() {
        if e.len() < 2 {
            continue;
        }
        let weight = match scheme {
            WalkScheme::EqualEdges => 1.0 / (e.len() - 1) as f64,
            _ => 1.0,
        };
        for &i in e {
            for &j in e {
                if i != j {
                    t.push((i, j, weight));
                }
            }
        }
    }
    let mut w = CsrMatrix::from_triplets(n, n, t);
    if scheme == WalkScheme::EqualNodes {
        let mut ones = Vec::with_capacity(w.nnz());
        for r in 0..n {
            ones.extend(w.row(r).map(|(c, _)| (r, c, 1.0)));
        }
        w = CsrMatrix::from_triplets(n, n, ones);
    }
    let d = match scheme {
        WalkScheme::EqualEdges => (0..n)
            .map(|i| h.memberships(i).iter().filter(|&&e| h.hyperedge(e).len() >= 2).count() as f64)
            .collect(),
        WalkScheme::WeightedEdges => (0..n)
            .map(|i| h.memberships(i).iter().map(|&e| (h.hyperedge(e).len() - 1) as f64).sum())
            .collect(),
        _ => w.row_sums(),
    };
    WalkWeights { w, d }
}

/// The one-step distribution `μ_i` of `scheme`.
pub fn measure(input: &Input, i: usize, scheme: WalkScheme) -> Result<NodeMeasure, WalkError> {
    check_domain(input, scheme)?;
    let n = input.node_count();
    if i >= n {
        return Err(WalkError::NodeOutOfRange { node: i, n });
    }
    let support = match (input, scheme) {
        (Input::Graph(g), WalkScheme::GraphUniform) => {
            let nb = g.neighbors(i);
            nb.iter().map(|&j| (j, 1.0 / nb.len() as f64)).collect()
        }
        (Input::Graph(g), s) => hyper_measure(&g.to_two_uniform(), i, s),
        (Input::Hypergraph(h), s) => hyper_measure(h, i, s),
    };
    Ok(NodeMeasure { center: i, support })
}

fn hyper_measure(h: &Hypergraph, i: usize, scheme: WalkScheme) -> Vec<(usize, f64)> {
    let admissible: Vec<&[usize]> = h
        .memberships(i)
        .iter()
        .map(|&e| h.hyperedge(e))
        .filter(|e| e.len() >= 2)
        .collect();
    if admissible.is_empty() {
        return Vec::new();
    }
    let mut acc: Vec<(usize, f64)> = Vec::new();
    match scheme {
        WalkScheme::EqualNodes => {
            let mut nb: Vec<usize> = admissible.iter().flat_map(|e| e.iter().copied()).filter(|&j| j != i).collect();
            nb.sort_unstable();
            nb.dedup();
            let p = 1.0 / nb.len() as f64;
            return nb.into_iter().map(|j| (j, p)).collect();
        }
        WalkScheme::EqualEdges => {
            let pick_edge = 1.0 / admissible.len() as f64;
            for e in &admissible {
                let p = pick_edge / (e.len() - 1) as f64;
                acc.extend(e.iter().filter(|&&j| j != i).map(|&j| (j, p)));
            }
        }
        WalkScheme::WeightedEdges => {
            let total: usize = admissible.iter().map(|e| e.len() - 1).sum();
            let p = 1.0 / total as f64;
            for e in &admissible {
                acc.extend(e.iter().filter(|&&j| j != i).map(|&j| (j, p)));
            }
        }
        WalkScheme::GraphUniform => unreachable!("rejected by check_domain"),
    }
    acc.sort_by_key(|&(j, _)| j);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(acc.len());
    for (j, p) in acc {
        match out.last_mut() {
            Some((last, q)) if *last == j => *q += p,
            _ => out.push((j, p)),
        }
    }
    out
}

/// All measures stacked as rows.
pub fn transition_matrix(input: &Input, scheme: WalkScheme) -> Result<TransitionMatrix, WalkError> {
    let n = input.node_count();
    let lifted;
    let input = match input {
        Input::Graph(g) if scheme.is_hypergraph_scheme() => {
            lifted = Input::Hypergraph(g.to_two_uniform());
            &lifted
        }
        other => other,
    };
    let mut t = Vec::new();
    for i in 0..n {
        let m = measure(input, i, scheme)?;
        t.extend(m.support.into_iter().map(|(j, p)| (i, j, p)));
    }
    Ok(TransitionMatrix { p: CsrMatrix::from_triplets(n, n, t), scheme })
}

const BLOCK: usize = 64;

/// Row `i` = `(P_ii, (P²)_ii, …, (Pᵏ)_ii)`.
pub fn rwpe(input: &Input, scheme: WalkScheme, k: usize) -> Result<EncodingMatrix, WalkError> {
    let n = input.node_count();
    let label = match input {
        Input::Graph(_) => "rwpe",
        Input::Hypergraph(_) => "h-rwpe",
    };
    let weights = walk_weights(input, scheme)?;
    let diag = return_probabilities(&weights, k);
    let rows = (0..n).map(|i| (0..k).map(|t| diag[t][i]).collect()).collect();
    let mut m = EncodingMatrix::from_rows(label, rows, k).expect("probabilities are finite");
    m.flagged_rows = (0..n).filter(|&i| weights.d[i] == 0.0).collect();
    Ok(m.with_param("k", k).with_param("scheme", scheme))
}

/// `out[t-1][i] = (Pᵗ)_ii` for `t = 1..=k`, via `<S^a e_i, S^b e_i>` with
/// `a = ⌊t/2⌋`, `b = ⌈t/2⌉`, over blocks of source nodes.
pub fn return_probabilities(weights: &WalkWeights, k: usize) -> Vec<Vec<f64>> {
    let s = weights.symmetric_normalized();
    let n = s.nrows();
    let starts: Vec<usize> = (0..n).step_by(BLOCK).collect();
    let blocks: Vec<(usize, Vec<Vec<f64>>)> = starts
        .par_iter()
        .map(|&start| {
            let width = BLOCK.min(n - start);
            (start, block_returns(&s, start, width, k))
        })
        .collect();
    let mut out = vec![vec![0.0; n]; k];
    for (start, vals) in blocks {
        for (t, col) in vals.into_iter().enumerate() {
            out[t][start..start + col.len()].copy_from_slice(&col);
        }
    }
    out
}

fn block_returns(s: &CsrMatrix, start: usize, width: usize, k: usize) -> Vec<Vec<f64>> {
    let n = s.nrows();
    let mut cur = vec![0.0; n * width];
    for c in 0..width {
        cur[(start + c) * width + c] = 1.0;
    }
    let mut next = vec![0.0; n * width];
    let mut out = vec![vec![0.0; width]; k];
    // cur = S^a e, next = S^(a+1) e.
    let mut a = 0;
    loop {
        let even = 2 * a;
        if even >= 1 && even <= k {
            out[even - 1] = column_dots(&cur, &cur, width);
        }
        if 2 * a + 1 > k {
            break;
        }
        s.mul_block(&cur, width, &mut next);
        out[2 * a] = column_dots(&cur, &next, width);
        std::mem::swap(&mut cur, &mut next);
        a += 1;
    }
    out
}

fn column_dots(x: &[f64], y: &[f64], width: usize) -> Vec<f64> {
    let mut acc = vec![0.0; width];
    for (xr, yr) in x.chunks_exact(width).zip(y.chunks_exact(width)) {
        for ((a, xv), yv) in acc.iter_mut().zip(xr).zip(yr) {
            *a += xv * yv;
        }
    }
    acc
}
