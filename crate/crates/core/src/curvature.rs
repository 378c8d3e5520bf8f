//! Forman and Ollivier curvature on graphs and hypergraphs, the exact
//! Wasserstein-1 solver behind ORC, and the per-node curvature profiles
//! (LCP on graphs, HCP on hypergraphs).

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::EncodingMatrix;
use crate::hypercore::{self, Graph, Hypergraph, Input};
use crate::randwalk::{self, NodeMeasure, WalkError, WalkScheme};
use crate::stats::five_number_summary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurvatureNotion {
    Frc,
    Af3,
    Af4,
    Orc,
    HFrc,
    HOrc,
}

impl CurvatureNotion {
    pub fn name(self) -> &'static str {
        match self {
            CurvatureNotion::Frc => "frc",
            CurvatureNotion::Af3 => "af3",
            CurvatureNotion::Af4 => "af4",
            CurvatureNotion::Orc => "orc",
            CurvatureNotion::HFrc => "hfrc",
            CurvatureNotion::HOrc => "horc",
        }
    }

    pub fn is_hypergraph_notion(self) -> bool {
        matches!(self, CurvatureNotion::HFrc | CurvatureNotion::HOrc)
    }

    /// Encoding label of the profile built on this notion.
    pub fn profile_name(self) -> &'static str {
        match self {
            CurvatureNotion::Frc => "lcp-frc",
            CurvatureNotion::Af3 => "lcp-af3",
            CurvatureNotion::Af4 => "lcp-af4",
            CurvatureNotion::Orc => "lcp-orc",
            CurvatureNotion::HFrc => "hcp-frc",
            CurvatureNotion::HOrc => "hcp-orc",
        }
    }
}

impl fmt::Display for CurvatureNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurvatureNotion {
    type Err = CurvatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "frc" => CurvatureNotion::Frc,
            "af3" => CurvatureNotion::Af3,
            "af4" => CurvatureNotion::Af4,
            "orc" => CurvatureNotion::Orc,
            "hfrc" | "h-frc" => CurvatureNotion::HFrc,
            "horc" | "h-orc" => CurvatureNotion::HOrc,
            _ => return Err(CurvatureError::UnknownNotion(s.to_string())),
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("curvature `{notion}` does not apply to a {domain}")]
    IncompatibleNotion { notion: CurvatureNotion, domain: &'static str },
    #[error("measure supports lie in different components")]
    InfiniteDistance,
    #[error("measure at node {0} has no mass")]
    DegenerateMeasure(usize),
    #[error("subset needs at least two distinct nodes")]
    SubsetTooSmall,
    #[error("unknown curvature notion `{0}`")]
    UnknownNotion(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Curvature per edge (graph notions) or per hyperedge (hypergraph
/// notions). `None` marks an undefined value, such as ORC on a size-1
/// hyperedge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCurvatures {
    pub notion: CurvatureNotion,
    pub scheme: Option<WalkScheme>,
    /// Members of each (hyper)edge, sorted. Graph edges appear as `[u, v]`.
    pub edges: Vec<Vec<usize>>,
    pub values: Vec<Option<f64>>,
}

impl EdgeCurvatures {
    /// Curvature multiset of each node: values of its incident (hyper)edges.
    pub fn node_multisets(&self, n: usize) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); n];
        for (e, val) in self.edges.iter().zip(&self.values) {
            if let Some(x) = val {
                for &v in e {
                    out[v].push(*x);
                }
            }
        }
        out
    }
}

fn sorted_intersection_count(a: &[usize], b: &[usize], skip: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if !skip.contains(&a[i]) {
                    c += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Simple 4-cycles `u–x–y–v–u` through the edge `(u, v)`.
fn quadrangles(g: &Graph, u: usize, v: usize) -> usize {
    g.neighbors(u)
        .iter()
        .filter(|&&x| x != v)
        .map(|&x| sorted_intersection_count(g.neighbors(x), g.neighbors(v), &[u, x]))
        .sum()
}

/// `4 − deg(u) − deg(v)`, plus `3·triangles` for AF3 and additionally
/// `2·quadrangles` for AF4.
pub fn frc_graph(g: &Graph, notion: CurvatureNotion) -> Result<EdgeCurvatures, CurvatureError> {
    if !matches!(notion, CurvatureNotion::Frc | CurvatureNotion::Af3 | CurvatureNotion::Af4) {
        return Err(CurvatureError::IncompatibleNotion { notion, domain: "graph" });
    }
    let values = g
        .edges()
        .par_iter()
        .map(|&(u, v)| {
            let mut f = 4.0 - g.degree(u) as f64 - g.degree(v) as f64;
            if notion != CurvatureNotion::Frc {
                f += 3.0 * sorted_intersection_count(g.neighbors(u), g.neighbors(v), &[]) as f64;
            }
            if notion == CurvatureNotion::Af4 {
                f += 2.0 * quadrangles(g, u, v) as f64;
            }
            Some(f)
        })
        .collect();
    Ok(EdgeCurvatures {
        notion,
        scheme: None,
        edges: g.edges().iter().map(|&(u, v)| vec![u, v]).collect(),
        values,
    })
}

/// `F(e) = Σ_{k∈e} (2 − d_k)` with `d_k` the number of hyperedges at `k`.
pub fn hfrc(h: &Hypergraph) -> EdgeCurvatures {
    let values = h
        .hyperedges()
        .iter()
        .map(|e| Some(e.iter().map(|&k| 2.0 - h.degree(k) as f64).sum()))
        .collect();
    EdgeCurvatures {
        notion: CurvatureNotion::HFrc,
        scheme: None,
        edges: h.hyperedges().to_vec(),
        values,
    }
}

const FLOW_EPS: f64 = 1e-14;

struct Arc {
    to: usize,
    cap: f64,
    cost: f64,
}

/// Minimum cost of moving supplies `a` onto demands `b` where `cost[i][j]`
/// is the price per unit from `i` to `j` (`None`: no route). Successive
/// shortest paths with Bellman–Ford on the residual network. Returns
/// `None` if the demand cannot be met.
pub fn transport_cost(a: &[f64], b: &[f64], cost: &[Vec<Option<f64>>]) -> Option<f64> {
    let (na, nb) = (a.len(), b.len());
    let source = na + nb;
    let sink = source + 1;
    let nodes = sink + 1;
    let mut arcs: Vec<Arc> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut add = |arcs: &mut Vec<Arc>, from: usize, to: usize, cap: f64, cost: f64| {
        out[from].push(arcs.len());
        arcs.push(Arc { to, cap, cost });
        out[to].push(arcs.len());
        arcs.push(Arc { to: from, cap: 0.0, cost: -cost });
    };
    for (i, &m) in a.iter().enumerate() {
        add(&mut arcs, source, i, m, 0.0);
    }
    for (j, &m) in b.iter().enumerate() {
        add(&mut arcs, na + j, sink, m, 0.0);
    }
    for (i, row) in cost.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if let Some(c) = c {
                add(&mut arcs, i, na + j, f64::INFINITY, *c);
            }
        }
    }

    let target = a.iter().sum::<f64>().min(b.iter().sum::<f64>());
    let mut moved = 0.0;
    let mut total = 0.0;
    while target - moved > 1e-12 {
        let mut dist = vec![f64::INFINITY; nodes];
        let mut via: Vec<Option<usize>> = vec![None; nodes];
        dist[source] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u].is_infinite() {
                    continue;
                }
                for &id in &out[u] {
                    let arc = &arcs[id];
                    if arc.cap > FLOW_EPS && dist[u] + arc.cost < dist[arc.to] - 1e-12 {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = Some(id);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink].is_infinite() {
            return None;
        }
        let mut push = target - moved;
        let mut v = sink;
        while let Some(id) = via[v] {
            push = push.min(arcs[id].cap);
            v = arcs[id ^ 1].to;
        }
        let mut v = sink;
        while let Some(id) = via[v] {
            arcs[id].cap -= push;
            arcs[id ^ 1].cap += push;
            v = arcs[id ^ 1].to;
        }
        moved += push;
        total += push * dist[sink];
    }
    Some(total)
}

/// Exact `W₁(μ, ν)` under the ground metric `dist` (`None` = unreachable).
pub fn wasserstein1<F>(mu: &NodeMeasure, nu: &NodeMeasure, dist: F) -> Result<f64, CurvatureError>
where
    F: Fn(usize, usize) -> Option<f64>,
{
    if mu.is_empty() {
        return Err(CurvatureError::DegenerateMeasure(mu.center));
    }
    if nu.is_empty() {
        return Err(CurvatureError::DegenerateMeasure(nu.center));
    }
    let a: Vec<f64> = mu.support.iter().map(|&(_, p)| p).collect();
    let b: Vec<f64> = nu.support.iter().map(|&(_, p)| p).collect();
    let cost: Vec<Vec<Option<f64>>> = mu
        .support
        .iter()
        .map(|&(x, _)| nu.support.iter().map(|&(y, _)| dist(x, y)).collect())
        .collect();
    transport_cost(&a, &b, &cost).ok_or(CurvatureError::InfiniteDistance)
}

/// Distance between a neighbor of `i` and a neighbor of `j` when `i`, `j`
/// are adjacent: never more than 3 (via `x–i–j–y`).
fn local_distance(adj: &[Vec<usize>], x: usize, y: usize) -> f64 {
    if x == y {
        0.0
    } else if adj[x].binary_search(&y).is_ok() {
        1.0
    } else if sorted_intersection_count(&adj[x], &adj[y], &[]) > 0 {
        2.0
    } else {
        3.0
    }
}

/// `κ(i, j) = 1 − W₁(μ_i, μ_j)` with uniform measures on the neighbors
/// (center excluded).
pub fn orc_graph(g: &Graph) -> Result<EdgeCurvatures, CurvatureError> {
    let input = Input::Graph(g.clone());
    let measures = (0..g.node_count())
        .map(|i| randwalk::measure(&input, i, WalkScheme::GraphUniform))
        .collect::<Result<Vec<_>, _>>()?;
    let adj = g.adjacency();
    let values = g
        .edges()
        .par_iter()
        .map(|&(u, v)| {
            wasserstein1(&measures[u], &measures[v], |x, y| Some(local_distance(adj, x, y))).map(|w| Some(1.0 - w))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EdgeCurvatures {
        notion: CurvatureNotion::Orc,
        scheme: Some(WalkScheme::GraphUniform),
        edges: g.edges().iter().map(|&(u, v)| vec![u, v]).collect(),
        values,
    })
}

/// `κ(e) = 1 − mean over pairs {i, j} ⊆ e of W₁(μ_i, μ_j)`. Size-1
/// hyperedges have no pairs and get `None`.
pub fn horc(h: &Hypergraph, scheme: WalkScheme) -> Result<EdgeCurvatures, CurvatureError> {
    if !scheme.is_hypergraph_scheme() {
        return Err(WalkError::IncompatibleScheme { scheme, domain: "hypergraph" }.into());
    }
    let input = Input::Hypergraph(h.clone());
    let measures = (0..h.node_count())
        .map(|i| randwalk::measure(&input, i, scheme))
        .collect::<Result<Vec<_>, _>>()?;
    let adj = h.neighbor_lists();
    let values = h
        .hyperedges()
        .par_iter()
        .map(|e| {
            if e.len() < 2 {
                return Ok(None);
            }
            let mut sum = 0.0;
            let mut pairs = 0usize;
            for (a, &i) in e.iter().enumerate() {
                for &j in &e[a + 1..] {
                    sum += wasserstein1(&measures[i], &measures[j], |x, y| Some(local_distance(&adj, x, y)))?;
                    pairs += 1;
                }
            }
            Ok(Some(1.0 - sum / pairs as f64))
        })
        .collect::<Result<Vec<_>, CurvatureError>>()?;
    Ok(EdgeCurvatures {
        notion: CurvatureNotion::HOrc,
        scheme: Some(scheme),
        edges: h.hyperedges().to_vec(),
        values,
    })
}

/// `κ(s) = 1 − AGG(s)/d(s)` for an arbitrary node subset, with `AGG` the
/// mean pairwise `W₁` and `d(s)` the largest pairwise hop distance.
pub fn subset_curvature(input: &Input, subset: &[usize], scheme: WalkScheme) -> Result<f64, CurvatureError> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() < 2 {
        return Err(CurvatureError::SubsetTooSmall);
    }
    let measures = s
        .iter()
        .map(|&i| randwalk::measure(input, i, scheme))
        .collect::<Result<Vec<_>, _>>()?;
    let bfs = |src: usize| match input {
        Input::Graph(g) => hypercore::bfs_graph(g, src, None),
        Input::Hypergraph(h) => hypercore::bfs_hypergraph(h, src, None),
    };
    let mut diameter = 0usize;
    for &i in &s {
        let d = bfs(i);
        for &j in &s {
            diameter = diameter.max(d[j].ok_or(CurvatureError::InfiniteDistance)?);
        }
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for a in 0..s.len() {
        let from: Vec<Vec<Option<usize>>> = measures[a].support.iter().map(|&(x, _)| bfs(x)).collect();
        let row_of = |x: usize| measures[a].support.iter().position(|&(v, _)| v == x).unwrap();
        for b in a + 1..s.len() {
            sum += wasserstein1(&measures[a], &measures[b], |x, y| from[row_of(x)][y].map(|d| d as f64))?;
            pairs += 1;
        }
    }
    Ok(1.0 - (sum / pairs as f64) / diameter as f64)
}

/// Curvatures of `notion` on `input`. Hypergraph notions take a graph as
/// the 2-uniform hypergraph of its edges; graph notions reject hypergraphs.
/// `scheme` only matters for H-ORC (default EE).
pub fn curvatures(
    input: &Input,
    notion: CurvatureNotion,
    scheme: Option<WalkScheme>,
) -> Result<EdgeCurvatures, CurvatureError> {
    match (input, notion) {
        (Input::Hypergraph(_), n) if !n.is_hypergraph_notion() => {
            Err(CurvatureError::IncompatibleNotion { notion, domain: "hypergraph" })
        }
        (Input::Graph(g), CurvatureNotion::Orc) => orc_graph(g),
        (Input::Graph(g), n) if !n.is_hypergraph_notion() => frc_graph(g, n),
        (_, n) => {
            let h: Cow<'_, Hypergraph> = match input {
                Input::Graph(g) => Cow::Owned(g.to_two_uniform()),
                Input::Hypergraph(h) => Cow::Borrowed(h),
            };
            if n == CurvatureNotion::HFrc {
                Ok(hfrc(&h))
            } else {
                horc(&h, scheme.unwrap_or(WalkScheme::EqualEdges))
            }
        }
    }
}

/// Per-node `[min, max, mean, median, std]` of curvature multisets. Empty
/// multisets give a zero row and are listed in the second return value.
pub fn profile_rows(multisets: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut flagged = Vec::new();
    let rows = multisets
        .iter()
        .enumerate()
        .map(|(v, cms)| match five_number_summary(cms) {
            Some(s) => s.to_vec(),
            None => {
                flagged.push(v);
                vec![0.0; 5]
            }
        })
        .collect();
    (rows, flagged)
}

/// LCP (graph notions) or HCP (hypergraph notions) as a 5-column encoding.
pub fn curvature_profile(
    input: &Input,
    notion: CurvatureNotion,
    scheme: Option<WalkScheme>,
) -> Result<EncodingMatrix, CurvatureError> {
    let curv = curvatures(input, notion, scheme)?;
    let (rows, flagged) = profile_rows(&curv.node_multisets(input.node_count()));
    let mut m = EncodingMatrix::from_rows(notion.profile_name(), rows, 5).expect("finite curvatures");
    m.flagged_rows = flagged;
    let mut m = m.with_param("notion", notion);
    if let Some(s) = curv.scheme {
        m = m.with_param("scheme", s);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hypercore::clique_lifting;

    fn hg(n: usize, edges: Vec<Vec<usize>>) -> Hypergraph {
        Hypergraph::new(n, edges).unwrap()
    }

    fn all(c: &EdgeCurvatures) -> Vec<f64> {
        c.values.iter().map(|v| v.unwrap()).collect()
    }

    #[test]
    fn forman_examples() {
        let k3 = fixtures::complete(3);
        assert_eq!(all(&frc_graph(&k3, CurvatureNotion::Frc).unwrap()), vec![0.0; 3]);
        assert_eq!(all(&frc_graph(&k3, CurvatureNotion::Af3).unwrap()), vec![3.0; 3]);
        for g in [fixtures::rook(), fixtures::shrikhande()] {
            assert!(all(&frc_graph(&g, CurvatureNotion::Frc).unwrap()).iter().all(|&x| x == -8.0));
        }
        // C4: every edge lies on exactly one 4-cycle.
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(all(&frc_graph(&c4, CurvatureNotion::Af4).unwrap()), vec![2.0; 4]);
        // K4: each edge is on two triangles and two 4-cycles.
        let k4 = fixtures::complete(4);
        assert_eq!(all(&frc_graph(&k4, CurvatureNotion::Af4).unwrap()), vec![4.0 - 6.0 + 6.0 + 4.0; 6]);
    }

    #[test]
    fn hypergraph_forman_examples() {
        assert_eq!(all(&hfrc(&hg(3, vec![vec![0, 1, 2]]))), vec![3.0]);
        assert!(all(&hfrc(&clique_lifting(&fixtures::rook()))).iter().all(|&x| x == 0.0));
        assert!(all(&hfrc(&clique_lifting(&fixtures::shrikhande()))).iter().all(|&x| x == -12.0));
    }

    #[test]
    fn wasserstein_examples() {
        let path: Input = fixtures::path(3).into();
        let d = |x: usize, y: usize| hypercore::shortest_path_distance(&path, x, y).map(|d| d as f64);
        let delta1 = NodeMeasure { center: 9, support: vec![(1, 1.0)] };
        let split = NodeMeasure { center: 9, support: vec![(0, 0.5), (2, 0.5)] };
        assert!((wasserstein1(&delta1, &split, d).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(wasserstein1(&split, &split, d).unwrap(), 0.0);
        let empty = NodeMeasure { center: 4, support: vec![] };
        assert_eq!(wasserstein1(&empty, &split, d), Err(CurvatureError::DegenerateMeasure(4)));

        let two: Input = Graph::new(4, &[(0, 1), (2, 3)]).unwrap().into();
        let d2 = |x: usize, y: usize| hypercore::shortest_path_distance(&two, x, y).map(|d| d as f64);
        let a = NodeMeasure { center: 0, support: vec![(1, 1.0)] };
        let b = NodeMeasure { center: 2, support: vec![(3, 1.0)] };
        assert_eq!(wasserstein1(&a, &b, d2), Err(CurvatureError::InfiniteDistance));
    }

    #[test]
    fn ollivier_examples() {
        let k3 = orc_graph(&fixtures::complete(3)).unwrap();
        assert!(all(&k3).iter().all(|x| (x - 0.5).abs() < 1e-12));
        let p = orc_graph(&fixtures::path(3)).unwrap();
        assert!(all(&p).iter().all(|x| x.abs() < 1e-12));
        let k2 = orc_graph(&fixtures::complete(2)).unwrap();
        assert!(all(&k2)[0].abs() < 1e-12);
    }

    #[test]
    fn hypergraph_ollivier_examples() {
        let tri = horc(&hg(3, vec![vec![0, 1, 2]]), WalkScheme::EqualEdges).unwrap();
        assert!((all(&tri)[0] - 0.5).abs() < 1e-12);
        let pair = horc(&hg(2, vec![vec![0, 1]]), WalkScheme::EqualEdges).unwrap();
        assert!(all(&pair)[0].abs() < 1e-12);
        let two = horc(&hg(4, vec![vec![0, 1], vec![2, 3]]), WalkScheme::EqualEdges).unwrap();
        assert!(all(&two).iter().all(|x| x.abs() < 1e-12));
        let single = horc(&hg(3, vec![vec![0], vec![0, 1, 2]]), WalkScheme::EqualEdges).unwrap();
        assert_eq!(single.values[0], None);
        assert!(horc(&hg(2, vec![vec![0, 1]]), WalkScheme::GraphUniform).is_err());
    }

    #[test]
    fn subset_matches_edge_curvature() {
        let g = fixtures::rook();
        let orc = orc_graph(&g).unwrap();
        let input: Input = g.clone().into();
        let (u, v) = g.edges()[5];
        let k = subset_curvature(&input, &[u, v], WalkScheme::GraphUniform).unwrap();
        assert!((k - orc.values[5].unwrap()).abs() < 1e-12);
        assert_eq!(subset_curvature(&input, &[3, 3], WalkScheme::GraphUniform), Err(CurvatureError::SubsetTooSmall));
    }

    #[test]
    fn profiles_on_rook_and_shrikhande() {
        for (g, hcp) in [(fixtures::rook(), 0.0), (fixtures::shrikhande(), -12.0)] {
            let lcp = curvature_profile(&g.clone().into(), CurvatureNotion::Frc, None).unwrap();
            assert!(lcp.to_rows().iter().all(|r| r == &vec![-8.0, -8.0, -8.0, -8.0, 0.0]));
            let lifted: Input = clique_lifting(&g).into();
            let h = curvature_profile(&lifted, CurvatureNotion::HFrc, None).unwrap();
            assert!(h.to_rows().iter().all(|r| r == &vec![hcp, hcp, hcp, hcp, 0.0]));
            assert_eq!(h.kind, "hcp-frc");
        }
    }

    #[test]
    fn isolated_node_gets_flagged_zero_row() {
        let g: Input = Graph::new(3, &[(0, 1)]).unwrap().into();
        let m = curvature_profile(&g, CurvatureNotion::Orc, None).unwrap();
        assert_eq!(m.flagged_rows, vec![2]);
        assert_eq!(m.row(2), &[0.0; 5]);
        let h: Input = hg(2, vec![vec![0, 1]]).into();
        assert!(matches!(
            curvature_profile(&h, CurvatureNotion::Frc, None),
            Err(CurvatureError::IncompatibleNotion { .. })
        ));
    }
}
