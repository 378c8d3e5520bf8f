//! Graph and hypergraph data model.
//!
//! Nodes are always `0..n`. A [`Graph`] is simple and undirected; a
//! [`Hypergraph`] is a node count plus an ordered list of nonempty node
//! sets. Duplicate hyperedges are legal and preserved.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single broken invariant found by [`validate_graph`] or
/// [`validate_hypergraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    SelfLoop { node: usize },
    DuplicateEdge { u: usize, v: usize },
    EndpointOutOfRange { edge: usize, node: usize, n: usize },
    EmptyHyperedge { edge: usize },
    MemberOutOfRange { edge: usize, node: usize, n: usize },
    RepeatedMember { edge: usize, node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { node } => write!(f, "self-loop at {node}"),
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge {{{u},{v}}}"),
            Violation::EndpointOutOfRange { edge, node, n } => {
                write!(f, "edge {edge}: endpoint {node} out of range (n = {n})")
            }
            Violation::EmptyHyperedge { edge } => write!(f, "hyperedge {edge} is empty"),
            Violation::MemberOutOfRange { edge, node, n } => {
                write!(f, "hyperedge {edge}: member {node} out of range (n = {n})")
            }
            Violation::RepeatedMember { edge, node } => {
                write!(f, "hyperedge {edge}: node {node} listed more than once")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid input: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Report-style check of raw graph data. Empty iff the data forms a valid
/// simple graph on `n` nodes.
pub fn validate_graph(n: usize, edges: &[(usize, usize)]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, &(u, v)) in edges.iter().enumerate() {
        let mut in_range = true;
        for node in [u, v] {
            if node >= n {
                out.push(Violation::EndpointOutOfRange { edge: idx, node, n });
                in_range = false;
            }
        }
        if u == v {
            out.push(Violation::SelfLoop { node: u });
            continue;
        }
        if in_range && !seen.insert((u.min(v), u.max(v))) {
            out.push(Violation::DuplicateEdge { u: u.min(v), v: u.max(v) });
        }
    }
    out
}

/// Report-style check of raw hypergraph data.
pub fn validate_hypergraph(n: usize, hyperedges: &[Vec<usize>]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (idx, e) in hyperedges.iter().enumerate() {
        if e.is_empty() {
            out.push(Violation::EmptyHyperedge { edge: idx });
            continue;
        }
        let mut seen = BTreeSet::new();
        for &node in e {
            if node >= n {
                out.push(Violation::MemberOutOfRange { edge: idx, node, n });
            } else if !seen.insert(node) {
                out.push(Violation::RepeatedMember { edge: idx, node });
            }
        }
    }
    out
}

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, ModelError> {
        let violations = validate_graph(n, edges);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let mut norm: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        norm.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// The same graph viewed as a hypergraph whose hyperedges are exactly
    /// the edges (2-uniform).
    pub fn to_two_uniform(&self) -> Hypergraph {
        let edges = self.edges.iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>();
        Hypergraph::new(self.n, edges).expect("graph edges are valid hyperedges")
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal node count");
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::new(self.n, &edges).expect("relabeling preserves validity")
    }
}

/// Node set plus ordered list of hyperedges. Members of each hyperedge are
/// stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    memberships: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, hyperedges: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let violations = validate_hypergraph(n, &hyperedges);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        let mut edges = hyperedges;
        for e in &mut edges {
            e.sort_unstable();
        }
        let mut memberships = vec![Vec::new(); n];
        for (j, e) in edges.iter().enumerate() {
            for &i in e {
                memberships[i].push(j);
            }
        }
        Ok(Hypergraph { n, edges, memberships })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn hyperedge(&self, j: usize) -> &[usize] {
        &self.edges[j]
    }

    /// Indices of hyperedges containing `v`, ascending.
    pub fn memberships(&self, v: usize) -> &[usize] {
        &self.memberships[v]
    }

    /// Number of hyperedges containing `v`, with multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        self.memberships[v].len()
    }

    pub fn degrees(&self) -> DegreeVectors {
        DegreeVectors::of(self)
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        IncidenceMatrix::of(self)
    }

    /// Pairs `(first, later)` of hyperedge indices holding the same node set.
    pub fn duplicate_hyperedges(&self) -> Vec<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| self.edges[a].cmp(&self.edges[b]).then(a.cmp(&b)));
        let mut out = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let mut j = i + 1;
            while j < order.len() && self.edges[order[j]] == self.edges[order[i]] {
                out.push((order[i], order[j]));
                j += 1;
            }
            i = j;
        }
        out.sort_unstable();
        out
    }

    /// Co-membership neighbors of every node (sorted, self excluded).
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| neighbors(self, v)).collect()
    }

    pub fn relabel(&self, perm: &[usize]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal node count");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Hypergraph::new(self.n, edges).expect("relabeling preserves validity")
    }
}

/// Either domain, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

impl Input {
    pub fn node_count(&self) -> usize {
        match self {
            Input::Graph(g) => g.node_count(),
            Input::Hypergraph(h) => h.node_count(),
        }
    }

    pub fn domain_name(&self) -> &'static str {
        match self {
            Input::Graph(_) => "graph",
            Input::Hypergraph(_) => "hypergraph",
        }
    }
}

impl From<Graph> for Input {
    fn from(g: Graph) -> Self {
        Input::Graph(g)
    }
}

impl From<Hypergraph> for Input {
    fn from(h: Hypergraph) -> Self {
        Input::Hypergraph(h)
    }
}

/// Sparse node–hyperedge incidence (B1). Row `i` lists the hyperedges
/// containing node `i`; column `j` lists the members of hyperedge `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl IncidenceMatrix {
    pub fn of(h: &Hypergraph) -> Self {
        IncidenceMatrix {
            rows: h.memberships.clone(),
            cols: h.edges.clone(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, node: usize, edge: usize) -> u8 {
        u8::from(self.cols[edge].binary_search(&node).is_ok())
    }

    pub fn row(&self, node: usize) -> &[usize] {
        &self.rows[node]
    }

    pub fn column(&self, edge: usize) -> &[usize] {
        &self.cols[edge]
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows.len(), self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &i in col {
                m[(i, j)] = 1.0;
            }
        }
        m
    }
}

/// The D_v and D_e diagonals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVectors {
    pub node: Vec<usize>,
    pub edge: Vec<usize>,
    pub max_node: usize,
    pub max_edge: usize,
}

impl DegreeVectors {
    pub fn of(h: &Hypergraph) -> Self {
        let node: Vec<usize> = h.memberships.iter().map(Vec::len).collect();
        let edge: Vec<usize> = h.edges.iter().map(Vec::len).collect();
        DegreeVectors {
            max_node: node.iter().copied().max().unwrap_or(0),
            max_edge: edge.iter().copied().max().unwrap_or(0),
            node,
            edge,
        }
    }
}

/// Graph with an edge `{u,v}` whenever some hyperedge contains both.
pub fn clique_expansion(h: &Hypergraph) -> Graph {
    let mut pairs = BTreeSet::new();
    for e in h.hyperedges() {
        for (a, &u) in e.iter().enumerate() {
            for &v in &e[a + 1..] {
                pairs.insert((u, v));
            }
        }
    }
    let edges: Vec<_> = pairs.into_iter().collect();
    Graph::new(h.node_count(), &edges).expect("expansion of a valid hypergraph is simple")
}

/// Hypergraph whose hyperedges are the maximal cliques of `g` with at least
/// two nodes, sorted lexicographically. Isolated nodes get no hyperedge.
pub fn clique_lifting(g: &Graph) -> Hypergraph {
    let mut cliques = maximal_cliques(g);
    cliques.retain(|c| c.len() >= 2);
    cliques.sort();
    Hypergraph::new(g.node_count(), cliques).expect("cliques are valid hyperedges")
}

/// All maximal cliques (Bron–Kerbosch with Tomita pivoting), each sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..g.node_count()).collect();
    bron_kerbosch(g, &mut r, p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // Pivot maximizes |P ∩ N(u)| over u in P ∪ X.
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| (intersect_count(&p, g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("P is nonempty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|v| !g.has_edge(pivot, *v))
        .collect();
    let mut p = p;
    let mut x = x;
    for v in candidates {
        let nv = g.neighbors(v);
        let p_next = intersect(&p, nv);
        let x_next = intersect(&x, nv);
        r.push(v);
        bron_kerbosch(g, r, p_next, x_next, out);
        r.pop();
        if let Ok(pos) = p.binary_search(&v) {
            p.remove(pos);
        }
        let pos = x.binary_search(&v).unwrap_or_else(|e| e);
        x.insert(pos, v);
    }
}

// Both inputs sorted ascending.
fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersect_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Co-membership neighbors of `i`: nodes sharing at least one hyperedge with
/// it, sorted, `i` excluded.
pub fn neighbors(h: &Hypergraph, i: usize) -> Vec<usize> {
    let mut out: Vec<usize> = h
        .memberships(i)
        .iter()
        .flat_map(|&j| h.hyperedge(j).iter().copied())
        .filter(|&v| v != i)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Hop distance between `i` and `j`, `None` when they are disconnected.
/// On hypergraphs this is the distance in the clique expansion.
pub fn shortest_path_distance(input: &Input, i: usize, j: usize) -> Option<usize> {
    if i == j {
        return Some(0);
    }
    let dist = match input {
        Input::Graph(g) => bfs_graph(g, i, None),
        Input::Hypergraph(h) => bfs_hypergraph(h, i, None),
    };
    dist[j]
}

/// BFS hop distances from `src`; nodes beyond `max_depth` (when given) or in
/// another component are `None`.
pub fn bfs_graph(g: &Graph, src: usize, max_depth: Option<usize>) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if max_depth.is_some_and(|m| du >= m) {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// BFS over co-membership; each hyperedge is expanded at most once.
pub fn bfs_hypergraph(h: &Hypergraph, src: usize, max_depth: Option<usize>) -> Vec<Option<usize>> {
    let mut dist = vec![None; h.node_count()];
    let mut edge_seen = vec![false; h.edge_count()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if max_depth.is_some_and(|m| du >= m) {
            continue;
        }
        for &e in h.memberships(u) {
            if std::mem::replace(&mut edge_seen[e], true) {
                continue;
            }
            for &v in h.hyperedge(e) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    dist
}

/// `(n, k, λ, μ)` when `g` is strongly regular, else `None`.
pub fn srg_parameters(g: &Graph) -> Option<(usize, usize, usize, usize)> {
    let n = g.node_count();
    if n == 0 {
        return None;
    }
    let k = g.degree(0);
    if (0..n).any(|v| g.degree(v) != k) {
        return None;
    }
    let (mut lambda, mut mu) = (None, None);
    for u in 0..n {
        for v in u + 1..n {
            let common = intersect_count(g.neighbors(u), g.neighbors(v));
            let slot = if g.has_edge(u, v) { &mut lambda } else { &mut mu };
            match slot {
                None => *slot = Some(common),
                Some(c) if *c != common => return None,
                _ => {}
            }
        }
    }
    Some((n, k, lambda.unwrap_or(0), mu.unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_graph(3, &[(0, 1), (1, 2)]).is_empty());
        assert_eq!(validate_graph(2, &[(0, 0)]), vec![Violation::SelfLoop { node: 0 }]);
        assert_eq!(
            validate_hypergraph(2, &[vec![0, 5]]),
            vec![Violation::MemberOutOfRange { edge: 0, node: 5, n: 2 }]
        );
        assert_eq!(
            validate_graph(3, &[(0, 1), (1, 0)]),
            vec![Violation::DuplicateEdge { u: 0, v: 1 }]
        );
        assert_eq!(validate_hypergraph(3, &[vec![]]), vec![Violation::EmptyHyperedge { edge: 0 }]);
        assert_eq!(
            validate_hypergraph(3, &[vec![1, 1]]),
            vec![Violation::RepeatedMember { edge: 0, node: 1 }]
        );
        assert!(Graph::new(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn expansion_examples() {
        let g = clique_expansion(&hg(4, &[&[0, 1, 2], &[2, 3]]));
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        let g = clique_expansion(&hg(2, &[&[0, 1]]));
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn lifting_examples() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(clique_lifting(&k3).hyperedges(), &[vec![0, 1, 2]]);
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(clique_lifting(&path).hyperedges(), &[vec![0, 1], vec![1, 2]]);
        let isolated = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(clique_lifting(&isolated).hyperedges(), &[vec![0, 1]]);
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(neighbors(&hg(3, &[&[0, 1, 2]]), 0), vec![1, 2]);
        assert_eq!(neighbors(&hg(4, &[&[0, 1], &[0, 2, 3]]), 0), vec![1, 2, 3]);
        assert!(neighbors(&hg(1, &[&[0]]), 0).is_empty());
    }

    #[test]
    fn distance_examples() {
        let path = Input::Graph(Graph::new(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(shortest_path_distance(&path, 0, 2), Some(2));
        assert_eq!(shortest_path_distance(&path, 1, 1), Some(0));
        let h = Input::Hypergraph(hg(5, &[&[0, 1, 2], &[2, 3]]));
        assert_eq!(shortest_path_distance(&h, 0, 3), Some(2));
        assert_eq!(shortest_path_distance(&h, 0, 4), None);
    }

    #[test]
    fn degrees_and_incidence() {
        let h = hg(4, &[&[0, 1, 2], &[2, 3], &[2]]);
        let d = h.degrees();
        assert_eq!(d.node, vec![1, 1, 3, 1]);
        assert_eq!(d.edge, vec![3, 2, 1]);
        assert_eq!((d.max_node, d.max_edge), (3, 3));
        let b = h.incidence();
        assert_eq!(b.get(2, 1), 1);
        assert_eq!(b.get(0, 1), 0);
        let dense = b.to_dense();
        assert_eq!(dense.column_sum()[2], 3.0);
    }

    #[test]
    fn duplicates_detected() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[1, 0]]);
        assert_eq!(h.duplicate_hyperedges(), vec![(0, 2)]);
        assert_eq!(h.degree(0), 2);
    }

    #[test]
    fn srg_detects_parameters() {
        // C5 is srg(5,2,0,1).
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(srg_parameters(&c5), Some((5, 2, 0, 1)));
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(srg_parameters(&path), None);
    }
}
