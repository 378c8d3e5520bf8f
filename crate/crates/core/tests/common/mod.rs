#![allow(dead_code)]

use hyperenc::hypercore::Graph;
use rand::Rng;

/// Brute-force optimal transport: minimum cost over all vertices of the
/// transportation polytope. Each vertex is a basic solution supported on a
/// spanning tree of the complete bipartite graph between supply and demand
/// points, so enumerating edge subsets of size `m + k − 1` that form a tree
/// and solving the tree flows covers every candidate.
pub fn transport_oracle(a: &[f64], b: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (m, k) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let need = m + k - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(need);
    subsets(&cells, need, 0, &mut chosen, &mut |tree| {
        if let Some(flow) = tree_flow(a, b, tree) {
            let c: f64 = tree.iter().zip(&flow).map(|(&(i, j), f)| f * cost[i][j]).sum();
            best = best.min(c);
        }
    });
    best
}

fn subsets<F: FnMut(&[(usize, usize)])>(
    cells: &[(usize, usize)],
    need: usize,
    start: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut F,
) {
    if chosen.len() == need {
        visit(chosen);
        return;
    }
    for idx in start..cells.len() {
        if cells.len() - idx < need - chosen.len() {
            break;
        }
        chosen.push(cells[idx]);
        subsets(cells, need, idx + 1, chosen, visit);
        chosen.pop();
    }
}

/// Flows on a spanning tree meeting the marginals, by repeatedly settling
/// a leaf. `None` if the cells do not form a tree or a flow is negative.
fn tree_flow(a: &[f64], b: &[f64], tree: &[(usize, usize)]) -> Option<Vec<f64>> {
    let m = a.len();
    let mut left: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut deg = vec![0usize; left.len()];
    for &(i, j) in tree {
        deg[i] += 1;
        deg[m + j] += 1;
    }
    if deg.iter().any(|&d| d == 0) {
        return None;
    }
    let mut flow = vec![f64::NAN; tree.len()];
    let mut done = vec![false; tree.len()];
    for _ in 0..tree.len() {
        let (e, leaf) = tree.iter().enumerate().filter(|(e, _)| !done[*e]).find_map(|(e, &(i, j))| {
            if deg[i] == 1 {
                Some((e, i))
            } else if deg[m + j] == 1 {
                Some((e, m + j))
            } else {
                None
            }
        })?;
        let (i, j) = tree[e];
        let other = if leaf == i { m + j } else { i };
        let f = left[leaf];
        if f < -1e-12 {
            return None;
        }
        flow[e] = f;
        left[leaf] = 0.0;
        left[other] -= f;
        deg[leaf] -= 1;
        deg[other] -= 1;
        done[e] = true;
    }
    Some(flow)
}

/// Random probability vector of the given length.
pub fn random_masses<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

/// Connected random graph: a random spanning tree plus extra edges.
pub fn connected_graph<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}
