//! Named fixtures and seeded random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypercore::{Graph, Hypergraph, Input};

/// 4×4 Rook graph: cells of Z4×Z4, adjacent iff same row or column.
pub fn rook() -> Graph {
    let mut edges = Vec::new();
    for a in 0..16usize {
        for b in a + 1..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                edges.push((a, b));
            }
        }
    }
    Graph::new(16, &edges).unwrap()
}

/// Shrikhande graph: Cayley graph on Z4×Z4 with connection set
/// {±(1,0), ±(0,1), ±(1,1)}.
pub fn shrikhande() -> Graph {
    let gens = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let mut edges = Vec::new();
    for a in 0..16usize {
        let (r, c) = (a / 4, a % 4);
        for (dr, dc) in gens {
            let b = ((r + dr) % 4) * 4 + (c + dc) % 4;
            if a < b {
                edges.push((a, b));
            }
        }
    }
    Graph::new(16, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::new(n, &edges).unwrap()
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::new(n, &edges).unwrap()
}

/// Center 0, leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::new(leaves + 1, &edges).unwrap()
}

/// One hyperedge `{0,1,2}`.
pub fn triangle_hypergraph() -> Hypergraph {
    Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap()
}

pub const FIXTURE_NAMES: &[&str] = &["rook", "shrikhande", "k2", "k3", "path3", "triangle_hg"];

pub fn by_name(name: &str) -> Option<Input> {
    Some(match name {
        "rook" => rook().into(),
        "shrikhande" => shrikhande().into(),
        "k2" => complete(2).into(),
        "k3" => complete(3).into(),
        "path3" => path(3).into(),
        "triangle_hg" => triangle_hypergraph().into(),
        _ => return None,
    })
}

/// Erdős–Rényi G(n, p).
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

/// Random hypergraph with `m` hyperedges whose sizes are uniform in
/// `sizes`, where no node joins more than `max_degree` hyperedges. Stops
/// early if the degree cap leaves too few eligible nodes.
pub fn random_hypergraph<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    sizes: std::ops::RangeInclusive<usize>,
    max_degree: usize,
    rng: &mut R,
) -> Hypergraph {
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = (0..n).collect();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let size = rng.gen_range(sizes.clone());
        if open.len() < size {
            break;
        }
        let picked: Vec<usize> = open.choose_multiple(rng, size).copied().collect();
        for &v in &picked {
            degree[v] += 1;
        }
        if picked.iter().any(|&v| degree[v] >= max_degree) {
            open.retain(|&v| degree[v] < max_degree);
        }
        edges.push(picked);
    }
    Hypergraph::new(n, edges).unwrap()
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::srg_parameters;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rook_and_shrikhande_are_srg_16_6_2_2() {
        for g in [rook(), shrikhande()] {
            assert_eq!(g.edge_count(), 48);
            assert_eq!(srg_parameters(&g), Some((16, 6, 2, 2)));
        }
    }

    #[test]
    fn random_hypergraph_respects_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hypergraph(200, 300, 2..=5, 4, &mut rng);
        let d = h.degrees();
        assert!(d.max_node <= 4);
        assert!(d.max_edge <= 5);
    }

    #[test]
    fn names_resolve() {
        for name in FIXTURE_NAMES {
            assert!(by_name(name).is_some());
        }
        assert!(by_name("petersen").is_none());
    }
}
