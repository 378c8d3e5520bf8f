//! Local degree profiles: `[d_v, min, max, mean, median, std]` of the
//! neighbor degrees of each node.

use crate::encoding::EncodingMatrix;
use crate::hypercore::{self, Graph, Hypergraph};
use crate::stats::five_number_summary;

fn profile(kind: &str, degrees: &[usize], neighbors: impl Fn(usize) -> Vec<usize>) -> EncodingMatrix {
    let mut flagged = Vec::new();
    let rows = (0..degrees.len())
        .map(|v| {
            let dn: Vec<f64> = neighbors(v).into_iter().map(|u| degrees[u] as f64).collect();
            let mut row = vec![degrees[v] as f64];
            match five_number_summary(&dn) {
                Some(s) => row.extend(s),
                None => {
                    flagged.push(v);
                    row.extend([0.0; 5]);
                }
            }
            row
        })
        .collect();
    let mut m = EncodingMatrix::from_rows(kind, rows, 6).expect("finite degrees");
    m.flagged_rows = flagged;
    m
}

/// LDP with graph degrees. Isolated nodes give a flagged `[0, 0, 0, 0, 0, 0]`.
pub fn ldp(g: &Graph) -> EncodingMatrix {
    profile("ldp", &g.degrees(), |v| g.neighbors(v).to_vec())
}

/// H-LDP: `d_v` counts hyperedges at `v` (duplicates included) and the
/// neighborhood is hyperedge co-membership.
pub fn hldp(h: &Hypergraph) -> EncodingMatrix {
    let degrees: Vec<usize> = (0..h.node_count()).map(|v| h.degree(v)).collect();
    profile("h-ldp", &degrees, |v| hypercore::neighbors(h, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hypercore::clique_lifting;

    fn rows(m: &EncodingMatrix) -> Vec<Vec<f64>> {
        m.to_rows()
    }

    #[test]
    fn graph_examples() {
        assert!(rows(&ldp(&fixtures::complete(3))).iter().all(|r| r == &[2.0, 2.0, 2.0, 2.0, 2.0, 0.0]));
        let star = ldp(&fixtures::star(3));
        assert_eq!(star.row(0), &[3.0, 1.0, 1.0, 1.0, 1.0, 0.0]);
        assert_eq!(star.row(2), &[1.0, 3.0, 3.0, 3.0, 3.0, 0.0]);
        for g in [fixtures::rook(), fixtures::shrikhande()] {
            assert!(rows(&ldp(&g)).iter().all(|r| r == &[6.0, 6.0, 6.0, 6.0, 6.0, 0.0]));
        }
    }

    #[test]
    fn hypergraph_examples() {
        let rook = hldp(&clique_lifting(&fixtures::rook()));
        assert!(rows(&rook).iter().all(|r| r == &[2.0, 2.0, 2.0, 2.0, 2.0, 0.0]));
        let shri = hldp(&clique_lifting(&fixtures::shrikhande()));
        assert!(rows(&shri).iter().all(|r| r == &[6.0, 6.0, 6.0, 6.0, 6.0, 0.0]));
        let tri = hldp(&fixtures::triangle_hypergraph());
        assert!(rows(&tri).iter().all(|r| r == &[1.0, 1.0, 1.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn two_uniform_agrees_with_graph() {
        let g = fixtures::star(4);
        assert_eq!(hldp(&g.to_two_uniform()).values(), ldp(&g).values());
        let lone = ldp(&Graph::new(2, &[]).unwrap());
        assert_eq!(lone.flagged_rows, vec![0, 1]);
    }
}
