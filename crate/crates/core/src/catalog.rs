//! Ready-made systems: the classic Bedford–McMullen carpet and a three-vertex
//! sofic chain over bases (2, 3, 4).

use crate::symbolic::{Chain, DigitSystem, Edge, LabeledGraph};

/// Bases (2, 3) with digits {(0,0), (1,1), (0,2)}.
pub fn carpet() -> DigitSystem {
    DigitSystem::new(vec![2, 3], vec![vec![0, 0], vec![1, 1], vec![0, 2]])
        .expect("carpet is a valid digit system")
}

pub const SOFIC_BASES: [u32; 3] = [2, 3, 4];

/// Per-prefix edge counts of the three-vertex sofic example. Entry `[i][j]`
/// counts edges from vertex `j` to vertex `i` whose label starts with the
/// given prefix; the prefix (1, 1) has no edges.
pub const SOFIC_COUNT_MATRICES: [([u32; 2], [[u32; 3]; 3]); 3] = [
    ([0, 0], [[0, 1, 1], [0, 0, 1], [1, 1, 0]]),
    ([0, 1], [[1, 1, 1], [1, 1, 0], [0, 1, 2]]),
    ([1, 0], [[1, 2, 2], [0, 1, 2], [2, 2, 1]]),
];

/// A labelled graph on vertices "1", "2", "3" realizing
/// [`SOFIC_COUNT_MATRICES`].
///
/// Within each (source, prefix) group the edges are sorted by target and the
/// third coordinate is the edge's rank modulo 4. Two groups have five edges,
/// so each reuses the third coordinate 0 on edges with different targets and
/// the graph is not right-resolving.
pub fn sofic_example_graph() -> LabeledGraph {
    let mut edges = Vec::new();
    for (prefix, m) in SOFIC_COUNT_MATRICES {
        for source in 0..3 {
            let mut rank = 0u32;
            for (target, row) in m.iter().enumerate() {
                for _ in 0..row[source] {
                    edges.push(Edge {
                        source,
                        target,
                        label: vec![prefix[0], prefix[1], rank % SOFIC_BASES[2]],
                    });
                    rank += 1;
                }
            }
        }
    }
    LabeledGraph::new(vec!["1".into(), "2".into(), "3".into()], edges)
        .expect("every vertex has outgoing edges")
}

pub fn sofic_example_chain() -> Chain {
    Chain::sofic(SOFIC_BASES.to_vec(), sofic_example_graph()).expect("labels fit the bases")
}

/// The carpet presented as a one-vertex sofic chain.
pub fn carpet_as_sofic() -> Chain {
    let sys = carpet();
    Chain::sofic(sys.bases().to_vec(), LabeledGraph::single_vertex(sys.digits()))
        .expect("carpet labels fit the bases")
}
