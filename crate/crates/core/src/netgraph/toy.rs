use super::DirectedGraph;

/// The bundled eight-node test graph in edge-list form (1-indexed labels).
pub const TOY_EDGE_LIST: &str = include_str!("../../data/toy.edges");

const TOY_EDGES: [(usize, usize); 18] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 1),
    (2, 3),
    (2, 4),
    (3, 1),
    (3, 2),
    (3, 4),
    (4, 1),
    (4, 2),
    (4, 3),
    (3, 5),
    (6, 5),
    (5, 7),
    (7, 6),
    (7, 8),
    (8, 2),
];

/// Complete core on nodes 1..=4, a peripheral cycle 5 -> 7 -> 6 -> 5 fed by
/// 3 -> 5, and the path 7 -> 8 -> 2 back into the core. Node `k` (1-indexed
/// label) has index `k - 1`.
pub fn toy_graph() -> DirectedGraph {
    let edges = TOY_EDGES.iter().map(|&(s, t)| (s - 1, t - 1)).collect();
    DirectedGraph::new(8, edges)
        .and_then(|g| g.with_labels((1..=8).map(|k| k.to_string()).collect()))
        .expect("toy graph is well formed")
}
