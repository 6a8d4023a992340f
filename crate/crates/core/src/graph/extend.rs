use super::{Label, PatternGraph};

/// Labels at or above this value are reserved for edge-label vertices.
pub const EDGE_LABEL_NAMESPACE: u16 = 0x8000;

/// Result of [`extend_edge_labels`]: a graph whose only labels sit on vertices.
#[derive(Clone, Debug)]
pub struct ExtendedGraph {
    pub graph: PatternGraph,
    /// `origin[i]` is the original edge replaced by vertex `original_size + i`.
    pub origin: Vec<(usize, usize)>,
    pub original_size: usize,
}

/// Replaces every edge `u -> v` labeled `l` with a fresh vertex `w` labeled
/// `EDGE_LABEL_NAMESPACE + l` and the unlabeled path `u -> w -> v`.
pub fn extend_edge_labels(g: &PatternGraph) -> ExtendedGraph {
    let n = g.size();
    let edges: Vec<_> = g.edges().collect();
    let mut labels = g.labels().to_vec();
    assert!(
        labels.iter().all(|l| l.0 < EDGE_LABEL_NAMESPACE),
        "vertex labels collide with the edge-label namespace"
    );
    labels.extend(
        edges
            .iter()
            .map(|&(_, _, l)| Label(EDGE_LABEL_NAMESPACE.checked_add(l.0).expect("edge label too large"))),
    );
    let mut graph = PatternGraph::new(labels);
    let mut origin = Vec::with_capacity(edges.len());
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        let w = n + i;
        graph.add_edge(u, w, Label(0));
        graph.add_edge(w, v, Label(0));
        origin.push((u, v));
    }
    ExtendedGraph {
        graph,
        origin,
        original_size: n,
    }
}
