use std::collections::HashSet;

use super::{GraphError, Label, LabelTable, PatternGraph};

/// One adjacency entry: the neighbor and the label of the connecting edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Neighbor {
    pub vertex: u32,
    pub label: Label,
}

/// Immutable vertex- and edge-labeled directed graph in CSR layout.
///
/// Adjacency rows are sorted by neighbor id, so edge lookups are binary
/// searches. `in` rows are the exact transpose of `out` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataGraph {
    vertex_labels: Vec<Label>,
    out_offsets: Vec<usize>,
    out_neighbors: Vec<Neighbor>,
    in_offsets: Vec<usize>,
    in_neighbors: Vec<Neighbor>,
    label_index: Vec<Vec<u32>>,
    vertex_label_table: LabelTable,
    edge_label_table: LabelTable,
    original_ids: Vec<u64>,
    undirected: bool,
    dropped_edges: usize,
}

impl DataGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    /// Number of directed edges.
    pub fn edge_count(&self) -> usize {
        self.out_neighbors.len()
    }

    pub fn label(&self, v: u32) -> Label {
        self.vertex_labels[v as usize]
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertex_labels
    }

    pub fn out_neighbors(&self, v: u32) -> &[Neighbor] {
        let v = v as usize;
        &self.out_neighbors[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: u32) -> &[Neighbor] {
        let v = v as usize;
        &self.in_neighbors[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.out_neighbors(v).len() + self.in_neighbors(v).len()
    }

    /// Label of the edge `src -> dst`, if present.
    pub fn edge_label(&self, src: u32, dst: u32) -> Option<Label> {
        let row = self.out_neighbors(src);
        row.binary_search_by_key(&dst, |n| n.vertex).ok().map(|i| row[i].label)
    }

    pub fn has_edge(&self, src: u32, dst: u32) -> bool {
        self.edge_label(src, dst).is_some()
    }

    /// Sorted vertex ids carrying `label`; empty for labels not in the graph.
    pub fn vertices_with_label(&self, label: Label) -> &[u32] {
        self.label_index.get(label.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn label_frequency(&self, label: Label) -> usize {
        self.vertices_with_label(label).len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, Label)> + '_ {
        (0..self.vertex_count() as u32)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |n| (u, n.vertex, n.label)))
    }

    pub fn vertex_label_table(&self) -> &LabelTable {
        &self.vertex_label_table
    }

    pub fn edge_label_table(&self) -> &LabelTable {
        &self.edge_label_table
    }

    /// Id the vertex had in the input file.
    pub fn original_id(&self, v: u32) -> u64 {
        self.original_ids[v as usize]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// True when every input edge was loaded as a pair of opposite directed edges.
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Self-loops and duplicate edges skipped during loading.
    pub fn dropped_edges(&self) -> usize {
        self.dropped_edges
    }

    /// Pattern on `vertex_ids` (renumbered in input order) with every edge of
    /// the data graph among them.
    pub fn induced_pattern(&self, vertex_ids: &[u32]) -> Result<PatternGraph, GraphError> {
        let mut seen = HashSet::with_capacity(vertex_ids.len());
        for &v in vertex_ids {
            if v as usize >= self.vertex_count() {
                return Err(GraphError::OutOfRange(v as usize));
            }
            if !seen.insert(v) {
                return Err(GraphError::DuplicateId(v as usize));
            }
        }
        let labels = vertex_ids.iter().map(|&v| self.label(v)).collect();
        let mut pattern = PatternGraph::new(labels);
        for (i, &u) in vertex_ids.iter().enumerate() {
            for (j, &v) in vertex_ids.iter().enumerate() {
                if let Some(label) = self.edge_label(u, v) {
                    pattern.add_edge(i, j, label);
                }
            }
        }
        Ok(pattern)
    }
}

/// Accumulates vertices and edges, then freezes them into a [`DataGraph`].
#[derive(Debug, Default)]
pub struct DataGraphBuilder {
    vertex_labels: Vec<Label>,
    original_ids: Vec<u64>,
    edges: Vec<(u32, u32, Label)>,
    edge_set: HashSet<(u32, u32)>,
    vertex_label_table: LabelTable,
    edge_label_table: LabelTable,
    undirected: bool,
    dropped_edges: usize,
}

impl DataGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_tables(vertex_labels: LabelTable, edge_labels: LabelTable) -> Self {
        Self {
            vertex_label_table: vertex_labels,
            edge_label_table: edge_labels,
            ..Self::default()
        }
    }

    pub fn undirected(mut self, undirected: bool) -> Self {
        self.undirected = undirected;
        self
    }

    pub fn vertex_label_table_mut(&mut self) -> &mut LabelTable {
        &mut self.vertex_label_table
    }

    pub fn edge_label_table_mut(&mut self) -> &mut LabelTable {
        &mut self.edge_label_table
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    /// Adds a vertex and returns its dense id.
    pub fn add_vertex(&mut self, label: Label, original_id: u64) -> u32 {
        let id = self.vertex_labels.len() as u32;
        self.vertex_labels.push(label);
        self.original_ids.push(original_id);
        id
    }

    /// Adds `src -> dst`, and `dst -> src` too when the builder is undirected.
    /// Returns `false` (and counts a drop) for self-loops or edges already present.
    pub fn add_edge(&mut self, src: u32, dst: u32, label: Label) -> bool {
        assert!((src as usize) < self.vertex_labels.len() && (dst as usize) < self.vertex_labels.len());
        if src == dst || self.edge_set.contains(&(src, dst)) {
            self.dropped_edges += 1;
            return false;
        }
        if self.undirected && self.edge_set.contains(&(dst, src)) {
            self.dropped_edges += 1;
            return false;
        }
        self.push_directed(src, dst, label);
        if self.undirected {
            self.push_directed(dst, src, label);
        }
        true
    }

    pub fn contains_edge(&self, src: u32, dst: u32) -> bool {
        self.edge_set.contains(&(src, dst))
    }

    fn push_directed(&mut self, src: u32, dst: u32, label: Label) {
        self.edge_set.insert((src, dst));
        self.edges.push((src, dst, label));
    }

    pub fn build(self) -> DataGraph {
        let n = self.vertex_labels.len();
        let (out_offsets, out_neighbors) = csr(n, self.edges.iter().map(|&(s, d, l)| (s, d, l)));
        let (in_offsets, in_neighbors) = csr(n, self.edges.iter().map(|&(s, d, l)| (d, s, l)));

        let label_slots = self
            .vertex_labels
            .iter()
            .map(|l| l.index() + 1)
            .max()
            .unwrap_or(0)
            .max(self.vertex_label_table.len());
        let mut label_index = vec![Vec::new(); label_slots];
        for (v, label) in self.vertex_labels.iter().enumerate() {
            label_index[label.index()].push(v as u32);
        }

        DataGraph {
            vertex_labels: self.vertex_labels,
            out_offsets,
            out_neighbors,
            in_offsets,
            in_neighbors,
            label_index,
            vertex_label_table: self.vertex_label_table,
            edge_label_table: self.edge_label_table,
            original_ids: self.original_ids,
            undirected: self.undirected,
            dropped_edges: self.dropped_edges,
        }
    }
}

fn csr(n: usize, edges: impl Iterator<Item = (u32, u32, Label)>) -> (Vec<usize>, Vec<Neighbor>) {
    let mut rows: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
    for (from, to, label) in edges {
        rows[from as usize].push(Neighbor { vertex: to, label });
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut flat = Vec::new();
    offsets.push(0);
    for mut row in rows {
        row.sort_unstable_by_key(|nb| nb.vertex);
        flat.extend(row);
        offsets.push(flat.len());
    }
    (offsets, flat)
}
