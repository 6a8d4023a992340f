use std::fmt;
use std::sync::OnceLock;

use super::Label;
use crate::canonical::{canonical_form, CanonicalForm};

/// Small labeled directed pattern with a dense adjacency matrix.
///
/// Vertex ids are `0..size()`. At most one edge per ordered pair and no
/// self-loops. The canonical form is computed lazily and cached; mutation
/// clears the cache.
#[derive(Clone, Default)]
pub struct PatternGraph {
    labels: Vec<Label>,
    adjacency: Vec<Option<Label>>,
    canonical: OnceLock<CanonicalForm>,
}

impl PatternGraph {
    pub fn new(labels: Vec<Label>) -> Self {
        let n = labels.len();
        Self {
            labels,
            adjacency: vec![None; n * n],
            canonical: OnceLock::new(),
        }
    }

    pub fn from_edges(labels: Vec<Label>, edges: &[(usize, usize, Label)]) -> Self {
        let mut pattern = Self::new(labels);
        for &(u, v, l) in edges {
            pattern.add_edge(u, v, l);
        }
        pattern
    }

    /// Adds or relabels the edge `u -> v`.
    ///
    /// # Panics
    /// On a self-loop or an out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize, label: Label) {
        let n = self.size();
        assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
        assert_ne!(u, v, "self-loops are not allowed");
        self.adjacency[u * n + v] = Some(label);
        self.canonical = OnceLock::new();
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        let n = self.size();
        self.adjacency[u * n + v] = None;
        self.canonical = OnceLock::new();
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self, label: Label) -> usize {
        let n = self.size();
        let mut adjacency = vec![None; (n + 1) * (n + 1)];
        for u in 0..n {
            adjacency[u * (n + 1)..u * (n + 1) + n].copy_from_slice(&self.adjacency[u * n..(u + 1) * n]);
        }
        self.labels.push(label);
        self.adjacency = adjacency;
        self.canonical = OnceLock::new();
        n
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<Label> {
        self.adjacency[u * self.size() + v]
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        let n = self.size();
        self.adjacency
            .iter()
            .enumerate()
            .filter_map(move |(i, l)| l.map(|l| (i / n, i % n, l)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|l| l.is_some()).count()
    }

    /// Joined by an edge in either direction.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edge(u, v).is_some() || self.edge(v, u).is_some()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.size()).filter(|&w| self.edge(v, w).is_some()).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.size()).filter(|&w| self.edge(w, v).is_some()).count()
    }

    /// Undirected neighbors in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&w| w != v && self.adjacent(v, w))
    }

    /// Weak connectivity. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    fn is_connected_without(&self, skip: Option<usize>) -> bool {
        let n = self.size();
        let Some(start) = (0..n).find(|&v| Some(v) != skip) else {
            return true;
        };
        let mut seen = vec![false; n];
        if let Some(s) = skip {
            seen[s] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && self.adjacent(v, w) {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n - usize::from(skip.is_some())
    }

    /// Whether removing `v` disconnects the remaining vertices.
    pub fn is_articulation_vertex(&self, v: usize) -> bool {
        self.is_connected() && !self.is_connected_without(Some(v))
    }

    /// Every pair of distinct vertices is adjacent (in some direction).
    pub fn is_clique(&self) -> bool {
        let n = self.size();
        (0..n).all(|u| (u + 1..n).all(|v| self.adjacent(u, v)))
    }

    /// The pattern with `v` deleted; later vertices shift down by one.
    pub fn without_vertex(&self, v: usize) -> PatternGraph {
        let keep: Vec<usize> = (0..self.size()).filter(|&w| w != v).collect();
        self.induced(&keep)
    }

    /// Sub-pattern on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> PatternGraph {
        let labels = vertices.iter().map(|&v| self.labels[v]).collect();
        let mut out = PatternGraph::new(labels);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if let Some(l) = self.edge(u, v) {
                    out.add_edge(i, j, l);
                }
            }
        }
        out
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> PatternGraph {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut labels = vec![Label(0); n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v];
        }
        let mut out = PatternGraph::new(labels);
        for (u, v, l) in self.edges() {
            out.add_edge(perm[u], perm[v], l);
        }
        out
    }

    /// Cached canonical form.
    ///
    /// # Panics
    /// If the pattern exceeds [`crate::canonical::MAX_PATTERN_SIZE`]; use
    /// [`canonical_form`] for a fallible variant.
    pub fn canonical(&self) -> &CanonicalForm {
        self.canonical
            .get_or_init(|| canonical_form(self).unwrap_or_else(|e| panic!("pattern cannot be canonicalized: {e}")))
    }

    /// Canonical encoding bytes.
    pub fn code(&self) -> &[u8] {
        self.canonical().encoding()
    }
}

impl PartialEq for PatternGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adjacency == other.adjacency
    }
}

impl Eq for PatternGraph {}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<u16> = self.labels.iter().map(|l| l.0).collect();
        let edges: Vec<(usize, usize, u16)> = self.edges().map(|(u, v, l)| (u, v, l.0)).collect();
        f.debug_struct("PatternGraph")
            .field("labels", &labels)
            .field("edges", &edges)
            .finish()
    }
}
