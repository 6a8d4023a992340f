//! Canonical forms and automorphism groups for small pattern graphs.
//!
//! The canonical form is the lexicographically smallest encoding over all
//! vertex orders reachable by individualization-refinement. The search tree
//! is equivariant under relabeling, so isomorphic graphs reach the same set
//! of leaf encodings. Automorphisms found along the way prune sibling
//! branches that lie in one orbit.
//!
//! Encoding layout (big-endian):
//! `n: u16`, `n` vertex labels as `u16` in canonical order, the `n x n`
//! adjacency bit matrix row-major (MSB first, zero padded to a byte), then
//! one `u16` edge label per set bit in the same row-major order.

use std::fmt;

use crate::graph::PatternGraph;

/// Hard limit on the number of vertices accepted by canonicalization.
pub const MAX_PATTERN_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CanonicalError {
    #[error("pattern has {size} vertices; the limit is {limit}")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    encoding: Vec<u8>,
    hash: u64,
    canon_perm: Vec<usize>,
}

impl CanonicalForm {
    pub fn encoding(&self) -> &[u8] {
        &self.encoding
    }

    pub fn hash(&self) -> u64 {
        self.hash
    }

    /// `canon_perm()[v]` is the canonical position of input vertex `v`.
    pub fn canon_perm(&self) -> &[usize] {
        &self.canon_perm
    }

    pub fn hex(&self) -> String {
        hex::encode(&self.encoding)
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CanonicalForm")
            .field("encoding", &self.hex())
            .field("hash", &format_args!("{:016x}", self.hash))
            .field("canon_perm", &self.canon_perm)
            .finish()
    }
}

/// Label- and edge-preserving permutation: vertex `v` maps to `perm[v]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// Wraps a permutation without checking that it preserves a graph.
    pub fn from_perm(perm: Vec<usize>) -> Self {
        Self { perm }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `self` after `first`: `v -> self(first(v))`.
    pub fn compose(&self, first: &Automorphism) -> Automorphism {
        Automorphism {
            perm: first.perm.iter().map(|&v| self.perm[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (v, &p) in self.perm.iter().enumerate() {
            inv[p] = v;
        }
        Automorphism { perm: inv }
    }

    /// Whether the permutation preserves labels and labeled edges of `g`.
    pub fn preserves(&self, g: &PatternGraph) -> bool {
        let n = g.size();
        self.perm.len() == n
            && (0..n).all(|v| g.label(v) == g.label(self.perm[v]))
            && (0..n).all(|u| (0..n).all(|v| g.edge(u, v) == g.edge(self.perm[u], self.perm[v])))
    }
}

fn check_size(g: &PatternGraph) -> Result<(), CanonicalError> {
    if g.size() > MAX_PATTERN_SIZE {
        Err(CanonicalError::TooLarge {
            size: g.size(),
            limit: MAX_PATTERN_SIZE,
        })
    } else {
        Ok(())
    }
}

/// 64-bit FNV-1a.
fn digest(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Encodes `g` with vertex `v` placed at position `perm[v]`.
pub fn encode_with(g: &PatternGraph, perm: &[usize]) -> Vec<u8> {
    let n = g.size();
    let mut order = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        order[p] = v;
    }
    let mut out = Vec::with_capacity(2 + 2 * n + (n * n).div_ceil(8));
    out.extend_from_slice(&(n as u16).to_be_bytes());
    for &v in &order {
        out.extend_from_slice(&g.label(v).0.to_be_bytes());
    }
    let mut bits = vec![0u8; (n * n).div_ceil(8)];
    let mut edge_labels = Vec::new();
    for (i, &u) in order.iter().enumerate() {
        for (j, &v) in order.iter().enumerate() {
            if let Some(l) = g.edge(u, v) {
                let bit = i * n + j;
                bits[bit / 8] |= 0x80 >> (bit % 8);
                edge_labels.extend_from_slice(&l.0.to_be_bytes());
            }
        }
    }
    out.extend_from_slice(&bits);
    out.extend_from_slice(&edge_labels);
    out
}

/// Colors are cell start indices: `color[v]` is the number of vertices in
/// strictly smaller cells.
fn initial_colors(g: &PatternGraph) -> Vec<usize> {
    let labels = g.labels();
    labels
        .iter()
        .map(|l| labels.iter().filter(|m| m < &l).count())
        .collect()
}

/// Refines to the coarsest equitable partition finer than `colors`.
fn refine(g: &PatternGraph, colors: &mut [usize]) {
    let n = g.size();
    let mut cells = count_cells(colors);
    loop {
        let signatures: Vec<(usize, Vec<(usize, u16, u8)>)> = (0..n)
            .map(|v| {
                let mut around = Vec::new();
                for w in 0..n {
                    if let Some(l) = g.edge(v, w) {
                        around.push((colors[w], l.0, 0));
                    }
                    if let Some(l) = g.edge(w, v) {
                        around.push((colors[w], l.0, 1));
                    }
                }
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| signatures[a].cmp(&signatures[b]));
        let mut start = 0;
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && signatures[v] != signatures[order[i - 1]] {
                start = i;
            }
            colors[v] = start;
        }
        let refined = count_cells(colors);
        if refined == cells {
            return;
        }
        cells = refined;
    }
}

fn count_cells(colors: &[usize]) -> usize {
    let mut seen = vec![false; colors.len()];
    colors
        .iter()
        .filter(|&&c| !std::mem::replace(&mut seen[c], true))
        .count()
}

struct Search<'a> {
    g: &'a PatternGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.g.size();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            self.leaf(colors);
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &members {
            if !explored.is_empty() && self.in_explored_orbit(w, &explored, path) {
                continue;
            }
            explored.push(w);
            let mut child = colors.clone();
            for &m in &members {
                if m != w {
                    child[m] = target + 1;
                }
            }
            refine(self.g, &mut child);
            path.push(w);
            self.descend(child, path);
            path.pop();
        }
    }

    /// Whether `w` shares an orbit with an explored sibling under the known
    /// automorphisms that fix the current path pointwise.
    fn in_explored_orbit(&self, w: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.g.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for aut in &self.automorphisms {
            if path.iter().all(|&p| aut[p] == p) {
                any = true;
                for (v, &image) in aut.iter().enumerate() {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, image));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, w);
        explored.iter().any(|&u| find(&mut parent, u) == root)
    }

    fn leaf(&mut self, perm: Vec<usize>) {
        let encoding = encode_with(self.g, &perm);
        match &self.best {
            None => self.best = Some((encoding, perm)),
            Some((best, best_perm)) => {
                if encoding < *best {
                    self.best = Some((encoding, perm));
                } else if encoding == *best {
                    // best_perm^-1 . perm maps the graph onto itself.
                    let mut inv = vec![0; perm.len()];
                    for (v, &p) in best_perm.iter().enumerate() {
                        inv[p] = v;
                    }
                    let aut: Vec<usize> = perm.iter().map(|&p| inv[p]).collect();
                    self.automorphisms.push(aut);
                }
            }
        }
    }
}

pub fn canonical_form(g: &PatternGraph) -> Result<CanonicalForm, CanonicalError> {
    check_size(g)?;
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    let mut search = Search {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    search.descend(colors, &mut Vec::new());
    let (encoding, canon_perm) = search.best.unwrap_or_else(|| (encode_with(g, &[]), Vec::new()));
    Ok(CanonicalForm {
        hash: digest(&encoding),
        encoding,
        canon_perm,
    })
}

/// Compares hashes first, then encodings.
pub fn are_isomorphic(g1: &PatternGraph, g2: &PatternGraph) -> Result<bool, CanonicalError> {
    check_size(g1)?;
    check_size(g2)?;
    if g1.size() != g2.size() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let (c1, c2) = (g1.canonical(), g2.canonical());
    if c1.hash() != c2.hash() {
        return Ok(false);
    }
    Ok(c1.encoding() == c2.encoding())
}

/// All automorphisms of `g`, identity included, in lexicographic order.
pub fn automorphism_group(g: &PatternGraph) -> Result<Vec<Automorphism>, CanonicalError> {
    check_size(g)?;
    let n = g.size();
    let mut colors = initial_colors(g);
    refine(g, &mut colors);
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(g, &colors, 0, &mut perm, &mut used, &mut out);
    out.sort();
    Ok(out)
}

fn extend_automorphism(
    g: &PatternGraph,
    colors: &[usize],
    v: usize,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Automorphism>,
) {
    let n = g.size();
    if v == n {
        out.push(Automorphism { perm: perm.clone() });
        return;
    }
    for w in 0..n {
        if used[w] || colors[w] != colors[v] {
            continue;
        }
        let consistent = (0..v).all(|u| g.edge(u, v) == g.edge(perm[u], w) && g.edge(v, u) == g.edge(w, perm[u]));
        if !consistent {
            continue;
        }
        perm[v] = w;
        used[w] = true;
        extend_automorphism(g, colors, v + 1, perm, used, out);
        used[w] = false;
    }
    perm[v] = usize::MAX;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;

    const RED: Label = Label(0);
    const BLUE: Label = Label(1);
    const E: Label = Label(0);

    fn bidirectional(labels: Vec<Label>, pairs: &[(usize, usize)]) -> PatternGraph {
        let mut g = PatternGraph::new(labels);
        for &(u, v) in pairs {
            g.add_edge(u, v, E);
            g.add_edge(v, u, E);
        }
        g
    }

    /// Triangle u1 (red), u2 (blue), u3 (red).
    fn p1() -> PatternGraph {
        bidirectional(vec![RED, BLUE, RED], &[(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn swapping_red_vertices_keeps_encoding() {
        let g = p1();
        let swapped = g.permuted(&[2, 1, 0]);
        assert_eq!(
            canonical_form(&g).unwrap().encoding(),
            canonical_form(&swapped).unwrap().encoding()
        );
    }

    #[test]
    fn single_vertex_encoding() {
        let g = PatternGraph::new(vec![Label(3)]);
        let c = canonical_form(&g).unwrap();
        assert_eq!(c.encoding(), &[0, 1, 0, 3, 0]);
        assert_eq!(c.canon_perm(), &[0]);
    }

    #[test]
    fn different_label_multisets() {
        let p2 = bidirectional(vec![RED, BLUE, BLUE], &[(0, 1), (1, 2), (0, 2)]);
        assert!(!are_isomorphic(&p1(), &p2).unwrap());
    }

    #[test]
    fn edge_direction_matters() {
        let ab = PatternGraph::from_edges(vec![RED, BLUE], &[(0, 1, E)]);
        let ba = PatternGraph::from_edges(vec![RED, BLUE], &[(1, 0, E)]);
        assert!(!are_isomorphic(&ab, &ba).unwrap());
        assert!(are_isomorphic(&ab, &ab).unwrap());
    }

    #[test]
    fn edge_labels_matter() {
        let a = PatternGraph::from_edges(vec![RED, RED], &[(0, 1, Label(1))]);
        let b = PatternGraph::from_edges(vec![RED, RED], &[(0, 1, Label(2))]);
        assert!(!are_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn p1_has_two_automorphisms() {
        let auts = automorphism_group(&p1()).unwrap();
        let perms: Vec<&[usize]> = auts.iter().map(|a| a.perm()).collect();
        assert_eq!(perms, vec![&[0, 1, 2][..], &[2, 1, 0][..]]);
    }

    #[test]
    fn monochrome_triangle_has_six() {
        let g = bidirectional(vec![RED; 3], &[(0, 1), (1, 2), (0, 2)]);
        let auts = automorphism_group(&g).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(auts.iter().all(|a| a.preserves(&g)));
    }

    #[test]
    fn distinct_endpoints_only_identity() {
        let g = PatternGraph::from_edges(vec![RED, BLUE], &[(0, 1, E)]);
        let auts = automorphism_group(&g).unwrap();
        assert_eq!(auts, vec![Automorphism::identity(2)]);
    }

    #[test]
    fn oversize_is_rejected() {
        let g = PatternGraph::new(vec![RED; MAX_PATTERN_SIZE + 1]);
        assert!(matches!(canonical_form(&g), Err(CanonicalError::TooLarge { .. })));
        assert!(automorphism_group(&g).is_err());
    }

    #[test]
    fn symmetric_star_is_fast_and_stable() {
        // 1 hub + 9 identical leaves: 9! leaves without orbit pruning.
        let mut g = PatternGraph::new(vec![RED; 10]);
        for leaf in 1..10 {
            g.add_edge(0, leaf, E);
        }
        let c1 = canonical_form(&g).unwrap();
        let c2 = canonical_form(&g.permuted(&[9, 8, 7, 6, 5, 4, 3, 2, 1, 0])).unwrap();
        assert_eq!(c1.encoding(), c2.encoding());
    }

    #[test]
    fn empty_graph() {
        let g = PatternGraph::new(vec![]);
        let c = canonical_form(&g).unwrap();
        assert_eq!(c.encoding(), &[0, 0]);
        assert_eq!(automorphism_group(&g).unwrap().len(), 1);
    }
}
