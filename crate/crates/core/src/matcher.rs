//! Backtracking subgraph-monomorphism search.
//!
//! [`count_mal`] greedily builds a maximal set of vertex-disjoint embeddings:
//! roots are visited in a fixed order, each root contributes at most one
//! embedding, and vertices of accepted embeddings are never reused.
//! [`enumerate_all`] lists every monomorphism and backs the exact metrics.

use crate::graph::{DataGraph, Label, PatternGraph};

/// Default cap on the number of embeddings an exhaustive enumeration returns.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10_000_000;

/// Injective, label- and edge-preserving map from pattern to data vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    map: Vec<u32>,
}

impl Embedding {
    pub fn new(map: Vec<u32>) -> Self {
        Self { map }
    }

    /// Data vertex assigned to pattern vertex `p`.
    pub fn image(&self, p: usize) -> u32 {
        self.map[p]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Sorted data vertices covered by this embedding.
    pub fn vertex_set(&self) -> Vec<u32> {
        let mut vs = self.map.clone();
        vs.sort_unstable();
        vs
    }

    pub fn is_valid(&self, g: &DataGraph, p: &PatternGraph) -> bool {
        if self.map.len() != p.size() {
            return false;
        }
        let mut seen = self.vertex_set();
        seen.dedup();
        seen.len() == self.map.len()
            && self.map.iter().all(|&d| (d as usize) < g.vertex_count())
            && (0..p.size()).all(|v| p.label(v) == g.label(self.map[v]))
            && p.edges()
                .all(|(u, v, l)| g.edge_label(self.map[u], self.map[v]) == Some(l))
    }
}

/// Fixed-size bit set over data vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.words[v as usize / 64] & (1 << (v % 64)) != 0
    }

    pub fn insert(&mut self, v: u32) {
        self.words[v as usize / 64] |= 1 << (v % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len as u32).filter(|&v| self.contains(v))
    }
}

/// Order in which pattern vertices are matched.
///
/// Starts at the vertex whose label is rarest in `g` (ties: higher degree,
/// then lower id). Each next vertex is adjacent to an earlier one, preferring
/// more links into the prefix, then rarer label, higher degree, lower id.
pub fn matching_order(p: &PatternGraph, g: &DataGraph) -> Vec<usize> {
    let n = p.size();
    let degree = |v: usize| p.in_degree(v) + p.out_degree(v);
    let frequency = |v: usize| g.label_frequency(p.label(v));
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let frontier: Vec<usize> = (0..n)
            .filter(|&v| !placed[v] && order.iter().any(|&u| p.adjacent(u, v)))
            .collect();
        let pool: Vec<usize> = if frontier.is_empty() {
            (0..n).filter(|&v| !placed[v]).collect()
        } else {
            frontier
        };
        let next = pool
            .into_iter()
            .min_by_key(|&v| {
                let links = order.iter().filter(|&&u| p.adjacent(u, v)).count();
                (std::cmp::Reverse(links), frequency(v), std::cmp::Reverse(degree(v)), v)
            })
            .expect("pool is non-empty");
        placed[next] = true;
        order.push(next);
    }
    order
}

#[derive(Clone, Copy, Debug)]
enum Expand {
    Out,
    In,
}

#[derive(Clone, Debug)]
struct Step {
    vertex: usize,
    label: Label,
    /// Position in the order of the vertex whose image seeds candidates.
    parent: Option<(usize, Expand, Label)>,
    /// (position, label of `earlier -> this`, label of `this -> earlier`)
    checks: Vec<(usize, Option<Label>, Option<Label>)>,
}

/// Precomputed search plan for one pattern.
struct Plan {
    steps: Vec<Step>,
}

impl Plan {
    fn new(p: &PatternGraph, g: &DataGraph) -> Self {
        let order = matching_order(p, g);
        let steps = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let checks: Vec<_> = order[..i]
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| p.adjacent(u, v))
                    .map(|(pos, &u)| (pos, p.edge(u, v), p.edge(v, u)))
                    .collect();
                let parent = checks.first().map(|&(pos, fwd, bwd)| match (fwd, bwd) {
                    (Some(l), _) => (pos, Expand::Out, l),
                    (None, Some(l)) => (pos, Expand::In, l),
                    (None, None) => unreachable!(),
                });
                Step {
                    vertex: v,
                    label: p.label(v),
                    parent,
                    checks,
                }
            })
            .collect();
        Self { steps }
    }
}

struct Search<'a> {
    g: &'a DataGraph,
    plan: Plan,
    images: Vec<u32>,
    steps_taken: u64,
    step_budget: Option<u64>,
}

impl Search<'_> {
    fn new<'a>(g: &'a DataGraph, p: &PatternGraph, step_budget: Option<u64>) -> Search<'a> {
        Search {
            g,
            plan: Plan::new(p, g),
            images: vec![0; p.size()],
            steps_taken: 0,
            step_budget,
        }
    }

    fn budget_exhausted(&self) -> bool {
        self.step_budget.is_some_and(|b| self.steps_taken > b)
    }

    fn feasible(&self, depth: usize, candidate: u32, used: Option<&VertexSet>) -> bool {
        let step = &self.plan.steps[depth];
        if self.g.label(candidate) != step.label {
            return false;
        }
        if used.is_some_and(|u| u.contains(candidate)) || self.images[..depth].contains(&candidate) {
            return false;
        }
        step.checks.iter().all(|&(pos, fwd, bwd)| {
            let other = self.images[pos];
            fwd.is_none_or(|l| self.g.edge_label(other, candidate) == Some(l))
                && bwd.is_none_or(|l| self.g.edge_label(candidate, other) == Some(l))
        })
    }

    /// Candidate data vertices for `depth` given the images chosen so far.
    fn candidates(&self, depth: usize) -> Vec<u32> {
        let step = &self.plan.steps[depth];
        match step.parent {
            None => self.g.vertices_with_label(step.label).to_vec(),
            Some((pos, expand, label)) => {
                let anchor = self.images[pos];
                let row = match expand {
                    Expand::Out => self.g.out_neighbors(anchor),
                    Expand::In => self.g.in_neighbors(anchor),
                };
                row.iter().filter(|nb| nb.label == label).map(|nb| nb.vertex).collect()
            }
        }
    }

    /// Depth-first extension that stops at the first complete embedding.
    fn find_first(&mut self, depth: usize, used: &VertexSet) -> bool {
        if depth == self.plan.steps.len() {
            return true;
        }
        self.steps_taken += 1;
        if self.budget_exhausted() {
            return false;
        }
        for c in self.candidates(depth) {
            if self.feasible(depth, c, Some(used)) {
                self.images[depth] = c;
                if self.find_first(depth + 1, used) {
                    return true;
                }
                if self.budget_exhausted() {
                    return false;
                }
            }
        }
        false
    }

    /// Collects every completion; returns false once `limit` is exceeded.
    fn find_all(&mut self, depth: usize, out: &mut Vec<Embedding>, limit: usize) -> bool {
        if depth == self.plan.steps.len() {
            if out.len() == limit {
                return false;
            }
            let mut map = vec![0; depth];
            for (step, &image) in self.plan.steps.iter().zip(&self.images) {
                map[step.vertex] = image;
            }
            out.push(Embedding::new(map));
            return true;
        }
        for c in self.candidates(depth) {
            if self.feasible(depth, c, None) {
                self.images[depth] = c;
                if !self.find_all(depth + 1, out, limit) {
                    return false;
                }
            }
        }
        true
    }

    fn current_embedding(&self) -> Embedding {
        let mut map = vec![0; self.plan.steps.len()];
        for (step, &image) in self.plan.steps.iter().zip(&self.images) {
            map[step.vertex] = image;
        }
        Embedding::new(map)
    }
}

/// Order in which candidate roots are tried by [`count_mal_with`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum RootOrder {
    #[default]
    Ascending,
    Descending,
    /// Explicit data-vertex order; vertices with the wrong label are skipped.
    Custom(Vec<u32>),
}

#[derive(Clone, Debug, Default)]
pub struct MalOptions {
    /// Stop once this many disjoint embeddings are found. `None` sweeps every root.
    pub tau: Option<u64>,
    pub collect: bool,
    pub root_order: RootOrder,
    /// Cap on search-tree expansions for the whole evaluation.
    pub step_budget: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct MalOutcome {
    pub count: u64,
    pub tau: Option<u64>,
    pub frequent: bool,
    pub early_terminated: bool,
    pub budget_exhausted: bool,
    /// Accepted embeddings in acceptance order (empty unless collected).
    pub embeddings: Vec<Embedding>,
    /// Data vertices covered by accepted embeddings.
    pub used: VertexSet,
}

/// Greedy maximal independent set of embeddings with early termination at `tau`.
pub fn count_mal(g: &DataGraph, p: &PatternGraph, tau: u64, collect: bool) -> MalOutcome {
    count_mal_with(
        g,
        p,
        &MalOptions {
            tau: Some(tau.max(1)),
            collect,
            ..MalOptions::default()
        },
    )
}

pub fn count_mal_with(g: &DataGraph, p: &PatternGraph, options: &MalOptions) -> MalOutcome {
    let mut used = VertexSet::new(g.vertex_count());
    let mut outcome = MalOutcome {
        count: 0,
        tau: options.tau,
        frequent: false,
        early_terminated: false,
        budget_exhausted: false,
        embeddings: Vec::new(),
        used: VertexSet::new(0),
    };
    if p.size() == 0 || p.size() > g.vertex_count() {
        outcome.used = used;
        return outcome;
    }
    let mut search = Search::new(g, p, options.step_budget);
    let root_label = search.plan.steps[0].label;
    let roots: Vec<u32> = match &options.root_order {
        RootOrder::Ascending => g.vertices_with_label(root_label).to_vec(),
        RootOrder::Descending => g.vertices_with_label(root_label).iter().rev().copied().collect(),
        RootOrder::Custom(order) => order
            .iter()
            .copied()
            .filter(|&v| (v as usize) < g.vertex_count() && g.label(v) == root_label)
            .collect(),
    };

    for root in roots {
        if used.contains(root) {
            continue;
        }
        search.images[0] = root;
        if search.find_first(1, &used) {
            let embedding = search.current_embedding();
            for &d in embedding.as_slice() {
                used.insert(d);
            }
            outcome.count += 1;
            if options.collect {
                outcome.embeddings.push(embedding);
            }
            if options.tau.is_some_and(|t| outcome.count >= t) {
                outcome.early_terminated = true;
                break;
            }
        }
        if search.budget_exhausted() {
            outcome.budget_exhausted = true;
            break;
        }
    }
    outcome.frequent = options.tau.is_some_and(|t| outcome.count >= t);
    outcome.used = used;
    outcome
}

/// Every monomorphism of `p` into `g`, truncated at `limit` (default
/// [`DEFAULT_ENUMERATION_LIMIT`]).
pub fn enumerate_all(g: &DataGraph, p: &PatternGraph, limit: Option<usize>) -> Vec<Embedding> {
    match enumerate_bounded(g, p, limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT)) {
        Ok(all) | Err(LimitExceeded(all)) => all,
    }
}

/// Enumeration hit its cap; carries the truncated prefix.
#[derive(Debug)]
pub struct LimitExceeded(pub Vec<Embedding>);

/// Like [`enumerate_all`] but reports truncation as an error.
pub fn enumerate_bounded(g: &DataGraph, p: &PatternGraph, limit: usize) -> Result<Vec<Embedding>, LimitExceeded> {
    let mut out = Vec::new();
    if p.size() == 0 || p.size() > g.vertex_count() {
        return Ok(out);
    }
    let mut search = Search::new(g, p, None);
    if search.find_all(0, &mut out, limit) {
        Ok(out)
    } else {
        Err(LimitExceeded(out))
    }
}
