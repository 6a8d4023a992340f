//! Fixtures, random instance generators and brute-force oracles shared by
//! the integration tests. The oracles avoid the library's search code:
//! embeddings come from exhaustive assignment, isomorphism from trying every
//! permutation, and candidate lattices from one-vertex extensions.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use flexis::generation::remove_duplicates;
use flexis::graph::{
    parse_lg, parse_lg_patterns, DataGraph, DataGraphBuilder, Directedness, Label, LabelTable, PatternGraph,
};
use flexis::metrics::exact_mis;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn load_data(name: &str, directedness: Directedness) -> DataGraph {
    let file = File::open(data_path(name)).expect("fixture exists");
    parse_lg(BufReader::new(file), directedness).expect("fixture parses")
}

/// Parses a pattern fixture against the label tables of `g`.
pub fn load_pattern(g: &DataGraph, name: &str, directedness: Directedness) -> PatternGraph {
    let file = File::open(data_path(name)).expect("fixture exists");
    let mut vt = g.vertex_label_table().clone();
    let mut et = g.edge_label_table().clone();
    let mut patterns = parse_lg_patterns(BufReader::new(file), &mut vt, &mut et, directedness).expect("parses");
    assert_eq!(patterns.len(), 1);
    patterns.pop().unwrap()
}

/// Data graph D and pattern P1 of the running example, both undirected.
pub fn fig1_with_p1() -> (DataGraph, PatternGraph) {
    let g = load_data("fig1.lg", Directedness::Undirected);
    let p = load_pattern(&g, "p1.lg", Directedness::Undirected);
    (g, p)
}

/// The 16-vertex five-star data graph and the 4-vertex star pattern.
pub fn fig4_star() -> (DataGraph, PatternGraph) {
    let g = load_data("fig4_star.lg", Directedness::Undirected);
    let p = load_pattern(&g, "star_pattern.lg", Directedness::Undirected);
    (g, p)
}

/// Random connected pattern: a random spanning tree plus extra pairs with
/// probability `density`. Each linked pair gets one direction or both;
/// `symmetric` forces both directions with one label.
pub fn random_pattern(
    rng: &mut impl Rng,
    n: usize,
    vertex_labels: u16,
    edge_labels: u16,
    density: f64,
    symmetric: bool,
) -> PatternGraph {
    let labels = (0..n).map(|_| Label(rng.gen_range(0..vertex_labels))).collect();
    let mut p = PatternGraph::new(labels);
    let link = |p: &mut PatternGraph, rng: &mut dyn rand::RngCore, u: usize, v: usize| {
        let l1 = Label(rng.gen_range(0..edge_labels));
        if symmetric {
            p.add_edge(u, v, l1);
            p.add_edge(v, u, l1);
            return;
        }
        match rng.gen_range(0..3) {
            0 => p.add_edge(u, v, l1),
            1 => p.add_edge(v, u, l1),
            _ => {
                p.add_edge(u, v, l1);
                p.add_edge(v, u, Label(rng.gen_range(0..edge_labels)));
            }
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        link(&mut p, rng, order[i], parent);
    }
    for u in 0..n {
        for v in u + 1..n {
            if !p.adjacent(u, v) && rng.gen_bool(density) {
                link(&mut p, rng, u, v);
            }
        }
    }
    p
}

/// Random data graph. Undirected graphs get both directions of every edge
/// with one label; directed graphs get independent directed edges.
pub fn random_data_graph(
    rng: &mut impl Rng,
    n: usize,
    vertex_labels: u16,
    edge_labels: u16,
    edge_probability: f64,
    undirected: bool,
) -> DataGraph {
    let mut b = DataGraphBuilder::with_tables(
        LabelTable::numeric(vertex_labels as usize),
        LabelTable::numeric(edge_labels as usize),
    )
    .undirected(undirected);
    for v in 0..n {
        b.add_vertex(Label(rng.gen_range(0..vertex_labels)), v as u64);
    }
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u == v || (undirected && v < u) {
                continue;
            }
            if rng.gen_bool(edge_probability) {
                b.add_edge(u, v, Label(rng.gen_range(0..edge_labels)));
            }
        }
    }
    b.build()
}

/// Every injective label-preserving assignment that preserves all pattern
/// edges, found by trying all assignments.
pub fn naive_embeddings(g: &DataGraph, p: &PatternGraph) -> Vec<Vec<u32>> {
    fn go(g: &DataGraph, p: &PatternGraph, map: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = map.len();
        if i == p.size() {
            let ok = p.edges().all(|(u, v, l)| g.edge_label(map[u], map[v]) == Some(l));
            if ok {
                out.push(map.clone());
            }
            return;
        }
        for d in 0..g.vertex_count() as u32 {
            if g.label(d) == p.label(i) && !map.contains(&d) {
                map.push(d);
                go(g, p, map, out);
                map.pop();
            }
        }
    }
    let mut out = Vec::new();
    if p.size() > 0 {
        go(g, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Largest family of pairwise disjoint vertex sets, by trying every subset.
pub fn naive_mis(embeddings: &[Vec<u32>]) -> usize {
    assert!(embeddings.len() <= 20, "subset oracle is exponential");
    let sets: Vec<BTreeSet<u32>> = embeddings.iter().map(|e| e.iter().copied().collect()).collect();
    let mut best = 0;
    for mask in 0u32..(1 << sets.len()) {
        let chosen: Vec<&BTreeSet<u32>> = (0..sets.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &sets[i])
            .collect();
        if chosen.len() <= best {
            continue;
        }
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.is_disjoint(b)));
        if disjoint {
            best = chosen.len();
        }
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Isomorphism by trying every vertex permutation.
pub fn isomorphic_by_permutation(a: &PatternGraph, b: &PatternGraph) -> bool {
    if a.size() != b.size() || a.edge_count() != b.edge_count() {
        return false;
    }
    permutations(a.size()).iter().any(|perm| &a.permuted(perm) == b)
}

/// Edge configuration between a new vertex and one existing vertex.
#[derive(Clone, Copy)]
enum Link {
    None,
    Out(Label),
    In(Label),
    Both(Label, Label),
}

fn link_states(edge_labels: &[Label], symmetric: bool) -> Vec<Link> {
    let mut states = vec![Link::None];
    for &l in edge_labels {
        if symmetric {
            states.push(Link::Both(l, l));
            continue;
        }
        states.push(Link::Out(l));
        states.push(Link::In(l));
        for &l2 in edge_labels {
            states.push(Link::Both(l, l2));
        }
    }
    states
}

/// Every pattern obtained from some member of `base` by adding one vertex
/// with any label and any edges to the existing vertices, kept when it is
/// connected and `keep` accepts it. Returned by canonical encoding.
pub fn one_vertex_extensions(
    base: &[PatternGraph],
    vertex_labels: &[Label],
    edge_labels: &[Label],
    symmetric: bool,
    mut keep: impl FnMut(&PatternGraph) -> bool,
) -> BTreeSet<Vec<u8>> {
    let states = link_states(edge_labels, symmetric);
    let mut out = BTreeSet::new();
    for q in base {
        let n = q.size();
        for &label in vertex_labels {
            let mut choice = vec![0usize; n];
            loop {
                let mut p = q.clone();
                let w = p.add_vertex(label);
                for (u, &c) in choice.iter().enumerate() {
                    match states[c] {
                        Link::None => {}
                        Link::Out(l) => p.add_edge(w, u, l),
                        Link::In(l) => p.add_edge(u, w, l),
                        Link::Both(l1, l2) => {
                            p.add_edge(w, u, l1);
                            p.add_edge(u, w, l2);
                        }
                    }
                }
                if p.is_connected() && keep(&p) {
                    out.insert(p.code().to_vec());
                }
                // odometer over per-vertex states
                let mut i = 0;
                while i < n {
                    choice[i] += 1;
                    if choice[i] < states.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    out
}

fn labels_of(patterns: &[PatternGraph]) -> (Vec<Label>, Vec<Label>) {
    let vl: BTreeSet<Label> = patterns.iter().flat_map(|p| p.labels().to_vec()).collect();
    let el: BTreeSet<Label> = patterns
        .iter()
        .flat_map(|p| p.edges().map(|e| e.2).collect::<Vec<_>>())
        .collect();
    (vl.into_iter().collect(), el.into_iter().collect())
}

/// All connected patterns one vertex larger than the members of `family`
/// whose connected vertex-deleted sub-patterns all belong to `family`.
pub fn candidate_lattice(family: &[PatternGraph]) -> BTreeSet<Vec<u8>> {
    let codes: BTreeSet<Vec<u8>> = family.iter().map(|p| p.code().to_vec()).collect();
    let (vl, el) = labels_of(family);
    one_vertex_extensions(family, &vl, &el, false, |p| {
        (0..p.size()).all(|v| {
            let sub = p.without_vertex(v);
            !sub.is_connected() || codes.contains(sub.code())
        })
    })
}

/// Every connected pattern of 2..=max_size vertices with exact MIS at least
/// `support`, grown level by level (the MIS count never increases when a
/// vertex is added). Undirected graphs restrict patterns to symmetric edges.
pub fn frequent_by_exact_mis(g: &DataGraph, support: u64, max_size: usize) -> BTreeSet<Vec<u8>> {
    let symmetric = g.is_undirected();
    let vl: Vec<Label> = (0..g.vertex_label_table().len() as u16).map(Label).collect();
    let el: Vec<Label> = (0..g.edge_label_table().len().max(1) as u16).map(Label).collect();
    let singles: Vec<PatternGraph> = vl.iter().map(|&l| PatternGraph::new(vec![l])).collect();
    let mut all = BTreeSet::new();
    let mut level: Vec<PatternGraph> = singles;
    for _size in 2..=max_size {
        let mut next_codes = BTreeSet::new();
        let mut next = Vec::new();
        let grown = one_vertex_extensions(&level, &vl, &el, symmetric, |p| {
            if next_codes.contains(p.code()) {
                return false;
            }
            next_codes.insert(p.code().to_vec());
            if exact_mis(g, p).expect("oracle within limit") >= support {
                next.push(p.clone());
                true
            } else {
                false
            }
        });
        all.extend(grown);
        if next.is_empty() {
            break;
        }
        level = next;
    }
    all
}

/// A connected pattern of `n` vertices copied from `g` (so it has at least
/// one embedding): grows a random connected vertex set, takes the induced
/// edges, then drops some edges while staying connected.
pub fn sample_pattern(rng: &mut impl Rng, g: &DataGraph, n: usize) -> Option<PatternGraph> {
    if g.vertex_count() == 0 {
        return None;
    }
    for _attempt in 0..20 {
        let mut chosen = vec![rng.gen_range(0..g.vertex_count() as u32)];
        while chosen.len() < n {
            let frontier: Vec<u32> = chosen
                .iter()
                .flat_map(|&v| {
                    g.out_neighbors(v)
                        .iter()
                        .chain(g.in_neighbors(v))
                        .map(|nb| nb.vertex)
                        .collect::<Vec<_>>()
                })
                .filter(|w| !chosen.contains(w))
                .collect();
            let Some(&next) = frontier.choose(rng) else { break };
            chosen.push(next);
        }
        if chosen.len() < n {
            continue;
        }
        let mut p = g.induced_pattern(&chosen).ok()?;
        let edges: Vec<(usize, usize)> = p.edges().map(|(u, v, _)| (u, v)).collect();
        for (u, v) in edges {
            if rng.gen_bool(0.3) {
                let label = p.edge(u, v).unwrap();
                p.remove_edge(u, v);
                if !p.is_connected() {
                    p.add_edge(u, v, label);
                }
            }
        }
        return Some(p);
    }
    None
}

/// A random family of connected (k-1)-vertex patterns: the connected
/// vertex-deleted sub-patterns of a few random k-patterns (some of them
/// cliques), a few unrelated patterns, then a random thinning.
pub fn random_family(rng: &mut impl Rng, k: usize) -> Vec<PatternGraph> {
    let vertex_labels = rng.gen_range(1..=3);
    let edge_labels = rng.gen_range(1..=2);
    let symmetric = rng.gen_bool(0.5);
    let mut family = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let density = if rng.gen_bool(0.3) {
            1.0
        } else {
            rng.gen_range(0.0..0.7)
        };
        let big = random_pattern(rng, k, vertex_labels, edge_labels, density, symmetric);
        for v in 0..k {
            let sub = big.without_vertex(v);
            if sub.is_connected() {
                family.push(sub);
            }
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        family.push(random_pattern(rng, k - 1, vertex_labels, edge_labels, 0.4, symmetric));
    }
    let family = remove_duplicates(family);
    family.into_iter().filter(|_| rng.gen_bool(0.85)).collect()
}
