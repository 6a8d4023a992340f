mod common;

use std::collections::BTreeSet;

use flexis::canonical::{are_isomorphic, Automorphism};
use flexis::generation::{
    build_core_groups, core_graphs_of, find_automorphisms, generate_candidates, generate_new_patterns, merge,
    merge_candidates, remove_duplicates, seed_size2, size2_to_size3, CoreGroups, CoreSelection,
};
use flexis::graph::{Directedness, Label, PatternGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const E: Label = Label(0);
const RED: Label = Label(0);
const BLUE: Label = Label(1);

fn undirected(labels: &[Label], edges: &[(usize, usize)]) -> PatternGraph {
    let mut p = PatternGraph::new(labels.to_vec());
    for &(u, v) in edges {
        p.add_edge(u, v, E);
        p.add_edge(v, u, E);
    }
    p
}

fn triangle(labels: [Label; 3]) -> PatternGraph {
    undirected(&labels, &[(0, 1), (1, 2), (0, 2)])
}

/// P1: red, blue, red triangle.
fn p1() -> PatternGraph {
    triangle([RED, BLUE, RED])
}

/// P2: red, blue, blue triangle.
fn p2() -> PatternGraph {
    triangle([RED, BLUE, BLUE])
}

fn codes(patterns: &[PatternGraph]) -> BTreeSet<Vec<u8>> {
    patterns.iter().map(|p| p.code().to_vec()).collect()
}

fn contains_iso(patterns: &[PatternGraph], target: &PatternGraph) -> bool {
    patterns.iter().any(|p| are_isomorphic(p, target).unwrap())
}

#[test]
fn fig5_merges_from_running_example() {
    let raw: Vec<PatternGraph> = merge_candidates(&[p1(), p2()])
        .unwrap()
        .into_iter()
        .map(|c| c.pattern)
        .collect();
    // two red vertices on the blue-red core
    let fig5a = undirected(&[BLUE, RED, RED, RED], &[(0, 1), (2, 0), (2, 1), (3, 0), (3, 1)]);
    // two blue vertices on the red-red core
    let fig5b = undirected(&[RED, RED, BLUE, BLUE], &[(0, 1), (2, 0), (2, 1), (3, 0), (3, 1)]);
    // a red and a blue vertex on the red-blue core
    let fig5c = undirected(&[RED, BLUE, RED, BLUE], &[(0, 1), (2, 0), (2, 1), (3, 0), (3, 1)]);
    let clique = undirected(
        &[RED, RED, BLUE, BLUE],
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    );
    for p in [&fig5a, &fig5b, &fig5c, &clique] {
        assert!(contains_iso(&raw, p), "missing {p:?}");
    }
    // only the clique has all of its triangles in {P1, P2}
    let pruned = generate_new_patterns(&[p1(), p2()]).unwrap();
    assert_eq!(pruned.len(), 1);
    assert!(are_isomorphic(&pruned[0], &clique).unwrap());
}

#[test]
fn running_example_core_groups() {
    let groups = build_core_groups(&[p1(), p2()]).unwrap();
    let mut sizes: Vec<usize> = groups.iter().map(|g| g.members().len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 1, 4]);
}

#[test]
fn directed_three_cycle_gives_singleton_groups() {
    let cycle = PatternGraph::from_edges(vec![Label(0), Label(1), Label(2)], &[(0, 1, E), (1, 2, E), (2, 0, E)]);
    let groups = build_core_groups(&[cycle]).unwrap();
    assert_eq!(groups.len(), 3);
    assert!(groups.iter().all(|g| g.members().len() == 1));
    assert!(build_core_groups(&[]).unwrap().is_empty());
}

#[test]
fn core_graph_examples() {
    assert_eq!(core_graphs_of(&p1()).unwrap().len(), 3);
    let k4 = undirected(&[RED; 4], &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert_eq!(core_graphs_of(&k4).unwrap().len(), 4);
}

/// Tailed triangle: blue u1, red u2, red u3, and a red tail on `tail_on`.
fn tailed_triangle(tail_on: usize) -> PatternGraph {
    undirected(&[BLUE, RED, RED, RED], &[(0, 1), (1, 2), (0, 2), (tail_on, 3)])
}

#[test]
fn fig6_automorphism_merges() {
    let p = tailed_triangle(1);
    let groups = CoreGroups::build(std::slice::from_ref(&p), CoreSelection::NonArticulation).unwrap();
    let (group, index) = groups
        .groups()
        .iter()
        .find_map(|g| g.members().iter().position(|m| m.core.marked == 3).map(|i| (g, i)))
        .unwrap();
    let alphas = find_automorphisms(group, index, index).unwrap();
    assert_eq!(alphas.len(), 2);
    let merged: Vec<PatternGraph> = alphas.iter().map(|a| merge(group, index, index, a).unwrap()).collect();
    let fig6b = undirected(&[BLUE, RED, RED, RED, RED], &[(0, 1), (1, 2), (0, 2), (1, 3), (1, 4)]);
    let fig6c = undirected(&[BLUE, RED, RED, RED, RED], &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 4)]);
    assert!(contains_iso(&merged, &fig6b));
    assert!(contains_iso(&merged, &fig6c));
    for m in &merged {
        assert!(!m.adjacent(3, 4), "marked vertices must stay unjoined");
    }

    let on_blue = tailed_triangle(0);
    let groups = CoreGroups::build(&[on_blue], CoreSelection::NonArticulation).unwrap();
    let (group, index) = groups
        .groups()
        .iter()
        .find_map(|g| g.members().iter().position(|m| m.core.marked == 3).map(|i| (g, i)))
        .unwrap();
    let alphas = find_automorphisms(group, index, index).unwrap();
    assert_eq!(alphas.len(), 1);
    assert!(alphas[0].is_identity());
}

#[test]
fn merge_rejects_non_automorphisms() {
    let groups = CoreGroups::build(&[p1(), p2()], CoreSelection::All).unwrap();
    let group = groups.groups().iter().find(|g| g.members().len() == 4).unwrap();
    let swap = Automorphism::from_perm(vec![1, 0]);
    assert!(merge(group, 0, 1, &swap).is_err());
    assert!(find_automorphisms(group, 0, 99).is_err());
}

/// Four-clique with labels a, b, c, y and its four triangles.
fn clique_family() -> (PatternGraph, [PatternGraph; 4]) {
    let [a, b, c, y] = [Label(0), Label(1), Label(2), Label(3)];
    let k4 = undirected(&[a, b, c, y], &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    (
        k4,
        [
            triangle([a, b, c]),
            triangle([a, b, y]),
            triangle([a, c, y]),
            triangle([b, c, y]),
        ],
    )
}

#[test]
fn fig7_clique_needs_the_third_core() {
    let (k4, [p3, p4, p5, p6]) = clique_family();
    let all = generate_new_patterns(&[p3.clone(), p4.clone(), p5.clone(), p6.clone()]).unwrap();
    assert!(contains_iso(&all, &k4));

    // without the third pattern the missing edge has no source
    let raw: Vec<PatternGraph> = merge_candidates(&[p3.clone(), p4.clone(), p6.clone()])
        .unwrap()
        .into_iter()
        .map(|c| c.pattern)
        .collect();
    assert!(!contains_iso(&raw, &k4));

    // without the fourth triangle the post-check rejects it
    let raw: Vec<PatternGraph> = merge_candidates(&[p3, p4, p5])
        .unwrap()
        .into_iter()
        .map(|c| c.pattern)
        .collect();
    assert!(!contains_iso(&raw, &k4));
}

#[test]
fn clique_lineage_names_three_parents() {
    let (k4, family) = clique_family();
    let candidates = generate_candidates(&family).unwrap();
    let clique = candidates
        .iter()
        .find(|c| are_isomorphic(&c.pattern, &k4).unwrap())
        .unwrap();
    assert_eq!(clique.parents.len(), 3);
}

#[test]
fn non_clique_parents_give_no_clique() {
    let path = undirected(&[RED, RED, RED], &[(0, 1), (1, 2)]);
    let out = merge_candidates(&[path]).unwrap();
    assert!(out.iter().all(|c| !c.pattern.is_clique()));
}

#[test]
fn seed_size2_running_example() {
    let g = load_data("fig1.lg", Directedness::Undirected);
    let seeds = seed_size2(&g);
    assert_eq!(seeds.len(), 3);
    assert!(seeds.iter().all(|p| p.edge_count() == 2));
    let empty = load_data("empty.lg", Directedness::Directed);
    assert!(seed_size2(&empty).is_empty());
    let single = load_data("single_edge.lg", Directedness::Directed);
    assert_eq!(seed_size2(&single).len(), 1);
}

#[test]
fn size2_to_size3_examples() {
    let red_blue = undirected(&[RED, BLUE], &[(0, 1)]);
    let red_red = undirected(&[RED, RED], &[(0, 1)]);
    let out = size2_to_size3(&[red_blue.clone(), red_red.clone()]);
    assert!(contains_iso(&out, &p1()));
    assert!(contains_iso(&out, &undirected(&[BLUE, RED, RED], &[(0, 1), (1, 2)])));
    assert!(contains_iso(&out, &undirected(&[RED, BLUE, RED], &[(0, 1), (1, 2)])));
    assert!(!contains_iso(&out, &p2()));
    let expected = candidate_lattice(&[red_blue, red_red]);
    assert_eq!(codes(&out), expected);
    assert!(size2_to_size3(&[]).is_empty());
}

#[test]
fn remove_duplicates_of_permuted_copies() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = random_pattern(&mut rng, 6, 2, 2, 0.4, false);
    let copies: Vec<PatternGraph> = (0..10)
        .map(|_| {
            let mut perm: Vec<usize> = (0..6).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            p.permuted(&perm)
        })
        .collect();
    assert_eq!(remove_duplicates(copies).len(), 1);
}

fn check_family(family: &[PatternGraph], k: usize) {
    let generated = if k == 3 {
        size2_to_size3(family)
    } else {
        generate_new_patterns(family).unwrap()
    };
    for p in &generated {
        assert_eq!(p.size(), k);
        assert!(p.is_connected());
    }
    let generated_codes = codes(&generated);
    assert_eq!(generated_codes.len(), generated.len(), "duplicates in output");
    let expected = candidate_lattice(family);
    assert_eq!(generated_codes, expected, "family {family:#?}");
}

#[test]
fn completeness_on_seeded_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..60 {
        let k = 3 + round % 3;
        let family = random_family(&mut rng, k);
        check_family(&family, k);
    }
}

#[test]
fn four_cycle_needs_disconnected_bodies() {
    let c4 = undirected(&[RED; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let path = undirected(&[RED; 3], &[(0, 1), (1, 2)]);
    let out = generate_new_patterns(&[path]).unwrap();
    assert!(contains_iso(&out, &c4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn merges_contain_both_parents(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(4..=5);
        let family = random_family(&mut rng, k);
        for c in merge_candidates(&family).unwrap() {
            prop_assert!(c.pattern.is_connected());
            prop_assert_eq!(c.pattern.size(), k);
            // cliques append a third parent; plain merges put the marked
            // vertices last
            if c.parents.len() <= 2 && !c.pattern.is_clique() {
                let a = c.pattern.without_vertex(k - 1);
                let b = c.pattern.without_vertex(k - 2);
                let codes = codes(&family);
                prop_assert!(codes.contains(a.code()) || !a.is_connected());
                prop_assert!(codes.contains(b.code()) || !b.is_connected());
            }
        }
    }

    #[test]
    fn non_clique_has_two_unjoined_non_articulation_vertices(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = rng.gen_range(0.0..0.9);
        let p = random_pattern(&mut rng, n, 2, 1, density, false);
        prop_assume!(!p.is_clique());
        let navs: Vec<usize> = (0..n).filter(|&v| !p.is_articulation_vertex(v)).collect();
        let found = navs.iter().any(|&u| navs.iter().any(|&v| u != v && !p.adjacent(u, v)));
        prop_assert!(found);
    }

    #[test]
    fn generated_sets_have_no_isomorphic_pair(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = random_family(&mut rng, 4);
        let out = generate_new_patterns(&family).unwrap();
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                prop_assert!(!isomorphic_by_permutation(a, b));
            }
        }
    }
}
