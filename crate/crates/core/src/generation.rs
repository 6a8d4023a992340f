//! Candidate generation: core graphs, core groups, automorphism-aware
//! merging, clique completion and duplicate removal.
//!
//! A core graph is a pattern with one vertex (the marked vertex) cut loose
//! from the rest. Cores whose remainder `Γ` is isomorphic share a core
//! group; merging two members of a group re-attaches both marked vertices
//! to one copy of `Γ`, giving a pattern one vertex larger than the parents.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::canonical::{automorphism_group, canonical_form, Automorphism, CanonicalError, MAX_PATTERN_SIZE};
use crate::graph::{DataGraph, Label, PatternGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerationError {
    #[error("core graphs need a pattern of at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("patterns of mixed sizes: expected {expected}, found {found}")]
    MixedSizes { expected: usize, found: usize },
    #[error("core {0} is not a member of the group")]
    NotAMember(usize),
    #[error("permutation is not an automorphism of the group body")]
    NotAnAutomorphism,
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

/// Orientation of an attachment edge relative to the marked vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// marked -> other
    Out,
    /// other -> marked
    In,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attachment {
    pub other: usize,
    pub direction: Direction,
    pub label: Label,
}

/// A parent pattern with its marked vertex disconnected.
#[derive(Clone, Debug)]
pub struct CoreGraph {
    /// Position of the parent in the input pattern list.
    pub parent_index: usize,
    pub parent: PatternGraph,
    pub marked: usize,
    /// The parent with every edge at `marked` removed.
    pub body: PatternGraph,
    /// The removed edges, in parent vertex ids.
    pub attachment: Vec<Attachment>,
}

impl CoreGraph {
    pub fn new(parent_index: usize, parent: &PatternGraph, marked: usize) -> Self {
        let mut body = parent.clone();
        let mut attachment = Vec::new();
        for other in 0..parent.size() {
            if let Some(label) = parent.edge(marked, other) {
                attachment.push(Attachment {
                    other,
                    direction: Direction::Out,
                    label,
                });
                body.remove_edge(marked, other);
            }
            if let Some(label) = parent.edge(other, marked) {
                attachment.push(Attachment {
                    other,
                    direction: Direction::In,
                    label,
                });
                body.remove_edge(other, marked);
            }
        }
        Self {
            parent_index,
            parent: parent.clone(),
            marked,
            body,
            attachment,
        }
    }

    pub fn marked_label(&self) -> Label {
        self.parent.label(self.marked)
    }

    /// The body without the marked vertex; parent vertices after `marked`
    /// shift down by one.
    pub fn gamma(&self) -> PatternGraph {
        self.parent.without_vertex(self.marked)
    }

    /// Re-applies the attachment to the body.
    pub fn reattach(&self) -> PatternGraph {
        let mut p = self.body.clone();
        for a in &self.attachment {
            match a.direction {
                Direction::Out => p.add_edge(self.marked, a.other, a.label),
                Direction::In => p.add_edge(a.other, self.marked, a.label),
            }
        }
        p
    }

    fn gamma_index(&self, v: usize) -> usize {
        v - usize::from(v > self.marked)
    }
}

/// Cores taken at non-articulation vertices only.
pub fn core_graphs_of(p: &PatternGraph) -> Result<Vec<CoreGraph>, GenerationError> {
    cores_of(0, p, CoreSelection::NonArticulation)
}

/// Which vertices of a parent yield cores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreSelection {
    /// Only vertices whose removal keeps the parent connected.
    NonArticulation,
    /// Every vertex. Needed to reach patterns such as the 4-cycle, whose
    /// parents meet only in a disconnected body.
    All,
}

fn cores_of(index: usize, p: &PatternGraph, selection: CoreSelection) -> Result<Vec<CoreGraph>, GenerationError> {
    if p.size() < 3 {
        return Err(GenerationError::TooSmall(p.size()));
    }
    Ok((0..p.size())
        .filter(|&v| selection == CoreSelection::All || !p.is_articulation_vertex(v))
        .map(|v| CoreGraph::new(index, p, v))
        .collect())
}

/// Attachment edge expressed in a group's template frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameAttachment {
    pub position: usize,
    pub direction: Direction,
    pub label: Label,
}

#[derive(Clone, Debug)]
pub struct GroupMember {
    pub core: CoreGraph,
    /// Parent vertex -> template position; `None` at the marked vertex.
    frame: Vec<Option<usize>>,
    attachment: Vec<FrameAttachment>,
}

impl GroupMember {
    fn new(core: CoreGraph, canon_perm: &[usize]) -> Self {
        let frame: Vec<Option<usize>> = (0..core.parent.size())
            .map(|v| (v != core.marked).then(|| canon_perm[core.gamma_index(v)]))
            .collect();
        let mut attachment: Vec<FrameAttachment> = core
            .attachment
            .iter()
            .map(|a| FrameAttachment {
                position: frame[a.other].expect("attachment never targets the marked vertex"),
                direction: a.direction,
                label: a.label,
            })
            .collect();
        attachment.sort();
        Self {
            core,
            frame,
            attachment,
        }
    }

    pub fn frame(&self, parent_vertex: usize) -> Option<usize> {
        self.frame[parent_vertex]
    }

    pub fn attachment(&self) -> &[FrameAttachment] {
        &self.attachment
    }

    fn transported(&self, alpha: &Automorphism) -> Vec<FrameAttachment> {
        let mut out: Vec<FrameAttachment> = self
            .attachment
            .iter()
            .map(|a| FrameAttachment {
                position: alpha.apply(a.position),
                ..*a
            })
            .collect();
        out.sort();
        out
    }
}

/// Cores whose bodies are isomorphic, all expressed in one coordinate frame.
#[derive(Clone, Debug)]
pub struct CoreGroup {
    /// Canonical encoding of `Γ`.
    pub key: Vec<u8>,
    /// `Γ` in canonical vertex order; template position `i` is canonical position `i`.
    pub gamma_template: PatternGraph,
    automorphisms: Vec<Automorphism>,
    members: Vec<GroupMember>,
}

impl CoreGroup {
    pub fn members(&self) -> &[GroupMember] {
        &self.members
    }

    pub fn automorphisms(&self) -> &[Automorphism] {
        &self.automorphisms
    }

    fn member(&self, i: usize) -> Result<&GroupMember, GenerationError> {
        self.members.get(i).ok_or(GenerationError::NotAMember(i))
    }
}

/// Groups the cores of same-size patterns by the canonical form of `Γ`,
/// using non-articulation cores. Groups are ordered by key.
pub fn build_core_groups(patterns: &[PatternGraph]) -> Result<Vec<CoreGroup>, GenerationError> {
    Ok(CoreGroups::build(patterns, CoreSelection::NonArticulation)?.groups)
}

/// Core groups plus the lookups used by merging and clique completion.
#[derive(Clone, Debug)]
pub struct CoreGroups {
    groups: Vec<CoreGroup>,
    by_key: HashMap<Vec<u8>, usize>,
    /// Parent index -> (group, member) of each of its cores.
    by_parent: Vec<Vec<(usize, usize)>>,
    frequent_codes: HashSet<Vec<u8>>,
}

impl CoreGroups {
    pub fn build(patterns: &[PatternGraph], selection: CoreSelection) -> Result<Self, GenerationError> {
        let Some(first) = patterns.first() else {
            return Ok(Self {
                groups: Vec::new(),
                by_key: HashMap::new(),
                by_parent: Vec::new(),
                frequent_codes: HashSet::new(),
            });
        };
        let size = first.size();
        let mut buckets: BTreeMap<Vec<u8>, (PatternGraph, Vec<GroupMember>)> = BTreeMap::new();
        for (index, p) in patterns.iter().enumerate() {
            if p.size() != size {
                return Err(GenerationError::MixedSizes {
                    expected: size,
                    found: p.size(),
                });
            }
            for core in cores_of(index, p, selection)? {
                let gamma = core.gamma();
                let form = canonical_form(&gamma)?;
                let member = GroupMember::new(core, form.canon_perm());
                buckets
                    .entry(form.encoding().to_vec())
                    .or_insert_with(|| (gamma.permuted(form.canon_perm()), Vec::new()))
                    .1
                    .push(member);
            }
        }
        let mut groups = Vec::with_capacity(buckets.len());
        for (key, (gamma_template, members)) in buckets {
            let automorphisms = automorphism_group(&gamma_template)?;
            groups.push(CoreGroup {
                key,
                gamma_template,
                automorphisms,
                members,
            });
        }
        let mut by_key = HashMap::new();
        let mut by_parent = vec![Vec::new(); patterns.len()];
        for (gi, group) in groups.iter().enumerate() {
            by_key.insert(group.key.clone(), gi);
            for (mi, member) in group.members.iter().enumerate() {
                by_parent[member.core.parent_index].push((gi, mi));
            }
        }
        let frequent_codes = patterns.iter().map(|p| p.code().to_vec()).collect();
        Ok(Self {
            groups,
            by_key,
            by_parent,
            frequent_codes,
        })
    }

    pub fn groups(&self) -> &[CoreGroup] {
        &self.groups
    }

    pub fn group_by_key(&self, key: &[u8]) -> Option<&CoreGroup> {
        self.by_key.get(key).map(|&i| &self.groups[i])
    }

    /// Whether `p` is isomorphic to one of the input patterns.
    pub fn contains_pattern(&self, p: &PatternGraph) -> bool {
        self.frequent_codes.contains(p.code())
    }
}

/// Automorphisms of `Γ` worth merging with: the whole group when some
/// automorphism changes the attachment profile of either core, otherwise
/// only the identity.
pub fn find_automorphisms(group: &CoreGroup, i: usize, j: usize) -> Result<Vec<Automorphism>, GenerationError> {
    let (ci, cj) = (group.member(i)?, group.member(j)?);
    let different_topology = group
        .automorphisms
        .iter()
        .any(|alpha| ci.transported(alpha) != ci.attachment || cj.transported(alpha) != cj.attachment);
    Ok(if different_topology {
        group.automorphisms.clone()
    } else {
        vec![Automorphism::identity(group.gamma_template.size())]
    })
}

/// `Γ` plus the marked vertex of member `i` (as vertex `k-2`) and the marked
/// vertex of member `j` with its attachment moved through `alpha` (as vertex
/// `k-1`). The two marked vertices are never joined.
pub fn merge(group: &CoreGroup, i: usize, j: usize, alpha: &Automorphism) -> Result<PatternGraph, GenerationError> {
    let (ci, cj) = (group.member(i)?, group.member(j)?);
    if alpha.perm().len() != group.gamma_template.size() || !alpha.preserves(&group.gamma_template) {
        return Err(GenerationError::NotAnAutomorphism);
    }
    Ok(merge_attachments(group, ci, &ci.attachment, cj, &cj.transported(alpha)))
}

fn merge_attachments(
    group: &CoreGroup,
    ci: &GroupMember,
    att_i: &[FrameAttachment],
    cj: &GroupMember,
    att_j: &[FrameAttachment],
) -> PatternGraph {
    let mut p = group.gamma_template.clone();
    for (member, attachment) in [(ci, att_i), (cj, att_j)] {
        let v = p.add_vertex(member.core.marked_label());
        for a in attachment {
            match a.direction {
                Direction::Out => p.add_edge(v, a.position, a.label),
                Direction::In => p.add_edge(a.position, v, a.label),
            }
        }
    }
    p
}

/// A generated pattern and the input patterns it was built from.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub pattern: PatternGraph,
    /// Sorted indices into the input pattern list.
    pub parents: Vec<usize>,
}

impl Candidate {
    fn new(pattern: PatternGraph, parents: &[usize]) -> Self {
        let mut parents = parents.to_vec();
        parents.sort_unstable();
        parents.dedup();
        Self { pattern, parents }
    }
}

/// One merge, as seen by clique completion: the merged pattern and, for
/// both sides, the map from parent vertices to merged vertices.
struct MergeSite<'a> {
    merged: &'a PatternGraph,
    sides: [(&'a GroupMember, Vec<usize>); 2],
}

impl MergeSite<'_> {
    fn parents(&self) -> [usize; 2] {
        [self.sides[0].0.core.parent_index, self.sides[1].0.core.parent_index]
    }
}

/// Closes the merged pattern into a clique using a third core, taken from
/// the parent of either side at a vertex other than its marked vertex.
/// Only cliques whose vertex-deleted sub-patterns are all in the input set
/// are kept. Empty unless both parents are cliques.
fn complete_cliques(groups: &CoreGroups, site: &MergeSite<'_>) -> Vec<Candidate> {
    let merged = site.merged;
    let n = merged.size();
    let mut out = Vec::new();
    if !site.sides.iter().all(|(m, _)| m.core.parent.is_clique()) {
        return out;
    }
    for (side, (member, to_merged)) in site.sides.iter().enumerate() {
        let own = to_merged[member.core.marked];
        let target = site.sides[1 - side].1[site.sides[1 - side].0.core.marked];
        for &(pg, pm) in &groups.by_parent[member.core.parent_index] {
            let pivot_group = &groups.groups[pg];
            let pivot = &pivot_group.members[pm];
            let x = pivot.core.marked;
            if x == member.core.marked {
                continue;
            }
            let x_merged = to_merged[x];
            // template position of the pivot group -> merged vertex
            let mut position_to_merged = vec![usize::MAX; pivot_group.gamma_template.size()];
            for v in 0..member.core.parent.size() {
                if let Some(pos) = pivot.frame(v) {
                    position_to_merged[pos] = to_merged[v];
                }
            }
            let mut seen = HashSet::new();
            for third in &pivot_group.members {
                if third.core.marked_label() != merged.label(target) {
                    continue;
                }
                for beta in &pivot_group.automorphisms {
                    let moved = third.transported(beta);
                    if !seen.insert(moved.clone()) {
                        continue;
                    }
                    let mut out_edge = vec![None; n];
                    let mut in_edge = vec![None; n];
                    for a in &moved {
                        let w = position_to_merged[a.position];
                        match a.direction {
                            Direction::Out => out_edge[w] = Some(a.label),
                            Direction::In => in_edge[w] = Some(a.label),
                        }
                    }
                    if out_edge[own].is_none() && in_edge[own].is_none() {
                        continue;
                    }
                    let consistent = (0..n)
                        .filter(|&w| w != own && w != x_merged && w != target)
                        .all(|w| merged.edge(target, w) == out_edge[w] && merged.edge(w, target) == in_edge[w]);
                    if !consistent {
                        continue;
                    }
                    let mut clique = merged.clone();
                    if let Some(l) = out_edge[own] {
                        clique.add_edge(target, own, l);
                    }
                    if let Some(l) = in_edge[own] {
                        clique.add_edge(own, target, l);
                    }
                    if clique.is_clique() && all_subpatterns_in(&clique, groups) {
                        let [a, b] = site.parents();
                        out.push(Candidate::new(clique, &[a, b, third.core.parent_index]));
                    }
                }
            }
        }
    }
    out
}

/// Clique completions for the merge of members `i` and `j` of `group` under
/// `alpha`.
pub fn generate_cliques(
    groups: &CoreGroups,
    group: usize,
    i: usize,
    j: usize,
    alpha: &Automorphism,
) -> Result<Vec<PatternGraph>, GenerationError> {
    let g = groups.groups.get(group).ok_or(GenerationError::NotAMember(group))?;
    let merged = merge(g, i, j, alpha)?;
    let site = merge_site(&merged, g.member(i)?, g.member(j)?, alpha);
    Ok(complete_cliques(groups, &site).into_iter().map(|c| c.pattern).collect())
}

fn merge_site<'a>(
    merged: &'a PatternGraph,
    ci: &'a GroupMember,
    cj: &'a GroupMember,
    alpha: &Automorphism,
) -> MergeSite<'a> {
    let k = merged.size();
    let map_i = (0..ci.core.parent.size())
        .map(|v| ci.frame(v).unwrap_or(k - 2))
        .collect();
    let map_j = (0..cj.core.parent.size())
        .map(|v| cj.frame(v).map_or(k - 1, |pos| alpha.apply(pos)))
        .collect();
    MergeSite {
        merged,
        sides: [(ci, map_i), (cj, map_j)],
    }
}

/// Every connected vertex-deleted sub-pattern is one of the input patterns.
fn all_subpatterns_in(p: &PatternGraph, groups: &CoreGroups) -> bool {
    (0..p.size()).all(|v| {
        let sub = p.without_vertex(v);
        !sub.is_connected() || groups.contains_pattern(&sub)
    })
}

fn check_sizes(frequent: &[PatternGraph]) -> Result<usize, GenerationError> {
    let Some(first) = frequent.first() else {
        return Ok(0);
    };
    let size = first.size();
    if let Some(p) = frequent.iter().find(|p| p.size() != size) {
        return Err(GenerationError::MixedSizes {
            expected: size,
            found: p.size(),
        });
    }
    if size + 1 > MAX_PATTERN_SIZE {
        return Err(CanonicalError::TooLarge {
            size: size + 1,
            limit: MAX_PATTERN_SIZE,
        }
        .into());
    }
    Ok(size)
}

fn merge_all(frequent: &[PatternGraph], prune: bool) -> Result<Vec<Candidate>, GenerationError> {
    if check_sizes(frequent)? < 3 {
        return Ok(Vec::new());
    }
    let groups = CoreGroups::build(frequent, CoreSelection::All)?;
    let per_group: Vec<Vec<Candidate>> = groups
        .groups
        .par_iter()
        .map(|group| {
            let mut out = Vec::new();
            let m = group.members.len();
            for i in 0..m {
                for j in i..m {
                    let (ci, cj) = (&group.members[i], &group.members[j]);
                    let alphas = find_automorphisms(group, i, j).expect("members in range");
                    let mut seen = HashSet::new();
                    for alpha in &alphas {
                        let att_j = cj.transported(alpha);
                        if !seen.insert(att_j.clone()) {
                            continue;
                        }
                        let merged = merge_attachments(group, ci, &ci.attachment, cj, &att_j);
                        let site = merge_site(&merged, ci, cj, alpha);
                        out.extend(complete_cliques(&groups, &site));
                        let parents = site.parents();
                        if merged.is_connected() && (!prune || all_subpatterns_in(&merged, &groups)) {
                            out.push(Candidate::new(merged, &parents));
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(remove_duplicate_candidates(per_group.into_iter().flatten()))
}

/// Every merge of every core pair (all vertices cored) plus clique
/// completions, deduplicated, without filtering by sub-pattern membership.
pub fn merge_candidates(frequent: &[PatternGraph]) -> Result<Vec<Candidate>, GenerationError> {
    merge_all(frequent, false)
}

/// Size-`k` candidates from size-`(k-1)` patterns, keeping only those whose
/// connected vertex-deleted sub-patterns are all in `frequent`.
pub fn generate_candidates(frequent: &[PatternGraph]) -> Result<Vec<Candidate>, GenerationError> {
    merge_all(frequent, true)
}

/// Patterns of [`generate_candidates`]. Inputs of size 2 or less give
/// nothing; use [`size2_to_size3`] for the first step.
pub fn generate_new_patterns(frequent: &[PatternGraph]) -> Result<Vec<PatternGraph>, GenerationError> {
    Ok(generate_candidates(frequent)?.into_iter().map(|c| c.pattern).collect())
}

/// One pattern per isomorphism class (first seen wins), sorted by encoding.
pub fn remove_duplicates(candidates: impl IntoIterator<Item = PatternGraph>) -> Vec<PatternGraph> {
    let mut unique: BTreeMap<Vec<u8>, PatternGraph> = BTreeMap::new();
    for p in candidates {
        unique.entry(p.code().to_vec()).or_insert(p);
    }
    unique.into_values().collect()
}

fn remove_duplicate_candidates(candidates: impl IntoIterator<Item = Candidate>) -> Vec<Candidate> {
    let mut unique: BTreeMap<Vec<u8>, Candidate> = BTreeMap::new();
    for c in candidates {
        unique.entry(c.pattern.code().to_vec()).or_insert(c);
    }
    unique.into_values().collect()
}

/// The distinct 2-vertex patterns occurring as edges of `g`.
///
/// For graphs read as undirected every pair carries both directions, so
/// only the bidirectional pattern of each adjacent pair is produced. For
/// directed graphs each single-direction edge is a pattern, and pairs
/// linked both ways also produce the bidirectional pattern.
pub fn seed_size2(g: &DataGraph) -> Vec<PatternGraph> {
    let mut out = Vec::new();
    for (u, v, label) in g.edges() {
        let reverse = g.edge_label(v, u);
        if g.is_undirected() {
            if u < v {
                out.push(pair_pattern(g, u, v, Some(label), reverse));
            }
            continue;
        }
        out.push(pair_pattern(g, u, v, Some(label), None));
        if reverse.is_some() && u < v {
            out.push(pair_pattern(g, u, v, Some(label), reverse));
        }
    }
    remove_duplicates(out)
}

fn pair_pattern(g: &DataGraph, u: u32, v: u32, forward: Option<Label>, backward: Option<Label>) -> PatternGraph {
    let mut p = PatternGraph::new(vec![g.label(u), g.label(v)]);
    if let Some(l) = forward {
        p.add_edge(0, 1, l);
    }
    if let Some(l) = backward {
        p.add_edge(1, 0, l);
    }
    p
}

/// Copies the edges of 2-vertex pattern `pair` onto `(a, b)` of `target`.
fn place_pair(target: &mut PatternGraph, pair: &PatternGraph, a: usize, b: usize) {
    if let Some(l) = pair.edge(0, 1) {
        target.add_edge(a, b, l);
    }
    if let Some(l) = pair.edge(1, 0) {
        target.add_edge(b, a, l);
    }
}

/// Orientations `(first, second)` of a 2-vertex pattern as vertex pairs.
const ORIENTATIONS: [(usize, usize); 2] = [(0, 1), (1, 0)];

/// Size-3 candidates from frequent 2-vertex patterns: wedges joining two
/// frequent pairs at an equally labeled vertex, and triangles closing a
/// wedge with a third frequent pair. Every adjacent vertex pair of a
/// candidate forms a frequent 2-pattern.
pub fn size2_to_size3(frequent2: &[PatternGraph]) -> Vec<PatternGraph> {
    size2_candidates(frequent2).into_iter().map(|c| c.pattern).collect()
}

/// [`size2_to_size3`] with parent indices.
pub fn size2_candidates(frequent2: &[PatternGraph]) -> Vec<Candidate> {
    let pairs: Vec<&PatternGraph> = frequent2.iter().filter(|p| p.size() == 2).collect();
    let codes: HashSet<Vec<u8>> = pairs.iter().map(|p| p.code().to_vec()).collect();
    let index_of = |p: &PatternGraph| frequent2.iter().position(|q| std::ptr::eq(q, p)).expect("from input");
    let mut out = Vec::new();
    for (pi, p) in pairs.iter().enumerate() {
        for q in &pairs[pi..] {
            for &(p_end, p_mid) in &ORIENTATIONS {
                for &(q_mid, q_end) in &ORIENTATIONS {
                    if p.label(p_mid) != q.label(q_mid) {
                        continue;
                    }
                    // vertices: 0 = end of p, 1 = shared, 2 = end of q
                    let mut wedge = PatternGraph::new(vec![p.label(p_end), p.label(p_mid), q.label(q_end)]);
                    let oriented_p = p.induced(&[p_end, p_mid]);
                    let oriented_q = q.induced(&[q_mid, q_end]);
                    place_pair(&mut wedge, &oriented_p, 0, 1);
                    place_pair(&mut wedge, &oriented_q, 1, 2);
                    let wedge_parents = [index_of(p), index_of(q)];
                    for r in &pairs {
                        for &(r0, r2) in &ORIENTATIONS {
                            if r.label(r0) != wedge.label(0) || r.label(r2) != wedge.label(2) {
                                continue;
                            }
                            let mut triangle = wedge.clone();
                            place_pair(&mut triangle, &r.induced(&[r0, r2]), 0, 2);
                            if pair_subpatterns_in(&triangle, &codes) {
                                out.push(Candidate::new(
                                    triangle,
                                    &[wedge_parents[0], wedge_parents[1], index_of(r)],
                                ));
                            }
                        }
                    }
                    if pair_subpatterns_in(&wedge, &codes) {
                        out.push(Candidate::new(wedge, &wedge_parents));
                    }
                }
            }
        }
    }
    remove_duplicate_candidates(out)
}

fn pair_subpatterns_in(p: &PatternGraph, codes: &HashSet<Vec<u8>>) -> bool {
    (0..p.size()).all(|u| (u + 1..p.size()).all(|v| !p.adjacent(u, v) || codes.contains(p.induced(&[u, v]).code())))
}
