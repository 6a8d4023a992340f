//! Frequency thresholds and the reference metrics (exact MIS, MNI and the
//! fractional score) used as oracles and as selectable CLI metrics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::canonical::MAX_PATTERN_SIZE;
use crate::graph::{DataGraph, PatternGraph};
use crate::matcher::{count_mal_with, enumerate_bounded, Embedding, MalOptions, DEFAULT_ENUMERATION_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("lambda must be in [0,1]")]
    LambdaOutOfRange,
    #[error("invalid lambda {0:?}")]
    InvalidLambda(String),
    #[error("support must be at least 1")]
    InvalidSupport,
    #[error("pattern size must be at least 1")]
    InvalidPatternSize,
    #[error("max size must be between 2 and {MAX_PATTERN_SIZE}")]
    InvalidMaxSize,
    #[error("the fractional score is a comparison metric and cannot drive mining")]
    FractionalMining,
    #[error("embedding enumeration exceeded {0} embeddings")]
    EnumerationLimit(usize),
}

/// Slider value in `[0, 1]`, held as an exact fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slider(Ratio<u64>);

impl Slider {
    pub const ZERO: Slider = Slider(Ratio::new_raw(0, 1));
    pub const ONE: Slider = Slider(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self, MetricError> {
        if denom == 0 {
            return Err(MetricError::InvalidLambda(format!("{numer}/{denom}")));
        }
        let r = Ratio::new(numer, denom);
        if r > Ratio::from_integer(1) {
            return Err(MetricError::LambdaOutOfRange);
        }
        Ok(Slider(r))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

/// Parses plain decimals such as `0.4`, `1`, `.25` exactly.
impl FromStr for Slider {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || MetricError::InvalidLambda(s.to_owned());
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('-') {
            return if rest.chars().all(|c| c.is_ascii_digit() || c == '.') && rest.chars().any(|c| c != '0' && c != '.')
            {
                Err(MetricError::LambdaOutOfRange)
            } else if rest.chars().all(|c| c == '0' || c == '.') && !rest.is_empty() {
                Ok(Slider::ZERO)
            } else {
                Err(invalid())
            };
        }
        let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
        if (int_part.is_empty() && frac_part.is_empty())
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(invalid());
        }
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.len() > 18 {
            return Err(invalid());
        }
        let int_value: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| MetricError::LambdaOutOfRange)?
        };
        let denom = 10u64.pow(frac_part.len() as u32);
        let frac_value: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| invalid())?
        };
        let numer = int_value
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or(MetricError::LambdaOutOfRange)?;
        Slider::new(numer, denom)
    }
}

impl fmt::Display for Slider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.to_integer())
        } else {
            write!(f, "{}", self.to_f64())
        }
    }
}

/// Effective threshold `floor(sigma * (1 - 1/n) * lambda + sigma / n)`,
/// computed exactly and clamped to at least 1.
pub fn tau(support: u64, lambda: Slider, n: usize) -> Result<u64, MetricError> {
    if support == 0 {
        return Err(MetricError::InvalidSupport);
    }
    if n == 0 {
        return Err(MetricError::InvalidPatternSize);
    }
    let sigma = u128::from(support);
    let n = n as u128;
    let (ln, ld) = (u128::from(*lambda.0.numer()), u128::from(*lambda.0.denom()));
    // sigma (n-1)/n * ln/ld + sigma/n  =  (sigma (n-1) ln + sigma ld) / (n ld)
    let numer = sigma * (n - 1) * ln + sigma * ld;
    let value = numer / (n * ld);
    Ok(u64::try_from(value).unwrap_or(u64::MAX).max(1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    #[default]
    Mal,
    Mis,
    Mni,
    Fractional,
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mal" => Ok(MetricKind::Mal),
            "mis" => Ok(MetricKind::Mis),
            "mni" => Ok(MetricKind::Mni),
            "fractional" => Ok(MetricKind::Fractional),
            other => Err(format!("unknown metric {other:?}")),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Mal => "mal",
            MetricKind::Mis => "mis",
            MetricKind::Mni => "mni",
            MetricKind::Fractional => "fractional",
        })
    }
}

/// Achieved count: integral for every metric except the fractional score.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Integer(u64),
    Rational(Ratio<u64>),
}

impl Count {
    fn as_ratio(self) -> Ratio<u64> {
        match self {
            Count::Integer(v) => Ratio::from_integer(v),
            Count::Rational(r) => r,
        }
    }

    pub fn meets(self, tau: u64) -> bool {
        self.as_ratio() >= Ratio::from_integer(tau)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Integer(v) => write!(f, "{v}"),
            Count::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// Integers serialize as numbers; non-integral fractions as `"p/q"` strings.
impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Integer(v) => serializer.serialize_u64(*v),
            Count::Rational(r) if r.is_integer() => serializer.serialize_u64(r.to_integer()),
            Count::Rational(r) => serializer.serialize_str(&r.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MetricResult {
    pub count: Count,
    pub tau: Option<u64>,
    pub frequent: bool,
    pub early_terminated: bool,
}

impl MetricResult {
    fn judged(count: Count, tau: Option<u64>) -> Self {
        Self {
            count,
            tau,
            frequent: count.meets(tau.unwrap_or(1)),
            early_terminated: false,
        }
    }
}

/// Run parameters for mining and metric evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiningConfig {
    pub support: u64,
    pub lambda: Slider,
    pub max_size: usize,
    pub timeout: Option<Duration>,
    pub metric: MetricKind,
    pub seed: u64,
    pub vertex_labels: usize,
    pub edge_labels: usize,
    pub threads: usize,
    /// Per-pattern cap on search-tree expansions for the greedy matcher.
    pub step_budget: Option<u64>,
    /// Embedding cap for the exact metrics when they drive mining.
    pub enumeration_limit: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        Self {
            support: 1,
            lambda: Slider::ONE,
            max_size: 10,
            timeout: None,
            metric: MetricKind::Mal,
            seed: 0,
            vertex_labels: 1,
            edge_labels: 1,
            threads: 1,
            step_budget: None,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), MetricError> {
        if self.support == 0 {
            return Err(MetricError::InvalidSupport);
        }
        if !(2..=MAX_PATTERN_SIZE).contains(&self.max_size) {
            return Err(MetricError::InvalidMaxSize);
        }
        if self.metric == MetricKind::Fractional {
            return Err(MetricError::FractionalMining);
        }
        Ok(())
    }

    pub fn tau(&self, n: usize) -> u64 {
        tau(self.support, self.lambda, n).expect("validated config")
    }
}

fn embeddings(g: &DataGraph, p: &PatternGraph, limit: usize) -> Result<Vec<Embedding>, MetricError> {
    enumerate_bounded(g, p, limit).map_err(|_| MetricError::EnumerationLimit(limit))
}

/// Maximum number of pairwise vertex-disjoint embeddings.
pub fn exact_mis(g: &DataGraph, p: &PatternGraph) -> Result<u64, MetricError> {
    exact_mis_with_limit(g, p, DEFAULT_ENUMERATION_LIMIT)
}

pub fn exact_mis_with_limit(g: &DataGraph, p: &PatternGraph, limit: usize) -> Result<u64, MetricError> {
    let all = embeddings(g, p, limit)?;
    // Embeddings on the same vertex set conflict with exactly the same
    // others, so one representative suffices.
    let sets: BTreeSet<Vec<u32>> = all.iter().map(Embedding::vertex_set).collect();
    let sets: Vec<Vec<u32>> = sets.into_iter().collect();
    Ok(maximum_disjoint_sets(&sets) as u64)
}

/// Largest number of pairwise disjoint sets among `sets`.
///
/// Branches on the element contained in the fewest remaining sets: either one
/// of those sets is taken or the element stays uncovered. Bounded by the
/// number of remaining elements over the smallest set size and by a greedy
/// hitting set.
pub fn maximum_disjoint_sets(sets: &[Vec<u32>]) -> usize {
    let sets: Vec<&Vec<u32>> = sets.iter().filter(|s| !s.is_empty()).collect();
    if sets.is_empty() {
        return 0;
    }
    let elements: BTreeSet<u32> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    let index: BTreeMap<u32, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let words = elements.len().div_ceil(64);
    let masks: Vec<Bits> = sets
        .iter()
        .map(|s| {
            let mut m = vec![0u64; words];
            for e in s.iter() {
                let i = index[e];
                m[i / 64] |= 1 << (i % 64);
            }
            m
        })
        .collect();
    let min_size = masks.iter().map(bits_count).min().unwrap_or(1).max(1);
    let mut packing = Packing {
        masks: &masks,
        elements: elements.len(),
        min_size,
        best: 0,
    };
    packing.branch((0..masks.len()).collect(), 0);
    packing.best
}

struct Packing<'a> {
    masks: &'a [Bits],
    elements: usize,
    min_size: usize,
    best: usize,
}

impl Packing<'_> {
    fn counts(&self, alive: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.elements];
        for &s in alive {
            for e in bits_iter(&self.masks[s]) {
                counts[e] += 1;
            }
        }
        counts
    }

    /// Size of a greedy set of elements meeting every set in `alive`.
    fn hitting_set(&self, alive: &[usize], mut counts: Vec<usize>) -> usize {
        let mut open: Vec<usize> = alive.to_vec();
        let mut hits = 0;
        while !open.is_empty() {
            let e = (0..counts.len()).max_by_key(|&e| counts[e]).expect("non-empty");
            hits += 1;
            open.retain(|&s| {
                if self.masks[s][e / 64] >> (e % 64) & 1 == 1 {
                    for f in bits_iter(&self.masks[s]) {
                        counts[f] -= 1;
                    }
                    false
                } else {
                    true
                }
            });
        }
        hits
    }

    fn branch(&mut self, alive: Vec<usize>, size: usize) {
        if alive.is_empty() {
            self.best = self.best.max(size);
            return;
        }
        let counts = self.counts(&alive);
        let covered = counts.iter().filter(|&&c| c > 0).count();
        if size + covered / self.min_size <= self.best {
            return;
        }
        let pivot = (0..counts.len())
            .filter(|&e| counts[e] > 0)
            .min_by_key(|&e| counts[e])
            .expect("some element is covered");
        if counts[pivot] > 1 && size + self.hitting_set(&alive, counts) <= self.best {
            return;
        }
        let holds = |s: usize| self.masks[s][pivot / 64] >> (pivot % 64) & 1 == 1;
        let (through, rest): (Vec<usize>, Vec<usize>) = alive.iter().partition(|&&s| holds(s));
        for &s in &through {
            let next: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|&t| self.masks[t].iter().zip(&self.masks[s]).all(|(a, b)| a & b == 0))
                .collect();
            self.branch(next, size + 1);
        }
        self.branch(rest, size);
    }
}

type Bits = Vec<u64>;

fn bits_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn bits_iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| {
        let mut word = w;
        std::iter::from_fn(move || {
            if word == 0 {
                return None;
            }
            let bit = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i * 64 + bit)
        })
    })
}

fn bits_count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits_and_count(a: &Bits, b: &Bits) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Size of a maximum independent set of an undirected graph given as
/// adjacency lists. Branch and bound: greedy lower bound, clique-cover upper
/// bound, branching on the vertex of highest residual degree.
pub fn maximum_independent_set(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    if n == 0 {
        return 0;
    }
    let words = n.div_ceil(64);
    let rows: Vec<Bits> = adjacency
        .iter()
        .map(|nbrs| {
            let mut row = vec![0u64; words];
            for &w in nbrs {
                row[w / 64] |= 1 << (w % 64);
            }
            row
        })
        .collect();
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut solver = MisSolver { rows: &rows, best: 0 };
    solver.best = solver.greedy(&all);
    solver.branch(all, 0);
    solver.best
}

struct MisSolver<'a> {
    rows: &'a [Bits],
    best: usize,
}

impl MisSolver<'_> {
    /// Min-degree greedy independent set size.
    fn greedy(&self, candidates: &Bits) -> usize {
        let mut cand = candidates.clone();
        let mut size = 0;
        while !bits_empty(&cand) {
            let v = bits_iter(&cand)
                .min_by_key(|&v| bits_and_count(&self.rows[v], &cand))
                .expect("non-empty");
            size += 1;
            cand[v / 64] &= !(1 << (v % 64));
            for (c, r) in cand.iter_mut().zip(&self.rows[v]) {
                *c &= !r;
            }
        }
        size
    }

    /// Number of cliques in a greedy clique cover of `candidates`.
    fn clique_cover(&self, candidates: &Bits) -> usize {
        let mut rest = candidates.clone();
        let mut cliques = 0;
        while !bits_empty(&rest) {
            let seed = bits_iter(&rest).next().expect("non-empty");
            rest[seed / 64] &= !(1 << (seed % 64));
            let mut common: Bits = rest.iter().zip(&self.rows[seed]).map(|(a, b)| a & b).collect();
            while let Some(v) = {
                let next = bits_iter(&common).next();
                next
            } {
                rest[v / 64] &= !(1 << (v % 64));
                for (c, r) in common.iter_mut().zip(&self.rows[v]) {
                    *c &= r;
                }
                common[v / 64] &= !(1 << (v % 64));
            }
            cliques += 1;
        }
        cliques
    }

    fn branch(&mut self, mut candidates: Bits, mut size: usize) {
        // Vertices with no conflicts left are always taken.
        loop {
            let isolated: Vec<usize> = bits_iter(&candidates)
                .filter(|&v| bits_and_count(&self.rows[v], &candidates) == 0)
                .collect();
            if isolated.is_empty() {
                break;
            }
            for v in isolated {
                candidates[v / 64] &= !(1 << (v % 64));
                size += 1;
            }
        }
        if bits_empty(&candidates) {
            self.best = self.best.max(size);
            return;
        }
        if size + self.clique_cover(&candidates) <= self.best {
            return;
        }
        let v = bits_iter(&candidates)
            .max_by_key(|&v| (bits_and_count(&self.rows[v], &candidates), std::cmp::Reverse(v)))
            .expect("non-empty");

        let mut with_v = candidates.clone();
        with_v[v / 64] &= !(1 << (v % 64));
        for (c, r) in with_v.iter_mut().zip(&self.rows[v]) {
            *c &= !r;
        }
        self.branch(with_v, size + 1);

        candidates[v / 64] &= !(1 << (v % 64));
        self.branch(candidates, size);
    }
}

/// Minimum over pattern vertices of the number of distinct data images.
pub fn mni(g: &DataGraph, p: &PatternGraph) -> Result<u64, MetricError> {
    mni_with_limit(g, p, DEFAULT_ENUMERATION_LIMIT)
}

pub fn mni_with_limit(g: &DataGraph, p: &PatternGraph, limit: usize) -> Result<u64, MetricError> {
    let all = embeddings(g, p, limit)?;
    if all.is_empty() {
        return Ok(0);
    }
    let min = (0..p.size())
        .map(|v| all.iter().map(|e| e.image(v)).collect::<BTreeSet<_>>().len())
        .min()
        .unwrap_or(0);
    Ok(min as u64)
}

/// Fractional score: every data vertex splits one unit of support evenly
/// among the partners it is matched with, per neighboring pattern vertex.
///
/// For pattern vertex `u`, data vertex `d` in its image set and pattern
/// neighbor `w`, the share `d` receives through `w` is the sum over partners
/// `d'` (images of `w` co-occurring with `d`) of `1 / #partners of d'`.
/// `d` contributes the minimum share over neighbors, capped at 1. The score
/// is the minimum over `u` of the summed contributions.
pub fn fractional_score(g: &DataGraph, p: &PatternGraph) -> Result<Ratio<u64>, MetricError> {
    fractional_score_with_limit(g, p, DEFAULT_ENUMERATION_LIMIT)
}

pub fn fractional_score_with_limit(g: &DataGraph, p: &PatternGraph, limit: usize) -> Result<Ratio<u64>, MetricError> {
    let all = embeddings(g, p, limit)?;
    if all.is_empty() {
        return Ok(Ratio::zero());
    }
    let n = p.size();
    // partners[(u, w)][d] = images of w co-occurring with u -> d
    let mut partners: BTreeMap<(usize, usize), BTreeMap<u32, BTreeSet<u32>>> = BTreeMap::new();
    for e in &all {
        for u in 0..n {
            for w in p.neighbors(u) {
                partners
                    .entry((u, w))
                    .or_default()
                    .entry(e.image(u))
                    .or_default()
                    .insert(e.image(w));
            }
        }
    }
    let one = Ratio::from_integer(1u64);
    let mut best: Option<Ratio<u64>> = None;
    for u in 0..n {
        let images: BTreeSet<u32> = all.iter().map(|e| e.image(u)).collect();
        let mut score = Ratio::zero();
        for &d in &images {
            let mut contribution = one;
            for w in p.neighbors(u) {
                let share = partners[&(u, w)][&d].iter().fold(Ratio::zero(), |acc, &d2| {
                    acc + Ratio::new(1, partners[&(w, u)][&d2].len() as u64)
                });
                contribution = contribution.min(share);
            }
            score += contribution;
        }
        best = Some(best.map_or(score, |b: Ratio<u64>| b.min(score)));
    }
    Ok(best.unwrap_or_else(Ratio::zero))
}

/// Evaluates one metric. `tau` bounds the greedy search for `mal` (absent:
/// full sweep); for every metric `frequent` is `count >= tau`, with an
/// absent `tau` treated as 1.
pub fn evaluate(
    kind: MetricKind,
    g: &DataGraph,
    p: &PatternGraph,
    tau: Option<u64>,
    limit: usize,
) -> Result<MetricResult, MetricError> {
    Ok(match kind {
        MetricKind::Mal => {
            let out = count_mal_with(
                g,
                p,
                &MalOptions {
                    tau,
                    ..MalOptions::default()
                },
            );
            MetricResult {
                count: Count::Integer(out.count),
                tau,
                frequent: out.count >= tau.unwrap_or(1),
                early_terminated: out.early_terminated,
            }
        }
        MetricKind::Mis => MetricResult::judged(Count::Integer(exact_mis_with_limit(g, p, limit)?), tau),
        MetricKind::Mni => MetricResult::judged(Count::Integer(mni_with_limit(g, p, limit)?), tau),
        MetricKind::Fractional => MetricResult::judged(Count::Rational(fractional_score_with_limit(g, p, limit)?), tau),
    })
}
