//! Level-wise mining loop: seed with the graph's edges, keep the frequent
//! candidates of each size, merge them into the next size, repeat.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::generation::{generate_candidates, seed_size2, size2_candidates, Candidate, GenerationError};
use crate::graph::{DataGraph, PatternGraph};
use crate::matcher::{count_mal_with, MalOptions};
use crate::metrics::{self, Count, MetricError, MetricKind, MetricResult, MiningConfig, Slider};

#[derive(Debug, thiserror::Error)]
pub enum MiningError {
    #[error(transparent)]
    Config(#[from] MetricError),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// No candidates or no frequent patterns left.
    Exhausted,
    /// `n * tau` exceeds the number of data vertices.
    SizeBound,
    /// The configured maximum pattern size was mined.
    MaxSize,
    Timeout,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Exhausted => "exhausted",
            Termination::SizeBound => "size_bound",
            Termination::MaxSize => "max_size",
            Termination::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug)]
pub struct FrequentPattern {
    pub pattern: PatternGraph,
    pub result: MetricResult,
    /// Canonical encodings of the frequent patterns it was generated from;
    /// empty for size 2.
    pub parents: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub size: usize,
    pub tau: u64,
    pub generated: usize,
    pub searched: usize,
    pub frequent: usize,
    /// Evaluations cut short by the per-pattern step budget.
    pub budget_exhausted: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct MiningReport {
    /// Frequent patterns by increasing size, sorted by encoding within a size.
    pub frequent: Vec<FrequentPattern>,
    pub levels: Vec<LevelStats>,
    pub termination: Termination,
    pub elapsed: Duration,
}

impl MiningReport {
    pub fn of_size(&self, size: usize) -> impl Iterator<Item = &FrequentPattern> {
        self.frequent.iter().filter(move |f| f.pattern.size() == size)
    }

    pub fn contains(&self, p: &PatternGraph) -> bool {
        self.frequent.iter().any(|f| f.pattern.code() == p.code())
    }
}

/// Whether a level of `n`-vertex patterns can still hold `tau` disjoint
/// embeddings in `g`.
pub fn size_bound(g: &DataGraph, support: u64, lambda: Slider, n: usize) -> Result<bool, MetricError> {
    let tau = metrics::tau(support, lambda, n)?;
    Ok((n as u128) * u128::from(tau) <= g.vertex_count() as u128)
}

pub fn mine(g: &DataGraph, cfg: &MiningConfig) -> Result<MiningReport, MiningError> {
    mine_with(g, cfg, |_, _| {})
}

/// [`mine`], calling `on_level(size, candidates)` before each level is
/// evaluated.
pub fn mine_with(
    g: &DataGraph,
    cfg: &MiningConfig,
    on_level: impl FnMut(usize, &[PatternGraph]) + Send,
) -> Result<MiningReport, MiningError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| MiningError::ThreadPool(e.to_string()))?;
    pool.install(|| run(g, cfg, on_level))
}

fn evaluate(
    g: &DataGraph,
    p: &PatternGraph,
    cfg: &MiningConfig,
    tau: u64,
) -> Result<(MetricResult, bool), MetricError> {
    if cfg.metric == MetricKind::Mal {
        let out = count_mal_with(
            g,
            p,
            &MalOptions {
                tau: Some(tau),
                step_budget: cfg.step_budget,
                ..MalOptions::default()
            },
        );
        let result = MetricResult {
            count: Count::Integer(out.count),
            tau: Some(tau),
            frequent: out.frequent,
            early_terminated: out.early_terminated,
        };
        return Ok((result, out.budget_exhausted));
    }
    Ok((
        metrics::evaluate(cfg.metric, g, p, Some(tau), cfg.enumeration_limit)?,
        false,
    ))
}

fn run(
    g: &DataGraph,
    cfg: &MiningConfig,
    mut on_level: impl FnMut(usize, &[PatternGraph]),
) -> Result<MiningReport, MiningError> {
    let start = Instant::now();
    let timed_out = |start: Instant| cfg.timeout.is_some_and(|t| start.elapsed() >= t);
    let mut report = MiningReport {
        frequent: Vec::new(),
        levels: Vec::new(),
        termination: Termination::Exhausted,
        elapsed: Duration::ZERO,
    };
    let mut candidates: Vec<Candidate> = seed_size2(g)
        .into_iter()
        .map(|pattern| Candidate {
            pattern,
            parents: Vec::new(),
        })
        .collect();
    let mut parent_codes: Vec<Vec<u8>> = Vec::new();
    let mut size = 2;

    loop {
        if candidates.is_empty() {
            report.termination = Termination::Exhausted;
            break;
        }
        if !size_bound(g, cfg.support, cfg.lambda, size)? {
            report.termination = Termination::SizeBound;
            break;
        }
        let level_start = Instant::now();
        let tau = cfg.tau(size);
        let patterns: Vec<PatternGraph> = candidates.iter().map(|c| c.pattern.clone()).collect();
        on_level(size, &patterns);

        let stop = AtomicBool::new(false);
        let outcomes: Vec<Option<Result<(MetricResult, bool), MetricError>>> = patterns
            .par_iter()
            .map(|p| {
                if stop.load(Ordering::Relaxed) || timed_out(start) {
                    stop.store(true, Ordering::Relaxed);
                    return None;
                }
                Some(evaluate(g, p, cfg, tau))
            })
            .collect();

        let mut stats = LevelStats {
            size,
            tau,
            generated: candidates.len(),
            searched: 0,
            frequent: 0,
            budget_exhausted: 0,
            elapsed_ms: 0,
        };
        let mut level_frequent = Vec::new();
        for (candidate, outcome) in candidates.into_iter().zip(outcomes) {
            let Some(outcome) = outcome else { continue };
            let (result, budget_hit) = outcome?;
            stats.searched += 1;
            stats.budget_exhausted += usize::from(budget_hit);
            if result.frequent {
                let parents = candidate.parents.iter().map(|&i| parent_codes[i].clone()).collect();
                level_frequent.push(FrequentPattern {
                    pattern: candidate.pattern,
                    result,
                    parents,
                });
            }
        }
        stats.frequent = level_frequent.len();
        stats.elapsed_ms = level_start.elapsed().as_millis();
        report.levels.push(stats);
        let stopped = stop.load(Ordering::Relaxed);
        log::info!(
            "size {size}: tau {tau}, {} searched, {} frequent",
            report.levels.last().map_or(0, |s| s.searched),
            level_frequent.len()
        );

        let next_parents: Vec<PatternGraph> = level_frequent.iter().map(|f| f.pattern.clone()).collect();
        parent_codes = next_parents.iter().map(|p| p.code().to_vec()).collect();
        report.frequent.extend(level_frequent);

        if stopped {
            report.termination = Termination::Timeout;
            break;
        }
        if size >= cfg.max_size {
            report.termination = Termination::MaxSize;
            break;
        }
        if next_parents.is_empty() {
            report.termination = Termination::Exhausted;
            break;
        }
        candidates = if size == 2 {
            size2_candidates(&next_parents)
        } else {
            generate_candidates(&next_parents)?
        };
        size += 1;
        if timed_out(start) {
            report.termination = Termination::Timeout;
            break;
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
