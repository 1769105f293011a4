//! Exhaustive, isomorph-free search for the maximum number of pairs in a
//! 1-cross intersecting system within per-side size bounds.
//!
//! [`search_max`] answers "how many pairs can an `(a,b)`-bounded 1-cross
//! intersecting system have?" by depth-first extension of partial systems,
//! visiting each isomorphism class exactly once (see [`engine`] for the
//! canonical-sequence scheme) and pruning with the exact Σ ceilings: 1 in
//! general, 5/6 when the singleton exception patterns are excluded. Systems
//! need at least two pairs before the intersection conditions say anything,
//! so the reported maximum ranges over `m ≥ 2` and is 0 when no two pairs
//! coexist within bounds.
//!
//! The search is exact and honest: a completed run proves maximality and
//! carries one representative per extremal isomorphism class; a run that
//! hits its time budget says so via `proof_of_maximality = false` instead
//! of guessing. The [`naive`] module holds an independent
//! enumerate-and-filter reference implementation used by the validation
//! tests as a mutual oracle.

mod engine;
pub mod naive;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::json::system_to_json;
use crate::rational::{binomial_usize, ExactRational};
use crate::system::SetPairSystem;

use engine::{Drive, DriveMode, DriveResult, EngineParams, Node, Visitor};

/// Parameters of one search run.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum |A_i|.
    pub a: usize,
    /// Maximum |B_i|.
    pub b: usize,
    /// Whether systems containing the singleton exception patterns are
    /// admissible. With `false` (the default) the sharp 5/6 ceiling prunes;
    /// with `true` only the general Σ ≤ 1 ceiling applies.
    pub allow_exceptions: bool,
    /// Optional cap on the number of pairs to explore.
    pub max_pairs: Option<usize>,
    /// Fresh ground elements a single new pair may introduce. The default
    /// `a + b` is no restriction at all (a pair cannot use more), so every
    /// search is complete unless this is lowered deliberately.
    pub max_new_elements_per_pair: usize,
    /// Wall-clock budget; exceeding it yields an honest incomplete outcome.
    pub time_budget: Duration,
    /// Parallel subtree workers. 1 (the default) is fully sequential and
    /// byte-deterministic, including node counts.
    pub worker_count: usize,
    /// Depth at which the tree is split into independent subtrees when
    /// `worker_count > 1`.
    pub split_depth: usize,
}

impl SearchConfig {
    /// Defaults: exceptions excluded, no pair cap, lazy ground growth
    /// unrestricted, 300 s budget, sequential.
    pub fn new(a: usize, b: usize) -> Self {
        SearchConfig {
            a,
            b,
            allow_exceptions: false,
            max_pairs: None,
            max_new_elements_per_pair: a + b,
            time_budget: Duration::from_secs(300),
            worker_count: 1,
            split_depth: 2,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.a == 0 || self.b == 0 {
            return Err(Error::invalid("size bounds a, b must be ≥ 1"));
        }
        if self.max_new_elements_per_pair == 0 {
            return Err(Error::invalid("max_new_elements_per_pair must be ≥ 1"));
        }
        if self.max_pairs == Some(0) {
            return Err(Error::invalid("max_pairs cap must be ≥ 1 when given"));
        }
        if self.time_budget.is_zero() {
            return Err(Error::invalid("time budget must be positive"));
        }
        if self.worker_count == 0 {
            return Err(Error::invalid("worker_count must be ≥ 1"));
        }
        if self.split_depth == 0 {
            return Err(Error::invalid("split_depth must be ≥ 1"));
        }
        Ok(())
    }

    fn params(&self, stop_at: Option<usize>) -> EngineParams {
        let budget = if self.allow_exceptions {
            ExactRational::one()
        } else {
            ExactRational::of(5, 6)
        };
        let max_pairs = match (self.max_pairs, stop_at) {
            (Some(c), Some(t)) => Some(c.min(t)),
            (Some(c), None) => Some(c),
            (None, t) => t,
        };
        EngineParams {
            max_a: self.a,
            max_b: self.b,
            allow_exceptions: self.allow_exceptions,
            max_pairs,
            max_new: self.max_new_elements_per_pair.min(self.a + self.b),
            budget,
            min_weight_inv: binomial_usize(self.a + self.b, self.a)
                .expect("a ≤ a+b"),
            deadline: Instant::now() + self.time_budget,
        }
    }
}

/// One isomorphism class found at the maximum size.
#[derive(Clone, Debug)]
pub struct ExtremalClass {
    pub form: CanonicalForm,
    pub representative: SetPairSystem,
}

/// Result of a maximization run.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Largest admissible system found (over m ≥ 2; 0 if none exists).
    pub max_m: usize,
    /// One representative per isomorphism class of that size, sorted by
    /// canonical form. Complete exactly when `proof_of_maximality` holds.
    pub extremal_classes: Vec<ExtremalClass>,
    pub nodes_explored: u64,
    /// True when the search exhausted the space within its budget, so
    /// `max_m` is the proven maximum and the class list is complete.
    pub proof_of_maximality: bool,
}

/// Decision-form answer for "does a system of size m exist within bounds?".
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Feasibility {
    Feasible,
    Infeasible,
    /// The budget ran out before either a witness or an exhaustion proof.
    Unknown,
}

/// Computes the maximum number of pairs within `cfg`'s bounds, with one
/// representative per extremal isomorphism class.
///
/// # Errors
///
/// Invalid configuration; or a contradiction if the search ever reaches a
/// system violating the Σ ceilings or emits a representative that fails
/// re-verification (both are theorem-level events that must never happen).
pub fn search_max(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let params = cfg.params(None);
    let result = if cfg.worker_count == 1 {
        run_sequential(&params, DriveMode::Maximize { stop_at: None }, None)?
    } else {
        run_parallel(&params, None, cfg)?
    };
    finish_outcome(cfg, result)
}

/// Sequential [`search_max`] that also hands every enumerated system (m ≥ 2)
/// to `visitor` before continuing — the hook used by verification sweeps.
/// An error from the visitor aborts the search and propagates.
pub fn search_max_visit(
    cfg: &SearchConfig,
    visitor: &mut dyn FnMut(&SetPairSystem) -> Result<()>,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let params = cfg.params(None);
    let result = run_sequential(
        &params,
        DriveMode::Maximize { stop_at: None },
        Some(visitor),
    )?;
    finish_outcome(cfg, result)
}

/// Whether a system of exactly `m` pairs exists within bounds. Truncates
/// the underlying search at the first success.
///
/// # Errors
///
/// `m < 2` or an invalid configuration.
pub fn feasible(m: usize, cfg: &SearchConfig) -> Result<Feasibility> {
    if m < 2 {
        return Err(Error::invalid(
            "feasibility is about systems with at least two pairs",
        ));
    }
    cfg.validate()?;
    let params = cfg.params(Some(m));
    let result = if cfg.worker_count == 1 {
        run_sequential(&params, DriveMode::Maximize { stop_at: Some(m) }, None)?
    } else {
        run_parallel(&params, Some(m), cfg)?
    };
    Ok(if result.best >= m {
        Feasibility::Feasible
    } else if result.complete {
        Feasibility::Infeasible
    } else {
        Feasibility::Unknown
    })
}

/// Exhaustively enumerates *all* isomorphism classes within bounds, grouped
/// by pair count. Sequential; no best-based pruning.
///
/// # Errors
///
/// Invalid configuration, or resource-limit if the time budget (or ground
/// cap) cut the enumeration short — a partial class census is not returned.
pub fn enumerate_classes(
    cfg: &SearchConfig,
) -> Result<BTreeMap<usize, Vec<ExtremalClass>>> {
    cfg.validate()?;
    let params = cfg.params(None);
    let result = run_sequential(&params, DriveMode::EnumerateAll, None)?;
    if !result.complete {
        return Err(Error::limit(
            "budget exhausted before the class enumeration completed",
        ));
    }
    Ok(result
        .all_classes
        .into_iter()
        .map(|(m, classes)| {
            let list = classes
                .into_iter()
                .map(|(form, representative)| ExtremalClass { form, representative })
                .collect();
            (m, list)
        })
        .collect())
}

/// Upper bound on the total number of pairs any admissible completion of
/// `partial` can reach: each added pair costs at least `1/C(a+b, a)` of the
/// remaining Σ budget (1 in general, 5/6 when `cfg` excludes exceptions).
///
/// # Errors
///
/// Invalid configuration, or a partial system with an empty-sided pair.
pub fn prune_bound(partial: &SetPairSystem, cfg: &SearchConfig) -> Result<usize> {
    cfg.validate()?;
    let params = cfg.params(None);
    let sigma = partial.sigma()?;
    Ok(params.completion_bound(partial.m(), &sigma))
}

// ====================================================================
// Drive orchestration
// ====================================================================

fn run_sequential<'a>(
    params: &'a EngineParams,
    mode: DriveMode,
    visitor: Option<Visitor<'a>>,
) -> Result<DriveResult> {
    let mut drive = Drive::new(params, mode, None, None, visitor);
    drive.run(&Node::root())?;
    Ok(drive.into_result())
}

/// Splits the tree at `cfg.split_depth` and hands independent subtrees to a
/// worker pool. Workers share only a monotone best-size maximum (pruning
/// hint) and a stop flag; everything else is worker-local and merged at the
/// end, so completed runs are deterministic up to node counts.
fn run_parallel(
    params: &EngineParams,
    stop_at: Option<usize>,
    cfg: &SearchConfig,
) -> Result<DriveResult> {
    let shared_best = AtomicUsize::new(0);
    let shared_stop = AtomicBool::new(false);

    let mut frontier = Vec::new();
    let mut seed = Drive::new(
        params,
        DriveMode::Maximize { stop_at },
        Some(&shared_best),
        Some(&shared_stop),
        None,
    );
    seed.run_to_depth(&Node::root(), cfg.split_depth, &mut frontier)?;
    let seed_result = seed.into_result();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::limit(format!("cannot build worker pool: {e}")))?;
    let worker_results: Vec<Result<DriveResult>> = pool.install(|| {
        frontier
            .par_iter()
            .map(|node| {
                let mut drive = Drive::new(
                    params,
                    DriveMode::Maximize { stop_at },
                    Some(&shared_best),
                    Some(&shared_stop),
                    None,
                );
                drive.run(node)?;
                Ok(drive.into_result())
            })
            .collect()
    });

    let mut merged = seed_result;
    for result in worker_results {
        let r = result?;
        merged.nodes += r.nodes;
        merged.complete &= r.complete;
        match r.best.cmp(&merged.best) {
            std::cmp::Ordering::Greater => {
                merged.best = r.best;
                merged.best_classes = r.best_classes;
            }
            std::cmp::Ordering::Equal => {
                merged.best_classes.extend(r.best_classes);
            }
            std::cmp::Ordering::Less => {}
        }
    }
    Ok(merged)
}

/// Post-run verification and packaging: every representative is re-checked
/// against the public predicates (never trusted from search bookkeeping),
/// and completed exception-free runs are checked against the
/// `floor((5/6)·C(a+b,a))` ceiling.
fn finish_outcome(cfg: &SearchConfig, result: DriveResult) -> Result<SearchOutcome> {
    let stopped_early = false; // search_max never truncates at a target
    let proof = result.complete && !stopped_early;

    for (form, rep) in &result.best_classes {
        let ok = rep.is_one_cross_intersecting()?
            && rep
                .pairs()
                .iter()
                .all(|p| p.a_size() <= cfg.a && p.b_size() <= cfg.b)
            && (cfg.allow_exceptions || crate::analysis::exception_classify(rep).is_empty())
            && canonical_form(rep) == *form;
        if !ok {
            return Err(Error::contradiction(
                "search emitted a representative that fails re-verification",
                Some(system_to_json(rep)),
            ));
        }
    }

    if proof && !cfg.allow_exceptions && cfg.a >= 2 && cfg.b >= 2 {
        let ceiling = ExactRational::of(5, 6)
            .mul_nat_big(&binomial_usize(cfg.a + cfg.b, cfg.a).expect("a ≤ a+b"))
            .floor_int();
        let max = num_bigint::BigInt::from(result.best);
        if max > ceiling {
            return Err(Error::contradiction(
                format!(
                    "proven maximum {} exceeds the 5/6 ceiling {} at ({}, {})",
                    result.best, ceiling, cfg.a, cfg.b
                ),
                None,
            ));
        }
    }

    Ok(SearchOutcome {
        max_m: result.best,
        extremal_classes: result
            .best_classes
            .into_iter()
            .map(|(form, representative)| ExtremalClass { form, representative })
            .collect(),
        nodes_explored: result.nodes,
        proof_of_maximality: proof,
    })
}
