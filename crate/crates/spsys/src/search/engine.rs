//! The isomorph-rejecting depth-first engine.
//!
//! A search node is an ordered sequence of pairs over a lazily grown ground
//! set: every element id is introduced by the first pair that uses it, a new
//! pair's fresh A-elements take the next consecutive ids followed by its
//! fresh B-elements, and therefore the identity labeling of a node is
//! exactly its first-appearance labeling. The *encoding* of a sequence is
//! the byte string made of one segment per pair — `|A|`, `|B|`, the sorted
//! relabeled A ids, the sorted relabeled B ids — under first-appearance
//! relabeling. A node is *canonical* when no reordering of its pairs (with
//! the relabeling recomputed) produces a byte-wise smaller encoding.
//!
//! Canonical sequences have canonical prefixes: encodings of the same pair
//! multiset all have the same total length, so a smaller ordering of a
//! prefix extends to a smaller ordering of the whole sequence. Extending
//! only canonical nodes therefore visits every isomorphism class through
//! exactly one sequence, which makes the enumeration isomorph-free without
//! ever storing a seen-set.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::canon::canonical_form;
use crate::canon::CanonicalForm;
use crate::error::{Error, Result};
use crate::json::system_to_json;
use crate::rational::{binomial_usize, ExactRational};
use crate::system::SetPairSystem;

/// Hard ceiling on lazily introduced ground elements — masks are `u128`.
/// Hitting it is reported as an incomplete search, never a wrong answer.
pub(crate) const GROUND_CAP: usize = 128;

/// Callback receiving every enumerated system with ≥ 2 pairs.
pub(crate) type Visitor<'a> = &'a mut dyn FnMut(&SetPairSystem) -> Result<()>;

/// Distilled, validated engine parameters (built by the front end in
/// `search::mod` from a `SearchConfig`).
pub(crate) struct EngineParams {
    pub max_a: usize,
    pub max_b: usize,
    pub allow_exceptions: bool,
    /// Stop extending past this many pairs.
    pub max_pairs: Option<usize>,
    /// Fresh elements a single new pair may introduce.
    pub max_new: usize,
    /// Σ ceiling every admissible system satisfies: 1 in general, 5/6 when
    /// exception patterns are excluded.
    pub budget: ExactRational,
    /// `C(a+b, a)` — reciprocal of the minimum possible pair weight.
    pub min_weight_inv: BigUint,
    pub deadline: Instant,
}

impl EngineParams {
    /// `m + floor((budget − Σ) · C(a+b,a))`: no admissible completion of a
    /// partial system with `m` pairs and weight Σ can exceed this size,
    /// because each added pair costs at least `1/C(a+b,a)` of the remaining
    /// Σ budget.
    pub(crate) fn completion_bound(&self, m: usize, sigma: &ExactRational) -> usize {
        let slack = &self.budget - sigma;
        if slack.is_negative() {
            return m; // partial already over budget; only itself remains
        }
        let extra = slack
            .mul_nat_big(&self.min_weight_inv)
            .floor_int()
            .to_usize()
            .unwrap_or(usize::MAX - m);
        m.saturating_add(extra)
    }
}

/// What the depth-first drive is being used for.
pub(crate) enum DriveMode {
    /// Track the maximum size; prune subtrees that provably cannot reach
    /// the best size found so far; optionally stop at a target size.
    Maximize { stop_at: Option<usize> },
    /// Visit everything within bounds; no best-based pruning; collect
    /// representatives of every isomorphism class at every size.
    EnumerateAll,
}

/// One in-progress sequence of pairs over `0..ground`.
#[derive(Clone)]
pub(crate) struct Node {
    pub pairs: Vec<MaskPair>,
    pub ground: usize,
    pub sigma: ExactRational,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct MaskPair {
    pub a: u128,
    pub b: u128,
}

impl Node {
    pub(crate) fn root() -> Self {
        Node {
            pairs: Vec::new(),
            ground: 0,
            sigma: ExactRational::zero(),
        }
    }

    pub(crate) fn to_system(&self) -> SetPairSystem {
        let id_pairs: Vec<(Vec<usize>, Vec<usize>)> = self
            .pairs
            .iter()
            .map(|p| (bits(p.a), bits(p.b)))
            .collect();
        SetPairSystem::from_id_pairs(&id_pairs)
            .expect("engine nodes are normalized and duplicate-free")
    }
}

/// Results accumulated by one drive (worker-local; merged by the front end).
pub(crate) struct DriveResult {
    pub best: usize,
    pub best_classes: BTreeMap<CanonicalForm, SetPairSystem>,
    pub all_classes: BTreeMap<usize, BTreeMap<CanonicalForm, SetPairSystem>>,
    pub nodes: u64,
    pub complete: bool,
}

impl DriveResult {
    fn new() -> Self {
        DriveResult {
            best: 0,
            best_classes: BTreeMap::new(),
            all_classes: BTreeMap::new(),
            nodes: 0,
            complete: true,
        }
    }
}

/// One depth-first traversal. `shared_best` and `shared_stop`, when
/// present, connect parallel drives: the best size is a monotone maximum
/// used only to prune, so a stale read costs time, never correctness.
pub(crate) struct Drive<'a> {
    pub params: &'a EngineParams,
    pub mode: DriveMode,
    pub shared_best: Option<&'a AtomicUsize>,
    pub shared_stop: Option<&'a AtomicBool>,
    pub visitor: Option<Visitor<'a>>,
    weights: Vec<Vec<ExactRational>>,
    result: DriveResult,
    stopped: bool,
}

impl<'a> Drive<'a> {
    pub(crate) fn new(
        params: &'a EngineParams,
        mode: DriveMode,
        shared_best: Option<&'a AtomicUsize>,
        shared_stop: Option<&'a AtomicBool>,
        visitor: Option<Visitor<'a>>,
    ) -> Self {
        // Pair-weight table: weights[la][lb] = 1/C(la+lb, la).
        let weights = (0..=params.max_a)
            .map(|la| {
                (0..=params.max_b)
                    .map(|lb| {
                        let c = binomial_usize(la + lb, la).expect("k ≤ n");
                        ExactRational::reciprocal_of(&c).expect("binomial ≥ 1")
                    })
                    .collect()
            })
            .collect();
        Drive {
            params,
            mode,
            shared_best,
            shared_stop,
            visitor,
            weights,
            result: DriveResult::new(),
            stopped: false,
        }
    }

    pub(crate) fn into_result(self) -> DriveResult {
        self.result
    }

    /// Runs the full traversal from `node` (which must itself already have
    /// been recorded/checked by the caller if it has ≥ 2 pairs — the drive
    /// records each node exactly once, on entry).
    pub(crate) fn run(&mut self, node: &Node) -> Result<()> {
        self.dfs(node, usize::MAX)
    }

    /// Like [`run`], but descends only `depth_limit` levels below `node`,
    /// appending the nodes at the cut to `frontier` instead of recursing
    /// into them. Used to split the tree for parallel workers.
    pub(crate) fn run_to_depth(
        &mut self,
        node: &Node,
        depth_limit: usize,
        frontier: &mut Vec<Node>,
    ) -> Result<()> {
        self.dfs_frontier(node, depth_limit, frontier)
    }

    fn best_known(&self) -> usize {
        let shared = self
            .shared_best
            .map_or(0, |b| b.load(Ordering::Relaxed));
        self.result.best.max(shared)
    }

    fn should_stop(&self) -> bool {
        self.stopped
            || self
                .shared_stop
                .is_some_and(|s| s.load(Ordering::Relaxed))
    }

    /// Records `node` (visitor, max tracking, class collection) and reports
    /// theorem violations as contradictions. Returns whether the drive
    /// should keep extending below it.
    fn enter(&mut self, node: &Node) -> Result<bool> {
        self.result.nodes += 1;
        if Instant::now() >= self.params.deadline {
            self.result.complete = false;
            return Ok(false);
        }
        let m = node.pairs.len();
        if m >= 2 {
            // Every node with ≥ 2 pairs is a 1-cross intersecting system,
            // so the Σ ceilings are theorems about it. Violations are
            // world-changing and must surface loudly.
            if node.sigma > ExactRational::one() {
                return Err(Error::contradiction(
                    format!(
                        "search reached a cross intersecting system with Σ = {} > 1",
                        node.sigma
                    ),
                    Some(system_to_json(&node.to_system())),
                ));
            }
            if !self.params.allow_exceptions && node.sigma > ExactRational::of(5, 6) {
                return Err(Error::contradiction(
                    format!(
                        "search reached an exception-free 1-cross intersecting system \
                         with Σ = {} > 5/6",
                        node.sigma
                    ),
                    Some(system_to_json(&node.to_system())),
                ));
            }
            let sys = node.to_system();
            if let Some(v) = self.visitor.as_deref_mut() {
                v(&sys)?;
            }
            match self.mode {
                DriveMode::Maximize { stop_at } => {
                    if m > self.result.best {
                        self.result.best = m;
                        self.result.best_classes.clear();
                        self.result.best_classes.insert(canonical_form(&sys), sys);
                        if let Some(shared) = self.shared_best {
                            shared.fetch_max(m, Ordering::Relaxed);
                        }
                        if stop_at.is_some_and(|t| m >= t) {
                            self.stopped = true;
                            if let Some(s) = self.shared_stop {
                                s.store(true, Ordering::Relaxed);
                            }
                        }
                    } else if m == self.result.best {
                        self.result.best_classes.insert(canonical_form(&sys), sys);
                    }
                }
                DriveMode::EnumerateAll => {
                    self.result
                        .all_classes
                        .entry(m)
                        .or_default()
                        .insert(canonical_form(&sys), sys);
                }
            }
        }
        if self.should_stop() {
            return Ok(false);
        }
        if self.params.max_pairs.is_some_and(|cap| m >= cap) {
            return Ok(false);
        }
        Ok(true)
    }

    fn dfs(&mut self, node: &Node, depth_budget: usize) -> Result<()> {
        if !self.enter(node)? {
            return Ok(());
        }
        if depth_budget == 0 {
            // Only reachable through dfs_frontier, which intercepts first.
            unreachable!("depth-limited traversal must collect, not recurse");
        }
        for child in self.children(node) {
            if self.should_stop() {
                return Ok(());
            }
            if !is_canonical(&child) {
                continue;
            }
            if self.prunable(&child) {
                continue;
            }
            self.dfs(&child, depth_budget - 1)?;
        }
        Ok(())
    }

    fn dfs_frontier(
        &mut self,
        node: &Node,
        depth_budget: usize,
        frontier: &mut Vec<Node>,
    ) -> Result<()> {
        if !self.enter(node)? {
            return Ok(());
        }
        for child in self.children(node) {
            if self.should_stop() {
                return Ok(());
            }
            if !is_canonical(&child) {
                continue;
            }
            if self.prunable(&child) {
                continue;
            }
            if depth_budget == 1 {
                frontier.push(child);
            } else {
                self.dfs_frontier(&child, depth_budget - 1, frontier)?;
            }
        }
        Ok(())
    }

    /// Best-based pruning (maximization mode only): drop a child when even
    /// the optimistic completion bound cannot reach the best size already
    /// found. Ties are kept — equal-size classes must all be collected.
    fn prunable(&self, child: &Node) -> bool {
        match self.mode {
            DriveMode::Maximize { .. } => {
                let bound = self
                    .params
                    .completion_bound(child.pairs.len(), &child.sigma);
                bound < self.best_known()
            }
            DriveMode::EnumerateAll => false,
        }
    }

    /// All admissible one-pair extensions of `node`, in a fixed
    /// deterministic order.
    ///
    /// A new pair decomposes uniquely as: an exact hitting set over the
    /// existing `B_j` (one element in each) plus optional *free* old
    /// elements lying in no `B_j` plus a block of fresh elements — and
    /// symmetrically for its B side against the `A_j`, excluding elements
    /// already used by the new A side. Enumerating those parts directly
    /// produces every admissible pair exactly once, with validity by
    /// construction rather than by filtering.
    fn children(&mut self, node: &Node) -> Vec<Node> {
        let v = node.ground;
        let ground_mask = low_bits(v);
        let targets_b: Vec<u128> = node.pairs.iter().map(|p| p.b).collect();
        let targets_a: Vec<u128> = node.pairs.iter().map(|p| p.a).collect();
        let union_b = targets_b.iter().fold(0u128, |acc, t| acc | t);
        let union_a = targets_a.iter().fold(0u128, |acc, t| acc | t);

        let mut out = Vec::new();
        for ha in exact_hitting_sets(&targets_b, self.params.max_a, 0) {
            let free_a = ground_mask & !union_b;
            let rem_a = self.params.max_a - count(ha);
            for fa_old in subsets_up_to(free_a, rem_a) {
                let a_old = ha | fa_old;
                let fresh_a_max = (rem_a - count(fa_old)).min(self.params.max_new);
                for fresh_a in 0..=fresh_a_max {
                    let len_a = count(a_old) + fresh_a;
                    if len_a == 0 {
                        continue;
                    }
                    let a_mask = a_old | block(v, fresh_a);
                    for hb in exact_hitting_sets(&targets_a, self.params.max_b, a_old) {
                        let free_b = ground_mask & !union_a & !a_old;
                        let rem_b = self.params.max_b - count(hb);
                        for fb_old in subsets_up_to(free_b, rem_b) {
                            let b_old = hb | fb_old;
                            let fresh_b_cap = (rem_b - count(fb_old))
                                .min(self.params.max_new - fresh_a);
                            for fresh_b in 0..=fresh_b_cap {
                                let len_b = count(b_old) + fresh_b;
                                if len_b == 0 {
                                    continue;
                                }
                                let b_mask = b_old | block(v + fresh_a, fresh_b);
                                if !self.params.allow_exceptions
                                    && creates_exception(node, a_mask, b_mask, len_a, len_b)
                                {
                                    continue;
                                }
                                let ground = v + fresh_a + fresh_b;
                                if ground > GROUND_CAP {
                                    // Can't represent; report honest incompleteness.
                                    self.result.complete = false;
                                    continue;
                                }
                                let mut pairs = node.pairs.clone();
                                pairs.push(MaskPair { a: a_mask, b: b_mask });
                                let sigma = &node.sigma + &self.weights[len_a][len_b];
                                out.push(Node { pairs, ground, sigma });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Whether adding `(a_mask, b_mask)` to `node` would create one of the
/// singleton exception patterns with some existing pair. Only patterns
/// involving the new pair can be new — existing pairs were filtered when
/// they were added.
fn creates_exception(
    node: &Node,
    a_mask: u128,
    b_mask: u128,
    len_a: usize,
    len_b: usize,
) -> bool {
    let a_single = len_a == 1;
    let b_single = len_b == 1;
    if !a_single && !b_single {
        return false;
    }
    node.pairs.iter().any(|p| {
        let pa_single = count(p.a) == 1;
        let pb_single = count(p.b) == 1;
        (a_single && pa_single && b_mask & p.b != 0)
            || (b_single && pb_single && a_mask & p.a != 0)
            || (a_single && b_single && pa_single && pb_single)
    })
}

// ====================================================================
// Canonicity of a sequence
// ====================================================================

/// Byte encoding of the node's sequence under its own (identity =
/// first-appearance) labeling.
fn encode_identity(node: &Node) -> Vec<u8> {
    let mut out = Vec::new();
    for p in &node.pairs {
        push_segment(&mut out, p.a, p.b);
    }
    out
}

fn push_segment(out: &mut Vec<u8>, a: u128, b: u128) {
    out.push(count(a) as u8);
    out.push(count(b) as u8);
    for e in bits(a) {
        out.push(e as u8);
    }
    for e in bits(b) {
        out.push(e as u8);
    }
}

/// True iff the node's generation order is byte-wise minimal among all
/// reorderings of its pairs under recomputed first-appearance labelings.
///
/// The traversal keeps a partial relabeling and a byte position into the
/// reference encoding. At each level, a candidate pair's segment is fully
/// determined even before assigning its fresh elements (they take the next
/// consecutive labels, all larger than every assigned label, so the sorted
/// id lists are known): segments comparing smaller refute canonicity,
/// larger ones prune, and ties recurse over the ways to bind the fresh
/// elements — those bindings shape later segments only.
pub(crate) fn is_canonical(node: &Node) -> bool {
    let reference = encode_identity(node);
    let m = node.pairs.len();
    let mut relabel: Vec<Option<u8>> = vec![None; node.ground];
    let mut used = vec![false; m];
    explore_orders(node, &reference, &mut used, &mut relabel, 0, 0)
}

/// Returns false the moment any completion strictly precedes the
/// reference; true when the whole subtree is ≥ the reference.
fn explore_orders(
    node: &Node,
    reference: &[u8],
    used: &mut [bool],
    relabel: &mut [Option<u8>],
    next_label: u8,
    pos: usize,
) -> bool {
    if pos == reference.len() {
        return true; // reproduced the reference exactly
    }
    for cand in 0..node.pairs.len() {
        if used[cand] {
            continue;
        }
        let p = &node.pairs[cand];
        let (segment, fresh_a, fresh_b) = candidate_segment(p, relabel, next_label);
        match segment.as_slice().cmp(&reference[pos..pos + segment.len()]) {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Greater => continue,
            std::cmp::Ordering::Equal => {
                used[cand] = true;
                let ok = bind_fresh_and_recurse(
                    node,
                    reference,
                    used,
                    relabel,
                    next_label,
                    pos + segment.len(),
                    &fresh_a,
                    &fresh_b,
                );
                used[cand] = false;
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// The candidate's segment bytes plus its unassigned (fresh) elements per
/// side, in ascending physical order.
fn candidate_segment(
    p: &MaskPair,
    relabel: &[Option<u8>],
    next_label: u8,
) -> (Vec<u8>, Vec<usize>, Vec<usize>) {
    let mut seg = vec![count(p.a) as u8, count(p.b) as u8];
    let mut fresh_a = Vec::new();
    let mut fresh_b = Vec::new();
    let mut next = next_label;
    for (mask, fresh) in [(p.a, &mut fresh_a), (p.b, &mut fresh_b)] {
        let mut seen: Vec<u8> = bits(mask)
            .into_iter()
            .filter_map(|e| {
                if let Some(l) = relabel[e] {
                    Some(l)
                } else {
                    fresh.push(e);
                    None
                }
            })
            .collect();
        seen.sort_unstable();
        // Assigned labels all precede the fresh block, so the sorted id
        // list is the sorted assigned labels followed by the block.
        seg.extend_from_slice(&seen);
        for k in 0..fresh.len() {
            seg.push(next + k as u8);
        }
        next += fresh.len() as u8;
    }
    (seg, fresh_a, fresh_b)
}

/// Tries every assignment of the fresh elements to the next consecutive
/// labels (A block before B block) and recurses.
#[allow(clippy::too_many_arguments)]
fn bind_fresh_and_recurse(
    node: &Node,
    reference: &[u8],
    used: &mut [bool],
    relabel: &mut [Option<u8>],
    next_label: u8,
    pos: usize,
    fresh_a: &[usize],
    fresh_b: &[usize],
) -> bool {
    let mut order_a = fresh_a.to_vec();
    let mut ok = true;
    permute(&mut order_a, 0, &mut |oa| {
        if !ok {
            return;
        }
        let mut order_b = fresh_b.to_vec();
        permute(&mut order_b, 0, &mut |ob| {
            if !ok {
                return;
            }
            for (k, &e) in oa.iter().enumerate() {
                relabel[e] = Some(next_label + k as u8);
            }
            for (k, &e) in ob.iter().enumerate() {
                relabel[e] = Some(next_label + (oa.len() + k) as u8);
            }
            let after = next_label + (oa.len() + ob.len()) as u8;
            if !explore_orders(node, reference, used, relabel, after, pos) {
                ok = false;
            }
            for &e in oa.iter().chain(ob.iter()) {
                relabel[e] = None;
            }
        });
    });
    ok
}

/// Heap-style permutation generator over a small scratch slice.
fn permute(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

// ====================================================================
// Exact hitting sets and subset streams
// ====================================================================

/// All sets `H` (avoiding `forbidden`, |H| ≤ bound) with `|H ∩ t| = 1` for
/// every target. Each H is generated once: the branch point is always the
/// first target still unhit, and H's unique element in that target
/// determines the branch taken.
fn exact_hitting_sets(targets: &[u128], bound: usize, forbidden: u128) -> Vec<u128> {
    let mut out = Vec::new();
    hit_rec(targets, bound, forbidden, 0, 0, &mut out);
    out
}

fn hit_rec(
    targets: &[u128],
    bound: usize,
    forbidden: u128,
    chosen: u128,
    size: usize,
    out: &mut Vec<u128>,
) {
    let Some(&t) = targets.iter().find(|&&t| t & chosen == 0) else {
        out.push(chosen);
        return;
    };
    if size == bound {
        return; // unhit target but no room left
    }
    let mut cands = t & !forbidden;
    while cands != 0 {
        let e = cands & cands.wrapping_neg();
        cands &= cands - 1;
        // e must not over-hit: every target containing e must be unhit.
        if targets.iter().all(|&tj| tj & e == 0 || tj & chosen == 0) {
            hit_rec(targets, bound, forbidden, chosen | e, size + 1, out);
        }
    }
}

/// All subsets of `mask` with at most `limit` bits, the empty set first.
fn subsets_up_to(mask: u128, limit: usize) -> Vec<u128> {
    let elements = bits(mask);
    let mut out = Vec::new();
    subset_rec(&elements, 0, 0, limit, &mut out);
    out
}

fn subset_rec(elements: &[usize], idx: usize, cur: u128, limit: usize, out: &mut Vec<u128>) {
    if idx == elements.len() {
        out.push(cur);
        return;
    }
    subset_rec(elements, idx + 1, cur, limit, out);
    if count(cur) < limit {
        subset_rec(elements, idx + 1, cur | 1u128 << elements[idx], limit, out);
    }
}

// ====================================================================
// Mask utilities
// ====================================================================

pub(crate) fn count(mask: u128) -> usize {
    mask.count_ones() as usize
}

pub(crate) fn bits(mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(count(mask));
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

fn low_bits(n: usize) -> u128 {
    if n == 0 {
        0
    } else if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn block(start: usize, len: usize) -> u128 {
    low_bits(start + len) & !low_bits(start)
}
