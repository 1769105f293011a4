//! A deliberately unsophisticated reference enumerator.
//!
//! This is the engine's control group: no canonicity test, no Σ-based
//! pruning, no constructive candidate generation. Every candidate pair is
//! enumerated as raw subsets and then *filtered* against the definition.
//! The two implementations share no search logic, so agreement between
//! them on small bounds is strong evidence that both are right — and both
//! terminate without any pruning because the Σ ≤ 1 theorem leaves nothing
//! to extend past the mathematical ceiling.

use crate::error::{Error, Result};
use crate::system::SetPairSystem;

/// Maximum number of pairs over lazily introduced, first-appearance
/// normalized ground elements, found by exhaustive enumerate-and-filter.
/// Also returns the number of sequences visited.
///
/// Panics if any sequence outgrows `hard_cap` pairs — callers set the cap
/// above the provable ceiling so the assertion documents that enumeration
/// terminated on combinatorial grounds alone, not by truncation.
pub fn naive_max(
    a: usize,
    b: usize,
    allow_exceptions: bool,
    hard_cap: usize,
) -> (usize, u64) {
    let mut best = 0usize;
    let mut nodes = 0u64;
    let mut pairs: Vec<(u128, u128)> = Vec::new();
    naive_dfs(
        &mut pairs,
        0,
        a,
        b,
        allow_exceptions,
        hard_cap,
        &mut best,
        &mut nodes,
    );
    (best, nodes)
}

#[allow(clippy::too_many_arguments)]
fn naive_dfs(
    pairs: &mut Vec<(u128, u128)>,
    ground: usize,
    a: usize,
    b: usize,
    allow_exceptions: bool,
    hard_cap: usize,
    best: &mut usize,
    nodes: &mut u64,
) {
    *nodes += 1;
    let m = pairs.len();
    assert!(
        m <= hard_cap,
        "naive enumeration exceeded the mathematical ceiling: {m} pairs"
    );
    if m >= 2 {
        *best = (*best).max(m);
    }
    for (na, nb, new_ground) in candidate_pairs(pairs, ground, a, b) {
        if !allow_exceptions && has_exception_with_last(pairs, na, nb) {
            continue;
        }
        pairs.push((na, nb));
        naive_dfs(pairs, new_ground, a, b, allow_exceptions, hard_cap, best, nodes);
        pairs.pop();
    }
}

/// All `(A, B, new_ground)` extensions of the current sequence: `A` and `B`
/// range over subsets of the old ground plus a prefix block of fresh
/// elements (A's block first), and survive a full check of the definition
/// against every existing pair.
fn candidate_pairs(
    pairs: &[(u128, u128)],
    ground: usize,
    a: usize,
    b: usize,
) -> Vec<(u128, u128, usize)> {
    let mut out = Vec::new();
    for (a_old, fresh_a) in masked_subsets(pairs, ground, a, |p| p.1, 0) {
        let len_a_old = a_old.count_ones() as usize;
        let a_mask = a_old | fresh_block(ground, fresh_a);
        if len_a_old + fresh_a == 0 {
            continue;
        }
        // A must meet every existing B exactly once.
        if pairs.iter().any(|p| (a_mask & p.1).count_ones() != 1) {
            continue;
        }
        let b_ground = ground + fresh_a;
        for (b_old, fresh_b) in
            masked_subsets(pairs, ground, b, |p| p.0, a_mask)
        {
            let len_b_old = b_old.count_ones() as usize;
            if len_b_old + fresh_b == 0 || fresh_b > b.saturating_sub(len_b_old) {
                continue;
            }
            let b_mask = b_old | fresh_block(b_ground, fresh_b);
            if a_mask & b_mask != 0 {
                continue;
            }
            if pairs.iter().any(|p| (p.0 & b_mask).count_ones() != 1) {
                continue;
            }
            out.push((a_mask, b_mask, b_ground + fresh_b));
        }
    }
    out
}

/// Subsets of the old ground (avoiding `exclude`) of size ≤ `cap`, paired
/// with every admissible fresh-element count, pruned only by the monotone
/// impossibility `|S ∩ target| ≥ 2` (supersets can never recover). The
/// `target` projection selects which side of existing pairs constrains the
/// subset.
fn masked_subsets(
    pairs: &[(u128, u128)],
    ground: usize,
    cap: usize,
    target: fn(&(u128, u128)) -> u128,
    exclude: u128,
) -> Vec<(u128, usize)> {
    let mut out = Vec::new();
    let mut rec = vec![(0u128, 0usize)]; // (subset, next element to consider)
    while let Some((cur, idx)) = rec.pop() {
        let size = cur.count_ones() as usize;
        for fresh in 0..=(cap - size) {
            out.push((cur, fresh));
        }
        if size == cap {
            continue;
        }
        for e in idx..ground {
            let bit = 1u128 << e;
            if exclude & bit != 0 {
                continue;
            }
            let ext = cur | bit;
            if pairs.iter().any(|p| (target(p) & ext).count_ones() > 1) {
                continue;
            }
            rec.push((ext, e + 1));
        }
    }
    out
}

/// Full-scan singleton exception test over the sequence plus a prospective
/// new pair — independent of the incremental filter in the engine.
fn has_exception_with_last(pairs: &[(u128, u128)], na: u128, nb: u128) -> bool {
    let mut all: Vec<(u128, u128)> = pairs.to_vec();
    all.push((na, nb));
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (ai, bi) = all[i];
            let (aj, bj) = all[j];
            let a_singles = ai.count_ones() == 1 && aj.count_ones() == 1;
            let b_singles = bi.count_ones() == 1 && bj.count_ones() == 1;
            if a_singles && bi & bj != 0 {
                return true;
            }
            if b_singles && ai & aj != 0 {
                return true;
            }
            if a_singles && b_singles {
                return true;
            }
        }
    }
    false
}

fn fresh_block(start: usize, len: usize) -> u128 {
    if len == 0 {
        return 0;
    }
    ((1u128 << (start + len)) - 1) & !((1u128 << start) - 1)
}

/// Counts labeled ordered sequences of exactly `m` pairs over the *fixed*
/// ground `{0..k−1}` whose sets jointly use every ground element. Used for
/// the orbit-counting cross-check of the isomorph-free engine.
pub fn naive_count_exact_ground(
    a: usize,
    b: usize,
    m: usize,
    k: usize,
    allow_exceptions: bool,
) -> Result<u64> {
    if k > 64 {
        return Err(Error::invalid("fixed-ground counting supports k ≤ 64"));
    }
    let full: u128 = if k == 0 { 0 } else { (1u128 << k) - 1 };
    let mut count = 0u64;
    let mut pairs = Vec::new();
    count_rec(&mut pairs, full, a, b, m, allow_exceptions, &mut count);
    Ok(count)
}

fn count_rec(
    pairs: &mut Vec<(u128, u128)>,
    full: u128,
    a: usize,
    b: usize,
    m: usize,
    allow_exceptions: bool,
    count: &mut u64,
) {
    if pairs.len() == m {
        let used = pairs.iter().fold(0u128, |acc, p| acc | p.0 | p.1);
        if used == full {
            *count += 1;
        }
        return;
    }
    // Plain subsets of the fixed ground — no fresh elements, no
    // normalization, every labeled candidate tried.
    for a_mask in fixed_subsets(full, a) {
        if a_mask == 0 || pairs.iter().any(|p| (a_mask & p.1).count_ones() != 1) {
            continue;
        }
        for b_mask in fixed_subsets(full & !a_mask, b) {
            if b_mask == 0 || pairs.iter().any(|p| (p.0 & b_mask).count_ones() != 1) {
                continue;
            }
            if !allow_exceptions && has_exception_with_last(pairs, a_mask, b_mask) {
                continue;
            }
            pairs.push((a_mask, b_mask));
            count_rec(pairs, full, a, b, m, allow_exceptions, count);
            pairs.pop();
        }
    }
}

fn fixed_subsets(mask: u128, cap: usize) -> Vec<u128> {
    let elements: Vec<usize> = (0..128).filter(|&e| mask & (1u128 << e) != 0).collect();
    let mut out = Vec::new();
    fixed_rec(&elements, 0, 0, cap, &mut out);
    out
}

fn fixed_rec(elements: &[usize], idx: usize, cur: u128, cap: usize, out: &mut Vec<u128>) {
    if idx == elements.len() {
        out.push(cur);
        return;
    }
    fixed_rec(elements, idx + 1, cur, cap, out);
    if (cur.count_ones() as usize) < cap {
        fixed_rec(elements, idx + 1, cur | 1u128 << elements[idx], cap, out);
    }
}

/// Order of the automorphism group of a system: element permutations that
/// induce a (necessarily unique) permutation of the pairs. Brute force over
/// all ground permutations — callers keep the ground small.
pub fn automorphism_order(s: &SetPairSystem) -> Result<u64> {
    let k = s.ground_size();
    if k > 9 {
        return Err(Error::limit(format!(
            "brute-force automorphism counting is limited to 9 elements (got {k})"
        )));
    }
    let pairs: Vec<(Vec<usize>, Vec<usize>)> = s
        .pairs()
        .iter()
        .map(|p| (p.a().to_vec(), p.b().to_vec()))
        .collect();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut order = 0u64;
    permute_all(&mut perm, 0, &mut |sigma| {
        if induces_pair_bijection(&pairs, sigma) {
            order += 1;
        }
    });
    Ok(order)
}

fn induces_pair_bijection(pairs: &[(Vec<usize>, Vec<usize>)], sigma: &[usize]) -> bool {
    let mut hit = vec![false; pairs.len()];
    for (ai, bi) in pairs {
        let ima: Vec<usize> = sorted(ai.iter().map(|&e| sigma[e]));
        let imb: Vec<usize> = sorted(bi.iter().map(|&e| sigma[e]));
        let Some(j) = pairs
            .iter()
            .position(|(aj, bj)| *aj == ima && *bj == imb)
        else {
            return false;
        };
        if hit[j] {
            return false;
        }
        hit[j] = true;
    }
    true
}

fn sorted(iter: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = iter.collect();
    v.sort_unstable();
    v
}

fn permute_all(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{five_cycle, singleton_swap, triangle};

    #[test]
    fn naive_small_bounds() {
        assert_eq!(naive_max(1, 1, true, 8).0, 2);
        assert_eq!(naive_max(1, 1, false, 8).0, 0);
        assert_eq!(naive_max(1, 2, true, 8).0, 3);
        assert_eq!(naive_max(1, 2, false, 8).0, 2);
    }

    #[test]
    fn automorphism_orders_of_fixtures() {
        // The 5-cycle: 5 rotations × 2 from the self-duality-compatible
        // reflection-like symmetry.
        assert_eq!(automorphism_order(&five_cycle()).unwrap(), 10);
        // Swapping x and y maps the swap system to itself.
        assert_eq!(automorphism_order(&singleton_swap()).unwrap(), 2);
        // The triangle is fully symmetric on its three elements.
        assert_eq!(automorphism_order(&triangle()).unwrap(), 6);
    }

    #[test]
    fn exact_ground_count_of_the_swap_stratum() {
        // m=2, k=2 at (1,1): the two orderings of the singleton swap.
        assert_eq!(naive_count_exact_ground(1, 1, 2, 2, true).unwrap(), 2);
        // Exception-free, the stratum is empty — the swap is pattern (c).
        assert_eq!(naive_count_exact_ground(1, 1, 2, 2, false).unwrap(), 0);
    }

    #[test]
    fn exact_ground_count_of_the_triangle_stratum() {
        // m=3, k=3 at (1,2): orbit size 3!·3!/|Aut| = 36/6 = 6.
        assert_eq!(naive_count_exact_ground(1, 2, 3, 3, true).unwrap(), 6);
    }
}
