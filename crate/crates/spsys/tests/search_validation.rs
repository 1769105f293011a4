//! Cross-validation of the canonical-augmentation engine against the
//! naive reference enumerator, plus retrospective soundness checks on
//! the pruning bound. The two engines share no enumeration code, so
//! agreement here is strong evidence that both are right.

use std::collections::HashMap;

use spsys::search::naive::{automorphism_order, naive_count_exact_ground, naive_max};
use spsys::search::{enumerate_classes, prune_bound, search_max, search_max_visit, SearchConfig};
use spsys::{canonical_form, SetPairSystem};

/// The two engines must report the same maximum at every desk-scale
/// configuration, with and without the exception patterns admitted.
#[test]
fn engines_agree_on_small_maxima() {
    // hard_cap is the provable ceiling each enumeration may not cross;
    // the naive enumerator asserts it internally.
    for (a, b, cap) in [(1usize, 1usize, 2usize), (1, 2, 3), (2, 2, 6)] {
        for allow in [false, true] {
            let (naive_best, naive_nodes) = naive_max(a, b, allow, cap);
            let mut cfg = SearchConfig::new(a, b);
            cfg.allow_exceptions = allow;
            let outcome = search_max(&cfg).expect("search");
            assert!(
                outcome.proof_of_maximality,
                "({a},{b}, allow={allow}): search must terminate exhaustively"
            );
            assert_eq!(
                outcome.max_m, naive_best,
                "({a},{b}, allow={allow}): engines disagree — canonical {} vs naive \
                 {naive_best} (naive visited {naive_nodes} sequences)",
                outcome.max_m
            );
        }
    }
}

/// Isomorph rejection bookkeeping: for a class with automorphism group of
/// order |Aut| whose representative spans exactly k ground elements, the
/// number of labeled, ordered systems on the fixed ground {0..k-1} is
/// m!·k!/|Aut|. Summing over the engine's classes must reproduce the
/// naive fixed-ground count, stratum by stratum.
#[test]
fn orbit_census_matches_naive_labeled_counts() {
    let mut cfg = SearchConfig::new(2, 2);
    cfg.allow_exceptions = true;
    let classes = enumerate_classes(&cfg).expect("full class census at (2,2)");

    let factorial = |n: usize| -> u64 { (1..=n as u64).product() };

    let mut compared = 0usize;
    for (m, ks) in [(2usize, 2usize..=6), (3, 3..=4), (5, 5..=5)] {
        for k in ks {
            let engine_labeled: u64 = classes
                .get(&m)
                .map(|list| {
                    list.iter()
                        .filter(|c| c.representative.ground_size() == k)
                        .map(|c| {
                            let aut = automorphism_order(&c.representative)
                                .expect("ground is small enough");
                            assert_eq!(
                                factorial(m) * factorial(k) % aut,
                                0,
                                "|Aut| must divide m!·k!"
                            );
                            factorial(m) * factorial(k) / aut
                        })
                        .sum()
                })
                .unwrap_or(0);
            let naive_labeled =
                naive_count_exact_ground(2, 2, m, k, true).expect("fixed-ground count");
            assert_eq!(
                engine_labeled, naive_labeled,
                "stratum m = {m}, ground = {k}: orbit census {engine_labeled} vs naive \
                 labeled count {naive_labeled}"
            );
            compared += 1;
        }
    }
    assert!(compared >= 8, "the census must cover several strata");

    // The extremal stratum in closed form: the 5-cycle class alone, with
    // automorphism group of order 10, accounts for 5!·5!/10 = 1440
    // labeled orderings.
    assert_eq!(
        naive_count_exact_ground(2, 2, 5, 5, true).expect("count"),
        1440
    );
}

/// Retrospective admissibility: along the path to every system the search
/// visits, the prune bound computed at each proper prefix is at least the
/// number of pairs the completed system actually reached. A bound that
/// ever undercuts a real completion would have cut off part of the space.
#[test]
fn prune_bound_is_retrospectively_admissible() {
    let cfg = SearchConfig::new(2, 2);

    type PairsRepr = Vec<(Vec<usize>, Vec<usize>)>;
    let repr = |s: &SetPairSystem| -> PairsRepr {
        s.pairs()
            .iter()
            .map(|p| (p.a().to_vec(), p.b().to_vec()))
            .collect()
    };

    let mut bounds: HashMap<PairsRepr, usize> = HashMap::new();
    let mut visited: Vec<(PairsRepr, usize)> = Vec::new();
    let mut recorder = |s: &SetPairSystem| -> spsys::Result<()> {
        let bound = prune_bound(s, &cfg)?;
        assert!(
            bound >= s.m(),
            "prune bound {bound} undercuts the partial system's own size {}",
            s.m()
        );
        let r = repr(s);
        bounds.insert(r.clone(), bound);
        visited.push((r, s.m()));
        Ok(())
    };
    let outcome = search_max_visit(&cfg, &mut recorder).expect("search");
    assert!(outcome.proof_of_maximality);
    assert!(!visited.is_empty());

    // The engine visits parents before children and extends by appending,
    // so every proper prefix of a visited pair list was itself visited.
    for (pairs, m) in &visited {
        for cut in 2..*m {
            let prefix: PairsRepr = pairs[..cut].to_vec();
            let bound = bounds
                .get(&prefix)
                .unwrap_or_else(|| panic!("prefix of length {cut} was never visited"));
            assert!(
                *bound >= *m,
                "prefix bound {bound} undercuts an actual completion of size {m}"
            );
        }
    }
}

/// A completed search can never fall short of a construction that fits
/// its bounds: at (2,2) the power construction supplies 5 pairs, and the
/// search proves that is also the ceiling.
#[test]
fn search_meets_the_power_construction_at_n_2() {
    let power = spsys::constructions::power_construction(2).expect("construction");
    let cfg = SearchConfig::new(2, 2);
    let outcome = search_max(&cfg).expect("search");
    assert!(outcome.proof_of_maximality);
    assert!(
        outcome.max_m >= power.m(),
        "search ({}) fell below the construction ({})",
        outcome.max_m,
        power.m()
    );
    assert_eq!(outcome.max_m, 5);
    assert_eq!(
        canonical_form(&outcome.extremal_classes[0].representative),
        canonical_form(&power)
    );
}
