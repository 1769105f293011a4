//! Exact verifiers: the Σ ≤ 1 inequality, the ground-set averaging
//! identity, the binomial-ratio range scans, the 22-diamond pattern, the
//! singleton exception taxonomy behind the 5/6 bound, and the biclique
//! dual view of a system.
//!
//! Every check is exact. A verifier that finds a *proven* inequality
//! violated on an input meeting its hypotheses does not return `false` —
//! it returns [`Error::Contradiction`] carrying a serialized counterexample
//! dump, because such an input would be mathematically significant and must
//! be preserved, not swallowed.

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::json::system_to_json;
use crate::rational::{binomial, ExactRational};
use crate::system::{SetPair, SetPairSystem, Side};

// ====================================================================
// The Σ ≤ 1 inequality
// ====================================================================

/// Evaluates `Σ(S)` on a cross intersecting system and reports whether it
/// attains 1 exactly.
///
/// # Errors
///
/// Not cross intersecting (or `m < 2`) — invalid argument. `Σ > 1` on a
/// genuinely cross intersecting input — contradiction with dump (this
/// inequality is a theorem; the branch must never run).
pub fn check_bollobas(s: &SetPairSystem) -> Result<(ExactRational, bool)> {
    if !s.is_cross_intersecting()? {
        return Err(Error::invalid(
            "Σ ≤ 1 verifier requires a cross intersecting system",
        ));
    }
    let sigma = s.sigma()?;
    let one = ExactRational::one();
    if sigma > one {
        return Err(Error::contradiction(
            format!("Σ = {sigma} exceeds 1 on a cross intersecting system"),
            Some(system_to_json(s)),
        ));
    }
    let at_equality = sigma == one;
    Ok((sigma, at_equality))
}

// ====================================================================
// The averaging identity
// ====================================================================

/// Verifies the ground-set averaging identity on the chosen side, exactly:
///
/// ```text
/// Σ(S) = (1/|V|) · Σ_{v ∈ V} Σ( S[I_v̄^side] − {v} )
/// ```
///
/// and the consequence `Σ(S) ≤ max_v Σ(S[I_v̄^side] − {v})`. Inner Σ values
/// use the empty-side extension `1/C(|A|, |A|) = 1`: when `{v}` was the
/// whole of a side, the reduced pair keeps weight 1, which is the
/// convention under which the identity is an identity.
///
/// # Errors
///
/// Empty ground, an empty side, or a diagonal overlap `A_i ∩ B_i ≠ ∅`.
pub fn check_averaging(s: &SetPairSystem, side: Side) -> Result<bool> {
    if s.ground_size() == 0 {
        return Err(Error::invalid("averaging undefined on an empty ground set"));
    }
    for (i, p) in s.pairs().iter().enumerate() {
        if p.a().is_empty() || p.b().is_empty() {
            return Err(Error::invalid(format!("pair {i} has an empty side")));
        }
        if !p.a().is_disjoint(p.b()) {
            return Err(Error::invalid(format!("pair {i} has A ∩ B ≠ ∅")));
        }
    }

    let lhs = s.sigma()?;
    let mut sum = ExactRational::zero();
    let mut max: Option<ExactRational> = None;
    for v in 0..s.ground_size() {
        let inner = reduced_sigma(s, v, side)?;
        if max.as_ref().is_none_or(|m| &inner > m) {
            max = Some(inner.clone());
        }
        sum = &sum + &inner;
    }
    let mean = sum.div_nat(s.ground_size() as u64)?;
    let max = max.expect("ground is nonempty");
    Ok(lhs == mean && lhs <= max)
}

/// `Σ(S[I_v̄^side] − {v})` under the empty-side extension, computed through
/// the restriction and removal operations.
fn reduced_sigma(s: &SetPairSystem, v: usize, side: Side) -> Result<ExactRational> {
    let kept = s.avoiding_indices(v, side)?;
    let sub = s.restrict(&kept)?;
    // Locate v in the restriction: restrict compacts surviving elements in
    // ascending old-id order, so v's new id is its rank among them.
    let mut used = vec![false; s.ground_size()];
    for &i in &kept {
        let p = &s.pairs()[i];
        for w in p.a().iter().chain(p.b().iter()) {
            used[w] = true;
        }
    }
    let reduced = if used[v] {
        let new_v = used[..v].iter().filter(|&&u| u).count();
        sub.remove(&[new_v])?
    } else {
        sub
    };
    let inner = reduced.sigma_extended();

    // Cross-check the operational route against the direct size formula.
    #[cfg(debug_assertions)]
    {
        let mut direct = ExactRational::zero();
        for &i in &kept {
            let p = &s.pairs()[i];
            let a = p.a_size() - usize::from(p.a().contains(v));
            let b = p.b_size() - usize::from(p.b().contains(v));
            let c = crate::rational::binomial_usize(a + b, a).expect("k ≤ n");
            direct = &direct + &ExactRational::reciprocal_of(&c).expect("positive");
        }
        debug_assert_eq!(direct, inner);
    }
    Ok(inner)
}

// ====================================================================
// Binomial-ratio range scans
// ====================================================================

/// One scanned lattice point.
#[derive(Clone, Debug, Serialize)]
pub struct RatioPoint {
    pub a: u64,
    pub b: u64,
    pub ratio: ExactRational,
}

/// Result of an exact ratio scan over `2 ≤ a, b ≤ max`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RatioScan {
    /// Points violating the claimed bound — must be empty.
    pub violations: Vec<RatioPoint>,
    /// Points attaining the bound exactly.
    pub equality_points: Vec<(u64, u64)>,
}

/// Scans `C(a+b−2, a−1) / C(a+b, a)` over `2 ≤ a, b ≤ max`, checking the
/// claim: at most 1/3 everywhere, with equality only at `(2,2)` and at most
/// 3/10 at every other point.
///
/// # Errors
///
/// `max < 2`.
pub fn scan_lemma_one_third(max: u64) -> Result<RatioScan> {
    scan_range(max, |a, b| {
        let ratio = binomial_ratio(a + b - 2, a - 1, a + b, a);
        let over_third = ratio > ExactRational::of(1, 3);
        let over_three_tenths = ratio > ExactRational::of(3, 10);
        let at_apex = (a, b) == (2, 2);
        let violated = over_third || (!at_apex && over_three_tenths);
        let equality = ratio == ExactRational::of(1, 3);
        (ratio, violated, equality)
    })
}

/// Scans `C(a+b−3, b−1) / C(a+b, b)` over `2 ≤ a, b ≤ max`, checking the
/// claim: at most 1/5 everywhere; equality points are reported.
///
/// # Errors
///
/// `max < 2`.
pub fn scan_lemma_one_fifth(max: u64) -> Result<RatioScan> {
    scan_range(max, |a, b| {
        let ratio = binomial_ratio(a + b - 3, b - 1, a + b, b);
        let violated = ratio > ExactRational::of(1, 5);
        let equality = ratio == ExactRational::of(1, 5);
        (ratio, violated, equality)
    })
}

fn scan_range(
    max: u64,
    eval: impl Fn(u64, u64) -> (ExactRational, bool, bool),
) -> Result<RatioScan> {
    if max < 2 {
        return Err(Error::invalid(format!("scan range must be ≥ 2 (got {max})")));
    }
    let mut out = RatioScan::default();
    for a in 2..=max {
        for b in 2..=max {
            let (ratio, violated, equality) = eval(a, b);
            if violated {
                out.violations.push(RatioPoint { a, b, ratio: ratio.clone() });
            }
            if equality {
                out.equality_points.push((a, b));
            }
        }
    }
    Ok(out)
}

/// `C(n1,k1) / C(n2,k2)` exactly. Arguments are in range by scan
/// construction (`a, b ≥ 2`).
fn binomial_ratio(n1: u64, k1: u64, n2: u64, k2: u64) -> ExactRational {
    let top = binomial(n1, k1).expect("scan keeps k ≤ n");
    let bottom = binomial(n2, k2).expect("scan keeps k ≤ n");
    ExactRational::ratio_of(&top, &bottom).expect("binomials are positive")
}

// ====================================================================
// The 22-diamond pattern
// ====================================================================

/// Finds the lexicographically first `(i, j)`, `i < j`, with
/// `|A_i| = |A_j| = 2`, `A_i ∩ A_j ≠ ∅`, `|B_i| = |B_j| = 2`, and
/// `B_i ∩ B_j ≠ ∅` — the diamond pattern that forces `Σ ≤ 5/6`
/// unconditionally in 1-cross intersecting systems.
pub fn find_diamond(s: &SetPairSystem) -> Option<(usize, usize)> {
    let pairs = s.pairs();
    for i in 0..pairs.len() {
        let (pi_a, pi_b) = (pairs[i].a(), pairs[i].b());
        if pi_a.len() != 2 || pi_b.len() != 2 {
            continue;
        }
        for (j, pj) in pairs.iter().enumerate().skip(i + 1) {
            if pj.a().len() == 2
                && pj.b().len() == 2
                && !pi_a.is_disjoint(pj.a())
                && !pi_b.is_disjoint(pj.b())
            {
                return Some((i, j));
            }
        }
    }
    None
}

// ====================================================================
// Singleton exception taxonomy
// ====================================================================

/// The three singleton patterns under which `Σ` may legitimately exceed
/// 5/6 in a 1-cross intersecting system.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ExceptionCase {
    /// `|A_i| = |A_j| = 1` with `B_i ∩ B_j ≠ ∅`.
    A,
    /// `|B_i| = |B_j| = 1` with `A_i ∩ A_j ≠ ∅`.
    B,
    /// `|A_i| = |A_j| = |B_i| = |B_j| = 1`.
    C,
}

impl std::fmt::Display for ExceptionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExceptionCase::A => "a",
            ExceptionCase::B => "b",
            ExceptionCase::C => "c",
        })
    }
}

/// Which exception cases a system exhibits, with the lexicographically
/// smallest witness index pair `(i, j)`, `i < j`, per detected case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExceptionReport {
    pub case_a: Option<(usize, usize)>,
    pub case_b: Option<(usize, usize)>,
    pub case_c: Option<(usize, usize)>,
}

impl ExceptionReport {
    pub fn is_empty(&self) -> bool {
        self.case_a.is_none() && self.case_b.is_none() && self.case_c.is_none()
    }

    /// Detected cases in `{a, b, c}` order.
    pub fn cases(&self) -> Vec<ExceptionCase> {
        [
            (ExceptionCase::A, self.case_a),
            (ExceptionCase::B, self.case_b),
            (ExceptionCase::C, self.case_c),
        ]
        .into_iter()
        .filter_map(|(c, w)| w.map(|_| c))
        .collect()
    }

    pub fn witness(&self, case: ExceptionCase) -> Option<(usize, usize)> {
        match case {
            ExceptionCase::A => self.case_a,
            ExceptionCase::B => self.case_b,
            ExceptionCase::C => self.case_c,
        }
    }
}

/// Classifies a system against the three exception patterns. No
/// intersection precondition: the patterns are purely structural.
pub fn exception_classify(s: &SetPairSystem) -> ExceptionReport {
    let pairs = s.pairs();
    let mut report = ExceptionReport::default();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (pi, pj) = (&pairs[i], &pairs[j]);
            let a_singletons = pi.a_size() == 1 && pj.a_size() == 1;
            let b_singletons = pi.b_size() == 1 && pj.b_size() == 1;
            if report.case_a.is_none() && a_singletons && !pi.b().is_disjoint(pj.b()) {
                report.case_a = Some((i, j));
            }
            if report.case_b.is_none() && b_singletons && !pi.a().is_disjoint(pj.a()) {
                report.case_b = Some((i, j));
            }
            if report.case_c.is_none() && a_singletons && b_singletons {
                report.case_c = Some((i, j));
            }
        }
    }
    report
}

// ====================================================================
// The 5/6 bound with exceptions
// ====================================================================

/// Outcome of the combined 5/6-bound check.
#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremOutcome {
    pub sigma: ExactRational,
    pub exceptions: ExceptionReport,
    /// `(exceptions nonempty) OR (Σ ≤ 5/6)`. Always true on `Ok` — an
    /// inconsistency is returned as a contradiction error instead.
    pub consistent: bool,
}

/// Checks a 1-cross intersecting system against the sharp bound: either an
/// exception pattern is present or `Σ(S) ≤ 5/6` exactly. Also asserts the
/// weaker historical gate `Σ ≤ 29/30` whenever every set has size ≥ 2.
///
/// # Errors
///
/// Not 1-cross intersecting (or `m < 2`) — invalid argument. A violated
/// bound — contradiction with a serialized counterexample (a theorem
/// breaker; must never fire).
pub fn check_main_theorem(s: &SetPairSystem) -> Result<MainTheoremOutcome> {
    if !s.is_one_cross_intersecting()? {
        return Err(Error::invalid(
            "5/6-bound verifier requires a 1-cross intersecting system",
        ));
    }
    let sigma = s.sigma()?;
    let exceptions = exception_classify(s);
    let within_sharp = sigma <= ExactRational::of(5, 6);
    if exceptions.is_empty() && !within_sharp {
        return Err(Error::contradiction(
            format!("exception-free 1-cross intersecting system with Σ = {sigma} > 5/6"),
            Some(system_to_json(s)),
        ));
    }
    let all_sizes_ge_2 = s
        .pairs()
        .iter()
        .all(|p| p.a_size() >= 2 && p.b_size() >= 2);
    if all_sizes_ge_2 && sigma > ExactRational::of(29, 30) {
        return Err(Error::contradiction(
            format!("system with all sizes ≥ 2 has Σ = {sigma} > 29/30"),
            Some(system_to_json(s)),
        ));
    }
    Ok(MainTheoremOutcome {
        sigma,
        exceptions,
        consistent: true,
    })
}

// ====================================================================
// Biclique dual view
// ====================================================================

/// The dual encoding of a system: each ground element `v` induces the
/// ordered biclique `S_v × T_v` over pair indices, where
/// `S_v = {i : v ∈ A_i}` and `T_v = {i : v ∈ B_i}`. A system is 1-cross
/// intersecting exactly when these bicliques partition the off-diagonal
/// ordered index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueView {
    m: usize,
    sources: Vec<ElemSet>,
    sinks: Vec<ElemSet>,
    labels: Vec<Option<String>>,
}

impl BicliqueView {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn element_count(&self) -> usize {
        self.sources.len()
    }

    pub fn source(&self, v: usize) -> &ElemSet {
        &self.sources[v]
    }

    pub fn sink(&self, v: usize) -> &ElemSet {
        &self.sinks[v]
    }

    /// `Σ_v |S_v| · |T_v|` — equals `m(m−1)` exactly when the bicliques
    /// cover every off-diagonal ordered pair once and the diagonal never.
    pub fn cover_sum(&self) -> u64 {
        self.sources
            .iter()
            .zip(&self.sinks)
            .map(|(s, t)| (s.len() * t.len()) as u64)
            .sum()
    }

    /// True iff every ordered pair `(i, j)` with `i ≠ j` lies in exactly
    /// one product `S_v × T_v` and no diagonal pair lies in any.
    pub fn is_exact_cover(&self) -> bool {
        let mut count = vec![0u32; self.m * self.m];
        for (s, t) in self.sources.iter().zip(&self.sinks) {
            for i in s.iter() {
                for j in t.iter() {
                    count[i * self.m + j] += 1;
                }
            }
        }
        (0..self.m).all(|i| {
            (0..self.m).all(|j| count[i * self.m + j] == u32::from(i != j))
        })
    }
}

/// Builds the dual view. Always succeeds; the exact-cover property is a
/// separate query ([`BicliqueView::is_exact_cover`]) asserted by callers on
/// 1-cross intersecting inputs.
pub fn to_bicliques(s: &SetPairSystem) -> BicliqueView {
    let n = s.ground_size();
    let mut sources = vec![ElemSet::new(); n];
    let mut sinks = vec![ElemSet::new(); n];
    for (i, p) in s.pairs().iter().enumerate() {
        for v in p.a().iter() {
            sources[v].insert(i);
        }
        for v in p.b().iter() {
            sinks[v].insert(i);
        }
    }
    BicliqueView {
        m: s.m(),
        sources,
        sinks,
        labels: s.labels().to_vec(),
    }
}

/// Reconstructs the system `A_i = {v : i ∈ S_v}`, `B_i = {v : i ∈ T_v}`
/// over the index universe `{0..m−1}`. Elements appearing in no biclique
/// are dropped (the result is normalized); labels follow their elements.
/// Round-tripping a normalized system through [`to_bicliques`] is the
/// identity.
///
/// # Errors
///
/// Any `S_v ∩ T_v ≠ ∅` (a diagonal violation), or an index `≥ m`.
pub fn from_bicliques(view: &BicliqueView, m: usize) -> Result<SetPairSystem> {
    for (v, (s, t)) in view.sources.iter().zip(&view.sinks).enumerate() {
        if !s.is_disjoint(t) {
            return Err(Error::invalid(format!(
                "element {v} has S_v ∩ T_v ≠ ∅ (would violate A_i ∩ B_i = ∅)"
            )));
        }
        if let Some(bad) = s.iter().chain(t.iter()).find(|&i| i >= m) {
            return Err(Error::invalid(format!(
                "element {v} references pair index {bad} outside universe of size {m}"
            )));
        }
    }
    let mut a_sets = vec![ElemSet::new(); m];
    let mut b_sets = vec![ElemSet::new(); m];
    let mut labels = Vec::new();
    let mut next_id = 0usize;
    for (v, (s, t)) in view.sources.iter().zip(&view.sinks).enumerate() {
        if s.is_empty() && t.is_empty() {
            continue; // orphan in the view; normalization drops it
        }
        for i in s.iter() {
            a_sets[i].insert(next_id);
        }
        for i in t.iter() {
            b_sets[i].insert(next_id);
        }
        labels.push(view.labels.get(v).cloned().unwrap_or(None));
        next_id += 1;
    }
    let pairs = a_sets
        .into_iter()
        .zip(b_sets)
        .map(|(a, b)| SetPair::new(a, b))
        .collect();
    SetPairSystem::new(pairs, next_id, labels)
}
