//! Set pair systems: the central data model and its reduction operations.
//!
//! A [`SetPairSystem`] is an ordered family of [`SetPair`]s over a dense
//! ground set `{0 .. ground_size-1}` with an optional display label per
//! element. Systems are immutable after construction; every operation
//! returns a new value, so values are freely shared across threads.
//!
//! Normalization invariant: the ground set equals the union of all member
//! sets — there are no orphan elements. `restrict` and `remove` re-establish
//! the invariant by compacting ids (labels follow their elements).

use std::fmt;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::rational::{binomial_usize, ExactRational};

/// Which side of a pair an operation refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// One indexed pair `(A_i, B_i)`.
///
/// Both sets are duplicate-free by representation. Emptiness and diagonal
/// disjointness are *not* enforced here: reductions legitimately empty a
/// side, and whether `A ∩ B = ∅` holds is exactly what the cross-intersection
/// predicate reports.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetPair {
    a: ElemSet,
    b: ElemSet,
}

impl SetPair {
    pub fn new(a: ElemSet, b: ElemSet) -> Self {
        SetPair { a, b }
    }

    pub fn a(&self) -> &ElemSet {
        &self.a
    }

    pub fn b(&self) -> &ElemSet {
        &self.b
    }

    pub fn side(&self, side: Side) -> &ElemSet {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn a_size(&self) -> usize {
        self.a.len()
    }

    pub fn b_size(&self) -> usize {
        self.b.len()
    }
}

/// The weight `f(A, B) = 1 / C(|A|+|B|, |A|)` of a single pair.
///
/// # Errors
///
/// An empty side is rejected: the weight of an over-reduced pair is
/// undefined. (The averaging verifier uses the internal extension where an
/// empty side contributes the factor `C(n, 0) = 1`.)
pub fn pair_weight(p: &SetPair) -> Result<ExactRational> {
    if p.a.is_empty() || p.b.is_empty() {
        return Err(Error::invalid(
            "pair weight undefined for an empty side (over-aggressive reduction)",
        ));
    }
    Ok(pair_weight_extended(p))
}

/// Weight with the empty-side extension `1/C(|A|+0, |A|) = 1`.
///
/// This is the convention under which the ground-set averaging identity
/// holds verbatim when a removed element was the whole of some side; it is
/// deliberately not public API.
pub(crate) fn pair_weight_extended(p: &SetPair) -> ExactRational {
    let (a, b) = (p.a.len(), p.b.len());
    let c = binomial_usize(a + b, a).expect("k ≤ n by construction");
    ExactRational::reciprocal_of(&c).expect("binomial is positive")
}

/// An indexed family of set pairs over a normalized dense ground set.
#[derive(Clone, Debug)]
pub struct SetPairSystem {
    pairs: Vec<SetPair>,
    ground_size: usize,
    /// One entry per ground element; present labels are unique.
    labels: Vec<Option<String>>,
    /// For systems produced by `restrict`: the index each pair had in the
    /// parent system. Metadata only — ignored by equality.
    source_indices: Option<Vec<usize>>,
}

impl PartialEq for SetPairSystem {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
            && self.ground_size == other.ground_size
            && self.labels == other.labels
    }
}

impl Eq for SetPairSystem {}

impl SetPairSystem {
    /// Builds a system from explicit parts, validating every invariant:
    /// ids in range, no orphan ground elements, labels unique when present.
    pub fn new(
        pairs: Vec<SetPair>,
        ground_size: usize,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        if labels.len() != ground_size {
            return Err(Error::invalid(format!(
                "label table has {} entries for ground of size {ground_size}",
                labels.len()
            )));
        }
        let mut used = vec![false; ground_size];
        for (i, p) in pairs.iter().enumerate() {
            for v in p.a.iter().chain(p.b.iter()) {
                match used.get_mut(v) {
                    Some(slot) => *slot = true,
                    None => {
                        return Err(Error::invalid(format!(
                            "pair {i} references element {v} outside ground of size {ground_size}"
                        )))
                    }
                }
            }
        }
        if let Some(orphan) = used.iter().position(|u| !u) {
            return Err(Error::invalid(format!(
                "ground element {orphan} appears in no set (ground must equal the union)"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for label in labels.iter().flatten() {
            if !seen.insert(label.as_str()) {
                return Err(Error::invalid(format!("duplicate element label {label:?}")));
            }
        }
        Ok(SetPairSystem {
            pairs,
            ground_size,
            labels,
            source_indices: None,
        })
    }

    /// The empty system: no pairs, empty ground, `Σ = 0`.
    pub fn empty() -> Self {
        SetPairSystem {
            pairs: Vec::new(),
            ground_size: 0,
            labels: Vec::new(),
            source_indices: None,
        }
    }

    /// Builds an unlabeled system from id lists. The ground size is inferred
    /// as `max id + 1`; duplicate ids within one list are rejected rather
    /// than silently collapsed.
    pub fn from_id_pairs(pairs: &[(Vec<usize>, Vec<usize>)]) -> Result<Self> {
        let mut built = Vec::with_capacity(pairs.len());
        let mut max_id = None::<usize>;
        for (i, (a_ids, b_ids)) in pairs.iter().enumerate() {
            let a = dedup_checked(a_ids, i, Side::A)?;
            let b = dedup_checked(b_ids, i, Side::B)?;
            for v in a.iter().chain(b.iter()) {
                max_id = Some(max_id.map_or(v, |m| m.max(v)));
            }
            built.push(SetPair::new(a, b));
        }
        let ground_size = max_id.map_or(0, |m| m + 1);
        Self::new(built, ground_size, vec![None; ground_size])
    }

    /// Builds a labeled system from name lists, assigning dense ids in
    /// first-appearance order (scanning pairs in order, `A` before `B`,
    /// list order within each set). This is the JSON loader's id policy.
    pub fn from_label_pairs<S: AsRef<str>>(pairs: &[(Vec<S>, Vec<S>)]) -> Result<Self> {
        let mut ids = std::collections::HashMap::<String, usize>::new();
        let mut labels: Vec<Option<String>> = Vec::new();
        let mut intern = |name: &str| -> usize {
            *ids.entry(name.to_owned()).or_insert_with(|| {
                labels.push(Some(name.to_owned()));
                labels.len() - 1
            })
        };
        let mut built = Vec::with_capacity(pairs.len());
        for (i, (a_names, b_names)) in pairs.iter().enumerate() {
            let mut a = ElemSet::new();
            for name in a_names {
                let id = intern(name.as_ref());
                if a.contains(id) {
                    return Err(Error::invalid(format!(
                        "pair {i} side A repeats element {:?}",
                        name.as_ref()
                    )));
                }
                a.insert(id);
            }
            let mut b = ElemSet::new();
            for name in b_names {
                let id = intern(name.as_ref());
                if b.contains(id) {
                    return Err(Error::invalid(format!(
                        "pair {i} side B repeats element {:?}",
                        name.as_ref()
                    )));
                }
                b.insert(id);
            }
            built.push(SetPair::new(a, b));
        }
        let ground_size = labels.len();
        Self::new(built, ground_size, labels)
    }

    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn pairs(&self) -> &[SetPair] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> Option<&SetPair> {
        self.pairs.get(i)
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// The label of `v`, or its id rendered as text.
    pub fn display_name(&self, v: usize) -> String {
        match self.label(v) {
            Some(l) => l.to_owned(),
            None => v.to_string(),
        }
    }

    /// For a restriction: the index each pair had in the parent system.
    pub fn source_indices(&self) -> Option<&[usize]> {
        self.source_indices.as_deref()
    }

    /// `(|A_i|, |B_i|)` for every pair.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|p| (p.a_size(), p.b_size())).collect()
    }

    // ================================================================
    // The Σ functional
    // ================================================================

    /// `Σ(S) = Σ_i 1/C(|A_i|+|B_i|, |A_i|)`, exactly. Defined for any
    /// `m ≥ 0` (the empty sum is 0).
    ///
    /// # Errors
    ///
    /// Any pair with an empty side.
    pub fn sigma(&self) -> Result<ExactRational> {
        let mut total = ExactRational::zero();
        for p in &self.pairs {
            total = &total + &pair_weight(p)?;
        }
        Ok(total)
    }

    /// Σ under the empty-side extension (see `pair_weight_extended`).
    pub(crate) fn sigma_extended(&self) -> ExactRational {
        let mut total = ExactRational::zero();
        for p in &self.pairs {
            total = &total + &pair_weight_extended(p);
        }
        total
    }

    // ================================================================
    // Intersection predicates
    // ================================================================

    /// Cross intersecting: `A_i ∩ B_i = ∅` for all `i`, and
    /// `A_i ∩ B_j ≠ ∅` for all `i ≠ j`.
    ///
    /// # Errors
    ///
    /// `m < 2` — the definition requires at least two pairs.
    pub fn is_cross_intersecting(&self) -> Result<bool> {
        self.require_m_at_least_2("is_cross_intersecting")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if !p.a.is_disjoint(&p.b) {
                return Ok(false);
            }
            for (j, q) in self.pairs.iter().enumerate() {
                if i != j && p.a.is_disjoint(&q.b) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// 1-cross intersecting: cross intersecting with
    /// `|A_i ∩ B_j| = 1` exactly for all `i ≠ j`.
    ///
    /// # Errors
    ///
    /// `m < 2`.
    pub fn is_one_cross_intersecting(&self) -> Result<bool> {
        self.require_m_at_least_2("is_one_cross_intersecting")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if !p.a.is_disjoint(&p.b) {
                return Ok(false);
            }
            for (j, q) in self.pairs.iter().enumerate() {
                if i != j && p.a.intersection_len(&q.b) != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn require_m_at_least_2(&self, what: &str) -> Result<()> {
        if self.m() < 2 {
            Err(Error::invalid(format!(
                "{what} requires m ≥ 2 (got m = {})",
                self.m()
            )))
        } else {
            Ok(())
        }
    }

    // ================================================================
    // Reductions
    // ================================================================

    /// The subfamily `S[J]`: keeps the pairs indexed by `J` (in ascending
    /// index order), re-normalizes the ground to the union of the retained
    /// sets, and records each kept pair's original index as provenance.
    ///
    /// # Errors
    ///
    /// An index out of range, or repeated (J is a set).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut j: Vec<usize> = indices.to_vec();
        j.sort_unstable();
        if let Some(w) = j.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "restriction index {} repeated; J must be a set",
                w[0]
            )));
        }
        if let Some(&bad) = j.iter().find(|&&i| i >= self.m()) {
            return Err(Error::invalid(format!(
                "restriction index {bad} out of range for m = {}",
                self.m()
            )));
        }
        let kept: Vec<&SetPair> = j.iter().map(|&i| &self.pairs[i]).collect();

        // Compact the surviving elements, preserving ascending id order.
        let mut used = vec![false; self.ground_size];
        for p in &kept {
            for v in p.a.iter().chain(p.b.iter()) {
                used[v] = true;
            }
        }
        let (map, new_labels) = compact_map(&used, &self.labels);
        let pairs = kept
            .into_iter()
            .map(|p| SetPair::new(p.a.remap(&map), p.b.remap(&map)))
            .collect();
        let mut out = SetPairSystem::new(pairs, new_labels.len(), new_labels)?;
        out.source_indices = Some(j);
        Ok(out)
    }

    /// The reduction `S − R`: replaces every pair by `(A_i ∖ R, B_i ∖ R)`.
    /// Pairs are kept even when a side (or both) becomes empty — callers
    /// decide validity. The ground drops exactly the elements of `R`.
    ///
    /// # Errors
    ///
    /// `R ⊄ V(S)`, or a repeated element (R is a set).
    pub fn remove(&self, elements: &[usize]) -> Result<Self> {
        let mut r = elements.to_vec();
        r.sort_unstable();
        if let Some(w) = r.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "removal element {} repeated; R must be a set",
                w[0]
            )));
        }
        if let Some(&bad) = r.iter().find(|&&v| v >= self.ground_size) {
            return Err(Error::invalid(format!(
                "removal element {bad} outside ground of size {}",
                self.ground_size
            )));
        }
        // Every element outside R stays used: it was used before (no
        // orphans) and set membership is only ever shrunk by R itself.
        let mut used = vec![true; self.ground_size];
        for &v in &r {
            used[v] = false;
        }
        let (map, new_labels) = compact_map(&used, &self.labels);
        let pairs = self
            .pairs
            .iter()
            .map(|p| SetPair::new(p.a.remap(&map), p.b.remap(&map)))
            .collect();
        // remove() keeps pair indexing, so restriction provenance (if any)
        // carries through unchanged.
        let out = SetPairSystem {
            pairs,
            ground_size: new_labels.len(),
            labels: new_labels,
            source_indices: self.source_indices.clone(),
        };
        debug_assert!(out.check_normalized().is_ok());
        Ok(out)
    }

    /// The safe-removal criterion: `R` may be removed when there are no
    /// `v ∈ R` and `i ≠ j` with `v ∈ A_i ∩ B_j`. When this holds and `S` is
    /// 1-cross intersecting, every off-diagonal intersection survives the
    /// removal untouched, so the property is preserved on pairs that keep
    /// both sides nonempty.
    ///
    /// # Errors
    ///
    /// `R ⊄ V(S)`.
    pub fn safe_removal(&self, elements: &[usize]) -> Result<bool> {
        for &v in elements {
            if v >= self.ground_size {
                return Err(Error::invalid(format!(
                    "removal element {v} outside ground of size {}",
                    self.ground_size
                )));
            }
            let in_a: Vec<usize> = (0..self.m())
                .filter(|&i| self.pairs[i].a.contains(v))
                .collect();
            let in_b: Vec<usize> = (0..self.m())
                .filter(|&i| self.pairs[i].b.contains(v))
                .collect();
            if in_a.is_empty() || in_b.is_empty() {
                continue;
            }
            // Some i with v ∈ A_i and some j with v ∈ B_j exist; the removal
            // is unsafe unless they are one and the same single pair.
            let same_single = in_a.len() == 1 && in_b.len() == 1 && in_a[0] == in_b[0];
            if !same_single {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `I_v̄^side`: the indices of pairs whose chosen side avoids `v`,
    /// ascending.
    ///
    /// # Errors
    ///
    /// `v ∉ V(S)`.
    pub fn avoiding_indices(&self, v: usize, side: Side) -> Result<Vec<usize>> {
        if v >= self.ground_size {
            return Err(Error::invalid(format!(
                "element {v} outside ground of size {}",
                self.ground_size
            )));
        }
        Ok((0..self.m())
            .filter(|&i| !self.pairs[i].side(side).contains(v))
            .collect())
    }

    // ================================================================
    // Relabeling and duality
    // ================================================================

    /// Applies a ground bijection and a pair reordering:
    /// element `v` becomes `elem_map[v]`, and the new pair at position `k`
    /// is the old pair `pair_order[k]`. Labels follow their elements.
    ///
    /// # Errors
    ///
    /// Either map fails to be a bijection of the right size.
    pub fn relabel(&self, elem_map: &[usize], pair_order: &[usize]) -> Result<Self> {
        check_permutation(elem_map, self.ground_size, "element map")?;
        check_permutation(pair_order, self.m(), "pair order")?;
        let map: Vec<Option<usize>> = elem_map.iter().map(|&v| Some(v)).collect();
        let pairs: Vec<SetPair> = pair_order
            .iter()
            .map(|&old| {
                let p = &self.pairs[old];
                SetPair::new(p.a.remap(&map), p.b.remap(&map))
            })
            .collect();
        let mut labels = vec![None; self.ground_size];
        for (old, label) in self.labels.iter().enumerate() {
            labels[elem_map[old]] = label.clone();
        }
        SetPairSystem::new(pairs, self.ground_size, labels)
    }

    /// The role-swap dual: every `(A_i, B_i)` becomes `(B_i, A_i)`. The swap
    /// preserves 1-cross intersection (the condition is symmetric in the
    /// transposed index pair).
    pub fn swap_roles(&self) -> Self {
        SetPairSystem {
            pairs: self
                .pairs
                .iter()
                .map(|p| SetPair::new(p.b.clone(), p.a.clone()))
                .collect(),
            ground_size: self.ground_size,
            labels: self.labels.clone(),
            source_indices: None,
        }
    }

    /// Validates the normalization invariant (used in debug assertions).
    fn check_normalized(&self) -> Result<()> {
        SetPairSystem::new(self.pairs.clone(), self.ground_size, self.labels.clone()).map(|_| ())
    }
}

impl fmt::Display for SetPairSystem {
    /// One line per pair: `0: A={x, y}  B={z, a}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |set: &ElemSet| -> String {
            let names: Vec<String> = set.iter().map(|v| self.display_name(v)).collect();
            format!("{{{}}}", names.join(", "))
        };
        writeln!(f, "m = {}, |V| = {}", self.m(), self.ground_size)?;
        for (i, p) in self.pairs.iter().enumerate() {
            writeln!(f, "{i}: A={}  B={}", render(&p.a), render(&p.b))?;
        }
        Ok(())
    }
}

/// Builds an `ElemSet` from an id list, rejecting duplicates.
fn dedup_checked(ids: &[usize], pair: usize, side: Side) -> Result<ElemSet> {
    let mut set = ElemSet::new();
    for &v in ids {
        if set.contains(v) {
            return Err(Error::invalid(format!(
                "pair {pair} side {side} repeats element {v}"
            )));
        }
        set.insert(v);
    }
    Ok(set)
}

/// Old-id → new-id map keeping exactly the `used` elements in ascending
/// order, plus the surviving label table.
fn compact_map(
    used: &[bool],
    labels: &[Option<String>],
) -> (Vec<Option<usize>>, Vec<Option<String>>) {
    let mut map = vec![None; used.len()];
    let mut new_labels = Vec::new();
    for (old, &u) in used.iter().enumerate() {
        if u {
            map[old] = Some(new_labels.len());
            new_labels.push(labels[old].clone());
        }
    }
    (map, new_labels)
}

fn check_permutation(map: &[usize], n: usize, what: &str) -> Result<()> {
    if map.len() != n {
        return Err(Error::invalid(format!(
            "{what} has length {} for domain of size {n}",
            map.len()
        )));
    }
    let mut hit = vec![false; n];
    for &v in map {
        if v >= n || hit[v] {
            return Err(Error::invalid(format!("{what} is not a bijection")));
        }
        hit[v] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Local copy of the complementary-5-cycles system (the constructions
    /// module builds its own; core tests should not depend on it).
    fn cycle5() -> SetPairSystem {
        let pairs: Vec<(Vec<String>, Vec<String>)> = (0..5)
            .map(|i| {
                (
                    vec![i.to_string(), ((i + 1) % 5).to_string()],
                    vec![((i + 4) % 5).to_string(), ((i + 2) % 5).to_string()],
                )
            })
            .collect();
        SetPairSystem::from_label_pairs(&pairs).unwrap()
    }

    #[test]
    fn first_appearance_ids_match_cycle_labels() {
        let s = cycle5();
        // Pair 0 is A={0,1}, B={4,2}: appearance order 0, 1, 4, 2, then 3.
        assert_eq!(s.label(0), Some("0"));
        assert_eq!(s.label(1), Some("1"));
        assert_eq!(s.label(2), Some("4"));
        assert_eq!(s.label(3), Some("2"));
        assert_eq!(s.label(4), Some("3"));
        assert_eq!(s.ground_size(), 5);
        assert_eq!(s.m(), 5);
    }

    #[test]
    fn sigma_of_cycle_is_five_sixths() {
        assert_eq!(cycle5().sigma().unwrap(), ExactRational::of(5, 6));
    }

    #[test]
    fn pair_weight_examples() {
        let w = |a: &[usize], b: &[usize]| {
            pair_weight(&SetPair::new(
                ElemSet::from_ids(a.iter().copied()),
                ElemSet::from_ids(b.iter().copied()),
            ))
        };
        assert_eq!(w(&[0, 1], &[2, 3]).unwrap(), ExactRational::of(1, 6));
        assert_eq!(w(&[0], &[1]).unwrap(), ExactRational::of(1, 2));
        assert_eq!(w(&[0], &[1, 2]).unwrap(), ExactRational::of(1, 3));
        assert!(w(&[], &[1]).is_err());
    }

    #[test]
    fn cross_predicates_on_cycle() {
        let s = cycle5();
        assert!(s.is_cross_intersecting().unwrap());
        assert!(s.is_one_cross_intersecting().unwrap());
    }

    #[test]
    fn predicates_require_two_pairs() {
        let s = SetPairSystem::from_id_pairs(&[(vec![0], vec![1])]).unwrap();
        assert!(s.is_cross_intersecting().is_err());
        assert!(s.is_one_cross_intersecting().is_err());
    }

    #[test]
    fn diagonal_overlap_is_representable_and_detected() {
        let s = SetPairSystem::from_id_pairs(&[
            (vec![0, 1], vec![1, 2]), // A ∩ B = {1} on the diagonal
            (vec![2], vec![0]),
        ])
        .unwrap();
        assert!(!s.is_cross_intersecting().unwrap());
    }

    #[test]
    fn restrict_identity_and_pairs() {
        let s = cycle5();
        let all = s.restrict(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all, s);
        assert_eq!(all.source_indices(), Some(&[0, 1, 2, 3, 4][..]));

        let two = s.restrict(&[1, 0]).unwrap(); // order does not matter
        assert_eq!(two.m(), 2);
        assert!(two.is_one_cross_intersecting().unwrap());
        assert_eq!(two.source_indices(), Some(&[0, 1][..]));

        let none = s.restrict(&[]).unwrap();
        assert_eq!(none.m(), 0);
        assert_eq!(none.ground_size(), 0);
        assert!(none.sigma().unwrap().is_zero());
    }

    #[test]
    fn restrict_rejects_bad_indices() {
        let s = cycle5();
        assert!(s.restrict(&[5]).is_err());
        assert!(s.restrict(&[1, 1]).is_err());
    }

    #[test]
    fn remove_examples() {
        let s = cycle5();
        assert_eq!(s.remove(&[]).unwrap(), s);

        // Removing the element labeled "0" (id 0): pair 0's A drops to {1}.
        let r = s.remove(&[0]).unwrap();
        assert_eq!(r.ground_size(), 4);
        assert_eq!(r.pairs()[0].a_size(), 1);
        let v = r.pairs()[0].a().first().unwrap();
        assert_eq!(r.label(v), Some("1"));
        // Pairs that contained 0 each lost exactly one element.
        let before = s.sizes();
        let after = r.sizes();
        for i in 0..5 {
            let lost = (before[i].0 - after[i].0) + (before[i].1 - after[i].1);
            let had = s.pairs()[i].a().contains(0) || s.pairs()[i].b().contains(0);
            assert_eq!(lost, usize::from(had));
        }

        let gone = s.remove(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(gone.ground_size(), 0);
        assert!(gone.pairs().iter().all(|p| p.a_size() == 0 && p.b_size() == 0));
        assert!(gone.sigma().is_err()); // weights undefined on empty sides
    }

    #[test]
    fn safe_removal_examples() {
        let s = cycle5();
        assert!(s.safe_removal(&[]).unwrap());
        // Element 0 (label "0") lies in A_0 and in B_1 (= {0,3}): unsafe.
        assert!(!s.safe_removal(&[0]).unwrap());
        assert!(s.safe_removal(&[7]).is_err());
    }

    #[test]
    fn avoiding_indices_partition() {
        let s = cycle5();
        // Element ids are in first-appearance order; translate via labels.
        let id_of = |name: &str| {
            (0..s.ground_size())
                .find(|&v| s.label(v) == Some(name))
                .unwrap()
        };
        let v0 = id_of("0");
        assert_eq!(s.avoiding_indices(v0, Side::A).unwrap(), vec![1, 2, 3]);
        assert_eq!(s.avoiding_indices(v0, Side::B).unwrap(), vec![0, 2, 4]);
        assert!(s.avoiding_indices(99, Side::A).is_err());

        for v in 0..s.ground_size() {
            for side in [Side::A, Side::B] {
                let avoid = s.avoiding_indices(v, side).unwrap();
                let hit: Vec<usize> = (0..s.m())
                    .filter(|&i| s.pairs()[i].side(side).contains(v))
                    .collect();
                let mut union: Vec<usize> = avoid.iter().chain(hit.iter()).copied().collect();
                union.sort_unstable();
                assert_eq!(union, (0..s.m()).collect::<Vec<_>>());
                assert!(avoid.iter().all(|i| !hit.contains(i)));
            }
        }
    }

    #[test]
    fn orphan_ground_rejected() {
        let pair = SetPair::new(ElemSet::from_ids([0]), ElemSet::from_ids([2]));
        assert!(SetPairSystem::new(vec![pair], 3, vec![None, None, None]).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let pairs = vec![SetPair::new(ElemSet::from_ids([0]), ElemSet::from_ids([1]))];
        let labels = vec![Some("x".to_owned()), Some("x".to_owned())];
        assert!(SetPairSystem::new(pairs, 2, labels).is_err());
    }

    #[test]
    fn swap_roles_preserves_one_cross() {
        let s = cycle5();
        let d = s.swap_roles();
        assert!(d.is_one_cross_intersecting().unwrap());
        assert_eq!(d.swap_roles(), s);
    }

    /// Strategy: a normalized random system with 1–6 pairs of nonempty sets
    /// over a compacted ground. No intersection structure is imposed — Σ is
    /// defined for arbitrary systems.
    fn arb_system() -> impl Strategy<Value = SetPairSystem> {
        let side = proptest::collection::btree_set(0usize..10, 1..=3);
        let pair = (side.clone(), side);
        proptest::collection::vec(pair, 1..=6).prop_map(|raw| {
            let mut used: Vec<bool> = vec![false; 10];
            for (a, b) in &raw {
                for &v in a.iter().chain(b.iter()) {
                    used[v] = true;
                }
            }
            let mut map = [None; 10];
            let mut next = 0usize;
            for (v, &u) in used.iter().enumerate() {
                if u {
                    map[v] = Some(next);
                    next += 1;
                }
            }
            let pairs: Vec<(Vec<usize>, Vec<usize>)> = raw
                .into_iter()
                .map(|(a, b)| {
                    (
                        a.into_iter().map(|v| map[v].unwrap()).collect(),
                        b.into_iter().map(|v| map[v].unwrap()).collect(),
                    )
                })
                .collect();
            SetPairSystem::from_id_pairs(&pairs).unwrap()
        })
    }

    proptest! {
        /// Σ is invariant under any pair permutation and ground bijection.
        #[test]
        fn sigma_permutation_invariant(s in arb_system(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut elem_map: Vec<usize> = (0..s.ground_size()).collect();
            elem_map.shuffle(&mut rng);
            let mut pair_order: Vec<usize> = (0..s.m()).collect();
            pair_order.shuffle(&mut rng);
            let t = s.relabel(&elem_map, &pair_order).unwrap();
            prop_assert_eq!(t.sigma().unwrap(), s.sigma().unwrap());
        }

        /// Subfamilies of a 1-cross intersecting system are 1-cross
        /// intersecting (restriction closure).
        #[test]
        fn restriction_closure_on_cycle(mask in 0u32..32) {
            let s = cycle5();
            let j: Vec<usize> = (0..5).filter(|i| mask & (1 << i) != 0).collect();
            let sub = s.restrict(&j).unwrap();
            if j.len() >= 2 {
                prop_assert!(sub.is_one_cross_intersecting().unwrap());
            }
        }
    }
}
