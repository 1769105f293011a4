//! Exact construction, verification, and exhaustive search for 1-cross
//! intersecting set pair systems.
//!
//! A *set pair system* is an indexed family `{(A_i, B_i)}` of pairs of finite
//! sets over a common ground set. It is *cross intersecting* when every
//! diagonal intersection `A_i ∩ B_i` is empty and every off-diagonal
//! intersection `A_i ∩ B_j` (`i ≠ j`) is nonempty, and *1-cross intersecting*
//! when those off-diagonal intersections all have size exactly one. The
//! central quantity is the weight functional
//!
//! ```text
//! Σ(S) = Σ_i 1 / C(|A_i| + |B_i|, |A_i|)
//! ```
//!
//! which is at most 1 for every cross intersecting system and at most 5/6 for
//! 1-cross intersecting systems outside a short list of singleton-set
//! exception patterns. Everything in this crate is computed in exact rational
//! arithmetic; floating point appears only as advisory output.
//!
//! The crate is organized as:
//!
//! * [`system`] — ground sets, set pairs, systems, and the reduction
//!   operations (restriction, element removal, safe-removal test).
//! * [`rational`] — arbitrary-precision rationals and exact binomials.
//! * [`canon`] — canonical forms for isomorphism testing.
//! * [`constructions`] — the named families: the complementary 5-cycles, the
//!   singleton swap, the binomial equality family, compositions, and the
//!   power (blow-up) lower-bound constructions.
//! * [`analysis`] — exact verifiers: the Σ ≤ 1 inequality, the averaging
//!   identity, binomial-ratio range scans, the 22-diamond pattern, the
//!   singleton exception taxonomy, and the biclique dual view.
//! * [`search`] — isomorph-free exhaustive search for the maximum number of
//!   pairs within size bounds, plus a naive reference enumerator used as a
//!   cross-checking oracle.
//! * [`json`] — the JSON interchange format for systems.
//! * [`report`] — machine-readable run reports for the CLI.

pub mod analysis;
pub mod canon;
pub mod constructions;
pub mod elemset;
pub mod error;
pub mod json;
pub mod rational;
pub mod report;
pub mod search;
pub mod system;

pub use analysis::{
    check_averaging, check_bollobas, check_main_theorem, exception_classify, find_diamond,
    from_bicliques, scan_lemma_one_fifth, scan_lemma_one_third, to_bicliques, BicliqueView,
    ExceptionCase, ExceptionReport, MainTheoremOutcome, RatioPoint, RatioScan,
};
pub use canon::{canonical_form, canonical_form_quotient_roles, CanonicalForm};
pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use rational::{binomial, ExactRational};
pub use report::{sha256_hex, RunReport};
pub use search::{
    enumerate_classes, feasible, prune_bound, search_max, search_max_visit, ExtremalClass,
    Feasibility, SearchConfig, SearchOutcome,
};
pub use system::{pair_weight, SetPair, SetPairSystem, Side};
