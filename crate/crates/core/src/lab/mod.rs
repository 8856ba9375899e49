//! The bad-bounds counterexample environment, its colour predicates, the
//! lemma harnesses, and the exhaustive enumerators used by property tests.

mod colours;
mod corpus;
mod enumerate;
mod harness;

pub use colours::{is_blue, is_red, Colouring};
pub use corpus::{
    b_type, bad_bounds_tree, c_type, fun_b_b, fun_b_c, gamma_star, term_w, w_typed_b_tree,
    w_typed_c_tree,
};
pub use enumerate::{binder, count_types, Alphabet, Enumerator};
pub use harness::{
    check_no_tag_switch, check_wellbehaved, run_minimality_counterexample, LemmaReport,
    MinimalityReport, Violation, REPORT_HEADER,
};
