//! Recursion schemes over process-algebra signatures, their interpretation
//! as synchronization trees, and the transformations and equivalences
//! between them.

pub mod analysis;
pub mod label;
pub mod lts;
pub mod parse;
pub mod scheme;
pub mod semantics;
pub mod term;
pub mod transforms;
pub mod tree;

pub use analysis::{
    bisimilar, bounded_bisim, branch_words, determinize, determinize_with_order, is_deterministic,
    is_minimal, lang_equal, minimize, BranchWord, DetTree,
};
pub use label::{Label, Symbol};
pub use lts::{parse_lts, unfold_lts, Lts, LtsError, LtsErrorKind};
pub use parse::{parse_scheme, ParseError, ParseErrorKind};
pub use scheme::{Diagnostic, Equation, ExpandError, Scheme, DEFAULT_TERM_BUDGET};
pub use semantics::{
    approximant, approximant_to_depth, interpret_lang, interpret_tree, interpret_tree_to_depth,
    path_language, tau_delta, tau_gamma, Lang, SemanticsError,
};
pub use term::{SigKind, Signature, Term};
pub use transforms::{
    contract_scheme, delta_to_gamma, desugar_tilde, equal_up_to_renaming,
    gamma_regular_to_right_linear, gamma_unary_to_delta, right_linear_to_gamma_regular,
    seq_compose, simplify, TransformError,
};
pub use tree::{CanonicalKey, SyncTree, TreeBuilder, TreeLiteralError, VertexId};
