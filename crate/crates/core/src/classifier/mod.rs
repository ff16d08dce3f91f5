//! Constraint pipeline for rank-3 types at `p = 3`.

pub mod endgame;
pub mod filters;
pub mod pipeline;
pub mod propositions;
pub mod reference;

pub use endgame::{endgame_rules, RuleId, RuleTrace};
pub use filters::{
    case_split, hemmi_forced, lemma_4_3, quasi_regular, top_operation_lemma, wilkerson_filter_1,
    wilkerson_filter_2, CaseTag, FilterResult, HemmiFact, Lemma43, TopOperation,
};
pub use pipeline::{
    all_eliminations, assemble_theorem_1_2, classify_theorem_1_2, classify_type, rank2_candidates, ClassifyOptions,
    Elimination, PsiClaim, Stage, Theorem12Report, TypeReport, Verdict,
};
pub use propositions::{
    enumerate_types, passes_generic_filters, proposition_lists, proposition_step, ArithmeticStep, CaseEntry,
    PropositionLists,
};
