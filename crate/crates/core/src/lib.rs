//! Discourse pronoun resolution built on a dynamic preference model.
//!
//! The crate resolves unstressed and stressed pronouns in annotated
//! discourse. Each utterance updates a context triple — the logical-form
//! register, the attentional state, and the discourse model — and each
//! pronoun is resolved against the context as it stood *before* its
//! utterance is registered.
//!
//! The pipeline in one paragraph: candidate antecedents come from the
//! local attentional state (the entities realized by the previous
//! utterance, partially ordered by salience). Three defeasible preference
//! classes rank them — commonsense rules (WK), attentional salience (ATT),
//! and grammatical parallelism (LF) — and their conclusions combine under
//! the override lattice `SYN+SEM >= WK >= ATT >= LF`. An unstressed
//! pronoun takes the maxima of the combined order. A stressed pronoun
//! takes the maxima of the *reversed* order over the same candidates, then
//! must discharge its focus constraint against the discourse model,
//! accommodating contrasting material when the context does not already
//! supply it.

pub mod attention;
pub mod document;
pub mod domain;
pub mod engine;
pub mod focus;
pub mod knowledge;
pub mod oracle;
pub mod order;
pub mod resolver;
pub mod result;

pub use attention::{advance, local_state, project_salience, update_center};
pub use attention::{AttentionError, AttentionalState, CenterRecord, Context};
pub use document::{
    parse_document, render_document, DiscourseDocument, DocumentError, Expectation,
    UtteranceRecord,
};
pub use domain::{
    Agreement, Entity, EntityId, Gender, Gf, LogicalForm, Mention, MentionKind, Number, Person,
    Sort, Utterance,
};
pub use engine::{run, ContextSnapshot, ExpectationCheck, PronounReport, Report, UtteranceReport};
pub use focus::{
    accommodate, asymmetry_consistent, check_asymmetry, discharge, resolve_stressed,
    resolve_utterance, ConstraintScope, DischargeOutcome, DischargeStatus, FocusConstraint,
    UtteranceResolution,
};
pub use knowledge::{
    derive, parse_rules, wk_preference, AccommodationRecord, ContentPattern, DefeasibleRule,
    Derivation, DerivationStatus, DiscourseModel, Proposition, RuleParseError, RuleSet, Slot, Term,
};
pub use oracle::{enumerate_orders, oracle_combine, oracle_reverse, OracleError};
pub use order::{OrderError, PrefClass, StrictPartialOrder, SupportSet};
pub use resolver::{
    att_preference, candidate_set, combine, lf_preference, resolve_unstressed, BasePreference,
    ClassConclusion, ResolverError, Strength, GARDEN_PATH_CHAIN_THRESHOLD,
};
pub use result::{Felicity, ResolutionResult, TraceEvent};
