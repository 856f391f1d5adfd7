//! Complementation of nondeterministic parity automata with transition-based
//! acceptance into nondeterministic Büchi automata.
//!
//! The construction runs in two phases: a plain subset phase, and a phase over
//! *marked flattened trees* (MFTs) — flattened nested history trees (FNHTs)
//! carrying a round-robin breakpoint marker. The crate also ships the hard
//! language family witnessing the lower bound (one ultimately periodic word
//! per full FNHT), plus membership, emptiness and product oracles so that
//! correctness and the counting claims can be certified at desk scale.
//!
//! Entry points:
//! * [`automata`] — automaton types, the priority order, normalization, JSON.
//! * [`fnht`] — FNHTs, MFTs, validation, enumeration, counting injections.
//! * [`complement`] — the two-phase complementation construction.
//! * [`hardness`] — the full automaton and the hard-word family.
//! * [`analysis`] — lasso membership, emptiness, products, verification
//!   reports.
//!
//! See the `examples/` directory for runnable tours of each capability.

pub mod analysis;
pub mod automata;
pub mod complement;
pub mod fnht;
pub mod hardness;
pub mod set;

pub use analysis::{
    buchi_emptiness, buchi_lasso_member, complement_correctness_check,
    complement_lasso_member_on_the_fly, intersect_buchi, parity_lasso_member, parity_to_buchi,
    random_parity_automaton, tightness_report, CorrectnessReport, EmptinessWitness,
    TightnessReport,
};
pub use automata::{
    better_or_equal, buchi_as_parity, opt_priority, strictly_better, Automaton, BuchiAutomaton,
    BuchiTransition, LassoWord, ParityAutomaton, ParityTransition,
};
pub use complement::{build_complement, mft_step, subset_step, transfer_targets, Complement,
    ComplementState, StepOutcome};
pub use fnht::{
    enumerate_fnhts, enumerate_mfts, inject_nonfull_fnht, inject_nonfull_mft, EnumOptions, Fnht,
    Marker, MarkerKind, Mft, NodeLabels, NodePath, PathStep,
};
pub use hardness::{beta_letter, default_h, gamma_letter, hard_word, FullAutomaton, MatrixLetter};
pub use set::StateSet;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty priority set")]
    EmptyPrioritySet,
    #[error("construction requires max Π ≥ 2 (got optimal priority {0})")]
    MaxPriorityTooLow(i32),
    #[error("automaton priorities must be non-negative (got {0})")]
    NegativePriority(i32),
    #[error("lasso period must be non-empty")]
    EmptyPeriod,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("duplicate transition ({0}, {1}, {2})")]
    DuplicateTransition(String, String, String),
    #[error("initial state set must be non-empty")]
    EmptyInitialSet,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("FNHT is already full")]
    AlreadyFull,
    #[error("marking is already full")]
    MarkingAlreadyFull,
    #[error("no marker available")]
    NoMarkerAvailable,
    #[error("at most {max} states are supported (got {got})")]
    TooManyStates { max: usize, got: usize },
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
