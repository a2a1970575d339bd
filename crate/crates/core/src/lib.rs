//! Interactive configuration of string variables constrained by boolean
//! combinations of regular-expression membership tests.

pub mod alphabet;
pub mod engine;
pub mod formula;
pub mod logic;
pub mod mdfa;
pub mod oracle;
pub mod partition;
pub mod problem;
pub mod reach;
pub mod regex;

pub use alphabet::{Alphabet, AlphabetError, Symbol, EOL_CHAR};
pub use mdfa::{construct_mdfa, AcceptanceValue, Mdfa};
pub use regex::{
    compile_dfa, compile_regex, dfa_accepts, dfa_language_equivalent, dfa_to_regex, minimize_dfa,
    parse_regex, Dfa, RegexAst, RegexError, StateId, EMPTY_LANGUAGE,
};
pub use engine::{
    DomainView, EngineError, Model, ModelStats, Op, Session, SessionView, TraceEntry, VariableView,
};
pub use formula::{parse_formula, Formula, FormulaSyntaxError, MatchAtom};
pub use logic::{BlockVectorSet, DdRef, DdStore};
pub use problem::{Problem, ProblemError, ProblemFile};
pub use reach::{compute_reachable_acceptance_values, ReachSets};
