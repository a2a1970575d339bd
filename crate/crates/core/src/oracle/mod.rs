//! Reference implementations used to check the engine: the monolithic
//! product automaton, brute-force enumeration and a direct regex matcher.

mod big_dfa;
mod check;
mod enumerate;
pub mod naive;
pub mod random;

pub use big_dfa::{big_dfa_valid_domain, BigDfa, BigDfaOptions, OracleError, DEFAULT_STATE_BUDGET};
pub use check::{check_equivalence, check_random, random_case, Divergence, Report};
pub use enumerate::{enumerate_solutions, has_extension, words_up_to, DEFAULT_ENUMERATION_BUDGET};
