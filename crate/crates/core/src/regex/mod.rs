//! Regular expressions: parsing, compilation to minimal DFAs and conversion
//! back to text.

mod ast;
mod compile;
mod dfa;
mod to_regex;

use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError};

pub use ast::{is_meta, parse_regex, RegexAst, META};
pub(crate) use compile::determinize;
pub use compile::compile_dfa;
pub use dfa::{dfa_accepts, dfa_language_equivalent, minimize_dfa, Dfa, StateId};
pub use to_regex::{dfa_to_ast, dfa_to_regex, EMPTY_LANGUAGE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexError {
    #[error("syntax error at offset {position}: expected {}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<&'static str>,
    },
    #[error("letter {letter:?} at offset {position} is not in the alphabet")]
    LetterOutsideAlphabet { position: usize, letter: char },
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

impl RegexError {
    /// Offset into the regex text, for errors tied to one.
    pub fn position(&self) -> Option<usize> {
        match self {
            RegexError::Syntax { position, .. } | RegexError::LetterOutsideAlphabet { position, .. } => {
                Some(*position)
            }
            _ => None,
        }
    }
}

/// Parses and compiles `text` in one step.
pub fn compile_regex(text: &str, alphabet: &Arc<Alphabet>) -> Result<Dfa, RegexError> {
    let ast = parse_regex(text, alphabet)?;
    Ok(compile_dfa(&ast, alphabet))
}
