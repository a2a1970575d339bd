//! Finite alphabets with an optional end-of-line sentinel.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a letter in the effective alphabet. Declared letters come first,
/// in declaration order; the EOL sentinel (when enabled) is the last symbol.
pub type Symbol = u32;

/// The character used to render the EOL sentinel.
pub const EOL_CHAR: char = '$';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one letter")]
    Empty,
    #[error("letter {0:?} is declared more than once")]
    DuplicateLetter(char),
    #[error("letter {0:?} is reserved for the end-of-line marker")]
    ReservedLetter(char),
    #[error("letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("symbol {0} is not in the alphabet")]
    SymbolOutsideAlphabet(Symbol),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
    index: HashMap<char, Symbol>,
    eol: bool,
}

impl Alphabet {
    /// Builds an alphabet from the declared letters. The declaration order is
    /// the lexicographic order used for suggestions.
    pub fn new<I>(letters: I, eol: bool) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = char>,
    {
        let mut out = Vec::new();
        let mut index = HashMap::new();
        for c in letters {
            if eol && c == EOL_CHAR {
                return Err(AlphabetError::ReservedLetter(c));
            }
            if index.insert(c, out.len() as Symbol).is_some() {
                return Err(AlphabetError::DuplicateLetter(c));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Self {
            letters: out,
            index,
            eol,
        })
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// Number of declared letters (EOL excluded).
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    /// Number of symbols in the effective alphabet (EOL included if enabled).
    pub fn len(&self) -> usize {
        self.letters.len() + usize::from(self.eol)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eol_enabled(&self) -> bool {
        self.eol
    }

    pub fn eol(&self) -> Option<Symbol> {
        self.eol.then_some(self.letters.len() as Symbol)
    }

    pub fn is_eol(&self, s: Symbol) -> bool {
        self.eol && s as usize == self.letters.len()
    }

    /// All symbols of the effective alphabet in order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.len() as Symbol
    }

    /// Declared letters only, as symbols.
    pub fn letter_symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.letters.len() as Symbol
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        self.index.get(&c).copied()
    }

    /// Encodes text into symbols. A `$` is read as EOL when EOL is enabled.
    pub fn encode(&self, text: &str) -> Result<Vec<Symbol>, AlphabetError> {
        text.chars()
            .map(|c| match self.symbol_of(c) {
                Some(s) => Ok(s),
                None if self.eol && c == EOL_CHAR => Ok(self.letters.len() as Symbol),
                None => Err(AlphabetError::LetterOutsideAlphabet(c)),
            })
            .collect()
    }

    /// Like [`Alphabet::encode`] but rejects the EOL sentinel.
    pub fn encode_letters(&self, text: &str) -> Result<Vec<Symbol>, AlphabetError> {
        text.chars()
            .map(|c| {
                self.symbol_of(c)
                    .ok_or(AlphabetError::LetterOutsideAlphabet(c))
            })
            .collect()
    }

    pub fn char_of(&self, s: Symbol) -> Option<char> {
        if self.is_eol(s) {
            Some(EOL_CHAR)
        } else {
            self.letters.get(s as usize).copied()
        }
    }

    pub fn check(&self, s: Symbol) -> Result<Symbol, AlphabetError> {
        if (s as usize) < self.len() {
            Ok(s)
        } else {
            Err(AlphabetError::SymbolOutsideAlphabet(s))
        }
    }

    pub fn decode(&self, word: &[Symbol]) -> String {
        word.iter()
            .map(|&s| self.char_of(s).unwrap_or('\u{fffd}'))
            .collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("letters", &self.letters)
            .field("eol", &self.eol)
            .finish()
    }
}
