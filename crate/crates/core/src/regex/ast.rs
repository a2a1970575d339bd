//! Regular-expression syntax tree and parser.
//!
//! Grammar (precedence star > concatenation > alternation):
//!
//! ```text
//! regex  := alt
//! alt    := concat ('|' concat)*
//! concat := rep+
//! rep    := atom '*'*
//! atom   := LETTER | '.' | '$' | '(' alt? ')' | '[' LETTER+ ']' | '\' META
//! META   := '|' | '*' | '(' | ')' | '[' | ']' | '.' | '\' | '$'
//! ```

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Symbol, EOL_CHAR};

use super::RegexError;

/// Characters that must be escaped with a backslash to be read as letters.
pub const META: &[char] = &['|', '*', '(', ')', '[', ']', '.', '\\', EOL_CHAR];

pub fn is_meta(c: char) -> bool {
    META.contains(&c)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexAst {
    Letter(Symbol),
    /// Any declared letter; never the EOL sentinel.
    Dot,
    Epsilon,
    Concat(Box<RegexAst>, Box<RegexAst>),
    Alt(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
    Class(BTreeSet<Symbol>),
}

impl RegexAst {
    pub fn concat(a: RegexAst, b: RegexAst) -> RegexAst {
        RegexAst::Concat(Box::new(a), Box::new(b))
    }

    pub fn alt(a: RegexAst, b: RegexAst) -> RegexAst {
        RegexAst::Alt(Box::new(a), Box::new(b))
    }

    pub fn star(a: RegexAst) -> RegexAst {
        match a {
            RegexAst::Star(_) => a,
            other => RegexAst::Star(Box::new(other)),
        }
    }

    /// The literal word `w` as a chain of concatenations (`Epsilon` when empty).
    pub fn word(w: &[Symbol]) -> RegexAst {
        w.iter()
            .map(|&s| RegexAst::Letter(s))
            .reduce(RegexAst::concat)
            .unwrap_or(RegexAst::Epsilon)
    }

    pub fn depth(&self) -> usize {
        match self {
            RegexAst::Letter(_) | RegexAst::Dot | RegexAst::Epsilon | RegexAst::Class(_) => 0,
            RegexAst::Star(a) => 1 + a.depth(),
            RegexAst::Concat(a, b) | RegexAst::Alt(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Renders the tree back into the textual grammar.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        self.write(alphabet, 0, &mut out);
        out
    }

    // prec: 0 = alternation context, 1 = concatenation, 2 = star operand
    fn write(&self, alphabet: &Alphabet, prec: u8, out: &mut String) {
        match self {
            RegexAst::Letter(s) => push_symbol(alphabet, *s, out),
            RegexAst::Dot => out.push('.'),
            RegexAst::Epsilon => out.push_str("()"),
            RegexAst::Class(set) => {
                out.push('[');
                for &s in set {
                    push_symbol(alphabet, s, out);
                }
                out.push(']');
            }
            RegexAst::Star(a) => {
                a.write(alphabet, 2, out);
                out.push('*');
            }
            RegexAst::Concat(a, b) => {
                if prec > 1 {
                    out.push('(');
                }
                a.write(alphabet, 1, out);
                b.write(alphabet, 2, out);
                if prec > 1 {
                    out.push(')');
                }
            }
            RegexAst::Alt(a, b) => {
                if prec > 0 {
                    out.push('(');
                }
                a.write(alphabet, 1, out);
                out.push('|');
                b.write(alphabet, 0, out);
                if prec > 0 {
                    out.push(')');
                }
            }
        }
    }
}

pub(crate) fn push_symbol(alphabet: &Alphabet, s: Symbol, out: &mut String) {
    if alphabet.is_eol(s) {
        out.push(EOL_CHAR);
        return;
    }
    let c = alphabet.char_of(s).expect("symbol in alphabet");
    if is_meta(c) {
        out.push('\\');
    }
    out.push(c);
}

/// Parses `text` into a syntax tree over `alphabet`.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<RegexAst, RegexError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        alphabet,
    };
    let ast = p.alt()?;
    if p.pos < p.chars.len() {
        return Err(p.syntax(&["'|'", "end of input"]));
    }
    Ok(ast)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

const ATOM_START: &[&str] = &["letter", "'.'", "'$'", "'('", "'['", "'\\'"];

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn syntax(&self, expected: &[&'static str]) -> RegexError {
        RegexError::Syntax {
            position: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn alt(&mut self) -> Result<RegexAst, RegexError> {
        let first = self.concat()?;
        if self.peek() == Some('|') {
            self.pos += 1;
            let rest = self.alt()?;
            return Ok(RegexAst::alt(first, rest));
        }
        Ok(first)
    }

    fn starts_atom(&self) -> bool {
        !matches!(self.peek(), None | Some('|' | ')' | '*' | ']'))
    }

    fn concat(&mut self) -> Result<RegexAst, RegexError> {
        if !self.starts_atom() {
            return Err(self.syntax(ATOM_START));
        }
        let mut acc = self.rep()?;
        while self.starts_atom() {
            let next = self.rep()?;
            acc = RegexAst::concat(acc, next);
        }
        Ok(acc)
    }

    fn rep(&mut self) -> Result<RegexAst, RegexError> {
        let mut a = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            a = RegexAst::star(a);
        }
        Ok(a)
    }

    fn letter(&self, c: char, position: usize) -> Result<Symbol, RegexError> {
        self.alphabet
            .symbol_of(c)
            .ok_or(RegexError::LetterOutsideAlphabet { position, letter: c })
    }

    fn escaped(&mut self) -> Result<Symbol, RegexError> {
        // at the backslash
        self.pos += 1;
        match self.peek() {
            Some(c) if is_meta(c) => {
                let s = self.letter(c, self.pos)?;
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.syntax(&["metacharacter"])),
        }
    }

    fn atom(&mut self) -> Result<RegexAst, RegexError> {
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(RegexAst::Epsilon);
                }
                let inner = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax(&["')'", "'|'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let mut set = BTreeSet::new();
                loop {
                    match self.peek() {
                        Some(']') if !set.is_empty() => {
                            self.pos += 1;
                            break;
                        }
                        Some('\\') => {
                            set.insert(self.escaped()?);
                        }
                        Some(c) if !is_meta(c) => {
                            set.insert(self.letter(c, self.pos)?);
                            self.pos += 1;
                        }
                        _ if set.is_empty() => return Err(self.syntax(&["letter"])),
                        _ => return Err(self.syntax(&["letter", "']'"])),
                    }
                }
                Ok(RegexAst::Class(set))
            }
            Some('.') => {
                self.pos += 1;
                Ok(RegexAst::Dot)
            }
            Some(EOL_CHAR) => match self.alphabet.eol() {
                Some(eol) => {
                    self.pos += 1;
                    Ok(RegexAst::Letter(eol))
                }
                None => Err(RegexError::LetterOutsideAlphabet {
                    position: start,
                    letter: EOL_CHAR,
                }),
            },
            Some('\\') => Ok(RegexAst::Letter(self.escaped()?)),
            Some(c) if !is_meta(c) => {
                let s = self.letter(c, start)?;
                self.pos += 1;
                Ok(RegexAst::Letter(s))
            }
            _ => Err(self.syntax(ATOM_START)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Alphabet {
        Alphabet::new("abcd".chars(), false).unwrap()
    }

    #[test]
    fn alternation_is_weakest() {
        let ast = parse_regex("a|c|(abc*)d", &abcd()).unwrap();
        use RegexAst::*;
        let inner = RegexAst::concat(
            RegexAst::concat(
                RegexAst::concat(Letter(0), Letter(1)),
                RegexAst::star(Letter(2)),
            ),
            Letter(3),
        );
        assert_eq!(
            ast,
            RegexAst::alt(Letter(0), RegexAst::alt(Letter(2), inner))
        );
    }

    #[test]
    fn empty_group_is_epsilon() {
        assert_eq!(parse_regex("()", &abcd()).unwrap(), RegexAst::Epsilon);
    }

    #[test]
    fn dangling_alternation() {
        match parse_regex("ab|", &abcd()) {
            Err(RegexError::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        let a = abcd();
        for (text, pos) in [("", 0), ("(a", 2), ("*a", 0), ("a)", 1), ("[]", 1), ("a\\b", 2), ("[a", 2)] {
            match parse_regex(text, &a) {
                Err(RegexError::Syntax { position, .. }) => assert_eq!(position, pos, "{text}"),
                other => panic!("{text}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn letters_must_be_declared() {
        assert_eq!(
            parse_regex("abx", &abcd()),
            Err(RegexError::LetterOutsideAlphabet {
                position: 2,
                letter: 'x'
            })
        );
        assert!(matches!(
            parse_regex("a$", &abcd()),
            Err(RegexError::LetterOutsideAlphabet { letter: '$', .. })
        ));
    }

    #[test]
    fn escapes_and_eol() {
        let a = Alphabet::new("a.|".chars(), true).unwrap();
        let ast = parse_regex("\\.\\|a$", &a).unwrap();
        assert_eq!(ast.to_text(&a), "\\.\\|a$");
        let class = parse_regex("[a\\.]", &a).unwrap();
        assert_eq!(class, RegexAst::Class([0, 1].into_iter().collect()));
    }

    #[test]
    fn whitespace_is_a_letter() {
        let a = Alphabet::new("a ".chars(), false).unwrap();
        assert_eq!(
            parse_regex("a a", &a).unwrap(),
            RegexAst::concat(
                RegexAst::concat(RegexAst::Letter(0), RegexAst::Letter(1)),
                RegexAst::Letter(0)
            )
        );
    }

    #[test]
    fn text_round_trip_keeps_structure() {
        let a = abcd();
        for text in ["a|c|(abc*)d", "(ab)*|()", "[abc]d*", ".a"] {
            let ast = parse_regex(text, &a).unwrap();
            assert_eq!(parse_regex(&ast.to_text(&a), &a).unwrap(), ast, "{text}");
        }
    }
}
