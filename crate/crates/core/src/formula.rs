//! Boolean formulas over match atoms and the constraint text parser.

use std::fmt;

use thiserror::Error;

/// A match atom as written: `match(variable, "regex")`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchAtom {
    pub variable: String,
    pub regex: String,
    /// Char offset of the regex text's first character in the constraint.
    pub regex_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    pub fn not(f: Formula<A>) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula<A>, b: Formula<A>) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn try_map_atoms<B, E>(
        &self,
        f: &mut impl FnMut(&A) -> Result<B, E>,
    ) -> Result<Formula<B>, E> {
        Ok(match self {
            Formula::Atom(a) => Formula::Atom(f(a)?),
            Formula::Not(x) => Formula::not(x.try_map_atoms(f)?),
            Formula::Or(x, y) => Formula::or(x.try_map_atoms(f)?, y.try_map_atoms(f)?),
            Formula::And(x, y) => Formula::and(x.try_map_atoms(f)?, y.try_map_atoms(f)?),
            Formula::Implies(x, y) => Formula::implies(x.try_map_atoms(f)?, y.try_map_atoms(f)?),
            Formula::Iff(x, y) => Formula::iff(x.try_map_atoms(f)?, y.try_map_atoms(f)?),
        })
    }

    pub fn map_atoms<B>(&self, mut f: impl FnMut(&A) -> B) -> Formula<B> {
        self.try_map_atoms::<B, std::convert::Infallible>(&mut |a| Ok(f(a)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn eval(&self, value: &impl Fn(&A) -> bool) -> bool {
        match self {
            Formula::Atom(a) => value(a),
            Formula::Not(x) => !x.eval(value),
            Formula::Or(x, y) => x.eval(value) || y.eval(value),
            Formula::And(x, y) => x.eval(value) && y.eval(value),
            Formula::Implies(x, y) => !x.eval(value) || y.eval(value),
            Formula::Iff(x, y) => x.eval(value) == y.eval(value),
        }
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.visit(&mut |a| out.push(a));
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(x) => x.visit(f),
            Formula::Or(x, y) | Formula::And(x, y) | Formula::Implies(x, y) | Formula::Iff(x, y) => {
                x.visit(f);
                y.visit(f);
            }
        }
    }
}

impl fmt::Display for Formula<MatchAtom> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => {
                write!(f, "match({}, \"", a.variable)?;
                for c in a.regex.chars() {
                    if c == '"' || c == '\\' {
                        write!(f, "\\{c}")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                f.write_str("\")")
            }
            Formula::Not(x) => write!(f, "!({x})"),
            Formula::Or(x, y) => write!(f, "({x} || {y})"),
            Formula::And(x, y) => write!(f, "({x} && {y})"),
            Formula::Implies(x, y) => write!(f, "({x} -> {y})"),
            Formula::Iff(x, y) => write!(f, "({x} <-> {y})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("constraint syntax error at offset {position}: expected {}", expected.join(" or "))]
pub struct FormulaSyntaxError {
    pub position: usize,
    pub expected: Vec<&'static str>,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &[&'static str]) -> FormulaSyntaxError {
        FormulaSyntaxError {
            position: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        let t: Vec<char> = token.chars().collect();
        if self.chars[self.pos..].starts_with(&t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &'static str) -> Result<(), FormulaSyntaxError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&[token]))
        }
    }

    fn iff(&mut self) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
        let mut left = self.implies()?;
        while self.eat("<->") {
            let right = self.implies()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
        let left = self.or()?;
        if self.eat("->") {
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
        let mut left = self.and()?;
        while self.eat("||") {
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
        let mut left = self.unary()?;
        while self.eat("&&") {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.iff()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.skip_ws();
        let start = self.pos;
        if !self.eat("match") {
            return Err(self.error(&["match", "(", "!"]));
        }
        // `matchx` is not the keyword
        if self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos = start;
            return Err(self.error(&["match", "(", "!"]));
        }
        self.expect("(")?;
        let variable = self.ident()?;
        self.expect(",")?;
        let (regex, regex_offset) = self.string()?;
        self.expect(")")?;
        Ok(Formula::Atom(MatchAtom {
            variable,
            regex,
            regex_offset,
        }))
    }

    fn ident(&mut self) -> Result<String, FormulaSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_alphabetic() || *c == '_' => self.pos += 1,
            _ => return Err(self.error(&["variable name"])),
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// Quoted string. `\"` and `\\` are unescaped; any other backslash
    /// sequence is kept as written so regex escapes pass through.
    fn string(&mut self) -> Result<(String, usize), FormulaSyntaxError> {
        self.expect("\"")?;
        let offset = self.pos;
        let mut out = String::new();
        loop {
            match self.chars.get(self.pos) {
                None => return Err(self.error(&["\""])),
                Some('"') => {
                    self.pos += 1;
                    return Ok((out, offset));
                }
                Some('\\') => match self.chars.get(self.pos + 1) {
                    Some(&c @ ('"' | '\\')) => {
                        out.push(c);
                        self.pos += 2;
                    }
                    _ => {
                        out.push('\\');
                        self.pos += 1;
                    }
                },
                Some(&c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
    }
}

/// Parses one constraint. Precedence from tightest: `!`, `&&`, `||`,
/// `->` (right associative), `<->`.
pub fn parse_formula(text: &str) -> Result<Formula<MatchAtom>, FormulaSyntaxError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let f = p.iff()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.error(&["||", "&&", "->", "<->", "end of constraint"]));
    }
    Ok(f)
}
