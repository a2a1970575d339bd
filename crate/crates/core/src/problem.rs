//! Problem definitions: variables, alphabet and constraints, compiled down
//! to match-DFAs and formulas over atom ordinals.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError};
use crate::formula::{parse_formula, Formula, FormulaSyntaxError};
use crate::regex::{compile_dfa, parse_regex, Dfa, RegexAst, RegexError};

/// On-disk problem format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub eol: bool,
    pub variables: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Json(String),
    #[error("alphabet entry {index} ({text:?}) is not a single character")]
    Letter { index: usize, text: String },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("variable {0:?} is declared twice")]
    DuplicateVariable(String),
    #[error("constraint {constraint}: {error}")]
    Syntax {
        constraint: usize,
        error: FormulaSyntaxError,
    },
    #[error("constraint {constraint}: unknown variable {variable:?}")]
    UnknownVariable { constraint: usize, variable: String },
    #[error("constraint {constraint}: regex {regex:?}: {error}")]
    Regex {
        constraint: usize,
        regex: String,
        /// Offset of the regex inside the constraint text.
        offset: usize,
        error: RegexError,
    },
}

/// A distinct match atom with its compiled match-DFA.
#[derive(Debug, Clone)]
pub struct Atom {
    pub variable: usize,
    pub regex: String,
    pub ast: RegexAst,
    pub dfa: Dfa,
}

#[derive(Debug, Clone)]
pub struct Problem {
    file: ProblemFile,
    alphabet: Arc<Alphabet>,
    atoms: Vec<Atom>,
    blocks: Vec<Range<usize>>,
    formulas: Vec<Formula<usize>>,
    hash: String,
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Problem, ProblemError> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| ProblemError::Json(e.to_string()))?;
        Problem::new(file)
    }

    /// Validates and compiles a problem. Identical `(variable, regex)` atoms
    /// share one ordinal; ordinals are grouped by variable in declaration
    /// order, then by first occurrence.
    pub fn new(file: ProblemFile) -> Result<Problem, ProblemError> {
        let mut letters = Vec::with_capacity(file.alphabet.len());
        for (index, text) in file.alphabet.iter().enumerate() {
            let mut chars = text.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => letters.push(c),
                _ => {
                    return Err(ProblemError::Letter {
                        index,
                        text: text.clone(),
                    })
                }
            }
        }
        let alphabet = Arc::new(Alphabet::new(letters, file.eol)?);

        let mut var_index = HashMap::new();
        for (i, v) in file.variables.iter().enumerate() {
            if var_index.insert(v.clone(), i).is_some() {
                return Err(ProblemError::DuplicateVariable(v.clone()));
            }
        }

        // first pass: parse, resolve variables, collect distinct atoms
        let mut parsed = Vec::with_capacity(file.constraints.len());
        let mut seen: HashMap<(usize, String), usize> = HashMap::new();
        let mut found: Vec<(usize, String, RegexAst)> = Vec::new();
        for (ci, text) in file.constraints.iter().enumerate() {
            let f = parse_formula(text).map_err(|error| ProblemError::Syntax {
                constraint: ci,
                error,
            })?;
            let f = f.try_map_atoms(&mut |a| -> Result<usize, ProblemError> {
                let v = *var_index
                    .get(&a.variable)
                    .ok_or_else(|| ProblemError::UnknownVariable {
                        constraint: ci,
                        variable: a.variable.clone(),
                    })?;
                let key = (v, a.regex.clone());
                if let Some(&id) = seen.get(&key) {
                    return Ok(id);
                }
                let ast = parse_regex(&a.regex, &alphabet).map_err(|error| ProblemError::Regex {
                    constraint: ci,
                    regex: a.regex.clone(),
                    offset: a.regex_offset,
                    error,
                })?;
                let id = found.len();
                seen.insert(key, id);
                found.push((v, a.regex.clone(), ast));
                Ok(id)
            })?;
            parsed.push(f);
        }

        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by_key(|&id| (found[id].0, id));
        let mut ordinal_of = vec![0; found.len()];
        for (ord, &id) in order.iter().enumerate() {
            ordinal_of[id] = ord;
        }
        let atoms: Vec<Atom> = order
            .iter()
            .map(|&id| {
                let (variable, regex, ast) = &found[id];
                Atom {
                    variable: *variable,
                    regex: regex.clone(),
                    dfa: compile_dfa(ast, &alphabet),
                    ast: ast.clone(),
                }
            })
            .collect();
        let mut blocks = Vec::with_capacity(file.variables.len());
        let mut start = 0;
        for v in 0..file.variables.len() {
            let end = start + atoms[start..].iter().take_while(|a| a.variable == v).count();
            blocks.push(start..end);
            start = end;
        }
        let formulas = parsed
            .iter()
            .map(|f| f.map_atoms(|&id| ordinal_of[id]))
            .collect();

        let canonical = serde_json::to_string(&file).expect("problem file serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let hash = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();

        Ok(Problem {
            file,
            alphabet,
            atoms,
            blocks,
            formulas,
            hash,
        })
    }

    pub fn file(&self) -> &ProblemFile {
        &self.file
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn variables(&self) -> &[String] {
        &self.file.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.file.variables.iter().position(|v| v == name)
    }

    /// Atoms in ordinal order.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Ordinal range of the atoms on variable `i`.
    pub fn block(&self, i: usize) -> Range<usize> {
        self.blocks[i].clone()
    }

    pub fn formulas(&self) -> &[Formula<usize>] {
        &self.formulas
    }

    /// Short stable fingerprint of the problem file.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Whether every formula holds for the given per-atom truth values.
    pub fn satisfied_by(&self, atom_values: &[bool]) -> bool {
        self.formulas.iter().all(|f| f.eval(&|&j| atom_values[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(alphabet: &str, vars: &[&str], constraints: &[&str]) -> ProblemFile {
        ProblemFile {
            alphabet: alphabet.chars().map(String::from).collect(),
            eol: false,
            variables: vars.iter().map(|s| s.to_string()).collect(),
            constraints: constraints.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn atoms_grouped_by_variable_and_deduplicated() {
        let p = Problem::new(file(
            "abcd",
            &["x1", "x2"],
            &[
                r#"match(x2,"abc") || match(x1,"a")"#,
                r#"match(x2,"abd*") && !match(x2,"abc")"#,
            ],
        ))
        .unwrap();
        let atoms: Vec<(usize, &str)> = p.atoms().iter().map(|a| (a.variable, a.regex.as_str())).collect();
        assert_eq!(atoms, [(0, "a"), (1, "abc"), (1, "abd*")]);
        assert_eq!(p.block(0), 0..1);
        assert_eq!(p.block(1), 1..3);
        assert_eq!(p.formulas()[0], Formula::or(Formula::Atom(1), Formula::Atom(0)));
        assert_eq!(
            p.formulas()[1],
            Formula::and(Formula::Atom(2), Formula::not(Formula::Atom(1)))
        );
        assert!(p.satisfied_by(&[true, false, true]));
        assert!(!p.satisfied_by(&[true, true, true]));
    }

    #[test]
    fn variable_without_atoms_has_empty_block() {
        let p = Problem::new(file("ab", &["x", "y", "z"], &[r#"match(z,"a")"#])).unwrap();
        assert_eq!(p.block(0), 0..0);
        assert_eq!(p.block(1), 0..0);
        assert_eq!(p.block(2), 0..1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Problem::from_json("{"),
            Err(ProblemError::Json(_))
        ));
        assert!(matches!(
            Problem::new(file("ab", &["x", "x"], &[])),
            Err(ProblemError::DuplicateVariable(_))
        ));
        assert!(matches!(
            Problem::new(file("ab", &["x"], &[r#"match(y,"a")"#])),
            Err(ProblemError::UnknownVariable { constraint: 0, .. })
        ));
        let e = Problem::new(file("ab", &["x"], &["", r#"match(x,"a|")"#])).unwrap_err();
        assert!(matches!(e, ProblemError::Syntax { constraint: 0, .. }));
        let e = Problem::new(file("ab", &["x"], &[r#"match(x, "a|")"#])).unwrap_err();
        match e {
            ProblemError::Regex { offset, error, .. } => {
                assert_eq!(offset, 10);
                assert!(matches!(error, RegexError::Syntax { position: 2, .. }), "{error:?}");
            }
            other => panic!("{other:?}"),
        }
        let mut f = file("ab", &["x"], &[]);
        f.alphabet.push("cd".into());
        assert!(matches!(Problem::new(f), Err(ProblemError::Letter { index: 2, .. })));
    }

    #[test]
    fn parses_json_and_hashes_stably() {
        let text = r#"{ "alphabet": ["a","b","c","d"], "eol": false,
            "variables": ["x1","x2"],
            "constraints": [ "match(x1,\"ab\") || match(x2,\"abc\")",
                             "match(x2,\"abd*\")" ] }"#;
        let p = Problem::from_json(text).unwrap();
        let q = Problem::new(p.file().clone()).unwrap();
        assert_eq!(p.hash(), q.hash());
        assert_eq!(p.hash().len(), 16);
        let r = Problem::new(file("abcd", &["x1", "x2"], &[])).unwrap();
        assert_ne!(p.hash(), r.hash());
        assert!(Problem::from_json(r#"{"alphabet":["a"],"variables":[],"extra":1}"#).is_err());
    }
}
