//! Seeded random problems and action traces for differential testing.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::alphabet::{Alphabet, Symbol};
use crate::engine::{Op, TraceEntry};
use crate::formula::Formula;
use crate::problem::ProblemFile;
use crate::regex::RegexAst;

#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub max_vars: usize,
    pub max_letters: usize,
    pub max_atoms: usize,
    pub max_depth: u32,
    pub max_trace: usize,
    /// Chance that the problem enables the end-of-line letter.
    pub eol_chance: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            max_vars: 3,
            max_letters: 3,
            max_atoms: 4,
            max_depth: 3,
            max_trace: 5,
            eol_chance: 0.25,
        }
    }
}

pub fn random_ast(rng: &mut StdRng, alphabet: &Alphabet, depth: u32) -> RegexAst {
    let symbols: Vec<Symbol> = alphabet.symbols().collect();
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..8) {
            0 => RegexAst::Dot,
            1 => RegexAst::Epsilon,
            2 if alphabet.letter_count() > 1 => {
                let set: BTreeSet<Symbol> = alphabet
                    .letter_symbols()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                if set.is_empty() {
                    RegexAst::Letter(0)
                } else {
                    RegexAst::Class(set)
                }
            }
            _ => RegexAst::Letter(*symbols.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..5) {
        0 | 1 => RegexAst::concat(random_ast(rng, alphabet, depth - 1), random_ast(rng, alphabet, depth - 1)),
        2 | 3 => RegexAst::alt(random_ast(rng, alphabet, depth - 1), random_ast(rng, alphabet, depth - 1)),
        _ => RegexAst::star(random_ast(rng, alphabet, depth - 1)),
    }
}

fn random_formula(rng: &mut StdRng, atoms: &[usize], depth: u32) -> Formula<usize> {
    if depth == 0 || atoms.len() == 1 || rng.gen_bool(0.25) {
        let a = Formula::Atom(*atoms.choose(rng).unwrap());
        return if rng.gen_bool(0.25) { Formula::not(a) } else { a };
    }
    let mid = rng.gen_range(1..atoms.len());
    let (l, r) = atoms.split_at(mid);
    let (l, r) = (random_formula(rng, l, depth - 1), random_formula(rng, r, depth - 1));
    match rng.gen_range(0..6) {
        0 | 1 => Formula::or(l, r),
        2 | 3 => Formula::and(l, r),
        4 => Formula::implies(l, r),
        _ => Formula::iff(l, r),
    }
}

/// A random problem file; it may be infeasible.
pub fn random_problem(rng: &mut StdRng, params: &RandomParams) -> ProblemFile {
    let n = rng.gen_range(1..=params.max_vars);
    let letters = rng.gen_range(1..=params.max_letters);
    let eol = rng.gen_bool(params.eol_chance);
    let chars: Vec<char> = "abcdefgh".chars().take(letters).collect();
    let alphabet = Alphabet::new(chars.iter().copied(), eol).expect("valid letters");
    let variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let m = rng.gen_range(1..=params.max_atoms);
    let atoms: Vec<(usize, String)> = (0..m)
        .map(|_| {
            let v = rng.gen_range(0..n);
            let ast = random_ast(rng, &alphabet, params.max_depth);
            (v, ast.to_text(&alphabet))
        })
        .collect();
    // split atoms over one or two constraints
    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(rng);
    let parts = if m > 1 && rng.gen_bool(0.5) { 2 } else { 1 };
    let cut = if parts == 2 { rng.gen_range(1..m) } else { m };
    let constraints = [&ids[..cut], &ids[cut..]]
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|group| {
            let f = random_formula(rng, group, 3);
            let f = f.map_atoms(|&j| crate::formula::MatchAtom {
                variable: variables[atoms[j].0].clone(),
                regex: atoms[j].1.clone(),
                regex_offset: 0,
            });
            f.to_string()
        })
        .collect();
    ProblemFile {
        alphabet: chars.iter().map(|c| c.to_string()).collect(),
        eol,
        variables,
        constraints,
    }
}

/// A random sequence of appends and completions; some may be rejected.
pub fn random_trace(rng: &mut StdRng, file: &ProblemFile, max_len: usize) -> Vec<TraceEntry> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let variable = file.variables.choose(rng).unwrap().clone();
            if file.eol && rng.gen_bool(0.2) {
                TraceEntry {
                    op: Op::Complete,
                    variable,
                    text: String::new(),
                }
            } else {
                let l = if rng.gen_bool(0.75) { 1 } else { 2 };
                let text = (0..l).map(|_| file.alphabet.choose(rng).unwrap().as_str()).collect();
                TraceEntry {
                    op: Op::Append,
                    variable,
                    text,
                }
            }
        })
        .collect()
}
