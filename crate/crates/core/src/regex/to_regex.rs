//! DFA to regular expression by state elimination.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Symbol};

use super::ast::RegexAst;
use super::dfa::Dfa;

/// Rendering of the empty language, which has no expression in the grammar.
pub const EMPTY_LANGUAGE: &str = "∅";

/// Edge labels during elimination, kept in a lightly normalized form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Re {
    Empty,
    Eps,
    Set(BTreeSet<Symbol>),
    Cat(Vec<Re>),
    Alt(BTreeSet<Re>),
    Star(Box<Re>),
}

impl Re {
    fn is_empty(&self) -> bool {
        matches!(self, Re::Empty)
    }

    fn alt(a: Re, b: Re) -> Re {
        let mut items = BTreeSet::new();
        let mut letters = BTreeSet::new();
        for r in [a, b] {
            match r {
                Re::Empty => {}
                Re::Alt(xs) => {
                    for x in xs {
                        match x {
                            Re::Set(s) => letters.extend(s),
                            x => {
                                items.insert(x);
                            }
                        }
                    }
                }
                Re::Set(s) => letters.extend(s),
                x => {
                    items.insert(x);
                }
            }
        }
        if !letters.is_empty() {
            items.insert(Re::Set(letters));
        }
        // ε | x* = x*
        if items.contains(&Re::Eps) && items.iter().any(|x| matches!(x, Re::Star(_))) {
            items.remove(&Re::Eps);
        }
        match items.len() {
            0 => Re::Empty,
            1 => items.into_iter().next().unwrap(),
            _ => Re::Alt(items),
        }
    }

    fn cat(a: Re, b: Re) -> Re {
        if a.is_empty() || b.is_empty() {
            return Re::Empty;
        }
        let mut parts = Vec::new();
        for r in [a, b] {
            match r {
                Re::Eps => {}
                Re::Cat(xs) => parts.extend(xs),
                x => parts.push(x),
            }
        }
        // x* x* = x*
        parts.dedup_by(|b, a| matches!(a, Re::Star(_)) && a == b);
        match parts.len() {
            0 => Re::Eps,
            1 => parts.pop().unwrap(),
            _ => Re::Cat(parts),
        }
    }

    fn star(a: Re) -> Re {
        match a {
            Re::Empty | Re::Eps => Re::Eps,
            Re::Star(_) => a,
            Re::Alt(mut xs) if xs.contains(&Re::Eps) => {
                xs.remove(&Re::Eps);
                let inner = if xs.len() == 1 {
                    xs.into_iter().next().unwrap()
                } else {
                    Re::Alt(xs)
                };
                Re::star(inner)
            }
            x => Re::Star(Box::new(x)),
        }
    }

    fn to_ast(&self, alphabet: &Alphabet) -> RegexAst {
        match self {
            Re::Empty => unreachable!("empty label survives only at top level"),
            Re::Eps => RegexAst::Epsilon,
            Re::Set(set) => {
                let eol = alphabet.eol().filter(|e| set.contains(e));
                let letters: BTreeSet<Symbol> =
                    set.iter().copied().filter(|&s| Some(s) != eol).collect();
                let base = if letters.len() == alphabet.letter_count() {
                    Some(RegexAst::Dot)
                } else if letters.len() == 1 {
                    Some(RegexAst::Letter(*letters.iter().next().unwrap()))
                } else if letters.is_empty() {
                    None
                } else {
                    Some(RegexAst::Class(letters))
                };
                match (base, eol) {
                    (Some(b), Some(e)) => RegexAst::alt(b, RegexAst::Letter(e)),
                    (Some(b), None) => b,
                    (None, Some(e)) => RegexAst::Letter(e),
                    (None, None) => unreachable!("sets are never empty"),
                }
            }
            Re::Cat(xs) => xs
                .iter()
                .map(|x| x.to_ast(alphabet))
                .reduce(RegexAst::concat)
                .unwrap(),
            Re::Alt(xs) => {
                // ε first reads better: ()|ab
                let mut parts: Vec<RegexAst> = xs.iter().map(|x| x.to_ast(alphabet)).collect();
                let last = parts.pop().unwrap();
                parts.into_iter().rev().fold(last, |acc, x| RegexAst::alt(x, acc))
            }
            Re::Star(x) => RegexAst::star(x.to_ast(alphabet)),
        }
    }
}

/// Converts a DFA into a regular expression of the same language, or
/// `None` when the language is empty.
pub fn dfa_to_ast(d: &Dfa) -> Option<RegexAst> {
    let alphabet = d.alphabet();
    let n = d.num_states();
    let co = d.coreachable();
    if !co[d.source()] {
        return None;
    }
    let reach = crate::partition::bfs_order(n, alphabet.len(), d.transitions(), d.source());
    let mut useful = vec![false; n];
    for &q in &reach {
        useful[q] = co[q];
    }
    // node ids: 0 = fresh start, 1 = fresh final, 2.. = useful states
    let states: Vec<usize> = (0..n).filter(|&q| useful[q]).collect();
    let mut node = vec![usize::MAX; n];
    for (i, &q) in states.iter().enumerate() {
        node[q] = i + 2;
    }
    let m = states.len() + 2;
    let mut edge: Vec<Vec<Re>> = vec![vec![Re::Empty; m]; m];
    edge[0][node[d.source()]] = Re::Eps;
    for &q in &states {
        if d.is_accepting(q) {
            edge[node[q]][1] = Re::Eps;
        }
        for a in alphabet.symbols() {
            let t = d.step(q, a);
            if useful[t] {
                let (i, j) = (node[q], node[t]);
                let prev = std::mem::replace(&mut edge[i][j], Re::Empty);
                edge[i][j] = Re::alt(prev, Re::Set([a].into()));
            }
        }
    }

    let mut alive: Vec<bool> = vec![true; m];
    for _ in 2..m {
        // eliminate the node with the fewest in × out paths, lowest id first
        let pick = (2..m)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let ins = (0..m).filter(|&u| u != v && alive[u] && !edge[u][v].is_empty()).count();
                let outs = (0..m).filter(|&w| w != v && alive[w] && !edge[v][w].is_empty()).count();
                (ins * outs, v)
            })
            .unwrap();
        alive[pick] = false;
        let loop_re = Re::star(edge[pick][pick].clone());
        let ins: Vec<usize> = (0..m)
            .filter(|&u| alive[u] && !edge[u][pick].is_empty())
            .collect();
        let outs: Vec<usize> = (0..m)
            .filter(|&w| alive[w] && !edge[pick][w].is_empty())
            .collect();
        for &u in &ins {
            for &w in &outs {
                let through = Re::cat(
                    Re::cat(edge[u][pick].clone(), loop_re.clone()),
                    edge[pick][w].clone(),
                );
                let prev = std::mem::replace(&mut edge[u][w], Re::Empty);
                edge[u][w] = Re::alt(prev, through);
            }
        }
        for x in 0..m {
            edge[x][pick] = Re::Empty;
            edge[pick][x] = Re::Empty;
        }
    }
    let result = std::mem::replace(&mut edge[0][1], Re::Empty);
    Some(result.to_ast(alphabet))
}

/// Regular expression text for the DFA's language; [`EMPTY_LANGUAGE`] when
/// nothing is accepted. The output is not canonical.
pub fn dfa_to_regex(d: &Dfa) -> String {
    match dfa_to_ast(d) {
        Some(ast) => ast.to_text(d.alphabet()),
        None => EMPTY_LANGUAGE.to_string(),
    }
}
