//! Thompson construction followed by subset construction.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol};

use super::ast::RegexAst;
use super::dfa::Dfa;

#[derive(Default)]
struct Nfa {
    edges: Vec<Vec<(Symbol, usize)>>,
    eps: Vec<Vec<usize>>,
}

impl Nfa {
    fn add_state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        self.edges.len() - 1
    }

    /// Adds a fragment for `ast`, returning its (entry, exit) states.
    fn fragment(&mut self, ast: &RegexAst, alphabet: &Alphabet) -> (usize, usize) {
        let s = self.add_state();
        match ast {
            RegexAst::Epsilon => {
                let t = self.add_state();
                self.eps[s].push(t);
                (s, t)
            }
            RegexAst::Letter(a) => {
                let t = self.add_state();
                self.edges[s].push((*a, t));
                (s, t)
            }
            RegexAst::Dot => {
                let t = self.add_state();
                for a in alphabet.letter_symbols() {
                    self.edges[s].push((a, t));
                }
                (s, t)
            }
            RegexAst::Class(set) => {
                let t = self.add_state();
                for &a in set {
                    self.edges[s].push((a, t));
                }
                (s, t)
            }
            RegexAst::Concat(a, b) => {
                let (a0, a1) = self.fragment(a, alphabet);
                let (b0, b1) = self.fragment(b, alphabet);
                self.eps[s].push(a0);
                self.eps[a1].push(b0);
                (s, b1)
            }
            RegexAst::Alt(a, b) => {
                let (a0, a1) = self.fragment(a, alphabet);
                let (b0, b1) = self.fragment(b, alphabet);
                let t = self.add_state();
                self.eps[s].extend([a0, b0]);
                self.eps[a1].push(t);
                self.eps[b1].push(t);
                (s, t)
            }
            RegexAst::Star(a) => {
                let (a0, a1) = self.fragment(a, alphabet);
                let t = self.add_state();
                self.eps[s].extend([a0, t]);
                self.eps[a1].extend([a0, t]);
                (s, t)
            }
        }
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = vec![false; self.eps.len()];
        let mut stack: Vec<usize> = Vec::new();
        for s in seeds {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        let mut out = Vec::new();
        while let Some(q) = stack.pop() {
            out.push(q);
            for &t in &self.eps[q] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Determinizes an ε-NFA given by per-state labelled edges and ε-edges.
/// Unmatched symbols go to the empty subset, which becomes the dead state.
pub(crate) fn determinize(
    alphabet: &Arc<Alphabet>,
    edges: &[Vec<(Symbol, usize)>],
    eps: &[Vec<usize>],
    start: &[usize],
    accepting: &[bool],
) -> Dfa {
    let nfa = Nfa {
        edges: edges.to_vec(),
        eps: eps.to_vec(),
    };
    subset(&nfa, alphabet, start, accepting)
}

fn subset(nfa: &Nfa, alphabet: &Arc<Alphabet>, start: &[usize], accepting: &[bool]) -> Dfa {
    let k = alphabet.len();
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let first = nfa.closure(start.iter().copied());
    ids.insert(first.clone(), 0);
    let mut sets = vec![first];
    let mut delta = Vec::new();
    let mut i = 0;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); k];
    while i < sets.len() {
        for b in buckets.iter_mut() {
            b.clear();
        }
        for &q in &sets[i] {
            for &(a, t) in &nfa.edges[q] {
                buckets[a as usize].push(t);
            }
        }
        for bucket in &buckets {
            let next = nfa.closure(bucket.iter().copied());
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    ids.insert(next.clone(), sets.len());
                    sets.push(next);
                    sets.len() - 1
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let acc = sets.iter().map(|s| s.iter().any(|&q| accepting[q])).collect();
    Dfa::from_parts(alphabet.clone(), delta, 0, acc)
}

/// Compiles a syntax tree into a minimized total DFA.
pub fn compile_dfa(ast: &RegexAst, alphabet: &Arc<Alphabet>) -> Dfa {
    let mut nfa = Nfa::default();
    let (entry, exit) = nfa.fragment(ast, alphabet);
    let mut accepting = vec![false; nfa.edges.len()];
    accepting[exit] = true;
    subset(&nfa, alphabet, &[entry], &accepting).minimize()
}
