use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, AlphabetError, Symbol};
use crate::partition;

use super::RegexError;

pub type StateId = usize;

/// A total deterministic automaton over an [`Alphabet`]'s effective symbols.
#[derive(Clone)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    delta: Vec<StateId>,
    source: StateId,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from a flat successor table (`delta[q * |Σ| + a]`).
    ///
    /// Panics if the table is not total or refers to missing states.
    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        delta: Vec<StateId>,
        source: StateId,
        accepting: Vec<bool>,
    ) -> Self {
        let n = accepting.len();
        assert!(n > 0, "a DFA needs at least one state");
        assert_eq!(delta.len(), n * alphabet.len(), "transition table is not total");
        assert!(source < n && delta.iter().all(|&t| t < n), "dangling state id");
        Self {
            alphabet,
            delta,
            source,
            accepting,
        }
    }

    /// The DFA accepting nothing: a single non-accepting sink.
    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet, vec![0; k], 0, vec![false])
    }

    /// The DFA accepting every word over the effective alphabet.
    pub fn universal(alphabet: Arc<Alphabet>) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet, vec![0; k], 0, vec![true])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn transitions(&self) -> &[StateId] {
        &self.delta
    }

    pub fn step(&self, q: StateId, a: Symbol) -> StateId {
        self.delta[q * self.alphabet.len() + a as usize]
    }

    pub fn run(&self, q: StateId, word: &[Symbol]) -> StateId {
        word.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.accepting[self.run(self.source, word)]
    }

    /// Membership test on text; `$` denotes EOL when enabled.
    pub fn accepts_str(&self, word: &str) -> Result<bool, AlphabetError> {
        Ok(self.accepts(&self.alphabet.encode(word)?))
    }

    /// Same automaton with a different start state.
    pub fn with_source(&self, source: StateId) -> Dfa {
        assert!(source < self.num_states());
        Dfa {
            source,
            ..self.clone()
        }
    }

    /// For every state, whether some accepting state is reachable from it.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                rev[self.delta[q * k + a]].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<StateId> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }

    /// States reachable from the source that can still reach acceptance.
    pub fn live_state_count(&self) -> usize {
        let co = self.coreachable();
        partition::bfs_order(self.num_states(), self.alphabet.len(), &self.delta, self.source)
            .into_iter()
            .filter(|&q| co[q])
            .count()
    }

    pub fn is_empty_language(&self) -> bool {
        !self.coreachable()[self.source]
    }

    /// Minimal equivalent DFA, states numbered in BFS order from the source.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let q = partition::minimize(
            self.num_states(),
            k,
            &self.delta,
            self.source,
            &self.accepting,
        );
        let accepting = q.representative.iter().map(|&r| self.accepting[r]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            delta: q.delta,
            source: 0,
            accepting,
        }
    }

    /// Complement over the effective alphabet.
    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    /// Product automaton combining acceptance with `op`.
    pub fn product(
        &self,
        other: &Dfa,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<Dfa, RegexError> {
        self.check_alphabet(other)?;
        let k = self.alphabet.len();
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(self.source, other.source)];
        ids.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            i += 1;
            for a in 0..k as Symbol {
                let next = (self.step(p, a), other.step(q, a));
                let id = *ids.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                delta.push(id);
            }
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            source: 0,
            accepting,
        })
    }

    /// Left quotient `a⁻¹L`: the words `w` with `a·w` in the language.
    pub fn quotient(&self, a: Symbol) -> Dfa {
        self.with_source(self.step(self.source, a))
    }

    fn check_alphabet(&self, other: &Dfa) -> Result<(), RegexError> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(RegexError::AlphabetMismatch)
        }
    }

    /// Shortest word (shortlex-first) on which the two languages differ.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Vec<Symbol>>, RegexError> {
        self.check_alphabet(other)?;
        let k = self.alphabet.len();
        let mut parent: HashMap<(StateId, StateId), Option<((StateId, StateId), Symbol)>> =
            HashMap::new();
        let start = (self.source, other.source);
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            if self.accepting[pair.0] != other.accepting[pair.1] {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some((prev, a)) = parent[&cur] {
                    word.push(a);
                    cur = prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for a in 0..k as Symbol {
                let next = (self.step(pair.0, a), other.step(pair.1, a));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((pair, a)));
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    /// Language equivalence.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, RegexError> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    /// `L(self) ⊆ L(other)`.
    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool, RegexError> {
        let diff = self.product(other, |a, b| a && !b)?;
        Ok(diff.is_empty_language())
    }
}

/// Free-function form of [`Dfa::equivalent`].
pub fn dfa_language_equivalent(a: &Dfa, b: &Dfa) -> Result<bool, RegexError> {
    a.equivalent(b)
}

/// Free-function form of [`Dfa::minimize`].
pub fn minimize_dfa(d: &Dfa) -> Dfa {
    d.minimize()
}

/// Membership of text `w`.
pub fn dfa_accepts(d: &Dfa, w: &str) -> Result<bool, AlphabetError> {
    d.accepts_str(w)
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dfa(source={}) {{", self.source)?;
        for q in 0..self.num_states() {
            write!(f, "  {q}{}", if self.accepting[q] { "*" } else { "" })?;
            for a in self.alphabet.symbols() {
                let c = self.alphabet.char_of(a).unwrap();
                write!(f, " {c}→{}", self.step(q, a))?;
            }
            writeln!(f)?;
        }
        write!(f, "}}")
    }
}
