//! The monolithic product automaton over single-variable append letters.
//! A state is a tuple of match-DFA states, one per atom; reading letter
//! `a` on variable `i` advances exactly the coordinates of `i`'s atoms.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::{AlphabetError, Symbol};
use crate::problem::Problem;
use crate::regex::{determinize, Dfa, StateId};

pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("product automaton exceeds {0} states")]
    StateBudgetExceeded(usize),
    #[error("enumeration exceeds {0} candidate assignments")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Debug, Clone, Copy)]
pub struct BigDfaOptions {
    /// Keep every state from which no accepting state is reachable instead
    /// of collapsing them into one sink.
    pub keep_dead: bool,
    pub state_budget: usize,
}

impl Default for BigDfaOptions {
    fn default() -> Self {
        Self {
            keep_dead: false,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BigDfa {
    problem: Arc<Problem>,
    /// Letters are `(variable, symbol)` pairs at index `variable * |Σ| + symbol`.
    letters: usize,
    delta: Vec<StateId>,
    source: StateId,
    accepting: Vec<bool>,
    coreachable: Vec<bool>,
    tuples: Vec<Option<Vec<StateId>>>,
    reachable_tuples: usize,
    live_count: usize,
    variable_live_count: usize,
    accepting_live_count: usize,
}

impl BigDfa {
    pub fn build(problem: Arc<Problem>) -> Result<BigDfa, OracleError> {
        BigDfa::build_with(problem, BigDfaOptions::default())
    }

    pub fn build_with(problem: Arc<Problem>, options: BigDfaOptions) -> Result<BigDfa, OracleError> {
        let atoms = problem.atoms();
        let n = problem.variables().len();
        let k = problem.alphabet().len();
        let letters = n * k;
        let coreach: Vec<Vec<bool>> = atoms.iter().map(|a| a.dfa.coreachable()).collect();

        let start: Vec<StateId> = atoms.iter().map(|a| a.dfa.source()).collect();
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::from([(start.clone(), 0)]);
        let mut tuples = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < tuples.len() {
            for v in 0..n {
                let block = problem.block(v);
                for a in 0..k as Symbol {
                    let mut next = tuples[i].clone();
                    for j in block.clone() {
                        next[j] = atoms[j].dfa.step(next[j], a);
                    }
                    let id = match ids.get(&next) {
                        Some(&id) => id,
                        None => {
                            if tuples.len() >= options.state_budget {
                                return Err(OracleError::StateBudgetExceeded(options.state_budget));
                            }
                            let id = tuples.len();
                            ids.insert(next.clone(), id);
                            tuples.push(next);
                            id
                        }
                    };
                    delta.push(id);
                }
            }
            i += 1;
        }

        let accepting: Vec<bool> = tuples
            .iter()
            .map(|t| {
                let tau: Vec<bool> = t.iter().zip(atoms).map(|(&q, a)| a.dfa.is_accepting(q)).collect();
                problem.satisfied_by(&tau)
            })
            .collect();
        let all_live = |t: &Vec<StateId>| t.iter().zip(&coreach).all(|(&q, co)| co[q]);
        let live_count = tuples.iter().filter(|t| all_live(t)).count();
        let accepting_live_count = tuples
            .iter()
            .zip(&accepting)
            .filter(|(t, &acc)| acc && all_live(t))
            .count();
        // per variable: at least one of its atoms still live
        let blocks: Vec<_> = (0..n).map(|v| problem.block(v)).collect();
        let variable_live_count = tuples
            .iter()
            .filter(|t| {
                blocks
                    .iter()
                    .all(|b| b.is_empty() || b.clone().any(|j| coreach[j][t[j]]))
            })
            .count();
        let reachable_tuples = tuples.len();

        let coreachable = coreachable(letters, &delta, &accepting);
        let mut big = BigDfa {
            problem,
            letters,
            delta,
            source: 0,
            accepting,
            coreachable,
            tuples: tuples.into_iter().map(Some).collect(),
            reachable_tuples,
            live_count,
            variable_live_count,
            accepting_live_count,
        };
        if !options.keep_dead {
            big.collapse_dead();
        }
        Ok(big)
    }

    /// Merges every state that cannot reach acceptance into one sink.
    fn collapse_dead(&mut self) {
        let n = self.accepting.len();
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if self.coreachable[q] {
                map[q] = next;
                next += 1;
            }
        }
        if next == n {
            return;
        }
        let sink = next;
        for m in map.iter_mut() {
            if *m == usize::MAX {
                *m = sink;
            }
        }
        let size = sink + 1;
        let mut delta = vec![sink; size * self.letters];
        let mut accepting = vec![false; size];
        let mut coreachable = vec![false; size];
        let mut tuples = vec![None; size];
        for q in 0..n {
            let p = map[q];
            if p == sink {
                continue;
            }
            accepting[p] = self.accepting[q];
            coreachable[p] = true;
            tuples[p] = self.tuples[q].take();
            for l in 0..self.letters {
                delta[p * self.letters + l] = map[self.delta[q * self.letters + l]];
            }
        }
        self.source = map[self.source];
        self.delta = delta;
        self.accepting = accepting;
        self.coreachable = coreachable;
        self.tuples = tuples;
    }

    pub fn problem(&self) -> &Arc<Problem> {
        &self.problem
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    /// Product of the live state counts of all match-DFAs.
    pub fn total_combinations(&self) -> usize {
        self.problem
            .atoms()
            .iter()
            .map(|a| a.dfa.live_state_count())
            .product()
    }

    /// Tuples reachable from the source, dead coordinates included.
    pub fn reachable_count(&self) -> usize {
        self.reachable_tuples
    }

    /// Reachable tuples with every coordinate live.
    pub fn live_count(&self) -> usize {
        self.live_count
    }

    /// Reachable tuples in which every variable keeps at least one live
    /// coordinate.
    pub fn variable_live_count(&self) -> usize {
        self.variable_live_count
    }

    pub fn accepting_live_count(&self) -> usize {
        self.accepting_live_count
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    /// Whether some accepting state is reachable from `q`.
    pub fn is_coreachable(&self, q: StateId) -> bool {
        self.coreachable[q]
    }

    /// Match-DFA states of `q`; `None` for the collapsed sink.
    pub fn tuple(&self, q: StateId) -> Option<&[StateId]> {
        self.tuples[q].as_deref()
    }

    pub fn step(&self, q: StateId, variable: usize, a: Symbol) -> StateId {
        let k = self.problem.alphabet().len();
        self.delta[q * self.letters + variable * k + a as usize]
    }

    pub fn run(&self, q: StateId, variable: usize, word: &[Symbol]) -> StateId {
        word.iter().fold(q, |q, &a| self.step(q, variable, a))
    }

    /// State reached by the assignment `values`, one word per variable.
    pub fn state_of(&self, values: &[Vec<Symbol>]) -> StateId {
        values
            .iter()
            .enumerate()
            .fold(self.source, |q, (v, w)| self.run(q, v, w))
    }

    pub fn state_of_str(&self, values: &[&str]) -> Result<StateId, OracleError> {
        let alphabet = self.problem.alphabet();
        let words = values
            .iter()
            .map(|s| alphabet.encode(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.state_of(&words))
    }

    /// DFA of appendable suffixes for `variable` from state `q`: letters of
    /// other variables become ε-moves, then determinize and minimize.
    pub fn valid_domain_from(&self, q: StateId, variable: usize) -> Dfa {
        let alphabet = self.problem.alphabet();
        let k = alphabet.len();
        let n = self.num_states();
        let vars = self.letters / k.max(1);
        let mut edges = vec![Vec::new(); n];
        let mut eps = vec![Vec::new(); n];
        for p in 0..n {
            for v in 0..vars {
                for a in 0..k as Symbol {
                    let t = self.step(p, v, a);
                    if v == variable {
                        edges[p].push((a, t));
                    } else if t != p {
                        eps[p].push(t);
                    }
                }
            }
        }
        determinize(alphabet, &edges, &eps, &[q], &self.accepting).minimize()
    }
}

fn coreachable(letters: usize, delta: &[StateId], accepting: &[bool]) -> Vec<bool> {
    let n = accepting.len();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (i, &t) in delta.iter().enumerate() {
        preds[t].push(i / letters);
    }
    let mut seen = accepting.to_vec();
    let mut stack: Vec<StateId> = (0..n).filter(|&q| accepting[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Valid domain of `variable` under the assignment `values`.
pub fn big_dfa_valid_domain(b: &BigDfa, values: &[&str], variable: usize) -> Result<Dfa, OracleError> {
    let q = b.state_of_str(values)?;
    Ok(b.valid_domain_from(q, variable))
}
