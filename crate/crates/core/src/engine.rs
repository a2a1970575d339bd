//! The configurator: build a problem once, then append letters to
//! variables while keeping every valid domain exact.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::alphabet::{AlphabetError, Symbol};
use crate::logic::{BlockVectorSet, DdRef, DdStore};
use crate::mdfa::{construct_mdfa, AcceptanceValue, Mdfa};
use crate::problem::Problem;
use crate::reach::{compute_reachable_acceptance_values, ReachSets};
use crate::regex::{dfa_to_regex, Dfa, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("No feasible solutions")]
    InfeasibleProblem,
    #[error("invalid append")]
    InvalidAppend,
    #[error("variable {0:?} is completed")]
    VariableCompleted(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("completion is not enabled for this problem")]
    CompletionDisabled,
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("nothing to append")]
    EmptyAppend,
}

/// Compiled artifacts of one string variable.
#[derive(Debug, Clone)]
pub struct VarModel {
    /// Joined MDFA as constructed, before pruning.
    pub raw: Mdfa,
    pub raw_reach: ReachSets,
    /// Pruned and minimized MDFA used by sessions.
    pub mdfa: Mdfa,
    pub reach: ReachSets,
}

/// Result of Build: immutable, shared by every session on the problem.
#[derive(Debug, Clone)]
pub struct Model {
    problem: Arc<Problem>,
    vars: Vec<VarModel>,
    store: DdStore,
    g: DdRef,
    v_empty: Vec<BlockVectorSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelStats {
    pub vars: usize,
    pub atoms: usize,
    pub mdfa_states: Vec<usize>,
}

fn block_bits(reach: &ReachSets, q: StateId) -> Vec<u64> {
    reach.live(q).map(|v| v.bits).collect()
}

impl Model {
    pub fn build(problem: Arc<Problem>) -> Result<Model, EngineError> {
        let n = problem.variables().len();
        let alphabet = problem.alphabet().clone();
        let mut raws = Vec::with_capacity(n);
        for i in 0..n {
            let block = problem.block(i);
            let raw = if block.is_empty() {
                Mdfa::trivial(alphabet.clone())
            } else {
                let dfas: Vec<Dfa> = problem.atoms()[block].iter().map(|a| a.dfa.clone()).collect();
                construct_mdfa(&dfas).expect("atoms share the problem alphabet")
            };
            let reach = compute_reachable_acceptance_values(&raw);
            raws.push((raw, reach));
        }

        let mut store = DdStore::new(problem.atoms().len());
        let mut g = DdRef::TRUE;
        for f in problem.formulas() {
            let d = store.encode_formula(f);
            g = store.and(g, d);
        }
        for (i, (raw, reach)) in raws.iter().enumerate() {
            let m = store.encode_block_membership(problem.block(i), block_bits(reach, raw.source()));
            g = store.and(g, m);
        }
        if store.is_unsat(g) {
            return Err(EngineError::InfeasibleProblem);
        }
        let v_empty: Vec<BlockVectorSet> = (0..n)
            .map(|i| store.project_block(g, i, problem.block(i)))
            .collect();

        let vars = raws
            .into_iter()
            .zip(&v_empty)
            .map(|((raw, raw_reach), ve)| {
                let mut pruned = raw.clone();
                pruned.prune(|v| ve.contains(v.bits));
                let mdfa = pruned.minimize();
                let reach = compute_reachable_acceptance_values(&mdfa);
                VarModel {
                    raw,
                    raw_reach,
                    mdfa,
                    reach,
                }
            })
            .collect();
        Ok(Model {
            problem,
            vars,
            store,
            g,
            v_empty,
        })
    }

    pub fn problem(&self) -> &Arc<Problem> {
        &self.problem
    }

    pub fn var(&self, i: usize) -> &VarModel {
        &self.vars[i]
    }

    pub fn initial_v_empty(&self, i: usize) -> &BlockVectorSet {
        &self.v_empty[i]
    }

    pub fn stats(&self) -> ModelStats {
        ModelStats {
            vars: self.vars.len(),
            atoms: self.problem.atoms().len(),
            mdfa_states: self.vars.iter().map(|v| v.mdfa.num_states()).collect(),
        }
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, EngineError> {
        self.problem
            .variable_index(name)
            .ok_or_else(|| EngineError::UnknownVariable(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Append,
    Complete,
}

/// One successful mutation, replayable against a fresh session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub op: Op,
    pub variable: String,
    #[serde(default)]
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct State {
    cursors: Vec<StateId>,
    g: DdRef,
    values: Vec<Vec<Symbol>>,
    completed: Vec<bool>,
    v_empty: Vec<BlockVectorSet>,
}

/// Live configuration state over a built [`Model`].
#[derive(Clone)]
pub struct Session {
    model: Arc<Model>,
    store: DdStore,
    state: State,
    history: Vec<State>,
    trace: Vec<TraceEntry>,
}

impl fmt::Debug for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session")
            .field("values", &self.values())
            .field("completed", &self.state.completed)
            .field("cursors", &self.state.cursors)
            .finish()
    }
}

impl Session {
    /// Build followed by a fresh session at the empty assignment.
    pub fn build(problem: Arc<Problem>) -> Result<Session, EngineError> {
        Ok(Session::new(Arc::new(Model::build(problem)?)))
    }

    pub fn new(model: Arc<Model>) -> Session {
        let n = model.vars.len();
        let state = State {
            cursors: model.vars.iter().map(|v| v.mdfa.source()).collect(),
            g: model.g,
            values: vec![Vec::new(); n],
            completed: vec![false; n],
            v_empty: model.v_empty.clone(),
        };
        Session {
            store: model.store.clone(),
            model,
            state,
            history: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn problem(&self) -> &Arc<Problem> {
        &self.model.problem
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, EngineError> {
        self.model.variable_index(name)
    }

    fn name(&self, i: usize) -> &str {
        &self.model.problem.variables()[i]
    }

    pub fn cursor(&self, i: usize) -> StateId {
        self.state.cursors[i]
    }

    pub fn value(&self, i: usize) -> String {
        self.model.problem.alphabet().decode(&self.state.values[i])
    }

    pub fn value_symbols(&self, i: usize) -> &[Symbol] {
        &self.state.values[i]
    }

    pub fn values(&self) -> Vec<String> {
        (0..self.state.values.len()).map(|i| self.value(i)).collect()
    }

    pub fn is_completed(&self, i: usize) -> bool {
        self.state.completed[i]
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn g(&self) -> DdRef {
        self.state.g
    }

    pub fn store(&self) -> &DdStore {
        &self.store
    }

    /// Current `V∅` for variable `i`.
    pub fn v_empty(&self, i: usize) -> &BlockVectorSet {
        &self.state.v_empty[i]
    }

    pub fn undo_depth(&self) -> usize {
        self.history.len()
    }

    /// `𝒢 ∧ y^i ∈ R^i(δ̂(s_i, w))`, or `None` when that is unsatisfiable.
    fn try_step(&mut self, i: usize, word: &[Symbol]) -> Option<(StateId, DdRef)> {
        let var = &self.model.vars[i];
        let next = var.mdfa.run(self.state.cursors[i], word);
        let block = self.model.problem.block(i);
        let m = self.store.encode_block_membership(block, block_bits(&var.reach, next));
        let g = self.store.and(self.state.g, m);
        if self.store.is_unsat(g) {
            None
        } else {
            Some((next, g))
        }
    }

    fn commit(&mut self, i: usize, word: &[Symbol], next: StateId, g: DdRef, entry: TraceEntry) {
        self.history.push(self.state.clone());
        self.trace.push(entry);
        self.state.cursors[i] = next;
        self.state.values[i].extend_from_slice(word);
        if g != self.state.g {
            self.state.g = g;
            let problem = self.model.problem.clone();
            for (j, ve) in self.state.v_empty.iter_mut().enumerate() {
                *ve = self.store.project_block(g, j, problem.block(j));
            }
        }
    }

    /// Appends `text` to variable `i`. On failure nothing changes.
    pub fn append(&mut self, i: usize, text: &str) -> Result<(), EngineError> {
        if self.state.completed[i] {
            return Err(EngineError::VariableCompleted(self.name(i).to_string()));
        }
        let word = self.model.problem.alphabet().encode_letters(text)?;
        if word.is_empty() {
            return Err(EngineError::EmptyAppend);
        }
        let (next, g) = self.try_step(i, &word).ok_or(EngineError::InvalidAppend)?;
        let entry = TraceEntry {
            op: Op::Append,
            variable: self.name(i).to_string(),
            text: text.to_string(),
        };
        self.commit(i, &word, next, g, entry);
        Ok(())
    }

    /// Appends the end-of-line letter and closes the variable.
    pub fn complete(&mut self, i: usize) -> Result<(), EngineError> {
        let eol = self
            .model
            .problem
            .alphabet()
            .eol()
            .ok_or(EngineError::CompletionDisabled)?;
        if self.state.completed[i] {
            return Err(EngineError::VariableCompleted(self.name(i).to_string()));
        }
        let (next, g) = self.try_step(i, &[eol]).ok_or(EngineError::InvalidAppend)?;
        let entry = TraceEntry {
            op: Op::Complete,
            variable: self.name(i).to_string(),
            text: String::new(),
        };
        self.commit(i, &[eol], next, g, entry);
        self.state.completed[i] = true;
        Ok(())
    }

    pub fn apply(&mut self, entry: &TraceEntry) -> Result<(), EngineError> {
        let i = self.variable_index(&entry.variable)?;
        match entry.op {
            Op::Append => self.append(i, &entry.text),
            Op::Complete => self.complete(i),
        }
    }

    pub fn undo(&mut self) -> Result<(), EngineError> {
        let prev = self.history.pop().ok_or(EngineError::NothingToUndo)?;
        self.state = prev;
        self.trace.pop();
        Ok(())
    }

    fn accepting(&self, i: usize) -> impl Fn(AcceptanceValue) -> bool + '_ {
        let ve = &self.state.v_empty[i];
        move |v: AcceptanceValue| !v.dead && ve.contains(v.bits)
    }

    /// The DFA of appendable suffixes over the variable's full MDFA,
    /// sourced at the cursor (not minimized; state ids are MDFA ids).
    pub fn valid_domain_raw(&self, i: usize) -> Dfa {
        let var = &self.model.vars[i];
        var.mdfa.to_dfa(self.state.cursors[i], self.accepting(i))
    }

    /// Minimal DFA of the valid domain of variable `i`.
    pub fn valid_domain(&self, i: usize) -> Dfa {
        self.valid_domain_raw(i).minimize()
    }

    pub fn valid_domain_regex(&self, i: usize) -> String {
        dfa_to_regex(&self.valid_domain(i))
    }

    /// Whether the current value itself is acceptable as is.
    pub fn accepts_empty_suffix(&self, i: usize) -> bool {
        let var = &self.model.vars[i];
        (self.accepting(i))(var.mdfa.accept(self.state.cursors[i]))
    }

    /// Letters whose single-letter append would succeed, in alphabet order.
    pub fn next_letters(&self, i: usize) -> Vec<char> {
        if self.state.completed[i] {
            return Vec::new();
        }
        let d = self.valid_domain_raw(i);
        let co = d.coreachable();
        let alphabet = self.model.problem.alphabet();
        alphabet
            .letter_symbols()
            .filter(|&a| co[d.step(d.source(), a)])
            .map(|a| alphabet.char_of(a).unwrap())
            .collect()
    }

    pub fn can_complete(&self, i: usize) -> bool {
        let Some(eol) = self.model.problem.alphabet().eol() else {
            return false;
        };
        if self.state.completed[i] {
            return false;
        }
        let d = self.valid_domain_raw(i);
        d.coreachable()[d.step(d.source(), eol)]
    }

    /// Up to `k` shortest texts of the valid domain, shortlex by alphabet
    /// order, none longer than `max_len`. A trailing end-of-line letter is
    /// dropped, so `t` and `t$` count as one suggestion.
    pub fn suggestions(&self, i: usize, k: usize, max_len: usize) -> Vec<String> {
        let d = self.valid_domain(i);
        let alphabet = d.alphabet().clone();
        let mut out: Vec<String> = Vec::with_capacity(k);
        for mut w in shortlex_words(&d, k.saturating_mul(2), max_len) {
            if w.last().is_some_and(|&a| alphabet.is_eol(a)) {
                w.pop();
            }
            let text = alphabet.decode(&w);
            if !out.contains(&text) {
                out.push(text);
            }
            if out.len() == k {
                break;
            }
        }
        out
    }

    pub fn view(&self) -> SessionView {
        SessionView(
            (0..self.state.values.len())
                .map(|i| {
                    (
                        self.name(i).to_string(),
                        VariableView {
                            value: self.value(i),
                            completed: self.state.completed[i],
                            can_complete: self.can_complete(i),
                            domain_regex: self.valid_domain_regex(i),
                        },
                    )
                })
                .collect(),
        )
    }

    pub fn domain_view(&self, i: usize, k: usize, max_len: usize) -> DomainView {
        DomainView {
            regex: self.valid_domain_regex(i),
            can_complete: self.can_complete(i),
            next_letters: self.next_letters(i).into_iter().map(String::from).collect(),
            suggestions: if k == 0 {
                Vec::new()
            } else {
                self.suggestions(i, k, max_len)
            },
        }
    }
}

/// Shortlex enumeration: a table of which states can reach acceptance in
/// exactly `l` steps, then a depth-first walk in symbol order per length.
pub fn shortlex_words(d: &Dfa, k: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let n = d.num_states();
    let symbols: Vec<Symbol> = d.alphabet().symbols().collect();
    let mut exact: Vec<Vec<bool>> = vec![d.accepting().to_vec()];
    for l in 1..=max_len {
        let prev = &exact[l - 1];
        let row = (0..n)
            .map(|q| symbols.iter().any(|&a| prev[d.step(q, a)]))
            .collect();
        exact.push(row);
    }
    let mut out = Vec::new();
    let mut word = Vec::new();
    for l in 0..=max_len {
        if out.len() >= k {
            break;
        }
        walk(d, &exact, &symbols, d.source(), l, k, &mut word, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    d: &Dfa,
    exact: &[Vec<bool>],
    symbols: &[Symbol],
    q: StateId,
    remaining: usize,
    k: usize,
    word: &mut Vec<Symbol>,
    out: &mut Vec<Vec<Symbol>>,
) {
    if out.len() >= k || !exact[remaining][q] {
        return;
    }
    if remaining == 0 {
        out.push(word.clone());
        return;
    }
    for &a in symbols {
        word.push(a);
        walk(d, exact, symbols, d.step(q, a), remaining - 1, k, word, out);
        word.pop();
        if out.len() >= k {
            return;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableView {
    pub value: String,
    pub completed: bool,
    pub can_complete: bool,
    pub domain_regex: String,
}

/// Per-variable state in declaration order; serializes as a JSON object
/// keyed by variable name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionView(pub Vec<(String, VariableView)>);

impl SessionView {
    pub fn get(&self, name: &str) -> Option<&VariableView> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl Serialize for SessionView {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (name, v) in &self.0 {
            map.serialize_entry(name, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainView {
    pub regex: String,
    pub can_complete: bool,
    pub next_letters: Vec<String>,
    pub suggestions: Vec<String>,
}

/// Acceptance values reachable from the variable's current state that are
/// still possible in some solution.
pub fn live_reach(session: &Session, i: usize) -> BTreeSet<AcceptanceValue> {
    let var = session.model().var(i);
    var.reach
        .live(session.cursor(i))
        .filter(|v| session.v_empty(i).contains(v.bits))
        .collect()
}
