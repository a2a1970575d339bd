//! Multi-DFAs: one automaton simulating several match-DFAs on the same
//! string, with a bit-vector acceptance value per state.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, AlphabetError, Symbol};
use crate::partition;
use crate::regex::{Dfa, RegexError, StateId};

/// Largest supported number of match-DFAs joined into one MDFA.
pub const MAX_ACCEPTANCE_SIZE: usize = 64;

/// Acceptance value of an MDFA state: bit `j` is set iff match-DFA `j`
/// accepts. `dead` marks a value pruned as unable to take part in any
/// solution; it is distinct from every bit pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AcceptanceValue {
    pub dead: bool,
    pub bits: u64,
}

impl AcceptanceValue {
    pub const fn live(bits: u64) -> Self {
        Self { dead: false, bits }
    }

    pub const DEAD: AcceptanceValue = AcceptanceValue {
        dead: true,
        bits: 0,
    };

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            if b {
                v |= 1 << j;
            }
        }
        Self::live(v)
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits >> j & 1 == 1
    }

    /// Renders as `(T,F,…)` for width `k`, or `DEAD`.
    pub fn render(&self, k: usize) -> String {
        if self.dead {
            return "DEAD".to_string();
        }
        let parts: Vec<&str> = (0..k)
            .map(|j| if self.bit(j) { "T" } else { "F" })
            .collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Clone)]
pub struct Mdfa {
    alphabet: Arc<Alphabet>,
    k: usize,
    delta: Vec<StateId>,
    source: StateId,
    accept: Vec<AcceptanceValue>,
}

impl Mdfa {
    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        k: usize,
        delta: Vec<StateId>,
        source: StateId,
        accept: Vec<AcceptanceValue>,
    ) -> Self {
        let n = accept.len();
        assert!(n > 0 && k <= MAX_ACCEPTANCE_SIZE);
        assert_eq!(delta.len(), n * alphabet.len(), "transition table is not total");
        assert!(source < n && delta.iter().all(|&t| t < n), "dangling state id");
        Self {
            alphabet,
            k,
            delta,
            source,
            accept,
        }
    }

    /// The one-state MDFA of acceptance size 0, for a variable with no atoms.
    pub fn trivial(alphabet: Arc<Alphabet>) -> Self {
        let n = alphabet.len();
        Self::from_parts(alphabet, 0, vec![0; n], 0, vec![AcceptanceValue::live(0)])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Acceptance size: number of simulated match-DFAs.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn accept(&self, q: StateId) -> AcceptanceValue {
        self.accept[q]
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

    /// `δ̂(q, w)` on text.
    pub fn step_str(&self, q: StateId, w: &str) -> Result<StateId, AlphabetError> {
        Ok(self.run(q, &self.alphabet.encode(w)?))
    }

    /// Acceptance value of a word read from the source.
    pub fn value_of(&self, word: &[Symbol]) -> AcceptanceValue {
        self.accept[self.run(self.source, word)]
    }

    /// Marks the acceptance value of every state failing `keep` as dead.
    pub fn prune(&mut self, mut keep: impl FnMut(AcceptanceValue) -> bool) {
        for v in self.accept.iter_mut() {
            if !v.dead && !keep(*v) {
                *v = AcceptanceValue::DEAD;
            }
        }
    }

    /// Minimized MDFA and the old-to-new state map (`None` if unreachable).
    pub fn minimize_with_map(&self) -> (Mdfa, Vec<Option<StateId>>) {
        let q = partition::minimize(
            self.num_states(),
            self.alphabet.len(),
            &self.delta,
            self.source,
            &self.accept,
        );
        let accept = q.representative.iter().map(|&r| self.accept[r]).collect();
        (
            Mdfa {
                alphabet: self.alphabet.clone(),
                k: self.k,
                delta: q.delta,
                source: 0,
                accept,
            },
            q.map,
        )
    }

    pub fn minimize(&self) -> Mdfa {
        self.minimize_with_map().0
    }

    /// Reads the MDFA as a DFA accepting the states whose value satisfies
    /// `accepting`, starting from `source`.
    pub fn to_dfa(&self, source: StateId, accepting: impl Fn(AcceptanceValue) -> bool) -> Dfa {
        Dfa::from_parts(
            self.alphabet.clone(),
            self.delta.clone(),
            source,
            self.accept.iter().map(|&v| accepting(v)).collect(),
        )
    }

    /// One line per state: `id<TAB>value<TAB>letter→id …`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for q in 0..self.num_states() {
            let trans: Vec<String> = self
                .alphabet
                .symbols()
                .map(|a| format!("{}→{}", self.alphabet.char_of(a).unwrap(), self.step(q, a)))
                .collect();
            out.push_str(&format!(
                "{q}\t{}\t{}\n",
                self.accept[q].render(self.k),
                trans.join(" ")
            ));
        }
        out
    }
}

impl fmt::Debug for Mdfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mdfa(k={}, source={})\n{}", self.k, self.source, self.dump())
    }
}

/// Joins match-DFAs on the same variable into one MDFA. Each position
/// `(q₁,…,q_k)` of the inputs creates at most one state; ids follow
/// discovery order from the joint source.
pub fn construct_mdfa(dfas: &[Dfa]) -> Result<Mdfa, RegexError> {
    let first = dfas.first().expect("at least one DFA");
    if dfas.len() > MAX_ACCEPTANCE_SIZE {
        panic!("at most {MAX_ACCEPTANCE_SIZE} DFAs can be joined");
    }
    let alphabet = first.alphabet().clone();
    for d in &dfas[1..] {
        if !Arc::ptr_eq(d.alphabet(), &alphabet) && **d.alphabet() != *alphabet {
            return Err(RegexError::AlphabetMismatch);
        }
    }
    let k = alphabet.len();
    let mut memo: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let start: Vec<StateId> = dfas.iter().map(Dfa::source).collect();
    memo.insert(start.clone(), 0);
    let mut positions = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < positions.len() {
        for a in 0..k as Symbol {
            let next: Vec<StateId> = positions[i]
                .iter()
                .zip(dfas)
                .map(|(&q, d)| d.step(q, a))
                .collect();
            let id = match memo.get(&next) {
                Some(&id) => id,
                None => {
                    let id = positions.len();
                    memo.insert(next.clone(), id);
                    positions.push(next);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accept = positions
        .iter()
        .map(|pos| {
            let bits: Vec<bool> = pos.iter().zip(dfas).map(|(&q, d)| d.is_accepting(q)).collect();
            AcceptanceValue::from_bools(&bits)
        })
        .collect();
    Ok(Mdfa::from_parts(alphabet, dfas.len(), delta, 0, accept))
}

pub fn minimize_mdfa(m: &Mdfa) -> Mdfa {
    m.minimize()
}

pub fn mdfa_step(m: &Mdfa, q: StateId, w: &str) -> Result<StateId, AlphabetError> {
    m.step_str(q, w)
}
