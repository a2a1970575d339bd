//! Brute-force solution enumeration with bounded value length.

use crate::alphabet::Symbol;
use crate::problem::Problem;

use super::big_dfa::OracleError;

pub const DEFAULT_ENUMERATION_BUDGET: usize = 2_000_000;

/// All words over the effective alphabet of length at most `max_len`, in
/// shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            for a in 0..k as Symbol {
                let mut w = out[i].clone();
                w.push(a);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

/// Every assignment with values of length ≤ `max_len` that satisfies all
/// formulas, each value as a word. Formulas are evaluated from match-DFA
/// membership directly.
pub fn enumerate_solutions(
    p: &Problem,
    max_len: usize,
    budget: usize,
) -> Result<Vec<Vec<Vec<Symbol>>>, OracleError> {
    let n = p.variables().len();
    let words = words_up_to(p.alphabet().len(), max_len);
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(words.len()));
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(OracleError::BudgetExceeded(budget)),
    }
    // truth values of each variable's atoms, per candidate word
    let truth: Vec<Vec<Vec<bool>>> = (0..n)
        .map(|v| {
            words
                .iter()
                .map(|w| p.atoms()[p.block(v)].iter().map(|a| a.dfa.accepts(w)).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    let mut values = vec![false; p.atoms().len()];
    loop {
        for v in 0..n {
            let b = p.block(v);
            values[b.clone()].copy_from_slice(&truth[v][pick[v]]);
        }
        if p.satisfied_by(&values) {
            out.push(pick.iter().map(|&w| words[w].clone()).collect());
        }
        // odometer
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            pick[v] += 1;
            if pick[v] < words.len() {
                break;
            }
            pick[v] = 0;
        }
    }
}

/// Whether some enumerated solution extends `prefix` on every variable.
pub fn has_extension(solutions: &[Vec<Vec<Symbol>>], prefix: &[Vec<Symbol>]) -> bool {
    solutions
        .iter()
        .any(|s| s.iter().zip(prefix).all(|(w, p)| w.starts_with(p)))
}
