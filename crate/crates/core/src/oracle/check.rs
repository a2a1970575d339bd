//! Differential check of the engine against the product automaton.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::engine::{EngineError, Model, Op, Session, TraceEntry};
use crate::problem::Problem;
use crate::regex::Dfa;

use super::big_dfa::{BigDfa, OracleError};
use super::random::{random_problem, random_trace, RandomParams};

/// One disagreement between engine and oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub problem_hash: String,
    /// Index of the action just replayed; `None` right after build.
    pub action_index: Option<usize>,
    pub variable: String,
    /// Shortest distinguishing suffix, or the appended text.
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub problem_hash: String,
    pub actions: usize,
    pub rejected: usize,
    pub domains_compared: usize,
    pub divergences: Vec<Divergence>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.divergences.is_empty()
    }

    /// Divergences as JSON lines.
    pub fn to_json_lines(&self) -> String {
        self.divergences
            .iter()
            .map(|d| serde_json::to_string(d).expect("serializable") + "\n")
            .collect()
    }
}

fn verdict(member: bool) -> String {
    if member { "member" } else { "non-member" }.to_string()
}

fn outcome(ok: bool) -> String {
    if ok { "accepted" } else { "invalid append" }.to_string()
}

fn compare_domains(
    session: &Session,
    oracle: &BigDfa,
    q: usize,
    action_index: Option<usize>,
    report: &mut Report,
) {
    let problem = session.problem();
    for (i, name) in problem.variables().iter().enumerate() {
        let expected: Dfa = oracle.valid_domain_from(q, i);
        let actual = session.valid_domain(i);
        report.domains_compared += 1;
        if let Some(w) = actual.distinguishing_word(&expected).expect("same alphabet") {
            report.divergences.push(Divergence {
                problem_hash: problem.hash().to_string(),
                action_index,
                variable: name.clone(),
                witness: problem.alphabet().decode(&w),
                expected: verdict(expected.accepts(&w)),
                actual: verdict(actual.accepts(&w)),
            });
        }
    }
}

/// Replays `trace` on the engine and on the product automaton, comparing
/// every valid domain after build and after each action, and comparing
/// whether each action is accepted.
pub fn check_equivalence(problem: Arc<Problem>, trace: &[TraceEntry]) -> Result<Report, OracleError> {
    let oracle = BigDfa::build(problem.clone())?;
    let mut report = Report {
        problem_hash: problem.hash().to_string(),
        ..Report::default()
    };
    let mut session = match Model::build(problem.clone()) {
        Ok(m) => Session::new(Arc::new(m)),
        Err(e) => {
            if oracle.is_coreachable(oracle.source()) {
                report.divergences.push(Divergence {
                    problem_hash: problem.hash().to_string(),
                    action_index: None,
                    variable: String::new(),
                    witness: String::new(),
                    expected: "feasible".into(),
                    actual: e.to_string(),
                });
            }
            return Ok(report);
        }
    };
    if !oracle.is_coreachable(oracle.source()) {
        report.divergences.push(Divergence {
            problem_hash: problem.hash().to_string(),
            action_index: None,
            variable: String::new(),
            witness: String::new(),
            expected: EngineError::InfeasibleProblem.to_string(),
            actual: "feasible".into(),
        });
        return Ok(report);
    }

    let alphabet = problem.alphabet().clone();
    let mut q = oracle.source();
    let mut completed = vec![false; problem.variables().len()];
    compare_domains(&session, &oracle, q, None, &mut report);
    for (index, entry) in trace.iter().enumerate() {
        report.actions += 1;
        let Some(i) = problem.variable_index(&entry.variable) else {
            continue;
        };
        let word = match entry.op {
            Op::Append => match alphabet.encode_letters(&entry.text) {
                Ok(w) if !w.is_empty() => w,
                _ => {
                    // rejected on input grounds by both sides alike
                    assert!(session.apply(entry).is_err());
                    report.rejected += 1;
                    continue;
                }
            },
            Op::Complete => match alphabet.eol() {
                Some(e) => vec![e],
                None => {
                    assert!(session.apply(entry).is_err());
                    report.rejected += 1;
                    continue;
                }
            },
        };
        if completed[i] {
            assert!(matches!(session.apply(entry), Err(EngineError::VariableCompleted(_))));
            report.rejected += 1;
            continue;
        }
        let next = oracle.run(q, i, &word);
        let expected = oracle.is_coreachable(next);
        let result = session.apply(entry);
        let actual = result.is_ok();
        if let Err(e) = &result {
            assert_eq!(e, &EngineError::InvalidAppend, "unexpected engine error");
        }
        if expected != actual {
            report.divergences.push(Divergence {
                problem_hash: problem.hash().to_string(),
                action_index: Some(index),
                variable: entry.variable.clone(),
                witness: alphabet.decode(&word),
                expected: outcome(expected),
                actual: outcome(actual),
            });
            // the two sides no longer describe the same assignment
            return Ok(report);
        }
        if !actual {
            report.rejected += 1;
            continue;
        }
        q = next;
        if entry.op == Op::Complete {
            completed[i] = true;
        }
        compare_domains(&session, &oracle, q, Some(index), &mut report);
    }
    Ok(report)
}

/// A feasible random problem and trace drawn from `seed`.
pub fn random_case(seed: u64, params: &RandomParams) -> (Arc<Problem>, Vec<TraceEntry>) {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let file = random_problem(&mut rng, params);
        let trace = random_trace(&mut rng, &file, params.max_trace);
        let problem = Arc::new(Problem::new(file).expect("generated problems are well formed"));
        if Model::build(problem.clone()).is_ok() {
            return (problem, trace);
        }
    }
}

/// Runs `count` random cases starting at `seed`.
pub fn check_random(count: usize, seed: u64, params: &RandomParams) -> Result<Vec<Report>, OracleError> {
    (0..count as u64)
        .map(|c| {
            let (p, t) = random_case(seed.wrapping_mul(1_000_003).wrapping_add(c), params);
            check_equivalence(p, &t)
        })
        .collect()
}
