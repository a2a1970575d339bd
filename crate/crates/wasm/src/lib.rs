//! Browser-facing wrapper around a configuration session. The plain Rust
//! [`Configurator`] is what the bindings call; it also runs natively.

use std::sync::Arc;

use serde::Serialize;

use regconf::{Model, Problem, Session};

#[cfg(target_arch = "wasm32")]
mod bindings;

pub const SUGGESTIONS: usize = 5;
pub const MAX_LEN: usize = 24;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FieldState {
    pub name: String,
    pub value: String,
    pub completed: bool,
    pub can_complete: bool,
    pub domain_regex: String,
    pub next_letters: Vec<String>,
    pub suggestions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FormState {
    pub fields: Vec<FieldState>,
    pub undo_depth: usize,
    pub eol: bool,
}

pub struct Configurator {
    model: Arc<Model>,
    session: Session,
}

impl Configurator {
    pub fn new(problem_json: &str) -> Result<Configurator, String> {
        let problem = Problem::from_json(problem_json).map_err(|e| e.to_string())?;
        let model = Arc::new(Model::build(Arc::new(problem)).map_err(|e| e.to_string())?);
        Ok(Configurator {
            session: Session::new(model.clone()),
            model,
        })
    }

    pub fn variables(&self) -> Vec<String> {
        self.model.problem().variables().to_vec()
    }

    fn index(&self, variable: &str) -> Result<usize, String> {
        self.session.variable_index(variable).map_err(|e| e.to_string())
    }

    pub fn append(&mut self, variable: &str, text: &str) -> Result<(), String> {
        let i = self.index(variable)?;
        self.session.append(i, text).map_err(|e| e.to_string())
    }

    pub fn complete(&mut self, variable: &str) -> Result<(), String> {
        let i = self.index(variable)?;
        self.session.complete(i).map_err(|e| e.to_string())
    }

    pub fn undo(&mut self) -> Result<(), String> {
        self.session.undo().map_err(|e| e.to_string())
    }

    /// Replaces one value outright by replaying every value from a fresh
    /// session. On failure the previous state is kept.
    pub fn set_value(&mut self, variable: &str, text: &str) -> Result<(), String> {
        let i = self.index(variable)?;
        let mut values = self.session.values();
        let completed: Vec<bool> = (0..values.len()).map(|j| self.session.is_completed(j)).collect();
        values[i] = text.to_string();
        let mut fresh = Session::new(self.model.clone());
        for (j, v) in values.iter().enumerate() {
            let body = if completed[j] && j != i {
                v.strip_suffix(regconf::EOL_CHAR).unwrap_or(v)
            } else {
                v.as_str()
            };
            if !body.is_empty() {
                fresh.append(j, body).map_err(|e| e.to_string())?;
            }
            if completed[j] && j != i {
                fresh.complete(j).map_err(|e| e.to_string())?;
            }
        }
        self.session = fresh;
        Ok(())
    }

    pub fn reset(&mut self) {
        self.session = Session::new(self.model.clone());
    }

    pub fn state(&self) -> FormState {
        let s = &self.session;
        let fields = self
            .variables()
            .into_iter()
            .enumerate()
            .map(|(i, name)| {
                let d = s.domain_view(i, SUGGESTIONS, MAX_LEN);
                FieldState {
                    name,
                    value: s.value(i),
                    completed: s.is_completed(i),
                    can_complete: d.can_complete,
                    domain_regex: d.regex,
                    next_letters: d.next_letters,
                    suggestions: d.suggestions,
                }
            })
            .collect();
        FormState {
            fields,
            undo_depth: s.undo_depth(),
            eol: self.model.problem().alphabet().eol_enabled(),
        }
    }

    pub fn state_json(&self) -> String {
        serde_json::to_string(&self.state()).expect("serializable state")
    }

    /// Joined automaton of one variable with its reachable value sets.
    pub fn inspect(&self, variable: &str) -> Result<String, String> {
        let i = self.index(variable)?;
        let problem = self.model.problem();
        let var = self.model.var(i);
        let mut out = String::new();
        for (bit, atom) in problem.atoms()[problem.block(i)].iter().enumerate() {
            out.push_str(&format!("bit {bit}: {}\n", atom.regex));
        }
        out.push_str(&format!("cursor {}\n", self.session.cursor(i)));
        out.push_str(&var.mdfa.dump());
        for q in 0..var.mdfa.num_states() {
            let values: Vec<String> = var.reach.get(q).iter().map(|v| v.render(var.mdfa.k())).collect();
            out.push_str(&format!("R({q}) = {{{}}}\n", values.join(",")));
        }
        Ok(out)
    }
}
