#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use regconf::Problem;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Arc<Problem> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    Arc::new(Problem::from_json(&text).expect("fixture valid"))
}

pub fn problem(letters: &str, eol: bool, vars: &[&str], constraints: &[&str]) -> Arc<Problem> {
    let file = regconf::ProblemFile {
        alphabet: letters.chars().map(String::from).collect(),
        eol,
        variables: vars.iter().map(|s| s.to_string()).collect(),
        constraints: constraints.iter().map(|s| s.to_string()).collect(),
    };
    Arc::new(Problem::new(file).expect("valid problem"))
}
