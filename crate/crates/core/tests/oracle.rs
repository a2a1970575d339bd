mod common;

use std::sync::Arc;

use common::{fixture, problem};
use regconf::oracle::random::RandomParams;
use regconf::oracle::{
    big_dfa_valid_domain, check_equivalence, check_random, enumerate_solutions, has_extension,
    BigDfa, BigDfaOptions, DEFAULT_ENUMERATION_BUDGET,
};
use regconf::{compile_regex, Op, Session, TraceEntry};

fn append(variable: &str, text: &str) -> TraceEntry {
    TraceEntry {
        op: Op::Append,
        variable: variable.into(),
        text: text.into(),
    }
}

#[test]
fn product_counts() {
    let p = fixture("product.json");
    let big = BigDfa::build(p.clone()).unwrap();
    assert_eq!(big.total_combinations(), 36);
    assert_eq!(big.live_count(), 9);
    assert_eq!(big.accepting_live_count(), 1);
    assert_eq!(big.reachable_count(), 24);
    assert_eq!(big.variable_live_count(), 15);

    let worked = BigDfa::build_with(
        fixture("worked.json"),
        BigDfaOptions {
            keep_dead: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(worked.reachable_count(), 18);
    assert_eq!(worked.num_states(), 18);
}

#[test]
fn product_domain_of_second_variable() {
    let p = fixture("product.json");
    let big = BigDfa::build(p.clone()).unwrap();
    let d = big_dfa_valid_domain(&big, &["ab", "ab"], 1).unwrap();
    let expected = compile_regex("d*", p.alphabet()).unwrap();
    assert!(d.equivalent(&expected).unwrap());

    let d = big_dfa_valid_domain(&big, &["", ""], 1).unwrap();
    let expected = compile_regex("abd*", p.alphabet()).unwrap();
    assert!(d.equivalent(&expected).unwrap());
}

#[test]
fn single_solution_product_size() {
    // one fixed word per variable: every prefix tuple is reachable
    let p = problem("ab", false, &["x", "y"], &["match(x,\"ab\") && match(y,\"b\")"]);
    let big = BigDfa::build_with(
        p,
        BigDfaOptions {
            keep_dead: true,
            ..Default::default()
        },
    )
    .unwrap();
    // (2+1) prefixes of x plus sink, (1+1) prefixes of y plus sink
    assert_eq!(big.reachable_count(), 4 * 3);
    assert_eq!(big.live_count(), 3 * 2);
    assert_eq!(big.accepting_live_count(), 1);
}

#[test]
fn atom_order_does_not_change_the_language() {
    let a = problem("abc", false, &["x", "y"], &["match(x,\"a*\") || match(y,\"bc\")", "match(y,\"b.*\")"]);
    let b = problem("abc", false, &["y", "x"], &["match(y,\"b.*\")", "match(y,\"bc\") || match(x,\"a*\")"]);
    let ba = BigDfa::build(a.clone()).unwrap();
    let bb = BigDfa::build(b.clone()).unwrap();
    assert_eq!(ba.num_states(), bb.num_states());
    for (xa, xb) in [(0, 1), (1, 0)] {
        let da = ba.valid_domain_from(ba.source(), xa);
        let db = bb.valid_domain_from(bb.source(), xb);
        assert!(da.equivalent(&db).unwrap());
    }
}

#[test]
fn enumeration_agrees_with_acceptance() {
    let p = fixture("worked.json");
    let solutions = enumerate_solutions(&p, 4, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let text: Vec<Vec<String>> = solutions
        .iter()
        .map(|s| s.iter().map(|w| p.alphabet().decode(w)).collect())
        .collect();
    assert!(text.contains(&vec!["a".to_string(), "ab".to_string()]));
    assert!(text.contains(&vec!["a".to_string(), "abdd".to_string()]));
    assert!(!text.iter().any(|s| s[1] == "abc"));
    assert!(text.iter().all(|s| s[0] == "a"));

    let big = BigDfa::build(p.clone()).unwrap();
    for s in &solutions {
        assert!(big.is_accepting(big.state_of(s)));
    }
    let words = regconf::oracle::words_up_to(p.alphabet().len(), 3);
    for x in &words {
        for y in &words {
            let values = vec![x.clone(), y.clone()];
            let q = big.state_of(&values);
            assert_eq!(big.is_accepting(q), solutions.contains(&values));
            // with short values, coreachability is visible within the bound
            if has_extension(&solutions, &values) {
                assert!(big.is_coreachable(q));
            }
        }
    }
}

#[test]
fn enumeration_respects_budget() {
    let p = fixture("product.json");
    assert!(enumerate_solutions(&p, 12, 1000).is_err());
}

#[test]
fn engine_matches_oracle_on_examples() {
    let cases: Vec<(&str, Vec<TraceEntry>)> = vec![
        ("worked.json", vec![append("x1", "a"), append("x2", "ab"), append("x2", "c"), append("x2", "dd")]),
        ("product.json", vec![append("x2", "ab"), append("x1", "ab"), append("x2", "c"), append("x2", "d")]),
        (
            "eol.json",
            vec![
                append("x", "a"),
                TraceEntry {
                    op: Op::Complete,
                    variable: "x".into(),
                    text: String::new(),
                },
                append("x", "b"),
                TraceEntry {
                    op: Op::Complete,
                    variable: "x".into(),
                    text: String::new(),
                },
            ],
        ),
    ];
    for (name, trace) in cases {
        let report = check_equivalence(fixture(name), &trace).unwrap();
        assert!(report.is_clean(), "{name}: {}", report.to_json_lines());
        assert!(report.domains_compared > 0);
    }
}

#[test]
fn engine_matches_oracle_on_intro_form() {
    let p = fixture("intro.json");
    let trace = vec![append("phone", "+45"), append("district", "Copenhagen S")];
    let report = check_equivalence(p, &trace).unwrap();
    assert!(report.is_clean(), "{}", report.to_json_lines());
}

#[test]
fn random_differential() {
    let reports = check_random(150, 7, &RandomParams::default()).unwrap();
    let mut actions = 0;
    for r in &reports {
        assert!(r.is_clean(), "{}", r.to_json_lines());
        actions += r.actions;
    }
    assert!(actions > 100);
}

#[test]
fn random_differential_wider() {
    let params = RandomParams {
        max_vars: 3,
        max_letters: 4,
        max_atoms: 6,
        max_depth: 4,
        max_trace: 8,
        eol_chance: 0.5,
    };
    for r in check_random(60, 99, &params).unwrap() {
        assert!(r.is_clean(), "{}", r.to_json_lines());
    }
}

#[test]
fn session_and_oracle_agree_on_rejections() {
    let p = fixture("worked.json");
    let mut s = Session::build(Arc::clone(&p)).unwrap();
    let big = BigDfa::build(p).unwrap();
    assert!(s.append(0, "b").is_err());
    assert!(!big.is_coreachable(big.state_of_str(&["b", ""]).unwrap()));
    s.append(0, "a").unwrap();
    assert!(big.is_coreachable(big.state_of_str(&["a", ""]).unwrap()));
}

#[test]
fn interleaved_words_agree_with_solutions() {
    let p = problem(
        "ab",
        false,
        &["x", "y"],
        &["match(x,\"a*b\") || match(y,\"ba\")", "!match(x,\"b\") || match(y,\"(ab)*\")"],
    );
    let big = BigDfa::build(p.clone()).unwrap();
    let solutions = enumerate_solutions(&p, 6, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let k = p.alphabet().len();
    // every word over (variable, letter) pairs of length ≤ 6
    for word in regconf::oracle::words_up_to(2 * k, 6) {
        let mut values = vec![Vec::new(), Vec::new()];
        let mut q = big.source();
        for &l in &word {
            let (v, a) = (l as usize / k, (l as usize % k) as regconf::Symbol);
            values[v].push(a);
            q = big.step(q, v, a);
        }
        // any interleaving with the same per-variable words lands here
        assert_eq!(q, big.state_of(&values));
        let mut reversed = values.clone();
        reversed.reverse();
        let q2 = reversed
            .iter()
            .enumerate()
            .fold(big.source(), |q, (r, w)| big.run(q, 1 - r, w));
        assert_eq!(q, q2);
        assert_eq!(big.is_accepting(q), solutions.contains(&values));
    }
}
