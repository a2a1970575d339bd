use regconf_wasm::Configurator;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn intro_form_flow() {
    let mut c = Configurator::new(&fixture("intro.json")).unwrap();
    assert_eq!(c.variables(), ["phone", "country", "zip", "district"]);
    c.append("phone", "+45").unwrap();
    let s = c.state();
    assert_eq!(s.fields[1].next_letters, ["D"]);
    assert_eq!(s.fields[1].suggestions, ["Denmark"]);
    assert!(s.eol);

    c.append("district", "Copenhagen S").unwrap();
    c.complete("district").unwrap();
    let s = c.state();
    assert_eq!(s.fields[2].suggestions, ["2300"]);
    assert!(s.fields[3].completed);
    assert_eq!(s.undo_depth, 3);

    assert_eq!(c.append("phone", "x").unwrap_err(), "letter 'x' is not in the alphabet");
    assert_eq!(c.append("country", "S").unwrap_err(), "invalid append");
    c.undo().unwrap();
    assert!(!c.state().fields[3].completed);
}

#[test]
fn set_value_replays() {
    let mut c = Configurator::new(&fixture("intro.json")).unwrap();
    c.append("phone", "+45").unwrap();
    c.append("district", "Copenhagen S").unwrap();
    c.complete("district").unwrap();
    c.set_value("phone", "+4").unwrap();
    let s = c.state();
    assert_eq!(s.fields[0].value, "+4");
    assert_eq!(s.fields[3].value, "Copenhagen S$");
    assert!(s.fields[3].completed);
    // still Denmark: district forces it
    assert_eq!(s.fields[1].suggestions, ["Denmark"]);

    let before = c.state();
    assert_eq!(c.set_value("phone", "+46").unwrap_err(), "invalid append");
    assert_eq!(c.state(), before);
    c.reset();
    assert_eq!(c.state().undo_depth, 0);
}

#[test]
fn errors_and_inspect() {
    assert_eq!(
        Configurator::new(r#"{"alphabet":["a"],"variables":["x"],"constraints":["match(x,\"a\")","!match(x,\"a\")"]}"#)
            .err()
            .unwrap(),
        "No feasible solutions"
    );
    assert!(Configurator::new("{").is_err());
    let c = Configurator::new(&fixture("worked.json")).unwrap();
    let dump = c.inspect("x2").unwrap();
    assert!(dump.starts_with("bit 0: abc\nbit 1: abd*\ncursor 0\n"));
    assert!(c.inspect("zz").is_err());
    let json: serde_json::Value = serde_json::from_str(&c.state_json()).unwrap();
    assert_eq!(json["fields"][1]["domain_regex"], "abd*");
}
