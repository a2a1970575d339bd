use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regconf"))
}

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn repl(problem: &str, script: &str) -> Output {
    let mut child = bin()
        .args(["repl", problem])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(script.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(out: &[u8]) -> String {
    String::from_utf8(out.to_vec()).unwrap()
}

#[test]
fn check_fixture_and_random() {
    let out = run(&["check", &fixture("product.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("oracle coordinate combinations    36"));
    assert!(stdout.contains("0 divergences"));

    let out = run(&["check", "--random", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("100 problems"));
}

#[test]
fn check_reports_size_separation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("words.json");
    let problem = r#"{"alphabet":["a","b"],"variables":["x1","x2","x3"],
        "constraints":["match(x1,\"abab\") && match(x2,\"abab\") && match(x3,\"abab\")"]}"#;
    std::fs::write(&path, problem).unwrap();
    let out = run(&["check", path.to_str().unwrap(), "--traces", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("oracle reachable live states      125"), "{stdout}");
    assert!(stdout.contains("engine states (pruned, total)     18"), "{stdout}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["check", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["repl", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn repl_transcript() {
    let script = "append x1 a\ndomain x2\nappend x2 abc\nstate\nsuggest x2 2\nundo\nstate\nquit\nappend x1 a\n";
    let out = repl(&fixture("worked.json"), script);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("  regex: abd*\n"), "{stdout}");
    assert!(stdout.contains("invalid append\n"));
    // the rejected append left the state as it was
    assert!(stdout.contains("  x1 = \"a\"\n  x2 = \"\"\n"));
    assert!(stdout.contains("  \"ab\"\n  \"abd\"\n"));
    assert!(stdout.ends_with("  x1 = \"\"\n  x2 = \"\"\n"));
    // same script, same bytes
    assert_eq!(repl(&fixture("worked.json"), script).stdout, out.stdout);
}

#[test]
fn repl_completion() {
    let out = repl(&fixture("eol.json"), "append x ab\ncomplete x\nappend x a\nstate\n");
    let stdout = text(&out.stdout);
    assert!(stdout.contains("variable \"x\" is completed"), "{stdout}");
    assert!(stdout.contains("  x = \"ab$\" (completed)"));
}

#[test]
fn inspect_dumps() {
    let out = run(&["inspect", &fixture("worked.json"), "--var", "x2"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    let values: Vec<&str> = stdout
        .lines()
        .skip_while(|l| !l.starts_with("states"))
        .skip(1)
        .take_while(|l| !l.starts_with("reachable"))
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(values, ["(F,F)", "(F,F)", "(F,F)", "(F,T)", "(T,F)", "(F,T)"]);

    let out = run(&["inspect", &fixture("worked.json"), "--var", "x1"]);
    let stdout = text(&out.stdout);
    assert!(stdout.contains("(1 atoms)"));
    assert!(stdout.contains("\t(T)\t"));

    assert_eq!(run(&["inspect", &fixture("worked.json"), "--var", "zz"]).status.code(), Some(2));
}

struct Server(Child, String);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn start_server(extra: &[&str]) -> Server {
    let mut child = bin()
        .args(["serve", "--port", "0"])
        .args(extra)
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let addr = loop {
        let mut line = String::new();
        assert!(stderr.read_line(&mut line).unwrap() > 0, "server exited early");
        if let Some(a) = line.trim().strip_prefix("listening on http://") {
            break a.to_string();
        }
    };
    Server(child, addr)
}

fn http(addr: &str, method: &str, path: &str, body: &str) -> String {
    let mut stream = TcpStream::connect(addr).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    response
}

#[test]
fn serve_answers_health_and_stops_on_interrupt() {
    let mut server = start_server(&[]);
    let response = http(&server.1, "GET", "/v1/health", "");
    assert!(response.starts_with("HTTP/1.1 200"));
    assert!(response.ends_with("{\"ok\":true}"));

    let pid = server.0.id().to_string();
    assert!(Command::new("kill").args(["-INT", &pid]).status().unwrap().success());
    assert!(server.0.wait().unwrap().success());
}

#[test]
fn serve_refuses_occupied_port() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let out = run(&["serve", "--port", &port]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("cannot bind"));
}

#[test]
fn serve_restores_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let problem: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("worked.json")).unwrap()).unwrap();
    let snapshot = serde_json::json!({
        "problem_id": "p1",
        "problem": problem,
        "trace": [{"op": "append", "variable": "x1", "text": "a"},
                  {"op": "append", "variable": "x2", "text": "ab"}],
    });
    std::fs::write(dir.path().join("s1.json"), snapshot.to_string()).unwrap();
    let server = start_server(&["--snapshot-dir", dir.path().to_str().unwrap()]);
    let response = http(&server.1, "GET", "/v1/sessions/s1/domain/x2?suggest=2", "");
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("\"regex\":\"d*\""));
    let response = http(&server.1, "POST", "/v1/sessions/s1/append", r#"{"variable":"x2","text":"d"}"#);
    assert!(response.starts_with("HTTP/1.1 200"));
    let saved = std::fs::read_to_string(dir.path().join("s1.json")).unwrap();
    assert!(saved.contains("\"text\": \"d\""));
}
