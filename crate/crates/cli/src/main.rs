use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use regconf::oracle::random::{random_trace, RandomParams};
use regconf::oracle::{check_equivalence, check_random, BigDfa, BigDfaOptions, Report};
use regconf::{EngineError, Model, Problem, Session};
use regconf_service::Store;

const EXIT_DIVERGENCE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "regconf", version, about = "Interactive configuration of regex-constrained string variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the engine with the product-automaton oracle.
    Check {
        /// Problem file; omit with --random.
        problem: Option<PathBuf>,
        /// Check this many random problems instead of a file.
        #[arg(long, conflicts_with = "problem")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random action traces replayed per problem file.
        #[arg(long, default_value_t = 20)]
        traces: usize,
        /// Longest random trace.
        #[arg(long, default_value_t = 6)]
        trace_len: usize,
        /// Keep non-coreachable product states in the size table.
        #[arg(long)]
        keep_dead: bool,
    },
    /// Interactive session on stdin.
    Repl { problem: PathBuf },
    /// Dump match-DFA joins, reachable value sets and acceptance tables.
    Inspect {
        problem: PathBuf,
        #[arg(long = "var")]
        variable: Option<String>,
        /// Show the pruned and minimized automaton used by sessions.
        #[arg(long)]
        pruned: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        addr: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn load(path: &Path) -> Result<Arc<Problem>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Problem::from_json(&text)
        .map(Arc::new)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            problem,
            random,
            seed,
            traces,
            trace_len,
            keep_dead,
        } => match (problem, random) {
            (Some(path), None) => check_file(&path, seed, traces, trace_len, keep_dead),
            (None, Some(n)) => check_many(n, seed),
            _ => fail("give a problem file or --random N"),
        },
        Command::Repl { problem } => match load(&problem) {
            Ok(p) => repl(p),
            Err(e) => fail(e),
        },
        Command::Inspect {
            problem,
            variable,
            pruned,
        } => match load(&problem) {
            Ok(p) => inspect(p, variable.as_deref(), pruned),
            Err(e) => fail(e),
        },
        Command::Serve {
            addr,
            port,
            snapshot_dir,
        } => serve(&addr, port, snapshot_dir),
    }
}

fn print_divergences(reports: &[Report]) -> usize {
    let mut count = 0;
    for r in reports {
        print!("{}", r.to_json_lines());
        count += r.divergences.len();
    }
    count
}

fn check_file(path: &Path, seed: u64, traces: usize, trace_len: usize, keep_dead: bool) -> ExitCode {
    let problem = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let model = match Model::build(problem.clone()) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let big = match BigDfa::build_with(
        problem.clone(),
        BigDfaOptions {
            keep_dead,
            ..BigDfaOptions::default()
        },
    ) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };

    println!("{:<16} {:>6} {:>10} {:>10}", "variable", "atoms", "mdfa", "pruned");
    let mut engine_total = 0;
    for (i, name) in problem.variables().iter().enumerate() {
        let var = model.var(i);
        engine_total += var.mdfa.num_states();
        println!(
            "{:<16} {:>6} {:>10} {:>10}",
            name,
            problem.block(i).len(),
            var.raw.num_states(),
            var.mdfa.num_states()
        );
    }
    println!("engine states (pruned, total)     {engine_total}");
    println!("oracle coordinate combinations    {}", big.total_combinations());
    println!("oracle reachable states           {}", big.reachable_count());
    println!("oracle reachable live states      {}", big.live_count());
    println!("oracle accepting live states      {}", big.accepting_live_count());

    let mut rng = StdRng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let mut all = vec![Vec::new()];
    all.extend((0..traces).map(|_| random_trace(&mut rng, problem.file(), trace_len)));
    for trace in &all {
        match check_equivalence(problem.clone(), trace) {
            Ok(r) => reports.push(r),
            Err(e) => return fail(e),
        }
    }
    let actions: usize = reports.iter().map(|r| r.actions).sum();
    let domains: usize = reports.iter().map(|r| r.domains_compared).sum();
    let divergences = print_divergences(&reports);
    println!(
        "{} traces, {actions} actions, {domains} domains compared, {divergences} divergences",
        all.len()
    );
    if divergences == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DIVERGENCE)
    }
}

fn check_many(n: usize, seed: u64) -> ExitCode {
    let reports = match check_random(n, seed, &RandomParams::default()) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let actions: usize = reports.iter().map(|r| r.actions).sum();
    let domains: usize = reports.iter().map(|r| r.domains_compared).sum();
    let divergences = print_divergences(&reports);
    println!("{n} problems, {actions} actions, {domains} domains compared, {divergences} divergences");
    if divergences == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DIVERGENCE)
    }
}

fn print_domains(out: &mut impl Write, s: &Session) -> std::io::Result<()> {
    for (i, name) in s.problem().variables().iter().enumerate() {
        writeln!(out, "  {name}: {}", s.valid_domain_regex(i))?;
    }
    Ok(())
}

fn repl(problem: Arc<Problem>) -> ExitCode {
    let mut session = match Session::build(problem) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            let _ = write!(out, "> ");
            let _ = out.flush();
        }
        let Some(Ok(line)) = lines.next() else {
            return ExitCode::SUCCESS;
        };
        match run_command(&mut out, &mut session, &line) {
            Ok(true) => {}
            Ok(false) => return ExitCode::SUCCESS,
            Err(e) => return fail(e),
        }
    }
}

/// One REPL line; returns `false` on quit.
fn run_command(out: &mut impl Write, s: &mut Session, line: &str) -> std::io::Result<bool> {
    let line = line.trim_start();
    let (cmd, rest) = line.split_once(' ').unwrap_or((line, ""));
    let (var, arg) = rest.split_once(' ').unwrap_or((rest, ""));
    let index = |s: &Session| s.variable_index(var);
    let result: Result<(), EngineError> = match cmd {
        "" | "#" => Ok(()),
        "quit" | "exit" => return Ok(false),
        "append" => index(s).and_then(|i| s.append(i, arg)).map(|()| {
            let _ = print_domains(out, s);
        }),
        "complete" => index(s).and_then(|i| s.complete(i)).map(|()| {
            let _ = print_domains(out, s);
        }),
        "undo" => s.undo().map(|()| {
            let _ = print_domains(out, s);
        }),
        "domain" => index(s).map(|i| {
            let _ = writeln!(out, "  regex: {}", s.valid_domain_regex(i));
            let letters: String = s.next_letters(i).into_iter().collect();
            let _ = writeln!(out, "  next letters: {letters}");
            let _ = writeln!(out, "  can complete: {}", s.can_complete(i));
        }),
        "suggest" => index(s).map(|i| {
            let k = arg.trim().parse().unwrap_or(5);
            for w in s.suggestions(i, k, 32) {
                let _ = writeln!(out, "  {}", serde_json::to_string(&w).unwrap());
            }
        }),
        "state" => {
            for (i, name) in s.problem().variables().iter().enumerate() {
                let mark = if s.is_completed(i) { " (completed)" } else { "" };
                writeln!(out, "  {name} = {}{mark}", serde_json::to_string(&s.value(i)).unwrap())?;
            }
            Ok(())
        }
        "help" => {
            writeln!(
                out,
                "  append <var> <text> | complete <var> | domain <var> | suggest <var> <k> | undo | state | quit"
            )?;
            Ok(())
        }
        other => {
            writeln!(out, "  unknown command {other:?}; try help")?;
            Ok(())
        }
    };
    if let Err(e) = result {
        writeln!(out, "{e}")?;
    }
    Ok(true)
}

fn inspect(problem: Arc<Problem>, variable: Option<&str>, pruned: bool) -> ExitCode {
    let model = match Model::build(problem.clone()) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let selected: Vec<usize> = match variable {
        Some(name) => match problem.variable_index(name) {
            Some(i) => vec![i],
            None => return fail(format!("unknown variable {name:?}")),
        },
        None => (0..problem.variables().len()).collect(),
    };
    for i in selected {
        let var = model.var(i);
        let (m, reach) = if pruned {
            (&var.mdfa, &var.reach)
        } else {
            (&var.raw, &var.raw_reach)
        };
        let block = problem.block(i);
        println!("variable {} ({} atoms)", problem.variables()[i], block.len());
        for (bit, atom) in problem.atoms()[block].iter().enumerate() {
            println!("  bit {bit}: {}", atom.regex);
        }
        println!("states (source {})", m.source());
        print!("{}", m.dump());
        println!("reachable values");
        for q in 0..m.num_states() {
            let values: Vec<String> = reach.get(q).iter().map(|v| v.render(m.k())).collect();
            println!("{q}\t{{{}}}", values.join(","));
        }
        let ve: Vec<String> = model
            .initial_v_empty(i)
            .vectors
            .iter()
            .map(|&b| regconf::AcceptanceValue::live(b).render(m.k()))
            .collect();
        println!("satisfiable values at start {{{}}}", ve.join(","));
        println!();
    }
    ExitCode::SUCCESS
}

fn serve(addr: &str, port: u16, snapshot_dir: Option<PathBuf>) -> ExitCode {
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    runtime.block_on(async move {
        let store = match snapshot_dir {
            Some(dir) => match Store::with_snapshots(&dir) {
                Ok(s) => s,
                Err(e) => return fail(format!("{}: {e}", dir.display())),
            },
            None => Store::new(),
        };
        match store.restore() {
            Ok((restored, failed)) => {
                if !restored.is_empty() {
                    eprintln!("restored {} sessions", restored.len());
                }
                for (path, e) in failed {
                    eprintln!("skipped {}: {e}", path.display());
                }
            }
            Err(e) => return fail(e),
        }
        let listener = match tokio::net::TcpListener::bind((addr, port)).await {
            Ok(l) => l,
            Err(e) => return fail(format!("cannot bind {addr}:{port}: {e}")),
        };
        if let Ok(local) = listener.local_addr() {
            eprintln!("listening on http://{local}");
        }
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        match regconf_service::serve(listener, Arc::new(store), shutdown).await {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        }
    })
}
