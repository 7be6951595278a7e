mod input;
mod report;

use std::io::{BufRead, Write};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use entrench_core::audit::{random_base, run_suite, Suite, SuiteOutcome, Target};
use entrench_core::bridge::{compile_kb, n_translate, tabulate, InferenceService, MaxiconsistentInference};
use entrench_core::entrenchment::Translation;
use entrench_core::format::{render_generators, render_table, Document, DocumentKind};
use entrench_core::inference::{extensions, infer_masks};
use entrench_core::{EntrenchmentOracle, Error, Mode, TruthMask, Verdict, Vocabulary};

use report::{labelled, masks, verdict_lines, CounterexampleEntry, Report, VerdictEntry, WitnessEntry};

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "entrench", version, about = "Partial entrenchment orderings and maxiconsistent inference")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Admit five-variable vocabularies.
    #[arg(long, global = true)]
    allow_five: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide `a <= b` in the ordering.
    Leq { file: String, a: String, b: String },
    /// Decide `antecedent |~ consequent`.
    Query { file: String, antecedent: String, consequent: String },
    /// List the extensions of an antecedent.
    Extensions { file: String, antecedent: String },
    /// Run law suites against a file, a fixture id or random bases.
    Verify(VerifyArgs),
    /// Translate between orderings and inference relations.
    Translate {
        file: String,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Answer queries from stdin, one `<formula> <sep> <formula>` per line.
        #[arg(long)]
        serve: bool,
    },
    /// Turn a conditional knowledge base into a generator base.
    CompileKb { file: String },
    /// Time the stable-element scan and one inference on a random base.
    Bench {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        generators: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Input file or fixture id (figure1, example5, chain1).
    #[arg(required_unless_present = "random")]
    file: Option<String>,
    /// Comma-separated suite names.
    #[arg(long, value_delimiter = ',', required = true)]
    suites: Vec<Suite>,
    /// Sample this many tuples per law instead of scanning exhaustively.
    #[arg(long, conflicts_with = "exhaustive")]
    sampled: Option<u64>,
    /// Seed for sampling and for random bases
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scan every tuple (the default when --sampled is absent)
    #[arg(long)]
    exhaustive: bool,
    /// Check this many seeded random bases instead of a file.
    #[arg(long, conflicts_with = "file")]
    random: Option<u64>,
    /// Vocabulary width for random bases.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Generators per random base (default cycles through 1 to 4).
    #[arg(long)]
    k: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    /// Ordering to inference.
    N,
    /// Inference to ordering.
    P,
    /// Inference to ordering, reverse-contraction form.
    Gm,
}

/// Result of one command: the report plus its exit status.
struct Outcome {
    report: Report,
    text: String,
    code: u8,
    /// False when the command already wrote its own output.
    emit: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_name(&cli.command);
    let started = Instant::now();
    let outcome = match run(&cli, started) {
        Ok(o) => o,
        Err(message) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "command": command, "error": message })).unwrap());
            }
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    if !outcome.emit {
        return ExitCode::from(outcome.code);
    }
    let body = if cli.json {
        let mut report = outcome.report;
        report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        outcome.text
    };
    // a closed pipe (`| head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    ExitCode::from(outcome.code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Leq { .. } => "leq",
        Command::Query { .. } => "query",
        Command::Extensions { .. } => "extensions",
        Command::Verify(_) => "verify",
        Command::Translate { .. } => "translate",
        Command::CompileKb { .. } => "compile-kb",
        Command::Bench { .. } => "bench",
    }
}

type CmdResult = std::result::Result<Outcome, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn run(cli: &Cli, started: Instant) -> CmdResult {
    match &cli.command {
        Command::Leq { file, a, b } => cmd_leq(cli, file, a, b),
        Command::Query { file, antecedent, consequent } => cmd_query(cli, file, antecedent, consequent),
        Command::Extensions { file, antecedent } => cmd_extensions(cli, file, antecedent),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Translate { file, direction, serve } => cmd_translate(cli, file, *direction, *serve),
        Command::CompileKb { file } => cmd_compile_kb(cli, file),
        Command::Bench { n, generators, seed } => cmd_bench(*n, *generators, *seed, started),
    }
}

fn base_report(command: &str, input: &str, vocab: &Vocabulary) -> Report {
    Report {
        command: command.to_string(),
        input: input.to_string(),
        vocab: vocab.names().to_vec(),
        result: Value::Null,
        witnesses: Vec::new(),
        counterexamples: Vec::new(),
        mode: Mode::Exhaustive,
        timing_ms: 0.0,
    }
}

fn load_oracle(cli: &Cli, file: &str) -> std::result::Result<EntrenchmentOracle, String> {
    input::oracle(input::load(file, cli.allow_five)?).map_err(err)
}

fn mask(vocab: &Vocabulary, text: &str) -> std::result::Result<TruthMask, String> {
    vocab.mask_of(text).map_err(err)
}

fn cmd_leq(cli: &Cli, file: &str, a: &str, b: &str) -> CmdResult {
    let o = load_oracle(cli, file)?;
    let v = o.vocab().clone();
    let (ma, mb) = (mask(&v, a)?, mask(&v, b)?);
    let holds = o.leq(ma, mb);
    let floor = o.upset_meet(ma).map_err(err)?;
    let mut report = base_report("leq", file, &v);
    report.result = json!({
        "leq": holds,
        "lhs": report::hex(&v, ma),
        "rhs": report::hex(&v, mb),
        "upset_meet": report::hex(&v, floor),
    });
    report.witnesses = vec![
        WitnessEntry::new(&v, "lhs", ma),
        WitnessEntry::new(&v, "rhs", mb),
        WitnessEntry::new(&v, "upset_meet", floor),
    ];
    let text = format!(
        "vars: {v}\n{a} <= {b}: {holds}\nlhs: {}\nrhs: {}\nupset meet of lhs: {}\n",
        labelled(&v, ma),
        labelled(&v, mb),
        labelled(&v, floor)
    );
    Ok(Outcome { report, text, code: if holds { EXIT_TRUE } else { EXIT_FALSE }, emit: true })
}

fn cmd_query(cli: &Cli, file: &str, antecedent: &str, consequent: &str) -> CmdResult {
    let o = load_oracle(cli, file)?;
    let v = o.vocab().clone();
    let (a, b) = (mask(&v, antecedent)?, mask(&v, consequent)?);
    let r = infer_masks(a, b, &o).map_err(err)?;
    let mut report = base_report("query", file, &v);
    report.result = json!({
        "infers": r.verdict,
        "antecedent": report::hex(&v, a),
        "consequent": report::hex(&v, b),
        "maximal_bases": masks(&v, &r.maximal_bases),
        "extensions": masks(&v, &r.extensions),
        "sceptical_min": report::hex(&v, r.sceptical_min),
    });
    report.witnesses.push(WitnessEntry::new(&v, "antecedent", a));
    report.witnesses.push(WitnessEntry::new(&v, "consequent", b));
    report.witnesses.extend(r.maximal_bases.iter().map(|&m| WitnessEntry::new(&v, "maximal_base", m)));
    report.witnesses.push(WitnessEntry::new(&v, "sceptical_min", r.sceptical_min));

    let mut text = format!("vars: {v}\n{antecedent} |~ {consequent}: {}\n", r.verdict);
    text.push_str(&format!("maximal bases ({}):\n", r.maximal_bases.len()));
    for &m in &r.maximal_bases {
        text.push_str(&format!("  {}\n", labelled(&v, m)));
    }
    text.push_str(&format!("sceptical minimum: {}\n", labelled(&v, r.sceptical_min)));
    Ok(Outcome { report, text, code: if r.verdict { EXIT_TRUE } else { EXIT_FALSE }, emit: true })
}

fn cmd_extensions(cli: &Cli, file: &str, antecedent: &str) -> CmdResult {
    let o = load_oracle(cli, file)?;
    let v = o.vocab().clone();
    let a = mask(&v, antecedent)?;
    let ext = extensions(a, &o).map_err(err)?;
    let mut report = base_report("extensions", file, &v);
    report.result = json!({ "antecedent": report::hex(&v, a), "extensions": masks(&v, &ext) });
    report.witnesses = ext.iter().map(|&m| WitnessEntry::new(&v, "extension", m)).collect();
    let mut text = format!("vars: {v}\nextensions of {antecedent} ({}):\n", ext.len());
    for &m in &ext {
        text.push_str(&format!("  Cn({})  {}\n", entrench_core::formula::describe_mask(m, &v), report::hex(&v, m)));
    }
    Ok(Outcome { report, text, code: EXIT_TRUE, emit: true })
}

const RANDOM_NAMES: [&str; 5] = ["p", "q", "r", "s", "t"];

#[derive(Default)]
struct SuiteTally {
    verdicts: Vec<Verdict>,
    refusals: Vec<(String, String)>,
    guards: Vec<Verdict>,
}

impl SuiteTally {
    fn add(&mut self, outcome: SuiteOutcome, note: Option<&str>) {
        match outcome {
            SuiteOutcome::Verdicts(vs) => {
                for v in vs {
                    match self.verdicts.iter_mut().find(|x| x.law == v.law) {
                        Some(acc) => acc.absorb(&v, note),
                        None => {
                            let mut fresh = Verdict::new(v.law.clone(), v.mode);
                            fresh.informational = v.informational;
                            fresh.absorb(&v, note);
                            self.verdicts.push(fresh);
                        }
                    }
                }
            }
            SuiteOutcome::Refused { reason, guard } => {
                self.refusals.push((note.unwrap_or("").to_string(), reason));
                if self.guards.is_empty() {
                    self.guards.push(guard);
                }
            }
        }
    }

    fn status(&self) -> &'static str {
        if self.verdicts.iter().any(|v| !v.pass && !v.informational) {
            "fail"
        } else if !self.refusals.is_empty() {
            "refused"
        } else {
            "pass"
        }
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let mode = match args.sampled {
        Some(samples) if !args.exhaustive => Mode::Sampled { seed: args.seed, samples },
        _ => Mode::Exhaustive,
    };
    let mut suites = args.suites.clone();
    suites.dedup();

    let (input, vocab, targets): (String, Vocabulary, Vec<(Option<String>, Target)>) = match args.random {
        Some(count) => {
            if args.n == 0 || args.n > RANDOM_NAMES.len() {
                return Err(format!("--n must be between 1 and {}", RANDOM_NAMES.len()));
            }
            let names = &RANDOM_NAMES[..args.n];
            let vocab = if cli.allow_five { Vocabulary::with_extended_cap(names) } else { Vocabulary::new(names) }
                .map_err(err)?;
            let mut targets = Vec::new();
            for i in 0..count {
                let seed = args.seed + i;
                let k = args.k.unwrap_or(1 + (seed % 4) as usize);
                let t = Target::from_base(random_base(seed, &vocab, k)).map_err(err)?;
                targets.push((Some(format!("seed={seed}")), t));
            }
            let k = args.k.map(|k| k.to_string()).unwrap_or_else(|| "1..4".into());
            (format!("random(count={count}, n={}, k={k}, seed={})", args.n, args.seed), vocab, targets)
        }
        None => {
            let file = args.file.as_deref().expect("clap requires a file without --random");
            let t = input::target(input::load(file, cli.allow_five)?).map_err(err)?;
            (file.to_string(), t.oracle.vocab().clone(), vec![(None, t)])
        }
    };

    let mut report = base_report("verify", &input, &vocab);
    report.mode = mode;
    let mut text = format!("vars: {vocab}\nmode: {mode}\n");
    let mut suite_values = Vec::new();
    let (mut any_fail, mut any_refused) = (false, false);
    for suite in suites {
        let mut tally = SuiteTally::default();
        for (note, t) in &targets {
            tally.add(run_suite(suite, t, mode).map_err(err)?, note.as_deref());
        }
        let status = tally.status();
        any_fail |= status == "fail";
        any_refused |= status == "refused";
        text.push_str(&format!("suite {}: {status}\n", suite.name()));
        for (note, reason) in &tally.refusals {
            let at = if note.is_empty() { String::new() } else { format!(" [{note}]") };
            text.push_str(&format!("  refused{at}: {reason}\n"));
        }
        for g in &tally.guards {
            text.push_str("  guard:\n");
            verdict_lines(&vocab, g, "    ", &mut text);
        }
        for v in &tally.verdicts {
            verdict_lines(&vocab, v, "  ", &mut text);
            report
                .counterexamples
                .extend(v.counterexamples.iter().map(|w| CounterexampleEntry::new(&vocab, &v.law, w)));
        }
        for g in &tally.guards {
            report
                .counterexamples
                .extend(g.counterexamples.iter().map(|w| CounterexampleEntry::new(&vocab, &g.law, w)));
        }
        let mut value = json!({
            "suite": suite.name(),
            "status": status,
            "verdicts": tally.verdicts.iter().map(|v| VerdictEntry::new(&vocab, v)).collect::<Vec<_>>(),
        });
        if !tally.refusals.is_empty() {
            value["refusals"] =
                json!(tally.refusals.iter().map(|(n, r)| json!({ "instance": n, "reason": r })).collect::<Vec<_>>());
            value["guard"] = json!(tally.guards.iter().map(|g| VerdictEntry::new(&vocab, g)).collect::<Vec<_>>());
        }
        suite_values.push(value);
    }
    report.result = json!({ "pass": !any_fail && !any_refused, "suites": suite_values });
    let code = if any_fail {
        EXIT_FALSE
    } else if any_refused {
        EXIT_REFUSED
    } else {
        EXIT_TRUE
    };
    Ok(Outcome { report, text, code, emit: true })
}

fn cmd_translate(cli: &Cli, file: &str, direction: Direction, serve: bool) -> CmdResult {
    let doc = input::load(file, cli.allow_five)?;
    let vocab = doc.vocab().clone();
    let (kind, leq_side): (DocumentKind, Option<Arc<EntrenchmentOracle>>);
    let service: Arc<dyn InferenceService> = match direction {
        Direction::N => {
            let o = Arc::new(input::oracle(doc).map_err(err)?);
            kind = DocumentKind::Inference;
            leq_side = None;
            Arc::new(n_translate(o))
        }
        Direction::P | Direction::Gm => {
            let source: Arc<dyn InferenceService> = match doc {
                Document::Inference(t) => Arc::new(t),
                other => {
                    let o = Arc::new(input::oracle(other).map_err(err)?);
                    Arc::new(MaxiconsistentInference::new(o).map_err(err)?)
                }
            };
            let translation = if direction == Direction::P { Translation::P } else { Translation::GardenforsMakinson };
            kind = DocumentKind::Relation;
            leq_side = Some(Arc::new(EntrenchmentOracle::derived(source.clone(), translation)));
            source
        }
    };

    if serve {
        let sep = if leq_side.is_some() { "<=" } else { "|~" };
        let stdin = std::io::stdin();
        let mut stdout = std::io::stdout().lock();
        for line in stdin.lock().lines() {
            let line = line.map_err(|e| e.to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let answer = match line.split_once(sep) {
                Some((l, r)) => match (vocab.mask_of(l.trim()), vocab.mask_of(r.trim())) {
                    (Ok(a), Ok(b)) => match &leq_side {
                        Some(o) => o.leq(a, b).to_string(),
                        None => service.query(a, b).to_string(),
                    },
                    (Err(e), _) | (_, Err(e)) => format!("error: {e}"),
                },
                None => format!("error: expected `<formula> {sep} <formula>`"),
            };
            writeln!(stdout, "{answer}").map_err(|e| e.to_string())?;
        }
        stdout.flush().map_err(|e| e.to_string())?;
        let report = base_report("translate", file, &vocab);
        return Ok(Outcome { report, text: String::new(), code: EXIT_TRUE, emit: false });
    }

    let document = match &leq_side {
        Some(o) => render_table(&vocab, o.materialize().map_err(err)?, kind),
        None => render_table(&vocab, tabulate(&*service).map_err(err)?.relation(), kind),
    };
    let mut report = base_report("translate", file, &vocab);
    let name = match direction {
        Direction::N => "n",
        Direction::P => "p",
        Direction::Gm => "gm",
    };
    report.result = json!({ "direction": name, "kind": kind.keyword(), "document": document });
    Ok(Outcome { report, text: document, code: EXIT_TRUE, emit: true })
}

fn cmd_compile_kb(cli: &Cli, file: &str) -> CmdResult {
    let kb = match input::load(file, cli.allow_five)? {
        Document::Conditionals(kb) => kb,
        other => {
            return Err(format!("expected a conditional knowledge base, got a `{}` document", other.kind().keyword()))
        }
    };
    let (base, kb_report) = compile_kb(&kb).map_err(err)?;
    let v = kb.vocab.clone();
    let generators = render_generators(&base);
    let mut report = base_report("compile-kb", file, &v);
    report.mode = kb_report.weak_disjunction.mode;
    report.result = json!({
        "base": generators,
        "conditionals": kb_report.conditionals,
        "all_hold": kb_report.all_hold(),
        "inconsistent": kb_report.inconsistent,
        "weak_disjunction": VerdictEntry::new(&v, &kb_report.weak_disjunction),
    });
    report.counterexamples = kb_report
        .weak_disjunction
        .counterexamples
        .iter()
        .map(|w| CounterexampleEntry::new(&v, &kb_report.weak_disjunction.law, w))
        .collect();
    let mut text = generators;
    text.push_str("# report\n");
    for c in &kb_report.conditionals {
        text.push_str(&format!(
            "# {} |~ {}: {}\n",
            c.antecedent,
            c.consequent,
            if c.holds { "holds" } else { "fails" }
        ));
    }
    text.push_str(&format!("# inconsistent ordering: {}\n", kb_report.inconsistent));
    let mut wd = String::new();
    verdict_lines(&v, &kb_report.weak_disjunction, "", &mut wd);
    for line in wd.lines() {
        text.push_str(&format!("# {line}\n"));
    }
    Ok(Outcome { report, text, code: EXIT_TRUE, emit: true })
}

fn cmd_bench(n: usize, generators: usize, seed: u64, started: Instant) -> CmdResult {
    if n == 0 || n > 4 {
        return Err("bench supports 1 to 4 variables".into());
    }
    let vocab = Vocabulary::new(&RANDOM_NAMES[..n]).map_err(err)?;
    let base = random_base(seed, &vocab, generators);
    let o = EntrenchmentOracle::closure(base);
    let t0 = Instant::now();
    let stable = o.stable_elements().map_err(err)?.len();
    let scan_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (a, b) = (vocab.algebra().var(0), vocab.algebra().var(n - 1));
    let t1 = Instant::now();
    let r = infer_masks(a, b, &o).map_err(err)?;
    let infer_ms = t1.elapsed().as_secs_f64() * 1e3;
    let mut report = base_report("bench", &format!("random(n={n}, k={generators}, seed={seed})"), &vocab);
    report.result = json!({
        "algebra_size": vocab.algebra().size(),
        "generators": generators,
        "stable_elements": stable,
        "stable_scan_ms": scan_ms,
        "infer_ms": infer_ms,
        "infers": r.verdict,
        "maximal_bases": r.maximal_bases.len(),
    });
    let text = format!(
        "vars: {vocab}\nalgebra size: {}\ngenerators: {generators}\nstable elements: {stable}\nstable scan: {scan_ms:.1} ms\ninfer {} |~ {}: {} ({infer_ms:.1} ms, {} maximal bases)\ntotal: {:.1} ms\n",
        vocab.algebra().size(),
        vocab.name(0),
        vocab.name(n - 1),
        r.verdict,
        r.maximal_bases.len(),
        started.elapsed().as_secs_f64() * 1e3
    );
    Ok(Outcome { report, text, code: EXIT_TRUE, emit: true })
}
