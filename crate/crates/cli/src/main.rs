// SPDX-License-Identifier: Apache-2.0

//! `chronokg`: validate, replay and inspect time-aware knowledge graphs.
//!
//! Exit codes: 0 success, 1 rule violations, 2 parse or log errors,
//! 3 usage or I/O errors.

mod calendar;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chronokg_core::{
    build_event_log, history, match_pattern, parse_events, parse_graph, parse_ontology, parse_term,
    snapshot, validate_reminiscent, validate_standard, write_event_log, write_graph, AppendError,
    ChangeLog, Classify, Iri, LineAppendError, LoadError, ParseError, Pattern, StationaryGraph,
    TemporalOntology, Term, Triple, ViewKind, Violation,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use calendar::{to_tick, Calendar};

const VIOLATIONS: u8 = 1;
const INVALID_INPUT: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "chronokg",
    version,
    about = "Time-aware knowledge graph toolkit"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Mapping of time arguments (--at, --from, --to, --valid-at) to ticks.
    #[arg(
        long,
        value_enum,
        env = "CHRONOKG_CALENDAR",
        default_value = "year",
        global = true
    )]
    calendar: Calendar,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph or log against ontology rules.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Materialize the image of a log at one time.
    Snapshot {
        #[command(flatten)]
        log: LogArgs,
        #[arg(long)]
        kind: ViewKind,
        /// Defaults to the last commit.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match one pattern; `?` is a wildcard.
    Query {
        #[command(flatten)]
        input: Input,
        /// Image to query when reading a log.
        #[arg(long, default_value = "incremental")]
        kind: ViewKind,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        valid_at: Option<String>,
        #[arg(long)]
        active_only: bool,
        head: String,
        relation: String,
        tail: String,
    },
    /// Edge changes between two times.
    Diff {
        #[command(flatten)]
        log: LogArgs,
        #[arg(long)]
        kind: ViewKind,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Print the taxonomy cell of a graph or log.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Events that touched one triple, in commit order.
    History {
        #[command(flatten)]
        log: LogArgs,
        head: String,
        relation: String,
        tail: String,
    },
    /// Re-emit a log in canonical form.
    Replay {
        #[command(flatten)]
        log: LogArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Triple or quintuple file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Event log file.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Ontology file; without one every used relation is allowed.
    #[arg(long)]
    ontology: Option<PathBuf>,
    #[command(flatten)]
    source: Source,
}

#[derive(Args)]
struct LogArgs {
    #[arg(long)]
    ontology: Option<PathBuf>,
    #[arg(long, required = true)]
    log: PathBuf,
}

/// A command that could not produce its report. Lines go to stderr.
struct Failure {
    code: u8,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: u8, line: impl Into<String>) -> Self {
        Failure {
            code,
            lines: vec![line.into()],
        }
    }
}

struct Report {
    code: u8,
    stdout: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { code: 0, stdout }
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(report.stdout.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(USAGE);
            }
            ExitCode::from(report.code)
        }
        Err(failure) => {
            for line in failure.lines {
                eprintln!("error: {line}");
            }
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let time = |arg: &str| to_tick(cli.calendar, arg).map_err(|e| Failure::new(USAGE, e));
    match &cli.command {
        Command::Validate { input } => validate(input, cli.format),
        Command::Snapshot { log, kind, at, out } => {
            let log = load_log(log.ontology.as_deref(), &log.log)?;
            let at = match at {
                Some(a) => time(a)?,
                None => log.last_commit().unwrap_or(0),
            };
            let snap = snapshot(&log, *kind, at);
            let text = match cli.format {
                Format::Text => write_graph(&snap.graph),
                Format::Json => json(&snap),
            };
            emit(out.as_deref(), text)
        }
        Command::Query {
            input,
            kind,
            at,
            valid_at,
            active_only,
            head,
            relation,
            tail,
        } => {
            let graph = match (&input.source.graph, &input.source.log) {
                (Some(path), _) => load_graph(path)?,
                (None, Some(path)) => {
                    let log = load_log(input.ontology.as_deref(), path)?;
                    let at = match at {
                        Some(a) => time(a)?,
                        None => log.last_commit().unwrap_or(0),
                    };
                    snapshot(&log, *kind, at).graph
                }
                (None, None) => unreachable!("clap requires a source"),
            };
            let mut pattern = Pattern::new(
                pattern_iri(head, "head")?,
                pattern_iri(relation, "relation")?,
                pattern_term(tail)?,
            );
            pattern.valid_at = valid_at.as_deref().map(time).transpose()?;
            pattern.active_only = *active_only;
            let found =
                match_pattern(&graph, &pattern).map_err(|e| Failure::new(USAGE, e.to_string()))?;
            Ok(Report::ok(match cli.format {
                Format::Text => found.iter().map(|e| format!("{e} .\n")).collect(),
                Format::Json => json(&serde_json::json!({ "matches": found })),
            }))
        }
        Command::Diff {
            log,
            kind,
            from,
            to,
        } => {
            let log = load_log(log.ontology.as_deref(), &log.log)?;
            let d = chronokg_core::diff(&log, *kind, time(from)?, time(to)?)
                .map_err(|e| Failure::new(USAGE, e.to_string()))?;
            Ok(Report::ok(match cli.format {
                Format::Text => {
                    let mut out = String::new();
                    for e in &d.added {
                        out += &format!("added {e}\n");
                    }
                    for e in &d.removed {
                        out += &format!("removed {e}\n");
                    }
                    for (old, new) in &d.rewritten {
                        out += &format!(
                            "rewritten {} {} {} -> {}\n",
                            old.triple(),
                            old.valid_from(),
                            old.valid_until(),
                            new.valid_until()
                        );
                    }
                    out
                }
                Format::Json => json(&d),
            }))
        }
        Command::Classify { input } => {
            let cell = match (&input.source.graph, &input.source.log) {
                (Some(path), _) => load_graph(path)?.classify(),
                (None, Some(path)) => load_log(input.ontology.as_deref(), path)?.classify(),
                (None, None) => unreachable!("clap requires a source"),
            };
            Ok(Report::ok(match cli.format {
                Format::Text => format!("{cell}\n"),
                Format::Json => json(&serde_json::json!({ "class": cell })),
            }))
        }
        Command::History {
            log,
            head,
            relation,
            tail,
        } => {
            let log = load_log(log.ontology.as_deref(), &log.log)?;
            let key = Triple::new(
                required_iri(head, "head")?,
                required_iri(relation, "relation")?,
                parse_term(tail).map_err(|e| Failure::new(USAGE, format!("tail: {e}")))?,
            );
            let events = history(&log, &key);
            Ok(Report::ok(match cli.format {
                Format::Text => events.iter().map(|e| format!("{e}\n")).collect(),
                Format::Json => json(&serde_json::json!({ "events": events })),
            }))
        }
        Command::Replay { log, out } => {
            let log = load_log(log.ontology.as_deref(), &log.log)?;
            let text = match cli.format {
                Format::Text => write_event_log(&log),
                Format::Json => json(&serde_json::json!({ "events": log.events() })),
            };
            emit(out.as_deref(), text)
        }
    }
}

#[derive(Serialize)]
struct ViolationReport<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(flatten)]
    violation: &'a Violation,
}

fn validate(input: &Input, format: Format) -> Outcome {
    let reports: Vec<(Option<usize>, Violation)> = match (&input.source.graph, &input.source.log) {
        (Some(path), _) => {
            let graph = load_graph(path)?;
            match &graph {
                StationaryGraph::Standard(g) => {
                    let ontology = ontology_for(input.ontology.as_deref(), g.edges().iter())?;
                    validate_standard(g, ontology.base())
                }
                StationaryGraph::Reminiscent(g) => {
                    let triples: Vec<Triple> = g.edges().iter().map(|q| q.triple()).collect();
                    let ontology = ontology_for(input.ontology.as_deref(), triples.iter())?;
                    validate_reminiscent(g, &ontology)
                }
            }
            .into_iter()
            .map(|v| (None, v))
            .collect()
        }
        (None, Some(path)) => match try_load_log(input.ontology.as_deref(), path)? {
            Ok(log) => validate_reminiscent(log.current(), log.ontology())
                .into_iter()
                .map(|v| (None, v))
                .collect(),
            Err(rejected) => {
                let sorted = Rejections::sort(&rejected);
                if !sorted.structural.is_empty() {
                    return Err(append_failure(path, &rejected));
                }
                for r in &sorted.knock_on {
                    eprintln!(
                        "note: {}:{}: {} (follows a refused event)",
                        path.display(),
                        r.line,
                        r.error
                    );
                }
                sorted
                    .rules
                    .into_iter()
                    .map(|(line, v)| (Some(line), v.clone()))
                    .collect()
            }
        },
        (None, None) => unreachable!("clap requires a source"),
    };
    let stdout = match format {
        Format::Text => reports
            .iter()
            .map(|(line, v)| match line {
                Some(n) => format!("line {n}: {v}\n"),
                None => format!("{v}\n"),
            })
            .collect(),
        Format::Json => {
            let list: Vec<ViolationReport> = reports
                .iter()
                .map(|(line, violation)| ViolationReport {
                    line: *line,
                    violation,
                })
                .collect();
            json(&serde_json::json!({ "violations": list }))
        }
    };
    Ok(Report {
        code: if reports.is_empty() { 0 } else { VIOLATIONS },
        stdout,
    })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, errors: &[ParseError]) -> Failure {
    Failure {
        code: INVALID_INPUT,
        lines: errors
            .iter()
            .map(|e| format!("{}:{e}", path.display()))
            .collect(),
    }
}

/// Refused events by cause. Once an event is refused by a rule, later
/// events on the same triple often fail only because it is missing; those
/// are knock-on failures rather than defects of the log itself.
struct Rejections<'a> {
    rules: Vec<(usize, &'a Violation)>,
    knock_on: Vec<&'a LineAppendError>,
    structural: Vec<&'a LineAppendError>,
}

impl<'a> Rejections<'a> {
    fn sort(rejected: &'a [LineAppendError]) -> Self {
        let mut refused = std::collections::HashSet::new();
        let mut out = Rejections {
            rules: Vec::new(),
            knock_on: Vec::new(),
            structural: Vec::new(),
        };
        for r in rejected {
            match &r.error {
                AppendError::RuleViolation(vs) => {
                    refused.insert(&r.key);
                    out.rules.extend(vs.iter().map(|v| (r.line, v)));
                }
                AppendError::NoActiveEdge { .. }
                | AppendError::DuplicateAssert { .. }
                | AppendError::SameTripleNotIncreasing { .. }
                    if refused.contains(&r.key) =>
                {
                    out.knock_on.push(r)
                }
                _ => out.structural.push(r),
            }
        }
        out
    }
}

fn append_failure(path: &Path, rejected: &[LineAppendError]) -> Failure {
    let sorted = Rejections::sort(rejected);
    let mut lines: Vec<String> = rejected
        .iter()
        .flat_map(|r| match &r.error {
            AppendError::RuleViolation(vs) => vs
                .iter()
                .map(|v| format!("{}:{}: {v}", path.display(), r.line))
                .collect::<Vec<_>>(),
            other => vec![format!("{}:{}: {other}", path.display(), r.line)],
        })
        .collect();
    lines.dedup();
    Failure {
        code: if sorted.structural.is_empty() {
            VIOLATIONS
        } else {
            INVALID_INPUT
        },
        lines,
    }
}

fn load_graph(path: &Path) -> Result<StationaryGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| parse_failure(path, &e))
}

fn ontology_for<'a, I>(path: Option<&Path>, triples: I) -> Result<TemporalOntology, Failure>
where
    I: IntoIterator<Item = &'a Triple>,
{
    match path {
        Some(p) => parse_ontology(&read(p)?).map_err(|e| parse_failure(p, &e)),
        None => Ok(TemporalOntology::permissive(
            Iri::new("type").expect("valid identifier"),
            triples,
        )),
    }
}

/// Parse problems are failures; refused events come back for the caller.
fn try_load_log(
    ontology: Option<&Path>,
    path: &Path,
) -> Result<Result<ChangeLog, Vec<LineAppendError>>, Failure> {
    let events = parse_events(&read(path)?).map_err(|e| parse_failure(path, &e))?;
    let keys: Vec<Triple> = events.iter().map(|(_, e)| e.key()).collect();
    let ontology = ontology_for(ontology, keys.iter())?;
    Ok(match build_event_log(events, ontology) {
        Ok(log) => Ok(log),
        Err(LoadError::Append(rejected)) => Err(rejected),
        Err(LoadError::Parse(errors)) => return Err(parse_failure(path, &errors)),
    })
}

fn load_log(ontology: Option<&Path>, path: &Path) -> Result<ChangeLog, Failure> {
    try_load_log(ontology, path)?.map_err(|rejected| append_failure(path, &rejected))
}

fn pattern_term(arg: &str) -> Result<Option<Term>, Failure> {
    if arg == "?" {
        return Ok(None);
    }
    parse_term(arg)
        .map(Some)
        .map_err(|e| Failure::new(USAGE, format!("pattern {arg:?}: {e}")))
}

fn pattern_iri(arg: &str, what: &str) -> Result<Option<Iri>, Failure> {
    match pattern_term(arg)? {
        None => Ok(None),
        Some(Term::Entity(iri)) => Ok(Some(iri)),
        Some(_) => Err(Failure::new(USAGE, format!("{what} cannot be a literal"))),
    }
}

fn required_iri(arg: &str, what: &str) -> Result<Iri, Failure> {
    pattern_iri(arg, what)?
        .ok_or_else(|| Failure::new(USAGE, format!("{what} cannot be a wildcard")))
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: String) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Failure::new(USAGE, format!("{}: {e}", path.display())))?;
            Ok(Report::ok(String::new()))
        }
        None => Ok(Report::ok(text)),
    }
}
