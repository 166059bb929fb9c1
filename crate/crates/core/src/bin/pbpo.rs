use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pbpo::bdd::{build_decision_tree, oracle_reduce, reduce_bdd, Bdd, TruthTable};
use pbpo::dot::{emit_graph_dot, emit_trace_dot};
use pbpo::graph::{GraphMorphism, LabeledGraph};
use pbpo::io::{parse_file, parse_workspace, trace_workspace, Square, Workspace};
use pbpo::lattice::{builtin_lattice, validate_lattice};
use pbpo::limits::{is_pullback_square_with, is_pushout_square_with, Verification};
use pbpo::matching::find_matches;
use pbpo::rewrite::{normalize, pbpo_step, NormalizeStatus, PbpoRule};

/// PBPO+ graph rewriting over lattice-labeled multigraphs.
///
/// Objects are referenced by name within the loaded workspace files, as
/// `file.json#name`, or as `file.json` when the file holds exactly one
/// object of the expected kind.
#[derive(Parser)]
#[command(name = "pbpo", version)]
struct Cli {
    /// Workspace file to load (repeatable).
    #[arg(short, long = "workspace", global = true, value_name = "FILE")]
    workspace: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// List the strong matches of a rule in a graph.
    Match {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: String,
    },
    /// Apply a rule at one of its matches.
    Apply {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0)]
        match_index: usize,
        /// Output every object of the step instead of the result graph.
        #[arg(long)]
        emit_trace: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Apply the first applicable rule at its first match until none applies.
    Normalize {
        #[arg(long, value_delimiter = ',', required = true)]
        rules: Vec<String>,
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Binary decision diagrams.
    Bdd {
        #[command(subcommand)]
        command: BddCommand,
    },
    /// Check whether a square is a pullback or pushout.
    Check {
        #[arg(long)]
        square: String,
        /// Decide the universal property by enumerating cones.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Validate a rule, graph or lattice.
    Validate(ValidateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// Outputs as a bitstring; the first variable is the most significant bit.
    #[arg(long)]
    table: String,
    /// Comma-separated variable order.
    #[arg(long, default_value = "")]
    vars: String,
}

#[derive(Subcommand)]
enum BddCommand {
    /// Build the complete decision tree.
    Build {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build the decision tree and reduce it by rewriting.
    Reduce {
        #[command(flatten)]
        table: TableArgs,
        /// Print the reduced diagram instead of a summary line.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build the reduced diagram directly with a unique table.
    Oracle {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

enum Failure {
    /// exit 1
    Validation(String),
    /// exit 2
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn validation(e: impl std::fmt::Display) -> Failure {
    Failure::Validation(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Clone, Copy)]
enum Kind {
    Graph,
    Rule,
    Square,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Graph => "graph",
            Kind::Rule => "rule",
            Kind::Square => "square",
        }
    }
}

fn split_ref(r: &str) -> (Option<&str>, Option<&str>) {
    match r.split_once('#') {
        Some((file, name)) => (Some(file), Some(name)),
        None if r.ends_with(".json") => (Some(r), None),
        None => (None, Some(r)),
    }
}

struct Session {
    ws: Workspace,
}

impl Session {
    fn load(workspace: &[PathBuf], refs: &[&str]) -> Result<Session, Failure> {
        let mut paths: Vec<PathBuf> = Vec::new();
        let mut seen = BTreeSet::new();
        for p in workspace
            .iter()
            .cloned()
            .chain(refs.iter().filter_map(|r| split_ref(r).0.map(PathBuf::from)))
        {
            let key = std::fs::canonicalize(&p).unwrap_or_else(|_| p.clone());
            if seen.insert(key) {
                paths.push(p);
            }
        }
        for p in &paths {
            if !p.exists() {
                return Err(usage(format!("{}: no such file", p.display())));
            }
        }
        let ws = parse_workspace(&paths).map_err(validation)?;
        Ok(Session { ws })
    }

    fn name(&self, r: &str, kind: Kind) -> Result<String, Failure> {
        let (file, name) = split_ref(r);
        if let Some(name) = name {
            return Ok(name.to_string());
        }
        let file = file.expect("a reference has a file or a name");
        let text = std::fs::read_to_string(file).map_err(|e| usage(format!("{file}: {e}")))?;
        let parsed = parse_file(&text, file).map_err(validation)?;
        let names: Vec<&String> = match kind {
            Kind::Graph => parsed.graphs.keys().collect(),
            Kind::Rule => parsed.rules.keys().collect(),
            Kind::Square => parsed.squares.keys().collect(),
        };
        match names.as_slice() {
            [one] => Ok(one.to_string()),
            _ => Err(usage(format!(
                "{file} holds {} {}s; use {file}#<name>",
                names.len(),
                kind.noun()
            ))),
        }
    }

    fn graph(&self, r: &str) -> Result<Arc<LabeledGraph>, Failure> {
        let name = self.name(r, Kind::Graph)?;
        self.ws
            .graphs
            .get(&name)
            .cloned()
            .ok_or_else(|| usage(format!("unknown graph `{name}`")))
    }

    fn rule(&self, r: &str) -> Result<&PbpoRule, Failure> {
        let name = self.name(r, Kind::Rule)?;
        self.ws.rules.get(&name).ok_or_else(|| usage(format!("unknown rule `{name}`")))
    }
}

fn pairs<K: std::fmt::Display, V: std::fmt::Display>(m: impl Iterator<Item = (K, V)>) -> String {
    m.map(|(k, v)| format!("{k} -> {v}")).collect::<Vec<_>>().join(", ")
}

fn describe(f: &GraphMorphism) -> String {
    let nodes = pairs(f.node_map().iter());
    if f.edge_map().is_empty() {
        format!("{{{nodes}}}")
    } else {
        format!("{{{nodes} | {}}}", pairs(f.edge_map().iter()))
    }
}

fn graph_output(name: &str, g: &Arc<LabeledGraph>, format: Format) -> String {
    match format {
        Format::Json => Workspace::with_graph(name, g.clone()).to_json(),
        Format::Dot => emit_graph_dot(g, name),
    }
}

fn table(t: &TableArgs) -> Result<TruthTable, Failure> {
    TruthTable::parse(&t.table, &t.vars).map_err(usage)
}

fn bdd_output(b: &Bdd, name: &str, format: Format) -> String {
    graph_output(name, b.graph(), format)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Match { rule, graph } => {
            let s = Session::load(&cli.workspace, &[&rule, &graph])?;
            let (rule, g) = (s.rule(&rule)?, s.graph(&graph)?);
            let matches = find_matches(rule, &g).map_err(validation)?;
            let mut out = String::new();
            let _ = writeln!(out, "{} match(es)", matches.len());
            for (i, m) in matches.iter().enumerate() {
                let _ = writeln!(out, "{i}: m {} alpha {}", describe(&m.m), describe(&m.alpha));
            }
            Ok(out)
        }
        Command::Apply {
            rule,
            graph,
            match_index,
            emit_trace,
            format,
        } => {
            let s = Session::load(&cli.workspace, &[&rule, &graph])?;
            let (rule, g) = (s.rule(&rule)?, s.graph(&graph)?);
            let matches = find_matches(rule, &g).map_err(validation)?;
            let Some(m) = matches.get(match_index) else {
                return Err(usage(format!(
                    "match index {match_index} out of range ({} match(es))",
                    matches.len()
                )));
            };
            let trace = pbpo_step(rule, m, 1).map_err(validation)?;
            Ok(match (emit_trace, format) {
                (true, Format::Json) => trace_workspace(&trace).to_json(),
                (true, Format::Dot) => emit_trace_dot(&trace),
                (false, f) => graph_output("result", trace.result(), f),
            })
        }
        Command::Normalize {
            rules,
            graph,
            max_steps,
            format,
        } => {
            let mut refs: Vec<&str> = rules.iter().map(String::as_str).collect();
            refs.push(&graph);
            let s = Session::load(&cli.workspace, &refs)?;
            let rs = rules
                .iter()
                .map(|r| s.rule(r).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let g = s.graph(&graph)?;
            let out = normalize(&g, &rs, max_steps).map_err(validation)?;
            let status = match out.status {
                NormalizeStatus::Fixpoint => "fixpoint",
                NormalizeStatus::StepLimit => "step limit reached",
            };
            eprintln!("{} step(s), {status}", out.traces.len());
            Ok(graph_output("result", &out.graph, format))
        }
        Command::Bdd { command } => match command {
            BddCommand::Build { table: t, format } => {
                let b = build_decision_tree(&table(&t)?).map_err(validation)?;
                Ok(bdd_output(&b, "tree", format))
            }
            BddCommand::Reduce { table: t, format } => {
                let tree = build_decision_tree(&table(&t)?).map_err(validation)?;
                let red = reduce_bdd(&tree).map_err(validation)?;
                Ok(match format {
                    None => format!(
                        "{} -> {} nodes in {} steps\n",
                        tree.node_count(),
                        red.bdd.node_count(),
                        red.traces.len()
                    ),
                    Some(f) => bdd_output(&red.bdd, "reduced", f),
                })
            }
            BddCommand::Oracle { table: t, format } => {
                let b = oracle_reduce(&table(&t)?).map_err(validation)?;
                Ok(bdd_output(&b, "oracle", format))
            }
        },
        Command::Check { square, exhaustive } => {
            let s = Session::load(&cli.workspace, &[&square])?;
            let name = s.name(&square, Kind::Square)?;
            let sq = s
                .ws
                .squares
                .get(&name)
                .ok_or_else(|| usage(format!("unknown square `{name}`")))?;
            let mode = if exhaustive {
                Verification::Exhaustive
            } else {
                Verification::Canonical
            };
            let (kind, holds) = match sq {
                Square::Pullback(sq) => ("pullback", is_pullback_square_with(sq, mode)),
                Square::Pushout(sq) => ("pushout", is_pushout_square_with(sq, mode)),
            };
            match holds {
                Ok(true) => Ok(format!("{name}: is a {kind}\n")),
                Ok(false) => Err(validation(format!("{name}: commutes but is not a {kind}"))),
                Err(e) => Err(validation(format!("{name}: {e}"))),
            }
        }
        Command::Validate(v) => {
            if let Some(r) = v.rule {
                let s = Session::load(&cli.workspace, &[&r])?;
                let name = s.name(&r, Kind::Rule)?;
                s.rule(&r)?;
                Ok(format!("rule `{name}`: ok\n"))
            } else if let Some(g) = v.graph {
                let s = Session::load(&cli.workspace, &[&g])?;
                let name = s.name(&g, Kind::Graph)?;
                s.graph(&g)?;
                Ok(format!("graph `{name}`: ok\n"))
            } else {
                let l = v.lattice.expect("clap enforces one of the group");
                if split_ref(&l).0.is_none() && cli.workspace.is_empty() {
                    return match builtin_lattice(&l) {
                        Some(Ok(_)) => Ok(format!("lattice `{l}`: ok\n")),
                        Some(Err(e)) => Err(validation(e)),
                        None => Err(usage(format!("unknown lattice `{l}`"))),
                    };
                }
                lattice_check(&cli.workspace, &l)
            }
        }
    }
}

/// Reports every violation of a lattice declared in a file, rather than
/// stopping at the first as workspace loading does.
fn lattice_check(workspace: &[PathBuf], r: &str) -> Outcome {
    let (file, name) = split_ref(r);
    let mut files: Vec<&Path> = workspace.iter().map(PathBuf::as_path).collect();
    if let Some(f) = file {
        files.push(Path::new(f));
    }
    let mut found = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(f).map_err(|e| usage(format!("{}: {e}", f.display())))?;
        let parsed = parse_file(&text, &f.display().to_string()).map_err(validation)?;
        for (n, spec) in parsed.lattices {
            if name.is_none_or(|want| want == n) {
                found.push((n, spec));
            }
        }
    }
    let (n, spec) = match (found.len(), name) {
        (1, _) => found.pop().expect("one lattice"),
        (0, Some(n)) => {
            return match builtin_lattice(n) {
                Some(Ok(_)) => Ok(format!("lattice `{n}`: ok\n")),
                Some(Err(e)) => Err(validation(e)),
                None => Err(usage(format!("unknown lattice `{n}`"))),
            }
        }
        (k, _) => return Err(usage(format!("{k} lattices match `{r}`"))),
    };
    let report = validate_lattice(&spec);
    if report.is_ok() {
        Ok(format!("lattice `{n}`: ok\n"))
    } else {
        Err(validation(format!("lattice `{n}`: {report}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
