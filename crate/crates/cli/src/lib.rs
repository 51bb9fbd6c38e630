//! `rpq` command-line front end.
//!
//! Loads a TSV edge list, evaluates one regular path query in the chosen
//! mode and prints the answers. Exit status: 0 on success, 2 on usage or
//! parse errors, 1 on runtime errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Parser, ValueEnum};
use rayon::prelude::*;
use rpq_core::{
    eval_all_shortest, eval_count, eval_reach, eval_single_path, load_labelled_graph, parse_regex,
    GraphError, LabelledGraph, NodeId, Path, Rpq,
};
use serde::Serialize;
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Answer nodes only.
    Reach,
    /// One shortest path per answer.
    One,
    /// Every shortest path per answer.
    All,
    /// Number of shortest paths per answer.
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

/// Evaluate a regular path query (v, regex, ?x) over an edge-labelled graph.
#[derive(Debug, Clone, Parser)]
#[command(name = "rpq", version)]
#[command(group(ArgGroup::new("start").required(true).args(["source", "all_sources"])))]
#[command(group(ArgGroup::new("query").required(true).args(["regex", "query_file"])))]
pub struct CliConfig {
    /// Graph file: one `src<TAB>label<TAB>dst` edge per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Name of the start node.
    #[arg(long)]
    pub source: Option<String>,
    /// Run the query from every node of the graph.
    #[arg(long)]
    pub all_sources: bool,
    /// Regular expression over edge labels.
    #[arg(long)]
    pub regex: Option<String>,
    /// Read the regular expression from a file instead.
    #[arg(long)]
    pub query_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    pub mode: Mode,
    /// Maximum number of paths printed per answer.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print the compiled query automaton to stderr.
    #[arg(long)]
    pub dump_automaton: bool,
}

struct Failure {
    code: i32,
    error: anyhow::Error,
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn runtime(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

/// Parses `args` (including the program name) and runs. Returns the exit
/// status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out, err) {
        Ok(()) => 0,
        Err(Failure { code, error }) => {
            let _ = writeln!(err, "error: {error:#}");
            code
        }
    }
}

fn execute(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let regex_text = match (&config.regex, &config.query_file) {
        (Some(r), _) => r.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .with_context(|| format!("reading query file {}", path.display()))
            .map_err(runtime)?,
        (None, None) => return Err(usage(anyhow!("no query given"))),
    };
    let ast = parse_regex(regex_text.trim()).map_err(|e| usage(e.into()))?;

    let file = fs::File::open(&config.graph)
        .with_context(|| format!("opening graph file {}", config.graph.display()))
        .map_err(runtime)?;
    let graph = load_labelled_graph(BufReader::new(file)).map_err(|e| match e {
        GraphError::Io(_) => runtime(anyhow::Error::new(e).context("reading graph file")),
        _ => usage(anyhow::Error::new(e).context(format!("parsing {}", config.graph.display()))),
    })?;

    let sources: Vec<NodeId> = if config.all_sources {
        (0..graph.node_count() as u32).map(NodeId).collect()
    } else {
        let name = config.source.as_deref().unwrap_or_default();
        let v = graph
            .node_id(name)
            .ok_or_else(|| runtime(anyhow!("node `{name}` is not in the graph")))?;
        vec![v]
    };

    if sources.is_empty() {
        // empty graph with --all-sources: nothing to evaluate
        return Ok(());
    }
    let base = Rpq::new(&graph, sources[0], ast).map_err(|e| runtime(e.into()))?;
    if config.dump_automaton {
        base.dfa().write_dump(&mut *err).map_err(|e| runtime(e.into()))?;
    }

    let render = |v: NodeId| {
        let q = base.with_source(v);
        let prefix = config.all_sources.then(|| graph.node_name(v));
        render_query(&graph, &q, config, prefix)
    };
    let chunks: Vec<String> = if sources.len() == 1 {
        vec![render(sources[0])]
    } else {
        sources.par_iter().map(|&v| render(v)).collect()
    };
    for chunk in chunks {
        out.write_all(chunk.as_bytes()).map_err(|e| runtime(e.into()))?;
    }
    out.flush().map_err(|e| runtime(e.into()))
}

#[derive(Serialize)]
struct JsonPath<'a> {
    nodes: Vec<&'a str>,
    labels: Vec<&'a str>,
}

#[derive(Serialize)]
struct JsonAnswer<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<&'a str>,
    node: &'a str,
    depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<Vec<JsonPath<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    truncated: bool,
}

fn json_path<'a>(g: &'a LabelledGraph, p: &Path) -> JsonPath<'a> {
    JsonPath {
        nodes: p.nodes.iter().map(|&n| g.node_name(n)).collect(),
        labels: p.edge_labels.iter().map(|&a| g.label_name(a)).collect(),
    }
}

struct Sink<'a> {
    g: &'a LabelledGraph,
    format: Format,
    source: Option<&'a str>,
    buf: String,
}

impl<'a> Sink<'a> {
    fn prefix(&mut self) {
        if let Some(s) = self.source {
            self.buf.push_str(s);
            self.buf.push('\t');
        }
    }

    fn json(&mut self, answer: JsonAnswer<'a>) {
        let line = serde_json::to_string(&answer).expect("answers serialize");
        self.buf.push_str(&line);
        self.buf.push('\n');
    }

    fn reach(&mut self, node: NodeId, depth: usize) {
        match self.format {
            Format::Text => {
                self.prefix();
                self.buf.push_str(self.g.node_name(node));
                self.buf.push('\n');
            }
            Format::Jsonl => self.json(JsonAnswer {
                source: self.source,
                node: self.g.node_name(node),
                depth,
                paths: None,
                count: None,
                truncated: false,
            }),
        }
    }

    fn paths(&mut self, node: NodeId, depth: usize, paths: &[Path], truncated: bool) {
        match self.format {
            Format::Text => {
                for p in paths {
                    self.prefix();
                    let _ = writeln!(self.buf, "{}\t{}\t{}", self.g.node_name(node), depth, p.render(self.g));
                }
            }
            Format::Jsonl => {
                let g = self.g;
                self.json(JsonAnswer {
                    source: self.source,
                    node: g.node_name(node),
                    depth,
                    paths: Some(paths.iter().map(|p| json_path(g, p)).collect()),
                    count: None,
                    truncated,
                })
            }
        }
    }

    fn count(&mut self, node: NodeId, depth: usize, count: &rpq_core::BigUint) {
        match self.format {
            Format::Text => {
                self.prefix();
                let _ = writeln!(self.buf, "{}\t{}\t{}", self.g.node_name(node), depth, count);
            }
            Format::Jsonl => {
                let raw = RawValue::from_string(count.to_string()).expect("integers are JSON numbers");
                self.json(JsonAnswer {
                    source: self.source,
                    node: self.g.node_name(node),
                    depth,
                    paths: None,
                    count: Some(raw),
                    truncated: false,
                })
            }
        }
    }
}

fn render_query(g: &LabelledGraph, q: &Rpq, config: &CliConfig, source: Option<&str>) -> String {
    let mut sink = Sink { g, format: config.format, source, buf: String::new() };
    let limit = config.limit.map_or(usize::MAX, |l| usize::try_from(l).unwrap_or(usize::MAX));
    match config.mode {
        Mode::Reach => {
            for r in eval_reach(g, q) {
                sink.reach(r.node, r.depth);
            }
        }
        Mode::One => eval_single_path(g, q, |node, path| {
            sink.paths(node, path.len(), std::slice::from_ref(&path), false);
        }),
        Mode::All => {
            eval_all_shortest(g, q, |ans| {
                let mut iter = ans.paths();
                let paths: Vec<Path> = iter.by_ref().take(limit).collect();
                let truncated = paths.len() == limit && iter.next().is_some();
                sink.paths(ans.node, ans.depth, &paths, truncated);
            });
        }
        Mode::Count => eval_count(g, q, |node, depth, count| sink.count(node, depth, count)),
    }
    sink.buf
}
