//! Text and JSON reports.

use std::fs;

use anyhow::{Context, Result};
use dagfoci_core::{Dataset, ParentalSets, Verdict};
use serde_json::{json, Map, Value};

use crate::Settings;

/// Bumped whenever a field of the JSON report changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    command: &'static str,
    seed: u64,
    config: Value,
    inputs: Map<String, Value>,
    lines: Vec<String>,
    result: Value,
    stderr: bool,
}

impl Report {
    pub fn new(command: &'static str, s: &Settings) -> Self {
        Self {
            command,
            seed: s.seed,
            config: json!({
                "seed": s.seed,
                "alpha": s.alpha,
                "n_perms": s.n_perms,
                "max_boundary": s.max_boundary,
                "metric": "euclidean",
            }),
            inputs: Map::new(),
            lines: Vec::new(),
            result: Value::Null,
            stderr: false,
        }
    }

    pub fn input(&mut self, key: &str, value: String) {
        self.inputs.insert(key.to_string(), Value::String(value));
    }

    pub fn line(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn result(&mut self, result: Value) {
        self.result = result;
    }

    /// Send the text report to standard error.
    pub fn to_stderr(&mut self) {
        self.stderr = true;
    }

    fn header(&self) -> Vec<String> {
        let c = &self.config;
        let cap = c["max_boundary"].as_u64().map_or("none".to_string(), |m| m.to_string());
        let mut out = vec![format!(
            "# dagfoci {} {} seed={} alpha={} perms={} max_boundary={cap}",
            self.command,
            env!("CARGO_PKG_VERSION"),
            self.seed,
            c["alpha"],
            c["n_perms"]
        )];
        out.extend(self.inputs.iter().map(|(k, v)| format!("# {k}: {}", v.as_str().unwrap_or_default())));
        out
    }

    pub fn emit(self, s: &Settings) -> Result<()> {
        let text = self.header().into_iter().chain(self.lines.iter().cloned()).collect::<Vec<_>>().join("\n");
        if self.stderr {
            eprintln!("{text}");
        } else {
            println!("{text}");
        }
        if let Some(path) = &s.out {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "tool": "dagfoci",
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
                "config": self.config,
                "inputs": self.inputs,
                "result": self.result,
            });
            fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

pub fn fmt_set(d: &Dataset, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&i| d.name(i)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn fmt_sets(d: &Dataset, sets: &[Vec<usize>]) -> String {
    if sets.is_empty() {
        return "none".into();
    }
    sets.iter().map(|s| fmt_set(d, s)).collect::<Vec<_>>().join(", ")
}

fn named<'a>(d: &'a Dataset, sets: &[Vec<usize>]) -> Vec<Vec<&'a str>> {
    sets.iter().map(|s| s.iter().map(|&i| d.name(i)).collect()).collect()
}

/// Stage-by-stage text for a DAG-FOCI answer.
pub fn parental_text(r: &mut Report, d: &Dataset, out: &ParentalSets) {
    if let Some(layers) = &out.stage_one {
        r.line(format!("markov boundary: {}", fmt_set(d, &layers.target.sorted())));
        for (v, mb) in &layers.members {
            r.line(format!("  boundary of {}: {}", d.name(*v), fmt_set(d, &mb.sorted())));
        }
    }
    if let Some(g) = &out.graph {
        let edges: Vec<String> = g.edges.iter().map(|&(i, j)| format!("{}-{}", d.name(i), d.name(j))).collect();
        r.line(format!("cluster graph edges: {}", if edges.is_empty() { "none".into() } else { edges.join(" ") }));
        r.line(format!("components: {}", fmt_sets(d, &g.components)));
    }
    if !out.tests().is_empty() {
        r.line("pair tests:".into());
        for t in out.tests() {
            r.line(format!(
                "  {} vs {}: T_n = {:.6}, p = {:.4}, {}",
                d.name(t.i),
                d.name(t.j),
                t.result.statistic,
                t.result.p_value,
                if t.result.reject { "dependent" } else { "independent" }
            ));
        }
    }
    if !out.candidates.rejected.is_empty() {
        r.line(format!("rejected components: {}", fmt_sets(d, &out.candidates.rejected)));
    }
    r.line(format!("candidate sets: {}", fmt_sets(d, &out.candidates.sets)));
    r.line(format!("verdict: {}", out.verdict.describe()));
    match out.verdict {
        Verdict::Unique => r.line(format!("parents: {}", fmt_set(d, &out.sets[0]))),
        Verdict::Singletons => r.line(format!("parental sets: {}", fmt_sets(d, &out.sets))),
        Verdict::Undetectable => {}
    }
}

pub fn parental_json(d: &Dataset, out: &ParentalSets) -> Value {
    json!({
        "verdict": out.verdict,
        "message": out.verdict.describe(),
        "sets": out.sets,
        "set_names": named(d, &out.sets),
        "candidates": out.candidates,
        "stage_one": out.stage_one,
        "cluster_graph": out.graph,
    })
}
