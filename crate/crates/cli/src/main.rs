//! `dagfoci`: command-line frontend for the DAG-FOCI library.

mod report;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dagfoci_core::dataset::{filter_environment, load_csv, save_csv, write_csv};
use dagfoci_core::eval::{benchmark, codec_gap_sweep};
use dagfoci_core::sem::{builtin, do_intervene, sample};
use dagfoci_core::{
    codec_conditional, dag_foci, dag_foci_interventional, foci_select, Builtin, ColumnSelection,
    DagFociConfig, DagSpec, Dataset, NoiseLaw,
};
use serde_json::{json, Value};

use report::{fmt_set, fmt_sets, parental_json, parental_text, Report};

#[derive(Parser)]
#[command(name = "dagfoci", version, about = "Non-parametric local causal discovery around a target variable")]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

/// Run configuration shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Settings {
    /// Seed for every random choice (tie breaks, permutations, sampling).
    #[arg(long, global = true, env = "DAGFOCI_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Significance level of the pairwise permutation tests.
    #[arg(long, global = true, env = "DAGFOCI_ALPHA", default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Number of permutations per independence test.
    #[arg(long = "perms", global = true, env = "DAGFOCI_PERMS", default_value_t = 100, value_parser = parse_perms)]
    pub n_perms: usize,
    /// Cap on the size of every FOCI selection.
    #[arg(long, global = true, env = "DAGFOCI_MAX_BOUNDARY")]
    pub max_boundary: Option<usize>,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true, env = "DAGFOCI_JOBS")]
    pub jobs: Option<usize>,
    /// Write a JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Settings {
    fn config(&self) -> DagFociConfig {
        DagFociConfig { n_perms: self.n_perms, alpha: self.alpha, seed: self.seed, max_boundary: self.max_boundary }
    }
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie strictly between 0 and 1, got {a}"))
    }
}

fn parse_perms(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("at least one permutation is required".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row.
    data: PathBuf,
    /// Name of a string-valued environment column to set aside.
    #[arg(long)]
    env_column: Option<String>,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        read_data(&self.data, self.env_column.as_deref())
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Built-in model: example1, example2, codec_violation[:<noise scale>].
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// TOML model file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

impl ModelArgs {
    fn load(&self) -> Result<Option<DagSpec>> {
        match (&self.builtin, &self.spec) {
            (Some(name), _) => Ok(Some(builtin(name.parse::<Builtin>()?))),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Some(DagSpec::from_toml(&text)?))
            }
            (None, None) => Ok(None),
        }
    }

    fn describe(&self) -> String {
        match (&self.builtin, &self.spec) {
            (Some(name), _) => format!("builtin {name}"),
            (None, Some(path)) => format!("spec {}", path.display()),
            (None, None) => "none".into(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dependence coefficient T_n(target, z) or T_n(target, z | given).
    Codec {
        #[arg(long)]
        target: String,
        /// Predictor columns (repeat or comma-separate).
        #[arg(long, required = true, value_delimiter = ',')]
        z: Vec<String>,
        /// Conditioning columns.
        #[arg(long, value_delimiter = ',')]
        given: Vec<String>,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Forward stepwise Markov-boundary selection.
    Foci {
        #[arg(long)]
        target: String,
        /// Restrict the candidates (default: every other column).
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Parental sets of the target from observational data.
    Dagfoci {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Refine parental sets with a do-intervention on the target.
    Intervene {
        #[arg(long)]
        target: String,
        /// Observational and interventional CSV files, or one file split by
        /// `--obs-env` / `--int-env`.
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long)]
        env_column: Option<String>,
        #[arg(long, requires = "int_env")]
        obs_env: Option<String>,
        #[arg(long, requires = "obs_env")]
        int_env: Option<String>,
    },
    /// Draw a sample from a structural equation model as CSV.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        /// Replace this node by a standard normal draw before sampling.
        #[arg(long = "do")]
        do_node: Option<String>,
        /// CSV destination (default: standard output).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Seeded multi-run benchmark, or a parameter sweep.
    Benchmark {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        target: Option<String>,
        /// Sample sizes (comma-separated). Default 10000.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, value_enum)]
        sweep: Option<Sweep>,
        /// Noise scales for the codec-gap sweep (default 0, 0.05, ..., 1).
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// Write a CSV table of the results here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    /// T_n(Y, X3) against max(T_n(Y, X1), T_n(Y, X2)) in the codec-violation model.
    CodecGap,
}

fn read_data(path: &Path, env_column: Option<&str>) -> Result<Dataset> {
    load_csv(path, env_column).with_context(|| format!("reading {}", path.display()))
}

fn columns(d: &Dataset, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|n| Ok(d.column_index(n)?)).collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let s = &cli.settings;
    if let Some(j) = s.jobs {
        ensure!(j >= 1, "--jobs must be at least 1");
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let report = match &cli.command {
        Command::Codec { target, z, given, data } => cmd_codec(s, target, z, given, data)?,
        Command::Foci { target, candidates, data } => cmd_foci(s, target, candidates, data)?,
        Command::Dagfoci { target, data } => cmd_dagfoci(s, target, data)?,
        Command::Intervene { target, files, env_column, obs_env, int_env } => {
            cmd_intervene(s, target, files, env_column.as_deref(), obs_env.as_deref(), int_env.as_deref())?
        }
        Command::Simulate { model, n, do_node, output } => cmd_simulate(s, model, *n, do_node.as_deref(), output.as_deref())?,
        Command::Benchmark { model, target, n, runs, sweep, alphas, plot_data } => {
            cmd_benchmark(s, model, target.as_deref(), n, *runs, *sweep, alphas, plot_data.as_deref())?
        }
    };
    report.emit(s)
}

fn cmd_codec(s: &Settings, target: &str, z: &[String], given: &[String], data: &DataArgs) -> Result<Report> {
    let d = data.load()?;
    let t = d.column_index(target)?;
    let (zi, xi) = (columns(&d, z)?, columns(&d, given)?);
    let v = codec_conditional(d.column(t), &d.view(&zi), &d.view(&xi), s.seed)?;

    let mut r = Report::new("codec", s);
    r.input("data", data.data.display().to_string());
    let z_names = fmt_set(&d, &zi);
    if xi.is_empty() {
        r.line(format!("T_n({target}, {z_names}) = {:.6}", v.t));
    } else {
        r.line(format!("T_n({target}, {z_names} | {}) = {:.6}", fmt_set(&d, &xi), v.t));
    }
    r.line(format!("numerator = {:.6}, denominator = {:.6}, n = {}", v.numerator, v.denominator, v.n_used));
    r.result(json!({ "target": target, "z": z, "given": given, "value": v }));
    Ok(r)
}

fn cmd_foci(s: &Settings, target: &str, candidates: &[String], data: &DataArgs) -> Result<Report> {
    let d = data.load()?;
    let t = d.column_index(target)?;
    let sel = if candidates.is_empty() {
        ColumnSelection::all_others(t, d.n_cols())?
    } else {
        ColumnSelection::new(t, columns(&d, candidates)?, d.n_cols())?
    };
    let mb = foci_select(&d, &sel, s.seed, s.max_boundary)?;

    let mut r = Report::new("foci", s);
    r.input("data", data.data.display().to_string());
    r.line(format!("target: {target}"));
    r.line("step  chosen  T_n".to_string());
    for step in &mb.trajectory {
        r.line(format!("{:<5} {:<7} {:.6}", step.step, d.name(step.chosen), step.value));
    }
    r.line(format!("boundary: {}", fmt_set(&d, &mb.sorted())));
    r.result(json!({ "target": target, "columns": d.names(), "boundary": mb }));
    Ok(r)
}

fn cmd_dagfoci(s: &Settings, target: &str, data: &DataArgs) -> Result<Report> {
    let d = data.load()?;
    let t = d.column_index(target)?;
    let out = dag_foci(&d, t, &s.config())?;

    let mut r = Report::new("dagfoci", s);
    r.input("data", data.data.display().to_string());
    r.line(format!("target: {target}"));
    parental_text(&mut r, &d, &out);
    r.result(json!({ "target": target, "columns": d.names(), "parental_sets": parental_json(&d, &out) }));
    Ok(r)
}

fn cmd_intervene(
    s: &Settings,
    target: &str,
    files: &[PathBuf],
    env_column: Option<&str>,
    obs_env: Option<&str>,
    int_env: Option<&str>,
) -> Result<Report> {
    let mut r = Report::new("intervene", s);
    let (obs, intv) = match (files, obs_env, int_env) {
        ([obs, intv], None, None) => {
            r.input("observational", obs.display().to_string());
            r.input("interventional", intv.display().to_string());
            (read_data(obs, env_column)?, read_data(intv, env_column)?)
        }
        ([file], Some(o), Some(i)) => {
            let column = env_column.context("--env-column is required with --obs-env/--int-env")?;
            let d = read_data(file, Some(column))?;
            r.input("data", file.display().to_string());
            r.input("observational", o.to_string());
            r.input("interventional", i.to_string());
            (filter_environment(&d, o)?, filter_environment(&d, i)?)
        }
        ([_], _, _) => bail!("a single data file needs --obs-env and --int-env"),
        _ => bail!("give either two data files or one file with --obs-env/--int-env"),
    };
    let t = obs.column_index(target)?;
    let out = dag_foci_interventional(&obs, &intv, t, &s.config())?;

    r.line(format!("target: {target}"));
    r.line("observational:".to_string());
    parental_text(&mut r, &obs, &out.observational);
    r.line(format!("interventional boundary: {}", fmt_set(&obs, &out.interventional_boundary.sorted())));
    r.line(format!("refined parental sets: {}", fmt_sets(&obs, &out.refined_parents)));
    r.line(format!("children: {}", fmt_set(&obs, &out.children)));
    r.result(json!({
        "target": target,
        "columns": obs.names(),
        "observational": parental_json(&obs, &out.observational),
        "interventional_boundary": out.interventional_boundary,
        "refined_parents": out.refined_parents,
        "children": out.children,
    }));
    Ok(r)
}

fn cmd_simulate(s: &Settings, model: &ModelArgs, n: usize, do_node: Option<&str>, output: Option<&Path>) -> Result<Report> {
    let mut spec = model.load()?.context("one of --builtin or --spec is required")?;
    if let Some(node) = do_node {
        spec = do_intervene(&spec, node, NoiseLaw::default())?;
    }
    let d = sample(&spec, n, s.seed)?;

    let mut r = Report::new("simulate", s);
    r.input("model", model.describe());
    r.line(format!("sampled {} rows of {} columns{}", d.n_rows(), d.n_cols(), do_node.map(|v| format!(" under do({v})")).unwrap_or_default()));
    match output {
        Some(path) => {
            save_csv(&d, path, None).with_context(|| format!("writing {}", path.display()))?;
            r.line(format!("written to {}", path.display()));
        }
        None => {
            write_csv(&d, std::io::stdout().lock(), None)?;
            // Standard output carries the CSV.
            r.to_stderr();
        }
    }
    r.result(json!({ "columns": d.names(), "n": n, "do": do_node, "output": output.map(|p| p.display().to_string()) }));
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_benchmark(
    s: &Settings,
    model: &ModelArgs,
    target: Option<&str>,
    n: &[usize],
    runs: usize,
    sweep: Option<Sweep>,
    alphas: &[f64],
    plot_data: Option<&Path>,
) -> Result<Report> {
    let grid = if n.is_empty() { vec![10_000] } else { n.to_vec() };
    let mut r = Report::new("benchmark", s);

    if let Some(Sweep::CodecGap) = sweep {
        ensure!(grid.len() == 1, "the codec-gap sweep takes a single --n");
        let alphas: Vec<f64> =
            if alphas.is_empty() { (0..=20).map(|k| k as f64 * 0.05).collect() } else { alphas.to_vec() };
        let points = codec_gap_sweep(&alphas, grid[0], s.seed)?;
        r.input("sweep", "codec-gap".to_string());
        r.line(format!("n = {}", grid[0]));
        r.line("alpha   T_n(Y,X3)  max(T_n(Y,X1),T_n(Y,X2))".to_string());
        let mut table = String::from("alpha,t_x3,t_max_x1_x2\n");
        for p in &points {
            r.line(format!("{:<7.3} {:<10.6} {:.6}", p.alpha, p.t_x3, p.t_max_x1_x2));
            table.push_str(&format!("{},{},{}\n", p.alpha, p.t_x3, p.t_max_x1_x2));
        }
        write_plot_data(&mut r, plot_data, &table)?;
        r.result(json!({ "sweep": "codec-gap", "n": grid[0], "points": points }));
        return Ok(r);
    }

    let spec = model.load()?.context("one of --builtin or --spec is required")?;
    let target = target.context("--target is required")?;
    let summaries = benchmark(&spec, target, &grid, runs, s.seed, &s.config())?;

    r.input("model", model.describe());
    r.line(format!("target: {target}, runs per n: {runs}"));
    let header = "n,runs,failed_runs,exact_recovery_count,non_unique_count,false_positive_runs,mean_false,mean_missing,mean_jaccard";
    r.line(format!("{:<7} {:>5} {:>7} {:>6} {:>11} {:>8} {:>11} {:>13} {:>13}", "n", "runs", "failed", "exact", "non-unique", "fp-runs", "mean-false", "mean-missing", "mean-jaccard"));
    let mut table = format!("{header}\n");
    for m in summaries.values() {
        r.line(format!(
            "{:<7} {:>5} {:>7} {:>6} {:>11} {:>8} {:>11.3} {:>13.3} {:>13.3}",
            m.n, m.runs, m.failed_runs, m.exact_recovery_count, m.non_unique_count, m.false_positive_runs, m.mean_false, m.mean_missing, m.mean_jaccard
        ));
        table.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            m.n, m.runs, m.failed_runs, m.exact_recovery_count, m.non_unique_count, m.false_positive_runs, m.mean_false, m.mean_missing, m.mean_jaccard
        ));
    }
    write_plot_data(&mut r, plot_data, &table)?;
    let summaries: Vec<Value> = summaries.values().map(|m| json!(m)).collect();
    r.result(json!({ "target": target, "runs": runs, "columns": spec.names(), "summaries": summaries }));
    Ok(r)
}

fn write_plot_data(r: &mut Report, path: Option<&Path>, table: &str) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, table).with_context(|| format!("writing {}", path.display()))?;
        r.line(format!("plot data written to {}", path.display()));
    }
    Ok(())
}
