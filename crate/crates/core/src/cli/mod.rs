//! Command-line front end: `generate`, `batch`, `heatmap` and `verify`.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors.
//! Artifacts go to standard output (or files); diagnostics to standard error.

mod args;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

pub use args::FileConfig;
use args::{BatchArgs, Cli, Command, GenerateArgs, HeatmapArgs, HeatmapFormat, VerifyArgs};

use crate::difficulty::DifficultyGoal;
use crate::evolution::{evolve, ArchiveExport};
use crate::experiment::{
    compare_to_reference, fitness_grid_csv, run_batch, timing_csv, value_grid_csv, BatchConfig, BatchReport, GridMode,
    ReferenceError, ReferenceTable, TolerancePolicy,
};
use crate::genotype::{BehaviorDescriptor, MovementType, WeaponType};

/// Environment variable consulted for `generate` when `--seed` is absent.
pub const SEED_ENV: &str = "ENEMYFORGE_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Entry point of the binary. Reads the seed variable from the process
/// environment and writes to the process streams.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, env_seed.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one invocation against the given streams and returns the exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a, env_seed, out, err),
        Command::Batch(a) => batch(a, err),
        Command::Heatmap(a) => heatmap(a, out),
        Command::Verify(a) => verify(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_seed(flag: Option<u64>, file: Option<u64>, env: Option<&str>, err: &mut dyn Write) -> Result<u64, CliError> {
    if let Some(seed) = flag.or(file) {
        return Ok(seed);
    }
    if let Some(text) = env {
        return text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer (got `{text}`)")));
    }
    let seed = rand::random::<u64>();
    let _ = writeln!(err, "seed: {seed}");
    Ok(seed)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| runtime(format!("writing {}: {e}", path.display())))
}

fn generate(
    a: GenerateArgs,
    env_seed: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = FileConfig::load(a.search.config.as_deref())?;
    let goal = match (a.difficulty, a.preset.as_deref()) {
        (Some(d), _) => args::parse_goal(d)?,
        (None, Some(p)) => args::parse_preset(p)?,
        (None, None) => match (file.difficulty, file.preset.as_deref()) {
            (Some(d), _) => args::parse_goal(d)?,
            (None, Some(p)) => args::parse_preset(p)?,
            (None, None) => return Err(CliError::Usage("one of --difficulty or --preset is required".into())),
        },
    };
    let threshold = a.threshold.or(file.threshold);
    if threshold.is_some_and(|t| t.is_nan() || t < 0.0) {
        return Err(CliError::Usage("--threshold must be non-negative".into()));
    }
    let seed = resolve_seed(a.seed, file.seed, env_seed, err)?;
    let config = args::evolution_config(&a.search, &file, goal, seed)?;

    let result = evolve(&config).map_err(runtime)?;
    let export = result.export(threshold.unwrap_or(f64::INFINITY));
    let mut json = serde_json::to_string_pretty(&export).map_err(runtime)?;
    json.push('\n');
    match a.out.or(file.out) {
        Some(path) => write_file(&path, json.as_bytes())?,
        None => out.write_all(json.as_bytes()).map_err(runtime)?,
    }
    let _ = writeln!(
        err,
        "goal {goal}: {}/42 cells occupied, qd-score {:.3}, {:.3} s",
        result.archive.occupied_count(),
        result.archive.qd_score(),
        result.wall_time.as_secs_f64()
    );
    Ok(0)
}

fn goal_file_stem(goal: DifficultyGoal) -> String {
    goal.value().to_string()
}

fn batch(a: BatchArgs, err: &mut dyn Write) -> Result<i32, CliError> {
    let file = FileConfig::load(a.search.config.as_deref())?;
    let goals = match (a.difficulties, file.difficulties.clone()) {
        (Some(text), _) => args::parse_goal_list(&args::GoalList::Text(text))?,
        (None, Some(list)) => args::parse_goal_list(&list)?,
        (None, None) => args::parse_goal_list(&args::GoalList::Numbers(
            DifficultyGoal::PRESETS.iter().map(|(_, g)| g.value()).collect(),
        ))?,
    };
    let runs = a.runs.or(file.runs).unwrap_or(100);
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let out_dir = a.out_dir.or(file.out_dir.clone()).ok_or_else(|| CliError::Usage("--out-dir is required".into()))?;
    let base_config = args::evolution_config(&a.search, &file, goals[0], 0)?;
    let config = BatchConfig {
        goals,
        runs_per_goal: runs,
        base_config,
        base_seed: a.base_seed.or(file.base_seed).unwrap_or(0),
        parallelism: a.jobs.or(file.jobs).unwrap_or(0),
    };

    let result = run_batch(&config).map_err(runtime)?;
    std::fs::create_dir_all(&out_dir).map_err(|e| runtime(format!("creating {}: {e}", out_dir.display())))?;
    for summary in &result.per_goal {
        let stem = goal_file_stem(summary.goal);
        let grid = fitness_grid_csv(&summary.cells, GridMode::Report);
        write_file(&out_dir.join(format!("fitness_{stem}.csv")), grid.as_bytes())?;
        let report = BatchReport::new(&result, summary);
        let mut json = serde_json::to_string_pretty(&report).map_err(runtime)?;
        json.push('\n');
        write_file(&out_dir.join(format!("report_{stem}.json")), json.as_bytes())?;
        let _ = writeln!(err, "goal {}: {runs} runs, mean wall time {:.4} s", summary.goal, summary.timing.mean);
    }
    let timing: Vec<_> = result.per_goal.iter().map(|g| g.timing).collect();
    write_file(&out_dir.join("timing.csv"), timing_csv(&timing).as_bytes())?;
    Ok(0)
}

/// Converts a parse error position into a byte offset within `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let prefix: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (prefix + column.saturating_sub(1)).min(text.len())
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| runtime(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        runtime(format!(
            "{}: malformed JSON at byte {} (line {}, column {}): {e}",
            path.display(),
            byte_offset(&text, e.line(), e.column()),
            e.line(),
            e.column()
        ))
    })
}

/// Per-cell values of an archive export or a batch report, row-major.
fn grid_values(value: serde_json::Value, path: &Path) -> Result<Vec<Option<f64>>, CliError> {
    let is_report = value.get("runs").is_some();
    let mut grid = vec![None; BehaviorDescriptor::CELLS];
    let mut place = |m: MovementType, w: WeaponType, v: Option<f64>| {
        grid[BehaviorDescriptor::new(m, w).index()] = v;
    };
    if is_report {
        let report: BatchReport = serde_json::from_value(value)
            .map_err(|e| runtime(format!("{}: not a batch report: {e}", path.display())))?;
        for c in &report.cells {
            place(c.movement, c.weapon, (!c.is_empty()).then_some(c.mean));
        }
    } else {
        let archive: ArchiveExport = serde_json::from_value(value)
            .map_err(|e| runtime(format!("{}: not an archive export: {e}", path.display())))?;
        for c in &archive.cells {
            place(c.movement, c.weapon, c.elite.map(|e| e.fitness));
        }
    }
    Ok(grid)
}

fn ascii_grid(values: &[Option<f64>]) -> String {
    let row_width = MovementType::ALL.iter().map(|m| m.name().len()).max().unwrap_or(0);
    let widths: Vec<usize> = WeaponType::ALL.iter().map(|w| w.name().len().max(6)).collect();
    let mut s = format!("{:row_width$}", "");
    for (w, width) in WeaponType::ALL.iter().zip(&widths) {
        s.push_str(&format!("  {:>width$}", w.name()));
    }
    s.push('\n');
    for m in MovementType::ALL {
        s.push_str(&format!("{:row_width$}", m.name()));
        for (w, width) in WeaponType::ALL.iter().zip(&widths) {
            let cell = match values[BehaviorDescriptor::new(m, *w).index()] {
                Some(v) => format!("{v:.2}"),
                None => "--".into(),
            };
            s.push_str(&format!("  {cell:>width$}"));
        }
        s.push('\n');
    }
    s
}

fn heatmap(a: HeatmapArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let values = grid_values(read_json(&a.input)?, &a.input)?;
    let text = match a.format {
        HeatmapFormat::Ascii => ascii_grid(&values),
        HeatmapFormat::Csv => value_grid_csv(&values),
    };
    out.write_all(text.as_bytes()).map_err(runtime)?;
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if !(a.floor >= 0.0 && a.std_multiplier >= 0.0) {
        return Err(CliError::Usage("--floor and --std-multiplier must be non-negative".into()));
    }
    let report: BatchReport = serde_json::from_value(read_json(&a.report)?)
        .map_err(|e| runtime(format!("{}: not a batch report: {e}", a.report.display())))?;
    let reference = match &a.reference {
        Some(path) => ReferenceTable::from_path(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?,
        None => ReferenceTable::published(),
    };
    let policy = TolerancePolicy { floor: a.floor, std_multiplier: a.std_multiplier };
    let cmp = match compare_to_reference(report.goal, &report.cells, &reference, policy) {
        Ok(c) => c,
        Err(e @ ReferenceError::MissingCell { .. }) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(runtime(e)),
    };

    let mut table = String::from("movement    weapon         ours  reference  tolerance  status\n");
    for c in &cmp.cells {
        table.push_str(&format!(
            "{:<10}  {:<11}  {:>7.3}  {:>9.3}  {:>9.3}  {}\n",
            c.movement.name(),
            c.weapon.name(),
            c.ours,
            c.reference_mean,
            c.tolerance,
            if c.pass { "ok" } else { "FAIL" }
        ));
    }
    table.push_str(&format!("{}/{} cells within tolerance\n", cmp.passed, cmp.total));
    out.write_all(table.as_bytes()).map_err(runtime)?;

    if cmp.all_passed() {
        return Ok(0);
    }
    let failing: Vec<String> = cmp.failures().map(|c| format!("({}, {})", c.movement, c.weapon)).collect();
    let _ = writeln!(err, "cells outside tolerance: {}", failing.join(", "));
    Ok(1)
}
