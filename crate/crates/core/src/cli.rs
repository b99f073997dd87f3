//! Command-line front end.
//!
//! Exit codes: 0 success, 1 reproduction failure, 2 parse error, 3 domain
//! error, 4 incomplete case coverage. Failures also print one JSON line on
//! stderr.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde_json::{json, Value as Json};

use crate::dnumbers::{ecr_combine_with_conflict, DNumber, MatrixDocument, NonExclusivityMatrix};
use crate::error::Error;
use crate::fixtures::DNumbersDocument;
use crate::game::{BimatrixGame, Player};
use crate::pipeline::{analyze_game, run_scenario, GameAnalysis, LinguisticScale, PayoffColumn, Prepared, ScenarioSpec};
use crate::reproduce::{self, Check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dnt-game", version, about = "D numbers, linguistic evaluation and bimatrix games")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Overrides the tolerance of approximate reproduction checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Base non-exclusivity matrix of a linguistic scale.
    Nonexcl { scale_file: PathBuf },
    /// Left-folds the D numbers of a file with the ECR rule.
    Combine { dnumbers_file: PathBuf, matrix_file: PathBuf },
    /// Runs a scenario or analyses a ready-made game.
    Run {
        file: PathBuf,
        /// One payoff column with all intermediates: an opponent strategy,
        /// or `player|strategy`.
        #[arg(long, conflicts_with = "full", required_unless_present = "full")]
        column: Option<String>,
        /// Payoff matrix, equilibria, rankings and best-response counts.
        #[arg(long)]
        full: bool,
    },
    /// Recomputes every published value from the embedded fixtures.
    ReproducePaper {
        /// Run one check group only.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(reproduce::GROUPS))]
        only: Option<String>,
        /// Corrupt the expected value of one check (self-test).
        #[arg(long)]
        perturb: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Reproduction(Vec<String>),
    Parse { path: Option<String>, message: String },
    Domain { step: Option<String>, error: Error },
    Coverage(Vec<String>),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Reproduction(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Domain { .. } => 3,
            CliError::Coverage(_) => 4,
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        CliError::Parse { path: None, message: message.into() }
    }

    /// Machine-readable single-line description.
    pub fn to_json(&self) -> Json {
        match self {
            CliError::Reproduction(ids) => json!({
                "error": "reproduction", "code": 1, "failed": ids,
            }),
            CliError::Parse { path, message } => json!({
                "error": "parse", "code": 2, "path": path, "message": message,
            }),
            CliError::Domain { step, error } => json!({
                "error": "domain", "code": 3, "step": step, "message": error.to_string(),
            }),
            CliError::Coverage(missing) => json!({
                "error": "coverage", "code": 4, "missing": missing,
                "message": format!("no evaluation case for {}", missing.join(", ")),
            }),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::IncompleteCoverage(missing) => CliError::Coverage(missing),
            error => CliError::Domain { step: None, error },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_json(path: &Path) -> CliResult<Json> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

/// Deserializes `value`, reporting the failing field as a dotted path
/// under `prefix`.
fn decode<T: DeserializeOwned>(value: Json, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, p) => p.to_string(),
            (false, ".") => prefix.to_string(),
            (false, p) => format!("{prefix}.{p}"),
        };
        CliError::Parse { path: Some(path), message: e.into_inner().to_string() }
    })
}

fn f3(x: f64) -> String {
    // Avoid "-0.000".
    let s = format!("{x:.3}");
    if s == "-0.000" { "0.000".into() } else { s }
}

/// Focal sets with their masses; terms that would print as 0.000 are
/// counted instead of listed.
fn render_dnumber(d: &DNumber) -> String {
    let (shown, hidden): (Vec<_>, Vec<_>) = d.focal_sets().partition(|(_, m)| *m >= 5e-4);
    let mut parts: Vec<String> = shown
        .into_iter()
        .map(|(s, m)| format!("{} {}", d.frame().render(s), f3(m)))
        .collect();
    if !hidden.is_empty() {
        parts.push(format!("(+{} below 0.0005)", hidden.len()));
    }
    parts.join("  ")
}

fn records_json(d: &DNumber) -> Json {
    serde_json::to_value(d.to_records()).expect("records serialize")
}

fn pad_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| if c == 0 { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn cmd_nonexcl(path: &Path, format: Format) -> CliResult<String> {
    let doc = read_json(path)?;
    let scale: LinguisticScale = match doc {
        Json::Object(mut map) if map.contains_key("scale") => {
            decode(map.remove("scale").expect("key present"), "scale")?
        }
        other => decode(other, "")?,
    };
    let m = scale.nonexclusivity()?;
    let doc = m.to_document();
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&doc).expect("matrix serializes")),
        Format::Table => {
            let mut rows = vec![std::iter::once(String::new()).chain(doc.labels.iter().cloned()).collect()];
            for (l, r) in doc.labels.iter().zip(&doc.rows) {
                rows.push(std::iter::once(l.clone()).chain(r.iter().map(|x| f3(*x))).collect());
            }
            pad_table(&rows)
        }
    })
}

fn pretty(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn cmd_combine(dpath: &Path, mpath: &Path, format: Format) -> CliResult<String> {
    let ddoc: DNumbersDocument = decode(read_json(dpath)?, "")?;
    let mdoc: MatrixDocument = decode(read_json(mpath)?, "")?;
    let (_, ds) = ddoc.parse()?;
    let m = NonExclusivityMatrix::from_document(&mdoc)?;
    if ds.len() < 2 {
        return Err(CliError::parse(format!("need at least two D numbers, found {}", ds.len())));
    }
    let mut acc = ds[0].clone();
    let mut conflicts = Vec::new();
    for (k, d) in ds.iter().enumerate().skip(1) {
        let out = ecr_combine_with_conflict(&acc, d, &m).map_err(|error| match error {
            Error::TotalExclusiveConflict { .. } => CliError::Domain {
                step: Some(format!("step {k}: combining D1..D{k} with D{}", k + 1)),
                error,
            },
            e => e.into(),
        })?;
        conflicts.push(out.conflict);
        acc = out.combined;
    }
    Ok(match format {
        Format::Json => pretty(&json!({
            "frame": acc.frame().labels(),
            "steps": conflicts.iter().enumerate().map(|(k, c)| json!({"step": k + 1, "conflict": c})).collect::<Vec<_>>(),
            "result": records_json(&acc),
        })),
        Format::Table => {
            let mut s = String::new();
            for (k, c) in conflicts.iter().enumerate() {
                writeln!(s, "step {}: K_D = {}", k + 1, f3(*c)).unwrap();
            }
            let rows: Vec<Vec<String>> = acc
                .focal_sets()
                .map(|(f, x)| vec![acc.frame().render(f), f3(x)])
                .collect();
            s.push_str(&pad_table(&rows));
            s
        }
    })
}

enum Document {
    Scenario(ScenarioSpec),
    Game(BimatrixGame),
}

fn load_run_document(path: &Path) -> CliResult<Document> {
    let doc = read_json(path)?;
    let kind = doc.as_object().map(|o| (o.contains_key("cases"), o.contains_key("payoffs")));
    match kind {
        Some((true, _)) => {
            let spec: ScenarioSpec = decode(doc, "")?;
            spec.validate().map_err(|e| CliError::parse(e.to_string()))?;
            Ok(Document::Scenario(spec))
        }
        Some((false, true)) => {
            let g: BimatrixGame = decode(doc, "")?;
            g.validate().map_err(|e| CliError::parse(e.to_string()))?;
            Ok(Document::Game(g))
        }
        _ => Err(CliError::parse("expected a scenario (with `cases`) or a game (with `payoffs`)")),
    }
}

fn select_case<'a>(spec: &'a ScenarioSpec, key: &str) -> CliResult<&'a crate::pipeline::EvaluationCase> {
    if let Some((player, opp)) = key.split_once('|') {
        return spec
            .find_case(player, opp)
            .ok_or_else(|| CliError::Coverage(vec![key.to_string()]));
    }
    let hits: Vec<_> = spec.cases.iter().filter(|c| c.opponent_strategy == key).collect();
    match hits.as_slice() {
        [one] => Ok(one),
        [] => {
            // Name the case that would be needed.
            let owner = spec.players.iter().position(|p| p.strategies.iter().any(|s| s == key));
            let missing = match owner {
                Some(i) => format!("{}|{key}", spec.players[1 - i].name),
                None => key.to_string(),
            };
            Err(CliError::Coverage(vec![missing]))
        }
        _ => Err(CliError::parse(format!("`{key}` is ambiguous, use player|strategy"))),
    }
}

fn column_json(col: &PayoffColumn, prepared: &Prepared) -> Json {
    let cells: serde_json::Map<String, Json> = col
        .cells
        .iter()
        .map(|(s, t)| {
            let criteria: serde_json::Map<String, Json> =
                t.criteria.iter().map(|(c, d)| (c.clone(), records_json(d))).collect();
            (
                s.clone(),
                json!({
                    "criteria": criteria,
                    "average": records_json(&t.fusion.average),
                    "fused": records_json(&t.fusion.fused),
                    "distribution": t.chain.distribution,
                    "fuzzy_payoff": t.chain.fuzzy,
                    "payoff": t.chain.crisp,
                }),
            )
        })
        .collect();
    json!({
        "player": col.player,
        "opponent_strategy": col.opponent_strategy,
        "graded_means": prepared.graded_means,
        "weights": prepared.weights,
        "cells": cells,
        "payoffs": col.payoffs(),
    })
}

fn column_table(col: &PayoffColumn, prepared: &Prepared) -> String {
    let mut s = String::new();
    writeln!(s, "{} given {}", col.player, col.opponent_strategy).unwrap();
    let gm: Vec<String> = prepared.graded_means.iter().map(|(c, x)| format!("{c} {}", f3(*x))).collect();
    writeln!(s, "graded means: {}", gm.join("  ")).unwrap();
    let w: Vec<String> = prepared.weights.iter().map(|(c, x)| format!("{c} {}", f3(*x))).collect();
    writeln!(s, "weights: {}", w.join("  ")).unwrap();
    for (strategy, t) in &col.cells {
        writeln!(s, "\n{strategy}").unwrap();
        let mut rows: Vec<Vec<String>> = t
            .criteria
            .iter()
            .map(|(c, d)| vec![format!("  {c}"), render_dnumber(d)])
            .collect();
        rows.push(vec!["  average".into(), render_dnumber(&t.fusion.average)]);
        rows.push(vec!["  fused".into(), render_dnumber(&t.fusion.fused)]);
        let dist: Vec<String> = t.chain.distribution.iter().map(|(l, p)| format!("{l} {}", f3(*p))).collect();
        rows.push(vec!["  distribution".into(), dist.join("  ")]);
        let [a1, a2, a3] = t.chain.fuzzy.as_array();
        rows.push(vec!["  fuzzy payoff".into(), format!("({}, {}, {})", f3(a1), f3(a2), f3(a3))]);
        rows.push(vec!["  payoff".into(), f3(t.chain.crisp)]);
        // Left-align the value column.
        let w = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
        for r in rows {
            writeln!(s, "{:<w$}  {}", r[0], r[1]).unwrap();
        }
    }
    let p: Vec<String> = col.payoffs().iter().map(|(k, v)| format!("{k} {}", f3(*v))).collect();
    writeln!(s, "\npayoffs: {}", p.join("  ")).unwrap();
    s
}

fn rank_cell(rank: usize, tied: bool) -> String {
    if tied { format!("{rank}=") } else { rank.to_string() }
}

fn game_table(g: &BimatrixGame, a: &GameAnalysis) -> String {
    let mut s = String::new();
    writeln!(s, "payoff matrix ({}, {})", g.row_player, g.col_player).unwrap();
    let mut rows = vec![std::iter::once(String::new()).chain(g.col_strategies.iter().cloned()).collect::<Vec<_>>()];
    for (i, r) in g.row_strategies.iter().enumerate() {
        let mut line = vec![r.clone()];
        line.extend(g.payoffs[i].iter().map(|[u1, u2]| format!("({}, {})", f3(*u1), f3(*u2))));
        rows.push(line);
    }
    s.push_str(&pad_table(&rows));
    let eq: Vec<String> = a.equilibria.iter().map(|c| g.label(*c)).collect();
    writeln!(s, "\npure equilibria: {}", if eq.is_empty() { "none".into() } else { eq.join("; ") }).unwrap();
    for (player, r) in [(Player::Row, &a.row_rankings), (Player::Col, &a.col_rankings)] {
        writeln!(s, "\n{} rankings (1 = best, = marks a tie)", g.player_name(player)).unwrap();
        let own = g.strategies(player);
        let opp = g.strategies(player.opponent());
        let mut rows = vec![std::iter::once(String::new()).chain(own.iter().cloned()).collect::<Vec<_>>()];
        for (k, o) in opp.iter().enumerate() {
            let mut line = vec![format!("given {o}")];
            line.extend((0..own.len()).map(|i| rank_cell(r.ranks[k][i], r.tied[k][i])));
            rows.push(line);
        }
        s.push_str(&pad_table(&rows));
    }
    for (player, counts) in [(Player::Row, &a.row_best_response_counts), (Player::Col, &a.col_best_response_counts)] {
        let c: Vec<String> = g.strategies(player).iter().zip(counts).map(|(l, n)| format!("{l} {n}")).collect();
        writeln!(s, "\n{} best-response counts: {}", g.player_name(player), c.join("  ")).unwrap();
    }
    s
}

fn game_json(g: &BimatrixGame, a: &GameAnalysis) -> Json {
    let rankings = |player: Player, r: &crate::game::Rankings| -> Json {
        let own = g.strategies(player);
        let m: serde_json::Map<String, Json> = g
            .strategies(player.opponent())
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let ranks: IndexMap<&str, usize> = own.iter().map(|s| s.as_str()).zip(r.ranks[k].iter().copied()).collect();
                (o.clone(), json!(ranks))
            })
            .collect();
        Json::Object(m)
    };
    let counts = |player: Player, c: &[usize]| -> Json {
        let m: IndexMap<&str, usize> = g.strategies(player).iter().map(|s| s.as_str()).zip(c.iter().copied()).collect();
        json!(m)
    };
    json!({
        "game": g,
        "equilibria": a.equilibria.iter().map(|c| g.label(*c)).collect::<Vec<_>>(),
        "rankings": {
            g.row_player.clone(): rankings(Player::Row, &a.row_rankings),
            g.col_player.clone(): rankings(Player::Col, &a.col_rankings),
        },
        "best_response_counts": {
            g.row_player.clone(): counts(Player::Row, &a.row_best_response_counts),
            g.col_player.clone(): counts(Player::Col, &a.col_best_response_counts),
        },
    })
}

fn cmd_run(path: &Path, column: Option<&str>, format: Format) -> CliResult<String> {
    let doc = load_run_document(path)?;
    match (doc, column) {
        (Document::Scenario(spec), Some(key)) => {
            let case = select_case(&spec, key)?;
            let prepared = Prepared::new(&spec)?;
            let col = prepared.column(case, &spec)?;
            Ok(match format {
                Format::Json => pretty(&column_json(&col, &prepared)),
                Format::Table => column_table(&col, &prepared),
            })
        }
        (Document::Scenario(spec), None) => {
            let report = run_scenario(&spec)?;
            Ok(match format {
                Format::Json => {
                    let mut v = game_json(&report.game, &report.analysis);
                    v["graded_means"] = json!(report.graded_means);
                    v["weights"] = json!(report.weights);
                    pretty(&v)
                }
                Format::Table => game_table(&report.game, &report.analysis),
            })
        }
        (Document::Game(_), Some(_)) => Err(CliError::parse("--column needs a scenario document, not a game")),
        (Document::Game(g), None) => {
            let a = analyze_game(&g);
            Ok(match format {
                Format::Json => pretty(&game_json(&g, &a)),
                Format::Table => game_table(&g, &a),
            })
        }
    }
}

fn checks_table(checks: &[Check]) -> String {
    let mut rows = vec![vec![
        "".into(),
        "check".into(),
        "expected".into(),
        "actual".into(),
        "delta".into(),
        "tol".into(),
        "source".into(),
    ]];
    for c in checks {
        rows.push(vec![
            if c.passed() { "PASS".into() } else { "FAIL".into() },
            c.id.clone(),
            c.expected.to_string(),
            c.actual.to_string(),
            c.delta().map(|d| format!("{d:.1e}")).unwrap_or_else(|| "-".into()),
            if c.tolerance > 0.0 { format!("{:.0e}", c.tolerance) } else { "exact".into() },
            format!("[{}]", c.citation),
        ]);
    }
    let mut s = pad_table(&rows);
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(s, "{} checks, {} passed, {} failed", checks.len(), checks.len() - failed, failed).unwrap();
    s
}

/// Runs a parsed command and returns what goes to stdout. A failed
/// reproduction still renders its report, returned alongside the error.
pub fn execute(cli: &Cli) -> (String, Option<CliError>) {
    let result = match &cli.command {
        Command::Nonexcl { scale_file } => cmd_nonexcl(scale_file, cli.format),
        Command::Combine { dnumbers_file, matrix_file } => cmd_combine(dnumbers_file, matrix_file, cli.format),
        Command::Run { file, column, .. } => cmd_run(file, column.as_deref(), cli.format),
        Command::ReproducePaper { only, perturb } => {
            let opts = reproduce::Options {
                only: only.clone(),
                tolerance: cli.tolerance,
                perturb: perturb.clone(),
            };
            match reproduce::run(&opts) {
                Err(e) => Err(CliError::parse(format!("reproduce-paper: {e}"))),
                Ok(checks) => {
                    let out = match cli.format {
                        Format::Json => pretty(&json!({
                            "checks": checks.iter().map(|c| {
                                let mut v = serde_json::to_value(c).expect("check serializes");
                                v["passed"] = json!(c.passed());
                                v["delta"] = json!(c.delta());
                                v
                            }).collect::<Vec<_>>(),
                        })),
                        Format::Table => checks_table(&checks),
                    };
                    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.id.clone()).collect();
                    return (out, (!failed.is_empty()).then_some(CliError::Reproduction(failed)));
                }
            }
        }
    };
    match result {
        Ok(s) => (s, None),
        Err(e) => (String::new(), Some(e)),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (out, err) = execute(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match err {
        None => 0,
        Some(e) => {
            eprintln!("{}", e.to_json());
            e.code()
        }
    }
}
