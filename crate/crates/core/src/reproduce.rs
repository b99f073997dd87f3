//! Re-derives every published number from the embedded fixtures and
//! compares it with the printed value.

use std::fmt;

use serde::Serialize;

use crate::dnumbers::{ecr_combine_with_conflict, ecr_product_table, extend_nonexcl, DFocalSet, DFrame};
use crate::error::{Error, Result};
use crate::fixtures::{self, tags, FixtureSet};
use crate::game::{best_response_frequency, pure_nash_equilibria, strategy_rankings, BimatrixGame, Cell, Player};
use crate::pipeline::{build_payoff_column, graded_means, normalize_weights};

/// Check groups, in the order they run.
pub const GROUPS: [&str; 8] = [
    "nonexcl",
    "ecr",
    "weights",
    "votes",
    "fusion",
    "column",
    "equilibria",
    "rankings",
];

/// Slack for published values that are exact in binary-unfriendly decimals.
const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x:.3}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// One compared value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub group: &'static str,
    pub citation: &'static str,
    pub expected: Value,
    pub actual: Value,
    /// Absolute tolerance; 0 means exact.
    pub tolerance: f64,
}

impl Check {
    pub fn delta(&self) -> Option<f64> {
        match (&self.expected, &self.actual) {
            (Value::Number(e), Value::Number(a)) => Some((a - e).abs()),
            _ => None,
        }
    }

    pub fn passed(&self) -> bool {
        match (&self.expected, &self.actual) {
            (Value::Number(e), Value::Number(a)) => (a - e).abs() <= self.tolerance + EXACT_SLACK,
            (e, a) => e == a,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Run a single group.
    pub only: Option<String>,
    /// Replaces the tolerance of every approximate numeric check.
    pub tolerance: Option<f64>,
    /// Check id whose expected value is deliberately corrupted.
    pub perturb: Option<String>,
}

struct Collector {
    group: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn num(&mut self, id: String, citation: &'static str, expected: f64, actual: f64, tolerance: f64) {
        self.checks.push(Check {
            id,
            group: self.group,
            citation,
            expected: Value::Number(expected),
            actual: Value::Number(actual),
            tolerance,
        });
    }

    fn text(&mut self, id: String, citation: &'static str, expected: String, actual: String) {
        self.checks.push(Check {
            id,
            group: self.group,
            citation,
            expected: Value::Text(expected),
            actual: Value::Text(actual),
            tolerance: 0.0,
        });
    }
}

fn focal(frame: &DFrame, labels: &[&str]) -> Result<DFocalSet> {
    frame.focal(labels)
}

fn nonexcl(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let m = f.scale.nonexclusivity()?;
    let frame = m.frame().clone();
    let n = frame.len();
    let mut published = vec![vec![false; n + 1]; n + 1];
    for (a, b, v) in fixtures::SCALE_MATRIX_PAIRS {
        let i = frame.index_of(a).ok_or_else(|| Error::UnknownLabel(a.into()))?;
        let j = frame.index_of(b).ok_or_else(|| Error::UnknownLabel(b.into()))?;
        published[i][j] = true;
        published[j][i] = true;
        c.num(format!("nonexcl/{a}~{b}"), tags::SCALE_MATRIX, v, m.get(i, j), 5e-4);
        c.num(format!("nonexcl/{b}~{a}"), tags::SCALE_MATRIX, v, m.get(j, i), 5e-4);
    }
    let mut largest_other: f64 = 0.0;
    for (i, row) in published.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if i != j && !p {
                largest_other = largest_other.max(m.get(i, j).abs());
            }
        }
    }
    c.num("nonexcl/other-off-diagonal".into(), tags::SCALE_MATRIX, 0.0, largest_other, 0.0);
    let (b, cc, v) = fixtures::SCALE_SET_PAIR;
    let actual = extend_nonexcl(&m, focal(&frame, b)?, focal(&frame, cc)?)?;
    c.num(
        format!("nonexcl/{}~{}", frame.render(focal(&frame, b)?), frame.render(focal(&frame, cc)?)),
        tags::SCALE_MATRIX,
        v,
        actual,
        5e-4,
    );
    Ok(())
}

fn ecr(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let frame = &f.two_source_frame;
    let m = &f.two_source_matrix;
    let [d1, d2] = &f.two_sources;
    let out = ecr_combine_with_conflict(d1, d2, m)?;
    c.num("ecr/conflict".into(), tags::TWO_SOURCES, fixtures::TWO_SOURCES_CONFLICT, out.conflict, 5e-4);
    for (labels, v) in fixtures::TWO_SOURCES_RESULT {
        let s = focal(frame, labels)?;
        c.num(format!("ecr/{}", frame.render(s)), tags::TWO_SOURCES, v, out.combined.mass(s), 5e-4);
    }
    c.num("ecr/total-mass".into(), tags::TWO_SOURCES, 1.0, out.combined.total_mass(), 1e-9);
    let table = ecr_product_table(d1, d2, m)?;
    for (l, r, t, v) in fixtures::PRODUCT_TABLE {
        let (l, r, t) = (focal(frame, l)?, focal(frame, r)?, focal(frame, t)?);
        let id = format!("ecr/table/{}x{}", frame.render(l), frame.render(r));
        match table.iter().find(|cell| cell.left == l && cell.right == r) {
            Some(cell) => {
                c.text(format!("{id}/target"), tags::PRODUCT_TABLE, frame.render(t), frame.render(cell.target));
                c.num(format!("{id}/mass"), tags::PRODUCT_TABLE, v, cell.routed, 5e-4);
            }
            None => c.text(id, tags::PRODUCT_TABLE, frame.render(t), "missing".into()),
        }
    }
    for (i, a) in fixtures::POWERSET_ORDER.iter().enumerate() {
        for (j, b) in fixtures::POWERSET_ORDER.iter().enumerate() {
            let (a, b) = (focal(frame, a)?, focal(frame, b)?);
            c.num(
                format!("ecr/powerset/{}~{}", frame.render(a), frame.render(b)),
                tags::TWO_SOURCES,
                fixtures::POWERSET_MATRIX[i][j],
                extend_nonexcl(m, a, b)?,
                0.0,
            );
        }
    }
    Ok(())
}

fn weights(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let g = graded_means(&f.criteria);
    let w = normalize_weights(&f.criteria)?;
    for (k, v) in fixtures::GRADED_MEANS {
        let actual = *g.get(k).ok_or_else(|| Error::UnknownLabel(k.into()))?;
        c.num(format!("weights/graded-mean/{k}"), tags::CRITERIA, v, actual, 5e-4);
    }
    for (k, v) in fixtures::WEIGHTS {
        let actual = *w.get(k).ok_or_else(|| Error::UnknownLabel(k.into()))?;
        c.num(format!("weights/normalized/{k}"), tags::CRITERIA, v, actual, 5e-4);
    }
    Ok(())
}

fn votes(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let column = build_payoff_column(&f.scenario.cases[0], &f.scenario)?;
    for (s, row) in &f.criterion_dnumbers {
        let cell = column.cells.get(s).ok_or_else(|| Error::UnknownLabel(s.clone()))?;
        for (crit, published) in row {
            let actual = cell.criteria.get(crit).ok_or_else(|| Error::UnknownLabel(crit.clone()))?;
            let frame = published.frame();
            let mut sets: Vec<DFocalSet> = published.focal_sets().map(|p| p.0).collect();
            sets.extend(actual.focal_sets().map(|p| p.0).filter(|s| published.mass(*s) == 0.0));
            for set in sets {
                c.num(
                    format!("votes/{s}/{crit}/{}", frame.render(set)),
                    tags::CRITERION_DNUMBERS,
                    published.mass(set),
                    actual.mass(set),
                    1e-9,
                );
            }
        }
    }
    Ok(())
}

fn fusion(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let column = build_payoff_column(&f.scenario.cases[0], &f.scenario)?;
    let cell = column.cells.get("AS1").ok_or_else(|| Error::UnknownLabel("AS1".into()))?;
    let frame = cell.fusion.average.frame().clone();
    for (l, v) in fixtures::FUSION_AVERAGE {
        let s = focal(&frame, &[l])?;
        c.num(format!("fusion/average/{l}"), tags::FUSION, v, cell.fusion.average.mass(s), 5e-4);
    }
    for (labels, v) in fixtures::FUSION_RESULT {
        let s = focal(&frame, labels)?;
        c.num(format!("fusion/fused/{}", frame.render(s)), tags::FUSION, v, cell.fusion.fused.mass(s), 2e-3);
    }
    for (l, v) in fixtures::FUSION_DISTRIBUTION {
        let actual = cell.chain.distribution.get(l).copied().unwrap_or(0.0);
        c.num(format!("fusion/distribution/{l}"), tags::FUSION, v, actual, 2e-3);
    }
    let fuzzy = cell.chain.fuzzy.as_array();
    for (k, v) in fixtures::COLUMN_FUZZY[0].1.iter().enumerate() {
        c.num(format!("fusion/fuzzy-payoff/a{}", k + 1), tags::FUSION, *v, fuzzy[k], 2e-3);
    }
    c.num("fusion/payoff".into(), tags::FUSION, fixtures::COLUMN_PAYOFFS[0].1, cell.chain.crisp, 1e-3);
    Ok(())
}

fn column(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let column = build_payoff_column(&f.scenario.cases[0], &f.scenario)?;
    for ((s, fz), (_, p)) in fixtures::COLUMN_FUZZY.iter().zip(fixtures::COLUMN_PAYOFFS) {
        let cell = column.cells.get(*s).ok_or_else(|| Error::UnknownLabel((*s).into()))?;
        let actual = cell.chain.fuzzy.as_array();
        for k in 0..3 {
            c.num(format!("column/{s}/fuzzy/a{}", k + 1), tags::COLUMN, fz[k], actual[k], 2e-3);
        }
        c.num(format!("column/{s}/payoff"), tags::COLUMN, p, cell.chain.crisp, 2e-3);
    }
    Ok(())
}

fn render_cells(g: &BimatrixGame, cells: &[Cell]) -> String {
    if cells.is_empty() {
        return "none".into();
    }
    cells.iter().map(|c| g.label(*c)).collect::<Vec<_>>().join("; ")
}

/// Definition-level check: no player gains by deviating unilaterally.
fn brute_force_equilibria(g: &BimatrixGame) -> Vec<Cell> {
    let mut out = Vec::new();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let row_ok = (0..g.rows()).all(|k| g.payoffs[k][j][0] <= g.payoffs[i][j][0]);
            let col_ok = (0..g.cols()).all(|k| g.payoffs[i][k][1] <= g.payoffs[i][j][1]);
            if row_ok && col_ok {
                out.push((i, j));
            }
        }
    }
    out
}

fn equilibria(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let expected = format!("({}, {})", fixtures::EQUILIBRIUM.0, fixtures::EQUILIBRIUM.1);
    for (name, tag, g) in [("dnt", tags::DNT_GAME, &f.dnt_game), ("topsis", tags::TOPSIS_GAME, &f.topsis_game)] {
        let eq = pure_nash_equilibria(g);
        c.text(format!("equilibria/{name}"), tag, expected.clone(), render_cells(g, &eq));
        c.text(
            format!("equilibria/{name}/brute-force"),
            tag,
            expected.clone(),
            render_cells(g, &brute_force_equilibria(g)),
        );
    }
    Ok(())
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn rankings(f: &FixtureSet, c: &mut Collector) -> Result<()> {
    let alpha: [(&str, &BimatrixGame, &[[usize; 5]; 4]); 2] = [
        ("dnt", &f.dnt_game, &fixtures::ALPHA_RANKS_DNT),
        ("topsis", &f.topsis_game, &fixtures::ALPHA_RANKS_TOPSIS),
    ];
    for (name, g, published) in alpha {
        let r = strategy_rankings(g, Player::Row);
        for (k, exp) in published.iter().enumerate() {
            c.text(
                format!("rankings/{name}/{}/given-{}", g.row_player, g.col_strategies[k]),
                tags::ALPHA_RANKS,
                join(exp),
                r.ranks.get(k).map(|v| join(v)).unwrap_or_default(),
            );
        }
    }
    let beta: [(&str, &BimatrixGame, &[[usize; 4]; 5]); 2] = [
        ("dnt", &f.dnt_game, &fixtures::BETA_RANKS_DNT),
        ("topsis", &f.topsis_game, &fixtures::BETA_RANKS_TOPSIS),
    ];
    for (name, g, published) in beta {
        let r = strategy_rankings(g, Player::Col);
        for (k, exp) in published.iter().enumerate() {
            c.text(
                format!("rankings/{name}/{}/given-{}", g.col_player, g.row_strategies[k]),
                tags::BETA_RANKS,
                join(exp),
                r.ranks.get(k).map(|v| join(v)).unwrap_or_default(),
            );
        }
    }
    for (tag, player, strategy, count) in fixtures::FREQUENCIES {
        let g = if tag == tags::DNT_GAME { &f.dnt_game } else { &f.topsis_game };
        let role = if g.row_player == player { Player::Row } else { Player::Col };
        let idx = g
            .strategies(role)
            .iter()
            .position(|s| s == strategy)
            .ok_or_else(|| Error::UnknownLabel(strategy.into()))?;
        let counts = best_response_frequency(g, role);
        let name = if tag == tags::DNT_GAME { "dnt" } else { "topsis" };
        c.num(
            format!("rankings/{name}/best-response-count/{strategy}"),
            tags::EQUILIBRIUM,
            count as f64,
            counts[idx] as f64,
            0.0,
        );
    }
    Ok(())
}

type GroupFn = fn(&FixtureSet, &mut Collector) -> Result<()>;

const RUNNERS: [(&str, GroupFn); 8] = [
    ("nonexcl", nonexcl),
    ("ecr", ecr),
    ("weights", weights),
    ("votes", votes),
    ("fusion", fusion),
    ("column", column),
    ("equilibria", equilibria),
    ("rankings", rankings),
];

/// Runs the selected checks. Unknown group or perturbation ids are
/// reported as [`Error::UnknownLabel`].
pub fn run(opts: &Options) -> Result<Vec<Check>> {
    if let Some(g) = &opts.only {
        if !GROUPS.contains(&g.as_str()) {
            return Err(Error::UnknownLabel(g.clone()));
        }
    }
    let fixtures = FixtureSet::load();
    let mut checks = Vec::new();
    for (group, runner) in RUNNERS {
        if opts.only.as_deref().is_some_and(|g| g != group) {
            continue;
        }
        let mut c = Collector { group, checks: Vec::new() };
        runner(&fixtures, &mut c)?;
        checks.extend(c.checks);
    }
    if let Some(t) = opts.tolerance {
        for c in checks.iter_mut().filter(|c| c.tolerance > 0.0) {
            c.tolerance = t;
        }
    }
    if let Some(id) = &opts.perturb {
        let c = checks
            .iter_mut()
            .find(|c| &c.id == id)
            .ok_or_else(|| Error::UnknownLabel(id.clone()))?;
        c.expected = match &c.expected {
            Value::Number(x) => Value::Number(x + 10.0 * c.tolerance + 0.01),
            Value::Text(s) => Value::Text(format!("{s}*")),
        };
    }
    Ok(checks)
}
