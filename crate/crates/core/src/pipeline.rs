//! From linguistic group evaluations to a real-valued bimatrix game.
//!
//! For every evaluated strategy given one opponent strategy:
//!
//! 1. each criterion's votes become a D number of vote frequencies;
//! 2. the criterion D numbers are fused by weighted average combination,
//!    with weights from the graded means of the fuzzy criterion weights;
//! 3. the fused D number is projected to probabilities over the scale,
//!    turned into a fuzzy payoff, and defuzzified by its centroid.
//!
//! The crisp payoffs fill a bimatrix game whose pure equilibria, rankings
//! and best-response counts make up the [`Report`].

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dnumbers::{
    build_nonexcl_from_scale, from_linguistic_votes, from_weighted_votes, self_combine,
    weighted_average, DFrame, DNumber, NonExclusivityMatrix,
};
use crate::error::{Error, Result};
use crate::fuzzy::{weighted_sum, TriangularFuzzyNumber};
use crate::game::{
    best_response_frequency, pure_nash_equilibria, strategy_rankings, BimatrixGame, Cell, Player,
    Rankings,
};

/// Ordered linguistic grades and their fuzzy numbers, worst to best.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinguisticScale(pub IndexMap<String, TriangularFuzzyNumber>);

impl LinguisticScale {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn get(&self, label: &str) -> Option<&TriangularFuzzyNumber> {
        self.0.get(label)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Non-exclusivity matrix of the grades; its frame is the scale.
    pub fn nonexclusivity(&self) -> Result<NonExclusivityMatrix> {
        build_nonexcl_from_scale(&self.0)
    }
}

/// Fuzzy importance weight per criterion, in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CriterionWeights(pub IndexMap<String, TriangularFuzzyNumber>);

/// Votes of a decision-making group for one player's strategies, given one
/// fixed strategy of the opponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationCase {
    /// The evaluated player.
    pub player: String,
    /// The opponent strategy the evaluation is conditioned on.
    pub opponent_strategy: String,
    /// `votes[strategy][criterion]`: one label per decision maker.
    pub votes: IndexMap<String, IndexMap<String, Vec<String>>>,
}

impl EvaluationCase {
    pub fn id(&self) -> String {
        format!("{}|{}", self.player, self.opponent_strategy)
    }

    fn dm_count(&self) -> Option<usize> {
        self.votes.values().flat_map(|c| c.values()).map(Vec::len).next()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerSpec {
    pub name: String,
    pub strategies: Vec<String>,
}

/// Everything needed to build the game: players, the linguistic scale, the
/// criteria and the evaluation cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Row player first, column player second.
    pub players: [PlayerSpec; 2],
    pub scale: LinguisticScale,
    pub criteria: CriterionWeights,
    /// Optional importance of each decision maker; equal when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dm_weights: Option<Vec<f64>>,
    pub cases: Vec<EvaluationCase>,
}

impl ScenarioSpec {
    fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p.name == name)
    }

    pub fn player(&self, role: Player) -> &PlayerSpec {
        match role {
            Player::Row => &self.players[0],
            Player::Col => &self.players[1],
        }
    }

    /// Checks the spec and every case against it. Coverage is not checked
    /// here; see [`ScenarioSpec::missing_cases`].
    pub fn validate(&self) -> Result<()> {
        let [a, b] = &self.players;
        if a.name == b.name {
            return Err(Error::InvalidCase("players need distinct names".into()));
        }
        for p in &self.players {
            if p.strategies.is_empty() {
                return Err(Error::InvalidCase(format!("player {} has no strategies", p.name)));
            }
            for (i, s) in p.strategies.iter().enumerate() {
                if p.strategies[..i].contains(s) {
                    return Err(Error::InvalidCase(format!("duplicate strategy {s} for {}", p.name)));
                }
            }
        }
        if self.scale.is_empty() {
            return Err(Error::InvalidCase("linguistic scale is empty".into()));
        }
        if self.criteria.0.is_empty() {
            return Err(Error::InvalidCase("no criteria given".into()));
        }
        for (i, c) in self.cases.iter().enumerate() {
            self.validate_case(c)?;
            if self.cases[..i].iter().any(|o| o.player == c.player && o.opponent_strategy == c.opponent_strategy) {
                return Err(Error::InvalidCase(format!("case {} given twice", c.id())));
            }
        }
        Ok(())
    }

    fn validate_case(&self, case: &EvaluationCase) -> Result<()> {
        let id = case.id();
        let pi = self
            .player_index(&case.player)
            .ok_or_else(|| Error::InvalidCase(format!("{id}: unknown player {}", case.player)))?;
        let own = &self.players[pi];
        let other = &self.players[1 - pi];
        if !other.strategies.contains(&case.opponent_strategy) {
            return Err(Error::InvalidCase(format!(
                "{id}: {} is not a strategy of {}",
                case.opponent_strategy, other.name
            )));
        }
        if let Some(s) = case.votes.keys().find(|s| !own.strategies.contains(s)) {
            return Err(Error::InvalidCase(format!("{id}: {s} is not a strategy of {}", own.name)));
        }
        let dm = case.dm_count().unwrap_or(0);
        if dm == 0 {
            return Err(Error::InvalidCase(format!("{id}: no votes")));
        }
        if let Some(w) = &self.dm_weights {
            if w.len() != dm {
                return Err(Error::InvalidCase(format!(
                    "{id}: {dm} decision makers but {} weights",
                    w.len()
                )));
            }
        }
        for s in &own.strategies {
            let row = case
                .votes
                .get(s)
                .ok_or_else(|| Error::InvalidCase(format!("{id}: no votes for {s}")))?;
            if let Some(c) = row.keys().find(|c| !self.criteria.0.contains_key(*c)) {
                return Err(Error::InvalidCase(format!("{id}: unknown criterion {c}")));
            }
            for c in self.criteria.0.keys() {
                let votes = row
                    .get(c)
                    .ok_or_else(|| Error::InvalidCase(format!("{id}: no votes for ({s}, {c})")))?;
                if votes.len() != dm {
                    return Err(Error::InvalidCase(format!(
                        "{id}: ({s}, {c}) has {} votes, expected {dm}",
                        votes.len()
                    )));
                }
                if let Some(v) = votes.iter().find(|v| self.scale.get(v).is_none()) {
                    return Err(Error::InvalidCase(format!("{id}: ({s}, {c}) uses unknown label {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn find_case(&self, player: &str, opponent_strategy: &str) -> Option<&EvaluationCase> {
        self.cases
            .iter()
            .find(|c| c.player == player && c.opponent_strategy == opponent_strategy)
    }

    /// `player|opponent_strategy` ids of the cases a full game still needs.
    pub fn missing_cases(&self) -> Vec<String> {
        let mut missing = Vec::new();
        for (pi, p) in self.players.iter().enumerate() {
            for s in &self.players[1 - pi].strategies {
                if self.find_case(&p.name, s).is_none() {
                    missing.push(format!("{}|{s}", p.name));
                }
            }
        }
        missing
    }
}

/// Graded mean of each fuzzy criterion weight.
pub fn graded_means(w: &CriterionWeights) -> IndexMap<String, f64> {
    w.0.iter().map(|(c, f)| (c.clone(), f.graded_mean())).collect()
}

/// Crisp criterion weights: graded means normalized to sum to one.
pub fn normalize_weights(w: &CriterionWeights) -> Result<IndexMap<String, f64>> {
    if w.0.is_empty() {
        return Err(Error::EmptyInput);
    }
    let means = graded_means(w);
    if let Some((c, _)) = means.iter().find(|(_, m)| **m <= 0.0) {
        return Err(Error::DegenerateWeight(c.clone()));
    }
    let total: f64 = means.values().sum();
    Ok(means.into_iter().map(|(c, m)| (c, m / total)).collect())
}

/// `dnumbers[strategy][criterion]`.
pub type DNumberMatrix = IndexMap<String, IndexMap<String, DNumber>>;

/// Turns every vote cell of a case into a D number.
pub fn case_to_dnumber_matrix(
    case: &EvaluationCase,
    frame: &Arc<DFrame>,
    dm_weights: Option<&[f64]>,
) -> Result<DNumberMatrix> {
    case.votes
        .iter()
        .map(|(s, row)| {
            let cells = row
                .iter()
                .map(|(c, votes)| {
                    let d = match dm_weights {
                        Some(w) => from_weighted_votes(votes, w, frame)?,
                        None => from_linguistic_votes(votes, frame)?,
                    };
                    Ok((c.clone(), d))
                })
                .collect::<Result<IndexMap<_, _>>>()?;
            Ok((s.clone(), cells))
        })
        .collect()
}

/// Intermediate and final D numbers of a weighted average combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Fusion {
    pub average: DNumber,
    pub fused: DNumber,
}

fn aligned(
    cellrow: &IndexMap<String, DNumber>,
    weights: &IndexMap<String, f64>,
) -> Result<(Vec<DNumber>, Vec<f64>)> {
    if cellrow.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: cellrow.len(),
            right: weights.len(),
        });
    }
    // Declared criterion order of the weights.
    let mut ds = Vec::with_capacity(weights.len());
    let mut ws = Vec::with_capacity(weights.len());
    for (c, w) in weights {
        let d = cellrow.get(c).ok_or_else(|| Error::UnknownLabel(c.clone()))?;
        ds.push(d.clone());
        ws.push(*w);
    }
    Ok((ds, ws))
}

/// Fuses the criterion D numbers of one strategy, keeping the average.
pub fn fuse_strategy_detailed(
    cellrow: &IndexMap<String, DNumber>,
    weights: &IndexMap<String, f64>,
    m: &NonExclusivityMatrix,
) -> Result<Fusion> {
    let (ds, ws) = aligned(cellrow, weights)?;
    let average = weighted_average(&ds, &ws)?;
    let fused = self_combine(&average, ds.len(), m)?;
    Ok(Fusion { average, fused })
}

/// Weighted average combination of one strategy's criterion D numbers.
pub fn fuse_strategy(
    cellrow: &IndexMap<String, DNumber>,
    weights: &IndexMap<String, f64>,
    m: &NonExclusivityMatrix,
) -> Result<DNumber> {
    fuse_strategy_detailed(cellrow, weights, m).map(|f| f.fused)
}

/// The three steps from a D number to a crisp payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffChain {
    pub distribution: IndexMap<String, f64>,
    pub fuzzy: TriangularFuzzyNumber,
    pub crisp: f64,
}

/// Pignistic distribution, then the probability-weighted sum of the grade
/// fuzzy numbers, then its centroid.
pub fn payoff_chain(d: &DNumber, scale: &LinguisticScale) -> Result<PayoffChain> {
    let distribution = d.ppt()?;
    let mut fs = Vec::with_capacity(distribution.len());
    let mut ws = Vec::with_capacity(distribution.len());
    for (label, p) in &distribution {
        fs.push(*scale.get(label).ok_or_else(|| Error::UnknownLabel(label.clone()))?);
        ws.push(*p);
    }
    let fuzzy = weighted_sum(&fs, &ws)?;
    Ok(PayoffChain {
        distribution,
        fuzzy,
        crisp: fuzzy.centroid_defuzzify(),
    })
}

pub fn dnumber_to_payoff(d: &DNumber, scale: &LinguisticScale) -> Result<f64> {
    payoff_chain(d, scale).map(|c| c.crisp)
}

/// Audit trail of one strategy's payoff given one opponent strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTrace {
    pub criteria: IndexMap<String, DNumber>,
    pub fusion: Fusion,
    pub chain: PayoffChain,
}

/// Payoffs of all of one player's strategies for one opponent strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffColumn {
    pub player: String,
    pub opponent_strategy: String,
    pub cells: IndexMap<String, CellTrace>,
}

impl PayoffColumn {
    pub fn payoffs(&self) -> IndexMap<String, f64> {
        self.cells.iter().map(|(s, t)| (s.clone(), t.chain.crisp)).collect()
    }
}

/// Shared per-scenario inputs: matrix, frame and crisp weights.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub matrix: NonExclusivityMatrix,
    pub graded_means: IndexMap<String, f64>,
    pub weights: IndexMap<String, f64>,
}

impl Prepared {
    pub fn new(spec: &ScenarioSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            matrix: spec.scale.nonexclusivity()?,
            graded_means: graded_means(&spec.criteria),
            weights: normalize_weights(&spec.criteria)?,
        })
    }

    pub fn frame(&self) -> &Arc<DFrame> {
        self.matrix.frame()
    }

    pub fn column(&self, case: &EvaluationCase, spec: &ScenarioSpec) -> Result<PayoffColumn> {
        let pi = spec
            .player_index(&case.player)
            .ok_or_else(|| Error::InvalidCase(format!("unknown player {}", case.player)))?;
        let dms = case_to_dnumber_matrix(case, self.frame(), spec.dm_weights.as_deref())?;
        let mut cells = IndexMap::new();
        for s in &spec.players[pi].strategies {
            let criteria = dms
                .get(s)
                .cloned()
                .ok_or_else(|| Error::InvalidCase(format!("{}: no votes for {s}", case.id())))?;
            let fusion = fuse_strategy_detailed(&criteria, &self.weights, &self.matrix)?;
            let chain = payoff_chain(&fusion.fused, &spec.scale)?;
            cells.insert(s.clone(), CellTrace { criteria, fusion, chain });
        }
        Ok(PayoffColumn {
            player: case.player.clone(),
            opponent_strategy: case.opponent_strategy.clone(),
            cells,
        })
    }
}

/// Payoff column of one case with all intermediates.
pub fn build_payoff_column(case: &EvaluationCase, spec: &ScenarioSpec) -> Result<PayoffColumn> {
    Prepared::new(spec)?.column(case, spec)
}

fn assemble(spec: &ScenarioSpec, prepared: &Prepared) -> Result<(BimatrixGame, Vec<PayoffColumn>)> {
    let missing = spec.missing_cases();
    if !missing.is_empty() {
        return Err(Error::IncompleteCoverage(missing));
    }
    let [alpha, beta] = &spec.players;
    let mut columns = Vec::new();
    let mut payoffs = vec![vec![[0.0; 2]; beta.strategies.len()]; alpha.strategies.len()];
    for (j, bs) in beta.strategies.iter().enumerate() {
        let case = spec.find_case(&alpha.name, bs).expect("coverage checked");
        let col = prepared.column(case, spec)?;
        for (i, a) in alpha.strategies.iter().enumerate() {
            payoffs[i][j][0] = col.cells[a].chain.crisp;
        }
        columns.push(col);
    }
    for (i, as_) in alpha.strategies.iter().enumerate() {
        let case = spec.find_case(&beta.name, as_).expect("coverage checked");
        let col = prepared.column(case, spec)?;
        for (j, b) in beta.strategies.iter().enumerate() {
            payoffs[i][j][1] = col.cells[b].chain.crisp;
        }
        columns.push(col);
    }
    let game = BimatrixGame::new(
        alpha.name.clone(),
        beta.name.clone(),
        alpha.strategies.clone(),
        beta.strategies.clone(),
        payoffs,
    )?;
    Ok((game, columns))
}

/// Real-valued game: `u1(i, j)` from the row player's case given column
/// strategy `j`, `u2(i, j)` from the column player's case given row
/// strategy `i`.
pub fn build_game(spec: &ScenarioSpec) -> Result<BimatrixGame> {
    let prepared = Prepared::new(spec)?;
    assemble(spec, &prepared).map(|(g, _)| g)
}

/// Equilibria, rankings and best-response counts of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameAnalysis {
    pub equilibria: Vec<Cell>,
    pub row_rankings: Rankings,
    pub col_rankings: Rankings,
    pub row_best_response_counts: Vec<usize>,
    pub col_best_response_counts: Vec<usize>,
}

pub fn analyze_game(game: &BimatrixGame) -> GameAnalysis {
    GameAnalysis {
        equilibria: pure_nash_equilibria(game),
        row_rankings: strategy_rankings(game, Player::Row),
        col_rankings: strategy_rankings(game, Player::Col),
        row_best_response_counts: best_response_frequency(game, Player::Row),
        col_best_response_counts: best_response_frequency(game, Player::Col),
    }
}

/// Full result of a scenario run.
#[derive(Debug, Clone)]
pub struct Report {
    pub matrix: NonExclusivityMatrix,
    pub graded_means: IndexMap<String, f64>,
    pub weights: IndexMap<String, f64>,
    /// Row player's columns first (one per column strategy), then the
    /// column player's.
    pub columns: Vec<PayoffColumn>,
    pub game: BimatrixGame,
    pub analysis: GameAnalysis,
}

impl Report {
    /// The fused D number behind each payoff pair, as `[row, col]`.
    pub fn dnumber_payoffs(&self) -> Vec<Vec<[&DNumber; 2]>> {
        let (p, q) = (self.game.rows(), self.game.cols());
        (0..p)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        let a = &self.columns[j].cells[i].fusion.fused;
                        let b = &self.columns[q + i].cells[j].fusion.fused;
                        [a, b]
                    })
                    .collect()
            })
            .collect()
    }
}

/// Runs the whole pipeline on a fully covered scenario.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Report> {
    let prepared = Prepared::new(spec)?;
    let (game, columns) = assemble(spec, &prepared)?;
    let analysis = analyze_game(&game);
    Ok(Report {
        matrix: prepared.matrix,
        graded_means: prepared.graded_means,
        weights: prepared.weights,
        columns,
        game,
        analysis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tfn(a1: f64, a2: f64, a3: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(a1, a2, a3).unwrap()
    }

    fn small_scale() -> LinguisticScale {
        LinguisticScale(
            [
                ("L".to_string(), tfn(0.0, 0.0, 0.5)),
                ("M".to_string(), tfn(0.25, 0.5, 0.75)),
                ("H".to_string(), tfn(0.5, 1.0, 1.0)),
            ]
            .into(),
        )
    }

    fn votes(cells: &[(&str, &[&str])]) -> IndexMap<String, Vec<String>> {
        cells
            .iter()
            .map(|(c, v)| (c.to_string(), v.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[allow(clippy::type_complexity)]
    fn case(player: &str, opp: &str, rows: &[(&str, &[(&str, &[&str])])]) -> EvaluationCase {
        EvaluationCase {
            player: player.into(),
            opponent_strategy: opp.into(),
            votes: rows.iter().map(|(s, cells)| (s.to_string(), votes(cells))).collect(),
        }
    }

    fn toy_spec() -> ScenarioSpec {
        let row: &[(&str, &[&str])] = &[("c1", &["M", "H"]), ("c2", &["H", "H"])];
        let low: &[(&str, &[&str])] = &[("c1", &["L", "M"]), ("c2", &["L", "L"])];
        ScenarioSpec {
            players: [
                PlayerSpec { name: "A".into(), strategies: vec!["a1".into(), "a2".into()] },
                PlayerSpec { name: "B".into(), strategies: vec!["b1".into(), "b2".into()] },
            ],
            scale: small_scale(),
            criteria: CriterionWeights(
                [("c1".to_string(), tfn(0.2, 0.5, 0.8)), ("c2".to_string(), tfn(0.5, 0.7, 0.9))].into(),
            ),
            dm_weights: None,
            cases: vec![
                case("A", "b1", &[("a1", row), ("a2", low)]),
                case("A", "b2", &[("a1", row), ("a2", low)]),
                case("B", "a1", &[("b1", row), ("b2", low)]),
                case("B", "a2", &[("b1", row), ("b2", low)]),
            ],
        }
    }

    #[test]
    fn weights_normalize() {
        let one = CriterionWeights([("c".to_string(), tfn(0.1, 0.2, 0.3))].into());
        assert_eq!(normalize_weights(&one).unwrap()["c"], 1.0);
        let two = CriterionWeights(
            [("x".to_string(), tfn(0.1, 0.2, 0.3)), ("y".to_string(), tfn(0.1, 0.2, 0.3))].into(),
        );
        let w = normalize_weights(&two).unwrap();
        assert_eq!(w["x"], 0.5);
        assert_eq!(w["y"], 0.5);
        let zero = CriterionWeights([("z".to_string(), tfn(0.0, 0.0, 0.0))].into());
        assert_eq!(normalize_weights(&zero), Err(Error::DegenerateWeight("z".into())));
    }

    #[test]
    fn single_criterion_fusion_is_passthrough() {
        let m = small_scale().nonexclusivity().unwrap();
        let d = from_linguistic_votes(&["M", "H", "H"], m.frame()).unwrap();
        let row: IndexMap<String, DNumber> = [("c".to_string(), d.clone())].into();
        let w: IndexMap<String, f64> = [("c".to_string(), 1.0)].into();
        assert_eq!(fuse_strategy(&row, &w, &m).unwrap(), d);
    }

    #[test]
    fn identical_criteria_average_to_operand() {
        let m = small_scale().nonexclusivity().unwrap();
        let d = from_linguistic_votes(&["M", "H", "L", "H"], m.frame()).unwrap();
        let row: IndexMap<String, DNumber> =
            [("c1".to_string(), d.clone()), ("c2".to_string(), d.clone())].into();
        let w: IndexMap<String, f64> = [("c1".to_string(), 0.4), ("c2".to_string(), 0.6)].into();
        let f = fuse_strategy_detailed(&row, &w, &m).unwrap();
        for (s, v) in d.focal_sets() {
            assert_abs_diff_eq!(f.average.mass(s), v, epsilon = 1e-15);
        }
    }

    #[test]
    fn fusion_requires_matching_criteria() {
        let m = small_scale().nonexclusivity().unwrap();
        let d = from_linguistic_votes(&["M"], m.frame()).unwrap();
        let row: IndexMap<String, DNumber> = [("c1".to_string(), d)].into();
        let w: IndexMap<String, f64> = [("c2".to_string(), 1.0)].into();
        assert_eq!(fuse_strategy(&row, &w, &m), Err(Error::UnknownLabel("c2".into())));
    }

    #[test]
    fn single_label_payoff() {
        let scale = small_scale();
        let m = scale.nonexclusivity().unwrap();
        let d = from_linguistic_votes(&["M"], m.frame()).unwrap();
        assert_abs_diff_eq!(dnumber_to_payoff(&d, &scale).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn toy_game_is_symmetric() {
        let spec = toy_spec();
        let g = build_game(&spec).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.payoffs[i][j][0], g.payoffs[j][i][1]);
            }
        }
        let report = run_scenario(&spec).unwrap();
        assert_eq!(report.analysis.equilibria, vec![(0, 0)]);
        assert_eq!(report.dnumber_payoffs()[0][0][0], &report.columns[0].cells[0].fusion.fused);
    }

    #[test]
    fn missing_case_is_named() {
        let mut spec = toy_spec();
        spec.cases.remove(1);
        assert_eq!(
            build_game(&spec),
            Err(Error::IncompleteCoverage(vec!["A|b2".into()]))
        );
    }

    #[test]
    fn single_strategy_column() {
        let mut spec = toy_spec();
        spec.players[0].strategies.truncate(1);
        spec.cases = vec![case("A", "b1", &[("a1", &[("c1", &["M"]), ("c2", &["H"])])])];
        let col = build_payoff_column(&spec.cases[0], &spec).unwrap();
        assert_eq!(col.payoffs().len(), 1);
    }

    #[test]
    fn trivial_one_by_one_spec() {
        let cell: &[(&str, &[&str])] = &[("c1", &["M"]), ("c2", &["H"])];
        let spec = ScenarioSpec {
            players: [
                PlayerSpec { name: "A".into(), strategies: vec!["a".into()] },
                PlayerSpec { name: "B".into(), strategies: vec!["b".into()] },
            ],
            cases: vec![case("A", "b", &[("a", cell)]), case("B", "a", &[("b", cell)])],
            ..toy_spec()
        };
        assert_eq!(run_scenario(&spec).unwrap().analysis.equilibria, vec![(0, 0)]);
    }

    #[test]
    fn case_validation() {
        let mut spec = toy_spec();
        spec.cases[0].votes["a1"]["c1"].push("H".into());
        assert!(matches!(spec.validate(), Err(Error::InvalidCase(_))));

        let mut spec = toy_spec();
        spec.cases[0].votes["a1"]["c1"][0] = "Excellent".into();
        assert!(matches!(spec.validate(), Err(Error::InvalidCase(_))));

        let mut spec = toy_spec();
        spec.cases[0].opponent_strategy = "a1".into();
        assert!(matches!(spec.validate(), Err(Error::InvalidCase(_))));

        let mut spec = toy_spec();
        spec.cases[0].votes["a1"].shift_remove("c2");
        assert!(matches!(spec.validate(), Err(Error::InvalidCase(_))));

        let mut spec = toy_spec();
        spec.dm_weights = Some(vec![1.0]);
        assert!(matches!(spec.validate(), Err(Error::InvalidCase(_))));
    }

    #[test]
    fn dm_weights_shift_the_payoff() {
        let base = toy_spec();
        let mut tilted = toy_spec();
        tilted.dm_weights = Some(vec![3.0, 1.0]);
        let a = build_game(&base).unwrap();
        let b = build_game(&tilted).unwrap();
        // a2 is (L, M) on c1: weighting the first voter pulls it down.
        assert!(b.payoffs[1][0][0] < a.payoffs[1][0][0]);
        let mut equal = toy_spec();
        equal.dm_weights = Some(vec![1.0, 1.0]);
        assert_eq!(build_game(&equal).unwrap(), a);
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = toy_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let back: ScenarioSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
