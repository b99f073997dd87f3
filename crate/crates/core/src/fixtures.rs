//! Embedded reference data and the published values derived from it.
//!
//! Every expected value carries a citation tag so reports can say where a
//! number comes from.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::Deserialize;

use crate::dnumbers::{DFrame, DNumber, FocalMass, MatrixDocument, NonExclusivityMatrix};
use crate::error::Result;
use crate::game::BimatrixGame;
use crate::pipeline::{CriterionWeights, LinguisticScale, ScenarioSpec};

pub const SCALE_JSON: &str = include_str!("../fixtures/linguistic_scale.json");
pub const SCENARIO_JSON: &str = include_str!("../fixtures/scenario_alpha_given_bs1.json");
pub const TWO_SOURCES_JSON: &str = include_str!("../fixtures/two_source_dnumbers.json");
pub const TWO_SOURCES_MATRIX_JSON: &str = include_str!("../fixtures/two_source_matrix.json");
pub const CRITERION_DNUMBERS_JSON: &str = include_str!("../fixtures/alpha_given_bs1_dnumbers.json");
pub const DNT_GAME_JSON: &str = include_str!("../fixtures/dnt_game.json");
pub const TOPSIS_GAME_JSON: &str = include_str!("../fixtures/topsis_game.json");

/// Citation tags.
pub mod tags {
    pub const SCALE: &str = "linguistic-scale";
    pub const SCALE_MATRIX: &str = "scale-nonexclusivity";
    pub const TWO_SOURCES: &str = "two-source-ecr";
    pub const PRODUCT_TABLE: &str = "two-source-product-table";
    pub const CRITERIA: &str = "criterion-weights";
    pub const VOTES: &str = "alpha-votes-given-BS1";
    pub const CRITERION_DNUMBERS: &str = "alpha-criterion-dnumbers-given-BS1";
    pub const FUSION: &str = "AS1|BS1-fusion-chain";
    pub const COLUMN: &str = "alpha-payoffs-given-BS1";
    pub const DNT_GAME: &str = "dnt-payoff-matrix";
    pub const TOPSIS_GAME: &str = "topsis-payoff-matrix";
    pub const ALPHA_RANKS: &str = "alpha-strategy-rankings";
    pub const BETA_RANKS: &str = "beta-strategy-rankings";
    pub const EQUILIBRIUM: &str = "equilibrium-analysis";
}

/// Adjacent scale labels and their published non-exclusive degree. All
/// other off-diagonal pairs are 0.
pub const SCALE_MATRIX_PAIRS: [(&str, &str, f64); 6] = [
    ("VP", "P", 0.116),
    ("P", "MP", 0.140),
    ("MP", "M", 0.140),
    ("M", "MG", 0.138),
    ("MG", "G", 0.170),
    ("G", "VG", 0.127),
];

/// Degree between two composite focal sets of the scale frame.
pub const SCALE_SET_PAIR: (&[&str], &[&str], f64) = (&["VP", "P"], &["MP", "X"], 0.140);

pub const TWO_SOURCES_CONFLICT: f64 = 0.423;

pub const TWO_SOURCES_RESULT: [(&[&str], f64); 7] = [
    (&["a"], 0.589),
    (&["b"], 0.225),
    (&["a", "b"], 0.075),
    (&["X"], 0.035),
    (&["a", "X"], 0.045),
    (&["b", "X"], 0.014),
    (&["a", "b", "X"], 0.017),
];

/// `(left focal, right focal, target, routed mass)`.
pub type ProductEntry = (&'static [&'static str], &'static [&'static str], &'static [&'static str], f64);

/// Every cell of the two-source product table.
pub const PRODUCT_TABLE: [ProductEntry; 16] = [
    (&["a"], &["a"], &["a"], 0.2),
    (&["a"], &["b"], &["a", "b"], 0.015),
    (&["a"], &["a", "b"], &["a"], 0.1),
    (&["a"], &["X"], &["a", "X"], 0.01),
    (&["b"], &["a"], &["a", "b"], 0.008),
    (&["b"], &["b"], &["b"], 0.06),
    (&["b"], &["a", "b"], &["b"], 0.04),
    (&["b"], &["X"], &["b", "X"], 0.002),
    (&["a", "b"], &["a"], &["a"], 0.04),
    (&["a", "b"], &["b"], &["b"], 0.03),
    (&["a", "b"], &["a", "b"], &["a", "b"], 0.02),
    (&["a", "b"], &["X"], &["a", "b", "X"], 0.002),
    (&["X"], &["a"], &["a", "X"], 0.016),
    (&["X"], &["b"], &["b", "X"], 0.006),
    (&["X"], &["a", "b"], &["a", "b", "X"], 0.008),
    (&["X"], &["X"], &["X"], 0.02),
];

/// Focal sets of the two-source frame in the order used by the power-set
/// matrix below.
pub const POWERSET_ORDER: [&[&str]; 7] = [
    &["X"],
    &["b"],
    &["b", "X"],
    &["a"],
    &["a", "X"],
    &["a", "b"],
    &["a", "b", "X"],
];

/// Non-exclusive degrees between every pair of non-empty focal sets of the
/// two-source frame.
pub const POWERSET_MATRIX: [[f64; 7]; 7] = [
    [1.0, 0.1, 1.0, 0.2, 1.0, 0.2, 1.0],
    [0.1, 1.0, 1.0, 0.1, 0.1, 1.0, 1.0],
    [1.0, 1.0, 1.0, 0.2, 1.0, 1.0, 1.0],
    [0.2, 0.1, 0.2, 1.0, 1.0, 1.0, 1.0],
    [1.0, 0.1, 1.0, 1.0, 1.0, 1.0, 1.0],
    [0.2, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
];

pub const GRADED_MEANS: [(&str, f64); 6] = [
    ("C1", 0.862),
    ("C2", 0.672),
    ("C3", 0.403),
    ("C4", 0.608),
    ("C5", 0.778),
    ("C6", 0.510),
];

pub const WEIGHTS: [(&str, f64); 6] = [
    ("C1", 0.225),
    ("C2", 0.175),
    ("C3", 0.105),
    ("C4", 0.159),
    ("C5", 0.203),
    ("C6", 0.133),
];

/// Weighted average of the AS1 criterion D numbers.
pub const FUSION_AVERAGE: [(&str, f64); 7] = [
    ("VG", 0.210),
    ("G", 0.263),
    ("MG", 0.263),
    ("M", 0.129),
    ("MP", 0.096),
    ("P", 0.018),
    ("VP", 0.020),
];

/// Published terms of the fused AS1 D number (smaller terms are omitted).
pub const FUSION_RESULT: [(&[&str], f64); 13] = [
    (&["VG"], 0.089),
    (&["G"], 0.378),
    (&["G", "VG"], 0.037),
    (&["MG"], 0.344),
    (&["MG", "G"], 0.089),
    (&["MG", "G", "VG"], 0.011),
    (&["M"], 0.020),
    (&["M", "MG"], 0.019),
    (&["M", "MG", "G"], 0.007),
    (&["M", "MG", "G", "VG"], 0.001),
    (&["MP"], 0.002),
    (&["MP", "M"], 0.001),
    (&["MP", "M", "MG"], 0.001),
];

pub const FUSION_DISTRIBUTION: [(&str, f64); 7] = [
    ("VP", 0.0),
    ("P", 0.0),
    ("MP", 0.002),
    ("M", 0.033),
    ("MG", 0.405),
    ("G", 0.448),
    ("VG", 0.112),
];

pub const COLUMN_FUZZY: [(&str, [f64; 3]); 5] = [
    ("AS1", [0.629, 0.791, 0.918]),
    ("AS2", [0.533, 0.687, 0.847]),
    ("AS3", [0.075, 0.156, 0.346]),
    ("AS4", [0.173, 0.317, 0.460]),
    ("AS5", [0.049, 0.100, 0.312]),
];

pub const COLUMN_PAYOFFS: [(&str, f64); 5] = [
    ("AS1", 0.779),
    ("AS2", 0.689),
    ("AS3", 0.192),
    ("AS4", 0.317),
    ("AS5", 0.154),
];

/// Both reference games share the same unique pure equilibrium.
pub const EQUILIBRIUM: (&str, &str) = ("AS5", "BS3");

/// `ranks[BS j][AS i]` for Alpha under the DNT payoffs.
pub const ALPHA_RANKS_DNT: [[usize; 5]; 4] = [
    [1, 2, 4, 3, 5],
    [2, 1, 4, 3, 5],
    [3, 5, 2, 4, 1],
    [2, 5, 3, 4, 1],
];

/// `ranks[BS j][AS i]` for Alpha under the TOPSIS payoffs.
pub const ALPHA_RANKS_TOPSIS: [[usize; 5]; 4] = [
    [1, 2, 4, 3, 5],
    [2, 1, 4, 3, 5],
    [4, 5, 3, 2, 1],
    [2, 5, 3, 4, 1],
];

/// `ranks[AS i][BS j]` for Beta under the DNT payoffs.
pub const BETA_RANKS_DNT: [[usize; 4]; 5] = [
    [3, 4, 2, 1],
    [2, 4, 3, 1],
    [3, 4, 1, 2],
    [3, 4, 1, 2],
    [2, 4, 1, 3],
];

/// `ranks[AS i][BS j]` for Beta under the TOPSIS payoffs.
pub const BETA_RANKS_TOPSIS: [[usize; 4]; 5] = [
    [3, 4, 2, 1],
    [2, 4, 3, 1],
    [3, 4, 2, 1],
    [4, 3, 2, 1],
    [3, 4, 1, 2],
];

/// `(game tag, player, strategy, count)` of published best-response
/// frequencies.
pub const FREQUENCIES: [(&str, &str, &str, usize); 3] = [
    (tags::DNT_GAME, "Alpha", "AS5", 2),
    (tags::DNT_GAME, "Beta", "BS3", 3),
    (tags::TOPSIS_GAME, "Beta", "BS4", 4),
];

/// File layout of a list of D numbers on one frame.
#[derive(Debug, Clone, Deserialize, serde::Serialize)]
pub struct DNumbersDocument {
    pub frame: Vec<String>,
    pub dnumbers: Vec<Vec<FocalMass>>,
}

impl DNumbersDocument {
    pub fn parse(&self) -> Result<(Arc<DFrame>, Vec<DNumber>)> {
        let frame = Arc::new(DFrame::new(&self.frame)?);
        let ds = self
            .dnumbers
            .iter()
            .map(|r| DNumber::from_records(Arc::clone(&frame), r))
            .collect::<Result<_>>()?;
        Ok((frame, ds))
    }
}

#[derive(Deserialize)]
struct ScaleDocument {
    scale: LinguisticScale,
}

/// All embedded reference inputs, parsed.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub scale: LinguisticScale,
    pub criteria: CriterionWeights,
    /// Players, scale, weights and Alpha's votes given BS1.
    pub scenario: ScenarioSpec,
    pub two_source_frame: Arc<DFrame>,
    pub two_sources: [DNumber; 2],
    pub two_source_matrix: NonExclusivityMatrix,
    /// Published criterion D numbers `[strategy][criterion]` on the scale
    /// frame.
    pub criterion_dnumbers: IndexMap<String, IndexMap<String, DNumber>>,
    pub dnt_game: BimatrixGame,
    pub topsis_game: BimatrixGame,
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> T {
    serde_json::from_str(s).expect("embedded fixture is valid")
}

impl FixtureSet {
    pub fn load() -> Self {
        let ScaleDocument { scale } = parse(SCALE_JSON);
        let scenario: ScenarioSpec = parse(SCENARIO_JSON);
        scenario.validate().expect("embedded scenario is valid");
        let docs: DNumbersDocument = parse(TWO_SOURCES_JSON);
        let (two_source_frame, ds) = docs.parse().expect("embedded D numbers are valid");
        let two_sources: [DNumber; 2] = ds.try_into().expect("two D numbers");
        let mdoc: MatrixDocument = parse(TWO_SOURCES_MATRIX_JSON);
        let two_source_matrix =
            NonExclusivityMatrix::from_document(&mdoc).expect("embedded matrix is valid");
        let raw: IndexMap<String, IndexMap<String, Vec<FocalMass>>> =
            parse(CRITERION_DNUMBERS_JSON);
        let scale_frame = scale.nonexclusivity().expect("scale is valid").frame().clone();
        let criterion_dnumbers = raw
            .iter()
            .map(|(s, row)| {
                let row = row
                    .iter()
                    .map(|(c, r)| {
                        let d = DNumber::from_records(Arc::clone(&scale_frame), r)
                            .expect("embedded D number is valid");
                        (c.clone(), d)
                    })
                    .collect();
                (s.clone(), row)
            })
            .collect();
        let dnt_game: BimatrixGame = parse(DNT_GAME_JSON);
        let topsis_game: BimatrixGame = parse(TOPSIS_GAME_JSON);
        dnt_game.validate().expect("embedded game is valid");
        topsis_game.validate().expect("embedded game is valid");
        Self {
            criteria: scenario.criteria.clone(),
            scale,
            scenario,
            two_source_frame,
            two_sources,
            two_source_matrix,
            criterion_dnumbers,
            dnt_game,
            topsis_game,
        }
    }
}
