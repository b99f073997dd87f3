//! Two-person non-constant-sum games in strategic form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the bimatrix a query is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    /// Player 1, choosing rows.
    Row,
    /// Player 2, choosing columns.
    Col,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }
}

/// Strategy labels for both players and a `(u1, u2)` payoff pair per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BimatrixGame {
    pub row_player: String,
    pub col_player: String,
    pub row_strategies: Vec<String>,
    pub col_strategies: Vec<String>,
    /// `payoffs[i][j] = [u1, u2]` when row plays `i` and column plays `j`.
    pub payoffs: Vec<Vec<[f64; 2]>>,
}

/// Pure strategy profile `(row, col)`.
pub type Cell = (usize, usize);

impl BimatrixGame {
    pub fn new(
        row_player: impl Into<String>,
        col_player: impl Into<String>,
        row_strategies: Vec<String>,
        col_strategies: Vec<String>,
        payoffs: Vec<Vec<[f64; 2]>>,
    ) -> Result<Self> {
        let g = Self {
            row_player: row_player.into(),
            col_player: col_player.into(),
            row_strategies,
            col_strategies,
            payoffs,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let (p, q) = (self.row_strategies.len(), self.col_strategies.len());
        if p == 0 || q == 0 {
            return Err(Error::InvalidGame("each player needs at least one strategy".into()));
        }
        if self.payoffs.len() != p || self.payoffs.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidGame(format!("payoff matrix must be {p}×{q}")));
        }
        if self.payoffs.iter().flatten().flatten().any(|u| !u.is_finite()) {
            return Err(Error::InvalidGame("payoffs must be finite".into()));
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.row_strategies.len()
    }

    pub fn cols(&self) -> usize {
        self.col_strategies.len()
    }

    pub fn strategies(&self, player: Player) -> &[String] {
        match player {
            Player::Row => &self.row_strategies,
            Player::Col => &self.col_strategies,
        }
    }

    pub fn player_name(&self, player: Player) -> &str {
        match player {
            Player::Row => &self.row_player,
            Player::Col => &self.col_player,
        }
    }

    /// Payoff of `player` when it plays `own` and the opponent plays
    /// `other`.
    pub fn payoff(&self, player: Player, own: usize, other: usize) -> f64 {
        match player {
            Player::Row => self.payoffs[own][other][0],
            Player::Col => self.payoffs[other][own][1],
        }
    }

    /// Payoffs of every strategy of `player` against a fixed opponent
    /// strategy.
    fn column_for(&self, player: Player, other: usize) -> Vec<f64> {
        (0..self.strategies(player).len())
            .map(|own| self.payoff(player, own, other))
            .collect()
    }

    pub fn label(&self, (i, j): Cell) -> String {
        format!("({}, {})", self.row_strategies[i], self.col_strategies[j])
    }
}

/// Indices of `player`'s best responses to `opponent_strategy`. Ties are
/// all returned.
pub fn best_responses(g: &BimatrixGame, player: Player, opponent_strategy: usize) -> Result<Vec<usize>> {
    let len = g.strategies(player.opponent()).len();
    if opponent_strategy >= len {
        return Err(Error::IndexOutOfRange {
            index: opponent_strategy,
            len,
        });
    }
    let values = g.column_for(player, opponent_strategy);
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(i, _)| i)
        .collect())
}

/// All pure-strategy Nash equilibria in row-major order.
///
/// A cell qualifies when its row is a best response to its column and
/// vice versa (weak inequalities, so ties count).
pub fn pure_nash_equilibria(g: &BimatrixGame) -> Vec<Cell> {
    let row_best: Vec<Vec<usize>> = (0..g.cols())
        .map(|j| best_responses(g, Player::Row, j).expect("column in range"))
        .collect();
    let col_best: Vec<Vec<usize>> = (0..g.rows())
        .map(|i| best_responses(g, Player::Col, i).expect("row in range"))
        .collect();
    let mut out = Vec::new();
    for (i, cols) in col_best.iter().enumerate() {
        for &j in cols {
            if row_best[j].contains(&i) {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Dense rankings of one player's strategies, per opponent strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rankings {
    pub player: Player,
    /// `ranks[k][s]`: rank (1 = best) of own strategy `s` against opponent
    /// strategy `k`.
    pub ranks: Vec<Vec<usize>>,
    /// `tied[k][s]`: whether `s` shares its rank with another strategy.
    pub tied: Vec<Vec<bool>>,
}

impl Rankings {
    pub fn rank(&self, opponent_strategy: usize, own: usize) -> usize {
        self.ranks[opponent_strategy][own]
    }

    pub fn has_ties(&self) -> bool {
        self.tied.iter().flatten().any(|t| *t)
    }
}

/// Ranks `player`'s strategies by descending payoff against each opponent
/// strategy. Equal payoffs share a rank; the next distinct payoff gets the
/// next integer.
pub fn strategy_rankings(g: &BimatrixGame, player: Player) -> Rankings {
    let n_opp = g.strategies(player.opponent()).len();
    let mut ranks = Vec::with_capacity(n_opp);
    let mut tied = Vec::with_capacity(n_opp);
    for k in 0..n_opp {
        let values = g.column_for(player, k);
        let mut distinct = values.clone();
        distinct.sort_by(|a, b| b.total_cmp(a));
        distinct.dedup();
        ranks.push(
            values
                .iter()
                .map(|v| distinct.iter().position(|d| d == v).expect("value present") + 1)
                .collect(),
        );
        tied.push(
            values
                .iter()
                .map(|v| values.iter().filter(|w| *w == v).count() > 1)
                .collect(),
        );
    }
    Rankings { player, ranks, tied }
}

/// How often each of `player`'s strategies is a best response, over all
/// opponent strategies. Tied best responses each get a count.
pub fn best_response_frequency(g: &BimatrixGame, player: Player) -> Vec<usize> {
    let mut counts = vec![0; g.strategies(player).len()];
    for k in 0..g.strategies(player.opponent()).len() {
        for s in best_responses(g, player, k).expect("opponent strategy in range") {
            counts[s] += 1;
        }
    }
    counts
}
