//! Finite two-player games in strategic form.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Player {
    Row,
    Col,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormGame {
    pub row_strategies: Vec<String>,
    pub col_strategies: Vec<String>,
    /// `payoffs[i][j] = [row payoff, col payoff]`.
    pub payoffs: Vec<Vec<[f64; 2]>>,
}

impl NormalFormGame {
    pub fn new(
        row_strategies: Vec<String>,
        col_strategies: Vec<String>,
        payoffs: Vec<Vec<[f64; 2]>>,
    ) -> Result<Self> {
        if row_strategies.is_empty() || col_strategies.is_empty() {
            return Err(Error::InvalidGame("empty strategy set".into()));
        }
        if payoffs.len() != row_strategies.len()
            || payoffs.iter().any(|row| row.len() != col_strategies.len())
        {
            return Err(Error::InvalidGame(format!(
                "payoff matrix is not {}x{}",
                row_strategies.len(),
                col_strategies.len()
            )));
        }
        if payoffs.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGame("non-finite payoff".into()));
        }
        Ok(NormalFormGame {
            row_strategies,
            col_strategies,
            payoffs,
        })
    }

    /// Build from labels and a payoff function.
    pub fn from_fn<R: ToString, C: ToString>(
        rows: &[R],
        cols: &[C],
        mut f: impl FnMut(usize, usize) -> [f64; 2],
    ) -> Result<Self> {
        let payoffs = (0..rows.len())
            .map(|i| (0..cols.len()).map(|j| f(i, j)).collect())
            .collect();
        NormalFormGame::new(
            rows.iter().map(|r| r.to_string()).collect(),
            cols.iter().map(|c| c.to_string()).collect(),
            payoffs,
        )
    }

    pub fn rows(&self) -> usize {
        self.row_strategies.len()
    }

    pub fn cols(&self) -> usize {
        self.col_strategies.len()
    }

    pub fn row_payoff(&self, i: usize, j: usize) -> f64 {
        self.payoffs[i][j][0]
    }

    pub fn col_payoff(&self, i: usize, j: usize) -> f64 {
        self.payoffs[i][j][1]
    }

    pub fn cell(&self, row: &str, col: &str) -> Option<[f64; 2]> {
        let i = self.row_strategies.iter().position(|s| s == row)?;
        let j = self.col_strategies.iter().position(|s| s == col)?;
        Some(self.payoffs[i][j])
    }

    fn label(&self, i: usize, j: usize) -> (String, String) {
        (self.row_strategies[i].clone(), self.col_strategies[j].clone())
    }

    /// Largest gain from a unilateral deviation at cell `(i, j)`.
    pub fn max_deviation_gain(&self, i: usize, j: usize) -> f64 {
        let row_best = (0..self.rows())
            .map(|k| self.row_payoff(k, j))
            .fold(f64::NEG_INFINITY, f64::max);
        let col_best = (0..self.cols())
            .map(|k| self.col_payoff(i, k))
            .fold(f64::NEG_INFINITY, f64::max);
        (row_best - self.row_payoff(i, j)).max(col_best - self.col_payoff(i, j))
    }

    fn row_best_responses(&self, j: usize, tol: f64) -> Vec<usize> {
        let best = (0..self.rows())
            .map(|k| self.row_payoff(k, j))
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.rows())
            .filter(|k| self.row_payoff(*k, j) >= best - tol)
            .collect()
    }

    fn col_best_responses(&self, i: usize, tol: f64) -> Vec<usize> {
        let best = (0..self.cols())
            .map(|k| self.col_payoff(i, k))
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.cols())
            .filter(|k| self.col_payoff(i, *k) >= best - tol)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProfile {
    /// Probability the row player puts on its first strategy.
    pub row_first: f64,
    /// Probability the column player puts on its first strategy.
    pub col_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub pure_equilibria: Vec<(String, String)>,
    pub dominant_row: Option<String>,
    pub dominant_col: Option<String>,
    pub mixed: Option<MixedProfile>,
    /// Equilibrium cells where some deviation ties the equilibrium payoff.
    pub ties: Vec<(String, String)>,
}

impl EquilibriumReport {
    pub fn contains(&self, row: &str, col: &str) -> bool {
        self.pure_equilibria
            .iter()
            .any(|(r, c)| r == row && c == col)
    }

    /// Equilibria as sorted `row,col` strings, for set comparisons.
    pub fn profile_set(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .pure_equilibria
            .iter()
            .map(|(r, c)| format!("({r},{c})"))
            .collect();
        v.sort();
        v
    }
}

/// Enumerate pure equilibria: a cell is listed when neither player can gain
/// more than `tol` by deviating.
pub fn pure_nash(game: &NormalFormGame, tol: f64) -> EquilibriumReport {
    let mut pure = Vec::new();
    let mut ties = Vec::new();
    for i in 0..game.rows() {
        for j in 0..game.cols() {
            let rows = game.row_best_responses(j, tol);
            let cols = game.col_best_responses(i, tol);
            if rows.contains(&i) && cols.contains(&j) {
                pure.push(game.label(i, j));
                if rows.len() > 1 || cols.len() > 1 {
                    ties.push(game.label(i, j));
                }
            }
        }
    }
    EquilibriumReport {
        pure_equilibria: pure,
        dominant_row: dominant_strategy(game, Player::Row, tol, false),
        dominant_col: dominant_strategy(game, Player::Col, tol, false),
        mixed: None,
        ties,
    }
}

/// A strategy that is a best response to every opponent strategy.
///
/// Strict mode requires it to beat every alternative by more than `tol`
/// against every opponent strategy. Weak mode accepts best responses within
/// `tol`; when several qualify, the first in listed order is returned.
pub fn dominant_strategy(
    game: &NormalFormGame,
    player: Player,
    tol: f64,
    weak: bool,
) -> Option<String> {
    let (own, other) = match player {
        Player::Row => (game.rows(), game.cols()),
        Player::Col => (game.cols(), game.rows()),
    };
    let pay = |mine: usize, theirs: usize| match player {
        Player::Row => game.row_payoff(mine, theirs),
        Player::Col => game.col_payoff(theirs, mine),
    };
    let qualifies = |s: usize| {
        (0..other).all(|o| {
            (0..own).filter(|k| *k != s).all(|k| {
                if weak {
                    pay(s, o) >= pay(k, o) - tol
                } else {
                    pay(s, o) > pay(k, o) + tol
                }
            })
        })
    };
    let labels = match player {
        Player::Row => &game.row_strategies,
        Player::Col => &game.col_strategies,
    };
    (0..own).find(|s| qualifies(*s)).map(|s| labels[s].clone())
}

/// Interior mixed equilibrium of a 2x2 game from the indifference conditions.
///
/// Returns `Ok(None)` when no fully mixed profile in `(0,1)^2` exists and
/// `Degenerate` when an indifference condition holds identically.
pub fn mixed_2x2(game: &NormalFormGame, tol: f64) -> Result<Option<MixedProfile>> {
    if game.rows() != 2 || game.cols() != 2 {
        return Err(Error::InvalidGame(format!(
            "mixed solver needs a 2x2 game, got {}x{}",
            game.rows(),
            game.cols()
        )));
    }
    let a = |i, j| game.row_payoff(i, j);
    let b = |i, j| game.col_payoff(i, j);
    // row mixes so the column player is indifferent
    let p_num = b(1, 1) - b(1, 0);
    let p_den = b(0, 0) - b(0, 1) - b(1, 0) + b(1, 1);
    let q_num = a(1, 1) - a(0, 1);
    let q_den = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
    for (num, den, who) in [(p_num, p_den, "column"), (q_num, q_den, "row")] {
        if den.abs() <= tol {
            if num.abs() <= tol {
                return Err(Error::Degenerate(format!(
                    "{who} player is indifferent against every mixture"
                )));
            }
            return Ok(None);
        }
    }
    let p = p_num / p_den;
    let q = q_num / q_den;
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Ok(None);
    }
    let profile = MixedProfile {
        row_first: p,
        col_first: q,
    };
    if mixed_deviation_gap(game, &profile) > tol.max(1e-12) {
        return Err(Error::Degenerate(
            "indifference solution fails verification".into(),
        ));
    }
    Ok(Some(profile))
}

/// Largest payoff difference between a player's two pure strategies against
/// the opponent's mixture.
pub fn mixed_deviation_gap(game: &NormalFormGame, m: &MixedProfile) -> f64 {
    let q = m.col_first;
    let p = m.row_first;
    let row = |i| q * game.row_payoff(i, 0) + (1.0 - q) * game.row_payoff(i, 1);
    let col = |j| p * game.col_payoff(0, j) + (1.0 - p) * game.col_payoff(1, j);
    (row(0) - row(1)).abs().max((col(0) - col(1)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2(p: [[[f64; 2]; 2]; 2]) -> NormalFormGame {
        NormalFormGame::from_fn(&["a", "b"], &["a", "b"], |i, j| p[i][j]).unwrap()
    }

    #[test]
    fn rejects_ragged_or_nonfinite() {
        let bad = NormalFormGame::new(
            vec!["x".into()],
            vec!["y".into(), "z".into()],
            vec![vec![[0.0, 0.0]]],
        );
        assert!(bad.is_err());
        let nan = NormalFormGame::new(vec!["x".into()], vec!["y".into()], vec![vec![[f64::NAN, 0.0]]]);
        assert_eq!(nan.unwrap_err().code(), "InvalidGame");
    }

    #[test]
    fn matching_pennies_has_no_pure_equilibrium() {
        let g = g2([[[1.0, -1.0], [-1.0, 1.0]], [[-1.0, 1.0], [1.0, -1.0]]]);
        assert!(pure_nash(&g, DEFAULT_TOL).pure_equilibria.is_empty());
        let m = mixed_2x2(&g, DEFAULT_TOL).unwrap().unwrap();
        assert!((m.row_first - 0.5).abs() < 1e-12 && (m.col_first - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prisoners_dilemma() {
        // strategy "b" is defect
        let g = g2([[[3.0, 3.0], [0.0, 5.0]], [[5.0, 0.0], [1.0, 1.0]]]);
        let rep = pure_nash(&g, DEFAULT_TOL);
        assert_eq!(rep.pure_equilibria, vec![("b".into(), "b".into())]);
        assert_eq!(rep.dominant_row.as_deref(), Some("b"));
        assert_eq!(rep.dominant_col.as_deref(), Some("b"));
        assert_eq!(mixed_2x2(&g, DEFAULT_TOL).unwrap(), None);
    }

    #[test]
    fn coordination_game_mixes_evenly() {
        let g = g2([[[1.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 1.0]]]);
        let rep = pure_nash(&g, DEFAULT_TOL);
        assert_eq!(rep.pure_equilibria.len(), 2);
        assert_eq!(rep.dominant_row, None);
        let m = mixed_2x2(&g, DEFAULT_TOL).unwrap().unwrap();
        assert_eq!((m.row_first, m.col_first), (0.5, 0.5));
    }

    #[test]
    fn ties_are_recorded() {
        let g = g2([[[1.0, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]);
        let rep = pure_nash(&g, DEFAULT_TOL);
        assert!(rep.contains("a", "a"));
        assert!(rep.ties.contains(&("a".to_string(), "a".to_string())));
        assert_eq!(dominant_strategy(&g, Player::Row, DEFAULT_TOL, false), None);
        assert_eq!(
            dominant_strategy(&g, Player::Row, DEFAULT_TOL, true).as_deref(),
            Some("a")
        );
    }

    #[test]
    fn weak_dominance_prefers_listed_order() {
        let g = g2([[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]);
        assert_eq!(
            dominant_strategy(&g, Player::Col, DEFAULT_TOL, true).as_deref(),
            Some("a")
        );
        assert_eq!(mixed_2x2(&g, DEFAULT_TOL).unwrap_err().code(), "Degenerate");
    }

    #[test]
    fn mixed_needs_2x2() {
        let g = NormalFormGame::from_fn(&["a", "b", "c"], &["a"], |_, _| [0.0, 0.0]).unwrap();
        assert!(mixed_2x2(&g, DEFAULT_TOL).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn game(n: usize, m: usize) -> impl Strategy<Value = NormalFormGame> {
            // coarse integer payoffs so ties actually occur
            proptest::collection::vec(proptest::collection::vec((-3i32..=3, -3i32..=3), m), n)
                .prop_map(move |cells| {
                    NormalFormGame::from_fn(
                        &(0..n).map(|i| format!("r{i}")).collect::<Vec<_>>(),
                        &(0..m).map(|j| format!("c{j}")).collect::<Vec<_>>(),
                        |i, j| [cells[i][j].0 as f64, cells[i][j].1 as f64],
                    )
                    .unwrap()
                })
        }

        fn sized_game() -> impl Strategy<Value = NormalFormGame> {
            (1usize..=3, 1usize..=3).prop_flat_map(|(n, m)| game(n, m))
        }

        proptest! {
            #[test]
            fn equilibria_survive_deviation_scan(g in sized_game()) {
                let rep = pure_nash(&g, DEFAULT_TOL);
                for i in 0..g.rows() {
                    for j in 0..g.cols() {
                        let listed = rep.contains(&g.row_strategies[i], &g.col_strategies[j]);
                        prop_assert_eq!(listed, g.max_deviation_gain(i, j) <= DEFAULT_TOL);
                    }
                }
            }

            #[test]
            fn constant_shift_invariance(g in sized_game(), c in -10.0f64..10.0) {
                let mut shifted = g.clone();
                for row in shifted.payoffs.iter_mut() {
                    for cell in row.iter_mut() {
                        cell[0] += c.round();
                    }
                }
                prop_assert_eq!(pure_nash(&g, DEFAULT_TOL), pure_nash(&shifted, DEFAULT_TOL));
                for weak in [false, true] {
                    prop_assert_eq!(
                        dominant_strategy(&g, Player::Row, DEFAULT_TOL, weak),
                        dominant_strategy(&shifted, Player::Row, DEFAULT_TOL, weak)
                    );
                }
            }

            #[test]
            fn relabeling_invariance(g in sized_game()) {
                let n = g.rows();
                let reversed = NormalFormGame::from_fn(
                    &g.row_strategies.iter().rev().cloned().collect::<Vec<_>>(),
                    &g.col_strategies,
                    |i, j| g.payoffs[n - 1 - i][j],
                ).unwrap();
                let a = pure_nash(&g, DEFAULT_TOL).profile_set();
                let b = pure_nash(&reversed, DEFAULT_TOL).profile_set();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn mixed_profile_is_indifferent(
                cells in proptest::collection::vec(-5.0f64..5.0, 8)
            ) {
                let g = g2([
                    [[cells[0], cells[1]], [cells[2], cells[3]]],
                    [[cells[4], cells[5]], [cells[6], cells[7]]],
                ]);
                if let Ok(Some(m)) = mixed_2x2(&g, DEFAULT_TOL) {
                    prop_assert!(mixed_deviation_gap(&g, &m) <= 1e-9);
                }
            }
        }
    }
}
