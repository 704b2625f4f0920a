//! Two-player stage games with a public signal: parsing, validation and the
//! static quantities the solver starts from (minmax, pure Nash profiles,
//! feasible and individually rational payoff sets).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    convex_hull, intersect_halfplane, GeomTolerance, HalfPlane, Point, PolygonV,
};

/// Allowed deviation of a signal distribution's total from one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;
/// Parse-time caps; the engine itself accepts any finite game.
pub const MAX_ACTIONS: usize = 3;
pub const MAX_SIGNALS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("probability error for profile {profile}: {message}")]
    Probability { profile: String, message: String },
    #[error("game too large: {0} (pass allow_large to override)")]
    TooLarge(String),
}

/// Indices of player 1's and player 2's actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionProfile(pub usize, pub usize);

impl ActionProfile {
    /// Action of `player` (0 or 1).
    pub fn action(self, player: usize) -> usize {
        match player {
            0 => self.0,
            _ => self.1,
        }
    }

    /// The profile with `player`'s action replaced.
    pub fn with_action(self, player: usize, action: usize) -> Self {
        match player {
            0 => ActionProfile(action, self.1),
            _ => ActionProfile(self.0, action),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageGame {
    actions: [Vec<String>; 2],
    payoffs: Vec<[f64; 2]>,
    signals: Vec<String>,
    signal_probs: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Lift the three-action / four-signal caps.
    pub allow_large: bool,
}

/// A number written either as a JSON number or as a string such as `"2/3"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<f64, String> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => parse_rational(s),
        }
    }
}

fn parse_rational(s: &str) -> Result<f64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number {s:?}"))
    };
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let (num, den) = (parse(num)?, parse(den)?);
            if den == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            num / den
        }
        None => parse(s)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("non-finite number {s:?}"))
    }
}

/// On-disk layout; `payoffs[i][j]` and `signal_probs[i][j]` belong to the
/// profile (i-th action of player 1, j-th action of player 2).
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    actions: [Vec<String>; 2],
    payoffs: Vec<Vec<[Number; 2]>>,
    signals: Vec<String>,
    signal_probs: Vec<Vec<Vec<Number>>>,
}

/// Parses and validates a game file.
pub fn parse_game(text: &str, opts: &ParseOptions) -> Result<StageGame, GameError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| GameError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let file: GameFile =
        serde_json::from_value(value).map_err(|e| GameError::Schema(e.to_string()))?;

    if !opts.allow_large {
        for (i, list) in file.actions.iter().enumerate() {
            if list.len() > MAX_ACTIONS {
                return Err(GameError::TooLarge(format!(
                    "player {} has {} actions (limit {MAX_ACTIONS})",
                    i + 1,
                    list.len()
                )));
            }
        }
        if file.signals.len() > MAX_SIGNALS {
            return Err(GameError::TooLarge(format!(
                "{} signals (limit {MAX_SIGNALS})",
                file.signals.len()
            )));
        }
    }

    let number = |n: &Number, what: &dyn Fn() -> String| {
        n.value()
            .map_err(|e| GameError::Schema(format!("{}: {e}", what())))
    };
    let payoffs = file
        .payoffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, pair)| {
                    let at = || format!("payoffs[{i}][{j}]");
                    Ok([number(&pair[0], &at)?, number(&pair[1], &at)?])
                })
                .collect::<Result<Vec<_>, GameError>>()
        })
        .collect::<Result<Vec<_>, GameError>>()?;
    let probs = file
        .signal_probs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, dist)| {
                    dist.iter()
                        .enumerate()
                        .map(|(k, p)| number(p, &|| format!("signal_probs[{i}][{j}][{k}]")))
                        .collect::<Result<Vec<_>, GameError>>()
                })
                .collect::<Result<Vec<_>, GameError>>()
        })
        .collect::<Result<Vec<_>, GameError>>()?;
    StageGame::new(file.actions, payoffs, file.signals, probs)
}

impl StageGame {
    /// Builds a validated game. `payoffs[i][j]` and `signal_probs[i][j]`
    /// belong to profile `(i, j)`.
    pub fn new(
        actions: [Vec<String>; 2],
        payoffs: Vec<Vec<[f64; 2]>>,
        signals: Vec<String>,
        signal_probs: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self, GameError> {
        for (p, list) in actions.iter().enumerate() {
            if list.is_empty() {
                return Err(GameError::Schema(format!(
                    "player {} has no actions",
                    p + 1
                )));
            }
            check_unique(list, &format!("player {} action", p + 1))?;
        }
        if signals.is_empty() {
            return Err(GameError::Schema("no signals".into()));
        }
        check_unique(&signals, "signal")?;

        let (n1, n2) = (actions[0].len(), actions[1].len());
        check_grid(
            payoffs.len(),
            payoffs.iter().map(Vec::len),
            n1,
            n2,
            "payoffs",
        )?;
        check_grid(
            signal_probs.len(),
            signal_probs.iter().map(Vec::len),
            n1,
            n2,
            "signal_probs",
        )?;

        let mut game = StageGame {
            actions,
            payoffs: Vec::with_capacity(n1 * n2),
            signals,
            signal_probs: Vec::with_capacity(n1 * n2),
        };
        for (i, row) in payoffs.into_iter().enumerate() {
            for (j, u) in row.into_iter().enumerate() {
                if !u[0].is_finite() || !u[1].is_finite() {
                    return Err(GameError::Schema(format!(
                        "payoff of {} is not finite",
                        game.profile_label(ActionProfile(i, j))
                    )));
                }
                game.payoffs.push(u);
            }
        }
        for (i, row) in signal_probs.into_iter().enumerate() {
            for (j, dist) in row.into_iter().enumerate() {
                let checked = game.check_distribution(ActionProfile(i, j), dist)?;
                game.signal_probs.push(checked);
            }
        }
        Ok(game)
    }

    fn check_distribution(&self, a: ActionProfile, dist: Vec<f64>) -> Result<Vec<f64>, GameError> {
        let profile = self.profile_label(a);
        if dist.len() != self.signals.len() {
            return Err(GameError::Schema(format!(
                "signal distribution of {profile} has {} entries, expected {}",
                dist.len(),
                self.signals.len()
            )));
        }
        for (k, &p) in dist.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(GameError::Probability {
                    profile,
                    message: format!("probability of signal {} is {p}", self.signals[k]),
                });
            }
        }
        let total: f64 = dist.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(GameError::Probability {
                profile,
                message: format!("probabilities sum to {total}, expected 1"),
            });
        }
        Ok(dist.into_iter().map(|p| p / total).collect())
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn num_signals(&self) -> usize {
        self.signals.len()
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn signal_labels(&self) -> &[String] {
        &self.signals
    }

    fn index(&self, a: ActionProfile) -> usize {
        assert!(
            a.0 < self.actions[0].len() && a.1 < self.actions[1].len(),
            "action profile out of range"
        );
        a.0 * self.actions[1].len() + a.1
    }

    /// Stage payoffs `(u1, u2)` of a profile.
    pub fn payoff(&self, a: ActionProfile) -> Point {
        let [u1, u2] = self.payoffs[self.index(a)];
        Point::new(u1, u2)
    }

    /// Signal distribution `ρ(· | a)`.
    pub fn signal_probs(&self, a: ActionProfile) -> &[f64] {
        &self.signal_probs[self.index(a)]
    }

    /// All profiles in row-major order (player 1's action varies slowest).
    pub fn profiles(&self) -> impl Iterator<Item = ActionProfile> + '_ {
        let n2 = self.actions[1].len();
        (0..self.actions[0].len() * n2).map(move |k| ActionProfile(k / n2, k % n2))
    }

    pub fn profile_label(&self, a: ActionProfile) -> String {
        format!("({}, {})", self.actions[0][a.0], self.actions[1][a.1])
    }

    /// Largest absolute stage payoff.
    pub fn payoff_scale(&self) -> f64 {
        self.payoffs
            .iter()
            .flat_map(|u| u.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Geometric tolerances scaled to this game's payoffs.
    pub fn tolerance(&self) -> GeomTolerance {
        GeomTolerance::scaled(self.payoff_scale())
    }

    /// Game file JSON for this game.
    pub fn to_json(&self) -> String {
        let n2 = self.actions[1].len();
        let grid = |k: usize| (k / n2, k % n2);
        let mut payoffs: Vec<Vec<[Number; 2]>> = vec![Vec::new(); self.actions[0].len()];
        let mut probs: Vec<Vec<Vec<Number>>> = vec![Vec::new(); self.actions[0].len()];
        for (k, u) in self.payoffs.iter().enumerate() {
            payoffs[grid(k).0].push([Number::Float(u[0]), Number::Float(u[1])]);
        }
        for (k, dist) in self.signal_probs.iter().enumerate() {
            probs[grid(k).0].push(dist.iter().map(|&p| Number::Float(p)).collect());
        }
        let file = GameFile {
            actions: self.actions.clone(),
            payoffs,
            signals: self.signals.clone(),
            signal_probs: probs,
        };
        serde_json::to_string_pretty(&file).expect("game file serialization cannot fail")
    }
}

impl fmt::Display for StageGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} game with {} signals",
            self.actions[0].len(),
            self.actions[1].len(),
            self.signals.len()
        )
    }
}

fn check_unique(labels: &[String], what: &str) -> Result<(), GameError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(GameError::Schema(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

fn check_grid(
    rows: usize,
    cols: impl Iterator<Item = usize>,
    n1: usize,
    n2: usize,
    what: &str,
) -> Result<(), GameError> {
    if rows != n1 {
        return Err(GameError::Schema(format!(
            "{what} has {rows} rows, expected {n1}"
        )));
    }
    for (i, c) in cols.enumerate() {
        if c != n2 {
            return Err(GameError::Schema(format!(
                "{what}[{i}] has {c} entries, expected {n2}"
            )));
        }
    }
    Ok(())
}

/// Pure-action minmax levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinmaxPair {
    /// `v_under[i] = min over opponent actions of max over own actions of u_i`.
    pub v_under: Point,
    /// Opponent action attaining the minimum against each player.
    pub punisher: [usize; 2],
}

pub fn minmax(game: &StageGame) -> MinmaxPair {
    let mut v = [0.0; 2];
    let mut punisher = [0; 2];
    for player in 0..2 {
        let other = 1 - player;
        let best_reply_value = |opp: usize| {
            (0..game.num_actions(player))
                .map(|own| {
                    let a = ActionProfile(0, 0)
                        .with_action(player, own)
                        .with_action(other, opp);
                    component(game.payoff(a), player)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let (arg, val) = (0..game.num_actions(other))
            .map(|opp| (opp, best_reply_value(opp)))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
        v[player] = val;
        punisher[player] = arg;
    }
    MinmaxPair {
        v_under: Point::new(v[0], v[1]),
        punisher,
    }
}

pub(crate) fn component(p: Point, player: usize) -> f64 {
    if player == 0 {
        p.x
    } else {
        p.y
    }
}

/// Profiles where each action attains the player's best-reply value (ties count).
pub fn pure_nash(game: &StageGame) -> Vec<ActionProfile> {
    let tol = 1e-12 * game.payoff_scale().max(1.0);
    game.profiles()
        .filter(|&a| {
            (0..2).all(|player| {
                let current = component(game.payoff(a), player);
                (0..game.num_actions(player)).all(|dev| {
                    component(game.payoff(a.with_action(player, dev)), player) <= current + tol
                })
            })
        })
        .collect()
}

/// Convex hull of the stage payoffs.
pub fn feasible_set(game: &StageGame) -> PolygonV {
    let pts: Vec<Point> = game.profiles().map(|a| game.payoff(a)).collect();
    convex_hull(&pts, &game.tolerance())
}

/// Feasible set and its individually rational part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffSetPair {
    pub feasible: PolygonV,
    pub individually_rational: PolygonV,
    pub minmax: MinmaxPair,
}

impl PayoffSetPair {
    pub fn individually_rational_is_empty(&self) -> bool {
        self.individually_rational.is_empty()
    }
}

pub fn individually_rational_set(game: &StageGame) -> PayoffSetPair {
    let tol = game.tolerance();
    let feasible = feasible_set(game);
    let mm = minmax(game);
    let lower_1 = HalfPlane::new(Point::new(-1.0, 0.0), -mm.v_under.x);
    let lower_2 = HalfPlane::new(Point::new(0.0, -1.0), -mm.v_under.y);
    let ir = intersect_halfplane(
        &intersect_halfplane(&feasible, &lower_1, &tol),
        &lower_2,
        &tol,
    );
    PayoffSetPair {
        feasible,
        individually_rational: ir,
        minmax: mm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PD: &str = r#"{
        "actions": [["C","D"], ["C","D"]],
        "payoffs": [[[2,2],[-1,3]], [[3,-1],[0,0]]],
        "signals": ["ybar","ylow"],
        "signal_probs": [[["2/3","1/3"],[0.5,0.5]], [[0.5,0.5],[0.25,0.75]]]
    }"#;

    fn pd() -> StageGame {
        parse_game(PD, &ParseOptions::default()).unwrap()
    }

    #[test]
    fn parses_rationals_and_decimals() {
        let g = pd();
        assert_eq!(g.signal_probs(ActionProfile(0, 0)), &[2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(g.payoff(ActionProfile(0, 1)), Point::new(-1.0, 3.0));
        assert_eq!(g.profile_label(ActionProfile(1, 1)), "(D, D)");
        assert_eq!(parse_rational(" -3 / 4 ").unwrap(), -0.75);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn bad_probability_row_names_profile() {
        let text = PD.replace("[0.25,0.75]", "[0.25,0.80]");
        match parse_game(&text, &ParseOptions::default()) {
            Err(GameError::Probability { profile, message }) => {
                assert_eq!(profile, "(D, D)");
                assert!(message.contains("1.05"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let negative = PD.replace("[0.25,0.75]", "[-0.25,1.25]");
        assert!(matches!(
            parse_game(&negative, &ParseOptions::default()),
            Err(GameError::Probability { .. })
        ));
    }

    #[test]
    fn syntax_and_schema_errors() {
        assert!(matches!(
            parse_game("{ not json", &ParseOptions::default()),
            Err(GameError::Syntax { .. })
        ));
        let missing = PD.replace(r#""signals": ["ybar","ylow"],"#, "");
        assert!(matches!(
            parse_game(&missing, &ParseOptions::default()),
            Err(GameError::Schema(_))
        ));
        let short = PD.replace("[0.25,0.75]", "[1.0]");
        assert!(matches!(
            parse_game(&short, &ParseOptions::default()),
            Err(GameError::Schema(_))
        ));
        let dup = PD.replace(r#"["ybar","ylow"]"#, r#"["y","y"]"#);
        assert!(matches!(
            parse_game(&dup, &ParseOptions::default()),
            Err(GameError::Schema(_))
        ));
    }

    #[test]
    fn caps_can_be_lifted() {
        let four = r#"{
            "actions": [["a","b","c","d"], ["x"]],
            "payoffs": [[[1,0]],[[2,0]],[[3,0]],[[4,0]]],
            "signals": ["y"],
            "signal_probs": [[[1]],[[1]],[[1]],[[1]]]
        }"#;
        assert!(matches!(
            parse_game(four, &ParseOptions::default()),
            Err(GameError::TooLarge(_))
        ));
        let g = parse_game(four, &ParseOptions { allow_large: true }).unwrap();
        assert_eq!(g.num_actions(0), 4);
    }

    #[test]
    fn pd_static_analysis() {
        let g = pd();
        assert_eq!(minmax(&g).v_under, Point::new(0.0, 0.0));
        assert_eq!(pure_nash(&g), vec![ActionProfile(1, 1)]);
        let sets = individually_rational_set(&g);
        assert_eq!(sets.feasible.len(), 4);
        let ir = sets.individually_rational.vertices();
        let want = [(0.0, 0.0), (8.0 / 3.0, 0.0), (2.0, 2.0), (0.0, 8.0 / 3.0)];
        assert_eq!(ir.len(), 4);
        for (got, (x, y)) in ir.iter().zip(want) {
            assert!(got.dist(Point::new(x, y)) < 1e-12, "{got}");
        }
    }

    #[test]
    fn single_profile_game() {
        let g = StageGame::new(
            [vec!["a".into()], vec!["b".into()]],
            vec![vec![[5.0, 5.0]]],
            vec!["y".into()],
            vec![vec![vec![1.0]]],
        )
        .unwrap();
        assert_eq!(minmax(&g).v_under, Point::new(5.0, 5.0));
        assert_eq!(feasible_set(&g).vertices(), &[Point::new(5.0, 5.0)]);
        assert_eq!(individually_rational_set(&g).individually_rational.len(), 1);
    }

    #[test]
    fn constant_game_everything_is_nash() {
        let g = StageGame::new(
            [vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]],
            vec![vec![[1.0, 1.0]; 2]; 2],
            vec!["y".into()],
            vec![vec![vec![1.0]; 2]; 2],
        )
        .unwrap();
        assert_eq!(pure_nash(&g).len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let g = pd();
        let again = parse_game(&g.to_json(), &ParseOptions::default()).unwrap();
        assert_eq!(g, again);
    }
}
