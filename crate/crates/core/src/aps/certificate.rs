use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use super::ic::ic_constraints;
use crate::game_model::{ActionProfile, StageGame};
use crate::geometry::{constraint_rows, Point, PolygonV};

/// Largest accepted violation, relative to the payoff scale.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-7;

/// Continuation payoffs that enforce `v` through `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `γ(y)` per signal.
    pub gamma: Vec<Point>,
    /// Largest violation over the continuation, incentive and promise-keeping rows.
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    /// Smallest achievable uniform relaxation of the system.
    pub min_slack: f64,
    /// Description of the most violated row at the best continuation found.
    pub row: String,
    pub violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Enforcement {
    Certified(Certificate),
    Refused(Refusal),
}

impl Enforcement {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Enforcement::Certified(c) => Some(c),
            Enforcement::Refused(_) => None,
        }
    }
}

struct Row {
    label: String,
    coeffs: Vec<f64>,
    rhs: f64,
}

/// Checks, by linear programming, that `v` is enforced by `a` with
/// continuations in `w`: finds `γ` with every `γ(y) ∈ w`, the incentive rows
/// satisfied and `v = (1−δ)u(a) + δ Σ_y ρ(y|a) γ(y)`.
pub fn verify_enforceability(
    game: &StageGame,
    a: ActionProfile,
    delta: f64,
    v: Point,
    w: &PolygonV,
) -> Enforcement {
    let Ok(w_rows) = constraint_rows(w) else {
        return Enforcement::Refused(Refusal {
            min_slack: f64::INFINITY,
            row: "continuation set is empty".into(),
            violation: f64::INFINITY,
        });
    };
    let ny = game.num_signals();
    let dim = 2 * ny;
    let mut rows = Vec::new();
    for y in 0..ny {
        for (k, h) in w_rows.rows.iter().enumerate() {
            let mut coeffs = vec![0.0; dim];
            coeffs[2 * y] = h.normal.x;
            coeffs[2 * y + 1] = h.normal.y;
            rows.push(Row {
                label: format!("continuation row {k} at signal {}", game.signal_labels()[y]),
                coeffs,
                rhs: h.offset,
            });
        }
    }
    for r in ic_constraints(game, a, delta).rows {
        rows.push(Row {
            label: format!(
                "incentive row of player {} against {}",
                r.player + 1,
                game.action_labels(r.player)[r.deviation]
            ),
            coeffs: r.halfspace.normal,
            rhs: r.halfspace.offset,
        });
    }
    let rho = game.signal_probs(a);
    let u = game.payoff(a);
    for (player, (target, stage)) in [(v.x, u.x), (v.y, u.y)].into_iter().enumerate() {
        let mut coeffs = vec![0.0; dim];
        for y in 0..ny {
            coeffs[2 * y + player] = delta * rho[y];
        }
        let rhs = target - (1.0 - delta) * stage;
        let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        let label = format!("promise keeping for player {}", player + 1);
        rows.push(Row {
            label: label.clone(),
            coeffs,
            rhs,
        });
        rows.push(Row {
            label,
            coeffs: neg,
            rhs: -rhs,
        });
    }

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let gamma: Vec<_> = (0..dim)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let slack = lp.add_var(1.0, (0.0, f64::INFINITY));
    for r in &rows {
        let mut expr: Vec<_> = gamma.iter().zip(&r.coeffs).map(|(&g, &c)| (g, c)).collect();
        expr.push((slack, -1.0));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, r.rhs);
    }
    let solution = match lp.solve().map(|o| o.into_solution()) {
        Ok(Ok(s)) => s,
        _ => {
            return Enforcement::Refused(Refusal {
                min_slack: f64::NAN,
                row: "linear program failed".into(),
                violation: f64::NAN,
            })
        }
    };
    let g: Vec<f64> = gamma.iter().map(|&x| solution.var_value(x)).collect();
    let (worst, violation) = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (
                i,
                r.coeffs.iter().zip(&g).map(|(c, x)| c * x).sum::<f64>() - r.rhs,
            )
        })
        .fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    let violation = violation.max(0.0);

    if violation <= CERTIFICATE_TOLERANCE * game.payoff_scale().max(1.0) {
        Enforcement::Certified(Certificate {
            gamma: (0..ny)
                .map(|y| Point::new(g[2 * y], g[2 * y + 1]))
                .collect(),
            max_violation: violation,
        })
    } else {
        Enforcement::Refused(Refusal {
            min_slack: solution.var_value(slack),
            row: rows[worst].label.clone(),
            violation,
        })
    }
}
