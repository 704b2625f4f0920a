use serde::{Deserialize, Serialize};

use crate::game_model::{component, ActionProfile, StageGame};
use crate::vertex_enum::HalfSpace;

/// One incentive row: `player` must not gain by switching to `deviation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IcRow {
    pub player: usize,
    pub deviation: usize,
    /// Inequality over `γ ∈ R^{2|Y|}`, coordinate `2y + player` is `γ_player(y)`.
    pub halfspace: HalfSpace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IcSystem {
    pub profile: ActionProfile,
    pub rows: Vec<IcRow>,
}

impl IcSystem {
    pub fn halfspaces(&self) -> impl Iterator<Item = &HalfSpace> {
        self.rows.iter().map(|r| &r.halfspace)
    }
}

/// Incentive constraints on continuation payoffs with promise keeping
/// substituted in. For player `i` and deviation `a'_i` the row reads
///
/// `δ Σ_y [ρ(y|a') − ρ(y|a)] γ_i(y) <= (1−δ) [u_i(a) − u_i(a')]`,
///
/// scaled to a unit normal (a vanishing normal is stored as exactly zero).
pub fn ic_constraints(game: &StageGame, a: ActionProfile, delta: f64) -> IcSystem {
    let ny = game.num_signals();
    let on_path = game.signal_probs(a);
    let u = game.payoff(a);
    let mut rows = Vec::new();
    for player in 0..2 {
        for dev in 0..game.num_actions(player) {
            if dev == a.action(player) {
                continue;
            }
            let b = a.with_action(player, dev);
            let off_path = game.signal_probs(b);
            let mut normal = vec![0.0; 2 * ny];
            for y in 0..ny {
                normal[2 * y + player] = delta * (off_path[y] - on_path[y]);
            }
            let offset = (1.0 - delta) * (component(u, player) - component(game.payoff(b), player));
            rows.push(IcRow {
                player,
                deviation: dev,
                halfspace: HalfSpace::new(normal, offset).normalized(),
            });
        }
    }
    IcSystem { profile: a, rows }
}
