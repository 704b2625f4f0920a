use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::operator::{apply_b, enum_options, Caps, ProjectionMethod};
use super::ApsError;
use crate::game_model::{individually_rational_set, pure_nash, StageGame};
use crate::geometry::{area, hausdorff, GeomTolerance, Point, PolygonV};
use crate::vertex_enum::{EnumOptions, DEFAULT_MAX_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub delta: f64,
    /// Stop once consecutive areas differ by less than this.
    pub epsilon: f64,
    /// RDP threshold; zero disables simplification.
    pub theta: f64,
    pub max_iter: usize,
    /// Stop rule used once the iterate has area below `epsilon`.
    pub hausdorff_epsilon: f64,
    /// Cap on intermediate rays per enumeration.
    pub max_vertices: usize,
    pub method: ProjectionMethod,
    /// Fill `wall_ms` in the trace. Off by default so traces are reproducible.
    pub record_timings: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            delta: 0.9,
            epsilon: 0.005,
            theta: 0.0,
            max_iter: 200,
            hausdorff_epsilon: 1e-6,
            max_vertices: DEFAULT_MAX_VERTICES,
            method: ProjectionMethod::Auto,
            record_timings: false,
        }
    }
}

impl SolverConfig {
    pub fn with_delta(delta: f64) -> Self {
        Self {
            delta,
            ..Self::default()
        }
    }

    pub fn caps(&self) -> Caps {
        Caps {
            max_vertices: self.max_vertices,
            method: self.method,
        }
    }

    pub fn validate(&self) -> Result<(), ApsError> {
        let bad = |m: &str| Err(ApsError::Config(m.to_string()));
        if !(0.0..1.0).contains(&self.delta) {
            return bad("delta must lie in [0, 1)");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive");
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return bad("theta must be nonnegative");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if !(self.hausdorff_epsilon > 0.0 && self.hausdorff_epsilon.is_finite()) {
            return bad("hausdorff_epsilon must be positive");
        }
        if self.max_vertices == 0 {
            return bad("max_vertices must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    AreaEpsilon,
    HausdorffEpsilon,
    MaxIter,
    EmptySet,
    Truncated,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::AreaEpsilon => "area_epsilon",
            StopReason::HausdorffEpsilon => "hausdorff_epsilon",
            StopReason::MaxIter => "max_iter",
            StopReason::EmptySet => "empty_set",
            StopReason::Truncated => "truncated",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// 0 is the starting set.
    pub iteration: usize,
    pub vertices: Vec<Point>,
    pub area: f64,
    /// `area(W^{k-1}) - area(W^k)`.
    pub area_diff: Option<f64>,
    pub hausdorff_diff: Option<f64>,
    /// Whether `P(a)` was nonempty, per profile in row-major order.
    pub enforceable: Vec<bool>,
    pub wall_ms: Option<f64>,
}

impl IterationTrace {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn polygon(&self) -> PolygonV {
        PolygonV::from_canonical(self.vertices.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub geometry: GeomTolerance,
    pub vertex_enum: EnumOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SolverConfig,
    pub tolerances: Tolerances,
    pub static_nash: Vec<Point>,
    pub initial_set: PolygonV,
    pub trace: Vec<IterationTrace>,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub final_set: PolygonV,
    pub remark: String,
}

impl Report {
    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |t| t.iteration)
    }

    pub fn final_area(&self) -> f64 {
        area(&self.final_set)
    }
}

const OUTER_BOUND: &str = "The final set is an outer approximation of the pure-strategy perfect public equilibrium payoffs, computed up to the recorded tolerances.";
const EMPTY_REMARK: &str = "An iterate became empty: this outer method found no pure-strategy perfect public equilibrium payoff.";

/// Iterates the set operator from the individually rational feasible set.
pub fn solve(game: &StageGame, config: &SolverConfig) -> Result<Report, ApsError> {
    config.validate()?;
    let tol = game.tolerance();
    let caps = config.caps();
    let opts = enum_options(game, &caps);
    let w0 = individually_rational_set(game).individually_rational;
    let static_nash = pure_nash(game)
        .into_iter()
        .map(|a| game.payoff(a))
        .collect();

    let mut trace = vec![IterationTrace {
        iteration: 0,
        vertices: w0.vertices().to_vec(),
        area: area(&w0),
        area_diff: None,
        hausdorff_diff: None,
        enforceable: Vec::new(),
        wall_ms: None,
    }];
    let finish = |trace: Vec<IterationTrace>, final_set: PolygonV, stop: StopReason| {
        let converged = matches!(stop, StopReason::AreaEpsilon | StopReason::HausdorffEpsilon);
        Report {
            config: *config,
            tolerances: Tolerances {
                geometry: tol,
                vertex_enum: opts,
            },
            static_nash,
            initial_set: w0.clone(),
            trace,
            converged,
            stop_reason: stop,
            remark: if stop == StopReason::EmptySet {
                EMPTY_REMARK
            } else {
                OUTER_BOUND
            }
            .to_string(),
            final_set,
        }
    };
    if w0.is_empty() {
        return Ok(finish(trace, PolygonV::empty(), StopReason::EmptySet));
    }

    let mut current = w0.clone();
    for k in 1..=config.max_iter {
        let started = Instant::now();
        let b = apply_b(game, config.delta, &current, config.theta, &caps)?;
        if b.truncated {
            return Ok(finish(trace, current, StopReason::Truncated));
        }
        let next = b.set;
        let next_area = area(&next);
        let prev_area = area(&current);
        let haus = hausdorff(&current, &next).ok();
        trace.push(IterationTrace {
            iteration: k,
            vertices: next.vertices().to_vec(),
            area: next_area,
            area_diff: Some(prev_area - next_area),
            hausdorff_diff: haus,
            enforceable: b.per_action.iter().map(|p| !p.set.is_empty()).collect(),
            wall_ms: config
                .record_timings
                .then(|| started.elapsed().as_secs_f64() * 1e3),
        });
        if next.is_empty() {
            return Ok(finish(trace, next, StopReason::EmptySet));
        }
        let stop = if next_area < config.epsilon {
            haus.is_some_and(|h| h < config.hausdorff_epsilon)
                .then_some(StopReason::HausdorffEpsilon)
        } else {
            ((prev_area - next_area).abs() < config.epsilon).then_some(StopReason::AreaEpsilon)
        };
        current = next;
        if let Some(stop) = stop {
            return Ok(finish(trace, current, stop));
        }
    }
    Ok(finish(trace, current, StopReason::MaxIter))
}
