use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ic::ic_constraints;
use super::projection::support_projection;
use super::ApsError;
use crate::game_model::{ActionProfile, StageGame};
use crate::geometry::{constraint_rows, convex_hull, rdp_simplify, GeomTolerance, Point, PolygonV};
use crate::vertex_enum::{
    enumerate_product_section, product_polytope, EnumOptions, HalfSpace, VertexEnumError,
    DEFAULT_MAX_VERTICES,
};

/// Above this many coupled signal blocks the product seed makes double
/// description slower than support queries, even when it fits the cap.
const AUTO_DD_BLOCKS: usize = 2;

/// `P(a)` for one profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub profile: ActionProfile,
    pub set: PolygonV,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BResult {
    /// Hull of the union of the `P(a)`, after simplification.
    pub set: PolygonV,
    /// One entry per profile in row-major order.
    pub per_action: Vec<ProfileSet>,
    pub truncated: bool,
}

/// How `P(a)` is obtained from the stacked system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMethod {
    /// Double description for sections over at most two signal blocks whose
    /// product seed fits under the vertex cap, support-function refinement
    /// otherwise.
    #[default]
    Auto,
    /// Always double description; hitting the cap truncates.
    DoubleDescription,
    /// Always support-function refinement.
    SupportLp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Cap on intermediate rays in one double-description run.
    pub max_vertices: usize,
    pub method: ProjectionMethod,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_VERTICES,
            method: ProjectionMethod::Auto,
        }
    }
}

/// Vertex-enumeration options for `game` under `caps`.
pub fn enum_options(game: &StageGame, caps: &Caps) -> EnumOptions {
    let tol = game.tolerance();
    EnumOptions {
        eps_side: tol.eps_side,
        eps_point: tol.eps_point,
        max_vertices: caps.max_vertices,
    }
}

/// Payoffs enforceable by `a` with continuations drawn from `w`.
///
/// Signal blocks that no incentive row touches do not interact with the
/// rest of the system, so they are factored out: the section is enumerated
/// over the remaining blocks and each free block contributes a Minkowski
/// summand `δ ρ(y|a) W`.
pub fn enforceable_payoffs(
    game: &StageGame,
    a: ActionProfile,
    delta: f64,
    w: &PolygonV,
    caps: &Caps,
) -> Result<PolygonV, ApsError> {
    let tol = game.tolerance();
    let opts = enum_options(game, caps);
    if w.is_empty() {
        return Ok(PolygonV::empty());
    }
    let ny = game.num_signals();
    let ic = ic_constraints(game, a, delta);
    let touched: Vec<usize> = (0..ny)
        .filter(|&y| {
            ic.halfspaces()
                .any(|h| h.normal[2 * y] != 0.0 || h.normal[2 * y + 1] != 0.0)
        })
        .collect();

    let rho = game.signal_probs(a);
    let base = (1.0 - delta) * game.payoff(a);
    let mut image: Vec<Point> = if touched.is_empty() {
        if ic.halfspaces().any(|h| h.offset < -opts.eps_side) {
            return Ok(PolygonV::empty());
        }
        vec![base]
    } else {
        let cuts: Vec<HalfSpace> = ic
            .halfspaces()
            .map(|h| {
                let normal = touched
                    .iter()
                    .flat_map(|&y| [h.normal[2 * y], h.normal[2 * y + 1]])
                    .collect();
                HalfSpace::new(normal, h.offset)
            })
            .collect();
        let weights: Vec<f64> = touched.iter().map(|&y| delta * rho[y]).collect();
        let seeds = w.len().checked_pow(touched.len() as u32);
        let use_dd = match caps.method {
            ProjectionMethod::DoubleDescription => true,
            ProjectionMethod::SupportLp => false,
            ProjectionMethod::Auto => {
                touched.len() <= AUTO_DD_BLOCKS && seeds.is_some_and(|n| n <= caps.max_vertices)
            }
        };
        let by_support = if use_dd {
            None
        } else {
            image_by_support(w, &weights, cuts.clone(), &tol)
        };
        // a failed support query falls back to double description
        let section = match by_support {
            Some(points) => points,
            None => image_by_enumeration(w, &weights, &cuts, &opts)?
                .ok_or_else(|| ApsError::Truncated(game.profile_label(a)))?,
        };
        section.into_iter().map(|p| base + p).collect()
    };
    if image.is_empty() {
        return Ok(PolygonV::empty());
    }

    let mut set = convex_hull(&image, &tol);
    for y in (0..ny).filter(|y| !touched.contains(y)) {
        let weight = delta * rho[y];
        if weight == 0.0 {
            continue;
        }
        image = set
            .vertices()
            .iter()
            .flat_map(|&p| w.vertices().iter().map(move |&q| p + weight * q))
            .collect();
        set = convex_hull(&image, &tol);
    }
    Ok(set)
}

/// `Σ_k weights[k] γ_k` over the vertices of the section; `None` on truncation.
fn image_by_enumeration(
    w: &PolygonV,
    weights: &[f64],
    cuts: &[HalfSpace],
    opts: &EnumOptions,
) -> Result<Option<Vec<Point>>, VertexEnumError> {
    let section = enumerate_product_section(w, weights.len(), cuts, opts)?;
    if section.vertices.truncated {
        return Ok(None);
    }
    let image = section
        .vertices
        .points
        .iter()
        .map(|g| {
            weights
                .iter()
                .enumerate()
                .fold(Point::new(0.0, 0.0), |v, (k, &c)| {
                    v + c * Point::new(g[2 * k], g[2 * k + 1])
                })
        })
        .collect();
    Ok(Some(image))
}

fn image_by_support(
    w: &PolygonV,
    weights: &[f64],
    cuts: Vec<HalfSpace>,
    tol: &GeomTolerance,
) -> Option<Vec<Point>> {
    let rows = constraint_rows(w).expect("nonempty polygon has constraint rows");
    let mut system = product_polytope(&rows, weights.len()).rows().to_vec();
    system.extend(cuts);
    support_projection(&system, weights, tol)
}

/// One application of the set operator: `co ∪_a P(a)`, then RDP with `theta`.
pub fn apply_b(
    game: &StageGame,
    delta: f64,
    w: &PolygonV,
    theta: f64,
    caps: &Caps,
) -> Result<BResult, ApsError> {
    let profiles: Vec<ActionProfile> = game.profiles().collect();
    let results: Vec<Result<PolygonV, ApsError>> = profiles
        .par_iter()
        .map(|&a| enforceable_payoffs(game, a, delta, w, caps))
        .collect();

    let mut truncated = false;
    let mut per_action = Vec::with_capacity(profiles.len());
    for (a, r) in profiles.into_iter().zip(results) {
        let set = match r {
            Ok(set) => set,
            Err(ApsError::Truncated(_)) => {
                truncated = true;
                PolygonV::empty()
            }
            Err(e) => return Err(e),
        };
        per_action.push(ProfileSet { profile: a, set });
    }

    let mut union: Vec<Point> = per_action
        .iter()
        .flat_map(|p| p.set.vertices().iter().copied())
        .collect();
    union.sort_by(|p, q| p.lex_cmp(q));
    let hull = convex_hull(&union, &game.tolerance());
    Ok(BResult {
        set: rdp_simplify(&hull, theta),
        per_action,
        truncated,
    })
}
