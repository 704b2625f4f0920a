//! Planar projection of a polytope by support-function queries.
//!
//! The image polygon is refined edge by edge: each edge of the current
//! inscribed polygon is tested with a linear program in its outward normal
//! direction, and either confirmed as a supporting line or split at the
//! maximizer. When every edge is confirmed the inscribed polygon equals the
//! image.

use microlp::{ComparisonOp, Error, OptimizationDirection, Problem};

use crate::geometry::{convex_hull, GeomTolerance, Point};
use crate::vertex_enum::HalfSpace;

/// Upper bound on support queries for one projection.
const MAX_QUERIES: usize = 20_000;

/// Images of the projection's vertices under `γ ↦ Σ_k weights[k] γ_k`, where
/// `γ_k` is the k-th 2-D block of `γ`. Empty when the system is infeasible;
/// `None` when a query fails for any other reason or the query budget runs out.
pub(crate) fn support_projection(
    rows: &[HalfSpace],
    weights: &[f64],
    tol: &GeomTolerance,
) -> Option<Vec<Point>> {
    let dim = 2 * weights.len();
    let query = |dir: Point| -> Result<Point, Error> {
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = (0..dim)
            .map(|j| {
                let w = weights[j / 2];
                let c = if j % 2 == 0 { dir.x } else { dir.y };
                lp.add_var(w * c, (f64::NEG_INFINITY, f64::INFINITY))
            })
            .collect();
        for r in rows {
            let expr: Vec<_> = vars
                .iter()
                .zip(&r.normal)
                .filter(|(_, &c)| c != 0.0)
                .map(|(&v, &c)| (v, c))
                .collect();
            lp.add_constraint(expr.as_slice(), ComparisonOp::Le, r.offset);
        }
        let sol = lp
            .solve()?
            .into_solution()
            .map_err(|_| Error::InternalError("interrupted".into()))?;
        let g: Vec<f64> = vars.iter().map(|&v| sol.var_value(v)).collect();
        Ok(weights
            .iter()
            .enumerate()
            .fold(Point::new(0.0, 0.0), |acc, (k, &w)| {
                acc + w * Point::new(g[2 * k], g[2 * k + 1])
            }))
    };

    let mut points = Vec::new();
    for k in 0..8 {
        let a = std::f64::consts::FRAC_PI_4 * k as f64;
        match query(Point::new(a.cos(), a.sin())) {
            Ok(p) => points.push(p),
            Err(Error::Infeasible) => return Some(Vec::new()),
            Err(_) => return None,
        }
    }

    let mut confirmed: Vec<(Point, Point)> = Vec::new();
    let mut queries = 8;
    loop {
        let hull = convex_hull(&points, tol).into_vertices();
        if hull.len() < 2 {
            return Some(hull);
        }
        let n = hull.len();
        let open = (0..n)
            .map(|i| (hull[i], hull[(i + 1) % n]))
            .find(|e| !confirmed.contains(e));
        let Some((p, q)) = open else {
            return Some(hull);
        };
        if queries >= MAX_QUERIES {
            return None;
        }
        queries += 1;
        let e = q - p;
        let normal = (1.0 / e.norm()) * Point::new(e.y, -e.x);
        match query(normal) {
            Ok(r) if normal.dot(r - p) > tol.eps_side => points.push(r),
            Ok(_) => confirmed.push((p, q)),
            Err(_) => return None,
        }
    }
}
