use super::{
    convex_hull, GeomTolerance, GeometryError, HalfPlane, Point, PolygonH, PolygonV, Shape,
};

/// Cosine threshold below which two unit normals are treated as parallel.
const PARALLEL_EPS: f64 = 1e-12;

/// One outward unit-normal row per edge of a full-dimensional polygon.
///
/// Points and segments are rejected with [`GeometryError::Degenerate`]; use
/// [`constraint_rows`] for those.
pub fn to_halfspaces(p: &PolygonV) -> Result<PolygonH, GeometryError> {
    if p.shape() != Shape::Polygon {
        return Err(GeometryError::Degenerate(p.len()));
    }
    let rows = p
        .edges()
        .map(|(a, b)| {
            let e = b - a;
            let normal = Point::new(e.y, -e.x);
            HalfPlane::new(normal, normal.dot(a))
        })
        .collect();
    Ok(PolygonH::new(rows))
}

/// Halfplane description of any nonempty canonical set.
///
/// Polygons get their edge rows. A point `q` becomes the four rows
/// `±x <= ±q.x`, `±y <= ±q.y`; a segment `[p, q]` becomes the equality pair
/// along its normal followed by the caps `d·x <= d·q` and `-d·x <= -d·p`.
pub fn constraint_rows(p: &PolygonV) -> Result<PolygonH, GeometryError> {
    match p.shape() {
        Shape::Empty => Err(GeometryError::EmptyInput),
        Shape::Point => {
            let q = p.vertices()[0];
            Ok(PolygonH::new(vec![
                HalfPlane::new(Point::new(1.0, 0.0), q.x),
                HalfPlane::new(Point::new(-1.0, 0.0), -q.x),
                HalfPlane::new(Point::new(0.0, 1.0), q.y),
                HalfPlane::new(Point::new(0.0, -1.0), -q.y),
            ]))
        }
        Shape::Segment => {
            let (a, b) = (p.vertices()[0], p.vertices()[1]);
            let d = b - a;
            let n = Point::new(d.y, -d.x);
            let minus = |v: Point| Point::new(-v.x, -v.y);
            Ok(PolygonH::new(vec![
                HalfPlane::new(n, n.dot(a)),
                HalfPlane::new(minus(n), -n.dot(a)),
                HalfPlane::new(d, d.dot(b)),
                HalfPlane::new(minus(d), -d.dot(a)),
            ]))
        }
        Shape::Polygon => to_halfspaces(p),
    }
}

/// Extreme points of a bounded halfplane system.
///
/// Fails with [`GeometryError::Unbounded`] whenever the recession cone is
/// nontrivial, regardless of feasibility.
pub fn to_vertices(h: &PolygonH, tol: &GeomTolerance) -> Result<PolygonV, GeometryError> {
    if let Some(d) = recession_direction(h) {
        return Err(GeometryError::Unbounded(d.x, d.y));
    }
    let rows = &h.rows;
    let mut candidates = Vec::new();
    for (i, hi) in rows.iter().enumerate() {
        for hj in &rows[i + 1..] {
            let det = hi.normal.cross(hj.normal);
            if det.abs() <= PARALLEL_EPS {
                continue;
            }
            let x = (hi.offset * hj.normal.y - hj.offset * hi.normal.y) / det;
            let y = (hi.normal.x * hj.offset - hj.normal.x * hi.offset) / det;
            let p = Point::new(x, y);
            if h.contains(p, tol) {
                candidates.push(p);
            }
        }
    }
    Ok(convex_hull(&candidates, tol))
}

/// A nonzero direction `d` with `n·d <= 0` for every row, if one exists.
fn recession_direction(h: &PolygonH) -> Option<Point> {
    if h.rows.is_empty() {
        return Some(Point::new(1.0, 0.0));
    }
    // extreme rays of a planar cone {d : n_i·d <= 0} are perpendicular to some n_i
    h.rows.iter().find_map(|row| {
        let perp = Point::new(-row.normal.y, row.normal.x);
        [perp, Point::new(-perp.x, -perp.y)]
            .into_iter()
            .find(|d| h.rows.iter().all(|r| r.normal.dot(*d) <= PARALLEL_EPS))
    })
}

/// Clips a canonical set against one halfplane.
pub fn intersect_halfplane(p: &PolygonV, h: &HalfPlane, tol: &GeomTolerance) -> PolygonV {
    let verts = p.vertices();
    match p.shape() {
        Shape::Empty => PolygonV::empty(),
        Shape::Point => {
            if h.contains(verts[0], tol.eps_side) {
                p.clone()
            } else {
                PolygonV::empty()
            }
        }
        _ => {
            let n = verts.len();
            let mut out = Vec::with_capacity(n + 2);
            for i in 0..n {
                let cur = verts[i];
                let next = verts[(i + 1) % n];
                let dc = h.violation(cur);
                let dn = h.violation(next);
                if dc <= tol.eps_side {
                    out.push(cur);
                }
                let crosses = (dc < -tol.eps_side && dn > tol.eps_side)
                    || (dc > tol.eps_side && dn < -tol.eps_side);
                if crosses {
                    let t = dc / (dc - dn);
                    out.push(cur + t * (next - cur));
                }
            }
            convex_hull(&out, tol)
        }
    }
}

/// Smallest slack `offset - n·v` of any vertex of `inner` against the
/// halfplane description of `outer`. Nonnegative (up to tolerance) iff
/// `inner ⊆ outer`.
pub fn containment_slack(outer: &PolygonV, inner: &PolygonV) -> f64 {
    if inner.is_empty() {
        return f64::INFINITY;
    }
    let Ok(rows) = constraint_rows(outer) else {
        return f64::NEG_INFINITY;
    };
    inner
        .vertices()
        .iter()
        .flat_map(|v| rows.rows.iter().map(move |r| -r.violation(*v)))
        .fold(f64::INFINITY, f64::min)
}
