use super::{GeomTolerance, Point, PolygonV};

/// Convex hull by Andrew's monotone chain, returned in canonical form.
///
/// Duplicates (within `eps_point`) and vertices within `eps_side` of the
/// chord through their neighbours are dropped. The chain itself uses the
/// plain orientation sign; tolerances only apply to the finished cycle, since
/// a tolerant turn test can discard extreme points of near-vertical runs.
pub fn convex_hull(points: &[Point], tol: &GeomTolerance) -> PolygonV {
    let mut pts: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p.x.is_finite() && p.y.is_finite())
        .collect();
    if pts.is_empty() {
        return PolygonV::empty();
    }
    pts.sort_by(Point::lex_cmp);
    let pts = drop_near_duplicates(pts, tol.eps_point);
    if pts.len() == 1 {
        return PolygonV::point(pts[0]);
    }

    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    // lower chain
    for &p in &pts {
        while hull.len() >= 2 && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    // upper chain
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    PolygonV::from_canonical(canonicalize_cycle(hull, tol))
}

/// Keeps the first of every group of points within `eps` of a kept point.
/// Input must be sorted lexicographically; the order is preserved.
fn drop_near_duplicates(sorted: Vec<Point>, eps: f64) -> Vec<Point> {
    let mut kept: Vec<Point> = Vec::with_capacity(sorted.len());
    for p in sorted {
        let close = kept
            .iter()
            .rev()
            .take_while(|q| q.x >= p.x - eps)
            .any(|q| q.dist(p) <= eps);
        if !close {
            kept.push(p);
        }
    }
    kept
}

fn left_turn(a: Point, b: Point, c: Point) -> bool {
    (b - a).cross(c - a) > 0.0
}

/// True when `b` sits strictly to the right of the chord `a -> c`, i.e. the
/// path `a -> b -> c` turns left by more than the tolerance.
fn strict_left_turn(a: Point, b: Point, c: Point, tol: &GeomTolerance) -> bool {
    let chord = c - a;
    let len = chord.norm();
    if len <= tol.eps_point {
        // a and c coincide: keep b only if it is a genuinely distinct point
        return b.dist(a) > tol.eps_point;
    }
    // distance of b to the right of a->c
    (b - a).cross(chord) / len > tol.eps_side
}

/// True when `b` projects inside the segment `a c`; the ends of a thin
/// sliver are flat against their neighbours' chord but must be kept.
fn between(a: Point, b: Point, c: Point) -> bool {
    let chord = c - a;
    let t = (b - a).dot(chord);
    t >= 0.0 && t <= chord.dot(chord)
}

/// Removes cyclic duplicates and flat vertices, then rotates so the
/// lexicographic minimum comes first. Input must be a CCW convex cycle.
pub(crate) fn canonicalize_cycle(mut cycle: Vec<Point>, tol: &GeomTolerance) -> Vec<Point> {
    loop {
        let n = cycle.len();
        if n <= 1 {
            break;
        }
        if n == 2 {
            if cycle[0].dist(cycle[1]) <= tol.eps_point {
                cycle.truncate(1);
            }
            break;
        }
        let mut removed = false;
        let mut i = 0;
        while i < cycle.len() && cycle.len() > 2 {
            let n = cycle.len();
            let prev = cycle[(i + n - 1) % n];
            let cur = cycle[i];
            let next = cycle[(i + 1) % n];
            if cur.dist(prev) <= tol.eps_point
                || (!strict_left_turn(prev, cur, next, tol) && between(prev, cur, next))
            {
                cycle.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
    if let Some(start) = cycle
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lex_cmp(b.1))
        .map(|(i, _)| i)
    {
        cycle.rotate_left(start);
    }
    cycle
}
