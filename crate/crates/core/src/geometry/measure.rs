use super::{GeometryError, Point, PolygonV, Shape};

/// Shoelace area; zero for empty sets, points and segments.
pub fn area(p: &PolygonV) -> f64 {
    if p.shape() != Shape::Polygon {
        return 0.0;
    }
    let v = p.vertices();
    let origin = v[0];
    let twice: f64 = v
        .windows(2)
        .skip(1)
        .map(|w| (w[0] - origin).cross(w[1] - origin))
        .sum();
    0.5 * twice.abs()
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + t * ab)
}

/// Euclidean distance from `p` to a nonempty convex set (zero inside).
pub fn distance_to_polygon(p: Point, poly: &PolygonV) -> f64 {
    let v = poly.vertices();
    match poly.shape() {
        Shape::Empty => f64::INFINITY,
        Shape::Point => p.dist(v[0]),
        Shape::Segment => point_segment_distance(p, v[0], v[1]),
        Shape::Polygon => {
            let inside = poly.edges().all(|(a, b)| (p - a).cross(b - a) <= 0.0);
            if inside {
                0.0
            } else {
                poly.edges()
                    .map(|(a, b)| point_segment_distance(p, a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Symmetric Hausdorff distance between two nonempty convex sets.
///
/// The distance to a convex set is a convex function, so its maximum over
/// the other set is attained at a vertex.
pub fn hausdorff(p: &PolygonV, q: &PolygonV) -> Result<f64, GeometryError> {
    if p.is_empty() || q.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let directed = |a: &PolygonV, b: &PolygonV| {
        a.vertices()
            .iter()
            .map(|&v| distance_to_polygon(v, b))
            .fold(0.0, f64::max)
    };
    Ok(directed(p, q).max(directed(q, p)))
}
