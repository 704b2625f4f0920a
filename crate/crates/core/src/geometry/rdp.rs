use super::measure::point_segment_distance;
use super::{Point, PolygonV};

/// Ramer–Douglas–Peucker simplification of a closed convex boundary.
///
/// The cycle is split at its lexicographic minimum and maximum vertices,
/// which are always kept; each open chain is simplified independently.
/// The result keeps a subset of the input vertices in cyclic order, so it
/// is convex and contained in `p`. `theta == 0` returns `p` untouched.
pub fn rdp_simplify(p: &PolygonV, theta: f64) -> PolygonV {
    assert!(theta >= 0.0, "RDP threshold must be nonnegative");
    let v = p.vertices();
    if theta == 0.0 || v.len() <= 3 {
        return p.clone();
    }
    let n = v.len();
    // canonical order puts the lexicographic minimum first
    let max_idx = (0..n).max_by(|&a, &b| v[a].lex_cmp(&v[b])).unwrap_or(0);

    let lower: Vec<Point> = v[..=max_idx].to_vec();
    let mut upper: Vec<Point> = v[max_idx..].to_vec();
    upper.push(v[0]);

    // lower chain contributes both anchors: [min, ..., max]
    let mut keep: Vec<Point> = simplify_chain(&lower, theta)
        .into_iter()
        .map(|i| lower[i])
        .collect();
    keep.extend(
        simplify_chain(&upper, theta)
            .into_iter()
            .filter(|&i| i != 0 && i + 1 != upper.len())
            .map(|i| upper[i]),
    );
    PolygonV::from_canonical(keep)
}

/// Relative margin under which two distances count as tied. Exact ties are
/// common on games with rational data, and must not be decided by rounding.
const TIE: f64 = 1e-12;

/// Indices of the kept points of an open polyline, endpoints included, ascending.
fn simplify_chain(line: &[Point], theta: f64) -> Vec<usize> {
    let scale = line
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1.0, f64::max);
    let tie = TIE * scale;
    let mut keep = vec![false; line.len()];
    if let Some(last) = keep.last_mut() {
        *last = true;
    }
    keep[0] = true;
    let mut stack = vec![(0usize, line.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let dists: Vec<f64> = (lo + 1..hi)
            .map(|i| point_segment_distance(line[i], line[lo], line[hi]))
            .collect();
        let far = dists.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // first of the near-tied farthest points
        let pos = dists.iter().position(|&d| d >= far - tie).unwrap_or(0);
        let (idx, dist) = (lo + 1 + pos, dists[pos]);
        if dist > theta + tie {
            keep[idx] = true;
            stack.push((lo, idx));
            stack.push((idx, hi));
        }
    }
    keep.iter()
        .enumerate()
        .filter_map(|(i, &k)| k.then_some(i))
        .collect()
}
