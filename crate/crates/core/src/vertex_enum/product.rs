//! The product polytope `W^Y` and its sections by extra constraints.
//!
//! Coordinates are grouped in 2-D blocks, one per signal: block `y` holds
//! coordinates `2y` and `2y + 1`.

use super::dd::{Cone, Step};
use super::{finalize, EnumOptions, HPolytope, HalfSpace, VertexEnumError, VertexSet};
use crate::geometry::{constraint_rows, PolygonH, PolygonV, Shape};

/// Replicates every row of `w` on each signal's coordinate block.
pub fn product_polytope(w: &PolygonH, num_signals: usize) -> HPolytope {
    assert!(num_signals >= 1, "at least one signal is required");
    let dim = 2 * num_signals;
    let mut p = HPolytope::new(dim);
    for y in 0..num_signals {
        for row in &w.rows {
            let mut normal = vec![0.0; dim];
            normal[2 * y] = row.normal.x;
            normal[2 * y + 1] = row.normal.y;
            p.push(HalfSpace::new(normal, row.offset));
        }
    }
    p
}

/// Vertices of `W^Y ∩ {cuts}` together with the stacked system they came from.
#[derive(Clone, Debug)]
pub struct ProductSection {
    /// Product rows first, then the cuts in the given order.
    pub polytope: HPolytope,
    pub vertices: VertexSet,
}

/// Enumerates the vertices of `W^Y` intersected with `cuts`.
///
/// The double-description pair of the product is known in closed form (its
/// vertices are tuples of vertices of `W`, its edges change one block along
/// an edge of `W`), so the engine starts from it and only inserts the cuts.
pub fn enumerate_product_section(
    w: &PolygonV,
    num_signals: usize,
    cuts: &[HalfSpace],
    opts: &EnumOptions,
) -> Result<ProductSection, VertexEnumError> {
    assert!(num_signals >= 1, "at least one signal is required");
    let dim = 2 * num_signals;
    let Ok(w_rows) = constraint_rows(w) else {
        // empty W: empty product
        let polytope = HPolytope::new(dim);
        return Ok(ProductSection {
            polytope,
            vertices: VertexSet::default(),
        });
    };
    let mut polytope = product_polytope(&w_rows, num_signals);
    for cut in cuts {
        polytope.push(cut.clone());
    }
    polytope.validate()?;

    let block_rows = w_rows.len();
    let seed = polygon_seed(w);
    let k = seed.len();
    let total = match k.checked_pow(num_signals as u32) {
        Some(t) if t <= opts.max_vertices => t,
        _ => {
            let vertices = VertexSet {
                truncated: true,
                ..VertexSet::default()
            };
            return Ok(ProductSection { polytope, vertices });
        }
    };

    let width = dim + 1;
    let mut cone = Cone::new(width, polytope.rows().len());
    let mut digits = vec![0usize; num_signals];
    let mut coords = vec![0.0; width];
    coords[dim] = 1.0;
    for idx in 0..total {
        let mut rest = idx;
        for d in digits.iter_mut() {
            *d = rest % k;
            rest /= k;
        }
        for (y, &d) in digits.iter().enumerate() {
            let v = w.vertices()[d];
            coords[2 * y] = v.x;
            coords[2 * y + 1] = v.y;
        }
        let active = digits
            .iter()
            .enumerate()
            .flat_map(|(y, &d)| seed[d].active.iter().map(move |&r| y * block_rows + r));
        cone.push_ray(&coords, active);

        let mut stride = 1;
        for &d in &digits {
            for &j in &seed[d].neighbours {
                if j > d {
                    cone.push_edge(idx, idx + (j - d) * stride);
                }
            }
            stride *= k;
        }
    }

    let mut truncated = false;
    let base = num_signals * block_rows;
    for (c, cut) in cuts.iter().enumerate() {
        let mut h = cut.normal.clone();
        h.push(-cut.offset);
        match cone.add_row(base + c, &h, opts.eps_side, opts.max_vertices) {
            Step::Continue => {}
            Step::Empty => {
                return Ok(ProductSection {
                    polytope,
                    vertices: VertexSet::default(),
                });
            }
            Step::Truncated => {
                truncated = true;
                break;
            }
        }
    }

    let (finite, _) = cone.split_rays();
    let points = finite
        .iter()
        .map(|&i| cone.ray(i)[..dim].to_vec())
        .collect();
    let vertices = finalize(points, &polytope, opts, truncated);
    Ok(ProductSection { polytope, vertices })
}

struct SeedVertex {
    /// Indices into the rows produced by [`constraint_rows`].
    active: Vec<usize>,
    neighbours: Vec<usize>,
}

/// Active rows and neighbours of each vertex of `w`, read off its structure.
fn polygon_seed(w: &PolygonV) -> Vec<SeedVertex> {
    match w.shape() {
        Shape::Empty => Vec::new(),
        Shape::Point => vec![SeedVertex {
            active: vec![0, 1, 2, 3],
            neighbours: vec![],
        }],
        // rows: normal pair, cap at the second endpoint, cap at the first
        Shape::Segment => vec![
            SeedVertex {
                active: vec![0, 1, 3],
                neighbours: vec![1],
            },
            SeedVertex {
                active: vec![0, 1, 2],
                neighbours: vec![0],
            },
        ],
        Shape::Polygon => {
            let n = w.len();
            // edge i runs from vertex i to vertex i + 1
            (0..n)
                .map(|i| SeedVertex {
                    active: vec![(i + n - 1) % n, i],
                    neighbours: vec![(i + n - 1) % n, (i + 1) % n],
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, to_halfspaces, GeomTolerance, Point};
    use crate::vertex_enum::enumerate_vertices;

    fn square() -> PolygonV {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(|(x, y)| Point::new(x, y));
        convex_hull(&pts, &GeomTolerance::default())
    }

    #[test]
    fn square_product_is_a_box() {
        let p = product_polytope(&to_halfspaces(&square()).unwrap(), 2);
        assert_eq!(p.dim(), 4);
        assert_eq!(p.rows().len(), 8);
        let vs = enumerate_vertices(&p, &EnumOptions::default()).unwrap();
        assert_eq!(vs.len(), 16);
    }

    #[test]
    fn seeded_matches_from_scratch() {
        let tri = convex_hull(
            &[
                Point::new(0.0, 0.0),
                Point::new(3.0, 0.5),
                Point::new(1.0, 2.0),
            ],
            &GeomTolerance::default(),
        );
        let cuts = vec![
            HalfSpace::new(vec![1.0, 0.0, -1.0, 0.0], 0.3),
            HalfSpace::new(vec![0.0, -0.5, 0.0, 0.25], -0.1),
        ];
        let seeded = enumerate_product_section(&tri, 2, &cuts, &EnumOptions::default()).unwrap();
        let scratch = enumerate_vertices(&seeded.polytope, &EnumOptions::default()).unwrap();
        assert_eq!(seeded.vertices.len(), 18);
        assert_eq!(seeded.vertices.len(), scratch.len());
        for a in &seeded.vertices.points {
            let hit = scratch
                .points
                .iter()
                .any(|b| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9));
            assert!(hit, "{a:?} missing from the from-scratch run");
        }
    }

    #[test]
    fn point_product_is_pinned() {
        let w = PolygonV::point(Point::new(0.0, 0.0));
        let section = enumerate_product_section(&w, 2, &[], &EnumOptions::default()).unwrap();
        assert_eq!(section.polytope.rows().len(), 8);
        assert_eq!(section.vertices.points, vec![vec![0.0; 4]]);
        let scratch = enumerate_vertices(&section.polytope, &EnumOptions::default()).unwrap();
        assert_eq!(scratch.points, vec![vec![0.0; 4]]);
    }

    #[test]
    fn segment_product_is_a_cube() {
        let seg = convex_hull(
            &[Point::new(0.0, 0.0), Point::new(1.0, 1.0)],
            &GeomTolerance::default(),
        );
        let section = enumerate_product_section(&seg, 3, &[], &EnumOptions::default()).unwrap();
        assert_eq!(section.vertices.len(), 8);
        // a cut through the middle of one block keeps the structure consistent
        let cut = HalfSpace::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 0.5);
        let section = enumerate_product_section(&seg, 3, &[cut], &EnumOptions::default()).unwrap();
        assert_eq!(section.vertices.len(), 8);
        assert!(section.vertices.points.iter().all(|x| x[0] <= 0.5 + 1e-12));
    }

    #[test]
    fn vertex_count_is_a_power() {
        let section =
            enumerate_product_section(&square(), 3, &[], &EnumOptions::default()).unwrap();
        assert_eq!(section.vertices.len(), 64);
        let small = EnumOptions {
            max_vertices: 10,
            ..EnumOptions::default()
        };
        assert!(
            enumerate_product_section(&square(), 3, &[], &small)
                .unwrap()
                .vertices
                .truncated
        );
    }
}
