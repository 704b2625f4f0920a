//! Vertex enumeration for bounded H-polytopes by the double-description
//! method, plus the product polytope `W^Y` that houses continuation maps.

mod dd;
mod product;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;
use dd::{dot, Cone, Step};

pub use product::{enumerate_product_section, product_polytope, ProductSection};

/// Default cap on the number of intermediate rays.
pub const DEFAULT_MAX_VERTICES: usize = 200_000;

/// Normals shorter than this are treated as the zero vector.
const ZERO_NORMAL: f64 = 1e-12;
/// Residual norm below which a row is linearly dependent on earlier ones.
const RANK_EPS: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VertexEnumError {
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("row {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {0} has a non-finite coefficient")]
    NonFinite(usize),
}

/// `normal · x <= offset` in `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// Same halfspace with a unit normal; near-zero normals become exactly zero.
    pub fn normalized(mut self) -> Self {
        let norm = self.norm();
        if norm <= ZERO_NORMAL {
            self.normal.iter_mut().for_each(|v| *v = 0.0);
        } else {
            self.normal.iter_mut().for_each(|v| *v /= norm);
            self.offset /= norm;
        }
        self
    }

    pub fn norm(&self) -> f64 {
        self.normal.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `normal · x - offset`; positive means violated.
    pub fn violation(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    fn homogenized(&self) -> Vec<f64> {
        let mut h = self.normal.clone();
        h.push(-self.offset);
        h
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<HalfSpace>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "polytope dimension must be at least 1");
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn with_rows(dim: usize, rows: Vec<HalfSpace>) -> Self {
        let mut p = Self::new(dim);
        for r in rows {
            p.push(r);
        }
        p
    }

    pub fn push(&mut self, row: HalfSpace) {
        assert_eq!(
            row.normal.len(),
            self.dim,
            "row length must match the ambient dimension"
        );
        self.rows.push(row);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HalfSpace] {
        &self.rows
    }

    /// Largest violation over all rows (negative when strictly inside).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| r.violation(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn validate(&self) -> Result<(), VertexEnumError> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.normal.len() != self.dim {
                return Err(VertexEnumError::DimensionMismatch {
                    row: i,
                    expected: self.dim,
                    found: r.normal.len(),
                });
            }
            if !r.offset.is_finite() || r.normal.iter().any(|v| !v.is_finite()) {
                return Err(VertexEnumError::NonFinite(i));
            }
        }
        Ok(())
    }
}

/// Vertices of an H-polytope with the indices of the rows active at each.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexSet {
    pub points: Vec<Vec<f64>>,
    pub tags: Vec<Vec<usize>>,
    /// The ray cap was hit; `points` is a partial intermediate result.
    pub truncated: bool,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumOptions {
    pub eps_side: f64,
    pub eps_point: f64,
    pub max_vertices: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            eps_side: 1e-9,
            eps_point: 1e-9,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// Enumerates the vertices of a bounded polytope from its rows alone.
///
/// Rows are inserted tightest-first relative to the Chebyshev center. An
/// empty polytope yields an empty [`VertexSet`]; a feasible polyhedron with
/// any recession direction is an error.
pub fn enumerate_vertices(p: &HPolytope, opts: &EnumOptions) -> Result<VertexSet, VertexEnumError> {
    p.validate()?;
    let dim = p.dim;

    let mut active: Vec<(usize, HalfSpace)> = Vec::with_capacity(p.rows.len());
    for (i, row) in p.rows.iter().enumerate() {
        let row = row.clone().normalized();
        if row.norm() == 0.0 {
            if row.offset < -opts.eps_side {
                return Ok(VertexSet::default());
            }
            continue;
        }
        active.push((i, row));
    }

    let basis = row_space_basis(active.iter().map(|(_, r)| r.normal.as_slice()), dim);
    if basis.len() < dim {
        return enumerate_with_lineality(&active, &basis, opts);
    }

    let order = insertion_order(&active, dim);
    let width = dim + 1;
    let t_row = p.rows.len();
    let mut homogenized: Vec<Vec<f64>> = active.iter().map(|(_, r)| r.homogenized()).collect();
    let mut t_vec = vec![0.0; width];
    t_vec[dim] = -1.0;
    homogenized.push(t_vec);
    let t_pos = homogenized.len() - 1;

    // initial simplicial cone: t >= 0 plus the first independent rows
    let candidates = std::iter::once(t_pos).chain(order.iter().copied());
    let initial = greedy_independent(candidates, &homogenized, width);
    let global = |pos: usize| if pos == t_pos { t_row } else { active[pos].0 };

    let mut cone = Cone::new(width, p.rows.len() + 1);
    let inverse = invert(
        &initial
            .iter()
            .map(|&k| homogenized[k].clone())
            .collect::<Vec<_>>(),
    );
    for j in 0..width {
        // ray j solves M z = -e_j: tight on every initial row except j
        let ray: Vec<f64> = (0..width).map(|r| -inverse[r][j]).collect();
        let zeros = initial
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &pos)| global(pos));
        cone.push_ray(&ray, zeros);
    }
    for a in 0..width {
        for b in a + 1..width {
            cone.push_edge(a, b);
        }
    }

    let mut truncated = false;
    for &pos in order.iter().filter(|pos| !initial.contains(pos)) {
        match cone.add_row(
            global(pos),
            &homogenized[pos],
            opts.eps_side,
            opts.max_vertices,
        ) {
            Step::Continue => {}
            Step::Empty => return Ok(VertexSet::default()),
            Step::Truncated => {
                truncated = true;
                break;
            }
        }
    }

    let (finite, infinite) = cone.split_rays();
    if finite.is_empty() {
        return Ok(VertexSet {
            truncated,
            ..VertexSet::default()
        });
    }
    if infinite && !truncated {
        return Err(VertexEnumError::Unbounded);
    }
    let points = finite
        .iter()
        .map(|&i| cone.ray(i)[..dim].to_vec())
        .collect();
    Ok(finalize(points, p, opts, truncated))
}

/// Handles systems whose normals do not span `R^dim`: the polyhedron is
/// either empty or contains a line.
fn enumerate_with_lineality(
    active: &[(usize, HalfSpace)],
    basis: &[Vec<f64>],
    opts: &EnumOptions,
) -> Result<VertexSet, VertexEnumError> {
    if basis.is_empty() {
        // only constant rows, all satisfied
        return Err(VertexEnumError::Unbounded);
    }
    let reduced_rows = active
        .iter()
        .map(|(_, r)| HalfSpace::new(basis.iter().map(|b| dot(b, &r.normal)).collect(), r.offset))
        .collect();
    let reduced = HPolytope::with_rows(basis.len(), reduced_rows);
    let inner = enumerate_vertices(&reduced, opts)?;
    if inner.is_empty() && !inner.truncated {
        Ok(VertexSet::default())
    } else {
        Err(VertexEnumError::Unbounded)
    }
}

/// Orthonormal basis of the span of `vectors`, built greedily.
fn row_space_basis<'a>(vectors: impl Iterator<Item = &'a [f64]>, dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if basis.len() == dim {
            break;
        }
        if let Some(q) = orthogonal_residual(v, &basis) {
            basis.push(q);
        }
    }
    basis
}

/// Normalized component of `v` orthogonal to `basis`, if it is not negligible.
fn orthogonal_residual(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return None;
    }
    let mut r: Vec<f64> = v.iter().map(|x| x / scale).collect();
    // two passes of modified Gram–Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > RANK_EPS).then(|| r.into_iter().map(|x| x / norm).collect())
}

fn greedy_independent(
    candidates: impl Iterator<Item = usize>,
    rows: &[Vec<f64>],
    width: usize,
) -> Vec<usize> {
    let mut basis = Vec::new();
    let mut chosen = Vec::new();
    for pos in candidates {
        if chosen.len() == width {
            break;
        }
        if let Some(q) = orthogonal_residual(&rows[pos], &basis) {
            basis.push(q);
            chosen.push(pos);
        }
    }
    chosen
}

/// Inverse of a small nonsingular square matrix by Gauss–Jordan with partial pivoting.
fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        let p = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= p);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                if f != 0.0 {
                    row.iter_mut()
                        .zip(&pivot_row)
                        .for_each(|(v, pv)| *v -= f * pv);
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Insertion order: ascending slack at the Chebyshev center (tightest
/// first), ties broken by row position. Falls back to the input order when
/// the center cannot be computed.
fn insertion_order(active: &[(usize, HalfSpace)], dim: usize) -> Vec<usize> {
    let natural: Vec<usize> = (0..active.len()).collect();
    let Some(center) = chebyshev_center(active.iter().map(|(_, r)| r), dim) else {
        return natural;
    };
    let slack: Vec<f64> = active.iter().map(|(_, r)| -r.violation(&center)).collect();
    let mut order = natural;
    order.sort_by(|&a, &b| slack[a].total_cmp(&slack[b]).then(a.cmp(&b)));
    order
}

fn chebyshev_center<'a>(rows: impl Iterator<Item = &'a HalfSpace>, dim: usize) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    const RADIUS_CAP: f64 = 1e6;
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let xs: Vec<_> = (0..dim)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let radius = lp.add_var(1.0, (0.0, RADIUS_CAP));
    for r in rows {
        let mut expr: Vec<_> = xs.iter().zip(&r.normal).map(|(&v, &c)| (v, c)).collect();
        expr.push((radius, r.norm()));
        lp.add_constraint(expr.as_slice(), ComparisonOp::Le, r.offset);
    }
    let solution = lp.solve().ok()?.into_solution().ok()?;
    Some(xs.iter().map(|&v| solution.var_value(v)).collect())
}

/// Merges near-duplicate vertices, tags active rows and sorts lexicographically.
fn finalize(
    points: Vec<Vec<f64>>,
    p: &HPolytope,
    opts: &EnumOptions,
    truncated: bool,
) -> VertexSet {
    let mut points = cluster(points, opts.eps_point);
    points.sort_by(|a, b| lex_cmp(a, b));
    let tags = points
        .iter()
        .map(|x| {
            p.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.violation(x).abs() <= opts.eps_side * r.norm().max(1.0))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    VertexSet {
        points,
        tags,
        truncated,
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Greedy `eps`-ball clustering in lexicographic order; each cluster is
/// replaced by its centroid.
fn cluster(mut points: Vec<Vec<f64>>, eps: f64) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| lex_cmp(a, b));
    let mut taken = vec![false; points.len()];
    let mut out = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let mut sum = points[i].clone();
        let mut count = 1.0;
        for j in i + 1..points.len() {
            if points[j][0] - points[i][0] > eps {
                break;
            }
            if !taken[j] && distance(&points[i], &points[j]) <= eps {
                taken[j] = true;
                sum.iter_mut().zip(&points[j]).for_each(|(s, v)| *s += v);
                count += 1.0;
            }
        }
        if count > 1.0 {
            sum.iter_mut().for_each(|s| *s /= count);
            out.push(sum);
        } else {
            out.push(std::mem::take(&mut points[i]));
        }
    }
    out
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Affine map `R^dim -> R^2`, `x ↦ M x + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap2 {
    pub rows: [Vec<f64>; 2],
    pub offset: Point,
}

impl AffineMap2 {
    pub fn apply(&self, x: &[f64]) -> Point {
        Point::new(
            dot(&self.rows[0], x) + self.offset.x,
            dot(&self.rows[1], x) + self.offset.y,
        )
    }
}

/// Images of the enumerated vertices; their hull is the image polytope.
pub fn affine_image_2d(vs: &VertexSet, map: &AffineMap2) -> Vec<Point> {
    vs.points.iter().map(|x| map.apply(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_rows(dim: usize, lo: f64, hi: f64) -> Vec<HalfSpace> {
        (0..dim)
            .flat_map(|k| {
                let mut up = vec![0.0; dim];
                up[k] = 1.0;
                let mut down = vec![0.0; dim];
                down[k] = -1.0;
                [HalfSpace::new(up, hi), HalfSpace::new(down, -lo)]
            })
            .collect()
    }

    #[test]
    fn unit_four_cube() {
        let p = HPolytope::with_rows(4, box_rows(4, 0.0, 1.0));
        let vs = enumerate_vertices(&p, &EnumOptions::default()).unwrap();
        assert_eq!(vs.len(), 16);
        assert!(vs.tags.iter().all(|t| t.len() == 4));
        assert_eq!(vs.points[0], vec![0.0; 4]);
        assert!(!vs.truncated);
    }

    #[test]
    fn standard_simplex() {
        let dim = 4;
        let mut rows: Vec<HalfSpace> = (0..dim)
            .map(|k| {
                let mut n = vec![0.0; dim];
                n[k] = -1.0;
                HalfSpace::new(n, 0.0)
            })
            .collect();
        rows.push(HalfSpace::new(vec![1.0; dim], 1.0));
        let vs =
            enumerate_vertices(&HPolytope::with_rows(dim, rows), &EnumOptions::default()).unwrap();
        assert_eq!(vs.len(), 5);
    }

    #[test]
    fn unbounded_and_empty() {
        let slab = HPolytope::with_rows(
            2,
            vec![
                HalfSpace::new(vec![1.0, 0.0], 1.0),
                HalfSpace::new(vec![-1.0, 0.0], 0.0),
            ],
        );
        assert_eq!(
            enumerate_vertices(&slab, &EnumOptions::default()),
            Err(VertexEnumError::Unbounded)
        );
        let empty_slab = HPolytope::with_rows(
            2,
            vec![
                HalfSpace::new(vec![1.0, 0.0], 0.0),
                HalfSpace::new(vec![-1.0, 0.0], -1.0),
            ],
        );
        assert!(enumerate_vertices(&empty_slab, &EnumOptions::default())
            .unwrap()
            .is_empty());
        let cone = HPolytope::with_rows(
            2,
            vec![
                HalfSpace::new(vec![-1.0, 0.0], 0.0),
                HalfSpace::new(vec![0.0, -1.0], 0.0),
            ],
        );
        assert_eq!(
            enumerate_vertices(&cone, &EnumOptions::default()),
            Err(VertexEnumError::Unbounded)
        );
        let mut infeasible = box_rows(3, 0.0, 1.0);
        infeasible.push(HalfSpace::new(vec![1.0, 1.0, 1.0], -0.5));
        let vs = enumerate_vertices(
            &HPolytope::with_rows(3, infeasible),
            &EnumOptions::default(),
        )
        .unwrap();
        assert!(vs.is_empty());
    }

    #[test]
    fn constant_rows() {
        let mut rows = box_rows(2, 0.0, 1.0);
        rows.push(HalfSpace::new(vec![0.0, 0.0], 1.0));
        assert_eq!(
            enumerate_vertices(
                &HPolytope::with_rows(2, rows.clone()),
                &EnumOptions::default()
            )
            .unwrap()
            .len(),
            4
        );
        rows.push(HalfSpace::new(vec![0.0, 0.0], -1.0));
        assert!(
            enumerate_vertices(&HPolytope::with_rows(2, rows), &EnumOptions::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn degenerate_apex() {
        // square pyramid: the apex has four active facets in R^3
        let mut rows = vec![HalfSpace::new(vec![0.0, 0.0, -1.0], 0.0)];
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            rows.push(HalfSpace::new(vec![a, b, 1.0], 1.0));
        }
        let vs =
            enumerate_vertices(&HPolytope::with_rows(3, rows), &EnumOptions::default()).unwrap();
        assert_eq!(vs.len(), 5);
        let apex = vs
            .points
            .iter()
            .position(|x| (x[2] - 1.0).abs() < 1e-9)
            .unwrap();
        assert_eq!(vs.tags[apex].len(), 4);
    }

    #[test]
    fn lower_dimensional_polytope() {
        // segment x = y in the unit square, written with an equality pair
        let mut rows = box_rows(2, 0.0, 1.0);
        rows.push(HalfSpace::new(vec![1.0, -1.0], 0.0));
        rows.push(HalfSpace::new(vec![-1.0, 1.0], 0.0));
        let vs =
            enumerate_vertices(&HPolytope::with_rows(2, rows), &EnumOptions::default()).unwrap();
        assert_eq!(vs.points, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn cap_truncates() {
        let p = HPolytope::with_rows(4, box_rows(4, 0.0, 1.0));
        let opts = EnumOptions {
            max_vertices: 6,
            ..EnumOptions::default()
        };
        assert!(enumerate_vertices(&p, &opts).unwrap().truncated);
    }

    #[test]
    fn clustering_merges_near_duplicates() {
        let pts = vec![vec![0.0, 0.0], vec![1e-12, 0.0], vec![1.0, 1.0]];
        let merged = cluster(pts, 1e-9);
        assert_eq!(merged.len(), 2);
        assert!((merged[0][0] - 5e-13).abs() < 1e-20);
    }

    #[test]
    fn constant_affine_map() {
        let p = HPolytope::with_rows(2, box_rows(2, 0.0, 1.0));
        let vs = enumerate_vertices(&p, &EnumOptions::default()).unwrap();
        let map = AffineMap2 {
            rows: [vec![0.0; 2], vec![0.0; 2]],
            offset: Point::new(3.0, 4.0),
        };
        assert!(affine_image_2d(&vs, &map)
            .iter()
            .all(|q| *q == Point::new(3.0, 4.0)));
    }
}
