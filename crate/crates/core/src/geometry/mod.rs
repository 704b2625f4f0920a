//! Tolerance-aware convex polygon algebra in the payoff plane.
//!
//! Every polygon handed out by this module is canonical: vertices are
//! counter-clockwise, the first vertex is the lexicographic minimum, and no
//! two consecutive vertices coincide or are collinear with their neighbours
//! (up to the active [`GeomTolerance`]). Zero vertices is the empty set, one
//! vertex a point and two vertices a segment.

mod halfspace;
mod hull;
mod measure;
mod rdp;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use halfspace::{
    constraint_rows, containment_slack, intersect_halfplane, to_halfspaces, to_vertices,
};
pub use hull::convex_hull;
pub use measure::{area, distance_to_polygon, hausdorff, point_segment_distance};
pub use rdp::rdp_simplify;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon has {0} vertices; a full-dimensional polygon is required")]
    Degenerate(usize),
    #[error("halfplane system is unbounded along direction ({0}, {1})")]
    Unbounded(f64, f64),
    #[error("operation requires a nonempty set")]
    EmptyInput,
}

/// A point (or vector) in the payoff plane.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Lexicographic order on (x, y), total over all floats.
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: Point) -> Point {
        Point::new(self * rhs.x, self * rhs.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Absolute tolerances for geometric predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeomTolerance {
    /// Points closer than this coincide.
    pub eps_point: f64,
    /// Signed distances within this band count as "on the boundary".
    pub eps_side: f64,
}

impl Default for GeomTolerance {
    fn default() -> Self {
        Self {
            eps_point: 1e-9,
            eps_side: 1e-9,
        }
    }
}

impl GeomTolerance {
    pub fn new(eps_point: f64, eps_side: f64) -> Self {
        assert!(
            eps_point > 0.0 && eps_side > 0.0,
            "tolerances must be strictly positive"
        );
        Self {
            eps_point,
            eps_side,
        }
    }

    /// Default tolerances scaled by a payoff magnitude bound (never shrunk below the defaults).
    pub fn scaled(magnitude: f64) -> Self {
        let s = if magnitude.is_finite() {
            magnitude.abs().max(1.0)
        } else {
            1.0
        };
        let base = Self::default();
        Self {
            eps_point: base.eps_point * s,
            eps_side: base.eps_side * s,
        }
    }
}

/// Closed halfplane `normal · x <= offset` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Point,
    pub offset: f64,
}

impl HalfPlane {
    /// Builds the halfplane `normal · x <= offset`, rescaling to a unit normal.
    ///
    /// Panics on a zero normal.
    pub fn new(normal: Point, offset: f64) -> Self {
        let len = normal.norm();
        assert!(
            len > 0.0 && len.is_finite(),
            "halfplane normal must be nonzero and finite"
        );
        Self {
            normal: (1.0 / len) * normal,
            offset: offset / len,
        }
    }

    /// Signed distance; positive outside.
    #[inline]
    pub fn violation(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    #[inline]
    pub fn contains(&self, p: Point, eps_side: f64) -> bool {
        self.violation(p) <= eps_side
    }
}

/// A convex set in extreme-point form, canonical as described in the module docs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolygonV {
    vertices: Vec<Point>,
}

/// Coarse shape of a [`PolygonV`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Empty,
    Point,
    Segment,
    Polygon,
}

impl PolygonV {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
        }
    }

    pub fn point(p: Point) -> Self {
        Self { vertices: vec![p] }
    }

    /// Wraps a vertex list that is already canonical.
    ///
    /// Callers outside this module should go through [`convex_hull`].
    pub(crate) fn from_canonical(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn shape(&self) -> Shape {
        match self.vertices.len() {
            0 => Shape::Empty,
            1 => Shape::Point,
            2 => Shape::Segment,
            _ => Shape::Polygon,
        }
    }

    /// Edges as (start, end) pairs in CCW order; a segment yields both directions.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = if n >= 2 { n } else { 0 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, p: Point, tol: &GeomTolerance) -> bool {
        match self.shape() {
            Shape::Empty => false,
            Shape::Polygon => self.edges().all(|(a, b)| {
                let e = b - a;
                // outward distance of p from edge a->b
                (p - a).cross(e) / e.norm() <= tol.eps_side
            }),
            _ => distance_to_polygon(p, self) <= tol.eps_point,
        }
    }

    /// Axis-aligned bounding box as (min, max); `None` for the empty set.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }
}

/// A convex set as an intersection of halfplanes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolygonH {
    pub rows: Vec<HalfPlane>,
}

impl PolygonH {
    pub fn new(rows: Vec<HalfPlane>) -> Self {
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, p: Point, tol: &GeomTolerance) -> bool {
        self.rows.iter().all(|h| h.contains(p, tol.eps_side))
    }
}
