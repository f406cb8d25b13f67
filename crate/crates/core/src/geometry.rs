//! Planar primitives: points, segments, simple polygons and footprints.
//!
//! Conventions
//! - All predicates are closed (boundary-inclusive) and use the absolute
//!   tolerance [`Scalar::geom_tol`] (1e-9 for `f64`).
//! - Polygons are stored counter-clockwise. The orientation of the input is
//!   remembered so files can be echoed back unchanged.
//! - Self-intersection is the O(n²) edge-pair test; inputs are survey
//!   polygons, not meshes.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Polygons with an absolute area below this are rejected.
pub const MIN_POLYGON_AREA: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon edges {first} and {second} intersect")]
    SelfIntersecting { first: usize, second: usize },
    #[error("polygon area {0:e} is degenerate")]
    DegenerateArea(f64),
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("footprint length must be positive and finite, got {0}")]
    InvalidLength(f64),
}

/// A point (or displacement) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Like [`Point::new`] but rejects NaN and infinite coordinates.
    pub fn try_new(x: T, y: T) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite { index: 0 })
        }
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Self::new(T::lit(x), T::lit(y))
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at `angle` radians from the +x axis.
    pub fn polar(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Rotates counter-clockwise by `angle` radians about the origin.
    pub fn rotated(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn midpoint(self, o: Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.x + o.x) * half, (self.y + o.y) * half)
    }

    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    pub fn approx_eq(self, o: Self, tol: T) -> bool {
        (self.x - o.x).abs() <= tol && (self.y - o.y).abs() <= tol
    }

    pub fn cast<U: Scalar>(self) -> Point<U> {
        Point::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Scalar> Add for Point<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Neg for Point<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Euclidean distance.
#[inline]
pub fn dist_l2<T: Scalar>(p: Point<T>, q: Point<T>) -> T {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Chebyshev distance `max(|dx|, |dy|)`; its balls are axis-aligned squares.
#[inline]
pub fn dist_linf<T: Scalar>(p: Point<T>, q: Point<T>) -> T {
    (p.x - q.x).abs().max((p.y - q.y).abs())
}

/// Distance function selector used by clustering and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    L2,
    Linf,
}

impl Metric {
    #[inline]
    pub fn distance<T: Scalar>(self, p: Point<T>, q: Point<T>) -> T {
        match self {
            Metric::L2 => dist_l2(p, q),
            Metric::Linf => dist_linf(p, q),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::L2 => "l2",
            Metric::Linf => "linf",
        }
    }
}

/// A non-degenerate line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub a: Point<T>,
    pub b: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn try_new(a: Point<T>, b: Point<T>) -> Result<Self, GeometryError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeometryError::NonFinite { index: 0 });
        }
        if dist_l2(a, b) <= T::geom_tol() {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> T {
        dist_l2(self.a, self.b)
    }

    pub fn midpoint(&self) -> Point<T> {
        self.a.midpoint(self.b)
    }

    /// Unit direction from `a` to `b`.
    pub fn direction(&self) -> Point<T> {
        (self.b - self.a).normalized()
    }

    pub fn closest_point(&self, p: Point<T>) -> Point<T> {
        closest_on_segment(self.a, self.b, p)
    }

    pub fn distance_to(&self, p: Point<T>) -> T {
        dist_l2(self.closest_point(p), p)
    }
}

pub(crate) fn closest_on_segment<T: Scalar>(a: Point<T>, b: Point<T>, p: Point<T>) -> Point<T> {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 <= T::zero() {
        return a;
    }
    let t = ((p - a).dot(d) / len2).max(T::zero()).min(T::one());
    a + d * t
}

pub(crate) fn distance_to_segment<T: Scalar>(a: Point<T>, b: Point<T>, p: Point<T>) -> T {
    dist_l2(closest_on_segment(a, b, p), p)
}

/// Closed segments `ab` and `cd` touch or cross (within tolerance).
pub(crate) fn segments_intersect<T: Scalar>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let tol = T::geom_tol();
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    let proper = ((o1 > T::zero() && o2 < T::zero()) || (o1 < T::zero() && o2 > T::zero()))
        && ((o3 > T::zero() && o4 < T::zero()) || (o3 < T::zero() && o4 > T::zero()));
    proper
        || distance_to_segment(a, b, c) <= tol
        || distance_to_segment(a, b, d) <= tol
        || distance_to_segment(c, d, a) <= tol
        || distance_to_segment(c, d, b) <= tol
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox<T> {
    pub min: Point<T>,
    pub max: Point<T>,
}

impl<T: Scalar> BBox<T> {
    /// `None` for an empty iterator.
    pub fn from_points<I: IntoIterator<Item = Point<T>>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BBox { min: first, max: first };
        for p in it {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point<T> {
        self.min.midpoint(self.max)
    }

    pub fn diagonal(&self) -> T {
        dist_l2(self.min, self.max)
    }

    pub fn inflated(&self, by: T) -> Self {
        BBox {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        BBox {
            min: Point::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }
}

/// A validated simple polygon, stored counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon<T> {
    vertices: Vec<Point<T>>,
    input_clockwise: bool,
}

impl<T: Scalar> SimplePolygon<T> {
    /// Validates and canonicalizes a raw vertex ring.
    ///
    /// A repeated closing vertex and consecutive duplicates are dropped before
    /// the checks run. Clockwise input is reversed to counter-clockwise.
    pub fn validate(raw: Vec<Point<T>>) -> Result<Self, GeometryError> {
        if let Some(index) = raw.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let tol = T::geom_tol();
        let mut verts: Vec<Point<T>> = Vec::with_capacity(raw.len());
        for p in raw {
            if verts.last().is_some_and(|q| dist_l2(*q, p) <= tol) {
                continue;
            }
            verts.push(p);
        }
        while verts.len() > 1 && dist_l2(verts[0], *verts.last().unwrap()) <= tol {
            verts.pop();
        }
        if verts.len() < 3 {
            return Err(GeometryError::TooFewVertices(verts.len()));
        }
        // A triangle with positive area is always simple.
        if verts.len() > 3 {
            check_simple(&verts)?;
        }
        let signed = signed_area(&verts);
        if signed.abs().to_f64_lossy() < MIN_POLYGON_AREA {
            return Err(GeometryError::DegenerateArea(signed.abs().to_f64_lossy()));
        }
        let input_clockwise = signed < T::zero();
        if input_clockwise {
            verts.reverse();
        }
        Ok(Self {
            vertices: verts,
            input_clockwise,
        })
    }

    /// Counter-clockwise vertices.
    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    /// Vertices in the orientation they were supplied in.
    pub fn input_vertices(&self) -> Vec<Point<T>> {
        let mut v = self.vertices.clone();
        if self.input_clockwise {
            v.reverse();
        }
        v
    }

    pub fn input_was_clockwise(&self) -> bool {
        self.input_clockwise
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs, edge `i` running from vertex `i`.
    pub fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> T {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> T {
        self.edges().fold(T::zero(), |acc, (a, b)| acc + dist_l2(a, b))
    }

    pub fn bbox(&self) -> BBox<T> {
        BBox::from_points(self.vertices.iter().copied()).expect("polygon has vertices")
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> T {
        let mut best = T::zero();
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                best = best.max(dist_l2(*p, *q));
            }
        }
        best
    }

    pub fn distance_to_boundary(&self, p: Point<T>) -> T {
        self.edges()
            .map(|(a, b)| distance_to_segment(a, b, p))
            .fold(T::infinity(), T::min)
    }

    pub fn on_boundary(&self, p: Point<T>) -> bool {
        self.distance_to_boundary(p) <= T::geom_tol()
    }

    /// Closed containment test (boundary counts as inside).
    pub fn contains(&self, p: Point<T>) -> bool {
        if self.on_boundary(p) {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Stable 64-bit identity of the vertex ring (FNV-1a over coordinate bits).
    pub fn identity(&self) -> u64 {
        fingerprint(self.vertices.iter().copied())
    }
}

pub(crate) fn fingerprint<T: Scalar, I: IntoIterator<Item = Point<T>>>(points: I) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in points {
        for v in [p.x.to_f64_lossy(), p.y.to_f64_lossy()] {
            for byte in v.to_bits().to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
    }
    h
}

fn signed_area<T: Scalar>(verts: &[Point<T>]) -> T {
    let n = verts.len();
    let mut twice = T::zero();
    for i in 0..n {
        twice = twice + verts[i].cross(verts[(i + 1) % n]);
    }
    twice * T::lit(0.5)
}

fn check_simple<T: Scalar>(verts: &[Point<T>]) -> Result<(), GeometryError> {
    let n = verts.len();
    let tol = T::geom_tol();
    for i in 0..n {
        let (a, b) = (verts[i], verts[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (verts[j], verts[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let hit = if adjacent {
                // Shared vertex is fine; folding back over the neighbour is not.
                let (own_far, other_far) = if j == i + 1 { (a, d) } else { (b, c) };
                distance_to_segment(c, d, own_far) <= tol || distance_to_segment(a, b, other_far) <= tol
            } else {
                segments_intersect(a, b, c, d)
            };
            if hit {
                return Err(GeometryError::SelfIntersecting { first: i, second: j });
            }
        }
    }
    Ok(())
}

/// Validates a raw vertex list into a counter-clockwise [`SimplePolygon`].
pub fn polygon_validate<T: Scalar>(vertices: Vec<Point<T>>) -> Result<SimplePolygon<T>, GeometryError> {
    SimplePolygon::validate(vertices)
}

/// Closed point-in-polygon test.
pub fn point_in_polygon<T: Scalar>(p: Point<T>, polygon: &SimplePolygon<T>) -> bool {
    polygon.contains(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FootprintKind {
    Circle,
    AxisSquare,
}

impl FootprintKind {
    /// The metric whose balls have this footprint's shape.
    pub fn metric(self) -> Metric {
        match self {
            FootprintKind::Circle => Metric::L2,
            FootprintKind::AxisSquare => Metric::Linf,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FootprintKind::Circle => "circle",
            FootprintKind::AxisSquare => "axis_square",
        }
    }
}

/// Ground footprint of one photo: a circle (length = radius) or an
/// axis-aligned square (length = full side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint<T> {
    pub kind: FootprintKind,
    pub center: Point<T>,
    pub length: T,
}

impl<T: Scalar> Footprint<T> {
    pub fn try_new(kind: FootprintKind, center: Point<T>, length: T) -> Result<Self, GeometryError> {
        if !center.is_finite() {
            return Err(GeometryError::NonFinite { index: 0 });
        }
        if !(length.is_finite() && length > T::zero()) {
            return Err(GeometryError::InvalidLength(length.to_f64_lossy()));
        }
        Ok(Self { kind, center, length })
    }

    pub fn circle(center: Point<T>, radius: T) -> Result<Self, GeometryError> {
        Self::try_new(FootprintKind::Circle, center, radius)
    }

    pub fn axis_square(center: Point<T>, side: T) -> Result<Self, GeometryError> {
        Self::try_new(FootprintKind::AxisSquare, center, side)
    }

    /// Distance from the centre at which the boundary sits, in this
    /// footprint's own metric.
    pub fn reach(&self) -> T {
        match self.kind {
            FootprintKind::Circle => self.length,
            FootprintKind::AxisSquare => self.length * T::lit(0.5),
        }
    }

    /// How far `p` lies outside the footprint in its own metric; negative
    /// when strictly inside.
    pub fn excess(&self, p: Point<T>) -> T {
        self.kind.metric().distance(self.center, p) - self.reach()
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        self.excess(p) <= T::geom_tol()
    }

    pub fn bbox(&self) -> BBox<T> {
        let r = self.reach();
        BBox {
            min: Point::new(self.center.x - r, self.center.y - r),
            max: Point::new(self.center.x + r, self.center.y + r),
        }
    }
}

/// Closed containment test for a footprint.
pub fn footprint_contains<T: Scalar>(f: &Footprint<T>, p: Point<T>) -> bool {
    f.contains(p)
}
