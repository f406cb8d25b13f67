//! Hardness gadget skeletons: odd-length paths of equal segments with
//! perpendicular bars, meeting three at a time at 120° junctions.
//!
//! A link from `u` to `w` with parameter `m` is a path of `2m + 1` segments of
//! length `segment_len`. Every segment except the first and the last carries a
//! bar of length `zeta` through its midpoint, so a link has `2m − 1` bars and
//! the first bar sits `1.5·segment_len` from either end.
//!
//! | variant | segment_len | zeta | first bar from a junction |
//! |---------|-------------|------|---------------------------|
//! | circle  | 1           | √3   | 1.5                       |
//! | square  | √2/2        | √2/2 | 3√2/4                     |
//!
//! Links may bend at waypoints (`via`) as long as every leg is a whole number
//! of segments. Layouts are pre-embedded; nothing here computes an embedding.

use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist_l2, GeometryError, Point, Segment};
use crate::sampling::{sample_segments, SampleSet, SamplingError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GadgetError {
    #[error("m must be greater than 3, got {0}")]
    BadM(usize),
    #[error("link endpoints are {actual} apart, expected {expected} for m = {m}")]
    BadLength { actual: f64, expected: f64, m: usize },
    #[error("link {link}: {reason}")]
    BadRoute { link: usize, reason: String },
    #[error("junction {junction} has degree {degree}, expected 3")]
    NotCubic { junction: usize, degree: usize },
    #[error("junction {junction}: arms are not pairwise at 120 degrees")]
    BadAngles { junction: usize },
    #[error("junction {junction} references missing link {link}")]
    BadReference { junction: usize, link: usize },
    #[error("invalid gadget parameter {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetVariant {
    Circle,
    Square,
}

impl GadgetVariant {
    pub fn name(self) -> &'static str {
        match self {
            GadgetVariant::Circle => "circle",
            GadgetVariant::Square => "square",
        }
    }

    pub fn params<T: Scalar>(self) -> GadgetParams<T> {
        let (segment_len, zeta) = match self {
            GadgetVariant::Circle => (T::one(), T::lit(3.0).sqrt()),
            GadgetVariant::Square => (T::FRAC_1_SQRT_2(), T::FRAC_1_SQRT_2()),
        };
        GadgetParams {
            zeta,
            segment_len,
            junction_bar_offset: segment_len * T::lit(1.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetParams<T> {
    pub zeta: T,
    pub segment_len: T,
    /// Distance from a junction to the first bar of each arm.
    pub junction_bar_offset: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLinkSpec<T> {
    pub u: Point<T>,
    pub w: Point<T>,
    pub m: usize,
    pub zeta: T,
    pub segment_len: T,
    /// Bend points between `u` and `w`, in order.
    pub via: Vec<Point<T>>,
}

impl<T: Scalar> EdgeLinkSpec<T> {
    pub fn straight(u: Point<T>, w: Point<T>, m: usize, variant: GadgetVariant) -> Self {
        let p = variant.params::<T>();
        Self {
            u,
            w,
            m,
            zeta: p.zeta,
            segment_len: p.segment_len,
            via: Vec::new(),
        }
    }

    fn route(&self) -> Vec<Point<T>> {
        let mut r = Vec::with_capacity(self.via.len() + 2);
        r.push(self.u);
        r.extend(self.via.iter().copied());
        r.push(self.w);
        r
    }

    fn reversed(&self) -> Self {
        Self {
            u: self.w,
            w: self.u,
            via: self.via.iter().rev().copied().collect(),
            ..self.clone()
        }
    }
}

/// Spine and bar index ranges of one link inside a skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkInfo {
    pub m: usize,
    pub spine: Range<usize>,
    pub bars: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Junction<T> {
    pub center: Point<T>,
    /// Unit directions of the three arms.
    pub directions: [Point<T>; 3],
    /// Distance from the center to the first bar midpoint on each arm.
    pub first_bar_offsets: [T; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetSkeleton<T> {
    pub spine_segments: Vec<Segment<T>>,
    pub bars: Vec<Segment<T>>,
    /// Index into `spine_segments` of the segment each bar crosses.
    pub bar_hosts: Vec<usize>,
    pub links: Vec<LinkInfo>,
    pub junctions: Vec<Junction<T>>,
    pub params: GadgetParams<T>,
}

impl<T: Scalar> GadgetSkeleton<T> {
    pub fn empty(params: GadgetParams<T>) -> Self {
        Self {
            spine_segments: Vec::new(),
            bars: Vec::new(),
            bar_hosts: Vec::new(),
            links: Vec::new(),
            junctions: Vec::new(),
            params,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.spine_segments.is_empty() && self.bars.is_empty()
    }

    /// Spine segments followed by bars.
    pub fn segments(&self) -> impl Iterator<Item = &Segment<T>> + '_ {
        self.spine_segments.iter().chain(&self.bars)
    }

    /// Appends `other`, shifting its indices.
    pub fn extend(&mut self, other: GadgetSkeleton<T>) {
        let (s0, b0) = (self.spine_segments.len(), self.bars.len());
        self.spine_segments.extend(other.spine_segments);
        self.bars.extend(other.bars);
        self.bar_hosts.extend(other.bar_hosts.into_iter().map(|h| h + s0));
        self.links.extend(other.links.into_iter().map(|l| LinkInfo {
            m: l.m,
            spine: l.spine.start + s0..l.spine.end + s0,
            bars: l.bars.start + b0..l.bars.end + b0,
        }));
        self.junctions.extend(other.junctions);
    }

    /// Measures the structural invariants.
    pub fn structure_report(&self) -> StructureReport<T> {
        let mut perp = T::zero();
        let mut bisect = T::zero();
        for (bar, &host) in self.bars.iter().zip(&self.bar_hosts) {
            let s = &self.spine_segments[host];
            perp = perp.max(bar.direction().dot(s.direction()).abs());
            bisect = bisect.max(dist_l2(bar.midpoint(), s.midpoint()));
        }
        let half = T::lit(-0.5);
        let mut angle = T::zero();
        for j in &self.junctions {
            let d = &j.directions;
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                angle = angle.max((d[a].dot(d[b]) - half).abs());
            }
        }
        StructureReport {
            counts_ok: self
                .links
                .iter()
                .all(|l| l.spine.len() == 2 * l.m + 1 && l.bars.len() == 2 * l.m - 1),
            max_perpendicular_dot: perp,
            max_bisection_gap: bisect,
            max_junction_dot_error: angle,
            junction_bar_offsets: self.junctions.iter().flat_map(|j| j.first_bar_offsets).collect(),
        }
    }
}

/// Worst-case deviations from the structural invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport<T> {
    /// Every link has `2m + 1` spine segments and `2m − 1` bars.
    pub counts_ok: bool,
    /// Largest `|cos|` between a bar and its host segment.
    pub max_perpendicular_dot: T,
    /// Largest distance between a bar midpoint and its host midpoint.
    pub max_bisection_gap: T,
    /// Largest `|d_i·d_j + 1/2|` over junction arm pairs.
    pub max_junction_dot_error: T,
    pub junction_bar_offsets: Vec<T>,
}

fn check_param<T: Scalar>(name: &'static str, value: T) -> Result<(), GadgetError> {
    if value.is_finite() && value > T::zero() {
        Ok(())
    } else {
        Err(GadgetError::BadParameter {
            name,
            value: value.to_f64_lossy(),
        })
    }
}

/// Builds the spine and bars of one link.
pub fn build_edge_link<T: Scalar>(spec: &EdgeLinkSpec<T>) -> Result<GadgetSkeleton<T>, GadgetError> {
    check_param("segment_len", spec.segment_len)?;
    check_param("zeta", spec.zeta)?;
    if spec.m <= 3 {
        return Err(GadgetError::BadM(spec.m));
    }
    let seg = spec.segment_len;
    let tol = T::geom_tol();
    let target = 2 * spec.m + 1;
    let route = spec.route();
    if let Some(i) = route.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite { index: i }.into());
    }

    if spec.via.is_empty() {
        let actual = dist_l2(spec.u, spec.w);
        let expected = seg * T::from_usize(target).unwrap();
        if (actual - expected).abs() > tol * T::from_usize(target).unwrap() {
            return Err(GadgetError::BadLength {
                actual: actual.to_f64_lossy(),
                expected: expected.to_f64_lossy(),
                m: spec.m,
            });
        }
    }

    let mut counts = Vec::with_capacity(route.len() - 1);
    for (i, pair) in route.windows(2).enumerate() {
        let len = dist_l2(pair[0], pair[1]);
        let c = (len / seg).round();
        if c < T::one() || (len - c * seg).abs() > tol * (T::one() + c) {
            return Err(GadgetError::BadRoute {
                link: 0,
                reason: format!(
                    "leg {i} has length {} which is not a whole number of segments of {}",
                    len.to_f64_lossy(),
                    seg.to_f64_lossy()
                ),
            });
        }
        counts.push(c.to_usize().unwrap());
    }
    let total: usize = counts.iter().sum();
    if total.is_multiple_of(2) || total != target {
        return Err(GadgetError::BadRoute {
            link: 0,
            reason: format!("route has {total} segments, expected {target} (odd, 2m + 1)"),
        });
    }

    let mut spine = Vec::with_capacity(total);
    for (pair, &c) in route.windows(2).zip(&counts) {
        let n = T::from_usize(c).unwrap();
        for j in 0..c {
            let a = pair[0].lerp(pair[1], T::from_usize(j).unwrap() / n);
            let b = pair[0].lerp(pair[1], T::from_usize(j + 1).unwrap() / n);
            spine.push(Segment::try_new(a, b)?);
        }
    }
    let half = spec.zeta / T::lit(2.0);
    let mut bars = Vec::with_capacity(total - 2);
    let mut hosts = Vec::with_capacity(total - 2);
    for (i, s) in spine.iter().enumerate().take(total - 1).skip(1) {
        let n = s.direction().perp();
        let mid = s.midpoint();
        bars.push(Segment::try_new(mid - n * half, mid + n * half)?);
        hosts.push(i);
    }
    Ok(GadgetSkeleton {
        links: vec![LinkInfo {
            m: spec.m,
            spine: 0..spine.len(),
            bars: 0..bars.len(),
        }],
        spine_segments: spine,
        bars,
        bar_hosts: hosts,
        junctions: Vec::new(),
        params: GadgetParams {
            zeta: spec.zeta,
            segment_len: seg,
            junction_bar_offset: seg * T::lit(1.5),
        },
    })
}

fn arm_direction<T: Scalar>(spec: &EdgeLinkSpec<T>) -> Point<T> {
    let next = spec.via.first().copied().unwrap_or(spec.w);
    (next - spec.u).normalized()
}

fn check_angles<T: Scalar>(dirs: &[Point<T>; 3], junction: usize) -> Result<(), GadgetError> {
    let tol = T::geom_tol();
    let half = T::lit(-0.5);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if (dirs[a].dot(dirs[b]) - half).abs() > tol {
            return Err(GadgetError::BadAngles { junction });
        }
    }
    Ok(())
}

/// Builds three arms leaving `center` and records the junction.
///
/// Each arm must start or end at `center`; arms ending there are reversed.
pub fn build_junction<T: Scalar>(
    center: Point<T>,
    arms: &[EdgeLinkSpec<T>; 3],
    variant: GadgetVariant,
) -> Result<GadgetSkeleton<T>, GadgetError> {
    let tol = T::geom_tol();
    let mut oriented = Vec::with_capacity(3);
    for (i, a) in arms.iter().enumerate() {
        if dist_l2(a.u, center) <= tol {
            oriented.push(a.clone());
        } else if dist_l2(a.w, center) <= tol {
            oriented.push(a.reversed());
        } else {
            return Err(GadgetError::BadRoute {
                link: i,
                reason: "arm does not touch the junction center".into(),
            });
        }
    }
    let dirs = [
        arm_direction(&oriented[0]),
        arm_direction(&oriented[1]),
        arm_direction(&oriented[2]),
    ];
    check_angles(&dirs, 0)?;
    let mut sk = GadgetSkeleton::empty(variant.params());
    let mut offsets = [T::zero(); 3];
    for (i, spec) in oriented.iter().enumerate() {
        let frag = build_edge_link(spec).map_err(|e| relabel(e, i))?;
        offsets[i] = dist_l2(center, frag.bars[0].midpoint());
        sk.extend(frag);
    }
    sk.junctions.push(Junction {
        center,
        directions: dirs,
        first_bar_offsets: offsets,
    });
    Ok(sk)
}

fn relabel(e: GadgetError, link: usize) -> GadgetError {
    match e {
        GadgetError::BadRoute { reason, .. } => GadgetError::BadRoute { link, reason },
        GadgetError::BadLength { actual, expected, m } => GadgetError::BadRoute {
            link,
            reason: format!("endpoints are {actual} apart, expected {expected} for m = {m}"),
        },
        other => other,
    }
}

/// Polyline route of one link in a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRoute<T> {
    pub u: Point<T>,
    pub w: Point<T>,
    pub m: usize,
    pub via: Vec<Point<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JunctionSpec<T> {
    pub center: Point<T>,
    /// Indices into the layout's links.
    pub arms: Vec<usize>,
}

/// An embedded cubic graph: junction centers plus link routes.
///
/// Link endpoints that are not junction centers are open ends, which allows
/// partial structures such as a single link or a single junction.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetLayout<T> {
    pub variant: GadgetVariant,
    pub segment_len: T,
    pub zeta: T,
    pub junctions: Vec<JunctionSpec<T>>,
    pub links: Vec<LinkRoute<T>>,
}

impl<T: Scalar> GadgetLayout<T> {
    pub fn link_spec(&self, i: usize) -> EdgeLinkSpec<T> {
        let l = &self.links[i];
        EdgeLinkSpec {
            u: l.u,
            w: l.w,
            m: l.m,
            zeta: self.zeta,
            segment_len: self.segment_len,
            via: l.via.clone(),
        }
    }
}

/// Builds every link and junction of `layout` and checks the structure.
pub fn assemble_structure<T: Scalar>(layout: &GadgetLayout<T>) -> Result<GadgetSkeleton<T>, GadgetError> {
    check_param("segment_len", layout.segment_len)?;
    check_param("zeta", layout.zeta)?;
    let tol = T::geom_tol();
    let mut sk = GadgetSkeleton::empty(GadgetParams {
        zeta: layout.zeta,
        segment_len: layout.segment_len,
        junction_bar_offset: layout.segment_len * T::lit(1.5),
    });
    let mut link_bars = Vec::with_capacity(layout.links.len());
    for i in 0..layout.links.len() {
        let frag = build_edge_link(&layout.link_spec(i)).map_err(|e| relabel(e, i))?;
        link_bars.push((frag.bars[0].midpoint(), frag.bars[frag.bars.len() - 1].midpoint()));
        sk.extend(frag);
    }

    let key = |p: Point<T>| {
        let q = |v: T| (v / tol).round().to_i64().unwrap_or(i64::MAX);
        (q(p.x), q(p.y))
    };
    let mut seen = HashSet::new();
    for (li, info) in sk.links.iter().enumerate() {
        for s in &sk.spine_segments[info.spine.clone()] {
            let (a, b) = (key(s.a), key(s.b));
            if !seen.insert(if a <= b { (a, b) } else { (b, a) }) {
                return Err(GadgetError::BadRoute {
                    link: li,
                    reason: "duplicates a segment of another link".into(),
                });
            }
        }
    }

    for (ji, j) in layout.junctions.iter().enumerate() {
        let degree = layout
            .links
            .iter()
            .map(|l| usize::from(dist_l2(l.u, j.center) <= tol) + usize::from(dist_l2(l.w, j.center) <= tol))
            .sum::<usize>();
        if j.arms.len() != 3 || degree != 3 {
            let degree = if j.arms.len() != 3 { j.arms.len() } else { degree };
            return Err(GadgetError::NotCubic { junction: ji, degree });
        }
        let mut dirs = [Point::origin(); 3];
        let mut offsets = [T::zero(); 3];
        for (slot, &li) in j.arms.iter().enumerate() {
            let spec = layout
                .links
                .get(li)
                .map(|_| layout.link_spec(li))
                .ok_or(GadgetError::BadReference { junction: ji, link: li })?;
            let (first_bar, last_bar) = link_bars[li];
            if dist_l2(spec.u, j.center) <= tol {
                dirs[slot] = arm_direction(&spec);
                offsets[slot] = dist_l2(j.center, first_bar);
            } else if dist_l2(spec.w, j.center) <= tol {
                dirs[slot] = arm_direction(&spec.reversed());
                offsets[slot] = dist_l2(j.center, last_bar);
            } else {
                return Err(GadgetError::BadRoute {
                    link: li,
                    reason: format!("listed as an arm of junction {ji} but does not touch it"),
                });
            }
        }
        check_angles(&dirs, ji)?;
        sk.junctions.push(Junction {
            center: j.center,
            directions: dirs,
            first_bar_offsets: offsets,
        });
    }
    Ok(sk)
}

/// Samples every spine segment and bar at density `eps`.
pub fn skeleton_samples<T: Scalar>(sk: &GadgetSkeleton<T>, eps: T) -> Result<SampleSet<T>, SamplingError> {
    let segs: Vec<_> = sk.segments().map(|s| (s.a, s.b)).collect();
    sample_segments(&segs, eps)
}

/// Unit direction at `deg` degrees.
fn dir<T: Scalar>(deg: f64) -> Point<T> {
    Point::polar(T::lit(deg.to_radians()))
}

/// A single straight link of `2m + 1` segments along the x axis from the origin.
pub fn single_link_layout<T: Scalar>(variant: GadgetVariant, m: usize) -> GadgetLayout<T> {
    let p = variant.params::<T>();
    let len = p.segment_len * T::from_usize(2 * m + 1).unwrap();
    GadgetLayout {
        variant,
        segment_len: p.segment_len,
        zeta: p.zeta,
        junctions: Vec::new(),
        links: vec![LinkRoute {
            u: Point::origin(),
            w: Point::new(len, T::zero()),
            m,
            via: Vec::new(),
        }],
    }
}

/// One junction at the origin with straight `m = 4` arms at 0°, 120° and 240°.
pub fn single_junction_layout<T: Scalar>(variant: GadgetVariant) -> GadgetLayout<T> {
    let p = variant.params::<T>();
    let len = p.segment_len * T::lit(9.0);
    GadgetLayout {
        variant,
        segment_len: p.segment_len,
        zeta: p.zeta,
        junctions: vec![JunctionSpec {
            center: Point::origin(),
            arms: vec![0, 1, 2],
        }],
        links: [0.0, 120.0, 240.0]
            .iter()
            .map(|&a| LinkRoute {
                u: Point::origin(),
                w: dir::<T>(a) * len,
                m: 4,
                via: Vec::new(),
            })
            .collect(),
    }
}

/// K4 embedded on the hexagonal lattice spanned by the 30° and 90° directions.
///
/// The center junction reaches the three outer junctions (at 90°, 210° and
/// 330°) with straight 9-segment links. Each pair of outer junctions is joined
/// by a 23-segment route around the outside; the three routes are copies of
/// one another rotated by 120°.
pub fn k4_layout<T: Scalar>(variant: GadgetVariant) -> GadgetLayout<T> {
    let p = variant.params::<T>();
    let s = p.segment_len;
    let lattice = |a: f64, b: f64| (dir::<T>(30.0) * T::lit(a) + dir::<T>(90.0) * T::lit(b)) * s;
    let rotate = |q: Point<T>, k: usize| q.rotated(T::lit((120.0 * k as f64).to_radians()));
    let outer = [lattice(0.0, 9.0), lattice(-9.0, 0.0), lattice(9.0, -9.0)];
    // Outer route from the 90° vertex to the 210° vertex.
    let via = [lattice(-2.0, 11.0), lattice(-12.0, 11.0), lattice(-12.0, 3.0)];

    let mut links: Vec<LinkRoute<T>> = outer
        .iter()
        .map(|&o| LinkRoute {
            u: Point::origin(),
            w: o,
            m: 4,
            via: Vec::new(),
        })
        .collect();
    for k in 0..3 {
        links.push(LinkRoute {
            u: outer[k],
            w: outer[(k + 1) % 3],
            m: 11,
            via: via.iter().map(|&q| rotate(q, k)).collect(),
        });
    }
    let junctions = vec![
        JunctionSpec {
            center: Point::origin(),
            arms: vec![0, 1, 2],
        },
        JunctionSpec {
            center: outer[0],
            arms: vec![0, 3, 5],
        },
        JunctionSpec {
            center: outer[1],
            arms: vec![1, 3, 4],
        },
        JunctionSpec {
            center: outer[2],
            arms: vec![2, 4, 5],
        },
    ];
    GadgetLayout {
        variant,
        segment_len: s,
        zeta: p.zeta,
        junctions,
        links,
    }
}

/// A square of side `side` rotated by `angle` radians about its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedSquare<T> {
    pub center: Point<T>,
    pub side: T,
    pub angle: T,
}

impl<T: Scalar> RotatedSquare<T> {
    pub fn corners(&self) -> [Point<T>; 4] {
        let h = self.side / T::lit(2.0);
        [(-h, -h), (h, -h), (h, h), (-h, h)].map(|(x, y)| self.center + Point::new(x, y).rotated(self.angle))
    }

    /// Closed containment, tested in the square's own frame.
    pub fn contains(&self, p: Point<T>) -> bool {
        let q = (p - self.center).rotated(-self.angle);
        let lim = self.side / T::lit(2.0) + T::geom_tol();
        q.x.abs() <= lim && q.y.abs() <= lim
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternShape {
    Circle,
    RotatedSquare,
}

/// Equal footprints placed by hand along a gadget.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern<T> {
    pub shape: PatternShape,
    /// Radius for circles, side for squares.
    pub size: T,
    /// Rotation in radians (squares only).
    pub angle: T,
    pub centers: Vec<Point<T>>,
}

impl<T: Scalar> Pattern<T> {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Index of the first footprint containing `p`.
    pub fn covering(&self, p: Point<T>) -> Option<usize> {
        self.centers.iter().position(|&c| match self.shape {
            PatternShape::Circle => dist_l2(c, p) <= self.size + T::geom_tol(),
            PatternShape::RotatedSquare => RotatedSquare {
                center: c,
                side: self.size,
                angle: self.angle,
            }
            .contains(p),
        })
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        self.covering(p).is_some()
    }
}

/// Hand pattern for a straight link: footprints at `0.5, 2, 4, …, 2m` segment
/// lengths from `u`. The first covers the leading spine; each later one takes
/// a pair of bars (the last one a single bar and the trailing spine).
///
/// Circles have unit radius; squares have unit side and are turned 45°.
pub fn link_pattern<T: Scalar>(spec: &EdgeLinkSpec<T>, shape: PatternShape) -> Pattern<T> {
    let d = (spec.w - spec.u).normalized();
    let at = |t: f64| spec.u + d * (spec.segment_len * T::lit(t));
    let mut centers = vec![at(0.5)];
    centers.extend((1..=spec.m).map(|i| at(2.0 * i as f64)));
    let axis = d.y.atan2(d.x);
    Pattern {
        shape,
        size: T::one(),
        angle: match shape {
            PatternShape::Circle => T::zero(),
            PatternShape::RotatedSquare => axis + T::FRAC_PI_4(),
        },
        centers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point<f64> {
        Point::new(x, y)
    }

    #[test]
    fn circle_link_example() {
        let spec = EdgeLinkSpec::straight(p(0., 0.), p(9., 0.), 4, GadgetVariant::Circle);
        let sk = build_edge_link(&spec).unwrap();
        assert_eq!(sk.spine_segments.len(), 9);
        assert_eq!(sk.bars.len(), 7);
        let h = 3f64.sqrt() / 2.0;
        for (i, bar) in (1..=7).zip(&sk.bars) {
            let x = i as f64 + 0.5;
            assert!(bar.a.approx_eq(p(x, -h), 1e-12), "{bar:?}");
            assert!(bar.b.approx_eq(p(x, h), 1e-12));
        }
    }

    #[test]
    fn square_link_example() {
        let s = 2f64.sqrt() / 2.0;
        let spec = EdgeLinkSpec::straight(p(0., 0.), p(9.0 * s, 0.), 4, GadgetVariant::Square);
        let sk = build_edge_link(&spec).unwrap();
        assert_eq!((sk.spine_segments.len(), sk.bars.len()), (9, 7));
        assert!(sk.bars.iter().all(|b| (b.length() - s).abs() < 1e-12));
        let gaps: Vec<f64> = sk
            .bars
            .windows(2)
            .map(|w| dist_l2(w[0].midpoint(), w[1].midpoint()))
            .collect();
        assert!(gaps.iter().all(|g| (g - s).abs() < 1e-12));
    }

    #[test]
    fn link_errors() {
        let bad_len = EdgeLinkSpec::straight(p(0., 0.), p(8., 0.), 4, GadgetVariant::Circle);
        assert!(matches!(build_edge_link(&bad_len), Err(GadgetError::BadLength { .. })));
        let bad_m = EdgeLinkSpec::straight(p(0., 0.), p(7., 0.), 3, GadgetVariant::Circle);
        assert_eq!(build_edge_link(&bad_m), Err(GadgetError::BadM(3)));
        let mut even = EdgeLinkSpec::straight(p(0., 0.), p(4., 4.), 4, GadgetVariant::Circle);
        even.via = vec![p(4., 0.)];
        assert!(matches!(build_edge_link(&even), Err(GadgetError::BadRoute { .. })));
        let mut frac = EdgeLinkSpec::straight(p(0., 0.), p(4.5, 4.5), 4, GadgetVariant::Circle);
        frac.via = vec![p(4.5, 0.)];
        assert!(matches!(build_edge_link(&frac), Err(GadgetError::BadRoute { .. })));
    }

    #[test]
    fn bent_link_bars_follow_the_route() {
        let mut spec = EdgeLinkSpec::straight(p(0., 0.), p(4., 5.), 4, GadgetVariant::Circle);
        spec.via = vec![p(4., 0.)];
        let sk = build_edge_link(&spec).unwrap();
        let r = sk.structure_report();
        assert!(r.counts_ok);
        assert!(r.max_perpendicular_dot < 1e-12);
        assert!(r.max_bisection_gap < 1e-12);
        // Bar on the vertical leg is horizontal.
        assert!(sk.bars[5].direction().y.abs() < 1e-12);
    }

    #[test]
    fn junction_examples() {
        for (variant, offset) in [
            (GadgetVariant::Square, 3.0 * 2f64.sqrt() / 4.0),
            (GadgetVariant::Circle, 1.5),
        ] {
            let len = variant.params::<f64>().segment_len * 9.0;
            let arms = [0.0, 120.0, 240.0]
                .map(|a: f64| EdgeLinkSpec::straight(p(0., 0.), Point::polar(a.to_radians()) * len, 4, variant));
            let sk = build_junction(p(0., 0.), &arms, variant).unwrap();
            let j = &sk.junctions[0];
            assert!(j.first_bar_offsets.iter().all(|o| (o - offset).abs() < 1e-9));
            assert!(sk.structure_report().max_junction_dot_error < 1e-9);
        }
        let arms = [0.0, 90.0, 180.0].map(|a: f64| {
            EdgeLinkSpec::straight(p(0., 0.), Point::polar(a.to_radians()) * 9.0, 4, GadgetVariant::Circle)
        });
        assert_eq!(
            build_junction(p(0., 0.), &arms, GadgetVariant::Circle),
            Err(GadgetError::BadAngles { junction: 0 })
        );
    }

    #[test]
    fn k4_layout_assembles_for_both_variants() {
        for variant in [GadgetVariant::Circle, GadgetVariant::Square] {
            let sk = assemble_structure(&k4_layout::<f64>(variant)).unwrap();
            assert_eq!(sk.junctions.len(), 4);
            assert_eq!(sk.links.len(), 6);
            let r = sk.structure_report();
            assert!(r.counts_ok);
            assert!(r.max_perpendicular_dot <= 1e-9);
            assert!(r.max_bisection_gap <= 1e-9);
            assert!(r.max_junction_dot_error <= 1e-9);
            let off = sk.params.junction_bar_offset;
            assert!(r.junction_bar_offsets.iter().all(|o| (o - off).abs() <= 1e-9));
        }
    }

    #[test]
    fn k4_spines_only_meet_at_junctions() {
        let layout = k4_layout::<f64>(GadgetVariant::Circle);
        let sk = assemble_structure(&layout).unwrap();
        let centers: Vec<_> = layout.junctions.iter().map(|j| j.center).collect();
        let polylines: Vec<Vec<Point<f64>>> = layout
            .links
            .iter()
            .map(|l| {
                let mut r = vec![l.u];
                r.extend(&l.via);
                r.push(l.w);
                r
            })
            .collect();
        for i in 0..polylines.len() {
            for j in i + 1..polylines.len() {
                for a in polylines[i].windows(2) {
                    for b in polylines[j].windows(2) {
                        if crate::geometry::segments_intersect(a[0], a[1], b[0], b[1]) {
                            let shared = centers.iter().any(|c| {
                                (a[0].approx_eq(*c, 1e-9) || a[1].approx_eq(*c, 1e-9))
                                    && (b[0].approx_eq(*c, 1e-9) || b[1].approx_eq(*c, 1e-9))
                            });
                            assert!(shared, "links {i} and {j} cross");
                        }
                    }
                }
            }
        }
        assert_eq!(sk.spine_segments.len(), 3 * 9 + 3 * 23);
    }

    #[test]
    fn layout_errors() {
        let mut l = single_junction_layout::<f64>(GadgetVariant::Circle);
        l.junctions[0].arms.pop();
        assert_eq!(
            assemble_structure(&l),
            Err(GadgetError::NotCubic { junction: 0, degree: 2 })
        );
        let mut l = single_junction_layout::<f64>(GadgetVariant::Circle);
        l.links[2].w = Point::polar(240f64.to_radians()) * 8.0;
        assert!(matches!(
            assemble_structure(&l),
            Err(GadgetError::BadRoute { link: 2, .. })
        ));
        let mut l = single_junction_layout::<f64>(GadgetVariant::Circle);
        l.junctions[0].arms[2] = 9;
        assert!(matches!(
            assemble_structure(&l),
            Err(GadgetError::BadReference { junction: 0, link: 9 })
        ));
        let mut l = single_link_layout::<f64>(GadgetVariant::Circle, 4);
        l.links.push(l.links[0].clone());
        assert!(matches!(
            assemble_structure(&l),
            Err(GadgetError::BadRoute { link: 1, .. })
        ));
    }

    #[test]
    fn samples_of_skeletons() {
        let empty = GadgetSkeleton::<f64>::empty(GadgetVariant::Circle.params());
        assert_eq!(skeleton_samples(&empty, 0.5), Err(SamplingError::EmptyInput));
        let sk = assemble_structure(&single_link_layout::<f64>(GadgetVariant::Circle, 4)).unwrap();
        let s = skeleton_samples(&sk, 0.25).unwrap();
        // Spine: 9·4 + 1 points. Each bar (length √3) splits into 7 pieces,
        // so 8 points, none of them on the spine.
        assert_eq!(s.len(), 37 + 7 * 8);
    }

    #[test]
    fn rotated_square_containment() {
        let sq = RotatedSquare {
            center: p(1., 1.),
            side: 1.0,
            angle: std::f64::consts::FRAC_PI_4,
        };
        let h = 2f64.sqrt() / 2.0;
        for c in sq.corners() {
            assert!(sq.contains(c));
            assert!((dist_l2(c, sq.center) - h).abs() < 1e-12);
        }
        assert!(sq.contains(p(1. + h, 1.)));
        assert!(!sq.contains(p(1. + h + 1e-6, 1.)));
        assert!(!sq.contains(p(1.5, 1.5)));
    }

    #[test]
    fn hand_patterns_cover_their_links() {
        for (variant, shape) in [
            (GadgetVariant::Circle, PatternShape::Circle),
            (GadgetVariant::Square, PatternShape::RotatedSquare),
        ] {
            let layout = single_link_layout::<f64>(variant, 4);
            let sk = assemble_structure(&layout).unwrap();
            let pat = link_pattern(&layout.link_spec(0), shape);
            assert_eq!(pat.len(), 5);
            let s = skeleton_samples(&sk, 0.05).unwrap();
            assert!(s.points.iter().all(|q| pat.contains(*q)));
            for bar in &sk.bars {
                let i = pat.covering(bar.a).unwrap();
                assert_eq!(pat.covering(bar.b), Some(i));
            }
        }
    }
}
