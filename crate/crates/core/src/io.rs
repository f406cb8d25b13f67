//! JSON file formats and SVG rendering.
//!
//! Polygon:
//! ```json
//! {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
//! ```
//! Solution:
//! ```json
//! {"kind": "circle", "metric": "l2", "k": 1, "length": 0.76, "raw_cluster_radius": 0.70,
//!  "eps": 0.05, "mode": "boundary", "constrained": false, "centers": [[0, 0]]}
//! ```
//! Gadget layout (`via` is optional):
//! ```json
//! {"segment_len": 1, "zeta": 1.7320508075688772, "variant": "circle",
//!  "junctions": [{"center": [0, 0], "arms": [0, 1, 2]}],
//!  "links": [{"u": [0, 0], "w": [9, 0], "m": 4, "via": []}]}
//! ```
//! Sample sets and hand patterns have their own small documents, see
//! [`SampleDoc`] and [`PatternDoc`].
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64`, so every document round-trips bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coverage::CoverSolution;
use crate::gadget::{
    GadgetLayout, GadgetSkeleton, GadgetVariant, JunctionSpec, LinkRoute, Pattern, PatternShape, RotatedSquare,
};
use crate::geometry::{BBox, Footprint, FootprintKind, GeometryError, Metric, Point, SimplePolygon};
use crate::sampling::{SampleMode, SampleSet};
use crate::scalar::Scalar;

/// Malformed JSON, located by byte offset and line/column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn from_serde(text: &str, e: &serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        let start: usize = text
            .split_inclusive('\n')
            .take(line.saturating_sub(1))
            .map(str::len)
            .sum();
        Self {
            offset: (start + column.saturating_sub(1)).min(text.len()),
            line,
            column,
            message: e.to_string(),
        }
    }
}

/// Well-formed JSON whose contents are not acceptable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Polygon(#[from] GeometryError),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k = {k} but {centers} centers given")]
    CenterCount { k: usize, centers: usize },
    #[error("kind {kind} does not match metric {metric}")]
    MixedKinds { kind: &'static str, metric: &'static str },
    #[error("field {field} must be finite and positive, got {value}")]
    BadNumber { field: &'static str, value: f64 },
    #[error("junction {junction} references missing link {link}")]
    DanglingArm { junction: usize, link: usize },
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("nothing to render")]
    EmptyScene,
}

impl IoError {
    fn at(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// True for errors caused by the file system rather than the content.
    pub fn is_io(&self) -> bool {
        matches!(self, IoError::Io { .. })
    }
}

type Xy = [f64; 2];

fn xy<T: Scalar>(p: Point<T>) -> Xy {
    [p.x.to_f64_lossy(), p.y.to_f64_lossy()]
}

fn pt<T: Scalar>(v: Xy) -> Point<T> {
    Point::from_f64(v[0], v[1])
}

fn positive(field: &'static str, value: f64) -> Result<(), ValidationError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ValidationError::BadNumber { field, value })
    }
}

fn parse_doc<D: DeserializeOwned>(text: &str) -> Result<D, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::from_serde(text, &e))
}

/// Pretty JSON with arrays of plain numbers kept on one line.
fn to_json<D: Serialize>(doc: &D) -> String {
    let pretty = serde_json::to_string_pretty(doc).expect("documents contain only plain data");
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty.as_str();
    while let Some(open) = rest.find('[') {
        out.push_str(&rest[..=open]);
        rest = &rest[open + 1..];
        let close = rest.find(['[', ']', '{', '"']);
        match close {
            Some(i) if rest.as_bytes()[i] == b']' => {
                let items: Vec<&str> = rest[..i].split(',').map(str::trim).collect();
                out.push_str(&items.join(", "));
                out.push(']');
                rest = &rest[i + 1..];
            }
            _ => {}
        }
    }
    out.push_str(rest);
    out.push('\n');
    out
}

fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::at(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| IoError::at(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDoc {
    pub vertices: Vec<Xy>,
}

pub fn parse_polygon<T: Scalar>(text: &str) -> Result<SimplePolygon<T>, IoError> {
    let doc: PolygonDoc = parse_doc(text)?;
    let poly = SimplePolygon::validate(doc.vertices.into_iter().map(pt).collect()).map_err(ValidationError::from)?;
    Ok(poly)
}

/// Serializes the vertices as they were given, before canonicalization.
pub fn polygon_to_json<T: Scalar>(poly: &SimplePolygon<T>) -> String {
    to_json(&PolygonDoc {
        vertices: poly.input_vertices().into_iter().map(xy).collect(),
    })
}

pub fn read_polygon<T: Scalar>(path: impl AsRef<Path>) -> Result<SimplePolygon<T>, IoError> {
    parse_polygon(&read_text(path.as_ref())?)
}

pub fn write_polygon<T: Scalar>(poly: &SimplePolygon<T>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &polygon_to_json(poly))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub kind: FootprintKind,
    pub metric: Metric,
    pub k: usize,
    pub length: f64,
    pub raw_cluster_radius: f64,
    pub eps: f64,
    pub mode: SampleMode,
    pub constrained: bool,
    pub centers: Vec<Xy>,
}

impl SolutionDoc {
    /// Builds the document; fails on an empty or mixed solution.
    pub fn from_solution<T: Scalar>(sol: &CoverSolution<T>) -> Result<Self, ValidationError> {
        let kind = solution_kind(sol)?;
        Ok(Self {
            kind,
            metric: sol.metric,
            k: sol.k(),
            length: sol.length.to_f64_lossy(),
            raw_cluster_radius: sol.raw_cluster_radius.to_f64_lossy(),
            eps: sol.eps.to_f64_lossy(),
            mode: sol.mode,
            constrained: sol.constrained,
            centers: sol.footprints.iter().map(|f| xy(f.center)).collect(),
        })
    }

    pub fn into_solution<T: Scalar>(self) -> Result<CoverSolution<T>, ValidationError> {
        if self.k == 0 {
            return Err(ValidationError::ZeroK);
        }
        if self.k != self.centers.len() {
            return Err(ValidationError::CenterCount {
                k: self.k,
                centers: self.centers.len(),
            });
        }
        if self.kind.metric() != self.metric {
            return Err(ValidationError::MixedKinds {
                kind: self.kind.name(),
                metric: self.metric.name(),
            });
        }
        positive("length", self.length)?;
        positive("eps", self.eps)?;
        if !(self.raw_cluster_radius.is_finite() && self.raw_cluster_radius >= 0.0) {
            return Err(ValidationError::BadNumber {
                field: "raw_cluster_radius",
                value: self.raw_cluster_radius,
            });
        }
        let length = T::lit(self.length);
        let footprints = self
            .centers
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                Footprint::try_new(self.kind, pt(c), length).map_err(|e| match e {
                    GeometryError::NonFinite { .. } => GeometryError::NonFinite { index: i },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CoverSolution {
            footprints,
            length,
            raw_cluster_radius: T::lit(self.raw_cluster_radius),
            eps: T::lit(self.eps),
            metric: self.metric,
            constrained: self.constrained,
            mode: self.mode,
        })
    }
}

fn solution_kind<T: Scalar>(sol: &CoverSolution<T>) -> Result<FootprintKind, ValidationError> {
    let first = sol.footprints.first().ok_or(ValidationError::ZeroK)?;
    match sol
        .footprints
        .iter()
        .find(|f| f.kind != first.kind || f.length != sol.length)
    {
        Some(f) => Err(ValidationError::MixedKinds {
            kind: f.kind.name(),
            metric: sol.metric.name(),
        }),
        None if first.kind.metric() != sol.metric => Err(ValidationError::MixedKinds {
            kind: first.kind.name(),
            metric: sol.metric.name(),
        }),
        None => Ok(first.kind),
    }
}

pub fn solution_to_json<T: Scalar>(sol: &CoverSolution<T>) -> Result<String, ValidationError> {
    Ok(to_json(&SolutionDoc::from_solution(sol)?))
}

pub fn parse_solution<T: Scalar>(text: &str) -> Result<CoverSolution<T>, IoError> {
    let doc: SolutionDoc = parse_doc(text)?;
    Ok(doc.into_solution()?)
}

pub fn write_solution<T: Scalar>(sol: &CoverSolution<T>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &solution_to_json(sol)?)
}

pub fn read_solution<T: Scalar>(path: impl AsRef<Path>) -> Result<CoverSolution<T>, IoError> {
    parse_solution(&read_text(path.as_ref())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionDoc {
    pub center: Xy,
    pub arms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub u: Xy,
    pub w: Xy,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub via: Vec<Xy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutDoc {
    pub segment_len: f64,
    pub zeta: f64,
    pub variant: GadgetVariant,
    pub junctions: Vec<JunctionDoc>,
    pub links: Vec<LinkDoc>,
}

impl LayoutDoc {
    pub fn from_layout<T: Scalar>(layout: &GadgetLayout<T>) -> Self {
        Self {
            segment_len: layout.segment_len.to_f64_lossy(),
            zeta: layout.zeta.to_f64_lossy(),
            variant: layout.variant,
            junctions: layout
                .junctions
                .iter()
                .map(|j| JunctionDoc {
                    center: xy(j.center),
                    arms: j.arms.clone(),
                })
                .collect(),
            links: layout
                .links
                .iter()
                .map(|l| LinkDoc {
                    u: xy(l.u),
                    w: xy(l.w),
                    m: l.m,
                    via: l.via.iter().copied().map(xy).collect(),
                })
                .collect(),
        }
    }

    /// Converts after checking parameters and arm references. Geometry is
    /// checked later by `assemble_structure`.
    pub fn into_layout<T: Scalar>(self) -> Result<GadgetLayout<T>, ValidationError> {
        positive("segment_len", self.segment_len)?;
        positive("zeta", self.zeta)?;
        for (ji, j) in self.junctions.iter().enumerate() {
            if let Some(&link) = j.arms.iter().find(|&&a| a >= self.links.len()) {
                return Err(ValidationError::DanglingArm { junction: ji, link });
            }
        }
        Ok(GadgetLayout {
            variant: self.variant,
            segment_len: T::lit(self.segment_len),
            zeta: T::lit(self.zeta),
            junctions: self
                .junctions
                .into_iter()
                .map(|j| JunctionSpec {
                    center: pt(j.center),
                    arms: j.arms,
                })
                .collect(),
            links: self
                .links
                .into_iter()
                .map(|l| LinkRoute {
                    u: pt(l.u),
                    w: pt(l.w),
                    m: l.m,
                    via: l.via.into_iter().map(pt).collect(),
                })
                .collect(),
        })
    }
}

pub fn layout_to_json<T: Scalar>(layout: &GadgetLayout<T>) -> String {
    to_json(&LayoutDoc::from_layout(layout))
}

pub fn parse_layout<T: Scalar>(text: &str) -> Result<GadgetLayout<T>, IoError> {
    let doc: LayoutDoc = parse_doc(text)?;
    Ok(doc.into_layout()?)
}

pub fn read_layout<T: Scalar>(path: impl AsRef<Path>) -> Result<GadgetLayout<T>, IoError> {
    parse_layout(&read_text(path.as_ref())?)
}

pub fn write_layout<T: Scalar>(layout: &GadgetLayout<T>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &layout_to_json(layout))
}

/// `{"mode": "boundary", "density": 0.05, "points": [[x, y], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleDoc {
    pub mode: SampleMode,
    pub density: f64,
    pub points: Vec<Xy>,
}

pub fn samples_to_json<T: Scalar>(samples: &SampleSet<T>) -> String {
    to_json(&SampleDoc {
        mode: samples.mode,
        density: samples.density.to_f64_lossy(),
        points: samples.points.iter().copied().map(xy).collect(),
    })
}

/// Parses a sample document. The source fingerprint is not stored and comes
/// back as 0.
pub fn parse_samples<T: Scalar>(text: &str) -> Result<SampleSet<T>, IoError> {
    let doc: SampleDoc = parse_doc(text)?;
    positive("density", doc.density)?;
    Ok(SampleSet {
        points: doc.points.into_iter().map(pt).collect(),
        density: T::lit(doc.density),
        mode: doc.mode,
        source: 0,
    })
}

pub fn write_samples<T: Scalar>(samples: &SampleSet<T>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &samples_to_json(samples))
}

/// `{"shape": "rotated_square", "size": 1, "angle": 0.785…, "centers": [...]}`,
/// angle in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDoc {
    pub shape: PatternShape,
    pub size: f64,
    #[serde(default)]
    pub angle: f64,
    pub centers: Vec<Xy>,
}

pub fn pattern_to_json<T: Scalar>(pattern: &Pattern<T>) -> String {
    to_json(&PatternDoc {
        shape: pattern.shape,
        size: pattern.size.to_f64_lossy(),
        angle: pattern.angle.to_f64_lossy(),
        centers: pattern.centers.iter().copied().map(xy).collect(),
    })
}

pub fn parse_pattern<T: Scalar>(text: &str) -> Result<Pattern<T>, IoError> {
    let doc: PatternDoc = parse_doc(text)?;
    positive("size", doc.size)?;
    Ok(Pattern {
        shape: doc.shape,
        size: T::lit(doc.size),
        angle: T::lit(doc.angle),
        centers: doc.centers.into_iter().map(pt).collect(),
    })
}

pub fn read_pattern<T: Scalar>(path: impl AsRef<Path>) -> Result<Pattern<T>, IoError> {
    parse_pattern(&read_text(path.as_ref())?)
}

/// Reads every `*.json` polygon in `dir`, sorted by file name. Names are
/// the file stems.
pub fn read_suite<T: Scalar>(dir: impl AsRef<Path>) -> Result<Vec<(String, SimplePolygon<T>)>, IoError> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| IoError::at(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((name, read_polygon(&p)?))
        })
        .collect()
}

/// Everything [`render_svg`] can draw. All parts are optional but at least
/// one must be non-empty.
#[derive(Debug, Clone, Copy)]
pub struct Scene<'a, T> {
    pub polygon: Option<&'a SimplePolygon<T>>,
    pub samples: &'a [Point<T>],
    pub footprints: &'a [Footprint<T>],
    pub skeleton: Option<&'a GadgetSkeleton<T>>,
    pub pattern: Option<&'a Pattern<T>>,
}

impl<T> Default for Scene<'_, T> {
    fn default() -> Self {
        Self {
            polygon: None,
            samples: &[],
            footprints: &[],
            skeleton: None,
            pattern: None,
        }
    }
}

impl<T: Scalar> Scene<'_, T> {
    fn bbox(&self) -> Option<BBox<T>> {
        let mut pts: Vec<Point<T>> = Vec::new();
        if let Some(p) = self.polygon {
            pts.extend_from_slice(p.vertices());
        }
        pts.extend_from_slice(self.samples);
        for f in self.footprints {
            let b = f.bbox();
            pts.extend([b.min, b.max]);
        }
        if let Some(sk) = self.skeleton {
            pts.extend(sk.segments().flat_map(|s| [s.a, s.b]));
        }
        if let Some(pat) = self.pattern {
            pts.extend(pattern_outlines(pat).into_iter().flatten());
        }
        BBox::from_points(pts)
    }
}

fn pattern_outlines<T: Scalar>(pat: &Pattern<T>) -> Vec<Vec<Point<T>>> {
    pat.centers
        .iter()
        .map(|&c| match pat.shape {
            PatternShape::Circle => {
                let r = pat.size;
                [(r, T::zero()), (-r, T::zero()), (T::zero(), r), (T::zero(), -r)]
                    .into_iter()
                    .map(|(dx, dy)| c + Point::new(dx, dy))
                    .collect()
            }
            PatternShape::RotatedSquare => RotatedSquare {
                center: c,
                side: pat.size,
                angle: pat.angle,
            }
            .corners()
            .to_vec(),
        })
        .collect()
}

const SVG_STYLE: &str = "\
.polygon{fill:#eef3f8;stroke:#1f3b57}\
.footprint{fill:#e4572e;fill-opacity:0.25;stroke:#e4572e}\
.pattern{fill:#29a36a;fill-opacity:0.2;stroke:#29a36a}\
.sample{fill:#333}\
.spine{stroke:#1f3b57}\
.bar{stroke:#c9a227}\
.junction{fill:#7b2d8e}";

/// Renders `scene` as a standalone SVG 1.1 document. The y axis points up.
pub fn render_svg_string<T: Scalar>(scene: &Scene<'_, T>) -> Result<String, IoError> {
    let bbox = scene.bbox().ok_or(IoError::EmptyScene)?;
    let f = |v: T| v.to_f64_lossy();
    let (w, h) = (f(bbox.width()), f(bbox.height()));
    let span = w.max(h).max(1e-9);
    let view = bbox.inflated(T::lit(0.05 * span));
    let sw = span / 400.0;
    let mut s = String::new();
    let _ = write!(
        s,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n\
         <style>{SVG_STYLE}</style>\n<g stroke-width=\"{sw}\">\n",
        f(view.min.x),
        -f(view.max.y),
        f(view.width()),
        f(view.height()),
    );
    let coords = |pts: &[Point<T>]| {
        pts.iter()
            .map(|p| format!("{},{}", f(p.x), -f(p.y)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if let Some(poly) = scene.polygon {
        let _ = writeln!(s, "<polygon class=\"polygon\" points=\"{}\"/>", coords(poly.vertices()));
    }
    for fp in scene.footprints {
        let c = fp.center;
        match fp.kind {
            FootprintKind::Circle => {
                let _ = writeln!(
                    s,
                    "<circle class=\"footprint\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                    f(c.x),
                    -f(c.y),
                    f(fp.length)
                );
            }
            FootprintKind::AxisSquare => {
                let b = fp.bbox();
                let _ = writeln!(
                    s,
                    "<rect class=\"footprint\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    f(b.min.x),
                    -f(b.max.y),
                    f(fp.length),
                    f(fp.length)
                );
            }
        }
    }
    if let Some(pat) = scene.pattern {
        for (outline, &c) in pattern_outlines(pat).iter().zip(&pat.centers) {
            match pat.shape {
                PatternShape::Circle => {
                    let _ = writeln!(
                        s,
                        "<circle class=\"pattern\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        f(c.x),
                        -f(c.y),
                        f(pat.size)
                    );
                }
                PatternShape::RotatedSquare => {
                    let _ = writeln!(s, "<polygon class=\"pattern\" points=\"{}\"/>", coords(outline));
                }
            }
        }
    }
    if let Some(sk) = scene.skeleton {
        let line = |s: &mut String, class: &str, seg: &crate::geometry::Segment<T>| {
            let _ = writeln!(
                s,
                "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                f(seg.a.x),
                -f(seg.a.y),
                f(seg.b.x),
                -f(seg.b.y)
            );
        };
        for (i, link) in sk.links.iter().enumerate() {
            let _ = writeln!(s, "<g class=\"link\" id=\"link-{i}\">");
            for seg in &sk.spine_segments[link.spine.clone()] {
                line(&mut s, "spine", seg);
            }
            for seg in &sk.bars[link.bars.clone()] {
                line(&mut s, "bar", seg);
            }
            s.push_str("</g>\n");
        }
        let r = f(sk.params.segment_len) * 0.15;
        for j in &sk.junctions {
            let _ = writeln!(
                s,
                "<rect class=\"junction\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                f(j.center.x) - r,
                -f(j.center.y) - r,
                2.0 * r,
                2.0 * r
            );
        }
    }
    let dot = sw * 1.5;
    for p in scene.samples {
        let _ = writeln!(
            s,
            "<rect class=\"sample\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            f(p.x) - dot / 2.0,
            -f(p.y) - dot / 2.0,
            dot,
            dot
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn render_svg<T: Scalar>(scene: &Scene<'_, T>, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &render_svg_string(scene)?)
}
