//! Approximate coverage of simple polygons by `k` equal footprints.
//!
//! The solver samples the boundary or the region at density `eps`, runs
//! farthest-first clustering in the footprint's metric (L∞ for axis-aligned
//! squares, L2 for circles), and inflates the cluster radius by `eps` so the
//! footprints cover the continuous set. Alongside it sit an exact oracle for
//! tiny instances, the hardness gadgets, and solvers for the extreme
//! configurations that yield the inapproximability constants.
//!
//! Every routine is generic over [`scalar::Scalar`]; the aliases below fix
//! the common choices.

pub mod clustering;
pub mod coverage;
pub mod gadget;
pub mod geometry;
pub mod hardness;
pub mod io;
pub mod oracle;
pub mod sampling;
pub mod scalar;

pub use scalar::Scalar;

pub type Point = geometry::Point<f64>;
pub type Segment = geometry::Segment<f64>;
pub type SimplePolygon = geometry::SimplePolygon<f64>;
pub type Footprint = geometry::Footprint<f64>;
pub type SampleSet = sampling::SampleSet<f64>;
pub type CoverSolution = coverage::CoverSolution<f64>;
pub type GadgetSkeleton = gadget::GadgetSkeleton<f64>;
pub type GadgetLayout = gadget::GadgetLayout<f64>;

pub type Point32 = geometry::Point<f32>;
pub type SimplePolygon32 = geometry::SimplePolygon<f32>;
pub type CoverSolution32 = coverage::CoverSolution<f32>;
