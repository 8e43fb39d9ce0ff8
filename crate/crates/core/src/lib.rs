//! Rendering of local invariant sets of holomorphic germs (Siegel discs,
//! Fatou-Leau flowers, hedgehogs) with equipotential models, next to the
//! classical escape-time and approximation methods.
//!
//! The pipeline is: parse a map [`funcexpr::MapExpr`], iterate every pixel
//! centre of a [`raster::Viewport`] with one of the [`dynamics`] engines,
//! classify the result with an [`equipotential`] model into a
//! [`raster::IndexField`], then extract level changes and colour them.

pub mod dynamics;
pub mod equipotential;
pub mod funcexpr;
pub mod numerics;
pub mod raster;

pub use numerics::Complex;
