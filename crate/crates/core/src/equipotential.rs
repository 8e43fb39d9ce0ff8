//! Equipotential classification models.
//!
//! The holed k-branched star splits the plane around a fixed point into
//! `k` half-open angular sectors `[j·2π/k, (j+1)·2π/k)` and removes a
//! closed disc of radius `hole_radius`. Concentric rings and straight
//! line grids are provided for comparison renders.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::numerics::{angle, Complex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("branches must be >= 1")]
    NoBranches,
    #[error("hole_radius must be a finite number >= 0, got {0}")]
    HoleRadius(f64),
    #[error("ring_width must be a positive finite number, got {0}")]
    RingWidth(f64),
    #[error("grid_spacing must be a positive finite number, got {0}")]
    GridSpacing(f64),
    #[error("anchor must be finite")]
    Anchor,
}

impl ModelError {
    pub fn field(&self) -> &'static str {
        match self {
            ModelError::NoBranches => "branches",
            ModelError::HoleRadius(_) => "hole_radius",
            ModelError::RingWidth(_) => "ring_width",
            ModelError::GridSpacing(_) => "grid_spacing",
            ModelError::Anchor => "anchor",
        }
    }
}

/// Level of a point in the star model: the hole, or a branch sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex(i32);

impl LevelIndex {
    pub const HOLE: LevelIndex = LevelIndex(-1);

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn is_hole(self) -> bool {
        self.0 < 0
    }

    pub fn sector(self) -> Option<u32> {
        (self.0 >= 0).then_some(self.0 as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarModel {
    branches: u32,
    hole_radius: f64,
    anchor: Complex,
}

impl StarModel {
    /// Width of the angle range in which the branches live.
    pub const EXISTENCE_INTERVAL: f64 = TAU;

    pub fn new(branches: u32, hole_radius: f64, anchor: Complex) -> Result<Self, ModelError> {
        // sector indices must fit an i32
        if branches == 0 || branches > i32::MAX as u32 {
            return Err(ModelError::NoBranches);
        }
        if !(hole_radius >= 0.0 && hole_radius.is_finite()) {
            return Err(ModelError::HoleRadius(hole_radius));
        }
        if !(anchor.re.is_finite() && anchor.im.is_finite()) {
            return Err(ModelError::Anchor);
        }
        Ok(Self {
            branches,
            hole_radius,
            anchor,
        })
    }

    pub fn branches(&self) -> u32 {
        self.branches
    }

    pub fn hole_radius(&self) -> f64 {
        self.hole_radius
    }

    pub fn anchor(&self) -> Complex {
        self.anchor
    }

    /// Angular width of one sector, `2π / k`.
    pub fn potential_rate(&self) -> f64 {
        Self::EXISTENCE_INTERVAL / f64::from(self.branches)
    }

    pub fn classify(&self, z: Complex) -> LevelIndex {
        let w = z - self.anchor;
        if w.norm() <= self.hole_radius {
            return LevelIndex::HOLE;
        }
        let raw = (angle(w) / self.potential_rate()).floor();
        let top = self.branches as i32 - 1;
        LevelIndex((raw as i32).clamp(0, top))
    }
}

pub fn star_classify(model: &StarModel, z: Complex) -> LevelIndex {
    model.classify(z)
}

/// Concentric rings of equal width around an anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclesModel {
    ring_width: f64,
    anchor: Complex,
}

impl CirclesModel {
    pub fn new(ring_width: f64, anchor: Complex) -> Result<Self, ModelError> {
        if !(ring_width > 0.0 && ring_width.is_finite()) {
            return Err(ModelError::RingWidth(ring_width));
        }
        if !(anchor.re.is_finite() && anchor.im.is_finite()) {
            return Err(ModelError::Anchor);
        }
        Ok(Self { ring_width, anchor })
    }

    pub fn ring_width(&self) -> f64 {
        self.ring_width
    }

    pub fn anchor(&self) -> Complex {
        self.anchor
    }

    pub fn classify(&self, z: Complex) -> i64 {
        ((z - self.anchor).norm() / self.ring_width).floor() as i64
    }
}

pub fn circles_classify(ring_width: f64, anchor: Complex, z: Complex) -> Result<i64, ModelError> {
    CirclesModel::new(ring_width, anchor).map(|m| m.classify(z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridOrientation {
    /// Lines of constant imaginary part.
    Horizontal,
    /// Lines of constant real part.
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridModel {
    orientation: GridOrientation,
    spacing: f64,
}

impl GridModel {
    pub fn new(orientation: GridOrientation, spacing: f64) -> Result<Self, ModelError> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(ModelError::GridSpacing(spacing));
        }
        Ok(Self {
            orientation,
            spacing,
        })
    }

    pub fn orientation(&self) -> GridOrientation {
        self.orientation
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn classify(&self, z: Complex) -> i64 {
        let coord = match self.orientation {
            GridOrientation::Horizontal => z.im,
            GridOrientation::Vertical => z.re,
        };
        (coord / self.spacing).floor() as i64
    }
}

pub fn grid_classify(
    orientation: GridOrientation,
    spacing: f64,
    z: Complex,
) -> Result<i64, ModelError> {
    GridModel::new(orientation, spacing).map(|m| m.classify(z))
}

/// Any of the equipotential models, with the level it assigns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquipotentialModel {
    Star(StarModel),
    Circles(CirclesModel),
    Grid(GridModel),
}

/// Level assigned by an equipotential model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Hole,
    Index(i64),
}

impl EquipotentialModel {
    pub fn classify(&self, z: Complex) -> Level {
        match self {
            EquipotentialModel::Star(m) => match m.classify(z).sector() {
                Some(j) => Level::Index(i64::from(j)),
                None => Level::Hole,
            },
            EquipotentialModel::Circles(m) => Level::Index(m.classify(z)),
            EquipotentialModel::Grid(m) => Level::Index(m.classify(z)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn origin_star(k: u32, hole: f64) -> StarModel {
        StarModel::new(k, hole, c(0.0, 0.0)).unwrap()
    }

    #[test]
    fn star_examples() {
        let m = origin_star(12, 0.5);
        let up = c((PI / 2.0).cos(), (PI / 2.0).sin());
        assert_eq!(m.classify(up).value(), 3);
        assert_eq!(m.classify(c(0.3, 0.0)), LevelIndex::HOLE);
        assert_eq!(m.classify(c(0.0, -0.3)), LevelIndex::HOLE);
        // the hole disc is closed
        assert_eq!(m.classify(c(0.5, 0.0)), LevelIndex::HOLE);
        let m31 = origin_star(31, 0.1);
        for i in 0..200 {
            let a = i as f64 * TAU / 200.0;
            let v = m31.classify(c(a.cos(), a.sin())).value();
            assert!((0..=30).contains(&v));
        }
    }

    #[test]
    fn star_top_sector_is_clamped() {
        let m = origin_star(12, 0.0);
        // angle just below 2π
        let z = c(1.0, -1e-17);
        assert_eq!(m.classify(z).value(), 0);
        let z = c(1.0, -1e-9);
        assert_eq!(m.classify(z).value(), 11);
        assert_eq!(m.classify(c(1.0, 0.0)).value(), 0);
    }

    #[test]
    fn empty_hole_still_classifies_anchor() {
        let m = origin_star(8, 0.0);
        assert_eq!(m.classify(c(0.0, 0.0)), LevelIndex::HOLE);
        assert_eq!(m.classify(c(1e-300, 0.0)).value(), 0);
    }

    #[test]
    fn anchor_translation() {
        let m = StarModel::new(4, 0.25, c(1.0, 1.0)).unwrap();
        assert_eq!(m.classify(c(1.1, 1.0)), LevelIndex::HOLE);
        assert_eq!(m.classify(c(0.0, 2.0)).value(), 1);
        assert_eq!(m.classify(c(2.0, 0.0)).value(), 3);
    }

    #[test]
    fn model_validation() {
        assert_eq!(
            StarModel::new(0, 0.5, c(0.0, 0.0)).unwrap_err().field(),
            "branches"
        );
        assert_eq!(
            StarModel::new(3, -0.1, c(0.0, 0.0)).unwrap_err().field(),
            "hole_radius"
        );
        assert!(StarModel::new(3, 0.1, c(f64::NAN, 0.0)).is_err());
        assert!(CirclesModel::new(0.0, c(0.0, 0.0)).is_err());
        assert!(GridModel::new(GridOrientation::Vertical, -1.0).is_err());
    }

    #[test]
    fn circles_examples() {
        let o = c(0.0, 0.0);
        assert_eq!(circles_classify(1.0, o, c(0.5, 0.0)).unwrap(), 0);
        assert_eq!(circles_classify(1.0, o, c(2.5, 0.0)).unwrap(), 2);
        assert_eq!(circles_classify(0.25, c(1.0, 0.0), c(1.0, 0.0)).unwrap(), 0);
    }

    #[test]
    fn grid_examples() {
        use GridOrientation::*;
        for x in [-3.0, 0.0, 7.5] {
            assert_eq!(grid_classify(Horizontal, 1.0, c(x, 0.5)).unwrap(), 0);
        }
        assert_eq!(grid_classify(Horizontal, 1.0, c(0.0, -0.5)).unwrap(), -1);
        assert_eq!(grid_classify(Vertical, 2.0, c(3.0, 99.0)).unwrap(), 1);
    }

    #[test]
    fn unified_levels() {
        let star = EquipotentialModel::Star(origin_star(4, 0.5));
        assert_eq!(star.classify(c(0.1, 0.1)), Level::Hole);
        assert_eq!(star.classify(c(-1.0, 0.5)), Level::Index(1));
        let grid = EquipotentialModel::Grid(GridModel::new(GridOrientation::Horizontal, 1.0).unwrap());
        assert_eq!(grid.classify(c(0.0, -0.5)), Level::Index(-1));
    }

    fn finite() -> impl Strategy<Value = f64> {
        -1e3f64..1e3
    }

    proptest! {
        #[test]
        fn star_is_total(k in 1u32..200, hole in 0.0f64..2.0, re in finite(), im in finite()) {
            let v = origin_star(k, hole).classify(c(re, im)).value();
            prop_assert!(v == -1 || (0..k as i32).contains(&v));
        }

        #[test]
        fn star_rotation_equivariance(
            k in 1u32..64,
            m in 0u32..64,
            r in 0.6f64..10.0,
            a in 0.0f64..TAU,
            ax in -1.0f64..1.0,
            ay in -1.0f64..1.0,
        ) {
            let anchor = c(ax, ay);
            let model = StarModel::new(k, 0.5, anchor).unwrap();
            let rate = TAU / k as f64;
            let turn = TAU * (m % k) as f64 / k as f64;
            let rotated = a + turn;
            let near_edge = |x: f64| {
                let x = x.rem_euclid(TAU);
                let t = x / rate;
                (t - t.round()).abs() * rate < 1e-9 || (TAU - x) < 1e-9
            };
            prop_assume!(!near_edge(a) && !near_edge(rotated));
            let z = anchor + Complex::from_polar(r, a);
            let w = anchor + Complex::from_polar(1.0, turn) * (z - anchor);
            let base = model.classify(z).value() as u32;
            prop_assert_eq!(model.classify(w).value() as u32, (base + m % k) % k);
        }

        #[test]
        fn hole_monotonicity(k in 1u32..32, h1 in 0.0f64..2.0, dh in 0.0f64..2.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let z = c(re, im);
            let small = origin_star(k, h1).classify(z);
            let large = origin_star(k, h1 + dh).classify(z);
            if small.is_hole() {
                prop_assert!(large.is_hole());
            }
        }
    }
}
