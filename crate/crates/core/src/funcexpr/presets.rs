//! Built-in germs: the quadratic hedgehog germ, Fatou-Leau flowers, and
//! the classical maps used for comparison renders.
//!
//! Viewports are our own choices; they frame each invariant set at the
//! default raster size.

use super::{MapExpr, ParseError};
use crate::numerics::{Complex, ContinuedFraction, NumericsError};
use crate::raster::MethodKind;

/// Suggested render parameters for a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetDefaults {
    pub method: MethodKind,
    /// `[left, right, top, bottom]`
    pub viewport: [f64; 4],
    pub branches: u32,
    pub hole_radius: f64,
    pub iters: u32,
    /// Branch counts should be a multiple of this (number of attracting
    /// directions of a flower).
    pub branch_multiple: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct GermPreset {
    pub name: String,
    pub source: String,
    pub expr: MapExpr,
    pub fixed_point: Complex,
    pub notes: String,
    /// Partial quotients of θ for germs parametrised by a rotation number.
    pub theta_terms: Option<Vec<u64>>,
    pub defaults: PresetDefaults,
}

#[derive(Debug, thiserror::Error)]
pub enum PresetError {
    #[error(transparent)]
    Theta(#[from] NumericsError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("preset `{0}` does not take θ terms")]
    NotParametrised(String),
}

impl GermPreset {
    fn new(
        name: &str,
        source: &str,
        fixed_point: Complex,
        notes: &str,
        defaults: PresetDefaults,
    ) -> Self {
        let expr = MapExpr::parse(source).expect("builtin preset parses");
        Self {
            name: name.to_string(),
            source: source.to_string(),
            expr,
            fixed_point,
            notes: notes.to_string(),
            theta_terms: None,
            defaults,
        }
    }

    /// Distance between `f(fixed_point)` and `fixed_point`.
    pub fn fixed_point_residual(&self) -> f64 {
        (self.expr.eval(self.fixed_point) - self.fixed_point).norm()
    }

    /// Rebuild a θ-parametrised preset with other partial quotients.
    pub fn with_theta_terms(&self, terms: &[u64]) -> Result<Self, PresetError> {
        if self.theta_terms.is_none() {
            return Err(PresetError::NotParametrised(self.name.clone()));
        }
        let mut out = hedgehog_quadratic(&ContinuedFraction::new(terms.to_vec())?)?;
        out.name = self.name.clone();
        out.defaults = self.defaults.clone();
        Ok(out)
    }
}

fn star(viewport: [f64; 4], branches: u32, hole_radius: f64, iters: u32) -> PresetDefaults {
    PresetDefaults {
        method: MethodKind::EquipotentialStar,
        viewport,
        branches,
        hole_radius,
        iters,
        branch_multiple: None,
    }
}

fn flower(viewport: [f64; 4], petals: u32) -> PresetDefaults {
    PresetDefaults {
        branch_multiple: Some(petals),
        ..star(viewport, petals * 4, 0.0, 100)
    }
}

/// `e^{2πiθ} z + z^2` with θ given by a continued fraction.
pub fn hedgehog_quadratic(theta: &ContinuedFraction) -> Result<GermPreset, PresetError> {
    let r = theta.rational()?;
    let source = format!(
        "e^(2*pi*i*({}/{}))*z + z^2",
        r.numerator(),
        r.denominator()
    );
    let expr = MapExpr::parse(&source)?;
    Ok(GermPreset {
        name: "hedgehog-q".into(),
        source,
        expr,
        fixed_point: Complex::new(0.0, 0.0),
        notes: format!(
            "quadratic germ with irrationally indifferent fixed point at 0, \
             theta = [{}]",
            theta
                .terms()
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        theta_terms: Some(theta.terms().to_vec()),
        defaults: star([-1.3, 1.5, 1.0, -1.8], 12, 0.09, 150),
    })
}

pub fn builtin_presets() -> Vec<GermPreset> {
    let origin = Complex::new(0.0, 0.0);
    let hedgehog = hedgehog_quadratic(&ContinuedFraction::default())
        .expect("default theta expansion is valid");

    // z^2 - z - i = 0
    let disc = Complex::new(1.0, 4.0).sqrt();
    let quad_fixed = (Complex::new(1.0, 0.0) - disc) * 0.5;

    vec![
        hedgehog,
        GermPreset::new(
            "identity",
            "z",
            origin,
            "identity map; renders the holed branched star itself",
            star([-2.0, 2.0, 2.0, -2.0], 12, 0.5, 1),
        ),
        GermPreset::new(
            "flower3",
            "z + z^3",
            origin,
            "parabolic fixed point at 0 with 2 attracting directions",
            flower([-1.0, 1.0, 1.0, -1.0], 2),
        ),
        GermPreset::new(
            "flower4",
            "z + z^4",
            origin,
            "parabolic fixed point at 0 with 3 attracting directions",
            flower([-1.0, 1.0, 1.0, -1.0], 3),
        ),
        GermPreset::new(
            "flower5",
            "z + z^5",
            origin,
            "parabolic fixed point at 0 with 4 attracting directions; \
             use branch counts that are multiples of 4",
            flower([-1.0, 1.0, 1.0, -1.0], 4),
        ),
        GermPreset::new(
            "parabolic-3-7",
            "e^(2*pi*i*(3/7))*z + z^2",
            origin,
            "rationally indifferent fixed point at 0, rotation number 3/7",
            PresetDefaults {
                branch_multiple: Some(7),
                ..star([-1.2, 0.8, 0.9, -1.1], 28, 0.0, 140)
            },
        ),
        GermPreset::new(
            "rotation-3-7",
            "e^(2*pi*i*(3/7))*z",
            origin,
            "linear rotation by 3/7 of a turn; period 7",
            star([-2.0, 2.0, 2.0, -2.0], 12, 0.5, 7),
        ),
        GermPreset::new(
            "newton-cubic",
            "(2*z^3+1)/(3*z^2)",
            Complex::new(1.0, 0.0),
            "Newton's method for z^3 - 1; attracting fixed points at the cube roots of unity",
            PresetDefaults {
                method: MethodKind::Approximation,
                ..star([-2.0, 2.0, 2.0, -2.0], 12, 0.0, 50)
            },
        ),
        GermPreset::new(
            "square",
            "z^2",
            origin,
            "super-attracting fixed point at 0",
            star([-1.5, 1.5, 1.5, -1.5], 12, 0.0, 50),
        ),
        GermPreset::new(
            "quadratic-c",
            "z^2 + (0 - 1*i)",
            quad_fixed,
            "z^2 + c with c = -i; repelling fixed point",
            PresetDefaults {
                method: MethodKind::EscapeTime,
                ..star([-2.0, 2.0, 2.0, -2.0], 12, 0.0, 50)
            },
        ),
    ]
}

pub fn find_preset(name: &str) -> Option<GermPreset> {
    builtin_presets().into_iter().find(|p| p.name == name)
}
