//! Key-value text form of a render configuration, shared by the command
//! line (`--config`) and the render service.
//!
//! One `key = value` pair per line; blank lines and `#` comments are
//! ignored; keys may use `-` or `_`. Every key is optional.
//!
//! | key                | value                                   | default            |
//! |--------------------|-----------------------------------------|--------------------|
//! | `function`         | expression in `z`                       | `z`                |
//! | `preset`           | builtin germ name                       | none               |
//! | `theta_terms`      | `3,10,20000` (θ-parametrised presets)   | preset's           |
//! | `anchor`           | `re,im` fixed point used by the models  | preset's, else `0,0` |
//! | `method`           | `equipotential-star`, `equipotential-circles`, `equipotential-grid`, `escape-time`, `approximation` | preset's, else `equipotential-star` |
//! | `branches`         | integer ≥ 1                             | preset's, else 12  |
//! | `hole_radius`      | real ≥ 0                                | preset's, else 0.5 |
//! | `ring_width`       | real > 0                                | 0.1                |
//! | `grid_orientation` | `horizontal` or `vertical`              | `horizontal`       |
//! | `grid_spacing`     | real > 0                                | 0.1                |
//! | `viewport`         | `left,right,top,bottom`                 | preset's, else `-2,2,2,-2` |
//! | `size`             | `WIDTHxHEIGHT`                          | `400x400`          |
//! | `iters`            | integer ≥ 1                             | preset's, else 50  |
//! | `escape_radius`    | real > 0                                | 2                  |
//! | `epsilon`          | real in (0, 1)                          | 0.00001            |
//! | `palette`          | `mono-contour`, `indexed`, `random`, `rgb-cube`, `ordered-shades` | `mono-contour` |
//! | `seed`             | unsigned integer                        | 0                  |
//! | `output`           | `contour` or `filled`                   | `contour`          |
//! | `format`           | `ppm` or `png`                          | by file extension  |
//!
//! `function` and `preset` are mutually exclusive.

use std::fmt::Write as _;

use thiserror::Error;

use super::{ImageFormat, Method, OutputMode, PaletteMode, PaletteSpec, RenderConfig, Viewport};
use crate::dynamics::{IterationBudget, DEFAULT_EPSILON, DEFAULT_ESCAPE_RADIUS, DEFAULT_MAX_ITERS};
use crate::equipotential::{CirclesModel, EquipotentialModel, GridModel, GridOrientation, StarModel};
use crate::funcexpr::{find_preset, GermPreset, MapExpr, ParseError};
use crate::numerics::Complex;
use crate::raster::MethodKind;

pub const DEFAULT_BRANCHES: u32 = 12;
pub const DEFAULT_HOLE_RADIUS: f64 = 0.5;
pub const DEFAULT_RING_WIDTH: f64 = 0.1;
pub const DEFAULT_GRID_SPACING: f64 = 0.1;
pub const DEFAULT_VIEWPORT: [f64; 4] = [-2.0, 2.0, 2.0, -2.0];
pub const DEFAULT_SIZE: (u32, u32) = (400, 400);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot parse `function`: {0}")]
    Function(#[source] ParseError),
}

impl ConfigError {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Key the error refers to, if any.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax { .. } => None,
            ConfigError::UnknownKey(k) => Some(k),
            ConfigError::Invalid { field, .. } => Some(field),
            ConfigError::Function(_) => Some("function"),
        }
    }
}

/// Compute caps checked before any rendering starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_width: u32,
    pub max_height: u32,
    pub max_iters: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_width: 2048,
            max_height: 2048,
            max_iters: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{field}` is {value}, above the limit of {limit}")]
pub struct LimitError {
    pub field: &'static str,
    pub value: u64,
    pub limit: u64,
}

impl Limits {
    pub fn check(&self, config: &RenderConfig) -> Result<(), LimitError> {
        let checks = [
            ("width", config.viewport.width(), self.max_width),
            ("height", config.viewport.height(), self.max_height),
            ("iters", config.budget.max_iters(), self.max_iters),
        ];
        for (field, value, limit) in checks {
            if value > limit {
                return Err(LimitError {
                    field,
                    value: u64::from(value),
                    limit: u64::from(limit),
                });
            }
        }
        Ok(())
    }
}

/// Render settings as written by a user. Unset keys fall back to the
/// preset's suggestion, then to the global default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RenderSettings {
    pub function: Option<String>,
    pub preset: Option<String>,
    pub theta_terms: Option<Vec<u64>>,
    pub anchor: Option<(f64, f64)>,
    pub method: Option<MethodKind>,
    pub branches: Option<u32>,
    pub hole_radius: Option<f64>,
    pub ring_width: Option<f64>,
    pub grid_orientation: Option<GridOrientation>,
    pub grid_spacing: Option<f64>,
    pub viewport: Option<[f64; 4]>,
    pub size: Option<(u32, u32)>,
    pub iters: Option<u32>,
    pub escape_radius: Option<f64>,
    pub epsilon: Option<f64>,
    pub palette: Option<PaletteMode>,
    pub seed: Option<u64>,
    pub output: Option<OutputMode>,
    pub format: Option<ImageFormat>,
}

pub const KEYS: [&str; 19] = [
    "function",
    "preset",
    "theta_terms",
    "anchor",
    "method",
    "branches",
    "hole_radius",
    "ring_width",
    "grid_orientation",
    "grid_spacing",
    "viewport",
    "size",
    "iters",
    "escape_radius",
    "epsilon",
    "palette",
    "seed",
    "output",
    "format",
];

fn real(field: &str, s: &str) -> Result<f64, ConfigError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| ConfigError::invalid(field, format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(ConfigError::invalid(field, "must be finite"));
    }
    Ok(v)
}

fn reals<const N: usize>(field: &str, s: &str) -> Result<[f64; N], ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(ConfigError::invalid(
            field,
            format!("expected {N} comma-separated numbers, got `{s}`"),
        ));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = real(field, part)?;
    }
    Ok(out)
}

fn integer<T: std::str::FromStr>(field: &str, s: &str) -> Result<T, ConfigError> {
    s.trim()
        .parse()
        .map_err(|_| ConfigError::invalid(field, format!("`{s}` is not a non-negative integer")))
}

fn named<T: std::str::FromStr<Err = String>>(field: &str, s: &str) -> Result<T, ConfigError> {
    s.trim().parse().map_err(|m| ConfigError::invalid(field, m))
}

fn orientation(s: &str) -> Result<GridOrientation, ConfigError> {
    match s.trim() {
        "horizontal" => Ok(GridOrientation::Horizontal),
        "vertical" => Ok(GridOrientation::Vertical),
        other => Err(ConfigError::invalid(
            "grid_orientation",
            format!("expected horizontal or vertical, got `{other}`"),
        )),
    }
}

fn orientation_name(o: GridOrientation) -> &'static str {
    match o {
        GridOrientation::Horizontal => "horizontal",
        GridOrientation::Vertical => "vertical",
    }
}

fn join_reals(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl RenderSettings {
    /// Parse the key-value text form.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut out = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().replace('-', "_");
            if !seen.insert(key.clone()) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            out.set(&key, value.trim())?;
        }
        Ok(out)
    }

    /// Set one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "function" => {
                if value.trim().is_empty() {
                    return Err(ConfigError::invalid("function", "must not be empty"));
                }
                self.function = Some(value.trim().to_string());
            }
            "preset" => self.preset = Some(value.trim().to_string()),
            "theta_terms" => {
                let terms = value
                    .split(',')
                    .map(|t| integer::<u64>("theta_terms", t))
                    .collect::<Result<Vec<_>, _>>()?;
                self.theta_terms = Some(terms);
            }
            "anchor" => {
                let [re, im] = reals::<2>("anchor", value)?;
                self.anchor = Some((re, im));
            }
            "method" => self.method = Some(named("method", value)?),
            "branches" => self.branches = Some(integer("branches", value)?),
            "hole_radius" => self.hole_radius = Some(real("hole_radius", value)?),
            "ring_width" => self.ring_width = Some(real("ring_width", value)?),
            "grid_orientation" => self.grid_orientation = Some(orientation(value)?),
            "grid_spacing" => self.grid_spacing = Some(real("grid_spacing", value)?),
            "viewport" => self.viewport = Some(reals::<4>("viewport", value)?),
            "size" => {
                let (w, h) = value
                    .trim()
                    .split_once(['x', 'X'])
                    .ok_or_else(|| ConfigError::invalid("size", format!("expected WxH, got `{value}`")))?;
                self.size = Some((integer("size", w)?, integer("size", h)?));
            }
            "iters" => self.iters = Some(integer("iters", value)?),
            "escape_radius" => self.escape_radius = Some(real("escape_radius", value)?),
            "epsilon" => self.epsilon = Some(real("epsilon", value)?),
            "palette" => self.palette = Some(named("palette", value)?),
            "seed" => self.seed = Some(integer("seed", value)?),
            "output" => self.output = Some(named("output", value)?),
            "format" => self.format = Some(named("format", value)?),
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Overwrite every key that `overrides` sets.
    pub fn merge(&mut self, overrides: &RenderSettings) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if overrides.$f.is_some() {
                    self.$f = overrides.$f.clone();
                }
            )*};
        }
        take!(
            function, preset, theta_terms, anchor, method, branches, hole_radius, ring_width,
            grid_orientation, grid_spacing, viewport, size, iters, escape_radius, epsilon,
            palette, seed, output, format
        );
        // an explicit function replaces a preset from a lower layer and vice versa
        if overrides.function.is_some() && overrides.preset.is_none() {
            self.preset = None;
        }
        if overrides.preset.is_some() && overrides.function.is_none() {
            self.function = None;
        }
    }

    /// Text form; only keys that are set are written.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        if let Some(v) = &self.function {
            put("function", v.clone());
        }
        if let Some(v) = &self.preset {
            put("preset", v.clone());
        }
        if let Some(v) = &self.theta_terms {
            put(
                "theta_terms",
                v.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
            );
        }
        if let Some((re, im)) = self.anchor {
            put("anchor", join_reals(&[re, im]));
        }
        if let Some(v) = self.method {
            put("method", v.name().into());
        }
        if let Some(v) = self.branches {
            put("branches", v.to_string());
        }
        if let Some(v) = self.hole_radius {
            put("hole_radius", v.to_string());
        }
        if let Some(v) = self.ring_width {
            put("ring_width", v.to_string());
        }
        if let Some(v) = self.grid_orientation {
            put("grid_orientation", orientation_name(v).into());
        }
        if let Some(v) = self.grid_spacing {
            put("grid_spacing", v.to_string());
        }
        if let Some(v) = self.viewport {
            put("viewport", join_reals(&v));
        }
        if let Some((w, h)) = self.size {
            put("size", format!("{w}x{h}"));
        }
        if let Some(v) = self.iters {
            put("iters", v.to_string());
        }
        if let Some(v) = self.escape_radius {
            put("escape_radius", v.to_string());
        }
        if let Some(v) = self.epsilon {
            put("epsilon", v.to_string());
        }
        if let Some(v) = self.palette {
            put("palette", v.name().into());
        }
        if let Some(v) = self.seed {
            put("seed", v.to_string());
        }
        if let Some(v) = self.output {
            put("output", v.name().into());
        }
        if let Some(v) = self.format {
            put("format", v.name().into());
        }
        s
    }

    fn preset(&self) -> Result<Option<GermPreset>, ConfigError> {
        let Some(name) = &self.preset else {
            if self.theta_terms.is_some() {
                return Err(ConfigError::invalid(
                    "theta_terms",
                    "only applies to a θ-parametrised preset",
                ));
            }
            return Ok(None);
        };
        let preset = find_preset(name)
            .ok_or_else(|| ConfigError::invalid("preset", format!("no builtin preset `{name}`")))?;
        match &self.theta_terms {
            None => Ok(Some(preset)),
            Some(terms) => preset
                .with_theta_terms(terms)
                .map(Some)
                .map_err(|e| ConfigError::invalid("theta_terms", e.to_string())),
        }
    }

    /// Validate and build the render configuration.
    pub fn resolve(&self) -> Result<RenderConfig, ConfigError> {
        if self.function.is_some() && self.preset.is_some() {
            return Err(ConfigError::invalid(
                "function",
                "`function` and `preset` are mutually exclusive",
            ));
        }
        let preset = self.preset()?;
        let defaults = preset.as_ref().map(|p| &p.defaults);

        let function = match (&self.function, &preset) {
            (Some(src), _) => MapExpr::parse(src).map_err(ConfigError::Function)?,
            (None, Some(p)) => p.expr.clone(),
            (None, None) => MapExpr::identity(),
        };
        let anchor = match (self.anchor, &preset) {
            (Some((re, im)), _) => Complex::new(re, im),
            (None, Some(p)) => p.fixed_point,
            (None, None) => Complex::new(0.0, 0.0),
        };
        let method_kind = self
            .method
            .or(defaults.map(|d| d.method))
            .unwrap_or(MethodKind::EquipotentialStar);

        let [left, right, top, bottom] = self
            .viewport
            .or(defaults.map(|d| d.viewport))
            .unwrap_or(DEFAULT_VIEWPORT);
        let (width, height) = self.size.unwrap_or(DEFAULT_SIZE);
        if width == 0 || height == 0 {
            return Err(ConfigError::invalid("size", "width and height must be >= 1"));
        }
        let viewport = Viewport::new(left, right, top, bottom, width, height)
            .map_err(|e| ConfigError::invalid("viewport", e.to_string()))?;

        let budget = IterationBudget::new(
            self.iters
                .or(defaults.map(|d| d.iters))
                .unwrap_or(DEFAULT_MAX_ITERS),
            self.escape_radius.unwrap_or(DEFAULT_ESCAPE_RADIUS),
            self.epsilon.unwrap_or(DEFAULT_EPSILON),
        )
        .map_err(|e| ConfigError::invalid(e.field(), e.to_string()))?;

        let model_err = |e: crate::equipotential::ModelError| ConfigError::invalid(e.field(), e.to_string());
        // every model is built so that any parameter given is validated
        let star = StarModel::new(
            self.branches
                .or(defaults.map(|d| d.branches))
                .unwrap_or(DEFAULT_BRANCHES),
            self.hole_radius
                .or(defaults.map(|d| d.hole_radius))
                .unwrap_or(DEFAULT_HOLE_RADIUS),
            anchor,
        )
        .map_err(model_err)?;
        let circles = CirclesModel::new(self.ring_width.unwrap_or(DEFAULT_RING_WIDTH), anchor)
            .map_err(model_err)?;
        let grid = GridModel::new(
            self.grid_orientation.unwrap_or(GridOrientation::Horizontal),
            self.grid_spacing.unwrap_or(DEFAULT_GRID_SPACING),
        )
        .map_err(model_err)?;

        let method = match method_kind {
            MethodKind::EquipotentialStar => Method::Equipotential(EquipotentialModel::Star(star)),
            MethodKind::EquipotentialCircles => {
                Method::Equipotential(EquipotentialModel::Circles(circles))
            }
            MethodKind::EquipotentialGrid => Method::Equipotential(EquipotentialModel::Grid(grid)),
            MethodKind::EscapeTime => Method::EscapeTime,
            MethodKind::Approximation => Method::Approximation,
        };

        Ok(RenderConfig {
            function,
            anchor,
            viewport,
            budget,
            method,
            palette: PaletteSpec {
                mode: self.palette.unwrap_or_default(),
                seed: self.seed.unwrap_or(0),
            },
            output: self.output.unwrap_or_default(),
        })
    }
}
