//! Per-pixel render pipeline: map each pixel centre to the plane, run the
//! orbit engine, classify the result, then derive contours and colours.

mod contour;
mod encode;
mod palette;
pub mod settings;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{iterate_approx, iterate_escape, iterate_fixed, IterationBudget, Termination};
use crate::equipotential::{EquipotentialModel, Level};
use crate::funcexpr::MapExpr;
use crate::numerics::Complex;

pub use contour::{extract_contours, ContourSet};
pub use encode::{decode_ppm, encode_image, write_image, EncodeError, ImageFormat};
pub use palette::{colorize, indexed_color, PaletteMode, PaletteSpec, RgbImage};
pub use settings::{ConfigError, Limits, LimitError, RenderSettings};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RasterError {
    #[error("pixel ({x}, {y}) lies outside the {width}x{height} raster")]
    PixelOutOfRange { x: u32, y: u32, width: u32, height: u32 },
    #[error("viewport needs left < right and bottom < top with finite bounds")]
    BadBounds,
    #[error("raster size must be at least 1x1")]
    EmptyRaster,
}

/// A rectangle of the plane sampled on a `width × height` pixel grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
    width: u32,
    height: u32,
}

impl Viewport {
    pub fn new(
        left: f64,
        right: f64,
        top: f64,
        bottom: f64,
        width: u32,
        height: u32,
    ) -> Result<Self, RasterError> {
        let finite = [left, right, top, bottom].iter().all(|v| v.is_finite());
        if !finite || left >= right || bottom >= top {
            return Err(RasterError::BadBounds);
        }
        if width == 0 || height == 0 {
            return Err(RasterError::EmptyRaster);
        }
        Ok(Self {
            left,
            right,
            top,
            bottom,
            width,
            height,
        })
    }

    /// `[left, right, top, bottom]`
    pub fn bounds(&self) -> [f64; 4] {
        [self.left, self.right, self.top, self.bottom]
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Centre of pixel `(x, y)`; `y` grows downwards from `top`.
    pub fn pixel_to_plane(&self, x: u32, y: u32) -> Result<Complex, RasterError> {
        if x >= self.width || y >= self.height {
            return Err(RasterError::PixelOutOfRange {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        Ok(self.center(x, y))
    }

    #[inline]
    pub(crate) fn center(&self, x: u32, y: u32) -> Complex {
        let re = self.left + (f64::from(x) + 0.5) * (self.right - self.left) / f64::from(self.width);
        let im = self.top - (f64::from(y) + 0.5) * (self.top - self.bottom) / f64::from(self.height);
        Complex::new(re, im)
    }

    /// Normalised position of a plane point in the frame, `(0,0)` at the
    /// top-left corner and `(1,1)` at the bottom-right. Not clamped.
    pub fn normalize(&self, z: Complex) -> (f64, f64) {
        (
            (z.re - self.left) / (self.right - self.left),
            (self.top - z.im) / (self.top - self.bottom),
        )
    }
}

pub fn pixel_to_plane(viewport: &Viewport, x: u32, y: u32) -> Result<Complex, RasterError> {
    viewport.pixel_to_plane(x, y)
}

/// Render method names as they appear in config text and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    EquipotentialStar,
    EquipotentialCircles,
    EquipotentialGrid,
    EscapeTime,
    Approximation,
}

impl MethodKind {
    pub const ALL: [MethodKind; 5] = [
        MethodKind::EquipotentialStar,
        MethodKind::EquipotentialCircles,
        MethodKind::EquipotentialGrid,
        MethodKind::EscapeTime,
        MethodKind::Approximation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::EquipotentialStar => "equipotential-star",
            MethodKind::EquipotentialCircles => "equipotential-circles",
            MethodKind::EquipotentialGrid => "equipotential-grid",
            MethodKind::EscapeTime => "escape-time",
            MethodKind::Approximation => "approximation",
        }
    }

    pub fn is_equipotential(self) -> bool {
        matches!(
            self,
            MethodKind::EquipotentialStar
                | MethodKind::EquipotentialCircles
                | MethodKind::EquipotentialGrid
        )
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown method `{s}` (expected one of {})",
                    Self::ALL.map(|m| m.name()).join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Iterate a fixed number of times, then classify the image.
    Equipotential(EquipotentialModel),
    EscapeTime,
    Approximation,
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Equipotential(EquipotentialModel::Star(_)) => MethodKind::EquipotentialStar,
            Method::Equipotential(EquipotentialModel::Circles(_)) => {
                MethodKind::EquipotentialCircles
            }
            Method::Equipotential(EquipotentialModel::Grid(_)) => MethodKind::EquipotentialGrid,
            Method::EscapeTime => MethodKind::EscapeTime,
            Method::Approximation => MethodKind::Approximation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputMode {
    /// Paint only the pixels where the level changes.
    #[default]
    Contour,
    /// Paint every pixel.
    Filled,
}

impl OutputMode {
    pub fn name(self) -> &'static str {
        match self {
            OutputMode::Contour => "contour",
            OutputMode::Filled => "filled",
        }
    }
}

impl FromStr for OutputMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "contour" => Ok(OutputMode::Contour),
            "filled" => Ok(OutputMode::Filled),
            _ => Err(format!("unknown output `{s}` (expected contour or filled)")),
        }
    }
}

/// Everything needed to produce an image.
#[derive(Debug, Clone)]
pub struct RenderConfig {
    pub function: MapExpr,
    pub anchor: Complex,
    pub viewport: Viewport,
    pub budget: IterationBudget,
    pub method: Method,
    pub palette: PaletteSpec,
    pub output: OutputMode,
}

/// How a cell of the index field was classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    /// An ordinary level (branch index, ring, grid line, or step count).
    Level,
    /// The orbit landed inside the star's hole.
    Hole,
    /// The orbit poisoned (pole or overflow) and counts as escaped.
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    /// Level value; -1 for `Hole` and `Outside`.
    pub level: i64,
    pub kind: CellKind,
    pub termination: Termination,
    pub steps: u32,
    pub final_z: Complex,
}

impl Cell {
    pub fn is_level(&self) -> bool {
        self.kind == CellKind::Level
    }

    /// Value compared when looking for level changes.
    #[inline]
    pub(crate) fn key(&self) -> (CellKind, i64) {
        match self.kind {
            CellKind::Level => (CellKind::Level, self.level),
            other => (other, -1),
        }
    }
}

/// Per-pixel classification of a whole raster, row-major from the top.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexField {
    viewport: Viewport,
    max_iters: u32,
    cells: Vec<Cell>,
}

impl IndexField {
    pub fn from_cells(viewport: Viewport, max_iters: u32, cells: Vec<Cell>) -> Self {
        assert_eq!(cells.len(), viewport.pixel_count(), "field size mismatch");
        Self {
            viewport,
            max_iters,
            cells,
        }
    }

    pub fn viewport(&self) -> &Viewport {
        &self.viewport
    }

    pub fn width(&self) -> u32 {
        self.viewport.width
    }

    pub fn height(&self) -> u32 {
        self.viewport.height
    }

    pub fn max_iters(&self) -> u32 {
        self.max_iters
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, x: u32, y: u32) -> &Cell {
        &self.cells[y as usize * self.viewport.width as usize + x as usize]
    }

    /// Levels in row-major order, -1 for hole and outside cells.
    pub fn levels(&self) -> Vec<i64> {
        self.cells.iter().map(|c| c.level).collect()
    }
}

fn render_cell(config: &RenderConfig, seed: Complex) -> Cell {
    let f = &config.function;
    match &config.method {
        Method::Equipotential(model) => {
            let out = iterate_fixed(f, seed, config.budget.max_iters());
            let (kind, level) = match out.termination {
                Termination::Poisoned => (CellKind::Outside, -1),
                _ => match model.classify(out.final_z) {
                    Level::Hole => (CellKind::Hole, -1),
                    Level::Index(j) => (CellKind::Level, j),
                },
            };
            Cell {
                level,
                kind,
                termination: out.termination,
                steps: out.steps_taken,
                final_z: out.final_z,
            }
        }
        Method::EscapeTime | Method::Approximation => {
            let out = if config.method == Method::EscapeTime {
                iterate_escape(f, seed, &config.budget)
            } else {
                iterate_approx(f, seed, &config.budget)
            };
            let (kind, level) = match out.termination {
                Termination::Poisoned => (CellKind::Outside, -1),
                _ => (CellKind::Level, i64::from(out.steps_taken)),
            };
            Cell {
                level,
                kind,
                termination: out.termination,
                steps: out.steps_taken,
                final_z: out.final_z,
            }
        }
    }
}

/// Render the index field, rows in parallel. The result does not depend
/// on the number of worker threads.
pub fn render_field(config: &RenderConfig) -> IndexField {
    let vp = config.viewport;
    let mut cells = vec![
        Cell {
            level: 0,
            kind: CellKind::Level,
            termination: Termination::BudgetExhausted,
            steps: 0,
            final_z: Complex::new(0.0, 0.0),
        };
        vp.pixel_count()
    ];
    cells
        .par_chunks_mut(vp.width as usize)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, cell) in row.iter_mut().enumerate() {
                *cell = render_cell(config, vp.center(x as u32, y as u32));
            }
        });
    IndexField::from_cells(vp, config.budget.max_iters(), cells)
}

/// Render, extract contours if requested, and colour.
pub fn render_image(config: &RenderConfig) -> RgbImage {
    let field = render_field(config);
    match config.output {
        OutputMode::Contour => {
            let contours = extract_contours(&field);
            colorize(&field, &config.palette, Some(&contours))
        }
        OutputMode::Filled => colorize(&field, &config.palette, None),
    }
}
