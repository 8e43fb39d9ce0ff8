use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{extract_contours, Cell, CellKind, ContourSet, IndexField};

const WHITE: [u8; 3] = [255, 255, 255];
const BLACK: [u8; 3] = [0, 0, 0];
const RANDOM_PALETTE_LEN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PaletteMode {
    /// Black contours on white.
    #[default]
    MonoContour,
    /// One colour per level.
    Indexed,
    /// The indexed palette shuffled by a seed.
    Random,
    /// Colour from where the orbit ended, via an affine map into the RGB cube.
    RgbCube,
    /// Monotone ramp over the number of steps taken.
    OrderedShades,
}

impl PaletteMode {
    pub const ALL: [PaletteMode; 5] = [
        PaletteMode::MonoContour,
        PaletteMode::Indexed,
        PaletteMode::Random,
        PaletteMode::RgbCube,
        PaletteMode::OrderedShades,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PaletteMode::MonoContour => "mono-contour",
            PaletteMode::Indexed => "indexed",
            PaletteMode::Random => "random",
            PaletteMode::RgbCube => "rgb-cube",
            PaletteMode::OrderedShades => "ordered-shades",
        }
    }
}

impl fmt::Display for PaletteMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PaletteMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            format!(
                "unknown palette `{s}` (expected one of {})",
                Self::ALL.map(|m| m.name()).join(", ")
            )
        })
    }
}

/// Palette choice. `seed` only matters for [`PaletteMode::Random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PaletteSpec {
    pub mode: PaletteMode,
    pub seed: u64,
}

/// 8-bit RGB pixels, row-major from the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(
            data.len(),
            width as usize * height as usize * 3,
            "buffer size does not match {width}x{height}"
        );
        Self {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let data = rgb
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * 3)
            .collect();
        Self::new(width, height, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

fn hsv(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match sector as u32 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (c * 255.0).round() as u8)
}

/// Colour of level `j` in the indexed palette. Hues step by the golden
/// ratio so neighbouring levels stay distinguishable.
pub fn indexed_color(j: i64) -> [u8; 3] {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    let hue = (j as f64 * GOLDEN).rem_euclid(1.0);
    let value = if j.rem_euclid(2) == 0 { 0.92 } else { 0.72 };
    hsv(hue, 0.8, value)
}

struct Painter<'a> {
    mode: PaletteMode,
    shuffled: Vec<[u8; 3]>,
    field: &'a IndexField,
}

impl<'a> Painter<'a> {
    fn new(field: &'a IndexField, palette: &PaletteSpec) -> Self {
        let shuffled = if palette.mode == PaletteMode::Random {
            let mut table: Vec<[u8; 3]> =
                (0..RANDOM_PALETTE_LEN as i64).map(indexed_color).collect();
            table.shuffle(&mut ChaCha8Rng::seed_from_u64(palette.seed));
            table
        } else {
            Vec::new()
        };
        Self {
            mode: palette.mode,
            shuffled,
            field,
        }
    }

    fn color(&self, cell: &Cell) -> [u8; 3] {
        if cell.kind != CellKind::Level {
            return WHITE;
        }
        match self.mode {
            PaletteMode::MonoContour => BLACK,
            PaletteMode::Indexed => indexed_color(cell.level),
            PaletteMode::Random => {
                self.shuffled[cell.level.rem_euclid(RANDOM_PALETTE_LEN as i64) as usize]
            }
            PaletteMode::RgbCube => {
                let (u, v) = self.field.viewport().normalize(cell.final_z);
                let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
                [u, v, 1.0 - 0.5 * (u + v)].map(|c| (c * 255.0).round() as u8)
            }
            PaletteMode::OrderedShades => {
                let t = f64::from(cell.steps) / f64::from(self.field.max_iters().max(1));
                let t = t.clamp(0.0, 1.0);
                [40.0 + 215.0 * t, 20.0 + 235.0 * t, 90.0 + 165.0 * t]
                    .map(|c| c.round() as u8)
            }
        }
    }
}

/// Colour a field. With a contour set, only contour pixels are painted
/// and the rest stay white; without one, every pixel is painted, except
/// in `MonoContour` mode which always draws contours. Hole and outside
/// cells are white in every mode.
pub fn colorize(field: &IndexField, palette: &PaletteSpec, contours: Option<&ContourSet>) -> RgbImage {
    let computed;
    let contours = match (contours, palette.mode) {
        (Some(c), _) => Some(c),
        (None, PaletteMode::MonoContour) => {
            computed = extract_contours(field);
            Some(&computed)
        }
        (None, _) => None,
    };
    if let Some(c) = contours {
        assert_eq!(
            (c.width(), c.height()),
            (field.width(), field.height()),
            "contour set does not match field"
        );
    }
    let painter = Painter::new(field, palette);
    let mut data = Vec::with_capacity(field.cells().len() * 3);
    for (i, cell) in field.cells().iter().enumerate() {
        let rgb = match contours {
            Some(c) if !c.mask()[i] => WHITE,
            _ => painter.color(cell),
        };
        data.extend_from_slice(&rgb);
    }
    RgbImage::new(field.width(), field.height(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Termination;
    use crate::numerics::Complex;
    use crate::raster::Viewport;

    fn level(v: i64) -> Cell {
        Cell {
            level: v,
            kind: CellKind::Level,
            termination: Termination::BudgetExhausted,
            steps: 10,
            final_z: Complex::new(0.0, 0.0),
        }
    }

    fn row(levels: &[i64]) -> IndexField {
        let vp = Viewport::new(-1.0, 1.0, 1.0, -1.0, levels.len() as u32, 1).unwrap();
        IndexField::from_cells(vp, 20, levels.iter().map(|&v| level(v)).collect())
    }

    #[test]
    fn uniform_mono_is_white() {
        let img = colorize(&row(&[4; 6]), &PaletteSpec::default(), None);
        assert!(img.data().iter().all(|&b| b == 255));
    }

    #[test]
    fn mono_chain_paints_trespass_black() {
        let img = colorize(&row(&[1, 1, 2]), &PaletteSpec::default(), None);
        assert_eq!(img.data(), &[255, 255, 255, 255, 255, 255, 0, 0, 0]);
    }

    #[test]
    fn random_palette_is_seeded() {
        let f = row(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let spec = |seed| PaletteSpec {
            mode: PaletteMode::Random,
            seed,
        };
        let a = colorize(&f, &spec(7), None);
        assert_eq!(a, colorize(&f, &spec(7), None));
        assert_ne!(a, colorize(&f, &spec(8), None));
    }

    #[test]
    fn holes_are_white_in_every_mode() {
        let vp = Viewport::new(-1.0, 1.0, 1.0, -1.0, 2, 1).unwrap();
        let hole = Cell {
            kind: CellKind::Hole,
            level: -1,
            ..level(0)
        };
        let outside = Cell {
            kind: CellKind::Outside,
            level: -1,
            ..level(0)
        };
        let f = IndexField::from_cells(vp, 20, vec![hole, outside]);
        for mode in PaletteMode::ALL {
            let img = colorize(&f, &PaletteSpec { mode, seed: 1 }, None);
            assert!(img.data().iter().all(|&b| b == 255), "{mode}");
        }
    }

    #[test]
    fn indexed_colors_differ_across_levels() {
        let colors: Vec<_> = (0..64).map(indexed_color).collect();
        for i in 0..colors.len() {
            for j in 0..i {
                assert_ne!(colors[i], colors[j], "levels {i} and {j}");
            }
        }
        assert_ne!(indexed_color(-1), indexed_color(0));
    }

    #[test]
    fn filled_indexed_uses_level_colour() {
        let img = colorize(
            &row(&[3, 5]),
            &PaletteSpec {
                mode: PaletteMode::Indexed,
                seed: 0,
            },
            None,
        );
        assert_eq!(img.pixel(0, 0), indexed_color(3));
        assert_eq!(img.pixel(1, 0), indexed_color(5));
    }

    #[test]
    fn contour_output_keeps_background_white() {
        let f = row(&[3, 3, 5]);
        let contours = extract_contours(&f);
        let img = colorize(
            &f,
            &PaletteSpec {
                mode: PaletteMode::Indexed,
                seed: 0,
            },
            Some(&contours),
        );
        assert_eq!(img.pixel(0, 0), WHITE);
        assert_eq!(img.pixel(2, 0), indexed_color(5));
    }

    #[test]
    fn shades_are_monotone_in_steps() {
        let vp = Viewport::new(-1.0, 1.0, 1.0, -1.0, 21, 1).unwrap();
        let cells = (0..=20)
            .map(|s| Cell {
                steps: s,
                ..level(0)
            })
            .collect();
        let f = IndexField::from_cells(vp, 20, cells);
        let img = colorize(
            &f,
            &PaletteSpec {
                mode: PaletteMode::OrderedShades,
                seed: 0,
            },
            None,
        );
        for x in 1..21 {
            let (a, b) = (img.pixel(x - 1, 0), img.pixel(x, 0));
            assert!((0..3).all(|k| b[k] >= a[k]));
        }
    }

    #[test]
    fn rgb_cube_tracks_position() {
        let vp = Viewport::new(0.0, 1.0, 1.0, 0.0, 2, 1).unwrap();
        let at = |re, im| Cell {
            final_z: Complex::new(re, im),
            ..level(0)
        };
        let f = IndexField::from_cells(vp, 20, vec![at(0.0, 1.0), at(1.0, 0.0)]);
        let img = colorize(
            &f,
            &PaletteSpec {
                mode: PaletteMode::RgbCube,
                seed: 0,
            },
            None,
        );
        assert_eq!(img.pixel(0, 0), [0, 0, 255]);
        assert_eq!(img.pixel(1, 0), [255, 255, 0]);
    }
}
