//! Trespass detection: a pixel is painted when its level differs from the
//! level of the pixel to its left or the pixel above it, i.e. it is the
//! first pixel of a run along its row or its column.

use rayon::prelude::*;

use super::IndexField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourSet {
    width: u32,
    height: u32,
    mask: Vec<bool>,
}

impl ContourSet {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.mask[y as usize * self.width as usize + x as usize]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    /// Contour pixel coordinates in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }
}

pub fn extract_contours(field: &IndexField) -> ContourSet {
    let width = field.width() as usize;
    let cells = field.cells();
    let mut mask = vec![false; cells.len()];
    mask.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| {
            for (x, out) in row.iter_mut().enumerate() {
                let here = &cells[y * width + x];
                // hole and outside pixels never mark themselves
                if !here.is_level() {
                    continue;
                }
                let key = here.key();
                let left = x > 0 && cells[y * width + x - 1].key() != key;
                let up = y > 0 && cells[(y - 1) * width + x].key() != key;
                *out = left || up;
            }
        });
    ContourSet {
        width: field.width(),
        height: field.height(),
        mask,
    }
}
