//! Rasterized planar domains and the geometric quantities the bounds consume.
//!
//! A [`DomainGrid`] is a boolean mask over a uniform lattice of spacing `h`.
//! Cell `(row, col)` has its centre at `origin + (col * h, row * h)`, so rows
//! run along `y` and columns along `x`. Rasterized grids always carry at least
//! one ring of exterior cells around the shape, which is what lets
//! [`domain_metrics`] decide whether a complement component is bounded.

pub(crate) mod components;
mod distance;
pub(crate) mod metrics;
mod pgm;
mod shape;

pub use components::{connected_components, label_components, ComponentSet, Connectivity};
pub use distance::squared_distance_to_background;
pub use metrics::{domain_metrics, inradius, region_metrics, DomainMetrics, RegionMeasurement, Selection};
pub use pgm::{write_pgm, PgmFormat};
pub use shape::{Hole, Shape};

use crate::error::{Error, Result};

/// Row-major boolean raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl Mask {
    pub fn new(rows: usize, cols: usize, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "mask of {rows}x{cols} needs {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        Ok(Mask { rows, cols, cells })
    }

    pub fn filled(rows: usize, cols: usize, value: bool) -> Self {
        Mask { rows, cols, cells: vec![value; rows * cols] }
    }

    /// Build from rows of `'#'` (true) and `'.'` (false); handy in tests.
    pub fn from_art(art: &str) -> Self {
        let lines: Vec<&str> = art.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let rows = lines.len();
        let cols = lines.first().map_or(0, |l| l.len());
        let cells = lines
            .iter()
            .flat_map(|l| {
                assert_eq!(l.len(), cols, "ragged mask art");
                l.chars().map(|c| c == '#')
            })
            .collect();
        Mask { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cells[row * self.cols + col] = value;
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Rasterized planar domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    mask: Mask,
    h: f64,
    origin: (f64, f64),
}

impl DomainGrid {
    pub fn new(mask: Mask, h: f64, origin: (f64, f64)) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("cell size must be positive, got {h}")));
        }
        if mask.count() == 0 {
            return Err(Error::EmptyRasterization { h });
        }
        Ok(DomainGrid { mask, h, origin })
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn rows(&self) -> usize {
        self.mask.rows
    }

    pub fn cols(&self) -> usize {
        self.mask.cols
    }

    pub fn interior_count(&self) -> usize {
        self.mask.count()
    }

    pub fn area(&self) -> f64 {
        self.h * self.h * self.interior_count() as f64
    }

    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (self.origin.0 + col as f64 * self.h, self.origin.1 + row as f64 * self.h)
    }

    /// Flat indices (`row * cols + col`) of interior cells in row-major order.
    /// This is the unknown ordering used by the spectral module.
    pub fn interior_cells(&self) -> Vec<usize> {
        self.mask
            .cells
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| c.then_some(i))
            .collect()
    }
}

/// Sample `shape` on a lattice of spacing `h`.
///
/// Lattice nodes are aligned with the lower-left corner of the shape's bounding
/// box, so straight boundaries of rectangles fall exactly on exterior nodes.
/// One extra ring of nodes is added on every side.
pub fn rasterize_domain(shape: &Shape, h: f64) -> Result<DomainGrid> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("cell size must be positive, got {h}")));
    }
    shape.validate()?;
    let (x0, y0, x1, y1) = shape.bounding_box();
    let nx = ((x1 - x0) / h - 1e-9).ceil().max(0.0) as usize;
    let ny = ((y1 - y0) / h - 1e-9).ceil().max(0.0) as usize;
    // nodes x0 + i*h for i in -1..=nx+1
    let cols = nx + 3;
    let rows = ny + 3;
    let mut cells = vec![false; rows * cols];
    for r in 0..rows {
        let y = y0 + (r as f64 - 1.0) * h;
        for c in 0..cols {
            let x = x0 + (c as f64 - 1.0) * h;
            cells[r * cols + c] = shape.contains(x, y);
        }
    }
    let mask = Mask { rows, cols, cells };
    if mask.count() == 0 {
        return Err(Error::EmptyRasterization { h });
    }
    DomainGrid::new(mask, h, (x0 - h, y0 - h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_area() {
        let h = 1.0 / 100.0;
        let g = rasterize_domain(&Shape::square(), h).unwrap();
        assert!((g.area() - 1.0).abs() <= 2.0 * h, "area {}", g.area());
        // boundary nodes are excluded, interior is 99 x 99
        assert_eq!(g.interior_count(), 99 * 99);
    }

    #[test]
    fn disc_and_annulus_area() {
        let h = 1.0 / 200.0;
        let disc = rasterize_domain(&Shape::Disc { radius: 1.0 }, h).unwrap();
        assert!((disc.area() - PI).abs() <= 0.05);
        let ann = rasterize_domain(&Shape::Annulus { inner: 0.5, outer: 1.0 }, h).unwrap();
        assert!((ann.area() - 0.75 * PI).abs() <= 0.05);
    }

    #[test]
    fn frame_is_exterior() {
        for shape in [Shape::square(), Shape::Disc { radius: 1.0 }, "polygon:0,0;2,0;0,1".parse().unwrap()] {
            let g = rasterize_domain(&shape, 0.05).unwrap();
            let m = g.mask();
            for c in 0..m.cols() {
                assert!(!m.get(0, c) && !m.get(m.rows() - 1, c));
            }
            for r in 0..m.rows() {
                assert!(!m.get(r, 0) && !m.get(r, m.cols() - 1));
            }
        }
    }

    #[test]
    fn coarse_grid_is_an_error() {
        let err = rasterize_domain(&Shape::Disc { radius: 0.1 }, 1.0).unwrap_err();
        assert!(matches!(err, Error::EmptyRasterization { .. }));
        assert!(rasterize_domain(&Shape::square(), 0.0).is_err());
    }

    #[test]
    fn area_converges_with_refinement() {
        let shapes: Vec<Shape> = vec![
            Shape::square(),
            Shape::Rectangle { width: 2.0, height: 1.0 },
            Shape::Disc { radius: 1.0 },
            Shape::Annulus { inner: 0.5, outer: 1.0 },
            "disc-holes:1;0.4,0,0.2;-0.4,0.1,0.15".parse().unwrap(),
            "polygon:0,0;1,0;0.3,0.8".parse().unwrap(),
        ];
        for shape in &shapes {
            for h in [1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0] {
                let g = rasterize_domain(shape, h).unwrap();
                let err = (g.area() - shape.area()).abs();
                assert!(err <= h * shape.perimeter(), "{shape}: h={h} err={err}");
            }
        }
    }

    #[test]
    fn cell_centers_follow_origin() {
        let g = rasterize_domain(&Shape::square(), 0.25).unwrap();
        assert_eq!(g.cell_center(1, 1), (0.0, 0.0));
        assert_eq!(g.cell_center(3, 2), (0.25, 0.5));
        assert_eq!(g.interior_count(), 9);
    }
}
