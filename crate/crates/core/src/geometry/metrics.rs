use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::components::{label_components, ComponentSet, Connectivity};
use super::distance::squared_distance_to_background;
use super::{DomainGrid, Mask};
use crate::error::{Error, Result};

/// Geometric summary of a planar region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainMetrics {
    /// Area (length²).
    pub area: f64,
    /// Inradius.
    pub r_i: f64,
    /// Radius of the disc with the same area.
    pub r_0: f64,
    /// Smallest area of a bounded component of the complement, `+inf` when
    /// the region has no holes.
    #[serde(with = "infinite_as_null")]
    pub gamma: f64,
}

impl DomainMetrics {
    /// Metrics from raw numbers; `r_0` is derived from the area.
    pub fn new(area: f64, r_i: f64, gamma: f64) -> Self {
        DomainMetrics { area, r_i, r_0: (area / PI).sqrt(), gamma }
    }

    pub fn is_simply_connected(&self) -> bool {
        self.gamma.is_infinite()
    }
}

/// JSON has no infinity; encode the "no hole" sentinel as `null`.
mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            s.serialize_f64(*value)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Metrics plus the cell realising the inradius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMeasurement {
    pub metrics: DomainMetrics,
    /// `(row, col)` of the deepest cell, in the coordinates of the input mask.
    pub incenter: (usize, usize),
}

/// Which part of a grid to measure.
#[derive(Debug, Clone, Copy)]
pub enum Selection<'a> {
    Whole,
    Component { set: &'a ComponentSet, id: u32 },
}

/// Measure the `true` cells of `mask`, taken as one region with cell side `h`.
///
/// Work is confined to the bounding box of the region plus one exterior ring,
/// which changes neither the distance transform (the ring is nearer than any
/// cell beyond it) nor which complement components are enclosed.
pub fn region_metrics(mask: &Mask, h: f64) -> Result<RegionMeasurement> {
    let (rows, cols) = (mask.rows(), mask.cols());
    let mut bbox = (usize::MAX, usize::MAX, 0usize, 0usize);
    let mut count = 0usize;
    for r in 0..rows {
        for c in 0..cols {
            if mask.get(r, c) {
                count += 1;
                bbox.0 = bbox.0.min(r);
                bbox.1 = bbox.1.min(c);
                bbox.2 = bbox.2.max(r);
                bbox.3 = bbox.3.max(c);
            }
        }
    }
    if count == 0 {
        return Err(Error::InvalidParameter("cannot measure an empty region".into()));
    }
    measure_cropped(count, bbox, h, |r, c| mask.get(r, c))
}

/// Shared worker: `inside(row, col)` is queried only inside `bbox`.
pub(crate) fn measure_cropped<F>(
    count: usize,
    bbox: (usize, usize, usize, usize),
    h: f64,
    inside: F,
) -> Result<RegionMeasurement>
where
    F: Fn(usize, usize) -> bool,
{
    let (r0, c0, r1, c1) = bbox;
    let crop_rows = r1 - r0 + 3;
    let crop_cols = c1 - c0 + 3;
    let mut crop = Mask::filled(crop_rows, crop_cols, false);
    for r in r0..=r1 {
        for c in c0..=c1 {
            if inside(r, c) {
                crop.set(r - r0 + 1, c - c0 + 1, true);
            }
        }
    }

    let dist = squared_distance_to_background(&crop);
    let (deepest, d2) = dist
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    let r_i = d2.sqrt() * h - 0.5 * h;
    let incenter = (deepest / crop_cols + r0 - 1, deepest % crop_cols + c0 - 1);

    let complement = Mask::new(crop_rows, crop_cols, crop.cells().iter().map(|&c| !c).collect())?;
    let (labels, sizes) = label_components(&complement, Connectivity::Eight);
    let mut touches_frame = vec![false; sizes.len() + 1];
    for c in 0..crop_cols {
        touches_frame[labels[c] as usize] = true;
        touches_frame[labels[(crop_rows - 1) * crop_cols + c] as usize] = true;
    }
    for r in 0..crop_rows {
        touches_frame[labels[r * crop_cols] as usize] = true;
        touches_frame[labels[r * crop_cols + crop_cols - 1] as usize] = true;
    }
    let gamma = sizes
        .iter()
        .enumerate()
        .filter(|(i, _)| !touches_frame[i + 1])
        .map(|(_, &s)| s as f64 * h * h)
        .fold(f64::INFINITY, f64::min);

    let area = count as f64 * h * h;
    Ok(RegionMeasurement { metrics: DomainMetrics::new(area, r_i, gamma), incenter })
}

/// Inradius of the whole interior of `grid`.
pub fn inradius(grid: &DomainGrid) -> f64 {
    region_metrics(grid.mask(), grid.h()).expect("grids are nonempty").metrics.r_i
}

pub fn domain_metrics(grid: &DomainGrid, selection: Selection<'_>) -> Result<DomainMetrics> {
    match selection {
        Selection::Whole => Ok(region_metrics(grid.mask(), grid.h())?.metrics),
        Selection::Component { set, id } => {
            if set.rows() != grid.rows() || set.cols() != grid.cols() {
                return Err(Error::InvalidParameter("component set does not match grid".into()));
            }
            if id == 0 || id as usize > set.count() {
                return Err(Error::InvalidParameter(format!("no component with id {id}")));
            }
            Ok(region_metrics(&set.component_mask(id), grid.h())?.metrics)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{connected_components, rasterize_domain, Hole, Shape};

    const H: f64 = 1.0 / 128.0;

    #[test]
    fn inradius_of_rectangles_and_disc() {
        let sq = rasterize_domain(&Shape::square(), H).unwrap();
        assert!((inradius(&sq) - 0.5).abs() <= 2.0 * H);
        let rect = rasterize_domain(&Shape::Rectangle { width: 2.0, height: 1.0 }, H).unwrap();
        assert!((inradius(&rect) - 0.5).abs() <= 2.0 * H);
        let disc = rasterize_domain(&Shape::Disc { radius: 0.7 }, H).unwrap();
        assert!((inradius(&disc) - 0.7).abs() <= 2.0 * H);
    }

    #[test]
    fn disc_metrics() {
        let g = rasterize_domain(&Shape::Disc { radius: 1.0 }, 1.0 / 200.0).unwrap();
        let m = domain_metrics(&g, Selection::Whole).unwrap();
        assert!((m.r_i - 1.0).abs() < 0.01);
        assert!((m.r_0 - 1.0).abs() < 0.01);
        assert!(m.gamma.is_infinite());
    }

    #[test]
    fn annulus_metrics() {
        let g = rasterize_domain(&Shape::Annulus { inner: 0.5, outer: 1.0 }, 1.0 / 200.0).unwrap();
        let m = domain_metrics(&g, Selection::Whole).unwrap();
        assert!((m.gamma - 0.25 * PI).abs() < 0.05, "gamma {}", m.gamma);
        assert!((m.r_i - 0.25).abs() < 0.01, "r_i {}", m.r_i);
        assert!((m.r_0 - 0.75f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn smallest_hole_wins() {
        let r_small = (0.02 / PI).sqrt();
        let r_large = (0.05 / PI).sqrt();
        let shape = Shape::DiscWithHoles {
            radius: 1.0,
            holes: vec![Hole { center: [0.4, 0.0], radius: r_small }, Hole { center: [-0.4, 0.1], radius: r_large }],
        };
        let g = rasterize_domain(&shape, 1.0 / 200.0).unwrap();
        let m = domain_metrics(&g, Selection::Whole).unwrap();
        assert!((m.gamma - 0.02).abs() < 0.02 * 0.05, "gamma {}", m.gamma);
    }

    #[test]
    fn simply_connected_shapes_have_no_holes() {
        for shape in [Shape::square(), "polygon:0,0;1,0;1,1;0.5,0.3;0,1".parse().unwrap()] {
            let g = rasterize_domain(&shape, 1.0 / 64.0).unwrap();
            assert!(domain_metrics(&g, Selection::Whole).unwrap().gamma.is_infinite());
        }
    }

    #[test]
    fn inradius_below_equal_area_radius() {
        for h in [1.0 / 64.0, 1.0 / 128.0] {
            for shape in [
                Shape::square(),
                Shape::Rectangle { width: 3.0, height: 1.0 },
                Shape::Annulus { inner: 0.3, outer: 1.0 },
                "polygon:0,0;1,0;0.2,0.9".parse().unwrap(),
            ] {
                let g = rasterize_domain(&shape, h).unwrap();
                let m = domain_metrics(&g, Selection::Whole).unwrap();
                assert!(m.r_i > 0.0);
                assert!(m.r_i < m.r_0, "{shape}");
            }
            let disc = rasterize_domain(&Shape::Disc { radius: 1.0 }, h).unwrap();
            let m = domain_metrics(&disc, Selection::Whole).unwrap();
            assert!(m.r_i <= m.r_0 + 2.0 * h);
        }
    }

    #[test]
    fn component_selection() {
        let mask = Mask::from_art(
            ".......
             .###...
             .#.#...
             .###.#.
             .......",
        );
        let grid = DomainGrid::new(mask.clone(), 0.5, (0.0, 0.0)).unwrap();
        let set = connected_components(&mask, 0.5);
        assert_eq!(set.count(), 2);
        let ring = domain_metrics(&grid, Selection::Component { set: &set, id: 1 }).unwrap();
        assert_eq!(ring.area, 8.0 * 0.25);
        assert_eq!(ring.gamma, 0.25);
        assert_eq!(ring.r_i, 0.5 - 0.25);
        let dot = domain_metrics(&grid, Selection::Component { set: &set, id: 2 }).unwrap();
        assert!(dot.gamma.is_infinite());
        assert!(domain_metrics(&grid, Selection::Component { set: &set, id: 3 }).is_err());
    }

    #[test]
    fn diagonal_gap_is_not_a_hole() {
        // the two complement cells inside touch the outside through a corner
        let mask = Mask::from_art(
            "......
             .####.
             .#..#.
             .#.##.
             .##...
             ......",
        );
        let m = region_metrics(&mask, 1.0).unwrap().metrics;
        assert!(m.gamma.is_infinite());
    }
}
