//! Nodal domains of grid eigenfunctions and `N/n` sequences.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sci17;
use crate::geometry::components::label_by_key;
use crate::geometry::metrics::measure_cropped;
use crate::geometry::{Connectivity, DomainGrid, DomainMetrics};
use crate::spectral::{
    assemble_dirichlet_laplacian, j0_first_zero, rectangle_spectrum, smallest_eigenpairs, EigenPair, DEGENERACY_GAP,
};

/// Cells with `|φ| <= ZERO_TOL * max |φ|` are treated as part of the nodal set.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

/// Residual tolerance used when a sequence has to solve its own eigenproblem.
pub const SEQUENCE_SOLVER_TOL: f64 = 1e-10;

/// One connected sign component of an eigenfunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalDomain {
    pub label: u32,
    pub sign: i8,
    pub metrics: DomainMetrics,
    /// Flat grid indices, ascending.
    pub cells: Vec<usize>,
    /// Centre of the deepest cell, where the inscribed disc sits.
    pub incenter: (f64, f64),
}

/// Nodal domains of an eigenpair computed on `grid`.
pub fn extract_nodal_domains(grid: &DomainGrid, eig: &EigenPair, zero_tol: f64) -> Result<Vec<NodalDomain>> {
    nodal_domains_of(grid, &eig.vector, zero_tol)
}

/// Nodal domains of arbitrary values on the interior cells of `grid`
/// (row-major order, as produced by [`sample_on_grid`]).
pub fn nodal_domains_of(grid: &DomainGrid, values: &[f64], zero_tol: f64) -> Result<Vec<NodalDomain>> {
    let cells = grid.interior_cells();
    if values.len() != cells.len() {
        return Err(Error::InvalidParameter(format!(
            "{} values for {} interior cells",
            values.len(),
            cells.len()
        )));
    }
    let (rows, cols) = (grid.rows(), grid.cols());
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = zero_tol * max;
    let mut sign = vec![0i8; rows * cols];
    let mut any = false;
    for (&cell, &v) in cells.iter().zip(values) {
        if v.abs() > threshold {
            sign[cell] = if v > 0.0 { 1 } else { -1 };
            any = true;
        }
    }
    if !any {
        return Err(Error::DegenerateEigenfunction);
    }

    let (labels, sizes) = label_by_key(rows, cols, Connectivity::Four, |i| (sign[i] != 0).then_some(sign[i]));
    let count = sizes.len();
    let mut members: Vec<Vec<usize>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    let mut bbox = vec![(usize::MAX, usize::MAX, 0usize, 0usize); count];
    for (i, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let k = l as usize - 1;
        members[k].push(i);
        let (r, c) = (i / cols, i % cols);
        let b = &mut bbox[k];
        b.0 = b.0.min(r);
        b.1 = b.1.min(c);
        b.2 = b.2.max(r);
        b.3 = b.3.max(c);
    }

    members
        .into_iter()
        .enumerate()
        .map(|(k, cells)| {
            let id = k as u32 + 1;
            let m = measure_cropped(cells.len(), bbox[k], grid.h(), |r, c| labels[r * cols + c] == id)?;
            Ok(NodalDomain {
                label: id,
                sign: sign[cells[0]],
                metrics: m.metrics,
                incenter: grid.cell_center(m.incenter.0, m.incenter.1),
                cells,
            })
        })
        .collect()
}

/// Evaluate `f` at the interior cell centres of `grid`.
pub fn sample_on_grid<F: Fn(f64, f64) -> f64>(grid: &DomainGrid, f: F) -> Vec<f64> {
    let cols = grid.cols();
    grid.interior_cells()
        .into_iter()
        .map(|cell| {
            let (x, y) = grid.cell_center(cell / cols, cell % cols);
            f(x, y)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PleijelEntry {
    pub n: usize,
    pub lambda: f64,
    pub nodal_count: u64,
    pub ratio: f64,
    /// Eigenvalue shares a cluster with a neighbour (kept only by the
    /// closed-form route, where the product eigenfunctions are canonical).
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMax {
    pub n: usize,
    pub ratio: f64,
    pub window: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PleijelSequence {
    pub entries: Vec<PleijelEntry>,
    /// Mode indices left out because their eigenvalue is degenerate.
    pub skipped: Vec<usize>,
}

impl PleijelSequence {
    /// Largest ratio among entries with `lo <= n <= hi`.
    pub fn tail_max(&self, lo: usize, hi: usize) -> Option<TailMax> {
        self.entries
            .iter()
            .filter(|e| e.n >= lo && e.n <= hi)
            .fold(None, |best: Option<&PleijelEntry>, e| match best {
                Some(b) if b.ratio >= e.ratio => Some(b),
                _ => Some(e),
            })
            .map(|e| TailMax { n: e.n, ratio: e.ratio, window: (lo, hi) })
    }

    /// Courant's bound `N_n <= n` on every entry.
    pub fn courant_holds(&self) -> bool {
        self.entries.iter().all(|e| e.nodal_count >= 1 && e.nodal_count as usize <= e.n)
    }

    /// Mode indices whose ratio exceeds `constant`.
    pub fn exceedances(&self, constant: f64) -> Vec<usize> {
        self.entries.iter().filter(|e| e.ratio > constant).map(|e| e.n).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,lambda,N,ratio")?;
        for e in &self.entries {
            writeln!(out, "{},{},{},{}", e.n, sci17(e.lambda), e.nodal_count, sci17(e.ratio))?;
        }
        Ok(())
    }

    pub fn summary(&self, window: (usize, usize)) -> PleijelSummary {
        let j = j0_first_zero();
        PleijelSummary {
            tail_max: self.tail_max(window.0, window.1),
            window,
            entries: self.entries.len(),
            skipped: self.skipped.len(),
            courant_holds: self.courant_holds(),
            pleijel_constant: (2.0 / j).powi(2),
            rectangle_constant: 2.0 / std::f64::consts::PI,
        }
    }
}

/// JSON summary of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PleijelSummary {
    pub tail_max: Option<TailMax>,
    pub window: (usize, usize),
    pub entries: usize,
    pub skipped: usize,
    pub courant_holds: bool,
    /// `(2/j)^2`
    pub pleijel_constant: f64,
    /// `2/π`
    pub rectangle_constant: f64,
}

/// Solve the first `n_max` modes of `grid` and count their nodal domains.
pub fn pleijel_sequence(grid: &DomainGrid, n_max: usize) -> Result<PleijelSequence> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let op = assemble_dirichlet_laplacian(grid);
    let pairs = smallest_eigenpairs(&op, n_max.min(op.dim()), SEQUENCE_SOLVER_TOL)?;
    pleijel_sequence_from_pairs(grid, &pairs, DEFAULT_ZERO_TOL)
}

/// Count nodal domains of already computed pairs; degenerate modes are skipped.
pub fn pleijel_sequence_from_pairs(grid: &DomainGrid, pairs: &[EigenPair], zero_tol: f64) -> Result<PleijelSequence> {
    let counted: Vec<Result<Option<PleijelEntry>>> = pairs
        .par_iter()
        .map(|p| {
            if p.degenerate {
                return Ok(None);
            }
            let count = extract_nodal_domains(grid, p, zero_tol)?.len() as u64;
            Ok(Some(PleijelEntry {
                n: p.index,
                lambda: p.lambda,
                nodal_count: count,
                ratio: count as f64 / p.index as f64,
                degenerate: false,
            }))
        })
        .collect();
    let mut seq = PleijelSequence::default();
    for (p, entry) in pairs.iter().zip(counted) {
        match entry? {
            Some(e) => seq.entries.push(e),
            None => seq.skipped.push(p.index),
        }
    }
    Ok(seq)
}

/// Closed-form sequence for the rectangle `[0, a] x [0, b]`: the `n`-th mode
/// `(m, k)` in [`rectangle_spectrum`] order has exactly `m k` nodal domains.
/// Near-coincident eigenvalues are flagged but kept.
pub fn nodal_count_rectangle(a: f64, b: f64, n_max: usize) -> Result<PleijelSequence> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let modes = rectangle_spectrum(a, b, n_max + 1)?;
    let close = |i: usize, j: usize| (modes[i].lambda - modes[j].lambda).abs() <= DEGENERACY_GAP * modes[i].lambda;
    let entries = (0..n_max)
        .map(|i| {
            let n = i + 1;
            let count = modes[i].nodal_count();
            PleijelEntry {
                n,
                lambda: modes[i].lambda,
                nodal_count: count,
                ratio: count as f64 / n as f64,
                degenerate: (i > 0 && close(i, i - 1)) || close(i, i + 1),
            }
        })
        .collect();
    Ok(PleijelSequence { entries, skipped: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize_domain, Shape};
    use crate::spectral::RectangleMode;

    #[test]
    fn product_eigenfunction_checkerboard() {
        let grid = rasterize_domain(&Shape::square(), 1.0 / 100.0).unwrap();
        let mode = RectangleMode::new(2, 3, 1.0, 1.0);
        let values = sample_on_grid(&grid, |x, y| mode.eval(1.0, 1.0, x, y));
        let domains = nodal_domains_of(&grid, &values, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(domains.len(), 6);
        for d in &domains {
            let (x, y) = d.incenter;
            assert_eq!(d.sign as f64, mode.eval(1.0, 1.0, x, y).signum());
        }
    }

    #[test]
    fn two_halves_have_equal_area() {
        let grid = rasterize_domain(&Shape::square(), 1.0 / 100.0).unwrap();
        let mode = RectangleMode::new(1, 2, 1.0, 1.0);
        let domains = nodal_domains_of(&grid, &sample_on_grid(&grid, |x, y| mode.eval(1.0, 1.0, x, y)), 1e-9).unwrap();
        assert_eq!(domains.len(), 2);
        let (a, b) = (domains[0].metrics.area, domains[1].metrics.area);
        assert!((a - b).abs() <= 0.02 * a.max(b));
    }

    #[test]
    fn ground_states_have_one_positive_domain() {
        for shape in [Shape::Disc { radius: 1.0 }, Shape::Annulus { inner: 0.4, outer: 1.0 }, Shape::square()] {
            let grid = rasterize_domain(&shape, 1.0 / 40.0).unwrap();
            let op = assemble_dirichlet_laplacian(&grid);
            let pairs = smallest_eigenpairs(&op, 1, 1e-10).unwrap();
            let domains = extract_nodal_domains(&grid, &pairs[0], DEFAULT_ZERO_TOL).unwrap();
            assert_eq!(domains.len(), 1, "{shape}");
            assert_eq!(domains[0].sign, 1);
            assert_eq!(domains[0].cells.len(), grid.interior_count());
        }
    }

    #[test]
    fn zero_function_is_degenerate() {
        let grid = rasterize_domain(&Shape::square(), 0.1).unwrap();
        let zeros = vec![0.0; grid.interior_count()];
        assert!(matches!(nodal_domains_of(&grid, &zeros, 1e-9), Err(Error::DegenerateEigenfunction)));
        assert!(nodal_domains_of(&grid, &[1.0], 1e-9).is_err());
    }

    #[test]
    fn domain_signs_are_constant() {
        let grid = rasterize_domain(&Shape::Rectangle { width: 1.0, height: 0.77 }, 1.0 / 60.0).unwrap();
        let op = assemble_dirichlet_laplacian(&grid);
        let pairs = smallest_eigenpairs(&op, 8, 1e-10).unwrap();
        let interior = grid.interior_cells();
        for p in &pairs {
            let full = op.to_grid(&p.vector);
            let domains = extract_nodal_domains(&grid, p, DEFAULT_ZERO_TOL).unwrap();
            let mut covered = 0;
            for d in &domains {
                assert!(d.metrics.area > 0.0);
                covered += d.cells.len();
                assert!(d.cells.iter().all(|&c| full[c].signum() as i8 == d.sign));
            }
            assert!(covered <= interior.len());
        }
    }

    /// Product modes of the 5-point operator on a `mx` by `my` block of
    /// interior nodes, with their exact nodal counts.
    fn discrete_rectangle_modes(mx: usize, my: usize, h: f64) -> Vec<(f64, u64)> {
        let s = |k: usize, len: usize| (k as f64 * std::f64::consts::PI / (2.0 * (len + 1) as f64)).sin().powi(2);
        let mut modes: Vec<(f64, u64)> = (1..=mx)
            .flat_map(|m| (1..=my).map(move |n| (4.0 / (h * h) * (s(m, mx) + s(n, my)), (m * n) as u64)))
            .collect();
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        modes
    }

    #[test]
    fn small_grid_sequence() {
        let h = 1.0 / 64.0;
        let grid = rasterize_domain(&Shape::Rectangle { width: 1.0, height: 1.0 / 2f64.sqrt() }, h).unwrap();
        let seq = pleijel_sequence(&grid, 25).unwrap();
        assert!(seq.courant_holds());
        assert_eq!(seq.entries[0].n, 1);
        assert_eq!(seq.entries[0].ratio, 1.0);
        assert!(seq.entries.iter().all(|e| e.ratio <= 1.0));
        let cols = grid.cols();
        let cells = grid.interior_cells();
        let mx = cells.iter().map(|c| c % cols).max().unwrap() - cells.iter().map(|c| c % cols).min().unwrap() + 1;
        let my = cells.len() / mx;
        assert_eq!(mx * my, grid.interior_count());
        let oracle = discrete_rectangle_modes(mx, my, h);
        for e in &seq.entries {
            let (lambda, count) = oracle[e.n - 1];
            assert!((lambda - e.lambda).abs() < 1e-8 * lambda, "mode {}", e.n);
            assert_eq!(e.nodal_count, count, "mode {}", e.n);
        }
    }

    #[test]
    fn closed_form_counts() {
        let seq = nodal_count_rectangle(1.0, 1.0 / 2f64.sqrt(), 3000).unwrap();
        assert_eq!(seq.entries[0].nodal_count, 1);
        assert!(seq.courant_holds());
        // mode (5, 4) has 20 domains
        let modes = rectangle_spectrum(1.0, 1.0 / 2f64.sqrt(), 3000).unwrap();
        let pos = modes.iter().position(|m| (m.m, m.n) == (5, 4)).unwrap();
        assert_eq!(seq.entries[pos].nodal_count, 20);
    }

    #[test]
    fn csv_and_summary() {
        let seq = nodal_count_rectangle(1.0, 0.7, 10).unwrap();
        let mut out = Vec::new();
        seq.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("n,lambda,N,ratio"));
        assert_eq!(text.lines().count(), 11);
        let summary = seq.summary((5, 10));
        assert_eq!(summary.tail_max.unwrap().window, (5, 10));
        assert!((summary.pleijel_constant - 0.6916602761).abs() < 1e-9);
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("pleijel_constant"));
    }
}
