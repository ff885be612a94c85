use crate::geometry::DomainGrid;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from per-row `(column, value)` lists; columns must be sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            for (c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            *yi = acc;
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// The 5-point Dirichlet Laplacian `-Δ_h` on the interior cells of a grid.
///
/// Unknowns are the interior cells in row-major order; exterior neighbours
/// are simply dropped, which imposes `u = 0` there.
#[derive(Debug, Clone)]
pub struct DirichletLaplacian {
    matrix: CsrMatrix,
    cells: Vec<usize>,
    coords: Vec<(u32, u32)>,
    rows: usize,
    cols: usize,
    h: f64,
}

impl DirichletLaplacian {
    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn grid_shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Flat grid index of each unknown.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// `(row, col)` of each unknown.
    pub fn coords(&self) -> &[(u32, u32)] {
        &self.coords
    }

    /// Scatter a vector over unknowns onto the full grid (exterior = 0).
    pub fn to_grid(&self, values: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.rows * self.cols];
        for (&cell, &v) in self.cells.iter().zip(values) {
            full[cell] = v;
        }
        full
    }
}

pub fn assemble_dirichlet_laplacian(grid: &DomainGrid) -> DirichletLaplacian {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mask = grid.mask();
    let cells = grid.interior_cells();
    let mut dof = vec![usize::MAX; rows * cols];
    for (k, &cell) in cells.iter().enumerate() {
        dof[cell] = k;
    }
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let neighbour = |r: usize, c: usize| -> Option<usize> { mask.get(r, c).then(|| dof[r * cols + c]) };

    let mut coords = Vec::with_capacity(cells.len());
    let rows_list = cells
        .iter()
        .enumerate()
        .map(|(k, &cell)| {
            let (r, c) = (cell / cols, cell % cols);
            coords.push((r as u32, c as u32));
            let mut row = Vec::with_capacity(5);
            // ascending unknown index: up, left, self, right, down
            if r > 0 {
                if let Some(j) = neighbour(r - 1, c) {
                    row.push((j, -inv_h2));
                }
            }
            if c > 0 {
                if let Some(j) = neighbour(r, c - 1) {
                    row.push((j, -inv_h2));
                }
            }
            row.push((k, 4.0 * inv_h2));
            if c + 1 < cols {
                if let Some(j) = neighbour(r, c + 1) {
                    row.push((j, -inv_h2));
                }
            }
            if r + 1 < rows {
                if let Some(j) = neighbour(r + 1, c) {
                    row.push((j, -inv_h2));
                }
            }
            row
        })
        .collect();

    DirichletLaplacian { matrix: CsrMatrix::from_rows(rows_list), cells, coords, rows, cols, h: grid.h() }
}
