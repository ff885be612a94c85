//! Sparse `L D Lᵀ` factorization of `A - σI` for grid operators.
//!
//! Unknowns are reordered by geometric nested dissection on their lattice
//! coordinates: a full lattice line separates the 5-point stencil graph, so
//! each box is split along its longer side, both halves are ordered
//! recursively and the separator goes last. The numeric phase is the
//! up-looking row algorithm driven by the elimination tree.

use super::laplacian::CsrMatrix;
use crate::error::{Error, Result};

const LEAF: usize = 64;
const NONE: usize = usize::MAX;

pub struct LdlFactor {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
    d: Vec<f64>,
}

impl LdlFactor {
    /// Factor `matrix - shift * I`. `coords` are the lattice coordinates of
    /// the unknowns and only drive the ordering.
    pub fn new(matrix: &CsrMatrix, coords: &[(u32, u32)], shift: f64) -> Result<Self> {
        let n = matrix.dim();
        assert_eq!(coords.len(), n);
        let perm = nested_dissection(coords);
        let mut pinv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            pinv[old] = new;
        }

        // row k of the permuted matrix restricted to columns <= k
        let upper = |k: usize, f: &mut dyn FnMut(usize, f64)| {
            for (j, v) in matrix.row(perm[k]) {
                let nj = pinv[j];
                if nj < k {
                    f(nj, v);
                } else if nj == k {
                    f(k, v - shift);
                }
            }
        };

        // symbolic: elimination tree and column counts
        let mut parent = vec![NONE; n];
        let mut flag = vec![NONE; n];
        let mut lnz = vec![0usize; n];
        for k in 0..n {
            flag[k] = k;
            upper(k, &mut |i, _| {
                let mut i = i;
                while i < k && flag[i] != k {
                    if parent[i] == NONE {
                        parent[i] = k;
                    }
                    lnz[i] += 1;
                    flag[i] = k;
                    i = parent[i];
                }
            });
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + lnz[k];
        }
        let total = lp[n];
        let mut li = vec![0usize; total];
        let mut lx = vec![0.0; total];
        let mut d = vec![0.0; n];

        // numeric
        let mut y = vec![0.0; n];
        let mut pattern = vec![0usize; n];
        let mut stack = vec![0usize; n];
        lnz.fill(0);
        flag.fill(NONE);
        for k in 0..n {
            let mut top = n;
            flag[k] = k;
            upper(k, &mut |i, v| {
                y[i] += v;
                let mut len = 0;
                let mut i = i;
                while flag[i] != k {
                    stack[len] = i;
                    len += 1;
                    flag[i] = k;
                    i = parent[i];
                }
                while len > 0 {
                    top -= 1;
                    len -= 1;
                    pattern[top] = stack[len];
                }
            });
            d[k] = y[k];
            y[k] = 0.0;
            for &i in &pattern[top..n] {
                let yi = y[i];
                y[i] = 0.0;
                let start = lp[i];
                let end = start + lnz[i];
                for p in start..end {
                    y[li[p]] -= lx[p] * yi;
                }
                let lki = yi / d[i];
                d[k] -= lki * yi;
                li[end] = k;
                lx[end] = lki;
                lnz[i] += 1;
            }
            if d[k] == 0.0 || !d[k].is_finite() {
                return Err(Error::FactorizationBreakdown { pivot: k, value: d[k] });
            }
        }
        Ok(LdlFactor { n, perm, lp, li, lx, d })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.lp[self.n]
    }

    /// Number of negative pivots, i.e. eigenvalues of `A` below the shift.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Overwrite `b` with `(A - σI)^{-1} b`. `work` must have length `n`.
    pub fn solve_in_place(&self, b: &mut [f64], work: &mut [f64]) {
        let x = work;
        for (k, &old) in self.perm.iter().enumerate() {
            x[k] = b[old];
        }
        for j in 0..self.n {
            let xj = x[j];
            if xj != 0.0 {
                for p in self.lp[j]..self.lp[j + 1] {
                    x[self.li[p]] -= self.lx[p] * xj;
                }
            }
        }
        for (xj, dj) in x.iter_mut().zip(&self.d) {
            *xj /= dj;
        }
        for j in (0..self.n).rev() {
            let mut acc = x[j];
            for p in self.lp[j]..self.lp[j + 1] {
                acc -= self.lx[p] * x[self.li[p]];
            }
            x[j] = acc;
        }
        for (k, &old) in self.perm.iter().enumerate() {
            b[old] = x[k];
        }
    }
}

/// Fill-reducing order for unknowns on a lattice; returns `perm[new] = old`.
pub fn nested_dissection(coords: &[(u32, u32)]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..coords.len()).collect();
    let mut order = Vec::with_capacity(coords.len());
    dissect(&mut ids, coords, &mut order);
    order
}

fn dissect(ids: &mut [usize], coords: &[(u32, u32)], order: &mut Vec<usize>) {
    if ids.len() <= LEAF {
        ids.sort_unstable_by_key(|&i| coords[i]);
        order.extend_from_slice(ids);
        return;
    }
    let (mut rmin, mut rmax, mut cmin, mut cmax) = (u32::MAX, 0, u32::MAX, 0);
    for &i in ids.iter() {
        let (r, c) = coords[i];
        rmin = rmin.min(r);
        rmax = rmax.max(r);
        cmin = cmin.min(c);
        cmax = cmax.max(c);
    }
    let by_row = rmax - rmin >= cmax - cmin;
    let key = |i: usize| if by_row { coords[i].0 } else { coords[i].1 };
    ids.sort_unstable_by_key(|&i| (key(i), coords[i]));
    let split = key(ids[ids.len() / 2]);
    let lo = ids.partition_point(|&i| key(i) < split);
    let hi = ids.partition_point(|&i| key(i) <= split);
    let (left, rest) = ids.split_at_mut(lo);
    let (sep, right) = rest.split_at_mut(hi - lo);
    dissect(left, coords, order);
    dissect(right, coords, order);
    order.extend_from_slice(sep);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize_domain, Shape};
    use crate::spectral::assemble_dirichlet_laplacian;

    #[test]
    fn ordering_is_a_permutation() {
        let grid = rasterize_domain(&Shape::Disc { radius: 1.0 }, 0.05).unwrap();
        let op = assemble_dirichlet_laplacian(&grid);
        let mut perm = nested_dissection(op.coords());
        perm.sort_unstable();
        assert_eq!(perm, (0..op.dim()).collect::<Vec<_>>());
    }

    #[test]
    fn solve_matches_dense() {
        let grid = rasterize_domain(&Shape::Annulus { inner: 0.3, outer: 1.0 }, 0.04).unwrap();
        let op = assemble_dirichlet_laplacian(&grid);
        let n = op.dim();
        let dense = op.matrix().to_dense();
        let b: Vec<f64> = (0..n).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        for shift in [0.0, 30.0] {
            let f = LdlFactor::new(op.matrix(), op.coords(), shift).unwrap();
            let mut x = b.clone();
            let mut work = vec![0.0; n];
            f.solve_in_place(&mut x, &mut work);
            let shifted = &dense - nalgebra::DMatrix::identity(n, n) * shift;
            let r = &shifted * nalgebra::DVector::from_vec(x) - nalgebra::DVector::from_vec(b.clone());
            assert!(r.norm() < 1e-9 * shifted.norm(), "shift {shift}: residual {}", r.norm());
        }
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        let grid = rasterize_domain(&Shape::Rectangle { width: 1.0, height: 0.7 }, 0.05).unwrap();
        let op = assemble_dirichlet_laplacian(&grid);
        let eig = op.matrix().to_dense().symmetric_eigenvalues();
        for shift in [10.0, 200.0, 1000.0] {
            let f = LdlFactor::new(op.matrix(), op.coords(), shift).unwrap();
            let expected = eig.iter().filter(|&&l| l < shift).count();
            assert_eq!(f.negative_pivots(), expected);
        }
    }

    #[test]
    fn fill_stays_modest_on_a_square() {
        let grid = rasterize_domain(&Shape::square(), 1.0 / 128.0).unwrap();
        let op = assemble_dirichlet_laplacian(&grid);
        let f = LdlFactor::new(op.matrix(), op.coords(), 0.0).unwrap();
        // banded storage would need n * 127 entries
        assert!(f.nnz() < op.dim() * 40, "nnz {}", f.nnz());
    }
}
