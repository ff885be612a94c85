//! Shift-invert block Lanczos with full reorthogonalization.
//!
//! The Krylov space is built for `(A - σI)^{-1}` with a block of random start
//! vectors, so eigenvalues of multiplicity up to the block size are found
//! without special handling. Convergence is declared from the explicit
//! residual `‖A x - λ x‖` of the Ritz pairs, and completeness below the
//! last accepted eigenvalue is confirmed with a Sylvester inertia count.

use nalgebra::{DMatrix, DMatrixView, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::laplacian::CsrMatrix;
use super::ldl::LdlFactor;
use crate::error::{Error, Result};

pub(crate) struct LanczosConfig {
    pub block: usize,
    pub max_basis: usize,
    pub seed: u64,
    pub shift: f64,
}

/// Eigenpairs `(λ, x)` with `‖x‖ = 1`, ascending, at least `wanted` of them.
pub(crate) fn smallest(
    matrix: &CsrMatrix,
    coords: &[(u32, u32)],
    wanted: usize,
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = matrix.dim();
    let b = cfg.block.max(1);
    let max_basis = cfg.max_basis.min(n - n % b).max(b);
    let factor = LdlFactor::new(matrix, coords, cfg.shift)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut work = vec![0.0; n];

    // column-major n x m basis
    let mut basis: Vec<f64> = Vec::with_capacity(n * (2 * wanted + 3 * b).min(max_basis + b));
    let mut proj = DMatrix::<f64>::zeros(max_basis + b, max_basis + b);

    let start = DMatrix::from_fn(n, b, |_, _| rng.random_range(-1.0..1.0));
    let scale: Vec<f64> = start.column_iter().map(|c| c.norm()).collect();
    let (block, _) = orthonormalize_block(&basis, n, start, &scale, &mut rng);
    basis.extend_from_slice(block.as_slice());

    let mut next_check = (wanted + 1).max(2 * b) + b;
    let mut worst = f64::INFINITY;
    let mut converged = 0;
    loop {
        let m = basis.len() / n;
        let cur = m - b;
        let mut w = DMatrix::<f64>::zeros(n, b);
        for j in 0..b {
            let col = &mut w.as_mut_slice()[j * n..(j + 1) * n];
            col.copy_from_slice(&basis[(cur + j) * n..(cur + j + 1) * n]);
            factor.solve_in_place(col, &mut work);
        }
        let scale: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
        let q = DMatrixView::from_slice(&basis, n, m);
        for _ in 0..2 {
            let c = q.tr_mul(&w);
            w.gemm(-1.0, &q, &c, 1.0);
            let mut target = proj.view_mut((0, cur), (m, b));
            target += &c;
        }
        let (block, r) = orthonormalize_block(&basis, n, w, &scale, &mut rng);
        proj.view_mut((m, cur), (b, b)).copy_from(&r);

        let done = m + b > max_basis;
        if m >= next_check || done {
            next_check = m + (m / 8).max(b);
            let chk = check(matrix, &factor, &basis, n, m, b, &proj, wanted, tol)?;
            match chk {
                Check::Converged(pairs) => {
                    if confirm_inertia(matrix, coords, &pairs, cfg.shift)? {
                        return Ok(pairs);
                    }
                }
                Check::Pending { converged: c, worst: w } => {
                    converged = c;
                    worst = w;
                }
            }
        }
        if done {
            return Err(Error::NonConvergence { requested: wanted, converged, basis: m, worst_residual: worst });
        }
        basis.extend_from_slice(block.as_slice());
    }
}

enum Check {
    Converged(Vec<(f64, Vec<f64>)>),
    Pending { converged: usize, worst: f64 },
}

#[allow(clippy::too_many_arguments)]
fn check(
    matrix: &CsrMatrix,
    factor: &LdlFactor,
    basis: &[f64],
    n: usize,
    m: usize,
    b: usize,
    proj: &DMatrix<f64>,
    wanted: usize,
    tol: f64,
) -> Result<Check> {
    let t = proj.view((0, 0), (m, m));
    let sym = (&t + t.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let coupling = proj.view((m, m - b), (b, b));

    // Ritz values θ of the inverse: λ = σ + 1/θ. Keep those on the wanted side.
    let mut order: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    if order.len() < wanted {
        return Ok(Check::Pending { converged: 0, worst: f64::INFINITY });
    }

    // cheap estimate first: ‖T y - θ y‖ from the coupling block
    let mut estimated = 0;
    for &i in order.iter().take(wanted) {
        let theta = eig.eigenvalues[i];
        let tail = eig.eigenvectors.view((m - b, i), (b, 1));
        let res = (&coupling * tail).norm();
        if res <= 0.1 * tol * theta {
            estimated += 1;
        } else {
            break;
        }
    }
    if estimated < wanted {
        return Ok(Check::Pending { converged: estimated, worst: f64::INFINITY });
    }

    let q = DMatrixView::from_slice(basis, n, m);
    let sel = DMatrix::from_fn(m, wanted, |r, c| eig.eigenvectors[(r, order[c])]);
    let (lambdas, x, ax) = refine(matrix, factor, q * sel);

    let mut pairs = Vec::with_capacity(wanted);
    let mut worst: f64 = 0.0;
    let mut ok = 0;
    for c in 0..wanted {
        let lambda = lambdas[c];
        let res = (ax.column(c) - x.column(c) * lambda).norm();
        let rel = res / lambda.abs();
        worst = worst.max(rel);
        if rel <= tol {
            ok += 1;
        }
        pairs.push((lambda, x.column(c).iter().copied().collect()));
    }
    if ok < wanted {
        return Ok(Check::Pending { converged: ok, worst });
    }
    Ok(Check::Converged(pairs))
}

/// One step of subspace iteration on the Ritz vectors followed by a
/// Rayleigh-Ritz projection of `A` itself. Ritz vectors of the inverse carry
/// rounding error in high-frequency directions that `A` amplifies by its
/// condition number; a single solve damps exactly those components.
/// Returns ascending `λ`, orthonormal `X` and `A X`.
fn refine(matrix: &CsrMatrix, factor: &LdlFactor, mut y: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = y.nrows();
    let mut work = vec![0.0; n];
    for mut col in y.column_iter_mut() {
        factor.solve_in_place(col.as_mut_slice(), &mut work);
        let norm = col.norm();
        col.unscale_mut(norm);
    }
    for _ in 0..2 {
        let gram = y.tr_mul(&y);
        let r = match gram.cholesky() {
            Some(ch) => ch.l().transpose(),
            None => break,
        };
        let rinv = r.try_inverse().expect("triangular factor with positive diagonal");
        y *= rinv;
    }
    let mut ay = DMatrix::<f64>::zeros(n, y.ncols());
    for (src, mut dst) in y.column_iter().zip(ay.column_iter_mut()) {
        matrix.mul_vec(src.as_slice(), dst.as_mut_slice());
    }
    let h = y.tr_mul(&ay);
    let eig = SymmetricEigen::new((&h + h.transpose()) * 0.5);
    let mut order: Vec<usize> = (0..h.ncols()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let v = DMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    let lambdas = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    (lambdas, y * &v, ay * v)
}

/// Confirms with Sylvester inertia that no eigenvalue was skipped: exactly
/// the found ones lie strictly below the last accepted value, and at least
/// as many as were found lie just above it. The second count may be larger
/// when the last value belongs to a cluster that the request cuts through.
fn confirm_inertia(matrix: &CsrMatrix, coords: &[(u32, u32)], pairs: &[(f64, Vec<f64>)], shift: f64) -> Result<bool> {
    let last = pairs.last().map_or(0.0, |p| p.0);
    let eps = (last - shift).abs() * 1e-7;
    let below_shift = if shift > 0.0 { LdlFactor::new(matrix, coords, shift)?.negative_pivots() } else { 0 };
    let count = |mut probe: f64, step: f64| -> Result<Option<usize>> {
        for _ in 0..4 {
            match LdlFactor::new(matrix, coords, probe) {
                Ok(f) => return Ok(Some(f.negative_pivots() - below_shift)),
                Err(Error::FactorizationBreakdown { .. }) => probe += step,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    };
    let lo = last - eps;
    let (Some(below), Some(upto)) = (count(lo, -eps)?, count(last + eps, eps)?) else {
        return Ok(false);
    };
    let found_below = pairs.iter().filter(|p| p.0 < lo).count();
    Ok(below == found_below && upto >= pairs.len())
}

/// Orthonormalize the columns of `w` (already orthogonal to `basis`) among
/// themselves with two passes of Gram-Schmidt. Returns the block and the upper
/// triangular coefficients. Columns that collapse are replaced by fresh random
/// directions with a zero coefficient.
fn orthonormalize_block(
    basis: &[f64],
    n: usize,
    mut w: DMatrix<f64>,
    scale: &[f64],
    rng: &mut ChaCha8Rng,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let b = w.ncols();
    let m = basis.len() / n;
    let q = DMatrixView::from_slice(basis, n, m);
    let mut r = DMatrix::zeros(b, b);
    for j in 0..b {
        let original = scale[j];
        let mut replaced = false;
        loop {
            for _ in 0..2 {
                // the caller already projected out the basis; only fresh
                // random directions need it
                if m > 0 && replaced {
                    let c = q.tr_mul(&w.column(j));
                    let upd = &q * &c;
                    w.column_mut(j).axpy(-1.0, &upd, 1.0);
                }
                for i in 0..j {
                    let dot = w.column(i).dot(&w.column(j));
                    if !replaced {
                        r[(i, j)] += dot;
                    }
                    let col_i = w.column(i).clone_owned();
                    w.column_mut(j).axpy(-dot, &col_i, 1.0);
                }
            }
            let norm = w.column(j).norm();
            if norm > 1e-10 * original.max(f64::MIN_POSITIVE) && norm > 0.0 {
                if !replaced {
                    r[(j, j)] = norm;
                }
                w.column_mut(j).unscale_mut(norm);
                break;
            }
            // invariant subspace: continue with a random direction
            for i in 0..j {
                r[(i, j)] = 0.0;
            }
            r[(j, j)] = 0.0;
            replaced = true;
            for v in w.column_mut(j).iter_mut() {
                *v = rng.random_range(-1.0..1.0);
            }
        }
    }
    (w, r)
}
