//! Dirichlet eigenpairs on rasterized domains, plus closed-form oracles.

mod bessel;
mod dense;
mod export;
mod lanczos;
mod laplacian;
mod ldl;
mod rectangle;

pub use bessel::{bessel_j0, bessel_j1, j0_first_zero};
pub use export::{read_eigenvector_grid, write_eigenvalue_csv, write_eigenvector_grid, GRID_MAGIC};
pub use laplacian::{assemble_dirichlet_laplacian, CsrMatrix, DirichletLaplacian};
pub use ldl::{nested_dissection, LdlFactor};
pub use rectangle::{rectangle_spectrum, RectangleMode};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative gap below which neighbouring eigenvalues count as one cluster.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// One Dirichlet eigenpair of a grid operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    /// 1-based rank in ascending order.
    pub index: usize,
    pub lambda: f64,
    /// Values on the interior cells (row-major), scaled so that `h² Σ v² = 1`
    /// and with a positive value at the first interior cell.
    pub vector: Vec<f64>,
    /// Relative residual `‖A v - λ v‖ / (λ ‖v‖)`.
    pub residual: f64,
    /// Set when a neighbouring eigenvalue lies within [`DEGENERACY_GAP`].
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Dense for small operators, shift-invert Lanczos otherwise.
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub strategy: Strategy,
    /// Operators with at most this many unknowns go to the dense solver
    /// under [`Strategy::Auto`].
    pub dense_limit: usize,
    pub block_size: usize,
    /// Cap on the Krylov basis; defaults to `4 (k + 1) + 24 * block_size`.
    pub max_basis: Option<usize>,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { strategy: Strategy::Auto, dense_limit: 1500, block_size: 8, max_basis: None, seed: 0x6e6c_6162 }
    }
}

/// The `k` smallest eigenpairs of `op` with the default solver settings.
pub fn smallest_eigenpairs(op: &DirichletLaplacian, k: usize, tol: f64) -> Result<Vec<EigenPair>> {
    smallest_eigenpairs_with(op, k, tol, &SolverOptions::default())
}

pub fn smallest_eigenpairs_with(
    op: &DirichletLaplacian,
    k: usize,
    tol: f64,
    opts: &SolverOptions,
) -> Result<Vec<EigenPair>> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= {n}, got k = {k}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    // one extra pair so the last requested one can be tested for degeneracy
    let wanted = (k + 1).min(n);
    let use_dense = match opts.strategy {
        Strategy::Dense => true,
        Strategy::Lanczos => false,
        Strategy::Auto => n <= opts.dense_limit || 4 * wanted + 24 * opts.block_size >= n,
    };
    let mut raw = if use_dense {
        let mut all = dense::all_eigenpairs(op.matrix());
        all.truncate(wanted);
        all
    } else {
        let cfg = lanczos::LanczosConfig {
            block: opts.block_size,
            max_basis: opts.max_basis.unwrap_or(4 * wanted + 24 * opts.block_size),
            seed: opts.seed,
            shift: 0.0,
        };
        lanczos::smallest(op.matrix(), op.coords(), wanted, tol, &cfg)?
    };
    raw.truncate(wanted);

    let lambdas: Vec<f64> = raw.iter().map(|p| p.0).collect();
    let mut out = Vec::with_capacity(k);
    let mut ax = vec![0.0; n];
    let scale = 1.0 / op.h();
    for (i, (lambda, mut v)) in raw.into_iter().enumerate().take(k) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let pivot = v.iter().find(|x| x.abs() > 1e-8 * max).copied().unwrap_or(1.0);
        let factor = scale / norm * pivot.signum();
        v.iter_mut().for_each(|x| *x *= factor);

        op.matrix().mul_vec(&v, &mut ax);
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let res = ax.iter().zip(&v).map(|(a, x)| (a - lambda * x).powi(2)).sum::<f64>().sqrt();
        let residual = res / (lambda.abs() * vnorm);
        if residual > tol && !use_dense {
            return Err(Error::NonConvergence { requested: k, converged: i, basis: 0, worst_residual: residual });
        }
        let close = |j: usize| {
            lambdas.get(j).is_some_and(|&other| (other - lambda).abs() <= DEGENERACY_GAP * lambda.abs())
        };
        let degenerate = (i > 0 && close(i - 1)) || close(i + 1);
        out.push(EigenPair { index: i + 1, lambda, vector: v, residual, degenerate });
    }
    Ok(out)
}

/// Weyl ratios `λ_n |Ω| / (4π n)`.
pub fn weyl_ratio(lambdas: &[f64], area: f64) -> Vec<f64> {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| l * area / (4.0 * std::f64::consts::PI * (i + 1) as f64))
        .collect()
}
