use nalgebra::SymmetricEigen;

use super::laplacian::CsrMatrix;

/// All eigenpairs of a small operator, ascending, vectors of unit norm.
pub(crate) fn all_eigenpairs(matrix: &CsrMatrix) -> Vec<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(matrix.to_dense());
    let mut pairs: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, eig.eigenvectors.column(i).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}
