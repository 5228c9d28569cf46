use faer::{c64, Mat, Side};

use crate::error::{OpkitError, Result};
use crate::operator::OperatorMatrix;

/// Tolerance on max|H − H†| accepted by the eigensolver.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpectrumResult<L = ()> {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: Option<Mat<c64>>,
    pub labels: Option<Vec<L>>,
}

impl<L> SpectrumResult<L> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, k: usize) -> Option<Vec<c64>> {
        let v = self.eigenvectors.as_ref()?;
        Some((0..v.nrows()).map(|i| v[(i, k)]).collect())
    }

    pub fn with_labels<M>(self, labels: Vec<M>) -> SpectrumResult<M> {
        SpectrumResult {
            eigenvalues: self.eigenvalues,
            eigenvectors: self.eigenvectors,
            labels: Some(labels),
        }
    }
}

/// Ascending order with index tie-break, so equal values keep a fixed order.
pub fn ascending_permutation(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn eigh_real(m: &Mat<f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<f64>>)> {
    if m.nrows() == 0 {
        return Ok((Vec::new(), want_vectors.then(|| Mat::zeros(0, 0))));
    }
    if want_vectors {
        let evd = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| OpkitError::NoConvergence)?;
        let s = evd.S().column_vector();
        let values: Vec<f64> = (0..s.nrows()).map(|k| s[k]).collect();
        let order = ascending_permutation(&values);
        let u = evd.U();
        let vectors = Mat::from_fn(u.nrows(), u.ncols(), |i, k| u[(i, order[k])]);
        Ok((order.iter().map(|&k| values[k]).collect(), Some(vectors)))
    } else {
        let mut values = m
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| OpkitError::NoConvergence)?;
        values.sort_by(f64::total_cmp);
        Ok((values, None))
    }
}

/// Eigen-decomposition of a complex Hermitian matrix, eigenvalues ascending.
pub fn eigh_complex(m: &Mat<c64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Mat<c64>>)> {
    if m.nrows() == 0 {
        return Ok((Vec::new(), want_vectors.then(|| Mat::zeros(0, 0))));
    }
    if want_vectors {
        let evd = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| OpkitError::NoConvergence)?;
        let s = evd.S().column_vector();
        let values: Vec<f64> = (0..s.nrows()).map(|k| s[k].re).collect();
        let order = ascending_permutation(&values);
        let u = evd.U();
        let vectors = Mat::from_fn(u.nrows(), u.ncols(), |i, k| u[(i, order[k])]);
        Ok((order.iter().map(|&k| values[k]).collect(), Some(vectors)))
    } else {
        let mut values = m
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| OpkitError::NoConvergence)?;
        values.sort_by(f64::total_cmp);
        Ok((values, None))
    }
}

/// Full spectrum of a Hermitian operator. Real matrices take the real path.
pub fn diagonalize(h: &OperatorMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(OpkitError::NotHermitian(defect));
    }
    let (eigenvalues, eigenvectors) = if h.is_real() {
        let (values, vectors) = eigh_real(&h.to_dense_real(), want_vectors)?;
        let vectors = vectors.map(|v| Mat::from_fn(v.nrows(), v.ncols(), |i, j| c64::new(v[(i, j)], 0.0)));
        (values, vectors)
    } else {
        eigh_complex(&h.to_dense(), want_vectors)?
    };
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        labels: None,
    })
}

/// Eigenvalues of the principal submatrix on `indices`.
pub fn eigenvalues_on(h: &OperatorMatrix, indices: &[usize]) -> Result<Vec<f64>> {
    Ok(diagonalize(&h.restrict(indices), false)?.eigenvalues)
}

/// max over pairs of ‖Hv − Ev‖.
pub fn max_residual(h: &OperatorMatrix, spectrum: &SpectrumResult<impl Sized>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (k, &e) in spectrum.eigenvalues.iter().enumerate() {
        let Some(v) = spectrum.eigenvector(k) else {
            return Ok(0.0);
        };
        let hv = h.apply(&v)?;
        let r: f64 = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Distance between two sorted multisets of equal size, as the largest
/// pairwise gap; `None` when the sizes differ.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let h = OperatorMatrix::from_triplets(2, [(0, 1, c64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(diagonalize(&h, false), Err(OpkitError::NotHermitian(d)) if d == 1.0));
    }

    #[test]
    fn tie_break_is_index_order() {
        assert_eq!(ascending_permutation(&[1.0, 0.0, 1.0, 0.0]), vec![1, 3, 0, 2]);
    }

    #[test]
    fn multiset_distance_sizes() {
        assert_eq!(multiset_distance(&[1.0], &[1.0, 2.0]), None);
        assert_eq!(multiset_distance(&[2.0, 1.0], &[1.0, 2.5]), Some(0.5));
    }
}
