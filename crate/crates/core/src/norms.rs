//! Discrete Sobolev norm proxies on the boundary spaces.
//!
//! A density `w` is expanded in the quarter-wave basis at each boundary
//! point and weighted with `(T/2) (1 + ω_k²)^s`. The sine family with `s = ½`
//! stands in for the trace norm, the cosine family with `s = -½` for its
//! dual.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::grid::{BoundaryGrid, Space};
use crate::spectral::{moments, BasisKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormProxy {
    pub kind: BasisKind,
    pub order: f64,
}

pub const TRACE_NORM: NormProxy = NormProxy { kind: BasisKind::Sine, order: 0.5 };
pub const DUAL_NORM: NormProxy = NormProxy { kind: BasisKind::Cosine, order: -0.5 };

/// Gram matrix `N` with `cᵀ N c = ‖Σ c_j φ_j‖²` in the proxy norm.
pub fn norm_matrix(grid: &BoundaryGrid, space: Space, norm: NormProxy) -> DMatrix<f64> {
    let m = grid.m_steps();
    let interval = grid.interval();
    let t = grid.final_time();
    // a[k][j]: k-th series coefficient of basis function j
    let coeffs: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            moments(&space.basis_function(grid, j), &interval, norm.kind)
                .into_iter()
                .map(|c| 2.0 / t * c)
                .collect()
        })
        .collect();
    let weights: Vec<f64> = interval
        .omegas()
        .iter()
        .map(|w| 0.5 * t * (1.0 + w * w).powf(norm.order))
        .collect();
    let block = DMatrix::from_fn(m, m, |i, j| {
        weights
            .iter()
            .enumerate()
            .map(|(k, w)| w * coeffs[i][k] * coeffs[j][k])
            .sum::<f64>()
    });
    let mut full = DMatrix::zeros(2 * m, 2 * m);
    full.view_mut((0, 0), (m, m)).copy_from(&block);
    full.view_mut((m, m), (m, m)).copy_from(&block);
    full
}

/// Extreme generalized singular values of `map` between proxy norms:
/// `max / min ‖map c‖_out / ‖c‖_in`.
pub fn gain_bounds(map: &DMatrix<f64>, n_in: &DMatrix<f64>, n_out: &DMatrix<f64>) -> Result<(f64, f64)> {
    let chol = n_in
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Parameter("norm matrix is not positive definite; raise n_modes".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(Error::SingularSystem { condition: f64::INFINITY })?;
    let c = &linv * map.transpose() * n_out * map * linv.transpose();
    let sym = (&c + c.transpose()).scale(0.5);
    let eig = SymmetricEigen::new(sym).eigenvalues;
    Ok((eig.max().max(0.0).sqrt(), eig.min().max(0.0).sqrt()))
}

/// Smallest eigenvalue of `(A + Aᵀ) / 2`.
pub fn min_symmetric_eigenvalue(a: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new((a + a.transpose()).scale(0.5)).eigenvalues.min()
}

/// 2-norm condition number from the singular values.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let (max, min) = (sv.max(), sv.min());
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryDensity;
    use crate::spectral::{analyze_piecewise, TimeInterval};

    #[test]
    fn norm_matrix_matches_series_norm() {
        let grid = BoundaryGrid::new(TimeInterval::new(1.5, 48).unwrap(), 6).unwrap();
        let d = BoundaryDensity::interpolate(grid, Space::LinearStart, |p, t| t * (1.0 + p as f64 * t)).unwrap();
        let n = norm_matrix(&grid, Space::LinearStart, TRACE_NORM);
        let c = nalgebra::DVector::from_column_slice(d.coeffs());
        let via_matrix = (c.transpose() * &n * &c)[(0, 0)].sqrt();
        let sigma = d.to_sigma();
        let direct = (0..2)
            .map(|p| {
                analyze_piecewise(sigma.part(p), grid.interval(), BasisKind::Sine)
                    .sobolev_norm(0.5)
                    .unwrap()
                    .powi(2)
            })
            .sum::<f64>()
            .sqrt();
        assert!((via_matrix - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn identity_gain_is_one() {
        let grid = BoundaryGrid::new(TimeInterval::new(1.0, 32).unwrap(), 4).unwrap();
        let n = norm_matrix(&grid, Space::Constant, DUAL_NORM);
        let (hi, lo) = gain_bounds(&DMatrix::identity(8, 8), &n, &n).unwrap();
        assert!((hi - 1.0).abs() < 1e-8 && (lo - 1.0).abs() < 1e-8);
    }

    #[test]
    fn condition_of_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 4.0, 0.5]));
        assert!((condition_number(&a) - 8.0).abs() < 1e-12);
        assert!(min_symmetric_eigenvalue(&a) == 0.5);
    }
}
