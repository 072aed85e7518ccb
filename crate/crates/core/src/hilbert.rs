//! Modified Hilbert transformation `H_T`: `Σ u_k sin(ω_k t) ↦ Σ u_k cos(ω_k t)`,
//! its inverse, and the time reversal `κ_T`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::{BoundaryDensity, SigmaFunction};
use crate::poly::PiecewisePoly;
use crate::spectral::{analyze_piecewise, sin_cos_integral, BasisKind, QuarterWaveSeries, SpaceTimeSeries, TimeInterval};

pub fn ht_apply(s: &QuarterWaveSeries) -> Result<QuarterWaveSeries> {
    if s.kind() != BasisKind::Sine {
        return Err(Error::Contract("H_T maps sine series; got a cosine series".into()));
    }
    Ok(s.clone().with_kind(BasisKind::Cosine))
}

pub fn ht_inverse(s: &QuarterWaveSeries) -> Result<QuarterWaveSeries> {
    if s.kind() != BasisKind::Cosine {
        return Err(Error::Contract("H_T^{-1} maps cosine series; got a sine series".into()));
    }
    Ok(s.clone().with_kind(BasisKind::Sine))
}

pub fn ht_spacetime(s: &SpaceTimeSeries) -> Result<SpaceTimeSeries> {
    if s.kind() != BasisKind::Sine {
        return Err(Error::Contract("space-time H_T expects a sine temporal basis".into()));
    }
    Ok(s.clone().with_kind(BasisKind::Cosine))
}

pub fn ht_spacetime_inverse(s: &SpaceTimeSeries) -> Result<SpaceTimeSeries> {
    if s.kind() != BasisKind::Cosine {
        return Err(Error::Contract("space-time H_T^{-1} expects a cosine temporal basis".into()));
    }
    Ok(s.clone().with_kind(BasisKind::Sine))
}

/// `M[j][k] = ∫_0^T sin(ω_j t) cos(ω_k t) dt`, so `cᵀ M c = ⟨u, H_T u⟩` for
/// `u = Σ c_k sin(ω_k t)`.
pub fn ht_gram(interval: TimeInterval, n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::Parameter("Gram matrix needs at least one mode".into()));
    }
    let t = interval.final_time();
    Ok(DMatrix::from_fn(n, n, |j, k| sin_cos_integral(t, j, k)))
}

/// `H_T` of a piecewise polynomial, truncated to the interval's modes.
pub fn ht_of_piecewise(p: &PiecewisePoly, interval: TimeInterval) -> QuarterWaveSeries {
    analyze_piecewise(p, interval, BasisKind::Sine).with_kind(BasisKind::Cosine)
}

/// Per-point `H_T` of a discrete density.
pub fn ht_density(d: &BoundaryDensity) -> [QuarterWaveSeries; 2] {
    let sigma = d.to_sigma();
    let interval = d.grid().interval();
    [ht_of_piecewise(sigma.part(0), interval), ht_of_piecewise(sigma.part(1), interval)]
}

/// `κ_T w(x,t) = w(x, T - t)`.
pub trait TimeReversal: Sized {
    fn time_reversal(&self, final_time: f64) -> Self;
}

impl TimeReversal for BoundaryDensity {
    fn time_reversal(&self, final_time: f64) -> Self {
        assert_eq!(final_time, self.grid().final_time(), "κ_T must use the grid's final time");
        self.time_reversed()
    }
}

impl TimeReversal for SigmaFunction {
    fn time_reversal(&self, final_time: f64) -> Self {
        self.time_reversed(final_time)
    }
}

impl TimeReversal for PiecewisePoly {
    fn time_reversal(&self, final_time: f64) -> Self {
        self.reversed(final_time)
    }
}

impl TimeReversal for WaveField {
    fn time_reversal(&self, final_time: f64) -> Self {
        self.time_reversed(final_time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundaryGrid, Space};
    use crate::quad::GaussRule;
    use nalgebra::SymmetricEigen;
    use std::f64::consts::PI;

    fn iv(t: f64, n: usize) -> TimeInterval {
        TimeInterval::new(t, n).unwrap()
    }

    #[test]
    fn transform_flips_basis_only() {
        let s = QuarterWaveSeries::new(iv(1.0, 3), BasisKind::Sine, vec![0.3, -1.2, 0.5]).unwrap();
        let c = ht_apply(&s).unwrap();
        assert_eq!(c.kind(), BasisKind::Cosine);
        assert_eq!(c.coeffs(), s.coeffs());
        assert_eq!(ht_inverse(&c).unwrap(), s);
        assert!(ht_apply(&c).is_err());
        assert!(ht_inverse(&s).is_err());

        let first = QuarterWaveSeries::new(iv(1.0, 2), BasisKind::Sine, vec![1.0, 0.0]).unwrap();
        let image = ht_apply(&first).unwrap();
        for t in [0.0, 0.3, 0.8] {
            assert!((image.synthesize(t).unwrap() - (PI * t / 2.0).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn spacetime_transform() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 0)] = 1.0;
        let s = SpaceTimeSeries::new(iv(1.0, 3), BasisKind::Sine, m).unwrap();
        let c = ht_spacetime(&s).unwrap();
        assert!((c.eval(0.4, 0.6).unwrap() - (PI / 2.0 * 0.6).cos()).abs() < 1e-15);
        assert_eq!(ht_spacetime_inverse(&c).unwrap(), s);
        assert!(ht_spacetime(&c).is_err());
    }

    #[test]
    fn gram_entries_and_scaling() {
        let g = ht_gram(iv(1.0, 8), 8).unwrap();
        assert!((g[(0, 0)] - 1.0 / PI).abs() < 1e-15);
        let rule = GaussRule::new(40);
        for (j, k) in [(0, 1), (2, 5), (7, 3)] {
            let (wj, wk) = ((0.5 + j as f64) * PI, (0.5 + k as f64) * PI);
            let oracle = rule.integrate(0.0, 1.0, |t| (wj * t).sin() * (wk * t).cos());
            assert!((g[(j, k)] - oracle).abs() < 1e-13);
        }
        let g3 = ht_gram(iv(3.0, 8), 8).unwrap();
        assert!((g3 - g.scale(3.0)).amax() < 1e-14);
        let sym = (&g + g.transpose()).scale(0.5);
        let min = SymmetricEigen::new(sym).eigenvalues.min();
        assert!(min >= -1e-12, "smallest eigenvalue {min}");
    }

    #[test]
    fn time_reversal_of_first_mode() {
        // sin(ω_0 (T - t)) = cos(ω_0 t)
        let t_end = 1.3;
        let grid = BoundaryGrid::new(iv(t_end, 8), 8).unwrap();
        let w0 = grid.interval().omega(0);
        let d = BoundaryDensity::interpolate(grid, Space::LinearStart, |_, t| (w0 * t).sin()).unwrap();
        let r = d.time_reversal(t_end);
        for t in grid.nodes() {
            assert!((r.eval(0, t) - (w0 * t).cos()).abs() < 1e-14);
        }
        assert_eq!(r.time_reversal(t_end), d);
    }
}
