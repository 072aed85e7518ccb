//! Randomized property suites for the transform, the jump relations, the
//! representation formula and the Calderón identities.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Profile, WaveField};
use crate::grid::BoundaryGrid;
use crate::hilbert::{ht_apply, ht_gram, ht_inverse};
use crate::operators::{calderon_residuals, CalderonResiduals};
use crate::poly::{PiecewisePoly, Poly};
use crate::quad::gauss32;
use crate::potentials::{potential_trace, representation_of_field, LayerKind, Pair, Side, TraceKind};
use crate::spectral::{BasisKind, QuarterWaveSeries, TimeInterval};

/// Outcome of one named invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max deviation {:.3e} (tolerance {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            self.tolerance
        )
    }
}

pub const HT_TOLERANCE: f64 = 1e-12;
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
pub const JUMP_TOLERANCE: f64 = 1e-10;
pub const REPRESENTATION_TOLERANCE: f64 = 1e-8;

fn random_series(rng: &mut ChaCha8Rng, interval: TimeInterval, kind: BasisKind) -> Result<QuarterWaveSeries> {
    let coeffs = (0..interval.n_modes()).map(|_| rng.random_range(-1.0..1.0)).collect();
    QuarterWaveSeries::new(interval, kind, coeffs)
}

/// `∫_0^T a b dt` by 32-point Gauss on panels of half a period of the top
/// mode, each series evaluated in its own basis.
fn quadrature_inner(a: &QuarterWaveSeries, b: &QuarterWaveSeries) -> f64 {
    let interval = a.interval();
    let (end, n) = (interval.final_time(), interval.n_modes());
    let width = end / n as f64;
    let pick = |kind: BasisKind, z: Complex64| if kind == BasisKind::Sine { z.im } else { z.re };
    let mut total = 0.0;
    for panel in 0..n {
        let lo = panel as f64 * width;
        for (t, w) in gauss32().mapped(lo, lo + width) {
            // ω_k t = (2k + 1) θ
            let theta = std::f64::consts::FRAC_PI_2 * t / end;
            let step = Complex64::from_polar(1.0, 2.0 * theta);
            let mut z = Complex64::from_polar(1.0, theta);
            let (mut va, mut vb) = (0.0, 0.0);
            for (ca, cb) in a.coeffs().iter().zip(b.coeffs()) {
                va += ca * pick(a.kind(), z);
                vb += cb * pick(b.kind(), z);
                z *= step;
            }
            total += w * va * vb;
        }
    }
    total
}

fn max_diff(a: &QuarterWaveSeries, b: &QuarterWaveSeries) -> f64 {
    if a.kind() != b.kind() {
        return f64::INFINITY;
    }
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Adjointness, isometry, inverse composition, derivative anti-commutation
/// and positivity of `H_T` on random band-limited inputs.
pub fn ht_property_suite(samples: usize, max_modes: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 5];
    for _ in 0..samples {
        let n = rng.random_range(1..=max_modes);
        let interval = TimeInterval::new(rng.random_range(0.5..4.0), n)?;
        let u = random_series(&mut rng, interval, BasisKind::Sine)?;
        let v = random_series(&mut rng, interval, BasisKind::Cosine)?;

        // ⟨H_T u, v⟩ = ⟨u, H_T⁻¹ v⟩, both pairings by quadrature
        let lhs = quadrature_inner(&ht_apply(&u)?, &v);
        let rhs = quadrature_inner(&u, &ht_inverse(&v)?);
        worst[0] = worst[0].max((lhs - rhs).abs() / (1.0 + lhs.abs()));

        worst[1] = worst[1].max((ht_apply(&u)?.l2_norm() - u.l2_norm()).abs());

        let back = ht_inverse(&ht_apply(&u)?)?;
        let forth = ht_apply(&ht_inverse(&v)?)?;
        worst[2] = worst[2].max(max_diff(&back, &u)).max(max_diff(&forth, &v));

        // ∂_t H_T u = -H_T⁻¹ ∂_t u
        let lhs = ht_apply(&u)?.derivative();
        let rhs = ht_inverse(&u.derivative())?.scaled(-1.0);
        worst[3] = worst[3].max(max_diff(&lhs, &rhs));

        let gram = ht_gram(interval, n)?;
        let c = DVector::from_column_slice(u.coeffs());
        let form = (c.transpose() * &gram * &c)[(0, 0)];
        worst[4] = worst[4].max(-form);
    }
    Ok(vec![
        Check::new("adjointness <H_T u, v> = <u, H_T^-1 v>", worst[0], HT_TOLERANCE),
        Check::new("isometry |H_T u| = |u|", worst[1], HT_TOLERANCE),
        Check::new("inverse composition", worst[2], HT_TOLERANCE),
        Check::new("derivative anti-commutation", worst[3], HT_TOLERANCE),
        Check::new("positivity <u, H_T u> >= 0", worst[4], POSITIVITY_TOLERANCE),
    ])
}

/// Random piecewise polynomial of degree ≤ 3 per step, zero at `t = 0`
/// when `from_zero` is set.
fn random_piecewise(rng: &mut ChaCha8Rng, grid: &BoundaryGrid, from_zero: bool) -> PiecewisePoly {
    let m = grid.m_steps();
    let pieces = (0..m)
        .map(|k| {
            let degree = rng.random_range(0..=3);
            let mut c: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
            if from_zero && k == 0 {
                c[0] = 0.0;
            }
            Poly::new(c)
        })
        .collect();
    PiecewisePoly::new(grid.nodes(), pieces)
}

/// `exterior - interior` of a trace.
fn jump(kind: LayerKind, which: TraceKind, density: Pair<'_>, point: usize, t: f64) -> f64 {
    potential_trace(kind, which, Side::Exterior, density, point, t)
        - potential_trace(kind, which, Side::Interior, density, point, t)
}

/// The four jump relations at the time-step midpoints of random densities.
pub fn jump_relation_suite(samples: usize, steps: &[usize], final_time: f64, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 4];
    for i in 0..samples {
        let m = steps[i % steps.len()];
        let grid = BoundaryGrid::new(TimeInterval::new(final_time, 4 * m)?, m)?;
        let w = [random_piecewise(&mut rng, &grid, false), random_piecewise(&mut rng, &grid, false)];
        let z = [random_piecewise(&mut rng, &grid, true), random_piecewise(&mut rng, &grid, true)];
        let (wp, zp): (Pair, Pair) = ([&w[0], &w[1]], [&z[0], &z[1]]);
        for point in 0..2 {
            for t in grid.midpoints() {
                let deviations = [
                    jump(LayerKind::Single, TraceKind::Dirichlet, wp, point, t),
                    jump(LayerKind::Single, TraceKind::Neumann, wp, point, t) + w[point].eval(t),
                    jump(LayerKind::Double, TraceKind::Dirichlet, zp, point, t) - z[point].eval(t),
                    jump(LayerKind::Double, TraceKind::Neumann, zp, point, t),
                ];
                for (acc, d) in worst.iter_mut().zip(deviations) {
                    *acc = acc.max(d.abs());
                }
            }
        }
    }
    Ok(vec![
        Check::new("[trace S w] = 0", worst[0], JUMP_TOLERANCE),
        Check::new("[normal trace S w] = -w", worst[1], JUMP_TOLERANCE),
        Check::new("[trace D z] = z", worst[2], JUMP_TOLERANCE),
        Check::new("[normal trace D z] = 0", worst[3], JUMP_TOLERANCE),
    ])
}

/// Reconstruction of a right-moving field from its exact Cauchy data at
/// random interior points.
pub fn representation_check(profile: Profile, points: usize, final_time: f64, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = WaveField::right_moving(profile);
    let mut worst = 0.0f64;
    for _ in 0..points {
        let x = rng.random_range(0.01..0.99);
        let t = rng.random_range(0.0..final_time);
        let err = (representation_of_field(&field, x, t)? - field.value(x, t)).abs();
        worst = worst.max(err);
    }
    Ok(Check::new("representation formula", worst, REPRESENTATION_TOLERANCE))
}

/// Residuals over a refinement sweep, in level order.
pub fn calderon_sweep(final_time: f64, n_modes: usize, levels: &[usize]) -> Result<Vec<(usize, CalderonResiduals)>> {
    levels
        .iter()
        .map(|&m| {
            let grid = BoundaryGrid::new(TimeInterval::new(final_time, n_modes.max(4 * m))?, m)?;
            Ok((m, calderon_residuals(&grid)?))
        })
        .collect()
}

/// Residual below which an identity counts as exact.
pub const ROUNDOFF_RESIDUAL: f64 = 1e-12;

/// One check per identity. On light-cone-aligned sweeps the discrete
/// identities are exact, so the residuals must sit at roundoff; otherwise
/// every refinement ratio must be below one (the deviation reported is the
/// worst ratio).
pub fn calderon_checks(sweep: &[(usize, CalderonResiduals)], aligned: bool) -> Vec<Check> {
    (0..4)
        .map(|i| {
            let values: Vec<f64> = sweep.iter().map(|(_, r)| r.as_array()[i]).collect();
            let name = CalderonResiduals::NAMES[i];
            if aligned {
                let worst = values.iter().cloned().fold(0.0, f64::max);
                Check::new(format!("{name} (exact on aligned grid)"), worst, ROUNDOFF_RESIDUAL)
            } else {
                let worst = values.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
                // strictly below one
                Check::new(format!("{name} refinement ratio"), worst, 1.0 - f64::EPSILON)
            }
        })
        .collect()
}
