//! Quarter-wave temporal bases on `(0, T)` and the Neumann eigenbasis of
//! `(0, 1)`.
//!
//! A sine series `Σ u_k sin(ω_k t)` with `ω_k = (π/2 + kπ)/T` vanishes at
//! `t = 0`; the matching cosine series vanishes at `t = T`. Coefficients use
//! the `(2/T)∫…` convention, so the `T/2` factor lives in the norms.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::DMatrix;

use crate::error::{check_domain, Error, Result};
use crate::poly::PiecewisePoly;
use crate::quad::gauss32;

/// Default series truncation.
pub const DEFAULT_MODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    final_time: f64,
    n_modes: usize,
}

impl TimeInterval {
    pub fn new(final_time: f64, n_modes: usize) -> Result<Self> {
        if !(final_time.is_finite() && final_time > 0.0) {
            return Err(Error::Parameter(format!("final time must be positive, got {final_time}")));
        }
        if n_modes == 0 {
            return Err(Error::Parameter("series truncation must be at least 1".into()));
        }
        Ok(Self { final_time, n_modes })
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn with_modes(&self, n_modes: usize) -> Result<Self> {
        Self::new(self.final_time, n_modes)
    }

    /// Frequency of mode `k`.
    pub fn omega(&self, k: usize) -> f64 {
        (FRAC_PI_2 + k as f64 * PI) / self.final_time
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n_modes).map(|k| self.omega(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `sin(ω_k t)`, vanishing at `t = 0`.
    Sine,
    /// `cos(ω_k t)`, vanishing at `t = T`.
    Cosine,
}

impl BasisKind {
    pub fn eval(self, omega: f64, t: f64) -> f64 {
        match self {
            BasisKind::Sine => (omega * t).sin(),
            BasisKind::Cosine => (omega * t).cos(),
        }
    }

    pub fn paired(self) -> Self {
        match self {
            BasisKind::Sine => BasisKind::Cosine,
            BasisKind::Cosine => BasisKind::Sine,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarterWaveSeries {
    interval: TimeInterval,
    kind: BasisKind,
    coeffs: Vec<f64>,
}

impl QuarterWaveSeries {
    /// Coefficient length must match `interval.n_modes()`.
    pub fn new(interval: TimeInterval, kind: BasisKind, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != interval.n_modes() {
            return Err(Error::Input(format!(
                "expected {} coefficients, got {}",
                interval.n_modes(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("non-finite series coefficient".into()));
        }
        Ok(Self { interval, kind, coeffs })
    }

    pub fn zeros(interval: TimeInterval, kind: BasisKind) -> Self {
        Self { interval, kind, coeffs: vec![0.0; interval.n_modes()] }
    }

    pub fn interval(&self) -> TimeInterval {
        self.interval
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn with_kind(mut self, kind: BasisKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn synthesize(&self, t: f64) -> Result<f64> {
        check_domain("t", t, 0.0, self.interval.final_time())?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * self.kind.eval(self.interval.omega(k), t))
            .sum()
    }

    /// `(T/2 · Σ (1+ω_k²)^order c_k²)^{1/2}`; order 0 is the `L²(0,T)` norm.
    pub fn sobolev_norm(&self, order: f64) -> Result<f64> {
        if ![-0.5, 0.0, 0.5, 1.0].contains(&order) {
            return Err(Error::Parameter(format!("unsupported Sobolev order {order}")));
        }
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (1.0 + self.interval.omega(k).powi(2)).powf(order) * c * c)
            .sum();
        Ok((0.5 * self.interval.final_time() * sum).sqrt())
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0).expect("order 0 is supported")
    }

    /// Term-wise time derivative, expressed in the paired basis.
    pub fn derivative(&self) -> QuarterWaveSeries {
        let sign = match self.kind {
            BasisKind::Sine => 1.0,
            BasisKind::Cosine => -1.0,
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| sign * self.interval.omega(k) * c)
            .collect();
        QuarterWaveSeries { interval: self.interval, kind: self.kind.paired(), coeffs }
    }

    pub fn scaled(&self, c: f64) -> QuarterWaveSeries {
        QuarterWaveSeries {
            interval: self.interval,
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Exact `L²(0,T)` inner product of two truncated series.
    pub fn l2_inner(&self, other: &QuarterWaveSeries) -> Result<f64> {
        if self.interval.final_time() != other.interval.final_time() {
            return Err(Error::Contract("series live on different time intervals".into()));
        }
        let half_t = 0.5 * self.interval.final_time();
        if self.kind == other.kind {
            return Ok(half_t * self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum::<f64>());
        }
        let (sines, cosines) = match self.kind {
            BasisKind::Sine => (self, other),
            BasisKind::Cosine => (other, self),
        };
        let mut total = 0.0;
        for (j, a) in sines.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (k, b) in cosines.coeffs.iter().enumerate() {
                total += a * b * sin_cos_integral(self.interval.final_time(), j, k);
            }
        }
        Ok(total)
    }
}

/// `∫_0^T sin(ω_j t) cos(ω_k t) dt` in closed form.
pub(crate) fn sin_cos_integral(final_time: f64, j: usize, k: usize) -> f64 {
    // (ω_j ± ω_k) T = (j + k + 1)π and (j - k)π
    let sum = (j + k + 1) as f64 * PI;
    let mut val = (1.0 - sum.cos()) / sum;
    if j != k {
        let diff = (j as f64 - k as f64) * PI;
        val += (1.0 - diff.cos()) / diff;
    }
    0.5 * final_time * val
}

fn cosine_or_sine(kind: BasisKind, moment: num_complex::Complex64) -> f64 {
    match kind {
        BasisKind::Sine => moment.im,
        BasisKind::Cosine => moment.re,
    }
}

/// Sine coefficients `u_k = (2/T)∫_0^T f(t) sin(ω_k t) dt` of a general
/// callable, by composite Gauss–Legendre with 32 nodes per half-period of
/// the highest mode.
pub fn analyze_time(f: impl Fn(f64) -> f64, interval: TimeInterval) -> Result<QuarterWaveSeries> {
    analyze_callable(f, interval, BasisKind::Sine, &[])
}

/// As [`analyze_time`] for either basis; panels are additionally split at
/// `breakpoints` so kinks and jumps of `f` fall on panel edges.
pub fn analyze_callable(
    f: impl Fn(f64) -> f64,
    interval: TimeInterval,
    kind: BasisKind,
    breakpoints: &[f64],
) -> Result<QuarterWaveSeries> {
    let t_end = interval.final_time();
    let half_period = PI / interval.omega(interval.n_modes() - 1);
    let mut cuts = vec![0.0, t_end];
    cuts.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < t_end));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let omegas = interval.omegas();
    let mut acc = vec![0.0; interval.n_modes()];
    for w in cuts.windows(2) {
        let panels = ((w[1] - w[0]) / half_period).ceil().max(1.0) as usize;
        let width = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + p as f64 * width;
            for (t, wt) in gauss32().mapped(a, a + width) {
                let v = f(t);
                if !v.is_finite() {
                    return Err(Error::Input(format!("non-finite sample f({t}) = {v}")));
                }
                for (c, &om) in acc.iter_mut().zip(&omegas) {
                    *c += wt * v * kind.eval(om, t);
                }
            }
        }
    }
    let scale = 2.0 / t_end;
    QuarterWaveSeries::new(interval, kind, acc.into_iter().map(|c| scale * c).collect())
}

/// Exact coefficients of a piecewise polynomial (zero outside its support).
pub fn analyze_piecewise(p: &PiecewisePoly, interval: TimeInterval, kind: BasisKind) -> QuarterWaveSeries {
    let scale = 2.0 / interval.final_time();
    let coeffs = interval
        .omegas()
        .into_iter()
        .map(|om| scale * cosine_or_sine(kind, p.fourier_moment(om)))
        .collect();
    QuarterWaveSeries { interval, kind, coeffs }
}

/// Raw moments `∫ p(t) b_k(t) dt` for every mode.
pub(crate) fn moments(p: &PiecewisePoly, interval: &TimeInterval, kind: BasisKind) -> Vec<f64> {
    interval
        .omegas()
        .into_iter()
        .map(|om| cosine_or_sine(kind, p.fourier_moment(om)))
        .collect()
}

/// Neumann eigenfunction of `-Δ` on `(0,1)`, normalised in `L²`.
pub fn neumann_eigenfunction(i: usize, x: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    Ok(if i == 0 { 1.0 } else { SQRT_2 * (i as f64 * PI * x).cos() })
}

pub fn neumann_eigenvalue(i: usize) -> f64 {
    (i as f64 * PI).powi(2)
}

/// Coefficients `u_{i,k}` of `Σ u_{i,k} b_k(t) φ_i(x)`; rows are spatial
/// modes, columns temporal modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeSeries {
    interval: TimeInterval,
    kind: BasisKind,
    coeffs: DMatrix<f64>,
}

impl SpaceTimeSeries {
    pub fn new(interval: TimeInterval, kind: BasisKind, coeffs: DMatrix<f64>) -> Result<Self> {
        if coeffs.ncols() != interval.n_modes() || coeffs.nrows() == 0 {
            return Err(Error::Input(format!(
                "coefficient matrix {}x{} does not match {} temporal modes",
                coeffs.nrows(),
                coeffs.ncols(),
                interval.n_modes()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("non-finite space-time coefficient".into()));
        }
        Ok(Self { interval, kind, coeffs })
    }

    pub fn interval(&self) -> TimeInterval {
        self.interval
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn n_space(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub(crate) fn with_kind(mut self, kind: BasisKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        check_domain("t", t, 0.0, self.interval.final_time())?;
        let mut total = 0.0;
        for i in 0..self.n_space() {
            let phi = neumann_eigenfunction(i, x)?;
            for k in 0..self.interval.n_modes() {
                total += self.coeffs[(i, k)] * phi * self.kind.eval(self.interval.omega(k), t);
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::quad::GaussRule;

    fn interval(t: f64, n: usize) -> TimeInterval {
        TimeInterval::new(t, n).unwrap()
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(TimeInterval::new(0.0, 4).is_err());
        assert!(TimeInterval::new(1.0, 0).is_err());
    }

    #[test]
    fn single_mode_analyzes_to_unit_vector() {
        let iv = interval(1.0, 4);
        let w0 = iv.omega(0);
        let s = analyze_time(|t| (w0 * t).sin(), iv).unwrap();
        for (k, c) in s.coeffs().iter().enumerate() {
            let expected = if k == 0 { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-13, "mode {k}: {c}");
        }
        let zero = analyze_time(|_| 0.0, iv).unwrap();
        assert!(zero.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn constant_function_coefficients() {
        // u_k = 2/(T ω_k) because cos(ω_k T) = 0
        let iv = interval(1.0, 8);
        let s = analyze_time(|_| 1.0, iv).unwrap();
        assert!((s.coeffs()[0] - 4.0 / PI).abs() < 1e-13);
        for k in 0..8 {
            assert!((s.coeffs()[k] - 2.0 / iv.omega(k)).abs() < 1e-12);
        }
        let exact = analyze_piecewise(&PiecewisePoly::single(0.0, 1.0, Poly::constant(1.0)), iv, BasisKind::Sine);
        for (a, b) in s.coeffs().iter().zip(exact.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let iv = interval(1.0, 4);
        assert!(matches!(analyze_time(|t| 1.0 / (t - t), iv), Err(Error::Input(_))));
    }

    #[test]
    fn synthesis_at_end_points() {
        let iv = interval(2.0, 3);
        let s = QuarterWaveSeries::new(iv, BasisKind::Sine, vec![1.0, 0.0, 0.0]).unwrap();
        assert!((s.synthesize(2.0).unwrap() - 1.0).abs() < 1e-15);
        let c = s.clone().with_kind(BasisKind::Cosine);
        assert!(c.synthesize(2.0).unwrap().abs() < 1e-15);
        assert!(s.synthesize(2.5).is_err());
        assert!(s.synthesize(-0.1).is_err());
    }

    #[test]
    fn partial_sum_of_constant_at_midpoint() {
        let iv = interval(1.0, 200);
        let s = analyze_time(|_| 1.0, iv).unwrap();
        assert!((s.synthesize(0.5).unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn sobolev_norms() {
        let iv = interval(2.0, 3);
        let s = QuarterWaveSeries::new(iv, BasisKind::Sine, vec![1.0, 0.0, 0.0]).unwrap();
        assert!((s.sobolev_norm(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(s.sobolev_norm(0.25).is_err());
        assert_eq!(QuarterWaveSeries::zeros(iv, BasisKind::Cosine).sobolev_norm(0.5).unwrap(), 0.0);

        let iv1 = interval(1.0, 2);
        let s = QuarterWaveSeries::new(iv1, BasisKind::Sine, vec![1.0, 1.0]).unwrap();
        let (w0, w1) = (PI / 2.0, 1.5 * PI);
        let expected = (0.5 * ((1.0 + w0 * w0).sqrt() + (1.0 + w1 * w1).sqrt())).sqrt();
        assert!((s.sobolev_norm(0.5).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn l2_norm_matches_quadrature_of_synthesis() {
        let iv = interval(1.7, 6);
        let s = QuarterWaveSeries::new(iv, BasisKind::Sine, vec![0.3, -1.0, 0.2, 0.0, 0.7, -0.1]).unwrap();
        let rule = GaussRule::new(40);
        let quad = rule.integrate(0.0, 1.7, |t| s.eval_unchecked(t).powi(2)).sqrt();
        assert!((quad - s.l2_norm()).abs() < 1e-12);
        let c = s.clone().with_kind(BasisKind::Cosine);
        let mixed = rule.integrate(0.0, 1.7, |t| s.eval_unchecked(t) * c.eval_unchecked(t));
        assert!((mixed - s.l2_inner(&c).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn eigenfunctions() {
        assert_eq!(neumann_eigenfunction(0, 0.3).unwrap(), 1.0);
        assert!((neumann_eigenfunction(1, 0.0).unwrap() - SQRT_2).abs() < 1e-15);
        assert!(neumann_eigenfunction(2, 0.25).unwrap().abs() < 1e-15);
        assert!(neumann_eigenfunction(1, 1.5).is_err());
        assert!((neumann_eigenvalue(2) - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn eigenbasis_is_orthonormal() {
        // products of cos(iπx) cos(jπx) have degree ≤ 20π; 40 Gauss points
        // on 8 panels resolve them to roundoff
        let rule = GaussRule::new(40);
        for i in 0..=10 {
            for j in 0..=10 {
                let mut val = 0.0;
                for p in 0..8 {
                    let a = p as f64 / 8.0;
                    val += rule.integrate(a, a + 0.125, |x| {
                        neumann_eigenfunction(i, x).unwrap() * neumann_eigenfunction(j, x).unwrap()
                    });
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((val - expected).abs() < 1e-12, "({i},{j}) -> {val}");
            }
        }
    }

    #[test]
    fn space_time_eval() {
        let iv = interval(1.0, 2);
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 0)] = 1.0;
        let s = SpaceTimeSeries::new(iv, BasisKind::Sine, m).unwrap();
        let v = s.eval(0.0, 1.0).unwrap();
        assert!((v - SQRT_2).abs() < 1e-14);
        assert!(SpaceTimeSeries::new(iv, BasisKind::Sine, DMatrix::zeros(2, 3)).is_err());
    }
}
