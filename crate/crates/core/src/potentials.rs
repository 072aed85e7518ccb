//! Retarded layer potentials for the 1D wave equation.
//!
//! With `G(x,t) = ½ H(t - |x|)` the single layer potential of a density
//! `w` on `Γ = {0, 1}` is
//!
//! ```text
//! (S w)(x,t) = ½ Σ_y ∫_0^{t-|x-y|} w(y,τ) dτ
//! ```
//!
//! and since `∂_{n_y} G(x-y, s) = ½ n_y sign(x-y) δ(s - |x-y|)` the double
//! layer potential collapses to a retarded point evaluation
//!
//! ```text
//! (D z)(x,t) = ½ Σ_y n_y sign(x-y) z(y, t-|x-y|).
//! ```
//!
//! On `Γ` the sign of `x - y` for the self term is set by the side the
//! trace is taken from. With outward normals `-1` at `0` and `+1` at `1`
//! this bookkeeping yields `[γ_Σ D z] = z` and `[γ_N S w] = -w`.

use std::f64::consts::PI;

use crate::error::{check_domain, Error, Result};
use crate::field::WaveField;
use crate::grid::{BoundaryDensity, CauchyData, SpaceTag, NORMALS, POINTS};
use crate::poly::PiecewisePoly;
use crate::quad::adaptive;

/// A time-dependent density at one boundary point.
pub trait TimeTrace: Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
    /// `∫_0^s` of the density.
    fn integral_to(&self, s: f64) -> f64;
}

impl TimeTrace for PiecewisePoly {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn derivative(&self, t: f64) -> f64 {
        self.eval_derivative(t)
    }

    fn integral_to(&self, s: f64) -> f64 {
        PiecewisePoly::integral_to(self, s)
    }
}

/// Absolute tolerance for integrating non-polynomial densities.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Dirichlet,
    Neumann,
}

/// Exact boundary trace of a [`WaveField`].
#[derive(Debug, Clone, Copy)]
pub struct FieldTrace<'a> {
    pub field: &'a WaveField,
    pub point: usize,
    pub kind: TraceKind,
}

impl<'a> FieldTrace<'a> {
    pub fn pair(field: &'a WaveField, kind: TraceKind) -> [FieldTrace<'a>; 2] {
        [FieldTrace { field, point: 0, kind }, FieldTrace { field, point: 1, kind }]
    }
}

impl TimeTrace for FieldTrace<'_> {
    fn value(&self, t: f64) -> f64 {
        match self.kind {
            TraceKind::Dirichlet => self.field.dirichlet_trace(self.point, t),
            TraceKind::Neumann => self.field.neumann_trace(self.point, t),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self.kind {
            TraceKind::Dirichlet => self.field.dt(POINTS[self.point], t),
            TraceKind::Neumann => self.field.neumann_trace_dt(self.point, t),
        }
    }

    fn integral_to(&self, s: f64) -> f64 {
        adaptive(|t| self.value(t), 0.0, s, &self.field.kinks(self.point), 0.1 * QUADRATURE_TOLERANCE)
    }
}

pub type Pair<'a> = [&'a dyn TimeTrace; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// `sign(x - y)` for `x → y` on the requested side of boundary point `y`.
fn approach(point: usize, side: Side) -> f64 {
    let inward = if point == 0 { 1.0 } else { -1.0 };
    match side {
        Side::Interior => inward,
        Side::Exterior => -inward,
    }
}

fn causal_value(w: &dyn TimeTrace, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        w.value(s)
    }
}

fn causal_derivative(w: &dyn TimeTrace, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        w.derivative(s)
    }
}

fn causal_integral(w: &dyn TimeTrace, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        w.integral_to(s)
    }
}

/// Fundamental solution of the wave equation in dimension `n ∈ {1, 2}`.
pub fn fundamental_solution(n: usize, x: &[f64], t: f64) -> Result<f64> {
    if x.len() != n {
        return Err(Error::Parameter(format!("point has {} coordinates, dimension is {n}", x.len())));
    }
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    match n {
        1 => Ok(if t > r { 0.5 } else { 0.0 }),
        2 => {
            if (t - r).abs() <= 1e-14 * (1.0 + r) {
                Err(Error::LightCone(t))
            } else if t < r {
                Ok(0.0)
            } else {
                Ok(1.0 / (2.0 * PI * (t * t - r * r).sqrt()))
            }
        }
        3 => Err(Error::Unsupported(
            "the 3D kernel is a distribution; use the retarded layer potentials instead".into(),
        )),
        _ => Err(Error::Unsupported(format!("dimension {n}"))),
    }
}

/// `(S w)(x,t)` for any `x ∈ ℝ`.
pub fn single_layer(w: Pair<'_>, x: f64, t: f64) -> f64 {
    0.5 * (0..2)
        .map(|q| causal_integral(w[q], t - (x - POINTS[q]).abs()))
        .sum::<f64>()
}

/// `(D z)(x,t)` for `x ∉ Γ`.
pub fn double_layer(z: Pair<'_>, x: f64, t: f64) -> Result<f64> {
    if POINTS.contains(&x) {
        return Err(Error::Contract(format!("x = {x} lies on Γ; use potential_trace")));
    }
    Ok(0.5
        * (0..2)
            .map(|q| {
                let d = x - POINTS[q];
                NORMALS[q] * d.signum() * causal_value(z[q], t - d.abs())
            })
            .sum::<f64>())
}

/// One-sided Dirichlet or Neumann trace (`n · ∂_x`) of a layer potential at
/// boundary point `point`.
pub fn potential_trace(
    kind: LayerKind,
    which: TraceKind,
    side: Side,
    density: Pair<'_>,
    point: usize,
    t: f64,
) -> f64 {
    let y = POINTS[point];
    let mut total = 0.0;
    for q in 0..2 {
        let sign = if q == point { approach(point, side) } else { (y - POINTS[q]).signum() };
        let s = t - (y - POINTS[q]).abs();
        let src = density[q];
        total += match (kind, which) {
            (LayerKind::Single, TraceKind::Dirichlet) => causal_integral(src, s),
            (LayerKind::Single, TraceKind::Neumann) => -sign * causal_value(src, s),
            (LayerKind::Double, TraceKind::Dirichlet) => NORMALS[q] * sign * causal_value(src, s),
            (LayerKind::Double, TraceKind::Neumann) => -NORMALS[q] * causal_derivative(src, s),
        };
    }
    let normal = match which {
        TraceKind::Dirichlet => 1.0,
        TraceKind::Neumann => NORMALS[point],
    };
    0.5 * normal * total
}

fn check_time(density: &BoundaryDensity, t: f64) -> Result<()> {
    check_domain("t", t, 0.0, density.grid().final_time())
}

/// Single layer potential of a dual-space density.
pub fn single_layer_eval(w: &BoundaryDensity, x: f64, t: f64) -> Result<f64> {
    if w.tag() != SpaceTag::Dual {
        return Err(Error::Contract("single layer potential expects a dual-space density".into()));
    }
    check_time(w, t)?;
    let sigma = w.to_sigma();
    Ok(single_layer([sigma.part(0), sigma.part(1)], x, t))
}

/// Double layer potential of a trace-space density, `x ∉ Γ`.
pub fn double_layer_eval(z: &BoundaryDensity, x: f64, t: f64) -> Result<f64> {
    if z.tag() != SpaceTag::Trace {
        return Err(Error::Contract("double layer potential expects a trace-space density".into()));
    }
    check_time(z, t)?;
    let sigma = z.to_sigma();
    double_layer([sigma.part(0), sigma.part(1)], x, t)
}

/// `u = S γ_N u - D γ_Σ u` from arbitrary trace pairs.
pub fn representation(neumann: Pair<'_>, dirichlet: Pair<'_>, x: f64, t: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    Ok(single_layer(neumann, x, t) - double_layer(dirichlet, x, t)?)
}

/// Representation formula for discrete Cauchy data at an interior point.
pub fn representation_formula(c: &CauchyData, x: f64, t: f64) -> Result<f64> {
    check_time(c.dirichlet(), t)?;
    let n = c.neumann().to_sigma();
    let d = c.dirichlet().to_sigma();
    representation([n.part(0), n.part(1)], [d.part(0), d.part(1)], x, t)
}

/// Representation formula with the exact traces of a wave field.
pub fn representation_of_field(field: &WaveField, x: f64, t: f64) -> Result<f64> {
    let n = FieldTrace::pair(field, TraceKind::Neumann);
    let d = FieldTrace::pair(field, TraceKind::Dirichlet);
    representation([&n[0], &n[1]], [&d[0], &d[1]], x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Profile;
    use crate::grid::{BoundaryGrid, Space};
    use crate::poly::Poly;
    use crate::spectral::TimeInterval;

    fn unit_at(point: usize, end: f64) -> [PiecewisePoly; 2] {
        let mut parts = [PiecewisePoly::zero(), PiecewisePoly::zero()];
        parts[point] = PiecewisePoly::single(0.0, end, Poly::constant(1.0));
        parts
    }

    #[test]
    fn fundamental_solution_values() {
        assert_eq!(fundamental_solution(1, &[0.5], 0.2).unwrap(), 0.0);
        assert_eq!(fundamental_solution(1, &[0.5], 2.0).unwrap(), 0.5);
        let g2 = fundamental_solution(2, &[0.3, 0.0], 0.5).unwrap();
        assert!((g2 - 1.0 / (2.0 * PI * 0.4)).abs() < 1e-14);
        assert!(matches!(fundamental_solution(2, &[0.3, 0.4], 0.5), Err(Error::LightCone(_))));
        assert!(matches!(fundamental_solution(3, &[0.0, 0.0, 1.0], 2.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn single_layer_values() {
        let w = unit_at(0, 3.0);
        assert_eq!(single_layer([&w[0], &w[1]], 0.5, 0.25), 0.0);
        assert!((single_layer([&w[0], &w[1]], 0.5, 1.0) - 0.25).abs() < 1e-15);
        let both = [
            PiecewisePoly::single(0.0, 3.0, Poly::constant(1.0)),
            PiecewisePoly::single(0.0, 3.0, Poly::constant(1.0)),
        ];
        assert!((single_layer([&both[0], &both[1]], 0.0, 2.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn double_layer_values() {
        let z = unit_at(0, 3.0);
        let pair: Pair = [&z[0], &z[1]];
        assert_eq!(double_layer(pair, 0.5, 0.25).unwrap(), 0.0);
        // -½ z_0(t - x) inside Ω; the jump relation [γ_Σ D z] = z fixes this sign
        assert!((double_layer(pair, 0.5, 1.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(double_layer(pair, 0.0, 1.0).is_err());
    }

    #[test]
    fn single_layer_traces_for_unit_density() {
        let w = unit_at(0, 3.0);
        let pair: Pair = [&w[0], &w[1]];
        let t = 0.6;
        for side in [Side::Interior, Side::Exterior] {
            let v = potential_trace(LayerKind::Single, TraceKind::Dirichlet, side, pair, 0, t);
            assert!((v - t / 2.0).abs() < 1e-15);
        }
        let int = potential_trace(LayerKind::Single, TraceKind::Neumann, Side::Interior, pair, 0, t);
        let ext = potential_trace(LayerKind::Single, TraceKind::Neumann, Side::Exterior, pair, 0, t);
        assert!((int - 0.5).abs() < 1e-15);
        assert!((ext + 0.5).abs() < 1e-15);
    }

    #[test]
    fn one_sided_limits_agree_with_traces() {
        // independent of the trace bookkeeping: evaluate the potentials just
        // off the boundary and difference them
        let z = [
            PiecewisePoly::new(vec![0.0, 0.7, 2.0], vec![Poly::linear(0.0, 1.3), Poly::new(vec![0.91, -0.4, 0.2])]),
            PiecewisePoly::single(0.0, 2.0, Poly::new(vec![0.0, 0.5, -0.1])),
        ];
        let pair: Pair = [&z[0], &z[1]];
        let eps = 1e-7;
        for point in 0..2 {
            let y = POINTS[point];
            let inward = if point == 0 { 1.0 } else { -1.0 };
            for t in [0.35, 1.2, 1.85] {
                for (side, dir) in [(Side::Interior, inward), (Side::Exterior, -inward)] {
                    let x1 = y + dir * eps;
                    let x2 = y + dir * 2.0 * eps;
                    let d = potential_trace(LayerKind::Double, TraceKind::Dirichlet, side, pair, point, t);
                    assert!((d - double_layer(pair, x1, t).unwrap()).abs() < 1e-6);
                    let s = potential_trace(LayerKind::Single, TraceKind::Neumann, side, pair, point, t);
                    let fd = (single_layer(pair, x2, t) - single_layer(pair, x1, t)) / (x2 - x1);
                    assert!((s - NORMALS[point] * fd).abs() < 1e-5);
                    let dn = potential_trace(LayerKind::Double, TraceKind::Neumann, side, pair, point, t);
                    let fd = (double_layer(pair, x2, t).unwrap() - double_layer(pair, x1, t).unwrap()) / (x2 - x1);
                    assert!((dn - NORMALS[point] * fd).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn representation_reconstructs_dalembert_field() {
        let u = WaveField::right_moving(Profile::Power(2));
        let v = representation_of_field(&u, 0.5, 1.2).unwrap();
        assert!((v - 0.49).abs() < 1e-8);
        assert!(representation_of_field(&u, 0.5, 0.3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn zero_cauchy_data_gives_zero() {
        let grid = BoundaryGrid::new(TimeInterval::new(2.0, 16).unwrap(), 4).unwrap();
        let c = CauchyData::zeros(grid);
        assert_eq!(representation_formula(&c, 0.4, 1.3).unwrap(), 0.0);
        let w = BoundaryDensity::zeros(grid, Space::LinearStart);
        assert!(single_layer_eval(&w, 0.4, 1.0).is_err());
        assert!(double_layer_eval(&w, 0.4, 2.5).is_err());
    }
}
