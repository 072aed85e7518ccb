//! Closed-form d'Alembert fields on `Ω = (0, 1)` with zero initial data,
//! used as manufactured solutions.

use std::f64::consts::PI;

use crate::grid::{NORMALS, POINTS};

/// Wave profile `F` with `F(s) = 0` for `s ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `F(s) = s^p` for `s > 0`.
    Power(u32),
    /// `F(s) = sin⁴(πs/width)` on `(0, width)`, zero elsewhere.
    Pulse { width: f64 },
}

impl Profile {
    pub fn value(&self, s: f64) -> f64 {
        self.nth(s, 0)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.nth(s, 1)
    }

    pub fn second_derivative(&self, s: f64) -> f64 {
        self.nth(s, 2)
    }

    fn nth(&self, s: f64, order: u32) -> f64 {
        match *self {
            Profile::Power(p) => {
                if s <= 0.0 || order > p {
                    return 0.0;
                }
                let falling: f64 = (0..order).map(|i| (p - i) as f64).product();
                falling * s.powi((p - order) as i32)
            }
            Profile::Pulse { width } => {
                if s <= 0.0 || s >= width {
                    return 0.0;
                }
                let a = PI / width;
                let (sn, cs) = (a * s).sin_cos();
                match order {
                    0 => sn.powi(4),
                    1 => 4.0 * a * sn.powi(3) * cs,
                    _ => a * a * (12.0 * sn * sn * cs * cs - 4.0 * sn.powi(4)),
                }
            }
        }
    }

    /// Arguments where `F` is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            Profile::Power(_) => vec![0.0],
            Profile::Pulse { width } => vec![0.0, width],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `F(t - x)`, entering at `x = 0`.
    Right,
    /// `F(t - (1 - x))`, entering at `x = 1`.
    Left,
}

impl Direction {
    /// Travel distance to `x` from the entry point.
    fn distance(self, x: f64) -> f64 {
        match self {
            Direction::Right => x,
            Direction::Left => 1.0 - x,
        }
    }

    /// `∂_x` of the distance.
    fn slope(self) -> f64 {
        match self {
            Direction::Right => 1.0,
            Direction::Left => -1.0,
        }
    }
}

/// `u(x,t) = Σ c_j F(t - d_j(x))`, optionally time-reversed.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    profile: Profile,
    terms: Vec<(Direction, f64)>,
    reversal: Option<f64>,
}

impl WaveField {
    pub fn new(profile: Profile, terms: Vec<(Direction, f64)>) -> Self {
        Self { profile, terms, reversal: None }
    }

    pub fn right_moving(profile: Profile) -> Self {
        Self::new(profile, vec![(Direction::Right, 1.0)])
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn is_reversed(&self) -> bool {
        self.reversal.is_some()
    }

    /// `κ_T u(x,t) = u(x, T - t)`; applying it twice with the same `T`
    /// returns the original field.
    pub fn time_reversed(&self, final_time: f64) -> Self {
        let reversal = match self.reversal {
            Some(t) if t == final_time => None,
            Some(_) => panic!("nested time reversals with different horizons"),
            None => Some(final_time),
        };
        Self { profile: self.profile, terms: self.terms.clone(), reversal }
    }

    fn time(&self, t: f64) -> (f64, f64) {
        match self.reversal {
            Some(total) => (total - t, -1.0),
            None => (t, 1.0),
        }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        let (t, _) = self.time(t);
        self.terms.iter().map(|&(d, c)| c * self.profile.value(t - d.distance(x))).sum()
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        let (t, sign) = self.time(t);
        sign * self
            .terms
            .iter()
            .map(|&(d, c)| c * self.profile.derivative(t - d.distance(x)))
            .sum::<f64>()
    }

    pub fn dx(&self, x: f64, t: f64) -> f64 {
        let (t, _) = self.time(t);
        self.terms
            .iter()
            .map(|&(d, c)| -c * d.slope() * self.profile.derivative(t - d.distance(x)))
            .sum()
    }

    pub fn dirichlet_trace(&self, point: usize, t: f64) -> f64 {
        self.value(POINTS[point], t)
    }

    /// `n · ∂_x u` at a boundary point.
    pub fn neumann_trace(&self, point: usize, t: f64) -> f64 {
        NORMALS[point] * self.dx(POINTS[point], t)
    }

    /// Time derivative of the Neumann trace.
    pub fn neumann_trace_dt(&self, point: usize, t: f64) -> f64 {
        let x = POINTS[point];
        let (tt, sign) = self.time(t);
        sign * NORMALS[point]
            * self
                .terms
                .iter()
                .map(|&(d, c)| -c * d.slope() * self.profile.second_derivative(tt - d.distance(x)))
                .sum::<f64>()
    }

    /// Times at which the traces at `point` are not smooth.
    pub fn kinks(&self, point: usize) -> Vec<f64> {
        let x = POINTS[point];
        let mut out: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|&(d, _)| self.profile.kinks().into_iter().map(move |k| k + d.distance(x)))
            .map(|t| match self.reversal {
                Some(total) => total - t,
                None => t,
            })
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}
