//! Boundary `Σ = {0, 1} × [0, T]`, uniform time steps and the discrete
//! density spaces living on it.

use crate::error::{Error, Result};
use crate::poly::{PiecewisePoly, Poly};
use crate::quad::gauss24;
use crate::spectral::TimeInterval;

/// Boundary points of `Ω = (0, 1)`.
pub const POINTS: [f64; 2] = [0.0, 1.0];
/// Outward normals at [`POINTS`].
pub const NORMALS: [f64; 2] = [-1.0, 1.0];
/// Travel time between the two boundary points.
pub const GAP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryGrid {
    interval: TimeInterval,
    m_steps: usize,
}

impl BoundaryGrid {
    pub fn new(interval: TimeInterval, m_steps: usize) -> Result<Self> {
        if m_steps == 0 {
            return Err(Error::Parameter("a boundary grid needs at least one time step".into()));
        }
        Ok(Self { interval, m_steps })
    }

    pub fn interval(&self) -> TimeInterval {
        self.interval
    }

    pub fn final_time(&self) -> f64 {
        self.interval.final_time()
    }

    pub fn m_steps(&self) -> usize {
        self.m_steps
    }

    pub fn step(&self) -> f64 {
        self.final_time() / self.m_steps as f64
    }

    /// Node `t_k = k T / m`.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.m_steps {
            self.final_time()
        } else {
            self.final_time() * k as f64 / self.m_steps as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m_steps).map(|k| self.node(k)).collect()
    }

    /// Step midpoints.
    pub fn midpoints(&self) -> Vec<f64> {
        (0..self.m_steps).map(|k| 0.5 * (self.node(k) + self.node(k + 1))).collect()
    }

    /// Same grid with a different series truncation.
    pub fn with_modes(&self, n_modes: usize) -> Result<Self> {
        Self::new(self.interval.with_modes(n_modes)?, self.m_steps)
    }

    /// Whether the point-to-point travel time is a whole number of steps,
    /// in which case every retarded basis function lands on the grid again.
    pub fn is_light_cone_aligned(&self) -> bool {
        let r = GAP / self.step();
        (r - r.round()).abs() < 1e-9
    }
}

/// Function-space role of a density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceTag {
    /// Dirichlet-type data, vanishing at `t = 0`.
    Trace,
    /// Neumann-type data in the dual of the `,0` trace space.
    Dual,
    /// Test functions vanishing at `t = T`.
    Adjoint,
}

/// Piecewise-polynomial time bases, `m` functions per boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// Step indicators on `[t_k, t_{k+1})`, `k = 0..m`.
    Constant,
    /// Continuous hats at nodes `t_1..t_m` (vanish at `t = 0`).
    LinearStart,
    /// Continuous hats at nodes `t_0..t_{m-1}` (vanish at `t = T`).
    LinearEnd,
}

impl Space {
    pub fn degree(self) -> usize {
        match self {
            Space::Constant => 0,
            Space::LinearStart | Space::LinearEnd => 1,
        }
    }

    pub fn tag(self) -> SpaceTag {
        match self {
            Space::Constant => SpaceTag::Dual,
            Space::LinearStart => SpaceTag::Trace,
            Space::LinearEnd => SpaceTag::Adjoint,
        }
    }

    /// Total number of basis functions on both boundary points.
    pub fn dim(self, grid: &BoundaryGrid) -> usize {
        2 * grid.m_steps()
    }

    /// Local basis function `k` at one boundary point.
    pub fn basis_function(self, grid: &BoundaryGrid, k: usize) -> PiecewisePoly {
        let m = grid.m_steps();
        assert!(k < m, "basis index {k} out of range for {m} steps");
        let h = grid.step();
        match self {
            Space::Constant => PiecewisePoly::single(grid.node(k), grid.node(k + 1), Poly::constant(1.0)),
            Space::LinearStart => {
                // hat at node k+1
                let (a, c) = (grid.node(k), grid.node(k + 1));
                if k + 1 == m {
                    PiecewisePoly::single(a, c, Poly::linear(0.0, 1.0 / h))
                } else {
                    PiecewisePoly::new(
                        vec![a, c, grid.node(k + 2)],
                        vec![Poly::linear(0.0, 1.0 / h), Poly::linear(1.0, -1.0 / h)],
                    )
                }
            }
            Space::LinearEnd => {
                // hat at node k
                let (c, b) = (grid.node(k), grid.node(k + 1));
                if k == 0 {
                    PiecewisePoly::single(c, b, Poly::linear(1.0, -1.0 / h))
                } else {
                    PiecewisePoly::new(
                        vec![grid.node(k - 1), c, b],
                        vec![Poly::linear(0.0, 1.0 / h), Poly::linear(1.0, -1.0 / h)],
                    )
                }
            }
        }
    }

    /// Global basis function `j` (point `j / m`, local index `j % m`).
    pub fn global_basis(self, grid: &BoundaryGrid, j: usize) -> SigmaFunction {
        let m = grid.m_steps();
        let mut parts = [PiecewisePoly::zero(), PiecewisePoly::zero()];
        parts[j / m] = self.basis_function(grid, j % m);
        SigmaFunction::new(parts)
    }
}

/// A function on `Σ`: one piecewise polynomial in time per boundary point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SigmaFunction {
    parts: [PiecewisePoly; 2],
}

impl SigmaFunction {
    pub fn new(parts: [PiecewisePoly; 2]) -> Self {
        Self { parts }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn part(&self, point: usize) -> &PiecewisePoly {
        &self.parts[point]
    }

    pub fn parts(&self) -> &[PiecewisePoly; 2] {
        &self.parts
    }

    pub fn eval(&self, point: usize, t: f64) -> f64 {
        self.parts[point].eval(t)
    }

    pub fn map(&self, f: impl Fn(&PiecewisePoly) -> PiecewisePoly) -> Self {
        Self::new([f(&self.parts[0]), f(&self.parts[1])])
    }

    pub fn add_scaled(&self, other: &Self, c: f64) -> Self {
        Self::new([
            self.parts[0].add_scaled(&other.parts[0], c),
            self.parts[1].add_scaled(&other.parts[1], c),
        ])
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|p| p.scaled(c))
    }

    /// `L²(Σ)` inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        self.parts[0].inner(&other.parts[0]) + self.parts[1].inner(&other.parts[1])
    }

    /// Swaps the two boundary points and delays by the travel time.
    pub fn swap_delayed(&self, end: f64) -> Self {
        Self::new([self.parts[1].delayed(GAP, end), self.parts[0].delayed(GAP, end)])
    }

    pub fn time_reversed(&self, final_time: f64) -> Self {
        self.map(|p| p.reversed(final_time))
    }
}

/// Coefficients of a discrete density in one of the [`Space`]s; point 0
/// first, then point 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDensity {
    grid: BoundaryGrid,
    space: Space,
    coeffs: Vec<f64>,
}

impl BoundaryDensity {
    pub fn new(grid: BoundaryGrid, space: Space, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.dim(&grid) {
            return Err(Error::Input(format!(
                "density needs {} coefficients, got {}",
                space.dim(&grid),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("non-finite density coefficient".into()));
        }
        Ok(Self { grid, space, coeffs })
    }

    pub fn zeros(grid: BoundaryGrid, space: Space) -> Self {
        Self { grid, space, coeffs: vec![0.0; space.dim(&grid)] }
    }

    /// Nodal interpolant in a linear space; `f(point, t)`.
    pub fn interpolate(grid: BoundaryGrid, space: Space, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let m = grid.m_steps();
        let offset = match space {
            Space::LinearStart => 1,
            Space::LinearEnd => 0,
            Space::Constant => {
                return Err(Error::Contract("nodal interpolation needs a continuous linear space".into()))
            }
        };
        let coeffs = (0..2)
            .flat_map(|p| (0..m).map(move |k| (p, k)))
            .map(|(p, k)| f(p, grid.node(k + offset)))
            .collect();
        Self::new(grid, space, coeffs)
    }

    /// `L²` projection onto step functions (step averages), by 24-point Gauss.
    pub fn project_constant(grid: BoundaryGrid, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let m = grid.m_steps();
        let h = grid.step();
        let mut coeffs = Vec::with_capacity(2 * m);
        for p in 0..2 {
            for k in 0..m {
                let avg = gauss24().integrate(grid.node(k), grid.node(k + 1), |t| f(p, t)) / h;
                coeffs.push(avg);
            }
        }
        Self::new(grid, Space::Constant, coeffs)
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn tag(&self) -> SpaceTag {
        self.space.tag()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients at one boundary point.
    pub fn point_coeffs(&self, point: usize) -> &[f64] {
        let m = self.grid.m_steps();
        &self.coeffs[point * m..(point + 1) * m]
    }

    pub fn to_sigma(&self) -> SigmaFunction {
        let m = self.grid.m_steps();
        let build = |p: usize| {
            (0..m).fold(PiecewisePoly::zero(), |acc, k| {
                let c = self.coeffs[p * m + k];
                if c == 0.0 {
                    acc
                } else {
                    acc.add_scaled(&self.space.basis_function(&self.grid, k), c)
                }
            })
        };
        SigmaFunction::new([build(0), build(1)])
    }

    pub fn eval(&self, point: usize, t: f64) -> f64 {
        let m = self.grid.m_steps();
        (0..m)
            .map(|k| self.coeffs[point * m + k] * self.space.basis_function(&self.grid, k).eval(t))
            .sum()
    }

    /// `‖self - f‖_{L²(Σ)}` by 24-point Gauss on every step.
    pub fn l2_error(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        let sigma = self.to_sigma();
        let mut total = 0.0;
        for p in 0..2 {
            for k in 0..self.grid.m_steps() {
                total += gauss24().integrate(self.grid.node(k), self.grid.node(k + 1), |t| {
                    (sigma.eval(p, t) - f(p, t)).powi(2)
                });
            }
        }
        total.sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_error(|_, _| 0.0)
    }

    /// `κ_T`: reverses time. Hats vanishing at `0` become hats vanishing at `T`.
    pub fn time_reversed(&self) -> Self {
        let m = self.grid.m_steps();
        let space = match self.space {
            Space::Constant => Space::Constant,
            Space::LinearStart => Space::LinearEnd,
            Space::LinearEnd => Space::LinearStart,
        };
        // step k <-> step m-1-k; node k+1 <-> node m-1-k
        let coeffs = (0..2)
            .flat_map(|p| (0..m).rev().map(move |k| p * m + k))
            .map(|i| self.coeffs[i])
            .collect();
        Self { grid: self.grid, space, coeffs }
    }
}

/// Dirichlet and Neumann traces of one wave field on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    dirichlet: BoundaryDensity,
    neumann: BoundaryDensity,
}

impl CauchyData {
    pub fn new(dirichlet: BoundaryDensity, neumann: BoundaryDensity) -> Result<Self> {
        if dirichlet.grid() != neumann.grid() {
            return Err(Error::Contract("Cauchy data must share one grid".into()));
        }
        if dirichlet.tag() != SpaceTag::Trace {
            return Err(Error::Contract("Dirichlet datum must be a trace-space density".into()));
        }
        if neumann.tag() != SpaceTag::Dual {
            return Err(Error::Contract("Neumann datum must be a dual-space density".into()));
        }
        Ok(Self { dirichlet, neumann })
    }

    pub fn zeros(grid: BoundaryGrid) -> Self {
        Self {
            dirichlet: BoundaryDensity::zeros(grid, Space::LinearStart),
            neumann: BoundaryDensity::zeros(grid, Space::Constant),
        }
    }

    pub fn dirichlet(&self) -> &BoundaryDensity {
        &self.dirichlet
    }

    pub fn neumann(&self) -> &BoundaryDensity {
        &self.neumann
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t: f64, m: usize) -> BoundaryGrid {
        BoundaryGrid::new(TimeInterval::new(t, 64).unwrap(), m).unwrap()
    }

    #[test]
    fn hats_form_partition_of_unity_away_from_ends() {
        let g = grid(2.0, 5);
        for t in [0.5, 0.9, 1.33, 1.99] {
            let start: f64 = (0..5).map(|k| Space::LinearStart.basis_function(&g, k).eval(t)).sum();
            let end: f64 = (0..5).map(|k| Space::LinearEnd.basis_function(&g, k).eval(t)).sum();
            assert!((start - 1.0).abs() < 1e-14);
            // LinearEnd tapers to zero on the last step
            if t < g.node(4) {
                assert!((end - 1.0).abs() < 1e-14);
            }
        }
        assert_eq!(Space::LinearStart.basis_function(&g, 0).eval(0.0), 0.0);
        assert!((Space::LinearEnd.basis_function(&g, 0).eval(0.0) - 1.0).abs() < 1e-15);
        assert!(Space::LinearEnd.basis_function(&g, 4).eval(2.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reproduces_linears() {
        let g = grid(1.5, 6);
        let d = BoundaryDensity::interpolate(g, Space::LinearStart, |p, t| (p as f64 + 1.0) * t).unwrap();
        for t in [0.1, 0.77, 1.49] {
            assert!((d.eval(0, t) - t).abs() < 1e-14);
            assert!((d.to_sigma().eval(1, t) - 2.0 * t).abs() < 1e-14);
        }
        assert!(BoundaryDensity::interpolate(g, Space::Constant, |_, t| t).is_err());
    }

    #[test]
    fn coefficient_count_is_checked() {
        let g = grid(1.0, 4);
        assert!(BoundaryDensity::new(g, Space::Constant, vec![0.0; 7]).is_err());
        assert!(BoundaryDensity::new(g, Space::Constant, vec![f64::NAN; 8]).is_err());
    }

    #[test]
    fn time_reversal_of_step_density() {
        let g = grid(2.0, 2);
        let d = BoundaryDensity::new(g, Space::Constant, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let r = d.time_reversed();
        assert_eq!(r.coeffs(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(r.time_reversed(), d);

        let lin = BoundaryDensity::interpolate(g, Space::LinearStart, |_, t| t * t).unwrap();
        let rev = lin.time_reversed();
        assert_eq!(rev.space(), Space::LinearEnd);
        for t in [0.2, 0.9, 1.7] {
            assert!((rev.eval(0, t) - lin.eval(0, 2.0 - t)).abs() < 1e-14);
        }
    }

    #[test]
    fn alignment_detection() {
        assert!(grid(2.0, 8).is_light_cone_aligned());
        assert!(!grid(2.5, 8).is_light_cone_aligned());
    }
}
