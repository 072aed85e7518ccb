//! Boundary integral operators and their Galerkin matrices.
//!
//! Taking the traces of the retarded potentials on `Γ = {0, 1}` gives, with
//! `J` time integration from `0`, `∂` time differentiation and `Δ` the map
//! that swaps the two boundary points and delays by the travel time `1`:
//!
//! ```text
//! V  = ½ J (I + Δ)        K  = -½ Δ
//! K' = -½ Δ               W  = ½ ∂ (I - Δ)
//! ```
//!
//! All four map piecewise polynomials to piecewise polynomials, so every
//! Galerkin entry below is an exact integral over light-cone-split pieces.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{BoundaryGrid, SigmaFunction, Space};
use crate::potentials::{potential_trace, LayerKind, Pair, Side, TraceKind};
use crate::spectral::{moments, BasisKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Identity,
    /// `V`
    SingleLayer,
    /// `K`
    DoubleLayer,
    /// `K'`
    AdjointDoubleLayer,
    /// `W`
    Hypersingular,
}

impl Operator {
    /// Applies the operator exactly; the result lives on `[0, end]`.
    pub fn apply(self, f: &SigmaFunction, end: f64) -> SigmaFunction {
        match self {
            Operator::Identity => f.clone(),
            Operator::SingleLayer => {
                let integrated = f.map(|p| p.antiderivative(end));
                integrated.add_scaled(&integrated.swap_delayed(end), 1.0).scaled(0.5)
            }
            Operator::DoubleLayer | Operator::AdjointDoubleLayer => f.swap_delayed(end).scaled(-0.5),
            Operator::Hypersingular => {
                let d = f.map(|p| p.derivative());
                d.add_scaled(&d.swap_delayed(end), -1.0).scaled(0.5)
            }
        }
    }

    /// The same operator evaluated pointwise through the one-sided traces of
    /// the layer potentials; used to cross-check [`Operator::apply`].
    pub fn from_traces(self, density: Pair<'_>, point: usize, t: f64) -> f64 {
        let avg = |kind, which| {
            0.5 * (potential_trace(kind, which, Side::Interior, density, point, t)
                + potential_trace(kind, which, Side::Exterior, density, point, t))
        };
        match self {
            Operator::Identity => density[point].value(t),
            Operator::SingleLayer => {
                potential_trace(LayerKind::Single, TraceKind::Dirichlet, Side::Interior, density, point, t)
            }
            Operator::DoubleLayer => avg(LayerKind::Double, TraceKind::Dirichlet),
            Operator::AdjointDoubleLayer => avg(LayerKind::Single, TraceKind::Neumann),
            Operator::Hypersingular => {
                -potential_trace(LayerKind::Double, TraceKind::Neumann, Side::Interior, density, point, t)
            }
        }
    }
}

/// Linear combination `Σ c_i A_i` of boundary operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr {
    terms: Vec<(f64, Operator)>,
}

impl OperatorExpr {
    pub fn new(terms: Vec<(f64, Operator)>) -> Self {
        Self { terms }
    }

    pub fn single(op: Operator) -> Self {
        Self::new(vec![(1.0, op)])
    }

    /// `½ I + sign · op`.
    pub fn half_identity(sign: f64, op: Operator) -> Self {
        Self::new(vec![(0.5, Operator::Identity), (sign, op)])
    }

    pub fn terms(&self) -> &[(f64, Operator)] {
        &self.terms
    }

    pub fn contains(&self, op: Operator) -> bool {
        self.terms.iter().any(|&(_, o)| o == op)
    }

    pub fn apply(&self, f: &SigmaFunction, end: f64) -> SigmaFunction {
        self.terms
            .iter()
            .fold(SigmaFunction::zero(), |acc, &(c, op)| acc.add_scaled(&op.apply(f, end), c))
    }
}

impl From<Operator> for OperatorExpr {
    fn from(op: Operator) -> Self {
        Self::single(op)
    }
}

/// How the operator output is paired with the test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestWeight {
    /// `⟨A φ, ψ⟩_Σ`
    Plain,
    /// `⟨H_T A φ, ψ⟩_Σ` with the grid's series truncation.
    Hilbert,
    /// `⟨∂_t A φ, ψ⟩_Σ`
    TimeDerivative,
}

/// Minimum series modes per time step for `H_T`-weighted assembly.
pub const MODES_PER_STEP: usize = 4;

/// Dense Galerkin matrix, rows indexed by test functions and columns by
/// trial functions (point 0 block first).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub grid: BoundaryGrid,
    pub trial: Space,
    pub test: Space,
    pub weight: TestWeight,
    pub entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn apply(&self, coeffs: &[f64]) -> DVector<f64> {
        &self.entries * DVector::from_column_slice(coeffs)
    }
}

/// Assembles `⟨weight(expr φ_j), ψ_i⟩_Σ`.
pub fn assemble(
    expr: &OperatorExpr,
    grid: &BoundaryGrid,
    trial: Space,
    test: Space,
    weight: TestWeight,
) -> Result<OperatorMatrix> {
    if expr.contains(Operator::Hypersingular) && trial != Space::LinearStart {
        return Err(Error::Contract(
            "the hypersingular operator needs continuous trial functions vanishing at t = 0".into(),
        ));
    }
    let m = grid.m_steps();
    let end = grid.final_time();
    let interval = grid.interval();
    if weight == TestWeight::Hilbert && interval.n_modes() < MODES_PER_STEP * m {
        return Err(Error::Parameter(format!(
            "H_T-weighted assembly needs at least {} modes for {m} steps, got {}",
            MODES_PER_STEP * m,
            interval.n_modes()
        )));
    }
    let tests: Vec<_> = (0..m).map(|k| test.basis_function(grid, k)).collect();
    // cosine moments of the test functions, shared by both points
    let test_cos: Vec<Vec<f64>> = if weight == TestWeight::Hilbert {
        tests.iter().map(|psi| moments(psi, &interval, BasisKind::Cosine)).collect()
    } else {
        Vec::new()
    };
    let scale = 2.0 / end;

    let columns: Vec<Vec<f64>> = (0..trial.dim(grid))
        .into_par_iter()
        .map(|j| {
            let mut out = expr.apply(&trial.global_basis(grid, j), end);
            if weight == TestWeight::TimeDerivative {
                out = out.map(|p| p.derivative());
            }
            let mut col = vec![0.0; 2 * m];
            for point in 0..2 {
                let part = out.part(point);
                if part.is_zero() {
                    continue;
                }
                match weight {
                    TestWeight::Plain | TestWeight::TimeDerivative => {
                        for (k, psi) in tests.iter().enumerate() {
                            col[point * m + k] = part.inner(psi);
                        }
                    }
                    TestWeight::Hilbert => {
                        let sine = moments(part, &interval, BasisKind::Sine);
                        for (k, cos) in test_cos.iter().enumerate() {
                            col[point * m + k] = scale * sine.iter().zip(cos).map(|(a, b)| a * b).sum::<f64>();
                        }
                    }
                }
            }
            col
        })
        .collect();

    let entries = DMatrix::from_fn(2 * m, trial.dim(grid), |i, j| columns[j][i]);
    Ok(OperatorMatrix { grid: *grid, trial, test, weight, entries })
}

/// `V` with step-function trial and test spaces.
pub fn assemble_v(grid: &BoundaryGrid, trial_degree: usize, test_degree: usize) -> Result<OperatorMatrix> {
    if trial_degree != 0 || test_degree != 0 {
        return Err(Error::Parameter(format!(
            "V is assembled for degree 0/0, got {trial_degree}/{test_degree}"
        )));
    }
    assemble(&Operator::SingleLayer.into(), grid, Space::Constant, Space::Constant, TestWeight::Plain)
}

fn require_trace_trial(trial: Space, name: &str) -> Result<()> {
    if trial != Space::LinearStart {
        return Err(Error::Contract(format!(
            "{name} acts on the trace space: continuous linears vanishing at t = 0"
        )));
    }
    Ok(())
}

pub fn assemble_k(grid: &BoundaryGrid, trial: Space, test: Space) -> Result<OperatorMatrix> {
    require_trace_trial(trial, "K")?;
    assemble(&Operator::DoubleLayer.into(), grid, trial, test, TestWeight::Plain)
}

pub fn assemble_kp(grid: &BoundaryGrid, test: Space) -> Result<OperatorMatrix> {
    assemble(&Operator::AdjointDoubleLayer.into(), grid, Space::Constant, test, TestWeight::Plain)
}

pub fn assemble_w(grid: &BoundaryGrid, trial: Space, test: Space) -> Result<OperatorMatrix> {
    require_trace_trial(trial, "W")?;
    assemble(&Operator::Hypersingular.into(), grid, trial, test, TestWeight::Plain)
}

/// `L²(Σ)` Gram matrix between two bases.
pub fn assemble_mass(grid: &BoundaryGrid, trial: Space, test: Space) -> Result<OperatorMatrix> {
    assemble(&Operator::Identity.into(), grid, trial, test, TestWeight::Plain)
}

/// Base operator of an `H_T`-weighted pairing.
#[derive(Debug, Clone, PartialEq)]
pub enum HilbertBase {
    /// `⟨H_T V w, μ⟩` with step-function trials.
    SingleLayer,
    /// `⟨H_T (expr) g, μ⟩` with trace-space trials.
    Rhs(OperatorExpr),
}

pub fn assemble_ht_weighted(base: &HilbertBase, grid: &BoundaryGrid) -> Result<OperatorMatrix> {
    match base {
        HilbertBase::SingleLayer => {
            assemble(&Operator::SingleLayer.into(), grid, Space::Constant, Space::Constant, TestWeight::Hilbert)
        }
        HilbertBase::Rhs(expr) => assemble(expr, grid, Space::LinearStart, Space::Constant, TestWeight::Hilbert),
    }
}

/// Energetic pairing `⟨∂_t V w, μ⟩` on step functions.
pub fn assemble_energetic(grid: &BoundaryGrid) -> Result<OperatorMatrix> {
    assemble(&Operator::SingleLayer.into(), grid, Space::Constant, Space::Constant, TestWeight::TimeDerivative)
}

/// Galerkin matrices turned into maps between coefficient vectors by
/// `L²` projection onto the natural range space.
#[derive(Debug, Clone)]
pub struct DiscreteCalderon {
    /// `V`: step functions → linears.
    pub v: DMatrix<f64>,
    /// `W`: linears → step functions.
    pub w: DMatrix<f64>,
    /// `K`: linears → linears.
    pub k: DMatrix<f64>,
    /// `K'`: step functions → step functions.
    pub kp: DMatrix<f64>,
}

/// `M_range^{-1} G` for the Galerkin matrix tested against the range space.
pub fn projected_operator(expr: &OperatorExpr, grid: &BoundaryGrid, trial: Space, range: Space) -> Result<DMatrix<f64>> {
    let g = assemble(expr, grid, trial, range, TestWeight::Plain)?.entries;
    let mass = assemble_mass(grid, range, range)?.entries;
    let chol = mass
        .cholesky()
        .ok_or(Error::SingularSystem { condition: f64::INFINITY })?;
    Ok(chol.solve(&g))
}

impl DiscreteCalderon {
    pub fn assemble(grid: &BoundaryGrid) -> Result<Self> {
        let (c, l) = (Space::Constant, Space::LinearStart);
        Ok(Self {
            v: projected_operator(&Operator::SingleLayer.into(), grid, c, l)?,
            w: projected_operator(&Operator::Hypersingular.into(), grid, l, c)?,
            k: projected_operator(&Operator::DoubleLayer.into(), grid, l, l)?,
            kp: projected_operator(&Operator::AdjointDoubleLayer.into(), grid, c, c)?,
        })
    }

    /// Relative residuals of the four product identities, measured on the
    /// columns of `trace_probes` (linears) and `dual_probes` (step functions).
    pub fn residuals(&self, trace_probes: &DMatrix<f64>, dual_probes: &DMatrix<f64>) -> CalderonResiduals {
        let n = self.k.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let half = |a: &DMatrix<f64>, s: f64| id.scale(0.5) + a.scale(s);
        let rel = |lhs: DMatrix<f64>, rhs: DMatrix<f64>| (&lhs - rhs).norm() / lhs.norm();

        let vw = rel(&self.v * &self.w * trace_probes, half(&self.k, -1.0) * half(&self.k, 1.0) * trace_probes);
        let wv = rel(&self.w * &self.v * dual_probes, half(&self.kp, -1.0) * half(&self.kp, 1.0) * dual_probes);
        let vkp = rel(&self.v * &self.kp * dual_probes, &self.k * &self.v * dual_probes);
        let kpw = rel(&self.kp * &self.w * trace_probes, &self.w * &self.k * trace_probes);
        CalderonResiduals { vw, wv, vkp, kpw }
    }
}

/// Relative residuals of `VW = (½I-K)(½I+K)`, `WV = (½I-K')(½I+K')`,
/// `VK' = KV` and `K'W = WK`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalderonResiduals {
    pub vw: f64,
    pub wv: f64,
    pub vkp: f64,
    pub kpw: f64,
}

impl CalderonResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.vw, self.wv, self.vkp, self.kpw]
    }

    pub const NAMES: [&'static str; 4] = ["VW=(I/2-K)(I/2+K)", "WV=(I/2-K')(I/2+K')", "VK'=KV", "K'W=WK"];
}

/// Smooth probe densities: interpolants (linears) and step averages of a
/// fixed family of functions vanishing at `t = 0`.
pub fn calderon_probes(grid: &BoundaryGrid) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    use crate::grid::BoundaryDensity;
    let family: [fn(usize, f64) -> f64; 4] = [
        |p, t| if p == 0 { t * t } else { 0.0 },
        |p, t| if p == 1 { t * t * (2.0 - t).abs() } else { 0.0 },
        |p, t| t * (1.5 * t + p as f64).sin(),
        |p, t| (1.0 - (-(t * t)).exp()) * (1.0 - 2.0 * p as f64),
    ];
    let n = 2 * grid.m_steps();
    let mut trace = DMatrix::zeros(n, family.len());
    let mut dual = DMatrix::zeros(n, family.len());
    for (c, f) in family.iter().enumerate() {
        let lin = BoundaryDensity::interpolate(*grid, Space::LinearStart, f)?;
        let con = BoundaryDensity::project_constant(*grid, f)?;
        trace.set_column(c, &DVector::from_column_slice(lin.coeffs()));
        dual.set_column(c, &DVector::from_column_slice(con.coeffs()));
    }
    Ok((trace, dual))
}

pub fn calderon_residuals(grid: &BoundaryGrid) -> Result<CalderonResiduals> {
    let ops = DiscreteCalderon::assemble(grid)?;
    let (trace, dual) = calderon_probes(grid)?;
    Ok(ops.residuals(&trace, &dual))
}
