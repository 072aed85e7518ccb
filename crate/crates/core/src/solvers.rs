//! Galerkin solvers for the Dirichlet and Neumann boundary integral
//! equations, the discrete Steklov-Poincaré operator and field
//! reconstruction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::WaveField;
use crate::grid::{BoundaryDensity, BoundaryGrid, CauchyData, Space, SpaceTag};
use crate::norms::condition_number;
use crate::operators::{assemble, Operator, OperatorExpr, TestWeight, MODES_PER_STEP};
use crate::potentials::representation_formula;

/// Systems with a larger condition number are reported as singular.
pub const MAX_CONDITION: f64 = 1e13;

/// Test weighting for the first-kind Dirichlet equation `V w = (½I + K) g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirichletMethod {
    /// Test functions transformed by `H_T`.
    Hilbert,
    /// Time derivative of the operator output against the test functions.
    Energetic,
}

/// Double layer variant on the right-hand side of the Neumann equation
/// `W z = (½I - K') λ`. In one space dimension `K` and `K'` share one
/// kernel, so both variants give identical systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeumannRhs {
    AdjointDoubleLayer,
    DoubleLayer,
}

impl NeumannRhs {
    fn operator(self) -> Operator {
        match self {
            NeumannRhs::AdjointDoubleLayer => Operator::AdjointDoubleLayer,
            NeumannRhs::DoubleLayer => Operator::DoubleLayer,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub density: BoundaryDensity,
    /// 2-norm condition number of the system matrix.
    pub condition: f64,
}

/// Solves `a x = b` by LU, rejecting ill-conditioned systems.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let condition = condition_number(a);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularSystem { condition });
    }
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or(Error::SingularSystem { condition })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem { condition });
    }
    Ok((x, condition))
}

fn dirichlet_weight(method: DirichletMethod, grid: &BoundaryGrid) -> Result<(TestWeight, BoundaryGrid)> {
    match method {
        DirichletMethod::Energetic => Ok((TestWeight::TimeDerivative, *grid)),
        DirichletMethod::Hilbert => {
            // the H_T pairing needs enough modes to resolve the steps
            let modes = grid.interval().n_modes().max(MODES_PER_STEP * grid.m_steps());
            Ok((TestWeight::Hilbert, grid.with_modes(modes)?))
        }
    }
}

/// System matrix of the Dirichlet equation for the given method.
pub fn dirichlet_matrix(grid: &BoundaryGrid, method: DirichletMethod) -> Result<DMatrix<f64>> {
    let (weight, g) = dirichlet_weight(method, grid)?;
    Ok(assemble(&Operator::SingleLayer.into(), &g, Space::Constant, Space::Constant, weight)?.entries)
}

/// Solves `V w = (½I + K) g` for the Neumann datum `w` of the interior
/// Dirichlet problem with datum `g`.
pub fn solve_dirichlet(g: &BoundaryDensity, method: DirichletMethod) -> Result<Solution> {
    if g.tag() != SpaceTag::Trace {
        return Err(Error::Contract("Dirichlet datum must be a trace-space density".into()));
    }
    let (weight, grid) = dirichlet_weight(method, g.grid())?;
    let a = assemble(&Operator::SingleLayer.into(), &grid, Space::Constant, Space::Constant, weight)?;
    let rhs = assemble(
        &OperatorExpr::half_identity(1.0, Operator::DoubleLayer),
        &grid,
        Space::LinearStart,
        Space::Constant,
        weight,
    )?;
    let (x, condition) = solve_dense(&a.entries, &rhs.apply(g.coeffs()))?;
    Ok(Solution {
        density: BoundaryDensity::new(*g.grid(), Space::Constant, x.as_slice().to_vec())?,
        condition,
    })
}

/// System matrix of the Neumann equation: `W` on hats vanishing at `0`,
/// tested with hats vanishing at `T`.
pub fn neumann_matrix(grid: &BoundaryGrid) -> Result<DMatrix<f64>> {
    Ok(assemble(&Operator::Hypersingular.into(), grid, Space::LinearStart, Space::LinearEnd, TestWeight::Plain)?.entries)
}

/// Solves `W z = (½I - K') λ` for the Dirichlet datum `z` of the interior
/// Neumann problem with datum `λ`.
pub fn solve_neumann(lambda: &BoundaryDensity, rhs: NeumannRhs) -> Result<Solution> {
    if lambda.tag() != SpaceTag::Dual {
        return Err(Error::Contract("Neumann datum must be a dual-space density".into()));
    }
    let grid = lambda.grid();
    let a = neumann_matrix(grid)?;
    let b = assemble(
        &OperatorExpr::half_identity(-1.0, rhs.operator()),
        grid,
        Space::Constant,
        Space::LinearEnd,
        TestWeight::Plain,
    )?;
    let (x, condition) = solve_dense(&a, &b.apply(lambda.coeffs()))?;
    Ok(Solution {
        density: BoundaryDensity::new(*grid, Space::LinearStart, x.as_slice().to_vec())?,
        condition,
    })
}

/// Discrete Steklov-Poincaré operator `S = V⁻¹ (½I + K)` as a map from
/// Dirichlet coefficients (linears) to Neumann coefficients (steps).
pub fn steklov_poincare(grid: &BoundaryGrid, method: DirichletMethod) -> Result<DMatrix<f64>> {
    let (weight, g) = dirichlet_weight(method, grid)?;
    let a = assemble(&Operator::SingleLayer.into(), &g, Space::Constant, Space::Constant, weight)?.entries;
    let b = assemble(
        &OperatorExpr::half_identity(1.0, Operator::DoubleLayer),
        &g,
        Space::LinearStart,
        Space::Constant,
        weight,
    )?
    .entries;
    let condition = condition_number(&a);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularSystem { condition });
    }
    a.lu().solve(&b).ok_or(Error::SingularSystem { condition })
}

/// Applies a Steklov-Poincaré matrix to a Dirichlet datum.
pub fn apply_steklov(s: &DMatrix<f64>, g: &BoundaryDensity) -> Result<BoundaryDensity> {
    if g.space() != Space::LinearStart || s.ncols() != g.coeffs().len() {
        return Err(Error::Contract("Steklov-Poincaré map expects trace-space coefficients".into()));
    }
    let out = s * DVector::from_column_slice(g.coeffs());
    BoundaryDensity::new(*g.grid(), Space::Constant, out.as_slice().to_vec())
}

/// Evaluates the representation formula at `(x, t)` points.
pub fn reconstruct_field(cauchy: &CauchyData, points: &[(f64, f64)]) -> Result<Vec<f64>> {
    points.iter().map(|&(x, t)| representation_formula(cauchy, x, t)).collect()
}

/// Interpolated Dirichlet trace and step-averaged Neumann trace of a field.
pub fn discrete_cauchy_data(field: &WaveField, grid: BoundaryGrid) -> Result<CauchyData> {
    let g = BoundaryDensity::interpolate(grid, Space::LinearStart, |p, t| field.dirichlet_trace(p, t))?;
    let l = BoundaryDensity::project_constant(grid, |p, t| field.neumann_trace(p, t))?;
    CauchyData::new(g, l)
}
