//! Manufactured-solution solves and refinement studies driven by a
//! [`Config`].

use std::io::{self, Write};

use rayon::prelude::*;

use crate::config::{Config, ProblemKind};
use crate::error::Result;
use crate::field::{Profile, WaveField};
use crate::grid::{BoundaryDensity, BoundaryGrid, CauchyData};
use crate::norms::DUAL_NORM;
use crate::operators::MODES_PER_STEP;
use crate::solvers::{discrete_cauchy_data, solve_dirichlet, solve_neumann, Solution};
use crate::spectral::{analyze_callable, analyze_piecewise, QuarterWaveSeries, TimeInterval};

/// The right-moving field `F(t - x)` with `F(s) = s^p`.
pub fn manufactured_field(profile: u32) -> WaveField {
    WaveField::right_moving(Profile::Power(profile))
}

/// Grid for `m` steps, with the series truncation raised to what the
/// `H_T`-weighted assembly needs.
pub fn level_grid(config: &Config, m: usize) -> Result<BoundaryGrid> {
    let interval = TimeInterval::new(config.final_time, config.n_modes.max(MODES_PER_STEP * m))?;
    BoundaryGrid::new(interval, m)
}

/// Solution of the configured problem on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolve {
    pub data: CauchyData,
    pub solution: Solution,
    pub err_l2: f64,
    pub err_dual_proxy: f64,
}

impl LevelSolve {
    /// The solved Cauchy pair: computed unknown plus the given datum.
    pub fn cauchy(&self) -> Result<CauchyData> {
        match self.solution.density.space() {
            crate::grid::Space::Constant => CauchyData::new(self.data.dirichlet().clone(), self.solution.density.clone()),
            _ => CauchyData::new(self.solution.density.clone(), self.data.neumann().clone()),
        }
    }
}

pub fn solve_level(config: &Config, m: usize) -> Result<LevelSolve> {
    let grid = level_grid(config, m)?;
    let field = manufactured_field(config.profile);
    let data = discrete_cauchy_data(&field, grid)?;
    let (solution, exact): (Solution, Box<dyn Fn(usize, f64) -> f64 + Sync>) = match config.problem {
        ProblemKind::Dirichlet => (
            solve_dirichlet(data.dirichlet(), config.method)?,
            Box::new(|p, t| field.neumann_trace(p, t)),
        ),
        ProblemKind::Neumann => (
            solve_neumann(data.neumann(), config.rhs)?,
            Box::new(|p, t| field.dirichlet_trace(p, t)),
        ),
    };
    let err_l2 = solution.density.l2_error(&exact);
    let err_dual_proxy = dual_proxy_error(&solution.density, &exact, &[&field.kinks(0), &field.kinks(1)])?;
    Ok(LevelSolve { data, solution, err_l2, err_dual_proxy })
}

/// `‖d - f‖` in the order `-½` cosine-series norm.
pub fn dual_proxy_error(d: &BoundaryDensity, f: &(dyn Fn(usize, f64) -> f64 + Sync), kinks: &[&[f64]; 2]) -> Result<f64> {
    let interval = d.grid().interval();
    let sigma = d.to_sigma();
    let mut total = 0.0;
    for p in 0..2 {
        let discrete = analyze_piecewise(sigma.part(p), interval, DUAL_NORM.kind);
        let exact = analyze_callable(|t| f(p, t), interval, DUAL_NORM.kind, kinks[p])?;
        let diff: Vec<f64> = discrete.coeffs().iter().zip(exact.coeffs()).map(|(a, b)| a - b).collect();
        total += QuarterWaveSeries::new(interval, DUAL_NORM.kind, diff)?
            .sobolev_norm(DUAL_NORM.order)?
            .powi(2);
    }
    Ok(total.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub level: usize,
    pub m: usize,
    pub h: f64,
    pub err_l2: f64,
    pub err_dual_proxy: f64,
    /// `log2(err_prev / err)` against the previous level.
    pub rate: Option<f64>,
}

/// Solves every level (concurrently) and reports in level order.
pub fn convergence_study(config: &Config) -> Result<Vec<StudyRow>> {
    let solves: Vec<Result<LevelSolve>> = config.levels.par_iter().map(|&m| solve_level(config, m)).collect();
    let mut rows: Vec<StudyRow> = Vec::with_capacity(solves.len());
    for (level, (solve, &m)) in solves.into_iter().zip(&config.levels).enumerate() {
        let s = solve?;
        let rate = rows.last().map(|prev| (prev.err_l2 / s.err_l2).log2());
        rows.push(StudyRow {
            level,
            m,
            h: config.final_time / m as f64,
            err_l2: s.err_l2,
            err_dual_proxy: s.err_dual_proxy,
            rate,
        });
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "level,m,h,err_L2,err_dual_proxy,rate";

pub fn write_csv(rows: &[StudyRow], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let rate = r.rate.map(|v| format!("{v:.6}")).unwrap_or_default();
        writeln!(out, "{},{},{:.12e},{:.12e},{:.12e},{}", r.level, r.m, r.h, r.err_l2, r.err_dual_proxy, rate)?;
    }
    Ok(())
}
