//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Each export returns plain numbers or strings so the page can draw them
//! onto a canvas without any glue beyond what `wasm-bindgen` generates.

use wasm_bindgen::prelude::*;

use stbem::config::{Config, ProblemKind};
use stbem::grid::CauchyData;
use stbem::hilbert::ht_apply;
use stbem::solvers::{discrete_cauchy_data, reconstruct_field, solve_dirichlet, DirichletMethod};
use stbem::spectral::{BasisKind, QuarterWaveSeries, TimeInterval};
use stbem::study::{convergence_study, level_grid, manufactured_field, write_csv};

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn method(name: &str) -> Result<DirichletMethod, JsError> {
    match name {
        "ht" => Ok(DirichletMethod::Hilbert),
        "energetic" => Ok(DirichletMethod::Energetic),
        other => Err(JsError::new(&format!("unknown method {other:?}"))),
    }
}

/// Samples `u` and `H_T u` for a sine series with the given coefficients.
/// Returns `[t0, u0, hu0, t1, u1, hu1, ...]`.
#[wasm_bindgen]
pub fn ht_curve(final_time: f64, coeffs: Vec<f64>, samples: usize) -> Result<Vec<f64>, JsError> {
    let interval = TimeInterval::new(final_time, coeffs.len()).map_err(js_err)?;
    let u = QuarterWaveSeries::new(interval, BasisKind::Sine, coeffs).map_err(js_err)?;
    let hu = ht_apply(&u).map_err(js_err)?;
    let n = samples.max(2);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let t = final_time * i as f64 / (n - 1) as f64;
        out.extend([t, u.synthesize(t).map_err(js_err)?, hu.synthesize(t).map_err(js_err)?]);
    }
    Ok(out)
}

/// Dirichlet solve for `u = (t - x)^p` followed by reconstruction on an
/// `nx × nt` grid of the space-time cylinder.
#[wasm_bindgen]
pub struct FieldSolve {
    nx: usize,
    nt: usize,
    values: Vec<f64>,
    exact: Vec<f64>,
    flux_error: f64,
}

#[wasm_bindgen]
impl FieldSolve {
    #[wasm_bindgen(constructor)]
    pub fn new(
        final_time: f64,
        m_steps: usize,
        profile: u32,
        method_name: &str,
        nx: usize,
        nt: usize,
    ) -> Result<FieldSolve, JsError> {
        let config = Config { final_time, ..Config::default() };
        let grid = level_grid(&config, m_steps).map_err(js_err)?;
        let field = manufactured_field(profile);
        let data = discrete_cauchy_data(&field, grid).map_err(js_err)?;
        let flux = solve_dirichlet(data.dirichlet(), method(method_name)?).map_err(js_err)?.density;
        let flux_error = flux.l2_error(|p, t| field.neumann_trace(p, t));
        let cauchy = CauchyData::new(data.dirichlet().clone(), flux).map_err(js_err)?;
        // row j is time level j, column i is position i; interior points only
        let points: Vec<(f64, f64)> = (0..nt)
            .flat_map(|j| {
                let t = final_time * (j as f64 + 0.5) / nt as f64;
                (0..nx).map(move |i| ((i as f64 + 0.5) / nx as f64, t))
            })
            .collect();
        let values = reconstruct_field(&cauchy, &points).map_err(js_err)?;
        let exact = points.iter().map(|&(x, t)| field.value(x, t)).collect();
        Ok(FieldSolve { nx, nt, values, exact, flux_error })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    /// Reconstructed values, row-major in time.
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    /// L2 error of the computed flux on the boundary.
    pub fn flux_error(&self) -> f64 {
        self.flux_error
    }

    pub fn max_field_error(&self) -> f64 {
        self.values.iter().zip(&self.exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Refinement study as CSV text (`level,m,h,err_L2,err_dual_proxy,rate`).
#[wasm_bindgen]
pub fn convergence_csv(final_time: f64, profile: u32, neumann: bool, levels: Vec<usize>) -> Result<String, JsError> {
    let mut config = Config { final_time, profile, levels, ..Config::default() };
    if neumann {
        config.problem = ProblemKind::Neumann;
        config.degree = 1;
    }
    let rows = convergence_study(&config).map_err(js_err)?;
    let mut out = Vec::new();
    write_csv(&rows, &mut out).map_err(js_err)?;
    String::from_utf8(out).map_err(js_err)
}
