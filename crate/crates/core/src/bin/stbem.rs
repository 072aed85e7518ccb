//! Command-line front end: verification suites, manufactured solves and
//! convergence studies.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad configuration,
//! 3 solver failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stbem::config::{Config, ConfigError, ProblemKind};
use stbem::field::Profile;
use stbem::solvers::reconstruct_field;
use stbem::study::{convergence_study, manufactured_field, solve_level, write_csv};
use stbem::verify::{
    calderon_checks, calderon_sweep, ht_property_suite, jump_relation_suite, representation_check, Check,
};

#[derive(Parser)]
#[command(name = "stbem", version, about = "Space-time boundary elements for the 1D wave equation")]
struct Cli {
    /// TOML run configuration.
    #[arg(short, long)]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Solve the Dirichlet problem for the manufactured field on geometry.m_steps.
    SolveDirichlet,
    /// Solve the Neumann problem for the manufactured field on geometry.m_steps.
    SolveNeumann,
    /// Solve the configured problem and evaluate the field inside the domain.
    Reconstruct {
        /// Samples per direction.
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Refinement study over study.levels, written to study.output.
    Convergence,
}

#[derive(Subcommand, Clone, Copy)]
enum Suite {
    /// Properties of the modified Hilbert transformation.
    Ht,
    /// Jump relations of the layer potentials.
    Jumps,
    /// Calderón identity residuals over study.levels.
    Calderon,
}

enum Failure {
    Config(ConfigError),
    Verification(Vec<String>),
    Solver(String),
}

impl From<stbem::Error> for Failure {
    fn from(e: stbem::Error) -> Self {
        Failure::Solver(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Solver(format!("i/o: {e}"))
    }
}

const SEED: u64 = 20_240_601;

fn report(checks: &[Check], out: &mut impl Write) -> Result<(), Failure> {
    for c in checks {
        writeln!(out, "{c}")?;
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed))
    }
}

fn verify(suite: Suite, config: &Config, out: &mut impl Write) -> Result<(), Failure> {
    match suite {
        Suite::Ht => report(&ht_property_suite(1000, config.n_modes.min(64), SEED)?, out),
        Suite::Jumps => {
            let mut checks = jump_relation_suite(50, &[8, 16], config.final_time, SEED)?;
            checks.push(representation_check(Profile::Power(config.profile), 100, config.final_time, SEED)?);
            report(&checks, out)
        }
        Suite::Calderon => {
            let sweep = calderon_sweep(config.final_time, config.n_modes, &config.levels)?;
            let mut aligned = true;
            for &(m, r) in &sweep {
                let grid = stbem::study::level_grid(config, m)?;
                aligned &= grid.is_light_cone_aligned();
                let [a, b, c, d] = r.as_array();
                writeln!(out, "m={m} residuals {a:.6e} {b:.6e} {c:.6e} {d:.6e}")?;
            }
            report(&calderon_checks(&sweep, aligned), out)
        }
    }
}

fn write_density(d: &stbem::grid::BoundaryDensity, out: &mut impl Write) -> io::Result<()> {
    let grid = d.grid();
    let m = grid.m_steps();
    let times: Vec<f64> = match d.space() {
        stbem::grid::Space::Constant => grid.midpoints(),
        stbem::grid::Space::LinearStart => (1..=m).map(|k| grid.node(k)).collect(),
        stbem::grid::Space::LinearEnd => (0..m).map(|k| grid.node(k)).collect(),
    };
    writeln!(out, "point,index,t,coefficient")?;
    for p in 0..2 {
        for (k, t) in times.iter().enumerate() {
            writeln!(out, "{p},{k},{t:.12e},{:.12e}", d.point_coeffs(p)[k])?;
        }
    }
    Ok(())
}

fn solve(config: &Config, problem: ProblemKind, out: &mut impl Write) -> Result<(), Failure> {
    let config = Config { problem, degree: if problem == ProblemKind::Dirichlet { 0 } else { 1 }, ..config.clone() };
    let s = solve_level(&config, config.m_steps)?;
    eprintln!(
        "m={} err_L2={:.6e} err_dual_proxy={:.6e} condition={:.3e}",
        config.m_steps, s.err_l2, s.err_dual_proxy, s.solution.condition
    );
    write_density(&s.solution.density, out)?;
    Ok(())
}

fn reconstruct(config: &Config, samples: usize, out: &mut impl Write) -> Result<(), Failure> {
    let s = solve_level(config, config.m_steps)?;
    let field = manufactured_field(config.profile);
    let n = samples.max(2);
    let points: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ((i as f64 + 0.5) / n as f64, config.final_time * j as f64 / (n - 1) as f64))
        .collect();
    let values = reconstruct_field(&s.cauchy()?, &points)?;
    writeln!(out, "x,t,u,exact")?;
    for (&(x, t), v) in points.iter().zip(values) {
        writeln!(out, "{x:.12e},{t:.12e},{v:.12e},{:.12e}", field.value(x, t))?;
    }
    Ok(())
}

fn convergence(config: &Config, out: &mut impl Write) -> Result<(), Failure> {
    let rows = convergence_study(config)?;
    let mut file = BufWriter::new(File::create(&config.output)?);
    write_csv(&rows, &mut file)?;
    file.flush()?;
    write_csv(&rows, out)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = Config::load(&cli.config).map_err(Failure::Config)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Verify { suite } => verify(suite, &config, &mut out),
        Command::SolveDirichlet => solve(&config, ProblemKind::Dirichlet, &mut out),
        Command::SolveNeumann => solve(&config, ProblemKind::Neumann, &mut out),
        Command::Reconstruct { samples } => reconstruct(&config, samples, &mut out),
        Command::Convergence => convergence(&config, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(names)) => {
            eprintln!("verification failed: {}", names.join("; "));
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}
