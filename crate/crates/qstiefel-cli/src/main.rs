//! Command-line driver: generate problem bundles, run the Riemannian
//! solvers, check residuals, and query the brute-force eigenvalue oracle.
//!
//! Exit codes: 0 success, 1 quality failure (residuals or non-convergence),
//! 2 usage or parse error, 3 internal or oracle error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qstiefel::eig::{generate_problem, EigProblem, ResidualTriple};
use qstiefel::io;
use qstiefel::linalg::is_positive_definite;
use qstiefel::manifold::{ManifoldContext, DEFAULT_TANGENT_TOL};
use qstiefel::solver::{solve_cg, solve_sd, SolverConfig};
use qstiefel::Error;

const TOLS_ENV: &str = "QSTIEFEL_TOLS";

#[derive(Parser)]
#[command(
    name = "qstiefel",
    version,
    about = "Riemannian optimization on generalized quaternionic Stiefel manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random problem bundle (A.qmat, G.qmat, meta.json).
    Generate {
        /// Pencil dimension n.
        #[arg(long)]
        n: usize,
        /// Frame width p (1 <= p <= n).
        #[arg(long)]
        p: usize,
        /// Seed for the problem generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output bundle directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a solver on a bundle and write the iteration trace as CSV.
    Solve {
        /// Which first-order method to run.
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        /// Problem bundle directory.
        #[arg(long)]
        problem: PathBuf,
        /// Seed for the initial point (share it across algorithms to
        /// compare them from the same start).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Iteration budget (default 250).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Gradient-norm stopping tolerance (default 1e-6).
        #[arg(long)]
        grad_tol: Option<f64>,
        /// Where to write the trace CSV.
        #[arg(long)]
        out_trace: PathBuf,
        /// Optionally write the final iterate in QMAT1 format (feed it to
        /// `check`).
        #[arg(long)]
        out_x: Option<PathBuf>,
        /// Also write a gnuplot script next to the trace.
        #[arg(long)]
        emit_plot_script: bool,
        /// Riemannian metric; only the constant-G metric ships.
        #[arg(long, value_enum, default_value_t = Metric::G)]
        metric: Metric,
    },
    /// Print the residual triple and per-column eigenpairs of an iterate.
    Check {
        /// Problem bundle directory.
        #[arg(long)]
        problem: PathBuf,
        /// Iterate in QMAT1 format, shape n x p.
        #[arg(long)]
        x: PathBuf,
    },
    /// Print the k smallest generalized eigenvalues from the brute-force
    /// oracle.
    Oracle {
        /// Problem bundle directory.
        #[arg(long)]
        problem: PathBuf,
        /// How many eigenvalues to print (1 <= k <= n).
        #[arg(long)]
        k: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Algorithm {
    Sd,
    Cg,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Sd => "sd",
            Algorithm::Cg => "cg",
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum Metric {
    /// The constant metric M_X = G.
    G,
}

/// Command failure with its exit-code class.
enum Failure {
    /// Exit 1: residuals or convergence did not meet thresholds.
    Quality(String),
    /// Exit 2: bad arguments or malformed input files.
    Usage(String),
    /// Exit 3: internal errors, oracle breakdowns, I/O failures.
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Quality(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Quality(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_) | Error::Shape(_) | Error::InvalidParameter(_) => Failure::Usage(msg),
            Error::Infeasible { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::NotHermitian { .. }
            | Error::NotDescentDirection { .. }
            | Error::LineSearchFailed { .. } => Failure::Quality(msg),
            Error::PairingFailed { .. }
            | Error::NoConvergence { .. }
            | Error::RankDeficient { .. }
            | Error::WrongBasePoint
            | Error::Io(_) => Failure::Internal(msg),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { n, p, seed, out } => cmd_generate(n, p, seed, &out),
        Command::Solve {
            algorithm,
            problem,
            seed,
            max_iters,
            grad_tol,
            out_trace,
            out_x,
            emit_plot_script,
            metric: Metric::G,
        } => cmd_solve(
            algorithm,
            &problem,
            seed,
            max_iters,
            grad_tol,
            &out_trace,
            out_x.as_deref(),
            emit_plot_script,
        ),
        Command::Check { problem, x } => cmd_check(&problem, &x),
        Command::Oracle { problem, k } => cmd_oracle(&problem, k),
    }
}

/// Tolerance overrides from the QSTIEFEL_TOLS environment variable.
fn tol_overrides() -> Result<io::TolOverrides, Failure> {
    match std::env::var(TOLS_ENV) {
        Ok(s) => io::parse_tol_overrides(&s)
            .map_err(|e| Failure::Usage(format!("{TOLS_ENV}: {e}"))),
        Err(_) => Ok(io::TolOverrides::default()),
    }
}

fn build_context(prob: &EigProblem, feas_override: Option<f64>) -> Result<ManifoldContext, Failure> {
    let ctx = prob.context()?;
    Ok(match feas_override {
        Some(feas) => ctx.with_tolerances(feas, DEFAULT_TANGENT_TOL),
        None => ctx,
    })
}

fn cmd_generate(n: usize, p: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    if p > n {
        return Err(Failure::Usage(format!(
            "p must satisfy p <= n, got p = {p}, n = {n}"
        )));
    }
    let prob = generate_problem(n, p, seed)?;
    io::write_bundle(out, &prob)?;
    let report = is_positive_definite(prob.g())?;
    println!(
        "wrote bundle to {} (n = {n}, p = {p}, seed = {seed})",
        out.display()
    );
    println!(
        "G: hermitian residual {:.3e}, min eigenvalue {:.6e}, max |eigenvalue| {:.6e}, positive definite: {}",
        report.hermitian_residual,
        report.min_eigenvalue.unwrap_or(f64::NAN),
        report.max_abs_eigenvalue.unwrap_or(f64::NAN),
        report.positive_definite
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    algorithm: Algorithm,
    problem: &Path,
    seed: u64,
    max_iters: Option<usize>,
    grad_tol: Option<f64>,
    out_trace: &Path,
    out_x: Option<&Path>,
    emit_plot_script: bool,
) -> Result<(), Failure> {
    let overrides = tol_overrides()?;
    let prob = io::read_bundle(problem)?;
    let ctx = build_context(&prob, overrides.feas)?;

    let mut config = SolverConfig::default();
    if let Some(m) = max_iters {
        config.max_iters = m;
    }
    if let Some(g) = grad_tol {
        config.grad_tol = g;
    }
    if let Some(g) = overrides.grad {
        config.grad_tol = g;
    }

    // The initial point depends only on (bundle, seed), so sd and cg runs
    // with the same seed start from the same X0.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = ctx.random_point(&mut rng)?;

    let report = match algorithm {
        Algorithm::Sd => solve_sd(&ctx, &prob, &x0, &config)?,
        Algorithm::Cg => solve_cg(&ctx, &prob, &x0, &config)?,
    };
    io::write_trace_file(out_trace, &report.trace)?;
    if let Some(path) = out_x {
        io::write_qmat_file(path, &report.x)?;
    }
    if emit_plot_script {
        let script_path = plot_script_path(out_trace);
        std::fs::write(
            &script_path,
            plot_script(out_trace, algorithm.name()),
        )
        .map_err(|e| Failure::Internal(format!("writing plot script: {e}")))?;
        println!("plot script: {}", script_path.display());
    }

    let residuals = prob.residuals(&report.x)?;
    print_residuals(&residuals);
    let status = if report.converged { "converged" } else { "stopped" };
    println!(
        "{}: {status} ({}) after {} iterations; final cost {:.9e}, grad norm {:.9e}",
        algorithm.name(),
        report.reason,
        report.iterations(),
        report.final_cost(),
        report.final_grad_norm()
    );
    println!("trace: {}", out_trace.display());

    if report.converged {
        Ok(())
    } else {
        Err(Failure::Quality(format!(
            "solver stopped without convergence: {}",
            report.reason
        )))
    }
}

fn cmd_check(problem: &Path, x_path: &Path) -> Result<(), Failure> {
    let overrides = tol_overrides()?;
    let prob = io::read_bundle(problem)?;
    let x = io::read_qmat_file(x_path)?;
    if x.shape() != (prob.n(), prob.p()) {
        return Err(Failure::Usage(format!(
            "iterate is {}x{}, bundle wants {}x{}",
            x.rows(),
            x.cols(),
            prob.n(),
            prob.p()
        )));
    }
    let feas_tol = overrides
        .feas
        .unwrap_or(qstiefel::manifold::DEFAULT_FEAS_TOL);

    let residuals = prob.residuals(&x)?;
    print_residuals(&residuals);
    let pairs = prob.extract_eigenpairs(&x)?;
    for r in 0..prob.p() {
        println!(
            "column {r}: lambda = {:+.16e}, |imag| = {:.3e}, eig residual = {:.3e}",
            pairs.lambdas[r], pairs.diag_imag[r], pairs.eigres_per_column[r]
        );
    }
    if residuals.feasibility <= feas_tol {
        Ok(())
    } else {
        Err(Failure::Quality(format!(
            "feasibility residual {:.3e} exceeds {feas_tol:.3e}",
            residuals.feasibility
        )))
    }
}

fn cmd_oracle(problem: &Path, k: usize) -> Result<(), Failure> {
    let prob = io::read_bundle(problem)?;
    if k == 0 || k > prob.n() {
        return Err(Failure::Usage(format!(
            "k must satisfy 1 <= k <= n, got k = {k}, n = {}",
            prob.n()
        )));
    }
    let eigs = prob.oracle_eigs()?;
    for value in eigs.iter().take(k) {
        println!("{value:.16e}");
    }
    Ok(())
}

fn print_residuals(r: &ResidualTriple) {
    println!(
        "residuals: feasibility = {:.3e}, off-diagonal = {:.3e}, eigenvalue = {:.3e}",
        r.feasibility, r.offdiag, r.eigres
    );
}

fn plot_script_path(trace: &Path) -> PathBuf {
    let mut os = trace.as_os_str().to_os_string();
    os.push(".gp");
    PathBuf::from(os)
}

/// Gnuplot script showing the gradient norm against iterations and against
/// wall-clock time, mirroring the two standard convergence views.
fn plot_script(trace: &Path, label: &str) -> String {
    let trace = trace.display();
    format!(
        "set datafile separator ','\n\
         set logscale y\n\
         set grid\n\
         set ylabel 'Riemannian gradient norm'\n\
         set xlabel 'iteration'\n\
         set terminal pngcairo size 900,600\n\
         set output 'grad_vs_iter.png'\n\
         plot '{trace}' skip 1 using 1:4 with lines title '{label}'\n\
         set xlabel 'elapsed seconds'\n\
         set output 'grad_vs_time.png'\n\
         plot '{trace}' skip 1 using 2:4 with lines title '{label}'\n"
    )
}
