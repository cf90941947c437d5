//! `cell24`: reproducible command-line access to the energy, design, exact
//! and Hessian computations for 24-point codes on S³.

mod commands;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::output::{emit, render, Format};
use crate::spec::CodeSpec;
use cell24_core::Potential;

#[derive(Parser, Debug)]
#[command(
    name = "cell24",
    version,
    about = "Energies, designs and exact checks for the 24-cell and its deformations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where the command has a table (scans, spectra).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Write output here; the run manifest goes to `<out>.manifest.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CELL24_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the points of a code.
    Gen {
        #[arg(long)]
        code: CodeSpec,
    },
    /// Energy of a code under a potential.
    Energy {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long)]
        potential: Potential,
    },
    /// Scan the closed-form energy of C_θ over [0, 2π) and refine local minima.
    ScanTheta {
        #[arg(long)]
        potential: Potential,
        #[arg(long, default_value_t = cell24_core::energy::DEFAULT_SCAN_POINTS)]
        grid: usize,
        #[arg(long, default_value_t = cell24_core::energy::DEFAULT_REFINE_TOL)]
        tol: f64,
    },
    /// Best C_θ against the 24-cell for each potential.
    BestTheta {
        #[arg(long, required = true, num_args = 1..)]
        potential: Vec<Potential>,
    },
    /// Largest t with every Gegenbauer sum vanishing up to degree t.
    DesignStrength {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long, default_value_t = 10)]
        k_max: u32,
        #[arg(long, default_value_t = cell24_core::designs::DEFAULT_DESIGN_TOL)]
        tol: f64,
    },
    /// Exact decision, for each k, whether some C_θ beats the 24-cell under (1+t)^k.
    Proposition {
        #[arg(long, default_value_t = 0)]
        k_min: u32,
        #[arg(long, default_value_t = 74)]
        k_max: u32,
    },
    /// Exact check of the degree-3 energy-difference factorization.
    K3Identity,
    /// Exact tail inequality in Q(√7) for a range of k.
    TailCriterion {
        #[arg(long, default_value_t = 75)]
        k_min: u32,
        #[arg(long, default_value_t = 200)]
        k_max: u32,
    },
    /// Real roots of the 3-design sextic and the induced (sin θ, cos θ).
    ThreeDesign,
    /// Hexagon-orbit sum: constancy for small k, minimum at π/6 beyond.
    Lemma {
        #[arg(long, default_value_t = 0)]
        k_min: u32,
        #[arg(long, default_value_t = 40)]
        k_max: u32,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Compare both sides of the hexagon-sum generating function.
    GenfunCheck {
        #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        max_order: usize,
    },
    /// Riemannian Hessian spectrum of a code.
    Hessian {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long)]
        potential: Potential,
        #[arg(long, default_value_t = cell24_core::dynamics::CRITICAL_ZERO_TOL)]
        zero_tol: f64,
    },
    /// Closed-form 24-cell Hessian eigenvalues against the numeric spectrum.
    HessianTable {
        #[arg(long, required = true, num_args = 1..)]
        potential: Vec<Potential>,
        /// Also check positivity of the nonzero closed forms for (1+t)^k, k = 6..=K.
        #[arg(long, default_value_t = 100)]
        positivity_k_max: u32,
    },
    /// Projected gradient descent from a code.
    Descend {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long)]
        potential: Potential,
        #[arg(long, default_value_t = 1e-10)]
        grad_tol: f64,
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
    },
    /// Descents from random starts, classified by Gram spectrum.
    Basin {
        #[arg(long)]
        potential: Potential,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Critical points of the C_θ family with full Hessian index.
    CriticalPoints {
        #[arg(long)]
        potential: Potential,
    },
    /// Part of the full gradient at C_θ outside the family and rotation directions.
    GradientResidual {
        #[arg(long)]
        potential: Potential,
        #[arg(long, required = true, num_args = 1.., allow_negative_numbers = true)]
        theta: Vec<f64>,
    },
    /// Hexagons of the 24-cell, Eisenstein partitions and the disjoint-pair claim.
    HexagonClaim,
    /// Hopf images of a code.
    Hopf {
        #[arg(long)]
        code: CodeSpec,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Energy { .. } => "energy",
            Command::ScanTheta { .. } => "scan-theta",
            Command::BestTheta { .. } => "best-theta",
            Command::DesignStrength { .. } => "design-strength",
            Command::Proposition { .. } => "proposition",
            Command::K3Identity => "k3-identity",
            Command::TailCriterion { .. } => "tail-criterion",
            Command::ThreeDesign => "three-design",
            Command::Lemma { .. } => "lemma",
            Command::GenfunCheck { .. } => "genfun-check",
            Command::Hessian { .. } => "hessian",
            Command::HessianTable { .. } => "hessian-table",
            Command::Descend { .. } => "descend",
            Command::Basin { .. } => "basin",
            Command::CriticalPoints { .. } => "critical-points",
            Command::GradientResidual { .. } => "gradient-residual",
            Command::HexagonClaim => "hexagon-claim",
            Command::Hopf { .. } => "hopf",
        }
    }
}

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let started = Instant::now();
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let format = if cli.global.json {
        Format::Json
    } else if cli.global.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let exit = if report.verified == Some(false) {
        EXIT_VERIFICATION
    } else {
        0
    };
    let body = render(&report, format);
    if let Err(e) = emit(
        &body,
        cli.global.out.as_deref(),
        cli.command.name(),
        args[1..].to_vec(),
        report.seeds.clone(),
        started,
        exit as i32,
    ) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(exit)
}
