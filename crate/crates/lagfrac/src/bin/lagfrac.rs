//! Command-line front end. All real work lives in `lagfrac::runner`; this
//! binary only parses flags, merges them over an optional JSON config file,
//! and maps outcomes to exit codes:
//!   0 success, 2 precondition/domain violation, 3 numerical failure,
//!   4 certificate computed but failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagfrac::runner::{run, RunConfig};
use lagfrac::Error;

#[derive(Parser)]
#[command(
    name = "lagfrac",
    version,
    about = "Fractional integrals of Laguerre-type operators: kernels, bounds, certificates"
)]
struct Cli {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory (default: $LAGFRAC_OUT, then '.').
    #[arg(long, global = true)]
    output_dir: Option<String>,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; each maps onto one `RunConfig` field.
#[derive(Args, Default)]
struct Common {
    /// Laguerre type parameter alpha.
    #[arg(long)]
    alpha: Option<f64>,
    /// Fractional order sigma.
    #[arg(long)]
    sigma: Option<f64>,
    /// Shift step a for the weighted family.
    #[arg(long)]
    a: Option<f64>,
    /// Largest family index j to sweep.
    #[arg(long, alias = "jmax")]
    j_max: Option<u32>,
    /// Lebesgue exponent p.
    #[arg(short, long)]
    p: Option<f64>,
    /// Lebesgue exponent q.
    #[arg(short, long)]
    q: Option<f64>,
    /// Sequence exponent r.
    #[arg(short, long)]
    r: Option<f64>,
    /// Power weight exponent t (input side).
    #[arg(short, long)]
    t: Option<f64>,
    /// Power weight exponent s (output side).
    #[arg(short, long)]
    s: Option<f64>,
    /// Ambient dimension n.
    #[arg(short, long)]
    n: Option<usize>,
    /// System: 'hermite' or 'convolution'.
    #[arg(long)]
    system: Option<String>,
    /// Test function descriptor (phi:K, ell:K, gauss:C:W, indicator:LO:HI, bump:P).
    #[arg(short, long)]
    f: Option<String>,
    /// Evaluation point x.
    #[arg(short, long)]
    x: Option<f64>,
    /// Grid lower endpoint.
    #[arg(long)]
    grid_min: Option<f64>,
    /// Grid upper endpoint.
    #[arg(long)]
    grid_max: Option<f64>,
    /// Points per grid axis.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Points in the xi in (0, 1) sweep.
    #[arg(long)]
    xi_points: Option<usize>,
    /// Size of the randomized test family.
    #[arg(long)]
    family_size: Option<usize>,
    /// Spectral truncation order.
    #[arg(long)]
    m_trunc: Option<usize>,
    /// Gaussian decay constant in comparison kernels.
    #[arg(long)]
    c_exp: Option<f64>,
    /// Ceiling for the moment certificate.
    #[arg(long)]
    moment_ceiling: Option<f64>,
    /// RNG seed (runs are deterministic given config + seed).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the Gaussian envelope bound on the heat kernel, uniformly in alpha.
    CertifyHeatBound(Common),
    /// Certify domination of the potential kernel by the comparison kernel K_sigma.
    CertifyPotentialBound(Common),
    /// Certify domination of the shifted-family potential kernels, uniformly in j.
    CertifyMathk(Common),
    /// Certify the reduced-kernel moment bound and its supporting kernel lemmas.
    CertifyOverline(Common),
    /// Run the scalar-inequality lab: all lemma sweeps with one verdict each.
    CertifyLemmas(Common),
    /// Apply the fractional integral to a test function at a point.
    ApplyFrac(Common),
    /// Vector-valued mixed norms for a deterministic random family.
    VvNorms(Common),
    /// Oscillator sweep: mixed-norm rows plus a cross-basis check in n = 2.
    Oscillator(Common),
    /// Decide admissibility of an exponent/weight tuple; prints true/false.
    Admissible(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CertifyHeatBound(_) => "certify-heat-bound",
            Command::CertifyPotentialBound(_) => "certify-potential-bound",
            Command::CertifyMathk(_) => "certify-mathk",
            Command::CertifyOverline(_) => "certify-overline",
            Command::CertifyLemmas(_) => "certify-lemmas",
            Command::ApplyFrac(_) => "apply-frac",
            Command::VvNorms(_) => "vv-norms",
            Command::Oscillator(_) => "oscillator",
            Command::Admissible(_) => "admissible",
        }
    }

    fn common(self) -> Common {
        match self {
            Command::CertifyHeatBound(c)
            | Command::CertifyPotentialBound(c)
            | Command::CertifyMathk(c)
            | Command::CertifyOverline(c)
            | Command::CertifyLemmas(c)
            | Command::ApplyFrac(c)
            | Command::VvNorms(c)
            | Command::Oscillator(c)
            | Command::Admissible(c) => c,
        }
    }
}

fn flags_config(name: &str, c: Common, cli_threads: Option<usize>, out: Option<String>) -> RunConfig {
    RunConfig {
        command: Some(name.to_string()),
        system: c.system,
        alpha: c.alpha,
        sigma: c.sigma,
        a: c.a,
        j_max: c.j_max,
        p: c.p,
        q: c.q,
        r: c.r,
        t: c.t,
        s: c.s,
        n: c.n,
        f: c.f,
        x: c.x,
        grid_min: c.grid_min,
        grid_max: c.grid_max,
        grid_points: c.grid_points,
        xi_points: c.xi_points,
        family_size: c.family_size,
        m_trunc: c.m_trunc,
        c_exp: c.c_exp,
        moment_ceiling: c.moment_ceiling,
        seed: c.seed,
        threads: cli_threads,
        output_dir: out,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let base = match &cli.config {
        Some(path) => match RunConfig::from_json_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    let name = cli.command.name();
    let flags = flags_config(name, cli.command.common(), cli.threads, cli.output_dir);
    let config = base.merged_with(flags);

    if let Some(threads) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    match run(&config) {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            for file in &summary.files {
                eprintln!("wrote {}", file.display());
            }
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("certificate FAILED");
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Precondition(_) => ExitCode::from(2),
                Error::Quadrature(_) => ExitCode::from(3),
            }
        }
    }
}
