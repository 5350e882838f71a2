//! Subcommand orchestration shared by the `lagfrac` binary: configuration
//! merging (JSON file + flags, flags winning), dispatch, CSV emission, and a
//! run manifest per invocation.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::grid::{Axis, GridSpec};
use crate::ineqlab;
use crate::kernels::System;
use crate::operators::{
    admissible_convolution, admissible_hermite, apply_frac_kernel, Measure, NormSpec,
    TestFunction,
};
use crate::oscillator::{
    frac_oscillator_cartesian, frac_oscillator_spherical, theorem31_sweep, RadialProfile,
    RadialProfileSet,
};
use crate::potential::{
    certify_heat_bound, certify_lemma_kernelexp, certify_lemma_kernelexp2, certify_overline_moment,
    certify_prop_estimacion, certify_prop_mathk, BoundCertificate, UniformityConfig,
    DEFAULT_C_EXP, MOMENT_CEILING,
};
use crate::report;
use crate::specfun::FracParams;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "LAGFRAC_OUT";

/// Flat parameter set accepted both from a JSON file and from flags.
/// Every field optional; merging fills gaps, flags win on conflict.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub system: Option<String>,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub a: Option<f64>,
    pub j_max: Option<u32>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub n: Option<usize>,
    pub f: Option<String>,
    pub x: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub xi_points: Option<usize>,
    pub family_size: Option<usize>,
    pub m_trunc: Option<usize>,
    pub c_exp: Option<f64>,
    pub moment_ceiling: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output_dir: Option<String>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| crate::Error::Precondition(format!("cannot read {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| crate::Error::Precondition(format!("invalid config {path:?}: {e}")))
    }

    /// Base config overlaid by `flags`; any field set in `flags` wins.
    pub fn merged_with(mut self, flags: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            command, system, alpha, sigma, a, j_max, p, q, r, t, s, n, f, x, grid_min, grid_max,
            grid_points, xi_points, family_size, m_trunc, c_exp, moment_ceiling, seed, threads,
            output_dir
        );
        self
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var(OUTPUT_DIR_ENV).ok())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn system(&self) -> Result<System> {
        match self.system.as_deref().unwrap_or("convolution") {
            "hermite" => Ok(System::Hermite),
            "convolution" => Ok(System::Convolution),
            other => precondition(format!("unknown system '{other}'")),
        }
    }

    fn grid(&self, default_min: f64, default_max: f64, default_points: usize) -> GridSpec {
        let axis = Axis::uniform(
            self.grid_min.unwrap_or(default_min),
            self.grid_max.unwrap_or(default_max),
            self.grid_points.unwrap_or(default_points),
        );
        GridSpec::square(axis)
    }

    fn xi_grid(&self, default_points: usize) -> Vec<f64> {
        let count = self.xi_points.unwrap_or(default_points);
        (0..count)
            .map(|i| (i as f64 + 0.5) / count as f64)
            .collect()
    }
}

/// What a finished run reports back to the caller.
#[derive(Debug)]
pub struct RunSummary {
    /// False means "computed fine but the certificate failed" (exit code 4).
    pub passed: bool,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Parses a test-function descriptor:
/// `phi:K` / `ell:K` (eigenfunction k), `gauss:CENTER:WIDTH`,
/// `indicator:LO:HI`, `bump:POWER`.
pub fn parse_test_function(desc: &str) -> Result<TestFunction> {
    let parts: Vec<&str> = desc.split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| crate::Error::Precondition(format!("bad number '{s}' in '{desc}'")))
    };
    match parts.as_slice() {
        ["phi", k] | ["ell", k] => Ok(TestFunction::Eigenfunction {
            k: num(k)? as usize,
        }),
        ["gauss", c, w] => Ok(TestFunction::Gaussian {
            center: num(c)?,
            width: num(w)?,
        }),
        ["indicator", lo, hi] => Ok(TestFunction::Indicator {
            lo: num(lo)?,
            hi: num(hi)?,
        }),
        ["bump", p] => Ok(TestFunction::PowerBump { power: num(p)? }),
        ["zero"] => Ok(TestFunction::Zero),
        _ => precondition(format!("unknown test function descriptor '{desc}'")),
    }
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| crate::Error::Precondition(format!("missing required parameter '{name}'")))
}

fn write_manifest(
    config: &RunConfig,
    dir: &Path,
    command: &str,
    started: Instant,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    let manifest = serde_json::json!({
        "command": command,
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_ms": started.elapsed().as_millis() as u64,
    });
    let path = dir.join(format!("{command}_manifest.json"));
    report::write_file(&path, &serde_json::to_string_pretty(&manifest).unwrap())?;
    files.push(path);
    Ok(())
}

/// Dispatches one configured run. Precondition/domain errors surface as
/// `Err`; a clean run with a failing certificate returns `passed: false`.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let command = config
        .command
        .clone()
        .ok_or_else(|| crate::Error::Precondition("no command given".into()))?;
    let started = Instant::now();
    let dir = config.output_dir();
    let mut summary = match command.as_str() {
        "certify-heat-bound" => cmd_heat_bound(config, &dir)?,
        "certify-potential-bound" => cmd_potential_bound(config, &dir)?,
        "certify-mathk" => cmd_mathk(config, &dir)?,
        "certify-overline" => cmd_overline(config, &dir)?,
        "certify-lemmas" => cmd_lemmas(config, &dir)?,
        "apply-frac" => cmd_apply_frac(config)?,
        "vv-norms" => cmd_vv_norms(config, &dir)?,
        "oscillator" => cmd_oscillator(config, &dir)?,
        "admissible" => cmd_admissible(config)?,
        other => return precondition(format!("unknown command '{other}'")),
    };
    write_manifest(config, &dir, &command, started, &mut summary.files)?;
    Ok(summary)
}

fn certificate_summary(id: &str, cert: &BoundCertificate) -> String {
    format!(
        "{id}: sup_ratio={} at (x={}, y={}) -> {}",
        report::fmt_g17(cert.sup_ratio),
        cert.argmax_x,
        cert.argmax_y,
        if cert.passed { "pass" } else { "FAIL" }
    )
}

fn cmd_heat_bound(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let alphas = [-0.5, 0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    let grid = config.grid(0.2, 4.0, 12);
    let xi = config.xi_grid(12);
    let cert = certify_heat_bound(&alphas, &grid, &xi, &UniformityConfig::default())?;
    let path = dir.join("heat_bound.csv");
    report::write_file(
        &path,
        &report::certificates_csv(&[("heat-bound".to_string(), &cert)]),
    )?;
    Ok(RunSummary {
        passed: cert.passed,
        lines: vec![certificate_summary("heat-bound", &cert)],
        files: vec![path],
    })
}

fn cmd_potential_bound(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let sigma = require(config.sigma, "sigma")?;
    let alphas = [-0.5, 0.0, 1.0, 5.0, 20.0];
    let grid = config.grid(0.3, 3.5, 8);
    let cert = certify_prop_estimacion(
        &alphas,
        sigma,
        &grid,
        config.c_exp.unwrap_or(DEFAULT_C_EXP),
        &UniformityConfig::default(),
    )?;
    let path = dir.join("potential_bound.csv");
    report::write_file(
        &path,
        &report::certificates_csv(&[("potential-bound".to_string(), &cert)]),
    )?;
    Ok(RunSummary {
        passed: cert.passed,
        lines: vec![certificate_summary("potential-bound", &cert)],
        files: vec![path],
    })
}

fn cmd_mathk(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let alpha = require(config.alpha, "alpha")?;
    let sigma = require(config.sigma, "sigma")?;
    let a = config.a.unwrap_or(1.0);
    let j_max = config.j_max.unwrap_or(20);
    let grid = config.grid(0.4, 3.0, 6);
    let (cert, per_j) = certify_prop_mathk(
        alpha,
        sigma,
        a,
        j_max,
        &grid,
        config.c_exp.unwrap_or(DEFAULT_C_EXP),
        &UniformityConfig::default(),
    )?;
    let mut rows: Vec<(String, &BoundCertificate)> = per_j
        .iter()
        .enumerate()
        .map(|(j, c)| (format!("mathk-j{j}"), c))
        .collect();
    rows.push(("mathk-overall".to_string(), &cert));
    let path = dir.join("mathk.csv");
    report::write_file(&path, &report::certificates_csv(&rows))?;
    Ok(RunSummary {
        passed: cert.passed,
        lines: vec![certificate_summary("mathk", &cert)],
        files: vec![path],
    })
}

fn cmd_overline(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let alpha = require(config.alpha, "alpha")?;
    let sigma = require(config.sigma, "sigma")?;
    let count = config.grid_points.unwrap_or(12);
    let xs = Axis::geometric(
        config.grid_min.unwrap_or(2.2),
        config.grid_max.unwrap_or(40.0),
        count,
    )
    .points();
    let ceiling = config.moment_ceiling.unwrap_or(MOMENT_CEILING);
    let moment = certify_overline_moment(alpha, sigma, &xs, ceiling)?;
    // Companion heat-kernel lemma sweeps behind the moment bound.
    let far = GridSpec {
        x: Axis::uniform(0.5, 2.0, 4),
        y: Axis::uniform(3.5, 5.0, 4),
        min_gap: 1e-6,
    };
    let near = GridSpec {
        x: Axis::uniform(1.1, 3.0, 5),
        y: Axis::uniform(1.1, 3.0, 5),
        min_gap: 1e-6,
    };
    let xi = config.xi_grid(8);
    let a = config.a.unwrap_or(1.0);
    let j_max = config.j_max.unwrap_or(8);
    let ucfg = UniformityConfig::default();
    let (far_cert, _) = certify_lemma_kernelexp(alpha, a, j_max, &xi, &far, &ucfg)?;
    let (near_cert, _) = certify_lemma_kernelexp2(alpha, a, j_max, &xi, &near, &ucfg)?;
    let path = dir.join("overline.csv");
    report::write_file(
        &path,
        &report::certificates_csv(&[
            ("overline-moment".to_string(), &moment),
            ("kernelexp-far".to_string(), &far_cert),
            ("kernelexp2-near".to_string(), &near_cert),
        ]),
    )?;
    let passed = moment.passed && far_cert.passed && near_cert.passed;
    Ok(RunSummary {
        passed,
        lines: vec![
            certificate_summary("overline-moment", &moment),
            certificate_summary("kernelexp-far", &far_cert),
            certificate_summary("kernelexp2-near", &near_cert),
        ],
        files: vec![path],
    })
}

fn cmd_lemmas(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let mut lines = Vec::new();
    let mut files = Vec::new();
    let mut all_pass = true;
    let emit = |name: &str, rows: &[ineqlab::LemmaRow]| -> Result<PathBuf> {
        let path = dir.join(format!("lemmas_{name}.csv"));
        report::write_file(&path, &report::lemma_csv(rows))?;
        Ok(path)
    };

    let ns: Vec<ineqlab::LemmaRow> = [
        (0.0, 2.0),
        (2.0, 0.1),
        (1.0, 0.1),
        (0.3, 0.5),
        (-1.0, 3.0),
        (2.5, 5.0),
    ]
    .iter()
    .map(|&(a, t)| ineqlab::certify_lemma_ns(a, t))
    .collect::<Result<_>>()?;
    let ns_ok = ns.iter().all(|r| r.passed);
    files.push(emit("small_time", &ns)?);
    lines.push(format!("small-time integral: {}", if ns_ok { "pass" } else { "FAIL" }));
    all_pass &= ns_ok;

    let intxi = ineqlab::certify_lemma_intxi_sweep(
        &[-0.5, 0.0, 1.0, 5.0, 20.0, 100.0],
        1.0,
        config.sigma.unwrap_or(0.3),
        1.0,
    )?;
    files.push(emit("xi_integral", &intxi.rows)?);
    lines.push(format!("xi-integral (c-uniform): {}", if intxi.verdict { "pass" } else { "FAIL" }));
    all_pass &= intxi.verdict;

    let beta: Vec<ineqlab::LemmaRow> = [
        (0.5, 1.0, 1.0, 2.0, 1.0),
        (0.0, 0.0, 1.5, 3.0, 1.0),
        (0.0, -0.3, 2.0, 3.0, 1.0),
        (2.0, 0.5, 1.0, 5.0, 4.0),
    ]
    .iter()
    .map(|&(al, la, b, aa, bb)| ineqlab::certify_lemma_intlambda(al, la, b, aa, bb))
    .collect::<Result<_>>()?;
    let beta_ok = beta.iter().all(|r| r.passed);
    files.push(emit("beta_integral", &beta)?);
    lines.push(format!("beta integral: {}", if beta_ok { "pass" } else { "FAIL" }));
    all_pass &= beta_ok;

    let logeq = ineqlab::certify_log_equivalence(&[0.01, 0.1, 0.25, 0.5, 0.7, 0.9, 0.99])?;
    files.push(emit("log_equivalence", &logeq.rows)?);
    lines.push(format!("log equivalence: {}", if logeq.verdict { "pass" } else { "FAIL" }));
    all_pass &= logeq.verdict;

    let gamma = ineqlab::certify_gamma_ratio(
        config.alpha.unwrap_or(0.5),
        config.sigma.unwrap_or(0.25),
        config.a.unwrap_or(1.0),
        config.j_max.unwrap_or(60),
    )?;
    files.push(emit("gamma_ratio", &gamma.rows)?);
    lines.push(format!("gamma ratio: {}", if gamma.verdict { "pass" } else { "FAIL" }));
    all_pass &= gamma.verdict;

    Ok(RunSummary {
        passed: all_pass,
        lines,
        files,
    })
}

fn cmd_apply_frac(config: &RunConfig) -> Result<RunSummary> {
    let system = config.system()?;
    let alpha = require(config.alpha, "alpha")?;
    let sigma = require(config.sigma, "sigma")?;
    let x = require(config.x, "x")?;
    let params = FracParams::dim1(
        alpha,
        sigma,
        config.a.unwrap_or(1.0),
        0,
    )?;
    let tf = parse_test_function(
        config
            .f
            .as_deref()
            .ok_or_else(|| crate::Error::Precondition("missing test function '-f'".into()))?,
    )?;
    let abar = params.shifted_alpha()[0];
    let value = apply_frac_kernel(system, &params, &move |y| tf.eval(system, abar, y).unwrap_or(0.0), x)?;
    Ok(RunSummary {
        passed: true,
        lines: vec![report::fmt_g17(value)],
        files: vec![],
    })
}

/// Deterministic mixed family for the vector-valued sweep: alternating
/// eigenfunctions and Gaussian bumps drawn from the seeded generator.
pub fn random_family(seed: u64, size: usize) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|i| {
            if i % 2 == 0 {
                TestFunction::Eigenfunction {
                    k: rng.gen_range(0..5),
                }
            } else {
                TestFunction::Gaussian {
                    center: rng.gen_range(0.5..2.5),
                    width: rng.gen_range(0.3..1.0),
                }
            }
        })
        .collect()
}

fn cmd_vv_norms(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let system = config.system()?;
    let alpha = require(config.alpha, "alpha")?;
    let sigma = require(config.sigma, "sigma")?;
    let params = FracParams::dim1(alpha, sigma, config.a.unwrap_or(1.0), 0)?;
    let spec = NormSpec {
        p: config.p.unwrap_or(2.0),
        q: config.q.unwrap_or(2.0),
        r: config.r.unwrap_or(2.0),
        weight_t: config.t.unwrap_or(0.0),
        weight_s: config.s.unwrap_or(0.0),
        measure: match system {
            System::Hermite => Measure::LebesguePositive,
            System::Convolution => Measure::MuAlpha(alpha),
        },
    };
    let family = random_family(config.seed.unwrap_or(42), config.family_size.unwrap_or(4));
    let axis = Axis::geometric(
        config.grid_min.unwrap_or(1e-3),
        config.grid_max.unwrap_or(40.0),
        config.grid_points.unwrap_or(512),
    );
    let (lhs, rhs) = crate::operators::vector_valued_norms(
        system,
        &params,
        &family,
        &spec,
        &axis,
        config.m_trunc.unwrap_or(48),
    )?;
    let path = dir.join("vv_norms.csv");
    report::write_file(
        &path,
        &report::norms_csv(&[(
            spec.p,
            spec.q,
            spec.r,
            spec.weight_t,
            spec.weight_s,
            lhs,
            rhs,
        )]),
    )?;
    let ratio = lhs / rhs;
    Ok(RunSummary {
        passed: ratio.is_finite(),
        lines: vec![format!(
            "lhs={} rhs={} ratio={}",
            report::fmt_g17(lhs),
            report::fmt_g17(rhs),
            report::fmt_g17(ratio)
        )],
        files: vec![path],
    })
}

fn cmd_oscillator(config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let n = config.n.unwrap_or(2);
    let sigma = config.sigma.unwrap_or(1.0);
    let p = config.p.unwrap_or(2.0);
    let q = config.q.unwrap_or(2.0);
    let families = vec![
        RadialProfileSet::single(RadialProfile::new(0, 1, |r: f64| (-0.5 * r * r).exp())),
        RadialProfileSet::single(RadialProfile::new(1, 1, |r: f64| r * (-0.5 * r * r).exp())),
        RadialProfileSet {
            profiles: vec![
                RadialProfile::new(0, 1, |r: f64| (-0.6 * r * r).exp()),
                RadialProfile::new(2, 2, |r: f64| r * r * (-0.5 * r * r).exp()),
            ],
        },
    ];
    let rows = theorem31_sweep(&families, sigma, p, q, n)?;
    let csv_rows: Vec<(f64, f64, f64, f64, f64, f64, f64)> = rows
        .iter()
        .map(|r| (p, q, 2.0, 0.0, 0.0, r.lhs, r.rhs))
        .collect();
    let path = dir.join("oscillator.csv");
    report::write_file(&path, &report::norms_csv(&csv_rows))?;
    let mut lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "family {}: lhs={} rhs={} ratio={}",
                r.family_id,
                report::fmt_g17(r.lhs),
                report::fmt_g17(r.rhs),
                report::fmt_g17(r.lhs / r.rhs)
            )
        })
        .collect();
    let mut passed = rows.iter().all(|r| (r.lhs / r.rhs).is_finite());
    if n == 2 {
        // Cross-basis diagnostic on the degree-1 Hermite state.
        let cart = |x: &[f64]| x[0] * (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp();
        let spherical = RadialProfileSet::single(RadialProfile::new(1, 1, |r: f64| {
            std::f64::consts::PI.sqrt() * r * (-0.5 * r * r).exp()
        }));
        let mut worst = 0.0f64;
        for &x in &[[0.7, 0.3], [1.4, -0.6], [0.2, 1.0]] {
            let a = frac_oscillator_spherical(&spherical, sigma, 2, &x)?;
            let b = frac_oscillator_cartesian(&cart, sigma, &x, 6)?;
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
        lines.push(format!("cross-basis max rel diff: {}", report::fmt_g17(worst)));
        passed &= worst <= 1e-7;
    }
    Ok(RunSummary {
        passed,
        lines,
        files: vec![path],
    })
}

fn cmd_admissible(config: &RunConfig) -> Result<RunSummary> {
    let system = config.system()?;
    let verdict = match system {
        System::Hermite => {
            let spec = NormSpec {
                p: require(config.p, "p")?,
                q: require(config.q, "q")?,
                r: config.r.unwrap_or(2.0),
                weight_t: config.t.unwrap_or(0.0),
                weight_s: config.s.unwrap_or(0.0),
                measure: Measure::LebesguePositive,
            };
            admissible_hermite(&spec, require(config.sigma, "sigma")?, config.n.unwrap_or(1))?
        }
        System::Convolution => admissible_convolution(
            require(config.p, "p")?,
            require(config.q, "q")?,
            require(config.sigma, "sigma")?,
            require(config.alpha, "alpha")?,
        )?,
    };
    Ok(RunSummary {
        passed: true,
        lines: vec![verdict.to_string()],
        files: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_flags_win() {
        let file = RunConfig {
            alpha: Some(0.5),
            sigma: Some(0.3),
            ..Default::default()
        };
        let flags = RunConfig {
            sigma: Some(0.7),
            p: Some(2.0),
            ..Default::default()
        };
        let merged = file.merged_with(flags);
        assert_eq!(merged.alpha, Some(0.5));
        assert_eq!(merged.sigma, Some(0.7));
        assert_eq!(merged.p, Some(2.0));
    }

    #[test]
    fn admissible_command_spec_example() {
        let config = RunConfig {
            command: Some("admissible".into()),
            system: Some("convolution".into()),
            p: Some(2.0),
            q: Some(2.0),
            sigma: Some(0.5),
            alpha: Some(0.5),
            output_dir: Some(std::env::temp_dir().to_string_lossy().into_owned()),
            ..Default::default()
        };
        let out = run(&config).unwrap();
        assert_eq!(out.lines, vec!["true".to_string()]);
        assert!(out.passed);
    }

    #[test]
    fn test_function_descriptors() {
        assert!(matches!(
            parse_test_function("phi:3").unwrap(),
            TestFunction::Eigenfunction { k: 3 }
        ));
        assert!(matches!(
            parse_test_function("gauss:1:0.5").unwrap(),
            TestFunction::Gaussian { .. }
        ));
        assert!(parse_test_function("nope").is_err());
    }

    #[test]
    fn random_family_deterministic() {
        let a = random_family(7, 6);
        let b = random_family(7, 6);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
