//! Acceptance gate: eleven end-to-end checks with pinned tolerances, one per
//! test, each printing a single pass/fail line. Together they exercise the
//! eigenfunction identities, kernel closed forms, uniform bound certificates,
//! exact-constant scalar inequalities, the oscillator reduction, and the
//! vector-valued norm sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lagfrac::grid::{Axis, GridSpec};
use lagfrac::ineqlab::{certify_gamma_ratio, certify_lemma_intlambda};
use lagfrac::kernels::{heat_kernel_convolution, heat_kernel_hermite, heat_kernel_series, System};
use lagfrac::operators::{
    admissible_convolution, apply_frac_kernel, vector_valued_norms, Measure, NormSpec,
    TestFunction,
};
use lagfrac::oscillator::{
    frac_oscillator_profiles, radial_eigenfunction, real_spherical_harmonic, theorem31_sweep,
    ParityBlock, RadialProfile, RadialProfileSet,
};
use lagfrac::potential::{
    certify_heat_bound, certify_overline_moment, certify_prop_mathk, UniformityConfig,
    DEFAULT_C_EXP, MOMENT_CEILING,
};
use lagfrac::quad::semi_infinite;
use lagfrac::specfun::{hermite_function, FracParams};

fn report(name: &str, passed: bool, detail: &str) {
    println!(
        "acceptance {}: {} ({detail})",
        name,
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "acceptance {name} failed: {detail}");
}

/// 1. Kernel-form operator maps the k-th eigenfunction to
///    (4k + 2 alpha + 2)^(-sigma) times itself, both systems, rel err <= 1e-7.
#[test]
fn eigen_identity_suite() {
    let pairs = [(-0.5, 0.3), (0.0, 1.0), (0.5, 0.7), (2.0, 1.5)];
    let mut worst = 0.0f64;
    for &(alpha, sigma) in &pairs {
        for system in [System::Hermite, System::Convolution] {
            // The convolution system carries the standing range 0 < sigma < alpha + 1.
            if system == System::Convolution && sigma >= alpha + 1.0 {
                continue;
            }
            let params = FracParams::dim1(alpha, sigma, 1.0, 0).unwrap();
            for k in 0..=5usize {
                let tf = TestFunction::Eigenfunction { k };
                let lambda = 4.0 * k as f64 + 2.0 * alpha + 2.0;
                // Probe where the eigenfunction is well away from its zeros.
                let candidates: Vec<f64> = (0..12).map(|i| 0.1 + 4.9 * i as f64 / 11.0).collect();
                let mut probes: Vec<(f64, f64)> = candidates
                    .iter()
                    .map(|&x| (x, tf.eval(system, alpha, x).unwrap()))
                    .collect();
                probes.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
                for &(x, exact_f) in probes.iter().take(3) {
                    let exact = exact_f * lambda.powf(-sigma);
                    let got = apply_frac_kernel(
                        system,
                        &params,
                        &|y| tf.eval(system, alpha, y).unwrap_or(0.0),
                        x,
                    )
                    .unwrap();
                    worst = worst.max(((got - exact) / exact).abs());
                }
            }
        }
    }
    report(
        "eigen-identity",
        worst <= 1e-7,
        &format!("worst relative error {worst:.3e}, tolerance 1e-7"),
    );
}

/// 2. Closed-form heat kernel against the eigen-series truncated at 120.
#[test]
fn heat_closed_vs_series() {
    let mut worst = 0.0f64;
    for &alpha in &[-0.5, 0.5, 3.0] {
        let params = FracParams::dim1(alpha, 0.2, 1.0, 0).unwrap();
        for &t in &[0.2, 0.7, 2.0] {
            for &x in &[0.2, 1.5, 4.0] {
                for &y in &[0.4, 2.0, 3.3] {
                    let closed = heat_kernel_hermite(&params, t, &[x], &[y]).unwrap();
                    let series =
                        heat_kernel_series(System::Hermite, &params, t, &[x], &[y], 120).unwrap();
                    worst = worst.max(((closed - series.value) / closed).abs());
                }
            }
        }
    }
    report(
        "heat-closed-vs-series",
        worst <= 1e-10,
        &format!("worst relative error {worst:.3e}, tolerance 1e-10"),
    );
}

/// 3. Gaussian-envelope ratio for the heat kernel grows by < 5% when the
///    alpha sweep is extended from [-0.5, 10] to [-0.5, 50].
#[test]
fn heat_envelope_alpha_uniformity() {
    let grid = GridSpec::square(Axis::uniform(0.2, 4.0, 30));
    let xi: Vec<f64> = (0..20).map(|i| (i as f64 + 0.5) / 20.0).collect();
    let cfg = UniformityConfig::default();
    let small = certify_heat_bound(&[-0.5, 2.0, 5.0, 10.0], &grid, &xi, &cfg).unwrap();
    let full = certify_heat_bound(
        &[-0.5, 2.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0],
        &grid,
        &xi,
        &cfg,
    )
    .unwrap();
    let growth = full.sup_ratio / small.sup_ratio;
    report(
        "heat-envelope-alpha-uniformity",
        growth < 1.05 && full.sup_ratio.is_finite(),
        &format!(
            "sup ratio {:.6e} -> {:.6e}, growth {:.4} (< 1.05 required)",
            small.sup_ratio, full.sup_ratio, growth
        ),
    );
}

/// 4. Shifted-family domination certificates stay j-uniform up to j = 20:
///    max over j <= 20 is at most 1.1 times the max over j <= 3.
#[test]
fn shifted_family_j_uniformity() {
    let grid = GridSpec::square(Axis::uniform(0.4, 3.0, 6));
    let cfg = UniformityConfig::default();
    let mut detail = String::new();
    let mut all = true;
    for &sigma in &[0.25, 0.5, 0.75] {
        let (cert, per_j) =
            certify_prop_mathk(0.5, sigma, 1.0, 20, &grid, DEFAULT_C_EXP, &cfg).unwrap();
        let early = per_j
            .iter()
            .take(4)
            .map(|c| c.sup_ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        let late = per_j
            .iter()
            .map(|c| c.sup_ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        detail.push_str(&format!(
            "sigma={sigma}: max_j<=20 / max_j<=3 = {:.4}; ",
            late / early
        ));
        all &= cert.passed && late <= 1.1 * early;
    }
    report("shifted-family-j-uniformity", all, detail.trim_end());
}

/// 5. Moment bound for the reduced kernel: x^{2 sigma} times its
///    mu_alpha-mass stays under a fixed ceiling on x in [2, 40].
#[test]
fn reduced_kernel_moment_bound() {
    let xs: Vec<f64> = (0..20).map(|i| 2.1 + (40.0 - 2.1) * i as f64 / 19.0).collect();
    let mut detail = String::new();
    let mut all = true;
    for &(alpha, sigma) in &[(-0.5, 0.3), (0.5, 0.7)] {
        let cert = certify_overline_moment(alpha, sigma, &xs, MOMENT_CEILING).unwrap();
        detail.push_str(&format!(
            "(alpha={alpha}, sigma={sigma}): sup {:.4e} vs ceiling {MOMENT_CEILING}; ",
            cert.sup_ratio
        ));
        all &= cert.passed;
    }
    report("reduced-kernel-moment", all, detail.trim_end());
}

/// 6. Beta-type integral bound holds with constant exactly 1 (up to 1e-8)
///    for 100 random parameter tuples in each of the lambda > 0 and
///    lambda = 0 regimes.
#[test]
fn beta_integral_exact_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut all = true;
    for case in 0..200 {
        let lambda = if case < 100 {
            rng.gen_range(0.05..2.0)
        } else {
            0.0
        };
        let alpha = rng.gen_range(0.0..3.0);
        let b = rng.gen_range(1.0..3.0);
        let big_b = rng.gen_range(0.2..2.0);
        let big_a = big_b + rng.gen_range(0.05..3.0);
        let row = certify_lemma_intlambda(alpha, lambda, b, big_a, big_b).unwrap();
        worst = worst.max(row.ratio);
        all &= row.lhs <= row.rhs * (1.0 + 1e-8);
    }
    report(
        "beta-integral-exact-constant",
        all,
        &format!("200 random tuples, worst lhs/rhs = {worst:.10}"),
    );
}

/// 7. Gamma-ratio convergence: R(50) within [0.9, 1.1] and sup R(j) < 10.
#[test]
fn gamma_ratio_convergence() {
    let mut detail = String::new();
    let mut all = true;
    for &(alpha, sigma, a) in &[(0.5, 0.25, 1.0), (2.0, 0.4, 1.5)] {
        let sweep = certify_gamma_ratio(alpha, sigma, a, 50).unwrap();
        let terminal = sweep.rows.last().unwrap().ratio;
        let sup = sweep.ratios().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        detail.push_str(&format!(
            "(alpha={alpha}, sigma={sigma}, a={a}): R(50)={terminal:.6}, sup={sup:.4}; "
        ));
        all &= sweep.verdict && (0.9..=1.1).contains(&terminal) && sup < 10.0;
    }
    report("gamma-ratio-convergence", all, detail.trim_end());
}

/// Polar decomposition of a 2-D cartesian Hermite product: per angular
/// degree d (same parity as the energy level m, d <= m) the radial profile
/// is an exact multiple of the Laguerre radial eigenfunction; the multiple
/// is recovered from one angular projection at a generic radius.
fn hermite_product_profiles(k1: usize, k2: usize) -> RadialProfileSet {
    let m = k1 + k2;
    let n_theta = 512usize;
    let mut profiles = Vec::new();
    let mut d = m % 2;
    while d <= m {
        let j = (m - d) / 2;
        let ells: &[usize] = if d == 0 { &[1] } else { &[1, 2] };
        for &ell in ells {
            let mut coeff = 0.0;
            for &r0 in &[0.9, 1.7, 2.3] {
                let radial = radial_eigenfunction(2, m, j, r0).unwrap();
                if radial.abs() < 1e-6 {
                    continue;
                }
                let mut acc = 0.0;
                for i in 0..n_theta {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / n_theta as f64;
                    let (c, s) = (theta.cos(), theta.sin());
                    let y = real_spherical_harmonic(2, d, ell, &[c, s]).unwrap();
                    acc += hermite_function(k1, r0 * c) * hermite_function(k2, r0 * s) * y;
                }
                coeff = acc * 2.0 * std::f64::consts::PI / n_theta as f64 / radial;
                break;
            }
            if coeff.abs() > 1e-10 {
                profiles.push(RadialProfile::new(d, ell, move |r: f64| {
                    coeff * radial_eigenfunction(2, m, j, r).unwrap()
                }));
            }
        }
        d += 2;
    }
    RadialProfileSet { profiles }
}

/// 8. Oscillator cross-basis oracle in n = 2: for every cartesian Hermite
///    product with |k| <= 4, the spherical-reduction route reproduces the
///    exact spectral action (2|k| + 2)^(-sigma) to 1e-7 relative on a
///    20 x 20 polar grid, for sigma in {0.5, 1}.
#[test]
fn oscillator_cross_basis() {
    let mut worst = 0.0f64;
    for k1 in 0..=4usize {
        for k2 in 0..=(4 - k1) {
            let set = hermite_product_profiles(k1, k2);
            let m = k1 + k2;
            for &sigma in &[0.5, 1.0] {
                let out = frac_oscillator_profiles(&set, sigma, 2, ParityBlock::All).unwrap();
                let multiplier = ((2 * m + 2) as f64).powf(-sigma);
                let mut max_diff = 0.0f64;
                let mut max_exact = 0.0f64;
                for ir in 0..20 {
                    let r = 0.2 + 3.8 * ir as f64 / 19.0;
                    for it in 0..20 {
                        let theta = 2.0 * std::f64::consts::PI * it as f64 / 20.0;
                        let x = [r * theta.cos(), r * theta.sin()];
                        let exact =
                            multiplier * hermite_function(k1, x[0]) * hermite_function(k2, x[1]);
                        let got = out.eval(2, &x).unwrap();
                        max_diff = max_diff.max((got - exact).abs());
                        max_exact = max_exact.max(exact.abs());
                    }
                }
                worst = worst.max(max_diff / max_exact);
            }
        }
    }
    report(
        "oscillator-cross-basis",
        worst <= 1e-7,
        &format!("worst grid-relative error {worst:.3e}, tolerance 1e-7"),
    );
}

/// 9. Mixed-norm eigen-ratio: the oscillator ground state at p = q = 2,
///    sigma = 1 in n = 2 gives output/input = 1/2 exactly; the two excluded
///    endpoint exponent pairs are rejected by the admissibility predicate.
#[test]
fn mixed_norm_ground_state_and_endpoints() {
    let ground =
        RadialProfileSet::single(RadialProfile::new(0, 1, |r: f64| (-0.5 * r * r).exp()));
    let rows = theorem31_sweep(&[ground], 1.0, 2.0, 2.0, 2).unwrap();
    let ratio = rows[0].lhs / rows[0].rhs;
    let ratio_ok = (ratio - 0.5).abs() <= 1e-9;
    // Excluded endpoints in n = 3, sigma = 1 (alpha = n/2 - 1 = 1/2):
    // (p, q) = (1, n/(n - 2 sigma)) and (n/(2 sigma), infinity).
    let lower = admissible_convolution(1.0, 3.0, 1.0, 0.5).unwrap();
    let upper = admissible_convolution(1.5, f64::INFINITY, 1.0, 0.5).unwrap();
    report(
        "mixed-norm-ground-state",
        ratio_ok && !lower && !upper,
        &format!("ratio {ratio:.12} (target 0.5 +- 1e-9), endpoints rejected: {}", !lower && !upper),
    );
}

/// 10. Semigroup property of the convolution heat kernel under d mu_alpha.
#[test]
fn heat_semigroup() {
    let mut worst = 0.0f64;
    for &alpha in &[-0.5, 1.0] {
        let params = FracParams::dim1(alpha, 0.2, 1.0, 0).unwrap();
        for &(t, s) in &[(0.3, 0.4), (0.5, 0.5)] {
            for &(x, y) in &[(1.2, 0.8), (0.5, 2.0)] {
                let composed = semi_infinite(0.0, 1.0, 1e-12, &|z: f64| {
                    if z <= 0.0 {
                        return 0.0;
                    }
                    let a = heat_kernel_convolution(&params, t, &[x], &[z]).unwrap_or(0.0);
                    let b = heat_kernel_convolution(&params, s, &[z], &[y]).unwrap_or(0.0);
                    a * b * z.powf(2.0 * alpha + 1.0)
                })
                .unwrap();
                let direct = heat_kernel_convolution(&params, t + s, &[x], &[y]).unwrap();
                worst = worst.max(((composed - direct) / direct).abs());
            }
        }
    }
    report(
        "heat-semigroup",
        worst <= 1e-8,
        &format!("worst relative error {worst:.3e}, tolerance 1e-8"),
    );
}

/// 11. Vector-valued sweep: J = 8 mixed eigenfunction/Gaussian family,
///     r = 2, six admissible (p, q) points; lhs/rhs finite and stable to
///     < 5% under doubling the norm grid.
#[test]
fn vector_valued_stability() {
    let alpha = 0.5;
    let params = FracParams::dim1(alpha, 0.4, 1.0, 0).unwrap();
    let family: Vec<TestFunction> = (0..8)
        .map(|i| {
            if i % 2 == 0 {
                TestFunction::Eigenfunction { k: i / 2 }
            } else {
                TestFunction::Gaussian {
                    center: 0.6 + 0.4 * i as f64,
                    width: 0.5 + 0.1 * i as f64,
                }
            }
        })
        .collect();
    let pq = [
        (2.0, 2.0),
        (2.0, 2.5),
        (2.5, 2.5),
        (3.0, 3.0),
        (2.0, 3.0),
        (1.5, 1.8),
    ];
    let mut detail = String::new();
    let mut all = true;
    for &(p, q) in &pq {
        let spec = NormSpec {
            p,
            q,
            r: 2.0,
            weight_t: 0.0,
            weight_s: 0.0,
            measure: Measure::MuAlpha(alpha),
        };
        let coarse = Axis::geometric(1e-3, 40.0, 300);
        let fine = Axis::geometric(1e-3, 40.0, 600);
        let (l1, r1) =
            vector_valued_norms(System::Convolution, &params, &family, &spec, &coarse, 48)
                .unwrap();
        let (l2, r2) =
            vector_valued_norms(System::Convolution, &params, &family, &spec, &fine, 48).unwrap();
        let (ratio1, ratio2) = (l1 / r1, l2 / r2);
        let drift = ((ratio2 - ratio1) / ratio1).abs();
        detail.push_str(&format!("({p},{q}): ratio {ratio2:.4}, drift {drift:.4}; "));
        all &= ratio1.is_finite() && ratio2.is_finite() && drift < 0.05;
    }
    report("vector-valued-stability", all, detail.trim_end());
}
