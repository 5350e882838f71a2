//! Fractional integral operators in spectral and kernel form, the weighted
//! operator family, exponent admissibility, vector-valued norm estimation,
//! and the two scalar model operators (Hardy/Flett and the local fractional
//! integral).
//!
//! Expansion machinery is one-dimensional; multidimensional kernels remain
//! available through the `kernels` module.

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, quadrature, Result};
use crate::grid::Axis;
use crate::kernels::{heat_kernel_hermite_meda_log_1d, System};
use crate::numeric::LogVal;
use crate::quad::{adaptive, legendre_rule};
use crate::specfun::{ell_seq, log_gamma, phi_seq, FracParams};

/// Built-in test functions for operator applications and norm sweeps.
///
/// `Eigenfunction` and `EigenCombo` refer to the eigenfunctions of whichever
/// (system, order) pair they are evaluated under.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TestFunction {
    Zero,
    Eigenfunction { k: usize },
    EigenCombo { terms: Vec<(usize, f64)> },
    Gaussian { center: f64, width: f64 },
    Indicator { lo: f64, hi: f64 },
    /// x^power e^{-x^2/2}
    PowerBump { power: f64 },
    /// Piecewise-linear samples; zero outside the tabulated range.
    Tabulated { xs: Vec<f64>, ys: Vec<f64> },
}

impl TestFunction {
    pub fn eval(&self, system: System, alpha: f64, x: f64) -> Result<f64> {
        Ok(match self {
            TestFunction::Zero => 0.0,
            TestFunction::Eigenfunction { k } => eigen_value(system, alpha, *k, x)?,
            TestFunction::EigenCombo { terms } => {
                let kmax = terms.iter().map(|t| t.0).max().unwrap_or(0);
                let seq = eigen_seq(system, alpha, kmax, x)?;
                terms.iter().map(|&(k, c)| c * seq[k]).sum()
            }
            TestFunction::Gaussian { center, width } => {
                let u = (x - center) / width;
                (-0.5 * u * u).exp()
            }
            TestFunction::Indicator { lo, hi } => {
                if x >= *lo && x < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            TestFunction::PowerBump { power } => x.powf(*power) * (-0.5 * x * x).exp(),
            TestFunction::Tabulated { xs, ys } => {
                if xs.len() != ys.len() || xs.len() < 2 {
                    return domain("tabulated function needs matching xs/ys, length >= 2");
                }
                match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
                    Ok(i) => ys[i],
                    Err(0) => 0.0,
                    Err(i) if i >= xs.len() => 0.0,
                    Err(i) => {
                        let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                        ys[i - 1] * (1.0 - w) + ys[i] * w
                    }
                }
            }
        })
    }
}

fn eigen_seq(system: System, alpha: f64, kmax: usize, x: f64) -> Result<Vec<f64>> {
    match system {
        System::Hermite => phi_seq(alpha, kmax, x),
        System::Convolution => ell_seq(alpha, kmax, x),
    }
}

fn eigen_value(system: System, alpha: f64, k: usize, x: f64) -> Result<f64> {
    Ok(eigen_seq(system, alpha, k, x)?[k])
}

/// Truncated eigenfunction expansion, one dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralExpansion {
    pub system: System,
    pub params: FracParams,
    /// coeffs[k] for k = 0..=M.
    pub coeffs: Vec<f64>,
}

impl SpectralExpansion {
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Energy of the top quarter of the coefficient range, as a cheap proxy
    /// for what the truncation is discarding.
    pub fn tail_energy(&self) -> f64 {
        let start = self.coeffs.len() - self.coeffs.len() / 4;
        self.coeffs[start..].iter().map(|c| c * c).sum()
    }

    /// Pointwise synthesis sum_k coeffs[k] e_k(x).
    pub fn synthesize(&self, x: f64) -> Result<f64> {
        let alpha = self.params.shifted_alpha()[0];
        let seq = eigen_seq(self.system, alpha, self.truncation(), x)?;
        Ok(self.coeffs.iter().zip(&seq).map(|(c, e)| c * e).sum())
    }
}

/// Default truncation degree for expansions.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Expands f in the eigenfunction basis up to degree `m_trunc` by composite
/// Gauss-Legendre with panel doubling until every coefficient settles.
pub fn expand(
    system: System,
    params: &FracParams,
    f: &dyn Fn(f64) -> f64,
    m_trunc: usize,
) -> Result<SpectralExpansion> {
    if params.n() != 1 {
        return precondition("expansion machinery is one-dimensional");
    }
    let alpha = params.shifted_alpha()[0];
    // Oscillator-style turning point: eigenfunctions of degree M live within
    // |x| of order sqrt(lambda_M).
    let upper = (4.0 * m_trunc as f64 + 2.0 * alpha.abs() + 2.0).sqrt() + 8.0;
    let rule = legendre_rule(15);
    let compute = |panels: usize| -> Result<Vec<f64>> {
        let mut coeffs = vec![0.0; m_trunc + 1];
        let h = upper / panels as f64;
        for p in 0..panels {
            let (lo, hi) = (p as f64 * h, (p + 1) as f64 * h);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = mid + half * node;
                let fx = f(x);
                if fx == 0.0 {
                    continue;
                }
                let seq = eigen_seq(system, alpha, m_trunc, x)?;
                let meas = match system {
                    System::Hermite => 1.0,
                    System::Convolution => x.powf(2.0 * alpha + 1.0),
                };
                let scale = half * w * fx * meas;
                for (c, e) in coeffs.iter_mut().zip(&seq) {
                    *c += scale * e;
                }
            }
        }
        Ok(coeffs)
    };
    let mut panels = 32;
    let mut prev = compute(panels)?;
    loop {
        panels *= 2;
        let next = compute(panels)?;
        let scale = next.iter().map(|c| c * c).sum::<f64>().sqrt().max(1.0);
        let worst = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if worst <= 1e-9 * scale {
            return Ok(SpectralExpansion {
                system,
                params: params.clone(),
                coeffs: next,
            });
        }
        if panels >= 1024 {
            return quadrature(format!(
                "expansion coefficients did not settle (last delta {worst:.3e})"
            ));
        }
        prev = next;
    }
}

/// Applies the spectral multiplier (4k + 2 alpha + 2)^{-sigma} coefficientwise.
pub fn apply_frac_spectral(expansion: &SpectralExpansion, sigma: f64) -> Result<SpectralExpansion> {
    if sigma < 0.0 {
        return domain("spectral multiplier needs sigma >= 0");
    }
    let alpha = expansion.params.shifted_alpha()[0];
    let coeffs = expansion
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * (4.0 * k as f64 + 2.0 * alpha + 2.0).powf(-sigma))
        .collect();
    Ok(SpectralExpansion {
        system: expansion.system,
        params: expansion.params.clone(),
        coeffs,
    })
}

fn mu_weight(system: System, alpha: f64, y: f64) -> f64 {
    match system {
        System::Hermite => 1.0,
        System::Convolution => y.powf(2.0 * alpha + 1.0),
    }
}

/// Kernel-form application of the fractional integral at one point, with the
/// time integral outermost: for each xi the heat kernel is integrated against
/// f over (0, infinity) -- a smooth Gaussian-window quadrature -- and the
/// resulting semigroup values are then integrated in xi with the t^{sigma-1}
/// density. Doing the xi-integral per y-node instead (building the potential
/// kernel pointwise) costs orders of magnitude more and additionally has to
/// fight the |x - y|^{2 sigma - 1} diagonal singularity, which only exists
/// after the time integration.
pub fn apply_frac_kernel(
    system: System,
    params: &FracParams,
    f: &dyn Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    if params.n() != 1 {
        return precondition("kernel application is one-dimensional");
    }
    if !(x > 0.0) {
        return domain("kernel application needs x > 0");
    }
    let alpha = params.shifted_alpha()[0];
    let sigma = params.sigma();
    // Semigroup value S(xi) = int G_xi(x, y) f(y) dmu(y). The kernel is a
    // Gaussian bump of width ~ 2 sqrt(xi) around y = x (everything beyond
    // 8 widths is below e^{-64} of the peak), so integrate in the scaled
    // variable z = (y - x) / (2 sqrt(xi)).
    let semigroup = |xi: f64, ln_omx2: f64| -> f64 {
        let root = 2.0 * xi.sqrt();
        let g = |z: f64| -> f64 {
            let dy = root * z;
            let y = x + dy;
            if y <= 0.0 {
                return 0.0;
            }
            // The displaced form keeps the Gaussian exponent exact; rebuilding
            // it from the rounded y would inject eps*x/root relative jitter.
            let h = match heat_kernel_hermite_meda_log_1d(params, xi, ln_omx2, x, dy) {
                Ok(v) => v,
                Err(_) => return 0.0,
            };
            let ln_rel = match system {
                System::Hermite => 0.0,
                System::Convolution => -(alpha + 0.5) * (x * y).ln(),
            };
            let val =
                LogVal::from_ln(h.ln_abs + ln_rel).value() * f(y) * mu_weight(system, alpha, y) * root;
            if val.is_finite() {
                val
            } else {
                0.0
            }
        };
        let zcap = 8.0f64;
        let zlo = -zcap.min(x / root);
        adaptive(zlo, zcap, 1e-11, &g).unwrap_or(0.0)
    };
    // Outer: (1/Gamma(sigma)) int_0^1 t^{sigma-1} S(xi) dxi/(1-xi^2) with
    // t = atanh(xi), split at xi = 1/2 exactly like xi_log_integral.
    let v0 = std::f64::consts::LN_2;
    let w0 = (4f64 / 3.0).ln();
    let rel_tol = 1e-9;
    // Single adaptive passes instead of panel-by-panel marching: deep in the
    // tails the inner integral is only known to its jitter floor, which a
    // per-panel relative test can never meet, while adaptive's global scale
    // turns the same noise into a negligible absolute contribution. The left
    // integrand decays like e^{-sigma v}, the right one like e^{-w}.
    let v_cap = v0 + (42.0 / sigma.min(1.0)).min(2000.0);
    let w_cap = w0 + 80.0 + 20.0 * sigma;
    let left = adaptive(v0, v_cap, rel_tol, &|v: f64| {
        let xi = (-v).exp();
        if !(xi > 0.0) {
            return 0.0;
        }
        let ln_omx2 = (-(-2.0 * v).exp()).ln_1p();
        let t = 0.5 * (2.0 * xi.ln_1p() - ln_omx2);
        // dxi = -xi dv, dt = dxi/(1-xi^2)
        let val = t.powf(sigma - 1.0) * semigroup(xi, ln_omx2) * xi / ln_omx2.exp();
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    let right = adaptive(w0, w_cap, rel_tol, &|w: f64| {
        let xi = (1.0 - (-w).exp()).sqrt();
        let ln_omx2 = -w;
        let t = 0.5 * (2.0 * xi.ln_1p() - ln_omx2);
        // dxi = e^{-w} dw / (2 xi), and e^{-w} = 1 - xi^2 cancels the dt
        // Jacobian exactly.
        let val = t.powf(sigma - 1.0) * semigroup(xi, ln_omx2) / (2.0 * xi);
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    Ok((left + right) * (-log_gamma(sigma)?).exp())
}

/// Weighted family member x^{aj} (L_{alpha+aj})^{-sigma} (y^{-aj} f)(x), with
/// the power weights folded into the integrand in log scale.
pub fn apply_weighted_family(params: &FracParams, f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    if params.n() != 1 {
        return precondition("weighted family is one-dimensional");
    }
    let abar = params.shifted_alpha()[0];
    if !(params.sigma() > 0.0 && params.sigma() < abar + 1.0) {
        return precondition("need 0 < sigma < alpha + a j + 1");
    }
    let aj = params.a() * params.j() as f64;
    let g = move |y: f64| f(y) * (aj * (x / y).ln()).exp();
    apply_frac_kernel(System::Convolution, params, &g, x)
}

/// Spectral-path analogue of `apply_weighted_family`: expand y^{-aj} f at the
/// shifted order, damp, synthesize, and restore the x^{aj} weight.
pub fn apply_weighted_family_spectral(
    params: &FracParams,
    f: &dyn Fn(f64) -> f64,
    m_trunc: usize,
) -> Result<impl Fn(f64) -> Result<f64> + Send + Sync + 'static> {
    // The spectral route only needs the multiplier to damp, so any sigma > 0
    // is fine; the kernel range 0 < sigma < alpha + a j + 1 is a convergence
    // condition of the kernel path alone.
    if !(params.sigma() > 0.0) {
        return precondition("need sigma > 0");
    }
    let aj = params.a() * params.j() as f64;
    let g = move |y: f64| {
        if y <= 0.0 {
            0.0
        } else {
            f(y) * y.powf(-aj)
        }
    };
    let expansion = expand(System::Convolution, params, &g, m_trunc)?;
    let damped = apply_frac_spectral(&expansion, params.sigma())?;
    Ok(move |x: f64| -> Result<f64> { Ok(damped.synthesize(x)? * x.powf(aj)) })
}

/// Which measure a norm is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Measure {
    LebesguePositive,
    MuAlpha(f64),
}

/// Exponents and power weights for the vector-valued inequality.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormSpec {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub weight_t: f64,
    pub weight_s: f64,
    pub measure: Measure,
}

impl NormSpec {
    pub fn unweighted(p: f64, q: f64, r: f64, measure: Measure) -> Self {
        NormSpec {
            p,
            q,
            r,
            weight_t: 0.0,
            weight_s: 0.0,
            measure,
        }
    }

    fn validate(&self) -> Result<()> {
        for e in [self.p, self.q, self.r] {
            if !(e >= 1.0) {
                return domain(format!("exponents must lie in [1, inf], got {e}"));
            }
        }
        if !(self.weight_t.is_finite() && self.weight_s.is_finite()) {
            return domain("weight powers must be finite");
        }
        Ok(())
    }
}

/// Heat-Hermite admissibility: exponent, weight, and smoothing conditions for
/// the vector-valued inequality in the Hermite-type system.
pub fn admissible_hermite(spec: &NormSpec, sigma: f64, n: usize) -> Result<bool> {
    spec.validate()?;
    let nf = n as f64;
    let (p, q, r) = (spec.p, spec.q, spec.r);
    let (t, s) = (spec.weight_t, spec.weight_s);
    let ok = p > 1.0
        && p <= q
        && q.is_finite()
        && (1.0..=f64::INFINITY).contains(&r)
        && t < nf * (1.0 - 1.0 / p)
        && s < nf / q
        && t + s >= 0.0
        && (sigma >= nf / 2.0 || 1.0 / q >= 1.0 / p - (2.0 * sigma - t - s) / nf);
    Ok(ok)
}

/// Convolution-system admissibility: the (1/p, 1/q) pentagon with both
/// endpoint exclusions.
pub fn admissible_convolution(p: f64, q: f64, sigma: f64, alpha: f64) -> Result<bool> {
    if !(sigma > 0.0 && sigma < alpha + 1.0) {
        return precondition(format!(
            "need 0 < sigma < alpha + 1, got sigma={sigma}, alpha={alpha}"
        ));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return domain("exponents must lie in [1, inf]");
    }
    let (ip, iq) = (1.0 / p, 1.0 / q);
    let ratio = sigma / (alpha + 1.0);
    let inside = ip - ratio <= iq && iq < ip + ratio;
    let excl1 = p == 1.0 && (q - (alpha + 1.0) / (alpha + 1.0 - sigma)).abs() <= 1e-12 * q;
    let excl2 = (p - (alpha + 1.0) / sigma).abs() <= 1e-12 * p && q.is_infinite();
    Ok(inside && !excl1 && !excl2)
}

fn grid_norm(xs: &[f64], values: &[f64], p: f64, weight_pow: f64, measure: Measure) -> f64 {
    if p.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    let density = |x: f64| match measure {
        Measure::LebesguePositive => x.powf(weight_pow),
        Measure::MuAlpha(alpha) => x.powf(weight_pow + 2.0 * alpha + 1.0),
    };
    let mut total = 0.0;
    for i in 1..xs.len() {
        let a = values[i - 1].powf(p) * density(xs[i - 1]);
        let b = values[i].powf(p) * density(xs[i]);
        total += 0.5 * (a + b) * (xs[i] - xs[i - 1]);
    }
    total.powf(1.0 / p)
}

/// Both sides of the vector-valued inequality on a grid: pointwise l^r
/// aggregation of the operator outputs and the inputs, then the L^q / L^p
/// norms with the spec's weights.
///
/// Hermite system: the scalar operator (L^H)^{-sigma} acts on each component,
/// weights |x|^{-s} on the left and |x|^t on the right in Lebesgue measure.
/// Convolution system: component j goes through the weighted family member
/// u_j (L_{alpha+aj})^{-sigma} u_j^{-1}, both sides in mu_alpha.
pub fn vector_valued_norms(
    system: System,
    params_base: &FracParams,
    functions: &[TestFunction],
    spec: &NormSpec,
    axis: &Axis,
    m_trunc: usize,
) -> Result<(f64, f64)> {
    if functions.is_empty() || functions.len() > 32 {
        return precondition("family size must lie in 1..=32");
    }
    let alpha = params_base.alpha()[0];
    match system {
        System::Hermite => {
            if !admissible_hermite(spec, params_base.sigma(), 1)? {
                return precondition(
                    "Hermite-type admissibility fails (exponent/weight/smoothing conditions)",
                );
            }
        }
        System::Convolution => {
            if !admissible_convolution(spec.p, spec.q, params_base.sigma(), alpha)? {
                return precondition("convolution-type admissibility fails (pentagon or exclusions)");
            }
        }
    }
    let xs = axis.points();
    let mut out_pow = vec![0.0f64; xs.len()];
    let mut in_pow = vec![0.0f64; xs.len()];
    for (j, f) in functions.iter().enumerate() {
        let params = params_base.with_j(j as u32);
        let abar = params.shifted_alpha()[0];
        let f_eval = {
            let sys = system;
            move |y: f64| f.eval(sys, abar, y).unwrap_or(0.0)
        };
        let applied: Box<dyn Fn(f64) -> Result<f64>> = match system {
            System::Hermite => {
                let expansion = expand(System::Hermite, &params, &f_eval, m_trunc)?;
                let damped = apply_frac_spectral(&expansion, params.sigma())?;
                Box::new(move |x: f64| damped.synthesize(x))
            }
            System::Convolution => Box::new(apply_weighted_family_spectral(
                &params, &f_eval, m_trunc,
            )?),
        };
        for (i, &x) in xs.iter().enumerate() {
            let tv = applied(x)?.abs();
            let fv = f_eval(x).abs();
            if spec.r.is_infinite() {
                out_pow[i] = out_pow[i].max(tv);
                in_pow[i] = in_pow[i].max(fv);
            } else {
                out_pow[i] += tv.powf(spec.r);
                in_pow[i] += fv.powf(spec.r);
            }
        }
    }
    if !spec.r.is_infinite() {
        for v in out_pow.iter_mut().chain(in_pow.iter_mut()) {
            *v = v.powf(1.0 / spec.r);
        }
    }
    let (m_out, m_in, w_out, w_in) = match system {
        System::Hermite => (
            Measure::LebesguePositive,
            Measure::LebesguePositive,
            -spec.weight_s * spec.q,
            spec.weight_t * spec.p,
        ),
        System::Convolution => (Measure::MuAlpha(alpha), Measure::MuAlpha(alpha), 0.0, 0.0),
    };
    let lhs = grid_norm(&xs, &out_pow, spec.q, w_out, m_out);
    let rhs = grid_norm(&xs, &in_pow, spec.p, w_in, m_in);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardyDirection {
    FromZero,
    FromInfinity,
}

/// Both sides of the Hardy/Flett inequality for nonnegative f:
/// lhs = || F ||-type integral with the gamma weights, rhs the f-side norm.
pub fn hardy_flett(
    f: &dyn Fn(f64) -> f64,
    p: f64,
    q: f64,
    gamma: f64,
    direction: HardyDirection,
) -> Result<(f64, f64)> {
    if gamma == -1.0 {
        return domain("gamma = -1 is excluded");
    }
    if !(p >= 1.0 && q >= p) {
        return precondition("need 1 <= p <= q");
    }
    match direction {
        HardyDirection::FromZero if gamma < -1.0 => {
            return precondition("F from zero requires gamma > -1")
        }
        HardyDirection::FromInfinity if gamma > -1.0 => {
            return precondition("F from infinity requires gamma < -1")
        }
        _ => {}
    }
    // Tail mass of f from x (for x >= 1) via the u = 1/t substitution; a
    // direct quadrature over [x, huge] misses the support of f entirely once
    // the interval dwarfs it.
    let f_tail = |x: f64| -> Result<f64> {
        adaptive(0.0, 1.0 / x, 1e-10, &|u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                f(1.0 / u) / (u * u)
            }
        })
    };
    let f_total = adaptive(0.0, 1.0, 1e-10, f)? + f_tail(1.0)?;
    let tail_from_one = f_tail(1.0)?;
    let big_f = |x: f64| -> f64 {
        match direction {
            HardyDirection::FromZero => {
                if x <= 1.0 {
                    adaptive(0.0, x, 1e-10, f).unwrap_or(0.0)
                } else {
                    (f_total - f_tail(x).unwrap_or(0.0)).max(0.0)
                }
            }
            HardyDirection::FromInfinity => {
                if x >= 1.0 {
                    f_tail(x).unwrap_or(0.0)
                } else {
                    adaptive(x, 1.0, 1e-10, f).unwrap_or(0.0) + tail_from_one
                }
            }
        }
    };
    // Power-law tails decay too slowly for panel-based truncation; split at 1
    // and map the tail back to (0,1) with x = 1/u.
    let half_line = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        let near = adaptive(0.0, 1.0, 1e-9, g)?;
        let far = adaptive(0.0, 1.0, 1e-9, &|u: f64| {
            if u <= 0.0 {
                0.0
            } else {
                g(1.0 / u) / (u * u)
            }
        })?;
        Ok(near + far)
    };
    let lhs_pow = half_line(&|x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let fv = big_f(x);
        if fv <= 0.0 {
            return 0.0;
        }
        fv.powf(q) * x.powf(-1.0 - q * (gamma + 1.0))
    })?;
    let rhs_pow = half_line(&|x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let fv = f(x);
        if fv <= 0.0 {
            return 0.0;
        }
        fv.powf(p) * x.powf(-1.0 - p * gamma)
    })?;
    Ok((lhs_pow.powf(1.0 / q), rhs_pow.powf(1.0 / p)))
}

/// Local fractional integral of order beta at x, with the |x-t|^{beta-1}
/// singularity removed by the substitution t = x +- u^{1/beta}.
pub fn local_fractional(f: &dyn Fn(f64) -> f64, beta: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return domain(format!("need beta in (0,1), got {beta}"));
    }
    if !(x > 0.0) {
        return domain("need x > 0");
    }
    let cap = (0.5 * x).powf(beta);
    let v = adaptive(0.0, cap, 1e-10, &|u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let step = u.powf(1.0 / beta);
        f(x - step) + f(x + step)
    })?;
    Ok(v / beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p1(alpha: f64, sigma: f64) -> FracParams {
        FracParams::dim1(alpha, sigma, 1.0, 0).unwrap()
    }

    #[test]
    fn expand_recovers_unit_vector() {
        let params = p1(0.5, 0.5);
        let f = |x: f64| phi_seq(0.5, 3, x).unwrap()[3];
        let e = expand(System::Hermite, &params, &f, 12).unwrap();
        for (k, c) in e.coeffs.iter().enumerate() {
            if k == 3 {
                assert!((c - 1.0).abs() <= 1e-9, "c3 = {c}");
            } else {
                assert!(c.abs() <= 1e-9, "c{k} = {c}");
            }
        }
    }

    #[test]
    fn expand_is_linear() {
        let params = p1(0.5, 0.5);
        let f = |x: f64| {
            let s = phi_seq(0.5, 4, x).unwrap();
            s[1] + 2.0 * s[4]
        };
        let e = expand(System::Hermite, &params, &f, 8).unwrap();
        assert!((e.coeffs[1] - 1.0).abs() <= 1e-9);
        assert!((e.coeffs[4] - 2.0).abs() <= 1e-9);
        assert!(e.coeffs[0].abs() + e.coeffs[2].abs() + e.coeffs[3].abs() <= 3e-9);
    }

    #[test]
    fn expand_parseval_at_truncation() {
        let params = p1(0.5, 0.5);
        let f = |x: f64| x.powf(1.0) * (-0.5 * x * x).exp();
        let e = expand(System::Hermite, &params, &f, 32).unwrap();
        let energy: f64 = e.coeffs.iter().map(|c| c * c).sum();
        let norm2 = adaptive(0.0, 12.0, 1e-11, &|x: f64| {
            let v = f(x);
            v * v
        })
        .unwrap();
        assert!(energy <= norm2 + 1e-9, "{energy} vs {norm2}");
    }

    #[test]
    fn spectral_multiplier_examples() {
        let params = p1(0.5, 1.0);
        let mut e = SpectralExpansion {
            system: System::Hermite,
            params,
            coeffs: vec![0.0, 0.0, 1.0],
        };
        let d = apply_frac_spectral(&e, 1.0).unwrap();
        assert_abs_diff_eq!(d.coeffs[2], 1.0 / 11.0, epsilon = 1e-15);
        let id = apply_frac_spectral(&e, 0.0).unwrap();
        assert_eq!(id.coeffs, e.coeffs);
        e.coeffs = vec![1.0, 0.5, 0.25];
        let twice = apply_frac_spectral(&apply_frac_spectral(&e, 1.0).unwrap(), 1.0).unwrap();
        let once = apply_frac_spectral(&e, 2.0).unwrap();
        for (a, b) in twice.coeffs.iter().zip(&once.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-16);
        }
    }

    #[test]
    fn kernel_form_eigen_identity() {
        let params = FracParams::dim1(0.0, 1.0, 1.0, 0).unwrap();
        let f = |y: f64| phi_seq(0.0, 0, y).unwrap()[0];
        let got = apply_frac_kernel(System::Hermite, &params, &f, 1.0).unwrap();
        let expect = phi_seq(0.0, 0, 1.0).unwrap()[0] / 2.0;
        assert!((got - expect).abs() <= 1e-8 * expect.abs(), "{got} vs {expect}");
    }

    #[test]
    fn kernel_form_convolution_eigen_identity() {
        let params = FracParams::dim1(0.5, 0.5, 1.0, 0).unwrap();
        let f = |y: f64| ell_seq(0.5, 1, y).unwrap()[1];
        let got = apply_frac_kernel(System::Convolution, &params, &f, 1.0).unwrap();
        let expect = 7f64.powf(-0.5) * ell_seq(0.5, 1, 1.0).unwrap()[1];
        assert!((got - expect).abs() <= 1e-8 * expect.abs(), "{got} vs {expect}");
    }

    #[test]
    fn weighted_family_eigen_identity_shifted_order() {
        // f(y) = y^{aj} l_0^{alpha+aj}(y) maps to x^{aj} l_0^{alpha+aj}(x)
        // over the bottom eigenvalue of the shifted operator.
        let params = FracParams::dim1(0.5, 1.0, 1.0, 2).unwrap();
        let abar = 2.5;
        let f = move |y: f64| y.powf(2.0) * ell_seq(abar, 0, y).unwrap()[0];
        let x = 1.3;
        let got = apply_weighted_family(&params, &f, x).unwrap();
        let expect = x.powf(2.0) * ell_seq(abar, 0, x).unwrap()[0] / (2.0 * abar + 2.0);
        assert!((got - expect).abs() <= 1e-8 * expect.abs(), "{got} vs {expect}");
    }

    #[test]
    fn spectral_and_kernel_paths_agree() {
        let params = p1(0.5, 0.7);
        let f = |x: f64| {
            let s = phi_seq(0.5, 2, x).unwrap();
            s[0] + 0.5 * s[2]
        };
        let e = expand(System::Hermite, &params, &f, 16).unwrap();
        let damped = apply_frac_spectral(&e, 0.7).unwrap();
        for &x in &[0.4, 1.0, 2.5] {
            let spectral = damped.synthesize(x).unwrap();
            let kernel = apply_frac_kernel(System::Hermite, &params, &f, x).unwrap();
            assert!(
                (spectral - kernel).abs() <= 1e-7 * spectral.abs().max(kernel.abs()),
                "x={x}: {spectral} vs {kernel}"
            );
        }
    }

    #[test]
    fn admissible_hermite_examples() {
        let base = NormSpec::unweighted(2.0, 2.0, 2.0, Measure::LebesguePositive);
        assert!(admissible_hermite(&base, 0.5, 1).unwrap());
        let stretched = NormSpec::unweighted(2.0, 4.0, 2.0, Measure::LebesguePositive);
        assert!(!admissible_hermite(&stretched, 0.05, 1).unwrap());
        assert!(admissible_hermite(&stretched, 0.5, 1).unwrap());
        let p1 = NormSpec::unweighted(1.0, 2.0, 2.0, Measure::LebesguePositive);
        assert!(!admissible_hermite(&p1, 5.0, 1).unwrap());
    }

    #[test]
    fn admissible_convolution_examples() {
        assert!(admissible_convolution(2.0, 2.0, 0.5, 0.5).unwrap());
        let alpha = 0.5;
        let sigma = 0.5;
        let q_excl = (alpha + 1.0) / (alpha + 1.0 - sigma);
        assert!(!admissible_convolution(1.0, q_excl, sigma, alpha).unwrap());
        assert!(!admissible_convolution((alpha + 1.0) / sigma, f64::INFINITY, sigma, alpha).unwrap());
        assert!(admissible_convolution(1.0, 1.2, sigma, alpha).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prop_admissible_convolution_monotone_in_sigma(
            p in 1.0f64..4.0, q in 1.0f64..4.0, alpha in -0.4f64..3.0,
            s1 in 0.05f64..0.45, bump in 0.0f64..0.5,
        ) {
            let cap = alpha + 1.0;
            let sig1 = s1 * cap;
            let sig2 = (sig1 + bump * cap).min(cap * 0.999);
            let a1 = admissible_convolution(p, q, sig1, alpha).unwrap();
            let a2 = admissible_convolution(p, q, sig2, alpha).unwrap();
            prop_assert!(!(a1 && !a2), "sigma {sig1} -> {sig2} broke admissibility");
        }

        #[test]
        fn prop_multiplier_monotone(sigma1 in 0.1f64..1.0, gap in 0.0f64..2.0) {
            let params = FracParams::dim1(0.5, 0.5, 1.0, 0).unwrap();
            let e = SpectralExpansion {
                system: System::Hermite,
                params,
                coeffs: vec![1.0, -2.0, 0.5, 3.0],
            };
            let lo = apply_frac_spectral(&e, sigma1).unwrap();
            let hi = apply_frac_spectral(&e, sigma1 + gap).unwrap();
            for (a, b) in hi.coeffs.iter().zip(&lo.coeffs) {
                prop_assert!(a.abs() <= b.abs() + 1e-15);
            }
        }
    }

    #[test]
    fn vector_valued_single_eigen() {
        let params = p1(0.5, 0.5);
        let spec = NormSpec::unweighted(2.0, 2.0, 2.0, Measure::MuAlpha(0.5));
        let axis = Axis::geometric(1e-3, 30.0, 800);
        let fns = vec![TestFunction::Eigenfunction { k: 0 }];
        let (lhs, rhs) =
            vector_valued_norms(System::Convolution, &params, &fns, &spec, &axis, 24).unwrap();
        let lambda: f64 = 2.0 * 0.5 + 2.0;
        assert!(
            (lhs / rhs - lambda.powf(-0.5)).abs() <= 1e-4,
            "ratio {} vs {}",
            lhs / rhs,
            lambda.powf(-0.5)
        );
    }

    #[test]
    fn vector_valued_zero_family() {
        let params = p1(0.5, 0.5);
        let spec = NormSpec::unweighted(2.0, 2.0, 2.0, Measure::MuAlpha(0.5));
        let axis = Axis::geometric(1e-3, 30.0, 200);
        let fns = vec![TestFunction::Zero, TestFunction::Zero];
        let (lhs, rhs) =
            vector_valued_norms(System::Convolution, &params, &fns, &spec, &axis, 8).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn vector_valued_rejects_inadmissible() {
        let params = p1(0.5, 0.5);
        let spec = NormSpec::unweighted(1.0, 100.0, 2.0, Measure::MuAlpha(0.5));
        let axis = Axis::geometric(1e-3, 30.0, 100);
        let fns = vec![TestFunction::Eigenfunction { k: 0 }];
        assert!(matches!(
            vector_valued_norms(System::Convolution, &params, &fns, &spec, &axis, 8),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn hardy_flett_indicator_example() {
        let f = |x: f64| if x < 1.0 { 1.0 } else { 0.0 };
        let (lhs, rhs) = hardy_flett(&f, 2.0, 2.0, -0.5, HardyDirection::FromZero).unwrap();
        assert!((lhs - 2f64.sqrt()).abs() <= 1e-6, "lhs {lhs}");
        assert!((rhs - 1.0).abs() <= 1e-7, "rhs {rhs}");
        let z = |_: f64| 0.0;
        let (l0, r0) = hardy_flett(&z, 2.0, 2.0, -0.5, HardyDirection::FromZero).unwrap();
        assert_eq!((l0, r0), (0.0, 0.0));
    }

    #[test]
    fn hardy_flett_homogeneous() {
        let f = |x: f64| (-x).exp();
        let (l1, r1) = hardy_flett(&f, 2.0, 3.0, -0.5, HardyDirection::FromZero).unwrap();
        let g = |x: f64| 3.0 * (-x).exp();
        let (l3, r3) = hardy_flett(&g, 2.0, 3.0, -0.5, HardyDirection::FromZero).unwrap();
        assert!((l3 - 3.0 * l1).abs() <= 1e-7 * l3);
        assert!((r3 - 3.0 * r1).abs() <= 1e-7 * r3);
    }

    #[test]
    fn local_fractional_examples() {
        let one = |_: f64| 1.0;
        for &(beta, x) in &[(0.3, 1.0), (0.5, 2.0), (0.9, 0.7)] {
            let got = local_fractional(&one, beta, x).unwrap();
            let expect = 2.0 * (0.5 * x).powf(beta) / beta;
            assert!((got - expect).abs() <= 1e-9 * expect, "beta={beta} x={x}");
        }
        let z = |_: f64| 0.0;
        assert_eq!(local_fractional(&z, 0.5, 1.0).unwrap(), 0.0);
        let chi = |t: f64| if t < 2.0 { 1.0 } else { 0.0 };
        let got = local_fractional(&chi, 0.5, 1.0).unwrap();
        assert!((got - 2.0 * 2f64.sqrt()).abs() <= 1e-9);
    }
}
