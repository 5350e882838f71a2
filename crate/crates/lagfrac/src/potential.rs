//! Potential (fractional-integral) kernels for both Laguerre systems,
//! comparison kernels, and numerical certificates for the kernel bounds.
//!
//! The time integral is always taken in the variable xi = tanh t, split at
//! xi = 1/2 with the substitutions xi = e^{-v} on the left and
//! 1 - xi^2 = e^{-w} on the right so both endpoint singularities become
//! smooth exponentially decaying tails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Result};
use crate::grid::GridSpec;
use crate::kernels::{
    heat_kernel_convolution_meda_log, heat_kernel_hermite_meda_log,
    heat_kernel_hermite_meda_log_parts,
};
use crate::numeric::LogVal;
use crate::quad::{adaptive, semi_infinite};
use crate::specfun::{log_gamma, FracParams};

/// Default exponential constant in the Gaussian-tail branches.
pub const DEFAULT_C_EXP: f64 = 1.0 / 16.0;

/// Relative quadrature target for the xi-integrals.
pub const XI_REL_TOL: f64 = 1e-10;

/// Integrates exp(ln_weight(xi, ln(1 - xi^2))) over xi in (0,1) in log scale.
///
/// `ln_weight` must be the log of the *full* integrand including Jacobians
/// and any (log ...)^{sigma-1} factor. It receives ln(1 - xi^2) exactly from
/// the substitution variable; recomputing it from xi is hopeless once xi is
/// within machine epsilon of 1 (the cancellation noise would defeat any
/// adaptive error control). A coarse probe locates the magnitude offset
/// before the shifted exponential is integrated on both substituted
/// half-lines.
pub fn xi_log_integral(ln_weight: &dyn Fn(f64, f64) -> f64, rel_tol: f64) -> Result<LogVal> {
    let v0 = std::f64::consts::LN_2;
    let w0 = (4f64 / 3.0).ln();
    // Left half: xi = e^{-v}, ln(1 - xi^2) = ln(1 - e^{-2v}).
    let left_pt = |v: f64| ((-v).exp(), (-(-2.0 * v).exp()).ln_1p());
    // Right half: 1 - xi^2 = e^{-w} exactly.
    let right_pt = |w: f64| ((1.0 - (-w).exp()).sqrt(), -w);

    let mut offset = f64::NEG_INFINITY;
    for i in 0..120 {
        let v = v0 + 60.0 * i as f64 / 119.0;
        let (xi, lo) = left_pt(v);
        offset = offset.max(ln_weight(xi, lo) - v);
        let w = w0 + 60.0 * i as f64 / 119.0;
        let (xi, lo) = right_pt(w);
        offset = offset.max(ln_weight(xi, lo) - w);
    }
    if !offset.is_finite() {
        return Ok(LogVal::ZERO);
    }

    // Deep in either tail xi itself rounds to 0.0 or 1.0; weights are written
    // against (xi, ln(1 - xi^2)) so they stay finite there, but any residual
    // boundary degeneracy is truncated to zero rather than poisoning the
    // quadrature with NaN.
    let left = semi_infinite(v0, 1.0, rel_tol, &|v: f64| {
        let (xi, lo) = left_pt(v);
        if !(xi > 0.0) {
            return 0.0;
        }
        let val = (ln_weight(xi, lo) - v - offset).exp();
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    let right = semi_infinite(w0, 1.0, rel_tol, &|w: f64| {
        let (xi, lo) = right_pt(w);
        // dxi = e^{-w} dw / (2 xi)
        let val = (ln_weight(xi, lo) - w - offset).exp() / (2.0 * xi);
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    let total = left + right;
    if !(total > 0.0) {
        return Ok(LogVal::ZERO);
    }
    Ok(LogVal::from_ln(offset + total.ln()))
}

/// Hermite-type potential kernel (1/Gamma(sigma)) int_0^inf G^H_t t^{sigma-1} dt
/// in log scale, via the xi substitution t = atanh(xi), dt = dxi/(1-xi^2).
pub fn potential_kernel_hermite_log(params: &FracParams, x: &[f64], y: &[f64]) -> Result<LogVal> {
    let sigma = params.sigma();
    let p = params.clone();
    let xv = x.to_vec();
    let yv = y.to_vec();
    // Validate the point once up front so domain errors surface directly.
    heat_kernel_hermite_meda_log(&p, 0.5, &xv, &yv)?;
    let ln_weight = move |xi: f64, ln_omx2: f64| -> f64 {
        // t = atanh(xi) = (2 ln(1 + xi) - ln(1 - xi^2)) / 2, stable at both
        // endpoints.
        let t = 0.5 * (2.0 * xi.ln_1p() - ln_omx2);
        let g = heat_kernel_hermite_meda_log_parts(&p, xi, ln_omx2, &xv, &yv)
            .map(|v| v.ln_abs)
            .unwrap_or(f64::NEG_INFINITY);
        (sigma - 1.0) * t.ln() - ln_omx2 + g
    };
    let integral = xi_log_integral(&ln_weight, XI_REL_TOL)?;
    Ok(integral.scaled(-log_gamma(sigma)?))
}

pub fn potential_kernel_hermite(params: &FracParams, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(potential_kernel_hermite_log(params, x, y)?.value())
}

/// Convolution-type potential kernel via the pointwise relation
/// H = H^H (xy)^{-alpha-1/2}, one dimension only.
pub fn potential_kernel_convolution_log(params: &FracParams, x: f64, y: f64) -> Result<LogVal> {
    if params.n() != 1 {
        return precondition("convolution-type potential kernel is one-dimensional");
    }
    let abar = params.shifted_alpha()[0];
    if !(params.sigma() < abar + 1.0) {
        return precondition(format!(
            "need sigma < alpha + a j + 1 = {}, got sigma = {}",
            abar + 1.0,
            params.sigma()
        ));
    }
    let h = potential_kernel_hermite_log(params, &[x], &[y])?;
    Ok(h.scaled(-(abar + 0.5) * (x * y).ln()))
}

pub fn potential_kernel_convolution(params: &FracParams, x: f64, y: f64) -> Result<f64> {
    Ok(potential_kernel_convolution_log(params, x, y)?.value())
}

/// Auxiliary convolution kernel K_sigma(x), radial in r = |x|.
///
/// Inside the unit ball the branch depends on the sign of sigma - n/2; the
/// log branch uses log(e/r) so the kernel stays >= 1 there. Outside, a
/// Gaussian tail with configurable constant.
pub fn k_sigma(sigma: f64, n: usize, r: f64, c_exp: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("K_sigma needs |x| > 0, got {r}"));
    }
    if !(sigma > 0.0) || n == 0 {
        return domain("K_sigma needs sigma > 0 and n >= 1");
    }
    if r >= 1.0 {
        return Ok((-c_exp * r * r).exp());
    }
    let half_n = n as f64 / 2.0;
    Ok(if sigma < half_n {
        r.powf(2.0 * sigma - n as f64)
    } else if sigma == half_n {
        1.0 - r.ln()
    } else {
        1.0
    })
}

/// Comparison kernel for the weighted convolution-type family:
/// (x+y)^{-(2 alpha + 1)} times the local factor W (three branches in sigma)
/// or the Gaussian tail when |x - y| >= 1.
pub fn cal_k(alpha: f64, sigma: f64, x: f64, y: f64, c_exp: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return domain("cal_k needs x, y > 0");
    }
    let d = (x - y).abs();
    let s = x + y;
    let pref = s.powf(-(2.0 * alpha + 1.0));
    if d >= 1.0 {
        return Ok(pref * (-c_exp * d * d).exp());
    }
    let w = if sigma < 0.5 {
        if d == 0.0 {
            return domain("cal_k is singular at x = y for sigma < 1/2");
        }
        d.powf(2.0 * sigma - 1.0)
    } else if sigma == 0.5 {
        if d == 0.0 {
            return domain("cal_k is singular at x = y for sigma = 1/2");
        }
        (s / d).ln()
    } else {
        s.powf(2.0 * sigma - 1.0).min(1.0)
    };
    Ok(pref * w)
}

/// Dominating kernel for the j-uniform bound, with its explicit xi-integral.
pub fn overline_k_log(alpha: f64, sigma: f64, x: f64, y: f64) -> Result<LogVal> {
    if !(x > 0.0 && y > 0.0 && sigma > 0.0) {
        return domain("overline_k needs x, y, sigma > 0");
    }
    let dm = (x - y) * (x - y);
    let sp = (x + y) * (x + y);
    let ln_weight = move |xi: f64, ln_omx2: f64| -> f64 {
        // log((1+xi)/(1-xi)) = 2 ln(1+xi) - ln(1-xi^2), stable at both ends.
        let l = 2.0 * xi.ln_1p() - ln_omx2;
        (sigma - 1.0) * l.ln() - 0.5 * xi.ln() - 0.5 * ln_omx2 - dm / (4.0 * xi) - xi * sp / 4.0
    };
    let integral = xi_log_integral(&ln_weight, XI_REL_TOL)?;
    Ok(integral.scaled(-(alpha + 0.5) * (x * y).ln()))
}

pub fn overline_k(alpha: f64, sigma: f64, x: f64, y: f64) -> Result<f64> {
    Ok(overline_k_log(alpha, sigma, x, y)?.value())
}

/// Outcome of a sup-ratio sweep against a comparison bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub sup_ratio: f64,
    pub argmax_x: f64,
    pub argmax_y: f64,
    pub sweep_descriptor: String,
    pub passed: bool,
}

/// Uniformity thresholds with their stated defaults: the full-sweep sup may
/// exceed the early-sweep sup by at most these factors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UniformityConfig {
    pub alpha_slack: f64,
    pub j_slack: f64,
}

impl Default for UniformityConfig {
    fn default() -> Self {
        UniformityConfig {
            alpha_slack: 1.05,
            j_slack: 1.1,
        }
    }
}

struct SweepMax {
    ratio: f64,
    x: f64,
    y: f64,
}

impl SweepMax {
    fn new() -> Self {
        SweepMax {
            ratio: f64::NEG_INFINITY,
            x: f64::NAN,
            y: f64::NAN,
        }
    }

    fn update(&mut self, ratio: f64, x: f64, y: f64) {
        if ratio > self.ratio {
            self.ratio = ratio;
            self.x = x;
            self.y = y;
        }
    }

    fn merge(mut self, other: SweepMax) -> SweepMax {
        self.update(other.ratio, other.x, other.y);
        self
    }
}

/// Heat-kernel envelope certificate: sup over an alpha sweep, a planar grid
/// and a xi grid of G^H_{alpha,t(xi)}(x,y) against the constant-free envelope
/// ((1-xi^2)/xi)^{n/2} exp(-(x-y)^2/(4 xi) - xi (x+y)^2 / 4), n = 1.
/// Passes when the sup is alpha-stable (full sweep within `alpha_slack` of
/// the first quartile's sup).
pub fn certify_heat_bound(
    alpha_sweep: &[f64],
    grid: &GridSpec,
    xi_grid: &[f64],
    cfg: &UniformityConfig,
) -> Result<BoundCertificate> {
    if alpha_sweep.is_empty() || xi_grid.is_empty() {
        return precondition("alpha sweep and xi grid must be nonempty");
    }
    grid.validate()?;
    let pairs = grid.pairs();
    // Parallel over alpha; the per-alpha results are collected in sweep order
    // and merged sequentially, so the outcome is thread-count independent.
    let sweeps: Vec<SweepMax> = alpha_sweep
        .par_iter()
        .map(|&alpha| -> Result<SweepMax> {
            let params = FracParams::dim1(alpha, 0.5, 1.0, 0)?;
            let mut best = SweepMax::new();
            for &xi in xi_grid {
                for &(x, y) in &pairs {
                    let lhs = heat_kernel_hermite_meda_log(&params, xi, &[x], &[y])?;
                    let ln_rhs = 0.5 * ((1.0 - xi * xi).ln() - xi.ln())
                        - (x - y) * (x - y) / (4.0 * xi)
                        - xi * (x + y) * (x + y) / 4.0;
                    best.update((lhs.ln_abs - ln_rhs).exp(), x, y);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let mut per_alpha = Vec::with_capacity(alpha_sweep.len());
    let mut overall = SweepMax::new();
    for best in sweeps {
        per_alpha.push(best.ratio);
        overall = overall.merge(best);
    }
    let quartile = (alpha_sweep.len() + 3) / 4;
    let early = per_alpha[..quartile]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = overall.ratio.is_finite() && overall.ratio <= cfg.alpha_slack * early;
    Ok(BoundCertificate {
        sup_ratio: overall.ratio,
        argmax_x: overall.x,
        argmax_y: overall.y,
        sweep_descriptor: format!(
            "heat-bound alpha={alpha_sweep:?} xi_grid_len={} {}",
            xi_grid.len(),
            grid.descriptor()
        ),
        passed,
    })
}

/// Default ceiling for the moment bound sweep: frozen from the measured
/// desk-scale suprema with a 2x headroom factor.
pub const MOMENT_CEILING: f64 = 40.0;

/// Moment bound certificate: x^{2 sigma} times the mu_alpha integral of the
/// dominating kernel must stay below the ceiling on x in [2, 40].
pub fn certify_overline_moment(
    alpha: f64,
    sigma: f64,
    xs: &[f64],
    ceiling: f64,
) -> Result<BoundCertificate> {
    if xs.iter().any(|&x| x <= 2.0) {
        return precondition("moment bound applies for x > 2");
    }
    let mut best = SweepMax::new();
    for &x in xs {
        let m = overline_k_moment(alpha, sigma, x)?;
        best.update(m, x, f64::NAN);
    }
    Ok(BoundCertificate {
        sup_ratio: best.ratio,
        argmax_x: best.x,
        argmax_y: best.y,
        sweep_descriptor: format!(
            "overline-moment alpha={alpha} sigma={sigma} xs={:?} ceiling={ceiling}",
            xs
        ),
        passed: best.ratio.is_finite() && best.ratio <= ceiling,
    })
}

/// Sup of H^H_{alpha,sigma}(x,y) / K_sigma(x-y) over an alpha sweep and a
/// planar grid; passes when the sup is stable across the alpha sweep.
pub fn certify_prop_estimacion(
    alpha_sweep: &[f64],
    sigma: f64,
    grid: &GridSpec,
    c_exp: f64,
    cfg: &UniformityConfig,
) -> Result<BoundCertificate> {
    if alpha_sweep.is_empty() {
        return precondition("alpha sweep must be nonempty");
    }
    grid.validate()?;
    let pairs = grid.pairs();
    let mut per_alpha = Vec::with_capacity(alpha_sweep.len());
    let mut overall = SweepMax::new();
    for &alpha in alpha_sweep {
        let params = FracParams::dim1(alpha, sigma, 1.0, 0)?;
        let mut best = SweepMax::new();
        for &(x, y) in &pairs {
            let h = potential_kernel_hermite(&params, &[x], &[y])?;
            let k = k_sigma(sigma, 1, (x - y).abs(), c_exp)?;
            best.update(h / k, x, y);
        }
        per_alpha.push(best.ratio);
        overall = overall.merge(best);
    }
    let quartile = (alpha_sweep.len() + 3) / 4;
    let early = per_alpha[..quartile]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = overall.ratio.is_finite() && overall.ratio <= cfg.alpha_slack * early;
    Ok(BoundCertificate {
        sup_ratio: overall.ratio,
        argmax_x: overall.x,
        argmax_y: overall.y,
        sweep_descriptor: format!(
            "prop-estimacion alpha={alpha_sweep:?} sigma={sigma} c_exp={c_exp} {}",
            grid.descriptor()
        ),
        passed,
    })
}

/// Sup over j in [0, j_max] and the grid of
/// H_{alpha+aj,sigma}(x,y) (xy)^{aj} / cal_K_{alpha,sigma}(x,y), log-domain;
/// passes when the late-j sups stay within `j_slack` of the early ones.
pub fn certify_prop_mathk(
    alpha: f64,
    sigma: f64,
    a: f64,
    j_max: u32,
    grid: &GridSpec,
    c_exp: f64,
    cfg: &UniformityConfig,
) -> Result<(BoundCertificate, Vec<BoundCertificate>)> {
    if !(sigma > 0.0 && sigma < alpha + 1.0) {
        return precondition(format!("need 0 < sigma < alpha + 1, got sigma={sigma}"));
    }
    if a < 1.0 {
        return precondition("need a >= 1");
    }
    grid.validate()?;
    let pairs = grid.pairs();
    let mut per_j = Vec::with_capacity(j_max as usize + 1);
    let mut overall = SweepMax::new();
    for j in 0..=j_max {
        let params = FracParams::dim1(alpha, sigma, a, j)?;
        let mut best = SweepMax::new();
        for &(x, y) in &pairs {
            let h = potential_kernel_convolution_log(&params, x, y)?;
            let k = cal_k(alpha, sigma, x, y, c_exp)?;
            let ln_ratio = h.ln_abs + a * j as f64 * (x * y).ln() - k.ln();
            best.update(ln_ratio.exp(), x, y);
        }
        per_j.push(BoundCertificate {
            sup_ratio: best.ratio,
            argmax_x: best.x,
            argmax_y: best.y,
            sweep_descriptor: format!("prop-mathk j={j} alpha={alpha} sigma={sigma} a={a}"),
            passed: best.ratio.is_finite(),
        });
        overall = overall.merge(best);
    }
    let early = per_j[..(per_j.len().min(4))]
        .iter()
        .map(|c| c.sup_ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = overall.ratio.is_finite() && overall.ratio <= cfg.j_slack * early;
    Ok((
        BoundCertificate {
            sup_ratio: overall.ratio,
            argmax_x: overall.x,
            argmax_y: overall.y,
            sweep_descriptor: format!(
                "prop-mathk alpha={alpha} sigma={sigma} a={a} j_max={j_max} c_exp={c_exp} {}",
                grid.descriptor()
            ),
            passed,
        },
        per_j,
    ))
}

fn require_far_grid(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.iter().any(|&(x, y)| (x - y).abs() < 1.0) {
        return precondition("grid must satisfy |x - y| >= 1 on every pair");
    }
    Ok(())
}

/// Far-region heat-kernel bound: G_{alpha+aj,t(xi)} against the explicit
/// Gamma-prefactor envelope, swept over j in [1, j_max], a xi grid, and an
/// |x-y| >= 1 planar grid.
pub fn certify_lemma_kernelexp(
    alpha: f64,
    a: f64,
    j_max: u32,
    xi_grid: &[f64],
    grid: &GridSpec,
    cfg: &UniformityConfig,
) -> Result<(BoundCertificate, Vec<f64>)> {
    if j_max < 1 {
        return precondition("lemma requires j >= 1");
    }
    grid.validate()?;
    let pairs = grid.pairs();
    require_far_grid(&pairs)?;
    let mut per_j = Vec::new();
    let mut overall = SweepMax::new();
    for j in 1..=j_max {
        let params = FracParams::dim1(alpha, 0.5, a, j)?;
        let aj = a * j as f64;
        let ln_pref = log_gamma(aj)? - log_gamma(alpha + aj + 0.5)?;
        let mut best = SweepMax::new();
        for &xi in xi_grid {
            for &(x, y) in &pairs {
                let lhs = heat_kernel_convolution_meda_log(&params, xi, &[x], &[y])?;
                let ln_rhs = ln_pref - (x - y) * (x - y) / (8.0 * xi)
                    + (alpha + 1.0) * ((1.0 - xi * xi).ln() - xi.ln())
                    - (2.0 * alpha + 1.0) * (x * x - y * y).abs().ln()
                    - aj * (x * y).ln();
                best.update((lhs.ln_abs - ln_rhs).exp(), x, y);
            }
        }
        per_j.push(best.ratio);
        overall = overall.merge(best);
    }
    let early = per_j[..per_j.len().min(3)]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = overall.ratio.is_finite() && overall.ratio <= cfg.j_slack * early.max(1e-300);
    Ok((
        BoundCertificate {
            sup_ratio: overall.ratio,
            argmax_x: overall.x,
            argmax_y: overall.y,
            sweep_descriptor: format!(
                "lemma-kernelexp alpha={alpha} a={a} j_max={j_max} xi_grid={xi_grid:?} {}",
                grid.descriptor()
            ),
            passed,
        },
        per_j,
    ))
}

/// Near-diagonal companion bound: G_{alpha+aj,t(xi)} against
/// ((1-xi^2)/xi)^{1/2} (xy)^{-aj-alpha-1/2} on |x-y| < 1, x+y > 2.
pub fn certify_lemma_kernelexp2(
    alpha: f64,
    a: f64,
    j_max: u32,
    xi_grid: &[f64],
    grid: &GridSpec,
    cfg: &UniformityConfig,
) -> Result<(BoundCertificate, Vec<f64>)> {
    if j_max < 1 {
        return precondition("lemma requires j >= 1");
    }
    grid.validate()?;
    let pairs: Vec<(f64, f64)> = grid
        .pairs()
        .into_iter()
        .filter(|&(x, y)| (x - y).abs() < 1.0 && x + y > 2.0)
        .collect();
    if pairs.is_empty() {
        return precondition("grid has no points with |x - y| < 1 and x + y > 2");
    }
    let mut per_j = Vec::new();
    let mut overall = SweepMax::new();
    for j in 1..=j_max {
        let params = FracParams::dim1(alpha, 0.5, a, j)?;
        let aj = a * j as f64;
        let mut best = SweepMax::new();
        for &xi in xi_grid {
            for &(x, y) in &pairs {
                let lhs = heat_kernel_convolution_meda_log(&params, xi, &[x], &[y])?;
                let ln_rhs = 0.5 * ((1.0 - xi * xi).ln() - xi.ln())
                    - (aj + alpha + 0.5) * (x * y).ln();
                best.update((lhs.ln_abs - ln_rhs).exp(), x, y);
            }
        }
        per_j.push(best.ratio);
        overall = overall.merge(best);
    }
    let early = per_j[..per_j.len().min(3)]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = overall.ratio.is_finite() && overall.ratio <= cfg.j_slack * early.max(1e-300);
    Ok((
        BoundCertificate {
            sup_ratio: overall.ratio,
            argmax_x: overall.x,
            argmax_y: overall.y,
            sweep_descriptor: format!(
                "lemma-kernelexp2 alpha={alpha} a={a} j_max={j_max} xi_grid={xi_grid:?} {}",
                grid.descriptor()
            ),
            passed,
        },
        per_j,
    ))
}

/// Moment of the dominating kernel: x^{2 sigma} int_0^inf overline_k dmu_alpha.
///
/// Integrated xi-outermost: per xi the y-integral is a Gaussian bump of width
/// 2 sqrt(xi) around y = x, handled in the scaled displacement variable where
/// the exponent -z^2 is exact. Doing the y-integral outermost instead costs a
/// full xi-integral per y sample (minutes per moment), and its leading panels
/// underflow to zero for large x, which a panel-marching rule mistakes for a
/// finished integral.
pub fn overline_k_moment(alpha: f64, sigma: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && sigma > 0.0) {
        return domain("overline_k moment needs x, sigma > 0");
    }
    // x^{-(alpha+1/2)} y^{alpha+1/2} y^{2 alpha+1 - (2 alpha+1)}: the measure
    // and kernel powers combine to (y/x)^{alpha+1/2}, conditioned around the
    // bump at y = x.
    let inner = |xi: f64| -> f64 {
        let root = 2.0 * xi.sqrt();
        let g = |z: f64| -> f64 {
            let y = x + root * z;
            if y <= 0.0 {
                return 0.0;
            }
            let ln = -z * z - xi * (x + y) * (x + y) / 4.0 + (alpha + 0.5) * (y / x).ln();
            let v = ln.exp() * root;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        let zcap = 8.0 + (2.0 * (alpha + 0.5).max(0.0)).sqrt();
        let zlo = -zcap.min(x / root);
        adaptive(zlo, zcap, 1e-9, &g).unwrap_or(0.0)
    };
    let v0 = std::f64::consts::LN_2;
    let w0 = (4f64 / 3.0).ln();
    // Left integrand decays like e^{-sigma v}, the right one like e^{-w/2}.
    let v_cap = v0 + (42.0 / sigma.min(1.0)).min(2000.0);
    let w_cap = w0 + 200.0;
    let left = adaptive(v0, v_cap, 1e-9, &|v: f64| {
        let xi = (-v).exp();
        if !(xi > 0.0) {
            return 0.0;
        }
        let ln_omx2 = (-(-2.0 * v).exp()).ln_1p();
        let l = 2.0 * xi.ln_1p() - ln_omx2;
        // dxi = -xi dv; W = l^{sigma-1} xi^{-1/2} (1-xi^2)^{-1/2}.
        let val = l.powf(sigma - 1.0)
            * (-0.5 * xi.ln() - 0.5 * ln_omx2).exp()
            * inner(xi)
            * xi;
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    let right = adaptive(w0, w_cap, 1e-9, &|w: f64| {
        let xi = (1.0 - (-w).exp()).sqrt();
        let ln_omx2 = -w;
        let l = 2.0 * xi.ln_1p() - ln_omx2;
        // dxi = e^{-w} dw / (2 xi); the (1-xi^2)^{-1/2} factor cancels half
        // of e^{-w}.
        let val = l.powf(sigma - 1.0) * (-0.5 * xi.ln() - 0.5 * w).exp() * inner(xi) / (2.0 * xi);
        if val.is_finite() {
            val
        } else {
            0.0
        }
    })?;
    Ok(x.powf(2.0 * sigma) * (left + right))
}
