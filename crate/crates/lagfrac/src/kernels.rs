//! Closed-form heat kernels for both Laguerre systems, the Meda change of
//! variable, the xi-form of the Hermite-type kernel, and the spectral-series
//! oracle used to validate the closed forms.

use twofloat::TwoFloat;

use crate::error::{domain, Result};
use crate::numeric::LogVal;
use crate::specfun::{bessel_i, bessel_i_scaled_ln, ell_seq_dd, phi_seq_dd, FracParams};

/// Which Laguerre eigenfunction system a kernel or expansion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum System {
    Hermite,
    Convolution,
}

/// Consistent pair (xi, t) under t = (1/2) log((1+xi)/(1-xi)), xi = tanh t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedaPoint {
    pub xi: f64,
    pub t: f64,
}

pub fn meda_forward(xi: f64) -> Result<MedaPoint> {
    if !(xi > 0.0 && xi < 1.0) {
        return domain(format!("Meda variable must lie in (0,1), got {xi}"));
    }
    Ok(MedaPoint { xi, t: xi.atanh() })
}

pub fn meda_inverse(t: f64) -> Result<MedaPoint> {
    if !(t > 0.0) {
        return domain(format!("Meda inverse needs t > 0, got {t}"));
    }
    Ok(MedaPoint { xi: t.tanh(), t })
}

/// The quadratic forms q_plus / q_minus of the Schlaefli-integrated kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadForms {
    pub qplus: f64,
    pub qminus: f64,
}

pub fn quad_forms(x: &[f64], y: &[f64], s: &[f64]) -> QuadForms {
    let norm2: f64 = x.iter().map(|v| v * v).sum::<f64>() + y.iter().map(|v| v * v).sum::<f64>();
    let cross: f64 = x
        .iter()
        .zip(y)
        .zip(s)
        .map(|((&xi, &yi), &si)| xi * yi * si)
        .sum();
    QuadForms {
        qplus: norm2 + 2.0 * cross,
        qminus: norm2 - 2.0 * cross,
    }
}

fn check_positive_point(x: &[f64], n: usize, name: &str) -> Result<()> {
    if x.len() != n {
        return domain(format!("{name} must have dimension {n}, got {}", x.len()));
    }
    if x.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return domain(format!("{name} coordinates must be finite and positive"));
    }
    Ok(())
}

// ln sinh(2t) and coth(2t) without overflow for large t.
fn ln_sinh_2t(t: f64) -> f64 {
    2.0 * t + (-(-4.0 * t).exp()).ln_1p() - std::f64::consts::LN_2
}

fn coth_2t(t: f64) -> f64 {
    let e = (-4.0 * t).exp();
    (1.0 + e) / (1.0 - e)
}

/// Hermite-type Laguerre heat kernel G^H_{alpha,t}(x,y) in log scale.
///
/// All factors, including the log-scale Bessel values, are combined before a
/// single exponentiation; small t with large x.y stays finite.
pub fn heat_kernel_hermite_log(params: &FracParams, t: f64, x: &[f64], y: &[f64]) -> Result<LogVal> {
    if !(t > 0.0) {
        return domain(format!("heat kernel needs t > 0, got {t}"));
    }
    let n = params.n();
    check_positive_point(x, n, "x")?;
    check_positive_point(y, n, "y")?;
    let alpha = params.shifted_alpha();
    let ln_sh = ln_sinh_2t(t);
    let norm2: f64 = x.iter().map(|v| v * v).sum::<f64>() + y.iter().map(|v| v * v).sum::<f64>();
    let mut ln = -(n as f64) * ln_sh - 0.5 * coth_2t(t) * norm2;
    for i in 0..n {
        let prod = x[i] * y[i];
        let z = prod * (-ln_sh).exp();
        let bess = bessel_i(alpha[i], z)?;
        ln += 0.5 * prod.ln() + bess.ln_abs;
    }
    Ok(LogVal::from_ln(ln))
}

pub fn heat_kernel_hermite(params: &FracParams, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(heat_kernel_hermite_log(params, t, x, y)?.value())
}

/// The xi-form of G^H at t(xi): prefactor times a tensorized integral against
/// dPi_alpha, evaluated coordinate-by-coordinate (the integrand factorizes).
pub fn heat_kernel_hermite_meda_log(
    params: &FracParams,
    xi: f64,
    x: &[f64],
    y: &[f64],
) -> Result<LogVal> {
    let n = params.n();
    check_positive_point(x, n, "x")?;
    check_positive_point(y, n, "y")?;
    if !(xi > 0.0 && xi < 1.0) {
        return domain(format!("xi must lie in (0,1), got {xi}"));
    }
    heat_kernel_hermite_meda_log_parts(params, xi, (1.0 - xi * xi).ln(), x, y)
}

/// Same kernel with ln(1 - xi^2) supplied by the caller. The xi-integral
/// substitutions know this quantity exactly; recomputing it from xi loses all
/// precision once xi is within machine epsilon of 1.
pub fn heat_kernel_hermite_meda_log_parts(
    params: &FracParams,
    xi: f64,
    ln_omx2: f64,
    x: &[f64],
    y: &[f64],
) -> Result<LogVal> {
    let n = params.n();
    check_positive_point(x, n, "x")?;
    check_positive_point(y, n, "y")?;
    if !(xi > 0.0 && xi <= 1.0 && ln_omx2 < 0.0) {
        return domain(format!("need xi in (0,1], got xi = {xi}, ln(1-xi^2) = {ln_omx2}"));
    }
    // The xi -> 0 endpoint is an integrable singularity handled by the
    // caller's substitutions; evaluation itself clamps.
    let omx2 = ln_omx2.exp();
    let alpha = params.shifted_alpha();
    let alpha_total: f64 = alpha.iter().sum();
    let ln_ratio = ln_omx2 - (2.0 * xi).ln();
    let mut ln = (n as f64 + alpha_total) * ln_ratio;
    for i in 0..n {
        let (xi_c, yi_c) = (x[i], y[i]);
        ln += (alpha[i] + 0.5) * (xi_c * yi_c).ln();
        // g(s) = -q_+/(4 xi) - xi q_-/4 is maximal at s = -1, and
        // g(s) - g(-1) = -c (1 + s) exactly, with c = xy (1 - xi^2)/(2 xi).
        // The s-integral against dPi_nu is therefore a scaled Bessel term:
        // int e^{-c(1+s)} dPi_nu(s) = e^{-c} c^{-nu} I_nu(c), including the
        // nu = -1/2 limit through I_{-1/2}'s cosh closed form.
        let gmax = -(xi_c - yi_c).powi(2) / (4.0 * xi) - xi * (xi_c + yi_c).powi(2) / 4.0;
        let c = xi_c * yi_c * omx2 / (2.0 * xi);
        let ln_s_int = bessel_i_scaled_ln(alpha[i], c)? - alpha[i] * c.ln();
        ln += gmax + ln_s_int;
    }
    Ok(LogVal::from_ln(ln))
}

/// One-dimensional Meda-form kernel log at y = x + dy, with the diagonal
/// displacement dy supplied exactly by the caller.
///
/// Recomputing (x - y)^2 from a rounded y = x + dy carries an absolute error
/// of order eps * x, which the 1/(4 xi) in the Gaussian exponent blows up to
/// a relative kernel error of order eps * x / sqrt(xi) -- fatal for small xi.
/// With dy exact the exponent is exact to a few ulps.
pub fn heat_kernel_hermite_meda_log_1d(
    params: &FracParams,
    xi: f64,
    ln_omx2: f64,
    x: f64,
    dy: f64,
) -> Result<LogVal> {
    if params.n() != 1 {
        return domain("displaced kernel form is one-dimensional");
    }
    let y = x + dy;
    if !(x > 0.0 && y > 0.0) {
        return Ok(LogVal::ZERO);
    }
    if !(xi > 0.0 && xi <= 1.0 && ln_omx2 < 0.0) {
        return domain(format!("need xi in (0,1], got xi = {xi}, ln(1-xi^2) = {ln_omx2}"));
    }
    let omx2 = ln_omx2.exp();
    let alpha = params.shifted_alpha()[0];
    let ln_ratio = ln_omx2 - (2.0 * xi).ln();
    let gmax = -dy * dy / (4.0 * xi) - xi * (x + y).powi(2) / 4.0;
    let c = x * y * omx2 / (2.0 * xi);
    let ln_s_int = bessel_i_scaled_ln(alpha, c)? - alpha * c.ln();
    Ok(LogVal::from_ln(
        (1.0 + alpha) * ln_ratio + (alpha + 0.5) * (x * y).ln() + gmax + ln_s_int,
    ))
}

pub fn heat_kernel_hermite_meda(params: &FracParams, xi: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(heat_kernel_hermite_meda_log(params, xi, x, y)?.value())
}

/// Convolution-type heat kernel via G = G^H (xy)^{-alpha-1/2}, log domain.
pub fn heat_kernel_convolution_log(
    params: &FracParams,
    t: f64,
    x: &[f64],
    y: &[f64],
) -> Result<LogVal> {
    let g = heat_kernel_hermite_log(params, t, x, y)?;
    Ok(g.scaled(-power_offset(params, x, y)))
}

pub fn heat_kernel_convolution(params: &FracParams, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(heat_kernel_convolution_log(params, t, x, y)?.value())
}

/// xi-form of the convolution-type kernel (used by the Lemma 5.5/5.6 sweeps).
pub fn heat_kernel_convolution_meda_log(
    params: &FracParams,
    xi: f64,
    x: &[f64],
    y: &[f64],
) -> Result<LogVal> {
    let g = heat_kernel_hermite_meda_log(params, xi, x, y)?;
    Ok(g.scaled(-power_offset(params, x, y)))
}

fn power_offset(params: &FracParams, x: &[f64], y: &[f64]) -> f64 {
    params
        .shifted_alpha()
        .iter()
        .zip(x.iter().zip(y))
        .map(|(&a, (&xi, &yi))| (a + 0.5) * (xi * yi).ln())
        .sum()
}

/// Truncated spectral series value and a geometric tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub tail_bound: f64,
}

/// Eigen-series oracle: sum over |k| <= m_trunc of e^{-t lambda} times the
/// eigenfunction products. Exact multi-index enumeration, n <= 3.
pub fn heat_kernel_series(
    system: System,
    params: &FracParams,
    t: f64,
    x: &[f64],
    y: &[f64],
    m_trunc: usize,
) -> Result<SeriesEval> {
    if !(t > 0.0) {
        return domain(format!("heat kernel series needs t > 0, got {t}"));
    }
    let n = params.n();
    if n > 3 {
        return domain("spectral series enumeration supports n <= 3 only");
    }
    check_positive_point(x, n, "x")?;
    check_positive_point(y, n, "y")?;
    let alpha = params.shifted_alpha();
    let alpha_total: f64 = alpha.iter().sum();
    // The series cancels heavily at small t (the level sums reach ~1e4 times
    // the final value), so the degree-dependent factors are carried in
    // double-double precision and only rounded at the very end.
    let tables: Vec<(Vec<TwoFloat>, Vec<TwoFloat>)> = (0..n)
        .map(|i| -> Result<_> {
            let (tx, ty) = match system {
                System::Hermite => {
                    (phi_seq_dd(alpha[i], m_trunc, x[i])?, phi_seq_dd(alpha[i], m_trunc, y[i])?)
                }
                System::Convolution => {
                    (ell_seq_dd(alpha[i], m_trunc, x[i])?, ell_seq_dd(alpha[i], m_trunc, y[i])?)
                }
            };
            Ok((tx, ty))
        })
        .collect::<Result<_>>()?;

    let level_sums = |m: usize| -> (TwoFloat, f64) {
        // (signed sum, absolute sum) over |k| = m.
        let mut signed = TwoFloat::from(0.0);
        let mut abs = 0.0;
        match n {
            1 => {
                let p = tables[0].0[m] * tables[0].1[m];
                signed = p;
                abs = f64::from(p).abs();
            }
            2 => {
                for k1 in 0..=m {
                    let k2 = m - k1;
                    let p = tables[0].0[k1] * tables[0].1[k1] * tables[1].0[k2] * tables[1].1[k2];
                    signed += p;
                    abs += f64::from(p).abs();
                }
            }
            3 => {
                for k1 in 0..=m {
                    for k2 in 0..=(m - k1) {
                        let k3 = m - k1 - k2;
                        let p = tables[0].0[k1] * tables[0].1[k1]
                            * tables[1].0[k2] * tables[1].1[k2]
                            * tables[2].0[k3] * tables[2].1[k3];
                        signed += p;
                        abs += f64::from(p).abs();
                    }
                }
            }
            _ => unreachable!(),
        }
        (signed, abs)
    };

    // e^{-t lambda_m} = d0 q^m with the level-independent part d0 kept in f64
    // (a uniform scale error does not feed the cancellation) and the ratio
    // q = e^{-4t} accumulated in double-double.
    let d0 = (-t * (2.0 * alpha_total + 2.0 * n as f64)).exp();
    let q = TwoFloat::from(-4.0 * t).exp();
    let mut value = TwoFloat::from(0.0);
    let mut damp = TwoFloat::from(1.0);
    let mut last_abs = 0.0f64;
    for m in 0..=m_trunc {
        let (signed, abs) = level_sums(m);
        value += damp * signed;
        last_abs = last_abs.max(f64::from(damp) * abs * d0);
        damp *= q;
    }
    let rho = (-4.0 * t).exp();
    Ok(SeriesEval {
        value: f64::from(value) * d0,
        tail_bound: last_abs * rho / (1.0 - rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p1(alpha: f64) -> FracParams {
        FracParams::dim1(alpha, 0.5, 1.0, 0).unwrap()
    }

    #[test]
    fn meda_examples() {
        let m = meda_forward(0.5).unwrap();
        assert_abs_diff_eq!(m.t, 0.5 * 3f64.ln(), epsilon = 1e-15);
        let m = meda_forward(0.6).unwrap();
        assert_abs_diff_eq!(m.t, 2f64.ln(), epsilon = 1e-15);
        let m = meda_inverse(1.0).unwrap();
        assert_abs_diff_eq!(m.xi, 1f64.tanh(), epsilon = 1e-16);
        assert!(meda_forward(0.0).is_err());
        assert!(meda_forward(1.0).is_err());
    }

    #[test]
    fn closed_form_matches_series() {
        let p = p1(0.5);
        let closed = heat_kernel_hermite(&p, 0.3, &[1.0], &[2.0]).unwrap();
        let series = heat_kernel_series(System::Hermite, &p, 0.3, &[1.0], &[2.0], 60).unwrap();
        assert!((closed - series.value).abs() <= 1e-10 * closed.abs());
    }

    #[test]
    fn kernel_symmetry_exact() {
        let p = p1(1.5);
        let a = heat_kernel_hermite(&p, 0.4, &[0.7], &[2.3]).unwrap();
        let b = heat_kernel_hermite(&p, 0.4, &[2.3], &[0.7]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tensor_structure_dim2() {
        let p2 = FracParams::new(vec![0.5, 1.5], 0.5, 1.0, 0).unwrap();
        let t = 0.35;
        let joint = heat_kernel_hermite(&p2, t, &[1.0, 0.6], &[2.0, 1.1]).unwrap();
        let k1 = heat_kernel_hermite(&p1(0.5), t, &[1.0], &[2.0]).unwrap();
        let k2 = heat_kernel_hermite(&p1(1.5), t, &[0.6], &[1.1]).unwrap();
        assert!((joint - k1 * k2).abs() <= 1e-12 * joint.abs());
    }

    #[test]
    fn meda_form_matches_closed_form() {
        let p = p1(0.5);
        let xi = 0.3;
        let t = 0.5 * (13f64 / 7.0).ln();
        let meda = heat_kernel_hermite_meda(&p, xi, &[1.0], &[1.0]).unwrap();
        let closed = heat_kernel_hermite(&p, t, &[1.0], &[1.0]).unwrap();
        assert!((meda - closed).abs() <= 1e-11 * closed.abs());
    }

    #[test]
    fn meda_form_atomic_branch() {
        let p = p1(-0.5);
        let xi = 0.4f64;
        let t = xi.atanh();
        let meda = heat_kernel_hermite_meda(&p, xi, &[0.8], &[1.3]).unwrap();
        let closed = heat_kernel_hermite(&p, t, &[0.8], &[1.3]).unwrap();
        assert!((meda - closed).abs() <= 1e-11 * closed.abs());
    }

    #[test]
    fn meda_form_decays_towards_xi_one() {
        let p = p1(0.5);
        let mut prev = f64::INFINITY;
        for &xi in &[0.9, 0.99, 0.999, 0.9999] {
            let v = heat_kernel_hermite_meda(&p, xi, &[1.0], &[2.0]).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn convolution_relation_and_series() {
        let p = p1(0.5);
        let h = heat_kernel_hermite(&p, 0.3, &[1.0], &[2.0]).unwrap();
        let c = heat_kernel_convolution(&p, 0.3, &[1.0], &[2.0]).unwrap();
        assert!((c - h * 0.5).abs() <= 1e-12 * c.abs());
        let series = heat_kernel_series(System::Convolution, &p, 0.3, &[1.0], &[2.0], 60).unwrap();
        assert!((c - series.value).abs() <= 1e-10 * c.abs());
    }

    #[test]
    fn series_single_term_and_convergence() {
        let p = p1(0.7);
        let t = 0.5;
        let single = heat_kernel_series(System::Hermite, &p, t, &[1.1], &[0.9], 0).unwrap();
        let phi_x = crate::specfun::phi_seq(0.7, 0, 1.1).unwrap()[0];
        let phi_y = crate::specfun::phi_seq(0.7, 0, 0.9).unwrap()[0];
        let expect = (-t * (2.0 * 0.7 + 2.0)).exp() * phi_x * phi_y;
        assert_abs_diff_eq!(single.value, expect, epsilon = 1e-14 * expect.abs());
        let s60 = heat_kernel_series(System::Hermite, &p, 0.2, &[1.0], &[2.0], 60).unwrap();
        let s120 = heat_kernel_series(System::Hermite, &p, 0.2, &[1.0], &[2.0], 120).unwrap();
        assert!((s60.value - s120.value).abs() <= 1e-12);
    }

    #[test]
    fn quad_form_identities() {
        let q = quad_forms(&[1.0, 2.0], &[0.5, 1.5], &[0.3, 0.9]);
        assert!(q.qplus >= q.qminus && q.qminus >= 0.0);
        assert_abs_diff_eq!(q.qplus + q.qminus, 2.0 * (1.0 + 4.0 + 0.25 + 2.25), epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn prop_meda_round_trip(xi in 1e-6f64..0.999999) {
            let m = meda_forward(xi).unwrap();
            let back = meda_inverse(m.t).unwrap();
            prop_assert!((back.xi - xi).abs() <= 1e-14 * xi.abs().max(1.0));
        }

        #[test]
        fn prop_kernels_positive_symmetric(alpha in -0.5f64..5.0, t in 0.05f64..2.0,
                                           x in 0.1f64..4.0, y in 0.1f64..4.0) {
            let p = FracParams::dim1(alpha, 0.5, 1.0, 0).unwrap();
            let g = heat_kernel_hermite(&p, t, &[x], &[y]).unwrap();
            let h = heat_kernel_hermite(&p, t, &[y], &[x]).unwrap();
            prop_assert!(g > 0.0);
            prop_assert!((g - h).abs() <= 1e-13 * g);
        }
    }
}
