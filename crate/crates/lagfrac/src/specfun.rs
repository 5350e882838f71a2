//! Special functions: Laguerre polynomials and both Laguerre function
//! systems, Hermite functions, modified Bessel I, log-Gamma and spherical
//! harmonic dimension counting.
//!
//! Eigenfunction normalizations are assembled in log-domain so that orders up
//! to alpha + a*j ~ 1e4 stay finite in double precision.

use twofloat::TwoFloat;

use crate::error::{domain, Error, Result};
use crate::numeric::LogVal;

/// Degree/order pair for a Laguerre function, with order > -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreIndex {
    k: usize,
    alpha: f64,
}

impl LaguerreIndex {
    pub fn new(k: usize, alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return domain(format!("Laguerre order must exceed -1, got {alpha}"));
        }
        Ok(LaguerreIndex { k, alpha })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> f64 {
        self.alpha
    }
}

/// Parameter bundle (n, alpha, sigma, a, j) shared by the kernel and operator
/// families. The shifted order alpha + a*j is always derived on demand.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FracParams {
    n: usize,
    alpha: Vec<f64>,
    sigma: f64,
    a: f64,
    j: u32,
}

impl FracParams {
    pub fn new(alpha: Vec<f64>, sigma: f64, a: f64, j: u32) -> Result<Self> {
        if alpha.is_empty() {
            return domain("dimension must be at least 1");
        }
        if let Some(bad) = alpha.iter().find(|&&a| !(a >= -0.5)) {
            return domain(format!("every alpha entry must be >= -1/2, got {bad}"));
        }
        if !(sigma > 0.0) {
            return domain(format!("sigma must be positive, got {sigma}"));
        }
        if !(a >= 1.0) {
            return domain(format!("a must be >= 1, got {a}"));
        }
        Ok(FracParams {
            n: alpha.len(),
            alpha,
            sigma,
            a,
            j,
        })
    }

    /// One-dimensional bundle, the setting of the convolution-type analysis.
    pub fn dim1(alpha: f64, sigma: f64, a: f64, j: u32) -> Result<Self> {
        Self::new(vec![alpha], sigma, a, j)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Sum of the order entries (may be negative).
    pub fn alpha_total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// alpha_i + a*j for each coordinate.
    pub fn shifted_alpha(&self) -> Vec<f64> {
        let shift = self.a * self.j as f64;
        self.alpha.iter().map(|&a| a + shift).collect()
    }

    pub fn with_j(&self, j: u32) -> Self {
        let mut p = self.clone();
        p.j = j;
        p
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), sigma, self.a, self.j)
    }

    /// Convolution-type use needs sigma < alpha + a*j + 1 (n = 1).
    pub fn check_convolution_range(&self) -> Result<()> {
        if self.n != 1 {
            return Err(Error::Precondition(
                "convolution-type operators are one-dimensional".into(),
            ));
        }
        let bound = self.alpha[0] + self.a * self.j as f64 + 1.0;
        if self.sigma >= bound {
            return Err(Error::Precondition(format!(
                "sigma = {} must be below alpha + a*j + 1 = {}",
                self.sigma, bound
            )));
        }
        Ok(())
    }
}

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// Natural logarithm of the Gamma function for positive argument.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("log_gamma requires x > 0, got {x}"));
    }
    let mut series = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x - 1.0 + k as f64);
    }
    let tmp = x + LANCZOS_G - 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + series.ln() + (x - 0.5) * tmp.ln() - tmp)
}

/// Laguerre polynomial L_k^alpha(x) by the three-term recurrence.
pub fn laguerre_poly(idx: LaguerreIndex, x: f64) -> f64 {
    let v = laguerre_scaled(idx.k, idx.alpha, x);
    v.value()
}

/// L_k^alpha(x) in value-plus-log-scale form; the recurrence is renormalized
/// on the fly so large orders stay representable.
pub fn laguerre_scaled(k: usize, alpha: f64, x: f64) -> LogVal {
    if k == 0 {
        return LogVal::from_value(1.0);
    }
    let mut prev = 1.0f64; // L_0
    let mut cur = 1.0 + alpha - x; // L_1
    let mut ln_scale = 0.0f64;
    for m in 1..k {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - x) * cur - (mf + alpha) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e200 {
            let f = 1e-200;
            prev *= f;
            cur *= f;
            ln_scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    if cur == 0.0 {
        LogVal::ZERO
    } else {
        LogVal {
            ln_abs: cur.abs().ln() + ln_scale,
            sign: cur.signum(),
        }
    }
}

fn ln_laguerre_norm(k: usize, alpha: f64) -> Result<f64> {
    Ok(0.5 * (std::f64::consts::LN_2 + log_gamma(k as f64 + 1.0)? - log_gamma(k as f64 + alpha + 1.0)?))
}

/// Laguerre function of Hermite type phi_k^alpha(x), orthonormal in L2(R+, dx).
pub fn phi_hermite_type(idx: LaguerreIndex, x: f64) -> Result<f64> {
    let (k, alpha) = (idx.k, idx.alpha);
    let norm = ln_laguerre_norm(k, alpha)?;
    if x == 0.0 {
        // Continuity at the origin: x^{alpha+1/2} -> 0 unless alpha = -1/2.
        return if alpha == -0.5 {
            Ok(laguerre_scaled(k, alpha, 0.0).scaled(norm).value())
        } else {
            Ok(0.0)
        };
    }
    let lag = laguerre_scaled(k, alpha, x * x);
    Ok(lag.scaled(norm + (alpha + 0.5) * x.ln() - 0.5 * x * x).value())
}

/// Laguerre function of convolution type ell_k^alpha(x), orthonormal in
/// L2(R+, d mu_alpha). Satisfies ell = phi * x^{-alpha-1/2}.
pub fn ell_convolution_type(idx: LaguerreIndex, x: f64) -> Result<f64> {
    let (k, alpha) = (idx.k, idx.alpha);
    let norm = ln_laguerre_norm(k, alpha)?;
    let lag = laguerre_scaled(k, alpha, x * x);
    Ok(lag.scaled(norm - 0.5 * x * x).value())
}

/// Values phi_0..phi_max at x through the normalized three-term recurrence
/// (no Gamma overflow at any degree).
pub fn phi_seq(alpha: f64, max_k: usize, x: f64) -> Result<Vec<f64>> {
    let g0 = (0.5 * (std::f64::consts::LN_2 - log_gamma(alpha + 1.0)?)
        + (alpha + 0.5) * x.ln()
        - 0.5 * x * x)
        .exp();
    Ok(normalized_seq(alpha, max_k, x, g0))
}

/// Same as [`phi_seq`] for the convolution-type system.
pub fn ell_seq(alpha: f64, max_k: usize, x: f64) -> Result<Vec<f64>> {
    let g0 = (0.5 * (std::f64::consts::LN_2 - log_gamma(alpha + 1.0)?) - 0.5 * x * x).exp();
    Ok(normalized_seq(alpha, max_k, x, g0))
}

fn normalized_seq(alpha: f64, max_k: usize, x: f64, ground: f64) -> Vec<f64> {
    let y = x * x;
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(ground);
    if max_k == 0 {
        return out;
    }
    out.push(ground * (1.0 + alpha - y) / (1.0 + alpha).sqrt());
    for m in 1..max_k {
        let mf = m as f64;
        let d = ((mf + 1.0) * (mf + 1.0 + alpha)).sqrt();
        let next = ((2.0 * mf + 1.0 + alpha - y) * out[m] - (mf * (mf + alpha)).sqrt() * out[m - 1]) / d;
        out.push(next);
    }
    out
}

/// [`phi_seq`] carried in double-double precision. Heavily cancelling series
/// (the small-t heat kernel at well-separated points) amplify the per-degree
/// roundoff of the plain f64 recurrence by the cancellation ratio, which can
/// exceed 1e4; the extended-precision recurrence keeps the degree-dependent
/// factor accurate to ~1e-28 so only the common ground-state rounding is
/// left, and that one scales the whole sum uniformly.
pub(crate) fn phi_seq_dd(alpha: f64, max_k: usize, x: f64) -> Result<Vec<TwoFloat>> {
    let g0 = (0.5 * (std::f64::consts::LN_2 - log_gamma(alpha + 1.0)?)
        + (alpha + 0.5) * x.ln()
        - 0.5 * x * x)
        .exp();
    Ok(normalized_seq_dd(alpha, max_k, x, g0))
}

/// Same as [`phi_seq_dd`] for the convolution-type system.
pub(crate) fn ell_seq_dd(alpha: f64, max_k: usize, x: f64) -> Result<Vec<TwoFloat>> {
    let g0 = (0.5 * (std::f64::consts::LN_2 - log_gamma(alpha + 1.0)?) - 0.5 * x * x).exp();
    Ok(normalized_seq_dd(alpha, max_k, x, g0))
}

fn normalized_seq_dd(alpha: f64, max_k: usize, x: f64, ground: f64) -> Vec<TwoFloat> {
    let a = TwoFloat::from(alpha);
    let y = TwoFloat::from(x) * TwoFloat::from(x);
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(TwoFloat::from(ground));
    if max_k == 0 {
        return out;
    }
    out.push(out[0] * ((a + 1.0) - y) / (a + 1.0).sqrt());
    for m in 1..max_k {
        let mf = m as f64;
        let d = ((a + (mf + 1.0)) * (mf + 1.0)).sqrt();
        let c = ((a + mf) * mf).sqrt();
        let next = (((a + (2.0 * mf + 1.0)) - y) * out[m] - c * out[m - 1]) / d;
        out.push(next);
    }
    out
}

/// Normalized Hermite function h_k(x), orthonormal in L2(R).
pub fn hermite_function(k: usize, x: f64) -> f64 {
    hermite_seq(k, x)[k]
}

/// Values h_0..h_max at x.
pub fn hermite_seq(max_k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if max_k == 0 {
        return out;
    }
    out.push(x * 2f64.sqrt() * out[0]);
    for k in 1..max_k {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Modified Bessel function I_nu(z) for nu >= -1/2, z >= 0, in
/// value-plus-log-scale form.
///
/// For nu > -1/2 the Schlaefli representation is integrated by Gauss-Jacobi
/// quadrature against dPi_nu; node count doubles until agreement to 1e-12
/// relative. The nu = -1/2 branch uses the atomic measure closed form.
pub fn bessel_i(nu: f64, z: f64) -> Result<LogVal> {
    Ok(LogVal::from_ln(bessel_i_scaled_ln(nu, z)? + z))
}

/// ln of the exponentially scaled Bessel function, ln(e^{-z} I_nu(z)).
///
/// For large z, ln I_nu(z) = z + O(ln z); forming ln I and subtracting z
/// afterwards loses roughly eps * z absolute accuracy, which already swamps
/// 1e-12 tolerances at z ~ 1e4. The scaled log never forms the large term.
pub fn bessel_i_scaled_ln(nu: f64, z: f64) -> Result<f64> {
    if nu < -0.5 {
        return domain(format!("bessel_i requires nu >= -1/2, got {nu}"));
    }
    if z < 0.0 {
        return domain(format!("bessel_i requires z >= 0, got {z}"));
    }
    if z == 0.0 {
        return if nu == 0.0 {
            Ok(0.0)
        } else if nu > 0.0 {
            Ok(f64::NEG_INFINITY)
        } else {
            domain("I_{-1/2} diverges at z = 0")
        };
    }
    if nu == -0.5 {
        // e^{-z} sqrt(2/(pi z)) cosh z
        let ln_cosh_scaled = (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2;
        let ln = 0.5 * (std::f64::consts::LN_2 - std::f64::consts::PI.ln() - z.ln()) + ln_cosh_scaled;
        return Ok(ln);
    }
    // Large arguments dominated by the order: the Hankel asymptotic series
    // (expansion parameter ~ nu^2/z) converges comfortably once z >> nu^2.
    if z >= 650.0 && z >= 100.0 * nu * nu {
        let mu = 4.0 * nu * nu;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for k in 1..=40u32 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            term *= -(mu - odd * odd) / (8.0 * kf * z);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        return Ok(-0.5 * (2.0 * std::f64::consts::PI * z).ln() + sum.ln());
    }
    // Everything else: the ascending series. All terms are positive (no
    // cancellation), so it is accurate to a small multiple of rounding at any
    // order; partial sums approach e^z, so the accumulator is renormalized
    // whenever it grows large and the shed magnitude is tracked in ln_shift.
    // Term count grows like z + O(sqrt(z)), which only matters in the
    // large-order band z < 100 nu^2 that the asymptotic branch cannot take.
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut ln_shift = 0.0f64;
    let q = 0.25 * z * z;
    for k in 0..20_000_000u64 {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
        if sum > 1e250 {
            sum *= 1e-250;
            term *= 1e-250;
            ln_shift += 250.0 * std::f64::consts::LN_10;
        }
    }
    Ok(-z + nu * (0.5 * z).ln() - log_gamma(nu + 1.0)? + ln_shift + sum.ln())
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the space of spherical harmonics of degree j in n variables.
pub fn dim_spherical_harmonics(n: usize, j: u32) -> Result<u64> {
    if n < 2 {
        return domain(format!("spherical harmonics need n >= 2, got {n}"));
    }
    let n = n as u64;
    let j = j as u64;
    let first = binomial(n + j - 1, j);
    let second = if j >= 2 { binomial(n + j - 3, j - 2) } else { 0 };
    Ok((first - second) as u64)
}
