//! Harmonic oscillator -Delta + |x|^2 in spherical coordinates (n = 2, 3):
//! eigenfunctions indexed by (m, j, ell), level projections, the negative
//! power via degree-wise reduction to one-dimensional convolution-type
//! Laguerre operators, mixed L^{p,2} norms, and an independent cartesian
//! Hermite oracle for n = 2.

use std::sync::Arc;

use crate::error::{domain, precondition, Result};
use crate::operators::apply_weighted_family_spectral;
use crate::quad::{adaptive, legendre_rule};
use crate::specfun::{dim_spherical_harmonics, ell_seq, hermite_seq, FracParams};

/// Radial truncation for all quadrature in this module; the Gaussian factor
/// makes the discarded tail negligible for the desk-scale test family.
pub const RADIAL_CUTOFF: f64 = 12.0;

/// Truncation degree handed to the one-dimensional spectral reduction.
pub const RADIAL_TRUNCATION: usize = 48;

/// Eigenfunction label: energy level m, Laguerre index j, harmonic index ell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalIndex {
    pub m: usize,
    pub j: usize,
    pub ell: usize,
}

impl SphericalIndex {
    pub fn validate(&self, n: usize) -> Result<()> {
        check_dimension(n)?;
        if self.j > self.m / 2 {
            return domain(format!("need j <= m/2, got m={} j={}", self.m, self.j));
        }
        let dim = dim_spherical_harmonics(n, (self.m - 2 * self.j) as u32)?;
        if self.ell < 1 || self.ell as u64 > dim {
            return domain(format!("ell must lie in [1, {dim}], got {}", self.ell));
        }
        Ok(())
    }

    /// Degree of the attached spherical harmonic.
    pub fn degree(&self) -> usize {
        self.m - 2 * self.j
    }

    /// Oscillator eigenvalue n + 2m.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        (n + 2 * self.m) as f64
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        domain(format!("spherical machinery supports n in {{2, 3}}, got {n}"))
    }
}

fn factorial_ratio_ln(num: usize, den: usize) -> f64 {
    // ln(num! / den!)
    crate::specfun::log_gamma(num as f64 + 1.0).unwrap()
        - crate::specfun::log_gamma(den as f64 + 1.0).unwrap()
}

/// Associated Legendre P_l^m(x) without Condon-Shortley phase, m >= 0.
fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    debug_assert!(m <= l);
    // P_m^m = (2m-1)!! (1-x^2)^{m/2}
    let mut pmm = 1.0;
    let somx2 = (1.0 - x * x).max(0.0).sqrt();
    for i in 1..=m {
        pmm *= (2 * i - 1) as f64 * somx2;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return p;
    }
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * pm1) / (ll - m) as f64;
        pm1 = p;
        p = next;
    }
    p
}

/// Real spherical harmonic of degree j, index ell in [1, dim], evaluated at a
/// unit vector. Orthonormal in L^2 of the sphere with the surface measure.
pub fn real_spherical_harmonic(n: usize, j: usize, ell: usize, dir: &[f64]) -> Result<f64> {
    check_dimension(n)?;
    if dir.len() != n {
        return domain("direction vector has wrong dimension");
    }
    let dim = dim_spherical_harmonics(n, j as u32)? as usize;
    if ell < 1 || ell > dim {
        return domain(format!("ell must lie in [1, {dim}], got {ell}"));
    }
    match n {
        2 => {
            let theta = dir[1].atan2(dir[0]);
            Ok(if j == 0 {
                1.0 / (2.0 * std::f64::consts::PI).sqrt()
            } else if ell == 1 {
                (j as f64 * theta).cos() / std::f64::consts::PI.sqrt()
            } else {
                (j as f64 * theta).sin() / std::f64::consts::PI.sqrt()
            })
        }
        3 => {
            // ell = 1..2j+1 maps to mm = ell - 1 - j in [-j, j].
            let mm = ell as i64 - 1 - j as i64;
            let ma = mm.unsigned_abs() as usize;
            let ct = dir[2].clamp(-1.0, 1.0);
            let phi = dir[1].atan2(dir[0]);
            let ln_norm = 0.5
                * (((2 * j + 1) as f64 / (4.0 * std::f64::consts::PI)).ln()
                    + factorial_ratio_ln(j - ma, j + ma));
            let base = ln_norm.exp() * assoc_legendre(j, ma, ct);
            Ok(match mm.signum() {
                0 => base,
                1 => std::f64::consts::SQRT_2 * base * (ma as f64 * phi).cos(),
                _ => std::f64::consts::SQRT_2 * base * (ma as f64 * phi).sin(),
            })
        }
        _ => unreachable!(),
    }
}

/// Radial factor of the (m, j) eigenfunction: r^{m-2j} ell_j^{n/2-1+m-2j}(r).
pub fn radial_eigenfunction(n: usize, m: usize, j: usize, r: f64) -> Result<f64> {
    let deg = m - 2 * j;
    let beta = n as f64 / 2.0 - 1.0 + deg as f64;
    let ell_val = ell_seq(beta, j, r.max(1e-300))?[j];
    Ok(r.powi(deg as i32) * ell_val)
}

/// Full oscillator eigenfunction at a point.
pub fn spherical_eigenfunction(idx: SphericalIndex, n: usize, x: &[f64]) -> Result<f64> {
    idx.validate(n)?;
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Ok(if idx.degree() == 0 {
            radial_eigenfunction(n, idx.m, idx.j, 0.0)?
                * real_spherical_harmonic(n, 0, 1, &unit_x(n))?
        } else {
            0.0
        });
    }
    let dir: Vec<f64> = x.iter().map(|v| v / r).collect();
    Ok(radial_eigenfunction(n, idx.m, idx.j, r)?
        * real_spherical_harmonic(n, idx.degree(), idx.ell, &dir)?)
}

fn unit_x(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[0] = 1.0;
    e
}

/// One radial profile: the function multiplying Y_{degree, ell}.
#[derive(Clone)]
pub struct RadialProfile {
    pub degree: usize,
    pub ell: usize,
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialProfile {
    pub fn new(
        degree: usize,
        ell: usize,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RadialProfile {
            degree,
            ell,
            f: Arc::new(f),
        }
    }
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("RadialProfile")
            .field("degree", &self.degree)
            .field("ell", &self.ell)
            .finish()
    }
}

/// Finite collection of radial profiles: f(x) = sum f_{j,l}(r) Y_{j,l}(x/r).
#[derive(Debug, Clone, Default)]
pub struct RadialProfileSet {
    pub profiles: Vec<RadialProfile>,
}

impl RadialProfileSet {
    pub fn single(profile: RadialProfile) -> Self {
        RadialProfileSet {
            profiles: vec![profile],
        }
    }

    /// The eigenfunction tilde-phi_{m,j,ell} as a profile set.
    pub fn eigenfunction(n: usize, idx: SphericalIndex) -> Result<Self> {
        idx.validate(n)?;
        let (m, j) = (idx.m, idx.j);
        Ok(Self::single(RadialProfile::new(
            idx.degree(),
            idx.ell,
            move |r| radial_eigenfunction(n, m, j, r).unwrap_or(0.0),
        )))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        check_dimension(n)?;
        for p in &self.profiles {
            let dim = dim_spherical_harmonics(n, p.degree as u32)?;
            if p.ell < 1 || p.ell as u64 > dim {
                return domain(format!(
                    "profile (degree {}, ell {}) outside the harmonic range",
                    p.degree, p.ell
                ));
            }
        }
        Ok(())
    }

    /// Pointwise synthesis.
    pub fn eval(&self, n: usize, x: &[f64]) -> Result<f64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            let y0 = real_spherical_harmonic(n, 0, 1, &unit_x(n))?;
            return Ok(self
                .profiles
                .iter()
                .filter(|p| p.degree == 0)
                .map(|p| (p.f)(0.0) * y0)
                .sum());
        }
        let dir: Vec<f64> = x.iter().map(|v| v / r).collect();
        let mut total = 0.0;
        for p in &self.profiles {
            total += (p.f)(r) * real_spherical_harmonic(n, p.degree, p.ell, &dir)?;
        }
        Ok(total)
    }
}

/// Coefficients of the level-m projection, one per (j, ell) pair present.
pub fn project_jm(f: &RadialProfileSet, m: usize, n: usize) -> Result<Vec<(SphericalIndex, f64)>> {
    f.validate(n)?;
    let mut out = Vec::new();
    for j in 0..=(m / 2) {
        let deg = m - 2 * j;
        for p in f.profiles.iter().filter(|p| p.degree == deg) {
            let pf = p.f.clone();
            let c = adaptive(0.0, RADIAL_CUTOFF, 1e-10, &move |r: f64| {
                if r <= 0.0 {
                    return 0.0;
                }
                pf(r) * radial_eigenfunction(n, m, j, r).unwrap_or(0.0)
                    * r.powi(n as i32 - 1)
            })?;
            out.push((
                SphericalIndex { m, j, ell: p.ell },
                c,
            ));
        }
    }
    Ok(out)
}

/// Which energy-parity block of the operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityBlock {
    /// Even levels m (contributions of even-degree profiles).
    Even,
    /// Odd levels m.
    Odd,
    All,
}

/// The negative power (-Delta + |x|^2)^{-sigma} applied degree by degree
/// through the one-dimensional reduction, returned as a new profile set
/// (the operator preserves each angular degree).
pub fn frac_oscillator_profiles(
    f: &RadialProfileSet,
    sigma: f64,
    n: usize,
    block: ParityBlock,
) -> Result<RadialProfileSet> {
    f.validate(n)?;
    if !(sigma > 0.0) {
        return domain("need sigma > 0");
    }
    let alpha = n as f64 / 2.0 - 1.0;
    let mut out = RadialProfileSet::default();
    for p in &f.profiles {
        let keep = match block {
            ParityBlock::All => true,
            ParityBlock::Even => p.degree % 2 == 0,
            ParityBlock::Odd => p.degree % 2 == 1,
        };
        if !keep {
            continue;
        }
        let params = FracParams::dim1(alpha, sigma, 1.0, p.degree as u32)?;
        let pf = p.f.clone();
        let applied = apply_weighted_family_spectral(
            &params,
            &move |r: f64| pf(r),
            RADIAL_TRUNCATION,
        )?;
        out.profiles.push(RadialProfile::new(
            p.degree,
            p.ell,
            move |r| applied(r).unwrap_or(0.0),
        ));
    }
    Ok(out)
}

/// Pointwise value of the fractional oscillator operator.
pub fn frac_oscillator_spherical(
    f: &RadialProfileSet,
    sigma: f64,
    n: usize,
    x: &[f64],
) -> Result<f64> {
    frac_oscillator_profiles(f, sigma, n, ParityBlock::All)?.eval(n, x)
}

/// Independent cartesian Hermite oracle for n = 2: expand on h_{k1} h_{k2},
/// damp by (2|k| + 2)^{-sigma}, resynthesize at x.
pub fn frac_oscillator_cartesian(
    f: &dyn Fn(&[f64]) -> f64,
    sigma: f64,
    x: &[f64],
    m_trunc: usize,
) -> Result<f64> {
    if x.len() != 2 {
        return precondition("cartesian oracle is for n = 2");
    }
    let coeffs = hermite_expand_2d(f, m_trunc)?;
    let hx = hermite_seq(m_trunc, x[0]);
    let hy = hermite_seq(m_trunc, x[1]);
    let mut total = 0.0;
    for k1 in 0..=m_trunc {
        for k2 in 0..=(m_trunc - k1) {
            let lambda = (2 * (k1 + k2) + 2) as f64;
            total += coeffs[k1][k2] * lambda.powf(-sigma) * hx[k1] * hy[k2];
        }
    }
    Ok(total)
}

/// Tensor-product Hermite coefficients of f over |k| <= m_trunc, by composite
/// Gauss-Legendre on [-R, R]^2 with panel doubling.
pub fn hermite_expand_2d(f: &dyn Fn(&[f64]) -> f64, m_trunc: usize) -> Result<Vec<Vec<f64>>> {
    let upper = (2.0 * (2 * m_trunc) as f64 + 2.0).sqrt() + 7.0;
    let rule = legendre_rule(15);
    let compute = |panels: usize| -> Vec<Vec<f64>> {
        let h = 2.0 * upper / panels as f64;
        // Per-axis nodes, weights and Hermite tables.
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in 0..panels {
            let lo = -upper + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + 0.5 * h * t);
                weights.push(0.5 * h * w);
            }
        }
        let tables: Vec<Vec<f64>> = nodes.iter().map(|&v| hermite_seq(m_trunc, v)).collect();
        let mut coeffs = vec![vec![0.0; m_trunc + 1]; m_trunc + 1];
        for (i, &xi) in nodes.iter().enumerate() {
            for (jn, &yj) in nodes.iter().enumerate() {
                let fv = f(&[xi, yj]) * weights[i] * weights[jn];
                if fv == 0.0 {
                    continue;
                }
                for k1 in 0..=m_trunc {
                    let base = fv * tables[i][k1];
                    for k2 in 0..=(m_trunc - k1) {
                        coeffs[k1][k2] += base * tables[jn][k2];
                    }
                }
            }
        }
        coeffs
    };
    let mut panels = 24;
    let mut prev = compute(panels);
    loop {
        panels += 12;
        let next = compute(panels);
        let worst = prev
            .iter()
            .flatten()
            .zip(next.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if worst <= 1e-9 {
            return Ok(next);
        }
        if panels > 72 {
            return crate::error::quadrature(format!(
                "2-D Hermite coefficients did not settle (delta {worst:.3e})"
            ));
        }
        prev = next;
    }
}

/// Mixed L^{p,2} norm through the radial-profile identity: the l^2 aggregate
/// of the profiles in L^p of mu_{n/2-1} (up to the r^{n-1} dr rewrite).
pub fn mixed_norm(f: &RadialProfileSet, p: f64, n: usize) -> Result<f64> {
    f.validate(n)?;
    if !(p >= 1.0) {
        return domain("need p in [1, inf]");
    }
    let aggregate = |r: f64| -> f64 {
        f.profiles
            .iter()
            .map(|pr| {
                let v = (pr.f)(r);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    };
    if p.is_infinite() {
        let mut sup = 0.0f64;
        for i in 0..=4800 {
            let r = RADIAL_CUTOFF * i as f64 / 4800.0;
            sup = sup.max(aggregate(r));
        }
        return Ok(sup);
    }
    let v = adaptive(0.0, RADIAL_CUTOFF, 1e-10, &|r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        aggregate(r).powf(p) * r.powi(n as i32 - 1)
    })?;
    Ok(v.powf(1.0 / p))
}

/// Mixed norm from the definition: angular L^2 integral by quadrature on the
/// sphere, then the radial L^p norm. Cross-check path for synthesized f.
pub fn mixed_norm_angular(f: &RadialProfileSet, p: f64, n: usize) -> Result<f64> {
    f.validate(n)?;
    if !p.is_finite() {
        return domain("angular cross-check supports finite p");
    }
    let angular_sq = |r: f64| -> Result<f64> {
        match n {
            2 => {
                let steps = 256;
                let mut total = 0.0;
                for i in 0..steps {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
                    let v = f.eval(2, &[r * th.cos(), r * th.sin()])?;
                    total += v * v;
                }
                Ok(total * 2.0 * std::f64::consts::PI / steps as f64)
            }
            3 => {
                let rule = legendre_rule(24);
                let steps = 48;
                let mut total = 0.0;
                for (&ct, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let st = (1.0 - ct * ct).max(0.0).sqrt();
                    for i in 0..steps {
                        let ph = 2.0 * std::f64::consts::PI * i as f64 / steps as f64;
                        let v = f.eval(
                            3,
                            &[r * st * ph.cos(), r * st * ph.sin(), r * ct],
                        )?;
                        total += w * v * v;
                    }
                }
                Ok(total * 2.0 * std::f64::consts::PI / steps as f64)
            }
            _ => unreachable!(),
        }
    };
    let v = adaptive(0.0, RADIAL_CUTOFF, 1e-9, &|r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        angular_sq(r).unwrap_or(0.0).powf(0.5 * p) * r.powi(n as i32 - 1)
    })?;
    Ok(v.powf(1.0 / p))
}

/// One row of a Theorem-3.1-style sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub family_id: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Mixed-norm inequality sweep: per family, the L^{q,2} norm of the operator
/// output against the L^{p,2} norm of the input.
/// Admissibility of (p, q) for the oscillator inequality: the pentagon
/// 1/p - 2 sigma / n <= 1/q < 1/p + 2 sigma / n with the two excluded
/// boundary points (p = 1, q = n/(n - 2 sigma)) and (p = n/(2 sigma),
/// q = infinity). For 2 sigma >= n the lower constraint is vacuous and the
/// first exclusion does not arise.
pub fn admissible_oscillator(p: f64, q: f64, sigma: f64, n: usize) -> Result<bool> {
    check_dimension(n)?;
    if !(sigma > 0.0) {
        return precondition(format!("need sigma > 0, got {sigma}"));
    }
    if !(p >= 1.0 && q >= 1.0) {
        return domain("exponents must lie in [1, inf]");
    }
    let nf = n as f64;
    let ratio = 2.0 * sigma / nf;
    let (ip, iq) = (1.0 / p, 1.0 / q);
    let inside = ip - ratio <= iq && iq < ip + ratio;
    let excl1 = 2.0 * sigma < nf
        && p == 1.0
        && (q - nf / (nf - 2.0 * sigma)).abs() <= 1e-12 * q;
    let excl2 = (p - nf / (2.0 * sigma)).abs() <= 1e-12 * p && q.is_infinite();
    Ok(inside && !excl1 && !excl2)
}

pub fn theorem31_sweep(
    families: &[RadialProfileSet],
    sigma: f64,
    p: f64,
    q: f64,
    n: usize,
) -> Result<Vec<SweepRow>> {
    check_dimension(n)?;
    if !admissible_oscillator(p, q, sigma, n)? {
        return precondition(format!(
            "need 1/p - 2 sigma / n <= 1/q < 1/p + 2 sigma / n (with endpoint exclusions); \
             got p={p}, q={q}, sigma={sigma}, n={n}"
        ));
    }
    let mut rows = Vec::with_capacity(families.len());
    for (id, f) in families.iter().enumerate() {
        let out = frac_oscillator_profiles(f, sigma, n, ParityBlock::All)?;
        rows.push(SweepRow {
            family_id: id,
            lhs: mixed_norm(&out, q, n)?,
            rhs: mixed_norm(f, p, n)?,
        });
    }
    Ok(rows)
}
