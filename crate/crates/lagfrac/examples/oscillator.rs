//! Negative powers of the harmonic oscillator -Delta + |x|^2 via the polar
//! decomposition into radial Laguerre profiles, cross-checked in n = 2
//! against an independent cartesian Hermite expansion.

use lagfrac::oscillator::{
    frac_oscillator_cartesian, frac_oscillator_spherical, mixed_norm, theorem31_sweep,
    RadialProfile, RadialProfileSet, SphericalIndex,
};
use lagfrac::Result;

fn main() -> Result<()> {
    let sigma = 0.5;

    // The ground state e^{-r^2/2} is an eigenfunction: H^{-sigma} scales it
    // by (n + 2m)^{-sigma} = n^{-sigma} in dimension n with m = 0.
    let ground = RadialProfileSet::single(RadialProfile::new(0, 1, |r: f64| (-0.5 * r * r).exp()));
    let x = [0.6, -0.4];
    let out = frac_oscillator_spherical(&ground, sigma, 2, &x)?;
    let expected = 2.0f64.powf(-sigma) * (-0.5f64 * (x[0] * x[0] + x[1] * x[1])).exp();
    println!("ground state in n = 2: H^(-1/2) value {out:.12e}, exact {expected:.12e}");

    // Cross-basis check on x1 e^{-r^2/2} (degree-1 spherical harmonic times a
    // radial profile vs. the cartesian Hermite tensor expansion).
    let deg1 = RadialProfileSet::single(RadialProfile::new(1, 1, |r: f64| {
        std::f64::consts::PI.sqrt() * r * (-0.5 * r * r).exp()
    }));
    let cart = |p: &[f64]| p[0] * (-0.5 * (p[0] * p[0] + p[1] * p[1])).exp();
    let a = frac_oscillator_spherical(&deg1, sigma, 2, &x)?;
    let b = frac_oscillator_cartesian(&cart, sigma, &x, 8)?;
    println!("cross-basis on x1 e^(-r^2/2): spherical {a:.12e}, cartesian {b:.12e}");

    // Mixed L^{p,2} norms through the radial-profile identity.
    let idx = SphericalIndex { m: 2, j: 1, ell: 1 };
    let eig = RadialProfileSet::eigenfunction(2, idx)?;
    println!("mixed L^(2,2) norm of an eigenfunction (should be 1): {:.12e}", mixed_norm(&eig, 2.0, 2)?);

    // A small inequality sweep for the mixed-norm mapping property.
    let rows = theorem31_sweep(&[ground, deg1], sigma, 2.0, 2.0, 2)?;
    for row in rows {
        println!("family {}: output norm {:.6e} <= C * input norm {:.6e} (ratio {:.6})",
            row.family_id, row.lhs, row.rhs, row.lhs / row.rhs);
    }
    Ok(())
}
