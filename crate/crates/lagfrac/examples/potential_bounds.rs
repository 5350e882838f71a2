//! Bound certificates for the potential (negative-power) kernels: the
//! Gaussian envelope on the heat kernel, domination by the comparison kernel
//! K_sigma, and the moment bound on the reduced kernel.

use lagfrac::grid::{Axis, GridSpec};
use lagfrac::potential::{
    cal_k, certify_heat_bound, certify_overline_moment, certify_prop_estimacion, k_sigma,
    overline_k, UniformityConfig, DEFAULT_C_EXP, MOMENT_CEILING,
};
use lagfrac::Result;

fn main() -> Result<()> {
    // Comparison kernels at a glance.
    println!("K_sigma(0.4) for sigma = 0.3, n = 1: {:.6e}", k_sigma(0.3, 1, 0.4, DEFAULT_C_EXP)?);
    println!("cal-K(1.2, 0.7) for alpha = 0.5, sigma = 0.3: {:.6e}", cal_k(0.5, 0.3, 1.2, 0.7, DEFAULT_C_EXP)?);
    println!("reduced kernel (3.0, 3.4), alpha = 0.5, sigma = 0.3: {:.6e}", overline_k(0.5, 0.3, 3.0, 3.4)?);
    println!();

    let grid = GridSpec::square(Axis::uniform(0.3, 3.0, 8));
    let cfg = UniformityConfig::default();

    // Heat kernel under its Gaussian envelope, uniformly over alpha.
    let heat = certify_heat_bound(
        &[-0.5, 0.0, 1.0, 5.0, 20.0],
        &grid,
        &[0.05, 0.15, 0.3, 0.5, 0.7, 0.9],
        &cfg,
    )?;
    println!("heat-envelope certificate: sup ratio {:.6e} at ({:.3}, {:.3}) -> {}",
        heat.sup_ratio, heat.argmax_x, heat.argmax_y,
        if heat.passed { "pass" } else { "FAIL" });

    // Potential kernel dominated by K_sigma, uniformly over alpha.
    let pot = certify_prop_estimacion(&[-0.5, 0.0, 1.0, 5.0], 0.3, &grid, DEFAULT_C_EXP, &cfg)?;
    println!("potential-domination certificate: sup ratio {:.6e} -> {}",
        pot.sup_ratio, if pot.passed { "pass" } else { "FAIL" });

    // Moment bound: x^{2 sigma} times the mu_alpha-mass of the reduced kernel
    // stays below a fixed ceiling for x > 2.
    let xs: Vec<f64> = (0..10).map(|i| 2.2 + 3.5 * i as f64).collect();
    let moment = certify_overline_moment(0.5, 0.3, &xs, MOMENT_CEILING)?;
    println!("moment certificate: sup value {:.6e} (ceiling {MOMENT_CEILING}) -> {}",
        moment.sup_ratio, if moment.passed { "pass" } else { "FAIL" });
    Ok(())
}
