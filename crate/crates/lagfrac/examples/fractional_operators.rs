//! Applying the fractional integral L^{-sigma}: spectral multiplier route
//! vs. direct kernel integration, plus the shifted weighted family.

use lagfrac::kernels::System;
use lagfrac::operators::{
    apply_frac_kernel, apply_frac_spectral, apply_weighted_family, expand, TestFunction,
};
use lagfrac::specfun::FracParams;
use lagfrac::Result;

fn main() -> Result<()> {
    let params = FracParams::dim1(0.5, 0.5, 1.0, 0)?;
    let system = System::Convolution;
    let alpha = params.alpha()[0];

    // On the k-th eigenfunction the operator is multiplication by
    // (4k + 2 alpha + 2)^(-sigma); both routes must agree with that.
    let k = 1usize;
    let tf = TestFunction::Eigenfunction { k };
    let x = 1.3;
    let lambda = 4.0 * k as f64 + 2.0 * alpha + 2.0;
    let exact = tf.eval(system, alpha, x)? * lambda.powf(-params.sigma());

    let expansion = expand(system, &params, &|y| tf.eval(system, alpha, y).unwrap(), 32)?;
    let spectral = apply_frac_spectral(&expansion, params.sigma())?.synthesize(x)?;
    let kernel = apply_frac_kernel(system, &params, &|y| tf.eval(system, alpha, y).unwrap(), x)?;

    println!("L^(-1/2) on eigenfunction k = {k} at x = {x}:");
    println!("  exact multiplier value: {exact:.15e}");
    println!("  spectral route        : {spectral:.15e}");
    println!("  kernel route          : {kernel:.15e}");

    // Weighted family member j = 2: x^(aj) L_{alpha+aj}^(-sigma) x^(-aj).
    let shifted = params.with_j(2);
    let tf2 = TestFunction::Gaussian { center: 1.0, width: 0.6 };
    let fam = apply_weighted_family(&shifted, &|y| tf2.eval(system, alpha, y).unwrap(), x)?;
    println!("weighted family member j = 2 on a Gaussian bump at x = {x}: {fam:.12e}");
    Ok(())
}
