//! Vector-valued (l^r-aggregated) mixed norms: the weighted family of
//! fractional integrals applied to a deterministic random family of test
//! functions, with the l^2-aggregated output norm against the input norm.

use lagfrac::grid::Axis;
use lagfrac::kernels::System;
use lagfrac::operators::{vector_valued_norms, Measure, NormSpec};
use lagfrac::runner::random_family;
use lagfrac::specfun::FracParams;
use lagfrac::Result;

fn main() -> Result<()> {
    let alpha = 0.5;
    let params = FracParams::dim1(alpha, 0.4, 1.0, 0)?;
    let spec = NormSpec {
        p: 2.0,
        q: 2.0,
        r: 2.0,
        weight_t: 0.0,
        weight_s: 0.0,
        measure: Measure::MuAlpha(alpha),
    };
    let family = random_family(42, 4);
    println!("family (seed 42): {family:?}");

    let axis = Axis::geometric(1e-3, 40.0, 400);
    let (lhs, rhs) = vector_valued_norms(
        System::Convolution,
        &params,
        &family,
        &spec,
        &axis,
        48,
    )?;
    println!("||(sum_j |L_j^(-sigma) f_j|^2)^(1/2)||_q = {lhs:.10e}");
    println!("||(sum_j |f_j|^2)^(1/2)||_p             = {rhs:.10e}");
    println!("ratio = {:.6}", lhs / rhs);
    Ok(())
}
