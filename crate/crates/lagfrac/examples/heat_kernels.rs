//! Heat kernels in both Laguerre systems: closed form vs. the eigen-series,
//! the xi in (0, 1) parametrization, and the semigroup identity.

use lagfrac::kernels::{
    heat_kernel_convolution, heat_kernel_hermite, heat_kernel_hermite_meda, heat_kernel_series,
    meda_inverse, System,
};
use lagfrac::quad::semi_infinite;
use lagfrac::specfun::FracParams;
use lagfrac::Result;

fn main() -> Result<()> {
    let params = FracParams::dim1(0.5, 0.5, 1.0, 0)?;
    let (t, x, y) = (0.35, 1.2, 0.8);

    // Closed form against the eigenfunction series (truncation 80).
    let closed = heat_kernel_hermite(&params, t, &[x], &[y])?;
    let series = heat_kernel_series(System::Hermite, &params, t, &[x], &[y], 80)?;
    println!("Hermite-type kernel, alpha = 0.5, t = {t}, (x, y) = ({x}, {y})");
    println!("  closed form : {closed:.15e}");
    println!("  eigen-series: {:.15e}  (tail bound {:.2e})", series.value, series.tail_bound);

    // Same kernel through the xi = tanh(t) parametrization.
    let xi = t.tanh();
    let meda = heat_kernel_hermite_meda(&params, xi, &[x], &[y])?;
    println!("  xi-form (xi = tanh t = {xi:.6}): {meda:.15e}");
    let back = meda_inverse(t)?;
    println!("  parameter map round trip: t = {t} -> xi = {:.6}", back.xi);

    // Convolution-type kernel and its relation to the Hermite-type one.
    let conv = heat_kernel_convolution(&params, t, &[x], &[y])?;
    let factor = (x * y).powf(params.alpha()[0] + 0.5);
    println!("Convolution-type kernel: {conv:.15e}");
    println!("  times (xy)^(alpha + 1/2):  {:.15e}  (should match closed form)", conv * factor);

    // Semigroup: integrating G_t(x, .) G_s(., y) over d mu_alpha gives G_{t+s}.
    let (ta, tb) = (0.3, 0.4);
    let alpha = params.alpha()[0];
    let product = semi_infinite(0.0, 1.0, 1e-11, &|z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let a = heat_kernel_convolution(&params, ta, &[x], &[z]).unwrap_or(0.0);
        let b = heat_kernel_convolution(&params, tb, &[z], &[y]).unwrap_or(0.0);
        a * b * z.powf(2.0 * alpha + 1.0)
    })?;
    let direct = heat_kernel_convolution(&params, ta + tb, &[x], &[y])?;
    println!("Semigroup check: composed = {product:.12e}, direct = {direct:.12e}");
    println!("  relative difference = {:.3e}", ((product - direct) / direct).abs());
    Ok(())
}
