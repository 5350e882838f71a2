//! Admissible exponent regions for the fractional integral's mapping
//! properties: the pentagon condition in the convolution system and the
//! weighted conditions in the Hermite system.

use lagfrac::operators::{admissible_convolution, admissible_hermite, Measure, NormSpec};
use lagfrac::Result;

fn main() -> Result<()> {
    let (alpha, sigma) = (0.5, 0.5);
    println!("convolution system, alpha = {alpha}, sigma = {sigma}");
    println!("  (1/p, 1/q) admissibility over a coarse grid ('#' = admissible):");
    for iq in (1..=9).rev() {
        let inv_q = iq as f64 / 10.0;
        let mut line = format!("  1/q = {inv_q:.1} | ");
        for ip in 1..=9 {
            let inv_p = ip as f64 / 10.0;
            let ok = admissible_convolution(1.0 / inv_p, 1.0 / inv_q, sigma, alpha)?;
            line.push(if ok { '#' } else { '.' });
        }
        println!("{line}");
    }
    println!("              +---------");
    println!("                1/p = 0.1 .. 0.9");

    // Endpoint exclusions on the pentagon boundary.
    let q_end = (alpha + 1.0) / (alpha + 1.0 - sigma);
    println!("endpoint (p = 1, q = {q_end:.3}): {}", admissible_convolution(1.0, q_end, sigma, alpha)?);
    let p_end = (alpha + 1.0) / sigma;
    println!("endpoint (p = {p_end:.3}, q = inf): {}", admissible_convolution(p_end, f64::INFINITY, sigma, alpha)?);

    // Hermite system with power weights.
    let spec = NormSpec {
        p: 2.0,
        q: 4.0,
        r: 2.0,
        weight_t: 0.1,
        weight_s: 0.1,
        measure: Measure::LebesguePositive,
    };
    println!("hermite system, weighted (p, q, t, s) = (2, 4, 0.1, 0.1), sigma = 1, n = 1: {}",
        admissible_hermite(&spec, 1.0, 1)?);
    Ok(())
}
