//! The scalar-inequality lab: each helper inequality behind the kernel bounds
//! is certified numerically and reported with its worst ratio.

use lagfrac::ineqlab::{
    certify_gamma_ratio, certify_lemma_intlambda, certify_lemma_intxi_sweep, certify_lemma_ns,
    certify_log_equivalence,
};
use lagfrac::Result;

fn main() -> Result<()> {
    // Small-time integral: int_0^1 z^(-a) e^(-T/z) dz against its regimes.
    for &(a, t) in &[(0.0, 2.0), (2.0, 0.1), (1.0, 0.1), (0.3, 0.5)] {
        let row = certify_lemma_ns(a, t)?;
        println!("small-time a = {a}, T = {t}: ratio {:.6e} -> {}",
            row.ratio, if row.passed { "pass" } else { "FAIL" });
    }

    // xi-integral bound with a constant uniform in the exponent c.
    let sweep = certify_lemma_intxi_sweep(&[-0.5, 0.0, 1.0, 5.0, 20.0, 100.0], 1.0, 0.3, 1.0)?;
    println!("xi-integral c-sweep: ratios {:?} -> {}",
        sweep.ratios().iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(),
        if sweep.verdict { "uniform (pass)" } else { "FAIL" });

    // Beta-type integral with its three lambda regimes.
    for &(al, la, b, aa, bb) in &[
        (0.5, 1.0, 1.0, 2.0, 1.0),
        (0.0, 0.0, 1.5, 3.0, 1.0),
        (0.0, -0.3, 2.0, 3.0, 1.0),
    ] {
        let row = certify_lemma_intlambda(al, la, b, aa, bb)?;
        println!("beta-integral lambda = {la}: ratio {:.6e} (ceiling {:.2e}) -> {}",
            row.ratio, row.ceiling, if row.passed { "pass" } else { "FAIL" });
    }

    // Two-sided equivalence of log((1+xi)/(1-xi)) with xi resp. -log(1-xi^2).
    let logeq = certify_log_equivalence(&[0.01, 0.1, 0.25, 0.5, 0.75, 0.95])?;
    println!("log-equivalence: {}", if logeq.verdict { "pass" } else { "FAIL" });

    // Gamma-ratio stabilization: R(j) -> 1 as j grows.
    let gamma = certify_gamma_ratio(0.5, 0.25, 1.0, 60)?;
    let last = gamma.rows.last().unwrap();
    println!("gamma-ratio at j = 60: R = {:.9} -> {}",
        last.ratio, if gamma.verdict { "pass" } else { "FAIL" });
    Ok(())
}
