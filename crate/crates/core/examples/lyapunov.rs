//! Exact and floating estimates of the Lyapunov exponent of g.

use chaotic_iterations::conjugacy::ConjugateReal;
use chaotic_iterations::lyapunov::{
    analytic_exponent, derivative_product_estimate, divergence_rate_estimate,
    is_exceptional_initial,
};
use chaotic_iterations::Error;

fn main() -> chaotic_iterations::Result<()> {
    let digits: String = "1234567".repeat(150);
    let x0 = ConjugateReal::parse(&format!("0.{digits}"), 10)?;
    let exact = derivative_product_estimate(&x0, 1000)?;
    println!(
        "exact:  {:.15} (ln 10 = {:.15}), variance {}",
        exact.estimate,
        analytic_exponent(10)?,
        exact.variance()
    );

    let float = divergence_rate_estimate(0.1234567, 1e-9, 1000, 10)?;
    println!(
        "float:  {:.15}, error {:.2e}, skipped {}",
        float.estimate,
        float.abs_error(),
        float.skipped_steps
    );

    for n in [2usize, 4, 16] {
        let digits = vec![1u8; 201];
        let x0 = ConjugateReal::new(n, 1, digits)?;
        let r = derivative_product_estimate(&x0, 200)?;
        println!("N = {n:2}: {:.12}", r.estimate);
    }

    // A terminating expansion eventually lands on the grid: read literally,
    // 0.37 maps to 64.7.
    for s in ["0.35000", "0.3555555555"] {
        let x0 = ConjugateReal::parse(s, 10)?;
        println!("{s} exceptional: {}", is_exceptional_initial(&x0));
    }
    let x0 = ConjugateReal::parse("0.37", 10)?;
    if let Err(Error::ExceptionalOrbit { step }) = derivative_product_estimate(&x0, 2) {
        println!("0.37 reaches a grid point at step {step}");
    }
    Ok(())
}
