//! g is affine with slope N on every interval [n/N, (n+1)/N); the grid
//! points between intervals are where it is not differentiable.

use chaotic_iterations::conjugacy::{
    affine_offset, g_step, interval_of, local_slope, nondifferentiable_points, ConjugateReal,
};

fn main() -> chaotic_iterations::Result<()> {
    let x = ConjugateReal::parse("0.31", 10)?;
    let y = ConjugateReal::parse("0.3975", 10)?;
    println!(
        "interval of {x}: {:?}, of {y}: {:?}",
        interval_of(&x),
        interval_of(&y)
    );
    println!("g({x}) = {}, g({y}) = {}", g_step(&x)?, g_step(&y)?);
    println!("slope = {}", local_slope(&x, &y)?);
    println!("g(t) = 10 t + {} on this interval", affine_offset(&x)?);

    let z = ConjugateReal::parse("0.45", 10)?;
    match local_slope(&x, &z) {
        Ok(s) => println!("unexpected slope {s}"),
        Err(e) => println!("{x} and {z}: {e}"),
    }

    let grid = nondifferentiable_points(10)?;
    println!("{} non-differentiable points in [0, 1024]", grid.count());
    for s in ["0.3", "64.7", "0.37"] {
        let p = ConjugateReal::parse(s, 10)?;
        println!("  {s} on the grid: {}", grid.contains(&p));
    }
    Ok(())
}
