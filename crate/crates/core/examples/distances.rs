//! The distance d on system points and the distance D on their reals.

use chaotic_iterations::conjugacy::{encode, ConjugateReal};
use chaotic_iterations::dynamics::{Strategy, SystemPoint};
use chaotic_iterations::metrics::{
    point_distance, point_distance_weighted, real_distance, StrategyWeights,
};

fn point(state: &str, strategy: &str) -> chaotic_iterations::Result<SystemPoint> {
    SystemPoint::new(Strategy::parse(strategy, 10)?, state.parse()?)
}

fn main() -> chaotic_iterations::Result<()> {
    let a = point("1100000000", "0,0,0")?;
    let b = point("0100000001", "9,0,0")?;
    let d = point_distance(&a, &b)?;
    // Integer part counts differing cells, the fraction compares strategies.
    println!("d(a, b) = {d} = {}", d.as_rational());
    println!("floor = {}, fraction = {}", d.floor(), d.fract());

    let w = point_distance_weighted(&a, &b, StrategyWeights::BaseN)?;
    println!("digit-weighted d(a, b) = {w}");

    let x = encode(&a)?;
    let y = encode(&b)?;
    println!("D({x}, {y}) = {}", real_distance(&x, &y)?);

    let p = ConjugateReal::parse("1.234", 10)?;
    let q = ConjugateReal::parse("3.000", 10)?;
    println!("D({p}, {q}) = {}", real_distance(&p, &q)?);
    Ok(())
}
