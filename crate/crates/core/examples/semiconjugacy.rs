//! Encodes system points as reals and checks that one iteration on points
//! is one application of g on reals.

use chaotic_iterations::conjugacy::{decode, encode, g_step, verify_semiconjugacy, ConjugateReal};
use chaotic_iterations::dynamics::{step, BoolState, Negation, Strategy, SystemPoint};
use chaotic_iterations::rng::SplitMix64;

fn main() -> chaotic_iterations::Result<()> {
    let p = SystemPoint::new(Strategy::parse("3,7", 10)?, BoolState::zeros(10)?)?;
    let x = encode(&p)?;
    println!("encode(p)       = {x}");
    println!("g(encode(p))    = {}", g_step(&x)?);
    println!("encode(step(p)) = {}", encode(&step(&p, &Negation)?)?);
    let back = decode(&ConjugateReal::parse("512.123", 10)?);
    println!(
        "decode(512.123) = state {}, strategy {}",
        back.state(),
        back.strategy()
    );

    let mut rng = SplitMix64::new(2024);
    let mut ok = 0;
    let trials = 1000;
    for _ in 0..trials {
        let state = BoolState::new((0..10).map(|_| rng.next_bool()).collect())?;
        let terms = (0..64).map(|_| rng.below(10) as usize).collect();
        if verify_semiconjugacy(&SystemPoint::new(Strategy::new(terms, 10)?, state)?)? {
            ok += 1;
        }
    }
    println!("{ok}/{trials} random points commute exactly");
    Ok(())
}
