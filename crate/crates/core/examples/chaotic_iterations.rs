//! Runs chaotic iterations with the vectorial negation and with a custom
//! update function, then checks the closed-form mix.

use chaotic_iterations::dynamics::{mix, orbit, BoolState, Negation, Strategy, SystemPoint};

fn main() -> chaotic_iterations::Result<()> {
    let state: BoolState = "0000000000".parse()?;
    let strategy = Strategy::parse("3,7,3,0", 10)?;
    let start = SystemPoint::new(strategy.clone(), state.clone())?;

    println!("negation, strategy {strategy}");
    for (k, s) in orbit(&start, &Negation, strategy.len())?.iter().enumerate() {
        println!("  x^{k} = {s}");
    }
    // Cells 3 appears twice, so only 7 and 0 end up flipped.
    println!("  mix   = {}", mix(&state, &strategy)?);

    // Any closure on states can drive the iterations: here each cell copies
    // its left neighbour.
    let rotate = |s: &BoolState| {
        let b = s.bits();
        BoolState::new(
            (0..b.len())
                .map(|i| b[(i + b.len() - 1) % b.len()])
                .collect(),
        )
        .unwrap()
    };
    let start = SystemPoint::new(Strategy::parse("1,2,3,4", 10)?, "1000000000".parse()?)?;
    println!("rotation");
    for s in orbit(&start, &rotate, 4)? {
        println!("  {s}");
    }
    Ok(())
}
