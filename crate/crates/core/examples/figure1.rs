//! Writes the table comparing D with |x - ref| on [0, 5) to stdout.
//!
//!     cargo run --example figure1 -- 1.234 > fig1.csv

use chaotic_iterations::conjugacy::ConjugateReal;
use chaotic_iterations::metrics::{
    distance_comparison_table, write_comparison_csv, DEFAULT_GRID_DEPTH,
};

fn main() -> chaotic_iterations::Result<()> {
    let reference = std::env::args().nth(1).unwrap_or_else(|| "3".into());
    let reference = ConjugateReal::parse(&reference, 10)?;
    let rows = distance_comparison_table(&reference, 0.0, 5.0, 500, DEFAULT_GRID_DEPTH)?;
    write_comparison_csv(&rows, std::io::stdout().lock())
}
