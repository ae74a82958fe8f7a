//! Chaotic iterations on Boolean cells and what follows from them.
//!
//! * [`dynamics`]: the iteration scheme itself, `G_f(S, E)`.
//! * [`metrics`]: the phase-space distance `d` and the interval distance `D`.
//! * [`conjugacy`]: the exact map from system points to `[0, 2^N)` and the
//!   piecewise-linear real map `g` it turns the iterations into.
//! * [`lyapunov`]: exact and floating estimates of the exponent `ln N`.
//! * [`watermark`]: LSB watermarking of grayscale PGM images with keyed
//!   chaotic iterations.
//! * [`cli`]: the `ciw` command-line tool.
//!
//! ```
//! use chaotic_iterations::conjugacy::{encode, g_step};
//! use chaotic_iterations::dynamics::{step, BoolState, Negation, Strategy, SystemPoint};
//!
//! let state: BoolState = "0000000000".parse().unwrap();
//! let point = SystemPoint::new(Strategy::parse("3,7", 10).unwrap(), state).unwrap();
//! let next = step(&point, &Negation).unwrap();
//! assert_eq!(encode(&next).unwrap().to_string(), "64.7");
//! assert_eq!(g_step(&encode(&point).unwrap()).unwrap(), encode(&next).unwrap());
//! ```

pub mod cli;
pub mod conjugacy;
pub mod dynamics;
pub mod error;
pub mod lyapunov;
pub mod metrics;
pub mod rng;
pub mod watermark;

pub use error::{Error, Result};
