//! Command-line front end of the `ciw` binary.
//!
//! Every subcommand writes plain text or CSV; with the same flags (and the
//! same `--seed`) a run is byte-for-byte reproducible.
//!
//! Exit codes: `0` success, `1` verification failure, `2` usage or
//! validation error, `3` I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conjugacy::{
    decode, decode_canonical, encode, g_step, verify_semiconjugacy, ConjugateReal,
};
use crate::dynamics::{
    orbit, BoolState, Identity, Negation, Strategy, SystemPoint, UpdateFunction,
};
use crate::error::{Error, Result};
use crate::lyapunov::{derivative_product_estimate, divergence_rate_estimate, LyapunovReport};
use crate::metrics::{
    distance_comparison_table, point_distance_weighted, real_distance, write_comparison_csv,
    DistanceValue, StrategyWeights,
};
use crate::rng::SplitMix64;
use crate::watermark::{
    detect_with_threshold, embed, extract, read_pgm, write_pgm, WatermarkKey, WatermarkPayload,
    DEFAULT_THRESHOLD,
};

#[derive(Debug, Parser)]
#[command(
    name = "ciw",
    version,
    about = "Chaotic iterations, their real conjugate, Lyapunov exponents and LSB watermarking"
)]
pub struct Cli {
    /// Seed of every random choice; a fresh seed is drawn and printed when omitted
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output path (stdout when omitted, required by `embed`)
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Cells {
    /// Number of cells N
    #[arg(long = "n", default_value_t = 10)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UpdateKind {
    /// Vectorial negation
    Neg,
    /// Identity
    Id,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Weights {
    Decimal,
    BaseN,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LyapunovMode {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the states x^0 .. x^n of a chaotic iteration run
    Iterate {
        #[command(flatten)]
        cells: Cells,
        /// Initial state as a bit string, E_0 first
        #[arg(long)]
        state: String,
        /// Comma separated cell indices
        #[arg(long)]
        strategy: String,
        #[arg(long = "f", value_enum, default_value_t = UpdateKind::Neg)]
        update: UpdateKind,
        /// Number of iterations (default: the whole strategy)
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Distance d between two system points, or D between two reals (--x/--y)
    Distance {
        #[command(flatten)]
        cells: Cells,
        #[arg(long, requires = "y", conflicts_with_all = ["state_a", "state_b"])]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[arg(long, requires_all = ["strategy_a", "state_b", "strategy_b"])]
        state_a: Option<String>,
        #[arg(long)]
        strategy_a: Option<String>,
        #[arg(long)]
        state_b: Option<String>,
        #[arg(long)]
        strategy_b: Option<String>,
        /// Digit weights of the strategy part of d
        #[arg(long, value_enum, default_value_t = Weights::Decimal)]
        weights: Weights,
    },
    /// Map a system point to its real number
    Encode {
        #[command(flatten)]
        cells: Cells,
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "")]
        strategy: String,
    },
    /// Map a real number back to a system point
    Decode {
        #[command(flatten)]
        cells: Cells,
        #[arg(long)]
        x: String,
        /// Reject fractions made only of the digit N-1
        #[arg(long)]
        strict: bool,
    },
    /// Apply the real map g, printing every image
    GStep {
        #[command(flatten)]
        cells: Cells,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Check the commuting square on random points
    VerifyConjugacy {
        #[command(flatten)]
        cells: Cells,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Strategy length of each random point
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Lyapunov exponent of the real map, exact or floating
    Lyapunov {
        #[arg(long, value_enum, default_value_t = LyapunovMode::Exact)]
        mode: LyapunovMode,
        /// Number of cells N
        #[arg(long, default_value_t = 10)]
        cells: usize,
        /// Number of steps
        #[arg(long = "n", default_value_t = 1000)]
        steps: usize,
        /// Initial condition
        #[arg(long, default_value = "0.1234567")]
        x0: String,
        /// Exact mode: repeat the fractional digits of x0 up to the needed depth
        #[arg(long)]
        cycle: bool,
        /// Float mode: initial separation
        #[arg(long, default_value_t = 1e-9)]
        delta: f64,
    },
    /// CSV comparing D with the Euclidean distance to a reference point
    Fig1 {
        #[command(flatten)]
        cells: Cells,
        #[arg(long = "ref")]
        reference: String,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 5.0)]
        hi: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// Fractional digits of each grid sample
        #[arg(long, default_value_t = crate::metrics::DEFAULT_GRID_DEPTH)]
        depth: usize,
    },
    /// Hide a payload in a binary PGM cover
    Embed {
        #[arg(long)]
        cover: PathBuf,
        #[command(flatten)]
        payload: PayloadArgs,
        #[arg(long)]
        key: String,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
    },
    /// Recover a payload from a stego PGM
    Extract {
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        key: String,
        /// Payload length in bits
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
    },
    /// Compare the extracted payload with an expected one; exit 0 iff present
    Detect {
        #[arg(long)]
        stego: PathBuf,
        #[command(flatten)]
        payload: PayloadArgs,
        #[arg(long)]
        key: String,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Debug, Args)]
pub struct PayloadArgs {
    /// Payload bits as a 0/1 string
    #[arg(
        long,
        conflicts_with = "payload_file",
        required_unless_present = "payload_file"
    )]
    pub payload: Option<String>,
    /// Payload file: 0/1 text, or raw bytes with --payload-bits
    #[arg(long)]
    pub payload_file: Option<PathBuf>,
    /// Bit length of a raw payload file
    #[arg(long, requires = "payload_file")]
    pub payload_bits: Option<usize>,
}

impl PayloadArgs {
    fn load(&self) -> Result<WatermarkPayload> {
        match (&self.payload, &self.payload_file) {
            (Some(text), _) => WatermarkPayload::parse_text(text),
            (None, Some(path)) => WatermarkPayload::read(path, self.payload_bits),
            (None, None) => Err(Error::Domain("a payload is required".into())),
        }
    }
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

/// Exit code of an error.
pub fn error_exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        _ => 2,
    }
}

/// Runs one parsed command. Reports go to `out` unless `-o` is given;
/// diagnostics such as a freshly drawn seed go to `diag`.
pub fn run(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<Outcome> {
    let mut text = Vec::new();
    let outcome = dispatch(cli, &mut text, diag)?;
    // embed and lyapunov write their own artifact to -o
    let side_channel = matches!(
        cli.command,
        Command::Embed { .. } | Command::Lyapunov { .. }
    );
    match &cli.output {
        Some(path) if !side_channel => fs::write(path, &text)?,
        _ => out.write_all(&text)?,
    }
    out.flush()?;
    Ok(outcome)
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, diag: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Iterate {
            cells,
            state,
            strategy,
            update,
            steps,
        } => {
            let point = parse_point(state, strategy, cells.n)?;
            let n = steps.unwrap_or(point.strategy().len());
            let f: &dyn UpdateFunction = match update {
                UpdateKind::Neg => &Negation,
                UpdateKind::Id => &Identity,
            };
            for s in orbit(&point, f, n)? {
                writeln!(out, "{s}")?;
            }
        }
        Command::Distance {
            cells,
            x,
            y,
            state_a,
            strategy_a,
            state_b,
            strategy_b,
            weights,
        } => {
            let d = match (x, y, state_a, strategy_a, state_b, strategy_b) {
                (Some(x), Some(y), ..) => {
                    let (x, y) = (parse_real(x, cells.n)?, parse_real(y, cells.n)?);
                    let depth = x.fraction().len().max(y.fraction().len());
                    real_distance(&x.padded_to(depth), &y.padded_to(depth))?
                }
                (_, _, Some(ea), Some(sa), Some(eb), Some(sb)) => {
                    let a = parse_point(ea, sa, cells.n)?;
                    let b = parse_point(eb, sb, cells.n)?;
                    let w = match weights {
                        Weights::Decimal => StrategyWeights::Decimal,
                        Weights::BaseN => StrategyWeights::BaseN,
                    };
                    point_distance_weighted(&a, &b, w)?
                }
                _ => {
                    return Err(Error::Domain(
                        "give --x/--y or all of --state-a/--strategy-a/--state-b/--strategy-b"
                            .into(),
                    ))
                }
            };
            write_distance(out, &d)?;
        }
        Command::Encode {
            cells,
            state,
            strategy,
        } => {
            writeln!(out, "{}", encode(&parse_point(state, strategy, cells.n)?)?)?;
        }
        Command::Decode { cells, x, strict } => {
            let x = parse_real(x, cells.n)?;
            let point = if *strict {
                decode_canonical(&x)?
            } else {
                decode(&x)
            };
            writeln!(out, "state={}", point.state())?;
            writeln!(out, "strategy={}", point.strategy())?;
        }
        Command::GStep { cells, x, times } => {
            let mut x = parse_real(x, cells.n)?;
            for _ in 0..*times {
                x = g_step(&x)?;
                writeln!(out, "{x}")?;
            }
        }
        Command::VerifyConjugacy {
            cells,
            trials,
            depth,
        } => {
            let seed = resolve_seed(cli.seed, diag)?;
            let (passed, total) = verify_random_points(cells.n, *trials, *depth as usize, seed)?;
            writeln!(out, "{passed}/{total} exact")?;
            if passed != total {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::Lyapunov {
            mode,
            cells,
            steps,
            x0,
            cycle,
            delta,
        } => {
            let report = match mode {
                LyapunovMode::Exact => {
                    let mut x = parse_real(x0, *cells)?;
                    if *cycle {
                        x = cycle_digits(&x, steps + 1)?;
                    }
                    derivative_product_estimate(&x, *steps)?
                }
                LyapunovMode::Float => {
                    let x = x0
                        .parse::<f64>()
                        .map_err(|e| Error::parse(0, format!("bad x0 {x0:?}: {e}")))?;
                    divergence_rate_estimate(x, *delta, *steps, *cells)?
                }
            };
            write_lyapunov_summary(out, &report)?;
            if let Some(path) = &cli.output {
                let mut csv = Vec::new();
                report.write_csv(&mut csv)?;
                fs::write(path, csv)?;
            }
        }
        Command::Fig1 {
            cells,
            reference,
            lo,
            hi,
            steps,
            depth,
        } => {
            let reference = parse_real(reference, cells.n)?;
            let rows = distance_comparison_table(&reference, *lo, *hi, *steps, *depth)?;
            write_comparison_csv(&rows, &mut *out)?;
        }
        Command::Embed {
            cover,
            payload,
            key,
            iterations,
        } => {
            let path = cli
                .output
                .as_deref()
                .ok_or_else(|| Error::Domain("embed needs -o <stego.pgm>".into()))?;
            let cover = read_pgm(cover)?.image;
            let payload = payload.load()?;
            let stego = embed(&cover, &payload, &WatermarkKey::new(key), *iterations)?;
            write_pgm(&stego, path)?;
            writeln!(
                out,
                "embedded {} bits into {}",
                payload.len(),
                path.display()
            )?;
        }
        Command::Extract {
            stego,
            key,
            length,
            iterations,
        } => {
            let stego = read_pgm(stego)?.image;
            let payload = extract(&stego, &WatermarkKey::new(key), *length, *iterations)?;
            writeln!(out, "{payload}")?;
        }
        Command::Detect {
            stego,
            payload,
            key,
            iterations,
            threshold,
        } => {
            let stego = read_pgm(stego)?.image;
            let expected = payload.load()?;
            let d = detect_with_threshold(
                &stego,
                &WatermarkKey::new(key),
                &expected,
                *iterations,
                *threshold,
            )?;
            let verdict = if d.present { "present" } else { "absent" };
            writeln!(out, "ber={:.6} {verdict}", d.ber)?;
            if !d.present {
                return Ok(Outcome::VerificationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}

fn parse_point(state: &str, strategy: &str, n: usize) -> Result<SystemPoint> {
    let state: BoolState = state.parse()?;
    if state.n_cells() != n {
        return Err(Error::DimensionMismatch {
            what: "--state length vs --n",
            left: state.n_cells(),
            right: n,
        });
    }
    SystemPoint::new(Strategy::parse(strategy, n)?, state)
}

fn parse_real(x: &str, n: usize) -> Result<ConjugateReal> {
    ConjugateReal::parse(x, n)
}

fn write_distance(out: &mut Vec<u8>, d: &DistanceValue) -> io::Result<()> {
    writeln!(out, "{d} ({})", d.as_rational())
}

fn write_lyapunov_summary(out: &mut Vec<u8>, report: &LyapunovReport) -> io::Result<()> {
    writeln!(out, "estimate={:.12}", report.estimate)?;
    writeln!(out, "analytic={:.12}", report.analytic)?;
    writeln!(out, "abs_error={:e}", report.abs_error())?;
    writeln!(
        out,
        "steps={} skipped={}",
        report.n_steps, report.skipped_steps
    )
}

/// Repeats the fractional digits of `x` until there are at least `depth`.
pub fn cycle_digits(x: &ConjugateReal, depth: usize) -> Result<ConjugateReal> {
    let digits = x.fraction();
    if digits.is_empty() {
        return Err(Error::Domain("cannot cycle an empty fraction".into()));
    }
    let fraction = digits
        .iter()
        .copied()
        .cycle()
        .take(depth.max(digits.len()))
        .collect();
    ConjugateReal::new(x.n_cells(), x.integral(), fraction)
}

fn resolve_seed(seed: Option<u64>, diag: &mut dyn Write) -> Result<u64> {
    Ok(match seed {
        Some(s) => s,
        None => {
            let nanos = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(0);
            let s = SplitMix64::new(nanos).next_u64();
            writeln!(diag, "seed={s}")?;
            s
        }
    })
}

/// Random points with `depth`-term strategies; returns (passed, total).
pub fn verify_random_points(n: usize, trials: u64, depth: usize, seed: u64) -> Result<(u64, u64)> {
    let mut rng = SplitMix64::new(seed);
    let mut passed = 0;
    for _ in 0..trials {
        let state = BoolState::new((0..n).map(|_| rng.next_bool()).collect())?;
        let terms = (0..depth).map(|_| rng.below(n as u64) as usize).collect();
        let point = SystemPoint::new(Strategy::new(terms, n)?, state)?;
        if verify_semiconjugacy(&point)? {
            passed += 1;
        }
    }
    Ok((passed, trials))
}
