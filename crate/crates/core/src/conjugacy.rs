//! The real-line picture of chaotic iterations with the negation update.
//!
//! A system point `(S, E)` with `N` cells is mapped to the real number whose
//! integral part has binary digits `E_0 E_1 ... E_{N-1}` (most significant
//! first) and whose base-`N` fractional digits are the strategy terms. On
//! that interval one iteration becomes the map `g`: flip integral bit `s^0`,
//! then shift the fractional digits one place to the left. For `N = 10`
//! the fraction is an ordinary decimal expansion.
//!
//! Everything here is exact. `ConjugateReal` keeps the integral part and the
//! digit list separately; `to_rational` gives the exact value when needed.
//! `g_float` is the only floating path and is approximate by nature.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::dynamics::{step, BoolState, Negation, Strategy, SystemPoint};
use crate::error::{Error, Result};

/// Largest supported cell count: digits render as `0-9a-z`.
pub const MAX_CELLS: usize = 36;

const DIGIT_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Exact point of `[0, 2^N)`: an `N`-bit integral part and a finite list of
/// base-`N` fractional digits (`s^0` first, weight `N^-1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjugateReal {
    n_cells: usize,
    integral: u64,
    fraction: Vec<u8>,
}

impl ConjugateReal {
    pub fn new(n_cells: usize, integral: u64, fraction: Vec<u8>) -> Result<Self> {
        check_cell_count(n_cells)?;
        if integral >> n_cells != 0 {
            return Err(Error::IntegralOutOfRange { integral, n_cells });
        }
        if let Some(&d) = fraction.iter().find(|&&d| d as usize >= n_cells) {
            return Err(Error::DigitOutOfRange {
                digit: d as usize,
                base: n_cells,
            });
        }
        Ok(Self {
            n_cells,
            integral,
            fraction,
        })
    }

    /// Parses `<integral>.<digits>`; digits above 9 are written `a`, `b`, ...
    pub fn parse(s: &str, n_cells: usize) -> Result<Self> {
        let s = s.trim();
        let (int_str, frac_str) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_str.is_empty() {
            return Err(Error::parse(0, "missing integral part"));
        }
        let integral = int_str
            .parse::<u64>()
            .map_err(|e| Error::parse(0, format!("bad integral part {int_str:?}: {e}")))?;
        let offset = int_str.len() + 1;
        let fraction = frac_str
            .chars()
            .enumerate()
            .map(|(i, c)| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::parse(offset + i, format!("bad digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_cells, integral, fraction)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn integral(&self) -> u64 {
        self.integral
    }

    pub fn fraction(&self) -> &[u8] {
        &self.fraction
    }

    /// First fractional digit, `0` when the fraction is empty.
    pub fn leading_digit(&self) -> u8 {
        self.fraction.first().copied().unwrap_or(0)
    }

    /// Binary digits `e_0 ... e_{N-1}` of the integral part.
    pub fn integral_bits(&self) -> BoolState {
        BoolState::from_word(self.integral, self.n_cells).expect("cell count validated")
    }

    /// True when `x = n / N` exactly, i.e. every digit after `s^0` is zero.
    pub fn is_grid_point(&self) -> bool {
        self.fraction.iter().skip(1).all(|&d| d == 0)
    }

    /// True when the fraction is nonempty and made only of the digit `N - 1`.
    pub fn has_saturated_fraction(&self) -> bool {
        let top = (self.n_cells - 1) as u8;
        !self.fraction.is_empty() && self.fraction.iter().all(|&d| d == top)
    }

    /// Same value with the fraction extended by zeros to at least `depth` digits.
    pub fn padded_to(&self, depth: usize) -> Self {
        let mut out = self.clone();
        if out.fraction.len() < depth {
            out.fraction.resize(depth, 0);
        }
        out
    }

    /// Rounds a float to `depth` base-`N` fractional digits.
    pub fn from_f64(value: f64, n_cells: usize, depth: usize) -> Result<Self> {
        check_cell_count(n_cells)?;
        let top = (1u64 << n_cells) as f64;
        if !value.is_finite() || !(0.0..top).contains(&value) {
            return Err(Error::Range(format!("{value} not in [0, {top})")));
        }
        let base = n_cells as u128;
        let scale = (base as f64).powi(depth as i32);
        let scaled = (value * scale).round();
        if scaled >= 2f64.powi(120) {
            return Err(Error::Range(format!(
                "{depth} digits is too deep for {value}"
            )));
        }
        let mut scaled = scaled as u128;
        let mut fraction = vec![0u8; depth];
        for slot in fraction.iter_mut().rev() {
            *slot = (scaled % base) as u8;
            scaled /= base;
        }
        let integral =
            u64::try_from(scaled).map_err(|_| Error::Range(format!("{value} too large")))?;
        Self::new(n_cells, integral, fraction)
    }

    /// The exact value.
    pub fn to_rational(&self) -> BigRational {
        let base = BigInt::from(self.n_cells);
        let mut numer = BigInt::from(self.integral);
        for &d in &self.fraction {
            numer = numer * &base + BigInt::from(d);
        }
        let denom = num_traits::pow(base, self.fraction.len());
        BigRational::new(numer, denom)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// One application of `g`, consuming `self`.
    pub fn step(mut self) -> Result<Self> {
        if self.fraction.is_empty() {
            return Err(Error::ExhaustedDigits);
        }
        let s0 = self.fraction.remove(0) as usize;
        self.integral ^= 1u64 << (self.n_cells - 1 - s0);
        Ok(self)
    }

    fn digit(&self, k: usize) -> i64 {
        self.fraction.get(k).map_or(0, |&d| d as i64)
    }
}

impl fmt::Display for ConjugateReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.integral)?;
        if !self.fraction.is_empty() {
            f.write_str(".")?;
            for &d in &self.fraction {
                write!(f, "{}", DIGIT_CHARS[d as usize] as char)?;
            }
        }
        Ok(())
    }
}

fn check_cell_count(n_cells: usize) -> Result<()> {
    if n_cells == 0 {
        return Err(Error::InvalidCellCount { got: 0, min: 1 });
    }
    if n_cells > MAX_CELLS {
        return Err(Error::Domain(format!(
            "at most {MAX_CELLS} cells are supported on the real line, got {n_cells}"
        )));
    }
    Ok(())
}

/// Maps a system point to the real line.
pub fn encode(point: &SystemPoint) -> Result<ConjugateReal> {
    let n_cells = point.n_cells();
    check_cell_count(n_cells)?;
    let integral = point
        .state()
        .bits()
        .iter()
        .fold(0u64, |acc, &b| (acc << 1) | b as u64);
    let fraction = point.strategy().terms().iter().map(|&t| t as u8).collect();
    ConjugateReal::new(n_cells, integral, fraction)
}

/// Inverse of [`encode`] at the same truncation depth.
pub fn decode(x: &ConjugateReal) -> SystemPoint {
    let strategy = Strategy::new(x.fraction.iter().map(|&d| d as usize).collect(), x.n_cells)
        .expect("digits validated");
    SystemPoint::new(strategy, x.integral_bits()).expect("same cell count")
}

/// Like [`decode`] but rejects a fraction made only of the digit `N - 1`,
/// the truncation of an expansion that is not the canonical one.
pub fn decode_canonical(x: &ConjugateReal) -> Result<SystemPoint> {
    if x.has_saturated_fraction() {
        return Err(Error::NonCanonical {
            max_digit: x.n_cells - 1,
        });
    }
    Ok(decode(x))
}

/// `g(x)`: flip integral bit `s^0`, drop the first fractional digit.
pub fn g_step(x: &ConjugateReal) -> Result<ConjugateReal> {
    x.clone().step()
}

/// Checks `encode(G(point)) == g(encode(point))` exactly.
pub fn verify_semiconjugacy(point: &SystemPoint) -> Result<bool> {
    let lhs = encode(&step(point, &Negation)?)?;
    let rhs = g_step(&encode(point)?)?;
    Ok(lhs == rhs)
}

/// Index `n` of the interval `[n/N, (n+1)/N)` holding a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalIndex(pub u64);

impl IntervalIndex {
    /// Left endpoint `n / N` as an exact point.
    pub fn left_endpoint(self, n_cells: usize) -> Result<ConjugateReal> {
        let n = n_cells as u64;
        ConjugateReal::new(n_cells, self.0 / n, vec![(self.0 % n) as u8])
    }
}

pub fn interval_of(x: &ConjugateReal) -> IntervalIndex {
    IntervalIndex(x.n_cells as u64 * x.integral + x.leading_digit() as u64)
}

/// The grid `{ n/N : 0 <= n <= N * 2^N }` where `g` is not differentiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonDifferentiableSet {
    n_cells: usize,
}

impl NonDifferentiableSet {
    pub fn count(&self) -> u128 {
        self.n_cells as u128 * (1u128 << self.n_cells) + 1
    }

    pub fn contains(&self, x: &ConjugateReal) -> bool {
        x.n_cells == self.n_cells && x.is_grid_point()
    }
}

pub fn nondifferentiable_points(n_cells: usize) -> Result<NonDifferentiableSet> {
    check_cell_count(n_cells)?;
    Ok(NonDifferentiableSet { n_cells })
}

/// Exact `b - a`.
pub fn difference(a: &ConjugateReal, b: &ConjugateReal) -> Result<BigRational> {
    crate::dynamics::check_cells("difference", a.n_cells, b.n_cells)?;
    let depth = a.fraction.len().max(b.fraction.len());
    let base = BigInt::from(a.n_cells);
    let first = (0..depth).find(|&k| a.digit(k) != b.digit(k));
    let mut numer = BigInt::zero();
    if let Some(p) = first {
        for k in p..depth {
            numer = numer * &base + BigInt::from(b.digit(k) - a.digit(k));
        }
    }
    let int_diff = BigInt::from(b.integral as i128 - a.integral as i128);
    let denom = num_traits::pow(base, depth);
    Ok(BigRational::new(int_diff * &denom + numer, denom))
}

/// Exact `(g(y) - g(x)) / (y - x)` for two points of the same interval.
pub fn local_slope(x: &ConjugateReal, y: &ConjugateReal) -> Result<BigRational> {
    crate::dynamics::check_cells("local slope", x.n_cells, y.n_cells)?;
    let (ix, iy) = (interval_of(x), interval_of(y));
    if ix != iy {
        return Err(Error::CrossBoundary {
            left: ix.0,
            right: iy.0,
        });
    }
    let run = difference(x, y)?;
    if run.is_zero() {
        return Err(Error::Degenerate("slope needs two distinct points"));
    }
    let rise = difference(
        &g_step(&with_leading_digit(x))?,
        &g_step(&with_leading_digit(y))?,
    )?;
    Ok(rise / run)
}

/// Exact offset `c` with `g(x) = N x + c` on the interval of `x`.
pub fn affine_offset(x: &ConjugateReal) -> Result<BigRational> {
    let gx = g_step(&with_leading_digit(x))?;
    Ok(gx.to_rational() - BigRational::from_integer(BigInt::from(x.n_cells)) * x.to_rational())
}

// An empty fraction stands for s^0 = 0.
fn with_leading_digit(x: &ConjugateReal) -> ConjugateReal {
    if x.fraction.is_empty() {
        let mut x = x.clone();
        x.fraction.push(0);
        x
    } else {
        x.clone()
    }
}

/// Floating approximation of `g`; digits are extracted from the binary
/// value, so results drift from the exact map after a few iterations.
pub fn g_float(x: f64, n_cells: usize) -> Result<f64> {
    check_cell_count(n_cells)?;
    let top = (1u64 << n_cells) as f64;
    if !(0.0..top).contains(&x) {
        return Err(Error::Range(format!("{x} not in [0, {top})")));
    }
    let base = n_cells as f64;
    let integral = x.floor();
    let mut scaled = (x - integral) * base;
    // Decimal inputs such as 64.3 are stored a few ulps below the grid point.
    let snapped = scaled.round();
    if (scaled - snapped).abs() <= 4.0 * base * x.max(1.0) * f64::EPSILON {
        scaled = snapped;
    }
    let s0 = scaled.floor().min(base - 1.0);
    let tail = (scaled - s0).clamp(0.0, 1.0 - f64::EPSILON);
    let flipped = (integral as u64) ^ (1u64 << (n_cells - 1 - s0 as usize));
    Ok(flipped as f64 + tail)
}

/// Interval index of a floating point, `floor(N x)`.
pub fn interval_of_f64(x: f64, n_cells: usize) -> u64 {
    (x * n_cells as f64).floor() as u64
}

/// `ln` of an exact positive slope.
pub fn ln_slope(slope: &BigRational) -> f64 {
    if slope.is_one() {
        return 0.0;
    }
    slope.to_f64().map_or(f64::NAN, f64::ln)
}
