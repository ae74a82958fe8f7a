//! Distances on the phase space and on the real interval.
//!
//! * `d = d_e + d_s` on system points: Hamming distance of the states plus a
//!   weighted digit distance of the strategies, always below one.
//! * `D = D_e + D_s` on the conjugate reals: Hamming distance of the binary
//!   integral parts plus the base-`N` digit distance of the fractions.
//!
//! All values are exact rationals; floats only appear when rendering.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::conjugacy::ConjugateReal;
use crate::dynamics::{check_cells, BoolState, Strategy, SystemPoint};
use crate::error::{Error, Result};

/// A non-negative exact distance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceValue(BigRational);

impl DistanceValue {
    fn new(value: BigRational) -> Self {
        debug_assert!(!value.is_negative());
        Self(value)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn fract(&self) -> BigRational {
        self.0.fract()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::ops::Add for DistanceValue {
    type Output = DistanceValue;

    fn add(self, rhs: DistanceValue) -> DistanceValue {
        DistanceValue(self.0 + rhs.0)
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_significant(&self.0, 12))
    }
}

/// Digit weights of the strategy distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrategyWeights {
    /// `(9/N) * sum |a_k - b_k| / 10^(k+1)`.
    #[default]
    Decimal,
    /// `sum |a_k - b_k| / N^(k+1)`: the fractional part then lists the
    /// term differences as its base-`N` digits.
    BaseN,
}

/// Hamming distance between two states.
pub fn state_distance(a: &BoolState, b: &BoolState) -> Result<usize> {
    check_cells("state distance", a.n_cells(), b.n_cells())?;
    Ok(a.bits()
        .iter()
        .zip(b.bits())
        .filter(|(x, y)| x != y)
        .count())
}

pub fn strategy_distance(a: &Strategy, b: &Strategy) -> Result<DistanceValue> {
    strategy_distance_weighted(a, b, StrategyWeights::Decimal)
}

pub fn strategy_distance_weighted(
    a: &Strategy,
    b: &Strategy,
    weights: StrategyWeights,
) -> Result<DistanceValue> {
    check_cells("strategy distance", a.n_cells(), b.n_cells())?;
    check_cells("strategy length", a.len(), b.len())?;
    let n = a.n_cells();
    let diffs = a
        .terms()
        .iter()
        .zip(b.terms())
        .map(|(&x, &y)| x.abs_diff(y));
    let value = match weights {
        StrategyWeights::Decimal => {
            weighted_digit_sum(diffs, 10) * BigRational::new(9.into(), n.into())
        }
        StrategyWeights::BaseN => weighted_digit_sum(diffs, n),
    };
    Ok(DistanceValue::new(value))
}

/// `d(X, Y) = d_e(E, E') + d_s(S, S')`.
pub fn point_distance(a: &SystemPoint, b: &SystemPoint) -> Result<DistanceValue> {
    point_distance_weighted(a, b, StrategyWeights::Decimal)
}

pub fn point_distance_weighted(
    a: &SystemPoint,
    b: &SystemPoint,
    weights: StrategyWeights,
) -> Result<DistanceValue> {
    let states = state_distance(a.state(), b.state())?;
    let strategies = strategy_distance_weighted(a.strategy(), b.strategy(), weights)?;
    Ok(DistanceValue::new(BigRational::from_integer(states.into())) + strategies)
}

/// Hamming distance between the binary digits of the integral parts.
pub fn integral_distance(a: &ConjugateReal, b: &ConjugateReal) -> Result<usize> {
    check_cells("integral distance", a.n_cells(), b.n_cells())?;
    Ok((a.integral() ^ b.integral()).count_ones() as usize)
}

/// `sum_k |s^k - s'^k| / N^(k+1)` over all fractional digits.
pub fn fraction_distance(a: &ConjugateReal, b: &ConjugateReal) -> Result<DistanceValue> {
    check_cells("fraction distance", a.n_cells(), b.n_cells())?;
    check_cells("fraction length", a.fraction().len(), b.fraction().len())?;
    let diffs = a
        .fraction()
        .iter()
        .zip(b.fraction())
        .map(|(&x, &y)| x.abs_diff(y) as usize);
    Ok(DistanceValue::new(weighted_digit_sum(diffs, a.n_cells())))
}

/// `D(x, y) = D_e(e(x), e(y)) + D_s(s(x), s(y))`.
pub fn real_distance(a: &ConjugateReal, b: &ConjugateReal) -> Result<DistanceValue> {
    let integral = integral_distance(a, b)?;
    let fraction = fraction_distance(a, b)?;
    Ok(DistanceValue::new(BigRational::from_integer(integral.into())) + fraction)
}

// sum_k d_k / base^(k+1), via Horner on the numerator.
fn weighted_digit_sum(digits: impl Iterator<Item = usize>, base: usize) -> BigRational {
    let base = BigInt::from(base);
    let mut numer = BigInt::zero();
    let mut len = 0;
    for d in digits {
        numer = numer * &base + BigInt::from(d);
        len += 1;
    }
    BigRational::new(numer, num_traits::pow(base, len))
}

/// Default fractional depth of the grid samples of [`distance_comparison_table`].
pub const DEFAULT_GRID_DEPTH: usize = 6;

/// One sample of the `D` versus Euclidean comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub x: ConjugateReal,
    pub d: DistanceValue,
    pub euclid: BigRational,
}

/// Samples `x_i = lo + (hi - lo) i / steps` for `i < steps`, rounds each to
/// `depth` fractional digits, and tabulates `D(x_i, reference)` next to
/// `|x_i - reference|`.
pub fn distance_comparison_table(
    reference: &ConjugateReal,
    grid_lo: f64,
    grid_hi: f64,
    steps: usize,
    depth: usize,
) -> Result<Vec<ComparisonRow>> {
    if !(grid_lo.is_finite() && grid_hi.is_finite() && grid_lo < grid_hi) {
        return Err(Error::Range(format!("empty grid ({grid_lo}, {grid_hi})")));
    }
    if steps < 2 {
        return Err(Error::Range(format!(
            "a grid needs at least 2 steps, got {steps}"
        )));
    }
    let depth = depth.max(reference.fraction().len());
    let reference = reference.padded_to(depth);
    let ref_value = reference.to_rational();
    let n = reference.n_cells();
    (0..steps)
        .map(|i| {
            let t = grid_lo + (grid_hi - grid_lo) * i as f64 / steps as f64;
            let x = ConjugateReal::from_f64(t, n, depth)?;
            let d = real_distance(&x, &reference)?;
            let euclid = (x.to_rational() - &ref_value).abs();
            Ok(ComparisonRow { x, d, euclid })
        })
        .collect()
}

/// Writes the table as CSV with header `x,D,euclid`.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], mut out: W) -> Result<()> {
    writeln!(out, "x,D,euclid")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            render_significant(&row.x.to_rational(), 12),
            row.d,
            render_significant(&row.euclid, 12)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Renders an exact rational with at most `digits` significant digits,
/// rounding half away from zero and dropping trailing zeros, in the style
/// of printf's `%g`.
pub fn render_significant(value: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    let a = value.abs();
    let ten = BigInt::from(10);

    // 10^exp <= a < 10^(exp+1)
    let mut exp = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(1.into(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while a < pow10(exp) {
        exp -= 1;
    }
    while a >= pow10(exp + 1) {
        exp += 1;
    }

    let scaled = &a * pow10(digits as i64 - 1 - exp);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if r * 2 >= *scaled.denom() { q + 1 } else { q };
    if mantissa == num_traits::pow(ten.clone(), digits) {
        mantissa /= &ten;
        exp += 1;
    }
    let m = mantissa.to_string();

    let body = if exp < -5 || exp >= digits as i64 {
        let (lead, rest) = m.split_at(1);
        let rest = rest.trim_end_matches('0');
        let e_sign = if exp < 0 { '-' } else { '+' };
        if rest.is_empty() {
            format!("{lead}e{e_sign}{:02}", exp.abs())
        } else {
            format!("{lead}.{rest}e{e_sign}{:02}", exp.abs())
        }
    } else if exp >= 0 {
        let (int, frac) = m.split_at(exp as usize + 1);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", m.trim_end_matches('0'))
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn st(s: &str) -> BoolState {
        s.parse().unwrap()
    }

    fn x(s: &str) -> ConjugateReal {
        ConjugateReal::parse(s, 10).unwrap()
    }

    #[test]
    fn state_distance_examples() {
        let e = st("0110010011");
        assert_eq!(state_distance(&e, &e).unwrap(), 0);
        assert_eq!(
            state_distance(&st("0000000000"), &st("1111111111")).unwrap(),
            10
        );
        assert_eq!(
            state_distance(&st("1000000000"), &st("0000000000")).unwrap(),
            1
        );
        assert!(matches!(
            state_distance(&st("00"), &st("000")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strategy_distance_examples() {
        let a = Strategy::new(vec![0, 4, 2, 7], 10).unwrap();
        assert!(strategy_distance(&a, &a).unwrap().is_zero());
        let a = Strategy::new(vec![0, 0, 3], 10).unwrap();
        let b = Strategy::new(vec![9, 0, 3], 10).unwrap();
        assert_eq!(
            *strategy_distance(&a, &b).unwrap().as_rational(),
            rat(81, 100)
        );
        assert_eq!(
            *strategy_distance_weighted(&a, &b, StrategyWeights::BaseN)
                .unwrap()
                .as_rational(),
            rat(9, 10)
        );
        let short = Strategy::new(vec![0, 0], 10).unwrap();
        assert!(strategy_distance(&a, &short).is_err());
    }

    #[test]
    fn strategy_distance_tail_bound() {
        // First k terms agree, term k+1 differs: value in (0, 10^-k).
        for k in 0..12 {
            let mut ta = vec![5; 16];
            let mut tb = ta.clone();
            ta[k] = 0;
            tb[k] = 9;
            for j in k + 1..16 {
                ta[j] = 0;
                tb[j] = 9;
            }
            let a = Strategy::new(ta, 10).unwrap();
            let b = Strategy::new(tb, 10).unwrap();
            let d = strategy_distance(&a, &b).unwrap().to_f64();
            assert!(d > 0.0 && d < 10f64.powi(-(k as i32)), "k={k} d={d}");
        }
    }

    #[test]
    fn point_distance_examples() {
        let s = Strategy::new(vec![1, 2, 3], 10).unwrap();
        let p = SystemPoint::new(s.clone(), st("0000000000")).unwrap();
        let q = SystemPoint::new(s, st("1010100000")).unwrap();
        assert!(point_distance(&p, &p).unwrap().is_zero());
        assert_eq!(*point_distance(&p, &q).unwrap().as_rational(), rat(3, 1));
    }

    #[test]
    fn real_distance_examples() {
        assert_eq!(integral_distance(&x("512"), &x("0")).unwrap(), 1);
        assert_eq!(integral_distance(&x("1023"), &x("0")).unwrap(), 10);
        assert_eq!(
            *fraction_distance(&x("0.123"), &x("0.124"))
                .unwrap()
                .as_rational(),
            rat(1, 1000)
        );
        assert_eq!(
            *fraction_distance(&x("0.9"), &x("0.0"))
                .unwrap()
                .as_rational(),
            rat(9, 10)
        );
        assert!(fraction_distance(&x("0.9"), &x("0.90")).is_err());
        let a = x("512.123");
        assert!(real_distance(&a, &a).unwrap().is_zero());
        assert_eq!(
            *real_distance(&a, &x("513.124")).unwrap().as_rational(),
            rat(1001, 1000)
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(render_significant(&rat(0, 1), 12), "0");
        assert_eq!(render_significant(&rat(1234, 1000), 12), "1.234");
        assert_eq!(render_significant(&rat(3, 1), 12), "3");
        assert_eq!(render_significant(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(render_significant(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(render_significant(&rat(-1, 1000), 12), "-0.001");
        assert_eq!(render_significant(&rat(1, 10_000_000), 12), "1e-07");
        assert_eq!(render_significant(&rat(9_999_999, 1), 3), "1e+07");
        assert_eq!(render_significant(&rat(995, 1000), 2), "1");
        assert_eq!(render_significant(&rat(1023, 1), 12), "1023");
    }

    #[test]
    fn comparison_table_shape() {
        let reference = x("3");
        let rows =
            distance_comparison_table(&reference, 0.0, 5.0, 500, DEFAULT_GRID_DEPTH).unwrap();
        assert_eq!(rows.len(), 500);
        let at_ref = rows
            .iter()
            .find(|r| r.x.to_rational() == rat(3, 1))
            .unwrap();
        assert!(at_ref.euclid.is_zero());
        assert!(at_ref.d.is_zero());
        assert!(distance_comparison_table(&reference, 5.0, 0.0, 10, 6).is_err());
        assert!(distance_comparison_table(&reference, 0.0, 5.0, 1, 6).is_err());

        let mut csv = Vec::new();
        write_comparison_csv(&rows[..3], &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text, "x,D,euclid\n0,2,3\n0.01,2.01,2.99\n0.02,2.02,2.98\n");
    }
}
