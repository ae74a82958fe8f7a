//! Lyapunov exponent of the conjugate map `g`.
//!
//! `g` is affine with slope `N` on every interval `[n/N, (n+1)/N)`, so along
//! any orbit avoiding the grid points the exponent is exactly `ln N`. Two
//! estimators are provided: an exact one that multiplies the local slopes
//! along the orbit, and a floating two-orbit divergence estimator with
//! renormalisation after every step.

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;

use crate::conjugacy::{
    g_float, interval_of_f64, ln_slope, local_slope, nondifferentiable_points, ConjugateReal,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovReport {
    pub n_steps: usize,
    /// `ln |g'|` for every step that was not skipped.
    pub per_step_logs: Vec<f64>,
    pub estimate: f64,
    pub analytic: f64,
    /// Steps where the two orbits sat on different intervals (divergence
    /// estimator only).
    pub skipped_steps: usize,
}

impl LyapunovReport {
    pub fn abs_error(&self) -> f64 {
        (self.estimate - self.analytic).abs()
    }

    /// Population variance of the per-step logs, shifted by the first value.
    pub fn variance(&self) -> f64 {
        let Some(&first) = self.per_step_logs.first() else {
            return 0.0;
        };
        let n = self.per_step_logs.len() as f64;
        let (sum, sum_sq) = self
            .per_step_logs
            .iter()
            .map(|v| v - first)
            .fold((0.0, 0.0), |(s, q), d| (s + d, q + d * d));
        let mean = sum / n;
        (sum_sq / n - mean * mean).max(0.0)
    }

    /// `step,log_slope` rows followed by a `#` summary line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,log_slope")?;
        for (i, v) in self.per_step_logs.iter().enumerate() {
            writeln!(out, "{},{:.15}", i + 1, v)?;
        }
        writeln!(
            out,
            "# estimate={:.15} analytic={:.15} abs_error={:e} skipped={}",
            self.estimate,
            self.analytic,
            self.abs_error(),
            self.skipped_steps
        )?;
        out.flush()?;
        Ok(())
    }
}

/// `ln N`, the exponent of every admissible orbit.
pub fn analytic_exponent(n_cells: usize) -> Result<f64> {
    if n_cells < 2 {
        return Err(Error::Domain(format!(
            "the exponent needs at least 2 cells, got {n_cells}"
        )));
    }
    Ok((n_cells as f64).ln())
}

/// Averages `ln |g'(x^{i-1})|` over `i = 1..=n`, with every derivative taken
/// as an exact slope inside the interval of the current iterate.
///
/// Fails with [`Error::ExceptionalOrbit`] naming the first step whose
/// iterate is a grid point, and with [`Error::ExhaustedDigits`] when `x0`
/// has fewer than `n` fractional digits.
pub fn derivative_product_estimate(x0: &ConjugateReal, n: usize) -> Result<LyapunovReport> {
    let analytic = analytic_exponent(x0.n_cells())?;
    if n == 0 {
        return Err(Error::Domain("at least one step is required".into()));
    }
    if x0.fraction().len() < n {
        return Err(Error::ExhaustedDigits);
    }
    let grid = nondifferentiable_points(x0.n_cells())?;

    let mut tally: BTreeMap<BigRational, usize> = BTreeMap::new();
    let mut per_step_logs = Vec::with_capacity(n);
    let mut x = x0.clone();
    for step in 1..=n {
        if grid.contains(&x) {
            return Err(Error::ExceptionalOrbit { step });
        }
        // Any deeper point of the same interval gives the derivative.
        let mut probe = x.fraction().to_vec();
        probe.push(1);
        let probe = ConjugateReal::new(x.n_cells(), x.integral(), probe)?;
        let slope = local_slope(&x, &probe)?;
        per_step_logs.push(ln_slope(&slope));
        *tally.entry(slope).or_default() += 1;
        x = x.step()?;
    }

    // Grouped by exact slope so that a constant slope gives its log exactly.
    let estimate = tally
        .iter()
        .map(|(slope, &count)| (count as f64 / n as f64) * ln_slope(slope))
        .sum();
    Ok(LyapunovReport {
        n_steps: n,
        per_step_logs,
        estimate,
        analytic,
        skipped_steps: 0,
    })
}

/// Two nearby floating orbits, separation renormalised to `delta` after
/// every step, keeping its sign.
pub fn divergence_rate_estimate(
    x0: f64,
    delta: f64,
    n: usize,
    n_cells: usize,
) -> Result<LyapunovReport> {
    let analytic = analytic_exponent(n_cells)?;
    let base = n_cells as f64;
    if !(delta > 0.0 && delta < 1.0 / base) {
        return Err(Error::Domain(format!(
            "delta must lie in (0, 1/{n_cells}), got {delta}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("at least one step is required".into()));
    }
    let top = (1u64 << n_cells) as f64;
    if !(0.0..top).contains(&x0) || !(0.0..top).contains(&(x0 + delta)) {
        return Err(Error::Range(format!(
            "x0 and x0 + delta must lie in [0, {top})"
        )));
    }

    let companion = |x: f64, dir: f64| {
        let y = x + dir * delta;
        if (0.0..top).contains(&y) {
            (y, dir)
        } else {
            (x - dir * delta, -dir)
        }
    };

    let mut x = x0;
    let (mut y, mut dir) = (x0 + delta, 1.0);
    let mut per_step_logs = Vec::with_capacity(n);
    let mut skipped_steps = 0;
    for _ in 0..n {
        let straddles = interval_of_f64(x, n_cells) != interval_of_f64(y, n_cells);
        let gx = g_float(x, n_cells)?;
        if straddles {
            skipped_steps += 1;
        } else {
            let sep = g_float(y, n_cells)? - gx;
            per_step_logs.push((sep.abs() / delta).ln());
            dir = if sep < 0.0 { -1.0 } else { 1.0 };
        }
        x = gx;
        (y, dir) = companion(x, dir);
    }

    if per_step_logs.is_empty() {
        return Err(Error::Degenerate(
            "every step straddled an interval boundary",
        ));
    }
    let estimate = per_step_logs.iter().sum::<f64>() / per_step_logs.len() as f64;
    Ok(LyapunovReport {
        n_steps: n,
        per_step_logs,
        estimate,
        analytic,
        skipped_steps,
    })
}

/// True when the stored expansion ends in zeros (or is empty), i.e. `x0` is
/// read as a number with a finite fractional part. Only such initial
/// conditions can reach a grid point.
pub fn is_exceptional_initial(x0: &ConjugateReal) -> bool {
    x0.fraction().last().is_none_or(|&d| d == 0)
}
