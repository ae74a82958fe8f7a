//! Chaotic iterations on a finite set of Boolean cells.
//!
//! A system has `N` cells, each carrying one bit. A *strategy* is a sequence
//! of cell indices; at every iteration only the cell named by the current
//! strategy term is updated by the update function, all other cells keep
//! their value. Cells are indexed from `0` to `N - 1`.
//!
//! The phase space is the product of strategies and states, and one
//! iteration is the map
//!
//! ```text
//! G_f(S, E) = (shift(S), F_f(initial(S), E))
//! ```
//!
//! where `shift` drops the first strategy term and `initial` reads it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The Boolean state of all cells, `E_0` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolState {
    bits: Vec<bool>,
}

impl BoolState {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidCellCount { got: 0, min: 1 });
        }
        Ok(Self { bits })
    }

    pub fn zeros(n_cells: usize) -> Result<Self> {
        Self::new(vec![false; n_cells])
    }

    pub fn ones(n_cells: usize) -> Result<Self> {
        Self::new(vec![true; n_cells])
    }

    /// State whose bits are the `n_cells` low bits of `word`, most significant first.
    pub fn from_word(word: u64, n_cells: usize) -> Result<Self> {
        if n_cells > 64 {
            return Err(Error::Domain(format!(
                "{n_cells} cells do not fit in a word"
            )));
        }
        Self::new(
            (0..n_cells)
                .map(|k| (word >> (n_cells - 1 - k)) & 1 == 1)
                .collect(),
        )
    }

    pub fn n_cells(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, cell: usize) -> Option<bool> {
        self.bits.get(cell).copied()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Flips one cell in place.
    pub fn toggle(&mut self, cell: usize) -> Result<()> {
        let n_cells = self.n_cells();
        let bit = self
            .bits
            .get_mut(cell)
            .ok_or(Error::CellOutOfRange { cell, n_cells })?;
        *bit = !*bit;
        Ok(())
    }

    pub fn xor(&self, other: &BoolState) -> Result<BoolState> {
        check_cells("xor", self.n_cells(), other.n_cells())?;
        Ok(BoolState {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Number of cells set to `1`.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for BoolState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BoolState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    i,
                    format!("expected '0' or '1', found {other:?}"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        BoolState::new(bits)
    }
}

/// A finite truncation of a strategy: the cells to update, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    terms: Vec<usize>,
    n_cells: usize,
}

impl Strategy {
    pub fn new(terms: Vec<usize>, n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidCellCount { got: 0, min: 1 });
        }
        if let Some(&cell) = terms.iter().find(|&&t| t >= n_cells) {
            return Err(Error::CellOutOfRange { cell, n_cells });
        }
        Ok(Self { terms, n_cells })
    }

    pub fn empty(n_cells: usize) -> Result<Self> {
        Self::new(Vec::new(), n_cells)
    }

    /// Parses comma separated decimal indices; an empty string is the empty strategy.
    pub fn parse(s: &str, n_cells: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::empty(n_cells);
        }
        let mut terms = Vec::new();
        let mut offset = 0;
        for field in s.split(',') {
            let t = field.trim();
            let term = t
                .parse::<usize>()
                .map_err(|e| Error::parse(offset, format!("bad cell index {t:?}: {e}")))?;
            terms.push(term);
            offset += field.len() + 1;
        }
        Self::new(terms, n_cells)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first term, if any.
    pub fn initial(&self) -> Option<usize> {
        self.terms.first().copied()
    }

    /// The strategy without its first term.
    pub fn shift(&self) -> Result<Strategy> {
        if self.terms.is_empty() {
            return Err(Error::ExhaustedStrategy);
        }
        Ok(Strategy {
            terms: self.terms[1..].to_vec(),
            n_cells: self.n_cells,
        })
    }

    /// The first `len` terms.
    pub fn prefix(&self, len: usize) -> Result<Strategy> {
        if len > self.terms.len() {
            return Err(Error::ExhaustedStrategy);
        }
        Ok(Strategy {
            terms: self.terms[..len].to_vec(),
            n_cells: self.n_cells,
        })
    }

    /// `mask[i]` is set iff cell `i` occurs an odd number of times.
    pub fn parity_mask(&self) -> BoolState {
        let mut bits = vec![false; self.n_cells];
        for &t in &self.terms {
            bits[t] = !bits[t];
        }
        BoolState { bits }
    }

    fn pop_front(&mut self) -> Option<usize> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A point `(S, E)` of the phase space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SystemPoint {
    strategy: Strategy,
    state: BoolState,
}

impl SystemPoint {
    pub fn new(strategy: Strategy, state: BoolState) -> Result<Self> {
        check_cells("system point", strategy.n_cells(), state.n_cells())?;
        Ok(Self { strategy, state })
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn state(&self) -> &BoolState {
        &self.state
    }

    pub fn n_cells(&self) -> usize {
        self.state.n_cells()
    }

    pub fn into_parts(self) -> (Strategy, BoolState) {
        (self.strategy, self.state)
    }
}

/// A map `B^N -> B^N` driving the iterations.
pub trait UpdateFunction {
    fn apply(&self, state: &BoolState) -> BoolState;

    /// Component `cell` of `apply(state)`.
    fn component(&self, state: &BoolState, cell: usize) -> bool {
        self.apply(state).bits[cell]
    }
}

/// The vectorial negation: every bit is flipped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Negation;

impl UpdateFunction for Negation {
    fn apply(&self, state: &BoolState) -> BoolState {
        negate_all(state)
    }

    fn component(&self, state: &BoolState, cell: usize) -> bool {
        !state.bits[cell]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Identity;

impl UpdateFunction for Identity {
    fn apply(&self, state: &BoolState) -> BoolState {
        state.clone()
    }

    fn component(&self, state: &BoolState, cell: usize) -> bool {
        state.bits[cell]
    }
}

impl<F> UpdateFunction for F
where
    F: Fn(&BoolState) -> BoolState,
{
    fn apply(&self, state: &BoolState) -> BoolState {
        let out = self(state);
        assert_eq!(
            out.n_cells(),
            state.n_cells(),
            "update function changed the number of cells"
        );
        out
    }
}

pub fn negate_all(state: &BoolState) -> BoolState {
    BoolState {
        bits: state.bits.iter().map(|b| !b).collect(),
    }
}

/// `F_f(cell, E)`: only `cell` takes its value from `f(E)`.
pub fn apply_ff<F: UpdateFunction + ?Sized>(
    cell: usize,
    state: &BoolState,
    f: &F,
) -> Result<BoolState> {
    let n_cells = state.n_cells();
    if cell >= n_cells {
        return Err(Error::CellOutOfRange { cell, n_cells });
    }
    let mut out = state.clone();
    out.bits[cell] = f.component(state, cell);
    Ok(out)
}

/// One application of `G_f`.
pub fn step<F: UpdateFunction + ?Sized>(point: &SystemPoint, f: &F) -> Result<SystemPoint> {
    let cell = point.strategy.initial().ok_or(Error::ExhaustedStrategy)?;
    Ok(SystemPoint {
        strategy: point.strategy.shift()?,
        state: apply_ff(cell, &point.state, f)?,
    })
}

/// The states `x^0, ..., x^n` visited by `n` iterations.
pub fn orbit<F: UpdateFunction + ?Sized>(
    point: &SystemPoint,
    f: &F,
    n: usize,
) -> Result<Vec<BoolState>> {
    if n > point.strategy.len() {
        return Err(Error::ExhaustedStrategy);
    }
    let mut strategy = point.strategy.prefix(n)?;
    let mut state = point.state.clone();
    let mut states = Vec::with_capacity(n + 1);
    states.push(state.clone());
    while let Some(cell) = strategy.pop_front() {
        state = apply_ff(cell, &state, f)?;
        states.push(state.clone());
    }
    Ok(states)
}

/// Closed form of a full negation orbit: `state XOR parity_mask(strategy)`.
pub fn mix(state: &BoolState, strategy: &Strategy) -> Result<BoolState> {
    state.xor(&strategy.parity_mask())
}

pub(crate) fn check_cells(what: &'static str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { what, left, right });
    }
    Ok(())
}
