//! Rounding a constant floating coloring `z 1_n` to a `{0,1}` coloring with
//! the help of a `c`-coloring oracle (`c` odd).
//!
//! One step takes a floating coloring whose values have `c`-ary length at
//! most `L` and shortens every value to length `L - 1`. Columns are grouped
//! into blocks of equal value; a block with value `t` of length exactly `L`
//! is colored by the oracle, the first `t_L` color classes move up to
//! `floor_{L-1}(t) + c^{-(L-1)}` and the rest move down to `floor_{L-1}(t)`.
//! The step error on a block is at most
//! `c^{-(L-1)} min(t_L, c - t_L) disc(oracle coloring)`, and summed over at
//! most `tau` blocks at most `(c-1)/2 c^{-(L-1)} tau herdisc(A, c)`.
//!
//! Starting from a constant coloring the number of distinct values never
//! exceeds two, and the pair is always in one of two carry states (see
//! [`carry_state`]), so `l` steps cost at most `c herdisc(A, c)` in total.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::cary::CaryValue;
use crate::disc::{coloring_disc, float_distance};
use crate::error::{Error, Result};
use crate::matrix::{format_rational, ColumnSubset, Coloring, FloatingColoring, Matrix, Rational};
use crate::oracle::Oracle;

/// Reduces an `a`-coloring to `b` colors, `b | a`, by `q(j) = p(j) mod b`.
/// The discrepancy grows by at most a factor `a / b`.
pub fn merge_classes(p: &Coloring, b: usize) -> Result<Coloring> {
    let a = p.colors();
    if b < 2 || !a.is_multiple_of(b) {
        return Err(Error::input(format!(
            "cannot merge {a} colors into {b}: {b} must be >= 2 and divide {a}"
        )));
    }
    Coloring::new(b, p.assignment().iter().map(|d| d % b).collect())
}

fn check_odd(c: u32) -> Result<()> {
    if c.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "the rounding step needs an odd number of colors, got {c}"
        )));
    }
    Ok(())
}

fn inv_power(c: u32, k: usize) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(c), k))
}

/// What happened to one block of equal-valued columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    /// Columns of the block, as a subset of the matrix being rounded.
    pub columns: ColumnSubset,
    pub value: CaryValue,
    /// False for blocks already shorter than the current level; they are
    /// copied unchanged.
    pub rounded: bool,
    /// The digit being rounded away (`t_L`), 0 for copied blocks.
    pub digit: u32,
    pub oracle_coloring: Option<Coloring>,
    pub oracle_disc: Rational,
    pub certified: bool,
    /// `d_{A|J}(p|J, q|J)`.
    pub measured: Rational,
    /// `c^{-(L-1)} min(t_L, c - t_L) disc(oracle coloring)`.
    pub sharp_bound: Rational,
}

/// One rounding step from level `L` to level `L - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub base: u32,
    pub level: usize,
    /// Number of distinct input values.
    pub tau: usize,
    /// Blocks ordered by smallest column.
    pub blocks: Vec<BlockReport>,
    /// `d_A(p, q)` over the whole matrix.
    pub measured: Rational,
    /// Sum of the block sharp bounds.
    pub sharp_bound: Rational,
    /// `(c-1)/2 c^{-(L-1)} tau`; multiply by a hereditary-discrepancy
    /// reference to get the relaxed bound.
    pub relaxed_factor: Rational,
}

impl StepReport {
    pub fn relaxed_bound(&self, reference: &Rational) -> Rational {
        &self.relaxed_factor * reference
    }

    pub fn max_oracle_disc(&self) -> Rational {
        self.blocks
            .iter()
            .map(|b| b.oracle_disc.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn certified(&self) -> bool {
        self.blocks.iter().all(|b| !b.rounded || b.certified)
    }
}

/// Rounds the constant value `t` (length `L >= 1`) on every column of `a`.
fn round_block(a: &Matrix, t: &CaryValue, oracle: &Oracle) -> Result<(Vec<CaryValue>, BlockReport)> {
    let c = t.base();
    let level = t.len();
    let n = a.cols();
    let digit = t.last_digit();
    let low = t.truncate(level - 1);
    let high = low.add_power(level - 1)?.value;
    let answer = oracle.color_matrix(a, c as usize)?;
    let values: Vec<CaryValue> = (0..n)
        .map(|j| {
            if (answer.coloring.color_of(j) as u32) < digit {
                high.clone()
            } else {
                low.clone()
            }
        })
        .collect();
    let before = FloatingColoring::constant(n, &t.value())?;
    let after = FloatingColoring::new(values.iter().map(CaryValue::value).collect())?;
    let measured = float_distance(a, &before, &after)?;
    let weight = Rational::from_integer(BigInt::from(digit.min(c - digit)));
    let sharp_bound = inv_power(c, level - 1) * weight * &answer.disc;
    let report = BlockReport {
        columns: ColumnSubset::all(n),
        value: t.clone(),
        rounded: true,
        digit,
        oracle_coloring: Some(answer.coloring),
        oracle_disc: answer.disc,
        certified: answer.certified,
        measured,
        sharp_bound,
    };
    Ok((values, report))
}

fn relaxed_factor(c: u32, level: usize, tau: usize) -> Rational {
    Rational::new(BigInt::from((c - 1) as usize * tau), BigInt::from(2)) * inv_power(c, level - 1)
}

/// One step on a constant floating coloring `t 1_n` with `|t|_c = L >= 1`.
pub fn round_constant_step(
    a: &Matrix,
    t: &CaryValue,
    oracle: &Oracle,
) -> Result<(FloatingColoring, StepReport)> {
    check_odd(t.base())?;
    if t.len() == 0 {
        return Err(Error::input(format!(
            "{t} has length 0; there is nothing to round"
        )));
    }
    if a.cols() == 0 {
        return Err(Error::input("cannot round an empty column set"));
    }
    let p = FloatingColoring::constant(a.cols(), &t.value())?;
    round_step(a, &p, t.len(), t.base(), oracle)
}

/// One step on a floating coloring with values in `M_{c,L}`, `L >= 1`.
pub fn round_step(
    a: &Matrix,
    p: &FloatingColoring,
    level: usize,
    c: u32,
    oracle: &Oracle,
) -> Result<(FloatingColoring, StepReport)> {
    let values = p
        .values()
        .iter()
        .map(|v| match CaryValue::from_rational(v, c)? {
            Some(x) if x.len() <= level => Ok(x),
            _ => Err(Error::input(format!("value {v} is not in M_({c},{level})"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let (next, report) = round_values(a, &values, level, c, oracle)?;
    let q = FloatingColoring::new(next.iter().map(CaryValue::value).collect())?;
    Ok((q, report))
}

fn round_values(
    a: &Matrix,
    values: &[CaryValue],
    level: usize,
    c: u32,
    oracle: &Oracle,
) -> Result<(Vec<CaryValue>, StepReport)> {
    check_odd(c)?;
    if level == 0 {
        return Err(Error::input("level 0 values are already {0,1}"));
    }
    if values.len() != a.cols() {
        return Err(Error::Dimension {
            expected: a.cols(),
            got: values.len(),
        });
    }
    // Blocks in order of their smallest column.
    let mut blocks: Vec<(CaryValue, Vec<usize>)> = Vec::new();
    for (j, v) in values.iter().enumerate() {
        match blocks.iter_mut().find(|(t, _)| t == v) {
            Some((_, cols)) => cols.push(j),
            None => blocks.push((v.clone(), vec![j])),
        }
    }
    let tau = blocks.len();
    let mut next = values.to_vec();
    let mut reports = Vec::with_capacity(tau);
    for (t, cols) in blocks {
        let subset = ColumnSubset::new(a.cols(), cols)?;
        if t.len() < level {
            reports.push(BlockReport {
                columns: subset,
                value: t,
                rounded: false,
                digit: 0,
                oracle_coloring: None,
                oracle_disc: Rational::zero(),
                certified: true,
                measured: Rational::zero(),
                sharp_bound: Rational::zero(),
            });
            continue;
        }
        let sub = a.restrict(&subset)?;
        let (rounded, mut report) = round_block(&sub, &t, oracle)?;
        for (&j, v) in subset.members().iter().zip(rounded) {
            next[j] = v;
        }
        report.columns = subset;
        reports.push(report);
    }
    let before = FloatingColoring::new(values.iter().map(CaryValue::value).collect())?;
    let after = FloatingColoring::new(next.iter().map(CaryValue::value).collect())?;
    let measured = float_distance(a, &before, &after)?;
    let sharp_bound = reports.iter().map(|b| &b.sharp_bound).sum();
    Ok((
        next,
        StepReport {
            base: c,
            level,
            tau,
            blocks: reports,
            measured,
            sharp_bound,
            relaxed_factor: relaxed_factor(c, level, tau),
        },
    ))
}

/// `floor_k(x)` with `floor_k = 0` for negative `k`.
fn floor_at(x: &CaryValue, k: isize) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        x.truncate(k as usize).value()
    }
}

/// Classification of the distinct values present at level `L`.
///
/// * state 1: at most two values, all of length `<= L`, agreeing after
///   truncation to `L - 1` digits;
/// * state 2: two values `s < s + c^-L`, the smaller of length exactly `L`
///   ending in `o >= 1` digits equal to `c - 1`, the larger of length
///   `L - o`, both agreeing after truncation to `L - o - 1` digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarryState {
    pub state_one: bool,
    /// `Some(o)` when the state-2 predicate holds with carry run `o`.
    pub state_two: Option<usize>,
}

impl CarryState {
    /// Exactly one predicate holds.
    pub fn is_valid(&self) -> bool {
        self.state_one != self.state_two.is_some()
    }

    /// 1 or 2, or `None` when the values are in neither (or both) states.
    pub fn state(&self) -> Option<u8> {
        match (self.state_one, self.state_two) {
            (true, None) => Some(1),
            (false, Some(_)) => Some(2),
            _ => None,
        }
    }

    pub fn carry_run(&self) -> Option<usize> {
        if self.state() == Some(2) {
            self.state_two
        } else {
            None
        }
    }
}

/// Evaluates both carry-state predicates on a set of distinct values.
pub fn carry_state(values: &[CaryValue], level: usize) -> CarryState {
    let mut vals: Vec<&CaryValue> = values.iter().collect();
    vals.sort();
    vals.dedup();
    let lengths_ok = vals.iter().all(|v| v.len() <= level);
    let lvl = level as isize;
    let state_one = lengths_ok
        && match vals.as_slice() {
            [] | [_] => true,
            [x, y] => floor_at(x, lvl - 1) == floor_at(y, lvl - 1),
            _ => false,
        };
    let state_two = match vals.as_slice() {
        [small, large] if lengths_ok && level >= 1 => {
            let c = small.base();
            let gap = large.value() - small.value();
            let o = (1..=small.len())
                .rev()
                .take_while(|&k| small.digit(k) == c - 1)
                .count();
            let holds = gap == inv_power(c, level)
                && small.len() == level
                && o >= 1
                && o <= level
                && large.len() == level - o
                && floor_at(large, lvl - o as isize - 1) == floor_at(small, lvl - o as isize - 1);
            holds.then_some(o)
        }
        _ => None,
    };
    CarryState {
        state_one,
        state_two,
    }
}

/// One iteration of [`transfer_round`]: the values before the step and the
/// step that followed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    pub i: usize,
    pub level: usize,
    /// Distinct values of the current coloring, increasing.
    pub values: Vec<CaryValue>,
    pub tau: usize,
    pub state: CarryState,
    pub step: StepReport,
    /// `relaxed_factor * reference`.
    pub relaxed_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingTrace {
    pub base: u32,
    pub length: usize,
    pub z: CaryValue,
    pub iterations: Vec<IterationRecord>,
    /// Distinct values of the final coloring and their state.
    pub final_values: Vec<CaryValue>,
    pub final_state: CarryState,
    pub final_coloring: Vec<bool>,
    /// `d_A(z 1_n, q)`.
    pub total_error: Rational,
    /// The `herdisc(A, c)` stand-in used for relaxed bounds: the supplied
    /// value, or the largest oracle discrepancy seen during the run.
    pub reference: Rational,
    /// `c * reference`.
    pub guarantee: Rational,
    /// True when every oracle answer was certified optimal.
    pub certified: bool,
}

impl RoundingTrace {
    pub fn to_json(&self) -> Value {
        let iterations: Vec<Value> = self
            .iterations
            .iter()
            .map(|it| {
                json!({
                    "i": it.i,
                    "level": it.level,
                    "values": it.values.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "state": it.state.state(),
                    "o": it.state.carry_run(),
                    "tau": it.tau,
                    "blocks": it.step.blocks.iter().map(|b| json!({
                        "columns": b.columns.to_external(),
                        "value": b.value.to_string(),
                        "rounded": b.rounded,
                        "oracle_coloring": b.oracle_coloring.as_ref().map(Coloring::to_external),
                        "oracle_disc": format_rational(&b.oracle_disc),
                        "step_error": format_rational(&b.measured),
                        "sharp_bound": format_rational(&b.sharp_bound),
                    })).collect::<Vec<_>>(),
                    "step_error": format_rational(&it.step.measured),
                    "sharp_bound": format_rational(&it.step.sharp_bound),
                    "relaxed_bound": format_rational(&it.relaxed_bound),
                })
            })
            .collect();
        json!({
            "z": self.z.to_string(),
            "colors": self.base,
            "length": self.length,
            "iterations": iterations,
            "final_state": self.final_state.state(),
            "final_coloring": self.final_coloring.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
            "total_error": format_rational(&self.total_error),
            "reference": format_rational(&self.reference),
            "guarantee": format_rational(&self.guarantee),
            "certified": self.certified,
        })
    }
}

fn distinct(values: &[CaryValue]) -> Vec<CaryValue> {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Rounds `z 1_n` to a `{0,1}` coloring in `|z|_c` steps (`c = z.base()`,
/// odd). `reference` should be `herdisc(A, c)` when known.
pub fn transfer_round(
    a: &Matrix,
    z: &CaryValue,
    oracle: &Oracle,
    reference: Option<&Rational>,
) -> Result<(Vec<bool>, RoundingTrace)> {
    let c = z.base();
    check_odd(c)?;
    let length = z.len();
    let mut values = vec![z.clone(); a.cols()];
    let mut pending = Vec::with_capacity(length);
    for i in 0..length {
        let level = length - i;
        let present = distinct(&values);
        let state = carry_state(&present, level);
        let (next, step) = round_values(a, &values, level, c, oracle)?;
        pending.push((i, level, present, state, step));
        values = next;
    }
    let reference = match reference {
        Some(r) => r.clone(),
        None => pending
            .iter()
            .map(|p| p.4.max_oracle_disc())
            .max()
            .unwrap_or_else(Rational::zero),
    };
    let certified = pending.iter().all(|p| p.4.certified());
    let iterations = pending
        .into_iter()
        .map(|(i, level, present, state, step)| IterationRecord {
            i,
            level,
            tau: present.len(),
            values: present,
            state,
            relaxed_bound: step.relaxed_bound(&reference),
            step,
        })
        .collect();
    let final_values = distinct(&values);
    let final_state = carry_state(&final_values, 0);
    let coloring: Vec<bool> = values.iter().map(|v| !v.is_zero()).collect();
    let start = FloatingColoring::constant(a.cols(), &z.value())?;
    let total_error = float_distance(a, &start, &FloatingColoring::from_bits(&coloring))?;
    let guarantee = Rational::from_integer(BigInt::from(c)) * &reference;
    Ok((
        coloring.clone(),
        RoundingTrace {
            base: c,
            length,
            z: z.clone(),
            iterations,
            final_values,
            final_state,
            final_coloring: coloring,
            total_error,
            reference,
            guarantee,
            certified,
        },
    ))
}

/// Result of [`transfer_even`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenTransfer {
    pub coloring: Vec<bool>,
    pub oracle_coloring: Coloring,
    pub oracle_disc: Rational,
    pub merged: Coloring,
    /// `disc(A, merged, 2)`, equal to `d_A(1/2 1_n, q)`.
    pub merged_disc: Rational,
    /// `(c/2) * oracle_disc`.
    pub bound: Rational,
    pub certified: bool,
}

/// Even `c`: only `z = 1/2` has a constructive path, by merging the oracle's
/// `c` classes down to two. Other `z` are refused; the corresponding bound
/// is checked numerically by the verification suite instead.
pub fn transfer_even(a: &Matrix, z: &Rational, c: usize, oracle: &Oracle) -> Result<EvenTransfer> {
    if c < 2 || !c.is_multiple_of(2) {
        return Err(Error::input(format!("transfer_even needs an even c >= 2, got {c}")));
    }
    if *z != Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::Unsupported(format!(
            "no constructive rounding for even c = {c} at z = {z}; only z = 1/2 is supported \
             (use `verify` for the numerical check of the general bound)"
        )));
    }
    let answer = oracle.color(a, &ColumnSubset::all(a.cols()), c)?;
    let merged = merge_classes(&answer.coloring, 2)?;
    let merged_disc = coloring_disc(a, &merged)?.value;
    let coloring = merged.assignment().iter().map(|&d| d == 0).collect();
    let bound = Rational::from_integer(BigInt::from(c / 2)) * &answer.disc;
    Ok(EvenTransfer {
        coloring,
        oracle_coloring: answer.coloring,
        oracle_disc: answer.disc,
        merged,
        merged_disc,
        bound,
        certified: answer.certified,
    })
}
