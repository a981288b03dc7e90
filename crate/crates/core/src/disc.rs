//! Exact discrepancy quantities.
//!
//! * [`coloring_disc`]: `max_{d,i} |sum_{j in p^-1(d)} a_ij - R_i / c|`
//! * [`optimal_disc`]: minimum of the above over all `c`-colorings
//! * [`hereditary_disc`]: maximum of [`optimal_disc`] over column subsets
//! * [`weighted_disc`]: `min_q max_i |z R_i - (Aq)_i|` over `q in {0,1}^n`
//! * [`weighted_disc_sup`]: maximum of [`weighted_disc`] over `z in [0,1]`
//! * [`hereditary_weighted_disc`]: maximum of the supremum over column subsets
//!
//! Hereditary quantities range over column subsets only: deleting rows can
//! only shrink a maximum over rows.
//!
//! All searches are exhaustive and exact. Witnesses are reproducible:
//! colorings are the lexicographically first optimum, column subsets are the
//! first attaining subset in increasing bitmask order, and weighted
//! suprema report the smallest maximizing `z`.

use std::cmp::Ordering;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::matrix::{
    ColumnSubset, Coloring, DiscrepancyResult, FloatingColoring, Matrix, Rational, Witness,
};

/// Enumeration caps. Exceeding a cap is an error, never a silent fallback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Cap on `c^n` (or `2^n`) for a single minimization.
    pub colorings: u128,
    /// Cap on the total work of a hereditary quantity, `(c+1)^n` (or `3^n`).
    pub hereditary: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            colorings: 10_000_000,
            hereditary: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            colorings: u128::MAX,
            hereditary: u128::MAX,
        }
    }

    fn charge(cap: u128, base: u128, n: usize) -> Result<u128> {
        let needed = u32::try_from(n)
            .ok()
            .and_then(|e| base.checked_pow(e))
            .unwrap_or(u128::MAX);
        if needed > cap {
            return Err(Error::Budget { needed, cap });
        }
        Ok(needed)
    }
}

/// A weighted-discrepancy value with the rounding that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedWitness {
    pub z: Rational,
    pub q: FloatingColoring,
    pub value: Rational,
    pub row: usize,
    pub budget_used: u128,
}

fn check_colors(c: usize) -> Result<()> {
    if c < 2 {
        return Err(Error::input(format!("need at least 2 colors, got {c}")));
    }
    Ok(())
}

fn check_unit(z: &Rational) -> Result<()> {
    if *z < Rational::zero() || *z > Rational::one() {
        return Err(Error::input(format!("z = {z} is outside [0,1]")));
    }
    Ok(())
}

fn scaled(num: i128, den: &BigInt) -> Rational {
    Rational::new(BigInt::from(num), den.clone())
}

/// Per-row, per-color deviations `R_i / c - sum_{j in J_d} a_ij`.
pub fn class_deviations(a: &Matrix, p: &Coloring) -> Result<Vec<Vec<Rational>>> {
    if p.len() != a.cols() {
        return Err(Error::Dimension {
            expected: a.cols(),
            got: p.len(),
        });
    }
    let c = p.colors();
    let cr = Rational::from_integer(BigInt::from(c));
    Ok((0..a.rows())
        .map(|i| {
            let mut class_sums = vec![Rational::zero(); c];
            for (j, v) in a.row(i).iter().enumerate() {
                class_sums[p.color_of(j)] += v;
            }
            let share = a.row_sum(i) / &cr;
            class_sums.into_iter().map(|s| &share - s).collect()
        })
        .collect())
}

/// Discrepancy of a fixed coloring, evaluated directly in rationals.
pub fn coloring_disc(a: &Matrix, p: &Coloring) -> Result<DiscrepancyResult> {
    let devs = class_deviations(a, p)?;
    let mut value = Rational::zero();
    let mut at = (0, 0);
    let mut first = true;
    for (i, row) in devs.iter().enumerate() {
        for (d, dev) in row.iter().enumerate() {
            let v = dev.abs();
            if first || v > value {
                value = v;
                at = (i, d);
                first = false;
            }
        }
    }
    Ok(DiscrepancyResult {
        value,
        witness: Witness::Coloring(p.clone()),
        witness_row: Some(at.0),
        witness_color: Some(at.1),
        witness_subset: None,
        budget_used: 1,
    })
}

fn kernel_result(k: &Kernel, c: usize, search: crate::kernel::ColorSearch, used: u128) -> Result<DiscrepancyResult> {
    let den = k.scale() * BigInt::from(c);
    Ok(DiscrepancyResult {
        value: scaled(search.value, &den),
        witness: Witness::Coloring(Coloring::new(c, search.assignment)?),
        witness_row: Some(search.row),
        witness_color: Some(search.color),
        witness_subset: None,
        budget_used: used,
    })
}

/// `disc(A, c)`: exact minimum over all `c`-colorings.
pub fn optimal_disc(a: &Matrix, c: usize, budget: &Budget) -> Result<DiscrepancyResult> {
    check_colors(c)?;
    let used = Budget::charge(budget.colorings, c as u128, a.cols())?;
    let k = Kernel::new(a)?;
    let search = k.optimal(c, None);
    kernel_result(&k, c, search, used)
}

/// `herdisc(A, c)`: exact maximum of `disc(A|J, c)` over column subsets `J`.
pub fn hereditary_disc(a: &Matrix, c: usize, budget: &Budget) -> Result<DiscrepancyResult> {
    check_colors(c)?;
    let n = a.cols();
    let used = Budget::charge(budget.hereditary, c as u128 + 1, n)?;
    if n >= 64 {
        return Err(Error::Budget {
            needed: u128::MAX,
            cap: budget.hereditary,
        });
    }
    let k = Kernel::new(a)?;
    // Best scaled value found so far. Subsets whose search meets a coloring
    // strictly below it cannot raise the maximum and are abandoned; subsets
    // tying it are always searched to completion, so the reduction below is
    // independent of scheduling.
    let shared = Mutex::new(-1i128);
    let best = (0..1u64 << n)
        .into_par_iter()
        .filter_map(|mask| {
            let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            let sub = k.select(&cols);
            let floor = *shared.lock().expect("poisoned");
            let search = sub.optimal(c, (floor >= 0).then_some(floor));
            if search.aborted {
                return None;
            }
            let mut g = shared.lock().expect("poisoned");
            if search.value > *g {
                *g = search.value;
            }
            Some((search.value, mask, search))
        })
        .reduce_with(|x, y| match x.0.cmp(&y.0) {
            Ordering::Greater => x,
            Ordering::Less => y,
            Ordering::Equal => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        })
        .expect("the empty subset is never abandoned");
    let (_, mask, search) = best;
    let mut result = kernel_result(&k, c, search, used)?;
    result.witness_subset = Some(ColumnSubset::from_mask(n, mask));
    Ok(result)
}

/// `z` as an `i128` fraction `(num, den)`, `den > 0`.
fn small_fraction(z: &Rational) -> Result<(i128, i128)> {
    let num = z.numer().to_i128();
    let den = z.denom().to_i128();
    match (num, den) {
        (Some(n), Some(d)) if n.unsigned_abs() < 1 << 60 && d < 1 << 60 => Ok((n, d)),
        _ => Err(Error::Unsupported(format!("z = {z} is too large for the kernel"))),
    }
}

fn weighted_from_kernel(k: &Kernel, z: &Rational, used: u128) -> Result<WeightedWitness> {
    let (zn, zd) = small_fraction(z)?;
    let (v, q) = k.weighted(zn, zd);
    let (_, row) = k.weighted_value(&q, zn, zd);
    Ok(WeightedWitness {
        z: z.clone(),
        q: FloatingColoring::from_bits(&q),
        value: scaled(v, &(k.scale() * BigInt::from(zd))),
        row,
        budget_used: used,
    })
}

/// `wdisc(A, z)`: best `{0,1}` rounding of the constant coloring `z 1_n`.
pub fn weighted_disc(a: &Matrix, z: &Rational, budget: &Budget) -> Result<WeightedWitness> {
    check_unit(z)?;
    let used = Budget::charge(budget.colorings, 2, a.cols())?;
    let k = Kernel::new(a)?;
    weighted_from_kernel(&k, z, used)
}

/// Non-negative fraction compared by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
        Self {
            num: num / g,
            den: den / g,
        }
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Every `z in [0,1]` where two of the lines `+-(z R_i - v)`, `v` ranging
/// over the row values of `Aq`, cross; plus both endpoints. The lower
/// envelope `z -> wdisc(A, z)` is linear between consecutive candidates.
fn sup_candidates(k: &Kernel, images: &[Vec<i128>]) -> Vec<Frac> {
    let mut lines: Vec<(i128, i128)> = Vec::new();
    for (i, &r) in k.row_sums().iter().enumerate() {
        lines.extend(images.iter().map(|w| (r, w[i])));
    }
    lines.sort_unstable();
    lines.dedup();
    let mut zs = vec![Frac::new(0, 1), Frac::new(1, 1)];
    for (x, &(ra, va)) in lines.iter().enumerate() {
        for &(rb, vb) in &lines[x..] {
            for sigma in [1i128, -1] {
                let den = ra - sigma * rb;
                if den == 0 {
                    continue;
                }
                let z = Frac::new(va - sigma * vb, den);
                if z.num >= 0 && z.num <= z.den {
                    zs.push(z);
                }
            }
        }
    }
    zs.sort_unstable();
    zs.dedup();
    zs
}

/// `wdisc(A, z)` scaled by `z.den * L`, from the precomputed images.
fn envelope_at(k: &Kernel, images: &[Vec<i128>], z: Frac, cutoff: Option<Frac>) -> i128 {
    let mut best = i128::MAX;
    for w in images {
        let mut worst = 0i128;
        for (i, &r) in k.row_sums().iter().enumerate() {
            worst = worst.max((z.den * w[i] - z.num * r).abs());
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
        // The envelope is already at or below the running maximum.
        if let Some(c) = cutoff {
            if Frac::new(best, z.den) < c {
                break;
            }
        }
    }
    best
}

/// Maximizing `(value, z)` of the envelope, value scaled by `L`. Ties go to
/// the smallest `z`.
fn sup_kernel(k: &Kernel) -> (Frac, Frac) {
    if k.is_zero() {
        return (Frac::new(0, 1), Frac::new(0, 1));
    }
    let images = k.images();
    let mut best: Option<(Frac, Frac)> = None;
    for z in sup_candidates(k, &images) {
        let v = envelope_at(k, &images, z, best.map(|b| b.0));
        let val = Frac::new(v, z.den);
        if best.is_none_or(|b| val > b.0) {
            best = Some((val, z));
        }
    }
    best.expect("0 and 1 are always candidates")
}

/// `wdisc(A, 2) = max_z wdisc(A, z)` by exact breakpoint enumeration.
pub fn weighted_disc_sup(a: &Matrix, budget: &Budget) -> Result<WeightedWitness> {
    let used = Budget::charge(budget.colorings, 2, a.cols())?;
    let k = Kernel::new(a)?;
    let (_, z) = sup_kernel(&k);
    let zr = Rational::new(BigInt::from(z.num), BigInt::from(z.den));
    weighted_from_kernel(&k, &zr, used)
}

/// `herwdisc(A, 2)`: maximum of `wdisc(A|J, 2)` over column subsets `J`.
pub fn hereditary_weighted_disc(
    a: &Matrix,
    budget: &Budget,
) -> Result<(WeightedWitness, ColumnSubset)> {
    let n = a.cols();
    let used = Budget::charge(budget.hereditary, 3, n)?;
    if n >= 64 {
        return Err(Error::Budget {
            needed: u128::MAX,
            cap: budget.hereditary,
        });
    }
    let k = Kernel::new(a)?;
    let (val, mask, z) = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
            let (v, z) = sup_kernel(&k.select(&cols));
            (v, mask, z)
        })
        .reduce_with(|x, y| match x.0.cmp(&y.0) {
            Ordering::Greater => x,
            Ordering::Less => y,
            Ordering::Equal => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        })
        .expect("at least the empty subset");
    let subset = ColumnSubset::from_mask(n, mask);
    let sub = k.select(subset.members());
    let zr = Rational::new(BigInt::from(z.num), BigInt::from(z.den));
    let witness = weighted_from_kernel(&sub, &zr, used)?;
    debug_assert_eq!(
        witness.value,
        Rational::new(BigInt::from(val.num), k.scale() * BigInt::from(val.den))
    );
    Ok((witness, subset))
}

/// `d_A(p, q) = max_i |sum_j a_ij (p(j) - q(j))|`.
pub fn float_distance(a: &Matrix, p: &FloatingColoring, q: &FloatingColoring) -> Result<Rational> {
    for x in [p, q] {
        if x.len() != a.cols() {
            return Err(Error::Dimension {
                expected: a.cols(),
                got: x.len(),
            });
        }
    }
    Ok((0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .zip(p.values().iter().zip(q.values()))
                .map(|(aij, (pj, qj))| aij * (pj - qj))
                .sum::<Rational>()
                .abs()
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Re-evaluates a weighted witness from scratch.
pub fn weighted_witness_value(a: &Matrix, w: &WeightedWitness) -> Result<Rational> {
    let p = FloatingColoring::constant(a.cols(), &w.z)?;
    float_distance(a, &p, &w.q)
}
