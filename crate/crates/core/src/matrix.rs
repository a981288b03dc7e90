//! Shared domain types: rational matrices, colorings, floating colorings and
//! column subsets.
//!
//! Columns and colors are 0-based internally. Everything that leaves the
//! crate as a certificate (JSON, CLI output) uses 1-based indices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(v))
}

/// Renders a rational as `"p/q"`, or `"p"` when it is an integer.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Dense `m x n` matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    m: usize,
    n: usize,
    entries: Vec<Rational>,
    row_sums: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Rational>>, n: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("a matrix needs at least one row"));
        }
        let m = rows.len();
        let mut entries = Vec::with_capacity(m * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self::from_flat(m, n, entries))
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            n,
        )
    }

    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::input("a matrix needs at least one row"));
        }
        Ok(Self::from_flat(m, n, vec![Rational::zero(); m * n]))
    }

    fn from_flat(m: usize, n: usize, entries: Vec<Rational>) -> Self {
        let row_sums = (0..m)
            .map(|i| entries[i * n..(i + 1) * n].iter().sum())
            .collect();
        Self {
            m,
            n,
            entries,
            row_sums,
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> &Rational {
        &self.row_sums[i]
    }

    pub fn row_sums(&self) -> &[Rational] {
        &self.row_sums
    }

    /// Recomputes every row sum and compares it with the cached value.
    pub fn row_sums_consistent(&self) -> bool {
        (0..self.m).all(|i| self.row(i).iter().sum::<Rational>() == self.row_sums[i])
    }

    /// True when every entry is 0 or 1 (a hypergraph incidence matrix).
    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero() || e.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// Column submatrix `A|J`; column order follows `subset`.
    pub fn restrict(&self, subset: &ColumnSubset) -> Result<Matrix> {
        if subset.parent_n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: subset.parent_n,
            });
        }
        let k = subset.len();
        let mut entries = Vec::with_capacity(self.m * k);
        for i in 0..self.m {
            let row = self.row(i);
            entries.extend(subset.members.iter().map(|&j| row[j].clone()));
        }
        Ok(Self::from_flat(self.m, k, entries))
    }

    /// `sum_j a_ij x(j)` for row `i`.
    pub fn evaluate_row(&self, x: &FloatingColoring, i: usize) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        if i >= self.m {
            return Err(Error::input(format!(
                "row {} out of range 1..={}",
                i + 1,
                self.m
            )));
        }
        Ok(self
            .row(i)
            .iter()
            .zip(x.values())
            .map(|(a, v)| a * v)
            .sum())
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            let cells: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Total map from columns to `c` colors (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: usize,
    assignment: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: usize, assignment: Vec<usize>) -> Result<Self> {
        if colors < 2 {
            return Err(Error::input(format!("need at least 2 colors, got {colors}")));
        }
        if let Some(&bad) = assignment.iter().find(|&&d| d >= colors) {
            return Err(Error::input(format!(
                "color {} out of range 1..={colors}",
                bad + 1
            )));
        }
        Ok(Self { colors, assignment })
    }

    /// Builds a coloring from 1-based color labels.
    pub fn from_external(colors: usize, labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::input("color labels are 1-based"));
        }
        Self::new(colors, labels.iter().map(|&d| d - 1).collect())
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn color_of(&self, j: usize) -> usize {
        self.assignment[j]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn to_external(&self) -> Vec<usize> {
        self.assignment.iter().map(|d| d + 1).collect()
    }

    /// Color classes `J_1, ..., J_c` as sorted column lists.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.colors];
        for (j, &d) in self.assignment.iter().enumerate() {
            classes[d].push(j);
        }
        classes
    }
}

/// Map from columns to rationals in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FloatingColoring {
    values: Vec<Rational>,
}

impl FloatingColoring {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(v) = values.iter().find(|v| **v < zero || **v > one) {
            return Err(Error::input(format!(
                "floating coloring value {v} outside [0,1]"
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, z: &Rational) -> Result<Self> {
        Self::new(vec![z.clone(); n])
    }

    /// Lifts a {0,1} vector.
    pub fn from_bits(bits: &[bool]) -> Self {
        Self {
            values: bits
                .iter()
                .map(|&b| if b { Rational::one() } else { Rational::zero() })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, j: usize) -> &Rational {
        &self.values[j]
    }

    /// `Some(bits)` when every value is 0 or 1.
    pub fn as_bits(&self) -> Option<Vec<bool>> {
        self.values
            .iter()
            .map(|v| {
                if v.is_zero() {
                    Some(false)
                } else if v.is_one() {
                    Some(true)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Number of distinct values.
    pub fn distinct_count(&self) -> usize {
        let mut v: Vec<&Rational> = self.values.iter().collect();
        v.sort();
        v.dedup();
        v.len()
    }
}

/// Strictly increasing list of columns of a parent matrix with `parent_n` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnSubset {
    parent_n: usize,
    members: Vec<usize>,
}

impl ColumnSubset {
    pub fn new(parent_n: usize, members: Vec<usize>) -> Result<Self> {
        if let Some(&j) = members.iter().find(|&&j| j >= parent_n) {
            return Err(Error::input(format!(
                "column {} out of range 1..={parent_n}",
                j + 1
            )));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("column subset must be strictly increasing"));
        }
        Ok(Self { parent_n, members })
    }

    /// Builds a subset from 1-based column indices (any order, no duplicates).
    pub fn from_external(parent_n: usize, cols: &[usize]) -> Result<Self> {
        if cols.contains(&0) {
            return Err(Error::input("column indices are 1-based"));
        }
        let mut members: Vec<usize> = cols.iter().map(|j| j - 1).collect();
        members.sort_unstable();
        Self::new(parent_n, members)
    }

    pub fn all(n: usize) -> Self {
        Self {
            parent_n: n,
            members: (0..n).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            parent_n: n,
            members: Vec::new(),
        }
    }

    /// Subset selected by the low `n` bits of `mask` (bit `j` = column `j`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self {
            parent_n: n,
            members: (0..n).filter(|j| mask >> j & 1 == 1).collect(),
        }
    }

    pub fn parent_n(&self) -> usize {
        self.parent_n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_external(&self) -> Vec<usize> {
        self.members.iter().map(|j| j + 1).collect()
    }

    /// `self ∘ inner`: `inner` indexes into the columns selected by `self`.
    pub fn compose(&self, inner: &ColumnSubset) -> Result<ColumnSubset> {
        if inner.parent_n != self.members.len() {
            return Err(Error::Dimension {
                expected: self.members.len(),
                got: inner.parent_n,
            });
        }
        Ok(ColumnSubset {
            parent_n: self.parent_n,
            members: inner.members.iter().map(|&k| self.members[k]).collect(),
        })
    }
}

/// Witness attached to a discrepancy value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Coloring(Coloring),
    Floating(FloatingColoring),
}

/// A discrepancy value together with everything needed to re-derive it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyResult {
    pub value: Rational,
    pub witness: Witness,
    /// Row attaining the maximum, `None` when there are no columns.
    pub witness_row: Option<usize>,
    /// Color attaining the maximum (multi-color quantities).
    pub witness_color: Option<usize>,
    /// Column subset attaining the maximum (hereditary quantities).
    pub witness_subset: Option<ColumnSubset>,
    /// Number of colorings charged against the enumeration budget.
    pub budget_used: u128,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(rows).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(a.restrict(&ColumnSubset::all(2)).unwrap(), a);
        let j = ColumnSubset::from_external(2, &[2]).unwrap();
        assert_eq!(a.restrict(&j).unwrap(), m(&[vec![2], vec![4]]));

        let b = m(&[vec![1, 1, 1]]);
        let empty = b.restrict(&ColumnSubset::empty(3)).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (1, 0));
        assert!(empty.row_sum(0).is_zero());
    }

    #[test]
    fn restrict_rejects_bad_subsets() {
        assert!(ColumnSubset::new(2, vec![2]).is_err());
        assert!(ColumnSubset::new(3, vec![1, 1]).is_err());
        let a = m(&[vec![1, 2]]);
        assert!(a.restrict(&ColumnSubset::all(3)).is_err());
    }

    #[test]
    fn evaluate_row_examples() {
        let a = m(&[vec![1, 1, 1]]);
        let x = FloatingColoring::constant(3, &ratio(1, 3)).unwrap();
        assert_eq!(a.evaluate_row(&x, 0).unwrap(), int(1));

        let b = m(&[vec![1, 0], vec![0, 1]]);
        let x = FloatingColoring::from_bits(&[true, false]);
        assert_eq!(b.evaluate_row(&x, 1).unwrap(), int(0));

        let c = m(&[vec![2, 3]]);
        let x = FloatingColoring::new(vec![ratio(1, 2), ratio(1, 3)]).unwrap();
        assert_eq!(c.evaluate_row(&x, 0).unwrap(), int(2));

        let short = FloatingColoring::constant(2, &int(0)).unwrap();
        assert!(a.evaluate_row(&short, 0).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("8/3").unwrap(), ratio(8, 3));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&ratio(8, 3)), "8/3");
        assert_eq!(format_rational(&int(3)), "3");
    }

    #[test]
    fn floating_coloring_range() {
        assert!(FloatingColoring::new(vec![ratio(3, 2)]).is_err());
        assert!(FloatingColoring::new(vec![ratio(-1, 2)]).is_err());
        let x = FloatingColoring::new(vec![int(1), int(0), int(1)]).unwrap();
        assert_eq!(x.as_bits(), Some(vec![true, false, true]));
        assert_eq!(x.distinct_count(), 2);
    }

    #[test]
    fn coloring_classes() {
        let p = Coloring::from_external(3, &[1, 3, 1, 2]).unwrap();
        assert_eq!(p.classes(), vec![vec![0, 2], vec![3], vec![1]]);
        assert!(Coloring::from_external(2, &[3]).is_err());
        assert!(Coloring::new(1, vec![0]).is_err());
    }
}
