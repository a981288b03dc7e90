//! Integer-scaled enumeration kernel.
//!
//! Every entry is multiplied by the lcm `L` of all denominators, so the
//! searches below run on `i64` entries with `i128` accumulators and stay
//! exact. Callers divide the returned integers by the documented scale.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Rational};

#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    m: usize,
    n: usize,
    a: Vec<i64>,
    row_sums: Vec<i128>,
    scale: BigInt,
    // Column-suffix bounds, indexed `j * m + i`, for `j` in `0..=n`.
    pos_suffix: Vec<i128>,
    neg_suffix: Vec<i128>,
}

/// Outcome of a multi-color search. `value` is `max |c S_id - R_i|`, i.e.
/// the discrepancy scaled by `c L`.
#[derive(Clone, Debug)]
pub(crate) struct ColorSearch {
    pub value: i128,
    pub assignment: Vec<usize>,
    pub row: usize,
    pub color: usize,
    /// Set when the search stopped early after finding a coloring strictly
    /// below the abort threshold; `value` is then only an upper bound.
    pub aborted: bool,
}

impl Kernel {
    pub fn new(a: &Matrix) -> Result<Self> {
        let scale = a.denominator_lcm();
        let scale_r = Rational::from_integer(scale.clone());
        let (m, n) = (a.rows(), a.cols());
        let mut entries = Vec::with_capacity(m * n);
        for i in 0..m {
            for v in a.row(i) {
                let scaled = (v * &scale_r).to_integer();
                let e = scaled.to_i64().filter(|e| e.unsigned_abs() < 1 << 62).ok_or_else(|| {
                    Error::Unsupported(format!(
                        "entry {v} scaled by {scale} does not fit the enumeration kernel"
                    ))
                })?;
                entries.push(e);
            }
        }
        Ok(Self::from_scaled(m, n, entries, scale))
    }

    fn from_scaled(m: usize, n: usize, a: Vec<i64>, scale: BigInt) -> Self {
        let row_sums = (0..m)
            .map(|i| a[i * n..(i + 1) * n].iter().map(|&v| v as i128).sum())
            .collect();
        let mut pos_suffix = vec![0i128; (n + 1) * m];
        let mut neg_suffix = vec![0i128; (n + 1) * m];
        for j in (0..n).rev() {
            for i in 0..m {
                let v = a[i * n + j] as i128;
                pos_suffix[j * m + i] = pos_suffix[(j + 1) * m + i] + v.max(0);
                neg_suffix[j * m + i] = neg_suffix[(j + 1) * m + i] + v.min(0);
            }
        }
        Self {
            m,
            n,
            a,
            row_sums,
            scale,
            pos_suffix,
            neg_suffix,
        }
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Kernel of the column submatrix selected by `cols`, same scale.
    pub fn select(&self, cols: &[usize]) -> Self {
        let k = cols.len();
        let mut a = Vec::with_capacity(self.m * k);
        for i in 0..self.m {
            a.extend(cols.iter().map(|&j| self.a[i * self.n + j]));
        }
        Self::from_scaled(self.m, k, a, self.scale.clone())
    }

    #[inline]
    fn entry(&self, i: usize, j: usize) -> i128 {
        self.a[i * self.n + j] as i128
    }

    /// Scaled discrepancy `max_{i,d} |c S_id - R_i|` of a full coloring with
    /// the first attaining `(row, color)` in row-major order.
    pub fn coloring_value(&self, assignment: &[usize], c: usize) -> (i128, usize, usize) {
        let mut sums = vec![0i128; self.m * c];
        for (j, &d) in assignment.iter().enumerate() {
            for i in 0..self.m {
                sums[i * c + d] += self.entry(i, j);
            }
        }
        self.leaf_value(&sums, c)
    }

    fn leaf_value(&self, sums: &[i128], c: usize) -> (i128, usize, usize) {
        let ci = c as i128;
        let mut best = (-1i128, 0, 0);
        for i in 0..self.m {
            for d in 0..c {
                let dev = (ci * sums[i * c + d] - self.row_sums[i]).abs();
                if dev > best.0 {
                    best = (dev, i, d);
                }
            }
        }
        best
    }

    /// Lower bound on the final scaled discrepancy given the sums after
    /// assigning columns `0..next`.
    fn color_lower_bound(&self, sums: &[i128], c: usize, next: usize) -> i128 {
        let ci = c as i128;
        let mut lb = 0i128;
        for i in 0..self.m {
            let pos = self.pos_suffix[next * self.m + i];
            let neg = self.neg_suffix[next * self.m + i];
            let r = self.row_sums[i];
            for d in 0..c {
                let s = sums[i * c + d];
                let lo = ci * (s + neg) - r;
                let hi = ci * (s + pos) - r;
                let gap = if lo > 0 {
                    lo
                } else if hi < 0 {
                    -hi
                } else {
                    0
                };
                lb = lb.max(gap);
            }
        }
        lb
    }

    /// Greedy coloring: each column in turn takes the color minimizing the
    /// current scaled deviation of the partial matrix; ties go to the
    /// smallest color.
    pub fn greedy(&self, c: usize) -> Vec<usize> {
        let ci = c as i128;
        let mut sums = vec![0i128; self.m * c];
        let mut partial = vec![0i128; self.m];
        let mut assignment = Vec::with_capacity(self.n);
        for j in 0..self.n {
            for i in 0..self.m {
                partial[i] += self.entry(i, j);
            }
            let mut pick = (i128::MAX, 0);
            for cand in 0..c {
                let mut worst = 0i128;
                for i in 0..self.m {
                    let a = self.entry(i, j);
                    for d in 0..c {
                        let s = sums[i * c + d] + if d == cand { a } else { 0 };
                        worst = worst.max((ci * s - partial[i]).abs());
                    }
                }
                if worst < pick.0 {
                    pick = (worst, cand);
                }
            }
            let d = pick.1;
            for i in 0..self.m {
                sums[i * c + d] += self.entry(i, j);
            }
            assignment.push(d);
        }
        assignment
    }

    /// Exhaustive search for the lexicographically first optimal `c`-coloring.
    ///
    /// Only colorings in first-occurrence normal form are visited: the
    /// lexicographically smallest member of each color-permutation orbit is
    /// exactly that normal form, so the first optimum found is the first
    /// optimum over all `c^n` colorings.
    ///
    /// With `abort_below = Some(t)`, the search returns as soon as it meets a
    /// coloring with scaled value `< t`.
    pub fn optimal(&self, c: usize, abort_below: Option<i128>) -> ColorSearch {
        let greedy = self.greedy(c);
        let (bound, _, _) = self.coloring_value(&greedy, c);
        let mut st = SearchState {
            k: self,
            c,
            sums: vec![0; self.m * c],
            assignment: vec![0; self.n],
            best: None,
            bound,
            abort_below,
            aborted: false,
        };
        st.descend(0, 0);
        let (value, assignment) = st.best.expect("the greedy bound keeps at least one leaf");
        let (_, row, color) = self.coloring_value(&assignment, c);
        ColorSearch {
            value,
            assignment,
            row,
            color,
            aborted: st.aborted,
        }
    }

    /// Scaled weighted deviation `max_i |zd (Bq)_i - zn R_i|` of a {0,1} vector.
    pub fn weighted_value(&self, q: &[bool], zn: i128, zd: i128) -> (i128, usize) {
        let mut best = (-1i128, 0);
        for i in 0..self.m {
            let t: i128 = (0..self.n).filter(|&j| q[j]).map(|j| self.entry(i, j)).sum();
            let dev = (zd * t - zn * self.row_sums[i]).abs();
            if dev > best.0 {
                best = (dev, i);
            }
        }
        best
    }

    /// Minimum over `q in {0,1}^n` of the scaled weighted deviation at
    /// `z = zn / zd`. Vectors are ordered with `1` before `0` in every
    /// position and the first optimum is returned.
    pub fn weighted(&self, zn: i128, zd: i128) -> (i128, Vec<bool>) {
        let mut st = WeightedState {
            k: self,
            zn,
            zd,
            partial: vec![0; self.m],
            q: vec![false; self.n],
            best: None,
        };
        st.descend(0);
        st.best.expect("at least one leaf is always visited")
    }

    /// Distinct images `Bq` for `q in {0,1}^n`.
    pub fn images(&self) -> Vec<Vec<i128>> {
        let mut out: Vec<Vec<i128>> = vec![vec![0; self.m]];
        for j in 0..self.n {
            let mut next = out.clone();
            for v in &out {
                let mut w = v.clone();
                for (i, x) in w.iter_mut().enumerate() {
                    *x += self.entry(i, j);
                }
                next.push(w);
            }
            next.sort_unstable();
            next.dedup();
            out = next;
        }
        out
    }

    pub fn row_sums(&self) -> &[i128] {
        &self.row_sums
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }
}

struct SearchState<'a> {
    k: &'a Kernel,
    c: usize,
    sums: Vec<i128>,
    assignment: Vec<usize>,
    best: Option<(i128, Vec<usize>)>,
    bound: i128,
    abort_below: Option<i128>,
    aborted: bool,
}

impl SearchState<'_> {
    fn descend(&mut self, j: usize, used: usize) {
        if self.aborted {
            return;
        }
        let k = self.k;
        if j == k.n {
            let (v, _, _) = k.leaf_value(&self.sums, self.c);
            if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
                self.best = Some((v, self.assignment.clone()));
            }
            if self.abort_below.is_some_and(|t| v < t) {
                self.aborted = true;
            }
            return;
        }
        let top = (used + 1).min(self.c);
        for d in 0..top {
            for i in 0..k.m {
                self.sums[i * self.c + d] += k.entry(i, j);
            }
            self.assignment[j] = d;
            let lb = k.color_lower_bound(&self.sums, self.c, j + 1);
            let dominated = self.best.as_ref().is_some_and(|(b, _)| lb >= *b);
            if lb <= self.bound && !dominated {
                self.descend(j + 1, used.max(d + 1));
            }
            for i in 0..k.m {
                self.sums[i * self.c + d] -= k.entry(i, j);
            }
            if self.aborted {
                return;
            }
        }
    }
}

struct WeightedState<'a> {
    k: &'a Kernel,
    zn: i128,
    zd: i128,
    partial: Vec<i128>,
    q: Vec<bool>,
    best: Option<(i128, Vec<bool>)>,
}

impl WeightedState<'_> {
    fn lower_bound(&self, next: usize) -> i128 {
        let k = self.k;
        let mut lb = 0;
        for i in 0..k.m {
            let target = self.zn * k.row_sums[i];
            let lo = self.zd * (self.partial[i] + k.neg_suffix[next * k.m + i]) - target;
            let hi = self.zd * (self.partial[i] + k.pos_suffix[next * k.m + i]) - target;
            let gap = if lo > 0 {
                lo
            } else if hi < 0 {
                -hi
            } else {
                0
            };
            lb = lb.max(gap);
        }
        lb
    }

    fn descend(&mut self, j: usize) {
        let k = self.k;
        if j == k.n {
            let v = (0..k.m)
                .map(|i| (self.zd * self.partial[i] - self.zn * k.row_sums[i]).abs())
                .max()
                .unwrap_or(0);
            if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
                self.best = Some((v, self.q.clone()));
            }
            return;
        }
        for bit in [true, false] {
            if bit {
                for i in 0..k.m {
                    self.partial[i] += k.entry(i, j);
                }
            }
            self.q[j] = bit;
            let lb = self.lower_bound(j + 1);
            if self.best.as_ref().is_none_or(|(b, _)| lb < *b) {
                self.descend(j + 1);
            }
            if bit {
                for i in 0..k.m {
                    self.partial[i] -= k.entry(i, j);
                }
            }
        }
        self.q[j] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ratio;

    #[test]
    fn scales_rational_entries() {
        let a = Matrix::new(vec![vec![ratio(1, 2), ratio(1, 3)]], 2).unwrap();
        let k = Kernel::new(&a).unwrap();
        assert_eq!(k.scale(), &BigInt::from(6));
        assert_eq!(k.a, vec![3, 2]);
        assert_eq!(k.row_sums(), &[5]);
    }

    #[test]
    fn greedy_alternates_on_a_single_row() {
        let a = Matrix::from_i64(&[vec![1, 1, 1, 1]]).unwrap();
        let k = Kernel::new(&a).unwrap();
        assert_eq!(k.greedy(2), vec![0, 1, 0, 1]);
    }

    /// Plain enumeration of all `c^n` colorings.
    fn brute_optimal(k: &Kernel, c: usize) -> (i128, Vec<usize>) {
        let total = c.pow(k.cols() as u32);
        let mut best: Option<(i128, Vec<usize>)> = None;
        for code in 0..total {
            let mut x = code;
            let mut assign = vec![0; k.cols()];
            for slot in assign.iter_mut().rev() {
                *slot = x % c;
                x /= c;
            }
            let (v, _, _) = k.coloring_value(&assign, c);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, assign));
            }
        }
        best.unwrap()
    }

    #[test]
    fn optimal_agrees_with_plain_enumeration() {
        let mats = [
            vec![vec![1, 0, 1, 1, 0], vec![0, 1, 1, 0, 1], vec![1, 1, 1, 1, 1]],
            vec![vec![2, -1, 3, 0], vec![-2, 1, 1, 1]],
            vec![vec![1, 1, 1]],
        ];
        for rows in mats {
            let k = Kernel::new(&Matrix::from_i64(&rows).unwrap()).unwrap();
            for c in 2..=4 {
                let fast = k.optimal(c, None);
                let (v, assign) = brute_optimal(&k, c);
                assert_eq!(fast.value, v);
                assert_eq!(fast.assignment, assign, "lexicographic witness, c={c}");
                assert!(!fast.aborted);
            }
        }
    }

    #[test]
    fn weighted_agrees_with_plain_enumeration() {
        let rows = vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0], vec![3, -1, 0, 2]];
        let k = Kernel::new(&Matrix::from_i64(&rows).unwrap()).unwrap();
        for (zn, zd) in [(1, 2), (1, 3), (2, 5), (0, 1), (1, 1)] {
            let (v, q) = k.weighted(zn, zd);
            let brute = (0..16u32)
                .map(|mask| {
                    let bits: Vec<bool> = (0..4).map(|j| mask >> (3 - j) & 1 == 0).collect();
                    k.weighted_value(&bits, zn, zd).0
                })
                .min()
                .unwrap();
            assert_eq!(v, brute);
            assert_eq!(k.weighted_value(&q, zn, zd).0, v);
        }
    }

    #[test]
    fn images_are_distinct_and_complete() {
        let k = Kernel::new(&Matrix::from_i64(&[vec![1, 1, 2]]).unwrap()).unwrap();
        let imgs: Vec<i128> = k.images().into_iter().map(|v| v[0]).collect();
        assert_eq!(imgs, vec![0, 1, 2, 3, 4]);
    }
}
