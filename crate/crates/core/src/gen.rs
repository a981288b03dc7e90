//! Instance generators: complete and balanced-pair hypergraphs, plus seeded
//! random matrices for test corpora.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{int, Matrix, Rational};

/// Largest vertex count accepted by [`complete_hypergraph`].
pub const COMPLETE_MAX_N: usize = 16;
/// Largest half-size accepted by [`balanced_pair_hypergraph`].
pub const BALANCED_MAX_N: usize = 6;

/// Incidence matrix of the complete hypergraph on `n` vertices: one row per
/// nonempty vertex subset, rows in binary-counting order (bit `j` of the
/// row number is vertex `j + 1`). The empty edge is omitted.
pub fn complete_hypergraph(n: usize) -> Result<Matrix> {
    if n == 0 || n > COMPLETE_MAX_N {
        return Err(Error::input(format!(
            "complete hypergraph needs 1 <= n <= {COMPLETE_MAX_N}, got {n}"
        )));
    }
    let rows = (1u64..1 << n)
        .map(|mask| (0..n).map(|j| i64::from(mask >> j & 1 == 1)).collect())
        .collect::<Vec<Vec<i64>>>();
    Matrix::from_i64(&rows)
}

/// Incidence matrix on the `2n` vertices `a_1..a_n, b_1..b_n` (in that
/// column order) whose edges are the nonempty sets meeting both halves in
/// the same number of vertices.
pub fn balanced_pair_hypergraph(n: usize) -> Result<Matrix> {
    if n == 0 || n > BALANCED_MAX_N {
        return Err(Error::input(format!(
            "balanced-pair hypergraph needs 1 <= n <= {BALANCED_MAX_N}, got {n}"
        )));
    }
    let half = (1u64 << n) - 1;
    let rows = (1u64..1 << (2 * n))
        .filter(|mask| (mask & half).count_ones() == (mask >> n).count_ones())
        .map(|mask| (0..2 * n).map(|j| i64::from(mask >> j & 1 == 1)).collect())
        .collect::<Vec<Vec<i64>>>();
    Matrix::from_i64(&rows)
}

/// Discrepancy of any `c`-coloring of the complete hypergraph on `n`
/// vertices whose color classes have the given sizes:
/// `max_d max(n_d (1 - 1/c), (n - n_d) / c)`. The worst edge for color `d`
/// is either the whole class or everything outside it.
pub fn complete_disc_closed_form(n: usize, c: usize, class_sizes: &[usize]) -> Result<Rational> {
    if c < 2 || class_sizes.len() != c {
        return Err(Error::input(format!(
            "need one class size per color (c = {c}), got {}",
            class_sizes.len()
        )));
    }
    if class_sizes.iter().sum::<usize>() != n {
        return Err(Error::input(format!(
            "class sizes {class_sizes:?} do not sum to n = {n}"
        )));
    }
    let c_big = BigInt::from(c);
    Ok(class_sizes
        .iter()
        .map(|&nd| {
            let inside = Rational::new(BigInt::from(nd) * (&c_big - 1), c_big.clone());
            let outside = Rational::new(BigInt::from(n - nd), c_big.clone());
            inside.max(outside)
        })
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Class sizes as equal as possible, larger classes first.
pub fn equal_class_sizes(n: usize, c: usize) -> Vec<usize> {
    (0..c).map(|d| n / c + usize::from(d < n % c)).collect()
}

/// Recipe for one instance of a corpus.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Complete { n: usize },
    BalancedPair { n: usize },
    Random01 { m: usize, n: usize, density: f64, seed: u64 },
    /// Entries `p / q` with `|p| <= max_num`, `1 <= q <= max_den`.
    RandomRational { m: usize, n: usize, max_num: i64, max_den: i64, seed: u64 },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub family: Family,
    pub label: String,
}

impl InstanceSpec {
    pub fn new(family: Family) -> Self {
        let label = match &family {
            Family::Complete { n } => format!("complete(n={n})"),
            Family::BalancedPair { n } => format!("balanced_pair(n={n})"),
            Family::Random01 { m, n, density, seed } => {
                format!("random01(m={m},n={n},p={density},seed={seed})")
            }
            Family::RandomRational { m, n, seed, .. } => {
                format!("random_rational(m={m},n={n},seed={seed})")
            }
            Family::File { path } => format!("file({})", path.display()),
        };
        Self { family, label }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::Complete { n } if *n == 0 || *n > COMPLETE_MAX_N => {
                Err(Error::input(format!("complete: n = {n} out of range")))
            }
            Family::BalancedPair { n } if *n == 0 || *n > BALANCED_MAX_N => {
                Err(Error::input(format!("balanced_pair: n = {n} out of range")))
            }
            Family::Random01 { m, density, .. } => {
                if *m == 0 || !(0.0..=1.0).contains(density) {
                    Err(Error::input("random01 needs m >= 1 and density in [0,1]"))
                } else {
                    Ok(())
                }
            }
            Family::RandomRational { m, max_num, max_den, .. } => {
                if *m == 0 || *max_num < 0 || *max_den < 1 {
                    Err(Error::input(
                        "random_rational needs m >= 1, max_num >= 0, max_den >= 1",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Family name and parameters, as recorded in generated files.
    pub fn meta(&self) -> BTreeMap<String, String> {
        let mut meta = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            meta.insert(k.to_string(), v);
        };
        match &self.family {
            Family::Complete { n } => {
                put("family", "complete".into());
                put("n", n.to_string());
            }
            Family::BalancedPair { n } => {
                put("family", "balanced-pair".into());
                put("n", n.to_string());
            }
            Family::Random01 { m, n, density, seed } => {
                put("family", "random-01".into());
                put("m", m.to_string());
                put("n", n.to_string());
                put("density", density.to_string());
                put("seed", seed.to_string());
            }
            Family::RandomRational { m, n, max_num, max_den, seed } => {
                put("family", "random-rational".into());
                put("m", m.to_string());
                put("n", n.to_string());
                put("max_num", max_num.to_string());
                put("max_den", max_den.to_string());
                put("seed", seed.to_string());
            }
            Family::File { path } => {
                put("family", "file".into());
                put("path", path.display().to_string());
            }
        }
        put("label", self.label.clone());
        meta
    }

    pub fn build(&self) -> Result<Matrix> {
        self.validate()?;
        match &self.family {
            Family::Complete { n } => complete_hypergraph(*n),
            Family::BalancedPair { n } => balanced_pair_hypergraph(*n),
            Family::Random01 { .. } | Family::RandomRational { .. } => random_matrix(self),
            Family::File { path } => crate::io::read_matrix(path),
        }
    }
}

/// Deterministic random matrix for the seeded families.
pub fn random_matrix(spec: &InstanceSpec) -> Result<Matrix> {
    spec.validate()?;
    match spec.family {
        Family::Random01 { m, n, density, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<i64>> = (0..m)
                .map(|_| (0..n).map(|_| i64::from(rng.gen_bool(density))).collect())
                .collect();
            Matrix::new(
                rows.into_iter()
                    .map(|r| r.into_iter().map(int).collect())
                    .collect(),
                n,
            )
        }
        Family::RandomRational { m, n, max_num, max_den, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let p = rng.gen_range(-max_num..=max_num);
                            let q = rng.gen_range(1..=max_den);
                            Rational::new(BigInt::from(p), BigInt::from(q))
                        })
                        .collect()
                })
                .collect();
            Matrix::new(rows, n)
        }
        _ => Err(Error::input(format!("{} is not a random family", spec.label))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::{hereditary_disc, optimal_disc, Budget};
    use crate::matrix::ratio;

    #[test]
    fn complete_small() {
        let h = complete_hypergraph(2).unwrap();
        assert_eq!(h, Matrix::from_i64(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap());
        assert_eq!(complete_hypergraph(5).unwrap().rows(), 31);
        assert!(complete_hypergraph(0).is_err());
        assert!(complete_hypergraph(17).is_err());
    }

    #[test]
    fn balanced_pair_small() {
        assert_eq!(balanced_pair_hypergraph(1).unwrap(), Matrix::from_i64(&[vec![1, 1]]).unwrap());
        // sum_k C(n,k)^2 - 1 = C(2n,n) - 1 nonempty edges
        assert_eq!(balanced_pair_hypergraph(2).unwrap().rows(), 5);
        assert_eq!(balanced_pair_hypergraph(3).unwrap().rows(), 19);
        assert!(balanced_pair_hypergraph(7).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(complete_disc_closed_form(12, 3, &[4, 4, 4]).unwrap(), ratio(8, 3));
        assert_eq!(complete_disc_closed_form(4, 2, &[2, 2]).unwrap(), ratio(1, 1));
        assert!(complete_disc_closed_form(4, 2, &[1, 2]).is_err());
        assert!(complete_disc_closed_form(4, 3, &[2, 2]).is_err());
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let b = Budget::default();
        for n in 2..=6 {
            let h = complete_hypergraph(n).unwrap();
            for c in 2..=3 {
                let exact = optimal_disc(&h, c, &b).unwrap().value;
                let closed = complete_disc_closed_form(n, c, &equal_class_sizes(n, c)).unwrap();
                assert_eq!(exact, closed, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn complete_is_its_own_hereditary_maximum() {
        let b = Budget::default();
        for n in 2..=6 {
            let h = complete_hypergraph(n).unwrap();
            for c in 2..=3 {
                assert_eq!(
                    hereditary_disc(&h, c, &b).unwrap().value,
                    optimal_disc(&h, c, &b).unwrap().value
                );
            }
        }
    }

    #[test]
    fn random_matrix_density_and_determinism() {
        let spec = |density, seed| {
            InstanceSpec::new(Family::Random01 { m: 3, n: 5, density, seed })
        };
        let ones = random_matrix(&spec(1.0, 4)).unwrap();
        assert!((0..3).all(|i| ones.row(i).iter().all(|v| *v == int(1))));
        let zeros = random_matrix(&spec(0.0, 4)).unwrap();
        assert!(zeros.is_zero());
        assert_eq!(random_matrix(&spec(0.5, 9)).unwrap(), random_matrix(&spec(0.5, 9)).unwrap());
        assert!(random_matrix(&spec(1.5, 1)).is_err());

        let rat = InstanceSpec::new(Family::RandomRational { m: 2, n: 3, max_num: 4, max_den: 3, seed: 2 });
        let a = random_matrix(&rat).unwrap();
        assert_eq!(a, random_matrix(&rat).unwrap());
        assert!((0..2).all(|i| a.row(i).iter().all(|v| v.denom() <= &BigInt::from(3))));
    }
}
