//! Property tests against brute-force oracles written here, independent of
//! the library's search code.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use discrepancy::disc::{
    coloring_disc, hereditary_disc, optimal_disc, weighted_disc, weighted_disc_sup, Budget,
};
use discrepancy::matrix::{ratio, Coloring, ColumnSubset, FloatingColoring, Matrix, Rational};
use discrepancy::rounding::{carry_state, merge_classes, transfer_round};
use discrepancy::{CaryValue, Oracle};

fn small_matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec((-3i64..=3, 1i64..=3), n), m).prop_map(
            move |rows| {
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|(p, q)| ratio(p, q)).collect())
                    .collect();
                Matrix::new(rows, n).unwrap()
            },
        )
    })
}

fn binary_matrix(max_m: usize, max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(0i64..=1, n), m)
            .prop_map(|rows| Matrix::from_i64(&rows).unwrap())
    })
}

/// Every assignment of `n` columns to `c` colors.
fn all_assignments(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..c).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

/// `max_{i,d} |sum_{j in class d} a_ij - R_i / c|`, straight from the definition.
fn plain_disc(a: &Matrix, assign: &[usize], c: usize) -> Rational {
    let cr = Rational::from_integer(BigInt::from(c));
    let mut best = Rational::zero();
    for i in 0..a.rows() {
        let share = a.row_sum(i) / &cr;
        for d in 0..c {
            let s: Rational = (0..a.cols()).filter(|&j| assign[j] == d).map(|j| a.get(i, j).clone()).sum();
            best = best.max((s - &share).abs());
        }
    }
    best
}

fn brute_disc(a: &Matrix, c: usize) -> Rational {
    all_assignments(a.cols(), c)
        .iter()
        .map(|p| plain_disc(a, p, c))
        .min()
        .unwrap_or_else(Rational::zero)
}

fn brute_wdisc(a: &Matrix, z: &Rational) -> Rational {
    all_assignments(a.cols(), 2)
        .iter()
        .map(|q| {
            (0..a.rows())
                .map(|i| {
                    (0..a.cols())
                        .map(|j| a.get(i, j) * (z - Rational::from_integer(BigInt::from(q[j]))))
                        .sum::<Rational>()
                        .abs()
                })
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .min()
        .unwrap_or_else(Rational::zero)
}

/// Values in `[0, 1]` with at most `max_len` fractional base-`base` digits.
fn cary(base: u32, max_len: usize) -> impl Strategy<Value = CaryValue> {
    prop_oneof![
        9 => proptest::collection::vec(0..base, 0..=max_len).prop_map(move |frac| {
            let mut digits = vec![0];
            digits.extend(frac);
            CaryValue::from_digits(base, digits).unwrap()
        }),
        1 => Just(CaryValue::one(base).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cary_round_trip_and_truncation(x in prop_oneof![cary(3, 6), cary(5, 5), cary(7, 4)], k in 0usize..7) {
        let c = x.base();
        prop_assert_eq!(CaryValue::from_rational(&x.value(), c).unwrap(), Some(x.clone()));
        prop_assert_eq!(x.to_string().parse::<CaryValue>().unwrap(), x.clone());
        let t = x.truncate(k);
        let step = Rational::new(BigInt::one(), BigInt::from(c).pow(k as u32));
        prop_assert!(t.value() <= x.value());
        prop_assert!(x.value() - t.value() < step);
        prop_assert!(t.len() <= k);
    }

    #[test]
    fn cary_increment_adds_power(x in cary(3, 5)) {
        let k = x.len();
        prop_assume!(k >= 1);
        let inc = x.add_power(k).unwrap();
        let step = Rational::new(BigInt::one(), BigInt::from(3).pow(k as u32));
        prop_assert_eq!(inc.value.value(), x.value() + step);
        prop_assert!(inc.value.len() <= k);
    }

    #[test]
    fn cary_nearest_is_nearest(num in 0i64..=50, len in 0usize..4) {
        let z = ratio(num, 50);
        let near = CaryValue::nearest(&z, 3, len).unwrap();
        let gap = (near.value() - &z).abs();
        for other in CaryValue::enumerate(3, len).unwrap() {
            prop_assert!(gap <= (other.value() - &z).abs());
        }
    }

    #[test]
    fn restrict_composes(a in small_matrix(3, 6), outer_mask in 0u64..64, inner_mask in 0u64..64) {
        let n = a.cols();
        let outer = ColumnSubset::from_mask(n, outer_mask & ((1 << n) - 1));
        let inner = ColumnSubset::from_mask(outer.len(), inner_mask & ((1u64 << outer.len()) - 1));
        let twice = a.restrict(&outer).unwrap().restrict(&inner).unwrap();
        prop_assert_eq!(twice, a.restrict(&outer.compose(&inner).unwrap()).unwrap());
    }

    #[test]
    fn evaluate_row_is_linear(a in small_matrix(2, 5), xs in proptest::collection::vec((0i64..=4, 0i64..=4), 5), t in 0i64..=4) {
        let n = a.cols();
        let x: Vec<Rational> = xs[..n].iter().map(|&(p, _)| ratio(p, 4)).collect();
        let y: Vec<Rational> = xs[..n].iter().map(|&(_, q)| ratio(q, 4)).collect();
        let s = ratio(t, 4);
        let mix: Vec<Rational> = x.iter().zip(&y).map(|(u, v)| &s * u + (Rational::one() - &s) * v).collect();
        for i in 0..a.rows() {
            let fx = a.evaluate_row(&FloatingColoring::new(x.clone()).unwrap(), i).unwrap();
            let fy = a.evaluate_row(&FloatingColoring::new(y.clone()).unwrap(), i).unwrap();
            let fm = a.evaluate_row(&FloatingColoring::new(mix.clone()).unwrap(), i).unwrap();
            prop_assert_eq!(fm, &s * fx + (Rational::one() - &s) * fy);
        }
    }

    #[test]
    fn coloring_disc_matches_definition(a in small_matrix(3, 5), c in 2usize..=4, seed in any::<u64>()) {
        let assign: Vec<usize> = (0..a.cols()).map(|j| ((seed >> (3 * j)) as usize) % c).collect();
        let p = Coloring::new(c, assign.clone()).unwrap();
        prop_assert_eq!(coloring_disc(&a, &p).unwrap().value, plain_disc(&a, &assign, c));
    }

    #[test]
    fn optimal_disc_matches_brute_force(a in small_matrix(3, 5), c in 2usize..=3) {
        let r = optimal_disc(&a, c, &Budget::default()).unwrap();
        prop_assert_eq!(&r.value, &brute_disc(&a, c));
    }

    #[test]
    fn two_colors_equal_weighted_at_half(a in small_matrix(3, 6)) {
        let b = Budget::default();
        prop_assert_eq!(optimal_disc(&a, 2, &b).unwrap().value, weighted_disc(&a, &ratio(1, 2), &b).unwrap().value);
    }

    #[test]
    fn weighted_disc_matches_brute_force(a in small_matrix(3, 5), num in 0i64..=12) {
        let z = ratio(num, 12);
        prop_assert_eq!(weighted_disc(&a, &z, &Budget::default()).unwrap().value, brute_wdisc(&a, &z));
    }

    #[test]
    fn sup_dominates_grid_and_is_attained(a in small_matrix(2, 4)) {
        let b = Budget::default();
        let sup = weighted_disc_sup(&a, &b).unwrap();
        prop_assert_eq!(weighted_disc(&a, &sup.z, &b).unwrap().value, sup.value.clone());
        for num in 0..=60 {
            prop_assert!(brute_wdisc(&a, &ratio(num, 60)) <= sup.value);
        }
    }

    #[test]
    fn hereditary_disc_is_monotone(a in binary_matrix(3, 6), mask in 0u64..64, c in 2usize..=3) {
        let b = Budget::default();
        let s = ColumnSubset::from_mask(a.cols(), mask & ((1 << a.cols()) - 1));
        let full = hereditary_disc(&a, c, &b).unwrap().value;
        let part = hereditary_disc(&a.restrict(&s).unwrap(), c, &b).unwrap().value;
        prop_assert!(part <= full);
        prop_assert!(optimal_disc(&a, c, &b).unwrap().value <= full);
    }

    #[test]
    fn merging_costs_at_most_ratio(a in small_matrix(3, 6), seed in any::<u64>(), pick in 0usize..3) {
        let (big, small) = [(4, 2), (6, 2), (6, 3)][pick];
        let assign: Vec<usize> = (0..a.cols()).map(|j| ((seed >> (4 * j)) as usize) % big).collect();
        let p = Coloring::new(big, assign).unwrap();
        let merged = merge_classes(&p, small).unwrap();
        let factor = Rational::new(BigInt::from(big), BigInt::from(small));
        prop_assert!(coloring_disc(&a, &merged).unwrap().value <= factor * coloring_disc(&a, &p).unwrap().value);
    }

    #[test]
    fn transfer_round_respects_guarantee(a in binary_matrix(3, 5), z in cary(3, 3)) {
        let h = hereditary_disc(&a, 3, &Budget::default()).unwrap().value;
        let (q, trace) = transfer_round(&a, &z, &Oracle::exact(), Some(&h)).unwrap();
        prop_assert_eq!(q.len(), a.cols());
        prop_assert!(trace.total_error <= Rational::from_integer(3.into()) * &h);
        for it in &trace.iterations {
            prop_assert!(it.tau <= 2);
            prop_assert!(carry_state(&it.values, it.level).is_valid());
        }
    }
}
