//! Inequality certification over a corpus of small instances.
//!
//! Every check compares two exact rationals, `lhs <= rhs` (or `lhs == rhs`
//! for the equality check), and records the witnesses behind both sides.
//! Before a value is used, its witness is re-evaluated through the plain
//! rational evaluators in [`crate::disc`] and must reproduce the value.
//!
//! Check identifiers:
//!
//! | id | inequality |
//! |----|------------|
//! | `disc2_eq_wdisc_half` | `disc(A,2) = wdisc(A,1/2)` |
//! | `herwdisc_le_2_herdisc2` | `herwdisc(A,2) <= 2 herdisc(A,2)` |
//! | `herdisc_le_K_herwdisc` | `herdisc(A,c) <= K herwdisc(A,2)` |
//! | `herdisc_b_le_a2_bm1_herdisc_a` | `herdisc(A,b) <= a^2 (b-1) herdisc(A,a)` |
//! | `herwdisc_le_c_herdisc` | `herwdisc(A,2) <= c herdisc(A,c)`, `c` odd |
//! | `transfer_error_le_c_herdisc` | rounding error of every transfer run `<= c herdisc(A,c)` |
//! | `transfer_trace_violations` | two-value, carry-state and per-step bound violations `<= 0` |
//! | `herdisc_b_le_K_a_herdisc_a` | `herdisc(A,b) <= K a herdisc(A,a)` |
//! | `complete_ratio` | `c/4 herdisc(H,c) <= herdisc(H,2)` on the complete hypergraph, `n = 2ck` |
//!
//! `K = 4001/2000`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cary::CaryValue;
use crate::disc::{
    coloring_disc, hereditary_disc, hereditary_weighted_disc, optimal_disc, weighted_disc,
    weighted_witness_value, Budget, WeightedWitness,
};
use crate::error::{Error, Result};
use crate::gen::{complete_disc_closed_form, complete_hypergraph, equal_class_sizes, Family, InstanceSpec};
use crate::matrix::{format_rational, ratio, ColumnSubset, DiscrepancyResult, Matrix, Rational, Witness};
use crate::oracle::Oracle;
use crate::rounding::transfer_round;

/// Upper bound on the constant `K` relating `herdisc(A,c)` to `herwdisc(A,2)`.
pub fn k_upper() -> Rational {
    ratio(4001, 2000)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub slack: Rational,
    pub pass: bool,
    pub witnesses: BTreeMap<String, String>,
}

impl CheckReport {
    fn inequality(check: String, instance: &str, lhs: Rational, rhs: Rational) -> Self {
        let slack = &rhs - &lhs;
        Self {
            check,
            instance: instance.to_string(),
            pass: slack >= Rational::zero(),
            lhs,
            rhs,
            slack,
            witnesses: BTreeMap::new(),
        }
    }

    fn equality(check: String, instance: &str, lhs: Rational, rhs: Rational) -> Self {
        let mut r = Self::inequality(check, instance, lhs, rhs);
        r.pass = r.slack.is_zero();
        r
    }

    fn witness(mut self, key: &str, value: impl Into<String>) -> Self {
        self.witnesses.insert(key.to_string(), value.into());
        self
    }

    fn scale_rhs(&mut self, factor: &Rational) {
        self.rhs = &self.rhs * factor;
        self.slack = &self.rhs - &self.lhs;
        self.pass = if self.check == "disc2_eq_wdisc_half" {
            self.slack.is_zero()
        } else {
            self.slack >= Rational::zero()
        };
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "instance": self.instance,
            "lhs": format_rational(&self.lhs),
            "rhs": format_rational(&self.rhs),
            "slack": format_rational(&self.slack),
            "pass": self.pass,
            "witnesses": self.witnesses,
        })
    }
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn bits(q: &[bool]) -> String {
    q.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn mismatch(what: &str, instance: &str) -> Error {
    Error::Input(format!("{what} witness for {instance} does not reproduce its value"))
}

/// Lazily computed, witness-checked quantities of one instance.
pub struct Profile<'a> {
    label: &'a str,
    matrix: &'a Matrix,
    budget: Budget,
    herdisc: HashMap<usize, DiscrepancyResult>,
    herwdisc: Option<(WeightedWitness, ColumnSubset)>,
}

impl<'a> Profile<'a> {
    pub fn new(label: &'a str, matrix: &'a Matrix, budget: Budget) -> Self {
        Self {
            label,
            matrix,
            budget,
            herdisc: HashMap::new(),
            herwdisc: None,
        }
    }

    pub fn herdisc(&mut self, c: usize) -> Result<&DiscrepancyResult> {
        if !self.herdisc.contains_key(&c) {
            let r = hereditary_disc(self.matrix, c, &self.budget)?;
            let subset = r.witness_subset.as_ref().ok_or_else(|| mismatch("herdisc", self.label))?;
            let Witness::Coloring(p) = &r.witness else {
                return Err(mismatch("herdisc", self.label));
            };
            let sub = self.matrix.restrict(subset)?;
            if coloring_disc(&sub, p)?.value != r.value {
                return Err(mismatch("herdisc", self.label));
            }
            self.herdisc.insert(c, r);
        }
        Ok(&self.herdisc[&c])
    }

    pub fn herdisc_value(&mut self, c: usize) -> Result<Rational> {
        Ok(self.herdisc(c)?.value.clone())
    }

    pub fn herwdisc(&mut self) -> Result<&(WeightedWitness, ColumnSubset)> {
        if self.herwdisc.is_none() {
            let (w, s) = hereditary_weighted_disc(self.matrix, &self.budget)?;
            if weighted_witness_value(&self.matrix.restrict(&s)?, &w)? != w.value {
                return Err(mismatch("herwdisc", self.label));
            }
            self.herwdisc = Some((w, s));
        }
        Ok(self.herwdisc.as_ref().expect("just computed"))
    }

    fn herdisc_witness(&mut self, c: usize) -> Result<String> {
        let r = self.herdisc(c)?;
        let coloring = match &r.witness {
            Witness::Coloring(p) => list(&p.to_external()),
            Witness::Floating(_) => String::new(),
        };
        let subset = r.witness_subset.as_ref().map(|s| list(&s.to_external())).unwrap_or_default();
        Ok(format!("subset={subset} coloring={coloring}"))
    }

    fn herwdisc_witness(&mut self) -> Result<String> {
        let (w, s) = self.herwdisc()?;
        let q = w.q.as_bits().map(|b| bits(&b)).unwrap_or_default();
        Ok(format!("subset={} z={} q={q}", list(&s.to_external()), format_rational(&w.z)))
    }
}

/// `disc(A, 2) = wdisc(A, 1/2)`.
pub fn check_two_colors_vs_half(label: &str, a: &Matrix, budget: &Budget) -> Result<CheckReport> {
    let d = optimal_disc(a, 2, budget)?;
    let w = weighted_disc(a, &ratio(1, 2), budget)?;
    let Witness::Coloring(p) = &d.witness else {
        return Err(mismatch("disc", label));
    };
    if coloring_disc(a, p)?.value != d.value {
        return Err(mismatch("disc", label));
    }
    if weighted_witness_value(a, &w)? != w.value {
        return Err(mismatch("wdisc", label));
    }
    Ok(CheckReport::equality("disc2_eq_wdisc_half".into(), label, d.value.clone(), w.value.clone())
        .witness("coloring", list(&p.to_external()))
        .witness("q", w.q.as_bits().map(|b| bits(&b)).unwrap_or_default()))
}

/// `herwdisc(A, 2) <= 2 herdisc(A, 2)`.
pub fn check_weighted_vs_normal(profile: &mut Profile) -> Result<CheckReport> {
    let lhs = profile.herwdisc()?.0.value.clone();
    let rhs = Rational::from_integer(2.into()) * profile.herdisc_value(2)?;
    Ok(CheckReport::inequality("herwdisc_le_2_herdisc2".into(), profile.label, lhs, rhs)
        .witness("lhs", profile.herwdisc_witness()?)
        .witness("rhs", profile.herdisc_witness(2)?))
}

/// `herdisc(A, c) <= K herwdisc(A, 2)`.
pub fn check_herdisc_vs_herwdisc(profile: &mut Profile, c: usize) -> Result<CheckReport> {
    let lhs = profile.herdisc_value(c)?;
    let rhs = k_upper() * &profile.herwdisc()?.0.value;
    Ok(CheckReport::inequality(format!("herdisc_le_K_herwdisc[c={c}]"), profile.label, lhs, rhs)
        .witness("lhs", profile.herdisc_witness(c)?)
        .witness("rhs", profile.herwdisc_witness()?))
}

/// `herdisc(A, b) <= a^2 (b - 1) herdisc(A, a)`.
pub fn check_quadratic_color_change(profile: &mut Profile, a: usize, b: usize) -> Result<CheckReport> {
    let lhs = profile.herdisc_value(b)?;
    let factor = Rational::from_integer(BigInt::from(a * a * (b - 1)));
    let rhs = factor * profile.herdisc_value(a)?;
    Ok(CheckReport::inequality(
        format!("herdisc_b_le_a2_bm1_herdisc_a[a={a},b={b}]"),
        profile.label,
        lhs,
        rhs,
    )
    .witness("lhs", profile.herdisc_witness(b)?)
    .witness("rhs", profile.herdisc_witness(a)?))
}

/// `herdisc(A, b) <= K a herdisc(A, a)`, recording the observed ratio
/// `herdisc(A, b) / (a herdisc(A, a))` without asserting anything about it.
pub fn check_linear_color_scaling(profile: &mut Profile, a: usize, b: usize) -> Result<CheckReport> {
    let lhs = profile.herdisc_value(b)?;
    let base = Rational::from_integer(BigInt::from(a)) * profile.herdisc_value(a)?;
    let rhs = k_upper() * &base;
    let ratio_note = if base.is_zero() {
        "undefined".to_string()
    } else {
        format_rational(&(&lhs / &base))
    };
    Ok(CheckReport::inequality(format!("herdisc_b_le_K_a_herdisc_a[a={a},b={b}]"), profile.label, lhs, rhs)
        .witness("lhs", profile.herdisc_witness(b)?)
        .witness("rhs", profile.herdisc_witness(a)?)
        .witness("observed_ratio", ratio_note))
}

/// Column subsets used by the constructive layer: all of them for `n <= 4`,
/// otherwise the full set and every set missing one column.
pub fn transfer_subsets(n: usize) -> Vec<ColumnSubset> {
    if n <= 4 {
        return (1u64..1 << n).map(|mask| ColumnSubset::from_mask(n, mask)).collect();
    }
    let mut out = vec![ColumnSubset::all(n)];
    for skip in 0..n {
        out.push(ColumnSubset::new(n, (0..n).filter(|&j| j != skip).collect()).expect("valid"));
    }
    out
}

/// Violations found in one transfer trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceViolations {
    /// Iterations with more than two distinct values.
    pub tau: usize,
    /// Iterations (or the final coloring) in neither or both carry states.
    pub state: usize,
    /// Steps with measured error above the sharp bound, or sharp bound above
    /// the relaxed bound.
    pub step_bounds: usize,
}

impl TraceViolations {
    pub fn total(&self) -> usize {
        self.tau + self.state + self.step_bounds
    }
}

pub fn trace_violations(trace: &crate::rounding::RoundingTrace) -> TraceViolations {
    let mut v = TraceViolations::default();
    for it in &trace.iterations {
        v.tau += usize::from(it.tau > 2);
        v.state += usize::from(!it.state.is_valid());
        v.step_bounds += usize::from(!(it.step.measured <= it.step.sharp_bound && it.step.sharp_bound <= it.relaxed_bound));
    }
    v.state += usize::from(!trace.final_state.is_valid());
    v
}

/// Value layer and constructive layer for odd `c`.
pub fn check_transfer(profile: &mut Profile, c: usize, max_len: usize) -> Result<Vec<CheckReport>> {
    if c.is_multiple_of(2) {
        return Err(Error::Unsupported(format!("constructive layer needs odd c, got {c}")));
    }
    let label = profile.label;
    let h = profile.herdisc_value(c)?;
    let bound = Rational::from_integer(BigInt::from(c)) * &h;
    let value = CheckReport::inequality(
        format!("herwdisc_le_c_herdisc[c={c}]"),
        label,
        profile.herwdisc()?.0.value.clone(),
        bound.clone(),
    )
    .witness("lhs", profile.herwdisc_witness()?)
    .witness("rhs", profile.herdisc_witness(c)?);

    let a = profile.matrix;
    let oracle = Oracle::exact();
    let zs = CaryValue::enumerate(c as u32, max_len)?;
    let mut worst = (Rational::zero(), String::from("none"));
    let mut violations = TraceViolations::default();
    let mut runs = 0usize;
    for subset in transfer_subsets(a.cols()) {
        let sub = a.restrict(&subset)?;
        for z in &zs {
            let (_, trace) = transfer_round(&sub, z, &oracle, Some(&h))?;
            runs += 1;
            let v = trace_violations(&trace);
            violations.tau += v.tau;
            violations.state += v.state;
            violations.step_bounds += v.step_bounds;
            if trace.total_error > worst.0 {
                worst = (
                    trace.total_error.clone(),
                    format!("subset={} z={}", list(&subset.to_external()), z),
                );
            }
        }
    }
    let constructive = CheckReport::inequality(format!("transfer_error_le_c_herdisc[c={c}]"), label, worst.0, bound)
        .witness("worst_run", worst.1)
        .witness("runs", runs.to_string())
        .witness("rhs", profile.herdisc_witness(c)?);
    let trace_check = CheckReport::inequality(
        format!("transfer_trace_violations[c={c}]"),
        label,
        Rational::from_integer(BigInt::from(violations.total())),
        Rational::zero(),
    )
    .witness("tau", violations.tau.to_string())
    .witness("state", violations.state.to_string())
    .witness("step_bounds", violations.step_bounds.to_string())
    .witness("runs", runs.to_string());
    Ok(vec![value, constructive, trace_check])
}

/// `c/4 herdisc(H, c) <= herdisc(H, 2)` on the complete hypergraph with
/// `n = 2ck`, both sides from the closed form. When `n <= 8` the closed
/// form is also compared against brute force.
pub fn check_tight_example(c: usize, k: usize, budget: &Budget) -> Result<CheckReport> {
    let n = 2 * c * k;
    let label = format!("complete(n={n})");
    let her_c = complete_disc_closed_form(n, c, &equal_class_sizes(n, c))?;
    let her_2 = complete_disc_closed_form(n, 2, &equal_class_sizes(n, 2))?;
    let lhs = Rational::new(BigInt::from(c), BigInt::from(4)) * &her_c;
    let mut report = CheckReport::inequality(format!("complete_ratio[c={c},k={k}]"), &label, lhs, her_2.clone())
        .witness("herdisc_c_closed_form", format_rational(&her_c))
        .witness("herdisc_2_closed_form", format_rational(&her_2));
    if n <= 8 {
        let h = complete_hypergraph(n)?;
        let brute_c = hereditary_disc(&h, c, budget)?.value;
        let brute_2 = hereditary_disc(&h, 2, budget)?.value;
        let agree = brute_c == her_c && brute_2 == her_2;
        report.pass &= agree;
        report = report.witness("brute_force", if agree { "agrees" } else { "disagrees" });
    }
    Ok(report)
}

/// A named corpus of instances.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub instances: Vec<InstanceSpec>,
    /// Colors for the hereditary comparisons.
    pub colors: Vec<usize>,
    pub max_len: usize,
    /// `(c, k)` pairs for the complete-hypergraph ratio.
    pub tight: Vec<(usize, usize)>,
}

impl Corpus {
    /// Complete hypergraphs `n = 2..=6`, balanced-pair hypergraphs
    /// `n = 1..=3` and 20 seeded random 0/1 matrices with `m in 2..=4`,
    /// `n in 4..=8`; colors `2..=5`; lengths up to 3.
    pub fn default_desk() -> Self {
        let mut instances: Vec<InstanceSpec> = (2..=6)
            .map(|n| InstanceSpec::new(Family::Complete { n }))
            .chain((1..=3).map(|n| InstanceSpec::new(Family::BalancedPair { n })))
            .collect();
        instances.extend(random_instances());
        Self {
            instances,
            colors: vec![2, 3, 4, 5],
            max_len: 3,
            tight: vec![(3, 1), (3, 2), (4, 2), (5, 2)],
        }
    }

    /// A few tiny instances, for quick runs.
    pub fn smoke() -> Self {
        Self {
            instances: vec![
                InstanceSpec::new(Family::Complete { n: 3 }),
                InstanceSpec::new(Family::BalancedPair { n: 1 }),
                InstanceSpec::new(Family::Random01 { m: 2, n: 4, density: 0.5, seed: 1 }),
            ],
            colors: vec![2, 3],
            max_len: 2,
            tight: vec![(3, 2)],
        }
    }

    pub fn empty() -> Self {
        Self {
            instances: Vec::new(),
            colors: Vec::new(),
            max_len: 0,
            tight: Vec::new(),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self::default_desk()),
            "smoke" => Ok(Self::smoke()),
            "empty" => Ok(Self::empty()),
            _ => Err(Error::input(format!("unknown corpus {name:?}; use default, smoke or empty"))),
        }
    }
}

/// The 20 random members of the default corpus: seed `s` in `1..=20` gives
/// `m = 2 + (s-1) mod 3`, `n = 4 + (s-1) mod 5`, density 1/2.
pub fn random_instances() -> Vec<InstanceSpec> {
    (1..=20u64)
        .map(|seed| {
            let s = (seed - 1) as usize;
            InstanceSpec::new(Family::Random01 {
                m: 2 + s % 3,
                n: 4 + s % 5,
                density: 0.5,
                seed,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct SuiteOptions {
    pub budget: Budget,
    pub fail_fast: bool,
    /// Multiplies every right-hand side; anything below 1 should make
    /// inequality checks fail. Used to test the harness itself.
    pub rhs_scale: Option<Rational>,
}


#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.checks.iter().map(CheckReport::to_json).collect())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n"
    }
}

/// Every check on one instance.
pub fn instance_checks(spec: &InstanceSpec, corpus: &Corpus, budget: &Budget) -> Result<Vec<CheckReport>> {
    let a = spec.build()?;
    let label = spec.label.as_str();
    let mut profile = Profile::new(label, &a, *budget);
    let mut out = vec![check_two_colors_vs_half(label, &a, budget)?];
    if corpus.colors.contains(&2) {
        out.push(check_weighted_vs_normal(&mut profile)?);
    }
    for &c in &corpus.colors {
        out.push(check_herdisc_vs_herwdisc(&mut profile, c)?);
    }
    for &a_col in &corpus.colors {
        for &b_col in &corpus.colors {
            out.push(check_quadratic_color_change(&mut profile, a_col, b_col)?);
            out.push(check_linear_color_scaling(&mut profile, a_col, b_col)?);
        }
    }
    for &c in corpus.colors.iter().filter(|&&c| c % 2 == 1) {
        out.extend(check_transfer(&mut profile, c, corpus.max_len)?);
    }
    Ok(out)
}

/// Runs every check over the corpus. Reports are ordered by
/// `(check id, instance label)` whatever the scheduling.
pub fn run_suite(corpus: &Corpus, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    if opts.fail_fast {
        for spec in &corpus.instances {
            let batch = instance_checks(spec, corpus, &opts.budget)?;
            let failed = batch.iter().any(|c| !c.pass);
            checks.extend(batch);
            if failed {
                break;
            }
        }
    } else {
        let batches = corpus
            .instances
            .par_iter()
            .map(|spec| instance_checks(spec, corpus, &opts.budget))
            .collect::<Result<Vec<_>>>()?;
        checks.extend(batches.into_iter().flatten());
    }
    let stop = opts.fail_fast && checks.iter().any(|c| !c.pass);
    if !stop {
        for &(c, k) in &corpus.tight {
            checks.push(check_tight_example(c, k, &opts.budget)?);
        }
    }
    if let Some(scale) = &opts.rhs_scale {
        for c in &mut checks {
            c.scale_rhs(scale);
        }
    }
    checks.sort_by(|x, y| (&x.check, &x.instance).cmp(&(&y.check, &y.instance)));
    Ok(SuiteReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(rows).unwrap()
    }

    #[test]
    fn two_colors_vs_half_examples() {
        let b = Budget::default();
        let r = check_two_colors_vs_half("one", &m(&[vec![1]]), &b).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs), (ratio(1, 2), ratio(1, 2)));
        let r = check_two_colors_vs_half("pair", &m(&[vec![1, 1]]), &b).unwrap();
        assert_eq!((r.lhs.clone(), r.pass), (int(0), true));
    }

    #[test]
    fn weighted_vs_normal_examples() {
        let z = Matrix::zeros(2, 3).unwrap();
        let mut p = Profile::new("zero", &z, Budget::default());
        let r = check_weighted_vs_normal(&mut p).unwrap();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs), (int(0), int(0)));

        let one = m(&[vec![1]]);
        let mut p = Profile::new("one", &one, Budget::default());
        let r = check_weighted_vs_normal(&mut p).unwrap();
        assert_eq!((r.lhs, r.rhs), (ratio(1, 2), int(1)));
    }

    #[test]
    fn color_comparison_examples() {
        let a = m(&[vec![1, 1, 1]]);
        let mut p = Profile::new("row", &a, Budget::default());
        let r = check_herdisc_vs_herwdisc(&mut p, 3).unwrap();
        assert_eq!(r.lhs, ratio(2, 3));
        assert!(r.pass);
        let r = check_linear_color_scaling(&mut p, 2, 2).unwrap();
        assert!(r.pass);
        let r = check_quadratic_color_change(&mut p, 3, 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn tight_example_values() {
        let b = Budget::default();
        let r = check_tight_example(3, 2, &b).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.slack.clone()), (int(2), int(3), int(1)));
        assert!(r.pass);
        let r = check_tight_example(4, 2, &b).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(3), int(4)));
        let r = check_tight_example(3, 1, &b).unwrap();
        assert_eq!(r.witnesses["brute_force"], "agrees");
        assert!(r.pass);
    }

    #[test]
    fn empty_corpus_is_empty_and_passes() {
        let r = run_suite(&Corpus::empty(), &SuiteOptions::default()).unwrap();
        assert!(r.checks.is_empty());
        assert!(r.all_pass());
        assert_eq!(r.to_json_string(), "[]\n");
    }

    #[test]
    fn scaled_rhs_is_reported_as_failure() {
        let opts = SuiteOptions {
            rhs_scale: Some(ratio(1, 10)),
            ..SuiteOptions::default()
        };
        let r = run_suite(&Corpus::smoke(), &opts).unwrap();
        assert!(!r.all_pass());
        let clean = run_suite(&Corpus::smoke(), &SuiteOptions::default()).unwrap();
        assert!(clean.all_pass(), "{:?}", clean.failures().collect::<Vec<_>>());
    }

    #[test]
    fn transfer_on_zero_matrix() {
        let z = Matrix::zeros(1, 3).unwrap();
        let mut p = Profile::new("zero", &z, Budget::default());
        let reports = check_transfer(&mut p, 3, 2).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert!(check_transfer(&mut p, 4, 2).is_err());
    }
}
