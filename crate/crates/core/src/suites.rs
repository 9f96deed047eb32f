//! Seeded property suites: oracle equivalences, bound dominance, equality
//! constructions, the convolution inequalities and the characteristic
//! function bounds. Trial `i` draws from stream `i` of the seed, so a report
//! depends only on `(suite, seed, trials)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::baseline::{hadamard, haf_per, krauter, opnorm, singular, Applicability, NormKind};
use crate::bounds::{
    composition_bound_F, hafnian_bound, hyperhafnian_bound, multidim_bound_composition, multidim_bound_partition,
    partition_bound_f, permanent_bound_composition, permanent_bound_partition, phi_bound, psi_bounds, F_level,
    G_level, f_set, minor_sum_phi, subhafnian_sum_psi,
};
use crate::charfn::{
    avg_bound_charfn, exact_charfn, monte_carlo_charfn, pair_bound_charfn, random_model, CharFnMatrix,
    DiagonalSumModel, Distribution,
};
use crate::combinatorics::{factorial, Composition, IndexSet, OrderedPartition};
use crate::convolution::{
    classify_equality, generalized_r, verify_convolution_inequality, verify_master_inequality, verify_multi_inequality,
    EqualityTolerances, GeneralizedExpansionSpec, SetFunction,
};
use crate::error::{Error, Result};
use crate::exact::{
    hafnian, hafnian_by_definition, hyperhafnian, hyperhafnian_by_definition, multidim_permanent,
    multidim_permanent_by_definition, multidim_permanent_via_laplace, permanent, permanent_by_definition,
    permanent_via_laplace, hyperhafnian_via_expansion, ComplexMatrix, ComplexTensor, C64,
};
use crate::io::MatrixFile;
use crate::random::{
    random_matrix, random_partition, random_refinement, random_symmetric, random_symmetric_tensor, random_tensor,
};

/// Relative tolerance of oracle comparisons.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Relative slack allowed when a bound meets its target.
pub const DOMINANCE_SLACK: f64 = 1e-12;
/// Relative tolerance of equality constructions.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;
/// Trials of each Monte Carlo check.
pub const MC_TRIALS: usize = 100_000;
/// Monte Carlo is run in the first this many charfn trials.
pub const MC_CHECKS: usize = 10;
/// Failures kept in a report.
pub const MAX_REPORTED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Laplace,
    Dominance,
    Equality,
    Convolution,
    Master,
    Charfn,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Laplace,
        Suite::Dominance,
        Suite::Equality,
        Suite::Convolution,
        Suite::Master,
        Suite::Charfn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Laplace => "laplace",
            Suite::Dominance => "dominance",
            Suite::Equality => "equality",
            Suite::Convolution => "convolution",
            Suite::Master => "master",
            Suite::Charfn => "charfn",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse("--suite", format!("unknown suite \"{s}\"")))
    }
}

/// A violated check with enough data to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub check: String,
    pub detail: String,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

/// Outcomes of one trial.
#[derive(Default)]
struct Trial {
    checks: usize,
    failures: Vec<(String, String, Value)>,
}

impl Trial {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String, instance: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.failures.push((name.to_string(), detail(), instance()));
        }
    }

    fn close(&mut self, name: &str, got: C64, want: C64, tol: f64, instance: impl FnOnce() -> Value) {
        let ok = (got - want).norm() <= tol * got.norm().max(want.norm());
        self.check(name, ok, || format!("got {got}, expected {want}"), instance);
    }

    fn dominates(&mut self, name: &str, bound: f64, target: f64, instance: impl FnOnce() -> Value) {
        let ok = bound >= target - DOMINANCE_SLACK * bound.abs();
        self.check(name, ok, || format!("bound {bound:e} below target {target:e}"), instance);
    }

    fn equal(&mut self, name: &str, bound: f64, target: f64, instance: impl FnOnce() -> Value) {
        let ok = (bound - target).abs() <= EQUALITY_TOLERANCE * bound.abs().max(target.abs());
        self.check(name, ok, || format!("bound {bound:e} differs from {target:e}"), instance);
    }

    fn error(&mut self, name: &str, e: Error) {
        self.checks += 1;
        self.failures.push((name.to_string(), e.to_string(), Value::Null));
    }
}

fn matrix_json(z: &ComplexMatrix) -> Value {
    MatrixFile::Entries(z.clone()).to_value()
}

fn tensor_json(t: &ComplexTensor) -> Value {
    MatrixFile::Tensor(t.clone()).to_value()
}

fn partition_json(p: &OrderedPartition) -> Value {
    json!(p.blocks().iter().map(|b| b.iter().map(|x| x + 1).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn random_blocks(rng: &mut impl Rng, ground: &IndexSet) -> OrderedPartition {
    let d = rng.gen_range(1..=3);
    random_partition(rng, ground, d)
}

fn random_composition(rng: &mut impl Rng, k: usize, max_parts: usize) -> Composition {
    let d = rng.gen_range(1..=max_parts.max(1));
    let mut parts = vec![0; d];
    for _ in 0..k {
        parts[rng.gen_range(0..d)] += 1;
    }
    Composition::new(parts).expect("non-empty")
}

/// Runs `trials` trials of a suite.
pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> SuiteReport {
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut t = Trial::default();
            let outcome = match suite {
                Suite::Laplace => laplace_trial(&mut rng, i, &mut t),
                Suite::Dominance => dominance_trial(&mut rng, i, &mut t),
                Suite::Equality => equality_trial(&mut rng, i, &mut t),
                Suite::Convolution => convolution_trial(&mut rng, i, &mut t),
                Suite::Master => master_trial(&mut rng, i, &mut t),
                Suite::Charfn => charfn_trial(&mut rng, i, &mut t),
            };
            if let Err(e) = outcome {
                t.error("evaluation", e);
            }
            t
        })
        .collect();
    let checks = results.iter().map(|t| t.checks).sum();
    let all: Vec<Failure> = results
        .into_iter()
        .enumerate()
        .flat_map(|(trial, t)| {
            t.failures.into_iter().map(move |(check, detail, instance)| Failure {
                trial,
                check,
                detail,
                instance,
            })
        })
        .collect();
    let failed = all.len();
    SuiteReport {
        suite,
        seed,
        trials,
        checks,
        failed,
        failures: all.into_iter().take(MAX_REPORTED).collect(),
        pass: failed == 0,
    }
}

fn laplace_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    // permanent, n <= 7, against the sum over permutations
    let n = 1 + i % 7;
    let z = random_matrix(rng, n, n);
    let d = rng.gen_range(1..=3);
    let cols = random_partition(rng, &IndexSet::range(n), d);
    let direct = permanent_by_definition(&z)?;
    let inst = || json!({"matrix": matrix_json(&z), "columns": partition_json(&cols)});
    t.close("per laplace", permanent_via_laplace(&z, &cols.type_of(), &cols)?, direct, ORACLE_TOLERANCE, inst);
    t.close("per glynn", permanent(&z)?, direct, ORACLE_TOLERANCE, inst);

    // three-way permanent, k <= 4
    let k = 1 + i % 4;
    let z3 = random_tensor(rng, &[k, k, k]);
    let cols = random_blocks(rng, &IndexSet::range(k));
    let direct = multidim_permanent_by_definition(&z3)?;
    let inst = || json!({"tensor": tensor_json(&z3), "columns": partition_json(&cols)});
    let w = cols.type_of();
    t.close("per_l laplace", multidim_permanent_via_laplace(&z3, &w, &cols, false)?, direct, ORACLE_TOLERANCE, inst);
    t.close(
        "per_l symmetrized laplace",
        multidim_permanent_via_laplace(&z3, &w, &cols, true)?,
        direct,
        ORACLE_TOLERANCE,
        inst,
    );
    t.close("per_l kernel", multidim_permanent(&z3)?, direct, ORACLE_TOLERANCE, inst);

    // hafnian, n <= 8
    let m = 1 + i % 4;
    let h = random_symmetric(rng, 2 * m);
    let w = random_composition(rng, m, 3);
    let direct = hafnian_by_definition(&h)?;
    let inst = || json!({"matrix": matrix_json(&h), "composition": w.parts()});
    let via = hyperhafnian_via_expansion(&ComplexTensor::from_matrix(&h), 2, &w)?;
    t.close("haf expansion", via, direct, ORACLE_TOLERANCE, inst);
    t.close("haf kernel", hafnian(&h)?, direct, ORACLE_TOLERANCE, inst);

    // hyperhafnian, l = 3, n = 6
    let y = random_symmetric_tensor(rng, 3, 6);
    let w = random_composition(rng, 2, 3);
    let direct = hyperhafnian_by_definition(&y, 3)?;
    let inst = || json!({"tensor": tensor_json(&y), "composition": w.parts()});
    t.close("haf_3 expansion", hyperhafnian_via_expansion(&y, 3, &w)?, direct, ORACLE_TOLERANCE, inst);
    t.close("haf_3 kernel", hyperhafnian(&y, 3)?, direct, ORACLE_TOLERANCE, inst);
    Ok(())
}

fn sign_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0))
}

fn dominance_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    let n = 1 + i % 6;
    let z = if n >= 5 && i.is_multiple_of(4) { sign_matrix(rng, n) } else { random_matrix(rng, n, n) };
    let p = permanent(&z)?.norm();
    let full = IndexSet::range(n);
    let coarse = random_blocks(rng, &full);
    let fine = random_refinement(rng, &coarse, 3);
    let w = random_composition(rng, n, 4);
    let inst = || json!({"matrix": matrix_json(&z), "partition": partition_json(&coarse), "refinement": partition_json(&fine), "composition": w.parts()});
    t.dominates("per <= partition bound", permanent_bound_partition(&z, &coarse)?, p, inst);
    t.dominates("per <= composition bound", permanent_bound_composition(&z, &w)?, p, inst);
    t.dominates("f <= prod f", partition_bound_f(&z, &full, &coarse)?, f_set(&z, &full)?, inst);
    t.dominates(
        "refinement is weaker",
        partition_bound_f(&z, &full, &fine)?,
        partition_bound_f(&z, &full, &coarse)?,
        inst,
    );
    let k = rng.gen_range(0..=n);
    let wk = random_composition(rng, k, 3);
    t.dominates("F <= prod F", composition_bound_F(&z, k, &wk)?, F_level(&z, k)?, inst);
    t.dominates("phi bound", phi_bound(&z, k)?, minor_sum_phi(&z, k)?.norm(), inst);
    t.dominates("hadamard", hadamard(&z)?, p, inst);
    for kind in [NormKind::One, NormKind::Two, NormKind::Infinity] {
        t.dominates("operator norm", opnorm(&z, kind)?, p, inst);
    }
    t.dominates("singular values", singular(&z)?, p, inst);
    if let Applicability::Value(b) = krauter(&z)? {
        t.dominates("krauter", b, p, inst);
    }

    let k3 = 1 + i % 4;
    let z3 = random_tensor(rng, &[k3, k3, k3]);
    let p3 = multidim_permanent(&z3)?.norm();
    let part = random_blocks(rng, &IndexSet::range(k3));
    let w3 = random_composition(rng, k3, 3);
    let inst = || json!({"tensor": tensor_json(&z3), "partition": partition_json(&part), "composition": w3.parts()});
    t.dominates("per_l <= partition bound", multidim_bound_partition(&z3, &part)?, p3, inst);
    t.dominates("per_l <= composition bound", multidim_bound_composition(&z3, &w3)?, p3, inst);

    let m = 1 + i % 4;
    let h = random_symmetric(rng, 2 * m);
    let hv = hafnian(&h)?.norm();
    let wm = random_composition(rng, m, 3);
    let kk = rng.gen_range(0..=m);
    let wk = random_composition(rng, kk, 3);
    let inst = || json!({"matrix": matrix_json(&h), "composition": wm.parts(), "level": kk, "level_composition": wk.parts()});
    t.dominates("haf <= G bound", hafnian_bound(&h, &wm)?, hv, inst);
    let gprod: f64 = wk.parts().iter().map(|&p| G_level(&h, p)).product::<Result<f64>>()?;
    t.dominates("G <= prod G", gprod, G_level(&h, kk)?, inst);
    let psi = subhafnian_sum_psi(&h, kk)?.norm();
    let (b1, b2) = psi_bounds(&h, kk)?;
    t.dominates("psi <= G bound", b1, psi, inst);
    t.dominates("psi <= G1 bound", b2, psi, inst);
    t.dominates("haf <= sqrt per |Z|", haf_per(&h)?, hv, inst);

    let side = if i.is_multiple_of(2) { 3 } else { 6 };
    let y = random_symmetric_tensor(rng, 3, side);
    let yv = hyperhafnian(&y, 3)?.norm();
    let wy = random_composition(rng, side / 3, 3);
    let inst = || json!({"tensor": tensor_json(&y), "composition": wy.parts()});
    t.dominates("haf_3 <= G_3 bound", hyperhafnian_bound(&y, 3, &wy)?, yv, inst);
    Ok(())
}

fn unit(rng: &mut impl Rng) -> C64 {
    C64::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(-3.0..3.0))
}

fn equality_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    let n = 1 + i % 6;
    let c = unit(rng);
    let z = ComplexMatrix::constant(n, n, c);
    let p = permanent(&z)?.norm();
    let full = IndexSet::range(n);
    let part = random_blocks(rng, &full);
    let w = random_composition(rng, n, 4);
    let inst = || json!({"matrix": matrix_json(&z), "partition": partition_json(&part), "composition": w.parts()});
    t.equal("constant: partition bound", permanent_bound_partition(&z, &part)?, p, inst);
    t.equal("constant: composition bound", permanent_bound_composition(&z, &w)?, p, inst);

    // rows all equal: every per(Z[J, W_r]) is the same number
    let row: Vec<C64> = (0..n).map(|_| unit(rng)).collect();
    let y = ComplexMatrix::from_fn(n, n, |_, r| row[r]);
    let inst = || json!({"matrix": matrix_json(&y), "partition": partition_json(&part)});
    t.equal("identical rows", partition_bound_f(&y, &full, &part)?, f_set(&y, &full)?, inst);
    // a zero column inside a block: both sides vanish
    let mut y0 = random_matrix(rng, n, n);
    let zero_col = rng.gen_range(0..n);
    for j in 0..n {
        y0.set(j, zero_col, C64::new(0.0, 0.0));
    }
    let lhs = partition_bound_f(&y0, &full, &part)?;
    let rhs = f_set(&y0, &full)?;
    t.check(
        "zero column",
        lhs == 0.0 && rhs == 0.0,
        || format!("{lhs:e} vs {rhs:e}"),
        || json!({"matrix": matrix_json(&y0), "partition": partition_json(&part)}),
    );

    let k3 = 1 + i % 4;
    let t3 = ComplexTensor::constant(3, k3, c);
    let p3 = multidim_permanent(&t3)?.norm();
    let part3 = random_blocks(rng, &IndexSet::range(k3));
    let inst = || json!({"tensor": tensor_json(&t3), "partition": partition_json(&part3)});
    t.equal("constant: per_l bound", multidim_bound_partition(&t3, &part3)?, p3, inst);

    let m = 1 + i % 4;
    let diag = unit(rng);
    let h = ComplexMatrix::from_fn(2 * m, 2 * m, |a, b| if a == b { diag } else { c });
    let wm = random_composition(rng, m, 3);
    let hv = hafnian(&h)?.norm();
    let inst = || json!({"matrix": matrix_json(&h), "composition": wm.parts()});
    t.equal("constant off-diagonal: haf bound", hafnian_bound(&h, &wm)?, hv, inst);
    let closed = factorial(2 * m) / (factorial(m) * 2f64.powi(m as i32)) * c.norm().powi(m as i32);
    t.equal("constant off-diagonal: haf value", hv, closed, inst);
    let kk = rng.gen_range(0..=m);
    let psi = subhafnian_sum_psi(&h, kk)?.norm();
    let (b1, b2) = psi_bounds(&h, kk)?;
    t.equal("constant off-diagonal: psi G bound", b1, psi, inst);
    t.equal("constant off-diagonal: psi G1 bound", b2, psi, inst);

    let side = if i.is_multiple_of(2) { 3 } else { 6 };
    let y3 = ComplexTensor::constant(3, side, c);
    let wy = random_composition(rng, side / 3, 3);
    let inst = || json!({"tensor": tensor_json(&y3), "composition": wy.parts()});
    t.equal("constant: haf_3 bound", hyperhafnian_bound(&y3, 3, &wy)?, hyperhafnian(&y3, 3)?.norm(), inst);

    // a constant characteristic-function matrix
    if n >= 2 {
        let d = Distribution::Normal {
            mean: rng.gen_range(-1.0..1.0),
            variance: rng.gen_range(0.0..1.0),
        };
        let model = DiagonalSumModel::new(CharFnMatrix::new(vec![vec![d; n]; n])?);
        let tv = rng.gen_range(-3.0..3.0);
        let e = exact_charfn(&model, tv)?.norm();
        let s: Vec<usize> = (0..n).collect();
        let inst = || json!({"model": model, "t": tv});
        t.equal("constant: charfn avg bound", avg_bound_charfn(&model, tv)?, e, inst);
        t.equal("constant: charfn pair bound", pair_bound_charfn(&model, tv, &s)?, e, inst);
    }
    Ok(())
}

/// The `(n, j, k)` triple of trial `i` in a sweep over `n <= 5`, `j <= k <= n`.
pub fn convolution_case(i: usize) -> (usize, usize, usize) {
    let cases: Vec<(usize, usize, usize)> = (0..=5)
        .flat_map(|n| (0..=n).flat_map(move |k| (0..=k).map(move |j| (n, j, k))))
        .collect();
    cases[i % cases.len()]
}

/// Number of `(n, j, k)` triples in the sweep.
pub fn convolution_cases() -> usize {
    (0..=5).map(|n| (n + 1) * (n + 2) / 2).sum()
}

/// A pair `(g, h)` for the single-axis inequality: random non-negative, with
/// every fifth instance drawn from an equality family.
pub fn convolution_instance(rng: &mut impl Rng, n: usize, j: usize, k: usize, variant: usize) -> (SetFunction<f64>, SetFunction<f64>) {
    let uniform = |lvl: usize, rng: &mut dyn rand::RngCore| {
        SetFunction::single(n, lvl, |_| rng.gen_range(0.0..1.0)).expect("level fits")
    };
    let (g, h) = (uniform(j, rng), uniform(k - j, rng));
    if variant % 5 != 4 {
        return (g, h);
    }
    match rng.gen_range(0..4) {
        0 => {
            let (a, b) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));
            (
                SetFunction::single(n, j, |_| a).expect("level fits"),
                SetFunction::single(n, k - j, |_| b).expect("level fits"),
            )
        }
        1 => (SetFunction::single(n, j, |_| 0.0).expect("level fits"), h),
        2 => (g, SetFunction::single(n, k - j, |_| 0.0).expect("level fits")),
        _ if k == n => {
            let x = rng.gen_range(0.0..3.0);
            let full = IndexSet::range(n);
            let g = SetFunction::single(n, j, |i| x * h.get(&[&full.difference(i)]).expect("in range")).expect("level fits");
            (g, h)
        }
        _ => (g, h),
    }
}

fn convolution_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    let tol = EqualityTolerances::default();
    for case in 0..convolution_cases() {
        let (n, j, k) = convolution_case(case);
        let (g, h) = convolution_instance(rng, n, j, k, i);
        let r = verify_convolution_inequality(&g, &h)?;
        let conds = classify_equality(&g, &h, &tol)?;
        let inst = || json!({"g": g, "h": h});
        t.check("convolution inequality", r.holds, || format!("lhs {:e} > rhs {:e}", r.lhs, r.rhs), inst);
        let eq = r.is_equality(tol.proportional);
        t.check(
            "equality iff a listed condition",
            eq == !conds.is_empty(),
            || format!("lhs {:e}, rhs {:e}, conditions {conds:?}", r.lhs, r.rhs),
            inst,
        );
        let swapped = verify_convolution_inequality(&h, &g)?;
        t.check(
            "interchange symmetry",
            (swapped.lhs - r.lhs).abs() <= 1e-12 * r.lhs.max(1e-300) && (swapped.rhs - r.rhs).abs() <= 1e-12 * r.rhs.max(1e-300),
            || format!("{r:?} vs {swapped:?}"),
            inst,
        );
    }
    Ok(())
}

fn random_complex_factors(rng: &mut impl Rng, grounds: &[usize]) -> Vec<SetFunction<C64>> {
    let d = rng.gen_range(1..=3);
    let mut levels = vec![vec![0; grounds.len()]; d];
    for (s, &n) in grounds.iter().enumerate() {
        let k = rng.gen_range(0..=n);
        for _ in 0..k {
            levels[rng.gen_range(0..d)][s] += 1;
        }
    }
    levels
        .into_iter()
        .map(|lv| {
            SetFunction::from_fn(grounds.to_vec(), lv, |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .expect("levels fit")
        })
        .collect()
}

fn master_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    let grounds: Vec<usize> = if i.is_multiple_of(2) {
        vec![rng.gen_range(1..=5)]
    } else {
        vec![rng.gen_range(1..=4), rng.gen_range(1..=4)]
    };
    let spec = GeneralizedExpansionSpec::new(random_complex_factors(rng, &grounds))?;
    let rep = verify_master_inequality(&spec)?;
    let inst = || json!({"factors": spec.factors()});
    t.check("master inequality", rep.inequality.holds, || format!("{:?}", rep.inequality), inst);
    if let Some(full) = rep.full {
        t.check("full-set bound", full.holds, || format!("{full:?}"), inst);
    }

    // two axes, non-negative
    let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let (k1, k2) = (rng.gen_range(0..=n1), rng.gen_range(0..=n2));
    let (j1, j2) = (rng.gen_range(0..=k1), rng.gen_range(0..=k2));
    let g = SetFunction::from_fn(vec![n1, n2], vec![j1, j2], |_| rng.gen_range(0.0..1.0))?;
    let h = SetFunction::from_fn(vec![n1, n2], vec![k1 - j1, k2 - j2], |_| rng.gen_range(0.0..1.0))?;
    let r = verify_multi_inequality(&g, &h)?;
    t.check("two-axis convolution inequality", r.holds, || format!("{r:?}"), || json!({"g": g, "h": h}));

    // permanental minors of fixed column blocks reproduce the permanent
    let n = 1 + i % 5;
    let z = random_matrix(rng, n, n);
    let cols = random_blocks(rng, &IndexSet::range(n));
    let factors = cols
        .blocks()
        .iter()
        .map(|w| SetFunction::single(n, w.len(), |v| permanent(&z.submatrix(v, w).expect("in range")).expect("square")))
        .collect::<Result<Vec<_>>>()?;
    let spec = GeneralizedExpansionSpec::new(factors)?;
    let r = generalized_r(&spec, &[&IndexSet::range(n)])?;
    t.close(
        "R of minors is the permanent",
        r,
        permanent_by_definition(&z)?,
        ORACLE_TOLERANCE,
        || json!({"matrix": matrix_json(&z), "columns": partition_json(&cols)}),
    );
    Ok(())
}

fn charfn_trial(rng: &mut ChaCha8Rng, i: usize, t: &mut Trial) -> Result<()> {
    let n = 2 + i % 5;
    let model = random_model(rng, n);
    for _ in 0..20 {
        let tv = rng.gen_range(-6.0..6.0);
        let mut s: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(s.as_mut_slice(), rng);
        let e = exact_charfn(&model, tv)?.norm();
        let pb = pair_bound_charfn(&model, tv, &s)?;
        let ab = avg_bound_charfn(&model, tv)?;
        let inst = || json!({"model": model, "t": tv, "s": s.iter().map(|x| x + 1).collect::<Vec<_>>()});
        t.check("|phi| <= pair bound", e <= pb + 1e-10, || format!("{e:e} > {pb:e}"), inst);
        t.check("|phi| <= avg bound", e <= ab + 1e-10, || format!("{e:e} > {ab:e}"), inst);
        t.check(
            "bounds in [0, 1]",
            (0.0..=1.0 + 1e-12).contains(&pb) && (0.0..=1.0 + 1e-12).contains(&ab),
            || format!("{pb:e}, {ab:e}"),
            inst,
        );
    }
    if i < MC_CHECKS {
        let tv = rng.gen_range(-3.0..3.0);
        let seed = rng.gen();
        let est = monte_carlo_charfn(&model, tv, MC_TRIALS, seed)?;
        let exact = exact_charfn(&model, tv)?;
        let z = est.z_score(exact);
        t.check(
            "Monte Carlo within 4 standard errors",
            z < 4.0,
            || format!("estimate {} vs exact {exact}, z = {z:.2}", est.mean),
            || json!({"model": model, "t": tv, "seed": seed, "trials": MC_TRIALS}),
        );
    }
    Ok(())
}
