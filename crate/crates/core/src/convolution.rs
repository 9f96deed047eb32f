//! Set functions on products of subset lattices, their subset convolutions,
//! and evaluation of both sides of the averaged convolution inequalities.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, binomial_f64, enumerate_partitions, enumerate_subsets, subsets_of, Composition, IndexSet, OrderedPartition};
use crate::error::{Error, Result};
use crate::exact::C64;

/// Squared modulus, for mean-square averages over real or complex tables.
pub trait Modulus: Copy {
    fn modulus_sq(self) -> f64;
}

impl Modulus for f64 {
    fn modulus_sq(self) -> f64 {
        self * self
    }
}

impl Modulus for C64 {
    fn modulus_sq(self) -> f64 {
        self.norm_sqr()
    }
}

/// A map `Subs(A_1, j_1) x ... x Subs(A_l, j_l) -> T` with `A_s = 0..n_s`,
/// stored densely by colex rank (axis 0 most significant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFunction<T> {
    grounds: Vec<usize>,
    levels: Vec<usize>,
    values: Vec<T>,
}

impl<T: Copy> SetFunction<T> {
    pub fn from_fn(grounds: Vec<usize>, levels: Vec<usize>, mut f: impl FnMut(&[IndexSet]) -> T) -> Result<Self> {
        if grounds.is_empty() || grounds.len() != levels.len() {
            return Err(Error::domain("need one level per ground set and at least one axis"));
        }
        if let Some(s) = (0..grounds.len()).find(|&s| levels[s] > grounds[s]) {
            return Err(Error::domain(format!(
                "level {} exceeds ground size {} on axis {s}",
                levels[s], grounds[s]
            )));
        }
        let axes: Vec<Vec<IndexSet>> = grounds
            .iter()
            .zip(&levels)
            .map(|(&n, &j)| (0..binomial(n, j) as usize).map(|r| IndexSet::from_colex_rank(r, j)).collect())
            .collect();
        let radix: Vec<usize> = axes.iter().map(Vec::len).collect();
        let len: usize = radix.iter().product();
        let mut values = Vec::with_capacity(len);
        let mut digits = vec![0usize; radix.len()];
        let mut tuple: Vec<IndexSet> = axes.iter().map(|a| a[0].clone()).collect();
        for _ in 0..len {
            for (s, &d) in digits.iter().enumerate() {
                tuple[s] = axes[s][d].clone();
            }
            values.push(f(&tuple));
            for s in (0..radix.len()).rev() {
                digits[s] += 1;
                if digits[s] < radix[s] {
                    break;
                }
                digits[s] = 0;
            }
        }
        Ok(SetFunction { grounds, levels, values })
    }

    /// Single-axis function on `Subs(0..n, j)`.
    pub fn single(n: usize, j: usize, f: impl FnMut(&IndexSet) -> T) -> Result<Self> {
        let mut f = f;
        Self::from_fn(vec![n], vec![j], |t| f(&t[0]))
    }

    /// Table in rank order (colex within each axis, axis 0 outermost).
    pub fn from_values(grounds: Vec<usize>, levels: Vec<usize>, values: Vec<T>) -> Result<Self> {
        let expected: u128 = grounds.iter().zip(&levels).map(|(&n, &j)| binomial(n, j)).product();
        if grounds.len() != levels.len() || values.len() as u128 != expected {
            return Err(Error::domain(format!("table needs {expected} values, got {}", values.len())));
        }
        Ok(SetFunction { grounds, levels, values })
    }

    pub fn arity(&self) -> usize {
        self.grounds.len()
    }

    pub fn grounds(&self) -> &[usize] {
        &self.grounds
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn offset(&self, sets: &[&IndexSet]) -> usize {
        let mut off = 0;
        for (s, set) in sets.iter().enumerate() {
            off = off * binomial(self.grounds[s], self.levels[s]) as usize + set.colex_rank();
        }
        off
    }

    /// Value at a tuple of subsets, with level and range checks.
    pub fn get(&self, sets: &[&IndexSet]) -> Result<T> {
        if sets.len() != self.arity() {
            return Err(Error::domain(format!("expected {} subsets, got {}", self.arity(), sets.len())));
        }
        for (s, set) in sets.iter().enumerate() {
            if set.len() != self.levels[s] || !set.within(self.grounds[s]) {
                return Err(Error::domain(format!(
                    "{:?} is not a {}-subset of 0..{} on axis {s}",
                    set.as_slice(),
                    self.levels[s],
                    self.grounds[s]
                )));
            }
        }
        Ok(self.values[self.offset(sets)])
    }

    fn at(&self, sets: &[&IndexSet]) -> T {
        self.values[self.offset(sets)]
    }
}

impl<T: Modulus> SetFunction<T> {
    /// `(1/prod_s C(n_s, j_s)) sum |value|^2`.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.modulus_sq()).sum::<f64>() / self.values.len() as f64
    }
}

/// Odometer over the cartesian product of per-axis lists.
fn for_each_tuple<X>(axes: &[Vec<X>], mut f: impl FnMut(&[&X])) {
    if axes.iter().any(Vec::is_empty) {
        return;
    }
    let mut digits = vec![0usize; axes.len()];
    loop {
        let tuple: Vec<&X> = digits.iter().enumerate().map(|(s, &d)| &axes[s][d]).collect();
        f(&tuple);
        let mut s = axes.len();
        loop {
            if s == 0 {
                return;
            }
            s -= 1;
            digits[s] += 1;
            if digits[s] < axes[s].len() {
                break;
            }
            digits[s] = 0;
        }
    }
}

fn check_pair(g: &SetFunction<f64>, h: &SetFunction<f64>) -> Result<Vec<usize>> {
    if g.grounds != h.grounds {
        return Err(Error::domain("g and h need the same ground sets"));
    }
    let ks: Vec<usize> = g.levels.iter().zip(&h.levels).map(|(a, b)| a + b).collect();
    if let Some(s) = (0..ks.len()).find(|&s| ks[s] > g.grounds[s]) {
        return Err(Error::domain(format!("levels add to {} > {} on axis {s}", ks[s], g.grounds[s])));
    }
    Ok(ks)
}

fn check_nonnegative(f: &SetFunction<f64>, name: &str) -> Result<()> {
    if f.values.iter().any(|&v| v.is_nan() || v < 0.0) {
        return Err(Error::domain(format!("{name} must be non-negative")));
    }
    Ok(())
}

/// `p(J) = sum_{I_s in Subs(J_s, j_s)} g(I) h(J \ I)`.
pub fn subset_convolution(g: &SetFunction<f64>, h: &SetFunction<f64>, js: &[&IndexSet]) -> Result<f64> {
    let ks = check_pair(g, h)?;
    if js.len() != ks.len() {
        return Err(Error::domain("one subset per axis"));
    }
    for (s, j) in js.iter().enumerate() {
        if j.len() != ks[s] || !j.within(g.grounds[s]) {
            return Err(Error::domain(format!("{:?} is not a {}-subset on axis {s}", j.as_slice(), ks[s])));
        }
    }
    Ok(convolve_unchecked(g, h, js))
}

fn convolve_unchecked(g: &SetFunction<f64>, h: &SetFunction<f64>, js: &[&IndexSet]) -> f64 {
    let inner: Vec<Vec<(IndexSet, IndexSet)>> = js
        .iter()
        .enumerate()
        .map(|(s, j)| {
            subsets_of(j, g.levels[s])
                .expect("level fits")
                .map(|i| {
                    let rest = j.difference(&i);
                    (i, rest)
                })
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for_each_tuple(&inner, |pairs| {
        let is: Vec<&IndexSet> = pairs.iter().map(|p| &p.0).collect();
        let rs: Vec<&IndexSet> = pairs.iter().map(|p| &p.1).collect();
        total += g.at(&is) * h.at(&rs);
    });
    total
}

/// Both sides of an averaged inequality and whether it holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityReport {
            lhs,
            rhs,
            holds: lhs <= rhs + 1e-12 * rhs.abs(),
        }
    }

    /// `|lhs - rhs| <= tol * max(rhs, 1)`.
    pub fn is_equality(&self, tol: f64) -> bool {
        (self.lhs - self.rhs).abs() <= tol * self.rhs.max(1.0)
    }
}

/// `(1/prod C(n_s,k_s)) sum_J (p(J) / prod C(k_s,j_s))^2` against
/// `mean(g^2) mean(h^2)`, for any number of axes.
pub fn verify_multi_inequality(g: &SetFunction<f64>, h: &SetFunction<f64>) -> Result<InequalityReport> {
    let ks = check_pair(g, h)?;
    check_nonnegative(g, "g")?;
    check_nonnegative(h, "h")?;
    let axes: Vec<Vec<IndexSet>> = ks
        .iter()
        .zip(&g.grounds)
        .map(|(&k, &n)| enumerate_subsets(n, k).map(|s| s.collect()))
        .collect::<Result<_>>()?;
    let norm: f64 = ks.iter().zip(&g.levels).map(|(&k, &j)| binomial_f64(k, j)).product();
    let mut sum = 0.0;
    let mut count = 0usize;
    for_each_tuple(&axes, |js| {
        let p = convolve_unchecked(g, h, js) / norm;
        sum += p * p;
        count += 1;
    });
    Ok(InequalityReport::new(sum / count as f64, g.mean_square() * h.mean_square()))
}

/// Single-axis case.
pub fn verify_convolution_inequality(g: &SetFunction<f64>, h: &SetFunction<f64>) -> Result<InequalityReport> {
    if g.arity() != 1 || h.arity() != 1 {
        return Err(Error::domain("single-axis inequality needs single-axis functions"));
    }
    verify_multi_inequality(g, h)
}

/// Tolerances of the equality classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityTolerances {
    /// Largest value treated as zero.
    pub zero: f64,
    /// Largest relative least-squares residual accepted as proportional.
    pub proportional: f64,
    /// Largest relative spread `(max - min) / max` accepted as constant.
    pub constant: f64,
}

impl Default for EqualityTolerances {
    fn default() -> Self {
        EqualityTolerances {
            zero: 1e-12,
            proportional: 1e-10,
            constant: 1e-10,
        }
    }
}

/// The five sufficient and necessary equality conditions of the
/// single-axis inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityCondition {
    DegenerateLevel,
    GVanishes,
    HVanishes,
    Complementary,
    BothConstant,
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn is_constant(xs: &[f64], tol: f64) -> bool {
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo <= tol * hi.abs().max(f64::MIN_POSITIVE)
}

/// Every condition satisfied by `(g, h)` for the single-axis inequality.
pub fn classify_equality(g: &SetFunction<f64>, h: &SetFunction<f64>, tol: &EqualityTolerances) -> Result<Vec<EqualityCondition>> {
    if g.arity() != 1 || h.arity() != 1 {
        return Err(Error::domain("the classifier handles single-axis functions"));
    }
    let ks = check_pair(g, h)?;
    check_nonnegative(g, "g")?;
    check_nonnegative(h, "h")?;
    let (n, j, k) = (g.grounds[0], g.levels[0], ks[0]);
    let mut out = Vec::new();
    if j == 0 || j == k {
        out.push(EqualityCondition::DegenerateLevel);
    }
    if max_abs(&g.values) <= tol.zero {
        out.push(EqualityCondition::GVanishes);
    }
    if max_abs(&h.values) <= tol.zero {
        out.push(EqualityCondition::HVanishes);
    }
    if k == n {
        let full = IndexSet::range(n);
        let pairs: Vec<(f64, f64)> = enumerate_subsets(n, j)?
            .map(|i| (g.at(&[&i]), h.at(&[&full.difference(&i)])))
            .collect();
        let hh: f64 = pairs.iter().map(|p| p.1 * p.1).sum();
        let x = if hh > 0.0 {
            (pairs.iter().map(|p| p.0 * p.1).sum::<f64>() / hh).max(0.0)
        } else {
            0.0
        };
        let resid = pairs.iter().fold(0.0f64, |m, p| m.max((p.0 - x * p.1).abs()));
        let scale = max_abs(&g.values).max(f64::MIN_POSITIVE);
        if resid <= tol.proportional * scale || max_abs(&g.values) <= tol.zero {
            out.push(EqualityCondition::Complementary);
        }
    }
    if is_constant(&g.values, tol.constant) && is_constant(&h.values, tol.constant) {
        out.push(EqualityCondition::BothConstant);
    }
    Ok(out)
}

/// Factor functions `g_1, ..., g_d` on a common product of ground sets; the
/// per-axis compositions are read off the factor levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedExpansionSpec {
    factors: Vec<SetFunction<C64>>,
}

impl GeneralizedExpansionSpec {
    pub fn new(factors: Vec<SetFunction<C64>>) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::domain("need at least one factor"))?;
        if factors.iter().any(|f| f.grounds != first.grounds) {
            return Err(Error::domain("all factors need the same ground sets"));
        }
        let spec = GeneralizedExpansionSpec { factors };
        if let Some(s) = (0..spec.arity()).find(|&s| spec.k(s) > spec.grounds()[s]) {
            return Err(Error::domain(format!("composition on axis {s} exceeds the ground set")));
        }
        Ok(spec)
    }

    pub fn factors(&self) -> &[SetFunction<C64>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors[0].arity()
    }

    pub fn grounds(&self) -> &[usize] {
        &self.factors[0].grounds
    }

    /// `w(s) = (w_{1,s}, ..., w_{d,s})`.
    pub fn composition(&self, s: usize) -> Composition {
        Composition::new(self.factors.iter().map(|f| f.levels[s]).collect()).expect("at least one factor")
    }

    /// `k_s = |w(s)|`.
    pub fn k(&self, s: usize) -> usize {
        self.factors.iter().map(|f| f.levels[s]).sum()
    }
}

/// `R(g, J_1..J_l) = sum over (V_{.,s}) in Part(J_s, w(s)) of prod_r g_r(V_{r,1}, ..., V_{r,l})`.
pub fn generalized_r(spec: &GeneralizedExpansionSpec, js: &[&IndexSet]) -> Result<C64> {
    if js.len() != spec.arity() {
        return Err(Error::domain("one subset per axis"));
    }
    for (s, j) in js.iter().enumerate() {
        if j.len() != spec.k(s) || !j.within(spec.grounds()[s]) {
            return Err(Error::domain(format!(
                "{:?} is not a {}-subset on axis {s}",
                j.as_slice(),
                spec.k(s)
            )));
        }
    }
    r_unchecked(spec, js)
}

fn r_unchecked(spec: &GeneralizedExpansionSpec, js: &[&IndexSet]) -> Result<C64> {
    let parts: Vec<Vec<OrderedPartition>> = js
        .iter()
        .enumerate()
        .map(|(s, j)| Ok(enumerate_partitions(j, &spec.composition(s))?.collect()))
        .collect::<Result<_>>()?;
    let mut total = C64::new(0.0, 0.0);
    for_each_tuple(&parts, |vs| {
        let mut prod = C64::new(1.0, 0.0);
        for (r, g) in spec.factors.iter().enumerate() {
            let sets: Vec<&IndexSet> = vs.iter().map(|v| &v.blocks()[r]).collect();
            prod *= g.at(&sets);
        }
        total += prod;
    });
    Ok(total)
}

/// Both sides of the master inequality, plus the full-set bound on `|R|`
/// when every `k_s = n_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MasterReport {
    pub inequality: InequalityReport,
    pub full: Option<InequalityReport>,
}

pub fn verify_master_inequality(spec: &GeneralizedExpansionSpec) -> Result<MasterReport> {
    let ell = spec.arity();
    let axes: Vec<Vec<IndexSet>> = (0..ell)
        .map(|s| enumerate_subsets(spec.grounds()[s], spec.k(s)).map(|x| x.collect()))
        .collect::<Result<_>>()?;
    let scale: f64 = (0..ell)
        .map(|s| spec.composition(s).factorial() / crate::combinatorics::factorial(spec.k(s)))
        .product();
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut err = None;
    for_each_tuple(&axes, |js| match r_unchecked(spec, js) {
        Ok(r) => {
            sum += (r * scale).norm_sqr();
            count += 1;
        }
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    let rhs: f64 = spec.factors.iter().map(SetFunction::mean_square).product();
    let inequality = InequalityReport::new(sum / count as f64, rhs);
    let full = if (0..ell).all(|s| spec.k(s) == spec.grounds()[s]) {
        let all: Vec<IndexSet> = spec.grounds().iter().map(|&n| IndexSet::range(n)).collect();
        let refs: Vec<&IndexSet> = all.iter().collect();
        let r = r_unchecked(spec, &refs)?.norm();
        let lead: f64 = (0..ell)
            .map(|s| crate::combinatorics::factorial(spec.grounds()[s]) / spec.composition(s).factorial())
            .product();
        Some(InequalityReport::new(r, lead * rhs.sqrt()))
    } else {
        None
    };
    Ok(MasterReport { inequality, full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::exact::{multidim_permanent, permanent, ComplexTensor};
    use crate::random::{random_matrix, random_tensor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(xs: &[usize]) -> IndexSet {
        IndexSet::new(xs.to_vec()).unwrap()
    }

    fn random_nonneg(rng: &mut impl Rng, n: usize, j: usize) -> SetFunction<f64> {
        SetFunction::single(n, j, |_| rng.gen_range(0.0..1.0)).unwrap()
    }

    #[test]
    fn table_lookup_roundtrip() {
        let f = SetFunction::from_fn(vec![4, 3], vec![2, 1], |t| (t[0].colex_rank() * 10 + t[1].as_slice()[0]) as f64).unwrap();
        assert_eq!(f.values().len(), 18);
        for a in enumerate_subsets(4, 2).unwrap() {
            for b in enumerate_subsets(3, 1).unwrap() {
                assert_eq!(f.get(&[&a, &b]).unwrap(), (a.colex_rank() * 10 + b.as_slice()[0]) as f64);
            }
        }
        assert!(f.get(&[&set(&[0]), &set(&[1])]).is_err());
        assert!(SetFunction::<f64>::from_values(vec![3], vec![1], vec![1.0; 2]).is_err());
    }

    #[test]
    fn convolution_examples() {
        let one = SetFunction::from_fn(vec![5, 4], vec![2, 1], |_| 1.0).unwrap();
        let one_h = SetFunction::from_fn(vec![5, 4], vec![1, 2], |_| 1.0).unwrap();
        let p = subset_convolution(&one, &one_h, &[&set(&[0, 1, 3]), &set(&[0, 2, 3])]).unwrap();
        assert_eq!(p, (binomial(3, 2) * binomial(3, 1)) as f64);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g0 = random_nonneg(&mut rng, 5, 0);
        let h = random_nonneg(&mut rng, 5, 3);
        let j = set(&[1, 2, 4]);
        assert_eq!(
            subset_convolution(&g0, &h, &[&j]).unwrap(),
            g0.get(&[&IndexSet::empty()]).unwrap() * h.get(&[&j]).unwrap()
        );

        // nested-loop oracle over bitmasks, j = 2, k = 4
        let g = random_nonneg(&mut rng, 5, 2);
        let h = random_nonneg(&mut rng, 5, 2);
        for jset in enumerate_subsets(5, 4).unwrap() {
            let jm: u32 = jset.iter().map(|&x| 1u32 << x).sum();
            let mut direct = 0.0;
            for im in 0u32..32 {
                if im & !jm != 0 || im.count_ones() != 2 {
                    continue;
                }
                let i = IndexSet::new((0..5).filter(|b| im >> b & 1 == 1).collect()).unwrap();
                let rest = IndexSet::new((0..5).filter(|b| (jm & !im) >> b & 1 == 1).collect()).unwrap();
                direct += g.get(&[&i]).unwrap() * h.get(&[&rest]).unwrap();
            }
            assert!((subset_convolution(&g, &h, &[&jset]).unwrap() - direct).abs() < 1e-14);
        }
        assert!(subset_convolution(&g, &h, &[&set(&[0, 1, 2])]).is_err());
    }

    #[test]
    fn inequality_equality_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (j, k) in [(0, 3), (3, 3)] {
            let g = random_nonneg(&mut rng, 5, j);
            let h = random_nonneg(&mut rng, 5, k - j);
            let r = verify_convolution_inequality(&g, &h).unwrap();
            assert!(r.is_equality(1e-12));
        }
        let h = random_nonneg(&mut rng, 5, 3);
        let full = IndexSet::range(5);
        let g = SetFunction::single(5, 2, |i| 0.7 * h.get(&[&full.difference(i)]).unwrap()).unwrap();
        let r = verify_convolution_inequality(&g, &h).unwrap();
        assert!(r.is_equality(1e-12));
        let tol = EqualityTolerances::default();
        assert!(classify_equality(&g, &h, &tol).unwrap().contains(&EqualityCondition::Complementary));

        let g = SetFunction::single(6, 2, |_| 0.3).unwrap();
        let h = SetFunction::single(6, 2, |_| 1.9).unwrap();
        assert!(verify_convolution_inequality(&g, &h).unwrap().is_equality(1e-12));
        assert_eq!(classify_equality(&g, &h, &tol).unwrap(), vec![EqualityCondition::BothConstant]);

        let zero = SetFunction::single(6, 2, |_| 0.0).unwrap();
        assert!(classify_equality(&zero, &h, &tol).unwrap().contains(&EqualityCondition::GVanishes));
        let neg = SetFunction::single(6, 2, |_| -1.0).unwrap();
        assert!(verify_convolution_inequality(&neg, &h).is_err());
    }

    #[test]
    fn strict_for_varying_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tol = EqualityTolerances::default();
        for _ in 0..20 {
            let g = random_nonneg(&mut rng, 5, 1);
            let h = random_nonneg(&mut rng, 5, 2);
            let r = verify_convolution_inequality(&g, &h).unwrap();
            assert!(r.holds && r.lhs < r.rhs * (1.0 - 1e-6));
            assert!(classify_equality(&g, &h, &tol).unwrap().is_empty());
        }
    }

    #[test]
    fn interchange_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_nonneg(&mut rng, 5, 1);
        let h = random_nonneg(&mut rng, 5, 3);
        let a = verify_convolution_inequality(&g, &h).unwrap();
        let b = verify_convolution_inequality(&h, &g).unwrap();
        assert!((a.lhs - b.lhs).abs() <= 1e-14 * a.lhs && (a.rhs - b.rhs).abs() <= 1e-14 * a.rhs);
    }

    #[test]
    fn multi_axis_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_nonneg(&mut rng, 5, 2);
        let h = random_nonneg(&mut rng, 5, 1);
        assert_eq!(verify_multi_inequality(&g, &h).unwrap(), verify_convolution_inequality(&g, &h).unwrap());

        let g = SetFunction::from_fn(vec![4, 4], vec![1, 2], |_| 2.0).unwrap();
        let h = SetFunction::from_fn(vec![4, 4], vec![2, 1], |_| 0.5).unwrap();
        let r = verify_multi_inequality(&g, &h).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14 && (r.rhs - 1.0).abs() < 1e-14);

        let g = SetFunction::from_fn(vec![4, 4], vec![1, 2], |_| rng.gen_range(0.0..1.0)).unwrap();
        let h = SetFunction::from_fn(vec![4, 4], vec![2, 1], |_| rng.gen_range(0.0..1.0)).unwrap();
        assert!(verify_multi_inequality(&g, &h).unwrap().holds);
    }

    #[test]
    fn generalized_r_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g1 = SetFunction::from_fn(vec![4, 5], vec![3, 2], |_| C64::new(rng.gen_range(-1.0..1.0), 0.4)).unwrap();
        let spec = GeneralizedExpansionSpec::new(vec![g1.clone()]).unwrap();
        let (a, b) = (set(&[0, 1, 3]), set(&[2, 4]));
        assert_eq!(generalized_r(&spec, &[&a, &b]).unwrap(), g1.get(&[&a, &b]).unwrap());
        assert!(verify_master_inequality(&spec).unwrap().inequality.is_equality(1e-12));

        let ones: Vec<SetFunction<C64>> = [(1, 2), (2, 0), (1, 1)]
            .iter()
            .map(|&(x, y)| SetFunction::from_fn(vec![5, 4], vec![x, y], |_| C64::new(1.0, 0.0)).unwrap())
            .collect();
        let spec = GeneralizedExpansionSpec::new(ones).unwrap();
        let r = generalized_r(&spec, &[&set(&[0, 1, 2, 4]), &set(&[0, 1, 3])]).unwrap();
        let count = factorial(4) / (1.0 * 2.0 * 1.0) * factorial(3) / 2.0;
        assert!((r.re - count).abs() < 1e-12 && r.im == 0.0);
    }

    #[test]
    fn permanent_minor_factors_reproduce_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = random_matrix(&mut rng, 5, 5);
        let cols = [set(&[0, 3]), set(&[1, 2, 4])];
        let factors = cols
            .iter()
            .map(|w| {
                SetFunction::single(5, w.len(), |v| permanent(&z.submatrix(v, w).unwrap()).unwrap()).unwrap()
            })
            .collect();
        let spec = GeneralizedExpansionSpec::new(factors).unwrap();
        let r = generalized_r(&spec, &[&IndexSet::range(5)]).unwrap();
        let p = permanent(&z).unwrap();
        assert!((r - p).norm() <= 1e-12 * p.norm());
        let rep = verify_master_inequality(&spec).unwrap();
        assert!(rep.inequality.holds && rep.full.unwrap().holds);

        let t = random_tensor(&mut rng, &[3, 3, 3]);
        let cols = [set(&[1]), set(&[0, 2])];
        let factors = cols
            .iter()
            .map(|w| {
                SetFunction::from_fn(vec![3, 3], vec![w.len(), w.len()], |v| {
                    multidim_permanent(&t.subtensor(&[&v[0], &v[1], w]).unwrap()).unwrap()
                })
                .unwrap()
            })
            .collect();
        let spec = GeneralizedExpansionSpec::new(factors).unwrap();
        let all = IndexSet::range(3);
        let r = generalized_r(&spec, &[&all, &all]).unwrap();
        let p = multidim_permanent(&t).unwrap();
        assert!((r - p).norm() <= 1e-12 * p.norm().max(1.0));
        let _ = ComplexTensor::from_matrix(&z);
    }

    #[test]
    fn master_inequality_random_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let factors = [2usize, 3]
                .iter()
                .map(|&w| {
                    SetFunction::single(5, w, |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap()
                })
                .collect();
            let spec = GeneralizedExpansionSpec::new(factors).unwrap();
            let rep = verify_master_inequality(&spec).unwrap();
            assert!(rep.inequality.holds && rep.full.unwrap().holds);
        }
    }
}
