//! Upper bounds built from averaged squared minors: the `f`, `F` and `G`
//! families, their multidimensional versions, and the classical baselines.

pub mod baseline;
pub mod linalg;
pub mod report;
pub mod unit_circle;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::combinatorics::{
    binomial_f64, enumerate_subsets, factorial, Composition, IndexSet, OrderedPartition,
};
use crate::error::{Error, Result};
use crate::exact::{hafnian, hyperhafnian, multidim_permanent, permanent, ComplexMatrix, ComplexTensor, C64};

const PARALLEL_FROM: usize = 64;

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Mean of `f` over `items`. Terms are evaluated in parallel for long
/// streams and always reduced in the same tree order.
pub(crate) fn mean_of<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync + Send) -> f64 {
    if items.is_empty() {
        return 0.0;
    }
    let terms: Vec<f64> = if items.len() >= PARALLEL_FROM {
        items.par_iter().map(&f).collect()
    } else {
        items.iter().map(&f).collect()
    };
    pairwise_sum(&terms) / items.len() as f64
}

fn subsets(n: usize, k: usize) -> Vec<IndexSet> {
    enumerate_subsets(n, k).map(|s| s.collect()).unwrap_or_default()
}

fn check_columns(z: &ComplexMatrix, k: &IndexSet) -> Result<()> {
    if !k.within(z.cols()) {
        return Err(Error::domain(format!(
            "column set {:?} is not inside the {} columns",
            k.as_slice(),
            z.cols()
        )));
    }
    if k.len() > z.rows() {
        return Err(Error::domain(format!(
            "column set of size {} exceeds the {} rows",
            k.len(),
            z.rows()
        )));
    }
    Ok(())
}

fn check_square(z: &ComplexMatrix) -> Result<usize> {
    if !z.is_square() {
        return Err(Error::domain(format!("need a square matrix, got {}x{}", z.rows(), z.cols())));
    }
    Ok(z.rows())
}

fn check_partition_of(w: &OrderedPartition, k: &IndexSet) -> Result<()> {
    if w.ground() != k {
        return Err(Error::domain(format!(
            "partition covers {:?}, expected {:?}",
            w.ground().as_slice(),
            k.as_slice()
        )));
    }
    Ok(())
}

fn check_composition_total(w: &Composition, k: usize) -> Result<()> {
    if w.total() != k {
        return Err(Error::domain(format!(
            "composition {:?} sums to {}, expected {k}",
            w.parts(),
            w.total()
        )));
    }
    Ok(())
}

/// Product of `level(w_r)` over the parts, evaluating each distinct part once.
fn product_over_parts(w: &Composition, mut level: impl FnMut(usize) -> Result<f64>) -> Result<f64> {
    let mut cache = HashMap::new();
    let mut prod = 1.0;
    for &p in w.parts() {
        let v = match cache.get(&p) {
            Some(&v) => v,
            None => {
                let v = level(p)?;
                cache.insert(p, v);
                v
            }
        };
        prod *= v;
    }
    Ok(prod)
}

/// `f(Z, K) = (1/C(n,k)) sum_{J in Subs([n],k)} |per(Z[J,K]) / k!|^2`.
pub fn f_set(z: &ComplexMatrix, k: &IndexSet) -> Result<f64> {
    check_columns(z, k)?;
    if k.is_empty() {
        return Ok(1.0);
    }
    let scale = factorial(k.len());
    let rows = subsets(z.rows(), k.len());
    Ok(mean_of(&rows, |j| {
        let p = permanent(&z.submatrix_unchecked(j.as_slice(), k.as_slice())).expect("square minor");
        (p / scale).norm_sqr()
    }))
}

/// Average of [`f_set`] over all `k`-subsets of the columns.
#[allow(non_snake_case)]
pub fn F_level(z: &ComplexMatrix, k: usize) -> Result<f64> {
    if k > z.cols() || k > z.rows() {
        return Err(Error::domain(format!(
            "level {k} is out of range for a {}x{} matrix",
            z.rows(),
            z.cols()
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let scale = factorial(k);
    let rows = subsets(z.rows(), k);
    let cols = subsets(z.cols(), k);
    let pairs: Vec<(usize, usize)> = (0..cols.len())
        .flat_map(|c| (0..rows.len()).map(move |r| (c, r)))
        .collect();
    Ok(mean_of(&pairs, |&(c, r)| {
        let p = permanent(&z.submatrix_unchecked(rows[r].as_slice(), cols[c].as_slice()))
            .expect("square minor");
        (p / scale).norm_sqr()
    }))
}

/// `(1/C(n,k)) sum_J prod_{j in J} (1/k) sum_{r in K} |z_jr|^2`, evaluated as
/// an elementary symmetric polynomial of the row means.
pub fn f_tilde(z: &ComplexMatrix, k: &IndexSet) -> Result<f64> {
    check_columns(z, k)?;
    let kk = k.len();
    if kk == 0 {
        return Ok(1.0);
    }
    let q: Vec<f64> = (0..z.rows())
        .map(|j| k.iter().map(|&r| z.get(j, r).norm_sqr()).sum::<f64>() / kk as f64)
        .collect();
    let mut e = vec![0.0; kk + 1];
    e[0] = 1.0;
    for &x in &q {
        for i in (1..=kk).rev() {
            e[i] += e[i - 1] * x;
        }
    }
    Ok(e[kk] / binomial_f64(z.rows(), kk))
}

/// `prod_r f(Z, W_r)` for `W` a partition of `K`; at least `f(Z, K)`.
pub fn partition_bound_f(z: &ComplexMatrix, k: &IndexSet, w: &OrderedPartition) -> Result<f64> {
    check_columns(z, k)?;
    check_partition_of(w, k)?;
    w.blocks().iter().map(|b| f_set(z, b)).product()
}

/// `n! prod_r sqrt(f(Z, W_r))`, an upper bound of `|per(Z)|`.
pub fn permanent_bound_partition(z: &ComplexMatrix, w: &OrderedPartition) -> Result<f64> {
    let n = check_square(z)?;
    check_partition_of(w, &IndexSet::range(n))?;
    let p: f64 = w.blocks().iter().map(|b| f_set(z, b)).product::<Result<f64>>()?;
    Ok(factorial(n) * p.sqrt())
}

/// `prod_r F(Z, w_r)` for `w` a composition of `k`; at least `F(Z, k)`.
#[allow(non_snake_case)]
pub fn composition_bound_F(z: &ComplexMatrix, k: usize, w: &Composition) -> Result<f64> {
    check_composition_total(w, k)?;
    if k > z.cols() || k > z.rows() {
        return Err(Error::domain(format!("level {k} is out of range")));
    }
    product_over_parts(w, |p| F_level(z, p))
}

/// `n! prod_r sqrt(F(Z, w_r))`, an upper bound of `|per(Z)|`.
pub fn permanent_bound_composition(z: &ComplexMatrix, w: &Composition) -> Result<f64> {
    let n = check_square(z)?;
    check_composition_total(w, n)?;
    Ok(factorial(n) * product_over_parts(w, |p| F_level(z, p))?.sqrt())
}

/// Shape of an `(l+1)`-dimensional matrix `n x ... x n x m`: returns `(l, n, m)`.
fn tensor_shape(z: &ComplexTensor) -> Result<(usize, usize, usize)> {
    let dims = z.dims();
    if dims.len() < 2 {
        return Err(Error::domain("need a tensor with at least two axes"));
    }
    let ell = dims.len() - 1;
    let n = dims[0];
    if dims[..ell].iter().any(|&d| d != n) {
        return Err(Error::domain(format!("row axes must agree in size, got {dims:?}")));
    }
    let m = dims[ell];
    if m > n {
        return Err(Error::domain(format!("column axis {m} exceeds row size {n}")));
    }
    Ok((ell, n, m))
}

fn row_tuples(count: usize, ell: usize) -> Vec<Vec<usize>> {
    let total = count.pow(ell as u32);
    (0..total)
        .map(|mut x| {
            let mut t = vec![0; ell];
            for slot in t.iter_mut().rev() {
                *slot = x % count;
                x /= count;
            }
            t
        })
        .collect()
}

fn f_ell_with(z: &ComplexTensor, ell: usize, n: usize, k: &IndexSet) -> f64 {
    if k.is_empty() {
        return 1.0;
    }
    let rows = subsets(n, k.len());
    let scale = factorial(k.len()).powi(ell as i32);
    let tuples = row_tuples(rows.len(), ell);
    mean_of(&tuples, |t| {
        let mut sets: Vec<&IndexSet> = t.iter().map(|&i| &rows[i]).collect();
        sets.push(k);
        let p = multidim_permanent(&z.subtensor(&sets).expect("in range")).expect("cube minor");
        (p / scale).norm_sqr()
    })
}

/// `f_l(Z, K)`: the `l`-fold averaged squared `(l+1)`-dimensional minor.
pub fn f_ell_set(z: &ComplexTensor, k: &IndexSet) -> Result<f64> {
    let (ell, n, m) = tensor_shape(z)?;
    if !k.within(m) {
        return Err(Error::domain(format!("column set {:?} is outside 0..{m}", k.as_slice())));
    }
    Ok(f_ell_with(z, ell, n, k))
}

/// Average of [`f_ell_set`] over all `k`-subsets of the columns.
#[allow(non_snake_case)]
pub fn F_ell_level(z: &ComplexTensor, k: usize) -> Result<f64> {
    let (ell, n, m) = tensor_shape(z)?;
    if k > m {
        return Err(Error::domain(format!("level {k} exceeds {m} columns")));
    }
    let cols = subsets(m, k);
    Ok(pairwise_sum(&cols.iter().map(|c| f_ell_with(z, ell, n, c)).collect::<Vec<_>>()) / cols.len() as f64)
}

/// `prod_r f_l(Z, W_r)`.
pub fn partition_bound_f_ell(z: &ComplexTensor, k: &IndexSet, w: &OrderedPartition) -> Result<f64> {
    f_ell_set(z, k)?;
    check_partition_of(w, k)?;
    w.blocks().iter().map(|b| f_ell_set(z, b)).product()
}

/// `(n!)^l prod_r sqrt(f_l(Z, W_r))`, an upper bound of `|per_l(Z)|`.
pub fn multidim_bound_partition(z: &ComplexTensor, w: &OrderedPartition) -> Result<f64> {
    let (ell, n, m) = tensor_shape(z)?;
    if m != n {
        return Err(Error::domain("the permanent bound needs a cube"));
    }
    check_partition_of(w, &IndexSet::range(n))?;
    let p: f64 = w.blocks().iter().map(|b| f_ell_set(z, b)).product::<Result<f64>>()?;
    Ok(factorial(n).powi(ell as i32) * p.sqrt())
}

/// `prod_r F_l(Z, w_r)`.
#[allow(non_snake_case)]
pub fn composition_bound_F_ell(z: &ComplexTensor, k: usize, w: &Composition) -> Result<f64> {
    check_composition_total(w, k)?;
    F_ell_level(z, k)?;
    product_over_parts(w, |p| F_ell_level(z, p))
}

/// `(n!)^l prod_r sqrt(F_l(Z, w_r))`.
pub fn multidim_bound_composition(z: &ComplexTensor, w: &Composition) -> Result<f64> {
    let (ell, n, m) = tensor_shape(z)?;
    if m != n {
        return Err(Error::domain("the permanent bound needs a cube"));
    }
    check_composition_total(w, n)?;
    Ok(factorial(n).powi(ell as i32) * product_over_parts(w, |p| F_ell_level(z, p))?.sqrt())
}

fn check_even_symmetric(z: &ComplexMatrix) -> Result<usize> {
    let n = check_square(z)?;
    if n % 2 != 0 {
        return Err(Error::domain(format!("need even dimension, got {n}")));
    }
    if !z.is_symmetric() {
        return Err(Error::domain(format!(
            "need a symmetric matrix (asymmetry {:e})",
            z.asymmetry()
        )));
    }
    Ok(n)
}

/// `G(Z, k) = (1/C(n,2k)) sum_{J in Subs([n],2k)} |(k! 2^k / (2k)!) haf(Z[J,J])|^2`.
#[allow(non_snake_case)]
pub fn G_level(z: &ComplexMatrix, k: usize) -> Result<f64> {
    let n = check_even_symmetric(z)?;
    if 2 * k > n {
        return Err(Error::domain(format!("level {k} exceeds {}", n / 2)));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let scale = factorial(k) * 2f64.powi(k as i32) / factorial(2 * k);
    let sets = subsets(n, 2 * k);
    Ok(mean_of(&sets, |j| {
        let h = hafnian(&z.submatrix_unchecked(j.as_slice(), j.as_slice())).expect("symmetric minor");
        (h * scale).norm_sqr()
    }))
}

/// `(n!/(m! 2^m)) prod_r sqrt(G(Z, w_r))`, an upper bound of `|haf(Z)|`.
pub fn hafnian_bound(z: &ComplexMatrix, w: &Composition) -> Result<f64> {
    let n = check_even_symmetric(z)?;
    let m = n / 2;
    check_composition_total(w, m)?;
    let lead = factorial(n) / (factorial(m) * 2f64.powi(m as i32));
    Ok(lead * product_over_parts(w, |p| G_level(z, p))?.sqrt())
}

/// `G(Z, 1) = (1/(n(n-1))) sum_{j != r} |z_jr|^2`.
#[allow(non_snake_case)]
pub fn G1_closed_form(z: &ComplexMatrix) -> Result<f64> {
    let n = check_even_symmetric(z)?;
    if n < 2 {
        return Err(Error::domain("need n >= 2"));
    }
    let mut s = 0.0;
    for j in 0..n {
        for r in 0..n {
            if j != r {
                s += z.get(j, r).norm_sqr();
            }
        }
    }
    Ok(s / (n * (n - 1)) as f64)
}

/// `G(Z, 2) = ((n-4)!/n!) sum_{(u,v,w,x) distinct} |(z_uv z_wx + z_uw z_vx + z_ux z_vw)/3|^2`.
#[allow(non_snake_case)]
pub fn G2_closed_form(z: &ComplexMatrix) -> Result<f64> {
    let n = check_even_symmetric(z)?;
    if n < 4 {
        return Err(Error::domain("need n >= 4"));
    }
    let mut s = 0.0;
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for x in 0..n {
                    if u == v || u == w || u == x || v == w || v == x || w == x {
                        continue;
                    }
                    let t = z.get(u, v) * z.get(w, x) + z.get(u, w) * z.get(v, x) + z.get(u, x) * z.get(v, w);
                    s += (t / 3.0).norm_sqr();
                }
            }
        }
    }
    Ok(s * factorial(n - 4) / factorial(n))
}

fn check_symmetric_tensor(z: &ComplexTensor, ell: usize) -> Result<usize> {
    if ell == 0 || z.order() != ell {
        return Err(Error::domain(format!("need an order-{ell} tensor, got order {}", z.order())));
    }
    let n = z
        .cube_side()
        .ok_or_else(|| Error::domain("need equal axis sizes"))?;
    if n % ell != 0 {
        return Err(Error::domain(format!("side {n} is not divisible by {ell}")));
    }
    if !z.is_symmetric() {
        return Err(Error::domain("need a fully symmetric tensor"));
    }
    Ok(n)
}

/// `G_l(Z, k) = (1/C(n,lk)) sum_{J in Subs([n],lk)} |(k! (l!)^k / (lk)!) haf_l(Z[J,...,J])|^2`.
#[allow(non_snake_case)]
pub fn G_ell_level(z: &ComplexTensor, ell: usize, k: usize) -> Result<f64> {
    let n = check_symmetric_tensor(z, ell)?;
    if ell * k > n {
        return Err(Error::domain(format!("level {k} exceeds {}", n / ell)));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let scale = factorial(k) * factorial(ell).powi(k as i32) / factorial(ell * k);
    let sets = subsets(n, ell * k);
    Ok(mean_of(&sets, |j| {
        let axes = vec![j; ell];
        let h = hyperhafnian(&z.subtensor(&axes).expect("in range"), ell).expect("symmetric minor");
        (h * scale).norm_sqr()
    }))
}

/// `(n!/(m! (l!)^m)) prod_r sqrt(G_l(Z, w_r))`, an upper bound of `|haf_l(Z)|`.
pub fn hyperhafnian_bound(z: &ComplexTensor, ell: usize, w: &Composition) -> Result<f64> {
    let n = check_symmetric_tensor(z, ell)?;
    let m = n / ell;
    check_composition_total(w, m)?;
    let lead = factorial(n) / (factorial(m) * factorial(ell).powi(m as i32));
    Ok(lead * product_over_parts(w, |p| G_ell_level(z, ell, p))?.sqrt())
}

/// Sum of all permanental minors of order `k`.
pub fn minor_sum_phi(z: &ComplexMatrix, k: usize) -> Result<C64> {
    if k > z.cols() || k > z.rows() {
        return Err(Error::domain(format!("order {k} is out of range")));
    }
    let rows = subsets(z.rows(), k);
    let cols = subsets(z.cols(), k);
    let mut total = C64::new(0.0, 0.0);
    for c in &cols {
        for r in &rows {
            total += permanent(&z.submatrix_unchecked(r.as_slice(), c.as_slice()))?;
        }
    }
    Ok(total)
}

/// `C(m,k) C(n,k) k! sqrt(F(Z,k))`, an upper bound of `|phi(Z,k)|`.
pub fn phi_bound(z: &ComplexMatrix, k: usize) -> Result<f64> {
    let f = F_level(z, k)?;
    Ok(binomial_f64(z.cols(), k) * binomial_f64(z.rows(), k) * factorial(k) * f.sqrt())
}

/// Sum of all subhafnians of order `2k`.
pub fn subhafnian_sum_psi(z: &ComplexMatrix, k: usize) -> Result<C64> {
    let n = check_even_symmetric(z)?;
    if 2 * k > n {
        return Err(Error::domain(format!("order {k} exceeds {}", n / 2)));
    }
    let mut total = C64::new(0.0, 0.0);
    for j in subsets(n, 2 * k) {
        total += hafnian(&z.submatrix_unchecked(j.as_slice(), j.as_slice()))?;
    }
    Ok(total)
}

/// The two bounds of `|psi(Z,k)|`: with `sqrt(G(Z,k))` and with `G(Z,1)^{k/2}`.
pub fn psi_bounds(z: &ComplexMatrix, k: usize) -> Result<(f64, f64)> {
    let n = check_even_symmetric(z)?;
    let g = G_level(z, k)?;
    let lead = binomial_f64(n, 2 * k) * factorial(2 * k) / (factorial(k) * 2f64.powi(k as i32));
    let g1 = if n >= 2 { G_level(z, 1)? } else { 1.0 };
    Ok((lead * g.sqrt(), lead * g1.powf(k as f64 / 2.0)))
}
