//! Permanents and multidimensional permanents.

use rayon::prelude::*;

use super::matrix::{ComplexMatrix, ComplexTensor, MinorSelector, C64};
use crate::combinatorics::{permutations, IndexSet};
use crate::error::{Error, Result};

/// Sizes from which the Gray-code loop is split into fixed chunks and
/// evaluated in parallel. The chunking does not depend on the thread
/// count, so the result is bit-stable.
const PARALLEL_FROM: usize = 16;
const CHUNK_BITS: u32 = 10;

/// Permanent of a square matrix (Glynn's formula walked in Gray-code order,
/// `O(2^(n-1) n)`). The empty matrix has permanent 1.
pub fn permanent(z: &ComplexMatrix) -> Result<C64> {
    if !z.is_square() {
        return Err(Error::domain(format!(
            "permanent needs a square matrix, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    Ok(glynn(z))
}

/// Permanent straight from the definition, summing all `n!` products.
/// Kept as an oracle for the fast kernel.
pub fn permanent_by_definition(z: &ComplexMatrix) -> Result<C64> {
    if !z.is_square() {
        return Err(Error::domain("permanent needs a square matrix"));
    }
    Ok(permutations(z.rows())
        .map(|p| p.iter().enumerate().map(|(i, &j)| z.get(i, j)).product::<C64>())
        .sum())
}

/// Glynn: per(A) = 2^{1-n} sum_{delta, delta_0 = 1} (prod delta) prod_j sum_i delta_i a_ij.
pub(crate) fn glynn(z: &ComplexMatrix) -> C64 {
    let n = z.rows();
    match n {
        0 => return C64::new(1.0, 0.0),
        1 => return z.get(0, 0),
        _ => {}
    }
    let steps: u64 = 1 << (n - 1);
    let total = if n >= PARALLEL_FROM {
        let chunk = 1u64 << CHUNK_BITS.min(n as u32 - 1);
        let chunks = steps / chunk;
        let partial: Vec<C64> = (0..chunks)
            .into_par_iter()
            .map(|c| glynn_range(z, c * chunk, (c + 1) * chunk))
            .collect();
        pairwise_sum(&partial)
    } else {
        glynn_range(z, 0, steps)
    };
    total / (steps as f64)
}

/// Sum of the Glynn terms for Gray-code positions `start..end`. Row `i + 1`
/// carries sign `-1` exactly when bit `i` of `gray(g)` is set.
fn glynn_range(z: &ComplexMatrix, start: u64, end: u64) -> C64 {
    let n = z.rows();
    let gray = start ^ (start >> 1);
    let mut sums: Vec<C64> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let neg = i > 0 && (gray >> (i - 1)) & 1 == 1;
                    if neg {
                        -z.get(i, j)
                    } else {
                        z.get(i, j)
                    }
                })
                .sum()
        })
        .collect();
    let mut sign = if gray.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut acc = sign * sums.iter().product::<C64>();
    let mut cur = gray;
    for g in start + 1..end {
        let bit = g.trailing_zeros() as usize;
        let row = bit + 1;
        let was_neg = (cur >> bit) & 1 == 1;
        cur ^= 1 << bit;
        let r = z.row(row);
        if was_neg {
            for (s, a) in sums.iter_mut().zip(r) {
                *s += 2.0 * a;
            }
        } else {
            for (s, a) in sums.iter_mut().zip(r) {
                *s -= 2.0 * a;
            }
        }
        sign = -sign;
        acc += sign * sums.iter().product::<C64>();
    }
    acc
}

pub(crate) fn pairwise_sum(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// `per(Z[J, K])` for a single-row-set selector.
pub fn permanent_minor(z: &ComplexMatrix, sel: &MinorSelector) -> Result<C64> {
    let [rows] = sel.rows.as_slice() else {
        return Err(Error::domain("a matrix minor takes exactly one row set"));
    };
    if rows.len() != sel.cols.len() {
        return Err(Error::domain(format!(
            "minor {}x{} is not square",
            rows.len(),
            sel.cols.len()
        )));
    }
    permanent(&z.submatrix(rows, &sel.cols)?)
}

fn check_multidim(z: &ComplexTensor) -> Result<usize> {
    if z.order() < 2 {
        return Err(Error::domain("a multidimensional permanent needs at least two axes"));
    }
    z.cube_side()
        .ok_or_else(|| Error::domain(format!("ragged tensor of shape {:?}", z.dims())))
}

/// `(l+1)`-dimensional permanent of a tensor whose `l+1` axes all have the
/// same size `k`. The first `l-1` row maps are enumerated; the last one is
/// summed as an ordinary permanent.
pub fn multidim_permanent(z: &ComplexTensor) -> Result<C64> {
    let k = check_multidim(z)?;
    let ell = z.order() - 1;
    if k == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if ell == 1 {
        return Ok(glynn(&z.to_matrix()?));
    }
    let perms: Vec<Vec<usize>> = permutations(k).collect();
    let mut choice = vec![0usize; ell - 1];
    let mut total = C64::new(0.0, 0.0);
    let mut idx = vec![0usize; ell + 1];
    loop {
        // b[c][j] = z(s_1(c), ..., s_{l-1}(c), j, c)
        let b = ComplexMatrix::from_fn(k, k, |c, j| {
            for (a, &p) in choice.iter().enumerate() {
                idx[a] = perms[p][c];
            }
            idx[ell - 1] = j;
            idx[ell] = c;
            z.get(&idx)
        });
        total += glynn(&b);
        if !advance(&mut choice, perms.len()) {
            break;
        }
    }
    Ok(total)
}

/// The same quantity summed over all `(k!)^l` tuples of bijections.
pub fn multidim_permanent_by_definition(z: &ComplexTensor) -> Result<C64> {
    let k = check_multidim(z)?;
    let ell = z.order() - 1;
    let perms: Vec<Vec<usize>> = permutations(k).collect();
    let mut choice = vec![0usize; ell];
    let mut total = C64::new(0.0, 0.0);
    let mut idx = vec![0usize; ell + 1];
    loop {
        total += (0..k)
            .map(|c| {
                for (a, &p) in choice.iter().enumerate() {
                    idx[a] = perms[p][c];
                }
                idx[ell] = c;
                z.get(&idx)
            })
            .product::<C64>();
        if !advance(&mut choice, perms.len()) {
            break;
        }
    }
    Ok(total)
}

/// Odometer increment over `radix^len`; false after the last tuple.
pub(crate) fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// `per_l(Z[J_1, ..., J_l, K])`.
pub fn multidim_permanent_minor(z: &ComplexTensor, sel: &MinorSelector) -> Result<C64> {
    if sel.rows.len() + 1 != z.order() {
        return Err(Error::domain("selector arity does not match the tensor"));
    }
    if sel.rows.iter().any(|r| r.len() != sel.cols.len()) {
        return Err(Error::domain("all index sets of a minor need the same size"));
    }
    let mut sets: Vec<&IndexSet> = sel.rows.iter().collect();
    sets.push(&sel.cols);
    multidim_permanent(&z.subtensor(&sets)?)
}

/// `per(D_{n,l}) = sum_{j=0}^{l} (-2)^j C(l, j) (n-j)!`, where `D_{n,l}` is the
/// all-ones matrix with `-1` on the first `l` diagonal entries.
pub fn permanent_d(n: usize, ell: usize) -> Result<f64> {
    if ell > n {
        return Err(Error::domain(format!("D_(n,l) needs l <= n, got l={ell}, n={n}")));
    }
    if n > 30 {
        return Err(Error::Feasibility {
            what: "closed-form per(D)",
            size: n,
            limit: 30,
        });
    }
    let mut total: i128 = 0;
    for j in 0..=ell {
        let term = crate::combinatorics::binomial(ell, j) as i128
            * crate::combinatorics::factorial_u128(n - j) as i128;
        total += if j % 2 == 0 { term << j } else { -(term << j) };
    }
    Ok(total as f64)
}

/// The matrix `D_{n,l}`.
pub fn d_matrix(n: usize, ell: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        C64::new(if i == j && i < ell { -1.0 } else { 1.0 }, 0.0)
    })
}
