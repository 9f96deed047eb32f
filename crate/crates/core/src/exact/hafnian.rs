//! Hafnians and hyperhafnians.

use std::collections::HashMap;

use super::matrix::{ComplexMatrix, ComplexTensor, C64};
use crate::combinatorics::{factorial, permutations};
use crate::error::{Error, Result};

/// Masks are `u64`; 64 is far beyond anything the enumeration can finish.
const MAX_MASK_BITS: usize = 63;

fn check_hafnian_input(z: &ComplexMatrix) -> Result<()> {
    if !z.is_square() {
        return Err(Error::domain("hafnian needs a square matrix"));
    }
    if !z.rows().is_multiple_of(2) {
        return Err(Error::domain(format!("hafnian needs even dimension, got {}", z.rows())));
    }
    if z.rows() > MAX_MASK_BITS {
        return Err(Error::Feasibility {
            what: "hafnian",
            size: z.rows(),
            limit: MAX_MASK_BITS,
        });
    }
    let asym = z.asymmetry();
    if asym > super::matrix::SYMMETRY_TOLERANCE {
        return Err(Error::domain(format!(
            "hafnian needs a symmetric matrix (asymmetry {asym:e})"
        )));
    }
    Ok(())
}

/// Hafnian of a symmetric matrix of even size: sum over perfect matchings,
/// built by always pairing the smallest unmatched index. Sub-results are
/// cached per remaining-vertex mask. Diagonal entries are never read.
pub fn hafnian(z: &ComplexMatrix) -> Result<C64> {
    check_hafnian_input(z)?;
    let n = z.rows();
    let full: u64 = (1u64 << n) - 1;
    let mut memo = HashMap::new();
    Ok(matchings(z, full, &mut memo))
}

fn matchings(z: &ComplexMatrix, mask: u64, memo: &mut HashMap<u64, C64>) -> C64 {
    if mask == 0 {
        return C64::new(1.0, 0.0);
    }
    if let Some(v) = memo.get(&mask) {
        return *v;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut acc = C64::new(0.0, 0.0);
    let mut m = rest;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        acc += z.get(i, j) * matchings(z, rest & !(1u64 << j), memo);
    }
    memo.insert(mask, acc);
    acc
}

/// `haf(Z) = (1/(m! 2^m)) sum_{j bijective} prod_r z_{j(2r-1), j(2r)}`,
/// summed over all `n!` orderings. Oracle for [`hafnian`].
pub fn hafnian_by_definition(z: &ComplexMatrix) -> Result<C64> {
    check_hafnian_input(z)?;
    let n = z.rows();
    let m = n / 2;
    let total: C64 = permutations(n)
        .map(|p| (0..m).map(|r| z.get(p[2 * r], p[2 * r + 1])).product::<C64>())
        .sum();
    Ok(total / (factorial(m) * 2f64.powi(m as i32)))
}

fn check_hyperhafnian_input(z: &ComplexTensor, ell: usize) -> Result<usize> {
    if ell == 0 || z.order() != ell {
        return Err(Error::domain(format!(
            "hyperhafnian of order {ell} needs an order-{ell} tensor, got order {}",
            z.order()
        )));
    }
    let n = z
        .cube_side()
        .ok_or_else(|| Error::domain("hyperhafnian needs equal axis sizes"))?;
    if n % ell != 0 {
        return Err(Error::domain(format!("dimension {n} is not divisible by {ell}")));
    }
    if n > MAX_MASK_BITS {
        return Err(Error::Feasibility {
            what: "hyperhafnian",
            size: n,
            limit: MAX_MASK_BITS,
        });
    }
    let asym = z.asymmetry();
    if asym > super::matrix::SYMMETRY_TOLERANCE {
        return Err(Error::domain(format!(
            "hyperhafnian needs a fully symmetric tensor (asymmetry {asym:e})"
        )));
    }
    Ok(n)
}

/// Hyperhafnian of a fully symmetric order-`l` tensor of side `n = l m`:
/// sum over partitions of `[n]` into unordered blocks of size `l` of the
/// product of the block entries.
pub fn hyperhafnian(z: &ComplexTensor, ell: usize) -> Result<C64> {
    let n = check_hyperhafnian_input(z, ell)?;
    let full: u64 = (1u64 << n) - 1;
    let mut memo = HashMap::new();
    let mut idx = vec![0usize; ell];
    Ok(blocks(z, ell, full, &mut memo, &mut idx))
}

fn blocks(
    z: &ComplexTensor,
    ell: usize,
    mask: u64,
    memo: &mut HashMap<u64, C64>,
    idx: &mut Vec<usize>,
) -> C64 {
    if mask == 0 {
        return C64::new(1.0, 0.0);
    }
    if let Some(v) = memo.get(&mask) {
        return *v;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let members: Vec<usize> = (0..64).filter(|b| rest >> b & 1 == 1).collect();
    let mut comb: Vec<usize> = (0..ell - 1).collect();
    let mut acc = C64::new(0.0, 0.0);
    loop {
        idx[0] = i;
        let mut used = 1u64 << i;
        for (a, &c) in comb.iter().enumerate() {
            idx[a + 1] = members[c];
            used |= 1u64 << members[c];
        }
        let entry = z.get(idx);
        acc += entry * blocks(z, ell, mask & !used, memo, idx);
        if !crate::combinatorics::next_combination(&mut comb, members.len()) {
            break;
        }
    }
    memo.insert(mask, acc);
    acc
}

/// `haf_l(Z) = (1/(m! (l!)^m)) sum_{j bijective} prod_r z(j(rl+1), ..., j(rl+l))`
/// over all `n!` orderings. Oracle for [`hyperhafnian`].
pub fn hyperhafnian_by_definition(z: &ComplexTensor, ell: usize) -> Result<C64> {
    let n = check_hyperhafnian_input(z, ell)?;
    let m = n / ell;
    let total: C64 = permutations(n)
        .map(|p| (0..m).map(|r| z.get(&p[r * ell..(r + 1) * ell])).product::<C64>())
        .sum();
    Ok(total / (factorial(m) * factorial(ell).powi(m as i32)))
}

/// `[[0, Z], [Z^T, 0]]`, whose hafnian is `per(Z)`.
pub fn block_embed_per_as_haf(z: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !z.is_square() {
        return Err(Error::domain("block embedding needs a square matrix"));
    }
    let n = z.rows();
    Ok(ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => z.get(i, j - n),
        (false, true) => z.get(j, i - n),
        _ => C64::new(0.0, 0.0),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::permanent::permanent;
    use crate::random::random_symmetric;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn empty_and_four_by_four() {
        assert_eq!(hafnian(&ComplexMatrix::zeros(0, 0)).unwrap(), c(1.0));
        let (a, b, cc, d, e, f) = (2.0, 3.0, 5.0, 7.0, 11.0, 13.0);
        let z = ComplexMatrix::from_real_rows(&[
            vec![0.0, a, b, cc],
            vec![a, 0.0, d, e],
            vec![b, d, 0.0, f],
            vec![cc, e, f, 0.0],
        ])
        .unwrap();
        assert_eq!(hafnian(&z).unwrap(), c(a * f + b * e + cc * d));
    }

    #[test]
    fn constant_off_diagonal() {
        let y = C64::new(0.3, -0.7);
        for m in 1..=6 {
            let n = 2 * m;
            let z = ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(5.0) } else { y });
            let expected = factorial(n) / (factorial(m) * 2f64.powi(m as i32)) * y.powi(m as i32);
            let got = hafnian(&z).unwrap();
            assert!((got - expected).norm() <= 1e-12 * expected.norm());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hafnian(&ComplexMatrix::zeros(3, 3)).is_err());
        let z = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(hafnian(&z).is_err());
        let t = ComplexTensor::constant(3, 4, c(1.0));
        assert!(hyperhafnian(&t, 3).is_err());
    }

    #[test]
    fn recursion_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 4, 6, 8] {
            let z = random_symmetric(&mut rng, n);
            let a = hafnian(&z).unwrap();
            let b = hafnian_by_definition(&z).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn diagonal_is_ignored_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = random_symmetric(&mut rng, 8);
        let mut w = z.clone();
        for i in 0..8 {
            w.set(i, i, C64::new(100.0 * i as f64, -3.0));
        }
        assert_eq!(hafnian(&z).unwrap(), hafnian(&w).unwrap());
    }

    #[test]
    fn embedding_gives_permanent() {
        let z = ComplexMatrix::from_rows(vec![vec![C64::new(0.4, 0.9)]]).unwrap();
        assert_eq!(hafnian(&block_embed_per_as_haf(&z).unwrap()).unwrap(), z.get(0, 0));
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(hafnian(&block_embed_per_as_haf(&i3).unwrap()).unwrap(), c(1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            let z = ComplexMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let p = permanent(&z).unwrap();
            let h = hafnian(&block_embed_per_as_haf(&z).unwrap()).unwrap();
            assert!((p - h).norm() <= 1e-12 * p.norm().max(1.0));
        }
        assert!(block_embed_per_as_haf(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn hyperhafnian_cases() {
        let ones = ComplexTensor::constant(3, 6, c(1.0));
        // 6! / (2! * 6^2) = 10
        assert!((hyperhafnian(&ones, 3).unwrap() - c(10.0)).norm() < 1e-12);
        assert!((hyperhafnian_by_definition(&ones, 3).unwrap() - c(10.0)).norm() < 1e-12);
        let empty = ComplexTensor::constant(3, 0, c(0.0));
        assert_eq!(hyperhafnian(&empty, 3).unwrap(), c(1.0));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z = random_symmetric(&mut rng, 6);
        let t = ComplexTensor::from_matrix(&z);
        let a = hyperhafnian(&t, 2).unwrap();
        let b = hafnian(&z).unwrap();
        assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }
}
