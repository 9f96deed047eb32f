//! Generalized Laplace-type expansions. Each one evaluates the same quantity
//! as the direct kernels through a sum over ordered partitions, and serves as
//! an alternative evaluator and as a cross-check.

use super::hafnian::hyperhafnian;
use super::matrix::{ComplexMatrix, ComplexTensor, C64};
use super::permanent::{advance, glynn, multidim_permanent};
use crate::combinatorics::{enumerate_partitions, factorial, Composition, IndexSet, OrderedPartition};
use crate::error::{Error, Result};

fn check_column_partition(k: usize, w: &Composition, cols: &OrderedPartition) -> Result<()> {
    if cols.ground() != &IndexSet::range(k) {
        return Err(Error::domain(format!(
            "column partition must cover 0..{k}, covers {:?}",
            cols.ground().as_slice()
        )));
    }
    if &cols.type_of() != w {
        return Err(Error::domain(format!(
            "column partition has type {:?}, expected {:?}",
            cols.type_of().parts(),
            w.parts()
        )));
    }
    Ok(())
}

/// `per(Z) = sum_{(V_1..V_d) in Part(J, w)} prod_r per(Z[V_r, W_r])` for a
/// fixed column partition `W` of type `w`.
pub fn permanent_via_laplace(z: &ComplexMatrix, w: &Composition, cols: &OrderedPartition) -> Result<C64> {
    if !z.is_square() {
        return Err(Error::domain("Laplace expansion needs a square matrix"));
    }
    let k = z.rows();
    check_column_partition(k, w, cols)?;
    let mut total = C64::new(0.0, 0.0);
    for rows in enumerate_partitions(&IndexSet::range(k), w)? {
        total += rows
            .blocks()
            .iter()
            .zip(cols.blocks())
            .map(|(v, c)| glynn(&z.submatrix_unchecked(v.as_slice(), c.as_slice())))
            .product::<C64>();
    }
    Ok(total)
}

/// Multidimensional Laplace expansion. With `symmetrized == false` the
/// column partition `cols` is held fixed; otherwise the expansion is averaged
/// over every column partition of type `w` with prefactor `w!/k!` (the
/// supplied `cols` is still validated).
pub fn multidim_permanent_via_laplace(
    z: &ComplexTensor,
    w: &Composition,
    cols: &OrderedPartition,
    symmetrized: bool,
) -> Result<C64> {
    let k = z
        .cube_side()
        .ok_or_else(|| Error::domain(format!("ragged tensor of shape {:?}", z.dims())))?;
    if z.order() < 2 {
        return Err(Error::domain("multidimensional permanent needs at least two axes"));
    }
    check_column_partition(k, w, cols)?;
    let ground = IndexSet::range(k);
    let row_parts: Vec<OrderedPartition> = enumerate_partitions(&ground, w)?.collect();
    if !symmetrized {
        return fixed_column_expansion(z, &row_parts, cols);
    }
    let mut total = C64::new(0.0, 0.0);
    for c in enumerate_partitions(&ground, w)? {
        total += fixed_column_expansion(z, &row_parts, &c)?;
    }
    Ok(total * (w.factorial() / factorial(k)))
}

fn fixed_column_expansion(
    z: &ComplexTensor,
    row_parts: &[OrderedPartition],
    cols: &OrderedPartition,
) -> Result<C64> {
    let ell = z.order() - 1;
    let mut choice = vec![0usize; ell];
    let mut total = C64::new(0.0, 0.0);
    loop {
        let mut prod = C64::new(1.0, 0.0);
        for (r, wr) in cols.blocks().iter().enumerate() {
            let mut sets: Vec<&IndexSet> = choice.iter().map(|&p| &row_parts[p].blocks()[r]).collect();
            sets.push(wr);
            prod *= multidim_permanent(&z.subtensor(&sets)?)?;
        }
        total += prod;
        if !advance(&mut choice, row_parts.len()) {
            break;
        }
    }
    Ok(total)
}

/// `haf_l(Z) = (w!/k!) sum_{(V_1..V_d) in Part(J, l w)} prod_r haf_l(Z[V_r, ..., V_r])`
/// for a symmetric order-`l` tensor of side `l k`, where `w` is a weak
/// composition of `k`.
pub fn hyperhafnian_via_expansion(z: &ComplexTensor, ell: usize, w: &Composition) -> Result<C64> {
    if ell == 0 || z.order() != ell {
        return Err(Error::domain("tensor order must equal l"));
    }
    let n = z
        .cube_side()
        .ok_or_else(|| Error::domain("hyperhafnian needs equal axis sizes"))?;
    let k = w.total();
    if n != ell * k {
        return Err(Error::domain(format!(
            "side {n} does not equal l * sum(w) = {}",
            ell * k
        )));
    }
    if !z.is_symmetric() {
        return Err(Error::domain("hyperhafnian needs a fully symmetric tensor"));
    }
    let mut total = C64::new(0.0, 0.0);
    for v in enumerate_partitions(&IndexSet::range(n), &w.scaled(ell))? {
        let mut prod = C64::new(1.0, 0.0);
        for block in v.blocks() {
            let sets = vec![block; ell];
            prod *= hyperhafnian(&z.subtensor(&sets)?, ell)?;
        }
        total += prod;
    }
    Ok(total * (w.factorial() / factorial(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_compositions;
    use crate::exact::hafnian::hafnian;
    use crate::exact::permanent::permanent;
    use crate::random::{random_matrix, random_symmetric, random_symmetric_tensor, random_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn laplace_single_block_and_full_refinement() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let z = random_matrix(&mut rng, 4, 4);
        let g = IndexSet::range(4);
        let one = Composition::new(vec![4]).unwrap();
        let w1 = OrderedPartition::new(vec![g.clone()], g.clone()).unwrap();
        assert!(close(permanent_via_laplace(&z, &one, &w1).unwrap(), permanent(&z).unwrap(), 1e-12));

        let ones = Composition::new(vec![1; 4]).unwrap();
        let singles = OrderedPartition::new(
            (0..4).map(|i| IndexSet::new(vec![i]).unwrap()).collect(),
            g,
        )
        .unwrap();
        assert!(close(permanent_via_laplace(&z, &ones, &singles).unwrap(), permanent(&z).unwrap(), 1e-12));
    }

    #[test]
    fn laplace_every_column_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = random_matrix(&mut rng, 5, 5);
        let exact = permanent(&z).unwrap();
        let w = Composition::new(vec![2, 3]).unwrap();
        for cols in enumerate_partitions(&IndexSet::range(5), &w).unwrap() {
            assert!(close(permanent_via_laplace(&z, &w, &cols).unwrap(), exact, 1e-12));
        }
        let bad = Composition::new(vec![3, 2]).unwrap();
        let cols = enumerate_partitions(&IndexSet::range(5), &w).unwrap().next().unwrap();
        assert!(permanent_via_laplace(&z, &bad, &cols).is_err());
    }

    #[test]
    fn multidim_laplace_both_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t = random_tensor(&mut rng, &[3, 3, 3]);
        let exact = multidim_permanent(&t).unwrap();
        let w = Composition::new(vec![1, 2]).unwrap();
        let cols = enumerate_partitions(&IndexSet::range(3), &w).unwrap().last().unwrap();
        let fixed = multidim_permanent_via_laplace(&t, &w, &cols, false).unwrap();
        let sym = multidim_permanent_via_laplace(&t, &w, &cols, true).unwrap();
        assert!(close(fixed, exact, 1e-11));
        assert!(close(sym, exact, 1e-11));

        let ones = ComplexTensor::constant(3, 3, C64::new(1.0, 0.0));
        for flag in [false, true] {
            let v = multidim_permanent_via_laplace(&ones, &w, &cols, flag).unwrap();
            assert!(close(v, C64::new(36.0, 0.0), 1e-12));
        }

        // order 2 reduces to the matrix expansion
        let z = random_matrix(&mut rng, 3, 3);
        let tz = ComplexTensor::from_matrix(&z);
        assert!(close(
            multidim_permanent_via_laplace(&tz, &w, &cols, false).unwrap(),
            permanent_via_laplace(&z, &w, &cols).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn hyperhafnian_expansion_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let z = random_symmetric(&mut rng, 6);
        let t = ComplexTensor::from_matrix(&z);
        let exact = hafnian(&z).unwrap();
        for d in 1..=3 {
            for w in enumerate_compositions(3, d).unwrap() {
                assert!(close(hyperhafnian_via_expansion(&t, 2, &w).unwrap(), exact, 1e-12));
            }
        }
        let t3 = random_symmetric_tensor(&mut rng, 3, 6);
        let exact3 = hyperhafnian(&t3, 3).unwrap();
        let w = Composition::new(vec![1, 1]).unwrap();
        assert!(close(hyperhafnian_via_expansion(&t3, 3, &w).unwrap(), exact3, 1e-12));
    }

    // w = (1, k-1) gives haf(Z) = (1/2k) sum_{j != r} z_jr haf(Z without j, r)
    #[test]
    fn pairwise_recursion_special_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for k in 1..=4 {
            let n = 2 * k;
            let z = random_symmetric(&mut rng, n);
            let mut rec = C64::new(0.0, 0.0);
            for j in 0..n {
                for r in 0..n {
                    if j == r {
                        continue;
                    }
                    let rest: Vec<usize> = (0..n).filter(|&x| x != j && x != r).collect();
                    rec += z.get(j, r) * hafnian(&z.submatrix_unchecked(&rest, &rest)).unwrap();
                }
            }
            rec /= 2.0 * k as f64;
            let w = Composition::new(vec![1, k - 1]).unwrap();
            let t = ComplexTensor::from_matrix(&z);
            assert!(close(hyperhafnian_via_expansion(&t, 2, &w).unwrap(), rec, 1e-12));
        }
    }
}
