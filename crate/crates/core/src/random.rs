//! Seeded random instance generators shared by the verification suites and
//! the tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::combinatorics::{IndexSet, OrderedPartition};
use crate::exact::{ComplexMatrix, ComplexTensor, C64};

fn unit_square(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Entries with real and imaginary parts uniform on `[-1, 1)`.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| unit_square(rng))
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut z = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = unit_square(rng);
            z.set(i, j, v);
            z.set(j, i, v);
        }
    }
    z
}

pub fn random_tensor(rng: &mut impl Rng, dims: &[usize]) -> ComplexTensor {
    ComplexTensor::from_fn(dims.to_vec(), |_| unit_square(rng))
}

/// Fully symmetric order-`order` tensor of side `n`: one random value per
/// multiset of indices.
pub fn random_symmetric_tensor(rng: &mut impl Rng, order: usize, n: usize) -> ComplexTensor {
    let mut values = std::collections::HashMap::new();
    ComplexTensor::from_fn(vec![n; order], |ix| {
        let mut key = ix.to_vec();
        key.sort_unstable();
        *values.entry(key).or_insert_with(|| unit_square(rng))
    })
}

/// A random ordered partition of `ground` into `d` blocks (possibly empty).
pub fn random_partition(rng: &mut impl Rng, ground: &IndexSet, d: usize) -> OrderedPartition {
    let mut blocks = vec![Vec::new(); d];
    for &x in ground {
        blocks[rng.gen_range(0..d)].push(x);
    }
    OrderedPartition::new(
        blocks.into_iter().map(|b| IndexSet::new(b).expect("distinct")).collect(),
        ground.clone(),
    )
    .expect("valid by construction")
}

/// Splits every block of `coarse` into up to `pieces` random sub-blocks.
pub fn random_refinement(rng: &mut impl Rng, coarse: &OrderedPartition, pieces: usize) -> OrderedPartition {
    let mut blocks = Vec::new();
    for b in coarse.blocks() {
        let p = rng.gen_range(1..=pieces.max(1));
        let sub = random_partition(rng, b, p);
        blocks.extend(sub.blocks().iter().cloned());
    }
    blocks.shuffle(rng);
    OrderedPartition::new(blocks, coarse.ground().clone()).expect("refinement is a partition")
}
