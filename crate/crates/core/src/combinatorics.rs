//! Index machinery: subsets, weak compositions, ordered weak partitions and
//! injective maps.
//!
//! Every enumerator is a lazy iterator with a fixed lexicographic order, so
//! two runs over the same arguments produce identical streams.

use crate::error::{Error, Result};

/// Binomial coefficient as `u128`. Returns 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient as `f64`.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

/// `n!` as `f64`.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `n!` as `u128`; panics on overflow (n > 34).
pub fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A strictly increasing list of 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from arbitrary indices; sorts them and rejects duplicates.
    pub fn new(mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain(format!(
                "index set contains duplicates: {elements:?}"
            )));
        }
        Ok(IndexSet(elements))
    }

    /// Wraps a vector that is already strictly increasing.
    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// True when every element is `< n`.
    pub fn within(&self, n: usize) -> bool {
        self.0.last().is_none_or(|&x| x < n)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&x| !other.contains(x))
    }

    /// Position of each element inside `ground` (which must contain it).
    pub fn positions_in(&self, ground: &IndexSet) -> Option<Vec<usize>> {
        self.0.iter().map(|x| ground.0.binary_search(x).ok()).collect()
    }

    /// Rank among all `|self|`-subsets of the naturals in colexicographic
    /// order (combinatorial number system). Dense and 0-based.
    pub fn colex_rank(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &x)| binomial(x, i + 1) as usize)
            .sum()
    }

    /// Inverse of [`IndexSet::colex_rank`] for `k`-subsets.
    pub fn from_colex_rank(mut rank: usize, k: usize) -> IndexSet {
        let mut out = vec![0; k];
        for i in (0..k).rev() {
            // largest x with C(x, i+1) <= rank
            let mut x = i;
            while binomial(x + 1, i + 1) as usize <= rank {
                x += 1;
            }
            rank -= binomial(x, i + 1) as usize;
            out[i] = x;
        }
        IndexSet(out)
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A weak composition `(w_1, ..., w_d)`; zero parts are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("a composition needs at least one part"));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `w! = w_1! ... w_d!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&p| factorial(p)).product()
    }

    /// `c * w`, every part multiplied.
    pub fn scaled(&self, c: usize) -> Composition {
        Composition(self.0.iter().map(|&p| p * c).collect())
    }
}

/// An ordered weak partition `(W_1, ..., W_d)` of a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    blocks: Vec<IndexSet>,
    ground: IndexSet,
}

impl OrderedPartition {
    /// Validates disjointness and coverage of `ground`.
    pub fn new(blocks: Vec<IndexSet>, ground: IndexSet) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::domain("a partition needs at least one block"));
        }
        let total: usize = blocks.iter().map(IndexSet::len).sum();
        let union = blocks.iter().fold(IndexSet::empty(), |acc, b| acc.union(b));
        if total != union.len() {
            return Err(Error::domain("partition blocks are not pairwise disjoint"));
        }
        if union != ground {
            return Err(Error::domain(format!(
                "partition blocks cover {:?}, expected {:?}",
                union.as_slice(),
                ground.as_slice()
            )));
        }
        Ok(OrderedPartition { blocks, ground })
    }

    /// Partition whose ground set is the union of the blocks.
    pub fn from_blocks(blocks: Vec<IndexSet>) -> Result<Self> {
        let ground = blocks.iter().fold(IndexSet::empty(), |acc, b| acc.union(b));
        Self::new(blocks, ground)
    }

    pub fn blocks(&self) -> &[IndexSet] {
        &self.blocks
    }

    pub fn ground(&self) -> &IndexSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `type(W) = (|W_1|, ..., |W_d|)`.
    pub fn type_of(&self) -> Composition {
        Composition(self.blocks.iter().map(IndexSet::len).collect())
    }

    /// True when every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &OrderedPartition) -> bool {
        self.ground == coarser.ground
            && self
                .blocks
                .iter()
                .all(|b| coarser.blocks.iter().any(|c| b.is_subset_of(c)))
    }
}

/// An injective map from `domain` into `codomain`, stored as the image of
/// each domain element in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Injection {
    domain: IndexSet,
    images: Vec<usize>,
}

impl Injection {
    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of domain element `x`.
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.domain
            .as_slice()
            .binary_search(&x)
            .ok()
            .map(|i| self.images[i])
    }

    /// `j[W] = { j(w) : w in W }`.
    pub fn image_of(&self, set: &IndexSet) -> Option<IndexSet> {
        let imgs: Option<Vec<usize>> = set.iter().map(|&x| self.apply(x)).collect();
        imgs.map(|mut v| {
            v.sort_unstable();
            IndexSet(v)
        })
    }
}

/// Advances a strictly increasing `k`-combination of `0..n` to its
/// lexicographic successor. Returns false when `comb` was the last one.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographic stream of the `k`-subsets of a ground set.
#[derive(Debug, Clone)]
pub struct Subsets {
    ground: Vec<usize>,
    comb: Vec<usize>,
    done: bool,
}

impl Iterator for Subsets {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        if self.done {
            return None;
        }
        let out = IndexSet(self.comb.iter().map(|&i| self.ground[i]).collect());
        self.done = !next_combination(&mut self.comb, self.ground.len());
        Some(out)
    }
}

/// All `k`-subsets of `{0, ..., n-1}` in lexicographic order.
pub fn enumerate_subsets(n: usize, k: usize) -> Result<Subsets> {
    subsets_of(&IndexSet::range(n), k)
}

/// All `k`-subsets of `ground` in lexicographic order.
pub fn subsets_of(ground: &IndexSet, k: usize) -> Result<Subsets> {
    if k > ground.len() {
        return Err(Error::domain(format!(
            "cannot choose {k} elements from a set of size {}",
            ground.len()
        )));
    }
    Ok(Subsets {
        ground: ground.0.clone(),
        comb: (0..k).collect(),
        done: false,
    })
}

/// Lexicographic stream of the weak `d`-compositions of `k`.
#[derive(Debug, Clone)]
pub struct Compositions {
    parts: Vec<usize>,
    done: bool,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.done {
            return None;
        }
        let out = Composition(self.parts.clone());
        let d = self.parts.len();
        // rightmost position (before the last) with a non-zero tail behind it
        let mut tail = 0;
        let mut pivot = None;
        for i in (0..d - 1).rev() {
            tail += self.parts[i + 1];
            if tail > 0 {
                pivot = Some(i);
                break;
            }
        }
        match pivot {
            Some(i) => {
                self.parts[i] += 1;
                for p in &mut self.parts[i + 1..] {
                    *p = 0;
                }
                self.parts[d - 1] = tail - 1;
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// All weak `d`-compositions of `k`, lexicographically.
pub fn enumerate_compositions(k: usize, d: usize) -> Result<Compositions> {
    if d == 0 {
        return Err(Error::domain("compositions need at least one part"));
    }
    let mut parts = vec![0; d];
    parts[d - 1] = k;
    Ok(Compositions { parts, done: false })
}

/// Stream of the ordered weak partitions of a set with a prescribed type.
///
/// Block `r` ranges over the `w_r`-subsets of what blocks `0..r` left over;
/// the last block that can still advance is advanced first.
#[derive(Debug, Clone)]
pub struct Partitions {
    ground: IndexSet,
    sizes: Vec<usize>,
    // remaining[r] = elements not used by blocks 0..r
    remaining: Vec<Vec<usize>>,
    combs: Vec<Vec<usize>>,
    done: bool,
}

impl Partitions {
    fn reset_from(&mut self, start: usize) {
        for r in start..self.sizes.len() {
            if r > start {
                let prev = &self.remaining[r - 1];
                let used: Vec<usize> = self.combs[r - 1].iter().map(|&i| prev[i]).collect();
                self.remaining[r] = prev.iter().copied().filter(|x| !used.contains(x)).collect();
                self.combs[r] = (0..self.sizes[r]).collect();
            }
        }
    }

    fn current(&self) -> OrderedPartition {
        let blocks = self
            .combs
            .iter()
            .zip(&self.remaining)
            .map(|(c, rem)| IndexSet(c.iter().map(|&i| rem[i]).collect()))
            .collect();
        OrderedPartition {
            blocks,
            ground: self.ground.clone(),
        }
    }
}

impl Iterator for Partitions {
    type Item = OrderedPartition;

    fn next(&mut self) -> Option<OrderedPartition> {
        if self.done {
            return None;
        }
        let out = self.current();
        let d = self.sizes.len();
        let mut advanced = false;
        for r in (0..d).rev() {
            let n = self.remaining[r].len();
            if next_combination(&mut self.combs[r], n) {
                self.reset_from(r);
                advanced = true;
                break;
            }
        }
        self.done = !advanced;
        Some(out)
    }
}

/// All ordered weak partitions of `ground` of type `w`; there are
/// `|ground|! / w!` of them.
pub fn enumerate_partitions(ground: &IndexSet, w: &Composition) -> Result<Partitions> {
    if w.total() != ground.len() {
        return Err(Error::domain(format!(
            "composition sums to {} but the ground set has {} elements",
            w.total(),
            ground.len()
        )));
    }
    let d = w.len();
    let mut p = Partitions {
        ground: ground.clone(),
        sizes: w.0.clone(),
        remaining: vec![Vec::new(); d],
        combs: vec![Vec::new(); d],
        done: false,
    };
    p.remaining[0] = ground.0.clone();
    p.combs[0] = (0..w.0[0]).collect();
    p.reset_from(0);
    Ok(p)
}

/// Lexicographic stream of injections `domain -> codomain`.
#[derive(Debug, Clone)]
pub struct Injections {
    domain: IndexSet,
    codomain: Vec<usize>,
    // positions into codomain, pairwise distinct
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Injections {
    type Item = Injection;

    fn next(&mut self) -> Option<Injection> {
        if self.done {
            return None;
        }
        let out = Injection {
            domain: self.domain.clone(),
            images: self.idx.iter().map(|&i| self.codomain[i]).collect(),
        };
        let k = self.idx.len();
        let m = self.codomain.len();
        let mut advanced = false;
        'outer: for i in (0..k).rev() {
            let used = &self.idx[..i];
            for cand in self.idx[i] + 1..m {
                if !used.contains(&cand) {
                    self.idx[i] = cand;
                    // fill the tail with the smallest unused positions
                    let mut next = 0;
                    for j in i + 1..k {
                        while self.idx[..j].contains(&next) {
                            next += 1;
                        }
                        self.idx[j] = next;
                        next += 1;
                    }
                    advanced = true;
                    break 'outer;
                }
            }
        }
        self.done = !advanced;
        Some(out)
    }
}

/// All injections from `domain` into `codomain`; there are
/// `|codomain|! / (|codomain| - |domain|)!` of them.
pub fn enumerate_injections(domain: &IndexSet, codomain: &IndexSet) -> Result<Injections> {
    if domain.len() > codomain.len() {
        return Err(Error::domain(format!(
            "no injection from {} elements into {}",
            domain.len(),
            codomain.len()
        )));
    }
    Ok(Injections {
        domain: domain.clone(),
        codomain: codomain.0.clone(),
        idx: (0..domain.len()).collect(),
        done: false,
    })
}

/// All permutations of `0..n`, each as the image vector.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let all = IndexSet::range(n);
    enumerate_injections(&all, &all)
        .expect("equal sizes")
        .map(|inj| inj.images)
}
