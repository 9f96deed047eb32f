//! Characteristic functions of random diagonal sums `S_n = sum_j X_{j, pi(j)}`
//! with a uniform random permutation `pi`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::exact::{permanent, ComplexMatrix, C64};

/// Largest `n` accepted by [`exact_charfn`].
pub const EXACT_LIMIT: usize = 12;

/// Trials per Monte Carlo chunk; chunk `c` draws from stream `c` of the seed.
pub const MC_CHUNK: usize = 4096;

/// Entry distributions with closed-form characteristic functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Distribution {
    PointMass { x: f64 },
    /// Values 0 and 1, `P(X = 1) = p`.
    Bernoulli { p: f64 },
    Uniform { a: f64, b: f64 },
    Normal { mean: f64, variance: f64 },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Distribution::PointMass { x } => x.is_finite(),
            Distribution::Bernoulli { p } => (0.0..=1.0).contains(&p),
            Distribution::Uniform { a, b } => a.is_finite() && b.is_finite() && a < b,
            Distribution::Normal { mean, variance } => mean.is_finite() && variance.is_finite() && variance >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid parameters for {self:?}")))
        }
    }

    /// `E exp(i t X)`.
    pub fn charfn(&self, t: f64) -> C64 {
        match *self {
            Distribution::PointMass { x } => C64::from_polar(1.0, t * x),
            Distribution::Bernoulli { p } => C64::new(1.0 - p, 0.0) + C64::from_polar(p, t),
            Distribution::Uniform { a, b } => {
                let h = t * (b - a) / 2.0;
                let sinc = if h == 0.0 { 1.0 } else { h.sin() / h };
                C64::from_polar(sinc, t * (a + b) / 2.0)
            }
            Distribution::Normal { mean, variance } => C64::from_polar((-variance * t * t / 2.0).exp(), mean * t),
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Distribution::PointMass { x } => x,
            Distribution::Bernoulli { p } => f64::from(u8::from(rng.gen::<f64>() < p)),
            Distribution::Uniform { a, b } => rng.gen_range(a..b),
            Distribution::Normal { mean, variance } => Normal::new(mean, variance.sqrt()).expect("validated").sample(rng),
        }
    }
}

/// Square grid of entry distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Distribution>>", into = "Vec<Vec<Distribution>>")]
pub struct CharFnMatrix {
    cells: Vec<Vec<Distribution>>,
}

impl CharFnMatrix {
    pub fn new(cells: Vec<Vec<Distribution>>) -> Result<Self> {
        let n = cells.len();
        if n == 0 {
            return Err(Error::domain("model needs at least one row"));
        }
        for (j, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!("row {} has {} cells, expected {n}", j + 1, row.len())));
            }
            for (r, d) in row.iter().enumerate() {
                d.validate()
                    .map_err(|e| Error::domain(format!("cell ({}, {}): {e}", j + 1, r + 1)))?;
            }
        }
        Ok(CharFnMatrix { cells })
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, j: usize, r: usize) -> Distribution {
        self.cells[j][r]
    }

    pub fn cells(&self) -> &[Vec<Distribution>] {
        &self.cells
    }

    /// `Z(t) = (phi_jr(t))`.
    pub fn at(&self, t: f64) -> ComplexMatrix {
        let n = self.n();
        ComplexMatrix::from_fn(n, n, |j, r| self.cells[j][r].charfn(t))
    }
}

impl TryFrom<Vec<Vec<Distribution>>> for CharFnMatrix {
    type Error = Error;
    fn try_from(cells: Vec<Vec<Distribution>>) -> Result<Self> {
        CharFnMatrix::new(cells)
    }
}

impl From<CharFnMatrix> for Vec<Vec<Distribution>> {
    fn from(m: CharFnMatrix) -> Self {
        m.cells
    }
}

/// Dependence structure of the entries. Only independent rows are simulated;
/// the bounds themselves need only independent generalized diagonals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Independence {
    #[default]
    IndependentRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSumModel {
    pub grid: CharFnMatrix,
    #[serde(default)]
    pub independence: Independence,
}

impl DiagonalSumModel {
    pub fn new(grid: CharFnMatrix) -> Self {
        DiagonalSumModel {
            grid,
            independence: Independence::IndependentRows,
        }
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }
}

/// `phi(t) = per(Z(t)) / n!`.
pub fn exact_charfn(model: &DiagonalSumModel, t: f64) -> Result<C64> {
    let n = model.n();
    if n > EXACT_LIMIT {
        return Err(Error::Feasibility {
            what: "exact characteristic function",
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    Ok(permanent(&model.grid.at(t))? / factorial(n))
}

/// `(1/4) |z_jr z_ks + z_kr z_js|^2`.
pub fn symmetrized_factor(z: &ComplexMatrix, j: usize, k: usize, r: usize, s: usize) -> f64 {
    (z.get(j, r) * z.get(k, s) + z.get(k, r) * z.get(j, s)).norm_sqr() / 4.0
}

fn pair_mean(z: &ComplexMatrix, u: usize, v: usize) -> f64 {
    let n = z.rows();
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                s += symmetrized_factor(z, j, k, u, v);
            }
        }
    }
    s / (n * (n - 1)) as f64
}

fn check_n(model: &DiagonalSumModel) -> Result<usize> {
    let n = model.n();
    if n < 2 {
        return Err(Error::domain("need n >= 2"));
    }
    Ok(n)
}

/// Product of pair averages over `(s(2r-1), s(2r))`, times
/// `((1/n) sum_j |phi_{j,s(n)}|^2)^{1/2}` for odd `n`. `s` is 0-based.
pub fn pair_bound_charfn(model: &DiagonalSumModel, t: f64, s: &[usize]) -> Result<f64> {
    let n = check_n(model)?;
    let mut seen = vec![false; n];
    if s.len() != n || s.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::domain(format!("{s:?} is not a permutation of 0..{n}")));
    }
    let z = model.grid.at(t);
    let mut bound: f64 = (0..n / 2).map(|r| pair_mean(&z, s[2 * r], s[2 * r + 1]).sqrt()).product();
    if n % 2 == 1 {
        let last = s[n - 1];
        bound *= ((0..n).map(|j| z.get(j, last).norm_sqr()).sum::<f64>() / n as f64).sqrt();
    }
    Ok(bound)
}

/// Average over all ordered column pairs raised to `d/2`, times
/// `((1/n^2) sum |phi_jr|^2)^{1/2}` for odd `n`.
pub fn avg_bound_charfn(model: &DiagonalSumModel, t: f64) -> Result<f64> {
    let n = check_n(model)?;
    let z = model.grid.at(t);
    let mut s = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                s += pair_mean(&z, u, v);
            }
        }
    }
    let avg = s / (n * (n - 1)) as f64;
    let mut bound = avg.powf((n / 2) as f64 / 2.0);
    if n % 2 == 1 {
        bound *= (z.entries().iter().map(|c| c.norm_sqr()).sum::<f64>() / (n * n) as f64).sqrt();
    }
    Ok(bound)
}

/// Monte Carlo estimate of `E exp(i t S_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: C64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub trials: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Largest component-wise deviation from `target` in standard errors
    /// (zero deviations with zero error count as zero).
    pub fn z_score(&self, target: C64) -> f64 {
        let z = |d: f64, se: f64| if d == 0.0 { 0.0 } else { d.abs() / se };
        z(self.mean.re - target.re, self.stderr_re).max(z(self.mean.im - target.im, self.stderr_im))
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    c: f64,
    s: f64,
    cc: f64,
    ss: f64,
}

fn run_chunk(model: &DiagonalSumModel, t: f64, seed: u64, chunk: usize, trials: usize) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let n = model.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut m = Moments::default();
    for _ in 0..trials {
        perm.shuffle(&mut rng);
        let sum: f64 = perm
            .iter()
            .enumerate()
            .map(|(j, &r)| model.grid.cell(j, r).sample(&mut rng))
            .sum();
        let (sn, cs) = (t * sum).sin_cos();
        m.c += cs;
        m.s += sn;
        m.cc += cs * cs;
        m.ss += sn * sn;
    }
    m
}

/// Parallel over chunks of [`MC_CHUNK`] trials; the result depends only on
/// `(model, t, trials, seed)`.
pub fn monte_carlo_charfn(model: &DiagonalSumModel, t: f64, trials: usize, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let chunks = trials.div_ceil(MC_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(model, t, seed, c, MC_CHUNK.min(trials - c * MC_CHUNK)))
        .collect();
    let total = parts.iter().fold(Moments::default(), |a, b| Moments {
        c: a.c + b.c,
        s: a.s + b.s,
        cc: a.cc + b.cc,
        ss: a.ss + b.ss,
    });
    let nt = trials as f64;
    let (mc, ms) = (total.c / nt, total.s / nt);
    let se = |sq: f64, mean: f64| {
        if trials < 2 {
            0.0
        } else {
            ((sq / nt - mean * mean).max(0.0) * nt / (nt - 1.0) / nt).sqrt()
        }
    };
    Ok(McEstimate {
        mean: C64::new(mc, ms),
        stderr_re: se(total.cc, mc),
        stderr_im: se(total.ss, ms),
        trials,
        seed,
    })
}

/// Random model mixing all four families, for tests and property suites.
pub fn random_model(rng: &mut impl Rng, n: usize) -> DiagonalSumModel {
    let cells = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| match rng.gen_range(0..4) {
                    0 => Distribution::PointMass { x: rng.gen_range(-2.0..2.0) },
                    1 => Distribution::Bernoulli { p: rng.gen_range(0.0..1.0) },
                    2 => {
                        let a = rng.gen_range(-2.0..1.0);
                        Distribution::Uniform { a, b: a + rng.gen_range(0.1..2.0) }
                    }
                    _ => Distribution::Normal {
                        mean: rng.gen_range(-1.0..1.0),
                        variance: rng.gen_range(0.0..1.5),
                    },
                })
                .collect()
        })
        .collect();
    DiagonalSumModel::new(CharFnMatrix::new(cells).expect("square grid"))
}
