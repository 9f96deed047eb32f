//! Classical permanent bounds used for comparison.

use serde::{Deserialize, Serialize};

use super::linalg::{hermitian_eigenvalues, power_iteration, real_rank};
use crate::combinatorics::{factorial, IndexSet};
use crate::error::{Error, Result};
use crate::exact::{hafnian, permanent, permanent_d, ComplexMatrix};

/// Entries of a `+-1` matrix may carry rounding residue, e.g. `exp(i pi)`.
pub const SIGN_TOLERANCE: f64 = 1e-12;

/// A bound that only exists for some inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Value(f64),
    NotApplicable(String),
}

impl Applicability {
    pub fn value(&self) -> Option<f64> {
        match self {
            Applicability::Value(v) => Some(*v),
            Applicability::NotApplicable(_) => None,
        }
    }
}

fn check_square(z: &ComplexMatrix) -> Result<usize> {
    if !z.is_square() {
        return Err(Error::domain(format!("need a square matrix, got {}x{}", z.rows(), z.cols())));
    }
    Ok(z.rows())
}

/// Squared modulus through `hypot`, so unit-modulus entries give exactly 1.
fn modulus_sq(z: crate::exact::C64) -> f64 {
    let a = z.norm();
    a * a
}

/// `n! prod_r ((1/n) sum_j |z_jr|^2)^{1/2}`.
pub fn hadamard(z: &ComplexMatrix) -> Result<f64> {
    let n = check_square(z)?;
    let mut prod = 1.0;
    for r in 0..n {
        let ms = (0..n).map(|j| modulus_sq(z.get(j, r))).sum::<f64>() / n as f64;
        prod *= ms.sqrt();
    }
    Ok(factorial(n) * prod)
}

/// `prod_{r in M} (1/n) sum_j |z_jr|^2`, the right side of the averaged
/// squared minor inequality for columns `M`.
pub fn ckp_minor(z: &ComplexMatrix, m: &IndexSet) -> Result<f64> {
    if !m.within(z.cols()) {
        return Err(Error::domain(format!("column set {:?} is out of range", m.as_slice())));
    }
    let n = z.rows() as f64;
    Ok(m.iter()
        .map(|&r| (0..z.rows()).map(|j| modulus_sq(z.get(j, r))).sum::<f64>() / n)
        .product())
}

/// Operator norm index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    One,
    Two,
    Infinity,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::One => "1",
            NormKind::Two => "2",
            NormKind::Infinity => "inf",
        }
    }
}

/// `||Z||_p`.
pub fn operator_norm(z: &ComplexMatrix, p: NormKind) -> Result<f64> {
    let n = check_square(z)?;
    Ok(match p {
        NormKind::One => (0..n)
            .map(|r| (0..n).map(|j| z.get(j, r).norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Infinity => (0..n)
            .map(|j| (0..n).map(|r| z.get(j, r).norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Two => power_iteration(&z.gram())?.max(0.0).sqrt(),
    })
}

/// `||Z||_p^n`.
pub fn opnorm(z: &ComplexMatrix, p: NormKind) -> Result<f64> {
    let n = check_square(z)?;
    Ok(operator_norm(z, p)?.powi(n as i32))
}

/// Singular values in decreasing order.
pub fn singular_values(z: &ComplexMatrix) -> Result<Vec<f64>> {
    check_square(z)?;
    Ok(hermitian_eigenvalues(&z.gram())?
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect())
}

/// `((1/n) sum_j alpha_j^{2n})^{1/2}` over the singular values `alpha`.
pub fn singular(z: &ComplexMatrix) -> Result<f64> {
    let n = check_square(z)?;
    if n == 0 {
        return Ok(1.0);
    }
    let s: f64 = singular_values(z)?.iter().map(|a| a.powi(2 * n as i32)).sum();
    Ok((s / n as f64).sqrt())
}

/// `per(D_{n, rank-1})` for a `+-1` matrix with `n >= 5`; otherwise not
/// applicable.
pub fn krauter(z: &ComplexMatrix) -> Result<Applicability> {
    let n = check_square(z)?;
    if n < 5 {
        return Ok(Applicability::NotApplicable(format!("needs n >= 5, got {n}")));
    }
    let mut signs = Vec::with_capacity(n * n);
    for &e in z.entries() {
        if e.im.abs() > SIGN_TOLERANCE || (e.re.abs() - 1.0).abs() > SIGN_TOLERANCE {
            return Ok(Applicability::NotApplicable("entries are not all +1 or -1".into()));
        }
        signs.push(e.re.signum());
    }
    let rank = real_rank(n, n, signs);
    Ok(Applicability::Value(permanent_d(n, rank - 1)?))
}

/// Rank used by [`krauter`], exposed for reporting.
pub fn sign_rank(z: &ComplexMatrix) -> usize {
    real_rank(z.rows(), z.cols(), z.entries().iter().map(|e| e.re).collect())
}

/// `sqrt(per(|Z|))`, an upper bound of `|haf(Z)|`.
pub fn haf_per(z: &ComplexMatrix) -> Result<f64> {
    hafnian(z)?;
    Ok(permanent(&z.abs())?.re.max(0.0).sqrt())
}
