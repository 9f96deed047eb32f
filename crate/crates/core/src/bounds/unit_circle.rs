//! Bounds and closed forms in polar coordinates, in particular for matrices
//! with entries on the unit circle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ComplexMatrix, C64};

/// `z_jr = a_jr exp(i x_jr)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarMatrix {
    moduli: Vec<Vec<f64>>,
    phases: Vec<Vec<f64>>,
}

fn check_grid(name: &str, rows: &[Vec<f64>]) -> Result<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::domain(format!("{name} rows have different lengths")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::domain(format!("{name} has non-finite entries")));
    }
    Ok(cols)
}

impl PolarMatrix {
    pub fn new(moduli: Vec<Vec<f64>>, phases: Vec<Vec<f64>>) -> Result<Self> {
        let c1 = check_grid("moduli", &moduli)?;
        let c2 = check_grid("phases", &phases)?;
        if moduli.len() != phases.len() || c1 != c2 {
            return Err(Error::domain("moduli and phases differ in shape"));
        }
        if moduli.iter().flatten().any(|&a| a < 0.0) {
            return Err(Error::domain("moduli must be non-negative"));
        }
        Ok(PolarMatrix { moduli, phases })
    }

    pub fn from_matrix(z: &ComplexMatrix) -> Self {
        let rows = z.to_rows();
        PolarMatrix {
            moduli: rows.iter().map(|r| r.iter().map(|c| c.norm()).collect()).collect(),
            phases: rows.iter().map(|r| r.iter().map(|c| c.arg()).collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.moduli.len()
    }

    pub fn cols(&self) -> usize {
        self.moduli.first().map_or(0, Vec::len)
    }

    pub fn modulus(&self, j: usize, r: usize) -> f64 {
        self.moduli[j][r]
    }

    pub fn phase(&self, j: usize, r: usize) -> f64 {
        self.phases[j][r]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows(), self.cols(), |j, r| {
            C64::from_polar(self.moduli[j][r], self.phases[j][r])
        })
    }

    /// `y_{j,k,r,s} = x_jr - x_kr - x_js + x_ks`.
    pub fn y(&self, j: usize, k: usize, r: usize, s: usize) -> f64 {
        let x = &self.phases;
        x[j][r] - x[k][r] - x[j][s] + x[k][s]
    }

    /// `b_{j,k,r,s} = (a_jr a_ks - a_kr a_js)^2`.
    pub fn b(&self, j: usize, k: usize, r: usize, s: usize) -> f64 {
        let a = &self.moduli;
        let d = a[j][r] * a[k][s] - a[k][r] * a[j][s];
        d * d
    }

    /// `|z_ju z_kv + z_ku z_jv|^2 = b + 4 a_ju a_kv a_ku a_jv cos^2(y/2)`.
    fn pair_term(&self, j: usize, k: usize, u: usize, v: usize) -> f64 {
        let a = &self.moduli;
        let c = (self.y(j, k, u, v) / 2.0).cos();
        self.b(j, k, u, v) + 4.0 * a[j][u] * a[k][v] * a[k][u] * a[j][v] * c * c
    }

    /// Hadamard bound divided by `n!`, from the stored moduli.
    pub fn hadamard_over_factorial(&self) -> Result<f64> {
        let n = self.rows();
        if n != self.cols() {
            return Err(Error::domain("need a square matrix"));
        }
        Ok((0..n)
            .map(|r| ((0..n).map(|j| self.moduli[j][r].powi(2)).sum::<f64>() / n as f64).sqrt())
            .product())
    }
}

/// `f(Z, {u, v})` in polar form.
pub fn f_pair_closed_form(z: &PolarMatrix, u: usize, v: usize) -> Result<f64> {
    let n = z.rows();
    if n < 2 || u == v || u >= z.cols() || v >= z.cols() {
        return Err(Error::domain("need two distinct columns and n >= 2"));
    }
    let mut s = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                s += z.pair_term(j, k, u, v);
            }
        }
    }
    Ok(s / (4 * n * (n - 1)) as f64)
}

/// `F(Z, 2)` in polar form.
#[allow(non_snake_case)]
pub fn F2_closed_form(z: &PolarMatrix) -> Result<f64> {
    let (n, m) = (z.rows(), z.cols());
    if m < 2 || n < m {
        return Err(Error::domain("need 2 <= m <= n"));
    }
    let mut s = 0.0;
    for r in 0..m {
        for q in 0..m {
            if r == q {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    if j != k {
                        s += z.pair_term(j, k, r, q);
                    }
                }
            }
        }
    }
    Ok(s / (4 * m * (m - 1) * n * (n - 1)) as f64)
}

/// Exponents `x_jr` and a real `t`, inducing `z_jr(t) = exp(i t x_jr)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCircleSpec {
    pub exponents: Vec<Vec<f64>>,
    pub t: f64,
}

impl UnitCircleSpec {
    pub fn new(exponents: Vec<Vec<f64>>, t: f64) -> Result<Self> {
        let c = check_grid("exponents", &exponents)?;
        if c != exponents.len() {
            return Err(Error::domain("exponents must form a square matrix"));
        }
        if !t.is_finite() {
            return Err(Error::domain("t must be finite"));
        }
        Ok(UnitCircleSpec { exponents, t })
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn at(&self, t: f64) -> UnitCircleSpec {
        UnitCircleSpec {
            exponents: self.exponents.clone(),
            t,
        }
    }

    pub fn polar(&self) -> PolarMatrix {
        let n = self.n();
        PolarMatrix {
            moduli: vec![vec![1.0; n]; n],
            phases: self
                .exponents
                .iter()
                .map(|r| r.iter().map(|x| self.t * x).collect())
                .collect(),
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n(), self.n(), |j, r| C64::from_polar(1.0, self.t * self.exponents[j][r]))
    }

    /// `y_{j,k,r,s}` of the exponents (without the factor `t`).
    pub fn y(&self, j: usize, k: usize, r: usize, s: usize) -> f64 {
        let x = &self.exponents;
        x[j][r] - x[k][r] - x[j][s] + x[k][s]
    }

    fn check(&self) -> Result<usize> {
        let n = self.n();
        if n < 2 {
            return Err(Error::domain("need n >= 2"));
        }
        Ok(n)
    }

    /// `(1/(n(n-1))) sum_{j != k} cos^2(t y_{j,k,u,v} / 2)`, which is `f(Z(t), {u, v})`.
    pub fn pair_average(&self, u: usize, v: usize) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    s += (self.t * self.y(j, k, u, v) / 2.0).cos().powi(2);
                }
            }
        }
        s / (n * (n - 1)) as f64
    }

    /// `(1/(n^2(n-1)^2)) sum_{r != s} sum_{j != k} cos^2(t y / 2)`, which is `F(Z(t), 2)`.
    pub fn full_average(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    s += self.pair_average(u, v);
                }
            }
        }
        s / (n * (n - 1)) as f64
    }
}

/// `prod_{r=1}^{floor(n/2)} sqrt(f(Z(t), {s(2r-1), s(2r)}))` for a permutation
/// `s` of `0..n`; bounds `|per(Z(t))|/n!`.
pub fn unit_circle_pair_bound(spec: &UnitCircleSpec, s: &[usize]) -> Result<f64> {
    let n = spec.check()?;
    let mut seen = vec![false; n];
    if s.len() != n || s.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::domain(format!("{s:?} is not a permutation of 0..{n}")));
    }
    Ok((0..n / 2)
        .map(|r| spec.pair_average(s[2 * r], s[2 * r + 1]).sqrt())
        .product())
}

/// `F(Z(t), 2)^{d/2}` with `d = floor(n/2)`; bounds `|per(Z(t))|/n!`.
pub fn unit_circle_avg_bound(spec: &UnitCircleSpec) -> Result<f64> {
    let n = spec.check()?;
    Ok(spec.full_average().powf((n / 2) as f64 / 2.0))
}

/// `theta = (t^2/(4 n^2 (n-1)^2)) sum_{r != s} sum_{j != k} y^2 max(0, 1 - t^2 y^2 / 12)`.
pub fn unit_circle_theta(spec: &UnitCircleSpec) -> Result<f64> {
    let n = spec.check()?;
    let t2 = spec.t * spec.t;
    let mut s = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    if j != k {
                        let y2 = spec.y(j, k, u, v).powi(2);
                        s += y2 * (1.0 - t2 * y2 / 12.0).max(0.0);
                    }
                }
            }
        }
    }
    let nn = (n * (n - 1)) as f64;
    Ok(t2 * s / (4.0 * nn * nn))
}

/// `(1 - theta)^{d/2}`.
pub fn unit_circle_theta_bound(spec: &UnitCircleSpec) -> Result<f64> {
    let n = spec.check()?;
    let theta = unit_circle_theta(spec)?;
    Ok((1.0 - theta).max(0.0).powf((n / 2) as f64 / 2.0))
}
