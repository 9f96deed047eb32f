//! Small dense eigenvalue and rank routines for the spectral baselines.

use crate::error::{Error, Result};
use crate::exact::{ComplexMatrix, C64};

pub const SPECTRAL_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 10_000;
pub const RANK_PIVOT_THRESHOLD: f64 = 1e-9;

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power
/// iteration, stopping when the Rayleigh quotient changes by less than
/// `SPECTRAL_TOLERANCE` relative.
pub fn power_iteration(h: &ComplexMatrix) -> Result<f64> {
    let n = h.rows();
    if n == 0 {
        return Ok(0.0);
    }
    // a slightly uneven start avoids starting orthogonal to the top eigenvector
    let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0 + 0.01 * i as f64, 0.0)).collect();
    normalize(&mut v);
    let mut lambda = 0.0;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let w = h.mul_vec(&v);
        let next: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w.into_iter().map(|x| x / norm).collect();
        change = (next - lambda).abs();
        if change <= SPECTRAL_TOLERANCE * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::Numeric {
        message: "power iteration did not converge".into(),
        iterations: MAX_ITERATIONS,
        last_change: change,
    })
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Eigenvalues of a real symmetric matrix (row-major, `n x n`) by cyclic
/// Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let mut off = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        off = off.sqrt();
        if off <= SPECTRAL_TOLERANCE * scale {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Numeric {
        message: "Jacobi sweeps did not converge".into(),
        iterations: MAX_ITERATIONS,
        last_change: off,
    })
}

/// Eigenvalues of a Hermitian matrix through its real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `h` twice over.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h.get(i, j);
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut ev = jacobi_eigenvalues(a, m)?;
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev.into_iter().step_by(2).collect())
}

/// Rank of a real matrix by Gaussian elimination with partial pivoting.
pub fn real_rank(rows: usize, cols: usize, mut a: Vec<f64>) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (piv, val) = (rank..rows)
            .map(|r| (r, a[r * cols + c].abs()))
            .fold((rank, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if val <= RANK_PIVOT_THRESHOLD {
            continue;
        }
        for k in 0..cols {
            a.swap(rank * cols + k, piv * cols + k);
        }
        for r in rank + 1..rows {
            let factor = a[r * cols + c] / a[rank * cols + c];
            for k in c..cols {
                a[r * cols + k] -= factor * a[rank * cols + k];
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_spectrum() {
        let a = vec![2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0];
        let mut ev = jacobi_eigenvalues(a, 3).unwrap();
        ev.sort_by(f64::total_cmp);
        for (x, y) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_embedding_halves_multiplicity() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let h = ComplexMatrix::from_rows(vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let ev = hermitian_eigenvalues(&h).unwrap();
        assert!((ev[0] - 3.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        assert!((power_iteration(&h).unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(real_rank(2, 2, vec![1.0, 2.0, 2.0, 4.0]), 1);
        assert_eq!(real_rank(3, 3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]), 3);
        assert_eq!(real_rank(2, 3, vec![0.0; 6]), 0);
    }
}
