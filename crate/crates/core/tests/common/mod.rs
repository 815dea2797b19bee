//! Reference computations for integration tests. These avoid the library's
//! own eigensolver-based propagation and combinatorics so that agreement is
//! meaningful.
#![allow(dead_code)]

use num_complex::Complex64;
use qdsym::linalg::{CMatrix, CVector};

/// `exp(−i H t)` by scaling and squaring a truncated Taylor series.
pub fn expm_taylor(h: &CMatrix, t: f64) -> CMatrix {
    let n = h.nrows();
    let m = h * Complex64::new(0.0, -t);
    let norm = m.norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Spin-0 multiplicity in `n` spin-½ factors from the closed form
/// `C(n, n/2) − C(n, n/2 + 1)`, zero for odd `n`.
pub fn singlet_multiplicity(n: usize) -> usize {
    if n % 2 == 1 {
        return 0;
    }
    binomial(n, n / 2) - binomial(n, n / 2 + 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Deformed singlet written out by hand on the basis |++⟩, |+−⟩, |−+⟩, |−−⟩.
pub fn singlet_by_hand(mu: f64) -> CVector {
    let norm = (1.0 + mu * mu).sqrt();
    CVector::from_vec(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0 / norm, 0.0),
        Complex64::new(-mu / norm, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// Distance between unit vectors after the best global phase.
pub fn phase_distance(a: &CVector, b: &CVector) -> f64 {
    (2.0 - 2.0 * a.dotc(b).norm()).max(0.0).sqrt()
}

/// `Tr_B` by explicit index summation on system ⊗ bath ordering.
pub fn trace_out_bath(m: &CMatrix, ds: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(ds, ds, |i, j| {
        (0..db).map(|a| m[(i * db + a, j * db + a)]).sum()
    })
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}
