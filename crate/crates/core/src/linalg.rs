//! Dense complex linear algebra shared by the numeric modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_THRESHOLD: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

pub fn basis_state(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Largest entry of `m − m†`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖U†U − I‖_max`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.ncols())))
}

/// Eigen-decomposition of a hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        // Symmetrize away rounding noise before handing to the solver.
        let h = (m + m.adjoint()).scale(0.5);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).into_owned())
                .collect::<Vec<_>>(),
        );
        HermitianEigen { values, vectors }
    }
}

/// Sum of absolute eigenvalues of a hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    HermitianEigen::new(m).values.iter().map(|v| v.abs()).sum()
}

/// `½‖a − b‖₁` for hermitian `a`, `b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * trace_norm(&(a - b))
}

/// `tr_B` on `H_S ⊗ H_B` with the system index most significant.
pub fn partial_trace_bath(m: &CMatrix, ds: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), ds * db);
    CMatrix::from_fn(ds, ds, |i, j| {
        (0..db).map(|b| m[(i * db + b, j * db + b)]).sum()
    })
}

/// `tr_S` on `H_S ⊗ H_B`.
pub fn partial_trace_system(m: &CMatrix, ds: usize, db: usize) -> CMatrix {
    assert_eq!(m.nrows(), ds * db);
    CMatrix::from_fn(db, db, |a, b| {
        (0..ds).map(|s| m[(s * db + a, s * db + b)]).sum()
    })
}

/// Reshape a joint vector into its `ds × db` coefficient matrix.
pub fn as_system_bath_matrix(v: &CVector, ds: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(ds, db, |s, b| v[s * db + b])
}

/// Orthonormal basis of `{x : a x ≈ 0}` with per-vector residuals `‖a x‖`.
///
/// A singular value counts as zero when it falls below
/// `rel_tol × σ_max`. Vectors are returned by descending singular value, each
/// phase-fixed so that its largest-magnitude component is real positive.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> Vec<(CVector, f64)> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Compress tall systems to an n × n triangle first; the row space is unchanged.
    let square = if a.nrows() > n {
        a.clone().qr().r()
    } else {
        a.clone()
    };
    let padded = if square.nrows() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (square.nrows(), n)).copy_from(&square);
        p
    } else {
        square
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * sigma_max;

    let mut picked: Vec<usize> = (0..sigma.len())
        .filter(|&i| sigma_max == 0.0 || sigma[i] < cutoff)
        .collect();
    picked.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]).then(x.cmp(&y)));

    picked
        .into_iter()
        .map(|i| {
            let v = fix_phase(v_t.row(i).adjoint());
            let residual = (a * &v).norm();
            (v, residual)
        })
        .collect()
}

/// Rotate a vector so its largest component (first one on near-ties) is real positive.
pub fn fix_phase(v: CVector) -> CVector {
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return v;
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() >= largest * (1.0 - 1e-9))
        .copied()
        .expect("non-empty vector");
    let phase = pivot.conj() / pivot.norm();
    v.map(|z| z * phase)
}

/// `max |⟨v_i|v_j⟩ − δ_ij|`.
pub fn orthonormality_residual(vs: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((a.dotc(b) - target).norm());
        }
    }
    worst
}

pub fn columns(vs: &[CVector], dim: usize) -> CMatrix {
    if vs.is_empty() {
        CMatrix::zeros(dim, 0)
    } else {
        CMatrix::from_columns(vs)
    }
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases of equal dimension, computed as `‖(I − P_b) Q_a‖₂`.
pub fn largest_principal_sine(a: &[CVector], b: &[CVector], dim: usize) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let qa = columns(a, dim);
    let qb = columns(b, dim);
    let residual = &qa - &qb * (qb.adjoint() * &qa);
    residual
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| random_complex(rng));
    let n = v.norm();
    v / c(n)
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<Complex64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                ONE
            } else {
                d / d.norm()
            }
        })
        .collect();
    q * diag(&phases)
}

/// Random density matrix `Σ w_k |v_k⟩⟨v_k|` of the given rank supported on
/// the span of `support` (columns orthonormal).
pub fn random_density_on<R: Rng + ?Sized>(rng: &mut R, support: &CMatrix, rank: usize) -> CMatrix {
    let k = support.ncols();
    let g = CMatrix::from_fn(k, rank, |_, _| random_complex(rng));
    let w = support * g;
    let rho = &w * w.adjoint();
    let tr = rho.trace();
    rho / tr
}

pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    random_density_on(rng, &identity(dim), dim)
}

pub fn projector(vs: &[CVector], dim: usize) -> CMatrix {
    let q = columns(vs, dim);
    &q * q.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        // rows (1, 1, 0) and (0, 0, 1): kernel spanned by (1, -1, 0)/√2
        let a = CMatrix::from_row_slice(2, 3, &[ONE, ONE, ZERO, ZERO, ZERO, ONE]);
        let ns = null_space(&a, RANK_THRESHOLD);
        assert_eq!(ns.len(), 1);
        let (v, res) = &ns[0];
        assert!(*res < 1e-14);
        let s = 0.5f64.sqrt();
        assert!((v[0] - c(s)).norm() < 1e-14 || (v[1] - c(s)).norm() < 1e-14);
        assert!((v[0] + v[1]).norm() < 1e-14);
    }

    #[test]
    fn null_space_of_zero_matrix_is_everything() {
        let ns = null_space(&CMatrix::zeros(4, 3), RANK_THRESHOLD);
        assert_eq!(ns.len(), 3);
        let vs: Vec<_> = ns.into_iter().map(|(v, _)| v).collect();
        assert!(orthonormality_residual(&vs) < 1e-14);
    }

    #[test]
    fn tall_full_rank_has_trivial_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = CMatrix::from_fn(20, 4, |_, _| random_complex(&mut rng));
        assert!(null_space(&a, RANK_THRESHOLD).is_empty());
    }

    #[test]
    fn partial_traces_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 3);
        let ab = kron(&a, &b);
        assert!(max_abs(&(partial_trace_bath(&ab, 2, 3) - &a)) < 1e-14);
        assert!(max_abs(&(partial_trace_system(&ab, 2, 3) - &b)) < 1e-14);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_unitary(&mut rng, 6);
        assert!(unitarity_residual(&u) < 1e-13);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let p = projector(&[basis_state(2, 0)], 2);
        let q = projector(&[basis_state(2, 1)], 2);
        assert!((trace_distance(&p, &q) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phase_fix_makes_pivot_real_positive() {
        let v = CVector::from_column_slice(&[Complex64::new(0.0, 0.6), Complex64::new(0.0, -0.8)]);
        let w = fix_phase(v);
        assert!((w[1] - c(0.8)).norm() < 1e-15);
        assert!((w[0] - c(-0.6)).norm() < 1e-15);
    }
}
