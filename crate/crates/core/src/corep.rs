//! Corepresentations of S_μU(2) and their invariant vectors.
//!
//! A corepresentation on `C^d` is a `d × d` matrix `v` with algebra-valued
//! entries and `v(e_j) = Σ_i e_i ⊗ v_ij`. A vector `ψ` is invariant when
//! `v(ψ) = ψ ⊗ 1`, i.e. `Σ_j v_ij ψ_j = ψ_i · 1` for every row `i`. Expanding
//! each row in the PBW basis turns this into a finite linear system whose
//! kernel is computed numerically.

use std::collections::BTreeSet;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, RANK_THRESHOLD};
use crate::qalg::{Algebra, AlgebraElement, Monomial, Mu, TensorPower};

/// Largest register built symbolically.
pub const MAX_REGISTER_QUBITS: usize = 6;

#[derive(Clone, Debug)]
pub struct Corepresentation {
    dim: usize,
    /// Row-major entries.
    entries: Vec<AlgebraElement>,
    algebra: Algebra,
}

impl Corepresentation {
    /// Wraps an arbitrary matrix without checking the corepresentation axiom;
    /// use [`check_axiom`] to validate.
    pub fn from_entries(
        algebra: Algebra,
        dim: usize,
        entries: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "{} entries for a {dim}×{dim} corepresentation",
                entries.len()
            )));
        }
        for e in &entries {
            if e.algebra() != &algebra {
                return Err(Error::ParameterMismatch {
                    left: algebra.mu().value(),
                    right: e.mu().value(),
                });
            }
        }
        Ok(Corepresentation {
            dim,
            entries,
            algebra,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn mu(&self) -> Mu {
        self.algebra.mu()
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    /// Replace one entry, e.g. to build negative controls.
    pub fn with_entry(mut self, i: usize, j: usize, value: AlgebraElement) -> Self {
        self.entries[i * self.dim + j] = value;
        self
    }

    pub fn degree(&self) -> u32 {
        self.entries
            .iter()
            .map(AlgebraElement::degree)
            .max()
            .unwrap_or(0)
    }

    /// Matrix of PBW coefficients stacking one row per (row index, monomial)
    /// pair; its kernel is the invariant subspace.
    pub fn invariance_constraints(&self) -> CMatrix {
        let monomials: BTreeSet<Monomial> = self
            .entries
            .iter()
            .flat_map(|e| e.terms().map(|(m, _)| *m))
            .chain(std::iter::once(Monomial::ONE))
            .collect();
        let monomials: Vec<Monomial> = monomials.into_iter().collect();
        let d = self.dim;
        let mut a = CMatrix::zeros(d * monomials.len(), d);
        for i in 0..d {
            for (k, m) in monomials.iter().enumerate() {
                let row = i * monomials.len() + k;
                for j in 0..d {
                    let mut value = self.entry(i, j).coefficient(m);
                    if m.is_one() && i == j {
                        value -= linalg::ONE;
                    }
                    a[(row, j)] = value;
                }
            }
        }
        a
    }
}

/// `u = [[α, −μγ*], [γ, α*]]` in the basis `|+⟩, |−⟩`.
pub fn fundamental(algebra: Algebra) -> Corepresentation {
    let mu = algebra.mu().value();
    let entries = vec![
        algebra.alpha(),
        -mu * &algebra.gamma_star(),
        algebra.gamma(),
        algebra.alpha_star(),
    ];
    Corepresentation {
        dim: 2,
        entries,
        algebra,
    }
}

/// `(v ⊗ w)_{(i,k),(j,l)} = v_ij · w_kl` with the first factor's index most significant.
pub fn tensor_product(v: &Corepresentation, w: &Corepresentation) -> Result<Corepresentation> {
    if v.algebra != w.algebra {
        return Err(Error::ParameterMismatch {
            left: v.mu().value(),
            right: w.mu().value(),
        });
    }
    let (dv, dw) = (v.dim, w.dim);
    let dim = dv * dw;
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dv {
        for k in 0..dw {
            for j in 0..dv {
                for l in 0..dw {
                    entries.push(v.entry(i, j).multiply(w.entry(k, l))?);
                }
            }
        }
    }
    Ok(Corepresentation {
        dim,
        entries,
        algebra: v.algebra,
    })
}

/// The `n`-qubit register `u^{⊗n}`, left-associated.
pub fn register(algebra: Algebra, n: usize) -> Result<Corepresentation> {
    if n == 0 {
        return Err(Error::Dimension("register needs at least one qubit".into()));
    }
    if n > MAX_REGISTER_QUBITS {
        return Err(Error::RegisterBudget {
            requested: n,
            max: MAX_REGISTER_QUBITS,
        });
    }
    let u = fundamental(algebra);
    let mut acc = u.clone();
    for _ in 1..n {
        acc = tensor_product(&acc, &u)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomReport {
    /// Largest coefficient deviation between `φ(v_ij)` and `Σ_k v_ik ⊗ v_kj`.
    pub max_residual: f64,
}

impl AxiomReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

pub fn check_axiom(v: &Corepresentation) -> AxiomReport {
    let mut worst: f64 = 0.0;
    for i in 0..v.dim {
        for j in 0..v.dim {
            let lhs = v.entry(i, j).coproduct();
            let rhs = (0..v.dim).fold(TensorPower::zero(v.algebra), |acc, k| {
                let t = TensorPower::pure([v.entry(i, k), v.entry(k, j)])
                    .expect("entries share an algebra");
                acc.add(&t)
            });
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    AxiomReport {
        max_residual: worst,
    }
}

/// Largest deviation of `v*v` and `vv*` from the identity over the algebra.
pub fn unitarity_residual(v: &Corepresentation) -> f64 {
    let alg = v.algebra;
    let d = v.dim;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { alg.one() } else { alg.zero() };
            let left = (0..d).fold(alg.zero(), |acc, k| {
                &acc + &(&v.entry(k, i).adjoint() * v.entry(k, j))
            });
            let right = (0..d).fold(alg.zero(), |acc, k| {
                &acc + &(v.entry(i, k) * &v.entry(j, k).adjoint())
            });
            worst = worst
                .max(left.max_abs_diff(&target))
                .max(right.max_abs_diff(&target));
        }
    }
    worst
}

/// Orthonormal basis of a subspace with per-vector residuals of the equation
/// that defines it.
#[derive(Clone, Debug, Default)]
pub struct InvariantBasis {
    pub dim: usize,
    pub vectors: Vec<CVector>,
    pub residuals: Vec<f64>,
}

impl InvariantBasis {
    pub fn from_null_space(dim: usize, pairs: Vec<(CVector, f64)>) -> Self {
        let (vectors, residuals) = pairs.into_iter().unzip();
        InvariantBasis {
            dim,
            vectors,
            residuals,
        }
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn projector(&self) -> CMatrix {
        linalg::projector(&self.vectors, self.dim)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// CSV with columns `vector,index,component_re,component_im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "vector,index,component_re,component_im")?;
        for (k, v) in self.vectors.iter().enumerate() {
            for (i, z) in v.iter().enumerate() {
                writeln!(
                    out,
                    "{k},{i},{},{}",
                    crate::report::num(z.re),
                    crate::report::num(z.im)
                )?;
            }
        }
        Ok(())
    }
}

/// Solve `v(ψ) = ψ ⊗ 1`.
pub fn invariant_subspace(v: &Corepresentation) -> InvariantBasis {
    let a = v.invariance_constraints();
    InvariantBasis::from_null_space(v.dim, linalg::null_space(&a, RANK_THRESHOLD))
}

/// The two-qubit deformed singlet `(|+−⟩ − μ|−+⟩)/√(1+μ²)`.
pub fn deformed_singlet(mu: Mu) -> CVector {
    let m = mu.value();
    let n = (1.0 + m * m).sqrt();
    CVector::from_column_slice(&[
        linalg::ZERO,
        Complex64::new(1.0 / n, 0.0),
        Complex64::new(-m / n, 0.0),
        linalg::ZERO,
    ])
}

/// The deformed triplet `|++⟩, μ(|+−⟩ + μ⁻¹|−+⟩)/√(1+μ²), |−−⟩`.
pub fn deformed_triplet(mu: Mu) -> [CVector; 3] {
    let m = mu.value();
    let n = (1.0 + m * m).sqrt();
    [
        linalg::basis_state(4, 0),
        CVector::from_column_slice(&[
            linalg::ZERO,
            Complex64::new(m / n, 0.0),
            Complex64::new(1.0 / n, 0.0),
            linalg::ZERO,
        ]),
        linalg::basis_state(4, 3),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, orthonormality_residual};

    fn alg(mu: f64) -> Algebra {
        Algebra::new(Mu::new(mu).unwrap())
    }

    #[test]
    fn fundamental_entries_and_unitarity() {
        let a = alg(0.4);
        let u = fundamental(a);
        let want = -0.4 * &a.gamma_star();
        assert_eq!(u.entry(0, 1), &want);
        assert!(unitarity_residual(&u) < 1e-15);
    }

    #[test]
    fn classical_fundamental_commutes() {
        let u = fundamental(alg(1.0));
        for x in u.entries() {
            for y in u.entries() {
                assert!((x * y).max_abs_diff(&(y * x)) < 1e-15);
            }
        }
    }

    #[test]
    fn tensor_square_shape_and_corner() {
        let a = alg(0.7);
        let u = fundamental(a);
        let uu = tensor_product(&u, &u).unwrap();
        assert_eq!(uu.dim(), 4);
        assert_eq!(uu.entry(0, 0), &a.monomial(Monomial::new(2, 0, 0)));
        assert!(unitarity_residual(&uu) < 1e-13);
    }

    #[test]
    fn tensor_product_rejects_mixed_parameters() {
        let u = fundamental(alg(0.7));
        let w = fundamental(alg(0.5));
        assert!(tensor_product(&u, &w).is_err());
    }

    #[test]
    fn register_degree_bound_and_budget() {
        let a = alg(0.6);
        let r1 = register(a, 1).unwrap();
        assert_eq!(r1.entries(), fundamental(a).entries());
        assert_eq!(register(a, 2).unwrap().dim(), 4);
        assert!(register(a, 3).unwrap().degree() <= 3);
        assert!(matches!(
            register(a, 7),
            Err(Error::RegisterBudget { requested: 7, .. })
        ));
    }

    #[test]
    fn axiom_holds_and_negative_control_fails() {
        for mu in [-0.3, 0.3, 0.7, 1.0] {
            let a = alg(mu);
            let u = fundamental(a);
            assert!(check_axiom(&u).max_residual <= 1e-12);
            let uu = tensor_product(&u, &u).unwrap();
            assert!(check_axiom(&uu).max_residual <= 1e-12);
        }
        let a = alg(0.7);
        let broken = fundamental(a).with_entry(0, 0, a.zero());
        assert!(check_axiom(&broken).max_residual > 0.1);
    }

    #[test]
    fn fundamental_has_no_invariant_vector() {
        assert!(invariant_subspace(&fundamental(alg(0.5))).is_empty());
    }

    #[test]
    fn singlet_is_the_invariant_of_the_square() {
        for mu in [-0.7, -0.3, 0.3, 0.7, 1.0] {
            let m = Mu::new(mu).unwrap();
            let basis = invariant_subspace(&register(Algebra::new(m), 2).unwrap());
            assert_eq!(basis.len(), 1, "μ={mu}");
            let overlap = basis.vectors[0].dotc(&deformed_singlet(m)).norm();
            assert!((overlap - 1.0).abs() < 1e-12, "μ={mu}");
            assert!(basis.max_residual() < 1e-12);
        }
    }

    #[test]
    fn triplet_spans_the_complement() {
        let m = Mu::new(-0.3).unwrap();
        let basis = invariant_subspace(&register(Algebra::new(m), 2).unwrap());
        let complement = linalg::identity(4) - basis.projector();
        let triplet = deformed_triplet(m);
        assert!(orthonormality_residual(&triplet) < 1e-15);
        assert!(max_abs(&(complement - linalg::projector(&triplet, 4))) < 1e-10);
    }

    #[test]
    fn odd_register_has_no_invariants() {
        let basis = invariant_subspace(&register(alg(0.7), 3).unwrap());
        assert!(basis.is_empty());
    }

    #[test]
    fn csv_layout() {
        let m = Mu::new(0.5).unwrap();
        let basis = invariant_subspace(&register(Algebra::new(m), 2).unwrap());
        let mut buf = Vec::new();
        basis.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "vector,index,component_re,component_im");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("0,1,"));
    }
}
