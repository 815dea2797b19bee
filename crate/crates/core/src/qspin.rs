//! Deformed collective spin operators on `n`-qubit registers.
//!
//! Two constructions are provided:
//!
//! * [`build_recurrence`] applies the tensor-step recurrences
//!   `K_3(ψ⊗|±⟩) = ±½ψ⊗|±⟩ + μ^{∓2} K_3ψ⊗|±⟩` and
//!   `K_j(ψ⊗|±⟩) = ±½ψ⊗|±⟩ + μ^{∓1} K_jψ⊗|±⟩` (j = 1, 2) to a one-qubit base case.
//! * [`build_enveloping`] uses the deformed coproduct
//!   `J_+ ↦ J_+ ⊗ q^{J_3} + q^{−J_3} ⊗ J_+`, `J_3 ↦ J_3 ⊗ 1 + 1 ⊗ J_3`,
//!   `J_− = J_+†`, with `q = μ⁻¹`.
//!
//! The joint kernel of an operator set is the numerical analogue of the
//! invariance condition; [`compare_with_corep`] checks it against the
//! corepresentation oracle.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use crate::corep::InvariantBasis;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, RANK_THRESHOLD};
use crate::qalg::Mu;

/// Largest register handled by the operator-kernel method.
pub const MAX_KERNEL_QUBITS: usize = 10;

/// Principal-angle tolerance for declaring two kernels equal.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Recurrence,
    Enveloping,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Recurrence => "recurrence",
            Strategy::Enveloping => "enveloping",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recurrence" => Ok(Strategy::Recurrence),
            "enveloping" => Ok(Strategy::Enveloping),
            other => Err(Error::Config(format!(
                "unknown strategy `{other}` (expected recurrence or enveloping)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    K1,
    K2,
    K3,
    JPlus,
    JMinus,
    J3,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::K1 => "K1",
            Generator::K2 => "K2",
            Generator::K3 => "K3",
            Generator::JPlus => "Jplus",
            Generator::JMinus => "Jminus",
            Generator::J3 => "J3",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One-qubit matrices anchoring the recurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseCase {
    pub k1: CMatrix,
    pub k2: CMatrix,
    pub k3: CMatrix,
}

impl BaseCase {
    pub fn new(k1: CMatrix, k2: CMatrix, k3: CMatrix) -> Result<Self> {
        for (name, m) in [("K1", &k1), ("K2", &k2), ("K3", &k3)] {
            if m.shape() != (2, 2) {
                return Err(Error::Dimension(format!("base {name} must be 2×2")));
            }
        }
        Ok(BaseCase { k1, k2, k3 })
    }

    /// The only diagonal base for which the two-qubit recurrence annihilates
    /// the deformed singlet:
    /// `K_3 = diag(1/(2μ²), −μ²/2)`, `K_1 = K_2 = diag(1/(2μ), −μ/2)`.
    pub fn singlet_diagonal(mu: Mu) -> Self {
        let m = mu.value();
        let kj = linalg::diag(&[c(0.5 / m), c(-0.5 * m)]);
        BaseCase {
            k1: kj.clone(),
            k2: kj,
            k3: linalg::diag(&[c(0.5 / (m * m)), c(-0.5 * m * m)]),
        }
    }

    /// Half the Pauli matrices.
    pub fn pauli_half() -> Self {
        let h = c(0.5);
        let z = linalg::ZERO;
        BaseCase {
            k1: CMatrix::from_row_slice(2, 2, &[z, h, h, z]),
            k2: CMatrix::from_row_slice(2, 2, &[z, -linalg::I * 0.5, linalg::I * 0.5, z]),
            k3: linalg::diag(&[h, -h]),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        [&self.k1, &self.k2, &self.k3]
            .iter()
            .all(|m| linalg::hermitian_residual(m) <= tol)
    }
}

#[derive(Clone, Debug)]
pub struct SpinOperatorSet {
    n: usize,
    mu: Mu,
    strategy: Strategy,
    ops: Vec<(Generator, CMatrix)>,
}

impl SpinOperatorSet {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn mu(&self) -> Mu {
        self.mu
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.ops.iter().map(|(g, _)| *g)
    }

    pub fn operators(&self) -> impl Iterator<Item = (Generator, &CMatrix)> {
        self.ops.iter().map(|(g, m)| (*g, m))
    }

    pub fn get(&self, g: Generator) -> Option<&CMatrix> {
        self.ops.iter().find(|(h, _)| *h == g).map(|(_, m)| m)
    }

    /// Left-to-right product of the named generators; the empty word is the identity.
    pub fn realize_word(&self, word: &[Generator]) -> Result<CMatrix> {
        let mut acc = linalg::identity(self.dim());
        for g in word {
            let m = self.get(*g).ok_or_else(|| {
                Error::Config(format!(
                    "generator {g} is not part of the {} operator set",
                    self.strategy.name()
                ))
            })?;
            acc *= m;
        }
        Ok(acc)
    }

    /// `(K_+, K_−, K_3)` with `K_± = K_1 ± iK_2`, or `(J_+, J_−, J_3)`.
    pub fn ladder(&self) -> (CMatrix, CMatrix, CMatrix) {
        let get = |g| self.get(g).expect("operator present for strategy").clone();
        match self.strategy {
            Strategy::Recurrence => {
                let (k1, k2) = (get(Generator::K1), get(Generator::K2));
                (
                    &k1 + &k2 * linalg::I,
                    &k1 - &k2 * linalg::I,
                    get(Generator::K3),
                )
            }
            Strategy::Enveloping => (
                get(Generator::JPlus),
                get(Generator::JMinus),
                get(Generator::J3),
            ),
        }
    }

    /// CSV with columns `operator,row,col,re,im` (nonzero entries only).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        use crate::report::num;
        writeln!(out, "operator,row,col,re,im")?;
        for (g, m) in &self.ops {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let z = m[(i, j)];
                    if z != linalg::ZERO {
                        writeln!(out, "{g},{i},{j},{},{}", num(z.re), num(z.im))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension(
            "operator set needs at least one qubit".into(),
        ));
    }
    if n > MAX_KERNEL_QUBITS {
        return Err(Error::RegisterBudget {
            requested: n,
            max: MAX_KERNEL_QUBITS,
        });
    }
    Ok(())
}

/// One application of the recurrence: `K ↦ K ⊗ diag(s⁻¹, s) + 1 ⊗ diag(½, −½)`.
fn recurrence_step(k: &CMatrix, scale: f64) -> CMatrix {
    let dim = k.nrows();
    linalg::kron(k, &linalg::diag(&[c(1.0 / scale), c(scale)]))
        + linalg::kron(&linalg::identity(dim), &linalg::diag(&[c(0.5), c(-0.5)]))
}

pub fn build_recurrence(mu: Mu, n: usize, base: &BaseCase) -> Result<SpinOperatorSet> {
    check_qubits(n)?;
    let m = mu.value();
    let (mut k1, mut k2, mut k3) = (base.k1.clone(), base.k2.clone(), base.k3.clone());
    for _ in 1..n {
        k1 = recurrence_step(&k1, m);
        k2 = recurrence_step(&k2, m);
        k3 = recurrence_step(&k3, m * m);
    }
    Ok(SpinOperatorSet {
        n,
        mu,
        strategy: Strategy::Recurrence,
        ops: vec![
            (Generator::K1, k1),
            (Generator::K2, k2),
            (Generator::K3, k3),
        ],
    })
}

/// Which deformation enters `q^{J_3}` in the enveloping coproduct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QConvention {
    /// `q = μ⁻¹`; reproduces the corepresentation singlet.
    InverseMu,
    /// `q = μ`; kept for the convention test.
    Mu,
}

pub fn build_enveloping(mu: Mu, n: usize) -> Result<SpinOperatorSet> {
    build_enveloping_with(mu, n, QConvention::InverseMu)
}

pub fn build_enveloping_with(mu: Mu, n: usize, convention: QConvention) -> Result<SpinOperatorSet> {
    check_qubits(n)?;
    let q = match convention {
        QConvention::InverseMu => 1.0 / mu.value(),
        QConvention::Mu => mu.value(),
    };
    // Principal branch; for q < 0 the phases cancel in J_+† up to an overall sign.
    let root = Complex64::new(q, 0.0).sqrt();
    let q_half = linalg::diag(&[root, root.inv()]);
    let q_half_inv = linalg::diag(&[root.inv(), root]);
    let raise = CMatrix::from_row_slice(
        2,
        2,
        &[linalg::ZERO, linalg::ONE, linalg::ZERO, linalg::ZERO],
    );
    let j3_one = linalg::diag(&[c(0.5), c(-0.5)]);

    let mut jp = raise.clone();
    let mut j3 = j3_one.clone();
    let mut q_inv_total = q_half_inv.clone();
    for _ in 1..n {
        let dim = j3.nrows();
        jp = linalg::kron(&jp, &q_half) + linalg::kron(&q_inv_total, &raise);
        j3 =
            linalg::kron(&j3, &linalg::identity(2)) + linalg::kron(&linalg::identity(dim), &j3_one);
        q_inv_total = linalg::kron(&q_inv_total, &q_half_inv);
    }
    let jm = jp.adjoint();
    Ok(SpinOperatorSet {
        n,
        mu,
        strategy: Strategy::Enveloping,
        ops: vec![
            (Generator::JPlus, jp),
            (Generator::JMinus, jm),
            (Generator::J3, j3),
        ],
    })
}

/// Orthonormal common kernel of all operators in the set.
pub fn joint_kernel(s: &SpinOperatorSet) -> InvariantBasis {
    let dim = s.dim();
    let blocks: Vec<&CMatrix> = s.ops.iter().map(|(_, m)| m).collect();
    let mut stacked = CMatrix::zeros(dim * blocks.len(), dim);
    for (k, m) in blocks.iter().enumerate() {
        stacked.view_mut((k * dim, 0), (dim, dim)).copy_from(m);
    }
    InvariantBasis::from_null_space(dim, linalg::null_space(&stacked, RANK_THRESHOLD))
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelComparison {
    pub strategy: Strategy,
    pub kernel_dim: usize,
    pub oracle_dim: usize,
    /// Largest principal angle, when the dimensions match.
    pub largest_angle: Option<f64>,
    pub agree: bool,
}

impl fmt::Display for KernelComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.agree { "agree" } else { "disagree" };
        write!(
            f,
            "{}: kernel dim {} vs corep dim {} ({verdict}",
            self.strategy.name(),
            self.kernel_dim,
            self.oracle_dim
        )?;
        match self.largest_angle {
            Some(a) => write!(f, ", largest angle {a:.3e})"),
            None => f.write_str(")"),
        }
    }
}

/// Compare the joint kernel of `s` with an invariant basis from the corep oracle.
pub fn compare_with_corep(
    s: &SpinOperatorSet,
    oracle: &InvariantBasis,
) -> Result<KernelComparison> {
    if oracle.dim != s.dim() {
        return Err(Error::Dimension(format!(
            "operator set acts on dimension {}, oracle basis on {}",
            s.dim(),
            oracle.dim
        )));
    }
    let kernel = joint_kernel(s);
    let largest_angle = (kernel.len() == oracle.len()).then(|| {
        linalg::largest_principal_sine(&kernel.vectors, &oracle.vectors, s.dim())
            .min(1.0)
            .asin()
    });
    let agree = largest_angle.is_some_and(|a| a <= AGREEMENT_TOLERANCE);
    Ok(KernelComparison {
        strategy: s.strategy,
        kernel_dim: kernel.len(),
        oracle_dim: oracle.len(),
        largest_angle,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corep::{deformed_singlet, invariant_subspace, register};
    use crate::linalg::{basis_state, kron_vec, max_abs, CVector};
    use crate::qalg::Algebra;

    fn mu(m: f64) -> Mu {
        Mu::new(m).unwrap()
    }

    #[test]
    fn recurrence_single_qubit_is_base() {
        let base = BaseCase::pauli_half();
        let s = build_recurrence(mu(0.4), 1, &base).unwrap();
        assert_eq!(s.get(Generator::K1).unwrap(), &base.k1);
        assert_eq!(s.get(Generator::K3).unwrap(), &base.k3);
    }

    #[test]
    fn singlet_base_annihilates_mixed_states() {
        let m = mu(0.6);
        let s = build_recurrence(m, 2, &BaseCase::singlet_diagonal(m)).unwrap();
        let k3 = s.get(Generator::K3).unwrap();
        assert!((k3 * basis_state(4, 1)).norm() < 1e-15);
        assert!((k3 * basis_state(4, 2)).norm() < 1e-15);
    }

    #[test]
    fn classical_recurrence_gives_total_sz() {
        let s = build_recurrence(Mu::classical(), 2, &BaseCase::pauli_half()).unwrap();
        let sz = linalg::diag(&[c(0.5), c(-0.5)]);
        let total =
            linalg::kron(&sz, &linalg::identity(2)) + linalg::kron(&linalg::identity(2), &sz);
        assert!(max_abs(&(s.get(Generator::K3).unwrap() - total)) < 1e-15);
    }

    #[test]
    fn recurrence_relations_reproduce_next_level() {
        let m = 0.7;
        let base = BaseCase::singlet_diagonal(mu(m));
        let plus = basis_state(2, 0);
        let minus = basis_state(2, 1);
        for n in 1..4 {
            let small = build_recurrence(mu(m), n, &base).unwrap();
            let big = build_recurrence(mu(m), n + 1, &base).unwrap();
            for (g, scale) in [
                (Generator::K1, m),
                (Generator::K2, m),
                (Generator::K3, m * m),
            ] {
                let k = small.get(g).unwrap();
                let kk = big.get(g).unwrap();
                for j in 0..small.dim() {
                    let psi = basis_state(small.dim(), j);
                    let kpsi: CVector = k * &psi;
                    let want_plus =
                        kron_vec(&psi, &plus) * c(0.5) + kron_vec(&kpsi, &plus) * c(1.0 / scale);
                    let want_minus =
                        kron_vec(&kpsi, &minus) * c(scale) - kron_vec(&psi, &minus) * c(0.5);
                    assert!((kk * kron_vec(&psi, &plus) - want_plus).norm() < 1e-14);
                    assert!((kk * kron_vec(&psi, &minus) - want_minus).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn enveloping_ladder_and_hermiticity() {
        for m in [-0.7, 0.3, 1.0] {
            let s = build_enveloping(mu(m), 3).unwrap();
            let (jp, jm, j3) = s.ladder();
            assert_eq!(jp.adjoint(), jm);
            assert!(linalg::hermitian_residual(&j3) < 1e-14);
        }
    }

    #[test]
    fn enveloping_classical_limit_is_collective_spin() {
        let s = build_enveloping(Mu::classical(), 2).unwrap();
        let raise = CMatrix::from_row_slice(
            2,
            2,
            &[linalg::ZERO, linalg::ONE, linalg::ZERO, linalg::ZERO],
        );
        let id = linalg::identity(2);
        let want = linalg::kron(&raise, &id) + linalg::kron(&id, &raise);
        assert!(max_abs(&(s.get(Generator::JPlus).unwrap() - want)) < 1e-15);
    }

    #[test]
    fn enveloping_kernel_is_the_singlet() {
        for m in [-0.7, 0.3, 0.7, 1.0] {
            let k = joint_kernel(&build_enveloping(mu(m), 2).unwrap());
            assert_eq!(k.len(), 1);
            let overlap = k.vectors[0].dotc(&deformed_singlet(mu(m))).norm();
            assert!((overlap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn q_convention_selected_by_corep_oracle() {
        let m = mu(0.7);
        let oracle = invariant_subspace(&register(Algebra::new(m), 2).unwrap());
        let good = compare_with_corep(
            &build_enveloping_with(m, 2, QConvention::InverseMu).unwrap(),
            &oracle,
        )
        .unwrap();
        let bad = compare_with_corep(
            &build_enveloping_with(m, 2, QConvention::Mu).unwrap(),
            &oracle,
        )
        .unwrap();
        assert!(good.agree);
        assert!(!bad.agree);
    }

    #[test]
    fn recurrence_kernel_is_two_dimensional() {
        let m = mu(0.7);
        let s = build_recurrence(m, 2, &BaseCase::singlet_diagonal(m)).unwrap();
        let k = joint_kernel(&s);
        assert_eq!(k.len(), 2);
        let p = k.projector();
        let want = linalg::projector(&[basis_state(4, 1), basis_state(4, 2)], 4);
        assert!(max_abs(&(p - want)) < 1e-12);
        let oracle = invariant_subspace(&register(Algebra::new(m), 2).unwrap());
        let cmp = compare_with_corep(&s, &oracle).unwrap();
        assert_eq!((cmp.kernel_dim, cmp.oracle_dim, cmp.agree), (2, 1, false));
    }

    #[test]
    fn single_qubit_kernels_are_empty() {
        let m = mu(0.5);
        assert!(joint_kernel(&build_enveloping(m, 1).unwrap()).is_empty());
        assert!(
            joint_kernel(&build_recurrence(m, 1, &BaseCase::singlet_diagonal(m)).unwrap())
                .is_empty()
        );
    }

    #[test]
    fn budget_and_words() {
        assert!(matches!(
            build_enveloping(mu(0.5), 11),
            Err(Error::RegisterBudget { .. })
        ));
        let s = build_enveloping(mu(0.5), 2).unwrap();
        assert_eq!(s.realize_word(&[]).unwrap(), linalg::identity(4));
        assert!(s.realize_word(&[Generator::K1]).is_err());
        let (jp, jm, _) = s.ladder();
        assert_eq!(
            s.realize_word(&[Generator::JPlus, Generator::JMinus])
                .unwrap(),
            jp * jm
        );
    }
}
