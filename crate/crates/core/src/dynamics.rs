//! System ⊗ bath Hamiltonians with quantum dynamical symmetry and their
//! unitary evolution (ħ = 1).
//!
//! A symmetric Hamiltonian has the form `H = Σ_α P_α(K) ⊗ T_α` where each
//! `P_α` is a polynomial in the spin generators. On a vector `ψ` with
//! `P_α(K)ψ = χ(P_α)ψ` for every term the joint evolution factorizes as
//! `U(t)(ψ⊗ζ) = ψ ⊗ exp(−iH_eff t)ζ` with `H_eff = Σ_α χ(P_α) T_α`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, HermitianEigen};
use crate::qspin::{Generator, SpinOperatorSet, Strategy};

/// Hermiticity tolerance for assembled Hamiltonians.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Tolerance on the χ-eigenvector precondition of [`verify_theorem1`].
pub const KERNEL_TOLERANCE: f64 = 1e-8;

/// Tolerance for density-matrix validation.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Default coupling strength for `g_k` and `h_k`.
pub const DEFAULT_COUPLING: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct BathSpec {
    pub mode_frequencies: Vec<f64>,
    /// Levels kept per mode.
    pub truncation: usize,
}

impl BathSpec {
    pub fn new(mode_frequencies: Vec<f64>, truncation: usize) -> Result<Self> {
        let spec = BathSpec {
            mode_frequencies,
            truncation,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            return Err(Error::InvalidBath(format!(
                "truncation must be at least 2, got {}",
                self.truncation
            )));
        }
        if self.mode_frequencies.is_empty() {
            return Err(Error::InvalidBath("at least one mode is required".into()));
        }
        if let Some(w) = self
            .mode_frequencies
            .iter()
            .find(|w| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidBath(format!(
                "mode frequency {w} is not positive"
            )));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.mode_frequencies.len()
    }

    pub fn dim(&self) -> usize {
        self.truncation.pow(self.modes() as u32)
    }
}

/// Truncated harmonic bath `H_B = Σ_k ω_k b_k† b_k`.
#[derive(Clone, Debug)]
pub struct Bath {
    spec: BathSpec,
    hamiltonian: CMatrix,
    annihilators: Vec<CMatrix>,
}

pub fn build_bath(spec: &BathSpec) -> Result<Bath> {
    spec.validate()?;
    let levels = spec.truncation;
    // b|m⟩ = √m |m−1⟩; b† is its adjoint so b†|top⟩ = 0.
    let single = CMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            c((j as f64).sqrt())
        } else {
            linalg::ZERO
        }
    });
    let modes = spec.modes();
    let annihilators: Vec<CMatrix> = (0..modes)
        .map(|k| {
            (0..modes).fold(linalg::identity(1), |acc, j| {
                let factor = if j == k {
                    single.clone()
                } else {
                    linalg::identity(levels)
                };
                linalg::kron(&acc, &factor)
            })
        })
        .collect();
    let dim = spec.dim();
    let hamiltonian = annihilators
        .iter()
        .zip(&spec.mode_frequencies)
        .fold(CMatrix::zeros(dim, dim), |acc, (b, w)| {
            acc + (b.adjoint() * b) * c(*w)
        });
    Ok(Bath {
        spec: spec.clone(),
        hamiltonian,
        annihilators,
    })
}

impl Bath {
    pub fn spec(&self) -> &BathSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn annihilator(&self, mode: usize) -> &CMatrix {
        &self.annihilators[mode]
    }

    pub fn creator(&self, mode: usize) -> CMatrix {
        self.annihilators[mode].adjoint()
    }

    /// `T = Σ_k g_k b_k`.
    pub fn linear_coupling(&self, g: &[Complex64]) -> Result<CMatrix> {
        self.check_len(g.len())?;
        let dim = self.dim();
        Ok(self
            .annihilators
            .iter()
            .zip(g)
            .fold(CMatrix::zeros(dim, dim), |acc, (b, gk)| acc + b * *gk))
    }

    /// `T′ = Σ_k h_k (b_k + b_k†)`.
    pub fn quadrature_coupling(&self, h: &[f64]) -> Result<CMatrix> {
        self.check_len(h.len())?;
        let dim = self.dim();
        Ok(self
            .annihilators
            .iter()
            .zip(h)
            .fold(CMatrix::zeros(dim, dim), |acc, (b, hk)| {
                acc + (b + b.adjoint()) * c(*hk)
            }))
    }

    pub fn vacuum(&self) -> CVector {
        linalg::basis_state(self.dim(), 0)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.spec.modes() {
            Ok(())
        } else {
            Err(Error::InvalidBath(format!(
                "{len} coupling coefficients for {} modes",
                self.spec.modes()
            )))
        }
    }
}

/// A polynomial in the spin generators, stored as `(coefficient, word)` pairs.
/// The empty word stands for the identity.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SystemPolynomial(pub Vec<(Complex64, Vec<Generator>)>);

impl SystemPolynomial {
    pub fn identity() -> Self {
        SystemPolynomial(vec![(linalg::ONE, Vec::new())])
    }

    pub fn generator(g: Generator) -> Self {
        SystemPolynomial(vec![(linalg::ONE, vec![g])])
    }

    pub fn realize(&self, spin: &SpinOperatorSet) -> Result<CMatrix> {
        let dim = spin.dim();
        self.0
            .iter()
            .try_fold(CMatrix::zeros(dim, dim), |acc, (coef, word)| {
                Ok(acc + spin.realize_word(word)? * *coef)
            })
    }
}

/// The character with `χ(1) = 1` and `χ(K) = 0` on generators, extended
/// multiplicatively: only the constant term survives.
pub fn chi(polynomial: &SystemPolynomial) -> Complex64 {
    polynomial
        .0
        .iter()
        .filter(|(_, word)| word.is_empty())
        .map(|(coef, _)| *coef)
        .sum()
}

/// One `P(K) ⊗ T` summand.
#[derive(Clone, Debug)]
pub struct SymmetricTerm {
    pub polynomial: SystemPolynomial,
    pub bath_operator: CMatrix,
}

impl SymmetricTerm {
    pub fn new(polynomial: SystemPolynomial, bath_operator: CMatrix) -> Self {
        SymmetricTerm {
            polynomial,
            bath_operator,
        }
    }
}

/// `H = Σ_α P_α(K) ⊗ T_α` with the symbolic `P_α` retained.
#[derive(Clone, Debug)]
pub struct CompositeHamiltonian {
    terms: Vec<SymmetricTerm>,
    spin: SpinOperatorSet,
    bath_dim: usize,
    realized: CMatrix,
}

impl CompositeHamiltonian {
    pub fn new(spin: SpinOperatorSet, bath_dim: usize, terms: Vec<SymmetricTerm>) -> Result<Self> {
        let realized = realize_terms(&spin, bath_dim, &terms)?;
        let residual = linalg::hermitian_residual(&realized);
        if residual > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian {
                what: "composite Hamiltonian".into(),
                residual,
            });
        }
        Ok(CompositeHamiltonian {
            terms,
            spin,
            bath_dim,
            realized,
        })
    }

    pub fn terms(&self) -> &[SymmetricTerm] {
        &self.terms
    }

    pub fn spin(&self) -> &SpinOperatorSet {
        &self.spin
    }

    pub fn system_dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn dim(&self) -> usize {
        self.system_dim() * self.bath_dim
    }

    pub fn realized(&self) -> &CMatrix {
        &self.realized
    }

    /// `max_α ‖P_α(K)ψ − χ(P_α)ψ‖`: zero exactly when the factorization applies to `ψ`.
    pub fn chi_eigen_residual(&self, psi: &CVector) -> Result<f64> {
        self.terms.iter().try_fold(0.0f64, |worst, term| {
            let p = term.polynomial.realize(&self.spin)?;
            let r = (p * psi - psi * chi(&term.polynomial)).norm();
            Ok(worst.max(r))
        })
    }
}

fn realize_terms(
    spin: &SpinOperatorSet,
    bath_dim: usize,
    terms: &[SymmetricTerm],
) -> Result<CMatrix> {
    let dim = spin.dim() * bath_dim;
    terms
        .iter()
        .try_fold(CMatrix::zeros(dim, dim), |acc, term| {
            if term.bath_operator.shape() != (bath_dim, bath_dim) {
                return Err(Error::Dimension(format!(
                    "bath operator is {:?}, expected {bath_dim}×{bath_dim}",
                    term.bath_operator.shape()
                )));
            }
            let p = term.polynomial.realize(spin)?;
            Ok(acc + linalg::kron(&p, &term.bath_operator))
        })
}

/// Interaction `K_+ ⊗ T + K_− ⊗ T† + K_3 ⊗ T′` with `K_± = K_1 ± iK_2`
/// (or `J_±` directly for the enveloping strategy).
pub fn build_interaction(
    spin: &SpinOperatorSet,
    t: &CMatrix,
    t_prime: &CMatrix,
) -> Result<Vec<SymmetricTerm>> {
    let (raise, lower, z) = match spin.strategy() {
        Strategy::Recurrence => (
            SystemPolynomial(vec![
                (linalg::ONE, vec![Generator::K1]),
                (linalg::I, vec![Generator::K2]),
            ]),
            SystemPolynomial(vec![
                (linalg::ONE, vec![Generator::K1]),
                (-linalg::I, vec![Generator::K2]),
            ]),
            SystemPolynomial::generator(Generator::K3),
        ),
        Strategy::Enveloping => (
            SystemPolynomial::generator(Generator::JPlus),
            SystemPolynomial::generator(Generator::JMinus),
            SystemPolynomial::generator(Generator::J3),
        ),
    };
    let bath_dim = t.nrows();
    let ladder = vec![
        SymmetricTerm::new(raise, t.clone()),
        SymmetricTerm::new(lower, t.adjoint()),
    ];
    let residual = linalg::hermitian_residual(&realize_terms(spin, bath_dim, &ladder)?);
    if residual > HERMITIAN_TOLERANCE {
        return Err(Error::NonHermitian {
            what: "ladder term K+⊗T + K−⊗T†".into(),
            residual,
        });
    }
    let diagonal = vec![SymmetricTerm::new(z, t_prime.clone())];
    let residual = linalg::hermitian_residual(&realize_terms(spin, bath_dim, &diagonal)?);
    if residual > HERMITIAN_TOLERANCE {
        return Err(Error::NonHermitian {
            what: "K3⊗T′".into(),
            residual,
        });
    }
    Ok(ladder.into_iter().chain(diagonal).collect())
}

/// `1 ⊗ H_B + K_+ ⊗ T + K_− ⊗ T† + K_3 ⊗ T′`.
pub fn spin_boson_hamiltonian(
    spin: &SpinOperatorSet,
    bath: &Bath,
    t: &CMatrix,
    t_prime: &CMatrix,
) -> Result<CompositeHamiltonian> {
    let mut terms = vec![SymmetricTerm::new(
        SystemPolynomial::identity(),
        bath.hamiltonian().clone(),
    )];
    terms.extend(build_interaction(spin, t, t_prime)?);
    CompositeHamiltonian::new(spin.clone(), bath.dim(), terms)
}

/// `H_eff = Σ_α χ(P_α) T_α`.
pub fn effective_hamiltonian(h: &CompositeHamiltonian) -> CMatrix {
    let d = h.bath_dim;
    h.terms.iter().fold(CMatrix::zeros(d, d), |acc, term| {
        acc + &term.bath_operator * chi(&term.polynomial)
    })
}

/// `exp(−iHt)` through a hermitian eigendecomposition `H = V diag(E) V†`.
#[derive(Clone, Debug)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: CMatrix,
    vectors_adjoint: CMatrix,
}

impl Propagator {
    pub fn new(h: &CMatrix) -> Result<Self> {
        let residual = linalg::hermitian_residual(h);
        if residual > HERMITIAN_TOLERANCE {
            return Err(Error::NonHermitian {
                what: "Hamiltonian".into(),
                residual,
            });
        }
        let eig = HermitianEigen::new(h);
        Ok(Propagator {
            energies: eig.values,
            vectors_adjoint: eig.vectors.adjoint(),
            vectors: eig.vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.energies
            .iter()
            .map(|e| Complex64::from_polar(1.0, -e * t))
            .collect()
    }

    /// Components in the eigenbasis, for repeated evolution of the same states.
    pub fn to_eigenbasis(&self, columns: &CMatrix) -> CMatrix {
        &self.vectors_adjoint * columns
    }

    /// Evolve columns previously mapped with [`Propagator::to_eigenbasis`].
    pub fn evolve_from_eigenbasis(&self, coefficients: &CMatrix, t: f64) -> CMatrix {
        let phases = self.phases(t);
        let mut scaled = coefficients.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= phases[i];
        }
        &self.vectors * scaled
    }

    pub fn apply(&self, state: &CVector, t: f64) -> CVector {
        let phases = self.phases(t);
        let mut coeffs = &self.vectors_adjoint * state;
        for (z, p) in coeffs.iter_mut().zip(&phases) {
            *z *= p;
        }
        &self.vectors * coeffs
    }

    pub fn unitary(&self, t: f64) -> CMatrix {
        let phases = self.phases(t);
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        scaled * &self.vectors_adjoint
    }
}

fn check_state(state: &CVector, dim: usize, what: &str) -> Result<()> {
    if state.len() != dim {
        return Err(Error::Dimension(format!(
            "{what} has length {}, expected {dim}",
            state.len()
        )));
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > DENSITY_TOLERANCE {
        return Err(Error::Precondition(format!(
            "{what} has norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// `U(t)·state` for a normalized joint state.
pub fn evolve(h: &CompositeHamiltonian, state: &CVector, t: f64) -> Result<CVector> {
    check_state(state, h.dim(), "state")?;
    Ok(Propagator::new(h.realized())?.apply(state, t))
}

/// `start, …, stop` in `steps` equally spaced points (`[start]` when `steps == 1`).
pub fn time_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// `max_t ‖U(t)(ψ⊗ζ) − ψ⊗exp(−iH_eff t)ζ‖` after checking that `ψ` is a
/// χ-eigenvector of every term polynomial of `h`.
pub fn verify_theorem1(
    h: &CompositeHamiltonian,
    psi: &CVector,
    zeta: &CVector,
    times: &[f64],
) -> Result<f64> {
    check_state(psi, h.system_dim(), "system vector")?;
    let residual = h.chi_eigen_residual(psi)?;
    if residual > KERNEL_TOLERANCE {
        return Err(Error::Precondition(format!(
            "system vector is not annihilated by the symmetric terms (residual {residual:.3e})"
        )));
    }
    theorem1_deviation(h, psi, zeta, times)
}

/// The same deviation as [`verify_theorem1`] without the precondition, for
/// negative controls.
pub fn theorem1_deviation(
    h: &CompositeHamiltonian,
    psi: &CVector,
    zeta: &CVector,
    times: &[f64],
) -> Result<f64> {
    Ok(theorem1_deviations(h, psi, zeta, times)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// Per-time deviations, in grid order.
pub fn theorem1_deviations(
    h: &CompositeHamiltonian,
    psi: &CVector,
    zeta: &CVector,
    times: &[f64],
) -> Result<Vec<f64>> {
    check_state(psi, h.system_dim(), "system vector")?;
    check_state(zeta, h.bath_dim(), "bath vector")?;
    let full = Propagator::new(h.realized())?;
    let bath = Propagator::new(&effective_hamiltonian(h))?;
    let joint = linalg::kron_vec(psi, zeta);
    Ok(times
        .iter()
        .map(|&t| {
            let lhs = full.apply(&joint, t);
            let rhs = linalg::kron_vec(psi, &bath.apply(zeta, t));
            (lhs - rhs).norm()
        })
        .collect())
}

/// Validate a density matrix of the given dimension.
pub fn check_density(rho: &CMatrix, dim: usize, what: &str) -> Result<()> {
    if rho.shape() != (dim, dim) {
        return Err(Error::InvalidDensity(format!(
            "{what} is {:?}, expected {dim}×{dim}",
            rho.shape()
        )));
    }
    let herm = linalg::hermitian_residual(rho);
    if herm > DENSITY_TOLERANCE {
        return Err(Error::InvalidDensity(format!(
            "{what} is not hermitian ({herm:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr - linalg::ONE).norm() > DENSITY_TOLERANCE {
        return Err(Error::InvalidDensity(format!("{what} has trace {tr}")));
    }
    let min = HermitianEigen::new(rho)
        .values
        .first()
        .copied()
        .unwrap_or(0.0);
    if min < -DENSITY_TOLERANCE {
        return Err(Error::InvalidDensity(format!(
            "{what} has negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// `L_t: ρ_S ↦ tr_B[U(t)(ρ_S ⊗ ρ_B)U(t)†]` for a fixed initial pair, evaluated
/// at any number of times.
///
/// The product state is purified into at most `d_S·d_B` weighted pure
/// components, so each time step costs a few matrix-vector products.
#[derive(Clone, Debug)]
pub struct InducedChannel {
    propagator: Propagator,
    system_dim: usize,
    bath_dim: usize,
    components: CMatrix,
    initial: CMatrix,
}

impl InducedChannel {
    pub fn new(h: &CompositeHamiltonian, rho_s: &CMatrix, rho_b: &CMatrix) -> Result<Self> {
        let (ds, db) = (h.system_dim(), h.bath_dim());
        check_density(rho_s, ds, "system state")?;
        check_density(rho_b, db, "bath state")?;
        let es = HermitianEigen::new(rho_s);
        let eb = HermitianEigen::new(rho_b);
        let mut columns = Vec::new();
        for (i, ps) in es.values.iter().enumerate() {
            for (j, pb) in eb.values.iter().enumerate() {
                let w = ps * pb;
                if w > 1e-16 {
                    let v = linalg::kron_vec(
                        &es.vectors.column(i).into_owned(),
                        &eb.vectors.column(j).into_owned(),
                    );
                    columns.push(v * c(w.sqrt()));
                }
            }
        }
        let propagator = Propagator::new(h.realized())?;
        let joint = linalg::columns(&columns, ds * db);
        Ok(InducedChannel {
            components: propagator.to_eigenbasis(&joint),
            propagator,
            system_dim: ds,
            bath_dim: db,
            initial: rho_s.clone(),
        })
    }

    pub fn at(&self, t: f64) -> CMatrix {
        if t == 0.0 {
            return self.initial.clone();
        }
        let evolved = self.propagator.evolve_from_eigenbasis(&self.components, t);
        let (ds, db) = (self.system_dim, self.bath_dim);
        let k = evolved.ncols();
        // Z[s, (b, col)] = Y[(s, b), col]; tr_B of Σ_col |y⟩⟨y| is Z Z†.
        let z = CMatrix::from_fn(ds, db * k, |s, idx| evolved[(s * db + idx / k, idx % k)]);
        &z * z.adjoint()
    }
}

pub fn induced_channel(
    h: &CompositeHamiltonian,
    rho_s: &CMatrix,
    rho_b: &CMatrix,
    t: f64,
) -> Result<CMatrix> {
    Ok(InducedChannel::new(h, rho_s, rho_b)?.at(t))
}

/// `⟨ψ|ρ|ψ⟩` for a pure reference state.
pub fn fidelity(psi: &CVector, rho: &CMatrix) -> f64 {
    psi.dotc(&(rho * psi)).re
}

pub fn purity(rho: &CMatrix) -> f64 {
    (rho * rho).trace().re
}

/// `H = H_S ⊗ 1 + 1 ⊗ H_B + H_I` with `H_B` and `H_I` traceless in the sense
/// that `tr_S H_I = tr_B H_I = 0` and `tr H_B = 0`; the global trace sits in `H_S`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub system: CMatrix,
    pub bath: CMatrix,
    pub interaction: CMatrix,
}

impl Decomposition {
    pub fn reassemble(&self) -> CMatrix {
        let (ds, db) = (self.system.nrows(), self.bath.nrows());
        linalg::kron(&self.system, &linalg::identity(db))
            + linalg::kron(&linalg::identity(ds), &self.bath)
            + &self.interaction
    }
}

pub fn decompose(h: &CompositeHamiltonian) -> Decomposition {
    decompose_matrix(h.realized(), h.system_dim(), h.bath_dim())
}

pub fn decompose_matrix(h: &CMatrix, ds: usize, db: usize) -> Decomposition {
    let total = h.trace();
    let system = linalg::partial_trace_bath(h, ds, db) / c(db as f64);
    let bath = linalg::partial_trace_system(h, ds, db) / c(ds as f64)
        - linalg::identity(db) * (total / c((ds * db) as f64));
    let interaction = h
        - linalg::kron(&system, &linalg::identity(db))
        - linalg::kron(&linalg::identity(ds), &bath);
    Decomposition {
        system,
        bath,
        interaction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corep::deformed_singlet;
    use crate::linalg::{basis_state, max_abs};
    use crate::qalg::Mu;
    use crate::qspin::{build_enveloping, joint_kernel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(mu: f64, n: usize) -> (SpinOperatorSet, Bath, CompositeHamiltonian) {
        let spin = build_enveloping(Mu::new(mu).unwrap(), n).unwrap();
        let bath = build_bath(&BathSpec::new(vec![1.0, 1.7], 3).unwrap()).unwrap();
        let t = bath
            .linear_coupling(&[c(0.3), Complex64::new(0.1, 0.2)])
            .unwrap();
        let tp = bath.quadrature_coupling(&[0.2, -0.15]).unwrap();
        let h = spin_boson_hamiltonian(&spin, &bath, &t, &tp).unwrap();
        (spin, bath, h)
    }

    #[test]
    fn bath_spectra() {
        let one = build_bath(&BathSpec::new(vec![1.0], 3).unwrap()).unwrap();
        assert!(max_abs(&(one.hamiltonian() - linalg::diag(&[c(0.0), c(1.0), c(2.0)]))) < 1e-15);
        let two = build_bath(&BathSpec::new(vec![1.0, 2.0], 2).unwrap()).unwrap();
        let mut spectrum = HermitianEigen::new(two.hamiltonian()).values;
        spectrum.iter_mut().for_each(|v| *v = v.round());
        assert_eq!(spectrum, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn truncated_commutator_is_identity_below_top() {
        let bath = build_bath(&BathSpec::new(vec![1.0], 5).unwrap()).unwrap();
        let b = bath.annihilator(0);
        let comm = b * b.adjoint() - b.adjoint() * b;
        let block = comm.view((0, 0), (4, 4)).into_owned();
        assert!(max_abs(&(block - linalg::identity(4))) < 1e-14);
    }

    #[test]
    fn bath_spec_rejects_bad_input() {
        assert!(matches!(
            BathSpec::new(vec![1.0], 1),
            Err(Error::InvalidBath(_))
        ));
        assert!(BathSpec::new(vec![-1.0], 3).is_err());
        assert!(BathSpec::new(vec![], 3).is_err());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&SystemPolynomial::identity()), linalg::ONE);
        assert_eq!(
            chi(&SystemPolynomial::generator(Generator::K3)),
            linalg::ZERO
        );
        let p = SystemPolynomial(vec![
            (c(2.0), vec![]),
            (c(3.0), vec![Generator::K1, Generator::K2]),
        ]);
        assert_eq!(chi(&p), c(2.0));
    }

    #[test]
    fn interaction_is_hermitian_and_traceless() {
        let (spin, bath, _) = setup(0.7, 2);
        let t = bath.linear_coupling(&[c(0.3), c(0.2)]).unwrap();
        let tp = bath.quadrature_coupling(&[0.1, 0.1]).unwrap();
        let terms = build_interaction(&spin, &t, &tp).unwrap();
        let h = CompositeHamiltonian::new(spin.clone(), bath.dim(), terms).unwrap();
        assert!(max_abs(&effective_hamiltonian(&h)) == 0.0);
        let zero = CMatrix::zeros(bath.dim(), bath.dim());
        let terms = build_interaction(&spin, &zero, &zero).unwrap();
        let h0 = CompositeHamiltonian::new(spin, bath.dim(), terms).unwrap();
        assert_eq!(max_abs(h0.realized()), 0.0);
    }

    #[test]
    fn non_hermitian_diagonal_coupling_is_named() {
        let (spin, bath, _) = setup(0.7, 2);
        let t = bath.linear_coupling(&[c(0.3), c(0.2)]).unwrap();
        let err = build_interaction(&spin, &t, &t).unwrap_err();
        match err {
            Error::NonHermitian { what, .. } => assert!(what.contains("K3")),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn effective_hamiltonian_is_bath_hamiltonian() {
        let (_, bath, h) = setup(0.5, 2);
        assert!(max_abs(&(effective_hamiltonian(&h) - bath.hamiltonian())) < 1e-15);
    }

    #[test]
    fn evolve_trivial_cases() {
        let (_, _, h) = setup(0.5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = linalg::random_state(&mut rng, h.dim());
        assert!((evolve(&h, &psi, 0.0).unwrap() - &psi).norm() < 1e-13);
        for t in [0.5, 3.0, 10.0] {
            assert!((evolve(&h, &psi, t).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let energy = |v: &CVector| v.dotc(&(h.realized() * v)).re;
        let e0 = energy(&psi);
        for t in [1.0, 7.5] {
            assert!((energy(&evolve(&h, &psi, t).unwrap()) - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn diagonal_hamiltonian_gives_phases() {
        let e = [0.3, -1.1, 2.0];
        let prop = Propagator::new(&linalg::diag(&e.map(c))).unwrap();
        let u = prop.unitary(1.7);
        for (i, ei) in e.iter().enumerate() {
            assert!((u[(i, i)] - Complex64::from_polar(1.0, -ei * 1.7)).norm() < 1e-14);
        }
    }

    #[test]
    fn theorem1_for_singlet_and_control() {
        let (_, bath, h) = setup(0.7, 2);
        let times = time_grid(0.0, 10.0, 21);
        let singlet = deformed_singlet(Mu::new(0.7).unwrap());
        let zeta = bath.vacuum();
        assert!(verify_theorem1(&h, &singlet, &zeta, &times).unwrap() < 1e-9);
        let plus = basis_state(4, 0);
        assert!(matches!(
            verify_theorem1(&h, &plus, &zeta, &times),
            Err(Error::Precondition(_))
        ));
        assert!(theorem1_deviation(&h, &plus, &zeta, &times).unwrap() > 1e-3);
    }

    #[test]
    fn theorem1_without_interaction_holds_for_any_state() {
        let spin = build_enveloping(Mu::new(0.7).unwrap(), 2).unwrap();
        let bath = build_bath(&BathSpec::new(vec![1.3], 3).unwrap()).unwrap();
        let terms = vec![SymmetricTerm::new(
            SystemPolynomial::identity(),
            bath.hamiltonian().clone(),
        )];
        let h = CompositeHamiltonian::new(spin, bath.dim(), terms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = linalg::random_state(&mut rng, 4);
        let zeta = linalg::random_state(&mut rng, 3);
        let dev = verify_theorem1(&h, &psi, &zeta, &time_grid(0.0, 10.0, 11)).unwrap();
        assert!(dev <= 1e-12);
    }

    #[test]
    fn induced_channel_matches_brute_force() {
        let (_, _, h) = setup(0.5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho_s = linalg::random_density(&mut rng, 4);
        let rho_b = linalg::random_density(&mut rng, 9);
        let t = 2.3;
        let u = Propagator::new(h.realized()).unwrap().unitary(t);
        let joint = &u * linalg::kron(&rho_s, &rho_b) * u.adjoint();
        let brute = linalg::partial_trace_bath(&joint, 4, 9);
        let fast = induced_channel(&h, &rho_s, &rho_b, t).unwrap();
        assert!(max_abs(&(brute - &fast)) < 1e-12);
        assert!((fast.trace() - linalg::ONE).norm() < 1e-12);
        assert!(max_abs(&(induced_channel(&h, &rho_s, &rho_b, 0.0).unwrap() - &rho_s)) < 1e-12);
    }

    #[test]
    fn kernel_states_are_untouched_by_the_channel() {
        let (spin, _, h) = setup(0.6, 4);
        let kernel = joint_kernel(&spin);
        assert_eq!(kernel.len(), 2);
        // coherent superposition plus a mixture across both kernel vectors
        let support = linalg::columns(&kernel.vectors, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho_s = linalg::random_density_on(&mut rng, &support, 2);
        let rho_b = linalg::random_density(&mut rng, 9);
        let channel = InducedChannel::new(&h, &rho_s, &rho_b).unwrap();
        for t in [0.5, 4.0, 9.0] {
            assert!(linalg::trace_norm(&(channel.at(t) - &rho_s)) < 1e-9);
        }
    }

    #[test]
    fn invalid_densities_are_rejected() {
        let (_, _, h) = setup(0.6, 2);
        let rho_b = linalg::identity(9) / c(9.0);
        let bad = linalg::diag(&[c(1.5), c(-0.5), c(0.0), c(0.0)]);
        assert!(matches!(
            induced_channel(&h, &bad, &rho_b, 1.0),
            Err(Error::InvalidDensity(_))
        ));
        assert!(induced_channel(&h, &linalg::identity(4), &rho_b, 1.0).is_err());
    }

    #[test]
    fn decomposition_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = linalg::random_density(&mut rng, 3);
        let d = decompose_matrix(&linalg::kron(&a, &linalg::identity(2)), 3, 2);
        assert!(max_abs(&d.interaction) < 1e-14);

        let (spin, bath, _) = setup(0.6, 2);
        let t = bath.linear_coupling(&[c(0.3), c(-0.2)]).unwrap();
        let zero = CMatrix::zeros(9, 9);
        let terms = build_interaction(&spin, &t, &zero).unwrap();
        let h = CompositeHamiltonian::new(spin, 9, terms).unwrap();
        let d = decompose(&h);
        assert!(max_abs(&(&d.interaction - h.realized())) < 1e-14);

        let (_, _, h) = setup(0.6, 2);
        let d = decompose(&h);
        assert!(max_abs(&(d.reassemble() - h.realized())) <= 1e-12);
        assert!(max_abs(&linalg::partial_trace_bath(&d.interaction, 4, 9)) < 1e-10);
        assert!(max_abs(&linalg::partial_trace_system(&d.interaction, 4, 9)) < 1e-10);
    }

    #[test]
    fn time_grid_shapes() {
        assert_eq!(time_grid(0.0, 10.0, 1), vec![0.0]);
        let g = time_grid(0.0, 10.0, 50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[49], 10.0);
    }
}
