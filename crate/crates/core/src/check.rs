//! Self-test suite behind `qdsym check`: every module's invariants over a grid
//! of deformation parameters, summarized one property per line.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{certify_code, kraus_from_unitary};
use crate::corep::{
    self, check_axiom, deformed_singlet, fundamental, invariant_subspace, register,
};
use crate::dynamics::{
    build_bath, spin_boson_hamiltonian, time_grid, verify_theorem1, BathSpec, InducedChannel,
    Propagator,
};
use crate::error::{Error, Result};
use crate::linalg::{self, c};
use crate::qalg::{relation_residuals, Algebra, AlgebraElement, Monomial, Mu, RewriteRules};
use crate::qspin::{
    self, build_enveloping, build_recurrence, compare_with_corep, joint_kernel, BaseCase,
};

/// The μ grid used when none is given.
pub const DEFAULT_MU_GRID: [f64; 5] = [-0.7, -0.3, 0.3, 0.7, 1.0];

/// A deliberately broken rewrite rule, for exercising the suite itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fault {
    /// Perturb the `αγ = μγα` commutation constant by the given amount.
    Commutation(f64),
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub mu_grid: Vec<f64>,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mu_grid: DEFAULT_MU_GRID.to_vec(),
            seed: 1,
            fault: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub module: &'static str,
    pub property: &'static str,
    pub passed: bool,
    /// Worst observed value (residual, deviation or mismatch count).
    pub value: f64,
}

#[derive(Clone, Debug, Default)]
pub struct CheckSummary {
    pub results: Vec<PropertyResult>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failed_modules(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = self
            .results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.module)
            .collect();
        out.dedup();
        out
    }
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "module,property,status,value")?;
        for r in &self.results {
            writeln!(
                f,
                "{},{},{},{}",
                r.module,
                r.property,
                if r.passed { "pass" } else { "FAIL" },
                crate::report::num(r.value)
            )?;
        }
        Ok(())
    }
}

struct Recorder {
    results: Vec<PropertyResult>,
}

impl Recorder {
    /// Record the worst value over the grid; passes when it stays within `tol`.
    fn within(&mut self, module: &'static str, property: &'static str, value: f64, tol: f64) {
        self.results.push(PropertyResult {
            module,
            property,
            passed: value <= tol && !value.is_nan(),
            value,
        });
    }
}

/// Spin-0 multiplicity in `n` spin-½ factors by repeated classical coupling
/// `j ⊗ ½ = (j − ½) ⊕ (j + ½)`.
pub fn classical_singlet_count(n: usize) -> usize {
    // counts[k] = multiplicity of total spin k/2
    let mut counts = vec![1usize];
    for _ in 0..n {
        let mut next = vec![0usize; counts.len() + 1];
        for (k, &m) in counts.iter().enumerate() {
            next[k + 1] += m;
            if k > 0 {
                next[k - 1] += m;
            }
        }
        counts = next;
    }
    counts[0]
}

fn algebra_for(mu: Mu, fault: Option<Fault>) -> Algebra {
    match fault {
        None => Algebra::new(mu),
        Some(Fault::Commutation(delta)) => {
            let mut rules = RewriteRules::standard(mu);
            rules.commutation += delta;
            Algebra::with_rules(mu, rules)
        }
    }
}

/// A random element with up to four monomials of degree ≤ `max_degree`.
pub fn random_element<R: Rng>(alg: &Algebra, rng: &mut R, max_degree: u32) -> AlgebraElement {
    let terms = (0..rng.gen_range(1..=4)).map(|_| {
        let deg = rng.gen_range(0..=max_degree);
        let a = rng.gen_range(0..=deg);
        let g = rng.gen_range(0..=deg - a);
        let gs = deg - a - g;
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let coef = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        (Monomial::new(sign * a as i32, g, gs), coef)
    });
    alg.from_terms(terms)
}

pub fn run_check(opts: &CheckOptions) -> Result<CheckSummary> {
    if opts.mu_grid.is_empty() {
        return Err(Error::Config("mu grid is empty".into()));
    }
    let mus: Vec<Mu> = opts
        .mu_grid
        .iter()
        .map(|m| Mu::new(*m).map_err(|e| Error::Config(e.to_string())))
        .collect::<Result<_>>()?;
    let mut rec = Recorder {
        results: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    check_qalg(&mut rec, &mus, opts.fault, &mut rng);
    check_corep(&mut rec, &mus, opts.fault)?;
    check_qspin(&mut rec, &mus)?;
    check_dynamics(&mut rec, &mus, &mut rng)?;
    Ok(CheckSummary {
        results: rec.results,
    })
}

fn check_qalg(rec: &mut Recorder, mus: &[Mu], fault: Option<Fault>, rng: &mut ChaCha8Rng) {
    let mut relations: f64 = 0.0;
    let mut assoc: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut hom: f64 = 0.0;
    let mut coassoc: f64 = 0.0;
    let mut counit: f64 = 0.0;
    for &mu in mus {
        let alg = algebra_for(mu, fault);
        for (_, r) in relation_residuals(&alg) {
            relations = relations.max(r);
        }
        for _ in 0..20 {
            let a = random_element(&alg, rng, 3);
            let b = random_element(&alg, rng, 3);
            let c3 = random_element(&alg, rng, 3);
            let left = &(&a * &b) * &c3;
            let right = &a * &(&b * &c3);
            assoc = assoc.max(relative_diff(&left, &right));
            let ab_star = (&a * &b).adjoint();
            star = star.max(relative_diff(&ab_star, &(&b.adjoint() * &a.adjoint())));
        }
        let gens = alg.generators();
        for x in &gens {
            for y in &gens {
                let lhs = (x * y).coproduct();
                hom = hom.max(lhs.max_abs_diff(&x.coproduct().multiply(&y.coproduct())));
            }
            let d = x.coproduct();
            coassoc = coassoc.max(
                d.coproduct_first_leg()
                    .max_abs_diff(&d.coproduct_second_leg()),
            );
            counit = counit
                .max(d.counit_first_leg().max_abs_diff(x))
                .max(d.counit_second_leg().max_abs_diff(x));
        }
    }
    rec.within("qalg", "defining_relations", relations, 1e-12);
    rec.within("qalg", "associativity", assoc, 1e-12);
    rec.within("qalg", "star_compatibility", star, 1e-12);
    rec.within("qalg", "coproduct_homomorphism", hom, 1e-12);
    rec.within("qalg", "coassociativity", coassoc, 1e-12);
    rec.within("qalg", "counit", counit, 1e-12);
}

/// Coefficient-wise difference relative to the larger coefficient scale.
/// Products pick up powers of `1/μ`, so absolute differences grow with them.
fn relative_diff(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    let scale = x
        .max_abs_coefficient()
        .max(y.max_abs_coefficient())
        .max(1.0);
    x.max_abs_diff(y) / scale
}

fn check_corep(rec: &mut Recorder, mus: &[Mu], fault: Option<Fault>) -> Result<()> {
    let mut axiom: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut singlet: f64 = 0.0;
    let mut mismatches = 0usize;
    for &mu in mus {
        let alg = algebra_for(mu, fault);
        let u = fundamental(alg);
        let uu = corep::tensor_product(&u, &u)?;
        axiom = axiom
            .max(check_axiom(&u).max_residual)
            .max(check_axiom(&uu).max_residual);
        unitarity = unitarity
            .max(corep::unitarity_residual(&u))
            .max(corep::unitarity_residual(&uu));
        let basis = invariant_subspace(&uu);
        singlet = singlet.max(match basis.vectors.as_slice() {
            [v] => 1.0 - v.dotc(&deformed_singlet(mu)).norm(),
            _ => 1.0,
        });
        for n in 2..=4 {
            if invariant_subspace(&register(alg, n)?).len() != classical_singlet_count(n) {
                mismatches += 1;
            }
        }
    }
    rec.within("corep", "axiom", axiom, 1e-12);
    rec.within("corep", "unitarity", unitarity, 1e-12);
    rec.within("corep", "deformed_singlet", singlet, 1e-10);
    rec.within("corep", "multiplicity", mismatches as f64, 0.0);
    Ok(())
}

fn check_qspin(rec: &mut Recorder, mus: &[Mu]) -> Result<()> {
    let mut mismatches = 0usize;
    let mut angle: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut ladder: f64 = 0.0;
    let mut surfaced = 0usize;
    for &mu in mus {
        for n in [2, 4, 6] {
            let s = build_enveloping(mu, n)?;
            if joint_kernel(&s).len() != classical_singlet_count(n) {
                mismatches += 1;
            }
            let (jp, jm, j3) = s.ladder();
            herm = herm.max(linalg::hermitian_residual(&j3));
            ladder = ladder.max(linalg::max_abs(&(jp.adjoint() - jm)));
        }
        let oracle = invariant_subspace(&register(Algebra::new(mu), 2)?);
        let cmp = compare_with_corep(&build_enveloping(mu, 2)?, &oracle)?;
        angle = angle.max(cmp.largest_angle.unwrap_or(f64::INFINITY));
        let rec_set = build_recurrence(mu, 2, &BaseCase::singlet_diagonal(mu))?;
        let rec_cmp = compare_with_corep(&rec_set, &oracle)?;
        if rec_cmp.kernel_dim == 2 && rec_cmp.oracle_dim == 1 && !rec_cmp.agree {
            surfaced += 1;
        }
    }
    rec.within("qspin", "enveloping_multiplicity", mismatches as f64, 0.0);
    rec.within(
        "qspin",
        "enveloping_matches_corep",
        angle,
        qspin::AGREEMENT_TOLERANCE,
    );
    rec.within("qspin", "hermiticity", herm, 1e-14);
    rec.within("qspin", "ladder_adjoint", ladder, 0.0);
    // The verbatim recurrence keeps a two-dimensional kernel; the suite
    // confirms that this is reported on every grid point.
    rec.within(
        "qspin",
        "recurrence_discrepancy_reported",
        (mus.len() - surfaced) as f64,
        0.0,
    );
    Ok(())
}

fn check_dynamics(rec: &mut Recorder, mus: &[Mu], rng: &mut ChaCha8Rng) -> Result<()> {
    let bath = build_bath(&BathSpec::new(vec![1.0, 1.5], 3)?)?;
    let times = time_grid(0.0, 10.0, 20);
    let mut theorem1: f64 = 0.0;
    let mut theorem2: f64 = 0.0;
    let mut completeness: f64 = 0.0;
    let mut rank_gap: f64 = 0.0;
    for &mu in mus {
        let spin = build_enveloping(mu, 2)?;
        let g: Vec<Complex64> = (0..2).map(|_| c(rng.gen_range(0.05..0.5))).collect();
        let hq: Vec<f64> = (0..2).map(|_| rng.gen_range(0.05..0.5)).collect();
        let t = bath.linear_coupling(&g)?;
        let tp = bath.quadrature_coupling(&hq)?;
        let h = spin_boson_hamiltonian(&spin, &bath, &t, &tp)?;
        let kernel = joint_kernel(&spin);
        let zeta = linalg::random_state(rng, bath.dim());
        for psi in &kernel.vectors {
            theorem1 = theorem1.max(verify_theorem1(&h, psi, &zeta, &times)?);
        }
        let support = linalg::columns(&kernel.vectors, spin.dim());
        let rho_s = linalg::random_density_on(rng, &support, kernel.len());
        let rho_b = linalg::random_density(rng, bath.dim());
        let channel = InducedChannel::new(&h, &rho_s, &rho_b)?;
        for &tt in &times {
            theorem2 = theorem2.max(linalg::trace_norm(&(channel.at(tt) - &rho_s)));
        }
        let prop = Propagator::new(h.realized())?;
        for tt in [0.5, 1.0, 5.0] {
            let k = kraus_from_unitary(&prop.unitary(tt), spin.dim(), &zeta)?;
            completeness = completeness.max(k.completeness_residual());
            let cert = certify_code(&k, &kernel.vectors)?;
            rank_gap = rank_gap.max(if cert.verdict.is_error_avoiding() {
                cert.rank_gap
            } else {
                f64::INFINITY
            });
        }
    }
    rec.within("dynamics", "theorem1_factorization", theorem1, 1e-9);
    rec.within("dynamics", "theorem2_trivial_channel", theorem2, 1e-9);
    rec.within("channel", "kraus_completeness", completeness, 1e-10);
    rec.within("channel", "invariant_code_certified", rank_gap, 1e-8);
    Ok(())
}
