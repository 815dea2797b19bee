//! Batch commands behind the `qdsym` binary. Each command writes its CSV to
//! `csv` and human-readable status lines to `status`, and returns the process
//! exit code: 0 success, 1 property or verdict failure, 2 configuration error.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{certify_code, kraus_from_unitary, Verdict};
use crate::check::{run_check, CheckOptions};
use crate::config::{BathInitial, CodeChoice, RunConfig};
use crate::corep::{invariant_subspace, register, InvariantBasis, MAX_REGISTER_QUBITS};
use crate::dynamics::{
    build_bath, fidelity, purity, spin_boson_hamiltonian, theorem1_deviations, time_grid, Bath,
    CompositeHamiltonian, InducedChannel, Propagator,
};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CVector};
use crate::qalg::{Algebra, Mu};
use crate::qspin::{
    build_enveloping, build_recurrence, compare_with_corep, joint_kernel, BaseCase,
    SpinOperatorSet, Strategy, MAX_KERNEL_QUBITS,
};
use crate::report::num;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Exit code for an error escaping a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidMu(_)
        | Error::InvalidBath(_)
        | Error::RegisterBudget { .. } => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn write_header<W: Write + ?Sized>(csv: &mut W, command: &str, cfg: &RunConfig) -> Result<()> {
    writeln!(csv, "# qdsym {command}")?;
    for line in cfg.echo() {
        writeln!(csv, "# {line}")?;
    }
    Ok(())
}

/// Spin operators for the configured strategy.
pub fn spin_set(cfg: &RunConfig, mu: Mu) -> Result<SpinOperatorSet> {
    match cfg.strategy {
        Strategy::Enveloping => build_enveloping(mu, cfg.qubits),
        Strategy::Recurrence => {
            let base = cfg
                .base_case
                .clone()
                .unwrap_or_else(|| BaseCase::singlet_diagonal(mu));
            build_recurrence(mu, cfg.qubits, &base)
        }
    }
}

/// Everything needed to evolve one μ point of a run.
pub struct RunSetup {
    pub spin: SpinOperatorSet,
    pub bath: Bath,
    pub hamiltonian: CompositeHamiltonian,
    pub zeta: CVector,
}

pub fn run_setup(cfg: &RunConfig, mu: Mu) -> Result<RunSetup> {
    let spin = spin_set(cfg, mu)?;
    let bath = build_bath(&cfg.bath)?;
    let g: Vec<Complex64> = cfg.couplings_g.iter().map(|x| c(*x)).collect();
    let t = bath.linear_coupling(&g)?;
    let tp = bath.quadrature_coupling(&cfg.couplings_h)?;
    let hamiltonian = spin_boson_hamiltonian(&spin, &bath, &t, &tp)?;
    let zeta = match cfg.bath_initial {
        BathInitial::Vacuum => bath.vacuum(),
        BathInitial::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            linalg::random_state(&mut rng, bath.dim())
        }
    };
    Ok(RunSetup {
        spin,
        bath,
        hamiltonian,
        zeta,
    })
}

fn check_kernel_budget(cfg: &RunConfig) -> Result<()> {
    if cfg.qubits > MAX_KERNEL_QUBITS {
        return Err(Error::RegisterBudget {
            requested: cfg.qubits,
            max: MAX_KERNEL_QUBITS,
        });
    }
    Ok(())
}

/// `invariants`: invariant basis per μ plus dimension and method agreement.
pub fn cmd_invariants(cfg: &RunConfig, csv: &mut dyn Write, status: &mut dyn Write) -> Result<i32> {
    check_kernel_budget(cfg)?;
    write_header(csv, "invariants", cfg)?;
    writeln!(csv, "mu,method,vector,index,component_re,component_im")?;
    for mu in cfg.mus() {
        let spin = spin_set(cfg, mu)?;
        let (method, basis, oracle): (&str, InvariantBasis, Option<InvariantBasis>) =
            if cfg.qubits <= MAX_REGISTER_QUBITS {
                let b = invariant_subspace(&register(Algebra::new(mu), cfg.qubits)?);
                ("corep", b.clone(), Some(b))
            } else {
                (cfg.strategy.name(), joint_kernel(&spin), None)
            };
        for (k, v) in basis.vectors.iter().enumerate() {
            for (i, z) in v.iter().enumerate() {
                writeln!(
                    csv,
                    "{},{method},{k},{i},{},{}",
                    num(mu.value()),
                    num(z.re),
                    num(z.im)
                )?;
            }
        }
        match oracle {
            Some(oracle) => {
                let cmp = compare_with_corep(&spin, &oracle)?;
                writeln!(
                    status,
                    "mu={mu} qubits={} dimension={} {cmp}",
                    cfg.qubits,
                    oracle.len()
                )?;
            }
            None => writeln!(
                status,
                "mu={mu} qubits={} dimension={} ({} kernel; corep oracle limited to {MAX_REGISTER_QUBITS} qubits)",
                cfg.qubits,
                basis.len(),
                cfg.strategy.name()
            )?,
        }
    }
    Ok(EXIT_OK)
}

/// `evolve`: fidelity, trace distance, factorization deviation, purity and
/// code certificate over the time grid, for the first invariant vector and
/// the product control `|+…+⟩`.
pub fn cmd_evolve(cfg: &RunConfig, csv: &mut dyn Write, status: &mut dyn Write) -> Result<i32> {
    check_kernel_budget(cfg)?;
    write_header(csv, "evolve", cfg)?;
    writeln!(
        csv,
        "mu,state,t,fidelity,trace_distance,deviation_theorem1,purity,rank_gap,verdict"
    )?;
    let times = time_grid(cfg.times.start, cfg.times.stop, cfg.times.steps);
    for mu in cfg.mus() {
        let setup = run_setup(cfg, mu)?;
        let h = &setup.hamiltonian;
        let kernel = joint_kernel(&setup.spin);
        let mut states: Vec<(&str, CVector)> = Vec::new();
        match kernel.vectors.first() {
            Some(v) => states.push(("invariant", v.clone())),
            None => writeln!(
                status,
                "mu={mu}: no invariant vector for {} qubits",
                cfg.qubits
            )?,
        }
        states.push(("product", linalg::basis_state(setup.spin.dim(), 0)));

        let prop = Propagator::new(h.realized())?;
        let rho_b = &setup.zeta * setup.zeta.adjoint();
        for (label, psi) in &states {
            let rho_s = psi * psi.adjoint();
            let channel = InducedChannel::new(h, &rho_s, &rho_b)?;
            let deviations = theorem1_deviations(h, psi, &setup.zeta, &times)?;
            let mut worst_fidelity: f64 = 1.0;
            for (&t, dev) in times.iter().zip(&deviations) {
                let rho_t = channel.at(t);
                // The evolution is the identity map at t = 0; report that
                // exactly rather than ⟨ψ|ψ⟩² with rounding.
                let (f, distance) = if t == 0.0 {
                    (1.0, 0.0)
                } else {
                    (
                        fidelity(psi, &rho_t),
                        linalg::trace_distance(&rho_t, &rho_s),
                    )
                };
                worst_fidelity = worst_fidelity.min(f);
                let kraus = kraus_from_unitary(&prop.unitary(t), setup.spin.dim(), &setup.zeta)?;
                let cert = certify_code(&kraus, std::slice::from_ref(psi))?;
                writeln!(
                    csv,
                    "{},{label},{},{},{},{},{},{},{}",
                    num(mu.value()),
                    num(t),
                    num(f),
                    num(distance),
                    num(*dev),
                    num(purity(&rho_t)),
                    num(cert.rank_gap),
                    cert.verdict
                )?;
            }
            writeln!(
                status,
                "mu={mu} state={label} min_fidelity={worst_fidelity:.12}"
            )?;
        }
    }
    Ok(EXIT_OK)
}

/// `kraus`: certificate of the configured code at `cfg.time`; succeeds only
/// when every μ yields an error-avoiding verdict.
pub fn cmd_kraus(cfg: &RunConfig, csv: &mut dyn Write, status: &mut dyn Write) -> Result<i32> {
    check_kernel_budget(cfg)?;
    write_header(csv, "kraus", cfg)?;
    let db = cfg.bath.dim();
    let gamma_cols: Vec<String> = (0..db).map(|a| format!("gamma_{a}")).collect();
    writeln!(
        csv,
        "mu,t,rank_gap,off_block_residual,verdict,{}",
        gamma_cols.join(",")
    )?;
    let mut all_ok = true;
    for mu in cfg.mus() {
        let setup = run_setup(cfg, mu)?;
        let code: Vec<CVector> = match cfg.code {
            CodeChoice::Invariant => joint_kernel(&setup.spin).vectors,
            CodeChoice::Product => vec![linalg::basis_state(setup.spin.dim(), 0)],
        };
        if code.is_empty() {
            writeln!(
                status,
                "mu={mu}: invariant code is empty for {} qubits",
                cfg.qubits
            )?;
            all_ok = false;
            continue;
        }
        let u = Propagator::new(setup.hamiltonian.realized())?.unitary(cfg.time);
        let kraus = kraus_from_unitary(&u, setup.spin.dim(), &setup.zeta)?;
        let cert = certify_code(&kraus, &code)?;
        let gammas: Vec<String> = match &cert.eigenvalues {
            Some(g) => g.iter().map(|z| num(z.norm())).collect(),
            None => vec!["nan".to_string(); db],
        };
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            num(mu.value()),
            num(cfg.time),
            num(cert.rank_gap),
            num(cert.off_block_residual),
            cert.verdict,
            gammas.join(",")
        )?;
        writeln!(
            status,
            "mu={mu} t={} code_dim={} completeness={:.3e} rank_gap={:.3e} verdict={}",
            cfg.time,
            code.len(),
            kraus.completeness_residual(),
            cert.rank_gap,
            cert.verdict
        )?;
        all_ok &= cert.verdict == Verdict::ErrorAvoiding;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILURE })
}

/// `check`: the full property suite over the configured μ grid.
pub fn cmd_check(opts: &CheckOptions, out: &mut dyn Write) -> Result<i32> {
    let summary = run_check(opts)?;
    write!(out, "{summary}")?;
    if summary.passed() {
        writeln!(out, "# all properties passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(
            out,
            "# failing modules: {}",
            summary.failed_modules().join(", ")
        )?;
        Ok(EXIT_FAILURE)
    }
}
