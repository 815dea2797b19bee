//! Spin–boson evolution of an invariant register state and of a product
//! control, printing fidelity, factorization deviation and purity.

use qdsym::dynamics::{
    build_bath, fidelity, purity, spin_boson_hamiltonian, theorem1_deviations, time_grid, BathSpec,
    InducedChannel,
};
use qdsym::linalg::{self, c};
use qdsym::qalg::Mu;
use qdsym::qspin::{build_enveloping, joint_kernel};

fn main() -> qdsym::Result<()> {
    let mu = Mu::new(0.5)?;
    let spin = build_enveloping(mu, 4)?;
    let bath = build_bath(&BathSpec::new(vec![1.0, 1.7], 4)?)?;
    let t = bath.linear_coupling(&[c(0.2), c(0.15)])?;
    let tp = bath.quadrature_coupling(&[0.1, -0.2])?;
    let h = spin_boson_hamiltonian(&spin, &bath, &t, &tp)?;
    let zeta = bath.vacuum();
    let rho_b = &zeta * zeta.adjoint();
    let times = time_grid(0.0, 20.0, 9);

    let invariant = joint_kernel(&spin).vectors[0].clone();
    let product = linalg::basis_state(spin.dim(), 0);
    for (label, psi) in [("invariant", invariant), ("product |++++⟩", product)] {
        println!("{label}");
        println!(
            "{:>6} {:>12} {:>12} {:>10}",
            "t", "fidelity", "deviation", "purity"
        );
        let rho = &psi * psi.adjoint();
        let channel = InducedChannel::new(&h, &rho, &rho_b)?;
        let deviations = theorem1_deviations(&h, &psi, &zeta, &times)?;
        for (&t, d) in times.iter().zip(deviations) {
            let rho_t = channel.at(t);
            println!(
                "{t:>6.1} {:>12.9} {d:>12.2e} {:>10.6}",
                fidelity(&psi, &rho_t),
                purity(&rho_t)
            );
        }
        println!();
    }
    Ok(())
}
