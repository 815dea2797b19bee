//! Number of invariant states on n qubits, from the corepresentation
//! nullspace and from the joint kernel of the deformed spin operators.

use qdsym::check::classical_singlet_count;
use qdsym::corep::{invariant_subspace, register, MAX_REGISTER_QUBITS};
use qdsym::qalg::{Algebra, Mu};
use qdsym::qspin::{build_enveloping, joint_kernel};

fn main() -> qdsym::Result<()> {
    let mu = Mu::new(0.45)?;
    let max_n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    println!("mu = {mu}");
    println!(
        "{:>3} {:>8} {:>8} {:>10}",
        "n", "corep", "kernel", "classical"
    );
    for n in 1..=max_n {
        let corep = if n <= MAX_REGISTER_QUBITS {
            invariant_subspace(&register(Algebra::new(mu), n)?)
                .len()
                .to_string()
        } else {
            "-".into()
        };
        let kernel = joint_kernel(&build_enveloping(mu, n)?).len();
        println!(
            "{n:>3} {corep:>8} {kernel:>8} {:>10}",
            classical_singlet_count(n)
        );
    }
    Ok(())
}
