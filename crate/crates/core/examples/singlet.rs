//! The invariant vector of the two-qubit corepresentation u⊗u across μ,
//! compared with the deformed singlet (|+−⟩ − μ|−+⟩)/√(1+μ²).

use qdsym::corep::{
    check_axiom, deformed_singlet, fundamental, invariant_subspace, tensor_product,
};
use qdsym::qalg::{Algebra, Mu};

fn main() -> qdsym::Result<()> {
    println!(
        "{:>6} {:>12} {:>12} {:>10} {:>10}",
        "mu", "<+-|v>", "<-+|v>", "overlap", "axiom"
    );
    for mu in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 1.0] {
        let mu = Mu::new(mu)?;
        let u = fundamental(Algebra::new(mu));
        let uu = tensor_product(&u, &u)?;
        let basis = invariant_subspace(&uu);
        let v = &basis.vectors[0];
        let overlap = v.dotc(&deformed_singlet(mu)).norm();
        println!(
            "{:>6} {:>12.6} {:>12.6} {:>10.2e} {:>10.1e}",
            mu.value(),
            v[1].re,
            v[2].re,
            1.0 - overlap,
            check_axiom(&uu).max_residual
        );
    }
    Ok(())
}
