//! The two ways of building deformed spin operators on a register.
//!
//! The coproduct construction reproduces the corepresentation invariants.
//! The tensor recurrence with a diagonal base case does not: its two-qubit
//! kernel is larger than the invariant subspace, and this example prints the
//! comparison instead of hiding it.

use qdsym::corep::{invariant_subspace, register};
use qdsym::linalg;
use qdsym::qalg::{Algebra, Mu};
use qdsym::qspin::{build_enveloping, build_recurrence, compare_with_corep, BaseCase};

fn main() -> qdsym::Result<()> {
    let mu = Mu::new(0.7)?;
    for n in [2, 4] {
        let oracle = invariant_subspace(&register(Algebra::new(mu), n)?);
        let env = build_enveloping(mu, n)?;
        let rec = build_recurrence(mu, n, &BaseCase::singlet_diagonal(mu))?;
        println!("n = {n}, corep invariant dimension {}", oracle.len());
        println!("  {}", compare_with_corep(&env, &oracle)?);
        println!("  {}", compare_with_corep(&rec, &oracle)?);

        let (jp, jm, j3) = env.ladder();
        println!(
            "  enveloping: J3 hermitian residual {:.1e}, |J+† − J−| {:.1e}",
            linalg::hermitian_residual(&j3),
            linalg::max_abs(&(jp.adjoint() - jm))
        );
    }
    Ok(())
}
