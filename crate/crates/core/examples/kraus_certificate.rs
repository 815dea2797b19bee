//! Kraus operators of the reduced dynamics and the error-avoiding
//! certificate for the invariant code versus a product-state code.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdsym::channel::{certify_code, kraus_from_unitary};
use qdsym::dynamics::{build_bath, spin_boson_hamiltonian, BathSpec, Propagator};
use qdsym::linalg::{self, c};
use qdsym::qalg::Mu;
use qdsym::qspin::{build_enveloping, joint_kernel};

fn main() -> qdsym::Result<()> {
    let mu = Mu::new(-0.4)?;
    let spin = build_enveloping(mu, 4)?;
    let bath = build_bath(&BathSpec::new(vec![0.8, 1.3], 3)?)?;
    let t = bath.linear_coupling(&[c(0.3), c(-0.1)])?;
    let tp = bath.quadrature_coupling(&[0.2, 0.05])?;
    let h = spin_boson_hamiltonian(&spin, &bath, &t, &tp)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let zeta = linalg::random_state(&mut rng, bath.dim());
    let prop = Propagator::new(h.realized())?;

    let invariant = joint_kernel(&spin).vectors;
    let product = vec![linalg::basis_state(spin.dim(), 0)];
    let repetition = vec![
        linalg::basis_state(spin.dim(), 0),
        linalg::basis_state(spin.dim(), 15),
    ];
    for time in [0.5, 2.0, 8.0] {
        let kraus = kraus_from_unitary(&prop.unitary(time), spin.dim(), &zeta)?;
        println!(
            "t = {time}: {} Kraus operators, completeness {:.1e}",
            kraus.len(),
            kraus.completeness_residual()
        );
        for (label, code) in [("invariant", &invariant), ("product", &product)] {
            let cert = certify_code(&kraus, code)?;
            print!(
                "  {label:<9} dim {} rank gap {:.2e} off-block {:.2e} -> {}",
                code.len(),
                cert.rank_gap,
                cert.off_block_residual,
                cert.verdict
            );
            if let Some(gammas) = &cert.eigenvalues {
                let norm: f64 = gammas.iter().map(|g| g.norm_sqr()).sum();
                print!(" (Σ|γ_a|² = {norm:.12})");
            }
            println!();
        }
        // |0000⟩ and |1111⟩ see different noise, so the certificate is refused.
        if let Err(e) = certify_code(&kraus, &repetition) {
            println!("  {{|0000⟩, |1111⟩}}: {e}");
        }
    }
    Ok(())
}
