//! Normal-form arithmetic in S_μU(2): products, adjoints, the coproduct and
//! the counit.
//!
//! ```text
//! cargo run --example algebra -- 0.6
//! ```

use qdsym::qalg::{relation_residuals, Algebra, Mu};

fn main() -> qdsym::Result<()> {
    let mu: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(0.6), |s| s.parse())
        .unwrap_or(0.6);
    let alg = Algebra::new(Mu::new(mu)?);
    let (a, a_s, g, g_s) = (alg.alpha(), alg.alpha_star(), alg.gamma(), alg.gamma_star());

    println!("mu = {mu}");
    println!("α·γ       = {}", &a * &g);
    println!("γ·α       = {}", &g * &a);
    println!("α·α*      = {}", &a * &a_s);
    println!("α*·α      = {}", &a_s * &a);
    println!("(α·γ*)*   = {}", (&a * &g_s).adjoint());

    let x = &(&a * &a) + &(&g_s * &a_s);
    println!("x         = {x}");
    println!("x·x*      = {}", &x * &x.adjoint());
    println!("ε(x)      = {}", x.counit());
    println!(
        "Δ(α) has {} terms, Δ(α²) has {}",
        a.coproduct().len(),
        a.pow(2).coproduct().len()
    );

    println!("\ndefining relation residuals:");
    for (name, r) in relation_residuals(&alg) {
        println!("  {name:<28} {r:.1e}");
    }
    Ok(())
}
