//! Positive solutions of −Δu = αu + u³ on the unit ball in ℝ³ by shooting,
//! with D(α) shrinking to zero as α approaches λ₁.

use kirchhoff_ball::{BallGeometry, LocalSolver, ProblemParams, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    let geom = BallGeometry::new(3, 1.0)?;
    let l1 = SpectralConstants::new(&geom)?.lambda1;
    // Only the local problem matters here; a, b, λ, μ are placeholders.
    let params = ProblemParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 4.0, geom)?;
    let solver = LocalSolver::for_params(&params);
    println!("{:>8} {:>14} {:>14} {:>14}", "alpha", "u(0)", "D(alpha)", "I(u)");
    for ratio in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99] {
        let sol = solver.solve(ratio * l1)?;
        println!("{:>8.4} {:>14.8} {:>14.8} {:>14.8}", sol.alpha, sol.beta, sol.dirichlet_energy, sol.local_energy);
    }

    let sol = solver.solve(0.5 * l1)?;
    println!("\nprofile at alpha = lambda1/2:");
    for i in 0..=10 {
        let r = i as f64 / 10.0;
        let (u, du) = sol.profile.eval(r);
        println!("  r = {r:.1}  u = {u:>12.8}  u' = {du:>12.8}");
    }
    Ok(())
}
