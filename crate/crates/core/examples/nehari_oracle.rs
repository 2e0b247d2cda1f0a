//! Cross-check shooting for −Δu = αu + u² against constrained energy
//! minimisation on a finite-difference grid, and show the coarse-grid flag.

use kirchhoff_ball::variational::{minimize_nehari, oracle_compare, OracleOptions};
use kirchhoff_ball::{BallGeometry, LocalSolver, ProblemParams, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    let geom = BallGeometry::new(3, 1.0)?;
    let l1 = SpectralConstants::new(&geom)?.lambda1;
    let params = ProblemParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 3.0, geom)?;
    let solver = LocalSolver::for_params(&params);

    let ground = minimize_nehari(&params.local(), 0.0, &OracleOptions::default())?;
    println!("ground-state level m0 = {:.8} after {} iterations", ground.m_alpha, ground.iterations);

    let alphas: Vec<f64> = (1..=9).map(|i| 0.1 * i as f64 * l1).collect();
    for points in [2000, 20] {
        println!("\ngrid with {points} points:");
        let opts = OracleOptions { points, ..Default::default() };
        for row in oracle_compare(&solver, &alphas, &opts) {
            println!(
                "  alpha = {:>8.4}  D_shoot = {:>12.6}  D_oracle = {:>12.6}  gap = {:.2e}{}",
                row.alpha,
                row.d_shoot.unwrap_or(f64::NAN),
                row.d_oracle.unwrap_or(f64::NAN),
                row.gap.unwrap_or(f64::NAN),
                if row.flagged { "  flagged" } else { "" }
            );
        }
    }
    Ok(())
}
