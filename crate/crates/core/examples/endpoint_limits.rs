//! Extrapolate D(α) to the ends of the admissible α-interval and compare
//! with the ground-state and Sobolev-constant predictions.

use kirchhoff_ball::analysis::{verify_limits, LimitOptions};
use kirchhoff_ball::{BallGeometry, LocalSolver, ProblemParams, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    for (dim, q, p) in [(3, 2.0, 4.0), (4, 2.0, 4.0), (3, 2.0, 6.0), (5, 3.0, 10.0 / 3.0)] {
        let geom = BallGeometry::new(dim, 1.0)?;
        let consts = SpectralConstants::new(&geom)?;
        let params = ProblemParams::new(1.0, 1.0, 1.0, 1.0, q, p, geom)?;
        let report = verify_limits(&LocalSolver::for_params(&params), &consts, None, &LimitOptions::default())?;
        println!("N = {dim}, q = {q}, p = {p:.4}: {:?}", report.class);
        for c in &report.checks {
            println!(
                "  {:?}: extrapolated {:.8}, predicted {:.8}, error {:.2e} (tolerance {}) {}",
                c.endpoint,
                c.extrapolated.unwrap_or(f64::NAN),
                c.predicted,
                c.error.unwrap_or(f64::NAN),
                c.tolerance,
                if c.passed { "ok" } else { "FAILED" }
            );
        }
    }
    Ok(())
}
