//! Sweep b for the sublinear-growth case q = 2, p = 3 below resonance and
//! watch the count of Kirchhoff solutions go from two to none.

use kirchhoff_ball::analysis::{find_roots, holder_bound, RootOptions};
use kirchhoff_ball::regime::{ground_state_level, two_root_lhs};
use kirchhoff_ball::{BallGeometry, CaseDescriptor, LocalSolver, ProblemParams, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    let geom = BallGeometry::new(3, 1.0)?;
    let consts = SpectralConstants::new(&geom)?;
    let base = ProblemParams::new(1.0, 1.0, 0.5 * consts.lambda1, 1.0, 2.0, 3.0, geom)?;
    let solver = LocalSolver::for_params(&base);
    let bound = holder_bound(base.p, ground_state_level(&solver, &consts)?, &consts);
    let opts = RootOptions { grid_points: 80, ..Default::default() };

    println!("{:>10} {:>14} {:>6}  roots", "b", "two-root lhs", "count");
    for b in [1e-5, 1e-4, 1e-3, 1e-2, 1e-1] {
        let params = ProblemParams { b, ..base };
        let descriptor = CaseDescriptor::new(&params, &consts, None)?;
        // The local solver depends only on (N, R, q, p), so its cache is shared.
        let report = find_roots(&solver, &params, &consts, &descriptor, None, &opts)?;
        let alphas: Vec<String> = report.roots.iter().map(|r| format!("{:.5}", r.alpha)).collect();
        println!("{b:>10.0e} {:>14.4e} {:>6}  {}", two_root_lhs(&params, bound), report.numeric_count, alphas.join(" "));
    }
    Ok(())
}
