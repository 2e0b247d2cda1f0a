//! Solve −(a + b∫|∇u|²)Δu = λu + μu³ on the unit ball in ℝ³ below
//! resonance, and print the certified solution.

use kirchhoff_ball::analysis::{find_roots, RootOptions};
use kirchhoff_ball::regime::ground_state_level;
use kirchhoff_ball::{classify, BallGeometry, CaseDescriptor, LocalSolver, ProblemParams, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    let geom = BallGeometry::new(3, 1.0)?;
    let consts = SpectralConstants::new(&geom)?;
    let params = ProblemParams::new(1.0, 0.005, 0.5 * consts.lambda1, 1.0, 2.0, 4.0, geom)?;
    let solver = LocalSolver::for_params(&params);

    let m0 = ground_state_level(&solver, &consts)?;
    let prediction = classify(&params, &consts, Some(m0), None)?;
    println!("regime {:?}, at least {} solution(s)", prediction.case, prediction.guaranteed_count);

    let descriptor = CaseDescriptor::new(&params, &consts, None)?;
    let report = find_roots(&solver, &params, &consts, &descriptor, Some(&prediction), &RootOptions::default())?;
    for sol in &report.solutions {
        let s = sol.summary();
        println!(
            "alpha = {:.10}  f - 1 = {:.1e}  phi(0) = {:.8}  int |grad phi|^2 = {:.8}  residual = {:.1e}",
            s.alpha_root,
            s.f_value - 1.0,
            s.amplitude,
            s.dirichlet_energy,
            s.residual
        );
    }
    Ok(())
}
