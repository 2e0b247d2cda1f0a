//! First Dirichlet eigenvalue, Sobolev constant and ball volume for a few
//! dimensions and radii.

use kirchhoff_ball::{BallGeometry, SpectralConstants};

fn main() -> kirchhoff_ball::Result<()> {
    println!("{:>2} {:>5} {:>14} {:>14} {:>14}", "N", "R", "lambda1", "S", "|B_R|");
    for dim in 3..=6 {
        for radius in [0.5, 1.0, 2.0] {
            let geom = BallGeometry::new(dim, radius)?;
            let c = SpectralConstants::new(&geom)?;
            println!("{dim:>2} {radius:>5} {:>14.10} {:>14.10} {:>14.10}", c.lambda1, c.sobolev_s, c.ball_volume);
        }
    }
    Ok(())
}
