//! Positive radial solutions of the Kirchhoff problem
//!
//! ```text
//! −(a + b∫|∇u|²) Δu = λu^{q−1} + μu^{p−1}  in B_R,  u > 0,  u = 0 on ∂B_R
//! ```
//!
//! built from solutions u_α of the local problem −Δu = αu^{q−1} + u^{p−1}
//! by a two-step amplitude rescaling. A Kirchhoff solution corresponds to
//! each root of the scalar equation f(α) = 1, where f depends on α only
//! through the Dirichlet energy D(α) = ∫|∇u_α|².

pub mod constants;
pub mod error;
pub mod analysis;
pub mod cli;
pub mod ode;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod regime;
pub mod report;
pub mod roots;
pub mod scaling;
pub mod shooting;
pub mod variational;

pub use constants::{BallGeometry, SpectralConstants};
pub use error::{Error, Result};
pub use params::{LocalProblem, ProblemParams, Tolerances};
pub use profile::{dirichlet_energy, lp_norm, RadialProfile};
pub use shooting::{shoot, solve_local, LocalSolution, LocalSolver, ShotOutcome};
pub use scaling::{f_eval, kirchhoff_residual, reconstruct, KirchhoffSolution, ScalingChain, SolutionSummary};
pub use regime::{classify, CaseDescriptor, ExponentClass, RegimeCase, RegimePrediction};
