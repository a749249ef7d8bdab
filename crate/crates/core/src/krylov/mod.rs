//! Reference Krylov solvers: GMRES, CGLS, CGNE, and MINRES / CG for the small
//! symmetric systems that arise after projection.

mod cgls;
mod gmres;
mod projected;
mod trace;

pub use cgls::{cgls, cgne};
pub use gmres::{gmres, gmres_with_map};
pub use projected::{cg_spd, minres_spd, ProjectedIterate, ProjectedSolve};
pub use trace::{discrepancy_check, DiscrepancyRule, SolveTrace, SolverOptions, StopReason};
