//! Spatially invariant 2-D blur with selectable boundary conditions.
//!
//! Images are stored row-major but vectorized by stacking columns, so pixel
//! `(r, c)` of an `n × n` image is entry `c·n + r` of the vector an operator
//! sees.

mod blur;
mod image;
mod psf;

pub use blur::{rp_gmres, BlurOperator, BoundaryCondition};
pub use image::{phantom, BlurredImageProblem, Image};
pub use psf::{psf_gaussian_aniso, psf_motion, Psf};
