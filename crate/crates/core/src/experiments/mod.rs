//! Problem builders, sweeps and brute-force references.

mod blur;
mod deblur;
mod haar;
mod hard_soft;
mod oracle;
mod sweep;
mod two_ball;

pub use blur::{Blur, Composed, Kernel};
pub use deblur::{
    build_deblur, synthetic_image, DeblurProblem, DeblurRun, ImageProblemSpec, WaveletBox,
};
pub use haar::{haar_3stage, haar_3stage_inverse, Haar2d};
pub use hard_soft::HardSoft;
pub use oracle::{oracle_minimize_2d, SearchRect};
pub use sweep::{
    grid_sweep, CellState, GridSpec, Measure, Objective, SweepCase, SweepResult, Variant,
};
pub use two_ball::TwoBall;
