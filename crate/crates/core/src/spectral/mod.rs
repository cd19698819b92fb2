//! Pseudospectral solvers on a periodic grid: exact Fourier-multiplier
//! propagation for linear dispersions and Strang split-step evolution of the
//! relativistic NLS with its eps-truncated nonlinearity.

pub mod grid;
pub mod ic;
mod observables;
mod propagate;
mod splitstep;
mod state;

pub use grid::{Fourier, Grid1D};
pub use ic::{free_gaussian, soliton_exact, InitialCondition};
pub use observables::{observables, Observables};
pub use propagate::{linear_propagate, LinearDispersion};
pub use splitstep::{
    splitstep_evolve, splitstep_evolve_with, CompiledNonlinearity, SplitStepConfig, SplitStepper, BLOW_UP_FACTOR,
};
pub use state::{WaveParams, WaveState};
