//! Log-transform velocity fields, the velocity (Burgers-Schrodinger) form of
//! the Schrodinger equation, Bäcklund maps and dispersionless characteristics.

pub mod backlund;
pub mod characteristics;
pub mod closure;
pub mod field;
pub mod jet;
pub mod madelung;
pub mod pipeline;

pub use backlund::{BacklundForm, BacklundImage, BacklundMap, DEFAULT_EXCLUSION};
pub use closure::{backlund_closure, BacklundSeed, ClosureConfig, ClosureReport};
pub use characteristics::{characteristics_solve, shock, shock_time, CharacteristicProfile, Shape, Shock, Speed};
pub use field::{cole_hopf, max_abs, nbs_residual, VelocityField, VelocitySample};
pub use jet::{eval_on_jet, JetEvaluator, NumJet};
pub use madelung::{
    first_correction_diff, general_madelung_residual, hydrodynamic_form, hydrodynamic_limit, nbs_form,
    printed_first_correction, velocity_operator, StructuredDiff, TermDiff,
};
pub use pipeline::{gaussian_pipeline, velocity_equation_residual, PipelineConfig, PipelineReport};
