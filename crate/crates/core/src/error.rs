use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a total x-derivative of a local differential polynomial: {0}")]
    NotExactDerivative(String),
    #[error("antiderivative markers may only be nested to depth 1")]
    NestedNonlocal,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("vortices {0} and {1} coalesced (separation below threshold)")]
    CoalescedVortices(usize, usize),
    #[error("root tracking ambiguous at t = {t}: two roots within {tol:e}")]
    RootTrackingAmbiguous { t: f64, tol: f64 },
    #[error("wave function nearly vanishes at x = {x} (|psi| = {amp:e})")]
    NearZeroAmplitude { x: f64, amp: f64 },
    #[error("singular locus at x = {0}")]
    SingularLocus(f64),
    #[error("time {t} is at or beyond the shock time {shock}")]
    ShockReached { t: f64, shock: f64 },
    #[error("no sign change bracketing the characteristic root at x = {0}")]
    NoBracket(f64),
    #[error("stability guard: dt * max rate = {0} >= 1")]
    StabilityGuard(f64),
    #[error("amplitude blow-up at step {0}")]
    BlowUp(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
