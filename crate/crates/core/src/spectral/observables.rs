use serde::Serialize;

use super::grid::Fourier;
use super::state::WaveState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Observables {
    pub norm: f64,
    pub momentum: f64,
    pub centroid: f64,
    /// `int |psi_x|^2 - kappa^2 |psi|^4 dx`; reported, never asserted.
    pub energy_candidate: f64,
}

pub fn observables(state: &WaveState) -> Observables {
    let g = state.grid;
    let dx = g.dx();
    let psi = &state.values;
    let dpsi = Fourier::new(g.n).derivative(&g, psi, 1);
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx;
    let momentum = state.params.hbar * psi.iter().zip(&dpsi).map(|(a, b)| (a.conj() * b).im).sum::<f64>() * dx;
    let first: f64 = g.points().iter().zip(psi).map(|(x, z)| x * z.norm_sqr()).sum::<f64>() * dx;
    let centroid = if norm > 0.0 { first / norm } else { 0.0 };
    let energy_candidate = psi
        .iter()
        .zip(&dpsi)
        .map(|(a, b)| b.norm_sqr() - state.params.kappa2 * a.norm_sqr() * a.norm_sqr())
        .sum::<f64>()
        * dx;
    Observables { norm, momentum, centroid, energy_candidate }
}
