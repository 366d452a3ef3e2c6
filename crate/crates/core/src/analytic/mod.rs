//! Closed-form observables of the thermalized displaced squeezed thermal state.
//!
//! Temperatures enter only through the angle sums carried by
//! [`ThermalAngles`](crate::model::ThermalAngles): `cosh 2Θ`, `cosh Θ`/`sinh Θ`,
//! `e^{-θ₁}` and the detector gain `e^{2θ₂}`. Several input or detector noises
//! therefore need no special handling here.
//!
//! The functions assume finite coordinates and times; non-finite inputs
//! propagate as NaN rather than being rejected.

mod moments;
mod photon;
mod position;

pub use moments::{
    entropy_sum, mgf, nth_moment, quadrature_variances, uncertainty_product, xp_moments,
    Quadrature, XPMoments,
};
pub use photon::{photon_stats, Coherence, PhotonStats};
pub use position::{prob_p, prob_x, rho_position, rho_position_dsts, wavefunction};
