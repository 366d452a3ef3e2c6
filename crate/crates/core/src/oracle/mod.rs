//! Independent numerical references for the closed forms.
//!
//! [`gaussian`] propagates means and covariances through the symplectic maps
//! of each gate. [`fock`] applies the same gates as matrix exponentials on a
//! truncated number basis. [`quadrature`] and [`hermite`] supply the
//! integration and reconstruction utilities the checks need.

pub mod fock;
pub mod gaussian;
pub mod hermite;
pub mod quadrature;

pub use fock::{
    braid_overlap, fock_expectations, fock_tfd_state, fock_tfd_trajectory, ordering_overlap,
    wavefunction_from_fock, FockExpectations, FockState,
};
pub use gaussian::{gaussian_photon_stats, gaussian_tfd_state, reduce_physical, GaussianMode};
pub use hermite::hermite_functions;
pub use quadrature::quad_integrate;
