//! Relativistic effects on photonic entanglement shared between moving
//! satellites: Lorentz boosts of polarization and Fock-basis pairs,
//! diffraction of the photon wavepackets, recurrence purification and the
//! photon budget of a link.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffraction;
pub mod error;
pub mod lorentz;
pub mod photon;
pub mod purification;
pub mod quantum;
pub mod states;

pub use error::{Error, Result};
