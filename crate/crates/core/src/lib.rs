//! Noiseless quantum codes from quantum-group dynamical symmetry.
//!
//! The crate builds the polynomial *-algebra of S_μU(2) ([`qalg`]), its
//! corepresentations and their invariant vectors ([`corep`]), deformed spin
//! operators on qubit registers ([`qspin`]), spin–boson dynamics with the
//! symmetry ([`dynamics`]) and the Kraus-level certificate that invariant
//! states form an error-avoiding code ([`channel`]). [`cli`] and [`check`]
//! hold the batch front end used by the `qdsym` binary.

pub mod channel;
pub mod check;
pub mod cli;
pub mod config;
pub mod corep;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod qalg;
pub mod qspin;
pub mod report;

pub use error::{Error, Result};
