//! Affinity-based geometric discord of bipartite quantum states.
//!
//! The discord of a state ρ on C^m ⊗ C^n is the minimum, over von Neumann
//! measurements {Π_k} on A, of 1 − Σ_k Tr[√ρ (Π_k⊗𝟙) √ρ (Π_k⊗𝟙)]. This crate
//! computes it three ways:
//!
//! * closed forms: pure states ([`measures::pure_discord`]) and 2 × n states
//!   ([`correlation::closed_form_2xn`]);
//! * a spectral lower bound for any m × n state ([`correlation::lower_bound`]);
//! * direct optimization over measurement bases ([`measures::optimize_discord`]),
//!   which also covers the Hilbert–Schmidt and remedied discords.
//!
//! [`families`] holds analytic values for Bell-diagonal, Werner and isotropic
//! states, and [`verify`] runs the end-to-end consistency checks the CLI exposes.

pub mod cli;
pub mod config;
pub mod correlation;
pub mod error;
pub mod families;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod states;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use measures::{DiscordResult, Measure, MeasurementBasis, Method, OptimizeOptions, Strategy};
pub use states::{BipartiteState, PureState};
