//! Exact momentum-space solution, quench dynamics and overlap diagnostics of
//! the Kitaev ring with imaginary p-wave pairing,
//!
//! ```text
//! H = Σ_j [−J c_j†c_{j+1} − J c_{j+1}†c_j − iΔ c_j†c_{j+1}† − iΔ c_{j+1}c_j + μ(2n_j − 1)],
//! ```
//!
//! together with a dense real-space oracle for small rings.

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod phase;
pub mod quadrature;
pub mod sweep;
pub mod table;

pub use error::{Error, Result};
pub use model::{HermParams, NhParams, C64};
