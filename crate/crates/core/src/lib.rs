//! Entanglement and discord of two damped oscillators in thermal baths.
//!
//! States are two-mode Gaussian and carried as 4×4 covariance matrices over
//! `(x₁, p₁, x₂, p₂)` with vacuum `½·I`. The bath dynamics are solved in
//! closed form; [`analysis`] turns trajectories into negativity, discord and
//! sudden-death times.
//!
//! ```
//! use twomode::analysis::sudden_death_time;
//! use twomode::dynamics::EnvironmentParams;
//! use twomode::states::{build_squeezed_thermal, log_negativity, SqueezedThermalParams};
//!
//! let s0 = build_squeezed_thermal(&SqueezedThermalParams::new(1.0, 1.0, 2.0)?)?;
//! assert!(log_negativity(&s0)? > 4.0);
//!
//! let bath = EnvironmentParams::new(0.1, 1.0, 1.0, 1.0, 1.0)?;
//! let t_star = sudden_death_time(&s0, &bath, 20.0, 1e-6)?;
//! assert!(t_star.is_some_and(|t| t < 3.0));
//! # Ok::<(), twomode::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/sudden-death.md")]
    mod sudden_death {}
    #[doc = include_str!("../../../book/src/discord.md")]
    mod discord {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
