//! Single-excitation physics of a Su-Schrieffer-Heeger (SSH) qubit array
//! coupled to a microwave cavity.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, configuration and the command line live in the
//! companion `topo-cqed` crate.
//!
//! Units: angular frequencies and rates are in rad/μs, times in μs and
//! inductances in nH. [`units`] converts from the linear MHz/GHz values that
//! experiments quote.
//!
//! Modules:
//! - [`lattice`]: SSH Hamiltonian, eigenmodes, analytic edge/bulk states,
//!   parity and cavity-coupling coefficients.
//! - [`circuit`]: Josephson-coupler parameter maps to `t1`, `t2` and `g`.
//! - [`spectroscopy`]: linearised steady-state reflection, Rabi peaks, disorder.
//! - [`dispersive`]: cavity-mediated effective Hamiltonians and dynamics.
//! - [`scattering`]: waveguide transport through the edge-state superatom.
//! - [`oracle`]: brute-force Lindblad solver for tiny systems.

#![no_std]
// `num_traits::Float` supplies float math on toolchains whose `core` lacks it.
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod dispersive;
mod error;
pub mod lattice;
mod linalg;
pub mod oracle;
mod roots;
pub mod scattering;
pub mod spectroscopy;
pub mod units;

pub use error::{Error, Result};
pub use lattice::{ArrayParams, EigenMode, ModeClass, Parity, Spectrum};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
