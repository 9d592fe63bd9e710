//! Sudden-quench dynamics for two families of many-body models: a
//! harmonically trapped gas of free fermions (trap-frequency and
//! delta-impurity quenches) and a spin impurity coupled to an isotropic
//! Lipkin-Meshkov-Glick bath.
//!
//! The crate computes dynamical overlaps and survival probabilities, energy
//! variances of the post-quench Hamiltonian, quantum-speed-limit times, and
//! spectral functions of the overlap. All kernels are dense, deterministic
//! for fixed input on one platform, and pure; concurrency belongs to the
//! caller.
//!
//! The crate is `no_std`-compatible (requires `alloc`). IO, file formats,
//! sweep scheduling, and the CLI live in the companion `quench-cli` crate.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod fermi;
pub mod lmg;
pub mod numerics;
pub mod qsl;
pub mod series;
pub mod spec;
pub mod spectral;
pub mod tolerances;

pub use num_complex::Complex64;
