//! Quantum time dilation kernel.
//!
//! A clock whose centre of mass is prepared in a coherent superposition of two
//! relativistic momenta ticks, on average, at a rate that differs from the rate
//! of the corresponding classical mixture. This crate computes that effect in
//! closed form ([`dilation`]), checks it against an independent discretized
//! Page–Wootters model with finite covariant clocks ([`pwsim`]), sweeps it over
//! momentum differences ([`sweep`]) and converts it to laboratory numbers
//! ([`experiment`]).
//!
//! Everything inside the physics modules is expressed in natural units
//! `m = c = ħ = 1`: momenta are `p / mc`, energies `E / mc²` and times are in
//! units of `ħ / mc²`. SI values only appear in [`units`] and [`experiment`].
//!
//! The crate is `no_std` and only needs `alloc`; transcendental functions come
//! from `libm` so results are bit-identical across platforms.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod dilation;
pub mod experiment;
pub mod pwsim;
pub mod quadrature;
pub mod sweep;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
