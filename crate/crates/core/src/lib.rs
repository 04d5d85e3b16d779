//! Quantum McEliece encryption over binary Goppa codes, simulated at desk scale.
//!
//! The crate covers four layers:
//!
//! * [`gf2`]: bit-packed vectors and matrices over GF(2), right inverses and
//!   the family of all right inverses of a full-row-rank matrix.
//! * [`goppa`]: binary Goppa codes over GF(2^m), Patterson decoding and the
//!   classical McEliece public-key scheme `c = mG + e`.
//! * [`qsim`] and [`schemes`]: a dense state-vector simulator and the quantum
//!   once/twice encryption schemes together with the cipher-state-only
//!   reductions an attacker can perform.
//! * [`attacks`]: the right-inverse bit-recovery attack, low-weight coset
//!   searches, exact parity probabilities and the seeded experiment drivers.
//!
//! Everything randomized takes a [`Seed`]; equal seeds give bit-identical
//! results.

pub mod attacks;
pub mod error;
pub mod format;
pub mod gf2;
pub mod goppa;
pub mod qsim;
pub mod report;
pub mod schemes;

pub use error::{Error, Result};
pub use gf2::{BitMat, BitVec, Seed};
