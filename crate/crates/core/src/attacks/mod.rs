//! The right-inverse attack on McEliece ciphers and its experiments.
//!
//! For `c = m·G ⊕ e` and a right inverse `G⁻`, bit `i` of `c·G⁻` is
//! `m_i ⊕ e·e_i` where `e_i` is column `i` of `G⁻`. A low-weight `e_i` makes
//! the parity `e·e_i` biased towards zero. The searches here look for such
//! columns in the coset `g_i ⊕ span(I ⊕ G₁⁻G)`.

pub mod experiments;
mod parity;
mod search;

pub use parity::{parity_zero_prob, ParityProbability};
pub use search::{
    classical_attack, kernel_basis, Coset, RightInverseAttack, SearchConfig, SearchOutcome,
    Strategy, DEFAULT_EXHAUSTIVE_CAP,
};
