//! Linear algebra over GF(2).

mod bitmat;
mod bitvec;
pub mod random;

pub use bitmat::{BitMat, Rref};
pub use bitvec::BitVec;
pub use random::{
    permutation_matrix, random_error, random_full_rank, random_invertible, random_matrix,
    random_permutation, random_vector, Seed, PRNG_NAME,
};

pub(crate) use bitmat::eliminate;
