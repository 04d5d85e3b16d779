//! Binary Goppa codes and the classical McEliece scheme.

mod code;
mod field;
mod mceliece;
mod poly;

pub use code::GoppaCode;
pub use field::{primitive_polynomial, GF2mField, Gf};
pub use mceliece::{encrypt, McElieceKeyPair, PublicKey};
pub use poly::Poly;
