//! Quantum McEliece encryption of `k`-qubit states.
//!
//! The once scheme maps `Σ a_m |m⟩ ↦ Σ a_m |m·G ⊕ e⟩`. The twice scheme
//! follows that with `H^{⊗n}` and a second McEliece encoding under
//! `(G₂, t₂)`, so the cipher carries a phase mask as well as a bit mask.
//!
//! Legitimate decryption relabels each support string through the private
//! decoder. The attacker only has right inverses of the public matrices,
//! which strip the encoding but leave the masks in place.

use crate::error::{Error, Result};
use crate::gf2::{random_error, BitMat, BitVec, Seed};
use crate::goppa::{GoppaCode, McElieceKeyPair, PublicKey};
use crate::qsim::QuantumState;

/// Output of an encryption together with the errors it used.
///
/// The errors exist for oracle checks; adversary-facing functions only take
/// `state`.
#[derive(Clone, Debug)]
pub struct CipherRecord {
    pub state: QuantumState,
    /// First-layer error `e` (weight `t`).
    pub e: BitVec,
    /// Second-layer error `e₂` (weight `t₂`), twice scheme only.
    pub e2: Option<BitVec>,
}

/// Public halves of a twice-encryption key, `k → n → n₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwicePublicKey {
    pub first: PublicKey,
    pub second: PublicKey,
}

impl TwicePublicKey {
    pub fn new(first: PublicKey, second: PublicKey) -> Result<Self> {
        if second.k() != first.n() {
            return Err(Error::dims("second key message length", first.n(), second.k()));
        }
        Ok(TwicePublicKey { first, second })
    }
}

/// Two McEliece key pairs chained so that the second code's message length
/// equals the first code's length.
#[derive(Clone, Debug)]
pub struct TwiceKeyPair {
    pub first: McElieceKeyPair,
    pub second: McElieceKeyPair,
}

impl TwiceKeyPair {
    pub fn new(first: McElieceKeyPair, second: McElieceKeyPair) -> Result<Self> {
        if second.public().k() != first.public().n() {
            return Err(Error::dims(
                "second key message length",
                first.public().n(),
                second.public().k(),
            ));
        }
        Ok(TwiceKeyPair { first, second })
    }

    pub fn public(&self) -> TwicePublicKey {
        TwicePublicKey {
            first: self.first.public().clone(),
            second: self.second.public().clone(),
        }
    }
}

/// Smallest field degree whose usable support fits a length-`k + m·t` code.
fn toy_degree(k: usize, t: usize) -> Result<u32> {
    (2..=16u32)
        .find(|&m| {
            let usable = (1usize << m) - usize::from(t == 1);
            usable >= k + m as usize * t
        })
        .ok_or_else(|| Error::param(format!("no toy code for k={k}, t={t}")))
}

/// Toy McEliece key with message length exactly `k`, built from a shortened
/// Goppa code of length `k + m·t`.
pub fn toy_keypair(k: usize, t: usize, seed: Seed) -> Result<McElieceKeyPair> {
    let m = toy_degree(k, t)?;
    let code = GoppaCode::generate_shortened(m, t, k + m as usize * t, seed.derive(0))?;
    McElieceKeyPair::generate_with_dimension(code, k, seed.derive(1))
}

/// Toy twice-encryption chain for `k` message qubits.
pub fn toy_twice_keypair(k: usize, t: usize, t2: usize, seed: Seed) -> Result<TwiceKeyPair> {
    let first = toy_keypair(k, t, seed.derive(0))?;
    let second = toy_keypair(first.public().n(), t2, seed.derive(1))?;
    TwiceKeyPair::new(first, second)
}

fn check_message(public: &PublicKey, psi: &QuantumState) -> Result<()> {
    if psi.num_qubits() != public.k() {
        return Err(Error::dims("message qubits", public.k(), psi.num_qubits()));
    }
    Ok(())
}

/// `Σ a_m |m⟩ ↦ Σ a_m |m·G ⊕ e⟩` with `e = random_error(n, t, seed)`.
pub fn once_encrypt(public: &PublicKey, psi: &QuantumState, seed: Seed) -> Result<CipherRecord> {
    check_message(public, psi)?;
    let e = random_error(public.n(), public.t, seed)?;
    let state = psi.encode_linear(&public.g, &e)?;
    Ok(CipherRecord { state, e, e2: None })
}

/// Inverts the once encoding by decoding every support string.
pub fn once_decrypt(keys: &McElieceKeyPair, cipher: &QuantumState) -> Result<QuantumState> {
    let n = keys.public().n();
    if cipher.num_qubits() != n {
        return Err(Error::dims("cipher qubits", n, cipher.num_qubits()));
    }
    cipher.apply_basis_map(keys.public().k(), |y| {
        keys.decrypt(&BitVec::from_index(n, y))?.to_index()
    })
}

/// Once-encrypt under `first`, apply `H^{⊗n}`, once-encrypt under `second`.
/// The two errors come from `seed.derive(0)` and `seed.derive(1)`.
pub fn twice_encrypt(
    public: &TwicePublicKey,
    psi: &QuantumState,
    seed: Seed,
) -> Result<CipherRecord> {
    let inner = once_encrypt(&public.first, psi, seed.derive(0))?;
    let outer = once_encrypt(&public.second, &inner.state.hadamard_all(), seed.derive(1))?;
    Ok(CipherRecord {
        state: outer.state,
        e: inner.e,
        e2: Some(outer.e),
    })
}

/// Exact inverse pipeline: decode the second layer, `H^{⊗n}`, decode the
/// first layer.
pub fn twice_decrypt(keys: &TwiceKeyPair, cipher: &QuantumState) -> Result<QuantumState> {
    let middle = once_decrypt(&keys.second, cipher)?;
    once_decrypt(&keys.first, &middle.hadamard_all())
}

/// Cipher-state-only reduction of the once scheme: relabel by a right
/// inverse `G⁻`, giving `X(e·G⁻) Σ a_m |m⟩`.
pub fn attacker_reduce_once(cipher: &QuantumState, g_inv: &BitMat) -> Result<QuantumState> {
    cipher.apply_rowvec_map(g_inv)
}

/// Reduction of the twice scheme: relabel by `G₂⁻`, apply `H^{⊗n}`, relabel
/// by `G⁻`. Yields `X(e·G⁻) Σ a_m (-1)^{(e₂G₂⁻)·(mG ⊕ e)} |m⟩`.
pub fn attacker_reduce_twice(
    cipher: &QuantumState,
    g2_inv: &BitMat,
    g_inv: &BitMat,
) -> Result<QuantumState> {
    let outer = cipher.apply_rowvec_map(g2_inv)?;
    outer.hadamard_all().apply_rowvec_map(g_inv)
}

/// The `k`-bit mask `s` with `s·m = r₂·(m·G)` for all `m`, i.e. `s = G·r₂ᵀ`.
/// With `r₂ = e₂·G₂⁻` this is the phase error left by the twice reduction.
pub fn phase_mask(g: &BitMat, r2: &BitVec) -> Result<BitVec> {
    g.mul_column(r2)
}
