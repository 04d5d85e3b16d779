//! JSON file formats for keys, states and bit strings.
//!
//! Bit payloads are hex strings in which coordinate 0 is the most
//! significant bit of the first nibble; a final partial nibble is padded
//! with zero bits on the right. Matrices are stored as one such string per
//! row.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};
use crate::goppa::{GF2mField, Gf, GoppaCode, McElieceKeyPair, Poly, PublicKey};
use crate::qsim::QuantumState;

pub const PUBLIC_KEY_FORMAT: &str = "qmce-public-key/1";
pub const PRIVATE_KEY_FORMAT: &str = "qmce-private-key/1";
pub const STATE_FORMAT: &str = "qmce-state/1";
pub const BITS_FORMAT: &str = "qmce-bits/1";

pub fn bits_to_hex(v: &BitVec) -> String {
    let nibbles = v.len().div_ceil(4);
    (0..nibbles)
        .map(|j| {
            let mut d = 0u32;
            for b in 0..4 {
                let i = 4 * j + b;
                if i < v.len() && v.get(i) {
                    d |= 8 >> b;
                }
            }
            char::from_digit(d, 16).expect("nibble")
        })
        .collect()
}

pub fn hex_to_bits(len: usize, hex: &str) -> Result<BitVec> {
    let hex = hex.trim();
    if hex.len() != len.div_ceil(4) {
        return Err(Error::Format(format!(
            "hex string of {} digits cannot hold exactly {len} bits",
            hex.len()
        )));
    }
    let mut v = BitVec::zeros(len);
    for (j, c) in hex.chars().enumerate() {
        let d = c
            .to_digit(16)
            .ok_or_else(|| Error::Format(format!("invalid hex digit {c:?}")))?;
        for b in 0..4 {
            if d & (8 >> b) != 0 {
                let i = 4 * j + b;
                if i >= len {
                    return Err(Error::Format("nonzero padding bits in hex string".into()));
                }
                v.set(i, true);
            }
        }
    }
    Ok(v)
}

pub fn matrix_to_hex(m: &BitMat) -> Vec<String> {
    m.row_vectors().iter().map(bits_to_hex).collect()
}

pub fn hex_to_matrix(rows: usize, cols: usize, hex: &[String]) -> Result<BitMat> {
    if hex.len() != rows {
        return Err(Error::Format(format!("expected {rows} matrix rows, found {}", hex.len())));
    }
    let data = hex.iter().map(|h| hex_to_bits(cols, h)).collect::<Result<_>>()?;
    BitMat::from_rows(cols, data)
}

fn check_tag(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!("expected format {expected:?}, found {found:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub format: String,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub g: Vec<String>,
}

impl PublicKeyFile {
    pub fn from_key(key: &PublicKey) -> Self {
        PublicKeyFile {
            format: PUBLIC_KEY_FORMAT.into(),
            n: key.n(),
            k: key.k(),
            t: key.t,
            g: matrix_to_hex(&key.g),
        }
    }

    pub fn to_key(&self) -> Result<PublicKey> {
        check_tag(&self.format, PUBLIC_KEY_FORMAT)?;
        Ok(PublicKey {
            g: hex_to_matrix(self.k, self.n, &self.g)?,
            t: self.t,
        })
    }
}

/// Everything needed to rebuild the key pair; `G` is stored too and checked
/// against the reconstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivateKeyFile {
    pub format: String,
    pub m: u32,
    pub t: usize,
    pub n: usize,
    pub k: usize,
    /// Reduction polynomial of GF(2^m) as an integer bit mask.
    pub field_polynomial: u32,
    /// Goppa polynomial coefficients, constant term first.
    pub goppa_polynomial: Vec<Gf>,
    pub support: Vec<Gf>,
    pub s: Vec<String>,
    pub p: Vec<String>,
    pub g: Vec<String>,
}

impl PrivateKeyFile {
    pub fn from_keypair(keys: &McElieceKeyPair) -> Self {
        let code = keys.code();
        PrivateKeyFile {
            format: PRIVATE_KEY_FORMAT.into(),
            m: code.m(),
            t: code.t(),
            n: code.n(),
            k: keys.public().k(),
            field_polynomial: code.field().reduction_polynomial(),
            goppa_polynomial: code.goppa_poly().coeffs().to_vec(),
            support: code.support().to_vec(),
            s: matrix_to_hex(keys.s()),
            p: matrix_to_hex(keys.p()),
            g: matrix_to_hex(&keys.public().g),
        }
    }

    pub fn to_keypair(&self) -> Result<McElieceKeyPair> {
        check_tag(&self.format, PRIVATE_KEY_FORMAT)?;
        let field = GF2mField::with_polynomial(self.m, self.field_polynomial)?;
        let poly = Poly::from_coeffs(self.goppa_polynomial.clone());
        if poly.degree() != Some(self.t) {
            return Err(Error::Format(format!("Goppa polynomial degree differs from t={}", self.t)));
        }
        if self.support.len() != self.n {
            return Err(Error::Format(format!("support has {} elements, n={}", self.support.len(), self.n)));
        }
        let code = GoppaCode::from_parts(field, poly, self.support.clone())?;
        let s = hex_to_matrix(self.k, self.k, &self.s)?;
        let p = hex_to_matrix(self.n, self.n, &self.p)?;
        let keys = McElieceKeyPair::from_private_parts(code, s, &p)?;
        if keys.public().g != hex_to_matrix(self.k, self.n, &self.g)? {
            return Err(Error::Format("stored G does not equal S·G0·P".into()));
        }
        Ok(keys)
    }
}

/// Nonzero amplitudes as `[index, re, im]` triples, ascending by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format: String,
    pub num_qubits: usize,
    pub amplitudes: Vec<(u64, f64, f64)>,
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        StateFile {
            format: STATE_FORMAT.into(),
            num_qubits: state.num_qubits(),
            amplitudes: state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                .map(|(i, a)| (i as u64, a.re, a.im))
                .collect(),
        }
    }

    pub fn to_state(&self) -> Result<QuantumState> {
        check_tag(&self.format, STATE_FORMAT)?;
        crate::qsim::check_cap(self.num_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.num_qubits];
        for &(i, re, im) in &self.amplitudes {
            let slot = amps
                .get_mut(i as usize)
                .ok_or_else(|| Error::Format(format!("amplitude index {i} out of range")))?;
            *slot = Complex64::new(re, im);
        }
        QuantumState::from_normalized_amplitudes(amps)
    }
}

/// A classical bit string (message or cipher).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitsFile {
    pub format: String,
    pub bits: usize,
    pub hex: String,
}

impl BitsFile {
    pub fn from_bits(v: &BitVec) -> Self {
        BitsFile {
            format: BITS_FORMAT.into(),
            bits: v.len(),
            hex: bits_to_hex(v),
        }
    }

    pub fn to_bits(&self) -> Result<BitVec> {
        check_tag(&self.format, BITS_FORMAT)?;
        hex_to_bits(self.bits, &self.hex)
    }
}
