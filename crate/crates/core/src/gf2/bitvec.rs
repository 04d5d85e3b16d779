use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A row vector over GF(2).
///
/// Coordinate `i` lives in word `i / 64`, bit `i % 64`. Bits at positions
/// `>= len` are always zero, so word-level equality and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single one at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_bits<I>(bits: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<u8>,
    {
        let bits: Vec<u8> = bits.into_iter().map(Into::into).collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            if *b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Vector whose coordinate `i` is bit `i` of `index`. This is the basis
    /// labelling used by the state-vector simulator.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "index vectors hold at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = index & mask;
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVec { len, words };
        v.clear_padding();
        v
    }

    /// Inverse of [`BitVec::from_index`]; fails above 64 coordinates.
    pub fn to_index(&self) -> Result<u64> {
        if self.len > WORD {
            return Err(Error::CapExceeded {
                what: "index width",
                requested: self.len,
                cap: WORD,
            });
        }
        Ok(self.words.first().copied().unwrap_or(0))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> Result<bool> {
        self.check_len("dot", other)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones & 1 == 1)
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<()> {
        self.check_len("xor", other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn and(&self, other: &BitVec) -> Result<BitVec> {
        self.check_len("and", other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(BitVec {
            len: self.len,
            words,
        })
    }

    /// Positions of the set coordinates, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Coordinates `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len);
        let mut out = BitVec::zeros(end - start);
        for i in self.ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }

    fn check_len(&self, op: &'static str, other: &BitVec) -> Result<()> {
        if self.len != other.len {
            return Err(Error::dims(op, self.len, other.len));
        }
        Ok(())
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}](", self.len)?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_stays_clear() {
        let v = BitVec::from_words(3, vec![u64::MAX]);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.words(), &[0b111]);
    }

    #[test]
    fn index_round_trip() {
        let v = BitVec::from_index(5, 0b10110);
        assert_eq!(v.to_string(), "01101");
        assert_eq!(v.to_index().unwrap(), 0b10110);
        assert!(BitVec::zeros(65).to_index().is_err());
    }

    #[test]
    fn dot_and_ones() {
        let a = BitVec::from_bits([1u8, 1, 0, 1]);
        let b = BitVec::from_bits([1u8, 0, 1, 1]);
        assert!(!a.dot(&b).unwrap());
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(a.xor(&b).unwrap(), BitVec::from_bits([0u8, 1, 1, 0]));
        assert!(a.dot(&BitVec::zeros(3)).is_err());
    }

    #[test]
    fn ones_across_words() {
        let mut v = BitVec::zeros(200);
        for i in [0, 63, 64, 130, 199] {
            v.set(i, true);
        }
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(v.weight(), 5);
        assert_eq!(v.slice(60, 131).ones().collect::<Vec<_>>(), vec![3, 4, 70]);
    }
}
