use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{binomial, Integer};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `Pr[e·v = 0]` for a uniformly random weight-`t` error `e` of length `n`
/// and a fixed vector `v` of weight `w`, as an exact reduced fraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityProbability {
    pub n: usize,
    pub t: usize,
    pub w: usize,
    #[serde(serialize_with = "as_decimal")]
    pub numerator: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub denominator: BigUint,
    /// Float rendering of the probability.
    pub probability: f64,
    /// `probability - 1/2`, computed from the exact fraction so that values
    /// far below double precision around 0.5 survive.
    pub delta_from_half: f64,
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

impl ParityProbability {
    pub fn is_one(&self) -> bool {
        self.numerator == self.denominator
    }
}

fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

/// Exact even-overlap probability
/// `Σ_{j even} C(w, j)·C(n-w, t-j) / C(n, t)`.
pub fn parity_zero_prob(n: usize, t: usize, w: usize) -> Result<ParityProbability> {
    if t > n || w > n {
        return Err(Error::param(format!("parity probability needs t, w <= n (n={n}, t={t}, w={w})")));
    }
    let mut num = BigUint::zero();
    for j in (0..=t.min(w)).step_by(2) {
        num += choose(w, j) * choose(n - w, t - j);
    }
    let den = choose(n, t);
    let g = num.gcd(&den);
    let (num, den) = (num / &g, den / &g);

    let probability = ratio_to_f64(&BigInt::from(num.clone()), &den);
    let twice_num = BigInt::from(&num << 1usize);
    let delta = ratio_to_f64(&(twice_num - BigInt::from(den.clone())), &(&den << 1usize));
    Ok(ParityProbability {
        n,
        t,
        w,
        numerator: num,
        denominator: den,
        probability,
        delta_from_half: delta,
    })
}

/// Nearest-ish `f64` of `num / den` (relative error below 2^-60).
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let sign = if num.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let mag = num.magnitude();
    let shift = (64 + den.bits() as i64 - mag.bits() as i64).max(0) as usize;
    let q = (mag << shift) / den;
    let mut v = q.to_f64().unwrap_or(f64::INFINITY);
    let mut s = shift;
    while s > 0 {
        let step = s.min(1000);
        v *= 2f64.powi(-(step as i32));
        s -= step;
    }
    sign * v
}
