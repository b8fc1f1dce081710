//! Bit strings, the self-delimiting advice encoding, and sector arithmetic.
//!
//! Advice is a flat binary string. The encoding doubles every payload bit
//! (0 -> 00, 1 -> 11) and inserts the pair 01 after each substring, so the
//! decoder can recover the substring boundaries without a length prefix.
//! The final substring is the binary representation of `LogSum`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A finite sequence of bits. Empty strings are permitted.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitString {
            bits: bits.into_iter().collect(),
        }
    }

    /// Minimal binary representation of `value`, no leading zeros.
    /// Zero encodes as the single bit "0".
    pub fn minimal_binary(value: u64) -> Self {
        if value == 0 {
            return BitString::from_bits([false]);
        }
        let width = 64 - value.leading_zeros();
        Self::fixed_width(value as u128, width)
    }

    /// Exactly `width` bits, most significant first, left-padded with zeros.
    /// Requires `value < 2^width`.
    pub fn fixed_width(value: u128, width: u32) -> Self {
        assert!(width >= 128 || value >> width == 0, "value does not fit");
        let bits = (0..width).rev().map(|i| (value >> i) & 1 == 1).collect();
        BitString { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    /// Everything after the first bit. Used to strip the rendezvous role bit.
    pub fn tail(&self) -> BitString {
        BitString {
            bits: self.bits.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    /// Integer value of the string read as big-endian binary, saturating.
    pub fn value_saturating(&self) -> u128 {
        let mut v: u128 = 0;
        for b in &self.bits {
            if v > u128::MAX >> 1 {
                return u128::MAX;
            }
            v = (v << 1) | (*b as u128);
        }
        v
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self)
    }
}

impl FromStr for BitString {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, CodecError> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(CodecError::BadCharacter { offset: i }),
            }
        }
        Ok(BitString { bits })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed advice: odd length {len}")]
    OddLength { len: usize },
    #[error("malformed advice: pair 10 at bit offset {offset}")]
    BadPair { offset: usize },
    #[error("not a bit string: bad character at offset {offset}")]
    BadCharacter { offset: usize },
}

/// Decoded advice: the per-level substrings `A_0..A_{D-1}` followed by the
/// bits of `LogSum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvicePayload {
    pub substrings: Vec<BitString>,
    pub logsum_bits: BitString,
}

impl AdvicePayload {
    /// Number of substrings, which the agent reads as D.
    pub fn depth(&self) -> usize {
        self.substrings.len()
    }

    /// Total substring length, which the agent reads as ell.
    pub fn ell(&self) -> u64 {
        self.substrings.iter().map(|s| s.len() as u64).sum()
    }

    /// Integer value of the LS field, saturating at u64::MAX.
    pub fn logsum(&self) -> u64 {
        self.logsum_bits.value_saturating().min(u64::MAX as u128) as u64
    }
}

/// Encode substrings plus the LS field into one self-delimiting string.
/// With D substrings there are exactly D separators, so the output length
/// is `2(sum of |A_i| + |LS|) + 2D`.
pub fn concat(substrings: &[BitString], ls: &BitString) -> BitString {
    let mut out = BitString::new();
    for s in substrings {
        for b in s.iter() {
            out.push(b);
            out.push(b);
        }
        out.push(false);
        out.push(true);
    }
    for b in ls.iter() {
        out.push(b);
        out.push(b);
    }
    out
}

/// Inverse of [`concat`]: reads aligned pairs, 00 -> 0, 11 -> 1,
/// 01 -> substring boundary. The last substring is LS.
pub fn decode(bits: &BitString) -> Result<AdvicePayload, CodecError> {
    if bits.len() % 2 != 0 {
        return Err(CodecError::OddLength { len: bits.len() });
    }
    let mut substrings = Vec::new();
    let mut current = BitString::new();
    let mut i = 0;
    while i < bits.len() {
        let (a, b) = (bits.get(i).unwrap(), bits.get(i + 1).unwrap());
        match (a, b) {
            (false, false) => current.push(false),
            (true, true) => current.push(true),
            (false, true) => {
                substrings.push(std::mem::take(&mut current));
            }
            (true, false) => return Err(CodecError::BadPair { offset: i }),
        }
        i += 2;
    }
    Ok(AdvicePayload {
        substrings,
        logsum_bits: current,
    })
}

/// Number of bits needed to write down a port at a node of degree `deg`,
/// i.e. ceil(log2 deg), with ceil(log2 1) = 0.
pub fn ceil_log2(deg: u64) -> u32 {
    assert!(deg >= 1);
    if deg == 1 {
        0
    } else {
        64 - (deg - 1).leading_zeros()
    }
}

/// The substring length the oracle assigns at a node of degree `deg` under
/// budget `ell` out of `logsum`: floor(ceil(log2 deg) * ell / logsum),
/// computed in exact integer arithmetic (multiply before divide).
///
/// Returns `None` (a mismatch, not a failure) when `logsum` is zero at a
/// branching node: the oracle's path had all-zero contributions, so any
/// node of degree > 1 is off-path and the agent backtracks.
pub fn expected_substring_length(deg: u64, ell: u64, logsum: u64) -> Option<u32> {
    let c = ceil_log2(deg);
    if c == 0 {
        return Some(0);
    }
    if logsum == 0 {
        return None;
    }
    Some(((c as u128 * ell as u128) / logsum as u128) as u32)
}

fn pow2(z: u32) -> u128 {
    if z >= 127 {
        u128::MAX
    } else {
        1u128 << z
    }
}

fn sector_size(deg: u64, z: u32) -> u128 {
    let p = pow2(z);
    (deg as u128 + p - 1) / p
}

/// The z-bit sector number containing `port` among the ports of a node of
/// degree `deg` split into sectors of size ceil(deg / 2^z).
pub fn encode_sector_number(deg: u64, port: u64, z: u32) -> BitString {
    assert!(port < deg, "port {port} out of range for degree {deg}");
    let size = sector_size(deg, z);
    let number = port as u128 / size;
    debug_assert!(z >= 127 || number >> z == 0);
    BitString::fixed_width(number, z)
}

/// The inclusive port interval named by `code` at a node of degree `deg`.
/// Entries >= deg are retained here; the agent filters them.
pub fn get_sector(deg: u64, code: &BitString) -> std::ops::RangeInclusive<u128> {
    let z = code.len() as u32;
    let size = sector_size(deg, z);
    let number = code.value_saturating();
    let lo = number.saturating_mul(size);
    let hi = number
        .saturating_add(1)
        .saturating_mul(size)
        .saturating_sub(1);
    lo..=hi
}

/// An exact fraction in lowest terms with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn less_than_one(&self) -> bool {
        self.num < self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
