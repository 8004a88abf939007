use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Fixed-length bit string; character 0 is the most significant bit, matching
/// the qubit order of the simulator. Ordering is lexicographic for equal lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    value: u64,
}

pub const MAX_BITS: usize = 63;

impl BitString {
    pub fn new(value: u64, len: usize) -> Self {
        assert!(
            len <= MAX_BITS,
            "bit strings are limited to {MAX_BITS} bits"
        );
        assert!(value >> len == 0, "value {value} wider than {len} bits");
        BitString { len, value }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bit `i`, counted from the most significant end.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitString) -> bool {
        (self.value & other.value).count_ones() % 2 == 1
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len);
        BitString::new(self.value ^ other.value, self.len)
    }

    /// Appends one bit at the least significant end.
    pub fn push(&self, bit: bool) -> BitString {
        BitString::new((self.value << 1) | bit as u64, self.len + 1)
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    /// All strings of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |v| BitString::new(v, len))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "bit string longer than {MAX_BITS}"
            )));
        }
        let mut value = 0u64;
        for ch in s.chars() {
            value <<= 1;
            match ch {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(Error::InvalidParameter(format!("invalid bit string `{s}`"))),
            }
        }
        Ok(BitString::new(value, s.len()))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first() {
        let b: BitString = "100".parse().unwrap();
        assert_eq!(b.value(), 4);
        assert!(b.get(0) && !b.get(2));
        assert_eq!(b.to_string(), "100");
        assert!("10a".parse::<BitString>().is_err());
    }

    #[test]
    fn lexicographic_order() {
        let a: BitString = "01".parse().unwrap();
        let b: BitString = "10".parse().unwrap();
        assert!(a < b);
    }

    proptest! {
        #[test]
        fn text_round_trip(len in 0usize..20, raw in any::<u64>()) {
            let b = BitString::new(raw & ((1u64 << len) - 1), len);
            prop_assert_eq!(b.to_string().parse::<BitString>().unwrap(), b);
        }
    }
}
