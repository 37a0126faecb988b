//! Computational-basis configurations.
//!
//! Sites are indexed from 0 in the API. When a configuration is read as an
//! integer, site 0 is the most significant bit, so `|v_0 v_1 ... v_{N-1}>`
//! sorts lexicographically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Config {
    bits: Vec<u8>,
}

impl Config {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self { bits })
    }

    /// Config with integer label `index`, site 0 being the most significant bit.
    pub fn from_index(n: usize, index: u64) -> Self {
        let bits = (0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect();
        Self { bits }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, site: usize) -> u8 {
        self.bits[site]
    }

    #[inline]
    pub fn set(&mut self, site: usize, b: u8) {
        self.bits[site] = b & 1;
    }

    #[inline]
    pub fn flip(&mut self, site: usize) {
        self.bits[site] ^= 1;
    }

    pub fn flipped(&self, site: usize) -> Self {
        let mut c = self.clone();
        c.flip(site);
        c
    }

    /// Number of ones, `S(v)`.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// `S(v) mod 2`.
    pub fn parity(&self) -> u8 {
        (self.weight() % 2) as u8
    }

    pub fn restrict(&self, sites: &[usize]) -> Vec<u8> {
        sites.iter().map(|&s| self.bits[s]).collect()
    }

    /// Iterates all `2^n` configurations in index order.
    pub fn all(n: usize) -> impl Iterator<Item = Config> {
        assert!(n < 64, "cannot enumerate 2^{n} configurations");
        (0..(1u64 << n)).map(move |k| Config::from_index(n, k))
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Config {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

impl From<Config> for String {
    fn from(c: Config) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Config {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// All configurations of `n` sites with exactly `weight` ones, in lexicographic order.
pub fn enumerate_sector(n: usize, weight: usize) -> Result<Vec<Config>> {
    if weight > n {
        return Err(Error::InvalidArgument(format!(
            "weight {weight} out of range for {n} sites"
        )));
    }
    let mut out = Vec::new();
    let mut bits = vec![0u8; n];
    fn rec(pos: usize, left: usize, bits: &mut Vec<u8>, out: &mut Vec<Config>) {
        let n = bits.len();
        if left == 0 {
            out.push(Config { bits: bits.clone() });
            return;
        }
        if n - pos < left {
            return;
        }
        // a zero at `pos` sorts before a one
        if n - pos > left {
            rec(pos + 1, left, bits, out);
        }
        bits[pos] = 1;
        rec(pos + 1, left - 1, bits, out);
        bits[pos] = 0;
    }
    rec(0, weight, &mut bits, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_msb_first() {
        let c: Config = "1011".parse().unwrap();
        assert_eq!(c.index(), 0b1011);
        assert_eq!(Config::from_index(4, 11), c);
        assert_eq!(c.weight(), 3);
        assert_eq!(c.parity(), 1);
    }

    #[test]
    fn sector_enumeration() {
        assert_eq!(enumerate_sector(4, 0).unwrap(), vec![Config::zeros(4)]);
        assert_eq!(enumerate_sector(4, 2).unwrap().len(), 6);
        let s = enumerate_sector(6, 3).unwrap();
        let filtered: Vec<Config> = Config::all(6).filter(|c| c.weight() == 3).collect();
        assert_eq!(s, filtered);
        assert!(enumerate_sector(3, 4).is_err());
    }

    #[test]
    fn serde_as_bit_string() {
        let c: Config = "0110".parse().unwrap();
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, "\"0110\"");
        let back: Config = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
        assert!("01a".parse::<Config>().is_err());
    }
}
