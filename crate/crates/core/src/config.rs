//! Pool configuration: the slice-size exponents and everything derived from
//! them (packed-address layout, block geometry).

use std::fmt;

use crate::codec::AddressLayout;
use crate::error::{Error, Result};

/// Pools grow in fixed blocks of `2^15` 32-bit words.
pub const BLOCK_EXPONENT: u32 = 15;

/// Words per block.
pub const BLOCK_LEN: usize = 1 << BLOCK_EXPONENT;

/// Most pools a configuration may have.
pub const MAX_POOLS: usize = 8;

/// Largest slice-size exponent. Every slice size divides the block size, so
/// slices never straddle blocks and blocks carry no padding.
pub const MAX_EXPONENT: u8 = 12;

/// A pool configuration: strictly increasing slice-size exponents
/// `z_0 < z_1 < ... < z_{P-1}`, one per pool. Pool `p` allocates slices of
/// `2^{z_p}` words. The production reference setting is `<1,4,7,11>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoolConfig {
    exponents: Vec<u8>,
    layout: AddressLayout,
}

impl PoolConfig {
    pub fn new(exponents: Vec<u8>) -> Result<Self> {
        if exponents.is_empty() || exponents.len() > MAX_POOLS {
            return Err(Error::InvalidConfig(format!(
                "pool count must be 1..={MAX_POOLS}, got {}",
                exponents.len()
            )));
        }
        for &z in &exponents {
            if z > MAX_EXPONENT {
                return Err(Error::InvalidConfig(format!(
                    "slice exponent {z} exceeds {MAX_EXPONENT}"
                )));
            }
        }
        if !exponents.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(format!(
                "slice exponents must be strictly increasing, got {exponents:?}"
            )));
        }
        let layout = AddressLayout::derive(&exponents)?;
        Ok(PoolConfig { exponents, layout })
    }

    /// Parse a comma- or dash-separated exponent list, e.g. `1,4,7,11` or
    /// `1-4-7-11`.
    pub fn parse(s: &str) -> Result<Self> {
        let sep = if s.contains(',') { ',' } else { '-' };
        let exponents = s
            .split(sep)
            .map(|part| {
                part.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::InvalidConfig(format!("bad slice exponent {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PoolConfig::new(exponents)
    }

    /// The production reference configuration `<1,4,7,11>`.
    pub fn production() -> Self {
        PoolConfig::new(vec![1, 4, 7, 11]).expect("reference configuration is valid")
    }

    pub fn pool_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn last_pool(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn exponent(&self, pool: usize) -> u8 {
        self.exponents[pool]
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    /// Slice size of `pool`, in words.
    pub fn slice_len(&self, pool: usize) -> u32 {
        1 << self.exponents[pool]
    }

    pub fn layout(&self) -> &AddressLayout {
        &self.layout
    }

    /// Slices of `pool` that fit in one block.
    pub fn slices_per_block(&self, pool: usize) -> u32 {
        (BLOCK_LEN as u32) >> self.exponents[pool]
    }
}

impl fmt::Display for PoolConfig {
    /// Dash-joined exponents, the form used in report output (`1-4-7-11`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for z in &self.exponents {
            if !first {
                write!(f, "-")?;
            }
            write!(f, "{z}")?;
            first = false;
        }
        Ok(())
    }
}
