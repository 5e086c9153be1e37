//! Boolean functions: the reference evaluators for SAF and MXPJ plus small
//! families (parity, conjunction, explicit truth tables).

mod mxpj;
mod saf;

use std::fmt;

use thiserror::Error;

use crate::program::Assignment;

pub use mxpj::{pointer_jump, vertex_parity, MxpjError, MxpjInstance, MxpjParams};
pub use saf::{ceil_log2, SafLayout, SafLayoutError};

/// A function `{0,1}^n -> {0,1}`.
pub trait BooleanFunction: Sync {
    fn n(&self) -> usize;
    fn eval(&self, x: &Assignment) -> bool;
}

impl<F: BooleanFunction + ?Sized> BooleanFunction for &F {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn eval(&self, x: &Assignment) -> bool {
        (**self).eval(x)
    }
}

impl<F: BooleanFunction + ?Sized + Send> BooleanFunction for Box<F> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn eval(&self, x: &Assignment) -> bool {
        (**self).eval(x)
    }
}

/// `x_1 xor .. xor x_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parity(pub usize);

impl BooleanFunction for Parity {
    fn n(&self) -> usize {
        self.0
    }
    fn eval(&self, x: &Assignment) -> bool {
        x.as_slice().iter().filter(|&&b| b).count() % 2 == 1
    }
}

/// `x_1 and .. and x_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conjunction(pub usize);

impl BooleanFunction for Conjunction {
    fn n(&self) -> usize {
        self.0
    }
    fn eval(&self, x: &Assignment) -> bool {
        x.as_slice().iter().all(|&b| b)
    }
}

/// Largest arity accepted for a materialized truth table.
pub const TRUTH_TABLE_LIMIT: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TruthTableError {
    #[error("truth table length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("truth tables are limited to n <= {TRUTH_TABLE_LIMIT}, got n = {0}")]
    TooLarge(usize),
    #[error("invalid character {ch:?} at position {position}")]
    InvalidChar { position: usize, ch: char },
}

/// The full table of a function; entry `i` is `f(Assignment::from_index(n, i))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(n: usize, f: impl Fn(&Assignment) -> bool) -> Self {
        assert!(n <= TRUTH_TABLE_LIMIT, "truth table too large");
        let len = 1usize << n;
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in 0..len {
            if f(&Assignment::from_index(n, i as u64)) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self { n, words }
    }

    pub fn of<F: BooleanFunction + ?Sized>(f: &F) -> Result<Self, TruthTableError> {
        if f.n() > TRUTH_TABLE_LIMIT {
            return Err(TruthTableError::TooLarge(f.n()));
        }
        Ok(Self::from_fn(f.n(), |x| f.eval(x)))
    }

    /// Parses a string of `2^n` characters `0`/`1`; whitespace is skipped.
    pub fn parse(text: &str) -> Result<Self, TruthTableError> {
        let mut bits = Vec::new();
        for (position, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                ch => return Err(TruthTableError::InvalidChar { position, ch }),
            }
        }
        let len = bits.len();
        if !len.is_power_of_two() {
            return Err(TruthTableError::NotPowerOfTwo(len));
        }
        let n = len.trailing_zeros() as usize;
        if n > TRUTH_TABLE_LIMIT {
            return Err(TruthTableError::TooLarge(n));
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(Self { n, words })
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({self})")
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl BooleanFunction for TruthTable {
    fn n(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &Assignment) -> bool {
        self.get(x.to_index() as usize)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("unknown function {0:?} (expected saf:k,w,n, mxpj:k,d, xor:n or and:n)")]
    Unknown(String),
    #[error("{name}: expected {expected} comma-separated integers, got {got:?}")]
    Arguments { name: &'static str, expected: usize, got: String },
    #[error(transparent)]
    Saf(#[from] SafLayoutError),
    #[error(transparent)]
    Mxpj(#[from] MxpjError),
}

/// Builtin function selected by a descriptor such as `saf:2,2,57`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionDescriptor {
    Saf(SafLayout),
    Mxpj(MxpjParams),
    Parity(usize),
    Conjunction(usize),
}

impl FunctionDescriptor {
    /// Returns `Ok(None)` when `s` does not name a builtin family, so callers
    /// can fall back to reading a truth-table file. With `relaxed`, SAF
    /// layouts only need room for one value bit per block instead of the
    /// full size bound.
    pub fn parse(s: &str, relaxed: bool) -> Result<Option<Self>, DescriptorError> {
        let Some((name, args)) = s.split_once(':') else {
            return Ok(None);
        };
        let ints = |name: &'static str, expected: usize| -> Result<Vec<usize>, DescriptorError> {
            let parsed: Result<Vec<usize>, _> = args.split(',').map(|a| a.trim().parse()).collect();
            match parsed {
                Ok(v) if v.len() == expected => Ok(v),
                _ => Err(DescriptorError::Arguments { name, expected, got: args.to_string() }),
            }
        };
        Ok(Some(match name {
            "saf" => {
                let v = ints("saf", 3)?;
                let layout = if relaxed {
                    SafLayout::without_size_bound(v[0], v[1], v[2])?
                } else {
                    SafLayout::new(v[0], v[1], v[2])?
                };
                FunctionDescriptor::Saf(layout)
            }
            "mxpj" => {
                let v = ints("mxpj", 2)?;
                FunctionDescriptor::Mxpj(MxpjParams::new(v[0], v[1])?)
            }
            "xor" => FunctionDescriptor::Parity(ints("xor", 1)?[0]),
            "and" => FunctionDescriptor::Conjunction(ints("and", 1)?[0]),
            _ => return Err(DescriptorError::Unknown(s.to_string())),
        }))
    }

    pub fn into_function(self) -> Box<dyn BooleanFunction + Send> {
        match self {
            FunctionDescriptor::Saf(l) => Box::new(l),
            FunctionDescriptor::Mxpj(m) => Box::new(m),
            FunctionDescriptor::Parity(n) => Box::new(Parity(n)),
            FunctionDescriptor::Conjunction(n) => Box::new(Conjunction(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table_parse_and_eval() {
        let t = TruthTable::parse("0110").unwrap();
        assert_eq!(t.arity(), 2);
        assert_eq!(t, TruthTable::of(&Parity(2)).unwrap());
        assert_eq!(t.to_string(), "0110");
        assert_eq!(TruthTable::parse("011"), Err(TruthTableError::NotPowerOfTwo(3)));
        assert!(matches!(TruthTable::parse("01x1"), Err(TruthTableError::InvalidChar { position: 2, .. })));
    }

    #[test]
    fn descriptors() {
        assert_eq!(FunctionDescriptor::parse("xor:4", false), Ok(Some(FunctionDescriptor::Parity(4))));
        assert_eq!(FunctionDescriptor::parse("table.txt", false), Ok(None));
        assert!(matches!(
            FunctionDescriptor::parse("mxpj:1,3", false),
            Err(DescriptorError::Mxpj(MxpjError::NotPowerOfTwo(3)))
        ));
        assert!(matches!(
            FunctionDescriptor::parse("saf:2,2", false),
            Err(DescriptorError::Arguments { .. })
        ));
        assert!(FunctionDescriptor::parse("saf:3,4,300", false).is_err());
        assert!(FunctionDescriptor::parse("saf:3,4,300", true).unwrap().is_some());
    }
}
