//! Shuffled Address Function `SAF_{k,w}`.
//!
//! The input is cut into `2kw` blocks of `a = floor(n / 2kw)` bits; bits past
//! the last block are padding and never read. Each block starts with
//! `ceil(log k)` step-address bits and `ceil(log 2w)` slot-address bits
//! (LSB first), followed by `b = a - ceil(log k) - ceil(log 2w)` value bits.
//!
//! Evaluation iterates `k` steps. Step `t` looks up the first block
//! addressed `(t, i)` with `i` the previous pointer, shifts its value sum
//! (mod `w`) into the upper half `w..2w-1`, then looks up the first block
//! addressed by that. A missing block yields `-1` (here `None`), which is
//! absorbing. The function is 1 iff the final pointer is positive.

use thiserror::Error;

use super::BooleanFunction;
use crate::program::Assignment;

/// `ceil(log2 m)`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(m: usize) -> usize {
    assert!(m >= 1, "ceil_log2 of zero");
    m.next_power_of_two().trailing_zeros() as usize
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SafLayoutError {
    #[error("SAF needs k >= 1 and w >= 1 (got k = {k}, w = {w})")]
    ZeroParameter { k: usize, w: usize },
    #[error(
        "SAF size bound violated: 2kw(2w + ceil(log k) + ceil(log 2w)) = {required} must be < n = {n}; use n >= {}",
        required + 1
    )]
    SizeBound { n: usize, required: usize },
    #[error("blocks of {block_len} bits leave no value bits after {address_bits} address bits (n = {n} too small)")]
    NoValueBits { n: usize, block_len: usize, address_bits: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SafLayout {
    n: usize,
    k: usize,
    w: usize,
    block_len: usize,
    k_bits: usize,
    w_bits: usize,
}

impl SafLayout {
    /// Layout for `SAF_{k,w}` on `n` variables; requires
    /// `2kw(2w + ceil(log k) + ceil(log 2w)) < n`.
    pub fn new(k: usize, w: usize, n: usize) -> Result<Self, SafLayoutError> {
        let layout = Self::without_size_bound(k, w, n)?;
        let required = layout.size_bound();
        if required >= n {
            return Err(SafLayoutError::SizeBound { n, required });
        }
        Ok(layout)
    }

    /// Layout that only requires at least one value bit per block. The
    /// function is well defined here but outside the regime of its
    /// lower bound.
    pub fn without_size_bound(k: usize, w: usize, n: usize) -> Result<Self, SafLayoutError> {
        if k == 0 || w == 0 {
            return Err(SafLayoutError::ZeroParameter { k, w });
        }
        let k_bits = ceil_log2(k);
        let w_bits = ceil_log2(2 * w);
        let block_len = n / (2 * k * w);
        if block_len <= k_bits + w_bits {
            return Err(SafLayoutError::NoValueBits { n, block_len, address_bits: k_bits + w_bits });
        }
        Ok(Self { n, k, w, block_len, k_bits, w_bits })
    }

    /// `2kw(2w + ceil(log k) + ceil(log 2w))`.
    pub fn size_bound(&self) -> usize {
        2 * self.k * self.w * (2 * self.w + self.k_bits + self.w_bits)
    }

    pub fn satisfies_size_bound(&self) -> bool {
        self.size_bound() < self.n
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn w(&self) -> usize {
        self.w
    }
    pub fn block_count(&self) -> usize {
        2 * self.k * self.w
    }
    pub fn block_len(&self) -> usize {
        self.block_len
    }
    pub fn step_address_bits(&self) -> usize {
        self.k_bits
    }
    pub fn slot_address_bits(&self) -> usize {
        self.w_bits
    }
    pub fn address_bits(&self) -> usize {
        self.k_bits + self.w_bits
    }
    pub fn value_bits(&self) -> usize {
        self.block_len - self.address_bits()
    }
    pub fn block_start(&self, p: usize) -> usize {
        p * self.block_len
    }
    /// First padding position; everything from here on is ignored.
    pub fn covered_len(&self) -> usize {
        self.block_count() * self.block_len
    }

    fn field(&self, x: &Assignment, start: usize, len: usize) -> usize {
        (0..len).fold(0, |acc, j| acc | ((x.get(start + j) as usize) << j))
    }

    /// Step address of block `p`, in `0..k`.
    pub fn adr_k(&self, x: &Assignment, p: usize) -> usize {
        self.field(x, self.block_start(p), self.k_bits) % self.k
    }

    /// Slot address of block `p`, in `0..2w`.
    pub fn adr_w(&self, x: &Assignment, p: usize) -> usize {
        self.field(x, self.block_start(p) + self.k_bits, self.w_bits) % (2 * self.w)
    }

    /// Value-bit sum of block `p` modulo `w`.
    pub fn block_value(&self, x: &Assignment, p: usize) -> usize {
        let start = self.block_start(p) + self.address_bits();
        (start..start + self.value_bits()).filter(|&i| x.get(i)).count() % self.w
    }

    /// Smallest block addressed `(t, i)`.
    pub fn ind(&self, x: &Assignment, i: usize, t: usize) -> Option<usize> {
        (0..self.block_count()).find(|&p| self.adr_k(x, p) == t && self.adr_w(x, p) == i)
    }

    pub fn val(&self, x: &Assignment, i: usize, t: usize) -> Option<usize> {
        self.ind(x, i, t).map(|p| self.block_value(x, p))
    }

    /// `(Step1(t), Step2(t))` for `-1 <= t < k`; `None` stands for `-1`.
    pub fn step_pair(&self, x: &Assignment, t: isize) -> (Option<usize>, Option<usize>) {
        assert!(t >= -1 && t < self.k as isize, "step {t} out of range");
        let (mut s1, mut s2) = (Some(0), Some(0));
        for step in 0..=t {
            let step = step as usize;
            s1 = s2.and_then(|i| self.val(x, i, step)).map(|v| v + self.w);
            s2 = s1.and_then(|j| self.val(x, j, step));
        }
        (s1, s2)
    }

    /// `SAF_{k,w}(x)`: 1 iff `Step2(x, k-1) > 0`.
    pub fn saf_eval(&self, x: &Assignment) -> bool {
        matches!(self.step_pair(x, self.k as isize - 1).1, Some(v) if v > 0)
    }
}

impl BooleanFunction for SafLayout {
    fn n(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &Assignment) -> bool {
        self.saf_eval(x)
    }
}
