//! Distinct-subfunction counts `N^pi(f)`, `N^theta(f)` and `N(f)`.
//!
//! Fixing the variables of a set `A` to `rho` leaves a function of the
//! complement; the count at `A` is the number of distinct such functions,
//! i.e. the number of distinct rows of the `2^|A| x 2^|B|` communication
//! matrix. The count depends only on the set `A`, never on the order its
//! variables were read in, which is what makes the subset-lattice dynamic
//! program for `N(f)` exact.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::functions::TruthTable;
use crate::program::VariableOrder;

/// Largest `n` the counters accept.
pub const COUNT_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("subfunction counting is limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("cut must leave both sides nonempty (|A| = {size}, n = {n})")]
    EmptySide { size: usize, n: usize },
    #[error("variable {var} out of range for n = {n}")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("cuts 1 < u < n need n >= 3, got n = {0}")]
    TooFewVariables(usize),
    #[error("order has {found} entries, function has n = {n}")]
    OrderLength { found: usize, n: usize },
}

fn check_size(n: usize) -> Result<(), CountError> {
    if n > COUNT_LIMIT {
        Err(CountError::TooLarge { n, limit: COUNT_LIMIT })
    } else {
        Ok(())
    }
}

/// Ascending list of the submasks of `mask`.
fn submasks(mask: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut s = 0usize;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = s.wrapping_sub(mask) & mask;
    }
    out
}

/// Count for the variable set given as a bit mask (bit `i` is `x_{i+1}`).
fn count_mask(table: &TruthTable, a_mask: usize) -> usize {
    let n = table.arity();
    let full = (1usize << n) - 1;
    let cols = submasks(full & !a_mask);
    let rows = submasks(a_mask);
    if cols.len() <= 64 {
        let set: HashSet<u64> = rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | ((table.get(r | c) as u64) << i))
            })
            .collect();
        set.len()
    } else {
        let words = cols.len() / 64;
        let set: HashSet<Vec<u64>> = rows
            .iter()
            .map(|&r| {
                let mut key = vec![0u64; words];
                for (i, &c) in cols.iter().enumerate() {
                    key[i / 64] |= (table.get(r | c) as u64) << (i % 64);
                }
                key
            })
            .collect();
        set.len()
    }
}

/// Number of distinct subfunctions obtained by fixing the variables in
/// `subset` (0-based indices; listing order and repeats are irrelevant).
pub fn count_subfunctions_at_cut(table: &TruthTable, subset: &[usize]) -> Result<usize, CountError> {
    let n = table.arity();
    check_size(n)?;
    let mut mask = 0usize;
    for &v in subset {
        if v >= n {
            return Err(CountError::VariableOutOfRange { var: v, n });
        }
        mask |= 1 << v;
    }
    let size = mask.count_ones() as usize;
    if size == 0 || size == n {
        return Err(CountError::EmptySide { size, n });
    }
    Ok(count_mask(table, mask))
}

/// Per-cut counts of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfunctionProfile {
    pub n: usize,
    pub order: VariableOrder,
    /// `(u, c_u)` for `1 < u < n`.
    pub cuts: Vec<(usize, usize)>,
}

impl SubfunctionProfile {
    /// `N^theta(f)`, the maximum over the cuts.
    pub fn max_count(&self) -> usize {
        self.cuts.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }
}

fn prefix_mask(order: &VariableOrder, u: usize) -> usize {
    order.as_slice()[..u].iter().fold(0, |m, &v| m | (1 << v))
}

/// Counts at every prefix cut `1 < u < n` of `order`.
pub fn profile(table: &TruthTable, order: &VariableOrder) -> Result<SubfunctionProfile, CountError> {
    let n = table.arity();
    check_size(n)?;
    if n < 3 {
        return Err(CountError::TooFewVariables(n));
    }
    if order.len() != n {
        return Err(CountError::OrderLength { found: order.len(), n });
    }
    let cuts = (2..n).map(|u| (u, count_mask(table, prefix_mask(order, u)))).collect();
    Ok(SubfunctionProfile { n, order: order.clone(), cuts })
}

/// `N^theta(f)`.
pub fn n_theta(table: &TruthTable, order: &VariableOrder) -> Result<usize, CountError> {
    profile(table, order).map(|p| p.max_count())
}

/// `N(f)` with an order attaining it.
///
/// Bottleneck path over the subset lattice: `best(S)` is the smallest
/// possible maximum count over the prefixes of any order that reads `S`
/// first, with `best(S) = max(count(S), min_{i in S} best(S \ {i}))` for
/// `2 <= |S| <= n-1` and 0 below. The identity order gives an initial upper
/// bound; subsets that cannot beat it are not counted.
pub fn n_min(table: &TruthTable) -> Result<(usize, VariableOrder), CountError> {
    let n = table.arity();
    check_size(n)?;
    if n < 3 {
        return Err(CountError::TooFewVariables(n));
    }
    let identity = VariableOrder::identity(n);
    let upper = n_theta(table, &identity)?;
    let full = (1usize << n) - 1;

    let mut best = vec![0usize; 1 << n];
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for s in 0..=full {
        by_size[s.count_ones() as usize].push(s);
    }
    for subsets in &by_size[2..n] {
        let layer: Vec<(usize, usize)> = subsets
            .par_iter()
            .map(|&s| {
                let reach = (0..n)
                    .filter(|&i| s & (1 << i) != 0)
                    .map(|i| best[s & !(1 << i)])
                    .min()
                    .expect("nonempty subset");
                if reach >= upper {
                    (s, reach)
                } else {
                    (s, reach.max(count_mask(table, s)))
                }
            })
            .collect();
        for (s, v) in layer {
            best[s] = v;
        }
    }
    let dp = (0..n).map(|i| best[full & !(1 << i)]).min().expect("n >= 3");
    if dp >= upper {
        return Ok((upper, identity));
    }

    // Walk back from the full set, always stepping to a predecessor that
    // stays within the optimum.
    let mut perm = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let i = (0..n)
            .filter(|&i| s & (1 << i) != 0)
            .find(|&i| best[s & !(1 << i)] <= dp)
            .expect("optimal predecessor exists");
        perm.push(i);
        s &= !(1 << i);
    }
    perm.reverse();
    let order = VariableOrder::new(perm).expect("walk visits every variable once");
    debug_assert_eq!(n_theta(table, &order), Ok(dp));
    Ok((dp, order))
}
