//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use kobdd::functions::SafLayout;
use kobdd::Assignment;
use rand::Rng;

fn bits_needed(m: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < m {
        b += 1;
    }
    b
}

fn field(bits: &[bool], start: usize, len: usize) -> usize {
    (0..len).filter(|&j| bits[start + j]).map(|j| 1 << j).sum()
}

/// SAF straight from the block formulas.
pub fn saf_oracle(k: usize, w: usize, bits: &[bool]) -> bool {
    let blocks = 2 * k * w;
    let a = bits.len() / blocks;
    let kb = bits_needed(k);
    let wb = bits_needed(2 * w);
    let adr_k = |p: usize| field(bits, p * a, kb) % k;
    let adr_w = |p: usize| field(bits, p * a + kb, wb) % (2 * w);
    let val = |p: usize| bits[p * a + kb + wb..(p + 1) * a].iter().filter(|&&b| b).count() % w;
    let lookup = |i: usize, t: usize| (0..blocks).find(|&p| adr_k(p) == t && adr_w(p) == i).map(val);

    let mut step2 = Some(0);
    for t in 0..k {
        let step1 = step2.and_then(|i| lookup(i, t)).map(|v| v + w);
        step2 = step1.and_then(|j| lookup(j, t));
    }
    matches!(step2, Some(v) if v > 0)
}

/// MXPJ by decoding every function table and jumping.
pub fn mxpj_oracle(k: usize, d: usize, bits: &[bool]) -> bool {
    let t = bits_needed(d);
    assert_eq!(bits.len(), 2 * k * d * t);
    let f = |half: usize, layer: usize, j: usize| field(bits, ((half * k + layer) * d + j) * t, t);
    let (mut prev, mut cur) = (0usize, 0usize);
    for layer in 0..k {
        for half in 0..2 {
            let next = f(half, layer, cur) ^ prev;
            prev = cur;
            cur = next;
        }
    }
    cur.count_ones() % 2 == 1
}

/// Writes `value` LSB-first into `len` bits at `start`.
fn write_field(x: &mut Assignment, start: usize, len: usize, value: usize) {
    for j in 0..len {
        x.set(start + j, (value >> j) & 1 == 1);
    }
}

/// A random input with SAF = 1: the `2k` blocks on the accepting path are
/// placed first (so no later block shadows them), the rest is random.
/// Address fields randomly use the aliased encoding `t + k` / `i + 2w`
/// when it fits.
pub fn saf_witness<R: Rng>(layout: &SafLayout, rng: &mut R) -> Assignment {
    let (k, w) = (layout.k(), layout.w());
    assert!(w >= 2, "no positive value exists for w = 1");
    let mut x = Assignment::new((0..layout.n_vars()).map(|_| rng.random::<bool>()).collect());
    let kb = layout.step_address_bits();
    let wb = layout.slot_address_bits();
    assert!(layout.value_bits() >= w - 1);

    let mut order: Vec<usize> = (0..2 * k).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut slot_of_block = order.into_iter();
    let mut pointer = 0;
    for t in 0..k {
        for half in 0..2 {
            let target = if half == 0 { pointer } else { pointer + w };
            let value = if t + 1 == k && half == 1 { rng.random_range(1..w) } else { rng.random_range(0..w) };
            let p = slot_of_block.next().unwrap();
            let s = layout.block_start(p);
            let ak = if t + k < 1 << kb && rng.random::<bool>() { t + k } else { t };
            let aw = if target + 2 * w < 1 << wb && rng.random::<bool>() { target + 2 * w } else { target };
            write_field(&mut x, s, kb, ak);
            write_field(&mut x, s + kb, wb, aw);
            let vstart = s + kb + wb;
            for j in 0..layout.value_bits() {
                x.set(vstart + j, false);
            }
            let mut positions: Vec<usize> = (0..layout.value_bits()).collect();
            for i in (1..positions.len()).rev() {
                positions.swap(i, rng.random_range(0..=i));
            }
            for &j in &positions[..value] {
                x.set(vstart + j, true);
            }
            pointer = value;
        }
    }
    x
}

/// Distinct subfunctions at a cut, by listing each restriction's table.
pub fn naive_count(f: &dyn Fn(&[bool]) -> bool, n: usize, fixed: &[usize]) -> usize {
    let free: Vec<usize> = (0..n).filter(|v| !fixed.contains(v)).collect();
    let mut seen = HashSet::new();
    for rho in 0..1usize << fixed.len() {
        let mut table = Vec::with_capacity(1 << free.len());
        for sigma in 0..1usize << free.len() {
            let mut x = vec![false; n];
            for (j, &v) in fixed.iter().enumerate() {
                x[v] = (rho >> j) & 1 == 1;
            }
            for (j, &v) in free.iter().enumerate() {
                x[v] = (sigma >> j) & 1 == 1;
            }
            table.push(f(&x));
        }
        seen.insert(table);
    }
    seen.len()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `max_{1<u<n}` of the naive count over prefixes of `order`.
pub fn naive_n_theta(f: &dyn Fn(&[bool]) -> bool, n: usize, order: &[usize]) -> usize {
    (2..n).map(|u| naive_count(f, n, &order[..u])).max().unwrap()
}

/// `N(f)` by trying every one of the `n!` orders.
pub fn factorial_n_min(f: &dyn Fn(&[bool]) -> bool, n: usize) -> usize {
    assert!(n <= 6);
    permutations(n).iter().map(|o| naive_n_theta(f, n, o)).min().unwrap()
}

/// Uniformly random truth table on `n` variables.
pub fn random_table<R: Rng>(n: usize, rng: &mut R) -> kobdd::functions::TruthTable {
    let text: String = (0..1usize << n).map(|_| if rng.random::<bool>() { '1' } else { '0' }).collect();
    kobdd::functions::TruthTable::parse(&text).unwrap()
}

/// Deterministic program whose level maps are all permutations of `0..w`.
pub fn permutation_program<R: Rng>(n: usize, k: usize, w: usize, rng: &mut R) -> kobdd::Program {
    let perm = |rng: &mut R| {
        let mut p: Vec<usize> = (0..w).collect();
        for i in (1..w).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        kobdd::Transition::Deterministic(p)
    };
    let order = kobdd::random::order(n, rng);
    let levels = (0..k * n)
        .map(|i| kobdd::Level { var: order.var_at(i % n), width_in: w, width_out: w, t0: perm(rng), t1: perm(rng) })
        .collect();
    let accept = (0..w).filter(|_| rng.random::<bool>()).collect();
    kobdd::Program {
        semantics: kobdd::Semantics::Deterministic,
        n,
        k,
        order,
        levels,
        initial: rng.random_range(0..w),
        accept,
        epsilon: None,
    }
}
