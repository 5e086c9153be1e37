//! Seeded generators for assignments, orders, matrices and whole programs.
//!
//! All randomness in the crate goes through [`rng`], a ChaCha8 stream seeded
//! from a `u64`, so runs are reproducible across platforms.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::program::{
    Assignment, ComplexMatrix, Level, Program, RealMatrix, Semantics, Transition, VariableOrder,
};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assignment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Assignment {
    Assignment::new((0..n).map(|_| rng.random::<bool>()).collect())
}

pub fn order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> VariableOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    VariableOrder::new(perm).expect("shuffled identity is a permutation")
}

/// Standard normal sample (Box-Muller).
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Unitary `w x w` matrix: Gram-Schmidt on complex Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(w: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(w);
    while cols.len() < w {
        let mut v: Vec<Complex64> = (0..w).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for q in &cols {
                let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= dot * a;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut m = ComplexMatrix::zeros(w, w);
    for (c, col) in cols.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

/// Column-stochastic `rows x cols` matrix with random positive entries.
pub fn stochastic<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RealMatrix {
    let mut m = RealMatrix::zeros(rows, cols);
    for c in 0..cols {
        let raw: Vec<f64> = (0..rows).map(|_| rng.random::<f64>() + 1e-3).collect();
        let sum: f64 = raw.iter().sum();
        for (r, x) in raw.into_iter().enumerate() {
            m.set(r, c, x / sum);
        }
    }
    m
}

fn transition<R: Rng + ?Sized>(semantics: Semantics, w_in: usize, w_out: usize, rng: &mut R) -> Transition {
    match semantics {
        Semantics::Deterministic => {
            Transition::Deterministic((0..w_in).map(|_| rng.random_range(0..w_out)).collect())
        }
        Semantics::Nondeterministic => {
            let mut edges = Vec::new();
            for from in 0..w_in {
                for to in 0..w_out {
                    if rng.random_bool(0.3) {
                        edges.push((from, to));
                    }
                }
            }
            Transition::Nondeterministic(edges)
        }
        Semantics::Probabilistic => Transition::Stochastic(stochastic(w_out, w_in, rng)),
        Semantics::Quantum => Transition::Unitary(unitary(w_in, rng)),
    }
}

/// Random valid `k`-layer program over `n` variables with a random order.
///
/// Classical programs get level widths drawn from `1..=w`; quantum ones
/// have constant width `w`. The accept set is a random subset of the
/// sinks. Bounded-error programs carry `epsilon = 0.5`, which makes no
/// claim about the function they compute.
pub fn program<R: Rng + ?Sized>(semantics: Semantics, n: usize, k: usize, w: usize, rng: &mut R) -> Program {
    assert!(n >= 1 && k >= 1 && w >= 1);
    let order = order(n, rng);
    let mut widths = Vec::with_capacity(k * n + 1);
    for _ in 0..=k * n {
        widths.push(if semantics == Semantics::Quantum { w } else { rng.random_range(1..=w) });
    }
    let levels = (0..k * n)
        .map(|i| {
            let (w_in, w_out) = (widths[i], widths[i + 1]);
            Level {
                var: order.var_at(i % n),
                width_in: w_in,
                width_out: w_out,
                t0: transition(semantics, w_in, w_out, rng),
                t1: transition(semantics, w_in, w_out, rng),
            }
        })
        .collect();
    let sinks = widths[k * n];
    let accept = (0..sinks).filter(|_| rng.random_bool(0.5)).collect();
    Program {
        semantics,
        n,
        k,
        order,
        levels,
        initial: rng.random_range(0..widths[0]),
        accept,
        epsilon: semantics.is_bounded_error().then_some(0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_programs_validate() {
        let mut r = rng(1);
        for s in [
            Semantics::Deterministic,
            Semantics::Nondeterministic,
            Semantics::Probabilistic,
            Semantics::Quantum,
        ] {
            for _ in 0..5 {
                let p = program(s, 4, 2, 5, &mut r);
                assert!(p.validate().is_valid(), "{}", p.validate());
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = program(Semantics::Quantum, 3, 2, 4, &mut rng(9));
        let b = program(Semantics::Quantum, 3, 2, 4, &mut rng(9));
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(3);
        for w in 1..=16 {
            assert!(unitary(w, &mut r).unitarity_deviation().unwrap() < 1e-12);
        }
    }
}
