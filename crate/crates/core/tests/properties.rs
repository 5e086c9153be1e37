//! Invariants checked on seeded random programs and functions.

mod common;

use kobdd::analysis::{self, bound_log2, Constants, Model};
use kobdd::constructions::{compile_to_nondet, compile_to_prob, compile_to_quantum};
use kobdd::format::{from_json, to_json};
use kobdd::program::{Program, Semantics, Transition};
use kobdd::random;
use kobdd::semantics::{accept_prob, eval_det, eval_nondet, state_trace, StateVector};
use kobdd::Assignment;
use num_complex::Complex64;
use proptest::prelude::*;

use common::*;

const ALL: [Semantics; 4] =
    [Semantics::Deterministic, Semantics::Nondeterministic, Semantics::Probabilistic, Semantics::Quantum];

/// Depth-first search for an accepting path.
fn nondet_paths(p: &Program, x: &Assignment) -> bool {
    fn go(p: &Program, x: &Assignment, level: usize, node: usize) -> bool {
        if level == p.levels.len() {
            return p.accept.contains(&node);
        }
        let l = &p.levels[level];
        let Transition::Nondeterministic(edges) = l.transition(x.get(l.var)) else { unreachable!() };
        edges.iter().any(|&(f, t)| f == node && go(p, x, level + 1, t))
    }
    go(p, x, 0, p.initial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounded_semantics_conserve_mass(seed in any::<u64>(), n in 1usize..=8, k in 1usize..=3, w in 1usize..=16) {
        let mut rng = random::rng(seed);
        for s in [Semantics::Probabilistic, Semantics::Quantum] {
            let p = random::program(s, n, k, w, &mut rng);
            let x = random::assignment(n, &mut rng);
            for state in state_trace(&p, &x).unwrap() {
                prop_assert!((state.total() - 1.0).abs() <= 1e-9);
                if let StateVector::Distribution(d) = &state {
                    prop_assert!(d.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }

    #[test]
    fn global_phase_is_invisible(seed in any::<u64>(), phase in 0.0f64..std::f64::consts::TAU, n in 1usize..=6) {
        let mut rng = random::rng(seed);
        let p = random::program(Semantics::Quantum, n, 2, 4, &mut rng);
        let z = Complex64::from_polar(1.0, phase);
        let mut q = p.clone();
        let level = &mut q.levels[0];
        for t in [&mut level.t0, &mut level.t1] {
            if let Transition::Unitary(g) = t {
                *g = g.map(|v| v * z);
            }
        }
        let x = random::assignment(n, &mut rng);
        prop_assert!((accept_prob(&p, &x).unwrap() - accept_prob(&q, &x).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn embeddings_agree_with_deterministic(seed in any::<u64>(), n in 1usize..=6, k in 1usize..=3, w in 1usize..=6) {
        let mut rng = random::rng(seed);
        let det = random::program(Semantics::Deterministic, n, k, w, &mut rng);
        let nd = compile_to_nondet(&det).unwrap();
        let pr = compile_to_prob(&det).unwrap();
        let rev = permutation_program(n, k, w, &mut rng);
        let qu = compile_to_quantum(&rev).unwrap();
        for i in 0..1u64 << n {
            let x = Assignment::from_index(n, i);
            let b = eval_det(&det, &x).unwrap();
            prop_assert_eq!(eval_nondet(&nd, &x).unwrap(), b);
            prop_assert_eq!(accept_prob(&pr, &x).unwrap(), b as u8 as f64);
            let q = accept_prob(&qu, &x).unwrap();
            prop_assert!((q - eval_det(&rev, &x).unwrap() as u8 as f64).abs() <= 1e-9);
        }
    }

    #[test]
    fn reachable_set_matches_path_search(seed in any::<u64>(), n in 1usize..=5, k in 1usize..=3, w in 1usize..=4) {
        let mut rng = random::rng(seed);
        let p = random::program(Semantics::Nondeterministic, n, k, w, &mut rng);
        for i in 0..1u64 << n {
            let x = Assignment::from_index(n, i);
            prop_assert_eq!(eval_nondet(&p, &x).unwrap(), nondet_paths(&p, &x));
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), n in 1usize..=5, k in 1usize..=3, w in 1usize..=5) {
        let mut rng = random::rng(seed);
        for s in ALL {
            let p = random::program(s, n, k, w, &mut rng);
            let text = to_json(&p);
            prop_assert_eq!(from_json(&text).unwrap(), p);
        }
    }

    #[test]
    fn cut_count_ignores_listing_order(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = random::rng(seed);
        let t = random_table(n, &mut rng);
        let perm = random::order(n, &mut rng);
        let size = 1 + (seed as usize) % (n - 1);
        let mut set = perm.as_slice()[..size].to_vec();
        let a = analysis::count_subfunctions_at_cut(&t, &set).unwrap();
        set.reverse();
        prop_assert_eq!(analysis::count_subfunctions_at_cut(&t, &set).unwrap(), a);
        prop_assert!(a >= 1 && a <= 1 << size);
    }

    #[test]
    fn minimum_below_every_order(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = random::rng(seed);
        let t = random_table(n, &mut rng);
        let (best, _) = analysis::n_min(&t).unwrap();
        for _ in 0..50 {
            prop_assert!(best <= analysis::n_theta(&t, &random::order(n, &mut rng)).unwrap());
        }
    }

    #[test]
    fn bounds_monotone(k in 1usize..=40, w in 2u32..=200) {
        let c = Constants::default();
        let w = f64::from(w);
        for m in [Model::Det, Model::Nondet, Model::Prob, Model::Quantum] {
            let base = bound_log2(m, k, w, &c).unwrap();
            prop_assert!(bound_log2(m, k + 1, w, &c).unwrap() >= base);
            prop_assert!(bound_log2(m, k, w + 1.0, &c).unwrap() >= base);
        }
    }
}

#[test]
fn random_programs_of_every_kind_validate() {
    let mut rng = random::rng(77);
    for s in ALL {
        for _ in 0..25 {
            let p = random::program(s, 12, 2, 16, &mut rng);
            assert!(p.validate().is_valid());
        }
    }
}
