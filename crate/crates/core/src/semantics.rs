//! Evaluators for the four program semantics.
//!
//! Quantum and probabilistic programs are measured exactly once, after the
//! last level.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::functions::BooleanFunction;
use crate::program::{Assignment, Program, Semantics, Transition};

/// Largest `n` for which exhaustive enumeration of `2^n` inputs is allowed.
pub const ENUMERATION_LIMIT: usize = 24;

/// Slack applied to the bounded-error thresholds.
pub const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("input has {found} bits, program expects n = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operation needs a {expected} program, got a {found} one")]
    WrongSemantics { expected: &'static str, found: Semantics },
    #[error("exhaustive enumeration is limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("epsilon {0} outside (0, 1/2]")]
    Epsilon(f64),
    #[error("function has n = {function}, program has n = {program}")]
    ArityMismatch { function: usize, program: usize },
}

/// State after some number of steps.
#[derive(Clone, Debug, PartialEq)]
pub enum StateVector {
    Amplitudes(Vec<Complex64>),
    Distribution(Vec<f64>),
}

impl StateVector {
    /// Squared 2-norm for amplitudes, total mass for distributions.
    pub fn total(&self) -> f64 {
        match self {
            StateVector::Amplitudes(a) => a.iter().map(|c| c.norm_sqr()).sum(),
            StateVector::Distribution(d) => d.iter().sum(),
        }
    }

    /// Probability of observing one of `nodes`.
    pub fn mass_on(&self, nodes: &[usize]) -> f64 {
        match self {
            StateVector::Amplitudes(a) => nodes.iter().map(|&i| a[i].norm_sqr()).sum(),
            StateVector::Distribution(d) => nodes.iter().map(|&i| d[i]).sum(),
        }
    }
}

/// Output of [`evaluate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Outcome {
    Bit(bool),
    Probability(f64),
}

fn check_input(p: &Program, x: &Assignment) -> Result<(), EvalError> {
    if x.len() != p.n {
        return Err(EvalError::LengthMismatch { expected: p.n, found: x.len() });
    }
    Ok(())
}

fn require(p: &Program, expected: Semantics, name: &'static str) -> Result<(), EvalError> {
    if p.semantics != expected {
        return Err(EvalError::WrongSemantics { expected: name, found: p.semantics });
    }
    Ok(())
}

/// Follows the unique path of a deterministic program.
pub fn eval_det(p: &Program, x: &Assignment) -> Result<bool, EvalError> {
    require(p, Semantics::Deterministic, "deterministic")?;
    check_input(p, x)?;
    Ok(p.is_accepting(final_det_node(p, x)))
}

fn final_det_node(p: &Program, x: &Assignment) -> usize {
    p.levels.iter().fold(p.initial, |node, level| match level.transition(x.get(level.var)) {
        Transition::Deterministic(map) => map[node],
        other => panic!("deterministic program holds a {} transition", other.semantics()),
    })
}

/// Forward reachable-set propagation: accepts iff some consistent path ends
/// in an accepting sink.
pub fn eval_nondet(p: &Program, x: &Assignment) -> Result<bool, EvalError> {
    require(p, Semantics::Nondeterministic, "nondeterministic")?;
    check_input(p, x)?;
    let mut reach = vec![false; p.levels.first().map_or(0, |l| l.width_in)];
    reach[p.initial] = true;
    for level in &p.levels {
        let mut next = vec![false; level.width_out];
        match level.transition(x.get(level.var)) {
            Transition::Nondeterministic(edges) => {
                for &(from, to) in edges {
                    if reach[from] {
                        next[to] = true;
                    }
                }
            }
            other => panic!("nondeterministic program holds a {} transition", other.semantics()),
        }
        reach = next;
        if !reach.iter().any(|&r| r) {
            return Ok(false);
        }
    }
    Ok(p.accept.iter().any(|&a| reach[a]))
}

/// The sequence of `k*n + 1` states of a probabilistic or quantum program
/// on `x`, starting from the initial basis state.
pub fn state_trace(p: &Program, x: &Assignment) -> Result<Vec<StateVector>, EvalError> {
    check_input(p, x)?;
    let mut trace = Vec::with_capacity(p.levels.len() + 1);
    let mut state = initial_state(p)?;
    trace.push(state.clone());
    for level in &p.levels {
        state = apply(level.transition(x.get(level.var)), &state);
        trace.push(state.clone());
    }
    Ok(trace)
}

fn initial_state(p: &Program) -> Result<StateVector, EvalError> {
    let w = p.levels.first().map_or(0, |l| l.width_in);
    match p.semantics {
        Semantics::Quantum => {
            let mut a = vec![Complex64::new(0.0, 0.0); w];
            a[p.initial] = Complex64::new(1.0, 0.0);
            Ok(StateVector::Amplitudes(a))
        }
        Semantics::Probabilistic => {
            let mut d = vec![0.0; w];
            d[p.initial] = 1.0;
            Ok(StateVector::Distribution(d))
        }
        found => Err(EvalError::WrongSemantics { expected: "probabilistic or quantum", found }),
    }
}

fn apply(t: &Transition, state: &StateVector) -> StateVector {
    match (t, state) {
        (Transition::Unitary(g), StateVector::Amplitudes(a)) => StateVector::Amplitudes(g.mul_vec(a)),
        (Transition::Stochastic(m), StateVector::Distribution(d)) => {
            StateVector::Distribution(m.mul_vec(d))
        }
        (t, _) => panic!("{} transition does not match the state vector", t.semantics()),
    }
}

/// Acceptance probability of a probabilistic or quantum program:
/// `sum_{i in Accept} |v_i|^2` for amplitudes, the accepted mass for
/// distributions.
pub fn accept_prob(p: &Program, x: &Assignment) -> Result<f64, EvalError> {
    check_input(p, x)?;
    let mut state = initial_state(p)?;
    for level in &p.levels {
        state = apply(level.transition(x.get(level.var)), &state);
    }
    Ok(state.mass_on(&p.accept))
}

/// Runs whichever evaluator matches `p.semantics`.
pub fn evaluate(p: &Program, x: &Assignment) -> Result<Outcome, EvalError> {
    match p.semantics {
        Semantics::Deterministic => eval_det(p, x).map(Outcome::Bit),
        Semantics::Nondeterministic => eval_nondet(p, x).map(Outcome::Bit),
        Semantics::Probabilistic | Semantics::Quantum => accept_prob(p, x).map(Outcome::Probability),
    }
}

/// Acceptance probability under any semantics (0/1 for the classical ones).
pub fn acceptance(p: &Program, x: &Assignment) -> Result<f64, EvalError> {
    Ok(match evaluate(p, x)? {
        Outcome::Bit(b) => b as u8 as f64,
        Outcome::Probability(q) => q,
    })
}

/// Classifies an acceptance probability against the bounded-error
/// thresholds: `Some(true)` at or above `1/2 + eps`, `Some(false)` at or
/// below `1/2 - eps`, `None` in between (each with [`PROBABILITY_SLACK`]).
pub fn classify(prob: f64, eps: f64) -> Option<bool> {
    if prob >= 0.5 + eps - PROBABILITY_SLACK {
        Some(true)
    } else if prob <= 0.5 - eps + PROBABILITY_SLACK {
        Some(false)
    } else {
        None
    }
}

/// True iff `p` computes `f` with error margin `eps` on every one of the
/// `2^n` inputs.
pub fn computes_bounded_error<F>(p: &Program, f: &F, eps: f64) -> Result<bool, EvalError>
where
    F: BooleanFunction + ?Sized,
{
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(EvalError::Epsilon(eps));
    }
    if f.n() != p.n {
        return Err(EvalError::ArityMismatch { function: f.n(), program: p.n });
    }
    if p.n > ENUMERATION_LIMIT {
        return Err(EvalError::TooLarge { n: p.n, limit: ENUMERATION_LIMIT });
    }
    (0..1u64 << p.n)
        .into_par_iter()
        .map(|index| {
            let x = Assignment::from_index(p.n, index);
            let q = acceptance(p, &x)?;
            Ok(classify(q, eps) == Some(f.eval(&x)))
        })
        .try_reduce(|| true, |a, b| Ok(a && b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::TruthTable;
    use crate::program::{ComplexMatrix, Level, VariableOrder};

    fn quantum_one_var(g1: ComplexMatrix, accept: Vec<usize>) -> Program {
        Program {
            semantics: Semantics::Quantum,
            n: 1,
            k: 1,
            order: VariableOrder::identity(1),
            levels: vec![Level {
                var: 0,
                width_in: 2,
                width_out: 2,
                t0: Transition::Unitary(ComplexMatrix::identity(2)),
                t1: Transition::Unitary(g1),
            }],
            initial: 0,
            accept,
            epsilon: Some(0.5),
        }
    }

    fn rotation(theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        ComplexMatrix::from_row_major(
            2,
            2,
            vec![c, -s, s, c].into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }

    #[test]
    fn identity_quantum_program_accepts_initial() {
        let p = quantum_one_var(ComplexMatrix::identity(2), vec![0]);
        for b in [false, true] {
            let q = accept_prob(&p, &Assignment::new(vec![b])).unwrap();
            assert!((q - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_by_quarter_pi_gives_one_half() {
        let p = quantum_one_var(rotation(std::f64::consts::FRAC_PI_4), vec![1]);
        assert!(p.validate().is_valid());
        let q = accept_prob(&p, &Assignment::new(vec![true])).unwrap();
        assert!((q - 0.5).abs() < 1e-9, "{q}");
        assert_eq!(accept_prob(&p, &Assignment::new(vec![false])).unwrap(), 0.0);
    }

    fn projection_program(n: usize) -> Program {
        // x_1 routes to node 1, later levels are the identity.
        let mut levels = Vec::new();
        for var in 0..n {
            let (t0, t1, w_in) = if var == 0 {
                (vec![0], vec![1], 1)
            } else {
                (vec![0, 1], vec![0, 1], 2)
            };
            levels.push(Level {
                var,
                width_in: w_in,
                width_out: 2,
                t0: Transition::Deterministic(t0),
                t1: Transition::Deterministic(t1),
            });
        }
        Program {
            semantics: Semantics::Deterministic,
            n,
            k: 1,
            order: VariableOrder::identity(n),
            levels,
            initial: 0,
            accept: vec![1],
            epsilon: None,
        }
    }

    #[test]
    fn det_projection() {
        let p = projection_program(3);
        assert!(p.validate().is_valid());
        assert!(eval_det(&p, &Assignment::parse("100").unwrap()).unwrap());
        assert!(!eval_det(&p, &Assignment::parse("011").unwrap()).unwrap());
        assert_eq!(
            eval_det(&p, &Assignment::parse("10").unwrap()),
            Err(EvalError::LengthMismatch { expected: 3, found: 2 })
        );
    }

    fn nondet(edges0: Vec<(usize, usize)>, edges1: Vec<(usize, usize)>, accept: Vec<usize>) -> Program {
        Program {
            semantics: Semantics::Nondeterministic,
            n: 1,
            k: 1,
            order: VariableOrder::identity(1),
            levels: vec![Level {
                var: 0,
                width_in: 1,
                width_out: 2,
                t0: Transition::Nondeterministic(edges0),
                t1: Transition::Nondeterministic(edges1),
            }],
            initial: 0,
            accept,
            epsilon: None,
        }
    }

    #[test]
    fn nondet_dead_path_rejects() {
        let p = nondet(vec![], vec![], vec![0, 1]);
        assert!(!eval_nondet(&p, &Assignment::new(vec![true])).unwrap());
    }

    #[test]
    fn nondet_is_existential() {
        // Both bits guess between the two sinks; x = 1 also reaches the accepting one.
        let p = nondet(vec![(0, 0)], vec![(0, 0), (0, 1)], vec![1]);
        assert!(eval_nondet(&p, &Assignment::new(vec![true])).unwrap());
        assert!(!eval_nondet(&p, &Assignment::new(vec![false])).unwrap());
    }

    #[test]
    fn bounded_error_rejects_constant_vs_parity() {
        let p = quantum_one_var(ComplexMatrix::identity(2), vec![0]);
        let parity = TruthTable::from_fn(1, |x| x.get(0));
        assert!(!computes_bounded_error(&p, &parity, 0.1).unwrap());
        let constant = TruthTable::from_fn(1, |_| true);
        assert!(computes_bounded_error(&p, &constant, 0.5).unwrap());
        assert_eq!(computes_bounded_error(&p, &constant, 0.0), Err(EvalError::Epsilon(0.0)));
    }

    #[test]
    fn classify_thresholds() {
        assert_eq!(classify(1.0 - 1e-12, 0.5), Some(true));
        assert_eq!(classify(1e-12, 0.5), Some(false));
        assert_eq!(classify(0.5, 0.1), None);
        assert_eq!(classify(0.7, 0.2), Some(true));
    }
}
