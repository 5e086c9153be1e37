//! Subfunction counting and the bound calculators built on it.

mod bounds;
mod subfunctions;

use thiserror::Error;

use crate::functions::{BooleanFunction, TruthTable, TruthTableError};
use crate::program::{Program, Semantics};
use crate::semantics::{computes_bounded_error, EvalError};

pub use bounds::{bound_log2, check_chain, lower_log2, BoundError, BoundReport, Chain, Constants, LowerFn, Model};
pub use subfunctions::{
    count_subfunctions_at_cut, n_min, n_theta, profile, CountError, SubfunctionProfile, COUNT_LIMIT,
};

#[derive(Debug, Error)]
pub enum EmpiricalError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Table(#[from] TruthTableError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Model a program's semantics falls under.
pub fn model_of(semantics: Semantics) -> Model {
    match semantics {
        Semantics::Deterministic => Model::Det,
        Semantics::Nondeterministic => Model::Nondet,
        Semantics::Probabilistic => Model::Prob,
        Semantics::Quantum => Model::Quantum,
    }
}

/// Outcome of checking a program's subfunction bound against the function
/// it is meant to compute.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalReport {
    pub model: Model,
    pub k: usize,
    pub width: usize,
    /// Exact `N(f)`.
    pub n_min: usize,
    /// `N^theta(f)` for the program's own order.
    pub n_order: usize,
    /// The count the bound is compared with: `n_order` for quantum
    /// programs, `n_min` otherwise.
    pub compared: usize,
    pub bound_log2: f64,
    /// The bound as an integer saturated at `u128::MAX`, when its base and
    /// exponent are integers; the comparison is then exact. Otherwise it is
    /// done in `log2`.
    pub bound_exact: Option<u128>,
    /// Whether `p` computes `f` (with its error margin for bounded-error
    /// programs).
    pub computes: bool,
    pub holds: bool,
}

/// `base^exponent` saturated at `u128::MAX`, when both are nonnegative
/// integers. Saturation keeps `count <= bound` exact for any `usize` count.
fn saturating_power(base: f64, exponent: f64) -> Option<u128> {
    if base.fract() != 0.0 || exponent.fract() != 0.0 || base < 0.0 || exponent < 0.0 {
        return None;
    }
    let e = if exponent > f64::from(u32::MAX) { u32::MAX } else { exponent as u32 };
    Some((base as u128).saturating_pow(e))
}

/// The model bound written as `base^exponent`.
fn bound_power(model: Model, k: usize, w: usize, c: &Constants) -> (f64, f64) {
    let (k, w) = (k as f64, w as f64);
    match model {
        Model::Det => (w, (k - 1.0) * w + 1.0),
        Model::Nondet => (2.0, w * ((k - 1.0) * w + 1.0)),
        Model::Prob => (c.c1 * k * (c.c2 + w.log2() + k.log2()), (k + 1.0) * w * w),
        Model::Quantum => (w, c.c * (k * w).powi(2)),
    }
}

/// Computes `N(f)` exactly and compares it with the bound of `p`'s model at
/// `p`'s layer count and width.
pub fn empirical_bound_check<F>(p: &Program, f: &F, constants: &Constants) -> Result<EmpiricalReport, EmpiricalError>
where
    F: BooleanFunction + ?Sized,
{
    let table = TruthTable::of(f)?;
    let (n_min, _) = n_min(&table)?;
    let n_order = n_theta(&table, &p.order)?;
    let eps = if p.semantics.is_bounded_error() { p.epsilon.unwrap_or(0.5) } else { 0.5 };
    let computes = computes_bounded_error(p, f, eps)?;

    let model = model_of(p.semantics);
    let width = p.width();
    constants.check()?;
    let bound = bounds::raw_bound_log2(model, p.k as f64, width as f64, constants)?;
    let compared = if model == Model::Quantum { n_order } else { n_min };
    let (base, exponent) = bound_power(model, p.k, width, constants);
    let bound_exact = saturating_power(base, exponent);
    let holds = match bound_exact {
        Some(b) => compared as u128 <= b,
        None => (compared as f64).log2() <= bound,
    };
    Ok(EmpiricalReport {
        model,
        k: p.k,
        width,
        n_min,
        n_order,
        compared,
        bound_log2: bound,
        bound_exact,
        computes,
        holds,
    })
}
