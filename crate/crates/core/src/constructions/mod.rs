//! Explicit small-width programs for the hard functions, and compilers that
//! re-express a deterministic program in the other semantics.

mod mxpj;
mod saf;

use thiserror::Error;

use crate::functions::{MxpjError, MxpjParams, SafLayout, SafLayoutError};
use crate::program::{
    ComplexMatrix, Level, Program, RealMatrix, Semantics, Transition,
};

pub use mxpj::build_mxpj_id_obdd;
pub use saf::build_saf_2k_obdd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Mxpj(#[from] MxpjError),
    #[error(transparent)]
    Saf(#[from] SafLayoutError),
    #[error("construction reached width {width}, above the budget {budget}")]
    WidthBudget { width: usize, budget: usize },
    #[error("compilation needs a deterministic program, got a {0} one")]
    NotDeterministic(Semantics),
    #[error("level {level}, t{bit}: map is not a bijection, no permutation embedding exists")]
    NonReversible { level: usize, bit: u8 },
    #[error("unknown builder {0:?} (expected mxpj:k,d[,quantum|nondet|prob] or saf:k,w,n)")]
    UnknownBuilder(String),
}

fn deterministic_maps(p: &Program) -> Result<Vec<(&Level, &[usize], &[usize])>, BuildError> {
    if p.semantics != Semantics::Deterministic {
        return Err(BuildError::NotDeterministic(p.semantics));
    }
    Ok(p.levels
        .iter()
        .map(|l| match (&l.t0, &l.t1) {
            (Transition::Deterministic(a), Transition::Deterministic(b)) => (l, &a[..], &b[..]),
            _ => panic!("deterministic program holds a non-deterministic transition"),
        })
        .collect())
}

fn is_bijection(map: &[usize], width_out: usize) -> bool {
    if map.len() != width_out {
        return false;
    }
    let mut seen = vec![false; width_out];
    map.iter().all(|&t| t < width_out && !std::mem::replace(&mut seen[t], true))
}

/// Permutation embedding: each level map `T_b` becomes the permutation
/// matrix with `G[T_b(s)][s] = 1`, the initial node becomes the initial basis
/// state and the accepting sinks the accepting basis states. Outputs are
/// exact (acceptance probability 0 or 1), so `epsilon = 1/2`.
pub fn compile_to_quantum(p: &Program) -> Result<Program, BuildError> {
    let maps = deterministic_maps(p)?;
    let mut levels = Vec::with_capacity(maps.len());
    for (index, (level, t0, t1)) in maps.into_iter().enumerate() {
        let w = level.width_in;
        let mut gates = [ComplexMatrix::zeros(w, w), ComplexMatrix::zeros(w, w)];
        for (bit, map) in [t0, t1].into_iter().enumerate() {
            if level.width_out != w || !is_bijection(map, w) {
                return Err(BuildError::NonReversible { level: index, bit: bit as u8 });
            }
            for (s, &t) in map.iter().enumerate() {
                gates[bit].set(t, s, num_complex::Complex64::new(1.0, 0.0));
            }
        }
        let [g0, g1] = gates;
        levels.push(Level {
            var: level.var,
            width_in: w,
            width_out: w,
            t0: Transition::Unitary(g0),
            t1: Transition::Unitary(g1),
        });
    }
    Ok(Program {
        semantics: Semantics::Quantum,
        levels,
        epsilon: Some(0.5),
        ..p.clone()
    })
}

/// Graph-of-function relation for every level map.
pub fn compile_to_nondet(p: &Program) -> Result<Program, BuildError> {
    let levels = deterministic_maps(p)?
        .into_iter()
        .map(|(level, t0, t1)| {
            let rel = |m: &[usize]| Transition::Nondeterministic(m.iter().copied().enumerate().collect());
            Level { t0: rel(t0), t1: rel(t1), ..level.clone() }
        })
        .collect();
    Ok(Program {
        semantics: Semantics::Nondeterministic,
        levels,
        epsilon: None,
        ..p.clone()
    })
}

/// 0/1 column-stochastic matrices, `M[T_b(s)][s] = 1`.
pub fn compile_to_prob(p: &Program) -> Result<Program, BuildError> {
    let levels = deterministic_maps(p)?
        .into_iter()
        .map(|(level, t0, t1)| {
            let mat = |m: &[usize]| {
                let mut out = RealMatrix::zeros(level.width_out, level.width_in);
                for (s, &t) in m.iter().enumerate() {
                    out.set(t, s, 1.0);
                }
                Transition::Stochastic(out)
            };
            Level { t0: mat(t0), t1: mat(t1), ..level.clone() }
        })
        .collect();
    Ok(Program {
        semantics: Semantics::Probabilistic,
        levels,
        epsilon: Some(0.5),
        ..p.clone()
    })
}

/// Target semantics of a builder descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    Deterministic,
    Nondeterministic,
    Probabilistic,
    Quantum,
}

/// A builder selected by `mxpj:k,d[,quantum|nondet|prob]` or `saf:k,w,n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuilderDescriptor {
    Mxpj { params: MxpjParams, embedding: Embedding },
    Saf(SafLayout),
}

impl BuilderDescriptor {
    /// With `relaxed`, SAF layouts only need one value bit per block.
    pub fn parse(s: &str, relaxed: bool) -> Result<Self, BuildError> {
        let unknown = || BuildError::UnknownBuilder(s.to_string());
        let (name, args) = s.split_once(':').ok_or_else(unknown)?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let ints = |xs: &[&str]| -> Result<Vec<usize>, BuildError> {
            xs.iter().map(|a| a.parse().map_err(|_| unknown())).collect()
        };
        match name {
            "mxpj" => {
                let (nums, tail) = match parts.len() {
                    2 => (ints(&parts)?, None),
                    3 => (ints(&parts[..2])?, Some(parts[2])),
                    _ => return Err(unknown()),
                };
                let embedding = match tail {
                    None | Some("det") => Embedding::Deterministic,
                    Some("quantum") => Embedding::Quantum,
                    Some("nondet") => Embedding::Nondeterministic,
                    Some("prob") => Embedding::Probabilistic,
                    Some(_) => return Err(unknown()),
                };
                Ok(BuilderDescriptor::Mxpj { params: MxpjParams::new(nums[0], nums[1])?, embedding })
            }
            "saf" if parts.len() == 3 => {
                let v = ints(&parts)?;
                let layout = if relaxed {
                    SafLayout::without_size_bound(v[0], v[1], v[2])?
                } else {
                    SafLayout::new(v[0], v[1], v[2])?
                };
                Ok(BuilderDescriptor::Saf(layout))
            }
            _ => Err(unknown()),
        }
    }

    pub fn build(&self) -> Result<Program, BuildError> {
        match self {
            BuilderDescriptor::Mxpj { params, embedding } => {
                let det = build_mxpj_id_obdd(params.k(), params.d())?;
                match embedding {
                    Embedding::Deterministic => Ok(det),
                    Embedding::Nondeterministic => compile_to_nondet(&det),
                    Embedding::Probabilistic => compile_to_prob(&det),
                    Embedding::Quantum => compile_to_quantum(&det),
                }
            }
            BuilderDescriptor::Saf(layout) => build_saf_2k_obdd(layout),
        }
    }
}
