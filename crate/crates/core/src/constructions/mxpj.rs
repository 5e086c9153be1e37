use crate::functions::{vertex_parity, MxpjParams};
use crate::program::{Level, Program, Semantics, Transition, VariableOrder};

use super::BuildError;

/// Node index of the pair `(u, v)`.
#[inline]
pub(crate) fn pair_node(d: usize, u: usize, v: usize) -> usize {
    u * d + v
}

/// Deterministic `k`-layer program in the natural order computing
/// `MXPJ_{2k,d}` with width `d^2`.
///
/// Layer `i` keeps a pair `(u, v) = (f^(2i-3), f^(2i-2))`, starting from
/// `(0, 0)`. While reading the `f_{A,i}` part it XORs the bits of block
/// `v` into `u`, which yields `f^(2i-1)`; while reading `f_{B,i}` it XORs
/// block `u` into `v`, which yields `f^(2i)`. All other blocks are skipped.
/// The pair left after layer `i` is exactly the one layer `i+1` expects, so
/// layers chain without relabeling. The sinks are the `d^2` pairs; those
/// whose `v` has odd parity accept.
///
/// Every level map is an involution on the pairs (identity, or flipping one
/// bit of `u` or `v` under a condition on the other coordinate), so the
/// program embeds into a quantum one by permutation matrices.
pub fn build_mxpj_id_obdd(k: usize, d: usize) -> Result<Program, BuildError> {
    let params = MxpjParams::new(k, d)?;
    let n = params.n();
    let width = d * d;
    let identity: Vec<usize> = (0..width).collect();

    let mut levels = Vec::with_capacity(k * n);
    for layer in 0..k {
        for pos in 0..n {
            let (half, block_layer, j, bit) = params.locate(pos);
            let t1 = if block_layer == layer {
                let mut map = identity.clone();
                for u in 0..d {
                    for v in 0..d {
                        let (nu, nv) = match half {
                            0 if v == j => (u ^ (1 << bit), v),
                            1 if u == j => (u, v ^ (1 << bit)),
                            _ => (u, v),
                        };
                        map[pair_node(d, u, v)] = pair_node(d, nu, nv);
                    }
                }
                map
            } else {
                identity.clone()
            };
            levels.push(Level {
                var: pos,
                width_in: width,
                width_out: width,
                t0: Transition::Deterministic(identity.clone()),
                t1: Transition::Deterministic(t1),
            });
        }
    }

    let accept = (0..d)
        .flat_map(|u| (0..d).map(move |v| (u, v)))
        .filter(|&(_, v)| vertex_parity(v))
        .map(|(u, v)| pair_node(d, u, v))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();

    Ok(Program {
        semantics: Semantics::Deterministic,
        n,
        k,
        order: VariableOrder::identity(n),
        levels,
        initial: pair_node(d, 0, 0),
        accept,
        epsilon: None,
    })
}
