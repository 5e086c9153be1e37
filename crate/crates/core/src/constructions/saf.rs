use std::collections::{BTreeSet, HashMap};

use crate::functions::SafLayout;
use crate::program::{Level, Program, Semantics, Transition, VariableOrder};

use super::BuildError;

/// Control state of the SAF program between two reads.
///
/// Within a layer the program looks up one block. While the address bits of
/// a block are read it tracks the lookup target and the set of address
/// values (a bit mask over the candidate list of the current field) still
/// consistent with the bits seen. A field value reduced mod `m` with
/// `m <= 2^bits < 2m` has at most two preimages, so the mask has at most
/// two bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Phase {
    Dead,
    /// Lookup finished in this layer with the given block value.
    Done(usize),
    /// Reading an address field of the current block.
    Search { target: usize, alive: u8 },
    /// Current block does not match; keep looking for `target` afterwards.
    Skip(usize),
    /// Current block matched; value-bit sum so far.
    Accum(usize),
}

struct Machine<'a> {
    layout: &'a SafLayout,
    n: usize,
}

/// Field values in `0..2^bits` reducing to `target` mod `modulus`.
fn preimages(bits: usize, modulus: usize, target: usize) -> Vec<usize> {
    (0..1usize << bits).filter(|c| c % modulus == target).collect()
}

fn full_mask(len: usize) -> u8 {
    debug_assert!(len <= 8);
    ((1u16 << len) - 1) as u8
}

impl Machine<'_> {
    fn step_of(&self, layer: usize) -> usize {
        layer / 2
    }

    fn k_candidates(&self, layer: usize) -> Vec<usize> {
        let l = self.layout;
        preimages(l.step_address_bits(), l.k(), self.step_of(layer))
    }

    fn w_candidates(&self, target: usize) -> Vec<usize> {
        let l = self.layout;
        preimages(l.slot_address_bits(), 2 * l.w(), target)
    }

    /// State at the first bit of a block while looking for `target`.
    fn block_entry(&self, layer: usize, target: usize) -> Phase {
        let cands = if self.layout.step_address_bits() > 0 {
            self.k_candidates(layer)
        } else {
            self.w_candidates(target)
        };
        if cands.is_empty() {
            Phase::Skip(target)
        } else {
            Phase::Search { target, alive: full_mask(cands.len()) }
        }
    }

    /// Lookup target of the layer after `layer` once it found `value`.
    fn next_target(&self, layer: usize, value: usize) -> usize {
        if layer.is_multiple_of(2) {
            value + self.layout.w()
        } else {
            value
        }
    }

    /// State after reading bit `bit` at position `pos` of layer `layer`,
    /// normalized for the following position of the same layer.
    fn advance(&self, layer: usize, pos: usize, state: Phase, bit: bool) -> Phase {
        let l = self.layout;
        if pos >= l.covered_len() {
            return state;
        }
        let block = pos / l.block_len();
        let r = pos % l.block_len();
        let last_in_block = r + 1 == l.block_len();
        let k_bits = l.step_address_bits();

        let after = match state {
            Phase::Dead | Phase::Done(_) => state,
            Phase::Skip(_) => state,
            Phase::Accum(s) => Phase::Accum((s + bit as usize) % l.w()),
            Phase::Search { target, alive } => {
                let (cands, field_bit, field_len) = if r < k_bits {
                    (self.k_candidates(layer), r, k_bits)
                } else {
                    (self.w_candidates(target), r - k_bits, l.slot_address_bits())
                };
                let alive = cands
                    .iter()
                    .enumerate()
                    .filter(|&(i, &c)| alive & (1 << i) != 0 && ((c >> field_bit) & 1 == 1) == bit)
                    .fold(0u8, |m, (i, _)| m | (1 << i));
                if alive == 0 {
                    Phase::Skip(target)
                } else if field_bit + 1 < field_len {
                    Phase::Search { target, alive }
                } else if r < k_bits {
                    // Step field matched; start on the slot field.
                    let w = self.w_candidates(target);
                    if w.is_empty() {
                        Phase::Skip(target)
                    } else {
                        Phase::Search { target, alive: full_mask(w.len()) }
                    }
                } else {
                    Phase::Accum(0)
                }
            }
        };

        if !last_in_block {
            return after;
        }
        match after {
            Phase::Accum(s) => Phase::Done(s),
            Phase::Skip(target) if block + 1 < l.block_count() => self.block_entry(layer, target),
            other => other,
        }
    }

    /// Maps the state at the end of `layer` to the entry state of the next one.
    fn cross_layer(&self, layer: usize, state: Phase) -> Phase {
        match state {
            Phase::Done(v) => self.block_entry(layer + 1, self.next_target(layer, v)),
            _ => Phase::Dead,
        }
    }
}

/// Deterministic `2k`-layer program in the natural order computing
/// `SAF_{k,w}` on the given layout.
///
/// Layer `2t` looks up `Step1(t)` from the pointer held since the previous
/// layer, layer `2t+1` looks up `Step2(t)`. A layer holds one of: the
/// target while reading address bits (matching or skipping), the running
/// value sum of a matched block, a finished value, or the dead state for
/// `-1`. The last level maps into two sinks (reject, accept).
///
/// States are enumerated level by level from the initial one, so only
/// reachable states get nodes. Fails with [`BuildError::WidthBudget`] if
/// the result would be wider than `3w + 1`, which can only happen when an
/// address field aliases (neither `k` nor `2w` is a power of two and both
/// preimages of a target diverge early).
pub fn build_saf_2k_obdd(layout: &SafLayout) -> Result<Program, BuildError> {
    let n = layout.n_vars();
    let m = Machine { layout, n };
    let layers = 2 * layout.k();
    let budget = 3 * layout.w() + 1;

    let mut current: Vec<Phase> = vec![m.block_entry(0, 0)];
    let mut levels = Vec::with_capacity(layers * n);
    let mut max_width = 1;

    for layer in 0..layers {
        for pos in 0..m.n {
            let last_level = layer + 1 == layers && pos + 1 == m.n;
            let step = |state: Phase, bit: bool| {
                let s = m.advance(layer, pos, state, bit);
                if pos + 1 == m.n && !last_level {
                    m.cross_layer(layer, s)
                } else {
                    s
                }
            };

            let (t0, t1, width_out, next) = if last_level {
                let sink = |s: Phase| match s {
                    Phase::Done(v) if v > 0 => 1,
                    _ => 0,
                };
                let t0: Vec<usize> = current.iter().map(|&s| sink(step(s, false))).collect();
                let t1: Vec<usize> = current.iter().map(|&s| sink(step(s, true))).collect();
                (t0, t1, 2, Vec::new())
            } else {
                let succ0: Vec<Phase> = current.iter().map(|&s| step(s, false)).collect();
                let succ1: Vec<Phase> = current.iter().map(|&s| step(s, true)).collect();
                let next: Vec<Phase> = succ0
                    .iter()
                    .chain(&succ1)
                    .copied()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let index: HashMap<Phase, usize> =
                    next.iter().enumerate().map(|(i, &s)| (s, i)).collect();
                let t0 = succ0.iter().map(|s| index[s]).collect();
                let t1 = succ1.iter().map(|s| index[s]).collect();
                (t0, t1, next.len(), next)
            };

            max_width = max_width.max(current.len()).max(width_out);
            if max_width > budget {
                return Err(BuildError::WidthBudget { width: max_width, budget });
            }
            levels.push(Level {
                var: pos,
                width_in: current.len(),
                width_out,
                t0: Transition::Deterministic(t0),
                t1: Transition::Deterministic(t1),
            });
            current = next;
        }
    }

    Ok(Program {
        semantics: Semantics::Deterministic,
        n,
        k: layers,
        order: VariableOrder::identity(n),
        levels,
        initial: 0,
        accept: vec![1],
        epsilon: None,
    })
}
