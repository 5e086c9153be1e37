//! Matrix XOR Pointer Jumping `MXPJ_{2k,d}`.
//!
//! The input encodes `2k` maps on `{0..d-1}` in the order
//! `f_{A,1}, .., f_{A,k}, f_{B,1}, .., f_{B,k}`, each as `d` blocks of
//! `t = log2 d` bits (LSB first); block `j` of `f_{A,i}` holds `f_{A,i}(j)`.
//!
//! Starting from `f^(-1) = 0` and `f^(0) = v_0 = 0`, step `j = 1..2k` computes
//! `f^(j) = f_j(f^(j-1)) xor f^(j-2)` where odd steps use `f_{A,(j+1)/2}` and
//! even steps `f_{B,j/2}`. The output is the parity of the bits of `f^(2k)`.

use thiserror::Error;

use super::BooleanFunction;
use crate::program::Assignment;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MxpjError {
    #[error("d must be a power of two >= 2 (got d = {0})")]
    NotPowerOfTwo(usize),
    #[error("k must be at least 1")]
    ZeroLayers,
    #[error("input has {found} bits, MXPJ_{{2k,d}} with k = {k}, d = {d} needs {expected}")]
    Length { k: usize, d: usize, expected: usize, found: usize },
    #[error("map {name} has {found} entries or a value >= d = {d}")]
    BadMap { name: String, d: usize, found: usize },
}

/// Parameters `(k, d)`; also the [`BooleanFunction`] `MXPJ_{2k,d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MxpjParams {
    k: usize,
    d: usize,
    t: usize,
}

impl MxpjParams {
    pub fn new(k: usize, d: usize) -> Result<Self, MxpjError> {
        if d < 2 || !d.is_power_of_two() {
            return Err(MxpjError::NotPowerOfTwo(d));
        }
        if k == 0 {
            return Err(MxpjError::ZeroLayers);
        }
        Ok(Self { k, d, t: d.trailing_zeros() as usize })
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn d(&self) -> usize {
        self.d
    }
    /// Bits per block.
    pub fn block_bits(&self) -> usize {
        self.t
    }
    /// `2 k d log2 d`.
    pub fn n(&self) -> usize {
        2 * self.k * self.d * self.t
    }

    /// First bit of the block holding `f_{A,layer+1}(j)` (`half = 0`) or
    /// `f_{B,layer+1}(j)` (`half = 1`).
    pub fn block_start(&self, half: usize, layer: usize, j: usize) -> usize {
        ((half * self.k + layer) * self.d + j) * self.t
    }

    /// Inverse of [`MxpjParams::block_start`] for any bit position:
    /// `(half, layer, j, bit)`.
    pub fn locate(&self, pos: usize) -> (usize, usize, usize, usize) {
        let bit = pos % self.t;
        let block = pos / self.t;
        let j = block % self.d;
        let map = block / self.d;
        (map / self.k, map % self.k, j, bit)
    }

    fn read(&self, x: &Assignment, half: usize, layer: usize, j: usize) -> usize {
        let s = self.block_start(half, layer, j);
        (0..self.t).fold(0, |acc, b| acc | ((x.get(s + b) as usize) << b))
    }

    /// `f^(2k)` read straight from the encoded input.
    pub fn final_vertex(&self, x: &Assignment) -> usize {
        let (mut prev, mut cur) = (0usize, 0usize);
        for step in 1..=2 * self.k {
            let half = (step + 1) % 2;
            let layer = (step - 1) / 2;
            let next = self.read(x, half, layer, cur) ^ prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

impl BooleanFunction for MxpjParams {
    fn n(&self) -> usize {
        MxpjParams::n(self)
    }
    fn eval(&self, x: &Assignment) -> bool {
        vertex_parity(self.final_vertex(x))
    }
}

/// Parity of the binary representation of `v`.
pub fn vertex_parity(v: usize) -> bool {
    v.count_ones() % 2 == 1
}

/// Plain pointer jumping: `steps` alternating applications of `fa` and `fb`
/// starting at vertex 0, without the XOR part.
pub fn pointer_jump(fa: &[usize], fb: &[usize], steps: usize) -> usize {
    (0..steps).fold(0, |v, s| if s % 2 == 0 { fa[v] } else { fb[v] })
}

/// Explicit maps of one MXPJ input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MxpjInstance {
    params: MxpjParams,
    fa: Vec<Vec<usize>>,
    fb: Vec<Vec<usize>>,
}

impl MxpjInstance {
    pub fn new(d: usize, fa: Vec<Vec<usize>>, fb: Vec<Vec<usize>>) -> Result<Self, MxpjError> {
        let params = MxpjParams::new(fa.len(), d)?;
        if fb.len() != fa.len() {
            return Err(MxpjError::BadMap { name: "f_B".into(), d, found: fb.len() });
        }
        for (name, maps) in [("A", &fa), ("B", &fb)] {
            for (i, m) in maps.iter().enumerate() {
                if m.len() != d || m.iter().any(|&v| v >= d) {
                    return Err(MxpjError::BadMap {
                        name: format!("f_{{{name},{}}}", i + 1),
                        d,
                        found: m.len(),
                    });
                }
            }
        }
        Ok(Self { params, fa, fb })
    }

    pub fn params(&self) -> MxpjParams {
        self.params
    }

    /// `f_{A,i}` for `i` in `1..=k`.
    pub fn fa(&self, i: usize) -> &[usize] {
        &self.fa[i - 1]
    }

    /// `f_{B,i}` for `i` in `1..=k`.
    pub fn fb(&self, i: usize) -> &[usize] {
        &self.fb[i - 1]
    }

    pub fn encode(&self) -> Assignment {
        let p = self.params;
        let mut x = Assignment::zeros(p.n());
        for (half, maps) in [&self.fa, &self.fb].into_iter().enumerate() {
            for (layer, map) in maps.iter().enumerate() {
                for (j, &v) in map.iter().enumerate() {
                    let s = p.block_start(half, layer, j);
                    for b in 0..p.t {
                        x.set(s + b, (v >> b) & 1 == 1);
                    }
                }
            }
        }
        x
    }

    pub fn decode(x: &Assignment, k: usize, d: usize) -> Result<Self, MxpjError> {
        let params = MxpjParams::new(k, d)?;
        if x.len() != params.n() {
            return Err(MxpjError::Length { k, d, expected: params.n(), found: x.len() });
        }
        let maps = |half| -> Vec<Vec<usize>> {
            (0..k)
                .map(|layer| (0..d).map(|j| params.read(x, half, layer, j)).collect())
                .collect()
        };
        Ok(Self { params, fa: maps(0), fb: maps(1) })
    }

    /// `f_j` for `j` in `1..=2k`.
    fn step_map(&self, j: usize) -> &[usize] {
        let i = j.div_ceil(2);
        if j % 2 == 1 {
            self.fa(i)
        } else {
            self.fb(i)
        }
    }

    /// `f^(2k)` by the XOR recurrence.
    pub fn final_vertex(&self) -> usize {
        let (mut prev, mut cur) = (0usize, 0usize);
        for j in 1..=2 * self.params.k {
            let next = self.step_map(j)[cur] ^ prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `MXPJ_{2k,d}` on this instance.
    pub fn mxpj_eval(&self) -> bool {
        vertex_parity(self.final_vertex())
    }

    /// Plain pointer jumping over the first pair of maps.
    pub fn pj_eval(&self, steps: usize) -> usize {
        pointer_jump(self.fa(1), self.fb(1), steps)
    }
}
