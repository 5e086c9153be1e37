//! Leveled, oblivious, k-layer branching programs.
//!
//! A [`Program`] over `n` variables with `k` layers consists of `k * n`
//! [`Level`]s. Layer `i` reads every variable exactly once, in the order
//! given by the program's [`VariableOrder`]; all layers share that order.
//! Level `j` maps the nodes of level `j` to the nodes of level `j + 1`; the
//! nodes after the final level are the sinks, and `accept` selects the
//! accepting ones.
//!
//! Node and variable indices are 0-based in the API. The JSON file format
//! (see [`crate::format`]) uses 1-based indices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Frobenius tolerance for `U†U = I`.
pub const UNITARY_TOLERANCE: f64 = 1e-9;
/// Per-column tolerance for stochastic matrices.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// An input `x_1 .. x_n`, stored 0-based (`bits[0]` is `x_1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseAssignmentError {
    #[error("invalid character {ch:?} at position {position} (expected '0' or '1')")]
    InvalidChar { position: usize, ch: char },
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    /// Decodes the integer encoding used for exhaustive enumeration: bit `i`
    /// of `index` is variable `x_{i+1}`.
    pub fn from_index(n: usize, index: u64) -> Self {
        debug_assert!(n <= 64);
        Self {
            bits: (0..n).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Inverse of [`Assignment::from_index`]. Panics if `n > 64`.
    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64, "assignment too long for u64 index");
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    /// Parses an ASCII `0`/`1` string; character `i` is `x_{i+1}`.
    /// Surrounding whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self, ParseAssignmentError> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseAssignmentError::InvalidChar { position, ch }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of the 0-based variable `var`.
    #[inline]
    pub fn get(&self, var: usize) -> bool {
        self.bits[var]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.bits[var] = value;
    }

    pub fn flip(&mut self, var: usize) {
        self.bits[var] = !self.bits[var];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Self::new(bits)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("variable index {var} out of range for n = {n}")]
    OutOfRange { var: usize, n: usize },
    #[error("variable {var} appears more than once")]
    Duplicate { var: usize },
}

/// A permutation `(j_1, .., j_n)` of the variables, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableOrder {
    perm: Vec<usize>,
    position: Vec<usize>,
}

impl VariableOrder {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn new(perm: Vec<usize>) -> Result<Self, OrderError> {
        let n = perm.len();
        let mut position = vec![usize::MAX; n];
        for (pos, &var) in perm.iter().enumerate() {
            if var >= n {
                return Err(OrderError::OutOfRange { var, n });
            }
            if position[var] != usize::MAX {
                return Err(OrderError::Duplicate { var });
            }
            position[var] = pos;
        }
        Ok(Self { perm, position })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Variable read at position `pos`.
    #[inline]
    pub fn var_at(&self, pos: usize) -> usize {
        self.perm[pos]
    }

    /// Position of `var` in the order (the inverse permutation).
    #[inline]
    pub fn position_of(&self, var: usize) -> usize {
        self.position[var]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = DenseMatrix<f64>;
pub type ComplexMatrix = DenseMatrix<Complex64>;

impl<T: Copy + Default> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::default(); rows * cols],
        }
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T> DenseMatrix<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    /// Left multiplication `M v` of a column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::default(), |acc, (&m, &x)| acc + m * x)
            })
            .collect()
    }
}

impl ComplexMatrix {
    pub fn identity(w: usize) -> Self {
        let mut m = Self::zeros(w, w);
        for i in 0..w {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Frobenius norm of `U†U - I`; `None` if the matrix is not square.
    pub fn unitarity_deviation(&self) -> Option<f64> {
        if self.rows != self.cols {
            return None;
        }
        let w = self.rows;
        let mut sum = 0.0;
        for i in 0..w {
            for j in 0..w {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..w {
                    acc += self.get(r, i).conj() * self.get(r, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                sum += acc.norm_sqr();
            }
        }
        Some(sum.sqrt())
    }
}

/// Program semantics; also the `semantics` tag of the file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Deterministic,
    Nondeterministic,
    Probabilistic,
    Quantum,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::Deterministic => "deterministic",
            Semantics::Nondeterministic => "nondeterministic",
            Semantics::Probabilistic => "probabilistic",
            Semantics::Quantum => "quantum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "deterministic" => Some(Semantics::Deterministic),
            "nondeterministic" => Some(Semantics::Nondeterministic),
            "probabilistic" => Some(Semantics::Probabilistic),
            "quantum" => Some(Semantics::Quantum),
            _ => None,
        }
    }

    /// Probabilistic and quantum programs carry an error margin.
    pub fn is_bounded_error(self) -> bool {
        matches!(self, Semantics::Probabilistic | Semantics::Quantum)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transition taken on one value of the level's variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Transition {
    /// `map[from] = to`.
    Deterministic(Vec<usize>),
    /// Edges `(from, to)`.
    Nondeterministic(Vec<(usize, usize)>),
    /// `width_out x width_in`, column-stochastic, left-applied.
    Stochastic(RealMatrix),
    /// `w x w` unitary, left-applied.
    Unitary(ComplexMatrix),
}

impl Transition {
    pub fn semantics(&self) -> Semantics {
        match self {
            Transition::Deterministic(_) => Semantics::Deterministic,
            Transition::Nondeterministic(_) => Semantics::Nondeterministic,
            Transition::Stochastic(_) => Semantics::Probabilistic,
            Transition::Unitary(_) => Semantics::Quantum,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    /// 0-based variable read at this level.
    pub var: usize,
    pub width_in: usize,
    pub width_out: usize,
    pub t0: Transition,
    pub t1: Transition,
}

impl Level {
    #[inline]
    pub fn transition(&self, bit: bool) -> &Transition {
        if bit {
            &self.t1
        } else {
            &self.t0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub semantics: Semantics,
    pub n: usize,
    pub k: usize,
    pub order: VariableOrder,
    pub levels: Vec<Level>,
    /// Start node (basis state `q_0` for quantum programs).
    pub initial: usize,
    /// Accepting sink nodes, sorted and deduplicated.
    pub accept: Vec<usize>,
    /// Error margin for probabilistic and quantum programs.
    pub epsilon: Option<f64>,
}

impl Program {
    /// Maximum node count over all levels, the sink level included.
    pub fn width(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.width_in)
            .chain(self.levels.last().map(|l| l.width_out))
            .max()
            .unwrap_or(0)
    }

    /// Number of sink nodes.
    pub fn sink_width(&self) -> usize {
        self.levels.last().map_or(0, |l| l.width_out)
    }

    pub fn is_accepting(&self, node: usize) -> bool {
        self.accept.binary_search(&node).is_ok()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// One violated structural invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptyProgram { n: usize, k: usize },
    OrderLength { order_len: usize, n: usize },
    LevelCount { expected: usize, found: usize },
    VariableOutOfRange { level: usize, var: usize },
    OrderMismatch { level: usize, layer: usize, expected_var: usize, found_var: usize },
    ReadTwice { layer: usize, var: usize },
    ZeroWidth { level: usize },
    WidthChain { level: usize, width_out: usize, next_width_in: usize },
    TransitionKind { level: usize, bit: u8, found: Semantics, expected: Semantics },
    Dimension { level: usize, bit: u8, detail: String },
    TargetOutOfRange { level: usize, bit: u8, from: usize, to: usize },
    NegativeEntry { level: usize, bit: u8, row: usize, col: usize, value: f64 },
    ColumnSum { level: usize, bit: u8, col: usize, sum: f64 },
    NotUnitary { level: usize, bit: u8, deviation: f64 },
    NonConstantWidth { level: usize, width: usize, expected: usize },
    InitialOutOfRange { initial: usize, width: usize },
    AcceptOutOfRange { node: usize, sinks: usize },
    AcceptNotSorted,
    MissingEpsilon,
    EpsilonOutOfRange { epsilon: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyProgram { n, k } => write!(f, "program needs n >= 1 and k >= 1 (n = {n}, k = {k})"),
            OrderLength { order_len, n } => {
                write!(f, "order has {order_len} entries, expected n = {n}")
            }
            LevelCount { expected, found } => {
                write!(f, "level count {found}, expected k*n = {expected}")
            }
            VariableOutOfRange { level, var } => {
                write!(f, "level {level}: variable {} out of range", var + 1)
            }
            OrderMismatch { level, layer, expected_var, found_var } => write!(
                f,
                "level {level} (layer {}): reads x{} but the shared order requires x{} (all layers must use the same order)",
                layer + 1,
                found_var + 1,
                expected_var + 1
            ),
            ReadTwice { layer, var } => {
                write!(f, "layer {}: variable x{} read more than once", layer + 1, var + 1)
            }
            ZeroWidth { level } => write!(f, "level {level}: width must be positive"),
            WidthChain { level, width_out, next_width_in } => write!(
                f,
                "level {level}: width_out {width_out} differs from width_in {next_width_in} of the next level"
            ),
            TransitionKind { level, bit, found, expected } => write!(
                f,
                "level {level}, t{bit}: {found} transition in a {expected} program"
            ),
            Dimension { level, bit, detail } => write!(f, "level {level}, t{bit}: {detail}"),
            TargetOutOfRange { level, bit, from, to } => write!(
                f,
                "level {level}, t{bit}: edge {} -> {} leaves the level bounds",
                from + 1,
                to + 1
            ),
            NegativeEntry { level, bit, row, col, value } => write!(
                f,
                "level {level}, t{bit}: negative entry {value} at ({}, {})",
                row + 1,
                col + 1
            ),
            ColumnSum { level, bit, col, sum } => write!(
                f,
                "level {level}, t{bit}: column {} sums to {sum}, not 1",
                col + 1
            ),
            NotUnitary { level, bit, deviation } => write!(
                f,
                "level {level}, t{bit}: not unitary (|U^H U - I|_F = {deviation:e})"
            ),
            NonConstantWidth { level, width, expected } => write!(
                f,
                "level {level}: quantum programs need constant width {expected}, found {width}"
            ),
            InitialOutOfRange { initial, width } => {
                write!(f, "initial node {} outside first level of width {width}", initial + 1)
            }
            AcceptOutOfRange { node, sinks } => {
                write!(f, "accepting node {} outside sink level of width {sinks}", node + 1)
            }
            AcceptNotSorted => write!(f, "accept set must be sorted and free of duplicates"),
            MissingEpsilon => write!(f, "bounded-error program without epsilon"),
            EpsilonOutOfRange { epsilon } => {
                write!(f, "epsilon {epsilon} outside (0, 1/2]")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid");
        }
        writeln!(f, "invalid: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of `p` and collects the violations.
pub fn validate(p: &Program) -> ValidationReport {
    let mut out = Vec::new();
    if p.n == 0 || p.k == 0 {
        out.push(Violation::EmptyProgram { n: p.n, k: p.k });
    }
    if p.order.len() != p.n {
        out.push(Violation::OrderLength { order_len: p.order.len(), n: p.n });
    }
    let expected = p.k * p.n;
    if p.levels.len() != expected {
        out.push(Violation::LevelCount { expected, found: p.levels.len() });
    }

    // Order consistency and read-once per layer.
    if p.n > 0 {
        for (layer, chunk) in p.levels.chunks(p.n).enumerate() {
            let mut seen = vec![false; p.n];
            for (pos, level) in chunk.iter().enumerate() {
                let index = layer * p.n + pos;
                if level.var >= p.n {
                    out.push(Violation::VariableOutOfRange { level: index, var: level.var });
                    continue;
                }
                if seen[level.var] {
                    out.push(Violation::ReadTwice { layer, var: level.var });
                }
                seen[level.var] = true;
                if pos < p.order.len() && p.order.var_at(pos) != level.var {
                    out.push(Violation::OrderMismatch {
                        level: index,
                        layer,
                        expected_var: p.order.var_at(pos),
                        found_var: level.var,
                    });
                }
            }
        }
    }

    for (index, level) in p.levels.iter().enumerate() {
        if level.width_in == 0 || level.width_out == 0 {
            out.push(Violation::ZeroWidth { level: index });
        }
        if let Some(next) = p.levels.get(index + 1) {
            if next.width_in != level.width_out {
                out.push(Violation::WidthChain {
                    level: index,
                    width_out: level.width_out,
                    next_width_in: next.width_in,
                });
            }
        }
        for (bit, t) in [(0u8, &level.t0), (1u8, &level.t1)] {
            check_transition(p.semantics, index, bit, level, t, &mut out);
        }
    }

    if p.semantics == Semantics::Quantum {
        if let Some(first) = p.levels.first() {
            let w = first.width_in;
            for (index, level) in p.levels.iter().enumerate() {
                for width in [level.width_in, level.width_out] {
                    if width != w {
                        out.push(Violation::NonConstantWidth { level: index, width, expected: w });
                        break;
                    }
                }
            }
        }
    }

    if let Some(first) = p.levels.first() {
        if p.initial >= first.width_in {
            out.push(Violation::InitialOutOfRange { initial: p.initial, width: first.width_in });
        }
    }
    let sinks = p.sink_width();
    for &node in &p.accept {
        if node >= sinks {
            out.push(Violation::AcceptOutOfRange { node, sinks });
        }
    }
    if p.accept.windows(2).any(|w| w[0] >= w[1]) {
        out.push(Violation::AcceptNotSorted);
    }

    if p.semantics.is_bounded_error() {
        match p.epsilon {
            None => out.push(Violation::MissingEpsilon),
            Some(e) if !(e > 0.0 && e <= 0.5) => {
                out.push(Violation::EpsilonOutOfRange { epsilon: e })
            }
            Some(_) => {}
        }
    }

    ValidationReport { violations: out }
}

fn check_transition(
    semantics: Semantics,
    level: usize,
    bit: u8,
    l: &Level,
    t: &Transition,
    out: &mut Vec<Violation>,
) {
    if t.semantics() != semantics {
        out.push(Violation::TransitionKind { level, bit, found: t.semantics(), expected: semantics });
        return;
    }
    match t {
        Transition::Deterministic(map) => {
            if map.len() != l.width_in {
                out.push(Violation::Dimension {
                    level,
                    bit,
                    detail: format!("map has {} entries for width_in {}", map.len(), l.width_in),
                });
            }
            for (from, &to) in map.iter().enumerate() {
                if to >= l.width_out {
                    out.push(Violation::TargetOutOfRange { level, bit, from, to });
                }
            }
        }
        Transition::Nondeterministic(edges) => {
            for &(from, to) in edges {
                if from >= l.width_in || to >= l.width_out {
                    out.push(Violation::TargetOutOfRange { level, bit, from, to });
                }
            }
        }
        Transition::Stochastic(m) => {
            if m.rows() != l.width_out || m.cols() != l.width_in {
                out.push(Violation::Dimension {
                    level,
                    bit,
                    detail: format!(
                        "matrix is {}x{}, level needs {}x{} (width_out x width_in)",
                        m.rows(),
                        m.cols(),
                        l.width_out,
                        l.width_in
                    ),
                });
                return;
            }
            for col in 0..m.cols() {
                let mut sum = 0.0;
                for row in 0..m.rows() {
                    let v = m.get(row, col);
                    if !(v >= 0.0) {
                        out.push(Violation::NegativeEntry { level, bit, row, col, value: v });
                    }
                    sum += v;
                }
                if !((sum - 1.0).abs() <= STOCHASTIC_TOLERANCE) {
                    out.push(Violation::ColumnSum { level, bit, col, sum });
                }
            }
        }
        Transition::Unitary(m) => {
            if m.rows() != l.width_out || m.cols() != l.width_in || m.rows() != m.cols() {
                out.push(Violation::Dimension {
                    level,
                    bit,
                    detail: format!(
                        "matrix is {}x{}, level needs {}x{}",
                        m.rows(),
                        m.cols(),
                        l.width_out,
                        l.width_in
                    ),
                });
                return;
            }
            let deviation = m.unitarity_deviation().unwrap_or(f64::INFINITY);
            if !(deviation <= UNITARY_TOLERANCE) {
                out.push(Violation::NotUnitary { level, bit, deviation });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_level(var: usize, w_in: usize, w_out: usize, t0: Vec<usize>, t1: Vec<usize>) -> Level {
        Level {
            var,
            width_in: w_in,
            width_out: w_out,
            t0: Transition::Deterministic(t0),
            t1: Transition::Deterministic(t1),
        }
    }

    #[test]
    fn minimal_program_is_valid() {
        let p = Program {
            semantics: Semantics::Deterministic,
            n: 1,
            k: 1,
            order: VariableOrder::identity(1),
            levels: vec![det_level(0, 1, 2, vec![0], vec![1])],
            initial: 0,
            accept: vec![1],
            epsilon: None,
        };
        assert!(p.validate().is_valid(), "{}", p.validate());
        assert_eq!(p.width(), 2);
    }

    #[test]
    fn single_node_width() {
        let p = Program {
            semantics: Semantics::Deterministic,
            n: 2,
            k: 1,
            order: VariableOrder::identity(2),
            levels: vec![det_level(0, 1, 1, vec![0], vec![0]), det_level(1, 1, 1, vec![0], vec![0])],
            initial: 0,
            accept: vec![],
            epsilon: None,
        };
        assert!(p.validate().is_valid());
        assert_eq!(p.width(), 1);
    }

    #[test]
    fn layer_order_mismatch_detected() {
        let id = |v| det_level(v, 1, 1, vec![0], vec![0]);
        let p = Program {
            semantics: Semantics::Deterministic,
            n: 2,
            k: 2,
            order: VariableOrder::identity(2),
            levels: vec![id(0), id(1), id(1), id(0)],
            initial: 0,
            accept: vec![0],
            epsilon: None,
        };
        let report = p.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::OrderMismatch { layer: 1, .. })));
    }

    #[test]
    fn read_twice_detected() {
        let id = |v| det_level(v, 1, 1, vec![0], vec![0]);
        let p = Program {
            semantics: Semantics::Deterministic,
            n: 2,
            k: 1,
            order: VariableOrder::identity(2),
            levels: vec![id(0), id(0)],
            initial: 0,
            accept: vec![],
            epsilon: None,
        };
        let report = p.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::ReadTwice { .. })));
    }

    #[test]
    fn perturbed_unitary_fails() {
        let mut g = ComplexMatrix::identity(2);
        g.set(0, 0, Complex64::new(1.0 + 1e-6, 0.0));
        let p = Program {
            semantics: Semantics::Quantum,
            n: 1,
            k: 1,
            order: VariableOrder::identity(1),
            levels: vec![Level {
                var: 0,
                width_in: 2,
                width_out: 2,
                t0: Transition::Unitary(ComplexMatrix::identity(2)),
                t1: Transition::Unitary(g),
            }],
            initial: 0,
            accept: vec![0],
            epsilon: Some(0.5),
        };
        let report = p.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::NotUnitary { bit: 1, .. }));
    }

    #[test]
    fn stochastic_column_sum_checked() {
        let m = RealMatrix::from_row_major(2, 2, vec![0.5, 0.0, 0.5, 0.9]);
        let p = Program {
            semantics: Semantics::Probabilistic,
            n: 1,
            k: 1,
            order: VariableOrder::identity(1),
            levels: vec![Level {
                var: 0,
                width_in: 2,
                width_out: 2,
                t0: Transition::Stochastic(m.clone()),
                t1: Transition::Stochastic(m),
            }],
            initial: 0,
            accept: vec![0],
            epsilon: Some(0.25),
        };
        let report = p.validate();
        assert_eq!(report.violations.len(), 2);
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::ColumnSum { col: 1, .. })));
    }

    #[test]
    fn order_rejects_duplicates() {
        assert_eq!(VariableOrder::new(vec![0, 0]), Err(OrderError::Duplicate { var: 0 }));
        assert_eq!(VariableOrder::new(vec![0, 2]), Err(OrderError::OutOfRange { var: 2, n: 2 }));
        let o = VariableOrder::new(vec![2, 0, 1]).unwrap();
        assert_eq!(o.position_of(2), 0);
        assert_eq!(o.position_of(1), 2);
    }

    #[test]
    fn assignment_index_round_trip() {
        let x = Assignment::from_index(5, 0b10110);
        assert_eq!(x.to_string(), "01101");
        assert_eq!(x.to_index(), 0b10110);
        assert_eq!(Assignment::parse(" 01101\n").unwrap(), x);
        assert!(Assignment::parse("01a").is_err());
    }
}
