//! Upper bounds on subfunction counts per model, lower bounds for the hard
//! functions, and the separation chains that compare them. Everything is
//! computed as `log2` of the quantity in `f64`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("constant {name} must be positive and finite, got {value}")]
    Constant { name: &'static str, value: f64 },
    #[error("{name} must be at least {min}, got {value}")]
    Parameter { name: &'static str, min: f64, value: f64 },
    #[error("{chain}: reduced width {value} is not a positive finite number (parameters outside the chain's range)")]
    ReducedWidth { chain: Chain, value: f64 },
    #[error("{0}")]
    Domain(String),
}

/// Computation model of a program class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Det,
    Nondet,
    Prob,
    Quantum,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Det => "det",
            Model::Nondet => "nondet",
            Model::Prob => "prob",
            Model::Quantum => "quantum",
        }
    }
}

impl FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "det" => Ok(Model::Det),
            "nondet" => Ok(Model::Nondet),
            "prob" => Ok(Model::Prob),
            "quantum" => Ok(Model::Quantum),
            _ => Err(format!("unknown model '{s}' (expected det, nondet, prob or quantum)")),
        }
    }
}

/// The unnamed constants of the probabilistic and quantum bounds.
///
/// `c` belongs to the quantum bound, `c1` and `c2` to the probabilistic one,
/// `c3` only appears in the closed form of the probabilistic chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 1.0, c1: 8.0, c2: 1.0, c3: 1.0 }
    }
}

impl Constants {
    pub fn check(&self) -> Result<(), BoundError> {
        for (name, value) in [("C", self.c), ("C1", self.c1), ("C2", self.c2), ("C3", self.c3)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(BoundError::Constant { name, value });
            }
        }
        Ok(())
    }
}

/// Model bound without range checks; `w` may be fractional.
pub(crate) fn raw_bound_log2(model: Model, k: f64, w: f64, c: &Constants) -> Result<f64, BoundError> {
    let lw = w.log2();
    Ok(match model {
        Model::Det => ((k - 1.0) * w + 1.0) * lw,
        Model::Nondet => w * ((k - 1.0) * w + 1.0),
        Model::Prob => {
            let inner = c.c2 + lw + k.log2();
            if inner <= 0.0 {
                return Err(BoundError::Domain(format!(
                    "C2 + log2 w + log2 k = {inner} is not positive at k = {k}, w = {w}"
                )));
            }
            (k + 1.0) * w * w * (c.c1 * k * inner).log2()
        }
        Model::Quantum => c.c * (k * w).powi(2) * lw,
    })
}

/// `log2` of the largest subfunction count a `k`-layer program of width
/// `w` in `model` can have.
pub fn bound_log2(model: Model, k: usize, w: f64, constants: &Constants) -> Result<f64, BoundError> {
    constants.check()?;
    if k < 1 {
        return Err(BoundError::Parameter { name: "k", min: 1.0, value: k as f64 });
    }
    if !(w >= 2.0) {
        return Err(BoundError::Parameter { name: "w", min: 2.0, value: w });
    }
    raw_bound_log2(model, k as f64, w, constants)
}

/// Lower bounds on `N(f)` for the hard functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LowerFn {
    /// `w^((k-1)(w-2))`
    Saf,
    /// `w^(kw/6)`
    SafCor,
    /// `d^(floor(d/3 - 1)(k-3))`
    Mxpj,
    /// `d^(dk/16)`
    MxpjCor,
}

impl FromStr for LowerFn {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "saf" => Ok(LowerFn::Saf),
            "saf_cor" => Ok(LowerFn::SafCor),
            "mxpj" => Ok(LowerFn::Mxpj),
            "mxpj_cor" => Ok(LowerFn::MxpjCor),
            _ => Err(format!("unknown lower bound '{s}' (expected saf, saf_cor, mxpj or mxpj_cor)")),
        }
    }
}

/// `log2` of the lower bound; `size` is `w` for SAF and `d` for MXPJ.
pub fn lower_log2(f: LowerFn, k: usize, size: f64) -> f64 {
    let k = k as f64;
    let l = size.log2();
    match f {
        LowerFn::Saf => (k - 1.0) * (size - 2.0) * l,
        LowerFn::SafCor => k * size / 6.0 * l,
        LowerFn::Mxpj => (size / 3.0 - 1.0).floor() * (k - 3.0) * l,
        LowerFn::MxpjCor => size * k / 16.0 * l,
    }
}

/// A separation argument: a hard function's lower bound against a model
/// bound at a reduced width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chain {
    /// `SAF` vs nondeterministic `2k` layers, width `sqrt(w)/2`.
    HiN,
    /// `SAF` vs probabilistic `2k` layers, width `sqrt(w)/(log k log w)`.
    HiP,
    /// `MXPJ` vs quantum `k` layers, width `sqrt(d/(C1 k))`.
    HiQ,
    /// `MXPJ` vs deterministic `k` layers, width `d/32`.
    S5Obdd,
    /// `MXPJ` vs nondeterministic `k` layers, width `sqrt(d log d / 33)`.
    S5Nobdd,
    /// `MXPJ` vs probabilistic `k` layers, width `sqrt(d / log k)`.
    S5Pobdd,
    /// `SAF` vs deterministic `2k` layers, width `floor(w/16) - 3`.
    HKobdd,
}

impl Chain {
    pub const ALL: [Chain; 7] = [
        Chain::HiN,
        Chain::HiP,
        Chain::HiQ,
        Chain::S5Obdd,
        Chain::S5Nobdd,
        Chain::S5Pobdd,
        Chain::HKobdd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Chain::HiN => "hi-n",
            Chain::HiP => "hi-p",
            Chain::HiQ => "hi-q",
            Chain::S5Obdd => "s5-obdd",
            Chain::S5Nobdd => "s5-nobdd",
            Chain::S5Pobdd => "s5-pobdd",
            Chain::HKobdd => "h-kobdd",
        }
    }

    /// Whether the margin depends on the unnamed constants.
    pub fn constant_dependent(self) -> bool {
        matches!(self, Chain::HiP | Chain::HiQ | Chain::S5Pobdd)
    }

    /// `true` for chains over `SAF_{k,w}`, `false` for `MXPJ_{2k,d}`.
    pub fn uses_saf(self) -> bool {
        matches!(self, Chain::HiN | Chain::HiP | Chain::HKobdd)
    }

    fn model(self) -> Model {
        match self {
            Chain::HiN | Chain::S5Nobdd => Model::Nondet,
            Chain::HiP | Chain::S5Pobdd => Model::Prob,
            Chain::HiQ => Model::Quantum,
            Chain::S5Obdd | Chain::HKobdd => Model::Det,
        }
    }

    fn witness(self) -> LowerFn {
        if self.uses_saf() {
            LowerFn::SafCor
        } else {
            LowerFn::MxpjCor
        }
    }

    /// Layer count of the weaker class.
    fn layers(self, k: usize) -> usize {
        match self {
            Chain::HiN | Chain::HiP | Chain::HKobdd => 2 * k,
            _ => k,
        }
    }

    fn reduced_width(self, k: f64, s: f64, c: &Constants) -> f64 {
        let ls = s.log2();
        match self {
            Chain::HiN => s.sqrt() / 2.0,
            Chain::HiP => s.sqrt() / (k.log2() * ls),
            Chain::HiQ => (s / (c.c1 * k)).sqrt(),
            Chain::S5Obdd => s / 32.0,
            Chain::S5Nobdd => (s * ls / 33.0).sqrt(),
            Chain::S5Pobdd => (s / k.log2()).sqrt(),
            Chain::HKobdd => (s / 16.0).floor() - 3.0,
        }
    }

    /// The closed form the separation argument reduces the margin to, where
    /// it states one.
    fn closed_form(self, k: f64, s: f64, c: &Constants) -> Option<f64> {
        let ls = s.log2();
        let lk = k.log2();
        match self {
            Chain::HiN => {
                let r = s.sqrt();
                Some(r / 2.0 * (k * r / 3.0 * (ls - 3.0) + r / 2.0 - 1.0))
            }
            Chain::HiQ => Some(k / 16.0 * (c.c1 * k).log2()),
            Chain::S5Obdd => Some(k * s * (ls / 16.0 - 2.0 * (ls - 5.0) / 32.0)),
            Chain::S5Nobdd => Some(k * s * (ls / 16.0 - 2.0 * ls / 33.0)),
            Chain::S5Pobdd => {
                let tail = c.c3 + lk + (c.c2 + ls + lk).log2();
                Some(2.0 * k * s * (ls / 32.0 - lk * tail))
            }
            Chain::HiP | Chain::HKobdd => None,
        }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Chain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Chain::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Chain::ALL.iter().map(|c| c.as_str()).collect();
                format!("unknown chain '{s}' (expected one of {})", names.join(", "))
            })
    }
}

/// Result of evaluating one chain at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub chain: Chain,
    pub k: usize,
    /// `w` for SAF chains, `d` for MXPJ chains.
    pub size: f64,
    pub constants: Constants,
    pub reduced_width: f64,
    pub lhs_log2: f64,
    pub rhs_log2: f64,
    pub margin: f64,
    /// The chain's own simplified expression for the margin, if it has one.
    pub proof_margin: Option<f64>,
    /// False when the reduced width is below 1 or the chain's stated
    /// range (`w >= 8`, `w >= 64`) is not met.
    pub in_regime: bool,
    pub constant_dependent: bool,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "chain,k,size,reduced_width,c,c1,c2,c3,lhs_log2,rhs_log2,margin,proof_margin,in_regime,constant_dependent";

    pub fn certifies(&self) -> bool {
        self.margin > 0.0
    }

    pub fn csv_row(&self) -> String {
        let c = &self.constants;
        format!(
            "{},{},{},{:.6},{},{},{},{},{:.6},{:.6},{:.6},{},{},{}",
            self.chain,
            self.k,
            self.size,
            self.reduced_width,
            c.c,
            c.c1,
            c.c2,
            c.c3,
            self.lhs_log2,
            self.rhs_log2,
            self.margin,
            self.proof_margin.map(|m| format!("{m:.6}")).unwrap_or_default(),
            self.in_regime,
            self.constant_dependent
        )
    }
}

/// Evaluates `chain` at `(k, size)`.
pub fn check_chain(chain: Chain, k: usize, size: f64, constants: &Constants) -> Result<BoundReport, BoundError> {
    constants.check()?;
    if k < 1 {
        return Err(BoundError::Parameter { name: "k", min: 1.0, value: k as f64 });
    }
    if !(size >= 2.0 && size.is_finite()) {
        return Err(BoundError::Parameter { name: if chain.uses_saf() { "w" } else { "d" }, min: 2.0, value: size });
    }
    let kf = k as f64;
    let reduced = chain.reduced_width(kf, size, constants);
    if !(reduced.is_finite() && reduced > 0.0) {
        return Err(BoundError::ReducedWidth { chain, value: reduced });
    }
    let lhs = lower_log2(chain.witness(), k, size);
    let rhs = raw_bound_log2(chain.model(), chain.layers(k) as f64, reduced, constants)?;
    let stated_range = match chain {
        Chain::HiN => size >= 8.0,
        Chain::HKobdd => k >= 2 && size >= 64.0,
        _ => true,
    };
    Ok(BoundReport {
        chain,
        k,
        size,
        constants: *constants,
        reduced_width: reduced,
        lhs_log2: lhs,
        rhs_log2: rhs,
        margin: lhs - rhs,
        proof_margin: chain.closed_form(kf, size, constants),
        in_regime: stated_range && reduced >= 1.0,
        constant_dependent: chain.constant_dependent(),
    })
}
