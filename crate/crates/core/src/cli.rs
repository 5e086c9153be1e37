//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails (mismatches, nonpositive
//! margins), 2 on usage, parse or validation errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::analysis::{self, BoundReport, Chain, Constants};
use crate::constructions::BuilderDescriptor;
use crate::format;
use crate::functions::{BooleanFunction, FunctionDescriptor, TruthTable};
use crate::program::{Assignment, Program, VariableOrder};
use crate::random;
use crate::semantics::{self, classify, Outcome, ENUMERATION_LIMIT};

#[derive(Debug, Parser)]
#[command(name = "kobdd", version, about = "Build, evaluate and analyze k-OBDDs")]
pub struct Cli {
    /// Seed of the ChaCha8 generator used for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the command's main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a program: mxpj:k,d[,det|nondet|prob|quantum] or saf:k,w,n.
    Build {
        descriptor: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[command(flatten)]
        saf: SafFlags,
    },
    /// Evaluate a program on a bit string or on every line of a file.
    Eval { program: PathBuf, input: String },
    /// Compare a program with a builtin function or truth table.
    CheckEquiv {
        program: PathBuf,
        function: String,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        saf: SafFlags,
    },
    /// Subfunction counts per prefix cut as CSV.
    Subfn {
        function: String,
        /// id, min, or a 1-based permutation like 3,1,2,4.
        #[arg(long, default_value = "id")]
        order: String,
        /// all, or a single cut size u with 1 < u < n.
        #[arg(long, default_value = "all")]
        cut: String,
        #[command(flatten)]
        saf: SafFlags,
    },
    /// Evaluate separation chains over parameter grids as CSV.
    Bounds {
        /// Chain name, or `all`.
        chain: String,
        /// Grid of k: `2-64`, `2,4,8` or `pow2:1-6`.
        #[arg(long)]
        k: Option<String>,
        /// Grid of w (SAF chains) or d (MXPJ chains), same syntax.
        #[arg(long)]
        size: Option<String>,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Check a program file against every structural invariant.
    Validate { program: PathBuf },
}

#[derive(Debug, Args)]
pub struct SafFlags {
    /// Accept SAF layouts that only leave one value bit per block.
    #[arg(long)]
    pub allow_small_n: bool,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 8.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sample,
}

/// Usage or validation failure, reported with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type CmdResult = Result<i32, Fatal>;

struct Io<'a> {
    out: Box<dyn Write + 'a>,
    err: &'a mut dyn Write,
}

fn open_out<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Fatal> {
    match path {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Fatal(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

/// Runs the CLI with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(t) = cli.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let stderr = io::stderr();
    let mut elock = stderr.lock();
    run(std::env::args_os(), &mut lock, &mut elock)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    if let Command::Build { descriptor, output, saf } = &cli.command {
        return cmd_build(descriptor, output.as_deref().or(cli.out.as_deref()), saf.allow_small_n, stdout, stderr);
    }
    let out = open_out(cli.out.as_deref(), stdout)?;
    let mut io = Io { out, err: stderr };
    let code = match &cli.command {
        Command::Build { .. } => unreachable!(),
        Command::Eval { program, input } => cmd_eval(program, input, &mut io),
        Command::CheckEquiv { program, function, mode, samples, saf } => {
            cmd_check_equiv(program, function, *mode, *samples, cli.seed, saf.allow_small_n, &mut io)
        }
        Command::Subfn { function, order, cut, saf } => cmd_subfn(function, order, cut, saf.allow_small_n, &mut io),
        Command::Bounds { chain, k, size, constants } => {
            let c = Constants { c: constants.c, c1: constants.c1, c2: constants.c2, c3: constants.c3 };
            cmd_bounds(chain, k.as_deref(), size.as_deref(), &c, &mut io)
        }
        Command::Validate { program } => cmd_validate(program, &mut io),
    }?;
    io.out.flush()?;
    Ok(code)
}

fn read_program(path: &Path) -> Result<Program, Fatal> {
    let text = fs::read_to_string(path).map_err(|e| Fatal(format!("cannot read {}: {e}", path.display())))?;
    format::from_json(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Fatal> {
    let p = read_program(path)?;
    let report = p.validate();
    if !report.is_valid() {
        return Err(Fatal(format!("{}: {}", path.display(), report.to_string().trim_end())));
    }
    Ok(p)
}

/// A builtin descriptor, or else the path of a truth-table file.
fn load_function(spec: &str, relaxed: bool) -> Result<Box<dyn BooleanFunction + Send>, Fatal> {
    if let Some(d) = FunctionDescriptor::parse(spec, relaxed)? {
        return Ok(d.into_function());
    }
    let text = fs::read_to_string(spec).map_err(|e| {
        Fatal(format!("'{spec}' is neither a function descriptor nor a readable truth-table file: {e}"))
    })?;
    let table = TruthTable::parse(&text).map_err(|e| Fatal(format!("{spec}: {e}")))?;
    Ok(Box::new(table))
}

fn cmd_build(descriptor: &str, out: Option<&Path>, relaxed: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let p = BuilderDescriptor::parse(descriptor, relaxed)?.build()?;
    let report = p.validate();
    if !report.is_valid() {
        return Err(Fatal(format!("built program is invalid: {report}")));
    }
    let summary = format!(
        "semantics={} n={} layers={} width={} levels={}",
        p.semantics.as_str(),
        p.n,
        p.k,
        p.width(),
        p.levels.len()
    );
    let json = format::to_json(&p);
    match out {
        Some(path) => {
            fs::write(path, json + "\n").map_err(|e| Fatal(format!("cannot write {}: {e}", path.display())))?;
            writeln!(stdout, "{summary}")?;
        }
        None => {
            writeln!(stdout, "{json}")?;
            writeln!(stderr, "{summary}")?;
        }
    }
    Ok(0)
}

fn format_outcome(o: Outcome) -> String {
    match o {
        Outcome::Bit(b) => (b as u8).to_string(),
        Outcome::Probability(q) => format!("{q:.9}"),
    }
}

fn cmd_eval(program: &Path, input: &str, io: &mut Io) -> CmdResult {
    let p = load_program(program)?;
    let is_bits = !input.is_empty() && input.chars().all(|c| c == '0' || c == '1');
    let lines: Vec<String> = if is_bits {
        vec![input.to_string()]
    } else {
        fs::read_to_string(input)
            .map_err(|e| Fatal(format!("'{input}' is neither a bit string nor a readable file: {e}")))?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect()
    };
    for (i, line) in lines.iter().enumerate() {
        let x = Assignment::parse(line).map_err(|e| Fatal(format!("input {}: {e}", i + 1)))?;
        let o = semantics::evaluate(&p, &x).map_err(|e| Fatal(format!("input {}: {e}", i + 1)))?;
        writeln!(io.out, "{}", format_outcome(o))?;
    }
    Ok(0)
}

/// Program output on `x` as a Boolean, `None` if the acceptance probability
/// falls inside the error gap.
fn program_bit(p: &Program, eps: f64, x: &Assignment) -> Result<Option<bool>, Fatal> {
    Ok(match semantics::evaluate(p, x)? {
        Outcome::Bit(b) => Some(b),
        Outcome::Probability(q) => classify(q, eps),
    })
}

fn cmd_check_equiv(
    program: &Path,
    function: &str,
    mode: Mode,
    samples: usize,
    seed: u64,
    relaxed: bool,
    io: &mut Io,
) -> CmdResult {
    let p = load_program(program)?;
    let f = load_function(function, relaxed)?;
    if f.n() != p.n {
        return Err(Fatal(format!("function has n = {}, program has n = {}", f.n(), p.n)));
    }
    let eps = p.epsilon.unwrap_or(0.5);
    let check = |x: &Assignment| -> Result<bool, Fatal> { Ok(program_bit(&p, eps, x)? == Some(f.eval(x))) };

    // (checked, mismatches, first counterexample)
    let (checked, mismatches, first) = match mode {
        Mode::Exhaustive => {
            if p.n > ENUMERATION_LIMIT {
                return Err(Fatal(format!(
                    "exhaustive mode needs n <= {ENUMERATION_LIMIT}, got n = {}; use --mode sample",
                    p.n
                )));
            }
            let total = 1u64 << p.n;
            let bad: Vec<u64> = (0..total)
                .into_par_iter()
                .map(|i| check(&Assignment::from_index(p.n, i)).map(|ok| (!ok).then_some(i)))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect();
            let first = bad.first().map(|&i| Assignment::from_index(p.n, i));
            (total as usize, bad.len(), first)
        }
        Mode::Sample => {
            let mut rng = random::rng(seed);
            let inputs: Vec<Assignment> = (0..samples).map(|_| random::assignment(p.n, &mut rng)).collect();
            let results = inputs.par_iter().map(check).collect::<Result<Vec<_>, _>>()?;
            let first = results.iter().position(|ok| !ok).map(|i| inputs[i].clone());
            (samples, results.iter().filter(|ok| !**ok).count(), first)
        }
    };
    writeln!(io.out, "checked {checked} inputs, {mismatches} mismatches")?;
    if let Some(x) = first {
        let got = format_outcome(semantics::evaluate(&p, &x)?);
        writeln!(io.out, "first counterexample: {x} program={got} function={}", f.eval(&x) as u8)?;
        return Ok(1);
    }
    Ok(0)
}

fn parse_order(spec: &str, n: usize) -> Result<VariableOrder, Fatal> {
    let perm: Vec<usize> = spec
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Fatal(format!("order entry '{s}' is not a 1-based variable index"))),
        })
        .collect::<Result<_, _>>()?;
    if perm.len() != n {
        return Err(Fatal(format!("order lists {} variables, function has n = {n}", perm.len())));
    }
    Ok(VariableOrder::new(perm)?)
}

fn order_str(o: &VariableOrder) -> String {
    o.as_slice().iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub const SUBFN_HEADER: &str = "function,n,order,u,count,n_theta,n_min";

fn cmd_subfn(function: &str, order: &str, cut: &str, relaxed: bool, io: &mut Io) -> CmdResult {
    let f = load_function(function, relaxed)?;
    let table = TruthTable::of(&f)?;
    let n = table.arity();
    if n > analysis::COUNT_LIMIT {
        return Err(Fatal(format!("subfunction counting is limited to n <= {}, got n = {n}", analysis::COUNT_LIMIT)));
    }
    let (theta, n_min) = match order {
        "id" => (VariableOrder::identity(n), None),
        "min" => {
            let (value, theta) = analysis::n_min(&table)?;
            (theta, Some(value))
        }
        explicit => (parse_order(explicit, n)?, None),
    };
    let profile = analysis::profile(&table, &theta)?;
    let cuts: Vec<(usize, usize)> = match cut {
        "all" => profile.cuts.clone(),
        u => {
            let u: usize = u.parse().map_err(|_| Fatal(format!("cut '{u}' is not 'all' or an integer")))?;
            match profile.cuts.iter().find(|&&(v, _)| v == u) {
                Some(&c) => vec![c],
                None => return Err(Fatal(format!("cut u = {u} outside 1 < u < {n}"))),
            }
        }
    };
    let name = function.replace(',', " ");
    writeln!(io.out, "{SUBFN_HEADER}")?;
    for (u, count) in cuts {
        writeln!(
            io.out,
            "{name},{n},{},{u},{count},{},{}",
            order_str(&theta),
            profile.max_count(),
            n_min.map(|v| v.to_string()).unwrap_or_default()
        )?;
    }
    Ok(0)
}

/// Parses `a-b`, `a,b,c` or `pow2:a-b` (powers `2^a..2^b`).
pub fn parse_grid(spec: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad grid '{spec}' (expected a-b, a,b,c or pow2:a-b)");
    let range = |s: &str| -> Result<(usize, usize), String> {
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a, b))
    };
    let values: Vec<usize> = if let Some(rest) = spec.strip_prefix("pow2:") {
        let (a, b) = range(rest)?;
        if b >= usize::BITS as usize - 1 {
            return Err(bad());
        }
        (a..=b).map(|e| 1usize << e).collect()
    } else if spec.contains('-') {
        let (a, b) = range(spec)?;
        (a..=b).collect()
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

/// Grids used when `--k` / `--size` are not given.
pub fn default_grid(chain: Chain) -> (&'static str, &'static str) {
    match chain {
        Chain::HiN => ("2-64", "pow2:3-10"),
        Chain::HKobdd => ("2-64", "pow2:6-20"),
        _ => ("2-64", "pow2:4-20"),
    }
}

fn cmd_bounds(chain: &str, k: Option<&str>, size: Option<&str>, c: &Constants, io: &mut Io) -> CmdResult {
    c.check()?;
    let chains: Vec<Chain> = if chain == "all" { Chain::ALL.to_vec() } else { vec![chain.parse()?] };
    writeln!(io.out, "{}", BoundReport::CSV_HEADER)?;
    let mut all_positive = true;
    for ch in chains {
        let (dk, ds) = default_grid(ch);
        let ks = parse_grid(k.unwrap_or(dk))?;
        let sizes = parse_grid(size.unwrap_or(ds))?;
        for &kv in &ks {
            for &s in &sizes {
                match analysis::check_chain(ch, kv, s as f64, c) {
                    Ok(r) => {
                        all_positive &= r.certifies();
                        writeln!(io.out, "{}", r.csv_row())?;
                    }
                    Err(e) => {
                        writeln!(io.out, "{ch},{kv},{s},,{},{},{},{},,,,,false,{}", c.c, c.c1, c.c2, c.c3, ch.constant_dependent())?;
                        writeln!(io.err, "warning: {ch} k={kv} size={s}: {e}")?;
                    }
                }
            }
        }
    }
    Ok(if all_positive { 0 } else { 1 })
}

fn cmd_validate(program: &Path, io: &mut Io) -> CmdResult {
    let p = read_program(program)?;
    let report = p.validate();
    if report.is_valid() {
        writeln!(io.out, "valid: semantics={} n={} k={} width={}", p.semantics.as_str(), p.n, p.k, p.width())?;
        Ok(0)
    } else {
        write!(io.err, "{report}")?;
        Ok(2)
    }
}
