//! Differential checking: every backend must reach the same final environment
//! as the tree-walking interpreter on the same program.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::backend::{Backend, Prepared};
use crate::bytecode::CompileError;
use crate::error::RuntimeError;
use crate::frontend::{ArithOp, Stmt};
use crate::object_space::{arith, Boundary, Env, Int, ObjectSpace, Standard, Value};
use crate::progen::{generate, initial_env, GenConfig};

/// Object space whose `+` is off by one. Used to check that divergences are caught.
#[derive(Debug, Clone, Copy, Default)]
pub struct OffByOneAdd;

impl ObjectSpace for OffByOneAdd {
    fn arith(&self, op: ArithOp, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
        let v = arith(op, a, b)?;
        match (op, v) {
            (ArithOp::Add, Value::Int(i)) => Ok(Value::Int(i.add(&Int::from(1)))),
            (_, v) => Ok(v),
        }
    }
}

/// How one backend's outcome differed from the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub backend: Backend,
    /// First differing variable, or `None` when only one side failed.
    pub variable: Option<String>,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variable {
            Some(v) => write!(f, "backend {} variable `{v}`: expected {}, found {}", self.backend, self.expected, self.found),
            None => write!(f, "backend {}: expected {}, found {}", self.backend, self.expected, self.found),
        }
    }
}

fn describe(outcome: &Result<Env, RuntimeError>, var: Option<&str>) -> String {
    match (outcome, var) {
        (Ok(env), Some(v)) => env.get(v).map_or_else(|| "unbound".to_string(), |i| i.to_string()),
        (Ok(_), None) => "success".to_string(),
        (Err(e), _) => format!("error: {e}"),
    }
}

fn compare(backend: Backend, expected: &Result<Env, RuntimeError>, found: &Result<Env, RuntimeError>) -> Option<Divergence> {
    if expected == found {
        return None;
    }
    let variable = match (expected, found) {
        (Ok(a), Ok(b)) => a.differences(b).first().map(|s| s.to_string()),
        _ => None,
    };
    Some(Divergence {
        backend,
        expected: describe(expected, variable.as_deref()),
        found: describe(found, variable.as_deref()),
        variable,
    })
}

/// Options for a differential run.
#[derive(Debug, Clone)]
pub struct DiffOptions {
    pub backends: Vec<Backend>,
    pub boundary: Boundary,
    pub reps_per_seed: usize,
    /// Backend to run against [`OffByOneAdd`] instead of the standard space.
    pub fault: Option<Backend>,
}

impl Default for DiffOptions {
    fn default() -> DiffOptions {
        DiffOptions { backends: Backend::ALL.to_vec(), boundary: Boundary::Static, reps_per_seed: 1, fault: None }
    }
}

/// Runs `program` on every configured backend and compares against the
/// reference interpreter over the standard object space.
pub fn check_program(program: &[Stmt], env: &Env, opts: &DiffOptions) -> Result<Option<Divergence>, CompileError> {
    let reference = crate::ast_interp::run_ast(program, env.clone());
    for &backend in &opts.backends {
        let prepared = Prepared::prepare(backend, program)?;
        for rep in 0..opts.reps_per_seed.max(1) {
            // The reference run already is the first static ast run.
            if rep == 0 && backend == Backend::Ast && opts.boundary == Boundary::Static && opts.fault.is_none() {
                continue;
            }
            let out = if opts.fault == Some(backend) {
                prepared.run_with(env.clone(), opts.boundary, &OffByOneAdd)
            } else {
                prepared.run_with(env.clone(), opts.boundary, &Standard)
            };
            if let Some(d) = compare(backend, &reference, &out) {
                return Ok(Some(d));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffSummary {
    pub checked: usize,
    pub equivalent: usize,
    /// Smallest failing seed and what went wrong.
    pub first: Option<(u64, Divergence)>,
}

impl DiffSummary {
    pub fn passed(&self) -> bool {
        self.checked == self.equivalent
    }
}

impl fmt::Display for DiffSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} equivalent", self.equivalent, self.checked)?;
        if let Some((seed, d)) = &self.first {
            write!(f, "; first divergence at seed {seed}: {d}")?;
        }
        Ok(())
    }
}

/// Checks every generated program for `seeds` with `template` (its seed is replaced).
pub fn diff_seeds(
    seeds: impl IntoIterator<Item = u64>,
    template: &GenConfig,
    opts: &DiffOptions,
) -> Result<DiffSummary, CompileError> {
    let mut summary = DiffSummary { checked: 0, equivalent: 0, first: None };
    let env = initial_env();
    for seed in seeds {
        let program = generate(&GenConfig { seed, ..template.clone() });
        summary.checked += 1;
        match check_program(&program, &env, opts)? {
            None => summary.equivalent += 1,
            Some(d) => {
                if summary.first.is_none() {
                    summary.first = Some((seed, d));
                }
            }
        }
    }
    Ok(summary)
}

/// Inclusive seed range written `a..b` (or a single seed `a`); `b < a` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedRange(pub RangeInclusive<u64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid seed range `{0}` (expected N or A..B)")]
pub struct BadSeedRange(pub String);

impl FromStr for SeedRange {
    type Err = BadSeedRange;

    fn from_str(s: &str) -> Result<SeedRange, BadSeedRange> {
        let bad = || BadSeedRange(s.to_string());
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let v = s.trim().parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        Ok(SeedRange(lo..=hi))
    }
}
