//! Benchmark harness: bundled cases, timed runs and report assembly.

mod cases;
mod report;
pub mod stats;

use std::time::Instant;

pub use cases::{
    builtin_cases, default_seeds, parse_seed_list, BadScale, BadSeeds, BenchCase, Scale, DEFAULT_SEEDS, FIB_MOD_N, FIB_N,
    PRIME_V, SEED_ENV_VAR,
};
pub use report::{summarize, Aggregate, BenchReport, Cell, Measurement, CI_LEVEL, CI_METHOD};

use crate::backend::{Backend, Prepared};
use crate::bytecode::CompileError;
use crate::error::RuntimeError;
use crate::object_space::{Boundary, Env, ObjectSpace, Standard};

pub const DEFAULT_REPS: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{case}/{backend}: {source}")]
    Compile { case: String, backend: Backend, source: CompileError },
    #[error("{case}/{backend}: {source}")]
    Runtime { case: String, backend: Backend, source: RuntimeError },
    #[error("{case}/{backend} ({boundary}): final environment differs from ast in {}", variables.join(", "))]
    Mismatch { case: String, backend: Backend, boundary: Boundary, variables: Vec<String> },
}

/// Final environment of `case` under the tree-walking interpreter.
pub fn reference_env(case: &BenchCase) -> Result<Env, BenchError> {
    crate::ast_interp::run_ast(&case.program, case.env.clone())
        .map_err(|source| BenchError::Runtime { case: case.name.clone(), backend: Backend::Ast, source })
}

/// Times `reps` runs of `case` on `backend` with the standard object space.
pub fn run_case(case: &BenchCase, backend: Backend, reps: usize) -> Result<Vec<f64>, BenchError> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    let reference = reference_env(case)?;
    run_cell(case, backend, Boundary::Static, reps, &reference, &Standard)
}

/// Compiles outside the timed region, performs one untimed warm-up run whose
/// result must equal `reference`, then collects `reps` wall-clock samples in
/// seconds, each starting from a fresh copy of the case's environment.
pub fn run_cell<O: ObjectSpace>(
    case: &BenchCase,
    backend: Backend,
    boundary: Boundary,
    reps: usize,
    reference: &Env,
    space: &O,
) -> Result<Vec<f64>, BenchError> {
    if reps == 0 {
        return Ok(Vec::new());
    }
    let prepared = Prepared::prepare(backend, &case.program)
        .map_err(|source| BenchError::Compile { case: case.name.clone(), backend, source })?;
    let run = |env: Env| {
        prepared
            .run_with(env, boundary, space)
            .map_err(|source| BenchError::Runtime { case: case.name.clone(), backend, source })
    };
    let warm = run(case.env.clone())?;
    if &warm != reference {
        return Err(BenchError::Mismatch {
            case: case.name.clone(),
            backend,
            boundary,
            variables: warm.differences(reference).into_iter().map(String::from).collect(),
        });
    }
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let env = case.env.clone();
        let start = Instant::now();
        let out = run(env)?;
        let elapsed = start.elapsed();
        drop(out);
        // Clock granularity can yield zero on trivial programs.
        samples.push(elapsed.as_secs_f64().max(1e-9));
    }
    Ok(samples)
}
