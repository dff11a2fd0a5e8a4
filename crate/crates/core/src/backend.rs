//! Uniform front door over every execution backend.

use std::fmt;
use std::str::FromStr;

use crate::ast_interp::run_ast_in;
use crate::bytecode::{build_ast_graph, build_bc_graph, check_literals, compile_blocks, compile_linear, AstGraph, BcGraph, BlockProgram, CompileError};
use crate::error::RuntimeError;
use crate::frontend::Stmt;
use crate::object_space::{Boundary, Env, ObjectSpace, Standard};
use crate::vm_blocks::run_blocks_in;
use crate::vm_linear::{predecode, run_checked_in, run_decoded_in, CheckedImage, DecodedProgram};
use crate::vm_threaded::{run_threaded_ast_in, run_threaded_bc_in};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Backend {
    #[default]
    Ast,
    Linear,
    Decoded,
    Blocks,
    ThreadedAst,
    ThreadedBc,
}

impl Backend {
    pub const ALL: [Backend; 6] = [
        Backend::Ast,
        Backend::Linear,
        Backend::Decoded,
        Backend::Blocks,
        Backend::ThreadedAst,
        Backend::ThreadedBc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Ast => "ast",
            Backend::Linear => "linear",
            Backend::Decoded => "decoded",
            Backend::Blocks => "blocks",
            Backend::ThreadedAst => "threaded-ast",
            Backend::ThreadedBc => "threaded-bc",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown backend `{0}` (expected ast, linear, decoded, blocks, threaded-ast or threaded-bc)")]
pub struct UnknownBackend(pub String);

impl FromStr for Backend {
    type Err = UnknownBackend;

    fn from_str(s: &str) -> Result<Backend, UnknownBackend> {
        Backend::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| UnknownBackend(s.to_string()))
    }
}

/// A program lowered to the representation a backend executes.
#[derive(Debug, Clone)]
pub enum Prepared<'p> {
    Ast(&'p [Stmt]),
    Linear(CheckedImage),
    Decoded(DecodedProgram),
    Blocks(BlockProgram),
    ThreadedAst(AstGraph<'p>),
    ThreadedBc(BcGraph),
}

impl<'p> Prepared<'p> {
    pub fn prepare(backend: Backend, program: &'p [Stmt]) -> Result<Prepared<'p>, CompileError> {
        Ok(match backend {
            Backend::Ast => Prepared::Ast(program),
            Backend::Linear => {
                Prepared::Linear(CheckedImage::new(compile_linear(program)?).expect("compiler output is well formed"))
            }
            Backend::Decoded => {
                let image = compile_linear(program)?;
                Prepared::Decoded(predecode(&image).expect("compiler output is well formed"))
            }
            Backend::Blocks => Prepared::Blocks(compile_blocks(program)?),
            Backend::ThreadedAst => Prepared::ThreadedAst(build_ast_graph(program)),
            Backend::ThreadedBc => {
                check_literals(program)?;
                Prepared::ThreadedBc(build_bc_graph(program))
            }
        })
    }

    pub fn backend(&self) -> Backend {
        match self {
            Prepared::Ast(_) => Backend::Ast,
            Prepared::Linear(_) => Backend::Linear,
            Prepared::Decoded(_) => Backend::Decoded,
            Prepared::Blocks(_) => Backend::Blocks,
            Prepared::ThreadedAst(_) => Backend::ThreadedAst,
            Prepared::ThreadedBc(_) => Backend::ThreadedBc,
        }
    }

    /// Runs against the standard object space through the chosen call boundary.
    pub fn run(&self, env: Env, boundary: Boundary) -> Result<Env, RuntimeError> {
        self.run_with(env, boundary, &Standard)
    }

    /// Runs against `space`, either monomorphized over `O` or through a trait object.
    pub fn run_with<O: ObjectSpace>(&self, env: Env, boundary: Boundary, space: &O) -> Result<Env, RuntimeError> {
        match boundary {
            Boundary::Static => self.run_in(env, space),
            Boundary::Dynamic => self.run_in::<dyn ObjectSpace>(env, space),
        }
    }

    pub fn run_in<O: ObjectSpace + ?Sized>(&self, env: Env, space: &O) -> Result<Env, RuntimeError> {
        match self {
            Prepared::Ast(p) => run_ast_in(p, env, space),
            Prepared::Linear(p) => run_checked_in(p, env, space),
            Prepared::Decoded(p) => run_decoded_in(p, env, space),
            Prepared::Blocks(p) => run_blocks_in(p, env, space),
            Prepared::ThreadedAst(p) => run_threaded_ast_in(p, env, space),
            Prepared::ThreadedBc(p) => run_threaded_bc_in(p, env, space),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_program, FIB_MOD_SOURCE, FIB_SOURCE, POWER_SOURCE};
    use crate::object_space::Int;

    #[test]
    fn names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("jit".parse::<Backend>().is_err());
        assert_eq!(Backend::default(), Backend::Ast);
    }

    #[test]
    fn all_backends_and_boundaries_agree_on_power() {
        let prog = parse_program(POWER_SOURCE).unwrap();
        let env: Env = [("base", 3), ("exponent", 4)].into_iter().collect();
        for b in Backend::ALL {
            let p = Prepared::prepare(b, &prog).unwrap();
            assert_eq!(p.backend(), b);
            for boundary in Boundary::ALL {
                let out = p.run(env.clone(), boundary).unwrap();
                assert_eq!(out.get("val"), Some(&Int::from(81)), "{b} {boundary}");
            }
        }
    }

    #[test]
    fn fibonacci_grows_past_machine_words() {
        // Iterative oracle over u128: fib(150) fits, fib(190) does not fit i64.
        let n = 150u32;
        let (mut a, mut b) = (0u128, 1u128);
        for _ in 1..n {
            (a, b) = (b, a + b);
        }
        let prog = parse_program(FIB_SOURCE).unwrap();
        let env: Env = [("a", 0), ("b", 1), ("n", n as i64)].into_iter().collect();
        for backend in Backend::ALL {
            let out = Prepared::prepare(backend, &prog).unwrap().run(env.clone(), Boundary::Static).unwrap();
            assert_eq!(out.get("b").unwrap().to_string(), b.to_string(), "{backend}");
            assert_eq!(out.get("a").unwrap().to_string(), a.to_string(), "{backend}");
        }
    }

    #[test]
    fn fib_mod_agrees() {
        let prog = parse_program(FIB_MOD_SOURCE).unwrap();
        let env: Env = [("a", 0), ("b", 1), ("n", 1000)].into_iter().collect();
        let reference = Prepared::prepare(Backend::Ast, &prog).unwrap().run(env.clone(), Boundary::Static).unwrap();
        for backend in Backend::ALL {
            let out = Prepared::prepare(backend, &prog).unwrap().run(env.clone(), Boundary::Dynamic).unwrap();
            assert_eq!(out, reference, "{backend}");
        }
    }
}
