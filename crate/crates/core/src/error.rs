use thiserror::Error;

use crate::bytecode::{AsmError, CompileError, ImageError};
use crate::frontend::ParseError;
use crate::object_space::{EnvFileError, ValueKind};

/// Failure while executing a program, shared by every backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("type error in {op}: expected {expected}, found {found}")]
    TypeError { op: &'static str, expected: ValueKind, found: ValueKind },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unbound variable `{0}`")]
    UnboundVariable(Box<str>),
    #[error("evaluation stack underflow")]
    StackUnderflow,
    #[error("variable id {0} is outside the symbol table")]
    BadVariableId(u32),
    #[error(transparent)]
    Malformed(Box<ImageError>),
    #[error("unknown block id {0}")]
    UnknownBlock(u32),
    #[error("condition block left {0} values on its stack, expected exactly 1")]
    ConditionArity(usize),
    #[error("condition block {0} contains a statement-level instruction")]
    ConditionEffect(u32),
}

impl From<ImageError> for RuntimeError {
    fn from(e: ImageError) -> RuntimeError {
        RuntimeError::Malformed(Box::new(e))
    }
}

/// Any error produced by the library, for callers that drive a whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("compile error: {0}")]
    Compile(#[from] CompileError),
    #[error("malformed image: {0}")]
    Image(#[from] ImageError),
    #[error("assembler error: {0}")]
    Asm(#[from] AsmError),
    #[error("runtime error: {0}")]
    Runtime(#[from] RuntimeError),
    #[error("environment file: {0}")]
    EnvFile(#[from] EnvFileError),
}
