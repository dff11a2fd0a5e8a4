//! Acol: a small imperative language with several interchangeable execution
//! backends sharing one object space.

pub mod ast_interp;
pub mod backend;
pub mod bench;
pub mod bytecode;
pub mod diff;
pub mod error;
pub mod frontend;
pub mod object_space;
pub mod progen;
pub mod vm_blocks;
pub mod vm_linear;
pub mod vm_threaded;

pub use backend::{Backend, Prepared};
pub use error::{Error, RuntimeError};
pub use object_space::{Boundary, Env, Int};
