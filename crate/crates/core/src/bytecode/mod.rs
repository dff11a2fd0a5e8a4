//! Program representations derived from the AST: linear bytecode images,
//! sub-bytecode block programs and successor-linked graphs.

mod asm;
mod blocks;
mod compile;
mod image;
pub mod opcode;
mod threaded;

pub use asm::{assemble, disassemble, AsmError};
pub use blocks::{compile_blocks, BlockId, BlockOp, BlockProgram, Field, IF_OPCODE, WHILE_OPCODE};
pub use compile::{check_literals, compile_linear, CompileError};
pub use image::{BytecodeImage, ImageError, ACBC_MAGIC, ACBC_VERSION};
pub use opcode::Instr;
pub use threaded::{build_ast_graph, build_bc_graph, build_threaded, AstGraph, AstNode, BcGraph, BcNode, Flavor, NodeId, ThreadedGraph};
