//! Sub-bytecode representation: each loop condition, loop body and branch is
//! its own linear block, referenced by id from two special instructions
//! (`1 then else` for if, `2 cond body` for while). Arguments are decoded
//! integers and variable ids instead of bytes.

use std::fmt;

use crate::error::RuntimeError;
use crate::frontend::{ArithOp, BinOp, CmpOp, Expr, Stmt};
use crate::object_space::{SymbolTable, VarId};

use super::compile::{push_instr, CompileError};
use super::opcode::{self, Instr};

pub const IF_OPCODE: u8 = 1;
pub const WHILE_OPCODE: u8 = 2;

pub type BlockId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOp {
    Push(i32),
    Load(VarId),
    Assign(VarId),
    Arith(ArithOp),
    Cmp(CmpOp),
    Not,
    /// Pops the condition, then runs one of the two blocks.
    If { then_block: BlockId, else_block: BlockId },
    /// Runs `cond` on a fresh stack and `body` while it yields true.
    While { cond: BlockId, body: BlockId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProgram {
    pub main: Vec<BlockOp>,
    /// Indexed by block id.
    pub blocks: Vec<Vec<BlockOp>>,
    pub symbols: SymbolTable,
}

struct BlockCompiler {
    blocks: Vec<Vec<BlockOp>>,
    symbols: SymbolTable,
}

impl BlockCompiler {
    fn reserve(&mut self) -> BlockId {
        self.blocks.push(Vec::new());
        (self.blocks.len() - 1) as BlockId
    }

    fn stmts(&mut self, stmts: &[Stmt], out: &mut Vec<BlockOp>) -> Result<(), CompileError> {
        for stmt in stmts {
            match stmt {
                Stmt::Assign { target, expr } => {
                    self.expr(expr, out)?;
                    out.push(BlockOp::Assign(self.symbols.intern(target)));
                }
                Stmt::If { cond, then_branch, else_branch } => {
                    self.expr(cond, out)?;
                    let then_block = self.reserve();
                    let else_block = self.reserve();
                    out.push(BlockOp::If { then_block, else_block });
                    self.fill(then_block, |c, ops| c.stmts(then_branch, ops))?;
                    self.fill(else_block, |c, ops| c.stmts(else_branch, ops))?;
                }
                Stmt::While { cond: guard, body } => {
                    let cond = self.reserve();
                    let body_id = self.reserve();
                    out.push(BlockOp::While { cond, body: body_id });
                    self.fill(cond, |c, ops| c.expr(guard, ops))?;
                    self.fill(body_id, |c, ops| c.stmts(body, ops))?;
                }
            }
        }
        Ok(())
    }

    fn fill(
        &mut self,
        id: BlockId,
        build: impl FnOnce(&mut Self, &mut Vec<BlockOp>) -> Result<(), CompileError>,
    ) -> Result<(), CompileError> {
        let mut ops = Vec::new();
        build(self, &mut ops)?;
        self.blocks[id as usize] = ops;
        Ok(())
    }

    fn expr(&mut self, e: &Expr, out: &mut Vec<BlockOp>) -> Result<(), CompileError> {
        match e {
            Expr::Int(v) => {
                push_instr(*v)?;
                out.push(BlockOp::Push(*v as i32));
            }
            Expr::Var(name) => out.push(BlockOp::Load(self.symbols.intern(name))),
            Expr::Binary { op, lhs, rhs } => {
                self.expr(lhs, out)?;
                self.expr(rhs, out)?;
                out.push(match op {
                    BinOp::Arith(a) => BlockOp::Arith(*a),
                    BinOp::Cmp(c) => BlockOp::Cmp(*c),
                });
            }
            Expr::Not(inner) => {
                self.expr(inner, out)?;
                out.push(BlockOp::Not);
            }
        }
        Ok(())
    }
}

/// Compiles a program to a main sequence plus a table of sub-blocks.
///
/// Block ids are handed out when the enclosing `if`/`while` is reached:
/// then/else for `if`, condition/body for `while`.
pub fn compile_blocks(program: &[Stmt]) -> Result<BlockProgram, CompileError> {
    let mut c = BlockCompiler { blocks: Vec::new(), symbols: SymbolTable::new() };
    let mut main = Vec::new();
    c.stmts(program, &mut main)?;
    Ok(BlockProgram { main, blocks: c.blocks, symbols: c.symbols })
}

/// One element of the numeric rendering of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Num(i64),
    Name(String),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Num(n) => write!(f, "{n}"),
            Field::Name(s) => f.write_str(s),
        }
    }
}

impl BlockProgram {
    pub fn block(&self, id: BlockId) -> Result<&[BlockOp], RuntimeError> {
        self.blocks.get(id as usize).map(Vec::as_slice).ok_or_else(|| RuntimeError::UnknownBlock(id))
    }

    /// Renders a block as opcode numbers followed by their arguments,
    /// e.g. `[40, exponent, 20, 0, 255]`.
    pub fn fields(&self, ops: &[BlockOp]) -> Vec<Field> {
        let name = |id: VarId| Field::Name(self.symbols.name(id).unwrap_or("?").to_string());
        let mut out = Vec::new();
        for op in ops {
            match *op {
                BlockOp::Push(v) => {
                    // push_instr cannot fail for an i32
                    let instr = push_instr(v.into()).unwrap_or(Instr::Push4(v));
                    out.extend([Field::Num(instr.opcode().into()), Field::Num(v.into())]);
                }
                BlockOp::Load(id) => out.extend([Field::Num(opcode::LOAD.into()), name(id)]),
                BlockOp::Assign(id) => out.extend([Field::Num(opcode::ASSIGN.into()), name(id)]),
                BlockOp::Arith(a) => out.push(Field::Num(opcode::arith_opcode(a).into())),
                BlockOp::Cmp(c) => out.push(Field::Num(opcode::cmp_opcode(c).into())),
                BlockOp::Not => out.push(Field::Num(opcode::NOT.into())),
                BlockOp::If { then_block, else_block } => out.extend([
                    Field::Num(IF_OPCODE.into()),
                    Field::Num(then_block.into()),
                    Field::Num(else_block.into()),
                ]),
                BlockOp::While { cond, body } => out.extend([
                    Field::Num(WHILE_OPCODE.into()),
                    Field::Num(cond.into()),
                    Field::Num(body.into()),
                ]),
            }
        }
        out
    }

    pub fn render(&self, ops: &[BlockOp]) -> String {
        let fields: Vec<String> = self.fields(ops).iter().map(Field::to_string).collect();
        format!("[{}]", fields.join(", "))
    }

    /// Text dump: the main sequence followed by one `sbc(id, [...]).` line per block.
    pub fn dump(&self) -> String {
        let mut out = format!("main: {}\n", self.render(&self.main));
        for (id, ops) in self.blocks.iter().enumerate() {
            out.push_str(&format!("sbc({id}, {}).\n", self.render(ops)));
        }
        out
    }

    /// Ids of blocks used as loop conditions.
    pub fn condition_blocks(&self) -> Vec<BlockId> {
        let mut conds: Vec<BlockId> = std::iter::once(&self.main)
            .chain(&self.blocks)
            .flatten()
            .filter_map(|op| match op {
                BlockOp::While { cond, .. } => Some(*cond),
                _ => None,
            })
            .collect();
        conds.sort_unstable();
        conds.dedup();
        conds
    }

    /// Checks that referenced blocks and variables exist and that every
    /// condition block is a pure expression leaving exactly one value.
    pub fn validate(&self) -> Result<(), RuntimeError> {
        for op in std::iter::once(&self.main).chain(&self.blocks).flatten() {
            match *op {
                BlockOp::If { then_block: a, else_block: b } | BlockOp::While { cond: a, body: b } => {
                    self.block(a)?;
                    self.block(b)?;
                }
                BlockOp::Load(id) | BlockOp::Assign(id) if id.index() >= self.symbols.len() => {
                    return Err(RuntimeError::BadVariableId(id.0));
                }
                _ => {}
            }
        }
        for id in self.condition_blocks() {
            let mut depth: usize = 0;
            for op in self.block(id)? {
                depth = match op {
                    BlockOp::Push(_) | BlockOp::Load(_) => depth + 1,
                    BlockOp::Not if depth >= 1 => depth,
                    BlockOp::Arith(_) | BlockOp::Cmp(_) if depth >= 2 => depth - 1,
                    BlockOp::Not | BlockOp::Arith(_) | BlockOp::Cmp(_) => return Err(RuntimeError::StackUnderflow),
                    BlockOp::Assign(_) | BlockOp::If { .. } | BlockOp::While { .. } => {
                        return Err(RuntimeError::ConditionEffect(id))
                    }
                };
            }
            if depth != 1 {
                return Err(RuntimeError::ConditionArity(depth));
            }
        }
        Ok(())
    }
}
