use thiserror::Error;

use crate::frontend::{BinOp, Expr, Stmt};
use crate::object_space::SymbolTable;

use super::image::BytecodeImage;
use super::opcode::Instr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("integer literal {0} does not fit in 32 bits")]
    LiteralOutOfRange(i64),
    #[error("program exceeds the 4 GiB addressable by jump arguments")]
    TooLarge,
}

/// Chooses `push1` for literals in the signed 8-bit range and `push4` otherwise.
pub(crate) fn push_instr(v: i64) -> Result<Instr, CompileError> {
    if let Ok(small) = i8::try_from(v) {
        Ok(Instr::Push1(small))
    } else if let Ok(wide) = i32::try_from(v) {
        Ok(Instr::Push4(wide))
    } else {
        Err(CompileError::LiteralOutOfRange(v))
    }
}

/// Checks that every integer literal in `program` fits a `push4` argument.
pub fn check_literals(program: &[Stmt]) -> Result<(), CompileError> {
    let mut bad = None;
    for stmt in program {
        stmt.visit(&mut |s| {
            s.expr().visit(&mut |e| {
                if let Expr::Int(v) = e {
                    if bad.is_none() && i32::try_from(*v).is_err() {
                        bad = Some(*v);
                    }
                }
            })
        });
    }
    bad.map_or(Ok(()), |v| Err(CompileError::LiteralOutOfRange(v)))
}

struct Linear {
    code: Vec<u8>,
    symbols: SymbolTable,
}

impl Linear {
    fn here(&self) -> Result<u32, CompileError> {
        u32::try_from(self.code.len()).map_err(|_| CompileError::TooLarge)
    }

    fn emit(&mut self, instr: Instr) {
        instr.encode(&mut self.code);
    }

    /// Emits a jump with a placeholder target and returns the offset of its argument.
    fn emit_jump(&mut self, make: fn(u32) -> Instr) -> usize {
        self.emit(make(0));
        self.code.len() - 4
    }

    fn patch(&mut self, arg_at: usize, target: u32) {
        self.code[arg_at..arg_at + 4].copy_from_slice(&target.to_le_bytes());
    }

    fn block(&mut self, stmts: &[Stmt]) -> Result<(), CompileError> {
        stmts.iter().try_for_each(|s| self.stmt(s))
    }

    fn stmt(&mut self, stmt: &Stmt) -> Result<(), CompileError> {
        match stmt {
            Stmt::Assign { target, expr } => {
                self.expr(expr)?;
                let id = self.symbols.intern(target);
                self.emit(Instr::Assign(id));
            }
            Stmt::If { cond, then_branch, else_branch } => {
                self.expr(cond)?;
                let to_else = self.emit_jump(Instr::JumpIfFalse);
                self.block(then_branch)?;
                let to_join = self.emit_jump(Instr::Jump);
                let else_at = self.here()?;
                self.patch(to_else, else_at);
                self.block(else_branch)?;
                let join = self.here()?;
                self.patch(to_join, join);
            }
            Stmt::While { cond, body } => {
                let head = self.here()?;
                self.expr(cond)?;
                let to_exit = self.emit_jump(Instr::JumpIfFalse);
                self.block(body)?;
                self.emit(Instr::Jump(head));
                let exit = self.here()?;
                self.patch(to_exit, exit);
            }
        }
        Ok(())
    }

    fn expr(&mut self, e: &Expr) -> Result<(), CompileError> {
        match e {
            Expr::Int(v) => self.emit(push_instr(*v)?),
            Expr::Var(name) => {
                let id = self.symbols.intern(name);
                self.emit(Instr::Load(id));
            }
            Expr::Binary { op, lhs, rhs } => {
                self.expr(lhs)?;
                self.expr(rhs)?;
                self.emit(match op {
                    BinOp::Arith(a) => Instr::Arith(*a),
                    BinOp::Cmp(c) => Instr::Cmp(*c),
                });
            }
            Expr::Not(inner) => {
                self.expr(inner)?;
                self.emit(Instr::Not);
            }
        }
        Ok(())
    }
}

/// Compiles a program to linear bytecode.
///
/// Expressions compile operands first; `if` becomes
/// `cond; jump-if-false else; then; jump join; else:`; `while` becomes
/// `head: cond; jump-if-false exit; body; jump head; exit:`. Variable ids are
/// handed out in order of first emission and the code ends with `end`.
pub fn compile_linear(program: &[Stmt]) -> Result<BytecodeImage, CompileError> {
    let mut c = Linear { code: Vec::new(), symbols: SymbolTable::new() };
    c.block(program)?;
    c.emit(Instr::End);
    c.here()?;
    Ok(BytecodeImage::new(c.code, c.symbols))
}
