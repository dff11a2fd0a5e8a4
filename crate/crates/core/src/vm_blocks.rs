//! Block-wise interpreter over sub-bytecode programs.
//!
//! Within a block execution only moves forward. `if` and `while` look their
//! blocks up by id and run them on fresh stacks; only the environment flows
//! back. Condition blocks run against a read-only environment.

use crate::bytecode::{BlockOp, BlockProgram};
use crate::error::RuntimeError;
use crate::object_space::{Env, ObjectSpace, Slots, Standard, Value};

pub fn run_blocks(prog: &BlockProgram, env: Env) -> Result<Env, RuntimeError> {
    run_blocks_in(prog, env, &Standard)
}

pub fn run_blocks_in<O: ObjectSpace + ?Sized>(prog: &BlockProgram, mut env: Env, space: &O) -> Result<Env, RuntimeError> {
    prog.validate()?;
    let mut slots = Slots::bind(&prog.symbols, &env);
    let mut stack = Vec::new();
    Interp { prog, space }.block(&prog.main, &mut slots, &mut stack)?;
    slots.write_back(&mut env);
    Ok(env)
}

struct Interp<'p, O: ?Sized> {
    prog: &'p BlockProgram,
    space: &'p O,
}

#[inline(always)]
fn pop(stack: &mut Vec<Value>) -> Result<Value, RuntimeError> {
    stack.pop().ok_or_else(|| RuntimeError::StackUnderflow)
}

#[inline(always)]
fn top(stack: &mut [Value]) -> Result<&mut Value, RuntimeError> {
    stack.last_mut().ok_or_else(|| RuntimeError::StackUnderflow)
}

impl<O: ObjectSpace + ?Sized> Interp<'_, O> {
    /// Executes an expression-level op; returns `false` for statement-level ops.
    #[inline(always)]
    fn expr_op(&self, op: &BlockOp, slots: &Slots<'_>, stack: &mut Vec<Value>) -> Result<bool, RuntimeError> {
        let space = self.space;
        match *op {
            BlockOp::Push(v) => stack.push(space.create_integer(v.into())),
            BlockOp::Load(id) => stack.push(space.lookup_slot(slots, id)?),
            BlockOp::Arith(op) => {
                let b = pop(stack)?;
                let a = top(stack)?;
                *a = space.arith(op, a, &b)?;
            }
            BlockOp::Cmp(op) => {
                let b = pop(stack)?;
                let a = top(stack)?;
                *a = space.compare(op, a, &b)?;
            }
            BlockOp::Not => {
                let v = pop(stack)?;
                stack.push(space.not(&v)?);
            }
            BlockOp::Assign(_) | BlockOp::If { .. } | BlockOp::While { .. } => return Ok(false),
        }
        Ok(true)
    }

    fn block(&self, ops: &[BlockOp], slots: &mut Slots<'_>, stack: &mut Vec<Value>) -> Result<(), RuntimeError> {
        for op in ops {
            if self.expr_op(op, slots, stack)? {
                continue;
            }
            match *op {
                BlockOp::Assign(id) => {
                    let v = pop(stack)?;
                    self.space.store_slot(slots, id, v)?;
                }
                BlockOp::If { then_block, else_block } => {
                    let c = pop(stack)?;
                    let chosen = if self.space.truthy(&c)? { then_block } else { else_block };
                    self.block(self.prog.block(chosen)?, slots, &mut Vec::new())?;
                }
                BlockOp::While { cond, body } => {
                    let cond_ops = self.prog.block(cond)?;
                    let body_ops = self.prog.block(body)?;
                    let mut cond_stack = Vec::with_capacity(8);
                    let mut body_stack = Vec::with_capacity(8);
                    loop {
                        cond_stack.clear();
                        self.condition(cond, cond_ops, slots, &mut cond_stack)?;
                        if cond_stack.len() != 1 {
                            return Err(RuntimeError::ConditionArity(cond_stack.len()));
                        }
                        if !self.space.truthy(&cond_stack[0])? {
                            break;
                        }
                        body_stack.clear();
                        self.block(body_ops, slots, &mut body_stack)?;
                    }
                }
                _ => unreachable!("handled by expr_op"),
            }
        }
        Ok(())
    }

    /// Runs a condition block. The environment is borrowed immutably, and any
    /// statement-level op is rejected.
    fn condition(&self, id: u32, ops: &[BlockOp], slots: &Slots<'_>, stack: &mut Vec<Value>) -> Result<(), RuntimeError> {
        for op in ops {
            if !self.expr_op(op, slots, stack)? {
                return Err(RuntimeError::ConditionEffect(id));
            }
        }
        Ok(())
    }
}
