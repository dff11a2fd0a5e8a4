//! Executors for successor-linked graphs. Both follow `next` edges in a flat
//! loop; no continuation stack is kept because each node already names what
//! runs after it.

use crate::ast_interp::eval_expr;
use crate::bytecode::{AstGraph, AstNode, BcGraph, BcNode};
use crate::error::RuntimeError;
use crate::object_space::{Env, ObjectSpace, Slots, Standard, Value};

pub fn run_threaded_ast(g: &AstGraph<'_>, env: Env) -> Result<Env, RuntimeError> {
    run_threaded_ast_in(g, env, &Standard)
}

/// Statement nodes are dispatched iteratively; expressions go through the
/// tree evaluator, so host stack use is bounded by expression depth.
pub fn run_threaded_ast_in<O: ObjectSpace + ?Sized>(g: &AstGraph<'_>, mut env: Env, space: &O) -> Result<Env, RuntimeError> {
    let mut at = g.entry;
    loop {
        at = match g.node(at) {
            AstNode::End => return Ok(env),
            AstNode::Assign { var, expr, next } => {
                let v = eval_expr(expr, &env, space)?;
                space.store(&mut env, var, v)?;
                *next
            }
            AstNode::If { cond, then_branch, else_branch } => {
                let c = eval_expr(cond, &env, space)?;
                if space.truthy(&c)? {
                    *then_branch
                } else {
                    *else_branch
                }
            }
            AstNode::While { cond, body, exit } => {
                let c = eval_expr(cond, &env, space)?;
                if space.truthy(&c)? {
                    *body
                } else {
                    *exit
                }
            }
        };
    }
}

pub fn run_threaded_bc(g: &BcGraph, env: Env) -> Result<Env, RuntimeError> {
    run_threaded_bc_in(g, env, &Standard)
}

#[inline(always)]
fn pop(stack: &mut Vec<Value>) -> Result<Value, RuntimeError> {
    stack.pop().ok_or_else(|| RuntimeError::StackUnderflow)
}

#[inline(always)]
fn top(stack: &mut [Value]) -> Result<&mut Value, RuntimeError> {
    stack.last_mut().ok_or_else(|| RuntimeError::StackUnderflow)
}

pub fn run_threaded_bc_in<O: ObjectSpace + ?Sized>(g: &BcGraph, mut env: Env, space: &O) -> Result<Env, RuntimeError> {
    let mut slots = Slots::bind(&g.symbols, &env);
    let mut stack: Vec<Value> = Vec::with_capacity(16);
    let mut at = g.entry;
    loop {
        at = match *g.node(at) {
            BcNode::End => break,
            BcNode::Push { value, next } => {
                stack.push(space.create_integer(value));
                next
            }
            BcNode::Load { var, next } => {
                stack.push(space.lookup_slot(&slots, var)?);
                next
            }
            BcNode::Store { var, next } => {
                let v = pop(&mut stack)?;
                space.store_slot(&mut slots, var, v)?;
                next
            }
            BcNode::Arith { op, next } => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.arith(op, a, &b)?;
                next
            }
            BcNode::Cmp { op, next } => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.compare(op, a, &b)?;
                next
            }
            BcNode::Not { next } => {
                let v = pop(&mut stack)?;
                stack.push(space.not(&v)?);
                next
            }
            BcNode::If { then_branch, else_branch } => {
                let c = pop(&mut stack)?;
                if space.truthy(&c)? {
                    then_branch
                } else {
                    else_branch
                }
            }
        };
    }
    slots.write_back(&mut env);
    Ok(env)
}
