//! Reference tree-walking interpreter.
//!
//! Statement lists are executed in order; nesting recurses, loops iterate.
//! Every other backend is checked against this one.

use crate::error::RuntimeError;
use crate::frontend::{BinOp, Expr, Stmt};
use crate::object_space::{Env, ObjectSpace, Standard, Value};

/// Runs `program` on `env` with the standard object space.
pub fn run_ast(program: &[Stmt], env: Env) -> Result<Env, RuntimeError> {
    run_ast_in(program, env, &Standard)
}

pub fn run_ast_in<O: ObjectSpace + ?Sized>(program: &[Stmt], mut env: Env, space: &O) -> Result<Env, RuntimeError> {
    exec_block(program, &mut env, space)?;
    Ok(env)
}

fn exec_block<O: ObjectSpace + ?Sized>(stmts: &[Stmt], env: &mut Env, space: &O) -> Result<(), RuntimeError> {
    for stmt in stmts {
        exec_stmt(stmt, env, space)?;
    }
    Ok(())
}

fn exec_stmt<O: ObjectSpace + ?Sized>(stmt: &Stmt, env: &mut Env, space: &O) -> Result<(), RuntimeError> {
    match stmt {
        Stmt::Assign { target, expr } => {
            let v = eval_expr(expr, env, space)?;
            space.store(env, target, v)
        }
        Stmt::If { cond, then_branch, else_branch } => {
            let c = eval_expr(cond, env, space)?;
            if space.truthy(&c)? {
                exec_block(then_branch, env, space)
            } else {
                exec_block(else_branch, env, space)
            }
        }
        Stmt::While { cond, body } => {
            loop {
                let c = eval_expr(cond, env, space)?;
                if !space.truthy(&c)? {
                    return Ok(());
                }
                exec_block(body, env, space)?;
            }
        }
    }
}

/// Evaluates an expression, left operand before right.
pub fn eval_expr<O: ObjectSpace + ?Sized>(e: &Expr, env: &Env, space: &O) -> Result<Value, RuntimeError> {
    match e {
        Expr::Int(v) => Ok(space.create_integer(*v)),
        Expr::Var(name) => space.lookup(env, name),
        Expr::Binary { op, lhs, rhs } => {
            let a = operand(lhs, env, space)?;
            let b = operand(rhs, env, space)?;
            match op {
                BinOp::Arith(op) => space.arith(*op, &a, &b),
                BinOp::Cmp(op) => space.compare(*op, &a, &b),
            }
        }
        Expr::Not(inner) => {
            let v = eval_expr(inner, env, space)?;
            space.not(&v)
        }
    }
}

/// Leaves are evaluated without a recursive call.
#[inline(always)]
fn operand<O: ObjectSpace + ?Sized>(e: &Expr, env: &Env, space: &O) -> Result<Value, RuntimeError> {
    match e {
        Expr::Int(v) => Ok(space.create_integer(*v)),
        Expr::Var(name) => space.lookup(env, name),
        _ => eval_expr(e, env, space),
    }
}
