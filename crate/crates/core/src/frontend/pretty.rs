//! Source printer. Output reparses to the same tree; parentheses are emitted
//! only where precedence or associativity requires them.

use std::fmt::Write;

use super::ast::{ArithOp, BinOp, Expr, Stmt};

const CMP: u8 = 1;
const ADDITIVE: u8 = 2;
const MULTIPLICATIVE: u8 = 3;
const UNARY: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Int(_) | Expr::Var(_) => ATOM,
        Expr::Not(_) => UNARY,
        Expr::Binary { op: BinOp::Cmp(_), .. } => CMP,
        Expr::Binary { op: BinOp::Arith(ArithOp::Mul), .. } => MULTIPLICATIVE,
        Expr::Binary { op: BinOp::Arith(_), .. } => ADDITIVE,
    }
}

fn write_expr(out: &mut String, e: &Expr, min_level: u8) {
    let parens = level(e) < min_level;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Int(v) => write!(out, "{v}").unwrap(),
        Expr::Var(name) => out.push_str(name),
        Expr::Not(inner) => {
            out.push('!');
            write_expr(out, inner, UNARY);
        }
        Expr::Binary { op, lhs, rhs } => {
            let (symbol, lhs_min, rhs_min) = match op {
                BinOp::Cmp(c) => (c.symbol(), ADDITIVE, ADDITIVE),
                BinOp::Arith(ArithOp::Mul) => ("*", MULTIPLICATIVE, UNARY),
                BinOp::Arith(a) => (a.symbol(), ADDITIVE, MULTIPLICATIVE),
            };
            write_expr(out, lhs, lhs_min);
            write!(out, " {symbol} ").unwrap();
            write_expr(out, rhs, rhs_min);
        }
    }
    if parens {
        out.push(')');
    }
}

pub fn expr_to_source(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, CMP);
    out
}

fn write_block(out: &mut String, stmts: &[Stmt], indent: usize) {
    for stmt in stmts {
        write_stmt(out, stmt, indent);
    }
}

fn write_stmt(out: &mut String, stmt: &Stmt, indent: usize) {
    let pad = "    ".repeat(indent);
    match stmt {
        Stmt::Assign { target, expr } => {
            writeln!(out, "{pad}{target} = {};", expr_to_source(expr)).unwrap();
        }
        Stmt::If { cond, then_branch, else_branch } => {
            writeln!(out, "{pad}if {} {{", expr_to_source(cond)).unwrap();
            write_block(out, then_branch, indent + 1);
            if else_branch.is_empty() {
                writeln!(out, "{pad}}}").unwrap();
            } else {
                writeln!(out, "{pad}}} else {{").unwrap();
                write_block(out, else_branch, indent + 1);
                writeln!(out, "{pad}}}").unwrap();
            }
        }
        Stmt::While { cond, body } => {
            writeln!(out, "{pad}while {} {{", expr_to_source(cond)).unwrap();
            write_block(out, body, indent + 1);
            writeln!(out, "{pad}}}").unwrap();
        }
    }
}

/// Renders a program as `.acol` source text.
pub fn to_source(program: &[Stmt]) -> String {
    let mut out = String::new();
    write_block(&mut out, program, 0);
    out
}
