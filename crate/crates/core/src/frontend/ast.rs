//! Abstract syntax shared by every backend.

use std::fmt;

/// A sequence of statements executed in order.
pub type StmtList = Vec<Stmt>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign { target: String, expr: Expr },
    If { cond: Expr, then_branch: StmtList, else_branch: StmtList },
    While { cond: Expr, body: StmtList },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Literal in the signed 32-bit range.
    Int(i64),
    Var(String),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Not(Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Mod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Arith(ArithOp),
    Cmp(CmpOp),
}

impl ArithOp {
    pub const ALL: [ArithOp; 4] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Mod];

    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Mod => "mod",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
            ArithOp::Mod => "mod",
        }
    }
}

impl CmpOp {
    pub const ALL: [CmpOp; 5] = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CmpOp::Lt => "lt",
            CmpOp::Le => "le",
            CmpOp::Gt => "gt",
            CmpOp::Ge => "ge",
            CmpOp::Eq => "eq",
        }
    }
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Int(v)
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn arith(op: ArithOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary { op: BinOp::Arith(op), lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn cmp(op: CmpOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary { op: BinOp::Cmp(op), lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn not(operand: Expr) -> Expr {
        Expr::Not(Box::new(operand))
    }

    /// Height of the expression tree; a leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::Var(_) => 1,
            Expr::Binary { lhs, rhs, .. } => 1 + lhs.depth().max(rhs.depth()),
            Expr::Not(e) => 1 + e.depth(),
        }
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::Var(_) => 1,
            Expr::Binary { lhs, rhs, .. } => 1 + lhs.size() + rhs.size(),
            Expr::Not(e) => 1 + e.size(),
        }
    }

    /// Calls `f` on every node, parents before children, left before right.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Binary { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            Expr::Not(e) => e.visit(f),
            Expr::Int(_) | Expr::Var(_) => {}
        }
    }
}

impl Stmt {
    pub fn assign(target: impl Into<String>, expr: Expr) -> Stmt {
        Stmt::Assign { target: target.into(), expr }
    }

    pub fn if_else(cond: Expr, then_branch: StmtList, else_branch: StmtList) -> Stmt {
        Stmt::If { cond, then_branch, else_branch }
    }

    pub fn while_loop(cond: Expr, body: StmtList) -> Stmt {
        Stmt::While { cond, body }
    }

    /// Calls `f` on every statement, outer before inner.
    pub fn visit(&self, f: &mut impl FnMut(&Stmt)) {
        f(self);
        match self {
            Stmt::Assign { .. } => {}
            Stmt::If { then_branch, else_branch, .. } => {
                then_branch.iter().for_each(|s| s.visit(f));
                else_branch.iter().for_each(|s| s.visit(f));
            }
            Stmt::While { body, .. } => body.iter().for_each(|s| s.visit(f)),
        }
    }

    /// The expression evaluated directly by this statement (assigned value or condition).
    pub fn expr(&self) -> &Expr {
        match self {
            Stmt::Assign { expr, .. } => expr,
            Stmt::If { cond, .. } | Stmt::While { cond, .. } => cond,
        }
    }
}

/// Largest expression depth anywhere in the program; zero for a program without expressions.
pub fn max_expr_depth(program: &[Stmt]) -> usize {
    let mut max = 0;
    for stmt in program {
        stmt.visit(&mut |s| max = max.max(s.expr().depth()));
    }
    max
}

/// Total number of statements, nested ones included.
pub fn stmt_count(program: &[Stmt]) -> usize {
    let mut n = 0;
    for stmt in program {
        stmt.visit(&mut |_| n += 1);
    }
    n
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Prefix-term rendering in the style `gt(id(exponent), int(0))`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "int({v})"),
            Expr::Var(name) => write!(f, "id({name})"),
            Expr::Binary { op: BinOp::Arith(op), lhs, rhs } => write!(f, "{op}({lhs}, {rhs})"),
            Expr::Binary { op: BinOp::Cmp(op), lhs, rhs } => write!(f, "{op}({lhs}, {rhs})"),
            Expr::Not(e) => write!(f, "not({e})"),
        }
    }
}
