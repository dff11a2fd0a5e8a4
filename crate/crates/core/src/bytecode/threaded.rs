//! Successor-linked program graphs.
//!
//! Every node names the node that runs after it, so execution never returns
//! to an enclosing statement. A loop is a cycle: the last node of the body
//! points back at the loop head. This is the finite form of the infinite
//! unrolled program term.

use std::fmt::Write;

use crate::frontend::{ArithOp, BinOp, CmpOp, Expr, Stmt};
use crate::object_space::{SymbolTable, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Statement-level node; expressions stay trees, borrowed from the source
/// program, and are evaluated recursively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AstNode<'p> {
    Assign { var: &'p str, expr: &'p Expr, next: NodeId },
    If { cond: &'p Expr, then_branch: NodeId, else_branch: NodeId },
    While { cond: &'p Expr, body: NodeId, exit: NodeId },
    End,
}

/// Instruction-level node; expressions are flattened into push/load/operator chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BcNode {
    Push { value: i64, next: NodeId },
    Load { var: VarId, next: NodeId },
    Store { var: VarId, next: NodeId },
    Arith { op: ArithOp, next: NodeId },
    Cmp { op: CmpOp, next: NodeId },
    Not { next: NodeId },
    /// Pops the condition and continues with one of the two successors.
    If { then_branch: NodeId, else_branch: NodeId },
    End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstGraph<'p> {
    pub nodes: Vec<AstNode<'p>>,
    pub entry: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcGraph {
    pub nodes: Vec<BcNode>,
    pub entry: NodeId,
    pub symbols: SymbolTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Ast,
    Bc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreadedGraph<'p> {
    Ast(AstGraph<'p>),
    Bc(BcGraph),
}

pub fn build_threaded(program: &[Stmt], flavor: Flavor) -> ThreadedGraph<'_> {
    match flavor {
        Flavor::Ast => ThreadedGraph::Ast(build_ast_graph(program)),
        Flavor::Bc => ThreadedGraph::Bc(build_bc_graph(program)),
    }
}

impl ThreadedGraph<'_> {
    pub fn len(&self) -> usize {
        match self {
            ThreadedGraph::Ast(g) => g.nodes.len(),
            ThreadedGraph::Bc(g) => g.nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn render(&self) -> String {
        match self {
            ThreadedGraph::Ast(g) => g.render(),
            ThreadedGraph::Bc(g) => g.render(),
        }
    }
}

const END_NODE: NodeId = NodeId(0);

struct Arena<N> {
    nodes: Vec<N>,
}

impl<N> Arena<N> {
    fn push(&mut self, node: N) -> NodeId {
        self.nodes.push(node);
        NodeId((self.nodes.len() - 1) as u32)
    }
}

pub fn build_ast_graph(program: &[Stmt]) -> AstGraph<'_> {
    fn block<'p>(arena: &mut Arena<AstNode<'p>>, stmts: &'p [Stmt], next: NodeId) -> NodeId {
        stmts.iter().rev().fold(next, |next, stmt| match stmt {
            Stmt::Assign { target, expr } => {
                arena.push(AstNode::Assign { var: target, expr, next })
            }
            Stmt::If { cond, then_branch, else_branch } => {
                // both branches continue at the shared successor
                let t = block(arena, then_branch, next);
                let e = block(arena, else_branch, next);
                arena.push(AstNode::If { cond, then_branch: t, else_branch: e })
            }
            Stmt::While { cond, body } => {
                let head = arena.push(AstNode::End);
                let body_entry = block(arena, body, head);
                arena.nodes[head.index()] = AstNode::While { cond, body: body_entry, exit: next };
                head
            }
        })
    }

    let mut arena = Arena { nodes: vec![AstNode::End] };
    let entry = block(&mut arena, program, END_NODE);
    AstGraph { nodes: arena.nodes, entry }
}

pub fn build_bc_graph(program: &[Stmt]) -> BcGraph {
    struct Builder {
        arena: Arena<BcNode>,
        symbols: SymbolTable,
    }

    impl Builder {
        fn block(&mut self, stmts: &[Stmt], next: NodeId) -> NodeId {
            let mut next = next;
            for stmt in stmts.iter().rev() {
                next = self.stmt(stmt, next);
            }
            next
        }

        fn stmt(&mut self, stmt: &Stmt, next: NodeId) -> NodeId {
            match stmt {
                Stmt::Assign { target, expr } => {
                    let var = self.symbols.intern(target);
                    let store = self.arena.push(BcNode::Store { var, next });
                    self.expr(expr, store)
                }
                Stmt::If { cond, then_branch, else_branch } => {
                    let t = self.block(then_branch, next);
                    let e = self.block(else_branch, next);
                    let branch = self.arena.push(BcNode::If { then_branch: t, else_branch: e });
                    self.expr(cond, branch)
                }
                Stmt::While { cond, body } => {
                    let branch = self.arena.push(BcNode::End);
                    let head = self.expr(cond, branch);
                    let body_entry = self.block(body, head);
                    self.arena.nodes[branch.index()] = BcNode::If { then_branch: body_entry, else_branch: next };
                    head
                }
            }
        }

        /// Builds the chain evaluating `e`, continuing at `next`; returns its first node.
        fn expr(&mut self, e: &Expr, next: NodeId) -> NodeId {
            match e {
                Expr::Int(v) => self.arena.push(BcNode::Push { value: *v, next }),
                Expr::Var(name) => {
                    let var = self.symbols.intern(name);
                    self.arena.push(BcNode::Load { var, next })
                }
                Expr::Binary { op, lhs, rhs } => {
                    let op_node = match op {
                        BinOp::Arith(op) => self.arena.push(BcNode::Arith { op: *op, next }),
                        BinOp::Cmp(op) => self.arena.push(BcNode::Cmp { op: *op, next }),
                    };
                    let r = self.expr(rhs, op_node);
                    self.expr(lhs, r)
                }
                Expr::Not(inner) => {
                    let not = self.arena.push(BcNode::Not { next });
                    self.expr(inner, not)
                }
            }
        }
    }

    let mut b = Builder { arena: Arena { nodes: vec![BcNode::End] }, symbols: SymbolTable::new() };
    let entry = b.block(program, END_NODE);
    BcGraph { nodes: b.arena.nodes, entry, symbols: b.symbols }
}

/// Depth-first listing from `entry`. Each reachable node is printed once as
/// `nK: ...`; edges to a node that is still being visited are marked `(back)`.
fn render_graph(
    len: usize,
    entry: NodeId,
    successors: impl Fn(NodeId) -> Vec<NodeId>,
    describe: impl Fn(NodeId, &[String]) -> String,
) -> String {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; len];
    let mut order = Vec::new();
    let mut edge_labels: Vec<Vec<String>> = vec![Vec::new(); len];
    let mut stack: Vec<(NodeId, usize)> = vec![(entry, 0)];
    mark[entry.index()] = Mark::Active;
    order.push(entry);

    while let Some(&mut (node, ref mut i)) = stack.last_mut() {
        let succ = successors(node);
        if *i == succ.len() {
            mark[node.index()] = Mark::Done;
            stack.pop();
            continue;
        }
        let target = succ[*i];
        *i += 1;
        let label = if mark[target.index()] == Mark::Active {
            format!("n{} (back)", target.0)
        } else {
            format!("n{}", target.0)
        };
        edge_labels[node.index()].push(label);
        if mark[target.index()] == Mark::New {
            mark[target.index()] = Mark::Active;
            order.push(target);
            stack.push((target, 0));
        }
    }

    let mut out = String::new();
    for node in order {
        writeln!(out, "n{}: {}", node.0, describe(node, &edge_labels[node.index()])).unwrap();
    }
    out
}

impl AstNode<'_> {
    fn successors(&self) -> Vec<NodeId> {
        match self {
            AstNode::Assign { next, .. } => vec![*next],
            AstNode::If { then_branch, else_branch, .. } => vec![*then_branch, *else_branch],
            AstNode::While { body, exit, .. } => vec![*body, *exit],
            AstNode::End => vec![],
        }
    }
}

impl BcNode {
    fn successors(&self) -> Vec<NodeId> {
        match self {
            BcNode::Push { next, .. }
            | BcNode::Load { next, .. }
            | BcNode::Store { next, .. }
            | BcNode::Arith { next, .. }
            | BcNode::Cmp { next, .. }
            | BcNode::Not { next } => vec![*next],
            BcNode::If { then_branch, else_branch } => vec![*then_branch, *else_branch],
            BcNode::End => vec![],
        }
    }
}

impl<'p> AstGraph<'p> {
    pub fn node(&self, id: NodeId) -> &AstNode<'p> {
        &self.nodes[id.index()]
    }

    pub fn render(&self) -> String {
        render_graph(
            self.nodes.len(),
            self.entry,
            |n| self.node(n).successors(),
            |n, edges| match self.node(n) {
                AstNode::Assign { var, expr, .. } => format!("assign({var}, {expr}) -> {}", edges[0]),
                AstNode::If { cond, .. } => format!("if({cond}) then -> {}, else -> {}", edges[0], edges[1]),
                AstNode::While { cond, .. } => format!("while({cond}) body -> {}, exit -> {}", edges[0], edges[1]),
                AstNode::End => "end".to_string(),
            },
        )
    }
}

impl BcGraph {
    pub fn node(&self, id: NodeId) -> &BcNode {
        &self.nodes[id.index()]
    }

    pub fn render(&self) -> String {
        let name = |v: VarId| self.symbols.name(v).unwrap_or("?");
        render_graph(
            self.nodes.len(),
            self.entry,
            |n| self.node(n).successors(),
            |n, edges| match self.node(n) {
                BcNode::Push { value, .. } => format!("push({value}) -> {}", edges[0]),
                BcNode::Load { var, .. } => format!("load({}) -> {}", name(*var), edges[0]),
                BcNode::Store { var, .. } => format!("store({}) -> {}", name(*var), edges[0]),
                BcNode::Arith { op, .. } => format!("{op} -> {}", edges[0]),
                BcNode::Cmp { op, .. } => format!("{op} -> {}", edges[0]),
                BcNode::Not { .. } => format!("not -> {}", edges[0]),
                BcNode::If { .. } => format!("if then -> {}, else -> {}", edges[0], edges[1]),
                BcNode::End => "end".to_string(),
            },
        )
    }
}
