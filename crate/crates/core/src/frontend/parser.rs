//! Recursive-descent parser.
//!
//! Precedence, loosest first: one optional comparison (non-associative), then
//! `+ - mod` (left-associative), then `*` (left-associative), then prefix `!`,
//! then literals, identifiers and parenthesised expressions.

use std::fmt;

use thiserror::Error;

use super::ast::{ArithOp, CmpOp, Expr, Stmt, StmtList};
use super::lexer::{tokenize, LexError, Pos, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{}: expected {}, found {found}", .pos.map_or("end of input".to_string(), |p| p.to_string()), ExpectedSet(.expected))]
    Unexpected {
        /// `None` at end of input.
        pos: Option<Pos>,
        expected: Vec<&'static str>,
        found: String,
    },
}

struct ExpectedSet<'a>(&'a [&'static str]);

impl fmt::Display for ExpectedSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            [] => f.write_str("nothing"),
            [one] => f.write_str(one),
            many => write!(f, "one of {}", many.join(", ")),
        }
    }
}

impl ParseError {
    pub fn expected(&self) -> &[&'static str] {
        match self {
            ParseError::Unexpected { expected, .. } => expected,
            ParseError::Lex(_) => &[],
        }
    }
}

/// Parses a complete program.
pub fn parse_program(source: &str) -> Result<StmtList, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens: &tokens, at: 0 };
    let mut program = Vec::new();
    while parser.peek().is_some() {
        program.push(parser.stmt()?);
    }
    Ok(program)
}

/// Parses a single expression, rejecting trailing tokens.
pub fn parse_expr(source: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens: &tokens, at: 0 };
    let e = parser.expr()?;
    match parser.peek() {
        None => Ok(e),
        Some(_) => Err(parser.unexpected(&["end of input"])),
    }
}

const STMT_START: &[&str] = &["identifier", "`if`", "`while`"];
const ATOM_START: &[&str] = &["integer", "identifier", "`(`", "`!`"];

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.at).map(|t| &t.kind)
    }

    fn advance(&mut self) -> Option<&'t TokenKind> {
        let t = self.tokens.get(self.at)?;
        self.at += 1;
        Some(&t.kind)
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let tok = self.tokens.get(self.at);
        ParseError::Unexpected {
            pos: tok.map(|t| t.pos),
            expected: expected.to_vec(),
            found: tok.map_or_else(|| "end of input".to_string(), |t| t.kind.to_string()),
        }
    }

    fn expect(&mut self, kind: TokenKind, label: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&kind) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.at += 1;
                self.expect(TokenKind::Assign, "`=` or `:=`")?;
                let expr = self.expr()?;
                self.expect(TokenKind::Semi, "`;`")?;
                Ok(Stmt::Assign { target: name.clone(), expr })
            }
            Some(TokenKind::If) => {
                self.at += 1;
                let cond = self.expr()?;
                let then_branch = self.block()?;
                let else_branch = if self.peek() == Some(&TokenKind::Else) {
                    self.at += 1;
                    self.block()?
                } else {
                    Vec::new()
                };
                Ok(Stmt::If { cond, then_branch, else_branch })
            }
            Some(TokenKind::While) => {
                self.at += 1;
                let cond = self.expr()?;
                let body = self.block()?;
                Ok(Stmt::While { cond, body })
            }
            _ => Err(self.unexpected(STMT_START)),
        }
    }

    fn block(&mut self) -> Result<StmtList, ParseError> {
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Some(TokenKind::RBrace) => {
                    self.at += 1;
                    return Ok(stmts);
                }
                Some(TokenKind::Ident(_) | TokenKind::If | TokenKind::While) => {
                    stmts.push(self.stmt()?)
                }
                _ => {
                    let mut expected = STMT_START.to_vec();
                    expected.push("`}`");
                    return Err(self.unexpected(&expected));
                }
            }
        }
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        match self.peek()? {
            TokenKind::Lt => Some(CmpOp::Lt),
            TokenKind::Le => Some(CmpOp::Le),
            TokenKind::Gt => Some(CmpOp::Gt),
            TokenKind::Ge => Some(CmpOp::Ge),
            TokenKind::EqEq => Some(CmpOp::Eq),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.additive()?;
        let Some(op) = self.cmp_op() else {
            return Ok(lhs);
        };
        self.at += 1;
        let rhs = self.additive()?;
        if self.cmp_op().is_some() {
            // comparisons do not chain
            return Err(self.unexpected(&["`;`", "`{`", "`)`"]));
        }
        Ok(Expr::cmp(op, lhs, rhs))
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => ArithOp::Add,
                Some(TokenKind::Minus) => ArithOp::Sub,
                Some(TokenKind::Mod) => ArithOp::Mod,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.multiplicative()?;
            lhs = Expr::arith(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&TokenKind::Star) {
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr::arith(ArithOp::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&TokenKind::Bang) {
            self.at += 1;
            return Ok(Expr::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(TokenKind::Int(v)) => {
                self.at += 1;
                Ok(Expr::Int(*v))
            }
            Some(TokenKind::Ident(name)) => {
                self.at += 1;
                Ok(Expr::Var(name.clone()))
            }
            Some(TokenKind::LParen) => {
                self.advance();
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }
}
