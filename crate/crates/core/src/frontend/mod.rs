//! Lexing, parsing and printing of Acol source text.

pub mod ast;
mod lexer;
mod parser;
mod pretty;

pub use ast::{max_expr_depth, stmt_count, ArithOp, BinOp, CmpOp, Expr, Stmt, StmtList};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{parse_expr, parse_program, ParseError};
pub use pretty::{expr_to_source, to_source};

/// Power function; expects `base` and `exponent`, leaves the result in `val`.
pub const POWER_SOURCE: &str = "\
# the initial environment (i.e. input): base = 2, exponent = 5

# the program
val = 1;
while exponent > 0 {
    val = val * base;
    exponent = exponent - 1;
}
";

/// Naive trial-division prime tester; expects `is_prime = 1`, `start = 2` and `V`.
pub const PRIME_SOURCE: &str = "\
while (start < V) {
    if (V mod start == 0) {
        is_prime := 0;
    } else {
        is_prime := is_prime;
    }
    start := start + 1;
}
";

/// Fibonacci over unbounded integers; expects `a = 0`, `b = 1` and `n`.
pub const FIB_SOURCE: &str = "\
i := 1;
while i < n {
    b := b + a;
    a := b - a;
    i := i + 1;
}
";

/// Fibonacci modulo 1000000; expects `a = 0`, `b = 1` and `n`.
pub const FIB_MOD_SOURCE: &str = "\
i := 1;
while i < n {
    b := b + a mod 1000000;
    a := b - a mod 1000000;
    i := i + 1;
}
";
