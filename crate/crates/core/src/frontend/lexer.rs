use std::fmt;

use thiserror::Error;

/// Line/column position in the source, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    While,
    If,
    Else,
    Plus,
    Minus,
    Star,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Bang,
    /// Both `=` and `:=`.
    Assign,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
}

impl TokenKind {
    /// Whether the token can end an operand; a `-` after such a token is subtraction.
    fn ends_operand(&self) -> bool {
        matches!(self, TokenKind::Ident(_) | TokenKind::Int(_) | TokenKind::RParen)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(name) => write!(f, "identifier `{name}`"),
            TokenKind::Int(v) => write!(f, "integer {v}"),
            TokenKind::While => f.write_str("`while`"),
            TokenKind::If => f.write_str("`if`"),
            TokenKind::Else => f.write_str("`else`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::Mod => f.write_str("`mod`"),
            TokenKind::Lt => f.write_str("`<`"),
            TokenKind::Le => f.write_str("`<=`"),
            TokenKind::Gt => f.write_str("`>`"),
            TokenKind::Ge => f.write_str("`>=`"),
            TokenKind::EqEq => f.write_str("`==`"),
            TokenKind::Bang => f.write_str("`!`"),
            TokenKind::Assign => f.write_str("`=`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{pos}: unexpected character {ch:?}")]
    UnexpectedChar { pos: Pos, ch: char },
    #[error("{pos}: integer literal {text} does not fit in 32 bits")]
    LiteralOutOfRange { pos: Pos, text: String },
}

impl LexError {
    pub fn pos(&self) -> Pos {
        match self {
            LexError::UnexpectedChar { pos, .. } | LexError::LiteralOutOfRange { pos, .. } => *pos,
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset();
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        let end = self.offset();
        &self.src[start..end]
    }
}

/// Splits source text into tokens. `#` starts a comment running to the end of the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { chars: source.char_indices().peekable(), src: source, line: 1, col: 1 };
    let mut tokens: Vec<Token> = Vec::new();

    while let Some(c) = cur.peek() {
        let pos = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            cur.eat_while(|c| c != '\n');
            continue;
        }

        let negative_literal = c == '-'
            && cur.peek_second().is_some_and(|d| d.is_ascii_digit())
            && !tokens.last().is_some_and(|t| t.kind.ends_operand());

        let kind = if c.is_ascii_digit() || negative_literal {
            let start = cur.offset();
            if negative_literal {
                cur.bump();
            }
            cur.eat_while(|c| c.is_ascii_digit());
            let text = &source[start..cur.offset()];
            let value = text
                .parse::<i64>()
                .ok()
                .filter(|v| i32::try_from(*v).is_ok())
                .ok_or_else(|| LexError::LiteralOutOfRange { pos, text: text.to_string() })?;
            TokenKind::Int(value)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let word = cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
            match word {
                "while" => TokenKind::While,
                "if" => TokenKind::If,
                "else" => TokenKind::Else,
                "mod" => TokenKind::Mod,
                _ => TokenKind::Ident(word.to_string()),
            }
        } else {
            cur.bump();
            let next = cur.peek();
            let two = |cur: &mut Cursor<'_>, kind| {
                cur.bump();
                kind
            };
            match (c, next) {
                ('<', Some('=')) => two(&mut cur, TokenKind::Le),
                ('>', Some('=')) => two(&mut cur, TokenKind::Ge),
                ('=', Some('=')) => two(&mut cur, TokenKind::EqEq),
                (':', Some('=')) => two(&mut cur, TokenKind::Assign),
                ('<', _) => TokenKind::Lt,
                ('>', _) => TokenKind::Gt,
                ('=', _) => TokenKind::Assign,
                ('+', _) => TokenKind::Plus,
                ('-', _) => TokenKind::Minus,
                ('*', _) => TokenKind::Star,
                ('!', _) => TokenKind::Bang,
                (';', _) => TokenKind::Semi,
                ('{', _) => TokenKind::LBrace,
                ('}', _) => TokenKind::RBrace,
                ('(', _) => TokenKind::LParen,
                (')', _) => TokenKind::RParen,
                _ => return Err(LexError::UnexpectedChar { pos, ch: c }),
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}
