//! Text form of linear bytecode: one `offset: mnemonic [argument]` line per
//! instruction, variables written by name.
//!
//! When the symbol table is not simply the variables in order of first use, the
//! listing starts with a `.symbols name...` directive so that assembling the
//! listing reproduces the image byte for byte.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::frontend::{ArithOp, CmpOp};
use crate::object_space::{SymbolTable, VarId};

use super::image::{BytecodeImage, ImageError};
use super::opcode::Instr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct AsmError {
    pub line: usize,
    pub message: String,
}

fn first_use_order(instrs: &[(usize, Instr)], symbols: &SymbolTable) -> bool {
    let mut seen = SymbolTable::new();
    for (_, instr) in instrs {
        if let Some(id) = instr.var() {
            match symbols.name(id) {
                Some(name) => {
                    seen.intern(name);
                }
                None => return false,
            }
        }
    }
    seen == *symbols
}

pub fn disassemble(image: &BytecodeImage) -> Result<String, ImageError> {
    let instrs = image.instructions()?;
    let mut out = String::new();
    if !first_use_order(&instrs, &image.symbols) {
        out.push_str(".symbols");
        for name in image.symbols.names() {
            write!(out, " {name}").unwrap();
        }
        out.push('\n');
    }
    for (offset, instr) in instrs {
        write!(out, "{offset}: {}", instr.mnemonic()).unwrap();
        match instr {
            Instr::Jump(t) | Instr::JumpIfFalse(t) | Instr::JumpIfTrue(t) => write!(out, " {t}").unwrap(),
            Instr::Push1(v) => write!(out, " {v}").unwrap(),
            Instr::Push4(v) => write!(out, " {v}").unwrap(),
            Instr::Load(id) | Instr::Assign(id) => {
                let name = image
                    .symbols
                    .name(id)
                    .ok_or(ImageError::BadVariableId { offset, id: id.0 })?;
                write!(out, " {name}").unwrap();
            }
            Instr::End | Instr::Arith(_) | Instr::Not | Instr::Cmp(_) => {}
        }
        out.push('\n');
    }
    Ok(out)
}

fn no_arg(mnemonic: &str) -> Option<Instr> {
    Some(match mnemonic {
        "end" => Instr::End,
        "not" => Instr::Not,
        _ => {
            if let Some(op) = ArithOp::ALL.into_iter().find(|op| op.name() == mnemonic) {
                Instr::Arith(op)
            } else {
                Instr::Cmp(CmpOp::ALL.into_iter().find(|op| op.name() == mnemonic)?)
            }
        }
    })
}

pub fn assemble(text: &str) -> Result<BytecodeImage, AsmError> {
    let mut code = Vec::new();
    let mut symbols = SymbolTable::new();
    let mut fixed_symbols = false;
    let mut line_of_offset: HashMap<usize, usize> = HashMap::new();
    let mut seen_instr = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| AsmError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix(".symbols") {
            if seen_instr || fixed_symbols {
                return Err(err(".symbols must appear once, before any instruction".into()));
            }
            symbols = SymbolTable::from_names(rest.split_whitespace())
                .ok_or_else(|| err("duplicate name in .symbols".into()))?;
            fixed_symbols = true;
            continue;
        }
        seen_instr = true;

        let body = match content.split_once(':') {
            Some((offset, body)) => {
                let offset: usize = offset.trim().parse().map_err(|_| err(format!("bad offset {offset:?}")))?;
                if offset != code.len() {
                    return Err(err(format!("offset {offset} does not match position {}", code.len())));
                }
                body
            }
            None => content,
        };
        let mut words = body.split_whitespace();
        let mnemonic = words.next().ok_or_else(|| err("missing mnemonic".into()))?;
        let arg = words.next();
        if words.next().is_some() {
            return Err(err("too many arguments".into()));
        }

        let instr = if let Some(instr) = no_arg(mnemonic) {
            if arg.is_some() {
                return Err(err(format!("`{mnemonic}` takes no argument")));
            }
            instr
        } else {
            let arg = arg.ok_or_else(|| err(format!("`{mnemonic}` needs an argument")))?;
            let number = |what: &str| -> Result<i64, AsmError> {
                arg.parse::<i64>().map_err(|_| err(format!("bad {what} {arg:?}")))
            };
            let target = || -> Result<u32, AsmError> {
                u32::try_from(number("jump target")?).map_err(|_| err(format!("invalid target {arg}")))
            };
            let mut var = || -> Result<VarId, AsmError> {
                if fixed_symbols {
                    symbols.id(arg).ok_or_else(|| err(format!("`{arg}` is not in .symbols")))
                } else if crate::object_space::is_identifier(arg) {
                    Ok(symbols.intern(arg))
                } else {
                    Err(err(format!("bad variable name {arg:?}")))
                }
            };
            match mnemonic {
                "jump" => Instr::Jump(target()?),
                "jump-if-false" => Instr::JumpIfFalse(target()?),
                "jump-if-true" => Instr::JumpIfTrue(target()?),
                "push1" => Instr::Push1(i8::try_from(number("integer")?).map_err(|_| err(format!("{arg} does not fit push1")))?),
                "push4" => Instr::Push4(i32::try_from(number("integer")?).map_err(|_| err(format!("{arg} does not fit push4")))?),
                "load" => Instr::Load(var()?),
                "assign" => Instr::Assign(var()?),
                other => return Err(err(format!("unknown mnemonic `{other}`"))),
            }
        };
        line_of_offset.insert(code.len(), line);
        instr.encode(&mut code);
    }

    let image = BytecodeImage::new(code, symbols);
    image.validate().map_err(|e| {
        let last_line = text.lines().count().max(1);
        match e {
            ImageError::BadJumpTarget { offset, target } => {
                AsmError { line: line_of_offset[&offset], message: format!("invalid target {target}") }
            }
            other => AsmError { line: last_line, message: other.to_string() },
        }
    })?;
    Ok(image)
}
