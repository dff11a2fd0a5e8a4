
use thiserror::Error;

use crate::object_space::SymbolTable;

use super::opcode::Instr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("unknown opcode {opcode} at offset {offset}")]
    UnknownOpcode { offset: usize, opcode: u8 },
    #[error("truncated argument of opcode {opcode} at offset {offset}")]
    Truncated { offset: usize, opcode: u8 },
    #[error("program counter {pc} is outside the code")]
    PcOutOfRange { pc: usize },
    #[error("jump at offset {offset} targets {target}, which is not an instruction start")]
    BadJumpTarget { offset: usize, target: u32 },
    #[error("instruction at offset {offset} references variable id {id} outside the symbol table")]
    BadVariableId { offset: usize, id: u32 },
    #[error("code does not end with the end instruction")]
    MissingTerminator,
    #[error("not an .acbc file (bad magic)")]
    BadMagic,
    #[error("unsupported .acbc version {0}")]
    UnsupportedVersion(u8),
    #[error("file is truncated")]
    TruncatedFile,
    #[error("symbol {0} is not valid UTF-8")]
    BadSymbolName(usize),
    #[error("symbol `{0}` appears twice")]
    DuplicateSymbol(String),
    #[error("{0} unexpected bytes after the code section")]
    TrailingBytes(usize),
}

/// A linear bytecode program: code bytes plus the names of its variable ids.
/// Execution starts at offset 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BytecodeImage {
    pub code: Vec<u8>,
    pub symbols: SymbolTable,
}

pub const ACBC_MAGIC: &[u8; 4] = b"ACBC";
pub const ACBC_VERSION: u8 = 1;

impl BytecodeImage {
    pub fn new(code: Vec<u8>, symbols: SymbolTable) -> BytecodeImage {
        BytecodeImage { code, symbols }
    }

    /// Decodes the instructions laid out back to back from offset 0.
    pub fn instructions(&self) -> Result<Vec<(usize, Instr)>, ImageError> {
        let mut out = Vec::new();
        let mut pc = 0;
        while pc < self.code.len() {
            let instr = Instr::decode(&self.code, pc)?;
            out.push((pc, instr));
            pc += instr.len();
        }
        Ok(out)
    }

    /// Checks the structural invariants the VMs rely on: every instruction decodes,
    /// jumps land on instruction starts (or one past the end), variable ids are in
    /// range and the code ends with `end`.
    pub fn validate(&self) -> Result<Vec<(usize, Instr)>, ImageError> {
        let instrs = self.instructions()?;
        match instrs.last() {
            Some(&(offset, Instr::End)) if offset + 1 == self.code.len() => {}
            _ => return Err(ImageError::MissingTerminator),
        }
        let mut starts = vec![false; self.code.len() + 1];
        for &(pc, _) in &instrs {
            starts[pc] = true;
        }
        starts[self.code.len()] = true;
        for &(offset, instr) in &instrs {
            if let Some(target) = instr.jump_target() {
                let t = target as usize;
                if !starts.get(t).copied().unwrap_or(false) {
                    return Err(ImageError::BadJumpTarget { offset, target });
                }
            }
            if let Some(id) = instr.var() {
                if id.index() >= self.symbols.len() {
                    return Err(ImageError::BadVariableId { offset, id: id.0 });
                }
            }
        }
        Ok(instrs)
    }

    /// Serializes to the `.acbc` container.
    pub fn to_acbc(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.code.len());
        out.extend_from_slice(ACBC_MAGIC);
        out.push(ACBC_VERSION);
        out.extend_from_slice(&(self.symbols.len() as u32).to_le_bytes());
        for name in self.symbols.names() {
            out.extend_from_slice(&(name.len() as u16).to_le_bytes());
            out.extend_from_slice(name.as_bytes());
        }
        out.extend_from_slice(&(self.code.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.code);
        out
    }

    /// Parses an `.acbc` container and validates the contained image.
    pub fn from_acbc(bytes: &[u8]) -> Result<BytecodeImage, ImageError> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(4)? != ACBC_MAGIC {
            return Err(ImageError::BadMagic);
        }
        let version = r.take(1)?[0];
        if version != ACBC_VERSION {
            return Err(ImageError::UnsupportedVersion(version));
        }
        let count = r.u32()? as usize;
        let mut symbols = SymbolTable::new();
        for i in 0..count {
            let len = r.u16()? as usize;
            let name = std::str::from_utf8(r.take(len)?).map_err(|_| ImageError::BadSymbolName(i))?;
            if symbols.id(name).is_some() {
                return Err(ImageError::DuplicateSymbol(name.to_string()));
            }
            symbols.intern(name);
        }
        let code_len = r.u32()? as usize;
        let code = r.take(code_len)?.to_vec();
        if r.at != bytes.len() {
            return Err(ImageError::TrailingBytes(bytes.len() - r.at));
        }
        let image = BytecodeImage { code, symbols };
        image.validate()?;
        Ok(image)
    }
}

struct Reader<'b> {
    bytes: &'b [u8],
    at: usize,
}

impl<'b> Reader<'b> {
    fn take(&mut self, n: usize) -> Result<&'b [u8], ImageError> {
        let s = self.bytes.get(self.at..self.at + n).ok_or(ImageError::TruncatedFile)?;
        self.at += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, ImageError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, ImageError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}
