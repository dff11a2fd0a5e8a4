//! The instruction set and its byte encoding.
//!
//! | code | mnemonic      | argument                  |
//! |------|---------------|---------------------------|
//! | 0    | end           | -                         |
//! | 10   | jump          | 4-byte program counter    |
//! | 11   | jump-if-false | 4-byte program counter    |
//! | 12   | jump-if-true  | 4-byte program counter    |
//! | 20   | push1         | 1-byte signed integer     |
//! | 21   | push4         | 4-byte signed integer     |
//! | 40   | load          | 4-byte variable id        |
//! | 45   | assign        | 4-byte variable id        |
//! | 197  | mod           | -                         |
//! | 198  | mul           | -                         |
//! | 199  | sub           | -                         |
//! | 200  | add           | -                         |
//! | 240  | not           | -                         |
//! | 251  | eq            | -                         |
//! | 252  | le            | -                         |
//! | 253  | lt            | -                         |
//! | 254  | ge            | -                         |
//! | 255  | gt            | -                         |
//!
//! Multi-byte arguments are stored least significant byte first. Program
//! counters and variable ids are unsigned, `push4` is signed.

use crate::frontend::{ArithOp, CmpOp};
use crate::object_space::VarId;

use super::ImageError;

pub const END: u8 = 0;
pub const JUMP: u8 = 10;
pub const JUMP_IF_FALSE: u8 = 11;
pub const JUMP_IF_TRUE: u8 = 12;
pub const PUSH1: u8 = 20;
pub const PUSH4: u8 = 21;
pub const LOAD: u8 = 40;
pub const ASSIGN: u8 = 45;
pub const MOD: u8 = 197;
pub const MUL: u8 = 198;
pub const SUB: u8 = 199;
pub const ADD: u8 = 200;
pub const NOT: u8 = 240;
pub const EQ: u8 = 251;
pub const LE: u8 = 252;
pub const LT: u8 = 253;
pub const GE: u8 = 254;
pub const GT: u8 = 255;

/// Opcode classes in a dense range, so byte dispatch compiles to a jump table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    Unknown,
    End,
    Jump,
    JumpIfFalse,
    JumpIfTrue,
    Push1,
    Push4,
    Load,
    Assign,
    Arith(ArithOp),
    Not,
    Cmp(CmpOp),
}

/// Class of every byte value.
pub static CLASSES: [OpClass; 256] = {
    let mut t = [OpClass::Unknown; 256];
    t[END as usize] = OpClass::End;
    t[JUMP as usize] = OpClass::Jump;
    t[JUMP_IF_FALSE as usize] = OpClass::JumpIfFalse;
    t[JUMP_IF_TRUE as usize] = OpClass::JumpIfTrue;
    t[PUSH1 as usize] = OpClass::Push1;
    t[PUSH4 as usize] = OpClass::Push4;
    t[LOAD as usize] = OpClass::Load;
    t[ASSIGN as usize] = OpClass::Assign;
    t[MOD as usize] = OpClass::Arith(ArithOp::Mod);
    t[MUL as usize] = OpClass::Arith(ArithOp::Mul);
    t[SUB as usize] = OpClass::Arith(ArithOp::Sub);
    t[ADD as usize] = OpClass::Arith(ArithOp::Add);
    t[NOT as usize] = OpClass::Not;
    t[EQ as usize] = OpClass::Cmp(CmpOp::Eq);
    t[LE as usize] = OpClass::Cmp(CmpOp::Le);
    t[LT as usize] = OpClass::Cmp(CmpOp::Lt);
    t[GE as usize] = OpClass::Cmp(CmpOp::Ge);
    t[GT as usize] = OpClass::Cmp(CmpOp::Gt);
    t
};

pub fn arith_opcode(op: ArithOp) -> u8 {
    match op {
        ArithOp::Mod => MOD,
        ArithOp::Mul => MUL,
        ArithOp::Sub => SUB,
        ArithOp::Add => ADD,
    }
}

pub fn cmp_opcode(op: CmpOp) -> u8 {
    match op {
        CmpOp::Eq => EQ,
        CmpOp::Le => LE,
        CmpOp::Lt => LT,
        CmpOp::Ge => GE,
        CmpOp::Gt => GT,
    }
}

/// One decoded instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    End,
    Jump(u32),
    JumpIfFalse(u32),
    JumpIfTrue(u32),
    Push1(i8),
    Push4(i32),
    Load(VarId),
    Assign(VarId),
    Arith(ArithOp),
    Not,
    Cmp(CmpOp),
}

impl Instr {
    pub fn opcode(self) -> u8 {
        match self {
            Instr::End => END,
            Instr::Jump(_) => JUMP,
            Instr::JumpIfFalse(_) => JUMP_IF_FALSE,
            Instr::JumpIfTrue(_) => JUMP_IF_TRUE,
            Instr::Push1(_) => PUSH1,
            Instr::Push4(_) => PUSH4,
            Instr::Load(_) => LOAD,
            Instr::Assign(_) => ASSIGN,
            Instr::Arith(op) => arith_opcode(op),
            Instr::Not => NOT,
            Instr::Cmp(op) => cmp_opcode(op),
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Instr::End => "end",
            Instr::Jump(_) => "jump",
            Instr::JumpIfFalse(_) => "jump-if-false",
            Instr::JumpIfTrue(_) => "jump-if-true",
            Instr::Push1(_) => "push1",
            Instr::Push4(_) => "push4",
            Instr::Load(_) => "load",
            Instr::Assign(_) => "assign",
            Instr::Arith(op) => op.name(),
            Instr::Not => "not",
            Instr::Cmp(op) => op.name(),
        }
    }

    /// Encoded size in bytes, opcode included.
    pub fn len(self) -> usize {
        1 + arg_width(self.opcode()).unwrap_or(0)
    }

    pub fn jump_target(self) -> Option<u32> {
        match self {
            Instr::Jump(t) | Instr::JumpIfFalse(t) | Instr::JumpIfTrue(t) => Some(t),
            _ => None,
        }
    }

    pub fn var(self) -> Option<VarId> {
        match self {
            Instr::Load(v) | Instr::Assign(v) => Some(v),
            _ => None,
        }
    }

    pub fn encode(self, out: &mut Vec<u8>) {
        out.push(self.opcode());
        match self {
            Instr::Jump(t) | Instr::JumpIfFalse(t) | Instr::JumpIfTrue(t) => out.extend_from_slice(&t.to_le_bytes()),
            Instr::Push1(v) => out.push(v as u8),
            Instr::Push4(v) => out.extend_from_slice(&v.to_le_bytes()),
            Instr::Load(id) | Instr::Assign(id) => out.extend_from_slice(&id.0.to_le_bytes()),
            Instr::End | Instr::Arith(_) | Instr::Not | Instr::Cmp(_) => {}
        }
    }

    /// Decodes the instruction starting at `pc`.
    pub fn decode(code: &[u8], pc: usize) -> Result<Instr, ImageError> {
        let opcode = *code.get(pc).ok_or(ImageError::PcOutOfRange { pc })?;
        let width = arg_width(opcode).ok_or(ImageError::UnknownOpcode { offset: pc, opcode })?;
        let arg = code.get(pc + 1..pc + 1 + width).ok_or(ImageError::Truncated { offset: pc, opcode })?;
        let u32_arg = || u32::from_le_bytes([arg[0], arg[1], arg[2], arg[3]]);
        Ok(match opcode {
            END => Instr::End,
            JUMP => Instr::Jump(u32_arg()),
            JUMP_IF_FALSE => Instr::JumpIfFalse(u32_arg()),
            JUMP_IF_TRUE => Instr::JumpIfTrue(u32_arg()),
            PUSH1 => Instr::Push1(arg[0] as i8),
            PUSH4 => Instr::Push4(u32_arg() as i32),
            LOAD => Instr::Load(VarId(u32_arg())),
            ASSIGN => Instr::Assign(VarId(u32_arg())),
            MOD => Instr::Arith(ArithOp::Mod),
            MUL => Instr::Arith(ArithOp::Mul),
            SUB => Instr::Arith(ArithOp::Sub),
            ADD => Instr::Arith(ArithOp::Add),
            NOT => Instr::Not,
            EQ => Instr::Cmp(CmpOp::Eq),
            LE => Instr::Cmp(CmpOp::Le),
            LT => Instr::Cmp(CmpOp::Lt),
            GE => Instr::Cmp(CmpOp::Ge),
            GT => Instr::Cmp(CmpOp::Gt),
            _ => unreachable!("arg_width accepted opcode {opcode}"),
        })
    }
}

/// Argument width in bytes, or `None` for an unknown opcode.
pub fn arg_width(opcode: u8) -> Option<usize> {
    match opcode {
        JUMP | JUMP_IF_FALSE | JUMP_IF_TRUE | PUSH4 | LOAD | ASSIGN => Some(4),
        PUSH1 => Some(1),
        END | MOD | MUL | SUB | ADD | NOT | EQ | LE | LT | GE | GT => Some(0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_byte_fields_are_little_endian() {
        let mut out = Vec::new();
        Instr::Jump(0x0403_0201).encode(&mut out);
        assert_eq!(out, [10, 0x01, 0x02, 0x03, 0x04]);
        out.clear();
        Instr::Push4(-2).encode(&mut out);
        assert_eq!(out, [21, 0xfe, 0xff, 0xff, 0xff]);
        out.clear();
        Instr::Load(VarId(300)).encode(&mut out);
        assert_eq!(out, [40, 0x2c, 0x01, 0, 0]);
        out.clear();
        Instr::Push1(-1).encode(&mut out);
        assert_eq!(out, [20, 0xff]);
    }

    #[test]
    fn decode_inverts_encode_for_every_opcode() {
        let all = [
            Instr::End,
            Instr::Jump(7),
            Instr::JumpIfFalse(54),
            Instr::JumpIfTrue(u32::MAX),
            Instr::Push1(i8::MIN),
            Instr::Push4(i32::MIN),
            Instr::Load(VarId(1)),
            Instr::Assign(VarId(2)),
            Instr::Not,
        ]
        .into_iter()
        .chain(ArithOp::ALL.map(Instr::Arith))
        .chain(CmpOp::ALL.map(Instr::Cmp));
        for instr in all {
            let mut out = vec![0xaa];
            instr.encode(&mut out);
            assert_eq!(out.len(), 1 + instr.len());
            assert_eq!(Instr::decode(&out, 1), Ok(instr));
        }
    }

    #[test]
    fn decode_errors() {
        assert_eq!(Instr::decode(&[99], 0), Err(ImageError::UnknownOpcode { offset: 0, opcode: 99 }));
        assert_eq!(Instr::decode(&[21, 1, 2], 0), Err(ImageError::Truncated { offset: 0, opcode: 21 }));
        assert_eq!(Instr::decode(&[0], 1), Err(ImageError::PcOutOfRange { pc: 1 }));
    }
}
