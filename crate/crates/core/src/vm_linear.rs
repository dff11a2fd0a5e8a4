//! Stack VMs over linear bytecode.
//!
//! [`run_linear`] dispatches with a `match` on the raw byte at the program
//! counter and decodes arguments in place. [`run_decoded`] first builds a table
//! indexed by byte offset holding each instruction already decoded, then
//! dispatches on table entries; jumps stay plain offset lookups.

use crate::bytecode::opcode::{self, Instr, OpClass, CLASSES};
use crate::bytecode::{BytecodeImage, ImageError};
use crate::error::RuntimeError;
use crate::object_space::{Env, ObjectSpace, Slots, Standard, SymbolTable, Value, VarId};

/// Observer called before every executed instruction.
pub trait Probe {
    fn step(&mut self, _pc: usize, _stack_depth: usize) {}
}

impl Probe for () {}

/// Counts executed instructions and records the evaluation stack high-water mark.
///
/// Depth is sampled before each instruction; every push is followed by at
/// least one more instruction, so the maximum is never missed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub steps: u64,
    pub max_stack: usize,
}

impl Probe for RunStats {
    fn step(&mut self, _pc: usize, stack_depth: usize) {
        self.steps += 1;
        self.max_stack = self.max_stack.max(stack_depth);
    }
}

/// Records every program counter visited.
pub struct PcTrace(pub Vec<usize>);

impl Probe for PcTrace {
    fn step(&mut self, pc: usize, _stack_depth: usize) {
        self.0.push(pc);
    }
}

#[inline(always)]
fn pop(stack: &mut Vec<Value>) -> Result<Value, RuntimeError> {
    stack.pop().ok_or_else(|| RuntimeError::StackUnderflow)
}

#[inline(always)]
fn top(stack: &mut [Value]) -> Result<&mut Value, RuntimeError> {
    stack.last_mut().ok_or_else(|| RuntimeError::StackUnderflow)
}

#[inline(always)]
fn arg_u32(code: &[u8], pc: usize) -> Result<u32, RuntimeError> {
    match code.get(pc + 1..pc + 5) {
        Some(b) => Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]])),
        None => Err(ImageError::Truncated { offset: pc, opcode: code[pc] }.into()),
    }
}

pub fn run_linear(image: &BytecodeImage, env: Env) -> Result<Env, RuntimeError> {
    run_linear_in(image, env, &Standard)
}

pub fn run_linear_in<O: ObjectSpace + ?Sized>(image: &BytecodeImage, env: Env, space: &O) -> Result<Env, RuntimeError> {
    run_linear_probed(image, env, space, &mut ())
}

/// An image that has passed [`BytecodeImage::validate`], so runs can skip the check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedImage(BytecodeImage);

impl CheckedImage {
    pub fn new(image: BytecodeImage) -> Result<CheckedImage, ImageError> {
        image.validate()?;
        Ok(CheckedImage(image))
    }

    pub fn image(&self) -> &BytecodeImage {
        &self.0
    }
}

pub fn run_checked_in<O: ObjectSpace + ?Sized>(image: &CheckedImage, env: Env, space: &O) -> Result<Env, RuntimeError> {
    exec_linear(&image.0, env, space, &mut ())
}

/// Runs the image on `env`. Variables are moved into a slot array on entry
/// and written back by name on exit.
pub fn run_linear_probed<O, P>(image: &BytecodeImage, env: Env, space: &O, probe: &mut P) -> Result<Env, RuntimeError>
where
    O: ObjectSpace + ?Sized,
    P: Probe,
{
    image.validate()?;
    exec_linear(image, env, space, probe)
}

fn exec_linear<O, P>(image: &BytecodeImage, mut env: Env, space: &O, probe: &mut P) -> Result<Env, RuntimeError>
where
    O: ObjectSpace + ?Sized,
    P: Probe,
{
    let code = image.code.as_slice();
    let mut slots = Slots::bind(&image.symbols, &env);
    let mut stack: Vec<Value> = Vec::with_capacity(16);
    let mut pc = 0usize;

    while pc < code.len() {
        probe.step(pc, stack.len());
        match CLASSES[code[pc] as usize] {
            OpClass::End => break,
            OpClass::Jump => pc = arg_u32(code, pc)? as usize,
            OpClass::JumpIfFalse => {
                let c = pop(&mut stack)?;
                pc = if space.truthy(&c)? { pc + 5 } else { arg_u32(code, pc)? as usize };
            }
            OpClass::JumpIfTrue => {
                let c = pop(&mut stack)?;
                pc = if space.truthy(&c)? { arg_u32(code, pc)? as usize } else { pc + 5 };
            }
            OpClass::Push1 => {
                let v = *code.get(pc + 1).ok_or(ImageError::Truncated { offset: pc, opcode: opcode::PUSH1 })? as i8;
                stack.push(space.create_integer(v.into()));
                pc += 2;
            }
            OpClass::Push4 => {
                let v = arg_u32(code, pc)? as i32;
                stack.push(space.create_integer(v.into()));
                pc += 5;
            }
            OpClass::Load => {
                let id = VarId(arg_u32(code, pc)?);
                stack.push(space.lookup_slot(&slots, id)?);
                pc += 5;
            }
            OpClass::Assign => {
                let id = VarId(arg_u32(code, pc)?);
                let v = pop(&mut stack)?;
                space.store_slot(&mut slots, id, v)?;
                pc += 5;
            }
            OpClass::Arith(op) => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.arith(op, a, &b)?;
                pc += 1;
            }
            OpClass::Not => {
                let v = pop(&mut stack)?;
                stack.push(space.not(&v)?);
                pc += 1;
            }
            OpClass::Cmp(op) => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.compare(op, a, &b)?;
                pc += 1;
            }
            OpClass::Unknown => return Err(ImageError::UnknownOpcode { offset: pc, opcode: code[pc] }.into()),
        }
    }
    slots.write_back(&mut env);
    Ok(env)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodedInstr {
    pub instr: Instr,
    /// Offset of the following instruction.
    pub next: u32,
}

/// Offset-indexed instruction table: entry `pc` holds the instruction starting
/// at byte `pc`, or `None` inside an instruction's argument bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedProgram {
    pub entries: Vec<Option<DecodedInstr>>,
    pub symbols: SymbolTable,
}

impl DecodedProgram {
    pub fn get(&self, pc: usize) -> Option<DecodedInstr> {
        self.entries.get(pc).copied().flatten()
    }

    /// Offsets holding an instruction, ascending.
    pub fn offsets(&self) -> Vec<usize> {
        self.entries.iter().enumerate().filter(|(_, e)| e.is_some()).map(|(pc, _)| pc).collect()
    }
}

pub fn predecode(image: &BytecodeImage) -> Result<DecodedProgram, ImageError> {
    let instrs = image.validate()?;
    let mut entries = vec![None; image.code.len()];
    for (pc, instr) in instrs {
        entries[pc] = Some(DecodedInstr { instr, next: (pc + instr.len()) as u32 });
    }
    Ok(DecodedProgram { entries, symbols: image.symbols.clone() })
}

pub fn run_decoded(prog: &DecodedProgram, env: Env) -> Result<Env, RuntimeError> {
    run_decoded_in(prog, env, &Standard)
}

pub fn run_decoded_in<O: ObjectSpace + ?Sized>(prog: &DecodedProgram, env: Env, space: &O) -> Result<Env, RuntimeError> {
    run_decoded_probed(prog, env, space, &mut ())
}

pub fn run_decoded_probed<O, P>(prog: &DecodedProgram, mut env: Env, space: &O, probe: &mut P) -> Result<Env, RuntimeError>
where
    O: ObjectSpace + ?Sized,
    P: Probe,
{
    let mut slots = Slots::bind(&prog.symbols, &env);
    let mut stack: Vec<Value> = Vec::with_capacity(16);
    let mut pc = 0usize;

    while pc < prog.entries.len() {
        probe.step(pc, stack.len());
        let DecodedInstr { instr, next } = prog.get(pc).ok_or(ImageError::PcOutOfRange { pc })?;
        pc = next as usize;
        match instr {
            Instr::End => break,
            Instr::Jump(t) => pc = t as usize,
            Instr::JumpIfFalse(t) => {
                let c = pop(&mut stack)?;
                if !space.truthy(&c)? {
                    pc = t as usize;
                }
            }
            Instr::JumpIfTrue(t) => {
                let c = pop(&mut stack)?;
                if space.truthy(&c)? {
                    pc = t as usize;
                }
            }
            Instr::Push1(v) => stack.push(space.create_integer(v.into())),
            Instr::Push4(v) => stack.push(space.create_integer(v.into())),
            Instr::Load(id) => stack.push(space.lookup_slot(&slots, id)?),
            Instr::Assign(id) => {
                let v = pop(&mut stack)?;
                space.store_slot(&mut slots, id, v)?;
            }
            Instr::Arith(op) => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.arith(op, a, &b)?;
            }
            Instr::Cmp(op) => {
                let b = pop(&mut stack)?;
                let a = top(&mut stack)?;
                *a = space.compare(op, a, &b)?;
            }
            Instr::Not => {
                let v = pop(&mut stack)?;
                stack.push(space.not(&v)?);
            }
        }
    }
    slots.write_back(&mut env);
    Ok(env)
}
