//! Value semantics shared by every backend: integer creation, arithmetic,
//! comparison, negation, truth tests and environment access.
//!
//! Backends never compute on values themselves. They call an [`ObjectSpace`],
//! either monomorphised against [`Standard`] ([`Boundary::Static`]) or through
//! a `&dyn ObjectSpace` ([`Boundary::Dynamic`]), so the cost of crossing the
//! dispatch/semantics boundary can be measured on its own.

mod env;
mod int;
mod value;

use std::fmt;
use std::str::FromStr;

pub use env::{is_identifier, parse_binding, Env, EnvFileError, Slots, SymbolTable, VarId};
pub use int::{Int, ParseIntError};
pub use value::{Value, ValueKind};

use crate::error::RuntimeError;
use crate::frontend::{ArithOp, CmpOp};

#[cold]
#[inline(never)]
fn type_error(op: &'static str, expected: ValueKind, found: &Value) -> RuntimeError {
    RuntimeError::TypeError { op, expected, found: found.kind() }
}

/// The operand that is not an integer, for error reporting.
#[cold]
#[inline(never)]
fn int_operands_error(op: &'static str, a: &Value, b: &Value) -> RuntimeError {
    let bad = if matches!(a, Value::Int(_)) { b } else { a };
    type_error(op, ValueKind::Integer, bad)
}

#[inline]
fn expect_bool(op: &'static str, v: &Value) -> Result<bool, RuntimeError> {
    match v {
        Value::Bool(b) => Ok(*b),
        other => Err(type_error(op, ValueKind::Boolean, other)),
    }
}

#[inline(always)]
pub fn arith(op: ArithOp, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
    let (Value::Int(a), Value::Int(b)) = (a, b) else {
        return Err(int_operands_error(op.name(), a, b));
    };
    let r = match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Mod => a.mod_floor(b).ok_or_else(|| RuntimeError::DivisionByZero)?,
    };
    Ok(Value::Int(r))
}

#[inline(always)]
pub fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
    let (Value::Int(a), Value::Int(b)) = (a, b) else {
        return Err(int_operands_error(op.name(), a, b));
    };
    let r = match op {
        CmpOp::Lt => a < b,
        CmpOp::Le => a <= b,
        CmpOp::Gt => a > b,
        CmpOp::Ge => a >= b,
        CmpOp::Eq => a == b,
    };
    Ok(Value::Bool(r))
}

#[inline(always)]
pub fn bool_not(v: &Value) -> Result<Value, RuntimeError> {
    Ok(Value::Bool(!expect_bool("not", v)?))
}

/// Conditions must be booleans; integers are not implicitly truthy.
#[inline(always)]
pub fn truthy(v: &Value) -> Result<bool, RuntimeError> {
    expect_bool("condition", v)
}

#[inline(always)]
pub fn lookup(env: &Env, name: &str) -> Result<Value, RuntimeError> {
    env.get(name)
        .map(|v| Value::Int(v.clone()))
        .ok_or_else(|| RuntimeError::UnboundVariable(name.into()))
}

#[inline(always)]
pub fn store(env: &mut Env, name: &str, v: Value) -> Result<(), RuntimeError> {
    let v = match v {
        Value::Int(i) => i,
        other => return Err(type_error("store", ValueKind::Integer, &other)),
    };
    env.set(name, v);
    Ok(())
}

#[inline(always)]
pub fn lookup_slot(slots: &Slots<'_>, id: VarId) -> Result<Value, RuntimeError> {
    match slots.get(id) {
        Some(Some(v)) => Ok(Value::Int(v.clone())),
        _ => Err(slot_error(slots, id)),
    }
}

#[cold]
#[inline(never)]
fn slot_error(slots: &Slots<'_>, id: VarId) -> RuntimeError {
    match slots.get(id) {
        None => RuntimeError::BadVariableId(id.0),
        Some(_) => RuntimeError::UnboundVariable(slots.symbols().name(id).unwrap_or_default().into()),
    }
}

#[inline(always)]
pub fn store_slot(slots: &mut Slots<'_>, id: VarId, v: Value) -> Result<(), RuntimeError> {
    let v = match v {
        Value::Int(i) => i,
        other => return Err(type_error("store", ValueKind::Integer, &other)),
    };
    *slots.get_mut(id).ok_or_else(|| RuntimeError::BadVariableId(id.0))? = Some(v);
    Ok(())
}

/// The semantics layer called by every backend. All methods default to the
/// standard semantics; an implementation overrides only what it changes.
pub trait ObjectSpace {
    #[inline(always)]
    fn create_integer(&self, v: i64) -> Value {
        Value::Int(Int::from(v))
    }

    #[inline(always)]
    fn arith(&self, op: ArithOp, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
        arith(op, a, b)
    }

    #[inline(always)]
    fn compare(&self, op: CmpOp, a: &Value, b: &Value) -> Result<Value, RuntimeError> {
        compare(op, a, b)
    }

    #[inline(always)]
    fn not(&self, v: &Value) -> Result<Value, RuntimeError> {
        bool_not(v)
    }

    #[inline(always)]
    fn truthy(&self, v: &Value) -> Result<bool, RuntimeError> {
        truthy(v)
    }

    #[inline(always)]
    fn lookup(&self, env: &Env, name: &str) -> Result<Value, RuntimeError> {
        lookup(env, name)
    }

    #[inline(always)]
    fn store(&self, env: &mut Env, name: &str, v: Value) -> Result<(), RuntimeError> {
        store(env, name, v)
    }

    #[inline(always)]
    fn lookup_slot(&self, slots: &Slots<'_>, id: VarId) -> Result<Value, RuntimeError> {
        lookup_slot(slots, id)
    }

    #[inline(always)]
    fn store_slot(&self, slots: &mut Slots<'_>, id: VarId, v: Value) -> Result<(), RuntimeError> {
        store_slot(slots, id, v)
    }
}

/// The language's semantics, unmodified.
#[derive(Debug, Clone, Copy, Default)]
pub struct Standard;

impl ObjectSpace for Standard {}

/// How a backend reaches the object space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum Boundary {
    /// Calls resolved at compile time against [`Standard`].
    #[default]
    Static,
    /// Every call goes through a `dyn ObjectSpace` vtable.
    Dynamic,
}

impl Boundary {
    pub const ALL: [Boundary; 2] = [Boundary::Static, Boundary::Dynamic];

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Static => "static",
            Boundary::Dynamic => "dynamic",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Boundary, String> {
        match s {
            "static" => Ok(Boundary::Static),
            "dynamic" => Ok(Boundary::Dynamic),
            other => Err(format!("unknown boundary mode `{other}` (expected static or dynamic)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn int(v: i64) -> Value {
        Value::from(v)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(arith(ArithOp::Add, &int(2), &int(3)), Ok(int(5)));
        assert_eq!(arith(ArithOp::Mod, &int(-7), &int(3)), Ok(int(2)));
        assert_eq!(arith(ArithOp::Mod, &int(1), &int(0)), Err(RuntimeError::DivisionByZero));
        let two40 = int(1 << 40);
        let product = arith(ArithOp::Mul, &two40, &two40).unwrap();
        // 2^80 by repeated doubling in u128, independent of the big-integer path
        let oracle: u128 = (0..80).fold(1u128, |acc, _| acc * 2);
        assert_eq!(product.to_string(), oracle.to_string());
    }

    #[test]
    fn type_errors() {
        let t = Value::Bool(true);
        assert!(matches!(arith(ArithOp::Add, &t, &int(1)), Err(RuntimeError::TypeError { .. })));
        assert!(matches!(compare(CmpOp::Lt, &int(1), &t), Err(RuntimeError::TypeError { .. })));
        assert!(matches!(bool_not(&int(1)), Err(RuntimeError::TypeError { .. })));
        assert!(matches!(truthy(&int(0)), Err(RuntimeError::TypeError { .. })));
    }

    #[test]
    fn comparisons() {
        assert_eq!(compare(CmpOp::Gt, &int(5), &int(0)), Ok(Value::Bool(true)));
        assert_eq!(compare(CmpOp::Eq, &int(0), &int(0)), Ok(Value::Bool(true)));
        let p = Value::Int(Int::from_big(BigInt::from(1) << 100));
        let p1 = Value::Int(Int::from_big((BigInt::from(1) << 100) + 1));
        assert_eq!(compare(CmpOp::Lt, &p, &p1), Ok(Value::Bool(true)));
        assert_eq!(compare(CmpOp::Ge, &p, &p1), Ok(Value::Bool(false)));
    }

    #[test]
    fn negation_and_truth() {
        assert_eq!(bool_not(&Value::Bool(true)), Ok(Value::Bool(false)));
        assert_eq!(bool_not(&Value::Bool(false)), Ok(Value::Bool(true)));
        assert_eq!(truthy(&Value::Bool(true)), Ok(true));
        assert_eq!(truthy(&Value::Bool(false)), Ok(false));
    }

    #[test]
    fn environment_access() {
        let mut env: Env = [("base", 2i64)].into_iter().collect();
        assert_eq!(lookup(&env, "base"), Ok(int(2)));
        assert_eq!(lookup(&Env::new(), "x"), Err(RuntimeError::UnboundVariable("x".into())));
        store(&mut env, "v", int(7)).unwrap();
        assert_eq!(lookup(&env, "v"), Ok(int(7)));
        store(&mut env, "v", int(8)).unwrap();
        assert_eq!(env.get("v"), Some(&Int::from(8)));
        let mut empty = Env::new();
        assert!(matches!(store(&mut empty, "x", Value::Bool(true)), Err(RuntimeError::TypeError { .. })));
        assert!(empty.is_empty());
    }

    #[test]
    fn slot_access() {
        let symbols = SymbolTable::from_names(["a", "b"]).unwrap();
        let mut slots = Slots::bind(&symbols, &[("a", 1i64)].into_iter().collect());
        assert_eq!(lookup_slot(&slots, VarId(0)), Ok(int(1)));
        assert_eq!(lookup_slot(&slots, VarId(1)), Err(RuntimeError::UnboundVariable("b".into())));
        assert_eq!(lookup_slot(&slots, VarId(2)), Err(RuntimeError::BadVariableId(2)));
        store_slot(&mut slots, VarId(1), int(3)).unwrap();
        assert_eq!(lookup_slot(&slots, VarId(1)), Ok(int(3)));
        assert!(store_slot(&mut slots, VarId(1), Value::Bool(false)).is_err());
    }

    #[test]
    fn dynamic_space_matches_static() {
        let space: &dyn ObjectSpace = &Standard;
        assert_eq!(space.arith(ArithOp::Sub, &int(2), &int(5)), Standard.arith(ArithOp::Sub, &int(2), &int(5)));
        assert_eq!(space.create_integer(4), int(4));
    }

    fn arb_int() -> impl Strategy<Value = Value> {
        prop_oneof![
            any::<i64>().prop_map(Value::from),
            any::<i128>().prop_map(|v| Value::Int(Int::from_big(BigInt::from(v) * BigInt::from(u64::MAX)))),
        ]
    }

    proptest! {
        #[test]
        fn floored_mod_identity(a in arb_int(), b in arb_int()) {
            let (Value::Int(ai), Value::Int(bi)) = (&a, &b) else { unreachable!() };
            prop_assume!(!bi.is_zero());
            let Value::Int(r) = arith(ArithOp::Mod, &a, &b).unwrap() else { unreachable!() };
            let (ab, bb, rb) = (ai.to_big(), bi.to_big(), r.to_big());
            // a = floor(a/b)*b + r
            let q = num_integer::Integer::div_floor(&ab, &bb);
            prop_assert_eq!(&q * &bb + &rb, ab);
            if bb > BigInt::from(0) {
                prop_assert!(rb >= BigInt::from(0) && rb < bb);
            }
        }

        #[test]
        fn add_sub_inverse(a in arb_int(), b in arb_int()) {
            let s = arith(ArithOp::Add, &a, &b).unwrap();
            prop_assert_eq!(arith(ArithOp::Sub, &s, &b).unwrap(), a);
        }

        #[test]
        fn trichotomy(a in arb_int(), b in arb_int()) {
            let holds = |op| compare(op, &a, &b) == Ok(Value::Bool(true));
            let count = [CmpOp::Lt, CmpOp::Eq, CmpOp::Gt].into_iter().filter(|&op| holds(op)).count();
            prop_assert_eq!(count, 1);
        }
    }
}
