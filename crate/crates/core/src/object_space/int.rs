//! Arbitrary-precision integers with an inline fast path for values that fit in an `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// A signed integer of unbounded magnitude.
///
/// Values that fit in an `i64` are always stored inline; the boxed form is used
/// only outside that range, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Arc<BigInt>),
}

impl Int {
    pub fn zero() -> Int {
        Int::Small(0)
    }

    pub fn from_big(v: BigInt) -> Int {
        match v.to_i64() {
            Some(small) => Int::Small(small),
            None => Int::Big(Arc::new(v)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn add(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_add(*b) {
                return Int::Small(r);
            }
        }
        self.add_big(rhs)
    }

    #[cold]
    #[inline(never)]
    fn add_big(&self, rhs: &Int) -> Int {
        Int::from_big(&*self.big_ref() + &*rhs.big_ref())
    }

    #[inline]
    pub fn sub(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_sub(*b) {
                return Int::Small(r);
            }
        }
        self.sub_big(rhs)
    }

    #[cold]
    #[inline(never)]
    fn sub_big(&self, rhs: &Int) -> Int {
        Int::from_big(&*self.big_ref() - &*rhs.big_ref())
    }

    #[inline]
    pub fn mul(&self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_mul(*b) {
                return Int::Small(r);
            }
        }
        self.mul_big(rhs)
    }

    #[cold]
    #[inline(never)]
    fn mul_big(&self, rhs: &Int) -> Int {
        Int::from_big(&*self.big_ref() * &*rhs.big_ref())
    }

    /// Floored modulo: the result has the sign of the divisor. `None` for a zero divisor.
    #[inline]
    pub fn mod_floor(&self, rhs: &Int) -> Option<Int> {
        if rhs.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            // i64::MIN % -1 overflows; it falls through to the big path
            if let Some(r) = a.checked_rem(*b) {
                let r = if r != 0 && ((r < 0) != (*b < 0)) { r + b } else { r };
                return Some(Int::Small(r));
            }
        }
        Some(self.mod_floor_big(rhs))
    }

    #[cold]
    #[inline(never)]
    fn mod_floor_big(&self, rhs: &Int) -> Int {
        Int::from_big(self.big_ref().mod_floor(&rhs.big_ref()))
    }

    fn big_ref(&self) -> std::borrow::Cow<'_, BigInt> {
        match self {
            Int::Small(v) => std::borrow::Cow::Owned(BigInt::from(*v)),
            Int::Big(b) => std::borrow::Cow::Borrowed(b),
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Int {
        Int::Small(v.into())
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Int {
        Int::from_big(v)
    }
}

impl Ord for Int {
    #[inline]
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.cmp_big(other),
        }
    }
}

impl Int {
    #[cold]
    #[inline(never)]
    fn cmp_big(&self, other: &Int) -> Ordering {
        self.big_ref().as_ref().cmp(other.big_ref().as_ref())
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid integer literal {0:?}")]
pub struct ParseIntError(pub String);

impl FromStr for Int {
    type Err = ParseIntError;

    fn from_str(s: &str) -> Result<Int, ParseIntError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseIntError(s.to_string()));
        }
        match s.parse::<i64>() {
            Ok(v) => Ok(Int::Small(v)),
            Err(_) => BigInt::from_str(s).map(Int::from_big).map_err(|_| ParseIntError(s.to_string())),
        }
    }
}

impl Default for Int {
    fn default() -> Int {
        Int::Small(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(s: &str) -> Int {
        s.parse().unwrap()
    }

    #[test]
    fn small_values_stay_inline() {
        assert!(matches!(Int::from(5).add(&Int::from(7)), Int::Small(12)));
        let huge = Int::from(i64::MAX).add(&Int::from(1));
        assert!(matches!(huge, Int::Big(_)));
        assert_eq!(huge.to_string(), "9223372036854775808");
        // shrinking back into range normalizes
        assert!(matches!(huge.sub(&Int::from(1)), Int::Small(i64::MAX)));
    }

    #[test]
    fn overflowing_multiplication() {
        let two40 = Int::from(1i64 << 40);
        // 2^80 = 1208925819614629174706176
        assert_eq!(two40.mul(&two40), big("1208925819614629174706176"));
    }

    #[test]
    fn floored_modulo() {
        let m = |a: i64, b: i64| Int::from(a).mod_floor(&Int::from(b)).unwrap();
        assert_eq!(m(-7, 3), Int::from(2));
        assert_eq!(m(7, -3), Int::from(-2));
        assert_eq!(m(-7, -3), Int::from(-1));
        assert_eq!(m(7, 3), Int::from(1));
        assert_eq!(m(i64::MIN, -1), Int::from(0));
        assert!(Int::from(1).mod_floor(&Int::zero()).is_none());
        assert_eq!(big("-100000000000000000000").mod_floor(&Int::from(7)).unwrap(), Int::from(5));
    }

    #[test]
    fn parsing() {
        assert_eq!(big("-12"), Int::from(-12));
        assert!("".parse::<Int>().is_err());
        assert!("-".parse::<Int>().is_err());
        assert!("1_0".parse::<Int>().is_err());
        assert!("+3".parse::<Int>().is_err());
    }

    fn arb_int() -> impl Strategy<Value = Int> {
        prop_oneof![
            any::<i64>().prop_map(Int::from),
            (any::<i64>(), any::<u64>()).prop_map(|(hi, lo)| Int::from_big((BigInt::from(hi) << 64) + lo)),
        ]
    }

    proptest! {
        #[test]
        fn matches_bigint_reference(a in arb_int(), b in arb_int()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!(a.add(&b), Int::from_big(&ba + &bb));
            prop_assert_eq!(a.sub(&b), Int::from_big(&ba - &bb));
            prop_assert_eq!(a.mul(&b), Int::from_big(&ba * &bb));
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
            if !b.is_zero() {
                prop_assert_eq!(a.mod_floor(&b).unwrap(), Int::from_big(ba.mod_floor(&bb)));
            }
        }
    }
}
