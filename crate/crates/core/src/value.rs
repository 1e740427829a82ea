//! Exact rational costs, prices and budgets.
//!
//! Every quantity in the game (red costs, activation costs, prices, revenue)
//! is a [`Value`]: a reduced fraction of two `i128`s. Tie comparisons in the
//! follower and the pricing rule are therefore exact. The text format accepts
//! decimals (`2.75`) and fractions (`11/4`) and prints terminating decimals
//! back as decimals, so `parse(format(x)) == x` for every value.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(Ratio<i128>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{0}`")]
pub struct ParseValueError(pub String);

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    pub fn int(n: i128) -> Self {
        Value(Ratio::from_integer(n))
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn frac(num: i128, den: i128) -> Self {
        Value(Ratio::new(num, den))
    }

    /// Nearest value with denominator dividing 10^9.
    pub fn from_f64(x: f64) -> Self {
        const SCALE: i128 = 1_000_000_000;
        Value::frac((x * SCALE as f64).round() as i128, SCALE)
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn abs(self) -> Self {
        Value(self.0.abs())
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::int(n as i128)
    }
}

impl From<i32> for Value {
    fn from(n: i32) -> Self {
        Value::int(n as i128)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::int(n as i128)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::int(n as i128)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                Value(self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl AddAssign for Value {
    fn add_assign(&mut self, rhs: Value) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Value {
    fn sub_assign(&mut self, rhs: Value) {
        self.0 -= rhs.0;
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, x| acc + *x)
    }
}

/// Number of decimal digits needed if `den` is of the form 2^a 5^b.
fn terminating_digits(mut den: i128) -> Option<u32> {
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    (den == 1).then_some(twos.max(fives))
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (self.numer(), self.denom());
        if den == 1 {
            return write!(f, "{num}");
        }
        match terminating_digits(den) {
            Some(digits) if digits <= 18 => {
                let scale = 10i128.pow(digits);
                let scaled = num * (scale / den);
                let sign = if scaled < 0 { "-" } else { "" };
                let scaled = scaled.abs();
                let int = scaled / scale;
                let frac = scaled % scale;
                write!(f, "{sign}{int}.{frac:0width$}", width = digits as usize)
            }
            _ => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for Value {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseValueError(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| err())?;
            let d: i128 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Value::frac(n, d));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) || frac_part.len() > 18 {
            return Err(err());
        }
        let int: i128 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let scale = 10i128.pow(frac_part.len() as u32);
        let frac: i128 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let mag = Value::frac(int * scale + frac, scale);
        Ok(if neg { -mag } else { mag })
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("2.75".parse::<Value>().unwrap(), Value::frac(11, 4));
        assert_eq!("11/4".parse::<Value>().unwrap(), Value::frac(11, 4));
        assert_eq!("-0.5".parse::<Value>().unwrap(), Value::frac(-1, 2));
        assert_eq!("7".parse::<Value>().unwrap(), Value::int(7));
        assert_eq!(".5".parse::<Value>().unwrap(), Value::frac(1, 2));
        assert!("abc".parse::<Value>().is_err());
        assert!("1/0".parse::<Value>().is_err());
        assert!("".parse::<Value>().is_err());
        assert!("1.2.3".parse::<Value>().is_err());
    }

    #[test]
    fn formats_terminating_as_decimal() {
        assert_eq!(Value::frac(11, 4).to_string(), "2.75");
        assert_eq!(Value::frac(-1, 8).to_string(), "-0.125");
        assert_eq!(Value::int(3).to_string(), "3");
        assert_eq!(Value::frac(1, 3).to_string(), "1/3");
        assert_eq!(Value::frac(1, 20).to_string(), "0.05");
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(num in -1_000_000i128..1_000_000, den in 1i128..5000) {
            let v = Value::frac(num, den);
            prop_assert_eq!(v.to_string().parse::<Value>().unwrap(), v);
        }
    }
}
