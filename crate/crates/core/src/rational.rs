//! Exact rationals and their canonical text form (`"a/b"` in lowest terms,
//! bare integers when the denominator is one).

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn to_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<i64>().ok().map(int),
    }
}

pub fn checked_add(a: &Rational, b: &Rational, what: &'static str) -> Result<Rational> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub fn checked_scale(a: &Rational, k: i64, what: &'static str) -> Result<Rational> {
    a.checked_mul(&int(k)).ok_or(Error::Overflow(what))
}

/// Largest integer `n` with `n <= r`.
pub fn floor(r: &Rational) -> i64 {
    r.floor().to_integer()
}

/// Smallest integer `n` with `n >= r`.
pub fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer()
}

/// Largest even integer `<= r`.
pub fn floor_even(r: &Rational) -> i64 {
    let f = floor(r);
    if f.is_even() {
        f
    } else {
        f - 1
    }
}

/// Smallest even integer `>= r`.
pub fn ceil_even(r: &Rational) -> i64 {
    let c = ceil(r);
    if c.is_even() {
        c
    } else {
        c + 1
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn is_int(r: &Rational) -> bool {
    r.denom().is_one() || r.numer().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        assert_eq!(to_text(&Rational::new(-8, 2)), "-4");
        assert_eq!(to_text(&Rational::new(6, 4)), "3/2");
        assert_eq!(to_text(&Rational::new(1, -2)), "-1/2");
        assert_eq!(parse("-1/2"), Some(Rational::new(-1, 2)));
        assert_eq!(parse(" 7 "), Some(int(7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn even_rounding() {
        assert_eq!(floor_even(&Rational::new(7, 2)), 2);
        assert_eq!(floor_even(&int(-3)), -4);
        assert_eq!(ceil_even(&Rational::new(-7, 2)), -2);
        assert_eq!(ceil_even(&int(4)), 4);
    }
}
