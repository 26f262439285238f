//! Exact rational arithmetic. Everything downstream of the formulation layer
//! (feasibility checks, simplex, decompositions) runs on `Rat`; no floating
//! point enters the pipeline.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational, kept canonical (coprime, positive denominator)
/// by the underlying representation.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn is_one(r: &Rat) -> bool {
    r.is_one()
}

/// True iff the value is exactly 0 or exactly 1.
pub fn is_zero_or_one(r: &Rat) -> bool {
    r.is_zero() || r.is_one()
}

/// Renders a rational whose denominator is of the form 2^a * 5^b as an exact
/// terminating decimal. Returns `None` for non-terminating fractions.
pub fn to_terminating_decimal(r: &Rat) -> Option<String> {
    let mut den = r.denom().clone();
    if den.is_one() {
        return Some(r.numer().to_string());
    }
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    // Scale numerator so the denominator becomes 10^digits.
    let mut numer = r.numer().clone();
    for _ in twos..digits {
        numer *= &two;
    }
    for _ in fives..digits {
        numer *= &five;
    }
    let neg = numer.is_negative();
    let mut s = numer.abs().to_string();
    let d = digits as usize;
    if s.len() <= d {
        let zeros = "0".repeat(d - s.len());
        s = format!("0.{zeros}{s}");
    } else {
        s.insert(s.len() - d, '.');
    }
    // Trim trailing zeros after the decimal point but keep at least one digit.
    while s.contains('.') && s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if neg {
        s.insert(0, '-');
    }
    Some(s)
}

/// Parses either a plain integer, a terminating decimal, or a `p/q` fraction.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let num: BigInt = frac_part.parse().ok()?;
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        let frac = BigRational::new(num, den);
        let int = BigRational::from_integer(int);
        return Some(if neg { int - frac } else { int + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminating_decimals() {
        assert_eq!(to_terminating_decimal(&rat_frac(1, 2)).unwrap(), "0.5");
        assert_eq!(to_terminating_decimal(&rat_frac(-3, 4)).unwrap(), "-0.75");
        assert_eq!(to_terminating_decimal(&rat_frac(1, 10)).unwrap(), "0.1");
        assert_eq!(to_terminating_decimal(&rat(7)).unwrap(), "7");
        assert_eq!(to_terminating_decimal(&rat_frac(1, 3)), None);
        assert_eq!(to_terminating_decimal(&rat_frac(5, 40)).unwrap(), "0.125");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["5", "-3", "0.5", "-0.75", "2/3", "-7/5"] {
            let r = parse_rat(s).unwrap();
            let again = parse_rat(&match to_terminating_decimal(&r) {
                Some(d) => d,
                None => format!("{}/{}", r.numer(), r.denom()),
            })
            .unwrap();
            assert_eq!(r, again);
        }
    }
}
