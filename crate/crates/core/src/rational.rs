//! Exact rational scalars.
//!
//! All geometric predicates run on [`Q`]. Every coordinate the construction
//! produces lives on the common grid `1/D` fixed by `k` and `d`, so `i128`
//! numerators and denominators stay far from overflow.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_i64(v: &Q) -> i64 {
    v.floor().to_integer() as i64
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-1.25"` exactly.
pub fn parse(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::Rational(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 18 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = 10i128.pow(frac_part.len() as u32);
    let v = Q::new(num, den);
    Ok(if neg { -v } else { v })
}

/// Largest multiple of `1/den` not exceeding `x`.
pub fn floor_to_grid(x: f64, den: i128) -> Q {
    Q::new((x * den as f64).floor() as i128, den)
}

pub fn is_integer(v: &Q) -> bool {
    v.is_integer()
}

pub fn max(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn min(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn clamp(v: Q, lo: Q, hi: Q) -> Q {
    max(lo, min(v, hi))
}

pub fn is_zero(v: &Q) -> bool {
    v.is_zero()
}

pub(crate) fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    let text = String::deserialize(d)?;
    parse(&text).map_err(serde::de::Error::custom)
}

pub(crate) mod opt {
    use super::*;

    pub(crate) fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse(&t).map_err(serde::de::Error::custom)).transpose()
    }
}
