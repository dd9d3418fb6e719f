//! Exact coefficient fields.
//!
//! A [`Field`] value is a small context object (zero-sized for the rationals,
//! the modulus for a prime field) and elements are plain values manipulated
//! through it. Every matrix and subspace carries its field, so generic code
//! never needs global state.

use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Parses `"p"` or `"p/q"` with integer `p`, `q`.
    fn parse(&self, s: &str) -> Result<Self::Elem, Error>;
    /// Canonical text form, inverse of [`Field::parse`].
    fn render(&self, a: &Self::Elem) -> String;
    /// Short name used in reports and documents (`QQ`, `fp:7`).
    fn name(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `acc + a * b`
    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }

    fn pow_sign(&self, odd: bool) -> Self::Elem {
        if odd {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

/// The field of rational numbers with arbitrary-precision numerator and
/// denominator. Elements are always kept in lowest terms with positive
/// denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let (num, den) = parse_fraction(s)?;
        Ok(BigRational::new(num, den))
    }

    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn name(&self) -> String {
        "QQ".to_string()
    }
}

/// The prime field `F_p` for a prime `p < 2^31`. Elements are residues in
/// `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, Error> {
        if !(2..Self::MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "fp:{p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn parse(&self, s: &str) -> Result<u64, Error> {
        let (num, den) = parse_fraction(s)?;
        let n = self.reduce_big(&num);
        let d = self.reduce_big(&den);
        self.div(&n, &d).ok_or_else(|| {
            Error::Parse(format!(
                "scalar {s:?}: denominator vanishes in {}",
                self.name()
            ))
        })
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        format!("fp:{}", self.p)
    }
}

fn parse_fraction(s: &str) -> Result<(BigInt, BigInt), Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("malformed scalar {s:?} (expected \"p\" or \"p/q\")"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (
            BigInt::from_str(n.trim()).map_err(|_| bad())?,
            BigInt::from_str(d.trim()).map_err(|_| bad())?,
        ),
        None => (BigInt::from_str(t).map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("scalar {s:?} has zero denominator")));
    }
    if den.is_negative() {
        return Ok((-num, -den));
    }
    Ok((num, den))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Field selected at run time (command line or input document).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "qq" || lower == "q" {
            return Ok(FieldChoice::Rationals);
        }
        let digits = lower
            .strip_prefix("fp:")
            .or_else(|| lower.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')));
        match digits.map(|d| d.parse::<u64>()) {
            Some(Ok(p)) => {
                PrimeField::new(p)?;
                Ok(FieldChoice::Prime(p))
            }
            _ => Err(Error::InvalidField(format!(
                "unknown field {s:?} (expected qq or fp:<prime>)"
            ))),
        }
    }
}
