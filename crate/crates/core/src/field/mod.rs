//! Exact scalar fields: the rationals and the finite fields GF(p^k).
//!
//! A [`FieldSpec`] is a cheap, shareable handle to a field. [`Scalar`]
//! values carry no field of their own; all arithmetic goes through the
//! spec, which also owns the text encoding.

mod galois;
mod poly;

pub use poly::{k_of_poly, Poly};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use galois::Galois;

pub(crate) use galois::is_prime;

/// A field element. Rationals are always reduced with a positive
/// denominator; finite-field elements are indices into the field
/// enumeration (see [`FieldSpec::element`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Box<BigRational>),
    Finite(u64),
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(Box::new(BigRational::new(num.into(), den.into())))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Finite(v) => *v == 0,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Rationals,
    Galois(Galois),
}

/// Handle to one exact field. Clones share the same tables.
#[derive(Clone, Debug)]
pub struct FieldSpec(Arc<Kind>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldSpec {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn rat(r: BigRational) -> Scalar {
    Scalar::Rational(Box::new(r))
}

impl FieldSpec {
    pub fn rationals() -> FieldSpec {
        FieldSpec(Arc::new(Kind::Rationals))
    }

    /// GF(p).
    pub fn prime(p: u64) -> Result<FieldSpec> {
        Self::galois(p, 1, None)
    }

    /// GF(p^k). Without an explicit modulus the least irreducible one is used.
    pub fn galois(p: u64, k: u32, modulus: Option<Vec<u64>>) -> Result<FieldSpec> {
        Ok(FieldSpec(Arc::new(Kind::Galois(Galois::new(p, k, modulus)?))))
    }

    /// A field of the given characteristic: ℚ for 0, GF(p) otherwise.
    pub fn of_characteristic(char: u64) -> Result<FieldSpec> {
        if char == 0 {
            Ok(Self::rationals())
        } else {
            Self::prime(char)
        }
    }

    fn gf(&self) -> Option<&Galois> {
        match &*self.0 {
            Kind::Galois(g) => Some(g),
            Kind::Rationals => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.gf().map_or(0, |g| g.p)
    }

    pub fn extension_degree(&self) -> u32 {
        self.gf().map_or(1, |g| g.k)
    }

    /// Number of elements, `None` for ℚ.
    pub fn size(&self) -> Option<u64> {
        self.gf().map(|g| g.q)
    }

    /// Defining polynomial over GF(p), lowest degree first; `None` unless k > 1.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.gf().filter(|g| g.k > 1).map(|g| g.modulus.as_slice())
    }

    pub fn is_finite(&self) -> bool {
        self.gf().is_some()
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            Kind::Rationals => rat(BigRational::zero()),
            Kind::Galois(_) => Scalar::Finite(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match &*self.0 {
            Kind::Rationals => rat(BigRational::one()),
            Kind::Galois(_) => Scalar::Finite(1),
        }
    }

    /// Image of an integer under the canonical map ℤ → F.
    pub fn from_int(&self, v: i64) -> Scalar {
        match &*self.0 {
            Kind::Rationals => rat(BigRational::from_integer(v.into())),
            Kind::Galois(g) => {
                let r = v.rem_euclid(g.p as i64) as u64;
                Scalar::Finite(r)
            }
        }
    }

    /// The `i`-th element of the fixed field enumeration: index order for
    /// GF(q); `0, 1, -1, 2, -2, ...` for ℚ.
    pub fn element(&self, i: u64) -> Scalar {
        match &*self.0 {
            Kind::Rationals => {
                let mag = i.div_ceil(2) as i64;
                self.from_int(if i % 2 == 1 { mag } else { -mag })
            }
            Kind::Galois(g) => Scalar::Finite(i % g.q),
        }
    }

    /// All elements in enumeration order; `None` for ℚ.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar> + '_> {
        self.size().map(|q| (0..q).map(Scalar::Finite))
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (&*self.0, x) {
            (Kind::Rationals, Scalar::Rational(_)) => true,
            (Kind::Galois(g), Scalar::Finite(v)) => *v < g.q,
            _ => false,
        }
    }

    fn check(&self, x: &Scalar) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{x:?} is not an element of {self}")))
        }
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (&*self.0, x, y) {
            (Kind::Galois(g), Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(g.add(*a, *b)),
            (Kind::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => rat(&**a + &**b),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (&*self.0, x, y) {
            (Kind::Galois(g), Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(g.sub(*a, *b)),
            (Kind::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => rat(&**a - &**b),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (&*self.0, x, y) {
            (Kind::Galois(g), Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(g.mul(*a, *b)),
            (Kind::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => rat(&**a * &**b),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, x: &Scalar) -> Scalar {
        match (&*self.0, x) {
            (Kind::Galois(g), Scalar::Finite(a)) => Scalar::Finite(g.neg(*a)),
            (Kind::Rationals, Scalar::Rational(a)) => rat(-&**a),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: &Scalar) -> Option<Scalar> {
        match (&*self.0, x) {
            (Kind::Galois(g), Scalar::Finite(a)) => g.inv(*a).map(Scalar::Finite),
            (Kind::Rationals, Scalar::Rational(a)) => {
                if a.is_zero() {
                    None
                } else {
                    Some(rat(a.recip()))
                }
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn div(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let inv = self.inv(y).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(x, &inv))
    }

    pub fn pow(&self, x: &Scalar, mut e: u64) -> Scalar {
        if let (Kind::Galois(g), Scalar::Finite(a)) = (&*self.0, x) {
            return Scalar::Finite(g.pow(*a, e));
        }
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Membership-checked arithmetic.
    pub fn arith(&self, x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar> {
        self.check(x)?;
        self.check(y)?;
        match op {
            ArithOp::Add => Ok(self.add(x, y)),
            ArithOp::Sub => Ok(self.sub(x, y)),
            ArithOp::Mul => Ok(self.mul(x, y)),
            ArithOp::Div => self.div(x, y),
        }
    }

    /// The `p`-th root of `x` in characteristic `p` (Frobenius is bijective
    /// on finite fields). Identity on ℚ.
    pub fn pth_root(&self, x: &Scalar) -> Scalar {
        match (&*self.0, x) {
            (Kind::Galois(g), Scalar::Finite(a)) => Scalar::Finite(g.pth_root(*a)),
            _ => x.clone(),
        }
    }

    /// Every `e` in the field with `e^m = 1`, in enumeration order.
    pub fn roots_of_unity(&self, m: u64) -> Vec<Scalar> {
        assert!(m >= 1, "roots of unity need m >= 1");
        match &*self.0 {
            Kind::Rationals => {
                if m.is_multiple_of(2) {
                    vec![self.one(), self.from_int(-1)]
                } else {
                    vec![self.one()]
                }
            }
            Kind::Galois(g) => g.roots_of_unity(m).into_iter().map(Scalar::Finite).collect(),
        }
    }

    /// `S_k(a, b)`, the sum of `a^i b^j` over `i + j = k - 1`.
    pub fn geometric_sum(&self, k: u64, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        self.check(a)?;
        self.check(b)?;
        let mut total = self.zero();
        let mut a_pow = self.one();
        let mut b_pows = Vec::with_capacity(k as usize);
        let mut cur = self.one();
        for _ in 0..k {
            b_pows.push(cur.clone());
            cur = self.mul(&cur, b);
        }
        for i in 0..k as usize {
            total = self.add(&total, &self.mul(&a_pow, &b_pows[k as usize - 1 - i]));
            a_pow = self.mul(&a_pow, a);
        }
        Ok(total)
    }

    /// Text form of a scalar: `num/den` over ℚ, `c0+c1*x+...` over GF(p^k).
    pub fn format(&self, x: &Scalar) -> String {
        match (&*self.0, x) {
            (Kind::Rationals, Scalar::Rational(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (Kind::Galois(g), Scalar::Finite(v)) => galois::poly::format(&g.digits(*v)),
            _ => format!("{x:?}"),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        match &*self.0 {
            Kind::Rationals => parse_rational(text).map(rat),
            Kind::Galois(g) => {
                let digits = parse_gf_poly(text, g.p, Some(g.k as usize))?;
                Ok(Scalar::Finite(g.index_of_digits(&digits)))
            }
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("unparsable rational '{text}'"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{text}'")));
    }
    Ok(BigRational::new(num, den))
}

/// Parses `c0+c1*x+...` into coefficients mod p. `max_len` bounds the degree.
fn parse_gf_poly(text: &str, p: u64, max_len: Option<usize>) -> Result<Vec<u64>> {
    let bad = |why: &str| Error::Parse(format!("unparsable element '{text}': {why}"));
    let mut coeffs: Vec<u64> = Vec::new();
    let body = text.trim();
    if body.is_empty() {
        return Err(bad("empty"));
    }
    // A lone signed integer is accepted as an element of the prime subfield.
    if let Ok(v) = body.parse::<i128>() {
        let r = v.rem_euclid(p as i128) as u64;
        return Ok(vec![r]);
    }
    for term in body.split('+') {
        let term = term.trim();
        let (coef, power) = if let Some(idx) = term.find('x') {
            let (c, rest) = term.split_at(idx);
            let c = c.trim().trim_end_matches('*').trim();
            let coef = if c.is_empty() {
                1
            } else {
                c.parse::<u64>().map_err(|_| bad("bad coefficient"))?
            };
            let rest = rest[1..].trim();
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(|| bad("expected '^'"))?
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("bad exponent"))?
            };
            (coef, power)
        } else {
            (term.parse::<u64>().map_err(|_| bad("bad constant"))?, 0)
        };
        if let Some(limit) = max_len {
            if power >= limit {
                return Err(bad("exponent not below the extension degree"));
            }
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = (coeffs[power] + coef % p) % p;
    }
    if let Some(limit) = max_len {
        coeffs.resize(limit, 0);
    }
    Ok(coeffs)
}

/// Least `j` with `m | p^j - 1`, so GF(p^j) holds all `m`-th roots of unity.
pub fn extension_for_roots(p: u64, m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    if m.is_multiple_of(p) {
        return Err(Error::NotCoprime { p, m });
    }
    let target = 1 % m;
    let base = p % m;
    let mut cur = base;
    let mut j = 1u32;
    while cur != target {
        cur = ((cur as u128 * base as u128) % m as u128) as u64;
        j += 1;
    }
    Ok(j)
}

/// Least prime `P > n` with `m | P - 1`.
pub fn surrogate_prime(n: u64, m: u64) -> u64 {
    let mut candidate = n + 1;
    loop {
        if (candidate - 1).is_multiple_of(m) && is_prime(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Rationals => write!(f, "Q"),
            Kind::Galois(g) if g.k == 1 => write!(f, "GF({})", g.p),
            Kind::Galois(g) => write!(f, "GF({}^{};{})", g.p, g.k, galois::poly::format(&g.modulus)),
        }
    }
}

/// Splits a field order `q = p^k`.
fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NonPrimeChar(q));
    }
    let p = (2..)
        .take_while(|d| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NonPrimeChar(q));
    }
    Ok((p, k))
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `GF(p)`, `GF(q)` for a prime power `q`, `GF(p^k)` and
    /// `GF(p^k;modulus)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::rationals());
        }
        let bad = || Error::Parse(format!("unparsable field '{s}'"));
        let inner = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (order, modulus) = match inner.split_once(';') {
            Some((o, m)) => (o.trim(), Some(m.trim())),
            None => (inner.trim(), None),
        };
        let (p, k) = match order.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => prime_power(order.parse::<u64>().map_err(|_| bad())?)?,
        };
        if !is_prime(p) {
            return Err(Error::NonPrimeChar(p));
        }
        let modulus = modulus.map(|m| parse_gf_poly(m, p, None)).transpose()?;
        FieldSpec::galois(p, k, modulus)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
