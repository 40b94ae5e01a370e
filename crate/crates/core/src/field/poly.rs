use std::fmt;

use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Polynomial in `t` over a [`FieldSpec`], lowest degree first, with no
/// trailing zero coefficients. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<Scalar>,
}

/// Multiplicity of `t` as a factor of `f`: the index of its lowest
/// nonzero coefficient.
pub fn k_of_poly(f: &Poly) -> Result<usize> {
    f.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPolynomial)
}

impl Poly {
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// Builds a polynomial from small integer coefficients.
    pub fn from_ints(spec: &FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(spec, coeffs.iter().map(|&c| spec.from_int(c)).collect())
    }

    pub fn zero(spec: &FieldSpec) -> Poly {
        Poly::new(spec, Vec::new())
    }

    pub fn constant(spec: &FieldSpec, c: Scalar) -> Poly {
        Poly::new(spec, vec![c])
    }

    /// `c * t^deg`.
    pub fn monomial(spec: &FieldSpec, c: Scalar, deg: usize) -> Poly {
        let mut coeffs = vec![spec.zero(); deg];
        coeffs.push(c);
        Poly::new(spec, coeffs)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.spec.one()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.spec, other.spec)))
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.spec;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.spec;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let f = &self.spec;
        Poly::new(f, self.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.spec;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::constant(&self.spec, self.spec.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(d)?;
        let f = &self.spec;
        let lead_inv = d.leading().and_then(|l| f.inv(l)).ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let factor = f.mul(top, &lead_inv);
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(&rem[shift + i], &f.mul(&factor, c));
            }
            quot[shift] = factor;
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Scales to leading coefficient 1. The zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading().and_then(|l| self.spec.inv(l)) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        let f = &self.spec;
        // Extended Euclid tracking only the coefficient of `self`.
        let (mut r0, mut r1) = (m.clone(), self.rem(m).ok()?);
        let (mut s0, mut s1) = (Poly::zero(f), Poly::constant(f, f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).ok()?;
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = f.inv(&r0.coeffs[0])?;
        s0.scale(&c).rem(m).ok()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.spec;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = &self.spec;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Product of the distinct monic irreducible factors.
    ///
    /// In characteristic p, factors whose multiplicity is divisible by p
    /// survive `f / gcd(f, f')`; those are recovered by taking p-th roots.
    pub fn squarefree_part(&self) -> Poly {
        let f = self.monic();
        match f.degree() {
            None | Some(0) => return Poly::constant(&self.spec, self.spec.one()),
            _ => {}
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root().squarefree_part();
        }
        let g = f.gcd(&d);
        let w = f.divrem(&g).expect("gcd is nonzero").0.monic();
        let mut rest = g;
        loop {
            let c = rest.gcd(&w);
            if c.degree() == Some(0) {
                break;
            }
            rest = rest.divrem(&c).expect("gcd is nonzero").0;
        }
        if rest.degree().unwrap_or(0) == 0 {
            w
        } else {
            w.mul(&rest.squarefree_part()).monic()
        }
    }

    /// `g` with `g(t)^p = self(t)`, for polynomials in `t^p` over GF(p^k).
    fn pth_root(&self) -> Poly {
        let f = &self.spec;
        let p = f.characteristic() as usize;
        debug_assert!(p > 0);
        let coeffs = self.coeffs.iter().step_by(p).map(|c| f.pth_root(c)).collect();
        Poly::new(f, coeffs)
    }

    /// True when no irreducible factor repeats. Over a perfect field this is
    /// `gcd(f, f') = 1`, with `f' = 0` counting as repeated.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = &self.spec;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let text = f.format(c);
            let needs_parens = text.contains('+') || (i > 0 && text.contains('/'));
            let text = if needs_parens { format!("({text})") } else { text };
            match (i, text.as_str()) {
                (0, _) => write!(out, "{text}")?,
                (1, "1") => write!(out, "t")?,
                (1, _) => write!(out, "{text}*t")?,
                (_, "1") => write!(out, "t^{i}")?,
                (_, _) => write!(out, "{text}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn k_of_poly_examples() {
        let f = q();
        assert_eq!(k_of_poly(&Poly::from_ints(&f, &[0, 0, 1, 1])), Ok(2));
        assert_eq!(k_of_poly(&Poly::from_ints(&f, &[1, 1])), Ok(0));
        assert_eq!(k_of_poly(&Poly::from_ints(&f, &[0, 0, 0, 0, 0, 1])), Ok(5));
        assert_eq!(k_of_poly(&Poly::zero(&f)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn division_identity() {
        let f = q();
        let a = Poly::from_ints(&f, &[3, -1, 4, 1, 5]);
        let b = Poly::from_ints(&f, &[2, 0, 7]);
        let (quot, rem) = a.divrem(&b).unwrap();
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree() < b.degree());
        assert_eq!(a.divrem(&Poly::zero(&f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn squarefree_over_q() {
        let f = q();
        // (t-1)^3 (t-2)
        let a = Poly::from_ints(&f, &[-1, 1]).pow(3).mul(&Poly::from_ints(&f, &[-2, 1]));
        let expect = Poly::from_ints(&f, &[-1, 1]).mul(&Poly::from_ints(&f, &[-2, 1]));
        assert_eq!(a.squarefree_part(), expect);
        assert!(!a.is_squarefree());
        assert!(expect.is_squarefree());
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        let f = FieldSpec::prime(3).unwrap();
        // (t+1)^3 (t+2)^6 t^2 over GF(3): derivative of the cube parts vanishes.
        let a = Poly::from_ints(&f, &[1, 1])
            .pow(3)
            .mul(&Poly::from_ints(&f, &[2, 1]).pow(6))
            .mul(&Poly::from_ints(&f, &[0, 1]).pow(2));
        let expect = Poly::from_ints(&f, &[1, 1])
            .mul(&Poly::from_ints(&f, &[2, 1]))
            .mul(&Poly::from_ints(&f, &[0, 1]))
            .monic();
        assert_eq!(a.squarefree_part(), expect);
        let cube = Poly::from_ints(&f, &[1, 0, 0, 1]);
        assert!(!cube.is_squarefree());
        assert_eq!(cube.squarefree_part(), Poly::from_ints(&f, &[1, 1]));
    }

    #[test]
    fn inverse_mod_works() {
        let f = FieldSpec::prime(7).unwrap();
        let m = Poly::from_ints(&f, &[1, 0, 1]);
        let a = Poly::from_ints(&f, &[3, 2]);
        let inv = a.inverse_mod(&m).unwrap();
        assert!(a.mul(&inv).rem(&m).unwrap().is_one());
        assert!(Poly::from_ints(&f, &[0, 1]).mul(&m).inverse_mod(&m).is_none());
    }

    #[test]
    fn display() {
        let f = q();
        assert_eq!(Poly::from_ints(&f, &[2, 0, -1, 1]).to_string(), "t^3 + -1*t^2 + 2");
        assert_eq!(Poly::zero(&f).to_string(), "0");
    }
}
