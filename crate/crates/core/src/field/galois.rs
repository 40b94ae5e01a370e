//! Arithmetic in GF(p^k).
//!
//! An element is stored as its index `c0 + c1*p + ... + c{k-1}*p^(k-1)`,
//! where `c0 + c1*x + ...` is its residue modulo the defining polynomial.
//! The index order is also the fixed enumeration order of the field.

use crate::error::{Error, Result};

/// Fields of at most this many elements get full addition and
/// multiplication tables.
const TABLE_LIMIT: u64 = 256;
/// Fields of at most this many elements get an inverse table.
const INV_TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug)]
pub(crate) struct Galois {
    pub(crate) p: u64,
    pub(crate) k: u32,
    pub(crate) q: u64,
    /// Monic, lowest degree first, length `k + 1`. `[0, 1]` for prime fields.
    pub(crate) modulus: Vec<u64>,
    add_table: Option<Vec<u8>>,
    mul_table: Option<Vec<u8>>,
    neg_table: Option<Vec<u8>>,
    inv_table: Option<Vec<u32>>,
}

impl PartialEq for Galois {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Galois {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_order(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|q| *q < (1u64 << 62))
        .ok_or_else(|| Error::OutOfRange(format!("GF({p}^{k}) is too large")))
}

impl Galois {
    pub(crate) fn new(p: u64, k: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeChar(p));
        }
        if p >= 1 << 32 {
            return Err(Error::OutOfRange(format!("characteristic {p} exceeds 2^32")));
        }
        if k == 0 {
            return Err(Error::OutOfRange("extension degree must be positive".into()));
        }
        let q = checked_order(p, k)?;
        let modulus = match (k, modulus) {
            (1, None) => vec![0, 1],
            (1, Some(m)) => {
                let m = poly::trim(m.into_iter().map(|c| c % p).collect());
                if m.len() != 2 || m[1] != 1 {
                    return Err(Error::ReducibleModulus(poly::format(&m)));
                }
                // Any monic linear modulus gives the same prime field.
                vec![0, 1]
            }
            (_, Some(m)) => {
                let m = poly::trim(m.into_iter().map(|c| c % p).collect());
                if m.len() != k as usize + 1 || m[k as usize] != 1 || !poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(poly::format(&m)));
                }
                m
            }
            (_, None) => least_irreducible(p, k),
        };
        let mut field = Galois {
            p,
            k,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            neg_table: None,
            inv_table: None,
        };
        if k > 1 && q <= TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u8; qs * qs];
            let mut mul = vec![0u8; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    let i = (a * q + b) as usize;
                    add[i] = field.add_slow(a, b) as u8;
                    mul[i] = field.mul_slow(a, b) as u8;
                }
            }
            let neg = (0..q)
                .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap_or(0) as u8)
                .collect();
            field.add_table = Some(add);
            field.neg_table = Some(neg);
            field.mul_table = Some(mul);
        }
        if q <= INV_TABLE_LIMIT {
            let mut inv = vec![0u32; q as usize];
            for a in 1..q {
                inv[a as usize] = field.pow(a, q - 2) as u32;
            }
            field.inv_table = Some(inv);
        }
        Ok(field)
    }

    pub(crate) fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    pub(crate) fn index_of_digits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.index_of_digits(&s)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let prod = poly::mul(&self.digits(a), &self.digits(b), self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        let mut d = r;
        d.resize(self.k as usize, 0);
        self.index_of_digits(&d)
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize] as u64
        } else {
            self.add_slow(a, b)
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if let Some(t) = &self.neg_table {
            t[a as usize] as u64
        } else {
            let d: Vec<u64> = self.digits(a).into_iter().map(|c| (self.p - c) % self.p).collect();
            self.index_of_digits(&d)
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            ((a as u128 * b as u128) % self.p as u128) as u64
        } else if let Some(t) = &self.mul_table {
            t[(a * self.q + b) as usize] as u64
        } else {
            self.mul_slow(a, b)
        }
    }

    pub(crate) fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(match &self.inv_table {
            Some(t) => t[a as usize] as u64,
            None => self.pow(a, self.q - 2),
        })
    }

    /// The unique `b` with `b^p = a`.
    pub(crate) fn pth_root(&self, a: u64) -> u64 {
        let mut r = a;
        for _ in 1..self.k {
            r = self.pow(r, self.p);
        }
        r
    }

    /// All `e` with `e^m = 1`, ascending in the field enumeration.
    pub(crate) fn roots_of_unity(&self, m: u64) -> Vec<u64> {
        let order = gcd(m, self.q - 1);
        if self.q <= INV_TABLE_LIMIT {
            return (1..self.q).filter(|&e| self.pow(e, m) == 1).collect();
        }
        let g = self.primitive_element();
        let h = self.pow(g, (self.q - 1) / order);
        let mut roots = Vec::with_capacity(order as usize);
        let mut cur = 1u64;
        for _ in 0..order {
            roots.push(cur);
            cur = self.mul(cur, h);
        }
        roots.sort_unstable();
        roots
    }

    fn primitive_element(&self) -> u64 {
        let order = self.q - 1;
        let primes = prime_factors(order);
        (2..self.q)
            .chain(std::iter::once(1))
            .find(|&g| primes.iter().all(|&r| self.pow(g, order / r) != 1))
            .unwrap_or(1)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The monic irreducible polynomial of degree `k` over GF(p) whose lower
/// coefficients have the least index `c0 + c1*p + ...`.
pub(crate) fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for code in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over GF(p), coefficients lowest degree first.
pub(crate) mod poly {
    pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub(crate) fn format(a: &[u64]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let (mut base, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            e >>= 1;
        }
        acc
    }

    pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u128 * c as u128 % p as u128) as u64;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// Rabin-style test: no factor of degree at most deg/2.
    pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        let deg = match f.len() {
            0 | 1 => return false,
            l => l - 1,
        };
        if deg == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut frob = x.clone();
        for _ in 0..deg / 2 {
            frob = powmod(&frob, p, &f, p);
            let mut diff = frob.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(&f, &trim(diff), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}
