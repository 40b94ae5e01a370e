//! Table-driven arithmetic on small dense matrices over a finite field.
//! Written separately from `exactmat` and `jordan` so the oracle does not
//! share code paths with what it checks.

use crate::criterion::QSet;
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::{FieldSpec, Scalar};

/// Largest field the oracle builds full operation tables for.
pub(crate) const MAX_TABLE_SIZE: u64 = 2048;

pub(crate) struct Fq {
    pub q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl Fq {
    pub fn new(spec: &FieldSpec) -> Result<Fq> {
        let q = spec.size().ok_or(Error::InfiniteField)?;
        if q > MAX_TABLE_SIZE {
            return Err(Error::OutOfRange(format!(
                "exhaustive search supports fields of at most {MAX_TABLE_SIZE} elements, got {q}"
            )));
        }
        let q = q as usize;
        let idx = |s: Scalar| match s {
            Scalar::Finite(v) => v as u32,
            Scalar::Rational(_) => unreachable!("finite field"),
        };
        let el = |i: usize| spec.element(i as u64);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for i in 0..q {
            for j in i..q {
                let (s, p) = (idx(spec.add(&el(i), &el(j))), idx(spec.mul(&el(i), &el(j))));
                add[i * q + j] = s;
                add[j * q + i] = s;
                mul[i * q + j] = p;
                mul[j * q + i] = p;
            }
        }
        let neg = (0..q).map(|i| idx(spec.neg(&el(i)))).collect();
        let inv = (0..q).map(|i| spec.inv(&el(i)).map_or(0, idx)).collect();
        Ok(Fq { q, add, mul, neg, inv })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn to_index(x: &Scalar) -> u32 {
        match x {
            Scalar::Finite(v) => *v as u32,
            Scalar::Rational(_) => unreachable!("finite field"),
        }
    }
}

/// Row-major `n x n` matrix of element indices.
pub(crate) type Mat = Vec<u32>;

pub(crate) fn from_exact(m: &ExactMatrix) -> Mat {
    m.entries().iter().map(Fq::to_index).collect()
}

pub(crate) fn to_exact(spec: &FieldSpec, n: usize, m: &[u32]) -> ExactMatrix {
    ExactMatrix::from_fn(spec, n, |i, j| Scalar::Finite(m[i * n + j] as u64))
}

pub(crate) struct Work<'a> {
    f: &'a Fq,
    n: usize,
    a: Mat,
    b: Mat,
    c: Mat,
}

impl<'a> Work<'a> {
    pub fn new(f: &'a Fq, n: usize) -> Work<'a> {
        Work {
            f,
            n,
            a: vec![0; n * n],
            b: vec![0; n * n],
            c: vec![0; n * n],
        }
    }

    pub fn add_into(&self, acc: &mut [u32], m: &[u32]) {
        for (x, &y) in acc.iter_mut().zip(m) {
            *x = self.f.add(*x, y);
        }
    }

    pub fn combine(&self, out: &mut [u32], a: u32, x: &[u32], b: u32, y: &[u32]) {
        for ((o, &u), &v) in out.iter_mut().zip(x).zip(y) {
            *o = self.f.add(self.f.mul(a, u), self.f.mul(b, v));
        }
    }

    pub fn trace_is_zero(&self, m: &[u32]) -> bool {
        (0..self.n).fold(0, |t, i| self.f.add(t, m[i * self.n + i])) == 0
    }

    fn mul(f: &Fq, n: usize, x: &[u32], y: &[u32], out: &mut [u32]) {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0;
                for k in 0..n {
                    let (u, v) = (x[i * n + k], y[k * n + j]);
                    if u != 0 && v != 0 {
                        s = f.add(s, f.mul(u, v));
                    }
                }
                out[i * n + j] = s;
            }
        }
    }

    pub fn commute(&mut self, x: &[u32], y: &[u32]) -> bool {
        Self::mul(self.f, self.n, x, y, &mut self.a);
        Self::mul(self.f, self.n, y, x, &mut self.b);
        self.a == self.b
    }

    /// `m^n == 0`, by repeated squaring.
    pub fn is_nilpotent(&mut self, m: &[u32]) -> bool {
        self.a.copy_from_slice(m);
        let mut power = 1;
        while power < self.n {
            Self::mul(self.f, self.n, &self.a, &self.a, &mut self.b);
            std::mem::swap(&mut self.a, &mut self.b);
            power *= 2;
            if self.a.iter().all(|&v| v == 0) {
                return true;
            }
        }
        self.a.iter().all(|&v| v == 0)
    }

    fn rank_of(&mut self) -> usize {
        let (f, n) = (self.f, self.n);
        let m = &mut self.c;
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..n).find(|&i| m[i * n + col] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..n {
                    m.swap(p * n + j, r * n + j);
                }
            }
            let inv = f.inv[m[r * n + col] as usize];
            for i in r + 1..n {
                let lead = m[i * n + col];
                if lead == 0 {
                    continue;
                }
                let factor = f.mul(lead, inv);
                for j in col..n {
                    let v = m[r * n + j];
                    if v != 0 {
                        m[i * n + j] = f.sub(m[i * n + j], f.mul(factor, v));
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Ranks of `m, m^2, ...` up to the first zero power; `None` when `m`
    /// is not nilpotent.
    pub fn rank_sequence(&mut self, m: &[u32]) -> Option<Vec<usize>> {
        let n = self.n;
        let mut ranks = vec![n];
        self.a.copy_from_slice(m);
        loop {
            self.c.copy_from_slice(&self.a);
            let r = self.rank_of();
            if r == 0 {
                return Some(ranks);
            }
            if r == *ranks.last().expect("nonempty") || ranks.len() > n {
                return None;
            }
            ranks.push(r);
            Self::mul(self.f, n, &self.a, m, &mut self.b);
            std::mem::swap(&mut self.a, &mut self.b);
        }
    }

    /// Largest non-unit cell size outside `Q`, `Some(0)` when every cell
    /// fits, `None` when `m` is not nilpotent.
    pub fn escape_size(&mut self, m: &[u32], q: &QSet) -> Option<usize> {
        let mut ranks = self.rank_sequence(m)?;
        ranks.push(0);
        // Cells of size >= s number ranks[s-1] - ranks[s].
        let at_least = |s: usize| ranks[s - 1] - ranks[s];
        let top = ranks.len() - 1;
        for s in (2..=top).rev() {
            let exact = at_least(s) - if s < top { at_least(s + 1) } else { 0 };
            if exact > 0 && !q.contains(s) {
                return Some(s);
            }
        }
        Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{jordan_matrix, Partition};

    #[test]
    fn escape_sizes() {
        let spec = FieldSpec::prime(3).unwrap();
        let f = Fq::new(&spec).unwrap();
        let mut w = Work::new(&f, 6);
        let x = jordan_matrix(&Partition::new(vec![3, 2, 1]).unwrap(), 6, &spec).unwrap();
        let m = from_exact(&x);
        assert_eq!(w.rank_sequence(&m), Some(vec![6, 3, 1]));
        assert_eq!(w.escape_size(&m, &QSet::new(6, vec![2, 3]).unwrap()), Some(0));
        assert_eq!(w.escape_size(&m, &QSet::new(6, vec![2]).unwrap()), Some(3));
        assert_eq!(w.escape_size(&m, &QSet::new(6, vec![3]).unwrap()), Some(2));
        assert!(w.is_nilpotent(&m));
        let id = from_exact(&ExactMatrix::identity(&spec, 6));
        assert_eq!(w.escape_size(&id, &QSet::empty(6)), None);
        assert!(!w.is_nilpotent(&id));
    }

    #[test]
    fn tables_match_field() {
        let spec: FieldSpec = "GF(2^2)".parse().unwrap();
        let f = Fq::new(&spec).unwrap();
        // x * x = 1 + x under 1 + x + x^2.
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.add(3, 1), 2);
        assert!(Fq::new(&FieldSpec::rationals()).is_err());
    }
}
