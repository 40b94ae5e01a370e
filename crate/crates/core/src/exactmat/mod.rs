//! Dense square matrices over an exact field.

pub(crate) mod elim;
mod io;

pub use io::MatrixFile;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Poly, Scalar};

/// An `n x n` matrix over `spec`, row-major. Values are never mutated
/// after construction; every operation returns a new matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    spec: FieldSpec,
    n: usize,
    entries: Vec<Scalar>,
}

/// Operations accepted by [`matrix_algebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixOp {
    Add,
    Sub,
    Mul,
    Commutator,
    Scale(Scalar),
    Power(u32),
}

/// Applies `op`; `y` is ignored by `Scale` and `Power`.
pub fn matrix_algebra(x: &ExactMatrix, y: &ExactMatrix, op: &MatrixOp) -> Result<ExactMatrix> {
    match op {
        MatrixOp::Add => x.try_add(y),
        MatrixOp::Sub => x.try_sub(y),
        MatrixOp::Mul => x.try_mul(y),
        MatrixOp::Commutator => x.commutator(y),
        MatrixOp::Scale(c) => {
            if !x.spec.contains(c) {
                return Err(Error::FieldMismatch(format!("scalar outside {}", x.spec)));
            }
            Ok(x.scale(c))
        }
        MatrixOp::Power(e) => Ok(x.power(*e)),
    }
}

impl ExactMatrix {
    pub fn zeros(spec: &FieldSpec, n: usize) -> ExactMatrix {
        ExactMatrix {
            spec: spec.clone(),
            n,
            entries: vec![spec.zero(); n * n],
        }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> ExactMatrix {
        Self::scalar(spec, n, spec.one())
    }

    /// `c * I`.
    pub fn scalar(spec: &FieldSpec, n: usize, c: Scalar) -> ExactMatrix {
        Self::from_fn(spec, n, |i, j| if i == j { c.clone() } else { spec.zero() })
    }

    pub fn from_fn(spec: &FieldSpec, n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> ExactMatrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        ExactMatrix {
            spec: spec.clone(),
            n,
            entries,
        }
    }

    pub fn from_rows(spec: &FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<ExactMatrix> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !spec.contains(&v) {
                    return Err(Error::FieldMismatch(format!(
                        "entry ({}, {}) is not in {spec}",
                        i + 1,
                        j + 1
                    )));
                }
                entries.push(v);
            }
        }
        Ok(ExactMatrix {
            spec: spec.clone(),
            n,
            entries,
        })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_ints(spec: &FieldSpec, rows: &[&[i64]]) -> ExactMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| spec.from_int(v)).collect())
            .collect();
        Self::from_rows(spec, rows).expect("square integer matrix")
    }

    pub fn diagonal(spec: &FieldSpec, diag: &[Scalar]) -> ExactMatrix {
        Self::from_fn(
            spec,
            diag.len(),
            |i, j| {
                if i == j {
                    diag[i].clone()
                } else {
                    spec.zero()
                }
            },
        )
    }

    /// The Jordan cell `J_{lambda, m}`: `lambda` on the diagonal, ones just above it.
    pub fn jordan_cell(spec: &FieldSpec, lambda: &Scalar, m: usize) -> ExactMatrix {
        Self::from_fn(spec, m, |i, j| {
            if i == j {
                lambda.clone()
            } else if j == i + 1 {
                spec.one()
            } else {
                spec.zero()
            }
        })
    }

    /// Nilpotent Jordan cell `J_{0, m}`.
    pub fn nilpotent_cell(spec: &FieldSpec, m: usize) -> ExactMatrix {
        Self::jordan_cell(spec, &spec.zero(), m)
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(spec: &FieldSpec, blocks: &[ExactMatrix]) -> ExactMatrix {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut out = Self::zeros(spec, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    out.entries[(offset + i) * n + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.n;
        }
        out
    }

    /// Direct sum with a zero block, up to dimension `n`.
    pub fn padded(&self, n: usize) -> Result<ExactMatrix> {
        if n < self.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot pad dimension {} down to {n}",
                self.n
            )));
        }
        Ok(Self::block_diag(
            &self.spec,
            &[self.clone(), Self::zeros(&self.spec, n - self.n)],
        ))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let f = &self.spec;
        let m = other.n;
        Self::from_fn(f, self.n * m, |i, j| {
            f.mul(self.get(i / m, j / m), other.get(i % m, j % m))
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n.max(1)).map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// True when `self = c * I` for some scalar `c`.
    pub fn is_scalar(&self) -> bool {
        let c = if self.n == 0 { return true } else { self.get(0, 0) };
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                if i == j {
                    self.get(i, j) == c
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(self.spec.zero(), |acc, i| self.spec.add(&acc, self.get(i, i)))
    }

    fn compatible(&self, other: &ExactMatrix) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.spec, other.spec)));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.compatible(other)?;
        Ok(self.zip_with(other, FieldSpec::add))
    }

    pub fn try_sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.compatible(other)?;
        Ok(self.zip_with(other, FieldSpec::sub))
    }

    pub fn try_mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `xy - yx`.
    pub fn commutator(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.compatible(other)?;
        Ok(self
            .mul_unchecked(other)
            .zip_with(&other.mul_unchecked(self), FieldSpec::sub))
    }

    pub fn commutes_with(&self, other: &ExactMatrix) -> bool {
        self.commutator(other).is_ok_and(|c| c.is_zero())
    }

    fn zip_with(&self, other: &ExactMatrix, f: impl Fn(&FieldSpec, &Scalar, &Scalar) -> Scalar) -> ExactMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(&self.spec, a, b))
            .collect();
        ExactMatrix {
            spec: self.spec.clone(),
            n: self.n,
            entries,
        }
    }

    fn mul_unchecked(&self, other: &ExactMatrix) -> ExactMatrix {
        let (f, n) = (&self.spec, self.n);
        let mut entries = vec![f.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        let cell = &mut entries[i * n + j];
                        *cell = f.add(cell, &f.mul(a, b));
                    }
                }
            }
        }
        ExactMatrix {
            spec: f.clone(),
            n,
            entries,
        }
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        let f = &self.spec;
        ExactMatrix {
            spec: f.clone(),
            n: self.n,
            entries: self.entries.iter().map(|v| f.mul(v, c)).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combination(&self, a: &Scalar, other: &ExactMatrix, b: &Scalar) -> Result<ExactMatrix> {
        self.compatible(other)?;
        let f = &self.spec;
        Ok(self.zip_with(other, |_, x, y| f.add(&f.mul(a, x), &f.mul(b, y))))
    }

    /// `self^e`; `self^0` is the identity.
    pub fn power(&self, mut e: u32) -> ExactMatrix {
        let mut acc = Self::identity(&self.spec, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// True when `self^n = 0`, checked by repeated squaring.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        let mut e = 1usize;
        while e < self.n {
            if p.is_zero() {
                return true;
            }
            p = p.mul_unchecked(&p);
            e *= 2;
        }
        p.is_zero()
    }

    /// Exact rank: Bareiss elimination over ℚ, Gaussian elimination over GF(q).
    pub fn rank(&self) -> usize {
        if self.spec.is_finite() {
            elim::rank_gaussian(&self.spec, self.rows(), self.n)
        } else {
            elim::rank_bareiss(self.integer_rows(), self.n)
        }
    }

    /// Rows cleared of denominators; same row space as `self`.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows()
            .into_iter()
            .map(|row| {
                let rats: Vec<_> = row
                    .iter()
                    .map(|s| match s {
                        Scalar::Rational(r) => (**r).clone(),
                        Scalar::Finite(_) => unreachable!("rational matrix"),
                    })
                    .collect();
                let lcm = rats
                    .iter()
                    .fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
                rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
            })
            .collect()
    }

    /// `dim ker self = n - rank`.
    pub fn defect(&self) -> usize {
        self.n - self.rank()
    }

    /// Basis of the kernel (column vectors), in free-column order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        elim::kernel(&self.spec, &self.rows(), self.n)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        let (f, n) = (&self.spec, self.n);
        let mut aug: Vec<Vec<Scalar>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                row
            })
            .collect();
        let pivots = elim::rref(f, &mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(ExactMatrix::from_rows(f, rows).expect("square"))
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = &self.spec;
        (0..self.n)
            .map(|i| (0..self.n).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j]))))
            .collect()
    }

    /// A basis of `{Y : self * Y = Y * self}`, from the kernel of the
    /// linear system in the `n^2` entries of `Y` (row-major unknowns).
    pub fn centralizer_basis(&self) -> Vec<ExactMatrix> {
        let (f, n) = (&self.spec, self.n);
        let nn = n * n;
        let mut system = Vec::with_capacity(nn);
        for i in 0..n {
            for j in 0..n {
                // (XY)_{ij} - (YX)_{ij} = sum_k X_{ik} Y_{kj} - Y_{ik} X_{kj}
                let mut row = vec![f.zero(); nn];
                for k in 0..n {
                    let var = k * n + j;
                    row[var] = f.add(&row[var], self.get(i, k));
                    let var = i * n + k;
                    row[var] = f.sub(&row[var], self.get(k, j));
                }
                system.push(row);
            }
        }
        elim::kernel(f, &system, nn)
            .into_iter()
            .map(|v| ExactMatrix {
                spec: f.clone(),
                n,
                entries: v,
            })
            .collect()
    }

    /// Monic polynomial of least degree annihilating `self`: the first
    /// linear dependency among `I, X, X^2, ...`.
    pub fn minimal_polynomial(&self) -> Poly {
        let f = &self.spec;
        let nn = self.n * self.n;
        let mut powers = vec![Self::identity(f, self.n)];
        for d in 1..=self.n {
            let next = powers[d - 1].mul_unchecked(self);
            powers.push(next);
            // Columns are vec(X^0), ..., vec(X^d).
            let rows: Vec<Vec<Scalar>> = (0..nn)
                .map(|r| powers.iter().map(|p| p.entries[r].clone()).collect())
                .collect();
            let ker = elim::kernel(f, &rows, d + 1);
            if let Some(v) = ker.first() {
                return Poly::new(f, v.clone()).monic();
            }
        }
        unreachable!("Cayley-Hamilton bounds the degree by n")
    }
}

/// Horner evaluation `f(x)`.
pub fn poly_eval(f: &Poly, x: &ExactMatrix) -> Result<ExactMatrix> {
    if f.spec() != x.spec() {
        return Err(Error::FieldMismatch(format!("{} vs {}", f.spec(), x.spec())));
    }
    let spec = x.spec();
    let mut acc = ExactMatrix::zeros(spec, x.n);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul_unchecked(x);
        for i in 0..x.n {
            let cell = &mut acc.entries[i * x.n + i];
            *cell = spec.add(cell, c);
        }
    }
    Ok(acc)
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("compatible matrices")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("compatible matrices")
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("compatible matrices")
    }
}

impl fmt::Display for ExactMatrix {
    /// Right-aligned columns, one row per line.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|v| self.spec.format(v)).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>width$}", cells[i * self.n + j]))
                .collect();
            writeln!(out, "[ {} ]", row.join(" "))?;
        }
        Ok(())
    }
}
