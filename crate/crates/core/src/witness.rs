//! Explicit counterexamples: commuting `X, Y ∈ M(Q)` and scalars `a, b`
//! with `aX + bY ∉ M(Q)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::criterion::{char_power_exponent, check_char, check_criterion, member_mq, QSet};
use crate::error::{Error, Result};
use crate::exactmat::{elim, ExactMatrix, MatrixFile};
use crate::field::{extension_for_roots, surrogate_prime, FieldSpec, Scalar};
use crate::jordan::{jordan_partition, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// A cell and a similar polynomial in it.
    Power,
    /// The block family `Z_{a,b}` at a root of unity.
    Neighbor,
    /// Induced operators on a two-cell quotient.
    Gap,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Power => "power",
            Construction::Neighbor => "neighbor",
            Construction::Gap => "gap",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub construction: Construction,
    pub field: FieldSpec,
    pub n: usize,
    pub x: ExactMatrix,
    pub y: ExactMatrix,
    pub a: Scalar,
    pub b: Scalar,
    pub combo_partition: Partition,
    pub violating_size: usize,
    /// The set this witness was checked against, once targeted.
    pub q: Option<QSet>,
    pub note: Option<String>,
}

fn inconsistent(msg: impl Into<String>) -> Error {
    Error::InternalInconsistency(msg.into())
}

impl Witness {
    fn assemble(
        construction: Construction,
        x: ExactMatrix,
        y: ExactMatrix,
        a: Scalar,
        b: Scalar,
        violating_size: usize,
    ) -> Result<Witness> {
        let combo = x.combination(&a, &y, &b)?;
        Ok(Witness {
            construction,
            field: x.spec().clone(),
            n: x.n(),
            combo_partition: jordan_partition(&combo)?,
            x,
            y,
            a,
            b,
            violating_size,
            q: None,
            note: None,
        })
    }

    pub fn combination(&self) -> ExactMatrix {
        self.x
            .combination(&self.a, &self.y, &self.b)
            .expect("witness scalars and matrices share a field")
    }

    /// Re-targets the witness at `q`: picks the largest non-unit cell size
    /// of the combination outside `Q`, then verifies everything.
    pub fn against(mut self, q: &QSet) -> Result<Witness> {
        let size = self
            .combo_partition
            .g_set()
            .sizes()
            .iter()
            .copied()
            .find(|&s| !q.contains(s))
            .ok_or_else(|| inconsistent(format!("combination stays inside Q = {}", q.braces())))?;
        self.violating_size = size;
        self.q = Some(q.clone());
        self.verify(q)?;
        Ok(self)
    }

    /// Recomputes every claim of the witness against `q`.
    pub fn verify(&self, q: &QSet) -> Result<()> {
        for (name, m) in [("x", &self.x), ("y", &self.y)] {
            if m.spec() != &self.field || m.n() != self.n {
                return Err(inconsistent(format!(
                    "{name} is not a {}x{} matrix over {}",
                    self.n, self.n, self.field
                )));
            }
            if !member_mq(m, q) {
                return Err(inconsistent(format!("{name} is not in M({})", q.braces())));
            }
        }
        if !self.x.commutes_with(&self.y) {
            return Err(inconsistent("x and y do not commute"));
        }
        let combo = self.x.combination(&self.a, &self.y, &self.b)?;
        let part = jordan_partition(&combo)?;
        if part != self.combo_partition {
            return Err(inconsistent(format!(
                "combination has partition {part}, recorded {}",
                self.combo_partition
            )));
        }
        if !part.g_set().sizes().contains(&self.violating_size) || q.allows(self.violating_size) {
            return Err(inconsistent(format!(
                "size {} does not leave M({})",
                self.violating_size,
                q.braces()
            )));
        }
        Ok(())
    }
}

/// `[[aJ, E], [0, bJ]]` with `J = J_{0,m}`.
pub fn build_zab(m: usize, a: &Scalar, b: &Scalar, spec: &FieldSpec) -> Result<ExactMatrix> {
    if m == 0 {
        return Err(Error::DimensionMismatch("block size must be positive".into()));
    }
    for s in [a, b] {
        if !spec.contains(s) {
            return Err(Error::FieldMismatch(format!("scalar is not in {spec}")));
        }
    }
    Ok(ExactMatrix::from_fn(spec, 2 * m, |i, j| {
        let (bi, bj) = (i / m, j / m);
        let (ri, rj) = (i % m, j % m);
        match (bi, bj) {
            (0, 0) if rj == ri + 1 => a.clone(),
            (1, 1) if rj == ri + 1 => b.clone(),
            (0, 1) if ri == rj => spec.one(),
            _ => spec.zero(),
        }
    }))
}

/// `x = J_{0,m}` and `y = x + x^k`; the combination `y - x = x^k` splits
/// into cells of sizes `floor(m/k)` and `ceil(m/k)`.
pub fn witness_power(m: usize, k: usize, n: usize, spec: &FieldSpec) -> Result<Witness> {
    if m < 2 || k < 2 || k >= m {
        return Err(Error::OutOfRange(format!("need 2 <= k < m, got m = {m}, k = {k}")));
    }
    if m > n {
        return Err(Error::OutOfRange(format!("cell size {m} exceeds n = {n}")));
    }
    let x = ExactMatrix::nilpotent_cell(spec, m).padded(n)?;
    let y = &x + &x.power(k as u32);
    Witness::assemble(Construction::Power, x, y, spec.from_int(-1), spec.one(), m.div_ceil(k))
}

/// Field, `ε0` and `t` for the block-family witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborChoice {
    pub field: FieldSpec,
    pub epsilon: Scalar,
    pub t: Scalar,
}

/// Least non-identity `m`-th root `ε0` and least `t` with `t + 1`,
/// `t + ε0` and `S_m(t + 1, t + ε0)` all nonzero. `None` when the field
/// has no such pair.
pub fn neighbor_choice(m: usize, spec: &FieldSpec) -> Option<NeighborChoice> {
    let one = spec.one();
    let epsilon = spec.roots_of_unity(m as u64).into_iter().find(|e| *e != one)?;
    let admissible = |t: &Scalar| {
        let (u, v) = (spec.add(t, &one), spec.add(t, &epsilon));
        !u.is_zero()
            && !v.is_zero()
            && !spec
                .geometric_sum(m as u64, &u, &v)
                .expect("elements of the field")
                .is_zero()
    };
    // ℚ is infinite but at most m + 1 values of t are excluded.
    let limit = spec.size().unwrap_or(m as u64 + 2);
    let t = (0..limit).map(|i| spec.element(i)).find(admissible)?;
    Some(NeighborChoice {
        field: spec.clone(),
        epsilon,
        t,
    })
}

/// Block-family witness over a given field.
pub fn witness_neighbor_over(m: usize, n: usize, spec: &FieldSpec) -> Result<Witness> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("block size must be at least 2, got {m}")));
    }
    if 2 * m > n {
        return Err(Error::DimensionTooSmall { n, needed: 2 * m });
    }
    let char = spec.characteristic();
    if char_power_exponent(m, char).is_some() {
        return Err(Error::IsCharPower { m, p: char });
    }
    let choice = neighbor_choice(m, spec)
        .ok_or_else(|| Error::OutOfRange(format!("{spec} has no admissible root of unity and t for m = {m}")))?;
    let cell = ExactMatrix::nilpotent_cell(spec, m);
    let x = ExactMatrix::block_diag(spec, &[cell.clone(), cell]).padded(n)?;
    let y = build_zab(m, &spec.one(), &choice.epsilon, spec)?.padded(n)?;
    Witness::assemble(Construction::Neighbor, x, y, choice.t, spec.one(), m + 1)
}

/// Picks a field holding a nontrivial `m`-th root of unity and builds the
/// block-family witness there.
///
/// Characteristic `p`: the smallest `GF(p^j)` with roots of unity and an
/// admissible `t`. Characteristic 0: ℚ itself when `m` is even (`ε0 = -1`),
/// otherwise the least prime `P > n` with `m | P - 1`.
pub fn witness_neighbor(m: usize, n: usize, char: u64) -> Result<Witness> {
    check_char(char)?;
    if 2 * m > n {
        return Err(Error::DimensionTooSmall { n, needed: 2 * m });
    }
    if char == 0 {
        if m.is_multiple_of(2) {
            return witness_neighbor_over(m, n, &FieldSpec::rationals());
        }
        let p = surrogate_prime(n as u64, m as u64);
        let mut w = witness_neighbor_over(m, n, &FieldSpec::prime(p)?)?;
        w.note = Some(format!(
            "characteristic 0 realized over GF({p}): since {p} > n = {n}, no candidate m0 is a power of {p}, so the verdicts for characteristic {p} and 0 coincide"
        ));
        return Ok(w);
    }
    if char_power_exponent(m, char).is_some() {
        return Err(Error::IsCharPower { m, p: char });
    }
    let mut free = m as u64;
    while free.is_multiple_of(char) {
        free /= char;
    }
    let base = extension_for_roots(char, free)?;
    let mut j = base;
    loop {
        let spec = FieldSpec::galois(char, j, None)?;
        if neighbor_choice(m, &spec).is_some() {
            return witness_neighbor_over(m, n, &spec);
        }
        j += base;
    }
}

/// Quotient witness: on `V1 ⊕ V2` with cells of sizes `m1` and `m2 = m + 2`,
/// the operators induced on `W/U` give `x` with cells `{m, m1}`, `y` with
/// a single `m1` cell and `x - y` with a single `m + 2` cell.
pub fn witness_gap(m: usize, m1: usize, n: usize, spec: &FieldSpec) -> Result<Witness> {
    let m2 = m + 2;
    if m == 0 || m1 <= m2 || m + m1 > n {
        return Err(Error::OutOfRange(format!(
            "need m >= 1, m1 > m + 2 and m + m1 <= n, got m = {m}, m1 = {m1}, n = {n}"
        )));
    }
    let dim_v = m1 + m2;
    // Coordinates: e_{1,k} -> k - 1, e_{2,k} -> m1 + k - 1.
    let e1 = |k: usize| k - 1;
    let e2 = |k: usize| m1 + k - 1;
    let unit = |idx: &[usize]| {
        let mut v = vec![spec.zero(); dim_v];
        for &i in idx {
            v[i] = spec.one();
        }
        v
    };
    // Complement of U in W, then the generator of U.
    let mut basis: Vec<Vec<Scalar>> = (1..m1).map(|k| unit(&[e1(k)])).collect();
    basis.extend((2..m2).map(|k| unit(&[e2(k)])));
    basis.push(unit(&[e1(m1), e2(m2)]));
    let u = unit(&[e1(1), e2(1)]);
    let d = basis.len();

    // Z_i shifts e_{i,k} to e_{i,k-1} and kills the other summand.
    let shift = |v: &[Scalar], which: usize| {
        let (lo, len) = if which == 1 { (0, m1) } else { (m1, m2) };
        let mut out = vec![spec.zero(); dim_v];
        for k in 1..len {
            out[lo + k - 1] = v[lo + k].clone();
        }
        out
    };

    // Solve [basis | u] c = Z_i b for every basis vector b at once.
    let induced = |which: usize| -> Result<ExactMatrix> {
        let images: Vec<Vec<Scalar>> = basis.iter().map(|b| shift(b, which)).collect();
        let ncols = d + 1 + d;
        let mut rows: Vec<Vec<Scalar>> = (0..dim_v)
            .map(|r| {
                let mut row: Vec<Scalar> = basis.iter().map(|b| b[r].clone()).collect();
                row.push(u[r].clone());
                row.extend(images.iter().map(|img| img[r].clone()));
                row
            })
            .collect();
        let pivots = elim::rref(spec, &mut rows, ncols);
        if pivots.len() != d + 1 || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(inconsistent("quotient images are not in W"));
        }
        // Column j of the induced matrix holds the coordinates of the image of basis[j].
        Ok(ExactMatrix::from_fn(spec, d, |i, j| rows[i][d + 1 + j].clone()))
    };
    let z1 = induced(1)?;
    let z2 = induced(2)?;
    let x = (&z1 + &z2).padded(n)?;
    let y = z1.padded(n)?;
    Witness::assemble(Construction::Gap, x, y, spec.one(), spec.from_int(-1), m2)
}

/// Returns a verified witness against `Q`, or `None` when the criterion
/// accepts.
pub fn falsify(n: usize, char: u64, q: &QSet) -> Result<Option<Witness>> {
    if check_criterion(n, char, q)?.accepted() {
        return Ok(None);
    }
    let spec = FieldSpec::of_characteristic(char)?;
    let elems = q.elements();
    let witness = if !q.contains(2) {
        let m = elems[0];
        witness_power(m, m - 1, n, &spec)?
    } else {
        let m0 = q.prefix_run();
        if m0 > n / 2 {
            return Err(inconsistent(format!(
                "prefix run {m0} reaches n/2 yet Q = {} is rejected",
                q.braces()
            )));
        }
        if char_power_exponent(m0, char).is_none() {
            witness_neighbor(m0, n, char)?
        } else {
            falsify_band(n, m0, q, &spec)?
        }
    };
    witness.against(q).map(Some)
}

/// `m0` is a characteristic power and the band condition fails.
fn falsify_band(n: usize, m0: usize, q: &QSet, spec: &FieldSpec) -> Result<Witness> {
    let lo = n + 2 - m0;
    let above: Vec<usize> = q.elements().iter().copied().filter(|&m| m > m0).collect();
    if let Some(&m1) = above.iter().find(|&&m| m < lo) {
        return witness_gap(m0 - 1, m1, n, spec);
    }
    if let Some(&m1) = above.iter().find(|&&m| m > 2 * m0) {
        if !q.allows(m1 / 2) || !q.allows(m1.div_ceil(2)) {
            return witness_power(m1, 2, n, spec);
        }
    }
    Err(inconsistent(format!(
        "no construction applies to n = {n}, Q = {}, m0 = {m0}",
        q.braces()
    )))
}

/// JSON form of a [`Witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    pub construction: Construction,
    pub field: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub a: String,
    pub b: String,
    pub x: MatrixFile,
    pub y: MatrixFile,
    pub combo_partition: Partition,
    pub violating_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            construction: w.construction,
            field: w.field.to_string(),
            n: w.n,
            q: w.q.as_ref().map(ToString::to_string),
            a: w.field.format(&w.a),
            b: w.field.format(&w.b),
            x: w.x.to_file(),
            y: w.y.to_file(),
            combo_partition: w.combo_partition.clone(),
            violating_size: w.violating_size,
            note: w.note.clone(),
        }
    }
}

impl TryFrom<&WitnessRecord> for Witness {
    type Error = Error;

    fn try_from(r: &WitnessRecord) -> Result<Self> {
        let field: FieldSpec = r.field.parse()?;
        let x = ExactMatrix::try_from(&r.x)?;
        let y = ExactMatrix::try_from(&r.y)?;
        let q = r.q.as_deref().map(|t| QSet::parse(r.n, t)).transpose()?;
        Ok(Witness {
            construction: r.construction,
            a: field.parse(&r.a)?,
            b: field.parse(&r.b)?,
            field,
            n: r.n,
            x,
            y,
            combo_partition: r.combo_partition.clone(),
            violating_size: r.violating_size,
            q,
            note: r.note.clone(),
        })
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = WitnessRecord::deserialize(d)?;
        Witness::try_from(&record).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |m: &ExactMatrix| {
            jordan_partition(m)
                .map(|p| p.to_string())
                .unwrap_or_else(|e| e.name().to_string())
        };
        writeln!(f, "construction: {}", self.construction)?;
        writeln!(f, "field:        {}", self.field)?;
        match &self.q {
            Some(q) => writeln!(f, "n = {}, Q = {}", self.n, q.braces())?,
            None => writeln!(f, "n = {}", self.n)?,
        }
        writeln!(
            f,
            "a = {}, b = {}",
            self.field.format(&self.a),
            self.field.format(&self.b)
        )?;
        writeln!(f, "x partition:       {}", part(&self.x))?;
        writeln!(f, "y partition:       {}", part(&self.y))?;
        writeln!(f, "a*x + b*y partition: {}", self.combo_partition)?;
        writeln!(f, "violating size:    {}", self.violating_size)?;
        if let Some(note) = &self.note {
            writeln!(f, "note: {note}")?;
        }
        writeln!(f, "x =")?;
        write!(f, "{}", self.x)?;
        writeln!(f, "y =")?;
        write!(f, "{}", self.y)
    }
}
