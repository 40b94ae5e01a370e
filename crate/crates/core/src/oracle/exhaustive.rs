use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::kernel::{from_exact, to_exact, Fq, Mat, Work};
use super::{Counts, Mode, OracleReport, Outcome, Violation};
use crate::criterion::QSet;
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::{FieldSpec, Scalar};
use crate::jordan::{jordan_matrix, partitions_of, Partition};

/// Centralizer elements to enumerate for one Jordan type: `q^d` with
/// `d = sum min(l_i, l_j)`. Saturates at `u128::MAX`.
pub fn required_enumeration(p: &Partition, q: u64) -> u128 {
    let d = p.centralizer_dimension() as u32;
    (q as u128).checked_pow(d).unwrap_or(u128::MAX)
}

fn admissible_partitions(n: usize, q: &QSet) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(|p| p.max_part() >= 2 && p.parts().iter().all(|&s| q.allows(s)))
        .collect()
}

fn check_q(n: usize, q: &QSet) -> Result<()> {
    match q.elements().last() {
        Some(&m) if m > n => Err(Error::InvalidQ(format!("{m} is outside {{2,...,{n}}}"))),
        _ => Ok(()),
    }
}

/// Tests one Jordan representative `X` per admissible type against every
/// nilpotent `Y ∈ M(Q)` in its centralizer and every `(a, b)`.
///
/// Partitions run in descending lexicographic order, `Y` in odometer order
/// over the centralizer basis coefficients (last coefficient fastest), and
/// `(a, b)` row-major, so the first violation is well defined.
pub fn exhaustive_check(n: usize, spec: &FieldSpec, q: &QSet, budget: u128) -> Result<OracleReport> {
    let size = spec.size().ok_or(Error::InfiniteField)?;
    check_q(n, q)?;
    let parts = admissible_partitions(n, q);
    for p in &parts {
        let required = required_enumeration(p, size);
        if required > budget || required > u64::MAX as u128 {
            return Err(Error::BudgetExceeded {
                partition: p.to_string(),
                required,
                budget,
            });
        }
    }
    let f = Fq::new(spec)?;
    let mut counts = Counts::default();
    let mut outcome = Outcome::Pass;
    for p in &parts {
        counts.partitions += 1;
        let x = jordan_matrix(p, n, spec)?;
        let (c, hit) = search_centralizer(&f, &x, q);
        counts.absorb(&c);
        if let Some((y, a, b)) = hit {
            let v = Violation::new(
                x,
                to_exact(spec, n, &y),
                Scalar::Finite(a as u64),
                Scalar::Finite(b as u64),
                q,
            )?;
            v.verify(q)?;
            outcome = Outcome::Violation(v);
            break;
        }
    }
    Ok(OracleReport {
        mode: Mode::Exhaustive,
        field: spec.clone(),
        n,
        q: q.clone(),
        outcome,
        counts,
        seed: None,
    })
}

struct Odometer {
    /// `scaled[i][c]` is `element(c) * basis[i]`.
    step: Vec<Vec<Mat>>,
    wrap: Vec<Mat>,
    scaled: Vec<Vec<Mat>>,
}

impl Odometer {
    fn new(f: &Fq, basis: &[Mat]) -> Odometer {
        let q = f.q;
        let scaled: Vec<Vec<Mat>> = basis
            .iter()
            .map(|b| {
                (0..q as u32)
                    .map(|c| b.iter().map(|&v| f.mul(c, v)).collect())
                    .collect()
            })
            .collect();
        let diff = |x: &Mat, y: &Mat| -> Mat { x.iter().zip(y).map(|(&u, &v)| f.sub(u, v)).collect() };
        let step = scaled
            .iter()
            .map(|s| (0..q - 1).map(|c| diff(&s[c + 1], &s[c])).collect())
            .collect();
        let wrap = scaled
            .iter()
            .map(|s| s[q - 1].iter().map(|&v| f.neg(v)).collect())
            .collect();
        Odometer { step, wrap, scaled }
    }
}

type Hit = (Mat, u32, u32);

struct ChunkResult {
    counts: Counts,
    hit: Option<Hit>,
}

fn search_centralizer(f: &Fq, x: &ExactMatrix, q: &QSet) -> (Counts, Option<Hit>) {
    let n = x.n();
    let xm = from_exact(x);
    let basis: Vec<Mat> = x.centralizer_basis().iter().map(from_exact).collect();
    let d = basis.len();
    let odo = Odometer::new(f, &basis);
    let total = (f.q as u128).pow(d as u32) as u64;
    let chunk = (total / 64).max(1 << 12);
    let chunks = total.div_ceil(chunk) as usize;
    let first_hit = AtomicUsize::new(usize::MAX);

    let results: Vec<ChunkResult> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci as u64 * chunk;
            let end = (start + chunk).min(total);
            run_chunk(f, n, &xm, q, &odo, d, start, end, ci, &first_hit)
        })
        .collect();

    let mut counts = Counts::default();
    for r in results {
        counts.absorb(&r.counts);
        if r.hit.is_some() {
            return (counts, r.hit);
        }
    }
    (counts, None)
}

#[allow(clippy::too_many_arguments)]
fn run_chunk(
    f: &Fq,
    n: usize,
    xm: &[u32],
    q: &QSet,
    odo: &Odometer,
    d: usize,
    start: u64,
    end: u64,
    ci: usize,
    first_hit: &AtomicUsize,
) -> ChunkResult {
    let mut counts = Counts::default();
    let mut work = Work::new(f, n);
    // Digits of `start`, most significant first.
    let mut digits = vec![0usize; d];
    let mut rest = start;
    for i in (0..d).rev() {
        digits[i] = (rest % f.q as u64) as usize;
        rest /= f.q as u64;
    }
    let mut y = vec![0u32; n * n];
    for (i, &c) in digits.iter().enumerate() {
        work.add_into(&mut y, &odo.scaled[i][c]);
    }
    let mut z = vec![0u32; n * n];
    for idx in start..end {
        if idx > start {
            let mut i = d - 1;
            while digits[i] == f.q - 1 {
                work.add_into(&mut y, &odo.wrap[i]);
                digits[i] = 0;
                i -= 1;
            }
            work.add_into(&mut y, &odo.step[i][digits[i]]);
            digits[i] += 1;
        }
        if idx & 0xfff == 0 && first_hit.load(Ordering::Relaxed) < ci {
            // An earlier chunk already holds the first violation.
            break;
        }
        counts.matrices += 1;
        if !work.trace_is_zero(&y) || !work.is_nilpotent(&y) {
            continue;
        }
        if work.escape_size(&y, q) != Some(0) {
            continue;
        }
        counts.pairs += 1;
        for a in 0..f.q as u32 {
            for b in 0..f.q as u32 {
                counts.combinations += 1;
                work.combine(&mut z, a, xm, b, &y);
                if work.escape_size(&z, q) != Some(0) {
                    first_hit.fetch_min(ci, Ordering::Relaxed);
                    return ChunkResult {
                        counts,
                        hit: Some((y, a, b)),
                    };
                }
            }
        }
    }
    ChunkResult { counts, hit: None }
}

/// Same closure test without the conjugacy reduction: every `X` and `Y`
/// in `M(Q)` (all `q^(n^2)` matrices each), every commuting pair, every
/// `(a, b)`.
pub fn exhaustive_check_unreduced(n: usize, spec: &FieldSpec, q: &QSet, budget: u128) -> Result<OracleReport> {
    let size = spec.size().ok_or(Error::InfiniteField)?;
    check_q(n, q)?;
    let cells = (n * n) as u32;
    let required = (size as u128).checked_pow(2 * cells).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded {
            partition: "unreduced".into(),
            required,
            budget,
        });
    }
    let f = Fq::new(spec)?;
    let mut work = Work::new(&f, n);
    let mut counts = Counts::default();
    let mut members: Vec<Mat> = Vec::new();
    for idx in 0..(size as u128).pow(cells) {
        let mut rest = idx;
        let m: Mat = (0..n * n)
            .map(|_| {
                let v = (rest % size as u128) as u32;
                rest /= size as u128;
                v
            })
            .collect();
        counts.matrices += 1;
        if work.escape_size(&m, q) == Some(0) {
            members.push(m);
        }
    }
    let mut z = vec![0u32; n * n];
    for xm in &members {
        counts.partitions += 1;
        for ym in &members {
            if !work.commute(xm, ym) {
                continue;
            }
            counts.pairs += 1;
            for a in 0..f.q as u32 {
                for b in 0..f.q as u32 {
                    counts.combinations += 1;
                    work.combine(&mut z, a, xm, b, ym);
                    if work.escape_size(&z, q) != Some(0) {
                        let v = Violation::new(
                            to_exact(spec, n, xm),
                            to_exact(spec, n, ym),
                            Scalar::Finite(a as u64),
                            Scalar::Finite(b as u64),
                            q,
                        )?;
                        v.verify(q)?;
                        return Ok(OracleReport {
                            mode: Mode::Exhaustive,
                            field: spec.clone(),
                            n,
                            q: q.clone(),
                            outcome: Outcome::Violation(v),
                            counts,
                            seed: None,
                        });
                    }
                }
            }
        }
    }
    Ok(OracleReport {
        mode: Mode::Exhaustive,
        field: spec.clone(),
        n,
        q: q.clone(),
        outcome: Outcome::Pass,
        counts,
        seed: None,
    })
}
