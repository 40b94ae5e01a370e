use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Counts, Mode, OracleReport, Outcome, Violation};
use crate::criterion::{member_mq, QSet};
use crate::error::Result;
use crate::exactmat::{poly_eval, ExactMatrix};
use crate::field::{FieldSpec, Poly, Scalar};
use crate::jordan::{jordan_matrix, partitions_of};
use crate::witness::{build_zab, witness_gap};

/// Exhaustive coefficient pairs are used on fields up to this size.
const SMALL_FIELD: u64 = 16;

fn random_scalar(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match spec.size() {
        Some(q) => spec.element(rng.gen_range(0..q)),
        None => spec.from_int(rng.gen_range(-3..=3)),
    }
}

/// Pairs from the explicit counterexample families that fit in `n` with
/// both members in `M(Q)` by construction.
fn catalog(n: usize, spec: &FieldSpec, q: &QSet) -> Result<Vec<(ExactMatrix, ExactMatrix)>> {
    let mut out = Vec::new();
    for &m in q.elements() {
        let cell = ExactMatrix::nilpotent_cell(spec, m).padded(n)?;
        for k in 2..m {
            out.push((cell.clone(), &cell + &cell.power(k as u32)));
        }
    }
    for &m in q.elements().iter().filter(|&&m| 2 * m <= n) {
        let cell = ExactMatrix::nilpotent_cell(spec, m);
        let z = ExactMatrix::block_diag(spec, &[cell.clone(), cell]).padded(n)?;
        let one = spec.one();
        for eps in spec.roots_of_unity(m as u64).into_iter().filter(|e| *e != one) {
            out.push((z.clone(), build_zab(m, &one, &eps, spec)?.padded(n)?));
        }
    }
    let lows: Vec<usize> = std::iter::once(1).chain(q.elements().iter().copied()).collect();
    for &m in &lows {
        for &m1 in q.elements() {
            if m1 > m + 2 && m + m1 <= n {
                let w = witness_gap(m, m1, n, spec)?;
                out.push((w.x, w.y));
            }
        }
    }
    Ok(out)
}

fn random_pair(
    n: usize,
    spec: &FieldSpec,
    q: &QSet,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(ExactMatrix, ExactMatrix)>> {
    let admissible: Vec<_> = partitions_of(n)
        .into_iter()
        .filter(|p| p.max_part() >= 2 && p.parts().iter().all(|&s| q.allows(s)))
        .collect();
    let Some(p) = admissible.choose(rng) else {
        return Ok(None);
    };
    let nil = jordan_matrix(p, n, spec)?;
    let h = p.max_part();
    let random_poly = |rng: &mut ChaCha8Rng| {
        let mut coeffs = vec![spec.zero()];
        coeffs.extend((1..h).map(|_| random_scalar(spec, rng)));
        Poly::new(spec, coeffs)
    };
    let random_central = |rng: &mut ChaCha8Rng, basis: &[ExactMatrix]| {
        basis.iter().fold(ExactMatrix::zeros(spec, n), |acc, b| {
            &acc + &b.scale(&random_scalar(spec, rng))
        })
    };
    let pair = match rng.gen_range(0..3) {
        0 => {
            let (f, g) = (random_poly(rng), random_poly(rng));
            (poly_eval(&f, &nil)?, poly_eval(&g, &nil)?)
        }
        1 => {
            let basis = nil.centralizer_basis();
            let y = random_central(rng, &basis);
            (nil, y)
        }
        _ => {
            let basis = nil.centralizer_basis();
            let x = random_central(rng, &basis);
            let y = random_central(rng, &basis);
            (x, y)
        }
    };
    Ok(Some(pair))
}

fn coefficient_pairs(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> Vec<(Scalar, Scalar)> {
    let mut pairs = Vec::new();
    let mut push = |p: (Scalar, Scalar)| {
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    };
    if let Some(q) = spec.size().filter(|&q| q <= SMALL_FIELD) {
        for a in 0..q {
            for b in 0..q {
                push((spec.element(a), spec.element(b)));
            }
        }
        return pairs;
    }
    let small: Vec<Scalar> = [0, 1, -1, 2, -2].iter().map(|&v| spec.from_int(v)).collect();
    for a in &small {
        for b in &small {
            push((a.clone(), b.clone()));
        }
    }
    for _ in 0..4 {
        push((random_scalar(spec, rng), random_scalar(spec, rng)));
    }
    pairs
}

/// Closure test on the structured catalog followed by `samples` random
/// commuting pairs; reproducible from `seed`.
pub fn sampled_check(n: usize, spec: &FieldSpec, q: &QSet, samples: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Counts::default();
    let report = |outcome, counts| OracleReport {
        mode: Mode::Sampled,
        field: spec.clone(),
        n,
        q: q.clone(),
        outcome,
        counts,
        seed: Some(seed),
    };
    let fixed = catalog(n, spec, q)?;
    let mut fixed = fixed.into_iter();
    let mut drawn = 0;
    loop {
        let pair = match fixed.next() {
            Some(p) => Some(p),
            None if drawn < samples => {
                drawn += 1;
                random_pair(n, spec, q, &mut rng)?
            }
            None => break,
        };
        let Some((x, y)) = pair else {
            continue;
        };
        counts.partitions += 1;
        counts.matrices += 2;
        if !x.commutes_with(&y) || !member_mq(&x, q) || !member_mq(&y, q) {
            continue;
        }
        counts.pairs += 1;
        for (a, b) in coefficient_pairs(spec, &mut rng) {
            counts.combinations += 1;
            let combo = x.combination(&a, &y, &b)?;
            if !member_mq(&combo, q) {
                let v = Violation::new(x, y, a, b, q)?;
                v.verify(q)?;
                return Ok(report(Outcome::Violation(v), counts));
            }
        }
    }
    Ok(report(Outcome::Pass, counts))
}
