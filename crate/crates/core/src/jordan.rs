//! Nilpotent structure: Jordan partitions from defect sequences, the
//! closed form for the Jordan type of `f(J_{0,m})`, and the
//! Jordan–Chevalley decomposition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{poly_eval, ExactMatrix};
use crate::field::FieldSpec;

/// Multiset of Jordan cell sizes, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::OutOfRange("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn max_part(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Appends 1-parts up to total `n`.
    pub fn padded(&self, n: usize) -> Partition {
        let mut parts = self.0.clone();
        parts.extend(std::iter::repeat_n(1, n.saturating_sub(self.total())));
        Partition(parts)
    }

    pub fn g_set(&self) -> GSet {
        GSet(self.0.iter().copied().filter(|&p| p >= 2).collect())
    }

    /// `sum_{i,j} min(l_i, l_j)`: dimension of the centralizer of the
    /// nilpotent Jordan matrix with these cells.
    pub fn centralizer_dimension(&self) -> usize {
        self.0
            .iter()
            .map(|&a| self.0.iter().map(|&b| a.min(b)).sum::<usize>())
            .sum()
    }
}

/// Non-unit Jordan cell sizes (with multiplicity), descending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GSet(Vec<usize>);

impl GSet {
    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, parts: &[usize]) -> fmt::Result {
    let items: Vec<String> = parts.iter().map(usize::to_string).collect();
    write!(f, "[{}]", items.join(","))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition '{s}' must look like [3,2,1]")))?;
        if inner.trim().is_empty() {
            return Ok(Partition(Vec::new()));
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part '{t}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` in descending lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `h(x)`: least `k >= 1` with `x^k = 0`.
pub fn nilpotency_index(x: &ExactMatrix) -> Result<usize> {
    let mut p = x.clone();
    for k in 1..=x.n().max(1) {
        if p.is_zero() {
            return Ok(k);
        }
        p = &p * x;
    }
    Err(Error::NotNilpotent)
}

/// Jordan cell sizes of a nilpotent matrix, read off the defects of its
/// powers: the number of cells of size `>= p` is `def(x^p) - def(x^(p-1))`.
pub fn jordan_partition(x: &ExactMatrix) -> Result<Partition> {
    let n = x.n();
    let mut defects = vec![0usize];
    let mut p = x.clone();
    while *defects.last().expect("nonempty") < n {
        if defects.len() > n {
            return Err(Error::NotNilpotent);
        }
        let d = p.defect();
        if d == *defects.last().expect("nonempty") {
            // The kernel chain stalled below n.
            return Err(Error::NotNilpotent);
        }
        defects.push(d);
        p = &p * x;
    }
    // at_least[s] = number of cells of size >= s, for s = 1..
    let at_least: Vec<usize> = defects.windows(2).map(|w| w[1] - w[0]).collect();
    let mut parts = Vec::with_capacity(defects[1]);
    for (idx, &count) in at_least.iter().enumerate() {
        let next = at_least.get(idx + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(idx + 1, count - next));
    }
    Partition::new(parts)
}

/// Block-diagonal nilpotent Jordan matrix with the given cells, padded
/// with zero (1-cell) blocks to dimension `n`.
pub fn jordan_matrix(p: &Partition, n: usize, spec: &FieldSpec) -> Result<ExactMatrix> {
    if p.total() > n {
        return Err(Error::PartitionTooLarge { total: p.total(), n });
    }
    let blocks: Vec<ExactMatrix> = p
        .parts()
        .iter()
        .map(|&m| ExactMatrix::nilpotent_cell(spec, m))
        .collect();
    ExactMatrix::block_diag(spec, &blocks).padded(n)
}

/// Non-unit cell sizes of a nilpotent matrix.
pub fn g_set(x: &ExactMatrix) -> Result<GSet> {
    Ok(jordan_partition(x)?.g_set())
}

/// Jordan type of `f(J_{0,m})` when `t^k` exactly divides `f`: `k` cells,
/// `r = m - kq` of size `q + 1` and the rest of size `q = floor(m/k)`.
pub fn predicted_poly_partition(m: usize, k: usize) -> Result<Partition> {
    if k == 0 || k > m {
        return Err(Error::OutOfRange(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
    }
    let q = m / k;
    let r = m - k * q;
    let mut parts = vec![q + 1; r];
    parts.extend(std::iter::repeat_n(q, k - r));
    Partition::new(parts)
}

/// Semisimple iff the minimal polynomial is squarefree.
pub fn is_semisimple(x: &ExactMatrix) -> bool {
    x.minimal_polynomial().is_squarefree()
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Splits `x = X_s + X_n` with `X_s` semisimple, `X_n` nilpotent and both
/// polynomials in `x`.
///
/// With `f1` the squarefree part of the minimal polynomial and
/// `g = (f1')^{-1} mod f1`, the iteration `S <- S - f1(S) g(S)` started at
/// `x` squares the nilpotency index of `f1(S)` away each step.
pub fn jordan_chevalley(x: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    let f1 = x.minimal_polynomial().squarefree_part();
    let inv_deriv = f1
        .derivative()
        .inverse_mod(&f1)
        .ok_or(Error::InseparableMinimalPolynomial)?;
    let steps = ceil_log2(x.n()) + 1;
    let mut s = x.clone();
    for _ in 0..steps {
        let correction = &poly_eval(&f1, &s)? * &poly_eval(&inv_deriv, &s)?;
        s = &s - &correction;
    }
    if !poly_eval(&f1, &s)?.is_zero() {
        return Err(Error::InternalInconsistency(
            "Newton iteration did not reach a root of the squarefree part".into(),
        ));
    }
    let nil = x - &s;
    Ok((s, nil))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{k_of_poly, Poly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn nilpotency_examples() {
        let f = q();
        let x = jordan_matrix(&part(&[3, 2]), 5, &f).unwrap();
        assert_eq!(nilpotency_index(&x), Ok(3));
        assert_eq!(nilpotency_index(&ExactMatrix::zeros(&f, 3)), Ok(1));
        assert_eq!(
            nilpotency_index(&ExactMatrix::identity(&f, 2)),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn partition_examples() {
        let f = q();
        let x = jordan_matrix(&part(&[3, 2]), 5, &f).unwrap();
        assert_eq!(jordan_partition(&x).unwrap(), part(&[3, 2]));
        let c7 = ExactMatrix::nilpotent_cell(&f, 7).power(3);
        assert_eq!(jordan_partition(&c7).unwrap(), part(&[3, 2, 2]));
        assert_eq!(jordan_partition(&c7).unwrap().to_string(), "[3,2,2]");

        let g = FieldSpec::prime(3).unwrap();
        let n = ExactMatrix::nilpotent_cell(&g, 2);
        let i = ExactMatrix::identity(&g, 2);
        let sum = &n.kron(&i) + &i.kron(&n);
        assert_eq!(jordan_partition(&sum).unwrap(), part(&[3, 1]));
        assert_eq!(sum.rank(), 2);

        let not_nil = ExactMatrix::from_ints(&f, &[&[0, 1], &[0, 1]]);
        assert_eq!(jordan_partition(&not_nil), Err(Error::NotNilpotent));
    }

    #[test]
    fn jordan_matrix_examples() {
        let f = q();
        let c2 = ExactMatrix::nilpotent_cell(&f, 2);
        assert_eq!(
            jordan_matrix(&part(&[2, 2]), 4, &f).unwrap(),
            ExactMatrix::block_diag(&f, &[c2.clone(), c2])
        );
        let m = jordan_matrix(&part(&[3]), 5, &f).unwrap();
        assert_eq!(jordan_partition(&m).unwrap(), part(&[3, 1, 1]));
        assert_eq!(
            jordan_matrix(&part(&[4]), 4, &f).unwrap(),
            ExactMatrix::nilpotent_cell(&f, 4)
        );
        assert_eq!(
            jordan_matrix(&part(&[4, 2]), 5, &f),
            Err(Error::PartitionTooLarge { total: 6, n: 5 })
        );
    }

    #[test]
    fn g_set_examples() {
        let f = q();
        let x = jordan_matrix(&part(&[3, 2, 1, 1]), 7, &f).unwrap();
        assert_eq!(g_set(&x).unwrap().sizes(), &[3, 2]);
        assert!(g_set(&ExactMatrix::zeros(&f, 3)).unwrap().is_empty());
        let c4 = ExactMatrix::nilpotent_cell(&f, 4).power(3);
        assert_eq!(g_set(&c4).unwrap().sizes(), &[2]);
    }

    #[test]
    fn predicted_examples() {
        assert_eq!(predicted_poly_partition(7, 3).unwrap(), part(&[3, 2, 2]));
        assert_eq!(predicted_poly_partition(5, 5).unwrap(), part(&[1, 1, 1, 1, 1]));
        assert_eq!(predicted_poly_partition(5, 1).unwrap(), part(&[5]));
        assert!(predicted_poly_partition(3, 4).is_err());
        assert!(predicted_poly_partition(3, 0).is_err());
    }

    #[test]
    fn predicted_matches_powers_of_cell() {
        let f = q();
        for m in 1..=10 {
            let cell = ExactMatrix::nilpotent_cell(&f, m);
            for k in 1..=m {
                let pred = predicted_poly_partition(m, k).unwrap();
                assert_eq!(jordan_partition(&cell.power(k as u32)).unwrap(), pred, "m={m} k={k}");
                // Distinct sizes are floor(m/k) and ceil(m/k).
                let mut sizes: Vec<usize> = pred.parts().to_vec();
                sizes.dedup();
                let mut expect = vec![m.div_ceil(k), m / k];
                expect.dedup();
                assert_eq!(sizes, expect);
            }
        }
    }

    #[test]
    fn partitions_in_descending_lex_order() {
        let ps: Vec<String> = partitions_of(4).iter().map(ToString::to_string).collect();
        assert_eq!(ps, ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]);
        // p(8) = 22
        assert_eq!(partitions_of(8).len(), 22);
        assert_eq!(part(&[2, 1]).centralizer_dimension(), 5);
        assert_eq!("[3,2,2]".parse::<Partition>().unwrap(), part(&[3, 2, 2]));
    }

    #[test]
    fn chevalley_examples() {
        let f = q();
        let lambda = f.from_int(5);
        let j = ExactMatrix::jordan_cell(&f, &lambda, 4);
        let (s, n) = jordan_chevalley(&j).unwrap();
        assert_eq!(s, ExactMatrix::scalar(&f, 4, lambda));
        assert_eq!(n, ExactMatrix::nilpotent_cell(&f, 4));

        let d = ExactMatrix::diagonal(&f, &[f.one(), f.from_int(2)]);
        let (s, n) = jordan_chevalley(&d).unwrap();
        assert_eq!(s, d);
        assert!(n.is_zero());

        let u = ExactMatrix::from_ints(&f, &[&[1, 1], &[0, 1]]);
        let (s, n) = jordan_chevalley(&u).unwrap();
        assert_eq!(s, ExactMatrix::identity(&f, 2));
        assert_eq!(n, ExactMatrix::from_ints(&f, &[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn semisimple_examples() {
        let f = q();
        let d = ExactMatrix::diagonal(&f, &[f.one(), f.from_int(2), f.from_int(2)]);
        assert!(is_semisimple(&d));
        assert!(!is_semisimple(&ExactMatrix::nilpotent_cell(&f, 2)));
        let rot = ExactMatrix::from_ints(&f, &[&[0, 1], &[-1, 0]]);
        assert!(is_semisimple(&rot));
        // Over GF(2), t^2 + 1 = (t + 1)^2.
        let g = FieldSpec::prime(2).unwrap();
        assert!(!is_semisimple(&ExactMatrix::from_ints(&g, &[&[0, 1], &[1, 0]])));
    }

    #[test]
    fn chevalley_over_gf2_with_inseparable_factor() {
        // (t^2 + t + 1)^2 over GF(2): companion matrix of t^4 + t^2 + 1.
        let g = FieldSpec::prime(2).unwrap();
        let c = ExactMatrix::from_ints(&g, &[&[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0]]);
        let (s, n) = jordan_chevalley(&c).unwrap();
        assert!(is_semisimple(&s));
        assert!(n.is_nilpotent());
        assert!(!n.is_zero());
        assert!(s.commutes_with(&n));
        assert_eq!(&s + &n, c);
    }

    #[test]
    fn random_polys_in_cell_follow_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in [q(), FieldSpec::prime(5).unwrap()] {
            for m in 1..=8usize {
                for k in 1..=m {
                    let mut coeffs = vec![spec.zero(); k];
                    coeffs.push(spec.from_int(rng.gen_range(1..5)));
                    for _ in 0..rng.gen_range(0..4) {
                        coeffs.push(spec.from_int(rng.gen_range(-3..=3)));
                    }
                    let f = Poly::new(&spec, coeffs);
                    assert_eq!(k_of_poly(&f), Ok(k));
                    let v = poly_eval(&f, &ExactMatrix::nilpotent_cell(&spec, m)).unwrap();
                    assert_eq!(jordan_partition(&v).unwrap(), predicted_poly_partition(m, k).unwrap());
                }
            }
        }
    }

    use proptest::prelude::*;

    fn build(spec: &FieldSpec, n: usize, vals: &[i64]) -> ExactMatrix {
        ExactMatrix::from_fn(spec, n, |i, j| spec.from_int(vals[i * n + j]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn chevalley_contract(vals in proptest::collection::vec(-2i64..=2, 16), p in prop::sample::select(vec![0u64, 2, 3])) {
            let spec = FieldSpec::of_characteristic(p).unwrap();
            let x = build(&spec, 4, &vals);
            let (s, nil) = jordan_chevalley(&x).unwrap();
            prop_assert_eq!(&s + &nil, x);
            prop_assert!(s.commutes_with(&nil));
            prop_assert!(nil.is_nilpotent());
            prop_assert!(is_semisimple(&s));
        }

        #[test]
        fn chevalley_is_additive_on_commuting_pairs(
            vals in proptest::collection::vec(-2i64..=2, 9),
            coeffs in proptest::collection::vec(-2i64..=2, 3),
            a in -3i64..=3,
            b in -3i64..=3,
        ) {
            let spec = FieldSpec::rationals();
            let x = build(&spec, 3, &vals);
            let y = poly_eval(&Poly::from_ints(&spec, &coeffs), &x).unwrap();
            let (xs, xn) = jordan_chevalley(&x).unwrap();
            let (ys, yn) = jordan_chevalley(&y).unwrap();
            let (fa, fb) = (spec.from_int(a), spec.from_int(b));
            let z = x.combination(&fa, &y, &fb).unwrap();
            let (zs, zn) = jordan_chevalley(&z).unwrap();
            prop_assert_eq!(zs, xs.combination(&fa, &ys, &fb).unwrap());
            prop_assert_eq!(zn, xn.combination(&fa, &yn, &fb).unwrap());
        }

        #[test]
        fn partition_invariants(parts in proptest::collection::vec(1usize..=4, 1..4), p in prop::sample::select(vec![0u64, 2, 5])) {
            let spec = FieldSpec::of_characteristic(p).unwrap();
            let part = Partition::new(parts).unwrap();
            let n = part.total() + 1;
            let x = jordan_matrix(&part, n, &spec).unwrap();
            // Conjugate by a fixed unipotent matrix so the input is not already in normal form.
            let g = ExactMatrix::from_fn(&spec, n, |i, j| if j >= i { spec.one() } else { spec.zero() });
            let y = &(&g * &x) * &g.inverse().unwrap();
            let got = jordan_partition(&y).unwrap();
            prop_assert_eq!(&got, &part.padded(n));
            prop_assert_eq!(got.total(), n);
            prop_assert_eq!(got.len(), y.defect());
            prop_assert_eq!(got.max_part(), nilpotency_index(&y).unwrap());
        }
    }
}
