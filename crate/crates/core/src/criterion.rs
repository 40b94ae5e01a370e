//! Decides whether the nilpotent set `M(Q)` is closed under combinations
//! of commuting pairs, plus membership predicates for the classes built
//! from it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::is_prime;
use crate::jordan::{g_set, is_semisimple, jordan_chevalley};

/// Largest `n` accepted by [`enumerate_valid_q`] unless a bound is given.
pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

/// Allowed non-unit Jordan cell sizes, a subset of `{2, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QSet {
    n: usize,
    elems: Vec<usize>,
}

impl QSet {
    pub fn new(n: usize, mut elems: Vec<usize>) -> Result<QSet> {
        elems.sort_unstable();
        elems.dedup();
        if let Some(&bad) = elems.iter().find(|&&m| m < 2 || m > n) {
            return Err(Error::InvalidQ(format!("{bad} is outside {{2,...,{n}}}")));
        }
        Ok(QSet { n, elems })
    }

    pub fn empty(n: usize) -> QSet {
        QSet { n, elems: Vec::new() }
    }

    /// Parses `"2,3,5"`; `"-"` (or an empty string) is the empty set.
    pub fn parse(n: usize, text: &str) -> Result<QSet> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(QSet::empty(n));
        }
        let elems = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidQ(format!("'{t}' is not a size")))
            })
            .collect::<Result<Vec<_>>>()?;
        QSet::new(n, elems)
    }

    /// Bit `i` of `mask` selects the size `i + 2`.
    pub fn from_mask(n: usize, mask: u64) -> QSet {
        let elems = (0..n.saturating_sub(1))
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 2)
            .collect();
        QSet { n, elems }
    }

    /// Every subset of `{2, ..., n}`, in mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = QSet> {
        (0..1u64 << n.saturating_sub(1)).map(move |mask| QSet::from_mask(n, mask))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, m: usize) -> bool {
        self.elems.binary_search(&m).is_ok()
    }

    /// Membership in `Q ∪ {1}`.
    pub fn allows(&self, m: usize) -> bool {
        m == 1 || self.contains(m)
    }

    /// Largest `m0` with `{2, ..., m0} ⊆ Q`; 1 when `2 ∉ Q`.
    pub fn prefix_run(&self) -> usize {
        let mut m = 1;
        while self.contains(m + 1) {
            m += 1;
        }
        m
    }

    /// Brace notation, `{2,3}` or `{}`.
    pub fn braces(&self) -> String {
        let items: Vec<String> = self.elems.iter().map(usize::to_string).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Display for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elems.is_empty() {
            return f.write_str("-");
        }
        let items: Vec<String> = self.elems.iter().map(usize::to_string).collect();
        f.write_str(&items.join(","))
    }
}

/// Why a candidate `m0` is admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum Branch {
    HalfN,
    /// `m0 = char^k`.
    CharPower(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct M0 {
    pub value: usize,
    pub branch: Branch,
}

/// Which requirement a candidate `m0` broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Some size in `{2, ..., m0}` is missing from `Q`.
    MissingPrefix,
    /// Some `m > m0` in `Q` lies outside `[n - m0 + 2, 2 m0]`.
    OutsideBand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub m0: M0,
    pub condition: Condition,
    /// The missing size, or the out-of-band element.
    pub element: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub n: usize,
    pub char: u64,
    pub q: QSet,
    pub verdict: Verdict,
    /// Largest accepting candidate; `None` on rejection and for `Q = ∅`.
    pub m0: Option<M0>,
    /// One entry per failing candidate, in increasing `m0`.
    pub rejections: Vec<Rejection>,
}

impl CriterionResult {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::HalfN => f.write_str("half_n"),
            Branch::CharPower(k) => write!(f, "char_power({k})"),
        }
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.accepted() { "accept" } else { "reject" };
        writeln!(f, "n = {}, char = {}, Q = {}", self.n, self.char, self.q.braces())?;
        match &self.m0 {
            Some(m0) => writeln!(f, "{verdict}: m0 = {} ({})", m0.value, m0.branch)?,
            None if self.accepted() => writeln!(f, "{verdict}: Q is empty")?,
            None => writeln!(f, "{verdict}")?,
        }
        for r in &self.rejections {
            let why = match r.condition {
                Condition::MissingPrefix => format!("{} not in Q", r.element),
                Condition::OutsideBand => format!(
                    "{} not in [{}, {}]",
                    r.element,
                    (self.n + 2).saturating_sub(r.m0.value),
                    2 * r.m0.value
                ),
            };
            writeln!(
                f,
                "  m0 = {:<3} {:<14} fails: {why}",
                r.m0.value,
                r.m0.branch.to_string()
            )?;
        }
        Ok(())
    }
}

pub(crate) fn check_char(char: u64) -> Result<()> {
    if char == 0 || is_prime(char) {
        Ok(())
    } else {
        Err(Error::NonPrimeChar(char))
    }
}

/// `Some(k)` with `m = p^k`, `k >= 1`.
pub(crate) fn char_power_exponent(m: usize, p: u64) -> Option<u32> {
    if p < 2 || m < 2 {
        return None;
    }
    let (mut v, mut k) = (m as u64, 0);
    while v % p == 0 {
        v /= p;
        k += 1;
    }
    (v == 1).then_some(k)
}

/// Candidate values of `m0`, increasing.
fn candidates(n: usize, char: u64) -> Vec<M0> {
    let half = n / 2 + 1;
    (2..=half)
        .filter_map(|m| {
            if m == half {
                Some(M0 {
                    value: m,
                    branch: Branch::HalfN,
                })
            } else {
                char_power_exponent(m, char).map(|k| M0 {
                    value: m,
                    branch: Branch::CharPower(k),
                })
            }
        })
        .collect()
}

fn test_candidate(n: usize, q: &QSet, m0: usize) -> Option<(Condition, usize)> {
    if let Some(missing) = (2..=m0).find(|&m| !q.contains(m)) {
        return Some((Condition::MissingPrefix, missing));
    }
    let lo = (n + 2).saturating_sub(m0);
    q.elements()
        .iter()
        .find(|&&m| m > m0 && (m < lo || m > 2 * m0))
        .map(|&m| (Condition::OutsideBand, m))
}

/// Runs every candidate `m0` against `Q`; accepts when one passes or `Q`
/// is empty.
pub fn check_criterion(n: usize, char: u64, q: &QSet) -> Result<CriterionResult> {
    check_char(char)?;
    if let Some(&bad) = q.elements().iter().find(|&&m| m > n) {
        return Err(Error::InvalidQ(format!("{bad} is outside {{2,...,{n}}}")));
    }
    let mut rejections = Vec::new();
    let mut best = None;
    for m0 in candidates(n, char) {
        match test_candidate(n, q, m0.value) {
            None => best = Some(m0),
            Some((condition, element)) => rejections.push(Rejection { m0, condition, element }),
        }
    }
    let accept = q.is_empty() || best.is_some();
    Ok(CriterionResult {
        n,
        char,
        q: q.clone(),
        verdict: if accept { Verdict::Accept } else { Verdict::Reject },
        m0: if q.is_empty() { None } else { best },
        rejections,
    })
}

/// All accepted subsets of `{2, ..., n}` in mask order.
pub fn enumerate_valid_q(n: usize, char: u64) -> Result<Vec<QSet>> {
    enumerate_valid_q_bounded(n, char, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_valid_q_bounded(n: usize, char: u64, bound: usize) -> Result<Vec<QSet>> {
    check_char(char)?;
    if n > bound || n > 63 {
        return Err(Error::BoundExceeded {
            n,
            bound: bound.min(63),
        });
    }
    let total = 1u64 << n.saturating_sub(1);
    let accepted = (0..total)
        .into_par_iter()
        .filter_map(|mask| {
            let q = QSet::from_mask(n, mask);
            let ok = check_criterion(n, char, &q).map(|r| r.accepted()).unwrap_or(false);
            ok.then_some(q)
        })
        .collect();
    Ok(accepted)
}

/// Nilpotent with every non-unit cell size in `Q`.
pub fn member_mq(x: &ExactMatrix, q: &QSet) -> bool {
    match g_set(x) {
        Ok(g) => g.sizes().iter().all(|&m| q.contains(m)),
        Err(_) => false,
    }
}

/// Classes for the semisimple factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MsClass {
    Zero,
    Scalars,
    Semisimple,
    SemisimpleTraceless,
}

impl MsClass {
    pub const ALL: [MsClass; 4] = [
        MsClass::Zero,
        MsClass::Scalars,
        MsClass::Semisimple,
        MsClass::SemisimpleTraceless,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MsClass::Zero => "zero",
            MsClass::Scalars => "scalars",
            MsClass::Semisimple => "semisimple",
            MsClass::SemisimpleTraceless => "semisimple_traceless",
        }
    }
}

impl fmt::Display for MsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MsClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MsClass::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            Error::Parse(format!(
                "unknown class '{s}' (expected zero, scalars, semisimple or semisimple_traceless)"
            ))
        })
    }
}

pub fn member_ms(x: &ExactMatrix, cls: MsClass) -> bool {
    match cls {
        MsClass::Zero => x.is_zero(),
        MsClass::Scalars => x.is_scalar(),
        MsClass::Semisimple => is_semisimple(x),
        MsClass::SemisimpleTraceless => is_semisimple(x) && x.trace().is_zero(),
    }
}

/// `X_s` in the class and `X_n ∈ M(Q)`.
pub fn member_full(x: &ExactMatrix, cls: MsClass, q: &QSet) -> Result<bool> {
    let (s, nil) = jordan_chevalley(x)?;
    Ok(member_ms(&s, cls) && member_mq(&nil, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::jordan::{jordan_matrix, Partition};

    fn qs(n: usize, v: &[usize]) -> QSet {
        QSet::new(n, v.to_vec()).unwrap()
    }

    fn braces(list: &[QSet]) -> Vec<String> {
        list.iter().map(QSet::braces).collect()
    }

    #[test]
    fn criterion_examples() {
        let r = check_criterion(4, 0, &qs(4, &[2, 3])).unwrap();
        assert!(r.accepted());
        assert_eq!(
            r.m0,
            Some(M0 {
                value: 3,
                branch: Branch::HalfN
            })
        );

        assert!(!check_criterion(4, 0, &qs(4, &[2, 4])).unwrap().accepted());

        let r = check_criterion(6, 3, &qs(6, &[2, 3, 5])).unwrap();
        assert!(r.accepted());
        assert_eq!(
            r.m0,
            Some(M0 {
                value: 3,
                branch: Branch::CharPower(1)
            })
        );

        let r = check_criterion(6, 0, &qs(6, &[2, 3, 5])).unwrap();
        assert!(!r.accepted());
        assert_eq!(r.m0, None);
        assert_eq!(
            r.rejections,
            vec![Rejection {
                m0: M0 {
                    value: 4,
                    branch: Branch::HalfN
                },
                condition: Condition::MissingPrefix,
                element: 4
            }]
        );

        let r = check_criterion(9, 0, &QSet::empty(9)).unwrap();
        assert!(r.accepted());
    }

    #[test]
    fn criterion_errors() {
        assert_eq!(check_criterion(4, 4, &QSet::empty(4)), Err(Error::NonPrimeChar(4)));
        assert!(matches!(QSet::parse(4, "2,5"), Err(Error::InvalidQ(_))));
        assert!(matches!(QSet::parse(4, "1"), Err(Error::InvalidQ(_))));
        assert!(matches!(QSet::parse(4, "x"), Err(Error::InvalidQ(_))));
        assert!(matches!(check_criterion(3, 0, &qs(5, &[5])), Err(Error::InvalidQ(_))));
    }

    #[test]
    fn qset_text() {
        assert_eq!(QSet::parse(5, "5, 2,3").unwrap().to_string(), "2,3,5");
        assert_eq!(QSet::parse(5, "-").unwrap().to_string(), "-");
        assert_eq!(qs(4, &[2, 4]).braces(), "{2,4}");
        assert_eq!(qs(6, &[2, 3, 5]).prefix_run(), 3);
        assert_eq!(qs(6, &[3]).prefix_run(), 1);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(braces(&enumerate_valid_q(4, 0).unwrap()), ["{}", "{2,3}", "{2,3,4}"]);
        assert_eq!(
            braces(&enumerate_valid_q(4, 2).unwrap()),
            ["{}", "{2}", "{2,3}", "{2,4}", "{2,3,4}"]
        );
        assert_eq!(
            braces(&enumerate_valid_q(5, 0).unwrap()),
            ["{}", "{2,3}", "{2,3,4}", "{2,3,5}", "{2,3,4,5}"]
        );
        assert_eq!(enumerate_valid_q(21, 0), Err(Error::BoundExceeded { n: 21, bound: 20 }));
    }

    #[test]
    fn existential_m0() {
        // m0 = 2 accepts even though the prefix run stops there.
        let r = check_criterion(4, 2, &qs(4, &[2, 4])).unwrap();
        assert_eq!(
            r.m0,
            Some(M0 {
                value: 2,
                branch: Branch::CharPower(1)
            })
        );
    }

    #[test]
    fn structural_properties() {
        for n in 1..=12 {
            let half = n / 2 + 1;
            for char in [0, 2, 3, 5] {
                for q in QSet::all_subsets(n) {
                    let accepted = check_criterion(n, char, &q).unwrap().accepted();
                    let has_prefix = (2..=half).all(|m| q.contains(m));
                    if has_prefix {
                        assert!(accepted, "n={n} char={char} Q={q}");
                    }
                    if char == 0 && accepted && !q.is_empty() {
                        assert!(has_prefix, "n={n} Q={q}");
                    }
                    if accepted && !q.is_empty() {
                        assert!(q.contains(2));
                        for &m in q.elements() {
                            for k in 1..=m {
                                assert!(
                                    q.allows(m / k) && q.allows(m.div_ceil(k)),
                                    "n={n} char={char} Q={q} m={m} k={k}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let f = FieldSpec::rationals();
        let p = Partition::new(vec![3, 2, 1]).unwrap();
        let x = jordan_matrix(&p, 6, &f).unwrap();
        assert!(member_mq(&x, &qs(6, &[2, 3])));
        assert!(!member_mq(&x, &qs(6, &[2])));
        assert!(member_mq(&ExactMatrix::zeros(&f, 3), &QSet::empty(3)));
        assert!(!member_mq(&ExactMatrix::identity(&f, 3), &qs(3, &[2, 3])));

        assert!(member_ms(&ExactMatrix::identity(&f, 3), MsClass::Scalars));
        let d = ExactMatrix::diagonal(&f, &[f.one(), f.from_int(-1)]);
        assert!(member_ms(&d, MsClass::SemisimpleTraceless));
        assert!(!member_ms(&ExactMatrix::nilpotent_cell(&f, 2), MsClass::Semisimple));
        assert!(member_ms(&ExactMatrix::zeros(&f, 2), MsClass::Zero));

        let u = ExactMatrix::from_ints(&f, &[&[1, 1], &[0, 1]]);
        assert!(member_full(&u, MsClass::Scalars, &qs(2, &[2])).unwrap());
        let d12 = ExactMatrix::diagonal(&f, &[f.one(), f.from_int(2)]);
        assert!(!member_full(&d12, MsClass::Scalars, &qs(2, &[2])).unwrap());
        assert!(member_full(&d12, MsClass::Semisimple, &QSet::empty(2)).unwrap());
        assert_eq!(
            "semisimple_traceless".parse::<MsClass>(),
            Ok(MsClass::SemisimpleTraceless)
        );
    }

    #[test]
    fn membership_reduces_to_single_cells() {
        let f = FieldSpec::prime(3).unwrap();
        let n = 7;
        for part in crate::jordan::partitions_of(n) {
            let x = jordan_matrix(&part, n, &f).unwrap();
            for q in QSet::all_subsets(n) {
                let singles = part.g_set().sizes().iter().all(|&m| {
                    let cell = jordan_matrix(&Partition::new(vec![m]).unwrap(), n, &f).unwrap();
                    member_mq(&cell, &q)
                });
                assert_eq!(member_mq(&x, &q), singles, "{part} {q}");
            }
        }
    }
}
