//! Brute-force checks of commuting-span closure for `M(Q)` over concrete
//! fields, used to validate the criterion and the witnesses.

mod cross;
mod exhaustive;
pub(crate) mod kernel;
mod sampled;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::criterion::{member_mq, QSet};
use crate::error::{Error, Result};
use crate::exactmat::{ExactMatrix, MatrixFile};
use crate::field::{FieldSpec, Scalar};
use crate::jordan::{jordan_partition, Partition};

pub use cross::{cross_validate, CrossEntry, CrossReport, DegreeOutcome};
pub use exhaustive::{exhaustive_check, exhaustive_check_unreduced, required_enumeration};
pub use sampled::sampled_check;

/// About sixteen million centralizer elements per partition.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// A commuting pair in `M(Q)` whose combination leaves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: ExactMatrix,
    pub y: ExactMatrix,
    pub a: Scalar,
    pub b: Scalar,
    pub combo_partition: Partition,
    pub violating_size: usize,
}

impl Violation {
    pub(crate) fn new(x: ExactMatrix, y: ExactMatrix, a: Scalar, b: Scalar, q: &QSet) -> Result<Violation> {
        let combo = x.combination(&a, &y, &b)?;
        let combo_partition = jordan_partition(&combo)?;
        let violating_size = combo_partition
            .g_set()
            .sizes()
            .iter()
            .copied()
            .find(|&s| !q.contains(s))
            .ok_or_else(|| Error::InternalInconsistency("reported combination lies in M(Q)".into()))?;
        Ok(Violation {
            x,
            y,
            a,
            b,
            combo_partition,
            violating_size,
        })
    }

    /// Recomputes the violation with the generic matrix code.
    pub fn verify(&self, q: &QSet) -> Result<()> {
        let fail = |msg: &str| Err(Error::InternalInconsistency(msg.into()));
        if !member_mq(&self.x, q) || !member_mq(&self.y, q) {
            return fail("violation pair is not in M(Q)");
        }
        if !self.x.commutes_with(&self.y) {
            return fail("violation pair does not commute");
        }
        let combo = self.x.combination(&self.a, &self.y, &self.b)?;
        if jordan_partition(&combo)? != self.combo_partition || q.allows(self.violating_size) {
            return fail("violation combination does not leave M(Q)");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Violation(Violation),
}

/// Work done, counted up to the reported violation if there is one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Jordan types (exhaustive) or generated pairs (sampled) visited.
    pub partitions: u64,
    /// Candidate `Y` matrices enumerated or drawn.
    pub matrices: u64,
    /// Commuting pairs with both members in `M(Q)`.
    pub pairs: u64,
    /// Linear combinations checked.
    pub combinations: u64,
}

impl Counts {
    pub(crate) fn absorb(&mut self, other: &Counts) {
        self.partitions += other.partitions;
        self.matrices += other.matrices;
        self.pairs += other.pairs;
        self.combinations += other.combinations;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub mode: Mode,
    pub field: FieldSpec,
    pub n: usize,
    pub q: QSet,
    pub outcome: Outcome,
    pub counts: Counts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.outcome {
            Outcome::Pass => None,
            Outcome::Violation(v) => Some(v),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ViolationRecord {
    a: String,
    b: String,
    x: MatrixFile,
    y: MatrixFile,
    combo_partition: Partition,
    violating_size: usize,
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let spec = self.x.spec();
        ViolationRecord {
            a: spec.format(&self.a),
            b: spec.format(&self.b),
            x: self.x.to_file(),
            y: self.y.to_file(),
            combo_partition: self.combo_partition.clone(),
            violating_size: self.violating_size,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Violation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ViolationRecord::deserialize(d)?;
        let x = ExactMatrix::try_from(&r.x).map_err(D::Error::custom)?;
        let y = ExactMatrix::try_from(&r.y).map_err(D::Error::custom)?;
        let spec = x.spec().clone();
        Ok(Violation {
            a: spec.parse(&r.a).map_err(D::Error::custom)?,
            b: spec.parse(&r.b).map_err(D::Error::custom)?,
            x,
            y,
            combo_partition: r.combo_partition,
            violating_size: r.violating_size,
        })
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        };
        writeln!(f, "mode:   {mode}")?;
        writeln!(f, "field:  {}", self.field)?;
        writeln!(f, "n = {}, Q = {}", self.n, self.q.braces())?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed:   {seed}")?;
        }
        let c = &self.counts;
        writeln!(
            f,
            "counts: {} partitions, {} matrices, {} pairs, {} combinations",
            c.partitions, c.matrices, c.pairs, c.combinations
        )?;
        match &self.outcome {
            Outcome::Pass => writeln!(f, "outcome: pass"),
            Outcome::Violation(v) => {
                let part = |m: &ExactMatrix| {
                    jordan_partition(m)
                        .map(|p| p.to_string())
                        .unwrap_or_else(|e| e.name().into())
                };
                let spec = v.x.spec();
                writeln!(f, "outcome: violation")?;
                writeln!(f, "  x partition:         {}", part(&v.x))?;
                writeln!(f, "  y partition:         {}", part(&v.y))?;
                writeln!(f, "  a = {}, b = {}", spec.format(&v.a), spec.format(&v.b))?;
                writeln!(f, "  a*x + b*y partition: {}", v.combo_partition)?;
                writeln!(f, "  violating size:      {}", v.violating_size)?;
                writeln!(f, "x =")?;
                write!(f, "{}", v.x)?;
                writeln!(f, "y =")?;
                write!(f, "{}", v.y)
            }
        }
    }
}
