use std::fmt;

use serde::{Deserialize, Serialize};

use super::exhaustive_check;
use crate::criterion::{check_criterion, QSet, M0};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::witness::{falsify, Construction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DegreeOutcome {
    Pass,
    Violation {
        violating_size: usize,
    },
    /// Over budget; not run.
    Skipped {
        required: u128,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub construction: Construction,
    pub field: FieldSpec,
    pub violating_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossEntry {
    pub q: QSet,
    pub accepted: bool,
    pub m0: Option<M0>,
    /// One outcome per extension degree, in the order requested.
    pub exhaustive: Vec<(u32, DegreeOutcome)>,
    pub witness: Option<WitnessSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub n: usize,
    pub char: u64,
    pub degrees: Vec<u32>,
    pub entries: Vec<CrossEntry>,
}

impl CrossReport {
    pub fn accepted(&self) -> impl Iterator<Item = &CrossEntry> {
        self.entries.iter().filter(|e| e.accepted)
    }

    pub fn rejected(&self) -> impl Iterator<Item = &CrossEntry> {
        self.entries.iter().filter(|e| !e.accepted)
    }
}

/// Ties the criterion to the oracle and the witnesses over `GF(char^d)`.
///
/// An accepted `Q` must pass every feasible exhaustive run; a rejected `Q`
/// must be falsified by a verified witness. A rejected `Q` that passes over
/// a small field is recorded but is not an error, since counterexamples
/// may need a larger field.
pub fn cross_validate(
    n: usize,
    char: u64,
    degrees: &[u32],
    qsets: Option<&[QSet]>,
    budget: u128,
) -> Result<CrossReport> {
    if char == 0 {
        return Err(Error::NonPrimeChar(0));
    }
    let fields = degrees
        .iter()
        .map(|&d| FieldSpec::galois(char, d, None).map(|f| (d, f)))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<QSet>;
    let qsets = match qsets {
        Some(list) => list,
        None => {
            all = QSet::all_subsets(n).collect();
            &all
        }
    };
    let mut entries = Vec::with_capacity(qsets.len());
    for q in qsets {
        let verdict = check_criterion(n, char, q)?;
        let mut exhaustive = Vec::with_capacity(fields.len());
        for (d, spec) in &fields {
            let outcome = match exhaustive_check(n, spec, q, budget) {
                Ok(r) => match r.violation() {
                    None => DegreeOutcome::Pass,
                    Some(v) => DegreeOutcome::Violation {
                        violating_size: v.violating_size,
                    },
                },
                Err(Error::BudgetExceeded { required, .. }) => DegreeOutcome::Skipped { required },
                Err(e) => return Err(e),
            };
            if verdict.accepted() {
                if let DegreeOutcome::Violation { violating_size } = outcome {
                    return Err(Error::Inconsistency(format!(
                        "Q = {} is accepted for char {char} but GF({char}^{d}) has a combination with a {violating_size}-cell",
                        q.braces()
                    )));
                }
            }
            exhaustive.push((*d, outcome));
        }
        let witness = if verdict.accepted() {
            None
        } else {
            let w = falsify(n, char, q)?.ok_or_else(|| {
                Error::Inconsistency(format!("Q = {} is rejected but no witness was built", q.braces()))
            })?;
            w.verify(q)
                .map_err(|e| Error::Inconsistency(format!("witness for Q = {} fails: {e}", q.braces())))?;
            Some(WitnessSummary {
                construction: w.construction,
                field: w.field.clone(),
                violating_size: w.violating_size,
            })
        };
        entries.push(CrossEntry {
            q: q.clone(),
            accepted: verdict.accepted(),
            m0: verdict.m0,
            exhaustive,
            witness,
        });
    }
    Ok(CrossReport {
        n,
        char,
        degrees: degrees.to_vec(),
        entries,
    })
}

impl fmt::Display for DegreeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeOutcome::Pass => f.write_str("pass"),
            DegreeOutcome::Violation { violating_size } => write!(f, "violation({violating_size})"),
            DegreeOutcome::Skipped { .. } => f.write_str("skipped"),
        }
    }
}

impl fmt::Display for CrossReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degrees: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        writeln!(f, "n = {}, char = {}, degrees {}", self.n, self.char, degrees.join(","))?;
        let qw = self
            .entries
            .iter()
            .map(|e| e.q.braces().len())
            .max()
            .unwrap_or(2)
            .max(2);
        write!(f, "{:<qw$}  {:<7}", "Q", "verdict")?;
        for d in &self.degrees {
            write!(f, "  {:<14}", format!("GF({}^{d})", self.char))?;
        }
        writeln!(f, "  witness")?;
        for e in &self.entries {
            let verdict = if e.accepted { "accept" } else { "reject" };
            write!(f, "{:<qw$}  {:<7}", e.q.braces(), verdict)?;
            for (_, o) in &e.exhaustive {
                write!(f, "  {:<14}", o.to_string())?;
            }
            match &e.witness {
                Some(w) => writeln!(f, "  {} over {}, size {}", w.construction, w.field, w.violating_size)?,
                None => writeln!(f, "  -")?,
            }
        }
        let acc = self.accepted().count();
        let acc_pass = self
            .accepted()
            .filter(|e| e.exhaustive.iter().all(|(_, o)| *o == DegreeOutcome::Pass))
            .count();
        let rej = self.rejected().count();
        let rej_wit = self.rejected().filter(|e| e.witness.is_some()).count();
        writeln!(
            f,
            "accepted {acc} ({acc_pass} pass every feasible field), rejected {rej} ({rej_wit} witnessed)"
        )
    }
}
