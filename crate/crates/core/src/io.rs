//! JSON documents for data, IETs, GIETs and partitions.
//!
//! Every document is an object with a `"type"` field:
//!
//! ```json
//! {"type": "datum", "top": ["A", "B"], "bottom": ["B", "A"]}
//! {"type": "iet", "top": ["A", "B"], "bottom": ["B", "A"], "lengths": {"A": "1/3", "B": "2/3"}}
//! {"type": "giet", "top": ["A", "B"], "bottom": ["B", "A"],
//!  "branches": {"A": {"domain": [0, 0.4], "range": [0.5, 1], "k": 2.0},
//!               "B": {"domain": [0.4, 1], "range": [0, 0.5]}}}
//! ```
//!
//! A GIET branch without `map` is affine, or smooth when `k` is given.
//! Partition documents list atoms left to right with their labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::branch::{BranchMap, Interval, MonotoneBranch};
use crate::combinatorics::CombinatorialDatum;
use crate::error::{Error, Result};
use crate::exact_iet::{parse_rational, rational_to_f64, ExactIet, Rational};
use crate::giet::Giet;
use crate::partition::DynamicalPartition;
use crate::thurston::RefConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Document {
    Datum {
        top: Vec<String>,
        bottom: Vec<String>,
    },
    Iet {
        top: Vec<String>,
        bottom: Vec<String>,
        /// `"p/q"` strings keyed by letter.
        lengths: BTreeMap<String, String>,
    },
    Giet {
        top: Vec<String>,
        bottom: Vec<String>,
        branches: BTreeMap<String, BranchRecord>,
    },
    Partition {
        top: Vec<String>,
        bottom: Vec<String>,
        atoms: Vec<AtomRecord>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub domain: [f64; 2],
    pub range: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BranchMap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub letter: String,
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    /// Exact endpoints, present for partitions of exact IETs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 2]>,
    /// Tower label of the left endpoint when the partition is that of a
    /// reference map `T_γ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<(String, i64)>,
}

fn rows(datum: &CombinatorialDatum) -> (Vec<String>, Vec<String>) {
    let names = |row: &[usize]| row.iter().map(|&l| datum.letter(l).to_string()).collect();
    (names(datum.top()), names(datum.bottom()))
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            input: "document".into(),
            reason: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn from_datum(datum: &CombinatorialDatum) -> Self {
        let (top, bottom) = rows(datum);
        Document::Datum { top, bottom }
    }

    pub fn from_iet(iet: &ExactIet) -> Self {
        let (top, bottom) = rows(iet.datum());
        let lengths = iet
            .lengths()
            .iter()
            .enumerate()
            .map(|(a, l)| (iet.datum().letter(a).to_string(), l.to_string()))
            .collect();
        Document::Iet { top, bottom, lengths }
    }

    pub fn from_giet(f: &Giet) -> Self {
        let (top, bottom) = rows(f.datum());
        let branches = f
            .branches()
            .iter()
            .enumerate()
            .map(|(a, b)| {
                let record = BranchRecord {
                    domain: [b.domain.lo, b.domain.hi],
                    range: [b.range.lo, b.range.hi],
                    map: Some((*b.map).clone()),
                    k: None,
                };
                (f.datum().letter(a).to_string(), record)
            })
            .collect();
        Document::Giet { top, bottom, branches }
    }

    pub fn from_partition(datum: &CombinatorialDatum, p: &DynamicalPartition<f64>) -> Self {
        let (top, bottom) = rows(datum);
        let atoms = p
            .atoms()
            .iter()
            .map(|a| AtomRecord {
                letter: datum.letter(a.letter).to_string(),
                index: a.index,
                lo: a.lo,
                hi: a.hi,
                exact: None,
                tower: None,
            })
            .collect();
        Document::Partition { top, bottom, atoms }
    }

    pub fn from_exact_partition(datum: &CombinatorialDatum, p: &DynamicalPartition<Rational>) -> Self {
        let (top, bottom) = rows(datum);
        let atoms = p
            .atoms()
            .iter()
            .map(|a| AtomRecord {
                letter: datum.letter(a.letter).to_string(),
                index: a.index,
                lo: rational_to_f64(&a.lo),
                hi: rational_to_f64(&a.hi),
                exact: Some([a.lo.to_string(), a.hi.to_string()]),
                tower: None,
            })
            .collect();
        Document::Partition { top, bottom, atoms }
    }

    /// Attaches tower labels to the atoms of `P(T_γ, r)`. Fails unless
    /// every left endpoint is a reference point of `reference`.
    pub fn with_tower_labels(mut self, reference: &RefConfig) -> Result<Self> {
        let Document::Partition { atoms, .. } = &mut self else {
            return Err(self.wrong_kind("partition"));
        };
        let alphabet = reference.base_iet().datum().alphabet();
        for atom in atoms.iter_mut() {
            let lo = match &atom.exact {
                Some([lo, _]) => parse_rational(lo)?,
                None => {
                    return Err(Error::Parse {
                        input: "partition".into(),
                        reason: "tower labels need exact endpoints".into(),
                    })
                }
            };
            let label = reference.tower_label_at(&lo).ok_or_else(|| Error::Parse {
                input: lo.to_string(),
                reason: "not a reference point".into(),
            })?;
            atom.tower = Some((alphabet[label.letter].clone(), label.index));
        }
        Ok(self)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Datum { .. } => "datum",
            Document::Iet { .. } => "iet",
            Document::Giet { .. } => "giet",
            Document::Partition { .. } => "partition",
        }
    }

    pub fn datum(&self) -> Result<CombinatorialDatum> {
        let (top, bottom) = match self {
            Document::Datum { top, bottom }
            | Document::Iet { top, bottom, .. }
            | Document::Giet { top, bottom, .. }
            | Document::Partition { top, bottom, .. } => (top, bottom),
        };
        CombinatorialDatum::from_rows(top, bottom)
    }

    /// The exact IET of an `iet` document.
    pub fn to_iet(&self) -> Result<ExactIet> {
        let Document::Iet { lengths, .. } = self else {
            return Err(self.wrong_kind("iet"));
        };
        let datum = self.datum()?;
        let values = datum
            .alphabet()
            .iter()
            .map(|name| {
                let s = lengths.get(name).ok_or_else(|| Error::Parse {
                    input: name.clone(),
                    reason: "missing length".into(),
                })?;
                parse_rational(s)
            })
            .collect::<Result<Vec<_>>>()?;
        if lengths.len() != datum.d() {
            return Err(Error::Parse {
                input: "lengths".into(),
                reason: "unexpected letter".into(),
            });
        }
        ExactIet::new(datum, values)
    }

    /// A GIET from a `giet` document, or the float image of an `iet`.
    pub fn to_giet(&self) -> Result<Giet> {
        match self {
            Document::Iet { .. } => Ok(Giet::from_iet(&self.to_iet()?)),
            Document::Giet { branches, .. } => {
                let datum = self.datum()?;
                if branches.len() != datum.d() {
                    return Err(Error::Parse {
                        input: "branches".into(),
                        reason: "expected one branch per letter".into(),
                    });
                }
                let list = datum
                    .alphabet()
                    .iter()
                    .map(|name| {
                        let rec = branches.get(name).ok_or_else(|| Error::Parse {
                            input: name.clone(),
                            reason: "missing branch".into(),
                        })?;
                        Ok(rec.to_branch())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Giet::new(datum, list)
            }
            _ => Err(self.wrong_kind("giet or iet")),
        }
    }

    fn wrong_kind(&self, expected: &str) -> Error {
        Error::Parse {
            input: self.kind().into(),
            reason: format!("expected a {expected} document"),
        }
    }
}

impl BranchRecord {
    pub fn to_branch(&self) -> MonotoneBranch {
        let domain = Interval::new(self.domain[0], self.domain[1]);
        let range = Interval::new(self.range[0], self.range[1]);
        match (&self.map, self.k) {
            (Some(map), _) => MonotoneBranch::new(domain, range, map.clone()),
            (None, Some(k)) => MonotoneBranch::smooth(domain, range, k),
            (None, None) => MonotoneBranch::affine(domain, range),
        }
    }
}
