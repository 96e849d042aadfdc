//! Dynamical partitions `P(f, r)`: atoms `f^i(I^t_α(f^(r)))` labeled `(α, i)`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One atom `[lo, hi)` with its dynamical label `(letter, index)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub lo: T,
    pub hi: T,
    pub letter: usize,
    pub index: usize,
}

/// Atoms sorted left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicalPartition<T = f64> {
    atoms: Vec<Atom<T>>,
}

impl<T: PartialOrd> DynamicalPartition<T> {
    pub fn new(mut atoms: Vec<Atom<T>>) -> Self {
        atoms.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("comparable endpoints"));
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Labels in left-to-right order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.atoms.iter().map(|a| (a.letter, a.index)).collect()
    }

    /// Combinatorial equivalence: identical label sequences.
    pub fn equivalent<U: PartialOrd>(&self, other: &DynamicalPartition<U>) -> bool {
        self.labels() == other.labels()
    }

    /// The atom labeled `(letter, index)`.
    pub fn atom(&self, letter: usize, index: usize) -> Option<&Atom<T>> {
        self.atoms
            .iter()
            .find(|a| a.letter == letter && a.index == index)
    }
}

impl DynamicalPartition<f64> {
    /// Sum of atom lengths.
    pub fn total_length(&self) -> f64 {
        self.atoms.iter().map(|a| a.hi - a.lo).sum()
    }

    /// Largest gap or overlap between consecutive atoms, and the distance of
    /// the extreme endpoints from `0` and `end`.
    pub fn tiling_defect(&self, end: f64) -> f64 {
        let mut defect = 0.0f64;
        let mut cursor = 0.0;
        for a in &self.atoms {
            defect = defect.max((a.lo - cursor).abs());
            cursor = a.hi;
        }
        defect.max((cursor - end).abs())
    }

    pub fn max_atom_length(&self) -> f64 {
        self.atoms.iter().map(|a| a.hi - a.lo).fold(0.0, f64::max)
    }

    /// `counts[α][β]` = number of atoms `(α, i)` contained in `intervals[β]`
    /// (up to `tol` at the endpoints).
    pub fn containment_counts(&self, intervals: &[(f64, f64)], tol: f64) -> Vec<Vec<usize>> {
        let d = intervals.len();
        let mut counts = vec![vec![0; d]; d];
        for a in &self.atoms {
            for (b, &(lo, hi)) in intervals.iter().enumerate() {
                if a.lo >= lo - tol && a.hi <= hi + tol {
                    counts[a.letter][b] += 1;
                }
            }
        }
        counts
    }
}

/// Label formatter, e.g. `A3`.
pub struct LabelDisplay<'a> {
    pub alphabet: &'a [String],
    pub letter: usize,
    pub index: i64,
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alphabet[self.letter], self.index)
    }
}
