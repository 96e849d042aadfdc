//! Generalized interval exchange transformations with floating-point
//! branches, their Rauzy induction and dynamical partitions.

use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::branch::{BranchMap, Interval, MonotoneBranch, EPS_BRANCH};
use crate::combinatorics::{CombinatorialDatum, Kind, RauzyArrow, RauzyPath};
use crate::error::{Error, Result};
use crate::exact_iet::{rational_to_f64, ExactIet};
use crate::partition::{Atom, DynamicalPartition};

/// Tolerance below which the two last breakpoints count as a tie.
pub const EPS_TIE: f64 = 1e-10;

/// A GIET on `[0, length)`: one increasing branch per letter, mapping the
/// top interval `I^t_α` onto the bottom interval `I^b_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Giet {
    datum: CombinatorialDatum,
    length: f64,
    branches: Vec<MonotoneBranch>,
}

/// Result of iterating the induction on a GIET.
#[derive(Clone, Debug)]
pub struct GietInduction {
    pub path: RauzyPath,
    pub giet: Giet,
    pub tie: bool,
}

impl Giet {
    /// Builds a GIET from branches indexed by letter, checking that the
    /// domains tile in top order, the ranges tile in bottom order, and each
    /// branch is an increasing bijection at sampled points.
    pub fn new(datum: CombinatorialDatum, branches: Vec<MonotoneBranch>) -> Result<Self> {
        if branches.len() != datum.d() {
            return Err(Error::InvalidMap(format!(
                "expected {} branches, got {}",
                datum.d(),
                branches.len()
            )));
        }
        let length = branches[datum.top()[datum.d() - 1]].domain.hi;
        let tol = 1e-12 * length.max(1.0);
        let tiles = |row: &[usize], pick: &dyn Fn(&MonotoneBranch) -> Interval| {
            let mut cursor = 0.0;
            for &a in row {
                let iv = pick(&branches[a]);
                if (iv.lo - cursor).abs() > tol || iv.is_empty() {
                    return false;
                }
                cursor = iv.hi;
            }
            (cursor - length).abs() <= tol
        };
        if !tiles(datum.top(), &|b| b.domain) {
            return Err(Error::InvalidMap("domains do not tile the interval in top order".into()));
        }
        if !tiles(datum.bottom(), &|b| b.range) {
            return Err(Error::InvalidMap("ranges do not tile the interval in bottom order".into()));
        }
        for (a, b) in branches.iter().enumerate() {
            b.check(64, EPS_BRANCH).map_err(|e| match e {
                Error::InvalidBranch(msg) => {
                    Error::InvalidBranch(format!("{}: {msg}", datum.letter(a)))
                }
                e => e,
            })?;
        }
        Ok(Self {
            datum,
            length,
            branches,
        })
    }

    /// Builds the intervals from top and bottom lengths (by letter) and asks
    /// `make` for each branch given its domain and range.
    pub fn from_lengths(
        datum: CombinatorialDatum,
        top_lengths: &[f64],
        bottom_lengths: &[f64],
        mut make: impl FnMut(usize, Interval, Interval) -> MonotoneBranch,
    ) -> Result<Self> {
        let d = datum.d();
        if top_lengths.len() != d || bottom_lengths.len() != d {
            return Err(Error::InvalidMap("one length per letter is required".into()));
        }
        let domains = intervals_from_lengths(datum.top(), top_lengths);
        let ranges = intervals_from_lengths(datum.bottom(), bottom_lengths);
        let branches = (0..d).map(|a| make(a, domains[a], ranges[a])).collect();
        Self::new(datum, branches)
    }

    /// The IET `T` as a GIET with translation branches.
    pub fn from_iet(iet: &ExactIet) -> Self {
        let lengths: Vec<f64> = iet.lengths().iter().map(rational_to_f64).collect();
        let (ut, ub) = iet.breakpoints();
        let domains = intervals_from_lengths(iet.datum().top(), &lengths);
        let ranges = intervals_from_lengths(iet.datum().bottom(), &lengths);
        let branches = (0..lengths.len())
            .map(|a| MonotoneBranch {
                domain: domains[a],
                range: ranges[a],
                map: Arc::new(BranchMap::Translation {
                    shift: rational_to_f64(&(&ub[a] - &ut[a])),
                }),
            })
            .collect();
        Self {
            datum: iet.datum().clone(),
            length: rational_to_f64(&iet.total()),
            branches,
        }
    }

    pub(crate) fn from_parts(
        datum: CombinatorialDatum,
        length: f64,
        branches: Vec<MonotoneBranch>,
    ) -> Self {
        Self {
            datum,
            length,
            branches,
        }
    }

    pub fn datum(&self) -> &CombinatorialDatum {
        &self.datum
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn branches(&self) -> &[MonotoneBranch] {
        &self.branches
    }

    pub fn branch(&self, letter: usize) -> &MonotoneBranch {
        &self.branches[letter]
    }

    /// `u^t_α` by letter.
    pub fn top_breaks(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.domain.lo).collect()
    }

    /// `u^b_α` by letter.
    pub fn bottom_breaks(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.range.lo).collect()
    }

    pub fn top_intervals(&self) -> Vec<Interval> {
        self.branches.iter().map(|b| b.domain).collect()
    }

    pub fn bottom_intervals(&self) -> Vec<Interval> {
        self.branches.iter().map(|b| b.range).collect()
    }

    /// Whether every branch is a translation.
    pub fn is_iet(&self) -> bool {
        self.branches.iter().all(|b| b.map.is_translation())
    }

    fn locate(&self, x: f64, row: &[usize], pick: impl Fn(&MonotoneBranch) -> Interval) -> Result<usize> {
        if !(x >= 0.0 && x < self.length) {
            return Err(Error::OutOfDomain(x));
        }
        let mut found = row[0];
        for &a in row {
            if pick(&self.branches[a]).lo <= x {
                found = a;
            } else {
                break;
            }
        }
        Ok(found)
    }

    /// The letter whose top interval contains `x`.
    pub fn top_letter_at(&self, x: f64) -> Result<usize> {
        self.locate(x, self.datum.top(), |b| b.domain)
    }

    /// The letter whose bottom interval contains `y`.
    pub fn bottom_letter_at(&self, y: f64) -> Result<usize> {
        self.locate(y, self.datum.bottom(), |b| b.range)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let a = self.top_letter_at(x)?;
        Ok(self.branches[a].eval(x))
    }

    pub fn eval_inverse(&self, y: f64) -> Result<f64> {
        let a = self.bottom_letter_at(y)?;
        Ok(self.branches[a].eval_inverse(y))
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: f64, n: usize) -> Result<f64> {
        (0..n).try_fold(x, |acc, _| self.eval(acc))
    }

    /// One step of Rauzy induction: the first return map to `[0, L')` where
    /// `L'` is the larger of the two last breakpoints.
    pub fn rauzy_step(&self) -> Result<(Giet, RauzyArrow)> {
        let (alpha_t, alpha_b) = self.datum.last_letters();
        let ut = self.branches[alpha_t].domain.lo;
        let ub = self.branches[alpha_b].range.lo;
        if (ut - ub).abs() <= EPS_TIE {
            return Err(Error::Tie { step: 0 });
        }
        let kind = if ut < ub { Kind::Top } else { Kind::Bottom };
        let arrow = self.datum.rauzy_step(kind);
        let mut branches = self.branches.clone();
        let length = match kind {
            Kind::Top => {
                // I^b_{α_b} ⊂ I^t_{α_t}: points of I^t_{α_b} need one more step.
                let wt = &self.branches[alpha_t];
                let lb = &self.branches[alpha_b];
                let cut = wt.eval(ub);
                branches[alpha_b] = MonotoneBranch {
                    domain: lb.domain,
                    range: Interval::new(cut, wt.range.hi),
                    map: Arc::new(BranchMap::then(&lb.map, &wt.map)),
                };
                branches[alpha_t] = MonotoneBranch {
                    domain: Interval::new(wt.domain.lo, ub),
                    range: Interval::new(wt.range.lo, cut),
                    map: Arc::clone(&wt.map),
                };
                ub
            }
            Kind::Bottom => {
                // I^t_{α_t} ⊂ I^b_{α_b}: the part of I^t_{α_b} landing in it
                // becomes the new top interval of α_t.
                let wb = &self.branches[alpha_b];
                let lt = &self.branches[alpha_t];
                let cut = wb.eval_inverse(ut);
                branches[alpha_t] = MonotoneBranch {
                    domain: Interval::new(cut, wb.domain.hi),
                    range: lt.range,
                    map: Arc::new(BranchMap::then(&wb.map, &lt.map)),
                };
                branches[alpha_b] = MonotoneBranch {
                    domain: Interval::new(wb.domain.lo, cut),
                    range: Interval::new(wb.range.lo, ut),
                    map: Arc::clone(&wb.map),
                };
                ut
            }
        };
        let next = Giet {
            datum: arrow.target.clone(),
            length,
            branches,
        };
        Ok((next, arrow))
    }

    /// Up to `r` induction steps, stopping early on a tie.
    pub fn rauzy_path(&self, r: usize) -> GietInduction {
        let mut path = RauzyPath::empty(self.datum.clone());
        let mut giet = self.clone();
        for step in 0..r {
            match giet.rauzy_step() {
                Ok((next, arrow)) => {
                    path.push(arrow).expect("arrow starts at current datum");
                    giet = next;
                }
                Err(_) => {
                    debug_assert_eq!(path.len(), step);
                    return GietInduction {
                        path,
                        giet,
                        tie: true,
                    };
                }
            }
        }
        GietInduction {
            path,
            giet,
            tie: false,
        }
    }

    /// `P(f, r)`: the atoms `f^i(I^t_α(f^(r)))`, `0 ≤ i < q^(r)_α`.
    pub fn dynamical_partition(&self, r: usize) -> Result<DynamicalPartition> {
        let run = self.rauzy_path(r);
        if run.path.len() < r {
            return Err(Error::InductionFailed {
                completed: run.path.len(),
                requested: r,
            });
        }
        let (q, _) = run.path.return_times();
        let mut atoms = Vec::new();
        for (letter, branch) in run.giet.branches.iter().enumerate() {
            let steps = q[letter].to_usize().expect("return time fits in usize");
            let (mut lo, mut hi) = (branch.domain.lo, branch.domain.hi);
            for index in 0..steps {
                atoms.push(Atom {
                    lo,
                    hi,
                    letter,
                    index,
                });
                if index + 1 < steps {
                    // The whole atom lies in one continuity interval; find it
                    // from the midpoint so the right endpoint is mapped by the
                    // same branch.
                    let b = &self.branches[self.top_letter_at(0.5 * (lo + hi))?];
                    lo = b.eval(lo);
                    hi = b.eval(hi);
                }
            }
        }
        Ok(DynamicalPartition::new(atoms))
    }

    /// Checks `[B_γ]_{α,β} = #{i : I(f,r,α,i) ⊂ I^t_β(f)}` for every entry.
    pub fn verify_matrix_counts(&self, r: usize) -> Result<bool> {
        let partition = self.dynamical_partition(r)?;
        let path = self.rauzy_path(r).path;
        let b = path.matrix();
        let intervals: Vec<(f64, f64)> = self.branches.iter().map(|b| (b.domain.lo, b.domain.hi)).collect();
        let counts = partition.containment_counts(&intervals, 1e-9 * self.length.max(1.0));
        let d = self.datum.d();
        Ok((0..d).all(|a| (0..d).all(|c| b.get(a, c).to_usize() == Some(counts[a][c]))))
    }

    /// The closed graph of each branch sampled at `n + 1` points.
    pub fn graph_samples(&self, n: usize) -> Vec<Vec<(f64, f64)>> {
        let n = n.max(1);
        self.branches
            .iter()
            .map(|b| {
                (0..=n)
                    .map(|j| {
                        let x = b.domain.lo + b.domain.len() * j as f64 / n as f64;
                        (x, b.eval(x))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Consecutive intervals of the given lengths, laid out in `row` order and
/// returned by letter.
pub fn intervals_from_lengths(row: &[usize], lengths: &[f64]) -> Vec<Interval> {
    let mut out = vec![Interval::new(0.0, 0.0); lengths.len()];
    let mut cursor = 0.0;
    for &a in row {
        out[a] = Interval::new(cursor, cursor + lengths[a]);
        cursor += lengths[a];
    }
    out
}

/// Combinatorial equivalence of two partitions.
pub fn partitions_equivalent<T: PartialOrd, U: PartialOrd>(
    p: &DynamicalPartition<T>,
    q: &DynamicalPartition<U>,
) -> bool {
    p.equivalent(q)
}

/// A sampled distance together with the sampling resolution bounding its
/// error.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceEstimate {
    pub value: f64,
    pub per_letter: Vec<f64>,
    pub resolution: f64,
}

/// Sum over letters of the Hausdorff distances between branch graphs,
/// approximated on `samples + 1` points per branch.
pub fn giet_distance(f: &Giet, g: &Giet, samples: usize) -> Result<DistanceEstimate> {
    if f.datum() != g.datum() {
        return Err(Error::DatumMismatch);
    }
    Ok(extended_distance(&f.graph_samples(samples), &g.graph_samples(samples)))
}

/// Distance between two families of sampled pieces, one per letter; a
/// collapsed letter is a single point.
pub fn extended_distance(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> DistanceEstimate {
    let per_letter: Vec<f64> = a.iter().zip(b).map(|(p, q)| hausdorff(p, q)).collect();
    let resolution = a
        .iter()
        .chain(b)
        .flat_map(|p| p.windows(2).map(|w| dist(w[0], w[1])))
        .fold(0.0, f64::max);
    DistanceEstimate {
        value: per_letter.iter().sum(),
        per_letter,
        resolution,
    }
}

/// Hausdorff distance between two polylines, measured from the vertices of
/// each to the segments of the other.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    directed(a, b).max(directed(b, a))
}

fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .map(|&p| {
            if b.len() == 1 {
                return dist(p, b[0]);
            }
            b.windows(2)
                .map(|w| point_segment(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

fn point_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    dist(p, (a.0 + t * dx, a.1 + t * dy))
}
