//! Interval exchange transformations with exact rational lengths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::combinatorics::{CombinatorialDatum, IntMatrix, Kind, RauzyArrow, RauzyPath};
use crate::error::{Error, Result};
use crate::partition::{Atom, DynamicalPartition};

pub type Rational = BigRational;

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let p: BigInt = digits.parse().map_err(|_| err("bad decimal"))?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(p, q));
    }
    let p: BigInt = s.parse().map_err(|_| err("not a rational"))?;
    Ok(Rational::from_integer(p))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `T(π, λ)` acting on `[0, Σλ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactIet {
    datum: CombinatorialDatum,
    lengths: Vec<Rational>,
}

/// Outcome of iterating the induction: the path actually followed, the map
/// reached, and whether iteration stopped on a tie.
#[derive(Clone, Debug)]
pub struct InductionRun {
    pub path: RauzyPath,
    pub iet: ExactIet,
    pub tie: bool,
}

/// A witness `T^n(u^b_β) = u^t_α` with `π_b(β) ≥ 2`, `π_t(α) ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub beta: usize,
    pub alpha: usize,
    pub n: usize,
}

impl ExactIet {
    /// Lengths are indexed by letter (alphabet order).
    pub fn new(datum: CombinatorialDatum, lengths: Vec<Rational>) -> Result<Self> {
        if lengths.len() != datum.d() {
            return Err(Error::InvalidMap(format!(
                "expected {} lengths, got {}",
                datum.d(),
                lengths.len()
            )));
        }
        if let Some(l) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::InvalidMap(format!(
                "length of `{}` is not positive",
                datum.letter(l)
            )));
        }
        Ok(Self { datum, lengths })
    }

    /// Lengths given as `"p/q"` strings in letter order.
    pub fn from_strs(datum: CombinatorialDatum, lengths: &[&str]) -> Result<Self> {
        let lengths = lengths
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(datum, lengths)
    }

    pub fn datum(&self) -> &CombinatorialDatum {
        &self.datum
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn total(&self) -> Rational {
        self.lengths.iter().sum()
    }

    /// Rescaled so that the lengths sum to one.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        Self {
            datum: self.datum.clone(),
            lengths: self.lengths.iter().map(|l| l / &total).collect(),
        }
    }

    /// Critical points `u^t` and critical values `u^b`, indexed by letter.
    pub fn breakpoints(&self) -> (Vec<Rational>, Vec<Rational>) {
        (self.prefix_sums(self.datum.top()), self.prefix_sums(self.datum.bottom()))
    }

    fn prefix_sums(&self, row: &[usize]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.datum.d()];
        let mut acc = Rational::zero();
        for &l in row {
            out[l] = acc.clone();
            acc += &self.lengths[l];
        }
        out
    }

    /// Top intervals `I^t_α = [lo, hi)` by letter.
    pub fn top_intervals(&self) -> Vec<(Rational, Rational)> {
        let (ut, _) = self.breakpoints();
        ut.into_iter()
            .zip(&self.lengths)
            .map(|(lo, l)| {
                let hi = &lo + l;
                (lo, hi)
            })
            .collect()
    }

    fn locate(&self, x: &Rational, row: &[usize]) -> Result<usize> {
        if x.is_negative() {
            return Err(Error::OutOfDomain(rational_to_f64(x)));
        }
        let mut acc = Rational::zero();
        for &l in row {
            acc += &self.lengths[l];
            if x < &acc {
                return Ok(l);
            }
        }
        Err(Error::OutOfDomain(rational_to_f64(x)))
    }

    /// The letter whose top interval contains `x`.
    pub fn top_letter_at(&self, x: &Rational) -> Result<usize> {
        self.locate(x, self.datum.top())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let a = self.top_letter_at(x)?;
        let (ut, ub) = self.breakpoints();
        Ok(x + &ub[a] - &ut[a])
    }

    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational> {
        let a = self.locate(y, self.datum.bottom())?;
        let (ut, ub) = self.breakpoints();
        Ok(y + &ut[a] - &ub[a])
    }

    /// One step of Rauzy–Veech induction.
    pub fn rauzy_step(&self) -> Result<(ExactIet, RauzyArrow)> {
        let (alpha_t, alpha_b) = self.datum.last_letters();
        let kind = match self.lengths[alpha_t].cmp(&self.lengths[alpha_b]) {
            std::cmp::Ordering::Greater => Kind::Top,
            std::cmp::Ordering::Less => Kind::Bottom,
            std::cmp::Ordering::Equal => return Err(Error::Tie { step: 0 }),
        };
        let arrow = self.datum.rauzy_step(kind);
        let mut lengths = self.lengths.clone();
        lengths[arrow.winner] = &lengths[arrow.winner] - &lengths[arrow.loser];
        let next = ExactIet {
            datum: arrow.target.clone(),
            lengths,
        };
        Ok((next, arrow))
    }

    /// Up to `r` induction steps, stopping early on a tie.
    pub fn rauzy_path(&self, r: usize) -> InductionRun {
        let mut path = RauzyPath::empty(self.datum.clone());
        let mut iet = self.clone();
        for _ in 0..r {
            match iet.rauzy_step() {
                Ok((next, arrow)) => {
                    path.push(arrow).expect("arrow starts at current datum");
                    iet = next;
                }
                Err(_) => {
                    return InductionRun {
                        path,
                        iet,
                        tie: true,
                    }
                }
            }
        }
        InductionRun {
            path,
            iet,
            tie: false,
        }
    }

    /// The exact partition `P(T, r)`; fails if induction ties before `r`.
    pub fn dynamical_partition(&self, r: usize) -> Result<DynamicalPartition<Rational>> {
        let run = self.rauzy_path(r);
        if run.path.len() < r {
            return Err(Error::InductionFailed {
                completed: run.path.len(),
                requested: r,
            });
        }
        let (q, _) = run.path.return_times();
        let mut atoms = Vec::new();
        for (letter, (lo, hi)) in run.iet.top_intervals().into_iter().enumerate() {
            let steps = q[letter].to_usize().expect("return time fits in usize");
            let (mut lo, mut hi) = (lo, hi);
            for index in 0..steps {
                atoms.push(Atom {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    letter,
                    index,
                });
                let shift = self.eval(&lo)? - &lo;
                lo += &shift;
                hi += &shift;
            }
        }
        Ok(DynamicalPartition::new(atoms))
    }

    /// First connection in `(β, α, n)` lexicographic order with `n ≤ n_max`.
    pub fn find_connection(&self, n_max: usize) -> Option<Connection> {
        let (ut, ub) = self.breakpoints();
        let d = self.datum.d();
        let mut best: Option<Connection> = None;
        for beta in (0..d).filter(|&b| self.datum.bottom_pos(b) >= 1) {
            let mut x = ub[beta].clone();
            let mut first_hit: Vec<Option<usize>> = vec![None; d];
            for n in 0..=n_max {
                for alpha in (0..d).filter(|&a| self.datum.top_pos(a) >= 1) {
                    if first_hit[alpha].is_none() && x == ut[alpha] {
                        first_hit[alpha] = Some(n);
                    }
                }
                if n < n_max {
                    x = self.eval(&x).expect("orbit stays in the interval");
                }
            }
            if let Some((alpha, n)) = first_hit
                .iter()
                .enumerate()
                .find_map(|(a, h)| h.map(|n| (a, n)))
            {
                best = Some(Connection { beta, alpha, n });
                break;
            }
        }
        best
    }

    pub fn to_f64_lengths(&self) -> Vec<f64> {
        self.lengths.iter().map(rational_to_f64).collect()
    }
}

/// `ᵗB_γ^{-1} λ`, computed from the exact inverse of `ᵗB_γ`.
pub fn pull_back_lengths(lengths: &[Rational], path: &RauzyPath) -> Vec<Rational> {
    let inv: IntMatrix = path
        .matrix()
        .transpose_inverse()
        .expect("Rauzy matrices are unimodular");
    inv.mul_vec(lengths)
}

/// Whether `λ` lies in the open cone `ᵗB_γ(R_+^A)`.
pub fn in_cone(lengths: &[Rational], path: &RauzyPath) -> bool {
    pull_back_lengths(lengths, path)
        .iter()
        .all(|x| x.is_positive())
}

/// Convenience for tests and examples: `p/q` as a rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
