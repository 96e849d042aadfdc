//! Reference configurations of a Rauzy path ending at a cyclic datum, the
//! Thurston pullback map on configurations, and a fixed-point solver that
//! realizes the path inside a full family.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::combinatorics::{RauzyClass, RauzyPath};
use crate::error::{Error, Result};
use crate::exact_iet::{in_cone, rational_to_f64, ExactIet, Rational};
use crate::full_family::{apply, TauOrder};
use crate::giet::Giet;

/// A label class `[α, i]`: a letter and an integer index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelClass {
    pub letter: usize,
    pub index: i64,
}

/// The reference configuration of a path `γ: π → π*` with `π*` cyclic.
///
/// Points are stored by orbit index: `orbit[k] = T_γ^k(0)`. The class
/// `[α, i]` is the point with orbit index `k_α + i (mod N)`, where `k_α` is
/// the orbit index of the critical point `u^t_α(T_γ)`.
#[derive(Clone, Debug)]
pub struct RefConfig {
    path: RauzyPath,
    n: usize,
    q: Vec<usize>,
    h: Vec<usize>,
    base_iet: ExactIet,
    orbit: Vec<Rational>,
    crit: Vec<usize>,
    /// Orbit indices sorted left to right.
    order: Vec<usize>,
    /// Position of each orbit index in `order`.
    rank: Vec<usize>,
    /// Canonical label of each orbit index.
    canonical: Vec<LabelClass>,
    /// Letter of the top interval of `T_γ` containing each orbit point.
    orbit_letters: Vec<usize>,
}

impl RefConfig {
    /// Builds `T_γ = T(π, λ^(γ))` with `λ^(γ) = ᵗB_γ·1 / N` and its orbit.
    pub fn build(path: &RauzyPath) -> Result<Self> {
        let target = path.target();
        if !target.is_cyclic() {
            return Err(Error::TargetNotCyclic(target.to_string()));
        }
        if !path.source().is_admissible() {
            return Err(Error::NotAdmissible);
        }
        let matrix = path.matrix();
        let (q_big, n_big) = path.return_times();
        let n_rat = Rational::from_integer(n_big.clone());
        let lengths: Vec<Rational> = matrix
            .col_sums()
            .into_iter()
            .map(|c| Rational::from_integer(c) / &n_rat)
            .collect();
        let base_iet = ExactIet::new(path.source().clone(), lengths)?;
        let run = base_iet.rauzy_path(path.len());
        if run.path != *path || !in_cone(base_iet.lengths(), path) {
            return Err(Error::InductionMismatch);
        }
        let n = n_big.to_usize().ok_or(Error::InductionMismatch)?;
        let q: Vec<usize> = q_big
            .iter()
            .map(|x| x.to_usize().expect("return time fits in usize"))
            .collect();

        let mut orbit = Vec::with_capacity(n);
        let mut x = Rational::zero();
        for _ in 0..n {
            orbit.push(x.clone());
            x = base_iet.eval(&x)?;
        }
        if !x.is_zero() {
            return Err(Error::InductionMismatch);
        }
        let index_of = |p: &Rational| orbit.iter().position(|o| o == p);
        let (ut, _) = base_iet.breakpoints();
        let (ut_r, _) = run.iet.breakpoints();
        let d = ut.len();
        let mut crit = Vec::with_capacity(d);
        let mut h = Vec::with_capacity(d);
        for a in 0..d {
            let k = index_of(&ut[a]).ok_or(Error::InductionMismatch)?;
            let k_r = index_of(&ut_r[a]).ok_or(Error::InductionMismatch)?;
            let ha = (k + n - k_r) % n;
            if ha >= q[a] {
                return Err(Error::InductionMismatch);
            }
            crit.push(k);
            h.push(ha);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| orbit[i].cmp(&orbit[j]));
        let mut rank = vec![0; n];
        for (pos, &k) in order.iter().enumerate() {
            rank[k] = pos;
        }
        // Atom (α, i) of P(T_γ, r) starts at orbit index k_α − h_α + i.
        let mut canonical = vec![None; n];
        for a in 0..d {
            for i in 0..q[a] {
                let k = (crit[a] + n - h[a] + i) % n;
                canonical[k] = Some(LabelClass {
                    letter: a,
                    index: i as i64 - h[a] as i64,
                });
            }
        }
        let canonical = canonical
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::InductionMismatch)?;

        let orbit_letters = orbit
            .iter()
            .map(|x| base_iet.top_letter_at(x))
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            path: path.clone(),
            n,
            q,
            h,
            base_iet,
            orbit,
            crit,
            order,
            rank,
            canonical,
            orbit_letters,
        })
    }

    pub fn path(&self) -> &RauzyPath {
        &self.path
    }

    /// `N(γ)`, the number of labels.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn return_times(&self) -> &[usize] {
        &self.q
    }

    /// `h(α, r)` by letter.
    pub fn h(&self) -> &[usize] {
        &self.h
    }

    /// `T_γ`.
    pub fn base_iet(&self) -> &ExactIet {
        &self.base_iet
    }

    /// `λ^(γ)`.
    pub fn lengths(&self) -> &[Rational] {
        self.base_iet.lengths()
    }

    /// Reference points by orbit index.
    pub fn ref_points(&self) -> &[Rational] {
        &self.orbit
    }

    /// Orbit indices from left to right.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Orbit index of the critical point of each letter.
    pub fn critical_indices(&self) -> &[usize] {
        &self.crit
    }

    /// Orbit index of `[letter, index]`.
    pub fn orbit_index(&self, letter: usize, index: i64) -> usize {
        (self.crit[letter] as i64 + index).rem_euclid(self.n as i64) as usize
    }

    /// The canonical representative of `[letter, index]`, with
    /// `−h(α) ≤ i ≤ q_α − h(α) − 1`.
    pub fn canonical_label(&self, letter: usize, index: i64) -> LabelClass {
        self.canonical[self.orbit_index(letter, index)]
    }

    /// Canonical labels from left to right.
    pub fn labels(&self) -> Vec<LabelClass> {
        self.order.iter().map(|&k| self.canonical[k]).collect()
    }

    /// Tower representative of an orbit index: the letter whose critical
    /// point comes last before it along the orbit, with a non-negative
    /// index.
    pub fn tower_label(&self, k: usize) -> LabelClass {
        let letter = (0..self.crit.len())
            .filter(|&a| self.crit[a] <= k)
            .max_by_key(|&a| self.crit[a])
            .expect("the first letter's critical point has orbit index 0");
        LabelClass {
            letter,
            index: (k - self.crit[letter]) as i64,
        }
    }

    /// Tower labels from left to right (the labelling of the standard
    /// picture of `P(T_γ, r)`).
    pub fn tower_labels(&self) -> Vec<LabelClass> {
        self.order.iter().map(|&k| self.tower_label(k)).collect()
    }

    /// Tower label of the reference point at `x`, if `x` is one.
    pub fn tower_label_at(&self, x: &Rational) -> Option<LabelClass> {
        self.orbit.iter().position(|v| v == x).map(|k| self.tower_label(k))
    }

    /// The label whose reference point is rightmost.
    pub fn max_label(&self) -> LabelClass {
        self.canonical[*self.order.last().expect("N ≥ 1")]
    }

    /// The geometric successor `[α, i]*`: the next point to the right.
    pub fn successor(&self, label: LabelClass) -> Option<LabelClass> {
        let k = self.orbit_index(label.letter, label.index);
        self.order.get(self.rank[k] + 1).map(|&j| self.canonical[j])
    }

    /// Dynamical label `(α, i)` of `P(T_γ, r)` for a class.
    pub fn dynamical_label(&self, label: LabelClass) -> (usize, usize) {
        let c = self.canonical_label(label.letter, label.index);
        (c.letter, (c.index + self.h[c.letter] as i64) as usize)
    }

    /// `V^(γ)` as floats.
    pub fn reference_configuration(&self) -> Configuration {
        Configuration {
            points: self.orbit.iter().map(rational_to_f64).collect(),
        }
    }

    /// First position where `points` breaks the reference order, if any
    /// (including `v(0) = 0` and all points in `[0, 1)`).
    pub fn order_violation<T: PartialOrd + Zero>(&self, points: &[T], one: &T) -> Option<usize> {
        if !points[0].is_zero() {
            return Some(0);
        }
        for w in self.order.windows(2) {
            if !(points[w[0]] < points[w[1]]) {
                return Some(self.rank[w[1]]);
            }
        }
        let last = *self.order.last().expect("N ≥ 1");
        if !(points[last] < *one) {
            return Some(self.n - 1);
        }
        None
    }

    /// Orbit indices of the marked critical values `v([α, 1])`.
    fn value_indices(&self) -> Vec<usize> {
        self.crit.iter().map(|&k| (k + 1) % self.n).collect()
    }

    /// `τ(V)` read from the points `v([α, 1])`.
    pub fn tau_of(&self, v: &Configuration, order: TauOrder) -> Result<Vec<f64>> {
        if let Some(pos) = self.order_violation(&v.points, &1.0) {
            return Err(Error::OrderViolation(pos));
        }
        let marks: Vec<f64> = self.value_indices().iter().map(|&k| v.points[k]).collect();
        Ok(order.tau_from_marks(self.base_iet.datum(), &marks))
    }

    /// Exact `τ(V)` (bottom-row order) for rational configurations.
    pub fn tau_of_exact(&self, points: &[Rational]) -> Result<Vec<Rational>> {
        let one = Rational::from_integer(1.into());
        if let Some(pos) = self.order_violation(points, &one) {
            return Err(Error::OrderViolation(pos));
        }
        let datum = self.base_iet.datum();
        let row = datum.bottom();
        let vi = self.value_indices();
        let mut tau = vec![Rational::zero(); row.len()];
        for (j, &a) in row.iter().enumerate() {
            let next = row.get(j + 1).map_or(one.clone(), |&b| points[vi[b]].clone());
            tau[a] = next - &points[vi[a]];
        }
        Ok(tau)
    }

    fn check_boundary(&self, tau: &[f64], eps_deg: f64) -> Result<()> {
        match tau.iter().enumerate().find(|(_, t)| **t <= eps_deg) {
            Some((a, &value)) => Err(Error::NearBoundary {
                letter: self.base_iet.datum().letter(a).to_string(),
                value,
            }),
            None => Ok(()),
        }
    }

    /// One application of the Thurston map:
    /// `v'([α, i]) = f_τ^{-1}(v([α, i + 1]))` with `τ = τ(V)`.
    pub fn step(&self, family: &Giet, v: &Configuration, opts: &SolveOptions) -> Result<Configuration> {
        let tau = self.tau_of(v, opts.tau_order)?;
        self.check_boundary(&tau, opts.eps_deg)?;
        let f = apply(family, &tau)?;
        Ok(self.pull_back(&f, v, opts.tau_order))
    }

    fn pull_back(&self, f: &Giet, v: &Configuration, order: TauOrder) -> Configuration {
        let n = self.n;
        let mut value_letter = vec![None; n];
        if order == TauOrder::Bottom {
            // v([α,1]) is exactly the critical value u^b_α(f_τ), whose
            // preimage is the critical point u^t_α(f_τ).
            for (a, k) in self.value_indices().into_iter().enumerate() {
                value_letter[k] = Some(a);
            }
        }
        let points = (0..n)
            .map(|k| {
                let next = (k + 1) % n;
                match value_letter[next] {
                    Some(a) => f.branch(a).domain.lo,
                    None => f
                        .eval_inverse(v.points[next])
                        .expect("configuration points lie in [0, 1)"),
                }
            })
            .collect();
        Configuration { points }
    }

    /// The Thurston map of the IET family `τ ↦ T(π, τ)` in exact arithmetic.
    pub fn step_exact(&self, points: &[Rational]) -> Result<Vec<Rational>> {
        let tau = self.tau_of_exact(points)?;
        if let Some(a) = tau.iter().position(|t| !t.is_positive()) {
            return Err(Error::NearBoundary {
                letter: self.base_iet.datum().letter(a).to_string(),
                value: rational_to_f64(&tau[a]),
            });
        }
        let t = ExactIet::new(self.base_iet.datum().clone(), tau)?;
        (0..self.n)
            .map(|k| t.eval_inverse(&points[(k + 1) % self.n]))
            .collect()
    }
    /// Orbit of `0` under `f`, applying at each orbit index the branch that
    /// `T_γ` uses there (branches are evaluated past their domains if
    /// needed).
    fn shadow_orbit(&self, f: &Giet) -> Vec<f64> {
        let mut x = 0.0;
        let mut out = Vec::with_capacity(self.n);
        for &a in &self.orbit_letters {
            out.push(x);
            x = f.branch(a).eval(x);
        }
        out
    }

    /// Residuals of the fixed-point equations at `τ`: the shadow orbit must
    /// meet each critical point `u^t_α(f_τ)` at orbit index `k_α`.
    fn fixed_point_residual(&self, family: &Giet, tau: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        if tau.iter().any(|t| !(*t > 0.0)) {
            return None;
        }
        let f = apply(family, tau).ok()?;
        let orbit = self.shadow_orbit(&f);
        let res = (0..self.crit.len())
            .filter(|&a| self.crit[a] != 0)
            .map(|a| orbit[self.crit[a]] - f.branch(a).domain.lo)
            .collect();
        Some((res, orbit))
    }

    /// Refines an approximate fixed point by Newton's method on the `d − 1`
    /// free entries of `τ`, returning the parameter and the fixed
    /// configuration when the residual drops below `tol`.
    pub fn polish(&self, family: &Giet, tau0: &[f64], tol: f64) -> Option<(Vec<f64>, Configuration)> {
        let d = tau0.len();
        let complete = |free: &[f64]| {
            let mut t = free.to_vec();
            t.push(1.0 - free.iter().sum::<f64>());
            t
        };
        let norm = |r: &[f64]| r.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut free: Vec<f64> = tau0[..d - 1].to_vec();
        let (mut res, mut orbit) = self.fixed_point_residual(family, &complete(&free))?;
        for _ in 0..60 {
            if norm(&res) < tol {
                break;
            }
            let mut jac = vec![vec![0.0; d - 1]; d - 1];
            for j in 0..d - 1 {
                let h = 1e-7 * free[j].max(1e-3);
                let mut moved = free.clone();
                moved[j] += h;
                let (r2, _) = self.fixed_point_residual(family, &complete(&moved))?;
                for i in 0..d - 1 {
                    jac[i][j] = (r2[i] - res[i]) / h;
                }
            }
            let step = solve_linear(jac, res.iter().map(|x| -x).collect())?;
            let mut t = 1.0;
            loop {
                let trial: Vec<f64> = free.iter().zip(&step).map(|(x, s)| x + t * s).collect();
                if let Some((r2, o2)) = self.fixed_point_residual(family, &complete(&trial)) {
                    if norm(&r2) < norm(&res) {
                        free = trial;
                        res = r2;
                        orbit = o2;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-10 {
                    return None;
                }
            }
        }
        if norm(&res) >= tol {
            return None;
        }
        let config = Configuration { points: orbit };
        if self.order_violation(&config.points, &1.0).is_some() {
            return None;
        }
        Some((complete(&free), config))
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

impl fmt::Display for LabelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.letter, self.index)
    }
}

/// Points of a configuration, indexed by orbit index of the reference.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub points: Vec<f64>,
}

impl Configuration {
    pub fn max_distance(&self, other: &Configuration) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `(1 − s)·self + s·other`.
    pub fn blend(&self, other: &Configuration, s: f64) -> Configuration {
        Configuration {
            points: self
                .points
                .iter()
                .zip(&other.points)
                .map(|(a, b)| (1.0 - s) * a + s * b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iter: usize,
    /// Realization is tested every `check_every` iterations (and at 0).
    pub check_every: usize,
    pub eps_fix: f64,
    pub eps_deg: f64,
    /// Keep iterating after the path is realized until successive
    /// configurations differ by less than `eps_fix`.
    pub until_fixed: bool,
    pub tau_order: TauOrder,
    /// Averaging weight `s` in `V ← (1 − s)·V + s·T(V)`; `1` is the plain
    /// Thurston iteration.
    pub relaxation: f64,
    /// With `until_fixed`, refine realized iterates by Newton's method on
    /// the fixed-point equations.
    pub polish: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            check_every: 1,
            eps_fix: 1e-12,
            eps_deg: 1e-9,
            until_fixed: false,
            tau_order: TauOrder::Bottom,
            relaxation: 0.5,
            polish: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Realized,
    FixedPointTol,
    Boundary,
    MaxIter,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Realized => "realized",
            SolveStatus::FixedPointTol => "fixed-point-tol",
            SolveStatus::Boundary => "boundary",
            SolveStatus::MaxIter => "max-iter",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub tau: Vec<f64>,
    pub config: Configuration,
    pub iterations: usize,
    /// `(iteration, max-norm step)` recorded at every check.
    pub deltas: Vec<(usize, f64)>,
    /// Set when the solver stopped on a degenerate parameter.
    pub boundary: Option<String>,
}

/// Whether `f` follows `path` for its whole length.
pub fn follows(f: &Giet, path: &RauzyPath) -> bool {
    let run = f.rauzy_path(path.len());
    run.path.len() == path.len() && run.path.kinds() == path.kinds()
}

/// Iterates the Thurston map of the family `τ ↦ F(family, τ)` from `V^(γ)`.
pub fn solve(family: &Giet, reference: &RefConfig, opts: &SolveOptions) -> SolveReport {
    let mut v = reference.reference_configuration();
    let mut deltas = Vec::new();
    let mut realized = false;
    let mut last_delta = f64::INFINITY;
    let check_every = opts.check_every.max(1);
    let report = |status, v: Configuration, iterations, deltas, boundary| {
        let tau = reference.tau_of(&v, opts.tau_order).unwrap_or_default();
        SolveReport {
            status,
            tau,
            config: v,
            iterations,
            deltas,
            boundary,
        }
    };
    for it in 0..=opts.max_iter {
        let fixed = last_delta < opts.eps_fix;
        if it % check_every == 0 || fixed {
            if it > 0 {
                deltas.push((it, last_delta));
            }
            let tau = match reference.tau_of(&v, opts.tau_order) {
                Ok(t) => t,
                Err(e) => return report(SolveStatus::Boundary, v, it, deltas, Some(e.to_string())),
            };
            if let Err(e) = reference.check_boundary(&tau, opts.eps_deg) {
                return report(SolveStatus::Boundary, v, it, deltas, Some(e.to_string()));
            }
            let f = apply(family, &tau).expect("interior parameter");
            let was_realized = realized;
            realized = follows(&f, reference.path());
            if realized && (!opts.until_fixed || fixed) {
                return report(SolveStatus::Realized, v, it, deltas, None);
            }
            if realized && opts.until_fixed && opts.polish && (!was_realized || it % 100 == 0) {
                if let Some((tau, fixed_v)) = reference.polish(family, &tau, opts.eps_fix.max(1e-11)) {
                    let g = apply(family, &tau).expect("interior parameter");
                    if follows(&g, reference.path()) {
                        deltas.push((it, fixed_v.max_distance(&v)));
                        return report(SolveStatus::Realized, fixed_v, it, deltas, None);
                    }
                }
            }
        }
        if fixed {
            let status = if realized {
                SolveStatus::Realized
            } else {
                SolveStatus::FixedPointTol
            };
            return report(status, v, it, deltas, None);
        }
        if it == opts.max_iter {
            break;
        }
        let next = match reference.step(family, &v, opts) {
            Ok(next) => next,
            Err(e) => return report(SolveStatus::Boundary, v, it, deltas, Some(e.to_string())),
        };
        // Float rounding can break the reference order; damp towards the
        // current configuration until it holds again.
        let mut s = opts.relaxation.clamp(f64::MIN_POSITIVE, 1.0);
        let mut candidate = if s < 1.0 { v.blend(&next, s) } else { next };
        while reference.order_violation(&candidate.points, &1.0).is_some() && s > 1e-12 {
            s *= 0.5;
            candidate = v.blend(&candidate, s);
        }
        if reference.order_violation(&candidate.points, &1.0).is_some() {
            return report(
                SolveStatus::Boundary,
                v,
                it,
                deltas,
                Some("configuration order collapsed".into()),
            );
        }
        last_delta = candidate.max_distance(&v);
        v = candidate;
    }
    let status = if realized && opts.until_fixed {
        SolveStatus::Realized
    } else {
        SolveStatus::MaxIter
    };
    report(status, v, opts.max_iter, deltas, None)
}

/// A realized path with its certificates.
#[derive(Clone, Debug)]
pub struct Realization {
    /// Target path followed by the completion to a cyclic datum.
    pub full_path: RauzyPath,
    pub report: SolveReport,
    pub tau: Vec<f64>,
    pub map: Giet,
    /// `γ(f_τ, len(target)) = target`.
    pub truncation_ok: bool,
    /// `P(f_τ, r)` and `P(T_γ, r)` are combinatorially equivalent, with `r`
    /// the length of the completed path.
    pub certificate: bool,
}

/// Finds `τ` with `γ(F(family, τ), len(target)) = target`, completing the
/// target to the nearest cyclic datum of `class` first.
pub fn realize(
    family: &Giet,
    target: &RauzyPath,
    class: &RauzyClass,
    opts: &SolveOptions,
) -> Result<Realization> {
    if target.source() != family.datum() {
        return Err(Error::DatumMismatch);
    }
    let eta = class.path_to_nearest_cyclic(target.target())?;
    let full_path = target.concat(&eta)?;
    let reference = RefConfig::build(&full_path)?;
    let report = solve(family, &reference, opts);
    if report.status != SolveStatus::Realized {
        return Err(Error::SolverFailed(format!(
            "status {} after {} iterations",
            report.status, report.iterations
        )));
    }
    let map = apply(family, &report.tau)?;
    let truncation_ok = follows(&map, target);
    let r = full_path.len();
    let certificate = match (
        map.dynamical_partition(r),
        reference.base_iet().dynamical_partition(r),
    ) {
        (Ok(p), Ok(q)) => p.equivalent(&q),
        _ => false,
    };
    Ok(Realization {
        full_path,
        tau: report.tau.clone(),
        report,
        map,
        truncation_ok,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::MonotoneBranch;
    use crate::combinatorics::CombinatorialDatum;
    use crate::exact_iet::ratio;

    fn example_path() -> RauzyPath {
        let p = CombinatorialDatum::parse("A B C D", "D C B A").unwrap();
        RauzyPath::from_kinds(p, "bbbtb").unwrap()
    }

    fn fmt_labels(r: &RefConfig, labels: &[LabelClass]) -> Vec<String> {
        let alphabet = r.base_iet().datum().alphabet();
        labels
            .iter()
            .map(|l| format!("{}{}", alphabet[l.letter], l.index))
            .collect()
    }

    #[test]
    fn example_reference() {
        let r = RefConfig::build(&example_path()).unwrap();
        assert_eq!(r.n(), 11);
        assert_eq!(r.return_times(), &[3, 2, 2, 4]);
        assert_eq!(r.h(), &[0, 1, 1, 3]);
        assert_eq!(r.lengths(), &[ratio(6, 11), ratio(2, 11), ratio(1, 11), ratio(2, 11)]);
        assert_eq!(
            fmt_labels(&r, &r.tower_labels()),
            ["A0", "A3", "C1", "B1", "C3", "A1", "B0", "C2", "C0", "D0", "A2"]
        );
        assert_eq!(
            fmt_labels(&r, &r.labels()),
            ["A0", "B-1", "D-3", "C-1", "D-1", "A1", "B0", "D-2", "C0", "D0", "A2"]
        );
        let mut sorted: Vec<Rational> = r.ref_points().to_vec();
        sorted.sort();
        assert_eq!(sorted, (0..11).map(|k| ratio(k, 11)).collect::<Vec<_>>());
    }

    #[test]
    fn label_identifications() {
        let r = RefConfig::build(&example_path()).unwrap();
        let d_letter = 3;
        assert_eq!(r.canonical_label(0, 0), LabelClass { letter: 0, index: 0 });
        assert_eq!(r.canonical_label(0, -1), LabelClass { letter: d_letter, index: 0 });
        let classes: std::collections::BTreeSet<_> = (0..4)
            .flat_map(|a| (-20..20).map(move |i| (a, i)))
            .map(|(a, i)| r.canonical_label(a, i))
            .collect();
        assert_eq!(classes.len(), 11);
        // Shifting the index walks a single cycle through all classes.
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..11 {
            seen.insert(r.canonical_label(0, i));
        }
        assert_eq!(seen.len(), 11);
        assert_eq!(r.max_label(), LabelClass { letter: 0, index: 2 });
        assert_eq!(r.successor(r.max_label()), None);
        assert_eq!(r.successor(LabelClass { letter: 0, index: 0 }), Some(LabelClass { letter: 1, index: -1 }));
        assert_eq!(r.dynamical_label(LabelClass { letter: 3, index: -3 }), (3, 0));
    }

    #[test]
    fn reference_errors() {
        let p = CombinatorialDatum::parse("A B C D", "D C B A").unwrap();
        let short = RauzyPath::from_kinds(p, "bbb").unwrap();
        assert!(matches!(RefConfig::build(&short), Err(Error::TargetNotCyclic(_))));
        let rot = CombinatorialDatum::parse("A B", "B A").unwrap();
        let r = RefConfig::build(&RauzyPath::empty(rot)).unwrap();
        assert_eq!(r.n(), 2);
        assert_eq!(r.ref_points(), &[ratio(0, 1), ratio(1, 2)]);
    }

    #[test]
    fn iet_family_fixed_point() {
        let r = RefConfig::build(&example_path()).unwrap();
        let exact = r.ref_points().to_vec();
        assert_eq!(r.tau_of_exact(&exact).unwrap(), r.lengths());
        assert_eq!(r.step_exact(&exact).unwrap(), exact);
        let family = Giet::from_iet(r.base_iet());
        let v = r.reference_configuration();
        let tau = r.tau_of(&v, TauOrder::Bottom).unwrap();
        for (t, l) in tau.iter().zip(r.lengths()) {
            assert!((t - rational_to_f64(l)).abs() < 1e-12);
        }
        let next = r.step(&family, &v, &SolveOptions::default()).unwrap();
        assert!(next.max_distance(&v) < 1e-12);
        let report = solve(&family, &r, &SolveOptions::default());
        assert_eq!(report.status, SolveStatus::Realized);
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn boundary_detection() {
        let r = RefConfig::build(&example_path()).unwrap();
        let family = Giet::from_iet(r.base_iet());
        let opts = SolveOptions {
            eps_deg: 0.5,
            ..Default::default()
        };
        assert_eq!(solve(&family, &r, &opts).status, SolveStatus::Boundary);
        let mut v = r.reference_configuration();
        v.points.swap(1, 2);
        assert!(matches!(r.tau_of(&v, TauOrder::Bottom), Err(Error::OrderViolation(_))));
    }

    #[test]
    fn smooth_family_realizes_example() {
        let path = example_path();
        let r = RefConfig::build(&path).unwrap();
        let lengths: Vec<f64> = r.lengths().iter().map(rational_to_f64).collect();
        let family = Giet::from_lengths(path.source().clone(), &lengths, &lengths, |a, d, rg| {
            MonotoneBranch::smooth(d, rg, if a == 0 { 2.0 } else { 0.0 })
        })
        .unwrap();
        let opts = SolveOptions {
            max_iter: 500,
            ..Default::default()
        };
        let report = solve(&family, &r, &opts);
        assert_eq!(report.status, SolveStatus::Realized, "{report:?}");
        let class = RauzyClass::generate(path.source()).unwrap();
        let real = realize(&family, &path, &class, &opts).unwrap();
        assert!(real.truncation_ok && real.certificate);
    }
}
