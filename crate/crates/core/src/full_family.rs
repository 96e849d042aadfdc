//! The full family `F(f, τ) = φ ∘ f ∘ ψ^{-1}` over a GIET and its boundary
//! degenerations.

use std::sync::Arc;

use crate::branch::{BranchMap, Interval, MonotoneBranch};
use crate::combinatorics::CombinatorialDatum;
use crate::error::{Error, Result};
use crate::giet::{extended_distance, DistanceEstimate, Giet};

/// Which row orders the parameter vector `τ` when reading critical values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TauOrder {
    /// `u^b_α = Σ_{π_b(χ) < π_b(α)} τ_χ`, the marking produced by [`apply`].
    #[default]
    Bottom,
    /// Differences taken along the top row instead.
    Top,
}

impl TauOrder {
    fn row<'a>(&self, datum: &'a CombinatorialDatum) -> &'a [usize] {
        match self {
            TauOrder::Bottom => datum.bottom(),
            TauOrder::Top => datum.top(),
        }
    }

    /// Marks `Σ_{χ before α} τ_χ` by letter, in this order's row.
    pub fn marking(&self, datum: &CombinatorialDatum, tau: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; tau.len()];
        let mut acc = 0.0;
        for &a in self.row(datum) {
            out[a] = acc;
            acc += tau[a];
        }
        out
    }

    /// Inverse of [`TauOrder::marking`] for marks in `[0, 1]`: consecutive
    /// differences in row order, the last closing at `1`.
    pub fn tau_from_marks(&self, datum: &CombinatorialDatum, marks: &[f64]) -> Vec<f64> {
        let row = self.row(datum);
        let mut tau = vec![0.0; marks.len()];
        for (j, &a) in row.iter().enumerate() {
            let next = row.get(j + 1).map_or(1.0, |&b| marks[b]);
            tau[a] = next - marks[a];
        }
        tau
    }
}

/// The slopes `φ(f,τ,β)`, the rescaling factor `λ(f,τ)` and `ψ(f,τ,α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySlopes {
    pub phi: Vec<f64>,
    pub rescale: f64,
    pub psi: Vec<f64>,
}

impl FamilySlopes {
    /// `min |I^t_β| < λ < Σ 1/|I^t_β|`.
    pub fn within_bounds(&self, f: &Giet) -> bool {
        let lengths: Vec<f64> = f.top_intervals().iter().map(|i| i.len()).collect();
        let lo = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi: f64 = lengths.iter().map(|l| 1.0 / l).sum();
        lo < self.rescale && self.rescale < hi
    }
}

fn check_simplex(tau: &[f64], d: usize) -> Result<()> {
    if tau.len() != d {
        return Err(Error::NotInSimplex(format!("expected {d} entries, got {}", tau.len())));
    }
    if tau.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::NotInSimplex("entries must be finite and non-negative".into()));
    }
    if tau.iter().all(|t| *t == 0.0) {
        return Err(Error::AllZero);
    }
    let sum: f64 = tau.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotInSimplex(format!("entries sum to {sum}")));
    }
    Ok(())
}

fn raw_slopes(f: &Giet, tau: &[f64]) -> FamilySlopes {
    let phi: Vec<f64> = f
        .bottom_intervals()
        .iter()
        .zip(tau)
        .map(|(iv, t)| t / iv.len())
        .collect();
    let rescale: f64 = f
        .top_intervals()
        .iter()
        .zip(&phi)
        .map(|(iv, p)| p * iv.len())
        .sum();
    let psi = phi.iter().map(|p| p / rescale).collect();
    FamilySlopes { phi, rescale, psi }
}

/// Slopes for `τ` in the open simplex.
pub fn slopes(f: &Giet, tau: &[f64]) -> Result<FamilySlopes> {
    check_simplex(tau, f.datum().d())?;
    if let Some(a) = tau.iter().position(|t| *t <= 0.0) {
        return Err(Error::DegenerateTau(f.datum().letter(a).to_string()));
    }
    Ok(raw_slopes(f, tau))
}

/// New domains `ψ(I^t_α)` and ranges `φ(I^b_α)` by letter.
fn new_intervals(f: &Giet, s: &FamilySlopes, tau: &[f64]) -> (Vec<Interval>, Vec<Interval>) {
    let datum = f.datum();
    let top_len: Vec<f64> = f
        .top_intervals()
        .iter()
        .zip(&s.psi)
        .map(|(iv, p)| p * iv.len())
        .collect();
    let lay = |row: &[usize], len: &[f64]| {
        let mut out = vec![Interval::new(0.0, 0.0); len.len()];
        let mut acc = 0.0;
        for (j, &a) in row.iter().enumerate() {
            // The last interval closes exactly at 1.
            let hi = if j + 1 == row.len() { 1.0 } else { acc + len[a] };
            out[a] = Interval::new(acc, hi);
            acc = hi;
        }
        out
    };
    (lay(datum.top(), &top_len), lay(datum.bottom(), tau))
}

fn conjugated_branch(old: &MonotoneBranch, domain: Interval, range: Interval, phi: f64, psi: f64) -> MonotoneBranch {
    // φ on I^b_α and ψ^{-1} on the new domain, both affine.
    let outer = BranchMap::Affine {
        slope: phi,
        offset: range.lo - phi * old.range.lo,
    };
    let inner = BranchMap::Affine {
        slope: 1.0 / psi,
        offset: old.domain.lo - domain.lo / psi,
    };
    MonotoneBranch {
        domain,
        range,
        map: Arc::new(BranchMap::Composite {
            outer: Arc::new(outer),
            core: Arc::clone(&old.map),
            inner: Arc::new(inner),
        }),
    }
}

/// `F(f, τ)`: a GIET over the same datum with critical values
/// `u^b_α = Σ_{π_b(χ) < π_b(α)} τ_χ`.
pub fn apply(f: &Giet, tau: &[f64]) -> Result<Giet> {
    let s = slopes(f, tau)?;
    let (domains, ranges) = new_intervals(f, &s, tau);
    let branches = f
        .branches()
        .iter()
        .enumerate()
        .map(|(a, b)| conjugated_branch(b, domains[a], ranges[a], s.phi[a], s.psi[a]))
        .collect();
    Ok(Giet::from_parts(f.datum().clone(), 1.0, branches))
}

/// A limit of the family at a boundary point of the simplex: the regular
/// GIET over the surviving letters plus one singular point per collapsed
/// letter.
#[derive(Clone, Debug)]
pub struct Degeneration {
    pub reduced_datum: CombinatorialDatum,
    pub regular: Giet,
    /// Original letter indices kept, in the reduced alphabet's order.
    pub kept: Vec<usize>,
    /// `(letter, (x, y))` for each collapsed letter.
    pub singular: Vec<(usize, (f64, f64))>,
}

impl Degeneration {
    /// Sampled pieces indexed by the original alphabet: a graph for kept
    /// letters, a single point for collapsed ones.
    pub fn pieces(&self, n: usize) -> Vec<Vec<(f64, f64)>> {
        let d = self.kept.len() + self.singular.len();
        let graphs = self.regular.graph_samples(n);
        let mut out = vec![Vec::new(); d];
        for (j, &a) in self.kept.iter().enumerate() {
            out[a] = graphs[j].clone();
        }
        for &(a, p) in &self.singular {
            out[a] = vec![p];
        }
        out
    }

    /// Extended distance to a GIET over the original datum.
    pub fn distance_to(&self, g: &Giet, n: usize) -> DistanceEstimate {
        extended_distance(&self.pieces(n), &g.graph_samples(n))
    }
}

/// `F(f, τ)` for `τ` on the boundary of the simplex.
pub fn boundary_apply(f: &Giet, tau: &[f64]) -> Result<Degeneration> {
    let datum = f.datum();
    check_simplex(tau, datum.d())?;
    if tau.iter().all(|t| *t > 0.0) {
        return Err(Error::NotInSimplex("no zero entry; use apply".into()));
    }
    let s = raw_slopes(f, tau);
    let (domains, ranges) = new_intervals(f, &s, tau);
    let kept: Vec<usize> = (0..datum.d()).filter(|&a| tau[a] > 0.0).collect();
    let reduced = datum.reduction(&kept)?;
    let mut branches = Vec::with_capacity(kept.len());
    for name in reduced.alphabet() {
        let a = datum.letter_index(name)?;
        branches.push(conjugated_branch(f.branch(a), domains[a], ranges[a], s.phi[a], s.psi[a]));
    }
    let kept_by_reduced: Vec<usize> = reduced
        .alphabet()
        .iter()
        .map(|n| datum.letter_index(n).expect("reduced letters come from the datum"))
        .collect();
    let singular = (0..datum.d())
        .filter(|&a| tau[a] == 0.0)
        .map(|a| (a, (domains[a].lo, ranges[a].lo)))
        .collect();
    Ok(Degeneration {
        regular: Giet::from_parts(reduced.clone(), 1.0, branches),
        reduced_datum: reduced,
        kept: kept_by_reduced,
        singular,
    })
}
