//! Strictly increasing branch maps and their closed-form inverses.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Branch-consistency tolerance.
pub const EPS_BRANCH: f64 = 1e-12;

/// A right-open interval `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// An increasing map of the line, defined at least on the branch domain.
///
/// `Chain` applies its members first to last. `Composite` is
/// `outer ∘ core ∘ inner`, kept unfolded so that its factors stay visible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BranchMap {
    Translation {
        shift: f64,
    },
    Affine {
        slope: f64,
        offset: f64,
    },
    /// Linear interpolation through `nodes`, extended linearly past the ends.
    PiecewiseLinear {
        nodes: Vec<(f64, f64)>,
    },
    /// `y0 + (y1 - y0)·(e^{kt} − 1)/(e^k − 1)` with `t = (x − x0)/(x1 − x0)`.
    Smooth {
        k: f64,
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    Composite {
        outer: Arc<BranchMap>,
        core: Arc<BranchMap>,
        inner: Arc<BranchMap>,
    },
    Chain {
        maps: Vec<Arc<BranchMap>>,
    },
}

impl BranchMap {
    /// The affine map sending `[a0, a1]` onto `[b0, b1]`.
    pub fn affine_between(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        let slope = (b1 - b0) / (a1 - a0);
        BranchMap::Affine {
            slope,
            offset: b0 - slope * a0,
        }
    }

    /// Chain `first` then `second`, flattening nested chains.
    pub fn then(first: &Arc<BranchMap>, second: &Arc<BranchMap>) -> Self {
        let mut maps = Vec::new();
        for m in [first, second] {
            match m.as_ref() {
                BranchMap::Chain { maps: inner } => maps.extend(inner.iter().cloned()),
                _ => maps.push(Arc::clone(m)),
            }
        }
        BranchMap::Chain { maps }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            BranchMap::Translation { shift } => x + shift,
            BranchMap::Affine { slope, offset } => slope * x + offset,
            BranchMap::PiecewiseLinear { nodes } => interpolate(nodes, x, false),
            BranchMap::Smooth { k, x0, x1, y0, y1 } => {
                let t = (x - x0) / (x1 - x0);
                let s = if k.abs() < 1e-12 {
                    t
                } else {
                    (k * t).exp_m1() / k.exp_m1()
                };
                y0 + (y1 - y0) * s
            }
            BranchMap::Composite { outer, core, inner } => outer.eval(core.eval(inner.eval(x))),
            BranchMap::Chain { maps } => maps.iter().fold(x, |acc, m| m.eval(acc)),
        }
    }

    pub fn eval_inverse(&self, y: f64) -> f64 {
        match self {
            BranchMap::Translation { shift } => y - shift,
            BranchMap::Affine { slope, offset } => (y - offset) / slope,
            BranchMap::PiecewiseLinear { nodes } => interpolate(nodes, y, true),
            BranchMap::Smooth { k, x0, x1, y0, y1 } => {
                let s = (y - y0) / (y1 - y0);
                let t = if k.abs() < 1e-12 {
                    s
                } else {
                    (s * k.exp_m1()).ln_1p() / k
                };
                x0 + (x1 - x0) * t
            }
            BranchMap::Composite { outer, core, inner } => {
                inner.eval_inverse(core.eval_inverse(outer.eval_inverse(y)))
            }
            BranchMap::Chain { maps } => maps.iter().rev().fold(y, |acc, m| m.eval_inverse(acc)),
        }
    }

    /// Number of elementary maps evaluated per call.
    pub fn depth(&self) -> usize {
        match self {
            BranchMap::Composite { outer, core, inner } => {
                outer.depth() + core.depth() + inner.depth()
            }
            BranchMap::Chain { maps } => maps.iter().map(|m| m.depth()).sum(),
            _ => 1,
        }
    }

    pub fn is_translation(&self) -> bool {
        match self {
            BranchMap::Translation { .. } => true,
            BranchMap::Chain { maps } => maps.iter().all(|m| m.is_translation()),
            _ => false,
        }
    }

    /// Short name of the variant.
    pub fn kind_name(&self) -> &'static str {
        match self {
            BranchMap::Translation { .. } => "translation",
            BranchMap::Affine { .. } => "affine",
            BranchMap::PiecewiseLinear { .. } => "piecewise_linear",
            BranchMap::Smooth { .. } => "smooth",
            BranchMap::Composite { .. } => "composite",
            BranchMap::Chain { .. } => "chain",
        }
    }

    fn validate_params(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidBranch(msg.to_string()));
        match self {
            BranchMap::Translation { shift } if !shift.is_finite() => bad("non-finite shift"),
            BranchMap::Affine { slope, offset } if !(*slope > 0.0) || !offset.is_finite() => {
                bad("affine slope must be positive")
            }
            BranchMap::PiecewiseLinear { nodes } => {
                if nodes.len() < 2 {
                    return bad("piecewise-linear map needs at least two nodes");
                }
                if nodes.windows(2).any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
                    return bad("piecewise-linear nodes must be strictly increasing");
                }
                Ok(())
            }
            BranchMap::Smooth { k, x0, x1, y0, y1 } => {
                if !k.is_finite() || !(x1 > x0) || !(y1 > y0) {
                    return bad("smooth branch needs finite k and increasing endpoints");
                }
                Ok(())
            }
            BranchMap::Composite { outer, core, inner } => {
                outer.validate_params()?;
                core.validate_params()?;
                inner.validate_params()
            }
            BranchMap::Chain { maps } => maps.iter().try_for_each(|m| m.validate_params()),
            _ => Ok(()),
        }
    }
}

fn interpolate(nodes: &[(f64, f64)], v: f64, inverse: bool) -> f64 {
    let key = |p: &(f64, f64)| if inverse { p.1 } else { p.0 };
    let val = |p: &(f64, f64)| if inverse { p.0 } else { p.1 };
    let n = nodes.len();
    let i = nodes.partition_point(|p| key(p) <= v).clamp(1, n - 1);
    let (a, b) = (&nodes[i - 1], &nodes[i]);
    let t = (v - key(a)) / (key(b) - key(a));
    val(a) + t * (val(b) - val(a))
}

/// A branch `f_α : domain → range`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneBranch {
    pub domain: Interval,
    pub range: Interval,
    pub map: Arc<BranchMap>,
}

impl MonotoneBranch {
    pub fn new(domain: Interval, range: Interval, map: BranchMap) -> Self {
        Self {
            domain,
            range,
            map: Arc::new(map),
        }
    }

    /// The increasing affine bijection `domain → range`.
    pub fn affine(domain: Interval, range: Interval) -> Self {
        let map = if (domain.len() - range.len()).abs() <= EPS_BRANCH * domain.len().max(1.0) {
            BranchMap::Translation {
                shift: range.lo - domain.lo,
            }
        } else {
            BranchMap::affine_between(domain.lo, domain.hi, range.lo, range.hi)
        };
        Self::new(domain, range, map)
    }

    /// A smooth branch with nonlinearity `k` (`k = 0` is affine).
    pub fn smooth(domain: Interval, range: Interval, k: f64) -> Self {
        Self::new(
            domain,
            range,
            BranchMap::Smooth {
                k,
                x0: domain.lo,
                x1: domain.hi,
                y0: range.lo,
                y1: range.hi,
            },
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.map.eval(x)
    }

    pub fn eval_inverse(&self, y: f64) -> f64 {
        self.map.eval_inverse(y)
    }

    /// Samples `n + 1` equally spaced points (including both endpoints) and
    /// checks strict monotonicity, endpoint matching and inverse consistency.
    pub fn check(&self, n: usize, tol: f64) -> Result<()> {
        self.map.validate_params()?;
        if self.domain.is_empty() || self.range.is_empty() {
            return Err(Error::InvalidBranch("empty domain or range".into()));
        }
        let scale = tol * self.range.hi.abs().max(self.domain.hi.abs()).max(1.0);
        let lo = self.eval(self.domain.lo);
        let hi = self.eval(self.domain.hi);
        if (lo - self.range.lo).abs() > scale || (hi - self.range.hi).abs() > scale {
            return Err(Error::InvalidBranch(format!(
                "endpoints map to [{lo}, {hi}], expected [{}, {}]",
                self.range.lo, self.range.hi
            )));
        }
        let n = n.max(1);
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=n {
            let x = self.domain.lo + self.domain.len() * j as f64 / n as f64;
            let y = self.eval(x);
            if !y.is_finite() || y <= prev {
                return Err(Error::InvalidBranch(format!("not increasing near x = {x}")));
            }
            if (self.eval_inverse(y) - x).abs() > scale {
                return Err(Error::InvalidBranch(format!("inverse mismatch near x = {x}")));
            }
            prev = y;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(m: &BranchMap, xs: &[f64]) {
        for &x in xs {
            let y = m.eval(x);
            assert!((m.eval_inverse(y) - x).abs() < 1e-13, "{m:?} at {x}");
        }
    }

    #[test]
    fn elementary_maps() {
        let xs = [0.0, 0.1, 0.25, 0.5, 0.9];
        roundtrip(&BranchMap::Translation { shift: 0.3 }, &xs);
        roundtrip(&BranchMap::affine_between(0.0, 1.0, 0.2, 0.5), &xs);
        roundtrip(
            &BranchMap::PiecewiseLinear {
                nodes: vec![(0.0, 0.0), (0.3, 0.6), (1.0, 1.0)],
            },
            &xs,
        );
        for k in [-3.0, 0.0, 1e-14, 2.0] {
            let m = BranchMap::Smooth {
                k,
                x0: 0.0,
                x1: 1.0,
                y0: 0.5,
                y1: 0.75,
            };
            roundtrip(&m, &xs);
            assert!((m.eval(0.0) - 0.5).abs() < 1e-15);
            assert!((m.eval(1.0) - 0.75).abs() < 1e-15);
        }
    }

    #[test]
    fn piecewise_linear_nodes() {
        let m = BranchMap::PiecewiseLinear {
            nodes: vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)],
        };
        assert_eq!(m.eval(0.5), 0.25);
        assert_eq!(m.eval(0.25), 0.125);
        assert_eq!(m.eval(0.75), 0.625);
        assert_eq!(m.eval_inverse(0.625), 0.75);
    }

    #[test]
    fn chains_compose_in_order() {
        let a = Arc::new(BranchMap::Translation { shift: 1.0 });
        let b = Arc::new(BranchMap::Affine {
            slope: 2.0,
            offset: 0.0,
        });
        let ab = Arc::new(BranchMap::then(&a, &b));
        assert_eq!(ab.eval(1.0), 4.0);
        assert_eq!(ab.eval_inverse(4.0), 1.0);
        let abb = BranchMap::then(&ab, &b);
        assert_eq!(abb.depth(), 3);
        assert_eq!(abb.eval(1.0), 8.0);
    }

    #[test]
    fn check_rejects_bad_branches() {
        let d = Interval::new(0.0, 0.5);
        let r = Interval::new(0.5, 1.0);
        assert!(MonotoneBranch::smooth(d, r, 2.0).check(64, EPS_BRANCH).is_ok());
        assert!(MonotoneBranch::affine(d, Interval::new(0.0, 1.0)).check(64, EPS_BRANCH).is_ok());
        let wrong_range = MonotoneBranch::new(d, r, BranchMap::Translation { shift: 0.4 });
        assert!(wrong_range.check(64, EPS_BRANCH).is_err());
        let decreasing = MonotoneBranch::new(
            d,
            r,
            BranchMap::Affine {
                slope: -1.0,
                offset: 1.0,
            },
        );
        assert!(decreasing.check(64, EPS_BRANCH).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let m = BranchMap::Composite {
            outer: Arc::new(BranchMap::affine_between(0.0, 1.0, 0.0, 2.0)),
            core: Arc::new(BranchMap::Smooth {
                k: 2.0,
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
            }),
            inner: Arc::new(BranchMap::Translation { shift: -0.5 }),
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"kind\":\"composite\""));
        let back: BranchMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
