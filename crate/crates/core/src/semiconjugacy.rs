//! Finite approximations of the semiconjugacy `h ∘ f = T ∘ h` between a GIET
//! and an IET sharing a Rauzy path prefix.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact_iet::{rational_to_f64, ExactIet};
use crate::giet::Giet;

/// A continuous non-decreasing piecewise-linear map of `[0, 1]` with
/// `h(0) = 0` and `h(1) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonePLMap {
    nodes: Vec<(f64, f64)>,
}

impl MonotonePLMap {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<Self> {
        let ok = nodes.len() >= 2
            && nodes[0] == (0.0, 0.0)
            && nodes.last() == Some(&(1.0, 1.0))
            && nodes.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1);
        if !ok {
            return Err(Error::InvalidMap(
                "nodes must run from (0,0) to (1,1), strictly increasing in x and non-decreasing in y".into(),
            ));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        let i = self.nodes.partition_point(|p| p.0 <= x).clamp(1, n - 1);
        let (a, b) = (self.nodes[i - 1], self.nodes[i]);
        let t = ((x - a.0) / (b.0 - a.0)).clamp(0.0, 1.0);
        a.1 + t * (b.1 - a.1)
    }

    /// Smallest gap between consecutive node images; zero means the map
    /// collapses an interval.
    pub fn min_image_gap(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1].1 - w[0].1)
            .fold(f64::INFINITY, f64::min)
    }

    /// Two-column text table `x y`, one node per line.
    pub fn to_table(&self) -> String {
        self.nodes
            .iter()
            .map(|(x, y)| format!("{x:.17e} {y:.17e}\n"))
            .collect()
    }
}

/// `h` sending the left endpoint of each atom of `P(f, r)` to the left
/// endpoint of the like-labeled atom of `P(T, r)`.
pub fn build_semiconjugacy(f: &Giet, t: &ExactIet, r: usize) -> Result<MonotonePLMap> {
    if f.datum() != t.datum() {
        return Err(Error::DatumMismatch);
    }
    let pf = f.rauzy_path(r);
    let pt = t.rauzy_path(r);
    if pf.tie || pt.tie || pf.path.kinds() != pt.path.kinds() {
        return Err(Error::PathMismatch);
    }
    let p = f.dynamical_partition(r)?;
    let q = t.normalized().dynamical_partition(r)?;
    if !p.equivalent(&q) {
        return Err(Error::PathMismatch);
    }
    let mut nodes: Vec<(f64, f64)> = p
        .atoms()
        .iter()
        .zip(q.atoms())
        .map(|(a, b)| (a.lo, rational_to_f64(&b.lo)))
        .collect();
    nodes[0] = (0.0, 0.0);
    nodes.push((1.0, 1.0));
    MonotonePLMap::new(nodes)
}

/// `max |h(f(x)) − T(h(x))|` over the midpoints of the node intervals, a
/// uniform grid of `samples` points and `samples` random points.
pub fn residual<R: Rng>(h: &MonotonePLMap, f: &Giet, t: &ExactIet, samples: usize, rng: &mut R) -> f64 {
    let tf = Giet::from_iet(&t.normalized());
    let mut xs: Vec<f64> = h.nodes().windows(2).map(|w| 0.5 * (w[0].0 + w[1].0)).collect();
    xs.extend((0..samples).map(|j| (j as f64 + 0.5) / samples as f64));
    xs.extend((0..samples).map(|_| rng.gen::<f64>()));
    xs.into_iter()
        .filter(|x| (0.0..1.0).contains(x))
        .filter_map(|x| {
            let lhs = h.eval(f.eval(x).ok()?);
            let rhs = tf.eval(h.eval(x).min(1.0 - f64::EPSILON)).ok()?;
            Some((lhs - rhs).abs())
        })
        .fold(0.0, f64::max)
}

/// Residual at the node abscissae themselves (excluding `1`).
pub fn node_residual(h: &MonotonePLMap, f: &Giet, t: &ExactIet) -> f64 {
    let tf = Giet::from_iet(&t.normalized());
    h.nodes()[..h.nodes().len() - 1]
        .iter()
        .filter_map(|&(x, y)| {
            let lhs = h.eval(f.eval(x).ok()?);
            let rhs = tf.eval(y).ok()?;
            Some((lhs - rhs).abs())
        })
        .fold(0.0, f64::max)
}
