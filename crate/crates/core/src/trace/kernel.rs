use std::f64::consts::PI;

use super::paths::DEFAULT_PATH_CAP;
use crate::error::{Error, Result};
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{C64, ONE};
use crate::space::{ScatteringMatrix, TotalVertexSpace};

/// A point `x ∈ [0, ℓ_e]` on edge `e`, measured from the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub edge: usize,
    pub x: f64,
}

impl MetricPoint {
    pub fn new(g: &WeightedGraph, edge: usize, x: f64) -> Result<Self> {
        if edge >= g.edge_count() {
            return Err(Error::InvalidArgument(format!("edge index {edge} out of range")));
        }
        let l = g.edge(edge).length;
        if !(0.0..=l).contains(&x) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {x} outside [0, {l}] on edge {}",
                g.edge(edge).name
            )));
        }
        Ok(MetricPoint { edge, x })
    }
}

struct Search<'a> {
    g: &'a WeightedGraph,
    s: ScatteringMatrix,
    target: MetricPoint,
    t: f64,
    cutoff: f64,
    visited: usize,
    sum: C64,
}

impl Search<'_> {
    /// Arrived at a vertex through `slot` after travelling `dist` with
    /// amplitude `amp`; choose the departing slot.
    fn arrive(&mut self, slot: Slot, dist: f64, amp: C64) -> Result<()> {
        self.visited += 1;
        if self.visited > DEFAULT_PATH_CAP {
            return Err(Error::EnumerationOverflow(DEFAULT_PATH_CAP));
        }
        let (v, row) = self.g.locate_slot(slot);
        for (col, &out) in self.g.slots(v).iter().enumerate() {
            let a = amp * self.s.entry(v, row, col);
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let e = self.g.edge(out.edge);
            if out.edge == self.target.edge {
                let to_y = match out.end {
                    End::Minus => self.target.x,
                    End::Plus => e.length - self.target.x,
                };
                let d = dist + to_y;
                if d <= self.cutoff {
                    self.sum += a * (-d * d / (4.0 * self.t)).exp();
                }
            }
            let d = dist + e.length;
            if d <= self.cutoff {
                self.arrive(Slot { edge: out.edge, end: out.end.opposite() }, d, a)?;
            }
        }
        Ok(())
    }
}

/// Path expansion of the heat kernel `p_t(x, y)`, truncated at metric path
/// length `cutoff`. Points at a vertex are limits from the edge interior.
pub fn heat_kernel_metric(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    x: MetricPoint,
    y: MetricPoint,
    t: f64,
    cutoff: f64,
) -> Result<f64> {
    if g.has_self_loops() {
        return Err(Error::precondition("heat kernel expansion needs a graph without self-loops"));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    let x = MetricPoint::new(g, x.edge, x.x)?;
    let y = MetricPoint::new(g, y.edge, y.x)?;
    let mut search = Search {
        g,
        s: total.scattering(),
        target: y,
        t,
        cutoff,
        visited: 0,
        sum: C64::new(0.0, 0.0),
    };
    let l = g.edge(x.edge).length;
    if x.x <= cutoff {
        search.arrive(Slot { edge: x.edge, end: End::Minus }, x.x, ONE)?;
    }
    if l - x.x <= cutoff {
        search.arrive(Slot { edge: x.edge, end: End::Plus }, l - x.x, ONE)?;
    }
    let mut value = search.sum.re;
    if x.edge == y.edge {
        let d = x.x - y.x;
        value += (-d * d / (4.0 * t)).exp();
    }
    Ok(value / (2.0 * (PI * t).sqrt()))
}
