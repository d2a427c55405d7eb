use std::f64::consts::PI;

use super::paths::{enumerate_cycles, DEFAULT_PATH_CAP};
use crate::discrete::index_discrete;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::space::TotalVertexSpace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTrace {
    pub value: f64,
    /// Bound on the cycle terms beyond the cutoff.
    pub truncation: f64,
    pub weyl: f64,
    /// `(dim 𝒢 - |E|) / 2`.
    pub constant: f64,
    pub cycles: f64,
    /// Number of cycles (prime or not) inside the cutoff.
    pub cycle_count: usize,
    /// The cutoff is below every cycle length; only the first two terms
    /// were used.
    pub cutoff_below_cycles: bool,
}

pub fn weyl_term(g: &WeightedGraph, t: f64) -> f64 {
    g.total_length() / (2.0 * (PI * t).sqrt())
}

/// `(1/2√(πt)) Σ_{c̃,p} S(c̃)^p ℓ(c̃) e^{-p²ℓ(c̃)²/4t}` over `p ℓ(c̃) ≤ cutoff`,
/// together with the number of contributing cycles.
pub fn cycle_sum(g: &WeightedGraph, total: &TotalVertexSpace, t: f64, cutoff: f64) -> Result<(f64, usize)> {
    let cycles = enumerate_cycles(g, total, cutoff, DEFAULT_PATH_CAP)?;
    let mut s = 0.0;
    for (c, amp) in &cycles {
        let l = c.metric_length(g);
        s += (amp * (l / c.power as f64)).re * (-l * l / (4.0 * t)).exp();
    }
    Ok((s / (2.0 * (PI * t).sqrt()), cycles.len()))
}

/// Bound on the omitted cycle terms: a closed walk of `n` steps has length
/// at least `n ℓ₀`, weight `ℓ/n ≤ ℓ_max`, and the amplitudes of all walks
/// with `n` steps add up to at most `2|E| rⁿ` with `r` the largest absolute
/// row sum of the scattering matrices.
fn truncation_bound(g: &WeightedGraph, r: f64, t: f64, cutoff: f64) -> f64 {
    let l0 = g.min_length();
    let lmax = g.max_length();
    let bonds = 2.0 * g.edge_count() as f64;
    let first = (cutoff / lmax).floor() as usize + 1;
    let mut s = 0.0f64;
    let mut n = first.max(1);
    let mut prev = f64::INFINITY;
    loop {
        let len = cutoff.max(n as f64 * l0);
        let log_term = bonds.ln() + n as f64 * r.ln() + lmax.ln() - len * len / (4.0 * t);
        let term = log_term.exp();
        s += term;
        let past = n as f64 * l0 > cutoff;
        if past && term <= prev && (term <= 1e-18 * s || term == 0.0) {
            break;
        }
        if n > first + 1_000_000 {
            return f64::INFINITY;
        }
        prev = term;
        n += 1;
    }
    s / (2.0 * (PI * t).sqrt())
}

pub fn heat_trace_metric(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    t: f64,
    cutoff: f64,
) -> Result<MetricTrace> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    if !(cutoff >= 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff must be non-negative, got {cutoff}")));
    }
    if g.has_self_loops() {
        return Err(Error::precondition("trace formula needs a graph without self-loops"));
    }
    let weyl = weyl_term(g, t);
    let constant = index_discrete(g, total)?.index as f64 / 2.0;
    let (cycles, cycle_count) = cycle_sum(g, total, t, cutoff)?;
    let r = total.scattering().max_row_sum().max(1.0);
    let truncation = truncation_bound(g, r, t, cutoff);
    Ok(MetricTrace {
        value: weyl + constant + cycles,
        truncation,
        weyl,
        constant,
        cycles,
        cycle_count,
        cutoff_below_cycles: cutoff < 2.0 * g.min_length(),
    })
}
