//! Closed paths, scattering amplitudes and the heat-trace expansions of the
//! metric and the discrete Laplacian.

mod discrete;
mod kernel;
mod metric;
pub mod paths;

pub use discrete::{closed_walk_weight_sum, heat_trace_discrete, walk_weight_sums};
pub use kernel::{heat_kernel_metric, MetricPoint};
pub use metric::{cycle_sum, heat_trace_metric, weyl_term, MetricTrace};
pub use paths::{
    cycle_normal_form, discrete_weight, enumerate_cycles, enumerate_properly_closed, scattering_amplitude,
    scattering_amplitude_path, CombinatorialPath, Cycle, Step, DEFAULT_PATH_CAP,
};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{bond_secular_spectrum, BondOptions};
use crate::space::TotalVertexSpace;
use crate::spectrum::SpectrumResult;

/// A truncated series together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: f64,
    pub bound: f64,
}

/// `Σ_k m_k e^{-tλ_k}` over a computed spectrum.
pub fn spectral_heat_trace(spectrum: &SpectrumResult, t: f64) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .map(|e| e.multiplicity as f64 * (-t * e.value).exp())
        .sum()
}

/// `Σ_k m_k e^{-tλ_k}` for the metric Laplacian from its bond spectrum on
/// `[0, cut]`. The bound covers the tail above `cut` and the eigenvalue
/// error estimates.
pub fn metric_spectral_heat_trace(g: &WeightedGraph, total: &TotalVertexSpace, t: f64, cut: f64) -> Result<Truncated> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("heat time must be positive, got {t}")));
    }
    let s = bond_secular_spectrum(g, total, cut, BondOptions::default())?;
    let err: f64 = s
        .eigenvalues
        .iter()
        .map(|e| e.multiplicity as f64 * t * e.error * (-t * (e.value - e.error).max(0.0)).exp())
        .sum();
    Ok(Truncated {
        value: spectral_heat_trace(&s, t),
        bound: err + spectral_tail_bound(g.total_length(), g.edge_count(), t, cut),
    })
}

/// Bound on `Σ_{λ_k > Λ} e^{-tλ_k}` for a metric graph, from the counting
/// function of the decoupled Neumann operator,
/// `N(λ) ≤ vol √λ / π + |E|`.
pub fn spectral_tail_bound(volume: f64, edges: usize, t: f64, cut: f64) -> f64 {
    let c = volume / std::f64::consts::PI;
    let r = cut.max(1e-300).sqrt();
    (-t * cut).exp() * (edges as f64 + c * r + c / (2.0 * t * r))
}
