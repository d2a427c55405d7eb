//! The metric graph Laplacian: secular equations, the finite element
//! oracle, eigenfunctions and the metric index.

mod bond;
mod dtn;
mod eigenfunction;
mod equilateral;
mod fem;
mod index;

pub use bond::{bond_matrix, bond_secular_spectrum, BondOptions};
pub use dtn::{dtn_matrix, secular_spectrum_dtn, DtnOptions};
pub use eigenfunction::{eigenfunction, EdgewiseSolution, SolutionResiduals};
pub use equilateral::{equilateral_spectrum, lift_discrete_eigenvalue};
pub use fem::{fem_clusters, fem_spectrum, FemOptions};
pub use index::{metric_index, ChainCheck, MetricIndexReport};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Exclusion radius around a point of the Dirichlet set.
pub fn exclusion_radius(z: f64) -> f64 {
    1e-6 * (1.0 + z.abs())
}

/// A point `(πk/ℓ_e)²` of the decoupled Dirichlet spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPoint {
    pub value: f64,
    /// `(edge, k)` pairs producing this value.
    pub sources: Vec<(usize, u64)>,
}

/// `Σ ∩ [0, λ_max]` sorted, with coinciding values merged.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSet {
    pub points: Vec<DirichletPoint>,
    pub lambda_max: f64,
}

impl DirichletSet {
    pub fn new(g: &WeightedGraph, lambda_max: f64) -> Self {
        let mut raw: Vec<(f64, usize, u64)> = Vec::new();
        if lambda_max > 0.0 {
            for (i, e) in g.edges().iter().enumerate() {
                let kmax = (lambda_max.sqrt() * e.length / PI).floor() as u64 + 1;
                for k in 1..=kmax {
                    let v = (PI * k as f64 / e.length).powi(2);
                    if v <= lambda_max {
                        raw.push((v, i, k));
                    }
                }
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<DirichletPoint> = Vec::new();
        for (v, e, k) in raw {
            match points.last_mut() {
                Some(p) if (v - p.value).abs() <= 1e-12 * (1.0 + v) => p.sources.push((e, k)),
                _ => points.push(DirichletPoint {
                    value: v,
                    sources: vec![(e, k)],
                }),
            }
        }
        DirichletSet { points, lambda_max }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Number of Dirichlet eigenvalues (with multiplicity) at most `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.points
            .iter()
            .filter(|p| p.value <= x)
            .map(|p| p.sources.len())
            .sum()
    }

    pub fn contains(&self, z: f64, radius: f64) -> bool {
        self.points.iter().any(|p| (p.value - z).abs() <= radius)
    }
}

/// Fails when `z` is within the exclusion radius of some `(πk/ℓ_e)²`.
pub(crate) fn check_off_dirichlet(g: &WeightedGraph, z: num_complex::Complex<f64>) -> Result<()> {
    let w = exclusion_radius(z.norm());
    for e in g.edges() {
        let k0 = (z.re.max(0.0).sqrt() * e.length / PI).round() as i64;
        for k in (k0 - 1).max(1)..=k0 + 1 {
            let sigma = (PI * k as f64 / e.length).powi(2);
            if (z - sigma).norm() <= w {
                return Err(Error::NearDirichlet {
                    z: format!("{z}"),
                    sigma,
                    radius: w,
                });
            }
        }
    }
    Ok(())
}

/// Sorted eigenvalues `(πk/ℓ_e)²` of the decoupled Dirichlet operator: the
/// lowest `count` values counted with multiplicity.
pub fn decoupled_dirichlet(g: &WeightedGraph, count: usize) -> Vec<f64> {
    decoupled(g, count, 1)
}

/// Lowest `count` eigenvalues of the decoupled Neumann operator: `|E|`
/// zeros followed by `(πk/ℓ_e)²`.
pub fn decoupled_neumann(g: &WeightedGraph, count: usize) -> Vec<f64> {
    decoupled(g, count, 0)
}

fn decoupled(g: &WeightedGraph, count: usize, k0: u64) -> Vec<f64> {
    let mut out = Vec::new();
    let kmax = count as u64 + 1;
    for e in g.edges() {
        for k in k0..=kmax {
            out.push((PI * k as f64 / e.length).powi(2));
        }
    }
    out.sort_by(f64::total_cmp);
    out.truncate(count);
    out
}

pub(crate) fn check_lambda_max(lambda_max: f64) -> Result<()> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "lambda_max must be positive, got {lambda_max}"
        )));
    }
    Ok(())
}
