use std::f64::consts::PI;

use super::check_lambda_max;
use crate::discrete::{laplacian, spectrum_discrete};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::space::TotalVertexSpace;
use crate::spectrum::{Eigenvalue, Method, SpectrumResult};

/// All `λ ≤ λ_max` with `cos(a√λ) = 1 - aμ` for edge length `a`, ascending.
///
/// Lifts landing on the Dirichlet set (`aμ ∈ {0, 2}`, `λ > 0`) are flagged.
pub fn lift_discrete_eigenvalue(mu: f64, length: f64, lambda_max: f64) -> Vec<(f64, bool)> {
    let x = (1.0 - length * mu).clamp(-1.0, 1.0);
    let theta = x.acos();
    let kmax = (lambda_max.sqrt() * length).max(0.0);
    let on_sigma = |t: f64| t > 0.0 && (theta.abs() < 1e-12 || (theta - PI).abs() < 1e-12);
    let mut out = Vec::new();
    let mut n = 0.0;
    loop {
        let base = 2.0 * PI * n;
        if base - theta > kmax {
            break;
        }
        let mut cands = vec![base + theta];
        if n > 0.0 && theta.abs() > 1e-12 && (theta - PI).abs() > 1e-12 {
            cands.push(base - theta);
        }
        if n > 0.0 && theta.abs() <= 1e-12 {
            // θ = 0 has a single root per period
            cands = vec![base];
        }
        if n > 0.0 && (theta - PI).abs() <= 1e-12 {
            cands = vec![base + PI];
        }
        for t in cands {
            if t >= 0.0 && t <= kmax {
                out.push(((t / length).powi(2), on_sigma(t)));
            }
        }
        n += 1.0;
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 * (1.0 + a.0));
    out
}

/// The metric spectrum transferred from `Δ⁰` on an equilateral graph.
pub fn equilateral_spectrum(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    lambda_max: f64,
) -> Result<SpectrumResult> {
    check_lambda_max(lambda_max)?;
    if !g.is_equilateral() {
        return Err(Error::precondition("equilateral transfer needs equal edge lengths"));
    }
    let a = g.edge(0).length;
    let discrete = spectrum_discrete(&laplacian(g, total, 0)?, None)?;
    let mut eigenvalues = Vec::new();
    for ev in &discrete.eigenvalues {
        let mu = ev.value;
        if mu * a < -1e-9 || mu * a > 2.0 + 1e-9 {
            continue;
        }
        for (lambda, on_sigma) in lift_discrete_eigenvalue(mu, a, lambda_max) {
            eigenvalues.push(Eigenvalue {
                value: lambda,
                multiplicity: ev.multiplicity,
                method: if on_sigma { Method::DirichletPoint } else { Method::Equilateral },
                error: 0.0,
            });
        }
    }
    eigenvalues.sort_by(|x, y| x.value.total_cmp(&y.value));
    // lifts of different μ may coincide only on the Dirichlet set
    let mut merged: Vec<Eigenvalue> = Vec::new();
    for e in eigenvalues {
        match merged.last_mut() {
            Some(last) if (last.value - e.value).abs() <= 1e-9 * (1.0 + e.value) => {
                last.multiplicity += e.multiplicity;
            }
            _ => merged.push(e),
        }
    }
    Ok(SpectrumResult {
        eigenvalues: merged,
        tolerance: discrete.tolerance,
        unresolved: Vec::new(),
    })
}
