
use num_complex::Complex;

use super::{check_lambda_max, check_off_dirichlet, exclusion_radius, DirichletSet};
use crate::discrete::index_discrete;
use crate::error::Result;
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{hermitian_eigenvalues, operator_norm, real, CMatrix, LinearMap, C64};
use crate::space::TotalVertexSpace;
use crate::spectrum::{Eigenvalue, Method, SpectrumResult};

/// `(√z cot(√z ℓ), √z / sin(√z ℓ))`, with the affine limit near `z = 0`.
fn edge_coefficients(z: C64, length: f64) -> (C64, C64) {
    let w2 = z * (length * length);
    if w2.norm() < 1e-2 {
        // w cot w and w / sin w as power series in w²
        let cot = real(1.0) - w2 / 3.0 - w2 * w2 / 45.0 - w2 * w2 * w2 * (2.0 / 945.0)
            - w2 * w2 * w2 * w2 / 4725.0;
        let csc = real(1.0) + w2 / 6.0 + w2 * w2 * (7.0 / 360.0) + w2 * w2 * w2 * (31.0 / 15120.0)
            + w2 * w2 * w2 * w2 * (127.0 / 604800.0);
        return (cot / length, csc / length);
    }
    let k = z.sqrt();
    let w = k * length;
    (k * w.cos() / w.sin(), k / w.sin())
}

/// The Dirichlet-to-Neumann map on `𝒢^max` in global slot coordinates.
pub(crate) fn dtn_maximal(g: &WeightedGraph, z: C64) -> CMatrix {
    let n = g.slot_count();
    let mut m = CMatrix::zeros(n, n);
    for (i, e) in g.edges().iter().enumerate() {
        let a = g.global_slot(Slot { edge: i, end: End::Minus });
        let b = g.global_slot(Slot { edge: i, end: End::Plus });
        let (diag, off) = edge_coefficients(z, e.length);
        m[(a, a)] += diag;
        m[(b, b)] += diag;
        m[(a, b)] -= off;
        m[(b, a)] -= off;
    }
    m
}

/// `Q(z) = B* M(z) B` on `𝒢`.
pub fn dtn_matrix(g: &WeightedGraph, total: &TotalVertexSpace, z: C64) -> Result<LinearMap> {
    check_off_dirichlet(g, z)?;
    let b = total.global_basis(g);
    let q = b.adjoint() * dtn_maximal(g, z) * &b;
    let labels: Vec<String> = (0..total.dim()).map(|k| format!("g{}", k + 1)).collect();
    Ok(LinearMap::new(q, labels.clone(), labels))
}

fn dtn_real(g: &WeightedGraph, b: &CMatrix, lambda: f64) -> CMatrix {
    let q = b.adjoint() * dtn_maximal(g, Complex::new(lambda, 0.0)) * b;
    (&q + q.adjoint()).map(|z| z * 0.5)
}

#[derive(Debug, Clone, Copy)]
pub struct DtnOptions {
    /// Relative width at which bisection stops.
    pub tol: f64,
}

impl Default for DtnOptions {
    fn default() -> Self {
        DtnOptions { tol: 1e-12 }
    }
}

/// Eigenvalues in `[0, λ_max]` away from the Dirichlet set, via sign
/// counting of the Hermitian family `Q(λ)`.
///
/// `Q(λ)` is strictly decreasing between consecutive Dirichlet points, so
/// the number of eigenvalues in `(x, y]` equals the growth of the number of
/// negative eigenvalues of `Q` between `x` and `y`.
pub fn secular_spectrum_dtn(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    lambda_max: f64,
    options: DtnOptions,
) -> Result<SpectrumResult> {
    check_lambda_max(lambda_max)?;
    let b = total.global_basis(g);
    let sigma = DirichletSet::new(g, lambda_max);
    let mut eigenvalues = Vec::new();
    let mut unresolved = Vec::new();

    let h0 = index_discrete(g, total)?.h0;
    if h0 > 0 {
        eigenvalues.push(Eigenvalue {
            value: 0.0,
            multiplicity: h0,
            method: Method::Dtn,
            error: 0.0,
        });
    }
    let negatives = |lambda: f64| -> usize {
        let q = dtn_real(g, &b, lambda);
        let scale = 1e-13 * (1.0 + operator_norm(&q));
        hermitian_eigenvalues(&q).iter().filter(|&&x| x < -scale).count()
    };

    // pole-free intervals between the Dirichlet points
    let mut breaks = vec![0.0];
    for p in &sigma.points {
        let w = exclusion_radius(p.value);
        breaks.push(p.value - w);
        breaks.push(p.value + w);
        unresolved.push((p.value - w, (p.value + w).min(lambda_max)));
    }
    breaks.push(lambda_max);
    for pair in breaks.chunks(2) {
        let (lo, hi) = (pair[0], pair[1].min(lambda_max));
        if hi <= lo {
            continue;
        }
        // roots at λ = 0 are the kernel of Δ⁰ and already recorded
        let n_lo = if lo == 0.0 { h0 } else { negatives(lo) };
        let n_hi = negatives(hi);
        bisect(&negatives, lo, hi, n_lo, n_hi, options.tol, &mut eigenvalues);
    }
    eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(SpectrumResult {
        eigenvalues,
        tolerance: options.tol,
        unresolved,
    })
}

fn bisect(
    count: &dyn Fn(f64) -> usize,
    lo: f64,
    hi: f64,
    n_lo: usize,
    n_hi: usize,
    tol: f64,
    out: &mut Vec<Eigenvalue>,
) {
    if n_hi <= n_lo {
        return;
    }
    if hi - lo <= tol.max(1e-15) * (1.0 + lo) {
        out.push(Eigenvalue {
            value: 0.5 * (lo + hi),
            multiplicity: n_hi - n_lo,
            method: Method::Dtn,
            error: hi - lo,
        });
        return;
    }
    let mid = 0.5 * (lo + hi);
    let n_mid = count(mid);
    bisect(count, lo, mid, n_lo, n_mid.clamp(n_lo, n_hi), tol, out);
    bisect(count, mid, hi, n_mid.clamp(n_lo, n_hi), n_hi, tol, out);
}
