use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{pieces_for, End, Slot, WeightedGraph};
use crate::linalg::{hermitian_eigenvalues, is_real, CMatrix, C64};
use crate::space::TotalVertexSpace;
use crate::spectrum::{Eigenvalue, Method, SpectrumResult};

#[derive(Debug, Clone, Copy)]
pub struct FemOptions {
    /// Elements per unit length.
    pub n_per_unit: usize,
    /// Also solve on the half-resolution mesh for a Richardson estimate.
    pub estimate_error: bool,
}

impl Default for FemOptions {
    fn default() -> Self {
        FemOptions { n_per_unit: 200, estimate_error: true }
    }
}

/// A nodal value as a combination of unknowns.
type NodeExpr = Vec<(usize, C64)>;

/// Stiffness and mass matrices of piecewise-linear elements whose vertex
/// values are constrained to the vertex spaces.
pub(crate) fn assemble(g: &WeightedGraph, total: &TotalVertexSpace, n_per_unit: usize) -> (CMatrix, CMatrix) {
    let mut n_dof = total.dim();
    let mut chains: Vec<Vec<NodeExpr>> = Vec::with_capacity(g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        let pieces = pieces_for(e.length, n_per_unit);
        let endpoint = |end: End| -> NodeExpr {
            let (v, pos) = g.locate_slot(Slot { edge: i, end });
            let b = total.space(v).basis();
            (0..b.ncols())
                .filter(|&j| b[(pos, j)] != C64::new(0.0, 0.0))
                .map(|j| (total.offset(v) + j, b[(pos, j)]))
                .collect()
        };
        let mut chain = vec![endpoint(End::Minus)];
        for _ in 1..pieces {
            chain.push(vec![(n_dof, C64::new(1.0, 0.0))]);
            n_dof += 1;
        }
        chain.push(endpoint(End::Plus));
        chains.push(chain);
    }
    let mut k = CMatrix::zeros(n_dof, n_dof);
    let mut m = CMatrix::zeros(n_dof, n_dof);
    for (i, chain) in chains.iter().enumerate() {
        let h = g.edge(i).length / (chain.len() - 1) as f64;
        let ke = [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]];
        let me = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
        for w in chain.windows(2) {
            for (a, ea) in w.iter().enumerate() {
                for (b, eb) in w.iter().enumerate() {
                    for &(p, cp) in ea {
                        for &(q, cq) in eb {
                            let z = cp.conj() * cq;
                            k[(p, q)] += z * ke[a][b];
                            m[(p, q)] += z * me[a][b];
                        }
                    }
                }
            }
        }
    }
    (k, m)
}

/// Eigenvalues of `K x = λ M x` for Hermitian `K` and positive definite `M`.
fn generalized_eigenvalues(k: &CMatrix, m: &CMatrix) -> Result<Vec<f64>> {
    if is_real(k) && is_real(m) {
        let kr: DMatrix<f64> = k.map(|z| z.re);
        let mr: DMatrix<f64> = m.map(|z| z.re);
        let chol = mr
            .cholesky()
            .ok_or_else(|| Error::precondition("mass matrix is not positive definite"))?;
        let l = chol.l();
        let y = l.solve_lower_triangular(&kr).expect("triangular solve");
        let c = l.solve_lower_triangular(&y.transpose()).expect("triangular solve");
        let c = (&c + c.transpose()) * 0.5;
        let mut vals: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        return Ok(vals);
    }
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::precondition("mass matrix is not positive definite"))?;
    let l = chol.l();
    let y = l.solve_lower_triangular(k).expect("triangular solve");
    let c = l.solve_lower_triangular(&y.adjoint()).expect("triangular solve");
    Ok(hermitian_eigenvalues(&c))
}

fn solve(g: &WeightedGraph, total: &TotalVertexSpace, n_per_unit: usize, count: usize) -> Result<Vec<f64>> {
    let (k, m) = assemble(g, total, n_per_unit);
    if count > k.nrows() {
        return Err(Error::InvalidArgument(format!(
            "requested {count} eigenvalues, discretization has {} unknowns",
            k.nrows()
        )));
    }
    let mut v = generalized_eigenvalues(&k, &m)?;
    v.truncate(count);
    Ok(v)
}

/// Lowest `count` eigenvalues of the Galerkin discretization with
/// continuous piecewise-linear elements. Each value carries the Richardson
/// estimate `|λ_{n/2} - λ_n| / 3` of its error.
pub fn fem_spectrum(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    count: usize,
    options: FemOptions,
) -> Result<SpectrumResult> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    if options.n_per_unit == 0 {
        return Err(Error::InvalidArgument("n_per_unit must be positive".into()));
    }
    let fine = solve(g, total, options.n_per_unit, count)?;
    let coarse = if options.estimate_error && options.n_per_unit >= 2 {
        solve(g, total, options.n_per_unit / 2, count).ok()
    } else {
        None
    };
    let eigenvalues = fine
        .iter()
        .enumerate()
        .map(|(i, &value)| Eigenvalue {
            value,
            multiplicity: 1,
            method: Method::Fem,
            error: coarse.as_ref().map_or(0.0, |c| (c[i] - value).abs() / 3.0),
        })
        .collect();
    Ok(SpectrumResult {
        eigenvalues,
        tolerance: 0.0,
        unresolved: Vec::new(),
    })
}

/// Groups FEM values that agree within their error estimates.
pub fn fem_clusters(s: &SpectrumResult, factor: f64) -> SpectrumResult {
    let mut out: Vec<Eigenvalue> = Vec::new();
    for e in &s.eigenvalues {
        match out.last_mut() {
            Some(last)
                if (e.value - last.value).abs()
                    <= factor * (e.error.max(last.error)) + 1e-9 * (1.0 + e.value) =>
            {
                last.multiplicity += 1;
                last.error = last.error.max(e.error);
            }
            _ => out.push(*e),
        }
    }
    SpectrumResult {
        eigenvalues: out,
        tolerance: factor,
        unresolved: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceKind;
    use std::f64::consts::PI;

    fn interval() -> WeightedGraph {
        WeightedGraph::from_edge_list(&["a", "b"], &[("a", "b", 1.0)]).unwrap()
    }

    #[test]
    fn neumann_interval() {
        let g = interval();
        let s = fem_spectrum(&g, &TotalVertexSpace::standard(&g), 3, FemOptions::default()).unwrap();
        let v = s.values();
        assert!(v[0].abs() < 1e-9);
        assert!((v[1] / (PI * PI) - 1.0).abs() < 1e-3);
        assert!((v[2] / (4.0 * PI * PI) - 1.0).abs() < 1e-3);
        // the estimate tracks the true error
        let err = v[2] - 4.0 * PI * PI;
        assert!((s.eigenvalues[2].error - err).abs() < 0.05 * err);
    }

    #[test]
    fn dirichlet_interval() {
        let g = interval();
        let t = TotalVertexSpace::uniform(&g, SpaceKind::Minimal).unwrap();
        let s = fem_spectrum(&g, &t, 1, FemOptions::default()).unwrap();
        assert!((s.eigenvalues[0].value / (PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn too_many_eigenvalues() {
        let g = interval();
        let t = TotalVertexSpace::standard(&g);
        let opts = FemOptions { n_per_unit: 2, estimate_error: false };
        assert!(fem_spectrum(&g, &t, 3, opts).is_ok());
        assert!(fem_spectrum(&g, &t, 4, opts).is_err());
    }

    #[test]
    fn triangle_clusters() {
        let g = WeightedGraph::from_edge_list(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v2", "v3", 1.0), ("v3", "v1", 1.0)],
        )
        .unwrap();
        let s = fem_spectrum(&g, &TotalVertexSpace::standard(&g), 5, FemOptions::default()).unwrap();
        let c = fem_clusters(&s, 5.0);
        assert_eq!(c.eigenvalues.iter().map(|e| e.multiplicity).collect::<Vec<_>>(), vec![1, 2, 2]);
        assert!((c.eigenvalues[1].value / 4.386490845 - 1.0).abs() < 1e-3);
    }
}
