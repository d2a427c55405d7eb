//! Discrete exterior derivative, generalized Laplacians and the discrete
//! index.

use crate::error::{Error, Result};
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{
    hermitian_deviation, hermitian_eigenvalues, max_abs, numerical_rank, operator_norm,
    singular_values, CMatrix, LinearMap, ONE,
};
use crate::space::TotalVertexSpace;
use crate::spectrum::{cluster, Method, SpectrumResult};

fn space_labels(g: &WeightedGraph, total: &TotalVertexSpace) -> Vec<String> {
    let mut out = Vec::with_capacity(total.dim());
    for v in 0..g.vertex_count() {
        for k in 0..total.space(v).dim() {
            out.push(format!("{}:{}", g.vertex_name(v), k + 1));
        }
    }
    out
}

fn edge_labels(g: &WeightedGraph) -> Vec<String> {
    g.edges().iter().map(|e| e.name.clone()).collect()
}

/// `d_𝒢 : 𝒢 → ℓ₂(E)` in orthonormal coordinates.
pub fn exterior_derivative(g: &WeightedGraph, total: &TotalVertexSpace) -> LinearMap {
    let b = total.global_basis(g);
    let mut d = CMatrix::zeros(g.edge_count(), total.dim());
    for (i, e) in g.edges().iter().enumerate() {
        let plus = g.global_slot(Slot { edge: i, end: End::Plus });
        let minus = g.global_slot(Slot { edge: i, end: End::Minus });
        let w = 1.0 / e.length.sqrt();
        for j in 0..total.dim() {
            d[(i, j)] = (b[(plus, j)] - b[(minus, j)]) * w;
        }
    }
    LinearMap::new(d, edge_labels(g), space_labels(g, total))
}

/// `Δ⁰ = d*d` on `𝒢` for `form_degree = 0`, `Δ¹ = dd*` on `ℓ₂(E)` for 1.
pub fn laplacian(g: &WeightedGraph, total: &TotalVertexSpace, form_degree: u8) -> Result<LinearMap> {
    let d = exterior_derivative(g, total);
    match form_degree {
        0 => Ok(d.adjoint().compose(&d)),
        1 => Ok(d.compose(&d.adjoint())),
        k => Err(Error::InvalidArgument(format!("form degree {k} is not 0 or 1"))),
    }
}

pub fn default_cluster_tolerance(op: &CMatrix) -> f64 {
    1e-8 * (1.0 + operator_norm(op))
}

/// Eigenvalues of a Hermitian operator clustered into multiplicities.
pub fn spectrum_discrete(op: &LinearMap, delta: Option<f64>) -> Result<SpectrumResult> {
    let dev = hermitian_deviation(&op.matrix);
    if dev > 1e-10 {
        return Err(Error::NonHermitian(dev));
    }
    let delta = delta.unwrap_or_else(|| default_cluster_tolerance(&op.matrix));
    Ok(cluster(&hermitian_eigenvalues(&op.matrix), delta, Method::Discrete))
}

/// The principal part `M_𝒢` and its generalized adjacency blocks.
#[derive(Debug, Clone)]
pub struct PrincipalPart {
    pub m: LinearMap,
    /// `A_𝒢(v, w) = B_v* A^max(v, w) B_w` for adjacent `v ≠ w`.
    pub blocks: Vec<Vec<Option<CMatrix>>>,
}

impl PrincipalPart {
    pub fn block(&self, v: usize, w: usize) -> Option<&CMatrix> {
        self.blocks[v][w].as_ref()
    }
}

/// Checks the standing assumptions of `principal_part`.
pub fn check_principal_preconditions(g: &WeightedGraph) -> Result<()> {
    if g.edges().iter().any(|e| e.length != 1.0) {
        return Err(Error::precondition("principal part needs all edge lengths equal to 1"));
    }
    if g.has_self_loops() {
        return Err(Error::precondition("principal part needs a graph without self-loops"));
    }
    if g.has_double_edges() {
        return Err(Error::precondition("principal part needs a graph without double edges"));
    }
    Ok(())
}

pub fn principal_part(g: &WeightedGraph, total: &TotalVertexSpace) -> Result<PrincipalPart> {
    check_principal_preconditions(g)?;
    let n = g.vertex_count();
    let mut blocks: Vec<Vec<Option<CMatrix>>> = vec![vec![None; n]; n];
    let mut m = CMatrix::zeros(total.dim(), total.dim());
    for (i, e) in g.edges().iter().enumerate() {
        for (v, w, ev, ew) in [(e.tail, e.head, End::Minus, End::Plus), (e.head, e.tail, End::Plus, End::Minus)] {
            let (_, pv) = g.locate_slot(Slot { edge: i, end: ev });
            let (_, pw) = g.locate_slot(Slot { edge: i, end: ew });
            let mut amax = CMatrix::zeros(g.degree(v), g.degree(w));
            amax[(pv, pw)] = ONE;
            let bv = total.space(v).basis();
            let bw = total.space(w).basis();
            let a = bv.adjoint() * amax * bw;
            m.view_mut(
                (total.offset(v), total.offset(w)),
                (a.nrows(), a.ncols()),
            )
            .copy_from(&a);
            blocks[v][w] = Some(a);
        }
    }
    let labels = space_labels(g, total);
    let m = LinearMap::new(m, labels.clone(), labels);
    let delta = laplacian(g, total, 0)?;
    let k = total.dim();
    let defect = max_abs(&(CMatrix::identity(k, k) - &m.matrix - &delta.matrix));
    if defect > 1e-10 {
        return Err(Error::precondition(format!(
            "principal part identity failed with defect {defect:e}"
        )));
    }
    Ok(PrincipalPart { m, blocks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexReport {
    pub h0: usize,
    pub h1: usize,
    pub index: i64,
}

/// `dim ker d`, `dim ker d*` and their difference.
pub fn index_discrete(g: &WeightedGraph, total: &TotalVertexSpace) -> Result<IndexReport> {
    let d = exterior_derivative(g, total);
    let rank_d = numerical_rank(&singular_values(&d.matrix))?;
    let rank_dstar = numerical_rank(&singular_values(&d.matrix.adjoint()))?;
    let h0 = total.dim() - rank_d;
    let h1 = g.edge_count() - rank_dstar;
    let index = h0 as i64 - h1 as i64;
    let expected = total.dim() as i64 - g.edge_count() as i64;
    if index != expected {
        return Err(Error::RankAmbiguous {
            value: (index - expected) as f64,
            threshold: 0.0,
        });
    }
    Ok(IndexReport { h0, h1, index })
}

/// The classical weighted Laplacian on `ℓ₂(V)` with `‖F‖² = Σ deg v |F(v)|²`,
/// written in orthonormal coordinates `√deg v · F(v)`.
pub fn classical_standard_laplacian(g: &WeightedGraph) -> CMatrix {
    let n = g.vertex_count();
    let mut l = CMatrix::zeros(n, n);
    for v in 0..n {
        let dv = g.degree(v) as f64;
        for s in g.slots(v) {
            let e = g.edge(s.edge);
            let w = e.endpoint(s.end.opposite());
            l[(v, v)] += ONE * (1.0 / (dv * e.length));
            l[(v, w)] -= ONE * (1.0 / (dv * e.length));
        }
    }
    let sq: Vec<f64> = (0..n).map(|v| (g.degree(v) as f64).sqrt()).collect();
    CMatrix::from_fn(n, n, |i, j| l[(i, j)] * (sq[i] / sq[j]))
}
