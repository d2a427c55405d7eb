//! Vertex spaces: per-vertex subspaces of the slot coordinates, their
//! projections, scattering matrices and irreducible decomposition.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{Edge, End, Slot, WeightedGraph};
use crate::linalg::{self, c, max_abs, orthonormalize, real, CMatrix, CVector, C64, ONE};

/// Coupling threshold on `|P_ij|` used to detect block structure.
pub const BLOCK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Standard,
    Minimal,
    Maximal,
    DualStandard,
    /// Span of `(1, θ^p, θ^{2p}, ...)` with `θ = e^{2πi/deg}`.
    Magnetic(usize),
    /// Anything else, given by an explicit basis.
    Custom,
}

impl SpaceKind {
    pub fn name(&self) -> String {
        match self {
            SpaceKind::Standard => "standard".into(),
            SpaceKind::Minimal => "minimal".into(),
            SpaceKind::Maximal => "maximal".into(),
            SpaceKind::DualStandard => "dualstandard".into(),
            SpaceKind::Magnetic(p) => format!("magnetic {p}"),
            SpaceKind::Custom => "basis".into(),
        }
    }
}

/// Subspace `𝒢_v` of `ℂ^{deg v}` held as an orthonormal basis; the columns
/// of `basis` span the space, rows follow the slot order of the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSpace {
    pub vertex: usize,
    pub kind: SpaceKind,
    basis: CMatrix,
    projection: CMatrix,
}

impl VertexSpace {
    /// Wraps an explicit list of vectors, orthonormalizing them. Fails when
    /// a vector is (numerically) dependent on the previous ones. Vectors
    /// that are orthonormal to rounding are kept as they are.
    pub fn from_vectors(vertex: usize, degree: usize, vectors: &[CVector]) -> Result<Self> {
        for v in vectors {
            if v.len() != degree {
                return Err(Error::InvalidArgument(format!(
                    "basis vector has {} entries, vertex degree is {degree}",
                    v.len()
                )));
            }
        }
        let given = CMatrix::from_fn(degree, vectors.len(), |i, j| vectors[j][i]);
        let k = vectors.len();
        if max_abs(&(given.adjoint() * &given - CMatrix::identity(k, k))) < 4.0 * f64::EPSILON * degree as f64 {
            return Ok(Self::from_orthonormal(vertex, SpaceKind::Custom, given));
        }
        let basis = orthonormalize(vectors, degree);
        if basis.ncols() != vectors.len() {
            return Err(Error::InvalidArgument(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(Self::from_orthonormal(vertex, SpaceKind::Custom, basis))
    }

    /// Assumes the columns of `basis` are already orthonormal.
    pub fn from_orthonormal(vertex: usize, kind: SpaceKind, basis: CMatrix) -> Self {
        let projection = &basis * basis.adjoint();
        VertexSpace {
            vertex,
            kind,
            basis,
            projection,
        }
    }

    /// Range of an orthogonal projection, keeping `p` itself as the cached
    /// projection.
    fn from_projection(vertex: usize, kind: SpaceKind, projection: CMatrix) -> Self {
        let basis = linalg::projection_range(&projection);
        VertexSpace {
            vertex,
            kind,
            basis,
            projection,
        }
    }

    pub fn degree(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projection(&self) -> &CMatrix {
        &self.projection
    }

    /// `S_v = 2P_v - 1`.
    pub fn scattering(&self) -> CMatrix {
        let d = self.degree();
        self.projection.map(|z| z * 2.0) - CMatrix::identity(d, d)
    }

    /// Whether the two spaces coincide as subspaces.
    pub fn same_subspace(&self, other: &VertexSpace, tol: f64) -> bool {
        self.degree() == other.degree() && max_abs(&(&self.projection - &other.projection)) < tol
    }

    /// Connected components of the slot coupling graph `i ~ j iff |P_ij| > 1e-10`,
    /// listed in order of their smallest slot position.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut label = vec![usize::MAX; d];
        let mut out = Vec::new();
        for start in 0..d {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![start];
            label[start] = id;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..d {
                    if label[j] == usize::MAX && self.projection[(i, j)].norm() > BLOCK_THRESHOLD {
                        label[j] = id;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.blocks().len() <= 1
    }
}

/// Builds one of the named spaces at vertex `v`.
pub fn make_space(kind: SpaceKind, g: &WeightedGraph, v: usize) -> Result<VertexSpace> {
    if v >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    named_space(kind, v, g.degree(v))
}

pub(crate) fn named_space(kind: SpaceKind, v: usize, d: usize) -> Result<VertexSpace> {
    let df = d as f64;
    let space = match kind {
        SpaceKind::Standard => {
            let basis = CMatrix::from_element(d, 1, real(1.0 / df.sqrt()));
            let projection = CMatrix::from_element(d, d, real(1.0 / df));
            VertexSpace {
                vertex: v,
                kind,
                basis,
                projection,
            }
        }
        SpaceKind::Minimal => VertexSpace {
            vertex: v,
            kind,
            basis: CMatrix::zeros(d, 0),
            projection: CMatrix::zeros(d, d),
        },
        SpaceKind::Maximal => VertexSpace {
            vertex: v,
            kind,
            basis: CMatrix::identity(d, d),
            projection: CMatrix::identity(d, d),
        },
        SpaceKind::DualStandard => {
            let projection = CMatrix::from_fn(d, d, |i, j| {
                real(if i == j { 1.0 } else { 0.0 } - 1.0 / df)
            });
            let vectors: Vec<CVector> = (0..d).map(|j| projection.column(j).into_owned()).collect();
            let basis = orthonormalize(&vectors, d);
            VertexSpace {
                vertex: v,
                kind,
                basis,
                projection,
            }
        }
        SpaceKind::Magnetic(p) => {
            if p >= d {
                return Err(Error::InvalidArgument(format!(
                    "magnetic parameter {p} out of range 0..{d}"
                )));
            }
            let phase = |k: usize| {
                let m = (k * p) % d;
                cis_rational(m, d)
            };
            let basis = CMatrix::from_fn(d, 1, |j, _| phase(j) / real(df.sqrt()));
            let projection =
                CMatrix::from_fn(d, d, |i, j| phase((i + d * d - j) % (d * d)) / real(df));
            VertexSpace {
                vertex: v,
                kind,
                basis,
                projection,
            }
        }
        SpaceKind::Custom => {
            return Err(Error::InvalidArgument(
                "custom spaces need an explicit basis".into(),
            ))
        }
    };
    Ok(space)
}

/// `e^{2πi m/d}` with exact values at the quarter turns.
fn cis_rational(m: usize, d: usize) -> C64 {
    let m = m % d;
    if m == 0 {
        return ONE;
    }
    if 2 * m == d {
        return real(-1.0);
    }
    if 4 * m == d {
        return c(0.0, 1.0);
    }
    if 4 * m == 3 * d {
        return c(0.0, -1.0);
    }
    let a = 2.0 * PI * m as f64 / d as f64;
    c(a.cos(), a.sin())
}

/// Orthogonal complement `𝒢_v^⊥` inside the maximal space.
pub fn dual_space(space: &VertexSpace) -> VertexSpace {
    let d = space.degree();
    let kind = match space.kind {
        SpaceKind::Standard => SpaceKind::DualStandard,
        SpaceKind::DualStandard => SpaceKind::Standard,
        SpaceKind::Minimal => SpaceKind::Maximal,
        SpaceKind::Maximal => SpaceKind::Minimal,
        _ => SpaceKind::Custom,
    };
    if kind != SpaceKind::Custom {
        return named_space(kind, space.vertex, d).expect("named kinds are always constructible");
    }
    let projection = CMatrix::identity(d, d) - &space.projection;
    VertexSpace::from_projection(space.vertex, kind, projection)
}

/// Sign of each slot at `v`: `-1` on tails, `+1` on heads.
pub fn orientation_signs(g: &WeightedGraph, v: usize) -> Vec<f64> {
    g.slots(v).iter().map(|s| s.end.sign()).collect()
}

/// `σ 𝒢_v` where `σ` flips the sign of the minus slots.
pub fn oriented_space(space: &VertexSpace, g: &WeightedGraph) -> VertexSpace {
    let sigma = orientation_signs(g, space.vertex);
    let kind = match space.kind {
        SpaceKind::Minimal | SpaceKind::Maximal => space.kind,
        _ => SpaceKind::Custom,
    };
    let basis = CMatrix::from_fn(space.degree(), space.dim(), |i, j| {
        space.basis[(i, j)] * sigma[i]
    });
    let projection = CMatrix::from_fn(space.degree(), space.degree(), |i, j| {
        space.projection[(i, j)] * (sigma[i] * sigma[j])
    });
    VertexSpace {
        vertex: space.vertex,
        kind,
        basis,
        projection,
    }
}

/// Per-vertex scattering matrices `S_v = 2P_v - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    pub blocks: Vec<CMatrix>,
}

impl ScatteringMatrix {
    /// Entry `S_{e,e'}(v)` addressed by slot positions at `v`.
    pub fn entry(&self, v: usize, i: usize, j: usize) -> C64 {
        self.blocks[v][(i, j)]
    }

    /// Largest absolute row sum over all blocks.
    pub fn max_row_sum(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }
}

/// The total vertex space `𝒢 = ⊕_v 𝒢_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalVertexSpace {
    spaces: Vec<VertexSpace>,
    offsets: Vec<usize>,
}

impl TotalVertexSpace {
    pub fn new(g: &WeightedGraph, spaces: Vec<VertexSpace>) -> Result<Self> {
        if spaces.len() != g.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "{} vertex spaces for {} vertices",
                spaces.len(),
                g.vertex_count()
            )));
        }
        for (v, s) in spaces.iter().enumerate() {
            if s.vertex != v || s.degree() != g.degree(v) {
                return Err(Error::InvalidArgument(format!(
                    "vertex space at `{}` does not match its degree",
                    g.vertex_name(v)
                )));
            }
        }
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut acc = 0;
        for s in &spaces {
            offsets.push(acc);
            acc += s.dim();
        }
        Ok(TotalVertexSpace { spaces, offsets })
    }

    /// The same named kind at every vertex.
    pub fn uniform(g: &WeightedGraph, kind: SpaceKind) -> Result<Self> {
        let spaces = (0..g.vertex_count())
            .map(|v| make_space(kind, g, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, spaces)
    }

    pub fn standard(g: &WeightedGraph) -> Self {
        Self::uniform(g, SpaceKind::Standard).expect("standard spaces exist at every vertex")
    }

    pub fn spaces(&self) -> &[VertexSpace] {
        &self.spaces
    }

    pub fn space(&self, v: usize) -> &VertexSpace {
        &self.spaces[v]
    }

    pub fn dim(&self) -> usize {
        self.spaces.iter().map(VertexSpace::dim).sum()
    }

    /// Offset of the coordinates of `𝒢_v` inside `𝒢`.
    pub fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Whether every vertex carries the standard space.
    pub fn is_standard(&self) -> bool {
        self.spaces
            .iter()
            .all(|s| s.kind == SpaceKind::Standard || (s.degree() == 1 && s.dim() == 1))
    }

    /// Block-diagonal basis `B : 𝒢 → 𝒢^max` (rows: global slots).
    pub fn global_basis(&self, g: &WeightedGraph) -> CMatrix {
        let mut b = CMatrix::zeros(g.slot_count(), self.dim());
        for (v, s) in self.spaces.iter().enumerate() {
            let r0 = g.slot_offset(v);
            let c0 = self.offsets[v];
            b.view_mut((r0, c0), (s.degree(), s.dim())).copy_from(&s.basis);
        }
        b
    }

    /// Block-diagonal projection `P` on `𝒢^max`.
    pub fn global_projection(&self, g: &WeightedGraph) -> CMatrix {
        let n = g.slot_count();
        let mut p = CMatrix::zeros(n, n);
        for (v, s) in self.spaces.iter().enumerate() {
            let r0 = g.slot_offset(v);
            p.view_mut((r0, r0), (s.degree(), s.degree())).copy_from(&s.projection);
        }
        p
    }

    pub fn scattering(&self) -> ScatteringMatrix {
        ScatteringMatrix {
            blocks: self.spaces.iter().map(VertexSpace::scattering).collect(),
        }
    }

    pub fn dual(&self) -> TotalVertexSpace {
        TotalVertexSpace {
            spaces: self.spaces.iter().map(dual_space).collect(),
            offsets: Vec::new(),
        }
        .reindexed()
    }

    pub fn oriented(&self, g: &WeightedGraph) -> TotalVertexSpace {
        TotalVertexSpace {
            spaces: self.spaces.iter().map(|s| oriented_space(s, g)).collect(),
            offsets: Vec::new(),
        }
        .reindexed()
    }

    fn reindexed(mut self) -> Self {
        let mut acc = 0;
        self.offsets = self
            .spaces
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.dim();
                o
            })
            .collect();
        self
    }

    /// Largest violation of `P² = P = P*` and `S² = 1` over all vertices.
    pub fn projection_defect(&self) -> f64 {
        self.spaces
            .iter()
            .map(|s| {
                let p = &s.projection;
                let d = s.degree();
                let sm = s.scattering();
                max_abs(&(p * p - p))
                    .max(linalg::hermitian_deviation(p))
                    .max(max_abs(&(&sm * &sm - CMatrix::identity(d, d))))
            })
            .fold(0.0, f64::max)
    }
}

/// Output of `irreducible_decomposition`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub graph: WeightedGraph,
    pub space: TotalVertexSpace,
    /// `π` on vertices: new vertex index to original vertex index.
    pub vertex_map: Vec<usize>,
}

/// Splits every vertex along the blocks of its projection.
pub fn irreducible_decomposition(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
) -> Result<Decomposition> {
    let mut names = Vec::new();
    let mut vertex_map = Vec::new();
    // new vertex for each original slot
    let mut slot_vertex: Vec<[usize; 2]> = vec![[usize::MAX; 2]; g.edge_count()];
    let mut pieces: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in 0..g.vertex_count() {
        let space = total.space(v);
        let blocks = space.blocks();
        let split = blocks.len() > 1;
        for (k, block) in blocks.iter().enumerate() {
            let id = names.len();
            names.push(if split {
                format!("{}#{}", g.vertex_name(v), k + 1)
            } else {
                g.vertex_name(v).to_string()
            });
            vertex_map.push(v);
            for &pos in block {
                let s = g.slots(v)[pos];
                slot_vertex[s.edge][end_index(s.end)] = id;
            }
            pieces.push((v, block.clone()));
        }
    }
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| Edge {
            name: e.name.clone(),
            tail: slot_vertex[i][0],
            head: slot_vertex[i][1],
            length: e.length,
        })
        .collect();
    let graph = WeightedGraph::new(names, edges)?;
    let mut spaces = Vec::with_capacity(pieces.len());
    for (id, (v, block)) in pieces.iter().enumerate() {
        let space = total.space(*v);
        // the new slot order is again ascending edge index, so it matches
        // the order of `block` positions
        let new_slots: Vec<Slot> = graph.slots(id).to_vec();
        debug_assert_eq!(new_slots.len(), block.len());
        let p = CMatrix::from_fn(block.len(), block.len(), |i, j| {
            space.projection()[(block[i], block[j])]
        });
        let kind = match space.kind {
            SpaceKind::Maximal | SpaceKind::Minimal if block.len() < space.degree() => space.kind,
            k if block.len() == space.degree() => k,
            _ => SpaceKind::Custom,
        };
        let s = if kind == SpaceKind::Custom {
            let rows: Vec<usize> = block.clone();
            let restricted = CMatrix::from_fn(block.len(), space.dim(), |i, j| {
                space.basis()[(rows[i], j)]
            });
            let vectors: Vec<CVector> = (0..restricted.ncols())
                .map(|j| restricted.column(j).into_owned())
                .collect();
            let basis = orthonormalize(&vectors, block.len());
            let mut vs = VertexSpace::from_orthonormal(id, kind, basis);
            vs.projection = p;
            vs
        } else if block.len() == space.degree() {
            VertexSpace {
                vertex: id,
                kind,
                basis: space.basis().clone(),
                projection: space.projection().clone(),
            }
        } else {
            named_space(kind, id, block.len())?
        };
        spaces.push(s);
    }
    let space = TotalVertexSpace::new(&graph, spaces)?;
    Ok(Decomposition {
        graph,
        space,
        vertex_map,
    })
}

fn end_index(end: End) -> usize {
    match end {
        End::Minus => 0,
        End::Plus => 1,
    }
}

/// Connectivity of the irreducible graph.
pub fn is_connected(g: &WeightedGraph, total: &TotalVertexSpace) -> Result<bool> {
    let d = irreducible_decomposition(g, total)?;
    Ok(d.graph.component_labels().0 == 1)
}

/// Smallest permutation-invariant subspace containing `space`: the span of
/// all coordinate permutations of its basis vectors.
pub fn permutation_hull(space: &VertexSpace) -> VertexSpace {
    let d = space.degree();
    let mut perm: Vec<usize> = (0..d).collect();
    let mut vectors = Vec::new();
    loop {
        for j in 0..space.dim() {
            vectors.push(CVector::from_fn(d, |i, _| space.basis[(perm[i], j)]));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    VertexSpace::from_orthonormal(space.vertex, SpaceKind::Custom, orthonormalize(&vectors, d))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;

    fn star(d: usize) -> WeightedGraph {
        let mut names = vec!["c".to_string()];
        let mut edges = Vec::new();
        for k in 0..d {
            names.push(format!("l{k}"));
            edges.push(Edge {
                name: format!("e{k}"),
                tail: 0,
                head: k + 1,
                length: 1.0,
            });
        }
        WeightedGraph::new(names, edges).unwrap()
    }

    #[test]
    fn standard_projection_is_flat() {
        let s = make_space(SpaceKind::Standard, &star(4), 0).unwrap();
        assert!(s.projection().iter().all(|z| (*z - real(0.25)).norm() < 1e-15));
    }

    #[test]
    fn magnetic_one_at_degree_four() {
        let s = make_space(SpaceKind::Magnetic(1), &star(4), 0).unwrap();
        let expect = [ONE, c(0.0, 1.0), real(-1.0), c(0.0, -1.0)];
        for (j, e) in expect.iter().enumerate() {
            assert!((s.basis()[(j, 0)] - e * 0.5).norm() < 1e-15);
        }
        assert!(matches!(
            make_space(SpaceKind::Magnetic(4), &star(4), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn minimal_projection_vanishes() {
        let s = make_space(SpaceKind::Minimal, &star(3), 0).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(max_abs(s.projection()), 0.0);
        assert!(max_abs(&(s.scattering() + CMatrix::identity(3, 3))) == 0.0);
    }

    #[test]
    fn standard_scattering_amplitudes() {
        let s = make_space(SpaceKind::Standard, &star(3), 0).unwrap().scattering();
        assert!((s[(0, 1)].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((s[(0, 0)].re + 1.0 / 3.0).abs() < 1e-15);
        let s = make_space(SpaceKind::Standard, &star(2), 0).unwrap().scattering();
        assert_eq!(s[(0, 0)], ZERO);
        assert_eq!(s[(0, 1)], ONE);
    }

    #[test]
    fn dual_of_standard_degree_two() {
        let s = make_space(SpaceKind::Standard, &star(2), 0).unwrap();
        let d = dual_space(&s);
        assert_eq!(d.dim(), 1);
        let b = d.basis();
        assert!((b[(0, 0)] + b[(1, 0)]).norm() < 1e-15);
        assert!((b[(0, 0)].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(dual_space(&d).same_subspace(&s, 1e-12));
        let m = make_space(SpaceKind::Maximal, &star(2), 0).unwrap();
        assert_eq!(dual_space(&m).dim(), 0);
    }

    #[test]
    fn oriented_standard_on_a_path_vertex() {
        let g = WeightedGraph::from_edge_list(
            &["a", "b", "c"],
            &[("a", "b", 1.0), ("b", "c", 1.0)],
        )
        .unwrap();
        let s = make_space(SpaceKind::Standard, &g, 1).unwrap();
        let o = oriented_space(&s, &g);
        assert!(o.same_subspace(&dual_space(&s), 1e-12));
        assert!(oriented_space(&o, &g).same_subspace(&s, 1e-12));
        let m = make_space(SpaceKind::Maximal, &g, 1).unwrap();
        assert!(oriented_space(&m, &g).same_subspace(&m, 1e-15));
    }

    #[test]
    fn reducible_degree_four_splits() {
        let g = star(4);
        let v1 = CVector::from_vec(vec![ONE, ONE, ONE, ONE]);
        let v2 = CVector::from_vec(vec![ONE, real(-1.0), ONE, real(-1.0)]);
        let mut spaces = vec![VertexSpace::from_vectors(0, 4, &[v1, v2]).unwrap()];
        for v in 1..5 {
            spaces.push(make_space(SpaceKind::Standard, &g, v).unwrap());
        }
        let total = TotalVertexSpace::new(&g, spaces).unwrap();
        let d = irreducible_decomposition(&g, &total).unwrap();
        assert_eq!(d.graph.vertex_count(), 6);
        assert_eq!(d.graph.vertex_name(0), "c#1");
        assert_eq!(d.graph.vertex_name(1), "c#2");
        assert_eq!(d.graph.slots(0).iter().map(|s| s.edge).collect::<Vec<_>>(), vec![0, 2]);
        for v in 0..2 {
            let std2 = named_space(SpaceKind::Standard, v, 2).unwrap();
            assert!(d.space.space(v).same_subspace(&std2, 1e-12));
        }
        let again = irreducible_decomposition(&d.graph, &d.space).unwrap();
        assert_eq!(again.graph.vertex_count(), 6);
        assert_eq!(d.space.dim(), total.dim());
    }

    #[test]
    fn magnetic_degree_four_is_irreducible() {
        let s = make_space(SpaceKind::Magnetic(1), &star(4), 0).unwrap();
        assert!(s.is_irreducible());
    }

    #[test]
    fn maximal_decouples_edges() {
        let g = WeightedGraph::from_edge_list(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v2", "v3", 1.0), ("v3", "v1", 1.0)],
        )
        .unwrap();
        let max = TotalVertexSpace::uniform(&g, SpaceKind::Maximal).unwrap();
        let d = irreducible_decomposition(&g, &max).unwrap();
        assert_eq!(d.graph.vertex_count(), 6);
        assert_eq!(d.graph.component_labels().0, 3);
        assert!(!is_connected(&g, &max).unwrap());
        assert!(is_connected(&g, &TotalVertexSpace::standard(&g)).unwrap());
    }

    #[test]
    fn single_edge_minimal_is_one_piece() {
        let g = WeightedGraph::from_edge_list(&["a", "b"], &[("a", "b", 1.0)]).unwrap();
        let min = TotalVertexSpace::uniform(&g, SpaceKind::Minimal).unwrap();
        let d = irreducible_decomposition(&g, &min).unwrap();
        assert_eq!(d.graph.component_labels().0, 1);
        assert!(is_connected(&g, &min).unwrap());
    }

    #[test]
    fn hull_of_a_line_is_standard_or_everything() {
        let flat = VertexSpace::from_vectors(0, 3, &[CVector::from_element(3, ONE)]).unwrap();
        assert_eq!(permutation_hull(&flat).dim(), 1);
        let e1 = CVector::from_vec(vec![ONE, ZERO, ZERO]);
        let line = VertexSpace::from_vectors(0, 3, &[e1]).unwrap();
        assert_eq!(permutation_hull(&line).dim(), 3);
    }
}
