//! Isoperimetric constants of metric and discrete graphs and the eigenvalue
//! bounds they control.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::discrete::{check_principal_preconditions, laplacian, spectrum_discrete};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::{bond_secular_spectrum, decoupled_dirichlet, BondOptions};
use crate::space::TotalVertexSpace;
use crate::trace::MetricPoint;

pub const EXHAUSTIVE_VERTEX_CAP: usize = 24;
pub const METRIC_VERTEX_CAP: usize = 20;

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite edge length")
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn ensure_connected(g: &WeightedGraph) -> Result<()> {
    if g.component_labels().0 != 1 {
        return Err(Error::precondition("Cheeger constants need a connected graph"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCheeger {
    pub h: BigRational,
    pub value: f64,
    /// Vertices of an optimal set `W`.
    pub witness: Vec<usize>,
    pub exhaustive: bool,
}

/// `min |E(W, ∁W)| / min(vol W, vol ∁W)` with `vol W = Σ_{v∈W} deg v`.
///
/// The exhaustive search visits every subset; otherwise the sets swept out
/// by the second eigenvector of the normalised Laplacian are tried, which
/// gives an upper bound.
pub fn cheeger_discrete(g: &WeightedGraph, exhaustive: bool) -> Result<DiscreteCheeger> {
    if g.edges().iter().any(|e| e.length != 1.0) {
        return Err(Error::precondition("discrete Cheeger constant needs all edge lengths equal to 1"));
    }
    if g.has_self_loops() {
        return Err(Error::precondition("discrete Cheeger constant needs a graph without self-loops"));
    }
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::precondition("discrete Cheeger constant needs at least two vertices"));
    }
    let deg: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let total_vol: u64 = deg.iter().sum();
    let evaluate = |mask: &dyn Fn(usize) -> bool| -> (u64, u64) {
        let cut = g.edges().iter().filter(|e| mask(e.tail) != mask(e.head)).count() as u64;
        let vol: u64 = (0..n).filter(|&v| mask(v)).map(|v| deg[v]).sum();
        (cut, vol.min(total_vol - vol))
    };
    let better = |cand: (u64, u64), best: &Option<(u64, u64)>| match best {
        None => true,
        Some((c, v)) => (cand.0 as u128) * (*v as u128) < (*c as u128) * (cand.1 as u128),
    };

    let mut best: Option<(u64, u64)> = None;
    let mut witness = Vec::new();
    if exhaustive {
        if n > EXHAUSTIVE_VERTEX_CAP {
            return Err(Error::SizeCap(format!(
                "exhaustive search is limited to {EXHAUSTIVE_VERTEX_CAP} vertices, graph has {n}"
            )));
        }
        // the last vertex stays outside W; complements give the same ratio
        for bits in 1u64..(1u64 << (n - 1)) {
            let (cut, vol) = evaluate(&|v| v < 63 && bits >> v & 1 == 1);
            if vol > 0 && better((cut, vol), &best) {
                best = Some((cut, vol));
                witness = (0..n).filter(|&v| bits >> v & 1 == 1).collect();
            }
        }
    } else {
        let total = TotalVertexSpace::standard(g);
        let op = laplacian(g, &total, 0)?;
        let (_, vecs) = crate::linalg::hermitian_eigen(&op.matrix);
        // coordinates are √deg · F, the sweep runs over F
        let f: Vec<f64> = (0..n).map(|v| vecs[(v, 1)].re / (deg[v] as f64).sqrt()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
        for k in 1..n {
            let inside = &order[..k];
            let (cut, vol) = evaluate(&|v| inside.contains(&v));
            if vol > 0 && better((cut, vol), &best) {
                best = Some((cut, vol));
                let mut w = inside.to_vec();
                w.sort();
                witness = w;
            }
        }
    }
    let (cut, vol) = best.ok_or_else(|| Error::precondition("no proper subset has positive volume"))?;
    let h = BigRational::new(BigInt::from(cut), BigInt::from(vol));
    Ok(DiscreteCheeger {
        value: to_f64(&h),
        h,
        witness,
        exhaustive,
    })
}

/// How the optimal set meets an edge of the cut configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeCut {
    /// Both ends labelled alike and no cut.
    Whole,
    /// One cut point between differently labelled ends.
    Cross,
    /// Two interior cut points on an edge with equal labels.
    Carved,
}

/// A labelling of the vertices together with carved edges; `Y` is the side
/// labelled `+`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutConfiguration {
    /// `true` for `+`.
    pub labels: Vec<bool>,
    pub carved: Vec<usize>,
    pub cuts: Vec<EdgeCut>,
    /// Length of `Y` on every edge at the optimal cut positions.
    pub lengths_in_y: Vec<BigRational>,
    pub boundary_points: usize,
    pub volume: BigRational,
    pub ratio: BigRational,
    /// The optimal volume is a supremum that the open set only approaches.
    pub limiting: bool,
}

impl CutConfiguration {
    /// Cut positions measured from the tail of each cut edge.
    pub fn cut_points(&self, g: &WeightedGraph) -> Vec<(usize, Vec<f64>)> {
        let mut out = Vec::new();
        for (i, cut) in self.cuts.iter().enumerate() {
            let e = g.edge(i);
            let l = e.length;
            let y = to_f64(&self.lengths_in_y[i]);
            match cut {
                EdgeCut::Whole => {}
                EdgeCut::Cross => {
                    let x = if self.labels[e.tail] { y } else { l - y };
                    out.push((i, vec![x]));
                }
                EdgeCut::Carved => {
                    let gap = if self.labels[e.tail] { l - y } else { y };
                    let a = 0.5 * (l - gap);
                    out.push((i, vec![a, a + gap]));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricCheeger {
    pub h_ub: BigRational,
    pub value: f64,
    pub witness: CutConfiguration,
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Best ratio over open sets with at most two boundary points per edge,
/// searched over all labellings and all carve sets of at most `carve_depth`
/// edges; an upper bound for the Cheeger constant of the metric graph.
///
/// For a fixed configuration the volume of `Y` ranges over an interval
/// `(lo, hi)`, so `min(vol Y, vol ∁Y)` is maximised at `L/2` when that is
/// feasible and at the nearer end otherwise.
pub fn cheeger_metric_upper(g: &WeightedGraph, carve_depth: usize) -> Result<MetricCheeger> {
    ensure_connected(g)?;
    let n = g.vertex_count();
    if n > METRIC_VERTEX_CAP {
        return Err(Error::SizeCap(format!(
            "labelling search is limited to {METRIC_VERTEX_CAP} vertices, graph has {n}"
        )));
    }
    let lengths: Vec<BigRational> = g.edges().iter().map(|e| rational(e.length)).collect();
    let total: BigRational = lengths.iter().fold(BigRational::zero(), |a, b| a + b);
    let half = &total / BigRational::from_u8(2).unwrap();

    let mut best: Option<CutConfiguration> = None;
    for bits in 0u64..(1u64 << n) {
        let labels: Vec<bool> = (0..n).map(|v| bits >> v & 1 == 1).collect();
        let mono: Vec<usize> = (0..g.edge_count())
            .filter(|&i| labels[g.edge(i).tail] == labels[g.edge(i).head])
            .collect();
        for depth in 0..=carve_depth.min(mono.len()) {
            combinations(mono.len(), depth, &mut |pick| {
                let carved: Vec<usize> = pick.iter().map(|&j| mono[j]).collect();
                if let Some(c) = evaluate_configuration(g, &labels, &carved, &lengths, &total, &half) {
                    if is_better(&c, best.as_ref()) {
                        best = Some(c);
                    }
                }
            });
        }
    }
    let witness = best.ok_or_else(|| Error::precondition("no admissible cut configuration"))?;
    Ok(MetricCheeger {
        value: to_f64(&witness.ratio),
        h_ub: witness.ratio.clone(),
        witness,
    })
}

fn is_better(c: &CutConfiguration, best: Option<&CutConfiguration>) -> bool {
    let Some(b) = best else { return true };
    c.ratio
        .cmp(&b.ratio)
        .then(c.boundary_points.cmp(&b.boundary_points))
        .then(c.labels.cmp(&b.labels))
        .then(c.carved.cmp(&b.carved))
        .is_lt()
}

fn evaluate_configuration(
    g: &WeightedGraph,
    labels: &[bool],
    carved: &[usize],
    lengths: &[BigRational],
    total: &BigRational,
    half: &BigRational,
) -> Option<CutConfiguration> {
    let ne = g.edge_count();
    let mut cuts = vec![EdgeCut::Whole; ne];
    let mut lo = BigRational::zero();
    let mut free = BigRational::zero();
    let mut boundary = 0usize;
    for i in 0..ne {
        let e = g.edge(i);
        let (a, b) = (labels[e.tail], labels[e.head]);
        if a != b {
            cuts[i] = EdgeCut::Cross;
            boundary += 1;
            free += &lengths[i];
        } else if carved.contains(&i) {
            cuts[i] = EdgeCut::Carved;
            boundary += 2;
            free += &lengths[i];
        } else if a {
            lo += &lengths[i];
        }
    }
    if boundary == 0 || free.is_zero() {
        return None;
    }
    let hi = &lo + &free;
    let (volume, limiting) = if &lo < half && half < &hi {
        (half.clone(), false)
    } else if &hi <= half {
        (hi.clone(), true)
    } else {
        (lo.clone(), true)
    };
    let smaller = if &volume <= half { volume.clone() } else { total - &volume };
    if smaller <= BigRational::zero() {
        return None;
    }
    let ratio = BigRational::from_usize(boundary).unwrap() / smaller;

    // distribute the free volume over the cut edges in index order
    let mut need = &volume - &lo;
    let mut lengths_in_y = vec![BigRational::zero(); ne];
    for i in 0..ne {
        match cuts[i] {
            EdgeCut::Whole => {
                if labels[g.edge(i).tail] {
                    lengths_in_y[i] = lengths[i].clone();
                }
            }
            _ => {
                let take = if need < lengths[i] { need.clone() } else { lengths[i].clone() };
                need -= &take;
                lengths_in_y[i] = take;
            }
        }
    }
    Some(CutConfiguration {
        labels: labels.to_vec(),
        carved: carved.to_vec(),
        cuts,
        lengths_in_y,
        boundary_points: boundary,
        volume,
        ratio,
        limiting,
    })
}

/// An open subset of a metric graph: open intervals inside the edges plus a
/// set of vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSubset {
    /// Sorted disjoint intervals `(a, b) ⊆ [0, ℓ_e]` per edge.
    pub intervals: Vec<Vec<(f64, f64)>>,
    pub vertices: Vec<usize>,
}

impl MetricSubset {
    pub fn new(g: &WeightedGraph, intervals: &[(usize, f64, f64)], vertices: &[usize]) -> Result<Self> {
        let mut per_edge: Vec<Vec<(f64, f64)>> = vec![Vec::new(); g.edge_count()];
        for &(e, a, b) in intervals {
            if e >= g.edge_count() {
                return Err(Error::InvalidArgument(format!("edge index {e} out of range")));
            }
            let l = g.edge(e).length;
            if !(0.0 <= a && a < b && b <= l) {
                return Err(Error::InvalidArgument(format!(
                    "interval ({a}, {b}) is not inside (0, {l}) on edge {}",
                    g.edge(e).name
                )));
            }
            per_edge[e].push((a, b));
        }
        for list in &mut per_edge {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            if list.windows(2).any(|w| w[1].0 < w[0].1) {
                return Err(Error::InvalidArgument("intervals on an edge overlap".into()));
            }
        }
        let mut vertices = vertices.to_vec();
        vertices.sort();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::InvalidArgument(format!("vertex index {v} out of range")));
        }
        Ok(MetricSubset { intervals: per_edge, vertices })
    }

    /// The open ball `{y : d(x, y) < r}`.
    pub fn ball(g: &WeightedGraph, x: MetricPoint, r: f64) -> Result<Self> {
        let x = MetricPoint::new(g, x.edge, x.x)?;
        let d = g.vertex_distances();
        let e0 = g.edge(x.edge);
        let to_vertex =
            |v: usize| (x.x + d[e0.tail][v]).min(e0.length - x.x + d[e0.head][v]);
        let mut raw = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (dt, dh) = (to_vertex(e.tail), to_vertex(e.head));
            let mut parts: Vec<(f64, f64)> = Vec::new();
            if dt < r {
                parts.push((0.0, (r - dt).min(e.length)));
            }
            if dh < r {
                parts.push(((e.length - (r - dh)).max(0.0), e.length));
            }
            if i == x.edge {
                parts.push(((x.x - r).max(0.0), (x.x + r).min(e.length)));
            }
            parts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut merged: Vec<(f64, f64)> = Vec::new();
            for p in parts {
                match merged.last_mut() {
                    Some(m) if p.0 <= m.1 => m.1 = m.1.max(p.1),
                    _ => merged.push(p),
                }
            }
            raw.extend(merged.into_iter().filter(|p| p.1 > p.0).map(|p| (i, p.0, p.1)));
        }
        let vertices: Vec<usize> = (0..g.vertex_count()).filter(|&v| to_vertex(v) < r).collect();
        MetricSubset::new(g, &raw, &vertices)
    }

    pub fn volume(&self) -> f64 {
        self.intervals.iter().flatten().map(|(a, b)| b - a).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.intervals.iter().all(|l| l.is_empty())
    }

    fn touches(&self, g: &WeightedGraph, v: usize) -> Vec<bool> {
        g.slots(v)
            .iter()
            .map(|s| {
                let l = g.edge(s.edge).length;
                self.intervals[s.edge].iter().any(|&(a, b)| match s.end {
                    crate::graph::End::Minus => a == 0.0,
                    crate::graph::End::Plus => b == l,
                })
            })
            .collect()
    }

    /// Every vertex of the set has a neighbourhood inside the set.
    pub fn is_open(&self, g: &WeightedGraph) -> bool {
        self.vertices.iter().all(|&v| self.touches(g, v).iter().all(|&t| t))
    }

    /// Number of points in the topological boundary.
    pub fn boundary_count(&self, g: &WeightedGraph) -> usize {
        let mut count = 0;
        for (i, list) in self.intervals.iter().enumerate() {
            let l = g.edge(i).length;
            for &(a, b) in list {
                count += (a > 0.0) as usize + (b < l) as usize;
            }
        }
        for v in 0..g.vertex_count() {
            let t = self.touches(g, v);
            let member = self.vertices.binary_search(&v).is_ok();
            let in_closure = member || t.iter().any(|&x| x);
            let interior = member && t.iter().all(|&x| x);
            count += (in_closure && !interior) as usize;
        }
        count
    }

    /// Points from which the distance to the set is attained: interval
    /// endpoints and member vertices.
    fn anchors(&self, g: &WeightedGraph) -> Vec<MetricPoint> {
        let mut out = Vec::new();
        for (i, list) in self.intervals.iter().enumerate() {
            for &(a, b) in list {
                out.push(MetricPoint { edge: i, x: a });
                out.push(MetricPoint { edge: i, x: b });
            }
        }
        for &v in &self.vertices {
            let s = g.slots(v)[0];
            let e = g.edge(s.edge);
            let x = match s.end {
                crate::graph::End::Minus => 0.0,
                crate::graph::End::Plus => e.length,
            };
            out.push(MetricPoint { edge: s.edge, x });
        }
        out
    }

    fn overlaps(&self, g: &WeightedGraph, other: &MetricSubset) -> bool {
        if self.vertices.iter().any(|v| other.vertices.binary_search(v).is_ok()) {
            return true;
        }
        for (a, b) in self.intervals.iter().zip(&other.intervals) {
            for &(x0, x1) in a {
                if b.iter().any(|&(y0, y1)| x0 < y1 && y0 < x1) {
                    return true;
                }
            }
        }
        let inside = |set: &MetricSubset, v: usize| set.touches(g, v).iter().any(|&t| t);
        self.vertices.iter().any(|&v| inside(other, v) && other.touches(g, v).iter().all(|&t| t))
            || other.vertices.iter().any(|&v| inside(self, v) && self.touches(g, v).iter().all(|&t| t))
    }
}

/// Distance between two points along the metric graph.
pub fn point_distance(g: &WeightedGraph, d: &[Vec<f64>], p: MetricPoint, q: MetricPoint) -> f64 {
    let ep = g.edge(p.edge);
    let eq = g.edge(q.edge);
    let from_p = [(ep.tail, p.x), (ep.head, ep.length - p.x)];
    let from_q = [(eq.tail, q.x), (eq.head, eq.length - q.x)];
    let mut best = f64::INFINITY;
    if p.edge == q.edge {
        best = (p.x - q.x).abs();
    }
    for &(u, a) in &from_p {
        for &(w, b) in &from_q {
            best = best.min(a + d[u][w] + b);
        }
    }
    best
}

/// `d(A, B) = inf { d(x, y) : x ∈ A, y ∈ B }`.
pub fn metric_distance(g: &WeightedGraph, a: &MetricSubset, b: &MetricSubset) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("distance needs non-empty sets".into()));
    }
    if a.overlaps(g, b) {
        return Err(Error::InvalidArgument("sets overlap".into()));
    }
    let d = g.vertex_distances();
    let pa = a.anchors(g);
    let pb = b.anchors(g);
    let mut best = f64::INFINITY;
    for &p in &pa {
        for &q in &pb {
            best = best.min(point_distance(g, &d, p, q));
        }
    }
    Ok(best)
}

/// `λ₂ ≤ (4 / d(A,B)²) · log(vol X / √(vol A · vol B))²`.
pub fn lambda2_upper_bound(g: &WeightedGraph, a: &MetricSubset, b: &MetricSubset) -> Result<f64> {
    let va = a.volume();
    let vb = b.volume();
    if !(va > 0.0 && vb > 0.0) {
        return Err(Error::InvalidArgument("both sets need positive volume".into()));
    }
    let d = metric_distance(g, a, b)?;
    if !(d > 0.0) {
        return Err(Error::InvalidArgument("sets are at distance zero".into()));
    }
    let log = (g.total_length() / (va * vb).sqrt()).ln();
    Ok(4.0 / (d * d) * log * log)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub lambda2: f64,
    pub h: f64,
    /// `h²/4` on the metric side, `h²/2` on the discrete side.
    pub lower: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheegerReport {
    pub metric: InequalityCheck,
    pub metric_constant: MetricCheeger,
    /// Present when all lengths are 1 and the graph has no self-loops or
    /// double edges.
    pub discrete: Option<(InequalityCheck, DiscreteCheeger)>,
}

/// Second eigenvalue (with multiplicity) of the standard Laplacian on the
/// metric graph.
pub fn metric_lambda2(g: &WeightedGraph) -> Result<f64> {
    let total = TotalVertexSpace::standard(g);
    let mut lmax = decoupled_dirichlet(g, 2)[1] * 1.01 + 1.0;
    for _ in 0..8 {
        let s = bond_secular_spectrum(g, &total, lmax, BondOptions::default())?;
        if let Some(v) = s.nth(1) {
            return Ok(v);
        }
        lmax *= 2.0;
    }
    Err(Error::precondition("second eigenvalue not found"))
}

pub fn verify_cheeger(g: &WeightedGraph, carve_depth: usize) -> Result<CheegerReport> {
    ensure_connected(g)?;
    let metric_constant = cheeger_metric_upper(g, carve_depth)?;
    let lambda2 = metric_lambda2(g)?;
    let h = metric_constant.value;
    let lower = h * h / 4.0;
    let metric = InequalityCheck { lambda2, h, lower, holds: lambda2 >= lower - 1e-9 };
    let discrete = if check_principal_preconditions(g).is_ok() && g.vertex_count() <= EXHAUSTIVE_VERTEX_CAP {
        let c = cheeger_discrete(g, true)?;
        let spec = spectrum_discrete(&laplacian(g, &TotalVertexSpace::standard(g), 0)?, None)?;
        let lambda2 = spec.nth(1).unwrap_or(f64::NAN);
        let lower = c.value * c.value / 2.0;
        Some((
            InequalityCheck { lambda2, h: c.value, lower, holds: lambda2 >= lower - 1e-9 },
            c,
        ))
    } else {
        None
    };
    Ok(CheegerReport { metric, metric_constant, discrete })
}

/// Closed form `min_{1 ≤ k ≤ n/2} k(n-k) / (k(n-1))` for the complete graph.
pub fn complete_graph_cheeger(n: usize) -> BigRational {
    let mut best: Option<BigRational> = None;
    for k in 1..=n / 2 {
        let r = BigRational::new(BigInt::from(k * (n - k)), BigInt::from(k * (n - 1)));
        if best.as_ref().is_none_or(|b| &r < b) {
            best = Some(r);
        }
    }
    best.unwrap_or_else(BigRational::one)
}
