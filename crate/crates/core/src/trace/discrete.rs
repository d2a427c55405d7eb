use super::paths::{discrete_weight_with, enumerate_properly_closed, CombinatorialPath};
use super::Truncated;
use crate::discrete::{principal_part, PrincipalPart};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{CMatrix, C64};
use crate::space::TotalVertexSpace;

/// `Σ_{c ∈ C_n} W(c)` by explicit enumeration of the paths.
pub fn closed_walk_weight_sum(g: &WeightedGraph, total: &TotalVertexSpace, n: usize) -> Result<C64> {
    let pp = principal_part(g, total)?;
    let paths: Vec<CombinatorialPath> = enumerate_properly_closed(g, n)?;
    paths.iter().map(|c| discrete_weight_with(&pp, total, c)).sum()
}

/// `Σ_{c ∈ C_n} W(c)` for `n = 0..=max_n`. Paths are grouped by start and
/// current vertex, so the ordered block products of all walks sharing both
/// are accumulated together.
pub fn walk_weight_sums(g: &WeightedGraph, total: &TotalVertexSpace, max_n: usize) -> Result<Vec<C64>> {
    let pp = principal_part(g, total)?;
    Ok(walk_sums_with(g, total, &pp, max_n))
}

fn walk_sums_with(g: &WeightedGraph, total: &TotalVertexSpace, pp: &PrincipalPart, max_n: usize) -> Vec<C64> {
    let nv = g.vertex_count();
    let neighbours: Vec<Vec<usize>> = (0..nv)
        .map(|v| g.slots(v).iter().map(|s| g.edge(s.edge).endpoint(s.end.opposite())).collect())
        .collect();
    let mut sums = vec![C64::new(0.0, 0.0); max_n + 1];
    for start in 0..nv {
        let d0 = total.space(start).dim();
        if d0 == 0 {
            continue;
        }
        // walk[w]: sum over walks start → w of the ordered block products
        let mut walk: Vec<Option<CMatrix>> = vec![None; nv];
        walk[start] = Some(CMatrix::identity(d0, d0));
        sums[0] += C64::new(d0 as f64, 0.0);
        for n in 1..=max_n {
            let mut next: Vec<Option<CMatrix>> = vec![None; nv];
            for v in 0..nv {
                let Some(r) = &walk[v] else { continue };
                for &w in &neighbours[v] {
                    let a = pp.block(v, w).expect("adjacent block");
                    let term = r * a;
                    match &mut next[w] {
                        Some(acc) => *acc += term,
                        slot => *slot = Some(term),
                    }
                }
            }
            walk = next;
            if let Some(r) = &walk[start] {
                sums[n] += r.trace();
            }
        }
    }
    sums
}

/// `e^{-t} Σ_{n ≤ N} tⁿ/n! Σ_{c ∈ C_n} W(c)` with the remainder bound
/// `e^{-t} dim 𝒢 Σ_{n > N} tⁿ/n!`.
pub fn heat_trace_discrete(g: &WeightedGraph, total: &TotalVertexSpace, t: f64, terms: usize) -> Result<Truncated> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be non-negative, got {t}")));
    }
    let pp = principal_part(g, total)?;
    let sums = walk_sums_with(g, total, &pp, terms);
    let mut coeff = 1.0;
    let mut value = 0.0;
    for (n, s) in sums.iter().enumerate() {
        if n > 0 {
            coeff *= t / n as f64;
        }
        value += coeff * s.re;
    }
    let mut tail = 0.0;
    let mut c = coeff;
    let mut n = terms;
    loop {
        n += 1;
        c *= t / n as f64;
        tail += c;
        if c <= 1e-17 * tail || c == 0.0 {
            break;
        }
    }
    let e = (-t).exp();
    Ok(Truncated {
        value: e * value,
        bound: e * total.dim() as f64 * tail,
    })
}
