use super::check_lambda_max;
use super::index::metric_index;
use crate::error::Result;
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{singular_values, CMatrix, C64};
use crate::space::TotalVertexSpace;
use crate::spectrum::{Eigenvalue, Method, SpectrumResult};

/// The bond map `U(k) = S J D(k)` on directed bonds.
///
/// A bond is labelled by the global slot it departs from. `D(k)` applies the
/// phase `e^{ikℓ}` of the traversed edge, `J` moves the amplitude to the
/// arrival slot and `S` scatters it into the departing slots at that vertex.
pub fn bond_matrix(g: &WeightedGraph, total: &TotalVertexSpace, k: f64) -> CMatrix {
    let n = g.slot_count();
    let scattering = total.scattering();
    let mut u = CMatrix::zeros(n, n);
    for (i, e) in g.edges().iter().enumerate() {
        let phase = C64::from_polar(1.0, k * e.length);
        for end in [End::Minus, End::Plus] {
            let from = g.global_slot(Slot { edge: i, end });
            let arrival = Slot { edge: i, end: end.opposite() };
            let (v, pos) = g.locate_slot(arrival);
            let off = g.slot_offset(v);
            for out in 0..g.degree(v) {
                u[(off + out, from)] += scattering.entry(v, out, pos) * phase;
            }
        }
    }
    u
}

fn secular_singular_values(g: &WeightedGraph, total: &TotalVertexSpace, k: f64) -> Vec<f64> {
    let n = g.slot_count();
    singular_values(&(CMatrix::identity(n, n) - bond_matrix(g, total, k)))
}

fn sigma_min(g: &WeightedGraph, total: &TotalVertexSpace, k: f64) -> f64 {
    secular_singular_values(g, total, k).last().copied().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy)]
pub struct BondOptions {
    /// Singular values below `tol` count towards the multiplicity.
    pub tol: f64,
    /// Initial grid step in `k`; defaults from the total length.
    pub step: Option<f64>,
}

impl Default for BondOptions {
    fn default() -> Self {
        BondOptions { tol: 1e-8, step: None }
    }
}

/// Eigenvalues in `[0, λ_max]` from `det(I - U(k)) = 0`.
///
/// The eigenphases of the unitary `U(k)` move with speed at most `ℓ_max`, so
/// `σ_min(I - U(k)) ≤ ℓ_max |k - k₀|` near a root `k₀`. Grid points above
/// that bound are certified root-free; the remaining runs are rescanned on
/// finer grids until they are narrower than the target accuracy, then
/// refined by golden-section search on `σ_min`.
pub fn bond_secular_spectrum(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    lambda_max: f64,
    options: BondOptions,
) -> Result<SpectrumResult> {
    check_lambda_max(lambda_max)?;
    let kmax = lambda_max.sqrt();
    let lmax = g.max_length();
    let ratio = (lmax / g.min_length()).ceil().max(1.0);
    let h = options
        .step
        .unwrap_or_else(|| (std::f64::consts::PI / (8.0 * g.total_length())).min(0.05));
    let mut eigenvalues = Vec::new();

    let h0 = metric_index(g, total)?.h0;
    if h0 > 0 {
        eigenvalues.push(Eigenvalue {
            value: 0.0,
            multiplicity: h0,
            method: Method::Bond,
            error: 0.0,
        });
    }

    let subdivisions = (32.0 * ratio) as usize;
    let mut stack = Vec::new();
    let points = ((kmax / h).ceil() as usize).max(1);
    let grid: Vec<f64> = (0..=points).map(|i| (i as f64 * h).min(kmax)).collect();
    collect_runs(g, total, &grid, h, lmax, kmax, &mut stack);

    let mut brackets = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo <= 1e-10 * (1.0 + hi) {
            brackets.push((lo, hi));
            continue;
        }
        let step = (hi - lo) / subdivisions as f64;
        let grid: Vec<f64> = (0..=subdivisions).map(|i| lo + i as f64 * step).collect();
        collect_runs(g, total, &grid, step, lmax, kmax, &mut stack);
    }

    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in brackets {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    for (lo, hi) in merged {
        let k = golden_section(|x| sigma_min(g, total, x), lo, hi);
        // the zero mode belongs to the metric index
        if k < 1e-8 {
            continue;
        }
        let svals = secular_singular_values(g, total, k);
        let m = svals.iter().filter(|&&s| s < options.tol).count();
        if m == 0 || k * k > lambda_max {
            continue;
        }
        eigenvalues.push(Eigenvalue {
            value: k * k,
            multiplicity: m,
            method: Method::Bond,
            error: 2.0 * k * (hi - lo),
        });
    }
    eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(SpectrumResult {
        eigenvalues,
        tolerance: options.tol,
        unresolved: Vec::new(),
    })
}

/// Pushes the intervals around runs of grid points whose `σ_min` does not
/// exclude a root within one step.
fn collect_runs(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    grid: &[f64],
    step: f64,
    lmax: f64,
    kmax: f64,
    out: &mut Vec<(f64, f64)>,
) {
    let bound = 1.1 * lmax * step;
    let mut run: Option<(f64, f64)> = None;
    for &k in grid {
        if sigma_min(g, total, k) <= bound {
            run = Some(match run {
                Some((a, _)) => (a, k),
                None => (k, k),
            });
        } else if let Some((a, b)) = run.take() {
            out.push(((a - step).max(0.0), (b + step).min(kmax)));
        }
    }
    if let Some((a, b)) = run {
        out.push(((a - step).max(0.0), (b + step).min(kmax)));
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if b - a <= 1e-15 * (1.0 + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use std::f64::consts::PI;

    fn run(g: &WeightedGraph) -> Vec<(f64, usize)> {
        bond_secular_spectrum(g, &TotalVertexSpace::standard(g), 45.0, BondOptions::default())
            .unwrap()
            .eigenvalues
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect()
    }

    #[test]
    fn bond_map_is_unitary() {
        let g = WeightedGraph::from_edge_list(
            &["a", "b", "c"],
            &[("a", "b", 1.0), ("b", "c", 0.6), ("c", "a", 2.0), ("a", "b", 1.3)],
        )
        .unwrap();
        let u = bond_matrix(&g, &TotalVertexSpace::standard(&g), 1.7);
        let n = u.nrows();
        assert!(max_abs(&(&u * u.adjoint() - CMatrix::identity(n, n))) < 1e-12);
    }

    #[test]
    fn interval() {
        let g = WeightedGraph::from_edge_list(&["a", "b"], &[("a", "b", 1.0)]).unwrap();
        let s = run(&g);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0], (0.0, 1));
        assert!((s[1].0 - PI * PI).abs() < 1e-9 && s[1].1 == 1);
        assert!((s[2].0 - 4.0 * PI * PI).abs() < 1e-9 && s[2].1 == 1);
    }

    #[test]
    fn triangle() {
        let g = WeightedGraph::from_edge_list(
            &["v1", "v2", "v3"],
            &[("v1", "v2", 1.0), ("v2", "v3", 1.0), ("v3", "v1", 1.0)],
        )
        .unwrap();
        let s = run(&g);
        let expect = [(0.0, 1), ((2.0 * PI / 3.0).powi(2), 2), ((4.0 * PI / 3.0).powi(2), 2), (4.0 * PI * PI, 2)];
        assert_eq!(s.len(), expect.len());
        for (a, b) in s.iter().zip(expect) {
            assert!((a.0 - b.0).abs() < 1e-9, "{a:?} vs {b:?}");
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn theta_second_eigenvalue() {
        let g = WeightedGraph::from_edge_list(
            &["u", "w"],
            &[("u", "w", 1.0), ("u", "w", 1.0), ("u", "w", 1.0)],
        )
        .unwrap();
        let s = run(&g);
        assert!((s[1].0 - PI * PI).abs() < 1e-9);
        assert!(s[1].1 >= 2);
    }
}
