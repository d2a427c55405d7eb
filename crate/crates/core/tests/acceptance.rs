//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use qg_core::cheeger::{
    cheeger_discrete, cheeger_metric_upper, lambda2_upper_bound, metric_distance, verify_cheeger,
    MetricSubset,
};
use qg_core::checks::{expanded_gap, nonzero_spectrum_gap};
use qg_core::discrete::{exterior_derivative, index_discrete, laplacian, principal_part};
use qg_core::generators::{self, random_connected_graph, random_nested_pair, random_total_space, GraphShape};
use qg_core::linalg::{hermitian_eigenvalues, operator_norm, singular_values, CMatrix, CVector, ONE};
use qg_core::metric::{
    bond_secular_spectrum, decoupled_dirichlet, decoupled_neumann, equilateral_spectrum, fem_spectrum,
    metric_index, secular_spectrum_dtn, BondOptions, DirichletSet, DtnOptions, FemOptions,
};
use qg_core::space::{irreducible_decomposition, make_space, SpaceKind, TotalVertexSpace, VertexSpace};
use qg_core::trace::{
    closed_walk_weight_sum, cycle_sum, heat_trace_discrete, heat_trace_metric, spectral_heat_trace,
    spectral_tail_bound, weyl_term, MetricPoint,
};
use qg_core::{Method, SpectrumResult, WeightedGraph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn bond(g: &WeightedGraph, t: &TotalVertexSpace, lmax: f64) -> SpectrumResult {
    bond_secular_spectrum(g, t, lmax, BondOptions::default()).expect("bond spectrum")
}

/// Eigenvalue counts of Δ⁰ resp. Δ¹ at zero, by eigenvalues instead of
/// singular values.
fn kernel_dims(g: &WeightedGraph, t: &TotalVertexSpace) -> (usize, usize) {
    let d = exterior_derivative(g, t).matrix;
    let scale = 1e-9 * (1.0 + operator_norm(&d)).powi(2);
    let z0 = hermitian_eigenvalues(&(d.adjoint() * &d)).iter().filter(|x| x.abs() < scale).count();
    let z1 = hermitian_eigenvalues(&(&d * d.adjoint())).iter().filter(|x| x.abs() < scale).count();
    (z0, z1)
}

fn equilateral_correspondence() -> Outcome {
    let start = Instant::now();
    let lmax = 30.0;
    let mut cases: Vec<(String, WeightedGraph, TotalVertexSpace)> = Vec::new();
    let mut r = generators::rng(101);
    for (name, g) in [("triangle", generators::triangle()), ("theta", generators::theta()), ("c4", generators::cycle(4))] {
        cases.push((format!("{name}/standard"), g.clone(), TotalVertexSpace::standard(&g)));
        let t = random_total_space(&mut r, &g);
        cases.push((format!("{name}/random"), g, t));
    }
    for i in 0..20 {
        let g = random_connected_graph(
            &mut r,
            GraphShape { max_vertices: 6, equilateral: true, ..Default::default() },
        );
        let t = random_total_space(&mut r, &g);
        cases.push((format!("random-{i}"), g, t));
    }
    let mut worst_forward = 0.0f64;
    let mut failures = Vec::new();
    for (name, g, t) in &cases {
        let spec0 = hermitian_eigenvalues(&laplacian(g, t, 0).unwrap().matrix);
        let sigma = DirichletSet::new(g, lmax);
        let off = |x: f64| !sigma.contains(x, 1e-6 * (1.0 + x));
        let b = bond(g, t, lmax);
        // forward: every metric eigenvalue off Σ comes from Δ⁰
        for e in b.eigenvalues.iter().filter(|e| off(e.value)) {
            let mu = 1.0 - e.value.sqrt().cos();
            let dist = spec0.iter().map(|m| (m - mu).abs()).fold(f64::INFINITY, f64::min);
            worst_forward = worst_forward.max(dist);
            let discrete_mult = spec0.iter().filter(|m| (*m - mu).abs() < 1e-7).count();
            if dist >= 1e-8 || discrete_mult != e.multiplicity {
                failures.push(format!("{name}: λ={} dist={dist:e} m={} vs {}", e.value, e.multiplicity, discrete_mult));
            }
        }
        // converse: every predicted lift off Σ is found with its multiplicity
        let eq = equilateral_spectrum(g, t, lmax).unwrap();
        for e in eq.eigenvalues.iter().filter(|e| e.method != Method::DirichletPoint && off(e.value)) {
            let hit = b
                .eigenvalues
                .iter()
                .find(|x| (x.value - e.value).abs() < 1e-6 * (1.0 + e.value));
            match hit {
                Some(x) if x.multiplicity == e.multiplicity => {}
                Some(x) => failures.push(format!("{name}: lift {} has m={} vs {}", e.value, e.multiplicity, x.multiplicity)),
                None => failures.push(format!("{name}: lift {} missing", e.value)),
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{} graphs, max dist {worst_forward:.2e}, {:.1}s{}",
            cases.len(),
            elapsed.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn index_identities() -> Outcome {
    let mut r = generators::rng(202);
    let mut failures = Vec::new();
    for i in 0..200 {
        let g = random_connected_graph(&mut r, GraphShape::default());
        let t = random_total_space(&mut r, &g);
        let formula = t.dim() as i64 - g.edge_count() as i64;
        let (z0, z1) = kernel_dims(&g, &t);
        let oracle = z0 as i64 - z1 as i64;
        let discrete = index_discrete(&g, &t).map(|x| x.index);
        let metric = metric_index(&g, &t).map(|x| x.index);
        let dual = index_discrete(&g, &t.dual()).map(|x| x.index);
        let oriented = index_discrete(&g, &t.oriented(&g)).map(|x| x.index);
        let ok = match (&discrete, &metric, &dual, &oriented) {
            (Ok(d), Ok(m), Ok(du), Ok(o)) => *d == formula && oracle == formula && m == d && *du == -o,
            _ => false,
        };
        if !ok {
            failures.push(format!("case {i}: {discrete:?} {metric:?} {dual:?} {oriented:?} formula {formula} oracle {oracle}"));
        }
    }
    outcome(failures.is_empty(), format!("200 graphs{}", tail(&failures)))
}

fn tail(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; {} failures: {}", failures.len(), failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

fn cross_method_spectra() -> Outcome {
    let lmax = 20.0;
    let mut failures = Vec::new();
    let mut r = generators::rng(303);
    let mut worst = 0.0f64;
    for (name, g) in generators::suite() {
        let spaces = vec![
            ("standard", TotalVertexSpace::standard(&g)),
            ("maximal", TotalVertexSpace::uniform(&g, SpaceKind::Maximal).unwrap()),
            ("random", random_total_space(&mut r, &g)),
        ];
        for (sn, t) in spaces {
            let b = bond(&g, &t, lmax);
            let values = b.expanded();
            let fem = fem_spectrum(&g, &t, values.len() + 1, FemOptions { n_per_unit: 200, estimate_error: true })
                .unwrap();
            for (i, v) in values.iter().enumerate() {
                let f = &fem.eigenvalues[i];
                let tol = (5.0 * f.error).max(1e-6);
                worst = worst.max((f.value - v).abs() / tol);
                if (f.value - v).abs() > tol {
                    failures.push(format!("{name}/{sn}: bond {v} fem {} ± {tol:e}", f.value));
                }
            }
            let next = fem.eigenvalues[values.len()];
            if next.value + (5.0 * next.error).max(1e-6) < lmax {
                failures.push(format!("{name}/{sn}: fem has an extra eigenvalue {}", next.value));
            }
            let dtn = secular_spectrum_dtn(&g, &t, lmax, DtnOptions::default()).unwrap();
            let inside = |x: f64| dtn.unresolved.iter().any(|&(a, c)| x >= a && x <= c);
            let strip = |s: &SpectrumResult| -> Vec<(f64, usize)> {
                s.eigenvalues.iter().filter(|e| !inside(e.value)).map(|e| (e.value, e.multiplicity)).collect()
            };
            let (x, y) = (strip(&b), strip(&dtn));
            let agree = x.len() == y.len()
                && x.iter().zip(&y).all(|(p, q)| p.1 == q.1 && (p.0 - q.0).abs() <= 1e-6);
            if !agree {
                failures.push(format!("{name}/{sn}: dtn {y:?} vs bond {x:?}"));
            }
        }
    }
    // the interval and the Dirichlet windows of the DtN route
    let g = generators::interval();
    let t = TotalVertexSpace::standard(&g);
    let lmax = 4.0 * PI * PI + 1.0;
    let b = bond(&g, &t, lmax).expanded();
    let fem = fem_spectrum(&g, &t, 3, FemOptions::default()).unwrap();
    let expect = [0.0, PI * PI, 4.0 * PI * PI];
    let bond_ok = b.len() == 3 && b.iter().zip(&expect).all(|(x, y)| (x - y).abs() < 1e-6);
    let fem_ok = fem
        .eigenvalues
        .iter()
        .zip(&expect)
        .all(|(x, y)| (x.value - y).abs() <= (5.0 * x.error).max(1e-6));
    let dtn = secular_spectrum_dtn(&g, &t, lmax, DtnOptions::default()).unwrap();
    let windows_ok = dtn.values() == vec![0.0]
        && dtn.unresolved.len() == 2
        && expect[1..].iter().zip(&dtn.unresolved).all(|(s, w)| w.0 < *s && *s < w.1);
    if !(bond_ok && fem_ok && windows_ok) {
        failures.push(format!("interval: bond {b:?} fem {:?} dtn windows {:?}", fem.values(), dtn.unresolved));
    }
    outcome(
        failures.is_empty(),
        format!(
            "suite × 3 spaces, worst |bond-fem|/tol {worst:.2}, interval dtn windows {:?}{}",
            dtn.unresolved.iter().map(|w| format!("[{:.6}, {:.6}]", w.0, w.1)).collect::<Vec<_>>(),
            tail(&failures)
        ),
    )
}

/// `Σ m_k e^{-tλ_k}` from the bond spectrum on `[0, Λ]` and a bound on its
/// error: the tail beyond `Λ` plus the effect of the eigenvalue errors.
fn spectral_side(g: &WeightedGraph, t: &TotalVertexSpace, time: f64) -> (f64, f64) {
    let cut = 45.0 / time;
    let s = bond(g, t, cut);
    let err: f64 = s
        .eigenvalues
        .iter()
        .map(|e| e.multiplicity as f64 * time * e.error * (-time * (e.value - e.error).max(0.0)).exp())
        .sum();
    (spectral_heat_trace(&s, time), err + spectral_tail_bound(g.total_length(), g.edge_count(), time, cut))
}

fn metric_heat_trace() -> Outcome {
    let mut failures = Vec::new();
    let tri = generators::triangle();
    let st = TotalVertexSpace::standard(&tri);
    let h = heat_trace_metric(&tri, &st, 0.1, 12.0).unwrap();
    let (s, s_err) = spectral_side(&tri, &st, 0.1);
    let d_tri = (h.value - s).abs();
    if d_tri >= 1e-6 {
        failures.push(format!("triangle: {} vs {s}", h.value));
    }
    let iv = generators::interval();
    let it = TotalVertexSpace::standard(&iv);
    let mut d_iv = 0.0f64;
    for time in [0.05f64, 0.1, 0.2, 0.5, 1.0, 2.0] {
        let cutoff = (160.0 * time).sqrt().max(12.0);
        let h = heat_trace_metric(&iv, &it, time, cutoff).unwrap();
        let (s, _) = spectral_side(&iv, &it, time);
        d_iv = d_iv.max((h.value - s).abs());
        if (h.value - s).abs() >= 1e-10 {
            failures.push(format!("interval t={time}: {} vs {s}", h.value));
        }
    }
    // constant term: spectral sum minus Weyl term minus cycle sum
    let mut d_const = 0.0f64;
    for (name, g) in [
        ("interval", generators::interval()),
        ("triangle", generators::triangle()),
        ("c4", generators::cycle(4)),
        ("star", generators::star()),
    ] {
        let t = TotalVertexSpace::standard(&g);
        let mut fitted = 0.0;
        let times = [0.5f64, 1.0, 2.0];
        for &time in &times {
            let cutoff = (160.0 * time).sqrt();
            let (s, _) = spectral_side(&g, &t, time);
            let (c, _) = cycle_sum(&g, &t, time, cutoff).unwrap();
            fitted += (s - weyl_term(&g, time) - c) / times.len() as f64;
        }
        let expect = (t.dim() as f64 - g.edge_count() as f64) / 2.0;
        d_const = d_const.max((fitted - expect).abs());
        if (fitted - expect).abs() >= 1e-6 {
            failures.push(format!("{name}: fitted constant {fitted} vs {expect}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "triangle {:.6} vs {s:.6} (diff {d_tri:.1e}, oracle error {s_err:.1e}), interval max diff {d_iv:.1e}, constant max diff {d_const:.1e}{}",
            h.value,
            tail(&failures)
        ),
    )
}

fn discrete_heat_trace() -> Outcome {
    let mut failures = Vec::new();
    let tri = generators::triangle();
    let st = TotalVertexSpace::standard(&tri);
    let h = heat_trace_discrete(&tri, &st, 1.0, 40).unwrap();
    let exact = 1.0 + 2.0 * (-1.5f64).exp();
    if (h.value - exact).abs() > h.bound {
        failures.push(format!("triangle: {} vs {exact} (bound {:e})", h.value, h.bound));
    }
    let mut r = generators::rng(505);
    let mut worst_heat = 0.0f64;
    let mut worst_walk = 0.0f64;
    for i in 0..20 {
        let g = random_connected_graph(
            &mut r,
            GraphShape { max_vertices: 6, max_extra_edges: 3, equilateral: true, simple: true, ..Default::default() },
        );
        let t = random_total_space(&mut r, &g);
        let h = heat_trace_discrete(&g, &t, 1.0, 40).unwrap();
        let spectral: f64 = hermitian_eigenvalues(&laplacian(&g, &t, 0).unwrap().matrix)
            .iter()
            .map(|l| (-l).exp())
            .sum();
        worst_heat = worst_heat.max((h.value - spectral).abs());
        if (h.value - spectral).abs() >= 1e-10 {
            failures.push(format!("graph {i}: {} vs {spectral}", h.value));
        }
        if g.edge_count() <= 8 {
            let m = principal_part(&g, &t).unwrap().m.matrix;
            let mut power = CMatrix::identity(t.dim(), t.dim());
            for n in 0..=8 {
                let w = closed_walk_weight_sum(&g, &t, n).unwrap();
                worst_walk = worst_walk.max((w - power.trace()).norm());
                power = &power * &m;
            }
        }
    }
    if worst_walk >= 1e-10 {
        failures.push(format!("walk sums differ by {worst_walk:e}"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "triangle {:.12} vs {exact:.12}, random max diff {worst_heat:.1e}, walk sums max diff {worst_walk:.1e}{}",
            h.value,
            tail(&failures)
        ),
    )
}

fn cheeger() -> Outcome {
    let mut failures = Vec::new();
    let tri = generators::triangle();
    let h = cheeger_metric_upper(&tri, 1).unwrap();
    let four_thirds = BigRational::new(BigInt::from(4), BigInt::from(3));
    if h.h_ub != four_thirds {
        failures.push(format!("triangle h_ub = {}", h.h_ub));
    }
    let rep = verify_cheeger(&tri, 1).unwrap();
    if (rep.metric.lambda2 - 4.38649).abs() > 1e-5 || !rep.metric.holds {
        failures.push(format!("triangle λ₂ = {}", rep.metric.lambda2));
    }
    let k4 = generators::complete(4);
    let d = cheeger_discrete(&k4, true).unwrap();
    let rk = verify_cheeger(&k4, 1).unwrap();
    let (dk, _) = rk.discrete.clone().unwrap();
    if d.h != BigRational::new(BigInt::from(2), BigInt::from(3)) || (dk.lambda2 - 4.0 / 3.0).abs() > 1e-12 || !dk.holds {
        failures.push(format!("k4: h = {}, λ₂ = {}", d.h, dk.lambda2));
    }
    let mut lines = Vec::new();
    for (name, g) in generators::suite() {
        let r = verify_cheeger(&g, 1).unwrap();
        let ok = r.metric.holds && r.discrete.as_ref().is_none_or(|d| d.0.holds);
        lines.push(format!("{name} {:.4}≥{:.4}", r.metric.lambda2, r.metric.lower));
        if !ok {
            failures.push(format!("{name}: {r:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("triangle h_ub = {}, k4 h = {}, λ₂ ≥ h²/4: {}{}", h.h_ub, d.h, lines.join(", "), tail(&failures)),
    )
}

fn random_point<R: Rng>(r: &mut R, g: &WeightedGraph) -> MetricPoint {
    let e = r.random_range(0..g.edge_count());
    let x = r.random_range(0.0..g.edge(e).length);
    MetricPoint { edge: e, x }
}

fn random_pair<R: Rng>(r: &mut R, g: &WeightedGraph) -> (MetricSubset, MetricSubset) {
    loop {
        let ra = r.random_range(0.02..0.6) * g.min_length();
        let rb = r.random_range(0.02..0.6) * g.min_length();
        let a = MetricSubset::ball(g, random_point(r, g), ra).unwrap();
        let b = MetricSubset::ball(g, random_point(r, g), rb).unwrap();
        if let Ok(d) = metric_distance(g, &a, &b) {
            if d > 1e-3 {
                return (a, b);
            }
        }
    }
}

fn upper_bound() -> Outcome {
    let mut r = generators::rng(707);
    let mut failures = Vec::new();
    let mut slack = f64::INFINITY;
    for (name, g) in generators::suite() {
        let t = TotalVertexSpace::standard(&g);
        let fem = fem_spectrum(&g, &t, 2, FemOptions::default()).unwrap();
        let lambda2 = fem.eigenvalues[1].value;
        for _ in 0..50 {
            let (a, b) = random_pair(&mut r, &g);
            let bound = lambda2_upper_bound(&g, &a, &b).unwrap();
            slack = slack.min(bound - lambda2);
            if bound < lambda2 - 1e-6 {
                failures.push(format!("{name}: bound {bound} < λ₂ {lambda2}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("7 graphs × 50 pairs, smallest bound - λ₂ = {slack:.3}{}", tail(&failures)))
}

fn structural_invariants() -> Outcome {
    let mut failures = Vec::new();
    let mut r = generators::rng(808);
    let mut worst = [0.0f64; 5];
    for i in 0..20 {
        let equilateral = i % 2 == 0;
        let g = random_connected_graph(&mut r, GraphShape { equilateral, ..Default::default() });
        let t = random_total_space(&mut r, &g);
        let d = exterior_derivative(&g, &t).matrix;
        let norm = singular_values(&d).first().copied().unwrap_or(0.0);
        worst[0] = worst[0].max(norm - (2.0 / g.min_length()).sqrt());
        let s0 = hermitian_eigenvalues(&laplacian(&g, &t, 0).unwrap().matrix);
        let s1 = hermitian_eigenvalues(&laplacian(&g, &t, 1).unwrap().matrix);
        worst[1] = worst[1].max(nonzero_spectrum_gap(&s0, &s1, 1e-9));
        if equilateral {
            let sd = hermitian_eigenvalues(&laplacian(&g, &t.dual(), 0).unwrap().matrix);
            let mid = |s: &[f64]| -> Vec<f64> {
                s.iter().copied().filter(|x| x.abs() > 1e-9 && (x - 2.0).abs() > 1e-9).collect()
            };
            let mut reflected: Vec<f64> = mid(&s0).iter().map(|x| 2.0 - x).collect();
            reflected.sort_by(f64::total_cmp);
            worst[2] = worst[2].max(expanded_gap(&mid(&sd), &reflected));
        }
    }
    for _ in 0..10 {
        let g = random_connected_graph(&mut r, GraphShape::default());
        let (small, large) = random_nested_pair(&mut r, &g);
        let lmax = 25.0;
        let a = bond(&g, &small, lmax).expanded();
        let b = bond(&g, &large, lmax).expanded();
        if b.len() < a.len() {
            failures.push(format!("nested pair: {} eigenvalues for the larger space, {} for the smaller", b.len(), a.len()));
        }
        for (x, y) in b.iter().zip(&a) {
            worst[3] = worst[3].max(x - y);
        }
        for vals in [&a, &b] {
            let n = vals.len();
            let neu = decoupled_neumann(&g, n);
            let dir = decoupled_dirichlet(&g, n);
            for k in 0..n {
                worst[4] = worst[4].max(neu[k] - vals[k]).max(vals[k] - dir[k]);
            }
        }
    }
    let names = ["norm of d", "supersymmetry", "duality reflection", "monotonicity", "bracketing"];
    for (w, n) in worst.iter().zip(names) {
        if !(*w < 1e-8) {
            failures.push(format!("{n}: {w:e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{}{}",
            worst.iter().zip(names).map(|(w, n)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", "),
            tail(&failures)
        ),
    )
}

fn star(d: usize) -> WeightedGraph {
    let mut names = vec!["c".to_string()];
    let mut edges = Vec::new();
    for k in 0..d {
        names.push(format!("l{k}"));
        edges.push((k, 1.0 + 0.25 * k as f64));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let list: Vec<(&str, &str, f64)> = edges.iter().map(|&(k, l)| ("c", refs[k + 1], l)).collect();
    WeightedGraph::from_edge_list(&refs, &list).unwrap()
}

fn decomposition() -> Outcome {
    let mut failures = Vec::new();
    // gap between the spectra in units of the eigensolver's backward error
    let spectra_equal = |g: &WeightedGraph, t: &TotalVertexSpace| -> f64 {
        let d = irreducible_decomposition(g, t).unwrap();
        let before = laplacian(g, t, 0).unwrap().matrix;
        let a = hermitian_eigenvalues(&before);
        let b = hermitian_eigenvalues(&laplacian(&d.graph, &d.space, 0).unwrap().matrix);
        let unit = 8.0 * before.nrows() as f64 * f64::EPSILON * operator_norm(&before).max(1.0);
        if a.len() == b.len() { expanded_gap(&a, &b) / unit } else { f64::INFINITY }
    };
    // split of a reducible degree-4 space
    let g = star(4);
    let v1 = CVector::from_vec(vec![ONE, ONE, ONE, ONE]);
    let v2 = CVector::from_vec(vec![ONE, -ONE, ONE, -ONE]);
    let mut spaces = vec![VertexSpace::from_vectors(0, 4, &[v1, v2]).unwrap()];
    for v in 1..5 {
        spaces.push(make_space(SpaceKind::Standard, &g, v).unwrap());
    }
    let t = TotalVertexSpace::new(&g, spaces).unwrap();
    let d = irreducible_decomposition(&g, &t).unwrap();
    let slots: Vec<Vec<usize>> = (0..2).map(|v| d.graph.slots(v).iter().map(|s| s.edge).collect()).collect();
    let standard_halves = (0..2).all(|v| {
        let s = d.space.space(v);
        s.dim() == 1 && s.projection().iter().all(|z| (z.re - 0.5).abs() < 1e-12 && z.im.abs() < 1e-12)
    });
    if d.graph.vertex_count() != 6 || slots != vec![vec![0, 2], vec![1, 3]] || !standard_halves {
        failures.push(format!("reducible split: {} vertices, slots {slots:?}", d.graph.vertex_count()));
    }
    let gap_split = spectra_equal(&g, &t);
    // the magnetic degree-4 space stays in one piece
    let mut spaces = vec![make_space(SpaceKind::Magnetic(1), &g, 0).unwrap()];
    for v in 1..5 {
        spaces.push(make_space(SpaceKind::Standard, &g, v).unwrap());
    }
    let tm = TotalVertexSpace::new(&g, spaces).unwrap();
    let dm = irreducible_decomposition(&g, &tm).unwrap();
    if dm.graph.vertex_count() != 5 {
        failures.push(format!("magnetic space split into {} vertices", dm.graph.vertex_count()));
    }
    let gap_mag = spectra_equal(&g, &tm);
    // the maximal space decouples every edge
    let tri = generators::triangle();
    let max = TotalVertexSpace::uniform(&tri, SpaceKind::Maximal).unwrap();
    let dx = irreducible_decomposition(&tri, &max).unwrap();
    if dx.graph.vertex_count() != 6 || dx.graph.component_labels().0 != 3 {
        failures.push(format!("maximal: {} vertices", dx.graph.vertex_count()));
    }
    let gap_max = spectra_equal(&tri, &max);
    let worst = gap_split.max(gap_mag).max(gap_max);
    if worst > 1.0 {
        failures.push(format!("spectra differ by {worst:.2} rounding units"));
    }
    outcome(
        failures.is_empty(),
        format!("split 4 → 2+2, magnetic kept, maximal → 3 edges, spectra agree to {worst:.3} rounding units{}", tail(&failures)),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("equilateral correspondence", equilateral_correspondence),
        ("index identities", index_identities),
        ("cross-method spectra", cross_method_spectra),
        ("metric heat trace", metric_heat_trace),
        ("discrete heat trace", discrete_heat_trace),
        ("cheeger constants", cheeger),
        ("eigenvalue upper bound", upper_bound),
        ("structural invariants", structural_invariants),
        ("decomposition", decomposition),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{status} {} {name} ({:.1}s): {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
