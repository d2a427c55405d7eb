//! The invariant suite run by `qg verify`: identities and inequalities
//! between independently computed quantities, each with both sides.

use std::fmt;

use crate::cheeger::verify_cheeger;
use crate::discrete::{
    check_principal_preconditions, classical_standard_laplacian, exterior_derivative, index_discrete,
    laplacian, principal_part, spectrum_discrete,
};
use crate::error::{Error, Result};
use crate::format::{parse_graph, print_graph};
use crate::graph::WeightedGraph;
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, max_abs, operator_norm, CMatrix};
use crate::metric::{
    bond_secular_spectrum, decoupled_dirichlet, decoupled_neumann, dtn_matrix, eigenfunction,
    equilateral_spectrum, fem_spectrum, metric_index, secular_spectrum_dtn, BondOptions, DirichletSet,
    DtnOptions, FemOptions,
};
use crate::space::{irreducible_decomposition, TotalVertexSpace};
use crate::spectrum::{Method, SpectrumResult};
use crate::trace::{
    enumerate_properly_closed, heat_trace_discrete, heat_trace_metric, spectral_heat_trace,
    metric_spectral_heat_trace, walk_weight_sums,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs ≤ rhs`.
    AtMost,
    /// `lhs = rhs` exactly.
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::Equal => "==",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub outcome: Outcome,
}

impl Check {
    pub fn at_most(name: &str, lhs: f64, rhs: f64) -> Check {
        let pass = lhs <= rhs;
        Check {
            name: name.to_string(),
            lhs,
            relation: Relation::AtMost,
            rhs,
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        }
    }

    pub fn equal(name: &str, lhs: f64, rhs: f64) -> Check {
        Check {
            name: name.to_string(),
            lhs,
            relation: Relation::Equal,
            rhs,
            outcome: if lhs == rhs { Outcome::Pass } else { Outcome::Fail },
        }
    }

    pub fn skipped(name: &str, why: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            lhs: f64::NAN,
            relation: Relation::AtMost,
            rhs: f64::NAN,
            outcome: Outcome::Skipped(why.into()),
        }
    }

    pub fn failed(name: &str, why: &Error) -> Check {
        Check {
            name: name.to_string(),
            lhs: f64::NAN,
            relation: Relation::AtMost,
            rhs: f64::NAN,
            outcome: Outcome::Skipped(format!("error: {why}")),
        }
        .into_failure()
    }

    fn into_failure(mut self) -> Check {
        if matches!(self.outcome, Outcome::Skipped(_)) {
            self.outcome = Outcome::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Fail)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub lambda_max: f64,
    pub fem_n: usize,
    /// Time for both heat-trace comparisons.
    pub t: f64,
    pub carve_depth: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { lambda_max: 20.0, fem_n: 200, t: 1.0, carve_depth: 1 }
    }
}

/// Nonzero parts of two spectra agree value by value.
pub fn nonzero_spectrum_gap(a: &[f64], b: &[f64], zero: f64) -> f64 {
    let a: Vec<f64> = a.iter().copied().filter(|x| x.abs() > zero).collect();
    let b: Vec<f64> = b.iter().copied().filter(|x| x.abs() > zero).collect();
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest `|S_i - T_i|` for two spectra expanded by multiplicity; infinite
/// when the counts differ.
pub fn expanded_gap(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn space_checks(g: &WeightedGraph, total: &TotalVertexSpace) -> Vec<Check> {
    let mut out = Vec::new();
    let mut defect = 0.0f64;
    for s in total.spaces() {
        let p = s.projection();
        let d = p.nrows();
        defect = defect.max(max_abs(&(p * p - p)));
        defect = defect.max(max_abs(&(p - p.adjoint())));
        let sc = s.scattering();
        defect = defect.max(max_abs(&(&sc * &sc - CMatrix::identity(d, d))));
    }
    out.push(Check::at_most("space.projection_defect", defect, 1e-12));
    let degrees: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
    out.push(Check::equal("graph.degree_sum", degrees as f64, g.slot_count() as f64));
    let text = print_graph(g, total);
    out.push(match parse_graph(&text) {
        Ok((g2, t2)) => {
            let same = g2 == *g
                && t2.spaces().iter().zip(total.spaces()).all(|(a, b)| a.same_subspace(b, 1e-12));
            Check::equal("format.round_trip", same as u8 as f64, 1.0)
        }
        Err(e) => Check::failed("format.round_trip", &e),
    });
    out
}

pub fn discrete_checks(g: &WeightedGraph, total: &TotalVertexSpace) -> Vec<Check> {
    let mut out = Vec::new();
    let d = exterior_derivative(g, total);
    let l0 = g.min_length();
    out.push(Check::at_most("discrete.derivative_norm", operator_norm(&d.matrix), (2.0 / l0).sqrt() + 1e-12));
    let run = || -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let d0 = laplacian(g, total, 0)?;
        let d1 = laplacian(g, total, 1)?;
        let s0 = hermitian_eigenvalues(&d0.matrix);
        let s1 = hermitian_eigenvalues(&d1.matrix);
        out.push(Check::at_most(
            "discrete.spectrum_bound",
            s0.last().copied().unwrap_or(0.0),
            2.0 / l0 + 1e-9,
        ));
        out.push(Check::at_most("discrete.supersymmetry", nonzero_spectrum_gap(&s0, &s1, 1e-9), 1e-9));
        let idx = index_discrete(g, total)?;
        out.push(Check::equal(
            "discrete.index_formula",
            idx.index as f64,
            total.dim() as f64 - g.edge_count() as f64,
        ));
        let dual = total.dual();
        let oriented = total.oriented(g);
        let di = index_discrete(g, &dual)?;
        let oi = index_discrete(g, &oriented)?;
        out.push(Check::equal("discrete.index_duality", di.index as f64, -(oi.index as f64)));
        out.push(Check::equal("discrete.dual_h0_oriented_h1", di.h0 as f64, oi.h1 as f64));
        if g.edges().iter().all(|e| e.length == 1.0) {
            let sd = hermitian_eigenvalues(&laplacian(g, &dual, 0)?.matrix);
            let mid = |s: &[f64]| -> Vec<f64> {
                s.iter().copied().filter(|x| x.abs() > 1e-9 && (x - 2.0).abs() > 1e-9).collect()
            };
            let mut reflected: Vec<f64> = mid(&s0).iter().map(|x| 2.0 - x).collect();
            reflected.sort_by(f64::total_cmp);
            out.push(Check::at_most("discrete.equilateral_duality", expanded_gap(&mid(&sd), &reflected), 1e-9));
        }
        if check_principal_preconditions(g).is_ok() {
            out.push(match principal_part(g, total) {
                Ok(pp) => {
                    let k = total.dim();
                    let defect = max_abs(&(CMatrix::identity(k, k) - &pp.m.matrix - &d0.matrix));
                    Check::at_most("discrete.principal_part", defect, 1e-10)
                }
                Err(e) => Check::failed("discrete.principal_part", &e),
            });
        }
        if total.is_standard() {
            let c = classical_standard_laplacian(g);
            out.push(Check::at_most("discrete.classical_standard", max_abs(&(c - &d0.matrix)), 1e-12));
        }
        let dec = irreducible_decomposition(g, total)?;
        let sdec = hermitian_eigenvalues(&laplacian(&dec.graph, &dec.space, 0)?.matrix);
        out.push(Check::at_most("decomposition.laplacian_spectrum", expanded_gap(&s0, &sdec), 1e-12));
        let again = irreducible_decomposition(&dec.graph, &dec.space)?;
        out.push(Check::equal(
            "decomposition.idempotent",
            again.graph.vertex_count() as f64,
            dec.graph.vertex_count() as f64,
        ));
        out.push(Check::equal("decomposition.dimension", dec.space.dim() as f64, total.dim() as f64));
        Ok(out)
    };
    match run() {
        Ok(c) => out.extend(c),
        Err(e) => out.push(Check::failed("discrete", &e)),
    }
    out
}

/// Bond spectrum on `[0, λ_max]` against FEM, DtN away from the Dirichlet
/// set and the equilateral transfer.
pub fn cross_method_checks(g: &WeightedGraph, total: &TotalVertexSpace, opts: &VerifyOptions) -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let bond = bond_secular_spectrum(g, total, opts.lambda_max, BondOptions::default())?;
        let values = bond.expanded();
        let fem = fem_spectrum(
            g,
            total,
            values.len() + 1,
            FemOptions { n_per_unit: opts.fem_n, estimate_error: true },
        )?;
        // the pair closest to its tolerance
        let (worst, allowed) = values
            .iter()
            .zip(&fem.eigenvalues)
            .map(|(&v, e)| ((e.value - v).abs(), (5.0 * e.error).max(1e-6)))
            .max_by(|a, b| (a.0 / a.1).total_cmp(&(b.0 / b.1)))
            .unwrap_or((0.0, 1e-6));
        out.push(Check::at_most("metric.bond_vs_fem", worst, allowed));
        let next = fem.eigenvalues[values.len()];
        out.push(Check::at_most(
            "metric.fem_no_missed_eigenvalue",
            opts.lambda_max,
            next.value + (5.0 * next.error).max(1e-6),
        ));

        let dtn = secular_spectrum_dtn(g, total, opts.lambda_max, DtnOptions::default())?;
        let windows = &dtn.unresolved;
        let in_window = |x: f64| windows.iter().any(|&(a, b)| x >= a && x <= b);
        let strip = |s: &SpectrumResult| -> Vec<(f64, usize)> {
            s.eigenvalues.iter().filter(|e| !in_window(e.value)).map(|e| (e.value, e.multiplicity)).collect()
        };
        let b_off = strip(&bond);
        let d_off = strip(&dtn);
        let gap = if b_off.len() == d_off.len() && b_off.iter().zip(&d_off).all(|(a, b)| a.1 == b.1) {
            b_off.iter().zip(&d_off).map(|(a, b)| (a.0 - b.0).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        out.push(Check::at_most("metric.bond_vs_dtn", gap, 1e-6));

        if g.is_equilateral() {
            let eq = equilateral_spectrum(g, total, opts.lambda_max)?;
            let a = g.edge(0).length;
            let sigma = DirichletSet::new(g, opts.lambda_max);
            let off = |s: &SpectrumResult| -> Vec<(f64, usize)> {
                s.eigenvalues
                    .iter()
                    .filter(|e| e.method != Method::DirichletPoint && !sigma.contains(e.value, 1e-6 * (1.0 + e.value)))
                    .map(|e| (e.value, e.multiplicity))
                    .collect()
            };
            let (x, y) = (off(&bond), off(&eq));
            let gap = if x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p.1 == q.1) {
                x.iter()
                    .zip(&y)
                    .map(|(p, q)| ((a * p.0.sqrt()).cos() - (a * q.0.sqrt()).cos()).abs())
                    .fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            out.push(Check::at_most("metric.equilateral_transfer", gap, 1e-8));
        }

        let n = values.len();
        let neu = decoupled_neumann(g, n);
        let dir = decoupled_dirichlet(g, n);
        let mut low = f64::NEG_INFINITY;
        let mut high = f64::NEG_INFINITY;
        for (k, &v) in values.iter().enumerate() {
            low = low.max(neu[k] - v);
            high = high.max(v - dir[k]);
        }
        out.push(Check::at_most("metric.neumann_bracket", low, 1e-8));
        out.push(Check::at_most("metric.dirichlet_bracket", high, 1e-8));

        let mut residual = 0.0f64;
        for e in &dtn.eigenvalues {
            let q = dtn_matrix(g, total, crate::linalg::real(e.value))?;
            let (vals, vecs) = hermitian_eigen(&q.matrix);
            let scale = 1.0 + operator_norm(&q.matrix);
            let mut order: Vec<usize> = (0..vals.len()).collect();
            order.sort_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs()));
            for &j in order.iter().take(e.multiplicity) {
                let f = vecs.column(j).into_owned();
                let s = eigenfunction(g, total, e.value, &f, 1e-6 * scale)?;
                let norm = s.sup_norm(64).max(1e-300);
                residual = residual.max(s.residuals(g, total, 64).max() / norm.max(1.0));
            }
        }
        out.push(Check::at_most("metric.eigenfunction_residual", residual, 1e-7));

        let mi = metric_index(g, total)?;
        out.push(Check::at_most("metric.chain_maps", mi.chain.max(), 1e-10));
        out.push(Check::equal("metric.index", mi.index as f64, index_discrete(g, total)?.index as f64));
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::failed("metric", &e)])
}

pub fn trace_checks(g: &WeightedGraph, total: &TotalVertexSpace, opts: &VerifyOptions) -> Vec<Check> {
    if g.has_self_loops() {
        return vec![Check::skipped("trace", "graph has self-loops")];
    }
    let run = || -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let c0 = enumerate_properly_closed(g, 0)?.len();
        let c1 = enumerate_properly_closed(g, 1)?.len();
        let c2 = enumerate_properly_closed(g, 2)?.len();
        out.push(Check::equal("trace.c0_count", c0 as f64, g.vertex_count() as f64));
        out.push(Check::equal("trace.c1_count", c1 as f64, 0.0));
        if !g.has_double_edges() {
            out.push(Check::equal("trace.c2_count", c2 as f64, 2.0 * g.edge_count() as f64));
        }
        if check_principal_preconditions(g).is_ok() {
            let pp = principal_part(g, total)?;
            let sums = walk_weight_sums(g, total, 8)?;
            let mut power = CMatrix::identity(total.dim(), total.dim());
            let mut gap = 0.0f64;
            for s in &sums {
                gap = gap.max((s - power.trace()).norm());
                power = &power * &pp.m.matrix;
            }
            out.push(Check::at_most("trace.walk_sums", gap, 1e-10));
            let h = heat_trace_discrete(g, total, opts.t, 40)?;
            let spec = spectrum_discrete(&laplacian(g, total, 0)?, None)?;
            let s = spectral_heat_trace(&spec, opts.t);
            out.push(Check::at_most("trace.discrete_heat", (h.value - s).abs(), h.bound + 1e-10));
        }
        // spectral side up to Λ with e^{-tΛ} far below the tolerance
        let spectral = metric_spectral_heat_trace(g, total, opts.t, 40.0 / opts.t)?;
        let cutoff = (120.0 * opts.t).sqrt().max(2.0 * g.max_length());
        match heat_trace_metric(g, total, opts.t, cutoff) {
            Ok(m) => out.push(Check::at_most(
                "trace.metric_heat",
                (m.value - spectral.value).abs(),
                m.truncation + spectral.bound + 1e-9,
            )),
            Err(Error::EnumerationOverflow(n)) => {
                out.push(Check::skipped("trace.metric_heat", format!("more than {n} paths below the cutoff")))
            }
            Err(e) => return Err(e),
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![Check::failed("trace", &e)])
}

pub fn cheeger_checks(g: &WeightedGraph, total: &TotalVertexSpace, opts: &VerifyOptions) -> Vec<Check> {
    if !total.is_standard() {
        return vec![Check::skipped("cheeger", "vertex spaces are not standard")];
    }
    if g.component_labels().0 != 1 {
        return vec![Check::skipped("cheeger", "graph is disconnected")];
    }
    match verify_cheeger(g, opts.carve_depth) {
        Ok(r) => {
            let mut out = vec![Check::at_most("cheeger.metric", r.metric.lower, r.metric.lambda2 + 1e-9)];
            if let Some((d, _)) = r.discrete {
                out.push(Check::at_most("cheeger.discrete", d.lower, d.lambda2 + 1e-9));
            }
            out
        }
        Err(Error::SizeCap(m)) => vec![Check::skipped("cheeger", m)],
        Err(e) => vec![Check::failed("cheeger", &e)],
    }
}

/// Every check applicable to the input.
pub fn verify_all(g: &WeightedGraph, total: &TotalVertexSpace, opts: &VerifyOptions) -> Vec<Check> {
    let mut out = space_checks(g, total);
    out.extend(discrete_checks(g, total));
    out.extend(cross_method_checks(g, total, opts));
    out.extend(trace_checks(g, total, opts));
    out.extend(cheeger_checks(g, total, opts));
    out
}
