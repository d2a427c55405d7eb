use crate::discrete::{exterior_derivative, index_discrete};
use crate::error::{Error, Result};
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{numerical_rank_at_scale, real, singular_values, CMatrix, CVector, ONE};
use crate::space::TotalVertexSpace;

/// Largest defects of the chain maps between the discrete and the metric
/// complexes, tested on the edgewise affine functions `Ψ₀ F` and the
/// edgewise constant 1-forms `Ψ₁ η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    /// `|Φ₁ d f - d_𝒢 Φ₀ f|`.
    pub phi_commutes: f64,
    /// `|d Ψ₀ F - Ψ₁ d_𝒢 F|`.
    pub psi_commutes: f64,
    /// `|Φ₀ Ψ₀ - 1|` and `|Φ₁ Ψ₁ - 1|`.
    pub phi_psi_identity: f64,
    /// Largest distance of a trace `Ψ₀ F` from the vertex space.
    pub trace_in_space: f64,
}

impl ChainCheck {
    pub fn max(&self) -> f64 {
        self.phi_commutes
            .max(self.psi_commutes)
            .max(self.phi_psi_identity)
            .max(self.trace_in_space)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricIndexReport {
    pub h0: usize,
    pub h1: usize,
    pub index: i64,
    pub chain: ChainCheck,
}

/// An edgewise affine function given by its values at both ends.
#[derive(Debug, Clone)]
struct Affine {
    ends: Vec<(crate::linalg::C64, crate::linalg::C64)>,
}

/// Kernels of `d` and `d*` on the metric graph, computed from edgewise
/// constants, together with the chain-map checks.
pub fn metric_index(g: &WeightedGraph, total: &TotalVertexSpace) -> Result<MetricIndexReport> {
    let n = g.slot_count();
    let ne = g.edge_count();
    let p = total.global_projection(g);
    let q = CMatrix::identity(n, n) - &p;
    let mut iota = CMatrix::zeros(n, ne);
    let mut iota_pm = CMatrix::zeros(n, ne);
    for i in 0..ne {
        let a = g.global_slot(Slot { edge: i, end: End::Minus });
        let b = g.global_slot(Slot { edge: i, end: End::Plus });
        iota[(a, i)] = ONE;
        iota[(b, i)] = ONE;
        iota_pm[(a, i)] = -ONE;
        iota_pm[(b, i)] = ONE;
    }
    let h0 = ne - numerical_rank_at_scale(&singular_values(&(&q * &iota)), 1.0)?;
    let h1 = ne - numerical_rank_at_scale(&singular_values(&(&p * &iota_pm)), 1.0)?;
    let index = h0 as i64 - h1 as i64;
    let discrete = index_discrete(g, total)?;
    if index != discrete.index {
        return Err(Error::precondition(format!(
            "metric index {index} differs from discrete index {}",
            discrete.index
        )));
    }
    Ok(MetricIndexReport {
        h0,
        h1,
        index,
        chain: chain_check(g, total),
    })
}

fn chain_check(g: &WeightedGraph, total: &TotalVertexSpace) -> ChainCheck {
    let b = total.global_basis(g);
    let d = exterior_derivative(g, total).matrix;
    let dim = total.dim();
    let ne = g.edge_count();
    let minus: Vec<usize> = (0..ne).map(|i| g.global_slot(Slot { edge: i, end: End::Minus })).collect();
    let plus: Vec<usize> = (0..ne).map(|i| g.global_slot(Slot { edge: i, end: End::Plus })).collect();
    let len: Vec<f64> = g.edges().iter().map(|e| e.length).collect();

    let psi0 = |f: &CVector| -> Affine {
        let s = &b * f;
        Affine {
            ends: (0..ne).map(|i| (s[minus[i]], s[plus[i]])).collect(),
        }
    };
    let phi0 = |a: &Affine| -> CVector {
        let mut s = CVector::zeros(g.slot_count());
        for i in 0..ne {
            s[minus[i]] = a.ends[i].0;
            s[plus[i]] = a.ends[i].1;
        }
        b.adjoint() * s
    };
    // 1-forms are edgewise constants g_e; ℓ₂(E) coordinates are (∫ g_e)/√ℓ_e
    let deriv = |a: &Affine| -> Vec<crate::linalg::C64> {
        (0..ne).map(|i| (a.ends[i].1 - a.ends[i].0) / len[i]).collect()
    };
    let phi1 = |form: &[crate::linalg::C64]| -> CVector {
        CVector::from_fn(ne, |i, _| form[i] * len[i] / len[i].sqrt())
    };
    let psi1 = |eta: &CVector| -> Vec<crate::linalg::C64> {
        (0..ne).map(|i| eta[i] * (len[i].sqrt() / len[i])).collect()
    };

    let p = total.global_projection(g);
    let n = g.slot_count();
    let q = CMatrix::identity(n, n) - &p;
    let mut check = ChainCheck {
        phi_commutes: 0.0,
        psi_commutes: 0.0,
        phi_psi_identity: 0.0,
        trace_in_space: 0.0,
    };
    for j in 0..dim {
        let mut f = CVector::zeros(dim);
        f[j] = real(1.0);
        let affine = psi0(&f);
        let mut trace = CVector::zeros(n);
        for i in 0..ne {
            trace[minus[i]] = affine.ends[i].0;
            trace[plus[i]] = affine.ends[i].1;
        }
        check.trace_in_space = check.trace_in_space.max((&q * trace).camax());
        let df = deriv(&affine);
        let lhs = phi1(&df);
        let rhs = &d * phi0(&affine);
        check.phi_commutes = check.phi_commutes.max((lhs - rhs).camax());
        let dpsi = df;
        let psid = psi1(&(&d * &f));
        let defect = dpsi.iter().zip(&psid).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        check.psi_commutes = check.psi_commutes.max(defect);
        check.phi_psi_identity = check.phi_psi_identity.max((phi0(&affine) - &f).camax());
    }
    for i in 0..ne {
        let mut eta = CVector::zeros(ne);
        eta[i] = real(1.0);
        let back = phi1(&psi1(&eta));
        check.phi_psi_identity = check.phi_psi_identity.max((back - eta).camax());
    }
    check
}
