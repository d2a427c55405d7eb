use super::dtn::dtn_matrix;
use crate::error::{Error, Result};
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{real, CMatrix, CVector, C64, ZERO};
use crate::space::TotalVertexSpace;

/// `f_e = a_e s₋ + b_e s₊` on every edge, where `s±` solve `-f'' = z f`
/// with `s₋(0) = 1, s₋(ℓ) = 0` and `s₊(0) = 0, s₊(ℓ) = 1`.
#[derive(Debug, Clone)]
pub struct EdgewiseSolution {
    pub z: C64,
    pub lengths: Vec<f64>,
    pub coefficients: Vec<(C64, C64)>,
}

/// Residuals of a candidate eigenfunction, each a supremum norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionResiduals {
    /// `|(1 - P) f(v)|`: the trace lies in the vertex space.
    pub trace: f64,
    /// `|P f'(v)|` with inward derivatives.
    pub flux: f64,
    /// `|f'' + z f|` sampled along the edges, `f''` by finite differences.
    pub ode: f64,
}

impl SolutionResiduals {
    pub fn max(&self) -> f64 {
        self.trace.max(self.flux).max(self.ode)
    }
}

impl EdgewiseSolution {
    fn sz(&self) -> C64 {
        self.z.sqrt()
    }

    /// `(s₋, s₊, s₋', s₊', s₋'', s₊'')` at `x` on an edge of length `l`.
    fn fundamental(&self, l: f64, x: f64) -> [C64; 6] {
        let z = self.z;
        if z.norm() * l * l < 1e-12 {
            let one = real(1.0);
            return [
                one - x / l,
                real(x / l),
                real(-1.0 / l),
                real(1.0 / l),
                ZERO,
                ZERO,
            ];
        }
        let k = self.sz();
        let s = (k * l).sin();
        let sm = (k * (l - x)).sin() / s;
        let sp = (k * x).sin() / s;
        let dm = -k * (k * (l - x)).cos() / s;
        let dp = k * (k * x).cos() / s;
        [sm, sp, dm, dp, -z * sm, -z * sp]
    }

    pub fn value(&self, edge: usize, x: f64) -> C64 {
        let (a, b) = self.coefficients[edge];
        let f = self.fundamental(self.lengths[edge], x);
        a * f[0] + b * f[1]
    }

    pub fn derivative(&self, edge: usize, x: f64) -> C64 {
        let (a, b) = self.coefficients[edge];
        let f = self.fundamental(self.lengths[edge], x);
        a * f[2] + b * f[3]
    }

    pub fn second_derivative(&self, edge: usize, x: f64) -> C64 {
        let (a, b) = self.coefficients[edge];
        let f = self.fundamental(self.lengths[edge], x);
        a * f[4] + b * f[5]
    }

    /// Values at every slot, in global slot order.
    pub fn trace(&self, g: &WeightedGraph) -> CVector {
        let mut t = CVector::from_element(g.slot_count(), ZERO);
        for (i, e) in g.edges().iter().enumerate() {
            t[g.global_slot(Slot { edge: i, end: End::Minus })] = self.value(i, 0.0);
            t[g.global_slot(Slot { edge: i, end: End::Plus })] = self.value(i, e.length);
        }
        t
    }

    /// Inward derivatives at every slot.
    pub fn oriented_derivative_trace(&self, g: &WeightedGraph) -> CVector {
        let mut t = CVector::from_element(g.slot_count(), ZERO);
        for (i, e) in g.edges().iter().enumerate() {
            t[g.global_slot(Slot { edge: i, end: End::Minus })] = self.derivative(i, 0.0);
            t[g.global_slot(Slot { edge: i, end: End::Plus })] = -self.derivative(i, e.length);
        }
        t
    }

    pub fn residuals(&self, g: &WeightedGraph, total: &TotalVertexSpace, samples: usize) -> SolutionResiduals {
        let p = total.global_projection(g);
        let n = p.nrows();
        let q = CMatrix::identity(n, n) - &p;
        let sup = |v: CVector| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace = sup(&q * self.trace(g));
        let flux = sup(&p * self.oriented_derivative_trace(g));
        let mut ode = 0.0f64;
        for (i, e) in g.edges().iter().enumerate() {
            for s in 0..=samples {
                let x = e.length * s as f64 / samples as f64;
                // five-point stencil, independent of the closed-form derivative
                let h = 2e-3 * e.length;
                let f = |t: f64| self.value(i, x + t * h);
                let fxx = (-f(2.0) + f(1.0) * 16.0 - f(0.0) * 30.0 + f(-1.0) * 16.0 - f(-2.0)) / (12.0 * h * h);
                let r = fxx + self.z * self.value(i, x);
                ode = ode.max(r.norm());
            }
        }
        SolutionResiduals { trace, flux, ode }
    }

    /// `sup |f|` over sample points, used to normalise residuals.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        let mut m = 0.0f64;
        for (i, &l) in self.lengths.iter().enumerate() {
            for s in 0..=samples {
                m = m.max(self.value(i, l * s as f64 / samples as f64).norm());
            }
        }
        m
    }
}

/// `β(λ) F`: the edgewise solution with vertex data `F ∈ 𝒢` (coordinates in
/// the orthonormal basis of `𝒢`). `F` must lie in the numerical kernel of
/// `Q(λ)`.
pub fn eigenfunction(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    lambda: f64,
    f: &CVector,
    tol: f64,
) -> Result<EdgewiseSolution> {
    if f.len() != total.dim() {
        return Err(Error::InvalidArgument(format!(
            "vertex datum has {} entries, the vertex space has dimension {}",
            f.len(),
            total.dim()
        )));
    }
    let q = dtn_matrix(g, total, real(lambda))?;
    let norm = f.norm();
    let residual = (&q.matrix * f).norm();
    let scale = 1.0 + crate::linalg::operator_norm(&q.matrix);
    if norm == 0.0 || residual > tol * scale * norm {
        return Err(Error::NotInKernel { residual });
    }
    let slots = total.global_basis(g) * f;
    let coefficients = (0..g.edge_count())
        .map(|i| {
            (
                slots[g.global_slot(Slot { edge: i, end: End::Minus })],
                slots[g.global_slot(Slot { edge: i, end: End::Plus })],
            )
        })
        .collect();
    Ok(EdgewiseSolution {
        z: real(lambda),
        lengths: g.edges().iter().map(|e| e.length).collect(),
        coefficients,
    })
}
