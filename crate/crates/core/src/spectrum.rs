use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Discrete,
    Dtn,
    Bond,
    Equilateral,
    /// An equilateral lift landing on the Dirichlet set, where the
    /// multiplicity transfer is not guaranteed.
    DirichletPoint,
    Fem,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Discrete => "discrete",
            Method::Dtn => "dtn",
            Method::Bond => "bond",
            Method::Equilateral => "equilateral",
            Method::DirichletPoint => "dirichlet-point, multiplicity unverified",
            Method::Fem => "fem",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
    pub method: Method,
    /// Error estimate where the method provides one (FEM), else zero.
    pub error: f64,
}

/// Sorted eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Eigenvalue>,
    /// Gap below which neighbouring raw values were merged.
    pub tolerance: f64,
    /// Intervals the method could not examine.
    pub unresolved: Vec<(f64, f64)>,
}

impl SpectrumResult {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }

    /// The `k`-th eigenvalue counted with multiplicity (0-based).
    pub fn nth(&self, k: usize) -> Option<f64> {
        let mut seen = 0;
        for e in &self.eigenvalues {
            seen += e.multiplicity;
            if k < seen {
                return Some(e.value);
            }
        }
        None
    }

    pub fn sort(&mut self) {
        self.eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value));
    }
}

/// Groups ascending values into clusters whose consecutive gaps are at most
/// `delta`; each cluster is reported at its mean.
pub fn cluster(values: &[f64], delta: f64, method: Method) -> SpectrumResult {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[j - 1] <= delta {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        out.push(Eigenvalue {
            value: mean,
            multiplicity: j - i,
            method,
            error: 0.0,
        });
        i = j;
    }
    SpectrumResult {
        eigenvalues: out,
        tolerance: delta,
        unresolved: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_close_values() {
        let s = cluster(&[1.5, 0.0, 1.5 + 1e-12], 1e-8, Method::Discrete);
        assert_eq!(s.eigenvalues.len(), 2);
        assert_eq!(s.eigenvalues[1].multiplicity, 2);
        assert_eq!(s.total_multiplicity(), 3);
        assert!((s.nth(2).unwrap() - 1.5).abs() < 1e-11);
        assert_eq!(s.nth(3), None);
    }
}
