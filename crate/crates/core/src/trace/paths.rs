//! Closed combinatorial paths and their cycle classes.
//!
//! A path is a start vertex followed by steps; every step traverses an edge
//! from its current endpoint to the other one, so a path can never turn
//! inside an edge. The pair `(edge, arrival vertex)` is the key of a step.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{End, Slot, WeightedGraph};
use crate::linalg::{CMatrix, C64, ONE};
use crate::space::TotalVertexSpace;

pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialPath {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl CombinatorialPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn is_closed(&self) -> bool {
        self.end() == self.start
    }

    /// Vertices visited, starting with `start`.
    pub fn vertices(&self) -> Vec<usize> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.to)).collect()
    }

    /// Checks that every step leaves along an incident edge to its other end.
    pub fn is_valid(&self, g: &WeightedGraph) -> bool {
        let mut at = self.start;
        for s in &self.steps {
            let e = g.edge(s.edge);
            let other = if e.tail == at {
                e.head
            } else if e.head == at {
                e.tail
            } else {
                return false;
            };
            if other != s.to || e.is_loop() {
                return false;
            }
            at = s.to;
        }
        true
    }

    pub fn metric_length(&self, g: &WeightedGraph) -> f64 {
        self.steps.iter().map(|s| g.edge(s.edge).length).sum()
    }

    /// The cyclic rotation starting after the first `k` steps.
    pub fn rotate(&self, k: usize) -> CombinatorialPath {
        let n = self.steps.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let start = if k == 0 { self.start } else { self.steps[k - 1].to };
        let steps = self.steps[k..].iter().chain(&self.steps[..k]).copied().collect();
        CombinatorialPath { start, steps }
    }
}

fn ensure_no_loops(g: &WeightedGraph) -> Result<()> {
    if g.has_self_loops() {
        return Err(Error::precondition("paths and cycles need a graph without self-loops"));
    }
    Ok(())
}

/// `(edge, other endpoint)` for every edge at `v`, in slot order.
fn moves(g: &WeightedGraph, v: usize) -> Vec<Step> {
    g.slots(v)
        .iter()
        .map(|s| Step {
            edge: s.edge,
            to: g.edge(s.edge).endpoint(s.end.opposite()),
        })
        .collect()
}

/// All closed paths with exactly `n` steps; for `n = 0` one trivial path per
/// vertex.
pub fn enumerate_properly_closed(g: &WeightedGraph, n: usize) -> Result<Vec<CombinatorialPath>> {
    enumerate_closed_capped(g, n, DEFAULT_PATH_CAP)
}

pub fn enumerate_closed_capped(g: &WeightedGraph, n: usize, cap: usize) -> Result<Vec<CombinatorialPath>> {
    ensure_no_loops(g)?;
    let mut out = Vec::new();
    let all_moves: Vec<Vec<Step>> = (0..g.vertex_count()).map(|v| moves(g, v)).collect();
    for start in 0..g.vertex_count() {
        let mut steps = Vec::with_capacity(n);
        extend(&all_moves, start, start, n, &mut steps, &mut out, cap)?;
    }
    Ok(out)
}

fn extend(
    moves: &[Vec<Step>],
    start: usize,
    at: usize,
    remaining: usize,
    steps: &mut Vec<Step>,
    out: &mut Vec<CombinatorialPath>,
    cap: usize,
) -> Result<()> {
    if remaining == 0 {
        if at == start {
            if out.len() >= cap {
                return Err(Error::EnumerationOverflow(cap));
            }
            out.push(CombinatorialPath { start, steps: steps.clone() });
        }
        return Ok(());
    }
    for &m in &moves[at] {
        steps.push(m);
        extend(moves, start, m.to, remaining - 1, steps, out, cap)?;
        steps.pop();
    }
    Ok(())
}

/// Index of the lexicographically least rotation (Booth).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = f[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k
}

/// Smallest period of the cyclic sequence that divides its length.
pub fn smallest_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// Rotation class of a closed path, held through its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    /// Canonical key sequence.
    pub steps: Vec<Step>,
    /// Number of repetitions of the prime base.
    pub power: usize,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        self.power == 1
    }

    pub fn prime_base(&self) -> Cycle {
        let m = self.steps.len() / self.power;
        Cycle { steps: self.steps[..m].to_vec(), power: 1 }
    }

    pub fn path(&self) -> CombinatorialPath {
        CombinatorialPath {
            start: self.steps.last().map_or(0, |s| s.to),
            steps: self.steps.clone(),
        }
    }

    pub fn metric_length(&self, g: &WeightedGraph) -> f64 {
        self.steps.iter().map(|s| g.edge(s.edge).length).sum()
    }
}

/// Canonical form of a closed path with at least one step.
pub fn cycle_normal_form(c: &CombinatorialPath) -> Result<Cycle> {
    if c.steps.is_empty() || !c.is_closed() {
        return Err(Error::InvalidArgument("path is not properly closed".into()));
    }
    let k = least_rotation(&c.steps);
    let steps = c.rotate(k).steps;
    let power = steps.len() / smallest_period(&steps);
    Ok(Cycle { steps, power })
}

/// Slot of `edge` at the endpoint `v` (no self-loops).
fn slot_at(g: &WeightedGraph, edge: usize, v: usize) -> (usize, usize) {
    let end = if g.edge(edge).tail == v { End::Minus } else { End::Plus };
    g.locate_slot(Slot { edge, end })
}

/// `Π S_{e_i, e_{i+1}}(v_i)` around a closed path: at every arrival vertex the
/// entry pairs the arrival edge (row) with the departure edge (column).
pub fn scattering_amplitude_path(g: &WeightedGraph, total: &TotalVertexSpace, c: &CombinatorialPath) -> C64 {
    let s = total.scattering();
    let n = c.steps.len();
    let mut amp = ONE;
    for i in 0..n {
        let arrive = c.steps[i];
        let depart = c.steps[(i + 1) % n];
        let (v, row) = slot_at(g, arrive.edge, arrive.to);
        let (_, col) = slot_at(g, depart.edge, arrive.to);
        amp *= s.entry(v, row, col);
    }
    amp
}

pub fn scattering_amplitude(g: &WeightedGraph, total: &TotalVertexSpace, c: &Cycle) -> C64 {
    scattering_amplitude_path(g, total, &c.path())
}

/// `W(c) = tr A(v₀,v₁) A(v₁,v₂) ⋯ A(v_{n-1},v₀)`.
pub fn discrete_weight(g: &WeightedGraph, total: &TotalVertexSpace, c: &CombinatorialPath) -> Result<C64> {
    let pp = crate::discrete::principal_part(g, total)?;
    discrete_weight_with(&pp, total, c)
}

pub(crate) fn discrete_weight_with(
    pp: &crate::discrete::PrincipalPart,
    total: &TotalVertexSpace,
    c: &CombinatorialPath,
) -> Result<C64> {
    let d0 = total.space(c.start).dim();
    let mut prod = CMatrix::identity(d0, d0);
    let mut at = c.start;
    for s in &c.steps {
        let block = pp
            .block(at, s.to)
            .ok_or_else(|| Error::InvalidArgument("path leaves along a missing edge".into()))?;
        prod *= block;
        at = s.to;
    }
    Ok(prod.trace())
}

/// Every cycle (prime or not) whose metric length is at most `cutoff`, each
/// exactly once, with exactly-zero amplitudes pruned. Keys are `(edge,
/// arrival vertex)` pairs; a walk is kept only when it equals its least
/// rotation.
pub fn enumerate_cycles(
    g: &WeightedGraph,
    total: &TotalVertexSpace,
    cutoff: f64,
    cap: usize,
) -> Result<Vec<(Cycle, C64)>> {
    ensure_no_loops(g)?;
    let s = total.scattering();
    let all_moves: Vec<Vec<Step>> = (0..g.vertex_count()).map(|v| moves(g, v)).collect();
    // transition amplitude from arriving on `a` into departing on `b` at `v`
    let transition = |a: Step, b: Step| -> C64 {
        let (v, row) = slot_at(g, a.edge, a.to);
        let (_, col) = slot_at(g, b.edge, a.to);
        s.entry(v, row, col)
    };
    let mut found: BTreeMap<Vec<Step>, C64> = BTreeMap::new();
    let mut visited = 0usize;
    let mut firsts: Vec<Step> = all_moves.iter().flatten().copied().collect();
    firsts.sort();
    for &first in &firsts {
        let e = g.edge(first.edge);
        let start = if e.head == first.to { e.tail } else { e.head };
        let len0 = g.edge(first.edge).length;
        if len0 > cutoff {
            continue;
        }
        let mut stack: Vec<Step> = vec![first];
        dfs(
            g, &all_moves, &transition, start, first, len0, ONE, cutoff, cap, &mut visited, &mut stack,
            &mut found,
        )?;
    }
    Ok(found
        .into_iter()
        .map(|(steps, amp)| {
            let power = steps.len() / smallest_period(&steps);
            (Cycle { steps, power }, amp)
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &WeightedGraph,
    moves: &[Vec<Step>],
    transition: &dyn Fn(Step, Step) -> C64,
    start: usize,
    first: Step,
    length: f64,
    amp: C64,
    cutoff: f64,
    cap: usize,
    visited: &mut usize,
    stack: &mut Vec<Step>,
    found: &mut BTreeMap<Vec<Step>, C64>,
) -> Result<()> {
    *visited += 1;
    if *visited > cap {
        return Err(Error::EnumerationOverflow(cap));
    }
    let last = *stack.last().expect("non-empty walk");
    if last.to == start {
        let closing = transition(last, first);
        if closing != C64::new(0.0, 0.0) && least_rotation(stack) == 0 {
            found.insert(stack.clone(), amp * closing);
        }
    }
    for &m in &moves[last.to] {
        if m < first {
            continue;
        }
        let l = length + g.edge(m.edge).length;
        if l > cutoff * (1.0 + 1e-12) {
            continue;
        }
        let t = transition(last, m);
        if t == C64::new(0.0, 0.0) {
            continue;
        }
        stack.push(m);
        dfs(g, moves, transition, start, first, l, amp * t, cutoff, cap, visited, stack, found)?;
        stack.pop();
    }
    Ok(())
}
