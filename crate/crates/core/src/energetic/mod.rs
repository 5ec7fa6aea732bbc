//! Optimal energetic paths with no recharging: maximum final charge
//! `alpha_{B,a}(s,t)` and minimum initial charge `beta_{B,b}(s,t)`.
//!
//! Unreachable pairs are `-inf` in alpha tables and `+inf` in beta tables.
//! Beta is obtained from alpha on the reversed graph:
//! `beta_{B,b}(s,t) = B - alpha^rev_{B,B-b}(t,s)`.

mod solver;

pub use solver::{
    solver_by_name, EnergeticSolver, FixpointRelaxation, SingleSource, SolverRegistry, StrictRelaxation,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::numeric::Scalar;

/// Charge after traversing an arc of energy `cost` holding `charge`:
/// `-inf` when the arc cannot be paid, else `min(charge - cost, capacity)`.
#[inline]
pub fn step<T: Scalar>(charge: T, cost: T, capacity: T) -> T {
    if charge.is_neg_inf() || charge < cost {
        T::NEG_INFINITY
    } else {
        charge.minus(cost).min_of(capacity)
    }
}

/// Per-vertex log of accepted relaxations from one source. Each entry is
/// `(sequence number, arc index)`; sequence numbers increase globally, so
/// walking predecessors with strictly decreasing numbers always terminates.
#[derive(Debug, Clone)]
pub struct PathHistory {
    source: VertexId,
    next_seq: u32,
    updates: Vec<Vec<(u32, u32)>>,
}

impl PathHistory {
    pub(crate) fn new(source: VertexId, n: usize) -> Self {
        PathHistory {
            source,
            next_seq: 1,
            updates: vec![Vec::new(); n],
        }
    }

    pub(crate) fn record(&mut self, head: VertexId, arc: usize) {
        self.updates[head].push((self.next_seq, arc as u32));
        self.next_seq += 1;
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    /// Total number of recorded updates; bounds every reconstructed path.
    pub fn len(&self) -> usize {
        (self.next_seq - 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.next_seq == 1
    }

    /// Arc indices of the walk realizing the final value at `target`, in
    /// walk order. `tail_of` maps an arc index to the vertex it leaves.
    pub fn arcs_to(&self, target: VertexId, tail_of: impl Fn(usize) -> VertexId) -> Option<Vec<usize>> {
        let mut arcs = Vec::new();
        let mut v = target;
        let mut bound = u32::MAX;
        loop {
            match self.updates[v].iter().rev().find(|(seq, _)| *seq < bound) {
                Some(&(seq, arc)) => {
                    arcs.push(arc as usize);
                    bound = seq;
                    v = tail_of(arc as usize);
                }
                None if v == self.source => break,
                None => return None,
            }
        }
        arcs.reverse();
        Some(arcs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// alpha: maximum final charge given the initial charge.
    MaxFinalCharge,
    /// beta: minimum initial charge given the required final charge.
    MinInitialCharge,
}

/// n x n table of alpha or beta values for one boundary charge.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeMatrix<T> {
    quantity: Quantity,
    boundary: T,
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> ChargeMatrix<T> {
    pub fn from_rows(quantity: Quantity, boundary: T, rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let values: Vec<T> = rows.into_iter().flatten().collect();
        assert_eq!(values.len(), n * n, "charge matrix must be square");
        ChargeMatrix {
            quantity,
            boundary,
            n,
            values,
        }
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    /// Initial charge `a` for alpha tables, required final charge `b` for beta.
    pub fn boundary(&self) -> T {
        self.boundary
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: VertexId, t: VertexId) -> T {
        self.values[s * self.n + t]
    }

    pub fn row(&self, s: VertexId) -> &[T] {
        &self.values[s * self.n..(s + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|s| self.row(s).to_vec()).collect()
    }
}

/// A charge matrix together with the relaxation histories needed to turn
/// entries back into concrete walks.
#[derive(Debug, Clone)]
pub struct ChargeTable<T> {
    pub matrix: ChargeMatrix<T>,
    /// alpha: indexed by source on the graph itself; beta: indexed by the
    /// target, recorded on the reversed graph.
    histories: Option<Vec<PathHistory>>,
    pub relaxations: u64,
}

impl<T: Scalar> ChargeTable<T> {
    pub fn has_witnesses(&self) -> bool {
        self.histories.is_some()
    }

    /// Forward arc indices of an optimal no-recharge walk from `s` to `t`.
    /// Walking it from the boundary charge (alpha) or from `beta(s,t)` (beta)
    /// realizes the tabulated value.
    pub fn path(&self, g: &Graph<T>, s: VertexId, t: VertexId) -> Result<Vec<usize>> {
        let histories = self.histories.as_ref().ok_or(Error::WitnessUnavailable)?;
        let walk = match self.matrix.quantity {
            Quantity::MaxFinalCharge => histories[s].arcs_to(t, |i| g.arc(i).tail),
            Quantity::MinInitialCharge => histories[t]
                .arcs_to(s, |i| g.arc(i).head)
                .map(|mut arcs| {
                    arcs.reverse();
                    arcs
                }),
        };
        walk.ok_or_else(|| Error::Internal(format!("no recorded walk from {s} to {t}")))
    }
}

/// `alpha_{B,a}(s, .)` for one source.
pub fn mfc_single_source<T: Scalar>(
    g: &Graph<T>,
    s: VertexId,
    a: T,
    solver: &dyn EnergeticSolver<T>,
) -> Result<Vec<T>> {
    Ok(solver.solve(g, s, a, false)?.values)
}

/// All-pairs `alpha_{B,a}`; sources run in parallel.
pub fn mfc_all_pairs<T: Scalar>(
    g: &Graph<T>,
    a: T,
    solver: &dyn EnergeticSolver<T>,
    record: bool,
) -> Result<ChargeTable<T>> {
    let rows: Vec<SingleSource<T>> = (0..g.n())
        .into_par_iter()
        .map(|s| solver.solve(g, s, a, record))
        .collect::<Result<_>>()?;
    let relaxations = rows.iter().map(|r| r.relaxations).sum();
    let mut values = Vec::with_capacity(rows.len());
    let mut histories = Vec::with_capacity(rows.len());
    for r in rows {
        values.push(r.values);
        if let Some(h) = r.history {
            histories.push(h);
        }
    }
    Ok(ChargeTable {
        matrix: ChargeMatrix::from_rows(Quantity::MaxFinalCharge, a, values),
        histories: record.then_some(histories),
        relaxations,
    })
}

/// All-pairs `beta_{B,b}` via the reversal identity.
pub fn mic_all_pairs<T: Scalar>(
    g: &Graph<T>,
    b: T,
    solver: &dyn EnergeticSolver<T>,
    record: bool,
) -> Result<ChargeTable<T>> {
    let cap = g.capacity();
    if !(b >= T::ZERO && b <= cap) {
        return Err(Error::InvalidArgument(format!("final charge {b} outside [0, {cap}]")));
    }
    let reversed = mfc_all_pairs(&g.reverse(), cap.minus(b), solver, record)?;
    let n = g.n();
    let rows = (0..n)
        .map(|s| {
            (0..n)
                .map(|t| {
                    let alpha = reversed.matrix.get(t, s);
                    if alpha.is_neg_inf() {
                        T::INFINITY
                    } else {
                        cap.minus(alpha)
                    }
                })
                .collect()
        })
        .collect();
    Ok(ChargeTable {
        matrix: ChargeMatrix::from_rows(Quantity::MinInitialCharge, b, rows),
        histories: reversed.histories,
        relaxations: reversed.relaxations,
    })
}

/// Minimum depletion `a - alpha_{B,a}(s,t)`, `+inf` if `t` is unreachable.
pub fn depletion<T: Scalar>(
    g: &Graph<T>,
    s: VertexId,
    t: VertexId,
    a: T,
    solver: &dyn EnergeticSolver<T>,
) -> Result<T> {
    if t >= g.n() {
        return Err(Error::InvalidArgument(format!("target {t} out of range")));
    }
    let alpha = mfc_single_source(g, s, a, solver)?[t];
    Ok(if alpha.is_neg_inf() { T::INFINITY } else { a.minus(alpha) })
}

/// Walks `arcs` from `charge`, returning the charge after each arc.
pub fn walk_charges<T: Scalar>(g: &Graph<T>, arcs: &[usize], mut charge: T) -> Vec<T> {
    arcs.iter()
        .map(|&i| {
            charge = step(charge, g.arc(i).cost, g.capacity());
            charge
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::numeric::Int;

    const NEG: Int = Int::NEG_INFINITY;
    const INF: Int = Int::INFINITY;

    fn i1() -> Graph<Int> {
        parse_graph("3 2 5\n0 1\n1 2\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    fn i3() -> Graph<Int> {
        parse_graph("3 3 3\n0 1\n1 1\n2 1\n0 1 1\n1 0 -2\n1 2 2\n").unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(step::<Int>(5, 2, 5), 3);
        assert_eq!(step::<Int>(1, 2, 5), NEG);
        assert_eq!(step::<Int>(5, -3, 5), 5);
        assert_eq!(step::<Int>(NEG, -3, 5), NEG);
    }

    #[test]
    fn mfc_examples() {
        let g = i1();
        assert_eq!(mfc_single_source(&g, 0, 5, &StrictRelaxation).unwrap(), vec![5, 3, 0]);
        assert_eq!(mfc_single_source(&g, 0, 0, &StrictRelaxation).unwrap(), vec![0, NEG, NEG]);
    }

    #[test]
    fn negative_cycle_modes() {
        let g = i3();
        assert_eq!(
            mfc_single_source(&g, 0, 1, &FixpointRelaxation::default()).unwrap(),
            vec![3, 2, 0]
        );
        assert!(matches!(
            mfc_single_source(&g, 0, 1, &StrictRelaxation),
            Err(Error::NegativeCycleDetected { vertex: 0, .. })
        ));
    }

    #[test]
    fn fixpoint_cap_reports_not_converged() {
        let g = i3();
        let solver = FixpointRelaxation { max_rounds: Some(1) };
        assert!(matches!(
            mfc_single_source(&g, 0, 1, &solver),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn self_loop_negative_cycle_single_vertex() {
        let g: Graph<Int> = parse_graph("1 1 4\n0 inf\n0 0 -1\n").unwrap();
        assert!(mfc_single_source(&g, 0, 0, &StrictRelaxation).is_err());
        assert_eq!(mfc_single_source(&g, 0, 0, &FixpointRelaxation::default()).unwrap(), vec![4]);
    }

    #[test]
    fn all_pairs_and_mic() {
        let g = i1();
        let alpha = mfc_all_pairs(&g, 5, &StrictRelaxation, false).unwrap();
        assert_eq!(alpha.matrix.row(0), &[5, 3, 0]);
        for s in 0..3 {
            assert!(alpha.matrix.get(s, s) >= 5);
        }
        let beta = mic_all_pairs(&g, 0, &StrictRelaxation, false).unwrap();
        assert_eq!(beta.matrix.get(0, 2), 5);
        assert_eq!(beta.matrix.get(1, 2), 3);
        assert_eq!(beta.matrix.get(2, 0), INF);
        for t in 0..3 {
            assert_eq!(beta.matrix.get(t, t), 0);
        }
    }

    #[test]
    fn arcless_graph() {
        let g: Graph<Int> = parse_graph("3 0 4\n0 1\n1 1\n2 1\n").unwrap();
        let alpha = mfc_all_pairs(&g, 4, &StrictRelaxation, false).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                assert_eq!(alpha.matrix.get(s, t), if s == t { 4 } else { NEG });
            }
        }
    }

    #[test]
    fn depletion_examples() {
        let g = i1();
        assert_eq!(depletion(&g, 0, 2, 5, &StrictRelaxation).unwrap(), 5);
        assert_eq!(depletion(&g, 1, 1, 5, &StrictRelaxation).unwrap(), 0);
        assert_eq!(depletion(&g, 2, 0, 5, &StrictRelaxation).unwrap(), INF);
    }

    #[test]
    fn recorded_walks_realize_values() {
        let g = i3();
        let solver = FixpointRelaxation::default();
        let alpha = mfc_all_pairs(&g, 1, &solver, true).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                let value = alpha.matrix.get(s, t);
                if value.is_neg_inf() {
                    continue;
                }
                let arcs = alpha.path(&g, s, t).unwrap();
                let end = walk_charges(&g, &arcs, 1).last().copied().unwrap_or(1);
                assert_eq!(end, value, "walk {s}->{t}");
            }
        }
        let beta = mic_all_pairs(&g, 0, &solver, true).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                let need = beta.matrix.get(s, t);
                if need.is_pos_inf() {
                    continue;
                }
                let arcs = beta.path(&g, s, t).unwrap();
                let charges = walk_charges(&g, &arcs, need);
                assert!(charges.iter().all(|c| !c.is_neg_inf()));
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(solver_by_name::<Int>("strict").unwrap().name(), "strict");
        assert!(!solver_by_name::<f64>("fixpoint").unwrap().is_strict());
        assert!(solver_by_name::<Int>("dijkstra").is_err());
        assert_eq!(SolverRegistry::<Int>::default().names(), vec!["fixpoint", "strict"]);
    }
}
