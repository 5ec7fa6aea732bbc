//! Variants built on top of the all-pairs reduction: non-zero initial
//! charges, cheap single-source additions, and shortest paths expressed as a
//! plan problem.

use crate::energetic::EnergeticSolver;
use crate::error::{Error, Result};
use crate::graph::{Arc, Graph, VertexId};
use crate::minplus::{minplus_product, CostMatrix};
use crate::numeric::Scalar;
use crate::reduction::{mcp_all_pairs, state_index, Level, PlanCostResult, WorkStats};

/// Adds a companion `n + v` per vertex with no charging and an arc
/// `(n + v, v)` of cost `-a(v)`. Starting empty at `n + v` is starting at `v`
/// with charge `a(v)`.
pub fn with_initial_charges<T: Scalar>(g: &Graph<T>, initial: &[T]) -> Result<Graph<T>> {
    let n = g.n();
    if initial.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} initial charges for {n} vertices",
            initial.len()
        )));
    }
    let cap = g.capacity();
    if let Some((v, a)) = initial.iter().enumerate().find(|(_, a)| !(**a >= T::ZERO && **a <= cap)) {
        return Err(Error::InvalidArgument(format!("initial charge {a} at vertex {v} outside [0, {cap}]")));
    }
    let mut price = g.prices().to_vec();
    price.extend(std::iter::repeat_n(T::INFINITY, n));
    let mut arcs = g.arcs().to_vec();
    arcs.extend(initial.iter().enumerate().map(|(v, &a)| Arc {
        tail: n + v,
        head: v,
        cost: T::ZERO.minus(a),
    }));
    Graph::new(price, cap, arcs)
}

/// Cars available at a fresh source: `(vertex, initial charge)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec<T> {
    pub cars: Vec<(VertexId, T)>,
}

impl<T: Scalar> SourceSpec<T> {
    pub fn new(cars: Vec<(VertexId, T)>) -> Self {
        SourceSpec { cars }
    }

    fn check(&self, g: &Graph<T>) -> Result<()> {
        for &(v, a) in &self.cars {
            if v >= g.n() {
                return Err(Error::InvalidArgument(format!("car vertex {v} out of range")));
            }
            if !(a >= T::ZERO && a <= g.capacity()) {
                return Err(Error::InvalidArgument(format!("car charge {a} outside [0, {}]", g.capacity())));
            }
        }
        Ok(())
    }

    /// `g` plus the source `s0 = n` with one arc of cost `-a` per car.
    pub fn augment(&self, g: &Graph<T>) -> Result<Graph<T>> {
        self.check(g)?;
        let n = g.n();
        let mut price = g.prices().to_vec();
        price.push(T::INFINITY);
        let mut arcs = g.arcs().to_vec();
        arcs.extend(self.cars.iter().map(|&(v, a)| Arc {
            tail: n,
            head: v,
            cost: T::ZERO.minus(a),
        }));
        Graph::new(price, g.capacity(), arcs)
    }
}

#[derive(Debug, Clone)]
pub struct AddSourceOutput<T> {
    /// `rho(s0, v)` for every original vertex `v`.
    pub rho: Vec<T>,
    pub work: WorkStats,
}

/// Single-source plan costs from a new source vertex, reusing a finished
/// all-pairs result. Only `alpha_{B,0}(s0, .)` is solved afresh; the rest is
/// a `1 x p` by `p x 2n` product and a `1 x 2n` by `2n x n` product.
pub fn add_source<T: Scalar>(
    g: &Graph<T>,
    pre: &PlanCostResult<T>,
    spec: &SourceSpec<T>,
    solver: &dyn EnergeticSolver<T>,
) -> Result<AddSourceOutput<T>> {
    if !solver.is_strict() {
        return Err(Error::StrictModeRequired(
            "source additions assume a graph without negative cycles".into(),
        ));
    }
    if pre.hop_bound.is_some() {
        return Err(Error::InvalidArgument("source additions need an unbounded all-pairs result".into()));
    }
    let n = g.n();
    if pre.n() != n {
        return Err(Error::DimensionMismatch(format!("{}-vertex result for {n}-vertex graph", pre.n())));
    }
    let dist = pre.aux_dist.as_ref().ok_or_else(|| Error::Internal("missing auxiliary distances".into()))?;
    let augmented = spec.augment(g)?;
    let source = solver.solve(&augmented, n, T::ZERO, false)?;
    let alpha = &source.values;

    let stations = pre.aux.stations();
    let p = stations.len();
    let mut left = CostMatrix::filled(1, p, T::INFINITY);
    for (k, &x) in stations.iter().enumerate() {
        if !alpha[x].is_neg_inf() {
            left.set(0, k, T::ZERO.minus(g.price(x).times(alpha[x])));
        }
    }
    let through = minplus_product(&left, pre.aux.station_costs())?;

    let cap = g.capacity();
    let mut first = CostMatrix::filled(1, 2 * n, T::INFINITY);
    for level in Level::BOTH {
        for u in 0..n {
            let j = state_index(n, u, level);
            let cost = if alpha[u] >= level.charge(cap) {
                T::ZERO
            } else {
                through.get(0, j).positive_part()
            };
            first.set(0, j, cost);
        }
    }

    let mut to_empty = CostMatrix::filled(2 * n, n, T::INFINITY);
    for i in 0..2 * n {
        for v in 0..n {
            to_empty.set(i, v, dist.get(i, state_index(n, v, Level::Empty)));
        }
    }
    let rho = minplus_product(&first, &to_empty)?;
    let product_terms = (p * 2 * n + 2 * n * n) as u64;
    Ok(AddSourceOutput {
        rho: rho.row(0).to_vec(),
        work: WorkStats {
            relaxations: source.relaxations,
            product_terms,
            closure_terms: 0,
        },
    })
}

/// Shortest-path distances of a non-negative graph, computed as plan costs:
/// each `v` gets a companion `v'` (the only stations, unit price) with a free
/// arc `(v', v)`, and the battery holds `n * max c`.
pub fn apsp_via_mcp<T: Scalar>(g: &Graph<T>, solver: &dyn EnergeticSolver<T>) -> Result<CostMatrix<T>> {
    if let Some(a) = g.arcs().iter().find(|a| a.cost < T::ZERO) {
        return Err(Error::InvalidArgument(format!(
            "negative arc cost {} on {} -> {}",
            a.cost, a.tail, a.head
        )));
    }
    let n = g.n();
    let mut price = vec![T::INFINITY; n];
    price.extend(std::iter::repeat_n(T::from_i64(1), n));
    let mut arcs = g.arcs().to_vec();
    arcs.extend((0..n).map(|v| Arc {
        tail: n + v,
        head: v,
        cost: T::ZERO,
    }));
    let capacity = T::from_i64(n as i64).times(g.max_abs_cost());
    let lifted = Graph::new(price, capacity, arcs)?;
    let res = mcp_all_pairs(&lifted, solver, false)?;
    let mut dist = CostMatrix::filled(n, n, T::INFINITY);
    for s in 0..n {
        for t in 0..n {
            dist.set(s, t, res.rho.get(n + s, t));
        }
    }
    Ok(dist)
}
