//! Ground truth by brute force: for integer inputs the (vertex, charge) state
//! graph is finite, and travel plans are exactly its paths. Search it
//! directly.
//!
//! Nothing here shares code with the energetic or reduction solvers.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::numeric::{Int, Scalar};

pub const DEFAULT_STATE_BUDGET: u128 = 1_000_000;

/// Converts a float graph to an integer one, refusing fractional values.
pub fn integral_graph(g: &Graph<f64>) -> Result<Graph<Int>> {
    let as_int = |v: f64, what: &str| -> Result<Int> {
        if v.is_infinite() && v > 0.0 {
            Ok(Int::INFINITY)
        } else if v.fract() == 0.0 && v.abs() <= 1e15 {
            Ok(v as Int)
        } else {
            Err(Error::NonIntegral(format!("{what} {v}")))
        }
    };
    let price = g
        .prices()
        .iter()
        .map(|&p| as_int(p, "price"))
        .collect::<Result<_>>()?;
    let arcs = g
        .arcs()
        .iter()
        .map(|a| {
            Ok(crate::graph::Arc {
                tail: a.tail,
                head: a.head,
                cost: as_int(a.cost, "arc cost")?,
            })
        })
        .collect::<Result<_>>()?;
    Graph::new(price, as_int(g.capacity(), "capacity")?, arcs)
}

struct StateSpace {
    n: usize,
    levels: usize,
    out: Vec<Vec<(usize, Int)>>,
}

impl StateSpace {
    fn new(g: &Graph<Int>, layers: u128, budget: u128) -> Result<Self> {
        let levels = (g.capacity() as u128).saturating_add(1);
        let states = (g.n() as u128).saturating_mul(levels).saturating_mul(layers);
        if states > budget {
            return Err(Error::BudgetExceeded { states, budget });
        }
        let mut out = vec![Vec::new(); g.n()];
        for a in g.arcs() {
            out[a.tail].push((a.head, a.cost));
        }
        Ok(StateSpace {
            n: g.n(),
            levels: levels as usize,
            out,
        })
    }

    /// Charge after traversing `cost` from `b`, if allowed.
    fn traverse(&self, b: usize, cost: Int) -> Option<usize> {
        let b = b as Int;
        (b >= cost).then(|| (b - cost).min(self.levels as Int - 1) as usize)
    }
}

fn check_source(g: &Graph<Int>, s: VertexId) -> Result<()> {
    if s >= g.n() {
        return Err(Error::InvalidArgument(format!("source {s} out of range 0..{}", g.n())));
    }
    Ok(())
}

/// Minimum plan cost from `s` (empty battery) to every vertex; unit charging
/// increments suffice since cost is linear in the amount.
pub fn oracle_mcp(g: &Graph<Int>, s: VertexId, budget: u128) -> Result<Vec<Int>> {
    check_source(g, s)?;
    let sp = StateSpace::new(g, 1, budget)?;
    let lv = sp.levels;
    let idx = |v: usize, b: usize| v * lv + b;
    let mut dist = vec![Int::INFINITY; sp.n * lv];
    let mut heap = BinaryHeap::new();
    dist[idx(s, 0)] = 0;
    heap.push(Reverse((0 as Int, s, 0usize)));
    while let Some(Reverse((d, v, b))) = heap.pop() {
        if d > dist[idx(v, b)] {
            continue;
        }
        let mut relax = |w: usize, c: usize, nd: Int| {
            if nd < dist[idx(w, c)] {
                dist[idx(w, c)] = nd;
                heap.push(Reverse((nd, w, c)));
            }
        };
        for &(w, cost) in &sp.out[v] {
            if let Some(c) = sp.traverse(b, cost) {
                relax(w, c, d);
            }
        }
        let price = g.price(v);
        if price.is_finite() && b + 1 < lv {
            relax(v, b + 1, d + price);
        }
    }
    Ok((0..sp.n)
        .map(|t| (0..lv).map(|b| dist[idx(t, b)]).min().unwrap_or(Int::INFINITY))
        .collect())
}

/// Minimum plan cost using at most `delta` charging stops. One stop may add
/// any amount, so recharge edges jump straight to every higher charge.
pub fn oracle_mcp_bounded(g: &Graph<Int>, s: VertexId, delta: usize, budget: u128) -> Result<Vec<Int>> {
    check_source(g, s)?;
    let layers = delta as u128 + 1;
    let sp = StateSpace::new(g, layers, budget)?;
    let (n, lv) = (sp.n, sp.levels);
    let idx = |v: usize, b: usize, k: usize| (k * n + v) * lv + b;
    let mut dist = vec![Int::INFINITY; n * lv * (delta + 1)];
    let mut heap = BinaryHeap::new();
    dist[idx(s, 0, 0)] = 0;
    heap.push(Reverse((0 as Int, s, 0usize, 0usize)));
    while let Some(Reverse((d, v, b, k))) = heap.pop() {
        if d > dist[idx(v, b, k)] {
            continue;
        }
        let mut relax = |w: usize, c: usize, kk: usize, nd: Int| {
            if nd < dist[idx(w, c, kk)] {
                dist[idx(w, c, kk)] = nd;
                heap.push(Reverse((nd, w, c, kk)));
            }
        };
        for &(w, cost) in &sp.out[v] {
            if let Some(c) = sp.traverse(b, cost) {
                relax(w, c, k, d);
            }
        }
        let price = g.price(v);
        if price.is_finite() && k < delta {
            for c in b + 1..lv {
                relax(v, c, k + 1, d + price * (c - b) as Int);
            }
        }
    }
    Ok((0..n)
        .map(|t| {
            (0..=delta)
                .flat_map(|k| (0..lv).map(move |b| (k, b)))
                .map(|(k, b)| dist[idx(t, b, k)])
                .min()
                .unwrap_or(Int::INFINITY)
        })
        .collect())
}

/// Maximum charge reachable at each vertex from `(s, a)` using arc
/// traversals only; `-inf` when unreachable.
pub fn oracle_mfc(g: &Graph<Int>, s: VertexId, a: Int, budget: u128) -> Result<Vec<Int>> {
    check_source(g, s)?;
    if a < 0 || a > g.capacity() {
        return Err(Error::InvalidArgument(format!("initial charge {a} outside [0, {}]", g.capacity())));
    }
    let sp = StateSpace::new(g, 1, budget)?;
    let lv = sp.levels;
    let mut seen = vec![false; sp.n * lv];
    let mut queue = VecDeque::new();
    seen[s * lv + a as usize] = true;
    queue.push_back((s, a as usize));
    while let Some((v, b)) = queue.pop_front() {
        for &(w, cost) in &sp.out[v] {
            if let Some(c) = sp.traverse(b, cost) {
                if !seen[w * lv + c] {
                    seen[w * lv + c] = true;
                    queue.push_back((w, c));
                }
            }
        }
    }
    Ok((0..sp.n)
        .map(|t| {
            (0..lv)
                .rev()
                .find(|&b| seen[t * lv + b])
                .map_or(Int::NEG_INFINITY, |b| b as Int)
        })
        .collect())
}

/// Minimum initial charge at `s` needed to reach each target with at least
/// `b`, by scanning initial charges upward; `+inf` if even a full battery
/// fails.
pub fn oracle_mic_row(g: &Graph<Int>, s: VertexId, b: Int, budget: u128) -> Result<Vec<Int>> {
    let mut need = vec![Int::INFINITY; g.n()];
    for a in 0..=g.capacity() {
        let alpha = oracle_mfc(g, s, a, budget)?;
        for (t, &reach) in alpha.iter().enumerate() {
            if need[t].is_pos_inf() && reach >= b {
                need[t] = a;
            }
        }
    }
    Ok(need)
}

/// Textbook Dijkstra on non-negative arc costs (no battery semantics).
pub fn plain_shortest_paths(g: &Graph<Int>, s: VertexId) -> Vec<Int> {
    let mut out = vec![Vec::new(); g.n()];
    for a in g.arcs() {
        out[a.tail].push((a.head, a.cost));
    }
    let mut dist = vec![Int::INFINITY; g.n()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0 as Int, s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, c) in &out[v] {
            debug_assert!(c >= 0);
            if d + c < dist[w] {
                dist[w] = d + c;
                heap.push(Reverse((d + c, w)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    const INF: Int = Int::INFINITY;
    const NEG: Int = Int::NEG_INFINITY;
    const BUDGET: u128 = DEFAULT_STATE_BUDGET;

    fn i1() -> Graph<Int> {
        parse_graph("3 2 5\n0 1\n1 2\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    fn i4() -> Graph<Int> {
        parse_graph("3 2 5\n0 10\n1 1\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    #[test]
    fn mcp_small_instances() {
        assert_eq!(oracle_mcp(&i1(), 0, BUDGET).unwrap(), vec![0, 2, 5]);
        assert_eq!(oracle_mcp(&i4(), 0, BUDGET).unwrap(), vec![0, 20, 23]);
    }

    #[test]
    fn no_stations_cannot_move() {
        let g: Graph<Int> = parse_graph("3 2 5\n0 inf\n1 inf\n2 inf\n0 1 2\n1 2 3\n").unwrap();
        assert_eq!(oracle_mcp(&g, 0, BUDGET).unwrap(), vec![0, INF, INF]);
    }

    #[test]
    fn bounded_small_instances() {
        let g = i4();
        assert_eq!(oracle_mcp_bounded(&g, 0, 1, BUDGET).unwrap()[2], 50);
        assert_eq!(oracle_mcp_bounded(&g, 0, 2, BUDGET).unwrap()[2], 23);
        assert_eq!(oracle_mcp_bounded(&g, 0, 0, BUDGET).unwrap(), vec![0, INF, INF]);
        assert_eq!(
            oracle_mcp_bounded(&g, 0, 3, BUDGET).unwrap(),
            oracle_mcp(&g, 0, BUDGET).unwrap()
        );
    }

    #[test]
    fn mfc_small_instances() {
        assert_eq!(oracle_mfc(&i1(), 0, 5, BUDGET).unwrap(), vec![5, 3, 0]);
        let i3: Graph<Int> = parse_graph("3 3 3\n0 1\n1 1\n2 1\n0 1 1\n1 0 -2\n1 2 2\n").unwrap();
        assert_eq!(oracle_mfc(&i3, 0, 1, BUDGET).unwrap(), vec![3, 2, 0]);
        assert_eq!(oracle_mfc(&i1(), 0, 0, BUDGET).unwrap(), vec![0, NEG, NEG]);
    }

    #[test]
    fn mic_row() {
        assert_eq!(oracle_mic_row(&i1(), 0, 0, BUDGET).unwrap(), vec![0, 2, 5]);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(oracle_mcp(&i1(), 0, 10), Err(Error::BudgetExceeded { states: 18, .. })));
        assert!(oracle_mcp_bounded(&i1(), 0, 5, 100).is_err());
    }

    #[test]
    fn refuses_fractional_graphs() {
        let g: Graph<f64> = parse_graph("2 1 5\n0 1\n1 1\n0 1 2.5\n").unwrap();
        assert!(matches!(integral_graph(&g), Err(Error::NonIntegral(_))));
        let g: Graph<f64> = parse_graph("2 1 5\n0 1\n1 inf\n0 1 2\n").unwrap();
        assert_eq!(integral_graph(&g).unwrap().price(1), INF);
    }

    #[test]
    fn relabeling_invariance() {
        // reverse the vertex order of I4
        let g: Graph<Int> = parse_graph("3 2 5\n2 10\n1 1\n0 inf\n2 1 2\n1 0 3\n").unwrap();
        assert_eq!(oracle_mcp(&g, 2, BUDGET).unwrap(), vec![23, 20, 0]);
    }
}
