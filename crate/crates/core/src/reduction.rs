//! Minimum-cost plans through the auxiliary state graph.
//!
//! Every vertex `u` gets two states, `u^0` ("at u with charge >= 0") and
//! `u^B` ("at u with a full battery"). The arc `u^a -> v^b` costs the cheapest
//! way to get from `u` holding `a` to `v` holding at least `b` with at most
//! one recharge:
//!
//! ```text
//! l(u^a, v^b) = min( 0                                  if alpha_a(u,v) >= b,
//!                    min_x r(x) * (beta_b(x,v) - alpha_a(u,x))^+ )
//! ```
//!
//! The inner minimum over charging stations `x` is a single min-plus product
//! of a `2n x p` matrix with a `p x 2n` matrix. Shortest paths from `s^0` to
//! `t^0` over these costs are the plan costs `rho(s,t)`; paths of at most
//! `k` arcs give plans with at most `k` recharges.

use crate::energetic::{mfc_all_pairs, mic_all_pairs, ChargeMatrix, ChargeTable, EnergeticSolver};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::minplus::{
    floyd_warshall, minplus_power_with_paths, minplus_product_with_argmin, CostMatrix, HopPaths,
    ShortestPaths, NONE,
};
use crate::numeric::Scalar;
use crate::plan::TravelPlan;

/// Charge level of an auxiliary state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Empty = 0,
    Full = 1,
}

impl Level {
    pub const BOTH: [Level; 2] = [Level::Empty, Level::Full];

    pub fn charge<T: Scalar>(self, capacity: T) -> T {
        match self {
            Level::Empty => T::ZERO,
            Level::Full => capacity,
        }
    }
}

/// Index of state `v^level` in the `2n x 2n` auxiliary matrices.
#[inline]
pub fn state_index(n: usize, v: VertexId, level: Level) -> usize {
    level as usize * n + v
}

#[inline]
fn state_of(n: usize, idx: usize) -> (VertexId, Level) {
    if idx < n {
        (idx, Level::Empty)
    } else {
        (idx - n, Level::Full)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxWitness<T> {
    Unreachable,
    NoRecharge,
    Station { vertex: VertexId, amount: T },
}

/// The four no-recharge tables the reduction consumes.
#[derive(Debug, Clone)]
pub struct EnergeticTables<T> {
    /// `alpha_{B,0}`, `alpha_{B,B}`.
    pub alpha: [ChargeTable<T>; 2],
    /// `beta_{B,0}`, `beta_{B,B}`.
    pub beta: [ChargeTable<T>; 2],
}

impl<T: Scalar> EnergeticTables<T> {
    /// Runs the four all-pairs solves concurrently.
    pub fn compute(g: &Graph<T>, solver: &dyn EnergeticSolver<T>, record: bool) -> Result<Self> {
        let cap = g.capacity();
        let ((a0, ab), (b0, bb)) = rayon::join(
            || {
                rayon::join(
                    || mfc_all_pairs(g, T::ZERO, solver, record),
                    || mfc_all_pairs(g, cap, solver, record),
                )
            },
            || {
                rayon::join(
                    || mic_all_pairs(g, T::ZERO, solver, record),
                    || mic_all_pairs(g, cap, solver, record),
                )
            },
        );
        Ok(EnergeticTables {
            alpha: [a0?, ab?],
            beta: [b0?, bb?],
        })
    }

    pub fn alpha(&self, level: Level) -> &ChargeTable<T> {
        &self.alpha[level as usize]
    }

    pub fn beta(&self, level: Level) -> &ChargeTable<T> {
        &self.beta[level as usize]
    }

    pub fn relaxations(&self) -> u64 {
        self.alpha.iter().chain(&self.beta).map(|t| t.relaxations).sum()
    }
}

/// Costs `l_B` on the `2n` auxiliary states with a witness per entry.
#[derive(Debug, Clone)]
pub struct AuxCostMatrix<T> {
    n: usize,
    pub costs: CostMatrix<T>,
    witness: Vec<AuxWitness<T>>,
    stations: Vec<VertexId>,
    /// `p x 2n` right factor `r(x) * beta_b(x, v)`, reused by single-source
    /// additions.
    station_costs: CostMatrix<T>,
}

impl<T: Scalar> AuxCostMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: VertexId, a: Level, v: VertexId, b: Level) -> T {
        self.costs.get(state_index(self.n, u, a), state_index(self.n, v, b))
    }

    pub fn witness(&self, u: VertexId, a: Level, v: VertexId, b: Level) -> AuxWitness<T> {
        self.witness_at(state_index(self.n, u, a), state_index(self.n, v, b))
    }

    fn witness_at(&self, i: usize, j: usize) -> AuxWitness<T> {
        self.witness[i * 2 * self.n + j]
    }

    pub fn stations(&self) -> &[VertexId] {
        &self.stations
    }

    pub fn station_costs(&self) -> &CostMatrix<T> {
        &self.station_costs
    }
}

/// One auxiliary entry from its ingredients: zero if `alpha_a(u,v) >= b`,
/// else `l'` clipped at zero with the arg-min station as witness.
fn combine<T: Scalar>(
    direct_charge: T,
    required: T,
    through: T,
    station: Option<(VertexId, T)>,
) -> (T, AuxWitness<T>) {
    if direct_charge >= required {
        return (T::ZERO, AuxWitness::NoRecharge);
    }
    match station {
        Some((vertex, amount)) if !through.is_pos_inf() => {
            (through.positive_part(), AuxWitness::Station { vertex, amount })
        }
        _ => (T::INFINITY, AuxWitness::Unreachable),
    }
}

/// Builds `l_B` from `alpha_{B,0}`, `alpha_{B,B}`, `beta_{B,0}`, `beta_{B,B}`.
pub fn build_aux_costs<T: Scalar>(
    g: &Graph<T>,
    alpha0: &ChargeMatrix<T>,
    alpha_full: &ChargeMatrix<T>,
    beta0: &ChargeMatrix<T>,
    beta_full: &ChargeMatrix<T>,
) -> Result<AuxCostMatrix<T>> {
    let n = g.n();
    let cap = g.capacity();
    for m in [alpha0, alpha_full, beta0, beta_full] {
        if m.n() != n {
            return Err(Error::DimensionMismatch(format!("{}x{} table for {n} vertices", m.n(), m.n())));
        }
    }
    let alpha = [alpha0, alpha_full];
    let beta = [beta0, beta_full];
    let stations = g.stations();
    let p = stations.len();

    // left[u^a][x] = -r(x) alpha_a(u,x), right[x][v^b] = r(x) beta_b(x,v)
    let mut left = CostMatrix::filled(2 * n, p, T::INFINITY);
    let mut right = CostMatrix::filled(p, 2 * n, T::INFINITY);
    for (k, &x) in stations.iter().enumerate() {
        let r = g.price(x);
        for level in Level::BOTH {
            for u in 0..n {
                let al = alpha[level as usize].get(u, x);
                if !al.is_neg_inf() {
                    left.set(state_index(n, u, level), k, T::ZERO.minus(r.times(al)));
                }
                let be = beta[level as usize].get(x, u);
                if !be.is_pos_inf() {
                    right.set(k, state_index(n, u, level), r.times(be));
                }
            }
        }
    }
    let (through, argmin) = minplus_product_with_argmin(&left, &right)?;

    let mut costs = CostMatrix::filled(2 * n, 2 * n, T::INFINITY);
    let mut witness = vec![AuxWitness::Unreachable; 4 * n * n];
    for a in Level::BOTH {
        for u in 0..n {
            let i = state_index(n, u, a);
            for b in Level::BOTH {
                let required = b.charge(cap);
                for v in 0..n {
                    let j = state_index(n, v, b);
                    let station = (argmin[i * 2 * n + j] != NONE).then(|| {
                        let x = stations[argmin[i * 2 * n + j] as usize];
                        let need = beta[b as usize].get(x, v);
                        let have = alpha[a as usize].get(u, x);
                        (x, need.minus(have).positive_part())
                    });
                    let (c, w) = combine(alpha[a as usize].get(u, v), required, through.get(i, j), station);
                    costs.set(i, j, c);
                    witness[i * 2 * n + j] = w;
                }
            }
        }
    }
    Ok(AuxCostMatrix {
        n,
        costs,
        witness,
        stations,
        station_costs: right,
    })
}

/// Operation counts, used to check which stages a computation entered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkStats {
    /// Arc relaxations in energetic solves.
    pub relaxations: u64,
    /// `(i, k, j)` terms of rectangular and vector-matrix products.
    pub product_terms: u64,
    /// Terms of the all-pairs closure (Floyd-Warshall or repeated squaring).
    pub closure_terms: u64,
}

#[derive(Debug, Clone)]
enum AuxPaths<T> {
    Closure(ShortestPaths<T>),
    Hops(HopPaths<T>),
    /// Zero recharges: a single no-recharge auxiliary arc.
    Direct,
}

#[derive(Debug, Clone)]
struct Parents<T> {
    paths: AuxPaths<T>,
    tables: EnergeticTables<T>,
}

/// `rho` for all pairs, and what is needed to explain it.
#[derive(Debug, Clone)]
pub struct PlanCostResult<T> {
    /// `rho(s,t)`, `+inf` when no plan exists.
    pub rho: CostMatrix<T>,
    /// Recharge budget, `None` for unbounded plans.
    pub hop_bound: Option<usize>,
    pub aux: AuxCostMatrix<T>,
    /// Distances between all auxiliary states (absent for zero budget).
    pub aux_dist: Option<CostMatrix<T>>,
    pub work: WorkStats,
    parents: Option<Parents<T>>,
}

impl<T: Scalar> PlanCostResult<T> {
    pub fn n(&self) -> usize {
        self.rho.rows()
    }

    pub fn has_witnesses(&self) -> bool {
        self.parents.is_some()
    }

    /// Drops the parent data, as after loading costs from disk.
    pub fn without_witnesses(mut self) -> Self {
        self.parents = None;
        self
    }
}

fn rho_from_aux<T: Scalar>(n: usize, dist: &CostMatrix<T>) -> CostMatrix<T> {
    let mut rho = CostMatrix::filled(n, n, T::INFINITY);
    for s in 0..n {
        for t in 0..n {
            rho.set(s, t, dist.get(state_index(n, s, Level::Empty), state_index(n, t, Level::Empty)));
        }
    }
    rho
}

fn prepare<T: Scalar>(
    g: &Graph<T>,
    solver: &dyn EnergeticSolver<T>,
    witnesses: bool,
) -> Result<(EnergeticTables<T>, AuxCostMatrix<T>, WorkStats)> {
    let tables = EnergeticTables::compute(g, solver, witnesses)?;
    let aux = build_aux_costs(
        g,
        &tables.alpha[0].matrix,
        &tables.alpha[1].matrix,
        &tables.beta[0].matrix,
        &tables.beta[1].matrix,
    )?;
    let n = g.n() as u64;
    let work = WorkStats {
        relaxations: tables.relaxations(),
        product_terms: 4 * n * n * aux.stations.len() as u64,
        closure_terms: 0,
    };
    Ok((tables, aux, work))
}

/// `rho_B(s,t)` for every pair: four energetic solves, one product, one
/// Floyd-Warshall run on the `2n` auxiliary states.
pub fn mcp_all_pairs<T: Scalar>(
    g: &Graph<T>,
    solver: &dyn EnergeticSolver<T>,
    witnesses: bool,
) -> Result<PlanCostResult<T>> {
    let (tables, aux, mut work) = prepare(g, solver, witnesses)?;
    let closure = floyd_warshall(&aux.costs)?;
    work.closure_terms = (aux.costs.rows() as u64).pow(3);
    let rho = rho_from_aux(g.n(), &closure.dist);
    Ok(PlanCostResult {
        rho,
        hop_bound: None,
        aux_dist: Some(closure.dist.clone()),
        aux,
        work,
        parents: witnesses.then(|| Parents {
            paths: AuxPaths::Closure(closure),
            tables,
        }),
    })
}

/// `rho_{B,delta}(s,t)`: plans with at most `delta` recharges.
pub fn mcp_bounded<T: Scalar>(
    g: &Graph<T>,
    delta: usize,
    solver: &dyn EnergeticSolver<T>,
    witnesses: bool,
) -> Result<PlanCostResult<T>> {
    let (tables, aux, mut work) = prepare(g, solver, witnesses)?;
    let n = g.n();
    let (rho, aux_dist, paths) = if delta == 0 {
        let alpha0 = &tables.alpha[0].matrix;
        let mut rho = CostMatrix::filled(n, n, T::INFINITY);
        for s in 0..n {
            for t in 0..n {
                if alpha0.get(s, t) >= T::ZERO {
                    rho.set(s, t, T::ZERO);
                }
            }
        }
        (rho, None, AuxPaths::Direct)
    } else {
        let hops = minplus_power_with_paths(&aux.costs, delta)?;
        work.closure_terms = hops.products() as u64 * (aux.costs.rows() as u64).pow(3);
        let rho = rho_from_aux(n, &hops.dist);
        (rho, Some(hops.dist.clone()), AuxPaths::Hops(hops))
    };
    Ok(PlanCostResult {
        rho,
        hop_bound: Some(delta),
        aux,
        aux_dist,
        work,
        parents: witnesses.then_some(Parents { paths, tables }),
    })
}

/// Walks `arcs` from the plan's current state.
fn follow<T: Scalar>(g: &Graph<T>, plan: &mut TravelPlan<T>, arcs: &[usize]) -> Result<()> {
    let cap = g.capacity();
    for &i in arcs {
        let a = g.arc(i);
        let charge = plan.charge();
        if plan.last().vertex != a.tail || charge < a.cost {
            return Err(Error::Internal(format!(
                "witness walk cannot traverse arc {i} ({} -> {}) holding {charge}",
                a.tail, a.head
            )));
        }
        plan.push_traverse(a.head, charge.minus(a.cost).min_of(cap));
    }
    Ok(())
}

/// A concrete plan from `s` (empty battery) to `t` whose cost is `rho(s,t)`.
///
/// The auxiliary shortest path is expanded arc by arc: walk the max-charge
/// path to the witness station, top up to `beta_b(x,v)`, walk the min-charge
/// path to `v`. Carrying surplus charge forward only lowers later purchases.
pub fn reconstruct_plan<T: Scalar>(
    g: &Graph<T>,
    result: &PlanCostResult<T>,
    s: VertexId,
    t: VertexId,
) -> Result<TravelPlan<T>> {
    let n = result.n();
    if s >= n || t >= n || g.n() != n {
        return Err(Error::InvalidArgument(format!("pair ({s}, {t}) outside a {n}-vertex result")));
    }
    let parents = result.parents.as_ref().ok_or(Error::WitnessUnavailable)?;
    if result.rho.get(s, t).is_pos_inf() {
        return Err(Error::NoPlan { from: s, to: t });
    }
    let from = state_index(n, s, Level::Empty);
    let to = state_index(n, t, Level::Empty);
    let states = match &parents.paths {
        AuxPaths::Closure(sp) => sp.path(from, to),
        AuxPaths::Hops(h) => h.path(from, to),
        AuxPaths::Direct if s == t => Some(vec![from]),
        AuxPaths::Direct => Some(vec![from, to]),
    }
    .ok_or_else(|| Error::Internal(format!("no auxiliary path {s} -> {t}")))?;

    let tables = &parents.tables;
    let mut plan = TravelPlan::start(s, T::ZERO);
    for pair in states.windows(2) {
        let (u, a) = state_of(n, pair[0]);
        let (v, b) = state_of(n, pair[1]);
        match result.aux.witness_at(pair[0], pair[1]) {
            AuxWitness::Unreachable => {
                return Err(Error::Internal(format!("auxiliary path uses infeasible arc {u} -> {v}")))
            }
            AuxWitness::NoRecharge => follow(g, &mut plan, &tables.alpha(a).path(g, u, v)?)?,
            AuxWitness::Station { vertex: x, .. } => {
                follow(g, &mut plan, &tables.alpha(a).path(g, u, x)?)?;
                let need = tables.beta(b).matrix.get(x, v);
                if plan.charge() < need {
                    plan.push_recharge(need, g.price(x));
                }
                follow(g, &mut plan, &tables.beta(b).path(g, x, v)?)?;
            }
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energetic::{FixpointRelaxation, StrictRelaxation};
    use crate::graph::parse_graph;
    use crate::numeric::Int;
    use crate::plan::validate_plan;

    const INF: Int = Int::INFINITY;
    use Level::{Empty, Full};

    fn i1() -> Graph<Int> {
        parse_graph("3 2 5\n0 1\n1 2\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    fn i4() -> Graph<Int> {
        parse_graph("3 2 5\n0 10\n1 1\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    #[test]
    fn aux_costs_on_small_instance() {
        let res = mcp_all_pairs(&i1(), &StrictRelaxation, false).unwrap();
        assert_eq!(res.aux.get(0, Empty, 2, Empty), 5);
        assert_eq!(res.aux.witness(0, Empty, 2, Empty), AuxWitness::Station { vertex: 0, amount: 5 });
        assert_eq!(res.aux.get(1, Full, 2, Empty), 0);
        assert_eq!(res.aux.witness(1, Full, 2, Empty), AuxWitness::NoRecharge);
        // vertex 2 is a sink without a station
        assert_eq!(res.aux.get(2, Empty, 0, Empty), INF);
        assert_eq!(res.aux.witness(2, Full, 1, Empty), AuxWitness::Unreachable);
        for u in 0..3 {
            for a in Level::BOTH {
                assert_eq!(res.aux.get(u, a, u, a), 0);
            }
        }
    }

    #[test]
    fn rho_small_instances() {
        let res = mcp_all_pairs(&i1(), &StrictRelaxation, false).unwrap();
        assert_eq!(res.rho.row(0), &[0, 2, 5]);
        for s in 0..3 {
            assert_eq!(res.rho.get(s, s), 0);
        }
        let res = mcp_all_pairs(&i4(), &StrictRelaxation, false).unwrap();
        assert_eq!(res.rho.get(0, 2), 23);
    }

    #[test]
    fn bounded_small_instances() {
        let g = i4();
        assert_eq!(mcp_bounded(&g, 1, &StrictRelaxation, false).unwrap().rho.get(0, 2), 50);
        assert_eq!(mcp_bounded(&g, 2, &StrictRelaxation, false).unwrap().rho.get(0, 2), 23);
        let zero = mcp_bounded(&i1(), 0, &StrictRelaxation, false).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                assert_eq!(zero.rho.get(s, t), if s == t { 0 } else { INF });
            }
        }
    }

    #[test]
    fn plans_for_small_instances() {
        let g = i1();
        let res = mcp_all_pairs(&g, &StrictRelaxation, true).unwrap();
        let plan = reconstruct_plan(&g, &res, 0, 2).unwrap();
        assert_eq!(plan.recharges(), vec![(0, 5)]);
        assert_eq!(validate_plan(&g, 0, &plan), Ok(5));
        let stay = reconstruct_plan(&g, &res, 1, 1).unwrap();
        assert_eq!(stay.states().len(), 1);
        assert_eq!(stay.cost(), 0);

        let g = i4();
        let res = mcp_all_pairs(&g, &StrictRelaxation, true).unwrap();
        let plan = reconstruct_plan(&g, &res, 0, 2).unwrap();
        assert_eq!(plan.recharges(), vec![(0, 2), (1, 3)]);
        assert_eq!(validate_plan(&g, 0, &plan), Ok(23));

        let res = mcp_bounded(&g, 1, &StrictRelaxation, true).unwrap();
        let plan = reconstruct_plan(&g, &res, 0, 2).unwrap();
        assert_eq!(plan.recharges(), vec![(0, 5)]);
        assert_eq!(validate_plan(&g, 0, &plan), Ok(50));
    }

    #[test]
    fn reconstruction_errors() {
        let g = i1();
        let res = mcp_all_pairs(&g, &StrictRelaxation, true).unwrap();
        assert!(matches!(reconstruct_plan(&g, &res, 2, 0), Err(Error::NoPlan { .. })));
        let bare = res.without_witnesses();
        assert!(matches!(reconstruct_plan(&g, &bare, 0, 2), Err(Error::WitnessUnavailable)));
    }

    #[test]
    fn zero_price_station_makes_arc_free() {
        let g: Graph<Int> = parse_graph("3 2 4\n0 inf\n1 0\n2 inf\n0 1 0\n1 2 4\n").unwrap();
        let res = mcp_all_pairs(&g, &StrictRelaxation, true).unwrap();
        assert_eq!(res.aux.get(0, Empty, 2, Empty), 0);
        assert_eq!(res.rho.get(0, 2), 0);
        let plan = reconstruct_plan(&g, &res, 0, 2).unwrap();
        assert_eq!(plan.recharges(), vec![(1, 4)]);
        assert_eq!(validate_plan(&g, 0, &plan), Ok(0));
    }

    #[test]
    fn negative_cycle_instance_in_fixpoint_mode() {
        // 0 -> 1 -> 0 gains 1 unit per lap; station at 0 is expensive
        let g: Graph<Int> =
            parse_graph("3 3 3\n0 5\n1 inf\n2 inf\n0 1 1\n1 0 -2\n1 2 2\n").unwrap();
        assert!(mcp_all_pairs(&g, &StrictRelaxation, false).is_err());
        let res = mcp_all_pairs(&g, &FixpointRelaxation::default(), true).unwrap();
        // buy one unit, then lap the cycle to fill up
        assert_eq!(res.rho.get(0, 2), 5);
        let plan = reconstruct_plan(&g, &res, 0, 2).unwrap();
        assert_eq!(validate_plan(&g, 0, &plan), Ok(5));
    }

    #[test]
    fn float_mode_matches_integer_mode() {
        let gi = i4();
        let gf: Graph<f64> = parse_graph(&gi.to_text()).unwrap();
        let ri = mcp_all_pairs(&gi, &StrictRelaxation, false).unwrap();
        let rf = mcp_all_pairs(&gf, &StrictRelaxation, true).unwrap();
        for s in 0..3 {
            for t in 0..3 {
                assert!(rf.rho.get(s, t).close_to(ri.rho.get(s, t).to_f64()));
            }
        }
        let plan = reconstruct_plan(&gf, &rf, 0, 2).unwrap();
        assert!(validate_plan(&gf, 0.0, &plan).unwrap().close_to(23.0));
    }
}
