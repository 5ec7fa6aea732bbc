//! Single-source maximum-final-charge solvers, selectable by name.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::numeric::Scalar;

use super::{step, PathHistory};

/// Maximum final charges from one source, plus optional update history.
#[derive(Debug, Clone)]
pub struct SingleSource<T> {
    pub values: Vec<T>,
    pub history: Option<PathHistory>,
    pub rounds: usize,
    pub relaxations: u64,
}

/// A strategy for computing `alpha(s, .)` with no recharging.
pub trait EnergeticSolver<T: Scalar>: Send + Sync {
    fn name(&self) -> &'static str;

    /// True when the strategy refuses graphs that keep improving past
    /// `n - 1` rounds.
    fn is_strict(&self) -> bool;

    fn solve(&self, g: &Graph<T>, source: VertexId, initial: T, record: bool) -> Result<SingleSource<T>>;
}

enum Outcome {
    Fixpoint,
    RoundCapHit,
}

/// In-place value iteration over all arcs until a round changes nothing or
/// `max_rounds` rounds have run.
fn relax<T: Scalar>(
    g: &Graph<T>,
    source: VertexId,
    initial: T,
    max_rounds: usize,
    record: bool,
) -> (SingleSource<T>, Outcome) {
    let n = g.n();
    let cap = g.capacity();
    let mut values = vec![T::NEG_INFINITY; n];
    values[source] = initial;
    let mut history = record.then(|| PathHistory::new(source, n));
    let mut rounds = 0;
    let mut relaxations = 0u64;
    let outcome = loop {
        if rounds == max_rounds {
            break Outcome::RoundCapHit;
        }
        rounds += 1;
        let mut changed = false;
        for (i, a) in g.arcs().iter().enumerate() {
            let from = values[a.tail];
            if from.is_neg_inf() {
                continue;
            }
            relaxations += 1;
            let to = step(from, a.cost, cap);
            if to > values[a.head] {
                values[a.head] = to;
                changed = true;
                if let Some(h) = history.as_mut() {
                    h.record(a.head, i);
                }
            }
        }
        if !changed {
            break Outcome::Fixpoint;
        }
    };
    (
        SingleSource {
            values,
            history,
            rounds,
            relaxations,
        },
        outcome,
    )
}

fn check_initial<T: Scalar>(g: &Graph<T>, source: VertexId, initial: T) -> Result<()> {
    if source >= g.n() {
        return Err(Error::InvalidArgument(format!("source {source} out of range 0..{}", g.n())));
    }
    if !(initial >= T::ZERO && initial <= g.capacity()) {
        return Err(Error::InvalidArgument(format!(
            "initial charge {initial} outside [0, {}]",
            g.capacity()
        )));
    }
    Ok(())
}

/// `n - 1` rounds plus one probe round; improvement in the probe means a
/// reachable negative cycle.
#[derive(Debug, Clone, Copy, Default)]
pub struct StrictRelaxation;

impl<T: Scalar> EnergeticSolver<T> for StrictRelaxation {
    fn name(&self) -> &'static str {
        "strict"
    }

    fn is_strict(&self) -> bool {
        true
    }

    fn solve(&self, g: &Graph<T>, source: VertexId, initial: T, record: bool) -> Result<SingleSource<T>> {
        check_initial(g, source, initial)?;
        let (res, outcome) = relax(g, source, initial, g.n(), record);
        match outcome {
            Outcome::Fixpoint => Ok(res),
            Outcome::RoundCapHit => Err(Error::NegativeCycleDetected {
                vertex: source,
                context: format!("relaxation from this source still improving after {} rounds", res.rounds),
            }),
        }
    }
}

/// Iterates to the fixpoint. Terminates on integer inputs since every
/// improvement is at least one unit and charges are bounded by capacity.
#[derive(Debug, Clone, Copy, Default)]
pub struct FixpointRelaxation {
    /// Round cap; `None` picks `16 n (B + 1)` for integers, `10 n` otherwise.
    pub max_rounds: Option<usize>,
}

impl FixpointRelaxation {
    pub fn default_cap<T: Scalar>(g: &Graph<T>) -> usize {
        let n = g.n().max(1);
        if T::INTEGRAL {
            let b = g.capacity().to_f64().max(0.0) as usize;
            n.saturating_mul(16).saturating_mul(b.saturating_add(1))
        } else {
            n.saturating_mul(10)
        }
    }
}

impl<T: Scalar> EnergeticSolver<T> for FixpointRelaxation {
    fn name(&self) -> &'static str {
        "fixpoint"
    }

    fn is_strict(&self) -> bool {
        false
    }

    fn solve(&self, g: &Graph<T>, source: VertexId, initial: T, record: bool) -> Result<SingleSource<T>> {
        check_initial(g, source, initial)?;
        let cap = self.max_rounds.unwrap_or_else(|| Self::default_cap(g));
        let (res, outcome) = relax(g, source, initial, cap, record);
        match outcome {
            Outcome::Fixpoint => Ok(res),
            Outcome::RoundCapHit => Err(Error::NotConverged {
                source_vertex: source,
                rounds: res.rounds,
            }),
        }
    }
}

type Constructor<T> = fn() -> Box<dyn EnergeticSolver<T>>;

/// Name -> solver constructor table.
pub struct SolverRegistry<T: Scalar> {
    entries: BTreeMap<&'static str, Constructor<T>>,
}

impl<T: Scalar> SolverRegistry<T> {
    pub fn empty() -> Self {
        SolverRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, ctor: Constructor<T>) {
        self.entries.insert(name, ctor);
    }

    pub fn get(&self, name: &str) -> Option<Box<dyn EnergeticSolver<T>>> {
        self.entries.get(name).map(|ctor| ctor())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl<T: Scalar> Default for SolverRegistry<T> {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("strict", || Box::new(StrictRelaxation));
        r.register("fixpoint", || Box::new(FixpointRelaxation::default()));
        r
    }
}

/// Looks up a solver in the default registry.
pub fn solver_by_name<T: Scalar>(name: &str) -> Result<Box<dyn EnergeticSolver<T>>> {
    let registry = SolverRegistry::<T>::default();
    registry.get(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown mode `{name}` (available: {})",
            registry.names().join(", ")
        ))
    })
}
