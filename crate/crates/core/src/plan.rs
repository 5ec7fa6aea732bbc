//! Travel plans: sequences of (vertex, charge) states joined by arc
//! traversals and recharges.

use crate::error::{Error, ParseError, Result};
use crate::graph::{Graph, VertexId};
use crate::numeric::{format_value, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanState<T> {
    pub vertex: VertexId,
    pub charge: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Traverse,
    Recharge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TravelPlan<T> {
    states: Vec<PlanState<T>>,
    steps: Vec<StepKind>,
    cost: T,
}

impl<T: Scalar> TravelPlan<T> {
    /// Plan that stays at `vertex` with `charge` and costs nothing.
    pub fn start(vertex: VertexId, charge: T) -> Self {
        TravelPlan {
            states: vec![PlanState { vertex, charge }],
            steps: Vec::new(),
            cost: T::ZERO,
        }
    }

    /// Assembles a plan from raw parts. `steps.len()` must be one less than
    /// `states.len()`.
    pub fn from_parts(states: Vec<PlanState<T>>, steps: Vec<StepKind>, cost: T) -> Result<Self> {
        if states.is_empty() || steps.len() + 1 != states.len() {
            return Err(Error::InvalidArgument(format!(
                "plan with {} states needs {} steps, got {}",
                states.len(),
                states.len().saturating_sub(1),
                steps.len()
            )));
        }
        Ok(TravelPlan { states, steps, cost })
    }

    pub fn states(&self) -> &[PlanState<T>] {
        &self.states
    }

    pub fn steps(&self) -> &[StepKind] {
        &self.steps
    }

    pub fn cost(&self) -> T {
        self.cost
    }

    pub fn first(&self) -> PlanState<T> {
        self.states[0]
    }

    pub fn last(&self) -> PlanState<T> {
        *self.states.last().expect("plans are non-empty")
    }

    /// Current charge at the end of the plan.
    pub fn charge(&self) -> T {
        self.last().charge
    }

    pub fn push_traverse(&mut self, head: VertexId, charge: T) {
        self.states.push(PlanState { vertex: head, charge });
        self.steps.push(StepKind::Traverse);
    }

    /// Raises the charge at the current vertex, merging with an immediately
    /// preceding recharge at the same vertex.
    pub fn push_recharge(&mut self, charge: T, price: T) {
        let last = self.last();
        debug_assert!(charge > last.charge);
        self.cost = self.cost.plus(price.times(charge.minus(last.charge)));
        if self.steps.last() == Some(&StepKind::Recharge) {
            self.states.last_mut().expect("non-empty").charge = charge;
        } else {
            self.states.push(PlanState { vertex: last.vertex, charge });
            self.steps.push(StepKind::Recharge);
        }
    }

    /// Indices `i` of recharge steps (`states[i] -> states[i+1]`).
    pub fn recharge_indices(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == StepKind::Recharge)
            .map(|(i, _)| i)
            .collect()
    }

    /// `(vertex, amount)` per recharge, in plan order.
    pub fn recharges(&self) -> Vec<(VertexId, T)> {
        self.recharge_indices()
            .into_iter()
            .map(|i| (self.states[i].vertex, self.states[i + 1].charge.minus(self.states[i].charge)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = self.first();
        out.push_str(&format!("start {} {}\n", s.vertex, format_value(s.charge)));
        for (st, kind) in self.states[1..].iter().zip(&self.steps) {
            let word = match kind {
                StepKind::Traverse => "go",
                StepKind::Recharge => "charge",
            };
            out.push_str(&format!("{word} {} {}\n", st.vertex, format_value(st.charge)));
        }
        out.push_str(&format!("cost {}\n", format_value(self.cost)));
        out
    }
}

/// Parses the plan text format produced by [`TravelPlan::to_text`]:
/// a `start v a` line, then `go v a` / `charge v a` lines, then `cost x`.
pub fn parse_plan<T: Scalar>(text: &str) -> Result<TravelPlan<T>, ParseError> {
    let mut states = Vec::new();
    let mut steps = Vec::new();
    let mut cost = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if cost.is_some() {
            return Err(ParseError::new(ln, "nothing may follow the cost line"));
        }
        let value = |tok: &str| {
            crate::numeric::parse_value::<T>(tok)
                .ok_or_else(|| ParseError::new(ln, format!("invalid number `{tok}`")))
        };
        match toks.as_slice() {
            ["cost", c] => cost = Some(value(c)?),
            [word, v, c] => {
                let vertex = v
                    .parse()
                    .map_err(|_| ParseError::new(ln, format!("invalid vertex `{v}`")))?;
                let charge = value(c)?;
                match (*word, states.is_empty()) {
                    ("start", true) => {}
                    ("go", false) => steps.push(StepKind::Traverse),
                    ("charge", false) => steps.push(StepKind::Recharge),
                    ("start", false) => return Err(ParseError::new(ln, "duplicate start line")),
                    (_, true) => return Err(ParseError::new(ln, "plan must begin with `start`")),
                    (w, _) => return Err(ParseError::new(ln, format!("unknown step `{w}`"))),
                }
                states.push(PlanState { vertex, charge });
            }
            _ => return Err(ParseError::new(ln, "expected `start|go|charge v a` or `cost x`")),
        }
    }
    if states.is_empty() {
        return Err(ParseError::new(1, "empty plan"));
    }
    let cost = cost.ok_or_else(|| ParseError::new(text.lines().count().max(1), "missing cost line"))?;
    Ok(TravelPlan { states, steps, cost })
}

/// Checks every step of `plan` against `g` starting from `initial` charge
/// and returns the recomputed cost, which must match the plan's stated cost.
pub fn validate_plan<T: Scalar>(g: &Graph<T>, initial: T, plan: &TravelPlan<T>) -> Result<T> {
    let cap = g.capacity();
    let in_range = |c: T| c >= T::ZERO && c <= cap;
    if !in_range(initial) {
        return Err(Error::ChargeOutOfRange {
            state: 0,
            reason: format!("initial charge {} outside [0, {cap}]", format_value(initial)),
        });
    }
    let first = plan.first();
    if !first.charge.close_to(initial) {
        return Err(Error::ChargeOutOfRange {
            state: 0,
            reason: format!(
                "plan starts with charge {} but the declared initial charge is {}",
                format_value(first.charge),
                format_value(initial)
            ),
        });
    }
    for (i, st) in plan.states.iter().enumerate() {
        if st.vertex >= g.n() {
            return Err(Error::IllegalTraversal {
                step: i.saturating_sub(1),
                reason: format!("vertex {} does not exist", st.vertex),
            });
        }
        if !in_range(st.charge) {
            return Err(Error::ChargeOutOfRange {
                state: i,
                reason: format!("charge {} outside [0, {cap}]", format_value(st.charge)),
            });
        }
    }

    let mut cost = T::ZERO;
    for (i, kind) in plan.steps.iter().enumerate() {
        let (from, to) = (plan.states[i], plan.states[i + 1]);
        match kind {
            StepKind::Traverse => {
                let mut candidates = g
                    .arcs()
                    .iter()
                    .filter(|a| a.tail == from.vertex && a.head == to.vertex)
                    .peekable();
                if candidates.peek().is_none() {
                    return Err(Error::IllegalTraversal {
                        step: i,
                        reason: format!("no arc {} -> {}", from.vertex, to.vertex),
                    });
                }
                let mut affordable = false;
                let ok = candidates.any(|a| {
                    if from.charge < a.cost {
                        return false;
                    }
                    affordable = true;
                    from.charge.minus(a.cost).min_of(cap).close_to(to.charge)
                });
                if !ok {
                    let reason = if affordable {
                        format!(
                            "charge after {} -> {} does not match any arc update",
                            from.vertex, to.vertex
                        )
                    } else {
                        format!(
                            "charge {} insufficient for arc {} -> {}",
                            format_value(from.charge),
                            from.vertex,
                            to.vertex
                        )
                    };
                    return Err(Error::IllegalTraversal { step: i, reason });
                }
            }
            StepKind::Recharge => {
                if from.vertex != to.vertex {
                    return Err(Error::IllegalRecharge {
                        step: i,
                        reason: format!("recharge moves from {} to {}", from.vertex, to.vertex),
                    });
                }
                if !(to.charge > from.charge) {
                    return Err(Error::IllegalRecharge {
                        step: i,
                        reason: "charge does not strictly increase".into(),
                    });
                }
                let price = g.price(from.vertex);
                if !price.is_finite() {
                    return Err(Error::IllegalRecharge {
                        step: i,
                        reason: format!("vertex {} is not a charging station", from.vertex),
                    });
                }
                cost = cost.plus(price.times(to.charge.minus(from.charge)));
            }
        }
    }
    if !cost.close_to(plan.cost) {
        return Err(Error::CostMismatch {
            stated: format_value(plan.cost),
            computed: format_value(cost),
        });
    }
    Ok(cost)
}

/// Pairs of consecutive recharges `(i, j)` (step indices) such that no state
/// from the end of recharge `i` up to the start of recharge `j` is empty or
/// full.
pub fn boundary_state_violations<T: Scalar>(g: &Graph<T>, plan: &TravelPlan<T>) -> Vec<(usize, usize)> {
    let cap = g.capacity();
    let r = plan.recharge_indices();
    r.windows(2)
        .filter(|w| {
            !plan.states[w[0] + 1..=w[1]]
                .iter()
                .any(|s| s.charge == T::ZERO || s.charge == cap)
        })
        .map(|w| (w[0], w[1]))
        .collect()
}

/// Pairs of consecutive recharges at vertices with distinct prices that break
/// the exchange property of optimal plans: dearer-then-cheaper must pass an
/// empty state, cheaper-then-dearer must pass a full state.
pub fn exchange_violations<T: Scalar>(g: &Graph<T>, plan: &TravelPlan<T>) -> Vec<(usize, usize)> {
    let cap = g.capacity();
    let r = plan.recharge_indices();
    r.windows(2)
        .filter(|w| {
            let (i, j) = (w[0], w[1]);
            let pi = g.price(plan.states[i].vertex);
            let pj = g.price(plan.states[j].vertex);
            let segment = &plan.states[i + 1..=j];
            if pi > pj {
                !segment.iter().any(|s| s.charge == T::ZERO)
            } else if pi < pj {
                !segment.iter().any(|s| s.charge == cap)
            } else {
                false
            }
        })
        .map(|w| (w[0], w[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::numeric::Int;

    fn i1() -> Graph<Int> {
        parse_graph("3 2 5\n0 1\n1 2\n2 inf\n0 1 2\n1 2 3\n").unwrap()
    }

    fn full_charge_plan() -> TravelPlan<Int> {
        let mut p = TravelPlan::start(0, 0);
        p.push_recharge(5, 1);
        p.push_traverse(1, 3);
        p.push_traverse(2, 0);
        p
    }

    #[test]
    fn accepts_full_charge_plan() {
        let p = full_charge_plan();
        assert_eq!(p.cost(), 5);
        assert_eq!(validate_plan(&i1(), 0, &p), Ok(5));
        assert_eq!(p.recharges(), vec![(0, 5)]);
    }

    #[test]
    fn rejects_insufficient_charge() {
        let mut p = TravelPlan::start(0, 0);
        p.push_recharge(1, 1);
        p.push_traverse(1, 0);
        assert!(matches!(validate_plan(&i1(), 0, &p), Err(Error::IllegalTraversal { step: 1, .. })));
    }

    #[test]
    fn rejects_missing_arc_and_wrong_update() {
        let p = TravelPlan::from_parts(
            vec![PlanState { vertex: 0, charge: 5 }, PlanState { vertex: 2, charge: 0 }],
            vec![StepKind::Traverse],
            0,
        )
        .unwrap();
        assert!(matches!(validate_plan(&i1(), 5, &p), Err(Error::IllegalTraversal { .. })));
        let p = TravelPlan::from_parts(
            vec![PlanState { vertex: 0, charge: 5 }, PlanState { vertex: 1, charge: 2 }],
            vec![StepKind::Traverse],
            0,
        )
        .unwrap();
        assert!(matches!(validate_plan(&i1(), 5, &p), Err(Error::IllegalTraversal { .. })));
    }

    #[test]
    fn rejects_recharge_at_infinite_price() {
        let p = TravelPlan::from_parts(
            vec![PlanState { vertex: 2, charge: 0 }, PlanState { vertex: 2, charge: 1 }],
            vec![StepKind::Recharge],
            0,
        )
        .unwrap();
        assert!(matches!(validate_plan(&i1(), 0, &p), Err(Error::IllegalRecharge { .. })));
    }

    #[test]
    fn rejects_non_increasing_recharge() {
        let p = TravelPlan::from_parts(
            vec![PlanState { vertex: 0, charge: 3 }, PlanState { vertex: 0, charge: 3 }],
            vec![StepKind::Recharge],
            0,
        )
        .unwrap();
        assert!(matches!(validate_plan(&i1(), 3, &p), Err(Error::IllegalRecharge { .. })));
    }

    #[test]
    fn rejects_out_of_range_and_wrong_start() {
        let p = TravelPlan::start(0, 7);
        assert!(matches!(validate_plan(&i1(), 7, &p), Err(Error::ChargeOutOfRange { .. })));
        let p = TravelPlan::start(0, 2);
        assert!(matches!(validate_plan(&i1(), 0, &p), Err(Error::ChargeOutOfRange { .. })));
    }

    #[test]
    fn rejects_wrong_stated_cost() {
        let p = TravelPlan::from_parts(
            full_charge_plan().states().to_vec(),
            full_charge_plan().steps().to_vec(),
            4,
        )
        .unwrap();
        assert!(matches!(validate_plan(&i1(), 0, &p), Err(Error::CostMismatch { .. })));
    }

    #[test]
    fn merges_adjacent_recharges() {
        let mut p = TravelPlan::<Int>::start(0, 0);
        p.push_recharge(2, 3);
        p.push_recharge(5, 3);
        assert_eq!(p.states().len(), 2);
        assert_eq!(p.cost(), 15);
    }

    #[test]
    fn text_round_trip() {
        let p = full_charge_plan();
        assert_eq!(parse_plan::<Int>(&p.to_text()).unwrap(), p);
        assert!(parse_plan::<Int>("go 1 2\ncost 0\n").is_err());
        assert!(parse_plan::<Int>("start 0 0\n").is_err());
    }

    #[test]
    fn boundary_checks() {
        // I4-style plan: buy 2 at v0, 3 at v1 (passes empty state at v1)
        let g: Graph<Int> = parse_graph("3 2 5\n0 10\n1 1\n2 inf\n0 1 2\n1 2 3\n").unwrap();
        let mut p = TravelPlan::start(0, 0);
        p.push_recharge(2, 10);
        p.push_traverse(1, 0);
        p.push_recharge(3, 1);
        p.push_traverse(2, 0);
        assert_eq!(validate_plan(&g, 0, &p), Ok(23));
        assert!(boundary_state_violations(&g, &p).is_empty());
        assert!(exchange_violations(&g, &p).is_empty());
    }
}
