//! Road network model: a directed multigraph with signed energy costs on arcs,
//! a charging price per vertex and a battery capacity.
//!
//! Canonical text format (whitespace separated, `#` starts a comment):
//!
//! ```text
//! n m B
//! <vertex_id> <price>      # n lines, price may be `inf`
//! <tail> <head> <cost>     # m lines
//! ```

use crate::error::{Error, ParseError, Result};
use crate::numeric::{format_value, Scalar};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<T> {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph<T> {
    arcs: Vec<Arc<T>>,
    price: Vec<T>,
    capacity: T,
}

impl<T: Scalar> Graph<T> {
    /// Builds a graph, checking ids, prices and capacity.
    pub fn new(price: Vec<T>, capacity: T, arcs: Vec<Arc<T>>) -> Result<Self> {
        let n = price.len();
        if !(capacity >= T::ZERO) || !capacity.is_finite() {
            return Err(Error::InvalidGraph(format!(
                "capacity must be a finite non-negative number, got {}",
                format_value(capacity)
            )));
        }
        for (v, &p) in price.iter().enumerate() {
            if !(p >= T::ZERO) {
                return Err(Error::InvalidGraph(format!("vertex {v} has negative price {p}")));
            }
        }
        for (i, a) in arcs.iter().enumerate() {
            if a.tail >= n || a.head >= n {
                return Err(Error::InvalidGraph(format!(
                    "arc {i} ({} -> {}) has an endpoint outside 0..{n}",
                    a.tail, a.head
                )));
            }
            if !a.cost.is_finite() {
                return Err(Error::InvalidGraph(format!("arc {i} has a non-finite cost")));
            }
        }
        Ok(Graph {
            arcs,
            price,
            capacity,
        })
    }

    pub fn n(&self) -> usize {
        self.price.len()
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> &Arc<T> {
        &self.arcs[index]
    }

    pub fn price(&self, v: VertexId) -> T {
        self.price[v]
    }

    pub fn prices(&self) -> &[T] {
        &self.price
    }

    pub fn capacity(&self) -> T {
        self.capacity
    }

    pub fn is_station(&self, v: VertexId) -> bool {
        self.price[v].is_finite()
    }

    /// Charging stations in increasing id order.
    pub fn stations(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.is_station(v)).collect()
    }

    /// `max |c(u,v)|` over all arcs, zero for an arcless graph.
    pub fn max_abs_cost(&self) -> T {
        self.arcs.iter().fold(T::ZERO, |acc, a| {
            let abs = if a.cost < T::ZERO { T::ZERO.minus(a.cost) } else { a.cost };
            acc.max_of(abs)
        })
    }

    pub fn has_negative_costs(&self) -> bool {
        self.arcs.iter().any(|a| a.cost < T::ZERO)
    }

    /// The same network with every arc direction flipped. Prices and
    /// capacity are kept, arc order is preserved.
    pub fn reverse(&self) -> Graph<T> {
        Graph {
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: a.head,
                    head: a.tail,
                    cost: a.cost,
                })
                .collect(),
            price: self.price.clone(),
            capacity: self.capacity,
        }
    }

    /// Copy with a different capacity.
    pub fn with_capacity(&self, capacity: T) -> Result<Graph<T>> {
        Graph::new(self.price.clone(), capacity, self.arcs.clone())
    }

    /// Standard negative-cycle test on the arc costs (no battery semantics).
    pub fn has_negative_cycle(&self) -> bool {
        let n = self.n();
        let mut dist = vec![T::ZERO; n];
        for _ in 0..=n {
            let mut changed = false;
            for a in &self.arcs {
                let cand = dist[a.tail].plus(a.cost);
                if cand < dist[a.head] {
                    dist[a.head] = cand;
                    changed = true;
                }
            }
            if !changed {
                return false;
            }
        }
        true
    }

    /// Serializes in the canonical text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n(), self.m(), format_value(self.capacity));
        for (v, &p) in self.price.iter().enumerate() {
            out.push_str(&format!("{v} {}\n", format_value(p)));
        }
        for a in &self.arcs {
            out.push_str(&format!("{} {} {}\n", a.tail, a.head, format_value(a.cost)));
        }
        out
    }
}

fn number<T: Scalar>(token: &str, line: usize, what: &str) -> Result<T, ParseError> {
    T::parse_finite(token).ok_or_else(|| {
        let hint = if T::INTEGRAL && token.parse::<f64>().is_ok() {
            " (integer mode requires integral tokens within range)"
        } else {
            ""
        };
        ParseError::new(line, format!("invalid {what} `{token}`{hint}"))
    })
}

fn index(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{token}`")))
}

/// Parses the canonical graph format. Line numbers in errors are 1-based
/// physical lines of `text`.
pub fn parse_graph<T: Scalar>(text: &str) -> Result<Graph<T>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .map(|(i, l)| (i, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing header line `n m B`"))?;
    if header.len() != 3 {
        return Err(ParseError::new(hline, "header must be `n m B`"));
    }
    let n = index(header[0], hline, "vertex count")?;
    let m = index(header[1], hline, "arc count")?;
    let capacity: T = number(header[2], hline, "capacity")?;
    if capacity < T::ZERO {
        return Err(ParseError::new(hline, format!("negative capacity {}", header[2])));
    }

    let mut price: Vec<Option<T>> = vec![None; n];
    for _ in 0..n {
        let (ln, toks) = lines
            .next()
            .ok_or_else(|| ParseError::new(text.lines().count().max(1), "missing vertex lines"))?;
        if toks.len() != 2 {
            return Err(ParseError::new(ln, "vertex line must be `vertex_id price`"));
        }
        let v = index(toks[0], ln, "vertex id")?;
        if v >= n {
            return Err(ParseError::new(ln, format!("vertex id {v} out of range 0..{n}")));
        }
        if price[v].is_some() {
            return Err(ParseError::new(ln, format!("vertex {v} listed twice")));
        }
        let p = match toks[1] {
            "inf" | "+inf" => T::INFINITY,
            t => number(t, ln, "price")?,
        };
        if p < T::ZERO {
            return Err(ParseError::new(ln, format!("negative price {}", toks[1])));
        }
        price[v] = Some(p);
    }

    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, toks) = lines
            .next()
            .ok_or_else(|| ParseError::new(text.lines().count().max(1), "missing arc lines"))?;
        if toks.len() != 3 {
            return Err(ParseError::new(ln, "arc line must be `tail head cost`"));
        }
        let tail = index(toks[0], ln, "tail id")?;
        let head = index(toks[1], ln, "head id")?;
        if tail >= n {
            return Err(ParseError::new(ln, format!("tail id {tail} out of range 0..{n}")));
        }
        if head >= n {
            return Err(ParseError::new(ln, format!("head id {head} out of range 0..{n}")));
        }
        let cost = number(toks[2], ln, "arc cost")?;
        arcs.push(Arc { tail, head, cost });
    }

    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::new(ln, "unexpected trailing line"));
    }

    let price = price.into_iter().map(|p| p.expect("all vertices seen")).collect();
    Graph::new(price, capacity, arcs).map_err(|e| ParseError::new(hline, e.to_string()))
}
