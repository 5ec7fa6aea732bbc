//! Min-plus (tropical) matrix kernels: rectangular products, Floyd-Warshall
//! closure and hop-bounded distances by repeated squaring.
//!
//! All kernels are the straightforward cubic ones. `+inf` absorbs in sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{format_value, Scalar};

/// Marker for "no intermediate / no witness" in argmin and next-hop tables.
pub const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        CostMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Min-plus identity: zeros on the diagonal, `+inf` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::filled(n, n, T::INFINITY);
        for i in 0..n {
            m.set(i, i, T::ZERO);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(CostMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Copy with every diagonal entry replaced by `min(d, 0)`.
    pub fn with_clamped_diagonal(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let d = m.get(i, i);
            m.set(i, i, d.min_of(T::ZERO));
        }
        m
    }

    /// Entrywise `<=`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Entrywise equality up to the scalar tolerance.
    pub fn close_to(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.close_to(*b))
    }
}

impl<T: Scalar> std::fmt::Display for CostMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&v| format_value(v)).collect();
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

/// `C[i][j] = min_k A[i][k] + B[k][j]` with the smallest minimizing `k`
/// (`NONE` where every term is `+inf`).
pub fn minplus_product_with_argmin<T: Scalar>(
    a: &CostMatrix<T>,
    b: &CostMatrix<T>,
) -> Result<(CostMatrix<T>, Vec<u32>)> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let (p, q, r) = (a.rows, a.cols, b.cols);
    let mut c = CostMatrix::filled(p, r, T::INFINITY);
    let mut arg = vec![NONE; p * r];
    if r == 0 {
        return Ok((c, arg));
    }
    c.data
        .par_chunks_mut(r)
        .zip(arg.par_chunks_mut(r))
        .enumerate()
        .for_each(|(i, (crow, argrow))| {
            let arow = a.row(i);
            for k in 0..q {
                let aik = arow[k];
                if aik.is_pos_inf() {
                    continue;
                }
                for (j, &bkj) in b.row(k).iter().enumerate() {
                    let cand = aik.plus(bkj);
                    if cand < crow[j] {
                        crow[j] = cand;
                        argrow[j] = k as u32;
                    }
                }
            }
        });
    Ok((c, arg))
}

pub fn minplus_product<T: Scalar>(a: &CostMatrix<T>, b: &CostMatrix<T>) -> Result<CostMatrix<T>> {
    minplus_product_with_argmin(a, b).map(|(c, _)| c)
}

/// All-pairs distances with a next-hop table for path recovery.
#[derive(Debug, Clone)]
pub struct ShortestPaths<T> {
    pub dist: CostMatrix<T>,
    next: Vec<u32>,
}

impl<T: Scalar> ShortestPaths<T> {
    /// Vertices of a shortest path `i -> j`, endpoints included, or `None`
    /// when `j` is unreachable.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let n = self.dist.rows;
        if self.dist.get(i, j).is_pos_inf() {
            return None;
        }
        let mut out = vec![i];
        let mut cur = i;
        while cur != j {
            let nx = self.next[cur * n + j];
            if nx == NONE || out.len() > n {
                return None;
            }
            cur = nx as usize;
            out.push(cur);
        }
        Some(out)
    }
}

/// Floyd-Warshall over the complete digraph with arc costs `d`. The
/// diagonal is first clamped to `min(d[i][i], 0)`.
pub fn floyd_warshall<T: Scalar>(d: &CostMatrix<T>) -> Result<ShortestPaths<T>> {
    if !d.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", d.rows, d.cols)));
    }
    let n = d.rows;
    let mut dist = d.with_clamped_diagonal();
    let mut next: Vec<u32> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i == j {
                i as u32
            } else if dist.data[idx].is_pos_inf() {
                NONE
            } else {
                j as u32
            }
        })
        .collect();
    if n == 0 {
        return Ok(ShortestPaths { dist, next });
    }
    let mut row_k = vec![T::INFINITY; n];
    for k in 0..n {
        row_k.copy_from_slice(dist.row(k));
        dist.data
            .par_chunks_mut(n)
            .zip(next.par_chunks_mut(n))
            .for_each(|(drow, nrow)| {
                let dik = drow[k];
                if dik.is_pos_inf() {
                    return;
                }
                let via = nrow[k];
                for j in 0..n {
                    let cand = dik.plus(row_k[j]);
                    if cand < drow[j] {
                        drow[j] = cand;
                        nrow[j] = via;
                    }
                }
            });
        if dist.get(k, k) < T::ZERO {
            return Err(Error::NegativeCycleDetected {
                vertex: k,
                context: "negative diagonal entry during Floyd-Warshall".into(),
            });
        }
    }
    if let Some(i) = (0..n).find(|&i| dist.get(i, i) < T::ZERO) {
        return Err(Error::NegativeCycleDetected {
            vertex: i,
            context: "negative diagonal entry after Floyd-Warshall".into(),
        });
    }
    Ok(ShortestPaths { dist, next })
}

#[derive(Debug, Clone)]
enum PowerNode {
    /// The clamped input matrix. `stay[i]` marks diagonal entries that mean
    /// "zero arcs" rather than a negative self arc.
    Base { stay: Vec<bool> },
    Product {
        left: usize,
        right: usize,
        argmin: Vec<u32>,
    },
}

/// `d^k` under min-plus with enough bookkeeping to expand any finite entry
/// into its at most `k` arcs.
#[derive(Debug, Clone)]
pub struct HopPaths<T> {
    pub dist: CostMatrix<T>,
    hops: usize,
    nodes: Vec<PowerNode>,
    root: usize,
}

impl<T: Scalar> HopPaths<T> {
    pub fn hops(&self) -> usize {
        self.hops
    }

    /// Number of min-plus products performed.
    pub fn products(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Vertices of an optimal `<= k`-arc path `i -> j`, endpoints included.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if self.dist.get(i, j).is_pos_inf() {
            return None;
        }
        let mut out = vec![i];
        self.expand(self.root, i, j, &mut out)?;
        Some(out)
    }

    fn expand(&self, node: usize, i: usize, j: usize, out: &mut Vec<usize>) -> Option<()> {
        let n = self.dist.rows;
        match &self.nodes[node] {
            PowerNode::Base { stay } => {
                if !(i == j && stay[i]) {
                    out.push(j);
                }
                Some(())
            }
            PowerNode::Product { left, right, argmin } => {
                let k = argmin[i * n + j];
                if k == NONE {
                    return None;
                }
                self.expand(*left, i, k as usize, out)?;
                self.expand(*right, k as usize, j, out)
            }
        }
    }
}

/// Distances over paths of at most `k` arcs by binary exponentiation of the
/// diagonal-clamped matrix. With the diagonal `<= 0`, `d^k` is exactly the
/// `<= k`-arc distance.
pub fn minplus_power_with_paths<T: Scalar>(d: &CostMatrix<T>, k: usize) -> Result<HopPaths<T>> {
    if !d.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", d.rows, d.cols)));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("hop bound must be at least 1".into()));
    }
    let n = d.rows;
    let stay = (0..n).map(|i| d.get(i, i) >= T::ZERO).collect();
    let base = d.with_clamped_diagonal();
    let mut nodes = vec![PowerNode::Base { stay }];
    let mut power = (0usize, base);
    let mut acc: Option<(usize, CostMatrix<T>)> = None;
    let mut e = k;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => power.clone(),
                Some((idx, m)) => {
                    let (c, argmin) = minplus_product_with_argmin(&m, &power.1)?;
                    nodes.push(PowerNode::Product {
                        left: idx,
                        right: power.0,
                        argmin,
                    });
                    (nodes.len() - 1, c)
                }
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        let (sq, argmin) = minplus_product_with_argmin(&power.1, &power.1)?;
        nodes.push(PowerNode::Product {
            left: power.0,
            right: power.0,
            argmin,
        });
        power = (nodes.len() - 1, sq);
    }
    let (root, dist) = acc.expect("k >= 1 sets at least one bit");
    Ok(HopPaths {
        dist,
        hops: k,
        nodes,
        root,
    })
}

pub fn minplus_power<T: Scalar>(d: &CostMatrix<T>, k: usize) -> Result<CostMatrix<T>> {
    minplus_power_with_paths(d, k).map(|h| h.dist)
}
