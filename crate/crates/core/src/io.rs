//! Text serialization of cost matrices and plan witnesses.
//!
//! Two matrix layouts are supported: TSV (one row per line) and a sparse-ish
//! structured form with one `i j value` line per entry under a `rows cols`
//! header. Both use the `inf` / `-inf` tokens.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::ParseError;
use crate::graph::VertexId;
use crate::minplus::CostMatrix;
use crate::numeric::{format_value, parse_value, Scalar};
use crate::plan::TravelPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Tsv,
    Text,
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(MatrixFormat::Tsv),
            "text" => Ok(MatrixFormat::Text),
            other => Err(format!("unknown format '{other}' (expected tsv or text)")),
        }
    }
}

pub fn write_matrix<T: Scalar>(m: &CostMatrix<T>, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Tsv => m.to_string(),
        MatrixFormat::Text => {
            let mut out = format!("{} {}\n", m.rows(), m.cols());
            for i in 0..m.rows() {
                for (j, &v) in m.row(i).iter().enumerate() {
                    let _ = writeln!(out, "{i} {j} {}", format_value(v));
                }
            }
            out
        }
    }
}

fn value<T: Scalar>(line: usize, token: &str) -> Result<T, ParseError> {
    parse_value(token).ok_or_else(|| ParseError::new(line, format!("bad value '{token}'")))
}

fn index(line: usize, token: &str, bound: usize) -> Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(i) if i < bound => Ok(i),
        _ => Err(ParseError::new(line, format!("bad index '{token}'"))),
    }
}

pub fn read_matrix<T: Scalar>(text: &str, format: MatrixFormat) -> Result<CostMatrix<T>, ParseError> {
    match format {
        MatrixFormat::Tsv => read_tsv(text),
        MatrixFormat::Text => read_text(text),
    }
}

fn read_tsv<T: Scalar>(text: &str) -> Result<CostMatrix<T>, ParseError> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split('\t')
            .map(|t| value(k + 1, t.trim()))
            .collect::<Result<Vec<T>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ParseError::new(
                    k + 1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    CostMatrix::from_rows(rows).map_err(|e| ParseError::new(0, e.to_string()))
}

fn read_text<T: Scalar>(text: &str) -> Result<CostMatrix<T>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(1, "missing header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| ParseError::new(hl, format!("bad dimension '{t}'"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(ParseError::new(hl, "header must be 'rows cols'"));
    };
    let mut m = CostMatrix::filled(rows, cols, T::INFINITY);
    let mut seen = vec![false; rows * cols];
    for (k, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = tokens[..] else {
            return Err(ParseError::new(k, "expected 'i j value'"));
        };
        let (i, j) = (index(k, i, rows)?, index(k, j, cols)?);
        if std::mem::replace(&mut seen[i * cols + j], true) {
            return Err(ParseError::new(k, format!("entry ({i}, {j}) repeated")));
        }
        m.set(i, j, value(k, v)?);
    }
    Ok(m)
}

/// `s t cost x1:amount1 x2:amount2 ...` for one pair.
pub fn witness_line<T: Scalar>(s: VertexId, t: VertexId, plan: &TravelPlan<T>) -> String {
    let mut line = format!("{s} {t} {}", format_value(plan.cost()));
    for (x, amount) in plan.recharges() {
        let _ = write!(line, " {x}:{}", format_value(amount));
    }
    line
}
