use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, render_rational, Rational};
use super::LinalgError;

/// Dense row-major matrix of exact rationals with optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

/// Record of one fraction-free elimination run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BareissTrace {
    /// (row, column) of each pivot in elimination order.
    pub pivots: Vec<(usize, usize)>,
    /// Every division by the previous pivot was exact.
    pub exact_divisions: bool,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(Self { rows, cols, entries, row_labels: None, col_labels: None })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols], row_labels: None, col_labels: None }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::ShapeMismatch { expected: cols, found: row.len() });
            }
            entries.extend(row);
        }
        Self::new(n, cols, entries)
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()).collect();
        Self::from_rows(cols, rows).expect("rows of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rows);
        self.row_labels = Some(labels);
        self
    }

    pub fn with_col_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.cols);
        self.col_labels = Some(labels);
        self
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &j) in columns.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = self.col_labels.as_ref().map(|l| columns.iter().map(|&j| l[j].clone()).collect());
        out
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let scale = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&scale / x.denom())).collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let (rank, trace) = self.rank_with_trace();
        assert!(trace.exact_divisions, "fraction-free elimination left the integers");
        rank
    }

    /// Rank by Bareiss elimination on the integer-scaled rows. Pivots are the
    /// first nonzero entry of the leftmost column that still has one.
    pub fn rank_with_trace(&self) -> (usize, BareissTrace) {
        let mut a = self.integer_rows();
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut exact = true;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(row, p);
            let (top, rest) = a.split_at_mut(row + 1);
            let pivot_row = &top[row];
            for other in rest.iter_mut() {
                let factor = other[col].clone();
                for j in col + 1..self.cols {
                    let num = &other[j] * &pivot_row[col] - &factor * &pivot_row[j];
                    let (q, r) = num.div_rem(&prev);
                    exact &= r.is_zero();
                    other[j] = q;
                }
                other[col] = BigInt::zero();
            }
            prev = a[row][col].clone();
            pivots.push((row, col));
            row += 1;
        }
        (row, BareissTrace { pivots, exact_divisions: exact })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else { continue };
            for j in 0..m.cols {
                m.entries.swap(row * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - &f * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of {v : Av = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, f).clone();
                }
                v
            })
            .collect()
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Tab-separated rows; '%' header lines carry the shape and any labels.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% shape\t{}\t{}", self.rows, self.cols);
        if let Some(l) = &self.row_labels {
            let _ = writeln!(out, "% rows\t{}", l.join("\t"));
        }
        if let Some(l) = &self.col_labels {
            let _ = writeln!(out, "% cols\t{}", l.join("\t"));
        }
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(render_rational).collect();
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }

    /// Parses the output of [`RationalMatrix::dump`].
    pub fn parse_dump(text: &str) -> Result<Self, LinalgError> {
        let err = |line: usize, column: usize, message: &str| LinalgError::Parse { line, column, message: message.into() };
        let mut shape: Option<(usize, usize)> = None;
        let mut row_labels = None;
        let mut col_labels = None;
        let mut entries = Vec::new();
        let mut rows = 0;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if let Some(header) = line.strip_prefix('%') {
                let fields: Vec<&str> = header.trim_start().split('\t').collect();
                match fields[0] {
                    "shape" if fields.len() == 3 => {
                        let r = fields[1].parse().map_err(|_| err(lineno, 1, "bad row count"))?;
                        let c = fields[2].parse().map_err(|_| err(lineno, 1, "bad column count"))?;
                        shape = Some((r, c));
                    }
                    "rows" => row_labels = Some(fields[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
                    "cols" => col_labels = Some(fields[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
                    _ => return Err(err(lineno, 1, "unknown header line")),
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut column = 1;
            for field in line.split('\t') {
                entries.push(parse_rational(field).ok_or_else(|| err(lineno, column, "malformed rational"))?);
                column += field.chars().count() + 1;
            }
            rows += 1;
        }
        let (r, c) = shape.ok_or_else(|| err(1, 1, "missing shape header"))?;
        if r != rows {
            return Err(err(text.lines().count(), 1, "row count differs from shape header"));
        }
        let mut m = Self::new(r, c, entries)?;
        if let Some(l) = row_labels {
            if l.len() != r {
                return Err(err(1, 1, "row label count differs from shape"));
            }
            m.row_labels = Some(l);
        }
        if let Some(l) = col_labels {
            if l.len() != c {
                return Err(err(1, 1, "column label count differs from shape"));
            }
            m.col_labels = Some(l);
        }
        Ok(m)
    }

    /// Entries rendered as "p" or "p/q", row by row.
    pub fn rendered_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(render_rational).collect()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.denom().is_one())
    }

    pub fn max_abs_entry(&self) -> Option<Rational> {
        self.entries.iter().map(|x| x.abs()).max()
    }
}

/// An incrementally grown subspace kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinalgError> {
        self.check(v)?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> Result<bool, LinalgError> {
        self.check(v)?;
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return Ok(false) };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        Ok(true)
    }

    fn check(&self, v: &[Rational]) -> Result<(), LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(())
    }
}

/// Whether `v` is a rational combination of `basis`.
pub fn in_span(v: &[Rational], basis: &[Vec<Rational>]) -> Result<bool, LinalgError> {
    let mut span = EchelonBasis::new(v.len());
    for b in basis {
        span.insert(b)?;
    }
    span.contains(v)
}
