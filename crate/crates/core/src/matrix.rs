//! Dense max-plus matrices over [`ExtendedScalar`].

use std::fmt;
use std::str::FromStr;

use crate::error::{MaxPlusError, ParseScalarError, Result};
use crate::par::{self, Execution};
use crate::scalar::ExtendedScalar;

/// A dense `rows × cols` matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtendedScalar>,
}

impl TropicalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExtendedScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(MaxPlusError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MaxPlusError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(TropicalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<ExtendedScalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(MaxPlusError::EntryCount {
                rows: nrows,
                cols: ncols,
                expected: ncols,
                got: bad.len(),
            });
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    /// The all-`−∞` matrix ℰ.
    pub fn neg_inf(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        TropicalMatrix {
            rows,
            cols,
            data: vec![ExtendedScalar::NegInf; rows * cols],
        }
    }

    /// The max-plus identity E.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::neg_inf(n, n);
        for i in 0..n {
            m.data[i * n + i] = ExtendedScalar::zero();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MaxPlusError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtendedScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtendedScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExtendedScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[ExtendedScalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<ExtendedScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [ExtendedScalar] {
        &mut self.data
    }

    /// No `+∞` entry, i.e. the matrix is ℝmax-valued.
    pub fn is_rmax_valued(&self) -> bool {
        !self.has_pos_inf()
    }

    pub fn has_pos_inf(&self) -> bool {
        self.data.iter().any(ExtendedScalar::is_pos_inf)
    }

    /// Every entry is a real number.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(ExtendedScalar::is_finite)
    }

    /// Entrywise `self ≤ other`; `false` on dimension mismatch.
    pub fn le(&self, other: &Self) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn oplus(&self, other: &Self) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(MaxPlusError::DimensionMismatch {
                op: "oplus",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.oplus(b))
            .collect();
        Ok(TropicalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn otimes(&self, other: &Self) -> Result<Self> {
        let exec = Execution::default().for_dim(self.rows.max(other.cols));
        self.otimes_with(other, exec)
    }

    pub fn otimes_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MaxPlusError::DimensionMismatch {
                op: "otimes",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let (m, p) = (self.rows, other.cols);
        let mut data = vec![ExtendedScalar::NegInf; m * p];
        par::for_each_row(&mut data, p, exec, |i, out| {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_neg_inf() {
                    continue;
                }
                for (slot, b) in out.iter_mut().zip(other.row(k)) {
                    let cand = a.otimes(b);
                    if cand > *slot {
                        *slot = cand;
                    }
                }
            }
        });
        Ok(TropicalMatrix {
            rows: m,
            cols: p,
            data,
        })
    }

    /// Max-plus matrix-vector product.
    pub fn apply(&self, x: &[ExtendedScalar]) -> Result<Vec<ExtendedScalar>> {
        if x.len() != self.cols {
            return Err(MaxPlusError::DimensionMismatch {
                op: "apply",
                left: self.dims(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(ExtendedScalar::NegInf, |acc, (a, b)| {
                        acc.oplus(&a.otimes(b))
                    })
            })
            .collect())
    }

    pub fn scale(&self, lambda: &ExtendedScalar) -> Self {
        TropicalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| lambda.otimes(a)).collect(),
        }
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            row0 + rows <= self.rows && col0 + cols <= self.cols,
            "submatrix out of range"
        );
        let data = (row0..row0 + rows)
            .flat_map(|i| self.row(i)[col0..col0 + cols].iter().cloned())
            .collect();
        TropicalMatrix { rows, cols, data }
    }

    /// Writes `block` with its top-left corner at `(row0, col0)`.
    pub fn put_block(&mut self, row0: usize, col0: usize, block: &Self) {
        assert!(
            row0 + block.rows <= self.rows && col0 + block.cols <= self.cols,
            "block out of range"
        );
        for i in 0..block.rows {
            let dst = (row0 + i) * self.cols + col0;
            self.data[dst..dst + block.cols].clone_from_slice(block.row(i));
        }
    }

    /// Assembles `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(MaxPlusError::DimensionMismatch {
                op: "from_blocks",
                left: tl.dims(),
                right: br.dims(),
            });
        }
        let mut m = Self::neg_inf(tl.rows + bl.rows, tl.cols + tr.cols);
        m.put_block(0, 0, tl);
        m.put_block(0, tl.cols, tr);
        m.put_block(tl.rows, 0, bl);
        m.put_block(tl.rows, tl.cols, br);
        Ok(m)
    }

    /// Finite entries as `(row, col, weight)`, row-major.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, &ExtendedScalar)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_neg_inf())
            .map(move |(idx, v)| (idx / self.cols, idx % self.cols, v))
    }

    /// Rows as vectors of strings, for serialization.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

pub fn mat_oplus(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<TropicalMatrix> {
    a.oplus(b)
}

pub fn mat_otimes(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<TropicalMatrix> {
    a.otimes(b)
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[ {} ]", line.join("  "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseMatrixError {
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Shape(#[from] MaxPlusError),
}

/// Parses rows separated by `;` with entries separated by whitespace or commas,
/// e.g. `"0 -inf; 4 0"`.
impl FromStr for TropicalMatrix {
    type Err = ParseMatrixError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(str::parse)
                    .collect::<std::result::Result<Vec<ExtendedScalar>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(TropicalMatrix::from_rows(rows)?)
    }
}
