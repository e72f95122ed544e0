//! Grid shapes, cells, labelings and the walks they induce.
//!
//! Cells are 1-based: `(1, 1)` is the top-left corner and `(m, n)` the
//! bottom-right. Storage is row-major and 0-based, but that never leaks out
//! of this module.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest accepted cell count.
pub const MAX_CELLS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {m}x{n}")]
    ZeroDimension { m: usize, n: usize },
    #[error("grid {m}x{n} has more than {MAX_CELLS} cells")]
    TooLarge { m: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, {detail}")]
    Shape {
        expected_rows: usize,
        expected_cols: usize,
        detail: String,
    },
    #[error(
        "labels are not a permutation of 1..={max}: duplicated {duplicated:?}, missing {missing:?}"
    )]
    NotPermutation {
        max: u64,
        duplicated: Vec<u64>,
        missing: Vec<u64>,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: token {token:?} is not a non-negative integer")]
    BadToken { line: usize, token: String },
    #[error("ragged rows: line {line} has {found} entries, expected {expected}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no rows found")]
    Empty,
    #[error(transparent)]
    Invalid(#[from] LabelingError),
}

/// Shape of the grid graph `P_m x P_n`: `m` rows, `n` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridDims {
    m: usize,
    n: usize,
}

impl GridDims {
    pub fn new(m: usize, n: usize) -> Result<Self, GridError> {
        if m == 0 || n == 0 {
            return Err(GridError::ZeroDimension { m, n });
        }
        match (m as u64).checked_mul(n as u64) {
            Some(c) if c <= MAX_CELLS => Ok(Self { m, n }),
            _ => Err(GridError::TooLarge { m, n }),
        }
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn cell_count(&self) -> usize {
        self.m * self.n
    }

    pub fn transposed(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }

    /// Orientation with the shorter side first.
    pub fn canonical(&self) -> Self {
        if self.m <= self.n {
            *self
        } else {
            self.transposed()
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (1..=self.m).contains(&cell.i) && (1..=self.n).contains(&cell.j)
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (1..=self.m).flat_map(move |i| (1..=self.n).map(move |j| Cell { i, j }))
    }

    pub(crate) fn index_of(&self, cell: Cell) -> usize {
        debug_assert!(self.contains(cell));
        (cell.i - 1) * self.n + (cell.j - 1)
    }

    pub(crate) fn cell_at(&self, index: usize) -> Cell {
        Cell {
            i: index / self.n + 1,
            j: index % self.n + 1,
        }
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// A vertex `(i, j)` of the grid, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

pub fn manhattan(a: Cell, b: Cell) -> u64 {
    (a.i.abs_diff(b.i) + a.j.abs_diff(b.j)) as u64
}

/// Checks that `rows` is an `m x n` matrix whose entries are exactly `1..=mn`.
pub fn validate(dims: GridDims, rows: &[Vec<u64>]) -> Result<(), LabelingError> {
    let shape_err = |detail: String| LabelingError::Shape {
        expected_rows: dims.m,
        expected_cols: dims.n,
        detail,
    };
    if rows.len() != dims.m {
        return Err(shape_err(format!("got {} rows", rows.len())));
    }
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != dims.n) {
        return Err(shape_err(format!(
            "row {} has {} entries",
            r + 1,
            row.len()
        )));
    }
    check_permutation(rows.iter().flatten().copied(), dims.cell_count() as u64)
}

fn check_permutation(values: impl Iterator<Item = u64>, max: u64) -> Result<(), LabelingError> {
    let mut seen = vec![false; max as usize + 1];
    let mut duplicated = BTreeSet::new();
    let mut out_of_range = BTreeSet::new();
    for v in values {
        if v == 0 || v > max {
            out_of_range.insert(v);
        } else if seen[v as usize] {
            duplicated.insert(v);
        } else {
            seen[v as usize] = true;
        }
    }
    let missing: Vec<u64> = (1..=max).filter(|&v| !seen[v as usize]).collect();
    if missing.is_empty() && duplicated.is_empty() && out_of_range.is_empty() {
        return Ok(());
    }
    // Out-of-range entries are reported alongside duplicates: both are labels
    // that should not be there.
    let mut duplicated: Vec<u64> = duplicated.into_iter().collect();
    duplicated.extend(out_of_range);
    Err(LabelingError::NotPermutation {
        max,
        duplicated,
        missing,
    })
}

/// A bijection from the cells of a grid onto `1..=mn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    dims: GridDims,
    labels: Vec<u64>,
}

impl Labeling {
    /// Builds a labeling from row-major labels, validating bijectivity.
    pub fn new(dims: GridDims, labels: Vec<u64>) -> Result<Self, LabelingError> {
        if labels.len() != dims.cell_count() {
            return Err(LabelingError::Shape {
                expected_rows: dims.m,
                expected_cols: dims.n,
                detail: format!("got {} labels", labels.len()),
            });
        }
        check_permutation(labels.iter().copied(), dims.cell_count() as u64)?;
        Ok(Self { dims, labels })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, LabelingError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let dims = GridDims::new(m, n)?;
        validate(dims, rows)?;
        Ok(Self {
            dims,
            labels: rows.concat(),
        })
    }

    /// Row-major identity labeling.
    pub fn identity(dims: GridDims) -> Self {
        Self {
            dims,
            labels: (1..=dims.cell_count() as u64).collect(),
        }
    }

    pub(crate) fn from_raw_unchecked(dims: GridDims, labels: Vec<u64>) -> Self {
        debug_assert!(check_permutation(labels.iter().copied(), dims.cell_count() as u64).is_ok());
        Self { dims, labels }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn label(&self, cell: Cell) -> u64 {
        self.labels[self.dims.index_of(cell)]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.labels
            .chunks(self.dims.n)
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Cells in increasing label order.
    pub fn inverse_walk(&self) -> Walk {
        let mut cells = vec![Cell::new(0, 0); self.labels.len()];
        for (idx, &label) in self.labels.iter().enumerate() {
            cells[(label - 1) as usize] = self.dims.cell_at(idx);
        }
        Walk {
            dims: self.dims,
            cells,
        }
    }

    /// Total Manhattan length of the walk through cells in label order.
    pub fn walk_length(&self) -> u64 {
        self.inverse_walk().length()
    }

    pub fn transpose(&self) -> Self {
        let t = self.dims.transposed();
        let mut labels = vec![0; self.labels.len()];
        for cell in self.dims.cells() {
            labels[t.index_of(Cell::new(cell.j, cell.i))] = self.label(cell);
        }
        Self { dims: t, labels }
    }

    /// Replaces every label `t` with `mn + 1 - t`, reversing the walk.
    pub fn reverse_labels(&self) -> Self {
        let top = self.labels.len() as u64 + 1;
        Self {
            dims: self.dims,
            labels: self.labels.iter().map(|&t| top - t).collect(),
        }
    }

    /// Canonical text form: one line per row, single-space separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.labels.chunks(self.dims.n) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form. Any whitespace run separates tokens; blank lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>().map_err(|_| ParseError::BadToken {
                        line: lineno + 1,
                        token: tok.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(ParseError::RaggedRow {
                        line: lineno + 1,
                        expected: first.len(),
                        found: row.len(),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(ParseError::Empty);
        }
        Ok(Self::from_rows(&rows)?)
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sequence of cells `σ⁻¹(1), …, σ⁻¹(mn)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    dims: GridDims,
    cells: Vec<Cell>,
}

impl Walk {
    /// Builds a walk, checking that it visits every cell exactly once.
    pub fn new(dims: GridDims, cells: Vec<Cell>) -> Result<Self, LabelingError> {
        Ok(Self::to_labeling_checked(dims, &cells)?.inverse_walk())
    }

    fn to_labeling_checked(dims: GridDims, cells: &[Cell]) -> Result<Labeling, LabelingError> {
        if cells.len() != dims.cell_count() {
            return Err(LabelingError::Shape {
                expected_rows: dims.m,
                expected_cols: dims.n,
                detail: format!("walk has {} cells", cells.len()),
            });
        }
        let mut labels = vec![0u64; cells.len()];
        let mut outside = Vec::new();
        for (t, &cell) in cells.iter().enumerate() {
            if dims.contains(cell) {
                labels[dims.index_of(cell)] = t as u64 + 1;
            } else {
                outside.push(t as u64 + 1);
            }
        }
        if !outside.is_empty() {
            return Err(LabelingError::Shape {
                expected_rows: dims.m,
                expected_cols: dims.n,
                detail: format!("walk steps {outside:?} leave the grid"),
            });
        }
        // A cell visited twice leaves another label slot at zero.
        Labeling::new(dims, labels)
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn length(&self) -> u64 {
        self.cells.windows(2).map(|w| manhattan(w[0], w[1])).sum()
    }

    pub fn to_labeling(&self) -> Labeling {
        let mut labels = vec![0u64; self.cells.len()];
        for (t, &cell) in self.cells.iter().enumerate() {
            labels[self.dims.index_of(cell)] = t as u64 + 1;
        }
        Labeling::from_raw_unchecked(self.dims, labels)
    }
}
