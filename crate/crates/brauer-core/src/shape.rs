//! Young diagrams (integer partitions).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A Young diagram: weakly decreasing sequence of positive row lengths.
/// The empty diagram is the empty sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    rows: Vec<u32>,
}

impl Shape {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        let decreasing = rows.windows(2).all(|w| w[0] >= w[1]);
        if !decreasing || rows.contains(&0) {
            return Err(Error::InvalidShape { rows });
        }
        Ok(Self { rows })
    }

    pub fn empty() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn boxes(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Length of row `i` (1-based); zero outside the diagram.
    pub fn row_len(&self, i: usize) -> u32 {
        if i >= 1 {
            self.rows.get(i - 1).copied().unwrap_or(0)
        } else {
            0
        }
    }

    /// Length of column `j` (1-based); zero outside the diagram.
    pub fn col_len(&self, j: usize) -> u32 {
        self.rows.iter().filter(|&&r| r as usize >= j).count() as u32
    }

    pub fn contains_box(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && self.row_len(row) as usize >= col
    }

    /// Conjugate (transposed) diagram.
    pub fn conjugate(&self) -> Shape {
        let cols = self.rows.first().copied().unwrap_or(0) as usize;
        Shape {
            rows: (1..=cols).map(|j| self.col_len(j)).collect(),
        }
    }

    /// Whether the diagram labels an irreducible `B_f(x)` module: at most
    /// `f` boxes with `f - boxes` even.
    pub fn in_upsilon(&self, f: usize) -> bool {
        let b = self.boxes() as usize;
        b <= f && (f - b).is_multiple_of(2)
    }

    pub fn contains(&self, other: &Shape) -> bool {
        (1..=other.num_rows()).all(|i| self.row_len(i) >= other.row_len(i))
    }

    /// Diagram with one box appended to row `row` (1-based), if the result
    /// is still a partition. `row = num_rows + 1` starts a new row.
    pub fn with_box_added(&self, row: usize) -> Option<Shape> {
        if row == 0 || row > self.num_rows() + 1 {
            return None;
        }
        if row > 1 && self.row_len(row - 1) <= self.row_len(row) {
            return None;
        }
        let mut rows = self.rows.clone();
        if row == rows.len() + 1 {
            rows.push(1);
        } else {
            rows[row - 1] += 1;
        }
        Some(Shape { rows })
    }

    /// Diagram with one box removed from row `row` (1-based), if possible.
    pub fn with_box_removed(&self, row: usize) -> Option<Shape> {
        if row == 0 || row > self.num_rows() {
            return None;
        }
        if row < self.num_rows() && self.row_len(row) <= self.row_len(row + 1) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[row - 1] -= 1;
        if rows[row - 1] == 0 {
            rows.pop();
        }
        Some(Shape { rows })
    }

    /// Rows (1-based) where a box can be appended.
    pub fn addable_rows(&self) -> Vec<usize> {
        (1..=self.num_rows() + 1)
            .filter(|&r| r == 1 || self.row_len(r - 1) > self.row_len(r))
            .collect()
    }

    /// Rows (1-based) holding a removable corner.
    pub fn removable_rows(&self) -> Vec<usize> {
        (1..=self.num_rows())
            .filter(|&r| self.row_len(r) > self.row_len(r + 1))
            .collect()
    }

    /// Content `col - row` of the box appended to `row`.
    pub fn added_content(&self, row: usize) -> i64 {
        self.row_len(row) as i64 + 1 - row as i64
    }

    /// Content of the corner removed from `row`.
    pub fn removed_content(&self, row: usize) -> i64 {
        self.row_len(row) as i64 - row as i64
    }

    /// All partitions of `n`, in descending lexicographic order
    /// (`[n]` first, `[1,...,1]` last).
    pub fn partitions(n: u32) -> Vec<Shape> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(remaining: u32, max: u32, stack: &mut Vec<u32>, out: &mut Vec<Shape>) {
            if remaining == 0 {
                out.push(Shape { rows: stack.clone() });
                return;
            }
            for first in (1..=remaining.min(max)).rev() {
                stack.push(first);
                rec(remaining - first, first, stack, out);
                stack.pop();
            }
        }
        rec(n, n.max(1), &mut stack, &mut out);
        out
    }

    /// The label set for level `f` of the Brauer Bratteli diagram: diagrams
    /// with `f, f-2, f-4, ...` boxes, largest box count first.
    pub fn upsilon(f: usize) -> Vec<Shape> {
        let mut out = Vec::new();
        let mut b = f as i64;
        while b >= 0 {
            out.extend(Shape::partitions(b as u32));
            b -= 2;
        }
        out
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Shape {
    type Err = Error;

    /// Parses the bracket syntax: `"[2,1]"`, `"[]"` for the empty diagram.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                what: "shape",
                text: s.to_string(),
            })?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Shape::empty());
        }
        let rows = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                what: "shape",
                text: s.to_string(),
            })?;
        Shape::new(rows)
    }
}
