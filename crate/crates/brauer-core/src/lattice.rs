//! Permutation lattices: words over `Z \ {0}` encoding paths in the Brauer
//! Bratteli diagram.
//!
//! Element `+h` records a box added to row `h`, `-h` a box removed from row
//! `h`. A word is a permutation lattice when every prefix leaves a valid
//! Young diagram, i.e. the counting values `#(1) >= #(2) >= ... >= 0` hold at
//! every step. Lattices of order `f` and diagram `λ` label the
//! Gelfand-Tzetlin basis of the irreducible module `[f, λ]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::shape::Shape;

/// A finite word over the nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    elements: Vec<i32>,
}

impl Word {
    pub fn new(elements: Vec<i32>) -> Result<Self> {
        if let Some(position) = elements.iter().position(|&e| e == 0) {
            return Err(Error::ZeroWordElement { position });
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[i32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Counting value `#_w(k) - #_w(-k)` over the whole word.
    pub fn counting(&self, k: i32) -> i64 {
        let mut c = 0i64;
        for &e in &self.elements {
            if e == k {
                c += 1;
            } else if e == -k {
                c -= 1;
            }
        }
        c
    }
}

/// One step of a lattice path: a box added to or removed from a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxStep {
    pub add: bool,
    pub row: usize,
    pub col: usize,
}

impl BoxStep {
    /// Classical content `col - row` of the box moved by this step.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

/// A validated permutation lattice with its cached terminal shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationLattice {
    word: Word,
    shape: Shape,
}

impl PermutationLattice {
    /// Checks the prefix chain condition and computes the shape.
    ///
    /// The error carries the first prefix length (1-based) at which the
    /// weakly-decreasing condition fails.
    pub fn validate(word: Word) -> Result<Self> {
        let mut rows: Vec<i64> = Vec::new();
        for (k, &e) in word.elements().iter().enumerate() {
            if !apply_step(&mut rows, e) {
                return Err(Error::InvalidWord { prefix: k + 1 });
            }
        }
        let shape = Shape::new(rows.iter().map(|&r| r as u32).collect())
            .expect("valid prefix chain yields a partition");
        Ok(Self { word, shape })
    }

    pub fn from_elements(elements: Vec<i32>) -> Result<Self> {
        Self::validate(Word::new(elements)?)
    }

    pub fn empty() -> Self {
        Self {
            word: Word { elements: Vec::new() },
            shape: Shape::empty(),
        }
    }

    pub fn order(&self) -> usize {
        self.word.len()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn elements(&self) -> &[i32] {
        self.word.elements()
    }

    /// The lattice formed by the first `i` elements.
    pub fn prefix(&self, i: usize) -> Result<Self> {
        if i > self.order() {
            return Err(Error::PrefixOutOfRange {
                index: i,
                order: self.order(),
            });
        }
        let word = Word {
            elements: self.elements()[..i].to_vec(),
        };
        Ok(Self::validate(word).expect("prefix of a lattice is a lattice"))
    }

    /// Diagram after each prefix: `shapes[i]` is the shape of `w^(i)`,
    /// with `shapes[0]` the empty diagram.
    pub fn prefix_shapes(&self) -> Vec<Shape> {
        let mut rows: Vec<i64> = Vec::new();
        let mut out = Vec::with_capacity(self.order() + 1);
        out.push(Shape::empty());
        for &e in self.elements() {
            let ok = apply_step(&mut rows, e);
            debug_assert!(ok);
            out.push(
                Shape::new(rows.iter().map(|&r| r as u32).collect())
                    .expect("valid prefix shape"),
            );
        }
        out
    }

    /// Box data of step `k` (1-based): which box the `k`-th element adds or
    /// removes, relative to the diagram after `k-1` steps.
    pub fn step(&self, k: usize) -> Result<BoxStep> {
        if k == 0 || k > self.order() {
            return Err(Error::IndexOutOfRange {
                index: k,
                order: self.order(),
            });
        }
        let before = self.prefix(k - 1)?.shape;
        let e = self.elements()[k - 1];
        let row = e.unsigned_abs() as usize;
        Ok(if e > 0 {
            BoxStep {
                add: true,
                row,
                col: before.row_len(row) as usize + 1,
            }
        } else {
            BoxStep {
                add: false,
                row,
                col: before.row_len(row) as usize,
            }
        })
    }

    /// Transpose lattice: `wbar_i = #_{w^(i-1)}(w_i) + θ(w_i)` with
    /// `θ(e) = 1` for `e > 0` and `0` otherwise. Its shape is the conjugate
    /// diagram, and transposition is an involution.
    pub fn transpose(&self) -> Self {
        let mut counts: Vec<i64> = Vec::new(); // counting value per row index
        let mut out = Vec::with_capacity(self.order());
        for &e in self.elements() {
            let row = e.unsigned_abs() as usize;
            let count = counts.get(row - 1).copied().unwrap_or(0);
            // counting value of w_i itself: #(e) = count for e > 0, -count for e < 0
            let hat = if e > 0 { count } else { -count };
            let theta = i64::from(e > 0);
            out.push((hat + theta) as i32);
            if counts.len() < row {
                counts.resize(row, 0);
            }
            counts[row - 1] += if e > 0 { 1 } else { -1 };
        }
        Self::from_elements(out).expect("transpose of a lattice is a lattice")
    }

    /// Total order used everywhere for canonical bases: `u < v` when the
    /// first nonzero element of `u - v` is negative. Requires equal order
    /// and shape.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        if self.order() != other.order() || self.shape != other.shape {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.word.cmp(&other.word))
    }

    /// All lattices of order `f` and diagram `shape`, ascending under
    /// [`PermutationLattice::compare`]. Empty when `shape` is not in
    /// `Υ_f`.
    pub fn enumerate(f: usize, shape: &Shape) -> Vec<Self> {
        if !shape.in_upsilon(f) {
            return Vec::new();
        }
        let target: Vec<i64> = shape.rows().iter().map(|&r| r as i64).collect();
        let mut out = Vec::new();
        let mut word: Vec<i32> = Vec::with_capacity(f);
        let mut rows: Vec<i64> = Vec::new();
        enumerate_rec(f, &target, &mut word, &mut rows, &mut out);
        out
    }

    /// Dimension of `[f, shape]`: `f! / ((f-2k)! (2k)!!) * dim(S_{f-2k}; shape)`
    /// with the symmetric-group factor from the hook length formula.
    /// Zero when `shape` is not in `Υ_f`.
    pub fn dimension(f: usize, shape: &Shape) -> u64 {
        if !shape.in_upsilon(f) {
            return 0;
        }
        let boxes = shape.boxes() as usize;
        let k = (f - boxes) / 2;
        let mut v: u128 = 1;
        // f! / (f - 2k)! = f (f-1) ... (f-2k+1)
        for m in (boxes + 1)..=f {
            v *= m as u128;
        }
        // / (2k)!!
        for m in 1..=k {
            v /= 2 * m as u128;
        }
        v *= symmetric_group_dimension(shape) as u128;
        u64::try_from(v).expect("dimension fits in u64")
    }
}

fn apply_step(rows: &mut Vec<i64>, e: i32) -> bool {
    let row = e.unsigned_abs() as usize;
    if e > 0 {
        // adding to row `row` keeps the chain iff the row above is longer
        let above = if row == 1 { i64::MAX } else { rows.get(row - 2).copied().unwrap_or(0) };
        let here = rows.get(row - 1).copied().unwrap_or(0);
        if above < here + 1 {
            return false;
        }
        if rows.len() < row {
            rows.resize(row, 0);
        }
        rows[row - 1] += 1;
    } else {
        let here = rows.get(row - 1).copied().unwrap_or(0);
        let below = rows.get(row).copied().unwrap_or(0);
        if here - 1 < below || here == 0 {
            return false;
        }
        rows[row - 1] -= 1;
        while rows.last() == Some(&0) {
            rows.pop();
        }
    }
    !rows.contains(&0)
}

fn enumerate_rec(
    f: usize,
    target: &[i64],
    word: &mut Vec<i32>,
    rows: &mut Vec<i64>,
    out: &mut Vec<PermutationLattice>,
) {
    let k = word.len();
    if k == f {
        let done = rows.len() == target.len() && rows.iter().zip(target).all(|(a, b)| a == b);
        if done {
            out.push(
                PermutationLattice::from_elements(word.clone())
                    .expect("search emits valid lattices only"),
            );
        }
        return;
    }
    // minimal number of single-box moves from the current diagram to the target
    let remaining = (f - k) as i64;
    let mut need = 0i64;
    for r in 0..rows.len().max(target.len()) {
        let cur = rows.get(r).copied().unwrap_or(0);
        let want = target.get(r).copied().unwrap_or(0);
        need += (cur - want).abs();
    }
    if need > remaining || (remaining - need) % 2 != 0 {
        return;
    }
    // candidate elements in ascending value: -rows..-1, then 1..rows+1
    let nrows = rows.len() as i32;
    for e in (-nrows..0).chain(1..=nrows + 1) {
        let mut next = rows.clone();
        if apply_step(&mut next, e) {
            word.push(e);
            let save = std::mem::replace(rows, next);
            enumerate_rec(f, target, word, rows, out);
            *rows = save;
            word.pop();
        }
    }
}

/// `dim(S_m; λ)` with `m = |λ|`, by the hook length formula.
pub fn symmetric_group_dimension(shape: &Shape) -> u64 {
    let n = shape.boxes() as u128;
    let mut numerator: u128 = 1;
    for m in 1..=n {
        numerator *= m;
    }
    let conj = shape.conjugate();
    let mut hooks: u128 = 1;
    for i in 1..=shape.num_rows() {
        for j in 1..=shape.row_len(i) as usize {
            let h = shape.row_len(i) as i64 + conj.row_len(j) as i64 - i as i64 - j as i64 + 1;
            hooks *= h as u128;
        }
    }
    u64::try_from(numerator / hooks).expect("hook quotient fits in u64")
}

impl fmt::Display for PermutationLattice {
    /// `(1,1,2,-1,1,-2,2)`; `()` for the empty lattice.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse {
                what: "word",
                text: s.to_string(),
            })?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Word { elements: Vec::new() });
        }
        let elements = inner
            .split(',')
            .map(|p| p.trim().parse::<i32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                what: "word",
                text: s.to_string(),
            })?;
        Word::new(elements)
    }
}

impl FromStr for PermutationLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::validate(s.parse::<Word>()?)
    }
}

impl PartialOrd for PermutationLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PermutationLattice {
    /// Plain lexicographic word order; agrees with
    /// [`PermutationLattice::compare`] on equal order and shape.
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.cmp(&other.word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(elements: &[i32]) -> PermutationLattice {
        PermutationLattice::from_elements(elements.to_vec()).unwrap()
    }

    #[test]
    fn validates_the_running_examples() {
        let w = lat(&[1, 1, 2, -1, 1, -2, 2]);
        assert_eq!(w.order(), 7);
        assert_eq!(w.shape().to_string(), "[2,1]");

        let err = PermutationLattice::from_elements(vec![1, 2, 1, -1, 2, 1, 3]).unwrap_err();
        assert_eq!(err, Error::InvalidWord { prefix: 5 });

        let empty = PermutationLattice::empty();
        assert_eq!(empty.order(), 0);
        assert!(empty.shape().is_empty());

        assert_eq!(
            PermutationLattice::from_elements(vec![1, 0, 2]).unwrap_err(),
            Error::ZeroWordElement { position: 1 }
        );
    }

    #[test]
    fn prefixes() {
        let w = lat(&[1, 1, 2, -1, 1, -2, 2]);
        assert_eq!(w.prefix(0).unwrap(), PermutationLattice::empty());
        assert_eq!(w.prefix(7).unwrap(), w);
        let p = w.prefix(4).unwrap();
        assert_eq!(p.elements(), &[1, 1, 2, -1]);
        // counting values over the prefix: #(1) = 2 - 1 = 1, #(2) = 1
        assert_eq!(p.shape().to_string(), "[1,1]");
        assert!(w.prefix(8).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(lat(&[1, 1]).transpose(), lat(&[1, 2]));
        assert_eq!(lat(&[1, -1]).transpose(), lat(&[1, -1]));
        assert_eq!(lat(&[1, 2]).transpose(), lat(&[1, 1]));
    }

    #[test]
    fn transpose_involution_small_orders() {
        for f in 0..=5 {
            for shape in Shape::upsilon(f) {
                for w in PermutationLattice::enumerate(f, &shape) {
                    let t = w.transpose();
                    assert_eq!(t.shape(), &w.shape().conjugate());
                    assert_eq!(t.transpose(), w);
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            PermutationLattice::enumerate(2, &Shape::empty()),
            vec![lat(&[1, -1])]
        );
        let shape1 = Shape::new(vec![1]).unwrap();
        assert_eq!(
            PermutationLattice::enumerate(3, &shape1),
            vec![lat(&[1, -1, 1]), lat(&[1, 1, -1]), lat(&[1, 2, -2])]
        );
        let shape2 = Shape::new(vec![2]).unwrap();
        assert_eq!(PermutationLattice::enumerate(4, &shape2).len(), 6);
        // parity violation: empty result
        assert!(PermutationLattice::enumerate(3, &shape2).is_empty());
    }

    #[test]
    fn enumeration_is_sorted_and_matches_dimension() {
        for f in 0..=6 {
            for shape in Shape::upsilon(f) {
                let all = PermutationLattice::enumerate(f, &shape);
                assert_eq!(all.len() as u64, PermutationLattice::dimension(f, &shape));
                for pair in all.windows(2) {
                    assert_eq!(pair[0].compare(&pair[1]).unwrap(), Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn dimension_formula() {
        let shape2 = Shape::new(vec![2]).unwrap();
        assert_eq!(PermutationLattice::dimension(4, &shape2), 6);
        assert_eq!(PermutationLattice::dimension(3, &Shape::new(vec![1]).unwrap()), 3);
        assert_eq!(PermutationLattice::dimension(3, &shape2), 0);
        // sum of squared dimensions is (2f-1)!!
        let mut total = 0u64;
        for shape in Shape::upsilon(3) {
            total += PermutationLattice::dimension(3, &shape).pow(2);
        }
        assert_eq!(total, 15);
    }

    #[test]
    fn hook_length_dimensions() {
        assert_eq!(symmetric_group_dimension(&Shape::empty()), 1);
        assert_eq!(symmetric_group_dimension(&Shape::new(vec![2, 1]).unwrap()), 2);
        assert_eq!(symmetric_group_dimension(&Shape::new(vec![3, 2]).unwrap()), 5);
        assert_eq!(symmetric_group_dimension(&Shape::new(vec![2, 2, 1]).unwrap()), 5);
    }

    #[test]
    fn compare_requires_matching_class() {
        let u = lat(&[1, -1, 1]);
        let v = lat(&[1, 1, -1]);
        assert_eq!(u.compare(&v).unwrap(), Ordering::Less);
        assert_eq!(v.compare(&u).unwrap(), Ordering::Greater);
        assert_eq!(u.compare(&u).unwrap(), Ordering::Equal);
        assert!(lat(&[1, 1]).compare(&lat(&[1, -1])).is_err());
    }

    #[test]
    fn step_boxes() {
        let w = lat(&[1, 1, 2, -1]);
        assert_eq!(w.step(1).unwrap(), BoxStep { add: true, row: 1, col: 1 });
        assert_eq!(w.step(3).unwrap(), BoxStep { add: true, row: 2, col: 1 });
        assert_eq!(w.step(4).unwrap(), BoxStep { add: false, row: 1, col: 2 });
        assert_eq!(w.step(4).unwrap().content(), 1);
        assert!(w.step(0).is_err());
        assert!(w.step(5).is_err());
    }

    #[test]
    fn display_and_parse() {
        let w = lat(&[1, 1, 2, -1, 1, -2, 2]);
        assert_eq!(w.to_string(), "(1,1,2,-1,1,-2,2)");
        assert_eq!("(1,1,2,-1,1,-2,2)".parse::<PermutationLattice>().unwrap(), w);
        assert_eq!("()".parse::<PermutationLattice>().unwrap(), PermutationLattice::empty());
        assert!("(1,2,1,-1,2,1,3)".parse::<PermutationLattice>().is_err());
    }
}
