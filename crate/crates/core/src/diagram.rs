//! Box diagrams in `[n] x [n]`, Rothe diagrams and the dominance order.
//!
//! A diagram is stored column by column; each column is a [`RowSet`]. Boxes
//! are `(row, column)` pairs, both 1-indexed. Restrictions keep the grid
//! size and never renumber rows or columns.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{not_subword, substitution_indices, Permutation, Word};
use crate::poly::Monomial;

/// Largest supported grid.
pub const MAX_N: usize = 32;

/// A set of row (or column) indices in `1..=32`, bit `i - 1` for index `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RowSet(u32);

impl RowSet {
    pub const EMPTY: RowSet = RowSet(0);

    pub fn from_bits(bits: u32) -> Self {
        RowSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            RowSet(u32::MAX)
        } else {
            RowSet((1u32 << n) - 1)
        }
    }

    pub fn contains(self, i: u32) -> bool {
        (1..=32).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn with(self, i: u32) -> Self {
        debug_assert!((1..=32).contains(&i));
        RowSet(self.0 | 1 << (i - 1))
    }

    pub fn without(self, i: u32) -> Self {
        if (1..=32).contains(&i) {
            RowSet(self.0 & !(1 << (i - 1)))
        } else {
            self
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros())
    }

    pub fn union(self, other: RowSet) -> RowSet {
        RowSet(self.0 | other.0)
    }

    pub fn intersection(self, other: RowSet) -> RowSet {
        RowSet(self.0 & other.0)
    }

    pub fn difference(self, other: RowSet) -> RowSet {
        RowSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: RowSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                i + 1
            })
        })
    }
}

impl FromIterator<u32> for RowSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        iter.into_iter().fold(RowSet::EMPTY, RowSet::with)
    }
}

impl fmt::Debug for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `R <= S`: equal sizes and the k-th least element of `R` never exceeds the
/// k-th least element of `S`.
pub fn column_dominates(r: RowSet, s: RowSet) -> bool {
    r.len() == s.len() && r.iter().zip(s.iter()).all(|(a, b)| a <= b)
}

/// All `S <= d`, in lexicographic order of their sorted elements.
pub fn dominated_column_sets(d: RowSet) -> Vec<RowSet> {
    fn go(bounds: &[u32], t: usize, low: u32, acc: RowSet, out: &mut Vec<RowSet>) {
        if t == bounds.len() {
            out.push(acc);
            return;
        }
        for c in low..=bounds[t] {
            go(bounds, t + 1, c + 1, acc.with(c), out);
        }
    }
    let bounds: Vec<u32> = d.iter().collect();
    let mut out = Vec::new();
    go(&bounds, 0, 1, RowSet::EMPTY, &mut out);
    out
}

/// Number of chains `c_1 < ... < c_m` with `c_t <= d_t`.
pub fn count_dominated_column(d: RowSet) -> u64 {
    let bounds: Vec<u32> = d.iter().collect();
    let Some(&top) = bounds.last() else {
        return 1;
    };
    // ways[c] = chains of the current length ending exactly at c
    let mut ways = vec![0u64; top as usize + 1];
    for c in 1..=bounds[0] {
        ways[c as usize] = 1;
    }
    for &bound in &bounds[1..] {
        let mut next = vec![0u64; top as usize + 1];
        let mut prefix = 0u64;
        for c in 1..=bound as usize {
            next[c] = prefix;
            prefix += ways[c];
        }
        ways = next;
    }
    ways.iter().sum()
}

/// A finite set of boxes in `[n] x [n]`, stored column-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    n: usize,
    columns: Vec<RowSet>,
}

impl Diagram {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_N, "grid size {n} exceeds {MAX_N}");
        Diagram {
            n,
            columns: vec![RowSet::EMPTY; n],
        }
    }

    pub fn from_boxes<I: IntoIterator<Item = (u32, u32)>>(n: usize, boxes: I) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Invalid(format!("grid size {n} exceeds {MAX_N}")));
        }
        let mut d = Diagram::empty(n);
        for (i, j) in boxes {
            if i == 0 || j == 0 || i as usize > n || j as usize > n {
                return Err(Error::Invalid(format!("box ({i},{j}) outside [{n}]x[{n}]")));
            }
            d.insert(i, j);
        }
        Ok(d)
    }

    pub fn from_columns(n: usize, columns: Vec<RowSet>) -> Result<Self> {
        let full = RowSet::full(n);
        if columns.len() != n || columns.iter().any(|c| !c.is_subset(full)) {
            return Err(Error::SizeMismatch(format!(
                "columns do not fit a {n}x{n} grid"
            )));
        }
        Ok(Diagram { n, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[RowSet] {
        &self.columns
    }

    /// Column `j`, 1-indexed.
    pub fn column(&self, j: u32) -> RowSet {
        self.columns[j as usize - 1]
    }

    pub fn insert(&mut self, i: u32, j: u32) {
        let c = &mut self.columns[j as usize - 1];
        *c = c.with(i);
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        j >= 1 && (j as usize) <= self.n && self.column(j).contains(i)
    }

    pub fn len(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Boxes sorted row-major.
    pub fn boxes(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |i| (i, j as u32 + 1)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Rows holding at least one box.
    pub fn rows(&self) -> RowSet {
        self.columns
            .iter()
            .fold(RowSet::EMPTY, |acc, &c| acc.union(c))
    }

    pub fn is_subset(&self, other: &Diagram) -> bool {
        self.n == other.n
            && self
                .columns
                .iter()
                .zip(&other.columns)
                .all(|(a, b)| a.is_subset(*b))
    }

    pub fn union(&self, other: &Diagram) -> Diagram {
        Diagram {
            n: self.n,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }

    pub fn difference(&self, other: &Diagram) -> Diagram {
        Diagram {
            n: self.n,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.difference(*b))
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Diagram) -> bool {
        self.columns
            .iter()
            .zip(&other.columns)
            .all(|(a, b)| a.intersection(*b).is_empty())
    }

    /// Whether `self <= other` in the dominance order.
    pub fn is_dominated_by(&self, other: &Diagram) -> bool {
        dominates(self, other)
    }

    /// Boxes of `self` lying in row `k` or column `l`.
    pub fn row_column_boxes(&self, k: u32, l: u32) -> Diagram {
        self.difference(&restrict_remove(self, k, l))
    }

    /// Text picture: `#` for a box, `.` otherwise.
    pub fn picture(&self) -> String {
        let mut s = String::new();
        for i in 1..=self.n as u32 {
            for j in 1..=self.n as u32 {
                s.push(if self.contains(i, j) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson::from(self)).expect("diagram serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: DiagramJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            what: "diagram",
            input: value.to_string(),
            reason: e.to_string(),
        })?;
        Diagram::from_boxes(raw.n, raw.boxes.into_iter().map(|[i, j]| (i, j)))
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    boxes: Vec<[u32; 2]>,
}

impl From<&Diagram> for DiagramJson {
    fn from(d: &Diagram) -> Self {
        DiagramJson {
            n: d.n,
            boxes: d.boxes().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramJson::from(self).serialize(s)
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram(n={}, {})", self.n, self)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let boxes: Vec<String> = self
            .boxes()
            .into_iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        write!(f, "{{{}}}", boxes.join(", "))
    }
}

/// `D(w) = {(i, j) : i < w^{-1}(j) and j < w(i)}`.
pub fn rothe(w: &Permutation) -> Diagram {
    let inv = w.inverse();
    let n = w.len();
    let mut d = Diagram::empty(n);
    for i in 1..=n {
        for j in 1..w.at(i) {
            if i < inv.at(j as usize) as usize {
                d.insert(i as u32, j);
            }
        }
    }
    d
}

pub fn has_northwest_property(d: &Diagram) -> bool {
    let boxes = d.boxes();
    boxes.iter().all(|&(r, c_prime)| {
        boxes
            .iter()
            .all(|&(r_prime, c)| !(r < r_prime && c < c_prime) || d.contains(r, c))
    })
}

/// `C <= D`: columnwise dominance on grids of the same size.
pub fn dominates(c: &Diagram, d: &Diagram) -> bool {
    c.n == d.n
        && c.columns
            .iter()
            .zip(&d.columns)
            .all(|(a, b)| column_dominates(*a, *b))
}

/// Streams every `C <= D` exactly once, odometer-style across columns.
pub struct Dominated {
    n: usize,
    choices: Vec<Vec<RowSet>>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for Dominated {
    type Item = Diagram;

    fn next(&mut self) -> Option<Diagram> {
        if self.done {
            return None;
        }
        let columns = self
            .counter
            .iter()
            .zip(&self.choices)
            .map(|(&i, opts)| opts[i])
            .collect();
        // advance the last column fastest
        self.done = true;
        for j in (0..self.n).rev() {
            self.counter[j] += 1;
            if self.counter[j] < self.choices[j].len() {
                self.done = false;
                break;
            }
            self.counter[j] = 0;
        }
        Some(Diagram { n: self.n, columns })
    }
}

pub fn enumerate_dominated(d: &Diagram) -> Dominated {
    Dominated {
        n: d.n,
        choices: d
            .columns
            .iter()
            .map(|&c| dominated_column_sets(c))
            .collect(),
        counter: vec![0; d.n],
        done: false,
    }
}

pub fn count_dominated(d: &Diagram) -> BigUint {
    d.columns
        .iter()
        .map(|&c| BigUint::from(count_dominated_column(c)))
        .product()
}

/// Keeps boxes `(i, j)` with `i` in `rows` and `j` in `cols`.
pub fn restrict_keep(d: &Diagram, rows: RowSet, cols: RowSet) -> Diagram {
    Diagram {
        n: d.n,
        columns: d
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if cols.contains(j as u32 + 1) {
                    c.intersection(rows)
                } else {
                    RowSet::EMPTY
                }
            })
            .collect(),
    }
}

/// Drops every box in row `k` or column `l`.
pub fn restrict_remove(d: &Diagram, k: u32, l: u32) -> Diagram {
    let full = RowSet::full(d.n);
    restrict_keep(d, full.without(k), full.without(l))
}

/// Keeps the boxes of `c` in the rows and columns corresponding to `v <= w`.
pub fn hat_v(c: &Diagram, w: &Permutation, v: &Word) -> Result<Diagram> {
    if crate::perm::position_mask(v, w).is_none() {
        return Err(not_subword(v, w));
    }
    let rows: RowSet = substitution_indices(w, v)?.into_iter().collect();
    let cols: RowSet = v.letters().iter().copied().collect();
    Ok(restrict_keep(c, rows, cols))
}

/// `Chat` together with every box of `D` in row `k` or column `l`.
pub fn augment(chat: &Diagram, d: &Diagram, k: u32, l: u32) -> Result<Diagram> {
    if chat.n != d.n {
        return Err(Error::SizeMismatch("augment needs equal grid sizes".into()));
    }
    if !chat.row_column_boxes(k, l).is_empty() {
        return Err(Error::Overlap { row: k, column: l });
    }
    Ok(chat.union(&d.row_column_boxes(k, l)))
}

/// `x^D`: one factor `x_i` per box in row `i`.
pub fn row_monomial(d: &Diagram) -> Monomial {
    let mut exps = vec![0u32; d.n];
    for c in &d.columns {
        for i in c.iter() {
            exps[i as usize - 1] += 1;
        }
    }
    Monomial::from_exponents(&exps)
}
