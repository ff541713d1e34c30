//! Segment-group lists: the canonical names of dually monotone grid
//! functions.
//!
//! A list `q = (q_1, ..., q_s)` fills the grid with alternating groups of
//! maximal segments: `q_1` horizontal rows mapped to `a`, then `q_2` vertical
//! columns mapped to `b`, then `q_3` further rows of `a`, and so on until the
//! grid is exhausted. `q_1` may be zero (the rule starts with `b`-columns);
//! every later group is nonempty; the sizes sum to `n + 1`. Each dually
//! monotone function arises from exactly one list, so lists both enumerate
//! and name the whole family.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Alternative, Cone, Grid, GridFunction, GridPoint};

/// A valid segment-group list for a society of size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbList {
    n: usize,
    terms: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AbListWire {
    n: usize,
    q: Vec<usize>,
}

impl AbList {
    /// Validate and wrap a term sequence: `q_1 >= 0`, later terms `>= 1`,
    /// total `n + 1`.
    pub fn new(n: usize, terms: Vec<usize>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidAbList("list must not be empty".into()));
        }
        if terms[1..].contains(&0) {
            return Err(Error::InvalidAbList(
                "every term after the first must be at least 1".into(),
            ));
        }
        let sum: usize = terms.iter().sum();
        if sum != n + 1 {
            return Err(Error::InvalidAbList(format!(
                "terms must sum to n+1 = {}, got {sum}",
                n + 1
            )));
        }
        Ok(AbList { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }

    /// The cone vertices whose comprehensions carve the grid into the
    /// `a`-region and `b`-region.
    ///
    /// Writing `O_j` for the sum of the first `j` odd-indexed terms and `E_j`
    /// for the first `j` even-indexed ones, the `a`-anchors are the points
    /// `(E_j, O_{j+1} - 1)` and the `b`-anchors `(E_j - 1, O_j)`. When
    /// `q_1 = 0` the first `a`-group is empty and contributes no anchor.
    pub fn anchors(&self) -> AnchorSets {
        let mut qa = BTreeSet::new();
        let mut qb = BTreeSet::new();
        let mut odd_sum = 0; // q_1 + q_3 + ...
        let mut even_sum = 0; // q_2 + q_4 + ...
        for (i, &term) in self.terms.iter().enumerate() {
            if i % 2 == 0 {
                odd_sum += term;
                if term > 0 {
                    qa.insert(GridPoint::new(even_sum, odd_sum - 1));
                }
            } else {
                even_sum += term;
                qb.insert(GridPoint::new(even_sum - 1, odd_sum));
            }
        }
        let anchors = AnchorSets { qa, qb };
        debug_assert!(anchors
            .qa
            .iter()
            .chain(anchors.qb.iter())
            .all(|&pt| self.grid().contains(pt)));
        anchors
    }

    /// The grid function named by this list: `a` on the comprehension of the
    /// `a`-anchors, `b` on the comprehension of the `b`-anchors.
    ///
    /// The two comprehensions partition the grid; a cell claimed by both or
    /// neither would contradict the construction, so that aborts.
    pub fn to_grid_function(&self) -> GridFunction {
        let AnchorSets { qa, qb } = self.anchors();
        GridFunction::from_fn(self.n, |pt| {
            let in_a = qa.iter().any(|&v| Cone::A.admits(v, pt));
            let in_b = qb.iter().any(|&v| Cone::B.admits(v, pt));
            match (in_a, in_b) {
                (true, false) => Alternative::A,
                (false, true) => Alternative::B,
                (true, true) => panic!(
                    "anchor comprehensions overlap at {pt} for list {:?}",
                    self.terms
                ),
                (false, false) => {
                    panic!("anchor comprehensions miss {pt} for list {:?}", self.terms)
                }
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AbListWire {
            n: self.n,
            q: self.terms.clone(),
        })
        .expect("list serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: AbListWire =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("list JSON: {e}")))?;
        AbList::new(wire.n, wire.q)
    }
}

impl fmt::Display for AbList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|q| q.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The two anchor sets of a list: vertices of the `a`-cones and `b`-cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorSets {
    pub qa: BTreeSet<GridPoint>,
    pub qb: BTreeSet<GridPoint>,
}

/// Read the segment-group sizes back off a dually monotone function by the
/// greedy scan: count the `a`-cells in column 0, then the `b`-cells along the
/// next row, then the `a`-cells up the next column, alternating until the
/// counts reach `n + 1`. This inverts [`AbList::to_grid_function`] exactly.
pub fn decompose(f: &GridFunction) -> Result<AbList> {
    if !f.is_dually_monotone() {
        return Err(Error::NotDuallyMonotone);
    }
    let n = f.n();
    let mut terms = Vec::new();
    let mut col = 0; // sum of vertical-group sizes so far
    let mut row = 0; // sum of horizontal-group sizes so far
    let mut total = 0;
    loop {
        let run_a = (row..=(n - col))
            .filter(|&m| f.get(GridPoint::new(col, m)) == Alternative::A)
            .count();
        terms.push(run_a);
        total += run_a;
        if total == n + 1 {
            break;
        }
        row += run_a;
        let run_b = (col..=(n - row))
            .filter(|&k| f.get(GridPoint::new(k, row)) == Alternative::B)
            .count();
        assert!(run_b >= 1, "greedy scan stalled on a dually monotone table");
        terms.push(run_b);
        total += run_b;
        if total == n + 1 {
            break;
        }
        col += run_b;
    }
    AbList::new(n, terms).map_err(|e| Error::Internal(format!("greedy scan produced {e}")))
}

/// All valid lists for a grid of size `n`, lexicographically ascending
/// (with a shorter list preceding its extensions). Exactly `2^(n+1)` lists
/// are produced.
pub fn enumerate_ablists(grid: Grid) -> AbLists {
    let n = grid.n();
    // Smallest list: leading zero, then n+1 ones.
    let mut first = Vec::with_capacity(n + 2);
    first.push(0);
    first.resize(n + 2, 1);
    AbLists {
        n,
        next: Some(first),
    }
}

/// Iterator over all lists of a given size; see [`enumerate_ablists`].
#[derive(Debug, Clone)]
pub struct AbLists {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AbLists {
    type Item = AbList;

    fn next(&mut self) -> Option<AbList> {
        let current = self.next.take()?;
        self.next = lexicographic_successor(self.n, current.clone());
        Some(AbList {
            n: self.n,
            terms: current,
        })
    }
}

/// The next valid list after `terms` in lexicographic order: increment the
/// rightmost position that still leaves a nonnegative remainder, then pad
/// with ones.
fn lexicographic_successor(n: usize, mut terms: Vec<usize>) -> Option<Vec<usize>> {
    let target = n + 1;
    loop {
        let last = terms.pop()?;
        let prefix: usize = terms.iter().sum();
        if prefix + last < target {
            terms.push(last + 1);
            let fill = target - prefix - last - 1;
            terms.extend(std::iter::repeat_n(1, fill));
            return Some(terms);
        }
    }
}
