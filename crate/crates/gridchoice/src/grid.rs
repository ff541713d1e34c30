//! The integer triangular grid of vote tallies, displacement cones, and
//! total grid functions.
//!
//! A society of `n` voters, each favoring `a`, favoring `b`, or indifferent,
//! is tallied into a point `(k, m)` with `k + m <= n`. The set of all such
//! points is the triangular grid `G`. A rule that treats voters anonymously
//! is a function `G -> {a, b}`; this module provides that function type, the
//! two displacement cones, comprehensive-set arithmetic over them, and the
//! dual-monotonicity test.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// One of the two alternatives a society can implement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alternative {
    A,
    B,
}

impl Alternative {
    pub fn as_char(self) -> char {
        match self {
            Alternative::A => 'a',
            Alternative::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Alternative::A),
            'b' => Ok(Alternative::B),
            other => Err(Error::Parse(format!(
                "invalid alternative {other:?}, expected 'a' or 'b'"
            ))),
        }
    }

    /// The other alternative.
    pub fn flipped(self) -> Self {
        match self {
            Alternative::A => Alternative::B,
            Alternative::B => Alternative::A,
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A tally pair: `k` voters favor `a`, `m` voters favor `b`. The remaining
/// `n - k - m` voters of a grid of size `n` are indifferent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub k: usize,
    pub m: usize,
}

impl GridPoint {
    pub const fn new(k: usize, m: usize) -> Self {
        GridPoint { k, m }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.m)
    }
}

/// The triangular grid `G` of all tallies for a society of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub const fn new(n: usize) -> Self {
        Grid { n }
    }

    pub const fn n(self) -> usize {
        self.n
    }

    /// Number of grid points: `(n+1)(n+2)/2`.
    pub const fn point_count(self) -> usize {
        (self.n + 1) * (self.n + 2) / 2
    }

    pub const fn contains(self, pt: GridPoint) -> bool {
        pt.k + pt.m <= self.n
    }

    /// How many voters are indifferent at `pt`.
    pub fn indifferent_count(self, pt: GridPoint) -> Result<usize> {
        self.check(pt)?;
        Ok(self.n - pt.k - pt.m)
    }

    fn check(self, pt: GridPoint) -> Result<()> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(Error::PointOutsideGrid {
                k: pt.k,
                m: pt.m,
                n: self.n,
            })
        }
    }

    /// Canonical position of `pt` in iteration order, or `None` outside `G`.
    pub fn index_of(self, pt: GridPoint) -> Option<usize> {
        if !self.contains(pt) {
            return None;
        }
        // Points strictly below row m: sum over j < m of (n + 1 - j).
        let row_start = pt.m * (self.n + 1) - pt.m * pt.m.saturating_sub(1) / 2;
        Some(row_start + pt.k)
    }

    /// All grid points in canonical row-major order: `m` ascending, then `k`
    /// ascending within each row. This order is the one serialized tables use.
    pub fn points(self) -> impl Iterator<Item = GridPoint> {
        let n = self.n;
        (0..=n).flat_map(move |m| (0..=(n - m)).map(move |k| GridPoint::new(k, m)))
    }
}

/// Displacement cones in the tally plane. `Cone::A` collects displacements
/// that add support for `a` and remove support for `b` (alpha >= 0, beta <= 0);
/// `Cone::B` is the opposite quadrant (alpha <= 0, beta >= 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    A,
    B,
}

impl Cone {
    /// Whether `to - from` lies in this cone.
    pub fn admits(self, from: GridPoint, to: GridPoint) -> bool {
        match self {
            Cone::A => to.k >= from.k && to.m <= from.m,
            Cone::B => to.k <= from.k && to.m >= from.m,
        }
    }
}

/// The comprehension `h + cone` intersected with the grid: every point of `G`
/// reachable from a point of `h` by a displacement in the cone. The result is
/// always a superset of `h`.
pub fn cone_shift(h: &BTreeSet<GridPoint>, cone: Cone, grid: Grid) -> Result<BTreeSet<GridPoint>> {
    for &pt in h {
        if !grid.contains(pt) {
            return Err(Error::PointOutsideGrid {
                k: pt.k,
                m: pt.m,
                n: grid.n(),
            });
        }
    }
    Ok(grid
        .points()
        .filter(|&p| h.iter().any(|&v| cone.admits(v, p)))
        .collect())
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    n: usize,
    cells: String,
}

/// A total assignment of an alternative to every point of a grid.
///
/// Stored densely, one cell per grid point in canonical iteration order, so
/// two functions are equal exactly when their serialized tables are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridFunction {
    n: usize,
    cells: Vec<Alternative>,
}

impl GridFunction {
    /// Build from a dense cell vector in canonical order.
    pub fn from_cells(n: usize, cells: Vec<Alternative>) -> Result<Self> {
        let want = Grid::new(n).point_count();
        if cells.len() != want {
            return Err(Error::Parse(format!(
                "table for n={n} needs {want} cells, got {}",
                cells.len()
            )));
        }
        Ok(GridFunction { n, cells })
    }

    /// Build by evaluating `f` at every grid point.
    pub fn from_fn(n: usize, mut f: impl FnMut(GridPoint) -> Alternative) -> Self {
        let cells = Grid::new(n).points().map(&mut f).collect();
        GridFunction { n, cells }
    }

    pub fn constant(n: usize, alt: Alternative) -> Self {
        GridFunction {
            n,
            cells: vec![alt; Grid::new(n).point_count()],
        }
    }

    /// A uniformly random table, one independent coin flip per cell.
    pub fn sample(n: usize, rng: &mut SplitMix64) -> Self {
        GridFunction::from_fn(n, |_| {
            if rng.next_below(2) == 0 {
                Alternative::A
            } else {
                Alternative::B
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }

    /// Value at `pt`. Panics if `pt` lies outside the grid.
    pub fn get(&self, pt: GridPoint) -> Alternative {
        let idx = self
            .grid()
            .index_of(pt)
            .unwrap_or_else(|| panic!("point {pt} outside grid of size {}", self.n));
        self.cells[idx]
    }

    pub fn cells(&self) -> &[Alternative] {
        &self.cells
    }

    /// The inverse image `{f = alt}`.
    pub fn region(&self, alt: Alternative) -> BTreeSet<GridPoint> {
        self.grid()
            .points()
            .filter(|&pt| self.get(pt) == alt)
            .collect()
    }

    /// Reflect across the diagonal, `(k,m) -> (m,k)`, swapping the two
    /// alternatives. Dual monotonicity is preserved by this symmetry.
    pub fn mirrored(&self) -> GridFunction {
        GridFunction::from_fn(self.n, |pt| self.get(GridPoint::new(pt.m, pt.k)).flipped())
    }

    /// Whether `f(k,m) = a` forces `f(k+1,m) = f(k,m-1) = a` wherever the
    /// displaced points stay inside the grid.
    pub fn is_dually_monotone(&self) -> bool {
        let grid = self.grid();
        grid.points().all(|pt| {
            if self.get(pt) != Alternative::A {
                return true;
            }
            let right = GridPoint::new(pt.k + 1, pt.m);
            if grid.contains(right) && self.get(right) != Alternative::A {
                return false;
            }
            if pt.m > 0 && self.get(GridPoint::new(pt.k, pt.m - 1)) != Alternative::A {
                return false;
            }
            true
        })
    }

    /// Evaluate the four equivalent characterizations of dual monotonicity
    /// independently: the defining implication on `a`, the mirrored
    /// implication on `b`, and comprehensiveness of each inverse image under
    /// its cone. All four always agree; returning them separately lets tests
    /// confirm that.
    pub fn tfae_check(&self) -> [bool; 4] {
        let grid = self.grid();

        let cond1 = self.is_dually_monotone();

        let cond2 = grid.points().all(|pt| {
            if self.get(pt) != Alternative::B {
                return true;
            }
            if pt.k > 0 && self.get(GridPoint::new(pt.k - 1, pt.m)) != Alternative::B {
                return false;
            }
            let up = GridPoint::new(pt.k, pt.m + 1);
            if grid.contains(up) && self.get(up) != Alternative::B {
                return false;
            }
            true
        });

        let region_a = self.region(Alternative::A);
        let cond3 = cone_shift(&region_a, Cone::A, grid)
            .expect("region points are grid points")
            .is_subset(&region_a);

        let region_b = self.region(Alternative::B);
        let cond4 = cone_shift(&region_b, Cone::B, grid)
            .expect("region points are grid points")
            .is_subset(&region_b);

        [cond1, cond2, cond3, cond4]
    }

    /// Cells as a string over the alphabet `ab` in canonical order.
    pub fn cells_string(&self) -> String {
        self.cells.iter().map(|a| a.as_char()).collect()
    }

    pub fn from_cells_str(n: usize, s: &str) -> Result<Self> {
        let cells = s
            .chars()
            .map(Alternative::from_char)
            .collect::<Result<Vec<_>>>()?;
        GridFunction::from_cells(n, cells)
    }

    /// Serialize to the table JSON form `{"n": .., "cells": "ab.."}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&TableWire {
            n: self.n,
            cells: self.cells_string(),
        })
        .expect("table serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: TableWire =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("table JSON: {e}")))?;
        GridFunction::from_cells_str(wire.n, &wire.cells)
    }
}

/// All `2^|G|` grid functions of size `n`, in cell-lexicographic order.
/// Only sensible for small grids; callers enforce their own caps.
pub fn enumerate_grid_functions(grid: Grid) -> impl Iterator<Item = GridFunction> {
    let bits = grid.point_count();
    assert!(bits < 64, "grid too large to enumerate all functions");
    let n = grid.n();
    (0u64..(1u64 << bits)).map(move |mask| {
        let mut pos = 0;
        GridFunction::from_fn(n, |_| {
            let alt = if mask >> pos & 1 == 0 {
                Alternative::A
            } else {
                Alternative::B
            };
            pos += 1;
            alt
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[(usize, usize)]) -> BTreeSet<GridPoint> {
        raw.iter().map(|&(k, m)| GridPoint::new(k, m)).collect()
    }

    #[test]
    fn single_point_grid() {
        let g = Grid::new(0);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![GridPoint::new(0, 0)]);
        assert_eq!(g.point_count(), 1);
    }

    #[test]
    fn grid_points_order_n1() {
        let got: Vec<_> = Grid::new(1).points().collect();
        assert_eq!(
            got,
            vec![
                GridPoint::new(0, 0),
                GridPoint::new(1, 0),
                GridPoint::new(0, 1)
            ]
        );
    }

    #[test]
    fn grid_point_count_n20() {
        assert_eq!(Grid::new(20).points().count(), 231);
        assert_eq!(Grid::new(20).point_count(), 231);
    }

    #[test]
    fn index_matches_iteration_order() {
        for n in 0..=12 {
            let g = Grid::new(n);
            for (i, pt) in g.points().enumerate() {
                assert_eq!(g.index_of(pt), Some(i));
            }
            assert_eq!(g.index_of(GridPoint::new(n + 1, 0)), None);
        }
    }

    #[test]
    fn indifferent_count_is_remainder() {
        let g = Grid::new(5);
        assert_eq!(g.indifferent_count(GridPoint::new(2, 1)).unwrap(), 2);
        assert!(g.indifferent_count(GridPoint::new(4, 4)).is_err());
    }

    // Independent oracle for cone_shift: enumerate all displacements by the
    // cone definition and collect the grid points hit.
    fn cone_shift_by_displacements(
        h: &BTreeSet<GridPoint>,
        cone: Cone,
        grid: Grid,
    ) -> BTreeSet<GridPoint> {
        let n = grid.n() as isize;
        let mut out = BTreeSet::new();
        for &v in h {
            for alpha in -n..=n {
                for beta in -n..=n {
                    let in_cone = match cone {
                        Cone::A => alpha >= 0 && beta <= 0,
                        Cone::B => alpha <= 0 && beta >= 0,
                    };
                    if !in_cone {
                        continue;
                    }
                    let k = v.k as isize + alpha;
                    let m = v.m as isize + beta;
                    if k >= 0 && m >= 0 && k + m <= n {
                        out.insert(GridPoint::new(k as usize, m as usize));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cone_shift_matches_displacement_oracle() {
        let g = Grid::new(5);
        let h = pts(&[(2, 2)]);
        let got = cone_shift(&h, Cone::A, g).unwrap();
        let expected = cone_shift_by_displacements(&h, Cone::A, g);
        assert_eq!(got, expected);
        // All (k,m) with k >= 2, m <= 2, k+m <= 5.
        assert_eq!(
            got,
            pts(&[
                (2, 0),
                (3, 0),
                (4, 0),
                (5, 0),
                (2, 1),
                (3, 1),
                (4, 1),
                (2, 2),
                (3, 2)
            ])
        );
    }

    #[test]
    fn cone_shift_vertex_dominates() {
        for n in [0, 1, 4, 9] {
            let g = Grid::new(n);
            let whole = cone_shift(&pts(&[(0, n)]), Cone::A, g).unwrap();
            assert_eq!(whole, g.points().collect());
            let whole_b = cone_shift(&pts(&[(n, 0)]), Cone::B, g).unwrap();
            assert_eq!(whole_b, g.points().collect());
        }
    }

    #[test]
    fn cone_shift_empty_and_invalid() {
        let g = Grid::new(3);
        assert!(cone_shift(&BTreeSet::new(), Cone::A, g).unwrap().is_empty());
        assert!(cone_shift(&pts(&[(3, 1)]), Cone::A, g).is_err());
    }

    #[test]
    fn cone_shift_is_idempotent() {
        let g = Grid::new(6);
        for cone in [Cone::A, Cone::B] {
            let h = pts(&[(1, 3), (4, 2), (0, 6)]);
            let once = cone_shift(&h, cone, g).unwrap();
            let twice = cone_shift(&once, cone, g).unwrap();
            assert!(once.is_superset(&h));
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn constants_are_dually_monotone() {
        for n in 0..=6 {
            assert!(GridFunction::constant(n, Alternative::A).is_dually_monotone());
            assert!(GridFunction::constant(n, Alternative::B).is_dually_monotone());
        }
    }

    /// The size-1 counterexample: a at (0,0), b at (1,0), a at (0,1).
    fn n1_counterexample() -> GridFunction {
        GridFunction::from_cells(1, vec![Alternative::A, Alternative::B, Alternative::A]).unwrap()
    }

    #[test]
    fn counterexample_violates_dual_monotonicity() {
        assert!(!n1_counterexample().is_dually_monotone());
    }

    #[test]
    fn tfae_conditions_on_known_functions() {
        assert_eq!(
            GridFunction::constant(3, Alternative::B).tfae_check(),
            [true; 4]
        );
        assert_eq!(n1_counterexample().tfae_check(), [false; 4]);
    }

    #[test]
    fn dually_monotone_count_small_n() {
        // Exhaustive sweep over every table; the count is 2^(n+1).
        for n in 0..=3 {
            let count = enumerate_grid_functions(Grid::new(n))
                .filter(GridFunction::is_dually_monotone)
                .count();
            assert_eq!(count, 1 << (n + 1), "n={n}");
        }
    }

    #[test]
    fn corner_values_force_constants() {
        for n in 1..=4 {
            for f in enumerate_grid_functions(Grid::new(n)).filter(GridFunction::is_dually_monotone)
            {
                if f.get(GridPoint::new(0, n)) == Alternative::A {
                    assert_eq!(f, GridFunction::constant(n, Alternative::A));
                }
                if f.get(GridPoint::new(n, 0)) == Alternative::B {
                    assert_eq!(f, GridFunction::constant(n, Alternative::B));
                }
            }
        }
    }

    #[test]
    fn tfae_agree_exhaustively_small_n() {
        for n in 0..=4 {
            for f in enumerate_grid_functions(Grid::new(n)) {
                let [c1, c2, c3, c4] = f.tfae_check();
                assert!(c1 == c2 && c2 == c3 && c3 == c4);
            }
        }
    }

    #[test]
    fn mirror_preserves_dual_monotonicity() {
        for n in 0..=4 {
            for f in enumerate_grid_functions(Grid::new(n)) {
                assert_eq!(f.is_dually_monotone(), f.mirrored().is_dually_monotone());
            }
        }
    }

    #[test]
    fn table_json_round_trip() {
        let f = n1_counterexample();
        assert_eq!(f.to_json(), r#"{"n":1,"cells":"aba"}"#);
        assert_eq!(GridFunction::from_json(&f.to_json()).unwrap(), f);
        assert!(GridFunction::from_json(r#"{"n":1,"cells":"ab"}"#).is_err());
        assert!(GridFunction::from_json(r#"{"n":1,"cells":"abc"}"#).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_function(max_n: usize) -> impl Strategy<Value = GridFunction> {
            (0..=max_n).prop_flat_map(|n| {
                let len = Grid::new(n).point_count();
                proptest::collection::vec(
                    prop_oneof![Just(Alternative::A), Just(Alternative::B)],
                    len,
                )
                .prop_map(move |cells| GridFunction::from_cells(n, cells).unwrap())
            })
        }

        proptest! {
            #[test]
            fn tfae_agree_on_random_tables(f in arb_function(12)) {
                let [c1, c2, c3, c4] = f.tfae_check();
                prop_assert!(c1 == c2 && c2 == c3 && c3 == c4);
            }

            #[test]
            fn mirror_is_involutive(f in arb_function(8)) {
                prop_assert_eq!(f.mirrored().mirrored(), f);
            }

            #[test]
            fn cells_string_round_trips(f in arb_function(10)) {
                let s = f.cells_string();
                prop_assert_eq!(GridFunction::from_cells_str(f.n(), &s).unwrap(), f);
            }
        }
    }
}
