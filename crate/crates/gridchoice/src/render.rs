//! Text and SVG diagrams of grid functions.
//!
//! Both renderers draw the grid with `m` growing upward and `k` growing to
//! the right, bounded by the diagonal `k + m = n`. The SVG view follows the
//! segment structure: `a`-cells appear as magenta horizontal runs, `b`-cells
//! as blue vertical runs.

use crate::error::{Error, Result};
use crate::grid::{Alternative, Grid, GridFunction, GridPoint};

/// Widest grid the plain-text renderer accepts by default.
pub const DEFAULT_ASCII_CAP: usize = 60;

/// Render as `n + 1` text rows, top row `m = n`, one `a`/`b` glyph per grid
/// cell. Rows shrink toward the top; positions outside the grid are simply
/// absent. Byte-exact for a given function.
pub fn render_ascii(f: &GridFunction) -> Result<String> {
    render_ascii_capped(f, DEFAULT_ASCII_CAP)
}

pub fn render_ascii_capped(f: &GridFunction, cap: usize) -> Result<String> {
    let n = f.n();
    if n > cap {
        return Err(Error::ResourceCap(format!(
            "grid size {n} exceeds the text-render cap of {cap}"
        )));
    }
    let mut out = String::with_capacity(Grid::new(n).point_count() + n + 1);
    for m in (0..=n).rev() {
        for k in 0..=(n - m) {
            out.push(f.get(GridPoint::new(k, m)).as_char());
        }
        out.push('\n');
    }
    Ok(out)
}

/// Rebuild a grid function from [`render_ascii`] output.
pub fn parse_ascii(text: &str) -> Result<GridFunction> {
    let rows: Vec<&str> = text.lines().collect();
    if rows.is_empty() {
        return Err(Error::Parse("empty text diagram".into()));
    }
    let n = rows.len() - 1;
    let mut cells = vec![Alternative::A; Grid::new(n).point_count()];
    let grid = Grid::new(n);
    for (i, row) in rows.iter().enumerate() {
        let m = n - i;
        let want = n - m + 1;
        if row.chars().count() != want {
            return Err(Error::Parse(format!(
                "row for m={m} has {} glyphs, expected {want}",
                row.chars().count()
            )));
        }
        for (k, c) in row.chars().enumerate() {
            let idx = grid
                .index_of(GridPoint::new(k, m))
                .expect("row bounds keep the point inside the grid");
            cells[idx] = Alternative::from_char(c)?;
        }
    }
    GridFunction::from_cells(n, cells)
}

/// A maximal monochrome segment of `len` cells starting at `start`:
/// horizontal for `a`-runs, vertical for `b`-runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: GridPoint,
    pub len: usize,
}

/// Maximal horizontal runs of `a`-cells, row by row from the bottom.
pub fn horizontal_a_runs(f: &GridFunction) -> Vec<Run> {
    let n = f.n();
    let mut runs = Vec::new();
    for m in 0..=n {
        let mut k = 0;
        while k <= n - m {
            if f.get(GridPoint::new(k, m)) == Alternative::A {
                let start = k;
                while k <= n - m && f.get(GridPoint::new(k, m)) == Alternative::A {
                    k += 1;
                }
                runs.push(Run {
                    start: GridPoint::new(start, m),
                    len: k - start,
                });
            } else {
                k += 1;
            }
        }
    }
    runs
}

/// Maximal vertical runs of `b`-cells, column by column from the left.
pub fn vertical_b_runs(f: &GridFunction) -> Vec<Run> {
    let n = f.n();
    let mut runs = Vec::new();
    for k in 0..=n {
        let mut m = 0;
        while m <= n - k {
            if f.get(GridPoint::new(k, m)) == Alternative::B {
                let start = m;
                while m <= n - k && f.get(GridPoint::new(k, m)) == Alternative::B {
                    m += 1;
                }
                runs.push(Run {
                    start: GridPoint::new(k, start),
                    len: m - start,
                });
            } else {
                m += 1;
            }
        }
    }
    runs
}

/// Visual knobs for the SVG renderer.
#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Distance between neighboring grid points, in pixels.
    pub cell_px: usize,
    pub color_a: String,
    pub color_b: String,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            cell_px: 20,
            color_a: "magenta".into(),
            color_b: "blue".into(),
        }
    }
}

/// Render as an SVG 1.1 document: light gridlines, the diagonal boundary,
/// then one element per maximal run (a `line` when the run spans several
/// cells, a `circle` for an isolated cell). Output is deterministic for
/// fixed inputs.
pub fn render_svg(f: &GridFunction, opts: &SvgOptions) -> String {
    let n = f.n();
    let cell = opts.cell_px;
    let margin = cell;
    let side = n * cell + 2 * margin;
    // Grid origin is bottom-left; SVG y grows downward.
    let x = |k: usize| margin + k * cell;
    let y = |m: usize| margin + (n - m) * cell;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{side}\" height=\"{side}\" viewBox=\"0 0 {side} {side}\">\n"
    ));
    svg.push_str("  <g stroke=\"lightgray\" stroke-width=\"1\">\n");
    for i in 0..=n {
        svg.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            x(i),
            y(n),
            x(i),
            y(0)
        ));
        svg.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            x(0),
            y(i),
            x(n),
            y(i)
        ));
    }
    svg.push_str("  </g>\n");
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        x(0),
        y(n),
        x(n),
        y(0)
    ));

    let dot_radius = (cell / 6).max(2);
    for run in horizontal_a_runs(f) {
        let (k, m) = (run.start.k, run.start.m);
        if run.len == 1 {
            svg.push_str(&format!(
                "  <circle class=\"run-a\" cx=\"{}\" cy=\"{}\" r=\"{dot_radius}\" fill=\"{}\"/>\n",
                x(k),
                y(m),
                opts.color_a
            ));
        } else {
            svg.push_str(&format!(
                "  <line class=\"run-a\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                 stroke=\"{}\" stroke-width=\"3\"/>\n",
                x(k),
                y(m),
                x(k + run.len - 1),
                y(m),
                opts.color_a
            ));
        }
    }
    for run in vertical_b_runs(f) {
        let (k, m) = (run.start.k, run.start.m);
        if run.len == 1 {
            svg.push_str(&format!(
                "  <circle class=\"run-b\" cx=\"{}\" cy=\"{}\" r=\"{dot_radius}\" fill=\"{}\"/>\n",
                x(k),
                y(m),
                opts.color_b
            ));
        } else {
            svg.push_str(&format!(
                "  <line class=\"run-b\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                 stroke=\"{}\" stroke-width=\"3\"/>\n",
                x(k),
                y(m),
                x(k),
                y(m + run.len - 1),
                opts.color_b
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ablist::AbList;

    fn figure_function(terms: &[usize]) -> GridFunction {
        AbList::new(20, terms.to_vec()).unwrap().to_grid_function()
    }

    #[test]
    fn ascii_constant_a_size_one() {
        let f = GridFunction::constant(1, Alternative::A);
        assert_eq!(render_ascii(&f).unwrap(), "a\naa\n");
    }

    #[test]
    fn ascii_cap_is_enforced() {
        let f = GridFunction::constant(61, Alternative::A);
        assert!(matches!(render_ascii(&f), Err(Error::ResourceCap(_))));
        assert!(render_ascii_capped(&f, 61).is_ok());
    }

    #[test]
    fn ascii_first_figure_layout() {
        let text = render_ascii(&figure_function(&[5, 3, 2, 6, 1, 4])).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 21);
        // Bottom five rows are all a up to the diagonal.
        for (m, row) in (0..=4).map(|m| (m, rows[20 - m])) {
            assert_eq!(row, "a".repeat(21 - m));
        }
        // Column 0 is b from m = 5 upward.
        for m in 5..=20 {
            assert!(rows[20 - m].starts_with('b'), "m={m}");
        }
    }

    #[test]
    fn ascii_second_figure_layout() {
        let text = render_ascii(&figure_function(&[0, 3, 2, 4, 5, 1, 6])).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        // Columns 0..=2 are b in every row that reaches them.
        for m in 0..=20 {
            let row = rows[20 - m];
            for (k, c) in row.chars().enumerate().take(3) {
                assert_eq!(c, 'b', "k={k} m={m}");
            }
        }
    }

    #[test]
    fn ascii_round_trip() {
        for f in [
            GridFunction::constant(0, Alternative::B),
            figure_function(&[5, 3, 2, 6, 1, 4]),
            figure_function(&[0, 3, 2, 4, 5, 1, 6]),
        ] {
            let text = render_ascii(&f).unwrap();
            assert_eq!(parse_ascii(&text).unwrap(), f);
        }
    }

    #[test]
    fn runs_partition_the_grid() {
        let f = figure_function(&[5, 3, 2, 6, 1, 4]);
        let mut covered = std::collections::BTreeSet::new();
        for run in horizontal_a_runs(&f) {
            for i in 0..run.len {
                assert!(covered.insert(GridPoint::new(run.start.k + i, run.start.m)));
            }
        }
        for run in vertical_b_runs(&f) {
            for i in 0..run.len {
                assert!(covered.insert(GridPoint::new(run.start.k, run.start.m + i)));
            }
        }
        assert_eq!(covered, f.grid().points().collect());
    }

    #[test]
    fn first_figure_run_lengths() {
        // The first horizontal group has five rows shrinking from the full
        // base width.
        let f = figure_function(&[5, 3, 2, 6, 1, 4]);
        let runs = horizontal_a_runs(&f);
        let lengths: Vec<usize> = runs.iter().take(5).map(|r| r.len).collect();
        assert_eq!(lengths, vec![21, 20, 19, 18, 17]);
    }

    #[test]
    fn a_run_count_matches_odd_terms() {
        // Dual monotonicity makes each row's a-cells one suffix run, so the
        // run count equals the total number of horizontal segment rows.
        for n in 0..=8 {
            for q in crate::ablist::enumerate_ablists(Grid::new(n)) {
                let f = q.to_grid_function();
                let odd_sum: usize = q.terms().iter().step_by(2).sum();
                assert_eq!(horizontal_a_runs(&f).len(), odd_sum, "list {q}");
            }
        }
    }

    #[test]
    fn svg_constant_b_has_three_vertical_runs() {
        let f = GridFunction::constant(2, Alternative::B);
        let svg = render_svg(&f, &SvgOptions::default());
        assert_eq!(svg.matches("class=\"run-b\"").count(), 3);
        assert_eq!(svg.matches("class=\"run-a\"").count(), 0);
    }

    #[test]
    fn svg_is_deterministic() {
        let f = figure_function(&[5, 3, 2, 6, 1, 4]);
        let opts = SvgOptions::default();
        assert_eq!(render_svg(&f, &opts), render_svg(&f, &opts));
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
            fn ascii_round_trips(f in arb_function(12)) {
                let text = render_ascii(&f).unwrap();
                prop_assert_eq!(parse_ascii(&text).unwrap(), f);
            }

            #[test]
            fn run_decomposition_is_a_partition(f in arb_function(10)) {
                let mut covered = std::collections::BTreeSet::new();
                for run in horizontal_a_runs(&f) {
                    for i in 0..run.len {
                        prop_assert!(covered.insert(GridPoint::new(run.start.k + i, run.start.m)));
                    }
                }
                for run in vertical_b_runs(&f) {
                    for i in 0..run.len {
                        prop_assert!(covered.insert(GridPoint::new(run.start.k, run.start.m + i)));
                    }
                }
                prop_assert_eq!(covered, f.grid().points().collect());
            }
        }
    }
}
