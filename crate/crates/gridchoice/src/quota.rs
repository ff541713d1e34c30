//! Up-and-down majority-quota sequences and their correspondence with
//! segment-group lists.
//!
//! A rule can be named either by a list `q` of segment-group sizes or by a
//! sequence `k = (k_0, ..., k_r)` of majority quotas that fans out strictly
//! around `k_0`, alternating sides, with terminal `k_r` pinned to `0` or
//! `n + 1`. This module validates the fan-out pattern, converts in both
//! directions (by the explicit difference/partial-sum formulas and,
//! cross-checked, by the triangular matrix `T` and its inverse), and
//! evaluates a quota sequence directly through its half-plane-plus-boxes
//! region decomposition without ever materializing a list. The direct
//! evaluator serves as an independent oracle for the conversion formulas.

use serde::{Deserialize, Serialize};

use crate::ablist::AbList;
use crate::error::{Error, Result};
use crate::grid::{Alternative, Grid, GridPoint};

/// The reflected quota `n + 1 - k`: an order-reversing involution on
/// `[0, n+1]`.
pub fn dual_quota(k: usize, grid: Grid) -> Result<usize> {
    let n = grid.n();
    if k > n + 1 {
        return Err(Error::InvalidQuotaSequence(format!(
            "quota {k} out of range [0, {}]",
            n + 1
        )));
    }
    Ok(n + 1 - k)
}

/// A sequence of majority quotas for a society of size `n`. Construction only
/// checks ranges; [`QuotaSequence::is_up_down`] decides whether the sequence
/// names a rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotaSequence {
    n: usize,
    quotas: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct QuotaWire {
    n: usize,
    k: Vec<usize>,
}

impl QuotaSequence {
    pub fn new(n: usize, quotas: Vec<usize>) -> Result<Self> {
        if quotas.is_empty() {
            return Err(Error::InvalidQuotaSequence(
                "sequence must not be empty".into(),
            ));
        }
        if let Some(&bad) = quotas.iter().find(|&&k| k > n + 1) {
            return Err(Error::InvalidQuotaSequence(format!(
                "quota {bad} out of range [0, {}]",
                n + 1
            )));
        }
        Ok(QuotaSequence { n, quotas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    /// The order `r` (the sequence has `r + 1` entries).
    pub fn order(&self) -> usize {
        self.quotas.len() - 1
    }

    pub fn terminal(&self) -> usize {
        *self.quotas.last().expect("sequence is nonempty")
    }

    /// Whether the sequence satisfies the up-and-down conditions: terminal in
    /// `{0, n+1}`, every earlier quota strictly between, and each entry
    /// strictly outside the interval spanned so far, alternating sides of
    /// `k_0`. The four tabulated orderings are exactly the parity variants of
    /// this predicate; order 0 admits the two constant rules `(0)` and
    /// `(n+1)`.
    pub fn is_up_down(&self) -> bool {
        let r = self.order();
        let terminal = self.quotas[r];
        if terminal != 0 && terminal != self.n + 1 {
            return false;
        }
        if self.quotas[..r].iter().any(|&k| k == 0 || k == self.n + 1) {
            return false;
        }
        let mut lo = self.quotas[0];
        let mut hi = self.quotas[0];
        let mut prev_above: Option<bool> = None;
        for &k in &self.quotas[1..] {
            let above = if k > hi {
                true
            } else if k < lo {
                false
            } else {
                return false;
            };
            if prev_above == Some(above) {
                return false;
            }
            prev_above = Some(above);
            if above {
                hi = k;
            } else {
                lo = k;
            }
        }
        true
    }

    /// Replace every quota by its dual. Maps valid sequences with terminal
    /// `n + 1` onto valid sequences with terminal `0` and back.
    pub fn dualized(&self) -> QuotaSequence {
        QuotaSequence {
            n: self.n,
            quotas: self.quotas.iter().map(|&k| self.n + 1 - k).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&QuotaWire {
            n: self.n,
            k: self.quotas.clone(),
        })
        .expect("quota serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: QuotaWire =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("quota JSON: {e}")))?;
        QuotaSequence::new(wire.n, wire.k)
    }
}

impl std::fmt::Display for QuotaSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.quotas.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The lower-triangular transform between quota readouts and list terms:
/// unit diagonal, `-1` two below it. Its inverse carries `1` at every second
/// position below the diagonal, so applying it forms the alternating partial
/// sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionMatrix {
    order: usize,
    forward: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
}

impl ConversionMatrix {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        let mut forward = vec![vec![0i64; order]; order];
        let mut inverse = vec![vec![0i64; order]; order];
        for i in 0..order {
            forward[i][i] = 1;
            if i >= 2 {
                forward[i][i - 2] = -1;
            }
            let mut j = i;
            loop {
                inverse[i][j] = 1;
                if j < 2 {
                    break;
                }
                j -= 2;
            }
        }
        ConversionMatrix {
            order,
            forward,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn forward(&self) -> &[Vec<i64>] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Vec<i64>] {
        &self.inverse
    }

    pub fn apply(&self, y: &[i64]) -> Vec<i64> {
        assert_eq!(y.len(), self.order);
        self.forward
            .iter()
            .map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_inverse(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.order);
        self.inverse
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Convert a valid quota sequence into the list naming the same rule.
///
/// With terminal `0` (the rule picks `a` under unanimous indifference) the
/// terms are `q_1 = k°_{r-1}, q_2 = k_{r-2}, q_i = k^(°)_{r-i} - k^(°)_{r-i+2}`
/// with duals on odd positions; with terminal `n + 1` the list gains a
/// leading `0` and the duals move to even positions. The final term absorbs
/// the remainder to `n + 1`. The same numbers are recomputed through the
/// matrix transform and the two routes must agree.
pub fn q_from_quotas(ks: &QuotaSequence) -> Result<AbList> {
    if !ks.is_up_down() {
        return Err(Error::InvalidQuotaSequence(format!(
            "sequence ({ks}) does not satisfy the up-and-down conditions"
        )));
    }
    let n = ks.n();
    let r = ks.order();
    let quotas = ks.quotas();
    let dual = |k: usize| n + 1 - k;
    let a_first = ks.terminal() == 0;

    let read = |position: usize, index: usize| {
        let use_dual = a_first == (position % 2 == 1);
        if use_dual {
            dual(quotas[index])
        } else {
            quotas[index]
        }
    };

    let mut middle = Vec::with_capacity(r);
    for i in 1..=r {
        let current = read(i, r - i);
        let term = if i >= 3 {
            current
                .checked_sub(read(i, r - i + 2))
                .expect("fan-out ordering keeps group sizes positive")
        } else {
            current
        };
        middle.push(term);
    }
    let used: usize = middle.iter().sum();
    let last = (n + 1)
        .checked_sub(used)
        .expect("group sizes cannot exceed n + 1");

    if r >= 1 {
        let matrix = ConversionMatrix::new(r);
        let readout: Vec<i64> = (1..=r).map(|j| read(j, r - j) as i64).collect();
        let via_matrix = matrix.apply(&readout);
        let via_formula: Vec<i64> = middle.iter().map(|&t| t as i64).collect();
        assert_eq!(
            via_matrix, via_formula,
            "matrix and difference-formula conversions disagree for ({ks})"
        );
    }

    let mut terms = Vec::with_capacity(r + 2);
    if !a_first {
        terms.push(0);
    }
    terms.extend_from_slice(&middle);
    terms.push(last);
    AbList::new(n, terms).map_err(|e| Error::Internal(format!("converted list invalid: {e}")))
}

/// Convert a list into the quota sequence naming the same rule: the inverse
/// of [`q_from_quotas`]. The quota readouts are the alternating partial sums
/// of the list terms (the explicit expansions), recomputed through the
/// inverse matrix as a cross-check.
pub fn quotas_from_q(q: &AbList) -> QuotaSequence {
    let n = q.n();
    let terms = q.terms();
    let s = terms.len();
    let dual = |k: usize| n + 1 - k;
    let a_first = terms[0] > 0;

    let (r, middle): (usize, &[usize]) = if a_first {
        (s - 1, &terms[..s - 1])
    } else {
        (s - 2, &terms[1..s - 1])
    };

    let mut quotas = vec![0usize; r + 1];
    quotas[r] = if a_first { 0 } else { n + 1 };

    // Partial sums by position parity: y_j = x_j + x_{j-2} + ...
    let mut sums = [0usize; 2];
    for j in 1..=r {
        sums[j % 2] += middle[j - 1];
        let y = sums[j % 2];
        let use_dual = a_first == (j % 2 == 1);
        quotas[r - j] = if use_dual { dual(y) } else { y };
    }

    if r >= 1 {
        let matrix = ConversionMatrix::new(r);
        let x: Vec<i64> = middle.iter().map(|&t| t as i64).collect();
        let via_matrix = matrix.apply_inverse(&x);
        let via_expansion: Vec<i64> = (1..=r)
            .map(|j| {
                let use_dual = a_first == (j % 2 == 1);
                let k = quotas[r - j];
                (if use_dual { dual(k) } else { k }) as i64
            })
            .collect();
        assert_eq!(
            via_matrix, via_expansion,
            "matrix and partial-sum expansions disagree for list ({q})"
        );
    }

    let ks = QuotaSequence { n, quotas };
    assert!(
        ks.is_up_down(),
        "list ({q}) converted to a sequence ({ks}) violating the up-and-down conditions"
    );
    ks
}

/// Evaluate the rule named by a quota sequence at one grid point, straight
/// from its region decomposition.
///
/// Read from the terminal end, every second quota is a cumulative width of
/// the vertical `b`-bands and every other one (dualized) a cumulative height
/// of the horizontal `a`-bands. Scanning the bands in fill order, the first
/// one containing the point decides; whatever the bands never claim belongs
/// to the closing wedge, whose alternative the parity of the group count
/// determines. No list is ever formed, which makes this evaluator an
/// independent check on the conversion formulas.
pub fn eval_quota_regions(ks: &QuotaSequence, pt: GridPoint) -> Result<Alternative> {
    if !ks.is_up_down() {
        return Err(Error::InvalidQuotaSequence(format!(
            "sequence ({ks}) does not satisfy the up-and-down conditions"
        )));
    }
    let n = ks.n();
    let grid = Grid::new(n);
    if !grid.contains(pt) {
        return Err(Error::PointOutsideGrid {
            k: pt.k,
            m: pt.m,
            n,
        });
    }
    let r = ks.order();
    let quotas = ks.quotas();
    let dual = |k: usize| n + 1 - k;
    let b_first = ks.terminal() == n + 1;

    let offsets = |start: usize| (0..).map(move |t| start + 2 * t).take_while(|&o| o <= r);
    let (widths, heights): (Vec<usize>, Vec<usize>) = if b_first {
        (
            offsets(1).map(|o| quotas[r - o]).collect(),
            offsets(2).map(|o| dual(quotas[r - o])).collect(),
        )
    } else {
        (
            offsets(2).map(|o| quotas[r - o]).collect(),
            offsets(1).map(|o| dual(quotas[r - o])).collect(),
        )
    };

    let rounds = widths.len().max(heights.len());
    for t in 0..rounds {
        if b_first {
            if t < widths.len() && pt.k < widths[t] {
                return Ok(Alternative::B);
            }
            if t < heights.len() && pt.m < heights[t] {
                return Ok(Alternative::A);
            }
        } else {
            if t < heights.len() && pt.m < heights[t] {
                return Ok(Alternative::A);
            }
            if t < widths.len() && pt.k < widths[t] {
                return Ok(Alternative::B);
            }
        }
    }
    // Closing wedge: group s is horizontal exactly when s is odd.
    let group_count = if b_first { r + 2 } else { r + 1 };
    Ok(if group_count % 2 == 1 {
        Alternative::A
    } else {
        Alternative::B
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ablist::enumerate_ablists;

    fn ks(n: usize, quotas: &[usize]) -> QuotaSequence {
        QuotaSequence::new(n, quotas.to_vec()).unwrap()
    }

    #[test]
    fn dual_quota_examples() {
        let g = Grid::new(20);
        assert_eq!(dual_quota(21, g).unwrap(), 0);
        assert_eq!(dual_quota(19, g).unwrap(), 2);
        assert!(dual_quota(22, g).is_err());
        for k in 0..=21 {
            assert_eq!(dual_quota(dual_quota(k, g).unwrap(), g).unwrap(), k);
        }
    }

    #[test]
    fn up_down_validation() {
        assert!(ks(20, &[8, 14, 7, 19, 3, 21]).is_up_down());
        assert!(!ks(20, &[8, 14, 7, 19, 3, 20]).is_up_down()); // bad terminal
        assert!(!ks(20, &[5, 5, 21]).is_up_down()); // repetition
        assert!(!ks(20, &[8, 14, 16, 19, 3, 21]).is_up_down()); // same side twice
        assert!(!ks(20, &[1, 2, 3]).is_up_down());
        assert!(ks(20, &[0]).is_up_down()); // constant rules
        assert!(ks(20, &[21]).is_up_down());
        assert!(!ks(20, &[5]).is_up_down());
        assert!(!ks(20, &[0, 21]).is_up_down()); // interior hits the bounds
    }

    #[test]
    fn quota_sequence_range_checks() {
        assert!(QuotaSequence::new(20, vec![]).is_err());
        assert!(QuotaSequence::new(20, vec![22]).is_err());
        assert!(QuotaSequence::new(20, vec![8, 21]).is_ok());
    }

    #[test]
    fn worked_conversion_to_list() {
        let q = q_from_quotas(&ks(20, &[8, 14, 7, 19, 3, 21])).unwrap();
        assert_eq!(q.terms(), &[0, 3, 2, 4, 5, 1, 6]);
    }

    #[test]
    fn worked_conversion_to_quotas() {
        let q = AbList::new(20, vec![0, 3, 2, 4, 5, 1, 6]).unwrap();
        assert_eq!(quotas_from_q(&q).quotas(), &[8, 14, 7, 19, 3, 21]);
    }

    #[test]
    fn degenerate_conversions() {
        for n in [0, 3, 20] {
            let constant_a = q_from_quotas(&ks(n, &[0])).unwrap();
            assert_eq!(constant_a.terms(), &[n + 1]);
            let constant_b = q_from_quotas(&ks(n, &[n + 1])).unwrap();
            assert_eq!(constant_b.terms(), &[0, n + 1]);

            assert_eq!(
                quotas_from_q(&AbList::new(n, vec![n + 1]).unwrap()).quotas(),
                &[0]
            );
            assert_eq!(
                quotas_from_q(&AbList::new(n, vec![0, n + 1]).unwrap()).quotas(),
                &[n + 1]
            );
        }
    }

    #[test]
    fn invalid_sequence_is_rejected() {
        assert!(q_from_quotas(&ks(20, &[1, 2, 3])).is_err());
        assert!(eval_quota_regions(&ks(20, &[1, 2, 3]), GridPoint::new(0, 0)).is_err());
    }

    #[test]
    fn round_trips_over_all_lists() {
        for n in 0..=8 {
            for q in enumerate_ablists(Grid::new(n)) {
                let seq = quotas_from_q(&q);
                assert!(seq.is_up_down(), "list {q} gave sequence {seq}");
                let back = q_from_quotas(&seq).unwrap();
                assert_eq!(back, q, "round trip failed via {seq}");
            }
        }
    }

    #[test]
    fn explicit_expansions_hold_term_by_term() {
        // k°_{r-1} = q_1, k_{r-2} = q_2, k°_{r-3} = q_1 + q_3, ... for the
        // a-first case, and the dual-swapped version for the b-first case.
        for n in 2..=8 {
            for q in enumerate_ablists(Grid::new(n)) {
                let seq = quotas_from_q(&q);
                let r = seq.order();
                let quotas = seq.quotas();
                let dual = |k: usize| n + 1 - k;
                let a_first = q.terms()[0] > 0;
                let middle: &[usize] = if a_first {
                    &q.terms()[..q.terms().len() - 1]
                } else {
                    &q.terms()[1..q.terms().len() - 1]
                };
                let mut sums = [0usize; 2];
                for j in 1..=r {
                    sums[j % 2] += middle[j - 1];
                    let expect = sums[j % 2];
                    let got = if a_first == (j % 2 == 1) {
                        dual(quotas[r - j])
                    } else {
                        quotas[r - j]
                    };
                    assert_eq!(got, expect, "expansion {j} failed for list {q}");
                }
            }
        }
    }

    #[test]
    fn region_evaluation_matches_figure_points() {
        let seq = ks(20, &[8, 14, 7, 19, 3, 21]);
        assert_eq!(
            eval_quota_regions(&seq, GridPoint::new(8, 12)).unwrap(),
            Alternative::A
        );
        assert_eq!(
            eval_quota_regions(&seq, GridPoint::new(0, 0)).unwrap(),
            Alternative::B
        );
        assert!(eval_quota_regions(&seq, GridPoint::new(20, 1)).is_err());
    }

    #[test]
    fn region_evaluation_agrees_with_conversion() {
        for n in 0..=6 {
            let grid = Grid::new(n);
            for q in enumerate_ablists(grid) {
                let seq = quotas_from_q(&q);
                let f = q_from_quotas(&seq).unwrap().to_grid_function();
                for pt in grid.points() {
                    assert_eq!(
                        eval_quota_regions(&seq, pt).unwrap(),
                        f.get(pt),
                        "sequence {seq} at {pt}"
                    );
                }
            }
        }
    }

    #[test]
    fn dualizing_flips_the_terminal() {
        for n in 0..=6 {
            for q in enumerate_ablists(Grid::new(n)) {
                let seq = quotas_from_q(&q);
                let dualized = seq.dualized();
                assert!(dualized.is_up_down(), "dual of {seq} should stay valid");
                assert_eq!(dualized.terminal(), n + 1 - seq.terminal());
            }
        }
    }

    #[test]
    fn matrix_smallest_instance() {
        let t = ConversionMatrix::new(3);
        assert_eq!(t.forward(), &[vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1]]);
        assert_eq!(t.inverse(), &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn matrix_product_is_identity() {
        for order in 1..=20 {
            let t = ConversionMatrix::new(order);
            for i in 0..order {
                for j in 0..order {
                    let entry: i64 = (0..order)
                        .map(|l| t.forward()[i][l] * t.inverse()[l][j])
                        .sum();
                    let expected = i64::from(i == j);
                    assert_eq!(entry, expected, "order {order} entry ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn inverse_row_sums() {
        let t = ConversionMatrix::new(14);
        for (i, row) in t.inverse().iter().enumerate() {
            let sum: i64 = row.iter().sum();
            assert_eq!(sum as usize, (i + 1).div_ceil(2));
        }
    }

    #[test]
    fn quota_json_round_trip() {
        let seq = ks(20, &[8, 14, 7, 19, 3, 21]);
        assert_eq!(seq.to_json(), r#"{"n":20,"k":[8,14,7,19,3,21]}"#);
        assert_eq!(QuotaSequence::from_json(&seq.to_json()).unwrap(), seq);
    }
}
