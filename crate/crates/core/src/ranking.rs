//! Scores to rankings, and the statistics used to compare rankings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgraph::DirectedGraph;
use crate::output::fmt_sig;

/// Scores closer than this share a position.
pub const DEFAULT_EPS_TIE: f64 = 1e-6;

const NEGATIVE_SCORE_TOL: f64 = 1e-9;

/// A ranking derived from per-node scores.
///
/// `positions` use competition ranking (1, 2, 2, 4): every member of a tie
/// group takes the position of the group's first member.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub scores: Vec<f64>,
    /// Nodes by descending score, ties by ascending index.
    pub order: Vec<usize>,
    /// 1-based position per node.
    pub positions: Vec<usize>,
    /// Groups in rank order; members in `order` order.
    pub tie_groups: Vec<Vec<usize>>,
}

impl RankResult {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Number of occupied positions, i.e. tie groups.
    pub fn distinct_positions(&self) -> usize {
        self.tie_groups.len()
    }

    /// Index of the tie group holding `node`.
    pub fn group_of(&self, node: usize) -> usize {
        self.tie_groups
            .iter()
            .position(|g| g.contains(&node))
            .expect("tie groups partition the nodes")
    }

    /// CSV with columns `node,score,position,tie_group`.
    pub fn write_csv<W: Write>(&self, labels: &dyn Fn(usize) -> String, mut w: W) -> Result<()> {
        writeln!(w, "node,score,position,tie_group")?;
        for (gid, group) in self.tie_groups.iter().enumerate() {
            for &v in group {
                writeln!(w, "{},{},{},{}", labels(v), fmt_sig(self.scores[v]), self.positions[v], gid)?;
            }
        }
        Ok(())
    }
}

/// Sorts nodes by descending score and groups near-equal scores.
///
/// A node joins the current group when its score is within `eps_tie` of the
/// group's first (highest) member, so groups never chain beyond `eps_tie`.
pub fn rank_from_scores(scores: &[f64], eps_tie: f64) -> Result<RankResult> {
    if let Some((node, &score)) = scores
        .iter()
        .enumerate()
        .find(|(_, &s)| s < -NEGATIVE_SCORE_TOL || s.is_nan())
    {
        return Err(Error::NegativeScore { node, score });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut positions = vec![0; scores.len()];
    let mut tie_groups: Vec<Vec<usize>> = Vec::new();
    let mut leader = f64::INFINITY;
    for (rank, &v) in order.iter().enumerate() {
        match tie_groups.last_mut() {
            Some(group) if leader - scores[v] < eps_tie => {
                positions[v] = positions[group[0]];
                group.push(v);
            }
            _ => {
                leader = scores[v];
                positions[v] = rank + 1;
                tie_groups.push(vec![v]);
            }
        }
    }
    Ok(RankResult {
        scores: scores.to_vec(),
        order,
        positions,
        tie_groups,
    })
}

fn check_same_size(a: &RankResult, b: &RankResult) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// Tie-aware Kendall tau-b over the two position vectors, mapped from
/// `[-1, 1]` onto `[0, 1]`: identical rankings give 1, exactly reversed
/// ones give 0.
///
/// When tau-b is undefined because one ranking is a single tie group, the
/// result is 1 if both are, and 0.5 otherwise.
pub fn kendall_concordance(a: &RankResult, b: &RankResult) -> Result<f64> {
    check_same_size(a, b)?;
    let n = a.len();
    let (pa, pb) = (&a.positions, &b.positions);
    let (mut concordant, mut discordant) = (0u64, 0u64);
    let (mut ties_a, mut ties_b) = (0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            let da = pa[i].cmp(&pa[j]);
            let db = pb[i].cmp(&pb[j]);
            use std::cmp::Ordering::Equal;
            match (da, db) {
                (Equal, Equal) => {}
                (Equal, _) => ties_a += 1,
                (_, Equal) => ties_b += 1,
                _ if da == db => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let untied = (concordant + discordant) as f64;
    let denom = ((untied + ties_a as f64) * (untied + ties_b as f64)).sqrt();
    if denom == 0.0 {
        return Ok(if pa == pb { 1.0 } else { 0.5 });
    }
    let tau_b = (concordant as f64 - discordant as f64) / denom;
    Ok((tau_b + 1.0) / 2.0)
}

/// `position_b(i) - position_a(i)`: positive when `a` places the node higher.
pub fn rank_shift(a: &RankResult, b: &RankResult) -> Result<Vec<i64>> {
    check_same_size(a, b)?;
    Ok(a.positions
        .iter()
        .zip(&b.positions)
        .map(|(&pa, &pb)| pb as i64 - pa as i64)
        .collect())
}

/// `(position, node count)` for every occupied position, in rank order.
pub fn degeneracy_profile(r: &RankResult) -> Vec<(usize, usize)> {
    r.tie_groups
        .iter()
        .map(|g| (r.positions[g[0]], g.len()))
        .collect()
}

/// Summary of how two rankings of the same nodes differ.
#[derive(Debug, Clone, PartialEq)]
pub struct RankComparison {
    pub kendall: f64,
    /// `rank_shift(a, b)`.
    pub shifts: Vec<i64>,
    pub degeneracy_a: Vec<(usize, usize)>,
    pub degeneracy_b: Vec<(usize, usize)>,
}

pub fn compare(a: &RankResult, b: &RankResult) -> Result<RankComparison> {
    Ok(RankComparison {
        kendall: kendall_concordance(a, b)?,
        shifts: rank_shift(a, b)?,
        degeneracy_a: degeneracy_profile(a),
        degeneracy_b: degeneracy_profile(b),
    })
}

/// Which adjacent nodes count as neighbors in [`neighbor_profile`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Neighborhood {
    #[default]
    Out,
    In,
    Total,
}

impl std::str::FromStr for Neighborhood {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "out" => Ok(Self::Out),
            "in" => Ok(Self::In),
            "total" | "all" => Ok(Self::Total),
            other => Err(Error::InvalidParameter(format!("unknown neighborhood {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborStats {
    /// Mean score over the neighbors.
    pub mean_score: f64,
    /// Mean number of distinct adjacent nodes over the neighbors.
    pub mean_degree: f64,
    pub ratio: f64,
}

/// Per node: mean neighbor score, mean neighbor degree and their ratio.
/// `None` for nodes without neighbors in the chosen sense.
pub fn neighbor_profile(g: &DirectedGraph, r: &RankResult, mode: Neighborhood) -> Result<Vec<Option<NeighborStats>>> {
    if g.node_count() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: r.len(),
        });
    }
    let degree: Vec<usize> = (0..g.node_count()).map(|v| g.total_degree(v)).collect();
    Ok((0..g.node_count())
        .map(|v| {
            let nb: Vec<usize> = match mode {
                Neighborhood::Out => g.out_neighbors(v).to_vec(),
                Neighborhood::In => g.in_neighbors(v).to_vec(),
                Neighborhood::Total => g.undirected_neighbors(v),
            };
            if nb.is_empty() {
                return None;
            }
            let k = nb.len() as f64;
            let mean_score = nb.iter().map(|&u| r.scores[u]).sum::<f64>() / k;
            let mean_degree = nb.iter().map(|&u| degree[u] as f64).sum::<f64>() / k;
            Some(NeighborStats {
                mean_score,
                mean_degree,
                ratio: mean_score / mean_degree,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rank(s: &[f64]) -> RankResult {
        rank_from_scores(s, DEFAULT_EPS_TIE).unwrap()
    }

    /// Plain O(n^2) Kendall tau-b over scores (higher is better), written
    /// from the pair-counting definition.
    fn tau_b_reference(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let (mut s, mut n1, mut n2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            for j in 0..i {
                let a = (x[i] - x[j]).signum() * ((x[i] != x[j]) as i32 as f64);
                let b = (y[i] - y[j]).signum() * ((y[i] != y[j]) as i32 as f64);
                s += a * b;
                n1 += a * a;
                n2 += b * b;
            }
        }
        s / (n1 * n2).sqrt()
    }

    #[test]
    fn competition_positions() {
        let r = rank(&[0.4, 0.3, 0.3]);
        assert_eq!(r.positions, vec![1, 2, 2]);
        assert_eq!(r.tie_groups, vec![vec![0], vec![1, 2]]);
        let r = rank(&[0.1, 0.2, 0.2, 0.5]);
        assert_eq!(r.positions, vec![4, 2, 2, 1]);
        assert_eq!(r.order, vec![3, 1, 2, 0]);
        assert_eq!(r.distinct_positions(), 3);
        assert_eq!(r.group_of(2), 1);
    }

    #[test]
    fn groups_do_not_chain() {
        let s = [0.5, 0.5 - 0.6e-6, 0.5 - 1.2e-6];
        assert_eq!(rank(&s).positions, vec![1, 1, 3]);
    }

    #[test]
    fn negative_scores_rejected() {
        assert!(matches!(rank_from_scores(&[1.0, -0.1], 1e-6), Err(Error::NegativeScore { node: 1, .. })));
        assert!(rank_from_scores(&[1.0, -1e-12], 1e-6).is_ok());
    }

    #[test]
    fn kendall_endpoints() {
        let a = rank(&[0.4, 0.3, 0.2, 0.1]);
        let b = rank(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(kendall_concordance(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_concordance(&a, &b).unwrap(), 0.0);
        let flat = rank(&[0.25; 4]);
        assert_eq!(kendall_concordance(&flat, &flat).unwrap(), 1.0);
        assert_eq!(kendall_concordance(&flat, &a).unwrap(), 0.5);
        assert!(kendall_concordance(&a, &rank(&[1.0])).is_err());
    }

    #[test]
    fn kendall_with_ties_matches_reference() {
        let x = [0.3, 0.2, 0.2, 0.1, 0.1, 0.1];
        let y = [0.25, 0.25, 0.2, 0.15, 0.1, 0.05];
        let k = kendall_concordance(&rank(&x), &rank(&y)).unwrap();
        assert!((k - (tau_b_reference(&x, &y) + 1.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn shifts() {
        let a = rank(&[0.5, 0.3, 0.2]);
        let b = rank(&[0.3, 0.5, 0.2]);
        assert_eq!(rank_shift(&a, &a).unwrap(), vec![0, 0, 0]);
        assert_eq!(rank_shift(&a, &b).unwrap(), vec![1, -1, 0]);
        assert_eq!(rank_shift(&b, &a).unwrap(), vec![-1, 1, 0]);
        let c = compare(&a, &b).unwrap();
        assert_eq!(c.degeneracy_a, vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn profiles() {
        assert_eq!(degeneracy_profile(&rank(&[0.25; 4])), vec![(1, 4)]);
        assert_eq!(degeneracy_profile(&rank(&[0.4, 0.3, 0.2, 0.1])).len(), 4);
        assert_eq!(degeneracy_profile(&rank(&[0.4, 0.2, 0.2, 0.2])), vec![(1, 1), (2, 3)]);
    }

    #[test]
    fn star_neighbor_profile() {
        // center 0 with 4 bidirectional leaves
        let edges = (1..5).flat_map(|l| [(0, l), (l, 0)]).collect();
        let g = DirectedGraph::new(5, edges).unwrap();
        let r = rank(&[0.6, 0.1, 0.1, 0.1, 0.1]);
        let prof = neighbor_profile(&g, &r, Neighborhood::Out).unwrap();
        let leaf = prof[1].unwrap();
        assert_eq!(leaf.mean_score, 0.6);
        assert_eq!(leaf.mean_degree, 4.0);
        let center = prof[0].unwrap();
        assert!((center.mean_score - 0.1).abs() < 1e-15);
        assert_eq!(center.mean_degree, 1.0);
    }

    #[test]
    fn single_neighbor_ratio() {
        // node 0 -> node 1, and node 1 touches 5 nodes in total
        let g = DirectedGraph::new(6, vec![(0, 1), (1, 2), (1, 3), (4, 1), (5, 1)]).unwrap();
        let r = rank(&[0.1, 0.1, 0.2, 0.2, 0.2, 0.2]);
        let prof = neighbor_profile(&g, &r, Neighborhood::Out).unwrap();
        assert!((prof[0].unwrap().ratio - 0.02).abs() < 1e-15);
        assert!(prof[2].is_none());
        assert!(neighbor_profile(&g, &r, Neighborhood::In).unwrap()[2].is_some());
    }

    #[test]
    fn csv_export() {
        let r = rank(&[0.4, 0.3, 0.3]);
        let mut buf = Vec::new();
        r.write_csv(&|v| format!("n{v}"), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("n2,3.00000000000e-1,2,1"));
    }

    // Scores on a coarse grid: gaps are either 0 or at least 1e-3, far from
    // eps_tie even after scaling by c in [0.1, 10].
    fn coarse_scores() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(1u32..40, 1..30)
            .prop_map(|v| v.into_iter().map(|k| k as f64 * 1e-3).collect())
    }

    proptest! {
        #[test]
        fn order_invariant_under_affine_maps(s in coarse_scores(), shift in 0.0f64..5.0, scale in 0.1f64..10.0) {
            let base = rank(&s);
            let shifted: Vec<f64> = s.iter().map(|x| x + shift).collect();
            let scaled: Vec<f64> = s.iter().map(|x| x * scale).collect();
            for other in [rank(&shifted), rank(&scaled)] {
                prop_assert_eq!(&other.order, &base.order);
                prop_assert_eq!(&other.positions, &base.positions);
                prop_assert_eq!(&other.tie_groups, &base.tie_groups);
            }
        }

        #[test]
        fn ranking_invariants(s in coarse_scores()) {
            let r = rank(&s);
            prop_assert!(r.order.windows(2).all(|w| s[w[0]] >= s[w[1]]));
            prop_assert!(r.order.windows(2).all(|w| r.positions[w[0]] <= r.positions[w[1]]));
            let mut all: Vec<usize> = r.tie_groups.concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..s.len()).collect::<Vec<_>>());
            prop_assert_eq!(degeneracy_profile(&r).iter().map(|p| p.1).sum::<usize>(), s.len());
        }

        #[test]
        fn kendall_symmetric_and_one_iff_identical(x in coarse_scores(), seed in any::<u64>()) {
            let n = x.len();
            let y: Vec<f64> = (0..n).map(|i| ((i as u64 ^ seed) % 7) as f64 * 1e-3 + 1e-3).collect();
            let (a, b) = (rank(&x), rank(&y));
            let k = kendall_concordance(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&k));
            prop_assert_eq!(k, kendall_concordance(&b, &a).unwrap());
            prop_assert_eq!(k == 1.0, a.positions == b.positions);
            if n > 1 && a.distinct_positions() > 1 && b.distinct_positions() > 1 {
                prop_assert!((k - (tau_b_reference(&x, &y) + 1.0) / 2.0).abs() < 1e-12);
            }
            let neg: Vec<i64> = rank_shift(&b, &a).unwrap().iter().map(|d| -d).collect();
            prop_assert_eq!(rank_shift(&a, &b).unwrap(), neg);
        }
    }
}
