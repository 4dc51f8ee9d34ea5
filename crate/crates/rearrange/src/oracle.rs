//! Brute-force ground truth for small inputs.
//!
//! Every oracle enumerates its full candidate space with no pruning, so the
//! `enumerated` count always equals the space size. These are deliberately
//! simple and slow; the fast solvers are tested against them.

use crate::depgraph::{LabeledDepGraph, UndirectedGraph, UnlabeledDepGraph};
use serde::{Deserialize, Serialize};

pub const MRB_LABELED_CAP: usize = 10;
pub const MRB_UNLABELED_CAP: usize = 9;
pub const MFVS_CAP: usize = 16;
pub const MINVS_CAP: usize = 9;
pub const JOINT_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: usize,
    /// Every witness attaining the optimum (orderings or vertex sets).
    pub witnesses: Vec<Vec<usize>>,
    /// Number of candidates examined; equals the full space size.
    pub enumerated: u64,
}

/// Weighted variant for the joint objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointOracleResult {
    pub objective: f64,
    pub total_buffers: usize,
    pub peak: usize,
    pub witnesses: Vec<Vec<usize>>,
    pub enumerated: u64,
}

fn check_cap(n: usize, cap: usize, what: &str) -> crate::Result<()> {
    if n > cap {
        return Err(crate::Error::Capacity(format!(
            "{what} oracle capped at {cap}, got {n}"
        )));
    }
    Ok(())
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) -> u64 {
    // Heap's algorithm over 1..=n.
    let mut items: Vec<usize> = (1..=n).collect();
    let mut count = 0u64;
    if n == 0 {
        f(&items);
        return 1;
    }
    let mut c = vec![0usize; n];
    f(&items);
    count += 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(&items);
            count += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

/// Exhaustive minimum over all pick orderings of the peak buffer count.
pub fn mrb_labeled_exhaustive(g: &LabeledDepGraph, cap: usize) -> crate::Result<OracleResult> {
    check_cap(g.n, cap, "labeled MRB")?;
    let masks = g.dep_masks()?;
    let mut best = usize::MAX;
    let mut witnesses: Vec<Vec<usize>> = Vec::new();
    let enumerated = for_each_permutation(g.n, |phi| {
        let rb = rb_of_ordering(&masks, phi);
        if rb < best {
            best = rb;
            witnesses.clear();
        }
        if rb == best {
            witnesses.push(phi.to_vec());
        }
    });
    Ok(OracleResult {
        value: if best == usize::MAX { 0 } else { best },
        witnesses,
        enumerated,
    })
}

/// Peak buffered count of one ordering, bitmask replay. Kept separate from
/// `evaluate_ordering` so test paths stay independent of plan construction.
pub fn rb_of_ordering(dep_masks: &[u64], phi: &[usize]) -> usize {
    let n = dep_masks.len();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut left = 0u64; // objects that left their start
    let mut buffered = 0u64;
    let mut peak = 0usize;
    for &o in phi {
        let bit = 1u64 << (o - 1);
        left |= bit;
        let at_start = full & !left;
        if dep_masks[o - 1] & at_start != 0 {
            buffered |= bit;
            peak = peak.max(buffered.count_ones() as usize);
        }
        // Flush buffered objects whose dependencies have all left.
        loop {
            let mut flushed = 0u64;
            let mut b = buffered;
            while b != 0 {
                let low = b & b.wrapping_neg();
                let idx = low.trailing_zeros() as usize;
                if dep_masks[idx] & at_start == 0 {
                    flushed |= low;
                }
                b &= !low;
            }
            if flushed == 0 {
                break;
            }
            buffered &= !flushed;
        }
    }
    peak
}

/// Buffer occupancy after removing a set of goal vertices: picked starts minus
/// filled goals, floored at zero.
fn unlabeled_occupancy(cleared: usize, removed: usize) -> usize {
    cleared.saturating_sub(removed)
}

/// Exhaustive minimum over goal-removal orders of the peak occupancy.
pub fn mrb_unlabeled_exhaustive(g: &UnlabeledDepGraph, cap: usize) -> crate::Result<OracleResult> {
    check_cap(g.goals.len(), cap, "unlabeled MRB")?;
    let goals: Vec<usize> = g.goals.iter().copied().collect();
    let starts: Vec<usize> = g.starts.iter().copied().collect();
    let k = goals.len();
    let gidx = |id: usize| goals.binary_search(&id).expect("goal id");
    // neighbor start indices per goal
    let mut nbr: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(s, gl) in &g.edges {
        let si = starts.binary_search(&s).expect("start id");
        nbr[gidx(gl)].push(si);
    }
    let mut best = usize::MAX;
    let mut witnesses: Vec<Vec<usize>> = Vec::new();
    let enumerated = for_each_permutation(k, |order| {
        let mut cleared = vec![false; starts.len()];
        let mut ncleared = 0usize;
        let mut peak = 0usize;
        for (step, &gpos) in order.iter().enumerate() {
            let gi = gpos - 1;
            for &si in &nbr[gi] {
                if !cleared[si] {
                    cleared[si] = true;
                    ncleared += 1;
                }
            }
            peak = peak.max(unlabeled_occupancy(ncleared, step + 1));
        }
        if peak < best {
            best = peak;
            witnesses.clear();
        }
        if peak == best {
            witnesses.push(order.iter().map(|&p| goals[p - 1]).collect());
        }
    });
    Ok(OracleResult {
        value: if best == usize::MAX { 0 } else { best },
        witnesses,
        enumerated,
    })
}

fn is_acyclic_without(g: &LabeledDepGraph, removed: u64) -> bool {
    // Kahn over the surviving vertices.
    let n = g.n;
    let mut indeg = vec![0usize; n + 1];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(i, j) in &g.arcs {
        if removed & (1 << (i - 1)) != 0 || removed & (1 << (j - 1)) != 0 {
            continue;
        }
        adj[i].push(j);
        indeg[j] += 1;
    }
    let mut queue: Vec<usize> = (1..=n)
        .filter(|&v| removed & (1 << (v - 1)) == 0 && indeg[v] == 0)
        .collect();
    let mut seen = 0usize;
    let alive = n - removed.count_ones() as usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    seen == alive
}

/// Smallest vertex set whose removal leaves the graph acyclic, by subset
/// enumeration smallest-first.
pub fn mfvs_exhaustive(g: &LabeledDepGraph, cap: usize) -> crate::Result<OracleResult> {
    check_cap(g.n, cap, "feedback vertex set")?;
    let n = g.n;
    let mut enumerated = 0u64;
    for k in 0..=n {
        let mut witnesses: Vec<Vec<usize>> = Vec::new();
        let mut subset = (1u64 << k).wrapping_sub(1);
        loop {
            if k == 0 && subset != 0 {
                break;
            }
            enumerated += 1;
            if is_acyclic_without(g, subset) {
                let members: Vec<usize> =
                    (1..=n).filter(|&v| subset & (1 << (v - 1)) != 0).collect();
                witnesses.push(members);
            }
            if k == 0 {
                break;
            }
            // next k-combination (Gosper's hack)
            let c = subset & subset.wrapping_neg();
            let r = subset + c;
            subset = (((r ^ subset) >> 2) / c) | r;
            if subset >= 1u64 << n {
                break;
            }
        }
        if !witnesses.is_empty() {
            return Ok(OracleResult {
                value: k,
                witnesses,
                enumerated,
            });
        }
    }
    unreachable!("removing all vertices always leaves an acyclic graph");
}

/// Exhaustive minimum vertex separation over all orderings.
pub fn min_vertex_separation_exhaustive(
    g: &UndirectedGraph,
    cap: usize,
) -> crate::Result<OracleResult> {
    check_cap(g.n, cap, "vertex separation")?;
    let mut best = usize::MAX;
    let mut witnesses: Vec<Vec<usize>> = Vec::new();
    let enumerated = for_each_permutation(g.n, |phi| {
        let vs = crate::depgraph::vertex_separation(g, phi).expect("permutation");
        if vs < best {
            best = vs;
            witnesses.clear();
        }
        if vs == best {
            witnesses.push(phi.to_vec());
        }
    });
    Ok(OracleResult {
        value: if best == usize::MAX { 0 } else { best },
        witnesses,
        enumerated,
    })
}

/// Totals and peak of one ordering under the plan semantics.
pub fn simulate_ordering_cost(dep_masks: &[u64], phi: &[usize]) -> (usize, usize) {
    let n = dep_masks.len();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut left = 0u64;
    let mut buffered = 0u64;
    let mut peak = 0usize;
    let mut total = 0usize;
    for &o in phi {
        let bit = 1u64 << (o - 1);
        left |= bit;
        let at_start = full & !left;
        if dep_masks[o - 1] & at_start != 0 {
            buffered |= bit;
            total += 1;
            peak = peak.max(buffered.count_ones() as usize);
        }
        loop {
            let mut flushed = 0u64;
            let mut b = buffered;
            while b != 0 {
                let low = b & b.wrapping_neg();
                let idx = low.trailing_zeros() as usize;
                if dep_masks[idx] & at_start == 0 {
                    flushed |= low;
                }
                b &= !low;
            }
            if flushed == 0 {
                break;
            }
            buffered &= !flushed;
        }
    }
    (total, peak)
}

/// Exhaustive optimum of `alpha * total_buffers + beta * peak` over orderings.
pub fn joint_optimum_exhaustive(
    g: &LabeledDepGraph,
    alpha: f64,
    beta: f64,
    cap: usize,
) -> crate::Result<JointOracleResult> {
    check_cap(g.n, cap, "joint objective")?;
    let masks = g.dep_masks()?;
    let mut best = f64::INFINITY;
    let mut best_total = 0usize;
    let mut best_peak = 0usize;
    let mut witnesses: Vec<Vec<usize>> = Vec::new();
    let enumerated = for_each_permutation(g.n, |phi| {
        let (total, peak) = simulate_ordering_cost(&masks, phi);
        let obj = alpha * total as f64 + beta * peak as f64;
        if obj < best - 1e-12 {
            best = obj;
            best_total = total;
            best_peak = peak;
            witnesses.clear();
        }
        if (obj - best).abs() <= 1e-12 {
            witnesses.push(phi.to_vec());
        }
    });
    Ok(JointOracleResult {
        objective: best,
        total_buffers: best_total,
        peak: best_peak,
        witnesses,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depgraph::{random_labeled, LabeledDepGraph};
    use crate::instances::fixtures;

    #[test]
    fn labeled_oracle_on_basics() {
        let edgeless = LabeledDepGraph::edgeless(5);
        let r = mrb_labeled_exhaustive(&edgeless, MRB_LABELED_CAP).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.enumerated, 120);
        assert_eq!(r.witnesses.len(), 120);

        let k4 = crate::depgraph::random_undirected(4, 1.1, 0).bidirectional();
        assert_eq!(mrb_labeled_exhaustive(&k4, 10).unwrap().value, 3);

        let fig2 = fixtures::seven_discs().labeled_graph().unwrap();
        assert_eq!(mrb_labeled_exhaustive(&fig2, 10).unwrap().value, 2);
    }

    #[test]
    fn unlabeled_oracle_on_basics() {
        let single = UnlabeledDepGraph::new([1], [1], [(1, 1)]).unwrap();
        assert_eq!(mrb_unlabeled_exhaustive(&single, 9).unwrap().value, 0);
        let k33 = crate::depgraph::random_bipartite(3, 1.1, 0);
        assert_eq!(mrb_unlabeled_exhaustive(&k33, 9).unwrap().value, 2);
    }

    #[test]
    fn mfvs_on_fixtures() {
        let fig4 = fixtures::three_two_cycles().labeled_graph().unwrap();
        let r = mfvs_exhaustive(&fig4, MFVS_CAP).unwrap();
        assert_eq!(r.value, 3);
        let dag = LabeledDepGraph::new(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert_eq!(mfvs_exhaustive(&dag, MFVS_CAP).unwrap().value, 0);
        let fig5 = fixtures::ten_cuboids().labeled_graph().unwrap();
        let r5 = mfvs_exhaustive(&fig5, MFVS_CAP).unwrap();
        assert_eq!(r5.value, 3);
        assert!(r5.witnesses.contains(&vec![7, 9, 10]));
    }

    #[test]
    fn min_vs_examples() {
        let p4 = crate::depgraph::UndirectedGraph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(min_vertex_separation_exhaustive(&p4, 9).unwrap().value, 1);
        let k4 = crate::depgraph::random_undirected(4, 1.1, 0);
        assert_eq!(min_vertex_separation_exhaustive(&k4, 9).unwrap().value, 3);
        let empty = crate::depgraph::UndirectedGraph::new(3, []).unwrap();
        assert_eq!(min_vertex_separation_exhaustive(&empty, 9).unwrap().value, 0);
    }

    #[test]
    fn joint_oracle_basics() {
        let two_cycle = LabeledDepGraph::new(2, [(1, 2), (2, 1)]).unwrap();
        let r = joint_optimum_exhaustive(&two_cycle, 1.0, 10.0, JOINT_CAP).unwrap();
        assert_eq!((r.total_buffers, r.peak), (1, 1));
        let empty = LabeledDepGraph::edgeless(3);
        let r0 = joint_optimum_exhaustive(&empty, 1.0, 10.0, JOINT_CAP).unwrap();
        assert_eq!(r0.objective, 0.0);
    }

    #[test]
    fn oracle_value_is_invariant_under_relabeling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for seed in 0..8 {
            let g = random_labeled(6, 0.3, seed);
            let base = mrb_labeled_exhaustive(&g, 10).unwrap().value;
            // random relabeling
            let mut perm: Vec<usize> = (1..=6).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let relabeled = LabeledDepGraph::new(
                6,
                g.arcs.iter().map(|&(i, j)| (perm[i - 1], perm[j - 1])),
            )
            .unwrap();
            assert_eq!(
                mrb_labeled_exhaustive(&relabeled, 10).unwrap().value,
                base
            );
        }
    }

    #[test]
    fn oracle_caps_are_enforced() {
        let g = LabeledDepGraph::edgeless(11);
        assert!(matches!(
            mrb_labeled_exhaustive(&g, MRB_LABELED_CAP),
            Err(crate::Error::Capacity(_))
        ));
    }
}
