//! Exact running-buffer minimization with external buffers.
//!
//! Three solver families:
//!
//! - [`dp_lrbm`]: subset dynamic programming over `2^n` states (labeled).
//! - [`dfdp`] / [`dfdp_unlabeled`]: iterative budget search. For each budget
//!   `RB = 0, 1, 2, ...` a depth-first search over subsets checks whether a
//!   plan with at most `RB` simultaneous buffers exists, pruning transitions
//!   that would exceed the budget and subsets already visited at this budget.
//!   The first feasible budget is exact, and the discovered path has peak
//!   exactly `RB` because the previous budget failed.
//! - [`pqs_urbm`]: best-first search over "key" states of the unlabeled
//!   problem. Goal vertices with at most one uncleared neighbor are free: they
//!   can always be removed eagerly without hurting the optimum, so the queue
//!   only holds states without free goals.
//!
//! Buffer occupancy in the unlabeled setting after removing goal set `g` is
//! `max(0, |N(g)| - |g|)`: every neighbor start of a removed goal has been
//! picked, and each removed goal absorbed one picked object.

use crate::depgraph::{
    evaluate_ordering, LabeledDepGraph, RearrangementPlan, UnlabeledDepGraph,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

/// Default wall-clock budget per solve.
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);
/// Default cap for the subset DP table.
pub const DEFAULT_DP_CAP: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Solved,
    TimedOut,
}

/// Move of an unlabeled plan; objects are identified by their start vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnlabeledMove {
    ToGoal { goal: usize },
    ToBuffer { slot: usize },
    BufferToGoal { slot: usize, goal: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnlabeledAction {
    pub object: usize,
    pub mv: UnlabeledMove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plan {
    Labeled(RearrangementPlan),
    Unlabeled(Vec<UnlabeledAction>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: u32,
    pub setting: String,
    pub mrb: usize,
    /// Witness permutation (labeled) or goal sequence (unlabeled).
    pub ordering: Vec<usize>,
    pub plan: Plan,
    pub nodes_expanded: u64,
    pub elapsed: f64,
    pub status: SolveStatus,
}

impl SolveReport {
    fn timed_out(setting: &str, nodes: u64, elapsed: f64) -> Self {
        SolveReport {
            schema: 1,
            setting: setting.into(),
            mrb: 0,
            ordering: Vec::new(),
            plan: Plan::Labeled(RearrangementPlan::default()),
            nodes_expanded: nodes,
            elapsed,
            status: SolveStatus::TimedOut,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Buffered objects of subset `S`: members whose goal is still blocked by an
/// object outside `S`.
fn buffered_mask(dep_masks: &[u64], s: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = s;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let idx = low.trailing_zeros() as usize;
        if dep_masks[idx] & !s != 0 {
            out |= low;
        }
        rest &= !low;
    }
    out
}

/// Subset dynamic programming for labeled instances with the default cap.
pub fn dp_lrbm(g: &LabeledDepGraph) -> crate::Result<SolveReport> {
    dp_lrbm_capped(g, DEFAULT_DP_CAP)
}

/// `T[S]` is the minimum peak buffer count over plans that move exactly the
/// objects in `S` away from their starts. Adding `o` last costs
/// `max(T[S\o], |buffered(S\o)| + 1)` when `o` enters the buffer, else
/// `T[S\o]` stays (the buffered-set size never exceeds the prefix optimum).
pub fn dp_lrbm_capped(g: &LabeledDepGraph, cap: usize) -> crate::Result<SolveReport> {
    let t0 = Instant::now();
    if g.n > cap.min(63) {
        return Err(crate::Error::Capacity(format!(
            "subset DP capped at n <= {}, got {}",
            cap.min(63),
            g.n
        )));
    }
    let n = g.n;
    let masks = g.dep_masks()?;
    // Predecessor masks: rev[o] = objects that depend on o.
    let mut rev = vec![0u64; n];
    for &(i, j) in &g.arcs {
        rev[j - 1] |= 1u64 << (i - 1);
    }
    let size = 1usize << n;
    let mut table: Vec<u8> = Vec::new();
    table
        .try_reserve_exact(size)
        .map_err(|_| crate::Error::Capacity(format!("DP table of 2^{n} bytes")))?;
    table.resize(size, u8::MAX);
    table[0] = 0;

    let mut nodes = 0u64;
    for s in 1..size as u64 {
        let bmask = buffered_mask(&masks, s);
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            rest &= !low;
            let o = low.trailing_zeros() as usize;
            let parent = s & !low;
            let parent_mrb = table[parent as usize];
            // |buffered(parent)| = members of parent buffered in S plus those
            // whose only missing dependency was o itself.
            let parent_buf = ((bmask | rev[o]) & parent).count_ones() as u8;
            let cost = if bmask & low != 0 {
                parent_mrb.max(parent_buf + 1)
            } else {
                // max with parent_buf is a no-op: |b| never exceeds the MRB
                // along optimal prefixes, kept for clarity.
                parent_mrb.max(parent_buf)
            };
            if cost < best {
                best = cost;
            }
            nodes += 1;
        }
        table[s as usize] = best;
    }

    let full = (size - 1) as u64;
    let mrb = table[full as usize] as usize;
    // Reconstruct one witness by walking parents, preferring small ids.
    let mut ordering_rev = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let bmask = buffered_mask(&masks, s);
        let mut chosen = None;
        let mut rest = s;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            rest &= !low;
            let o = low.trailing_zeros() as usize;
            let parent = s & !low;
            let parent_buf = ((bmask | rev[o]) & parent).count_ones() as u8;
            let cost = if bmask & low != 0 {
                table[parent as usize].max(parent_buf + 1)
            } else {
                table[parent as usize].max(parent_buf)
            };
            if cost == table[s as usize] {
                chosen = Some((o, parent));
                break;
            }
        }
        let (o, parent) = chosen.expect("table is consistent");
        ordering_rev.push(o + 1);
        s = parent;
    }
    ordering_rev.reverse();
    let plan = evaluate_ordering(g, &ordering_rev)?;
    debug_assert_eq!(plan.rb, mrb);
    Ok(SolveReport {
        schema: 1,
        setting: "labeled".into(),
        mrb,
        ordering: ordering_rev,
        plan: Plan::Labeled(plan.plan),
        nodes_expanded: nodes,
        elapsed: t0.elapsed().as_secs_f64(),
        status: SolveStatus::Solved,
    })
}

/// Candidate costs for each choice of last object moved within `subset`,
/// computed from the same recurrence as [`dp_lrbm`].
pub fn dp_table_candidates(
    g: &LabeledDepGraph,
    subset: &[usize],
) -> crate::Result<BTreeMap<usize, usize>> {
    if g.n > 20 {
        return Err(crate::Error::Capacity("candidate table wants n <= 20".into()));
    }
    let masks = g.dep_masks()?;
    let subset_mask: u64 = subset.iter().map(|&o| 1u64 << (o - 1)).sum();
    // Table over submasks of `subset_mask` only.
    let mut table: HashMap<u64, u8> = HashMap::new();
    table.insert(0, 0);
    // Enumerate submasks in increasing popcount via numeric order.
    let mut subs: Vec<u64> = {
        let mut v = Vec::new();
        let mut s = subset_mask;
        loop {
            v.push(s);
            if s == 0 {
                break;
            }
            s = (s - 1) & subset_mask;
        }
        v.sort_unstable();
        v
    };
    subs.retain(|&s| s != 0);
    for s in subs {
        let bmask = buffered_mask(&masks, s);
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            rest &= !low;
            let _o = low.trailing_zeros() as usize;
            let parent = s & !low;
            let parent_b = buffered_mask(&masks, parent).count_ones() as u8;
            let cost = if bmask & low != 0 {
                table[&parent].max(parent_b + 1)
            } else {
                table[&parent]
            };
            best = best.min(cost);
        }
        table.insert(s, best);
    }
    let bmask = buffered_mask(&masks, subset_mask);
    let mut out = BTreeMap::new();
    for &o in subset {
        let low = 1u64 << (o - 1);
        let parent = subset_mask & !low;
        let parent_b = buffered_mask(&masks, parent).count_ones() as usize;
        let cost = if bmask & low != 0 {
            (table[&parent] as usize).max(parent_b + 1)
        } else {
            table[&parent] as usize
        };
        out.insert(o, cost);
    }
    Ok(out)
}

/// Arbitrary-width subset, hashable for visited sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Bits(Box<[u64]>);

impl Bits {
    fn zero(n: usize) -> Self {
        Bits(vec![0u64; n.div_ceil(64)].into_boxed_slice())
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn union_count(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }
    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
    }
}

struct DfsCtx<'a> {
    deps: Vec<Vec<usize>>, // 0-based adjacency
    n: usize,
    rb: usize,
    visited: HashSet<Bits>,
    path: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
    _g: &'a LabeledDepGraph,
}

impl DfsCtx<'_> {
    /// Number of blocked (buffered) members of `s`.
    fn buffered_count(&self, s: &Bits) -> usize {
        (0..self.n)
            .filter(|&o| s.get(o) && self.deps[o].iter().any(|&d| !s.get(d)))
            .count()
    }

    fn dfs(&mut self, s: &mut Bits, moved: usize) -> bool {
        if moved == self.n {
            return true;
        }
        self.nodes += 1;
        if self.nodes % 4096 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
            return false;
        }
        let cur_buffered = self.buffered_count(s);
        // Free moves first, then ascending id.
        let mut order: Vec<usize> = Vec::new();
        let mut blocked: Vec<usize> = Vec::new();
        for o in 0..self.n {
            if s.get(o) {
                continue;
            }
            let is_blocked = self.deps[o].iter().any(|&d| d != o && !s.get(d)) && {
                // dependency unresolved only if the blocker is not o itself
                // (no self arcs exist) and still at its start after the move
                self.deps[o].iter().any(|&d| !s.get(d))
            };
            if is_blocked {
                blocked.push(o);
            } else {
                order.push(o);
            }
        }
        order.extend(blocked);
        for o in order {
            let to_buffer = self.deps[o].iter().any(|&d| !s.get(d));
            if to_buffer && cur_buffered + 1 > self.rb {
                continue;
            }
            s.set(o);
            if self.visited.contains(s) {
                s.clear(o);
                continue;
            }
            self.visited.insert(s.clone());
            self.path.push(o + 1);
            if self.dfs(s, moved + 1) {
                return true;
            }
            if self.timed_out {
                s.clear(o);
                return false;
            }
            self.path.pop();
            s.clear(o);
        }
        false
    }
}

/// Depth-first dynamic programming for labeled instances: iterate the budget
/// upward and depth-first search each decision problem.
pub fn dfdp(g: &LabeledDepGraph, time_limit: Duration) -> SolveReport {
    let t0 = Instant::now();
    let deadline = t0 + time_limit;
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for &(i, j) in &g.arcs {
        deps[i - 1].push(j - 1);
    }
    let mut total_nodes = 0u64;
    for rb in 0..=g.n {
        let mut ctx = DfsCtx {
            deps: deps.clone(),
            n: g.n,
            rb,
            visited: HashSet::new(),
            path: Vec::with_capacity(g.n),
            nodes: 0,
            deadline,
            timed_out: false,
            _g: g,
        };
        let mut root = Bits::zero(g.n);
        ctx.visited.insert(root.clone());
        let ok = ctx.dfs(&mut root, 0);
        total_nodes += ctx.nodes;
        if ctx.timed_out {
            return SolveReport::timed_out("labeled", total_nodes, t0.elapsed().as_secs_f64());
        }
        if ok {
            let ordering = ctx.path.clone();
            let plan = evaluate_ordering(g, &ordering).expect("dfs path is a permutation");
            debug_assert_eq!(plan.rb, rb);
            return SolveReport {
                schema: 1,
                setting: "labeled".into(),
                mrb: rb,
                ordering,
                plan: Plan::Labeled(plan.plan),
                nodes_expanded: total_nodes,
                elapsed: t0.elapsed().as_secs_f64(),
                status: SolveStatus::Solved,
            };
        }
    }
    unreachable!("budget n always admits a plan");
}

/// Goal-id indexing shared by the unlabeled solvers.
struct UnlabeledIdx {
    goals: Vec<usize>,
    starts: Vec<usize>,
    /// per goal, neighbor start indices (ascending)
    nbr: Vec<Vec<usize>>,
    /// per goal, neighbor starts as bits
    nbr_bits: Vec<Bits>,
}

impl UnlabeledIdx {
    fn new(g: &UnlabeledDepGraph) -> Self {
        let goals: Vec<usize> = g.goals.iter().copied().collect();
        let starts: Vec<usize> = g.starts.iter().copied().collect();
        let mut nbr = vec![Vec::new(); goals.len()];
        let mut nbr_bits = vec![Bits::zero(starts.len().max(1)); goals.len()];
        for &(s, gl) in &g.edges {
            let gi = goals.binary_search(&gl).expect("goal id");
            let si = starts.binary_search(&s).expect("start id");
            nbr[gi].push(si);
            nbr_bits[gi].set(si);
        }
        UnlabeledIdx {
            goals,
            starts,
            nbr,
            nbr_bits,
        }
    }

    fn uncleared_degree(&self, gi: usize, cleared: &Bits) -> usize {
        self.nbr[gi].iter().filter(|&&si| !cleared.get(si)).count()
    }
}

/// Budget-iteration depth-first search for the unlabeled setting. States are
/// sets of removed goal vertices; occupancy is `max(0, |N(g)| - |g|)`.
pub fn dfdp_unlabeled(g: &UnlabeledDepGraph, time_limit: Duration) -> SolveReport {
    let t0 = Instant::now();
    let deadline = t0 + time_limit;
    let idx = UnlabeledIdx::new(g);
    let k = idx.goals.len();
    let mut total_nodes = 0u64;

    struct Ctx<'a> {
        idx: &'a UnlabeledIdx,
        rb: usize,
        visited: HashSet<Bits>,
        seq: Vec<usize>,
        nodes: u64,
        deadline: Instant,
        timed_out: bool,
    }
    impl Ctx<'_> {
        fn dfs(&mut self, removed: &mut Bits, cleared: &mut Bits, nremoved: usize) -> bool {
            let k = self.idx.goals.len();
            if nremoved == k {
                return true;
            }
            self.nodes += 1;
            if self.nodes % 4096 == 0 && Instant::now() >= self.deadline {
                self.timed_out = true;
                return false;
            }
            let mut free: Vec<usize> = Vec::new();
            let mut rest: Vec<usize> = Vec::new();
            for gi in 0..k {
                if removed.get(gi) {
                    continue;
                }
                if self.idx.uncleared_degree(gi, cleared) <= 1 {
                    free.push(gi);
                } else {
                    rest.push(gi);
                }
            }
            free.extend(rest);
            for gi in free {
                let occ_after = cleared
                    .union_count(&self.idx.nbr_bits[gi])
                    .saturating_sub(nremoved + 1);
                if occ_after > self.rb {
                    continue;
                }
                removed.set(gi);
                if self.visited.contains(removed) {
                    removed.clear(gi);
                    continue;
                }
                self.visited.insert(removed.clone());
                let saved = cleared.clone();
                cleared.or_assign(&self.idx.nbr_bits[gi]);
                self.seq.push(self.idx.goals[gi]);
                if self.dfs(removed, cleared, nremoved + 1) {
                    return true;
                }
                self.seq.pop();
                *cleared = saved;
                removed.clear(gi);
                if self.timed_out {
                    return false;
                }
            }
            false
        }
    }

    for rb in 0..=idx.starts.len().max(1) {
        let mut ctx = Ctx {
            idx: &idx,
            rb,
            visited: HashSet::new(),
            seq: Vec::with_capacity(k),
            nodes: 0,
            deadline,
            timed_out: false,
        };
        let mut removed = Bits::zero(k.max(1));
        let mut cleared = Bits::zero(idx.starts.len().max(1));
        ctx.visited.insert(removed.clone());
        let ok = ctx.dfs(&mut removed, &mut cleared, 0);
        total_nodes += ctx.nodes;
        if ctx.timed_out {
            return SolveReport::timed_out("unlabeled", total_nodes, t0.elapsed().as_secs_f64());
        }
        if ok {
            let seq = ctx.seq.clone();
            let replay = replay_goal_sequence(g, &seq, true).expect("dfs sequence is valid");
            debug_assert_eq!(replay.peak, rb);
            return SolveReport {
                schema: 1,
                setting: "unlabeled".into(),
                mrb: rb,
                ordering: seq,
                plan: Plan::Unlabeled(replay.actions),
                nodes_expanded: total_nodes,
                elapsed: t0.elapsed().as_secs_f64(),
                status: SolveStatus::Solved,
            };
        }
    }
    unreachable!("budget |starts| always admits a sequence");
}

/// Goals removable for free right now: at most one uncleared neighbor.
pub fn free_goals(
    g: &UnlabeledDepGraph,
    cleared_starts: &BTreeSet<usize>,
    removed_goals: &BTreeSet<usize>,
) -> Vec<usize> {
    g.goals
        .iter()
        .copied()
        .filter(|gl| !removed_goals.contains(gl))
        .filter(|&gl| {
            g.goal_neighbors(gl)
                .iter()
                .filter(|s| !cleared_starts.contains(s))
                .count()
                <= 1
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
struct PqsNode {
    mrb: usize,
    removed_count: usize,
    removed: Bits,
    cleared: Bits,
    seq: Vec<usize>,
}

impl Ord for PqsNode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap via BinaryHeap<Reverse<...>>: smaller mrb first, then more
        // goals removed, then lexicographically smaller removed-set.
        self.mrb
            .cmp(&other.mrb)
            .then(other.removed_count.cmp(&self.removed_count))
            .then(self.removed.cmp(&other.removed))
    }
}
impl PartialOrd for PqsNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first search over key states (no free goals) of the unlabeled problem.
pub fn pqs_urbm(g: &UnlabeledDepGraph, time_limit: Duration) -> SolveReport {
    let t0 = Instant::now();
    let deadline = t0 + time_limit;
    let idx = UnlabeledIdx::new(g);
    let k = idx.goals.len();

    // Remove free goals (ascending id) until none remain; returns the peak
    // occupancy reached while doing so.
    let eager_closure = |removed: &mut Bits, cleared: &mut Bits, seq: &mut Vec<usize>| -> usize {
        let mut peak = 0usize;
        loop {
            let mut progressed = false;
            for gi in 0..k {
                if removed.get(gi) {
                    continue;
                }
                if idx.uncleared_degree(gi, cleared) <= 1 {
                    removed.set(gi);
                    cleared.or_assign(&idx.nbr_bits[gi]);
                    seq.push(idx.goals[gi]);
                    peak = peak.max(cleared.count().saturating_sub(removed.count()));
                    progressed = true;
                }
            }
            if !progressed {
                return peak;
            }
        }
    };

    let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<PqsNode>> =
        std::collections::BinaryHeap::new();
    let mut best_seen: HashMap<Bits, usize> = HashMap::new();
    let mut nodes = 0u64;

    let mut root = PqsNode {
        mrb: 0,
        removed_count: 0,
        removed: Bits::zero(k.max(1)),
        cleared: Bits::zero(idx.starts.len().max(1)),
        seq: Vec::new(),
    };
    root.mrb = eager_closure(&mut root.removed, &mut root.cleared, &mut root.seq);
    root.removed_count = root.removed.count();
    best_seen.insert(root.removed.clone(), root.mrb);
    heap.push(std::cmp::Reverse(root));

    while let Some(std::cmp::Reverse(node)) = heap.pop() {
        nodes += 1;
        if nodes % 1024 == 0 && Instant::now() >= deadline {
            return SolveReport::timed_out("unlabeled", nodes, t0.elapsed().as_secs_f64());
        }
        if node.removed_count == k {
            let replay = replay_goal_sequence(g, &node.seq, true).expect("valid sequence");
            debug_assert_eq!(replay.peak, node.mrb);
            return SolveReport {
                schema: 1,
                setting: "unlabeled".into(),
                mrb: node.mrb,
                ordering: node.seq,
                plan: Plan::Unlabeled(replay.actions),
                nodes_expanded: nodes,
                elapsed: t0.elapsed().as_secs_f64(),
                status: SolveStatus::Solved,
            };
        }
        if best_seen.get(&node.removed).is_some_and(|&b| b < node.mrb) {
            continue;
        }
        for gi in 0..k {
            if node.removed.get(gi) {
                continue;
            }
            let mut child = node.clone();
            child.removed.set(gi);
            child.cleared.or_assign(&idx.nbr_bits[gi]);
            child.seq.push(idx.goals[gi]);
            let mut peak = child
                .cleared
                .count()
                .saturating_sub(child.removed.count());
            peak = peak.max(eager_closure(
                &mut child.removed,
                &mut child.cleared,
                &mut child.seq,
            ));
            child.mrb = node.mrb.max(peak);
            child.removed_count = child.removed.count();
            match best_seen.get(&child.removed) {
                Some(&b) if b <= child.mrb => continue,
                _ => {
                    best_seen.insert(child.removed.clone(), child.mrb);
                    heap.push(std::cmp::Reverse(child));
                }
            }
        }
    }
    // Empty goal set: solved immediately above unless k > 0 and the heap ran
    // dry, which cannot happen because every goal is always removable.
    let replay = replay_goal_sequence(g, &[], true).expect("empty");
    SolveReport {
        schema: 1,
        setting: "unlabeled".into(),
        mrb: 0,
        ordering: Vec::new(),
        plan: Plan::Unlabeled(replay.actions),
        nodes_expanded: nodes,
        elapsed: t0.elapsed().as_secs_f64(),
        status: SolveStatus::Solved,
    }
}

/// Expand a labeled witness ordering into the explicit action plan.
pub fn plan_from_witness(
    g: &LabeledDepGraph,
    witness: &[usize],
) -> crate::Result<RearrangementPlan> {
    Ok(evaluate_ordering(g, witness)?.plan)
}

/// Replay of a goal sequence into explicit actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnlabeledReplay {
    pub actions: Vec<UnlabeledAction>,
    /// Peak number of simultaneously buffered objects.
    pub peak: usize,
    /// Signed occupancy after each removal: buffered count, or minus the
    /// number of standing empty goals.
    pub trace: Vec<i64>,
}

/// Replay a goal sequence. Clearing a start sends its object to a standing
/// empty goal when one exists, else to the lowest free buffer slot; the last
/// blocker of the goal being processed goes directly onto that goal. With
/// `cleanup`, objects still at starts or buffers move onto the remaining empty
/// goals at the end (ascending), completing the plan.
pub fn replay_goal_sequence(
    g: &UnlabeledDepGraph,
    seq: &[usize],
    cleanup: bool,
) -> crate::Result<UnlabeledReplay> {
    let mut remaining: BTreeSet<usize> = g.goals.clone();
    for &q in seq {
        if !remaining.remove(&q) {
            return Err(crate::Error::InvalidInput(format!(
                "goal {q} repeated or unknown in sequence"
            )));
        }
    }
    if !remaining.is_empty() {
        return Err(crate::Error::InvalidInput(format!(
            "sequence misses {} goal(s)",
            remaining.len()
        )));
    }

    let mut cleared: BTreeSet<usize> = BTreeSet::new();
    let mut available: BTreeSet<usize> = BTreeSet::new();
    let mut buffered: BTreeMap<usize, usize> = BTreeMap::new(); // object -> slot
    let mut free_slots: BTreeSet<usize> = BTreeSet::new();
    let mut next_slot = 0usize;
    let mut actions = Vec::new();
    let mut peak = 0usize;
    let mut trace = Vec::with_capacity(seq.len());

    for &q in seq {
        let blockers: Vec<usize> = g
            .goal_neighbors(q)
            .into_iter()
            .filter(|s| !cleared.contains(s))
            .collect();
        if blockers.is_empty() {
            available.insert(q);
        } else {
            for (pos, &s) in blockers.iter().enumerate() {
                cleared.insert(s);
                if pos + 1 == blockers.len() {
                    actions.push(UnlabeledAction {
                        object: s,
                        mv: UnlabeledMove::ToGoal { goal: q },
                    });
                } else if let Some(&a) = available.iter().next() {
                    available.remove(&a);
                    actions.push(UnlabeledAction {
                        object: s,
                        mv: UnlabeledMove::ToGoal { goal: a },
                    });
                } else {
                    let slot = free_slots.iter().next().copied().unwrap_or_else(|| {
                        let t = next_slot;
                        next_slot += 1;
                        t
                    });
                    free_slots.remove(&slot);
                    buffered.insert(s, slot);
                    peak = peak.max(buffered.len());
                    actions.push(UnlabeledAction {
                        object: s,
                        mv: UnlabeledMove::ToBuffer { slot },
                    });
                }
            }
        }
        trace.push(buffered.len() as i64 - available.len() as i64);
    }

    if cleanup {
        let standing: Vec<usize> = g
            .starts
            .iter()
            .copied()
            .filter(|s| !cleared.contains(s))
            .collect();
        for s in standing {
            let Some(&a) = available.iter().next() else {
                return Err(crate::Error::InvalidInput(
                    "sequence leaves more objects than empty goals".into(),
                ));
            };
            available.remove(&a);
            cleared.insert(s);
            actions.push(UnlabeledAction {
                object: s,
                mv: UnlabeledMove::ToGoal { goal: a },
            });
        }
        let parked: Vec<(usize, usize)> = buffered.iter().map(|(&o, &s)| (o, s)).collect();
        for (o, slot) in parked {
            let Some(&a) = available.iter().next() else {
                return Err(crate::Error::InvalidInput(
                    "buffered objects outnumber empty goals".into(),
                ));
            };
            available.remove(&a);
            buffered.remove(&o);
            free_slots.insert(slot);
            actions.push(UnlabeledAction {
                object: o,
                mv: UnlabeledMove::BufferToGoal { slot, goal: a },
            });
        }
    }

    Ok(UnlabeledReplay {
        actions,
        peak,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depgraph::{random_bipartite, random_labeled};
    use crate::instances::fixtures;
    use crate::oracle;

    fn tl() -> Duration {
        Duration::from_secs(60)
    }

    #[test]
    fn dp_solves_the_seven_disc_example() {
        let g = fixtures::seven_discs().labeled_graph().unwrap();
        let r = dp_lrbm(&g).unwrap();
        assert_eq!(r.mrb, 2);
        assert_eq!(evaluate_ordering(&g, &r.ordering).unwrap().rb, 2);
    }

    #[test]
    fn dp_candidate_table_matches_worked_values() {
        let g = fixtures::seven_discs().labeled_graph().unwrap();
        let cands = dp_table_candidates(&g, &[2, 5, 6]).unwrap();
        assert_eq!(cands[&2], 2);
        assert_eq!(cands[&5], 3);
        assert_eq!(cands[&6], 2);
    }

    #[test]
    fn dp_edgeless_is_zero() {
        let g = LabeledDepGraph::edgeless(6);
        assert_eq!(dp_lrbm(&g).unwrap().mrb, 0);
    }

    #[test]
    fn dp_cap_is_enforced() {
        let g = LabeledDepGraph::edgeless(10);
        assert!(matches!(
            dp_lrbm_capped(&g, 8),
            Err(crate::Error::Capacity(_))
        ));
    }

    #[test]
    fn dfdp_matches_dp_and_handles_worked_cases() {
        let fig2 = fixtures::seven_discs().labeled_graph().unwrap();
        assert_eq!(dfdp(&fig2, tl()).mrb, 2);

        // complete bidirectional graph on 6 vertices: all but one object wait.
        let k6 = crate::depgraph::random_undirected(6, 1.1, 0).bidirectional();
        assert_eq!(dfdp(&k6, tl()).mrb, 5);

        let fig4 = fixtures::three_two_cycles().labeled_graph().unwrap();
        assert_eq!(dfdp(&fig4, tl()).mrb, 1);
    }

    #[test]
    fn labeled_solvers_agree_with_oracle_on_random_graphs() {
        for seed in 0..40 {
            let n = 2 + (seed as usize % 7);
            let g = random_labeled(n, 0.15 + 0.05 * (seed % 6) as f64, 1000 + seed);
            let want = oracle::mrb_labeled_exhaustive(&g, 10).unwrap().value;
            assert_eq!(dp_lrbm(&g).unwrap().mrb, want, "dp seed {seed}");
            let r = dfdp(&g, tl());
            assert_eq!(r.mrb, want, "dfdp seed {seed}");
            assert_eq!(evaluate_ordering(&g, &r.ordering).unwrap().rb, want);
        }
    }

    #[test]
    fn unlabeled_solvers_agree_with_oracle_on_random_graphs() {
        for seed in 0..40 {
            let k = 2 + (seed as usize % 6);
            let g = random_bipartite(k, 0.2 + 0.06 * (seed % 5) as f64, 2000 + seed);
            let want = oracle::mrb_unlabeled_exhaustive(&g, 9).unwrap().value;
            let a = dfdp_unlabeled(&g, tl());
            let b = pqs_urbm(&g, tl());
            assert_eq!(a.mrb, want, "dfdp_unlabeled seed {seed}");
            assert_eq!(b.mrb, want, "pqs seed {seed}");
            let ra = replay_goal_sequence(&g, &a.ordering, true).unwrap();
            assert_eq!(ra.peak, want);
        }
    }

    #[test]
    fn pqs_free_goal_cascade_on_the_seven_disc_instance() {
        // Removing goal 5 from the key state (after stripping the isolated
        // goal 1) frees goals 2 and 4 at once and goal 3 in the cascade that
        // follows; all three were blocked before.
        let f = fixtures::seven_discs();
        let g = f.unlabeled_graph().unwrap();
        let mut cleared: BTreeSet<usize> = BTreeSet::new();
        let mut removed: BTreeSet<usize> = BTreeSet::new();
        // initial eager pass removes exactly goal 1
        assert_eq!(free_goals(&g, &cleared, &removed), vec![1]);
        removed.insert(1);
        assert!(free_goals(&g, &cleared, &removed).is_empty());
        // remove goal 5 and run the eager cascade, tracking what gets freed
        removed.insert(5);
        for s in g.goal_neighbors(5) {
            cleared.insert(s);
        }
        let mut freed: Vec<usize> = Vec::new();
        loop {
            let now = free_goals(&g, &cleared, &removed);
            if now.is_empty() {
                break;
            }
            for q in now {
                freed.push(q);
                removed.insert(q);
                for s in g.goal_neighbors(q) {
                    cleared.insert(s);
                }
            }
        }
        for want in [2, 3, 4] {
            assert!(freed.contains(&want), "goal {want} should be freed: {freed:?}");
        }
    }

    #[test]
    fn pqs_edgeless_takes_goals_in_id_order() {
        let g = UnlabeledDepGraph::new([1, 2, 3], [1, 2, 3], []).unwrap();
        let r = pqs_urbm(&g, tl());
        assert_eq!(r.mrb, 0);
        assert_eq!(r.ordering, vec![1, 2, 3]);
    }

    #[test]
    fn grid_instances_cross_check_between_solvers() {
        for m in [2usize, 3] {
            let inst = crate::instances::dependency_grid_instance(m).unwrap();
            let g = inst.unlabeled_graph().unwrap();
            let a = dfdp_unlabeled(&g, tl());
            let b = pqs_urbm(&g, tl());
            assert_eq!(a.mrb, b.mrb, "grid m={m}");
            if m == 2 {
                let want = oracle::mrb_unlabeled_exhaustive(&g, 9).unwrap().value;
                assert_eq!(a.mrb, want);
            }
        }
    }

    #[test]
    fn witness_plans_have_consistent_structure() {
        let fig1 = fixtures::three_cans().labeled_graph().unwrap();
        let r = dfdp(&fig1, tl());
        assert_eq!(r.mrb, 1);
        let Plan::Labeled(plan) = &r.plan else {
            panic!("labeled plan expected")
        };
        assert_eq!(plan.actions.len(), 4);
        assert_eq!(plan.buffered_objects().len(), 1);
    }

    #[test]
    fn replay_detects_bad_sequences() {
        let g = random_bipartite(3, 0.5, 1);
        assert!(replay_goal_sequence(&g, &[1, 1, 2], true).is_err());
        assert!(replay_goal_sequence(&g, &[1], true).is_err());
    }

    #[test]
    fn mrb_is_bounded_by_mfvs_and_unlabeled_by_labeled() {
        use crate::geometry::validate_arrangement;
        for seed in 0..12 {
            let g = random_labeled(6, 0.25, 577 + seed);
            let mrb = dp_lrbm(&g).unwrap().mrb;
            let mfvs = oracle::mfvs_exhaustive(&g, 16).unwrap().value;
            assert!(mrb <= mfvs, "seed {seed}: mrb {mrb} > mfvs {mfvs}");
        }
        // unlabeled relaxation never needs more buffers than any labeling
        for seed in 0..8 {
            let cfg = crate::instances::GeneratorConfig::discs(
                6,
                0.25,
                900 + seed,
                crate::instances::Labeling::Random,
            );
            let inst = crate::instances::random_instance(&cfg).unwrap();
            assert!(validate_arrangement(&inst.start_arrangement(), true).is_empty());
            let lab = inst.labeled_graph().unwrap();
            let unl = inst.unlabeled_graph().unwrap();
            let l = oracle::mrb_labeled_exhaustive(&lab, 10).unwrap().value;
            let u = oracle::mrb_unlabeled_exhaustive(&unl, 9).unwrap().value;
            assert!(u <= l, "seed {seed}: unlabeled {u} > labeled {l}");
        }
    }

    #[test]
    fn lemma_sandwich_holds_for_all_orderings_of_small_graphs() {
        use crate::depgraph::{random_undirected, vertex_separation};
        for seed in 0..12 {
            let ug = random_undirected(5, 0.4, 30 + seed);
            let bi = ug.bidirectional();
            let masks = bi.dep_masks().unwrap();
            let mut perm: Vec<usize> = (1..=5).collect();
            let heap_all = {
                let mut all = Vec::new();
                permutohedron_heap(&mut perm, &mut all);
                all
            };
            for phi in heap_all {
                let vs = vertex_separation(&ug, &phi).unwrap();
                let rb = oracle::rb_of_ordering(&masks, &phi);
                assert!(vs <= rb && rb <= vs + 1, "phi {phi:?}: vs {vs}, rb {rb}");
            }
        }
    }

    fn permutohedron_heap(items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = items.len();
        let mut c = vec![0usize; n];
        out.push(items.clone());
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    items.swap(0, i);
                } else {
                    items.swap(c[i], i);
                }
                out.push(items.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    }
}
