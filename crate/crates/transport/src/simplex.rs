//! Exact transportation solver: primal network simplex on integer supplies
//! and integer costs, with column generation for large sparse instances and
//! a full dual-feasibility certificate over every source-target pair, so the
//! restricted solve is always verified against the complete bipartite graph.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// Solved flow with solver counters.
pub(crate) struct TransportSolution {
    pub flows: Vec<(u32, u32, i64)>,
    pub pivots: u64,
    pub rounds: u32,
    pub arcs: usize,
}

const STATE_TREE: i8 = 0;
const STATE_LOWER: i8 = 1;

struct Simplex {
    arc_src: Vec<u32>,
    arc_tgt: Vec<u32>,
    arc_cost: Vec<i64>,
    arc_flow: Vec<i64>,
    arc_state: Vec<i8>,
    parent: Vec<i64>,
    pred: Vec<u32>,
    fwd: Vec<bool>,
    depth: Vec<u32>,
    pot: Vec<i64>,
    children: Vec<Vec<u32>>,
    /// Index of each node inside its parent's `children` list, so detaching
    /// a child is O(1) instead of a scan (the root starts with every node in
    /// its list, which a scan would make quadratic).
    child_pos: Vec<u32>,
    /// Cyclic pricing cursor, kept across optimization passes so appended
    /// arcs do not reset the sweep.
    next_arc: usize,
    pivots: u64,
}

impl Simplex {
    /// Star-shaped initial basis: every node hangs off an artificial root by
    /// an arc of prohibitive cost carrying its full imbalance.
    fn new(balances: &[i64], arcs: &[(u32, u32, i64)], big: i64) -> Self {
        let v = balances.len();
        let root = v;
        let total_nodes = v + 1;
        let real = arcs.len();
        let mut arc_src = Vec::with_capacity(real + v);
        let mut arc_tgt = Vec::with_capacity(real + v);
        let mut arc_cost = Vec::with_capacity(real + v);
        for &(s, t, c) in arcs {
            arc_src.push(s);
            arc_tgt.push(t);
            arc_cost.push(c);
        }
        let mut arc_flow = vec![0i64; real];
        let mut arc_state = vec![STATE_LOWER; real];
        let mut parent = vec![-1i64; total_nodes];
        let mut pred = vec![u32::MAX; total_nodes];
        let mut fwd = vec![false; total_nodes];
        let mut depth = vec![0u32; total_nodes];
        let mut pot = vec![0i64; total_nodes];
        let mut children = vec![Vec::new(); total_nodes];
        let mut child_pos = vec![0u32; total_nodes];
        for (node, &b) in balances.iter().enumerate() {
            let arc_id = (real + node) as u32;
            if b >= 0 {
                arc_src.push(node as u32);
                arc_tgt.push(root as u32);
                arc_flow.push(b);
                fwd[node] = true;
                pot[node] = big;
            } else {
                arc_src.push(root as u32);
                arc_tgt.push(node as u32);
                arc_flow.push(-b);
                fwd[node] = false;
                pot[node] = -big;
            }
            arc_cost.push(big);
            arc_state.push(STATE_TREE);
            parent[node] = root as i64;
            pred[node] = arc_id;
            depth[node] = 1;
            child_pos[node] = children[root].len() as u32;
            children[root].push(node as u32);
        }
        Self {
            arc_src,
            arc_tgt,
            arc_cost,
            arc_flow,
            arc_state,
            parent,
            pred,
            fwd,
            depth,
            pot,
            children,
            child_pos,
            next_arc: 0,
            pivots: 0,
        }
    }

    fn attach_child(&mut self, parent: usize, child: u32) {
        self.child_pos[child as usize] = self.children[parent].len() as u32;
        self.children[parent].push(child);
    }

    fn detach_child(&mut self, parent: usize, child: u32) {
        let i = self.child_pos[child as usize] as usize;
        let list = &mut self.children[parent];
        debug_assert_eq!(list[i], child);
        list.swap_remove(i);
        if i < list.len() {
            let moved = list[i];
            self.child_pos[moved as usize] = i as u32;
        }
    }

    fn reduced(&self, a: usize) -> i64 {
        self.arc_cost[a] - self.pot[self.arc_src[a] as usize] + self.pot[self.arc_tgt[a] as usize]
    }

    /// Cyclic block search: return the most negative reduced-cost arc of the
    /// first block that contains one.
    fn find_entering(&self, next_arc: &mut usize, block: usize) -> Option<usize> {
        let m = self.arc_state.len();
        let mut scanned = 0usize;
        let mut best = 0i64;
        let mut best_arc = None;
        let mut a = *next_arc;
        while scanned < m {
            let stop = (scanned + block).min(m);
            while scanned < stop {
                if self.arc_state[a] == STATE_LOWER {
                    let r = self.reduced(a);
                    if r < best {
                        best = r;
                        best_arc = Some(a);
                    }
                }
                a += 1;
                if a == m {
                    a = 0;
                }
                scanned += 1;
            }
            if best_arc.is_some() {
                *next_arc = a;
                return best_arc;
            }
        }
        None
    }

    fn join_of(&self, mut u: usize, mut w: usize) -> usize {
        while self.depth[u] > self.depth[w] {
            u = self.parent[u] as usize;
        }
        while self.depth[w] > self.depth[u] {
            w = self.parent[w] as usize;
        }
        while u != w {
            u = self.parent[u] as usize;
            w = self.parent[w] as usize;
        }
        u
    }

    fn pivot(&mut self, e: usize) -> Result<()> {
        self.pivots += 1;
        let first = self.arc_src[e] as usize;
        let second = self.arc_tgt[e] as usize;
        let join = self.join_of(first, second);
        // Flow delta is limited by the arcs the cycle traverses against
        // their direction; ties resolve toward the second path, which keeps
        // the basis strongly feasible.
        let mut delta = i64::MAX;
        let mut out_node = usize::MAX;
        let mut out_on_first_path = true;
        let mut w = first;
        while w != join {
            let room = if self.fwd[w] { self.arc_flow[self.pred[w] as usize] } else { i64::MAX };
            if room < delta {
                delta = room;
                out_node = w;
                out_on_first_path = true;
            }
            w = self.parent[w] as usize;
        }
        w = second;
        while w != join {
            let room = if self.fwd[w] { i64::MAX } else { self.arc_flow[self.pred[w] as usize] };
            if room <= delta {
                delta = room;
                out_node = w;
                out_on_first_path = false;
            }
            w = self.parent[w] as usize;
        }
        if out_node == usize::MAX {
            return Err(Error::SolverStall("unbounded pivot cycle"));
        }
        if delta > 0 {
            self.arc_flow[e] += delta;
            let mut w = first;
            while w != join {
                let a = self.pred[w] as usize;
                if self.fwd[w] {
                    self.arc_flow[a] -= delta;
                } else {
                    self.arc_flow[a] += delta;
                }
                w = self.parent[w] as usize;
            }
            w = second;
            while w != join {
                let a = self.pred[w] as usize;
                if self.fwd[w] {
                    self.arc_flow[a] += delta;
                } else {
                    self.arc_flow[a] -= delta;
                }
                w = self.parent[w] as usize;
            }
        }
        let e_out = self.pred[out_node] as usize;
        debug_assert_eq!(self.arc_flow[e_out], 0);
        // Splice the subtree that lost its tree arc and hang it from the
        // entering arc, re-rooted at the entering endpoint inside it.
        let w_in = if out_on_first_path { first } else { second };
        let w_out = if out_on_first_path { second } else { first };
        let old_parent = self.parent[out_node] as usize;
        self.detach_child(old_parent, out_node as u32);
        let mut path = Vec::new();
        let mut p = w_in;
        while p != out_node {
            path.push(p);
            p = self.parent[p] as usize;
        }
        path.push(out_node);
        for i in (0..path.len() - 1).rev() {
            let lower = path[i];
            let upper = path[i + 1];
            self.detach_child(upper, lower as u32);
            self.attach_child(lower, upper as u32);
            self.parent[upper] = lower as i64;
            self.pred[upper] = self.pred[lower];
            self.fwd[upper] = !self.fwd[lower];
        }
        self.parent[w_in] = w_out as i64;
        self.pred[w_in] = e as u32;
        self.fwd[w_in] = self.arc_src[e] as usize == w_in;
        self.attach_child(w_out, w_in as u32);
        self.arc_state[e] = STATE_TREE;
        self.arc_state[e_out] = STATE_LOWER;
        // Depths and potentials of the spliced subtree follow from the tree
        // relation reduced cost = 0 on basic arcs.
        let mut stack = vec![w_in];
        while let Some(node) = stack.pop() {
            let par = self.parent[node] as usize;
            let a = self.pred[node] as usize;
            self.depth[node] = self.depth[par] + 1;
            self.pot[node] = if self.fwd[node] {
                self.arc_cost[a] + self.pot[par]
            } else {
                self.pot[par] - self.arc_cost[a]
            };
            for &c in &self.children[node] {
                stack.push(c as usize);
            }
        }
        Ok(())
    }

    /// Append a non-basic arc (used when column generation grows the
    /// instance between optimization passes; the current basis stays valid).
    fn push_arc(&mut self, src: u32, tgt: u32, cost: i64) {
        self.arc_src.push(src);
        self.arc_tgt.push(tgt);
        self.arc_cost.push(cost);
        self.arc_flow.push(0);
        self.arc_state.push(STATE_LOWER);
    }

    fn run(&mut self, pivot_cap: u64) -> Result<()> {
        let m = self.arc_state.len();
        let block = ((m as f64).sqrt() as usize).clamp(64, 16384).min(m.max(1));
        let mut next_arc = self.next_arc.min(m.saturating_sub(1));
        while let Some(e) = self.find_entering(&mut next_arc, block) {
            self.pivot(e)?;
            if self.pivots > pivot_cap {
                return Err(Error::SolverStall("pivot budget exhausted"));
            }
        }
        self.next_arc = next_arc;
        Ok(())
    }
}

/// Exact min-cost transportation between integer supplies and demands.
///
/// Instances with at most `DENSE_ARC_LIMIT` pairs are solved over the full
/// bipartite graph. Larger instances start from the cheapest arcs per source
/// (plus one per target), solve the restricted problem, and repeat with every
/// pair whose reduced cost certifies a violation until none remain; the final
/// pass over all pairs is a proof of global optimality.
pub(crate) fn solve_transport(
    supplies: &[i64],
    demands: &[i64],
    cost: &dyn Fn(usize, usize) -> i64,
    max_cost: i64,
) -> Result<TransportSolution> {
    solve_transport_with_limit(supplies, demands, cost, max_cost, DENSE_ARC_LIMIT)
}

const DENSE_ARC_LIMIT: usize = 262_144;

pub(crate) fn solve_transport_with_limit(
    supplies: &[i64],
    demands: &[i64],
    cost: &dyn Fn(usize, usize) -> i64,
    max_cost: i64,
    dense_limit: usize,
) -> Result<TransportSolution> {
    let n = supplies.len();
    let m = demands.len();
    if n == 0 || m == 0 {
        return Err(Error::EmptyMeasure);
    }
    let total_supply: i64 = supplies.iter().sum();
    let total_demand: i64 = demands.iter().sum();
    if total_supply != total_demand {
        return Err(Error::SolverStall("unbalanced integer supplies"));
    }
    let mut balances = Vec::with_capacity(n + m);
    balances.extend_from_slice(supplies);
    balances.extend(demands.iter().map(|&d| -d));
    let big = max_cost
        .max(1)
        .checked_mul((n + m + 1) as i64)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::SolverStall("cost scale overflow"))?;

    let dense = n * m <= dense_limit;
    let mut arc_set: HashSet<u64> = HashSet::new();
    let mut arcs: Vec<(u32, u32, i64)> = Vec::new();
    let push_seed = |arcs: &mut Vec<(u32, u32, i64)>, set: &mut HashSet<u64>, i: usize, j: usize| {
        let key = (i as u64) * m as u64 + j as u64;
        if set.insert(key) {
            arcs.push((i as u32, (n + j) as u32, cost(i, j)));
        }
    };
    if dense {
        for i in 0..n {
            for j in 0..m {
                push_seed(&mut arcs, &mut arc_set, i, j);
            }
        }
    } else {
        let mut scratch: Vec<(i64, usize)> = Vec::with_capacity(m);
        for (i, &supply) in supplies.iter().enumerate() {
            let spread = (supply * m as i64 + total_supply - 1) / total_supply.max(1);
            let k = (2 * spread + 24).min(m as i64) as usize;
            scratch.clear();
            scratch.extend((0..m).map(|j| (cost(i, j), j)));
            scratch.select_nth_unstable(k - 1);
            for &(_, j) in scratch.iter().take(k) {
                push_seed(&mut arcs, &mut arc_set, i, j);
            }
        }
        for j in 0..m {
            let best = (0..n).min_by_key(|&i| cost(i, j)).expect("n > 0");
            push_seed(&mut arcs, &mut arc_set, best, j);
        }
    }
    arcs.sort_unstable();

    // The simplex state persists across generation rounds: appended arcs
    // enter as non-basic, the optimal basis of the previous round stays
    // valid, and each re-optimization only repairs the new violations.
    let seeded = arcs.len();
    let artificial = seeded..seeded + balances.len();
    let mut simplex = Simplex::new(&balances, &arcs, big);
    let mut rounds = 0u32;
    // At most this many violating pairs join per source and per round; the
    // full scan below still proves optimality, so the bound only paces the
    // growth of the working arc set.
    const BATCH_PER_SOURCE: usize = 32;
    loop {
        rounds += 1;
        if rounds > 10_000 {
            return Err(Error::SolverStall("column generation did not close"));
        }
        let pivot_cap = 10_000
            + 50 * (simplex.arc_state.len() as u64 + balances.len() as u64);
        simplex.run(pivot_cap)?;
        let artificial_flow: i64 = simplex.arc_flow[artificial.clone()].iter().sum();
        // Full dual-feasibility scan over every pair: optimality over the
        // complete bipartite graph is certified, never assumed.
        let mut batch: Vec<(usize, usize)> = Vec::new();
        let mut violating = false;
        if !dense {
            let mut per_source: Vec<(i64, usize)> = Vec::with_capacity(BATCH_PER_SOURCE + 1);
            for i in 0..n {
                let pot_i = simplex.pot[i];
                per_source.clear();
                for j in 0..m {
                    let reduced = cost(i, j) - pot_i + simplex.pot[n + j];
                    if reduced < 0 {
                        violating = true;
                        let key = (i as u64) * m as u64 + j as u64;
                        if arc_set.contains(&key) {
                            continue;
                        }
                        per_source.push((reduced, j));
                        if per_source.len() > BATCH_PER_SOURCE {
                            // Keep the most negative entries only.
                            per_source.sort_unstable();
                            per_source.truncate(BATCH_PER_SOURCE);
                        }
                    }
                }
                for &(_, j) in &per_source {
                    batch.push((i, j));
                }
            }
        }
        if !violating && artificial_flow == 0 {
            let mut flows = Vec::new();
            for a in 0..simplex.arc_state.len() {
                if artificial.contains(&a) {
                    continue;
                }
                if simplex.arc_flow[a] > 0 {
                    flows.push((
                        simplex.arc_src[a],
                        simplex.arc_tgt[a] - n as u32,
                        simplex.arc_flow[a],
                    ));
                }
            }
            flows.sort_unstable();
            return Ok(TransportSolution {
                flows,
                pivots: simplex.pivots,
                rounds,
                arcs: simplex.arc_state.len() - balances.len(),
            });
        }
        if !violating {
            return Err(Error::SolverStall("no feasible flow without artificial arcs"));
        }
        for &(i, j) in &batch {
            let key = (i as u64) * m as u64 + j as u64;
            if arc_set.insert(key) {
                simplex.push_arc(i as u32, (n + j) as u32, cost(i, j));
            }
        }
    }
}

/// Round nonnegative weights to integers summing exactly to `total_units`
/// by largest remainders; ties break toward lower indices.
pub(crate) fn scale_weights(weights: &[f64], total_units: i64) -> Vec<i64> {
    let mut units: Vec<i64> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(f64, usize)> = Vec::with_capacity(weights.len());
    let mut assigned = 0i64;
    for (i, &w) in weights.iter().enumerate() {
        let raw = w * total_units as f64;
        let base = raw.floor().max(0.0) as i64;
        units.push(base);
        assigned += base;
        remainders.push((raw - base as f64, i));
    }
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let mut leftover = total_units - assigned;
    let mut k = 0usize;
    while leftover > 0 {
        units[remainders[k % remainders.len()].1] += 1;
        leftover -= 1;
        k += 1;
    }
    units
}
