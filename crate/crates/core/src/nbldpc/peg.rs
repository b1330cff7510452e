//! Progressive edge growth for regular-variable-degree Tanner graphs.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Unweighted bipartite graph between `checks` check nodes and `vars`
/// variable nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    vars: usize,
    check_adj: Vec<Vec<usize>>,
    var_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Graph from per-check neighbor lists.
    pub fn from_checks(vars: usize, check_adj: Vec<Vec<usize>>) -> Result<Self> {
        let mut var_adj = vec![Vec::new(); vars];
        for (c, nbrs) in check_adj.iter().enumerate() {
            for &v in nbrs {
                if v >= vars {
                    return Err(Error::Dimensions(format!(
                        "check {c} references variable {v} of {vars}"
                    )));
                }
                if var_adj[v].contains(&c) {
                    return Err(Error::DuplicateEdge { check: c, var: v });
                }
                var_adj[v].push(c);
            }
        }
        Ok(TannerGraph {
            vars,
            check_adj,
            var_adj,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.check_adj.iter().map(Vec::len).sum()
    }

    /// Length of the shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        // Nodes 0..vars are variables, vars.. are checks.
        let total = self.vars + self.checks();
        let nbrs = |u: usize| -> &[usize] {
            if u < self.vars {
                &self.var_adj[u]
            } else {
                &self.check_adj[u - self.vars]
            }
        };
        let offset = |u: usize, w: usize| if u < self.vars { w + self.vars } else { w };
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for root in 0..total {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for &w in nbrs(u) {
                    let w = offset(u, w);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Distances (in check-to-check hops through variables) from variable
    /// `v` to every check; `usize::MAX` for unreachable checks.
    fn check_depths(&self, v: usize) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.checks()];
        let mut seen_var = vec![false; self.vars];
        seen_var[v] = true;
        let mut frontier: Vec<usize> = Vec::new();
        for &c in &self.var_adj[v] {
            depth[c] = 0;
            frontier.push(c);
        }
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &c in &frontier {
                for &u in &self.check_adj[c] {
                    if seen_var[u] {
                        continue;
                    }
                    seen_var[u] = true;
                    for &c2 in &self.var_adj[u] {
                        if depth[c2] == usize::MAX {
                            depth[c2] = level;
                            next.push(c2);
                        }
                    }
                }
            }
            frontier = next;
        }
        depth
    }

    fn add_edge(&mut self, c: usize, v: usize) {
        self.check_adj[c].push(v);
        self.var_adj[v].push(c);
    }
}

/// Builds a Tanner graph with every variable of degree `dv` by progressive
/// edge growth.
///
/// Each new edge goes to a check outside the variable's current
/// neighborhood if one exists, otherwise to one of the checks reached last
/// by the breadth-first expansion. Candidates are ranked by current check
/// degree, then by index. The seed fixes the order in which variables are
/// processed.
pub fn peg_construct(vars: usize, checks: usize, dv: usize, seed: u64) -> Result<TannerGraph> {
    if dv == 0 || checks == 0 || dv > checks || checks > vars {
        return Err(Error::InfeasibleDegree { dv, checks, vars });
    }
    let mut g = TannerGraph {
        vars,
        check_adj: vec![Vec::new(); checks],
        var_adj: vec![Vec::new(); vars],
    };
    let mut order: Vec<usize> = (0..vars).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    for &v in &order {
        for k in 0..dv {
            let candidates: Vec<usize> = if k == 0 {
                (0..checks).collect()
            } else {
                let depth = g.check_depths(v);
                let unreachable: Vec<usize> =
                    (0..checks).filter(|&c| depth[c] == usize::MAX).collect();
                if !unreachable.is_empty() {
                    unreachable
                } else {
                    let deepest = depth.iter().copied().max().unwrap_or(0);
                    (0..checks)
                        .filter(|&c| depth[c] == deepest && !g.var_adj[v].contains(&c))
                        .collect()
                }
            };
            let chosen = candidates
                .into_iter()
                .filter(|c| !g.var_adj[v].contains(c))
                .min_by_key(|&c| (g.check_adj[c].len(), c));
            let chosen = match chosen {
                Some(c) => c,
                // Every deepest check is already a neighbor; fall back to any
                // free check.
                None => (0..checks)
                    .filter(|c| !g.var_adj[v].contains(c))
                    .min_by_key(|&c| (g.check_adj[c].len(), c))
                    .ok_or(Error::InfeasibleDegree { dv, checks, vars })?,
            };
            g.add_edge(chosen, v);
        }
    }
    for adj in &mut g.check_adj {
        adj.sort_unstable();
    }
    Ok(g)
}
