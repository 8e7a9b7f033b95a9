//! Exact minimum-weight perfect matching on dense graphs.
//!
//! Edmonds' primal-dual blossom algorithm with slack tracking, O(n³). The
//! solver maximizes weight; a perfect matching of minimum cost is obtained by
//! running it on `C − w` with `C` large enough that any larger matching beats
//! any smaller one.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Symmetric cost matrix over `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    costs: Vec<i64>,
}

impl CostMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            costs: vec![0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set(&mut self, i: usize, j: usize, cost: i64) {
        self.costs[i * self.n + j] = cost;
        self.costs[j * self.n + i] = cost;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.costs[i * self.n + j]
    }

    pub fn total(&self, pairs: &[(usize, usize)]) -> i64 {
        pairs.iter().map(|&(a, b)| self.get(a, b)).sum()
    }
}

/// Minimum-cost perfect matching of a complete graph with non-negative
/// costs. Pairs come back as `(a, b)` with `a < b`, sorted by `a`.
pub fn min_weight_perfect_matching(costs: &CostMatrix) -> Result<Vec<(usize, usize)>> {
    let n = costs.len();
    if n % 2 == 1 {
        return Err(Error::OddNodeCount(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut max_cost = 0;
    for i in 0..n {
        for j in i + 1..n {
            let c = costs.get(i, j);
            if c < 0 {
                return Err(Error::Invalid(format!("negative matching cost {c}")));
            }
            max_cost = max_cost.max(c);
        }
    }
    // Any matching with k+1 edges outweighs every matching with k edges.
    let offset = (n as i64 / 2 + 1) * max_cost + 1;
    let mut solver = Blossom::new(n);
    for i in 0..n {
        for j in i + 1..n {
            solver.set_weight(i + 1, j + 1, offset - costs.get(i, j));
        }
    }
    solver.solve();
    let mut pairs = Vec::with_capacity(n / 2);
    for u in 1..=n {
        let v = solver.mate[u];
        if v == 0 {
            return Err(Error::Invalid("matching is not perfect".into()));
        }
        if u < v {
            pairs.push((u - 1, v - 1));
        }
    }
    Ok(pairs)
}

#[derive(Clone, Copy, Default)]
struct Edge {
    u: usize,
    v: usize,
    w: i64,
}

const UNLABELED: i8 = -1;
const OUTER: i8 = 0;
const INNER: i8 = 1;

/// Vertices are `1..=n`; blossoms take ids `n+1..=2n`. Id 0 means "none".
struct Blossom {
    n: usize,
    n_x: usize,
    dim: usize,
    g: Vec<Edge>,
    lab: Vec<i64>,
    mate: Vec<usize>,
    slack: Vec<usize>,
    st: Vec<usize>,
    pa: Vec<usize>,
    flower_from: Vec<usize>,
    label: Vec<i8>,
    vis: Vec<u32>,
    vis_stamp: u32,
    flower: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        let dim = 2 * n + 1;
        let mut g = vec![Edge::default(); dim * dim];
        for u in 0..dim {
            for v in 0..dim {
                g[u * dim + v] = Edge { u, v, w: 0 };
            }
        }
        Self {
            n,
            n_x: n,
            dim,
            g,
            lab: vec![0; dim],
            mate: vec![0; dim],
            slack: vec![0; dim],
            st: (0..dim).map(|x| if x <= n { x } else { 0 }).collect(),
            pa: vec![0; dim],
            flower_from: vec![0; dim * (n + 1)],
            label: vec![UNLABELED; dim],
            vis: vec![0; dim],
            vis_stamp: 0,
            flower: vec![Vec::new(); dim],
            queue: VecDeque::new(),
        }
    }

    fn set_weight(&mut self, u: usize, v: usize, w: i64) {
        let dim = self.dim;
        self.g[u * dim + v].w = w;
        self.g[v * dim + u].w = w;
    }

    #[inline]
    fn edge(&self, u: usize, v: usize) -> Edge {
        self.g[u * self.dim + v]
    }

    #[inline]
    fn ff(&self, b: usize, x: usize) -> usize {
        self.flower_from[b * (self.n + 1) + x]
    }

    #[inline]
    fn set_ff(&mut self, b: usize, x: usize, val: usize) {
        let n1 = self.n + 1;
        self.flower_from[b * n1 + x] = val;
    }

    #[inline]
    fn delta(&self, e: Edge) -> i64 {
        self.lab[e.u] + self.lab[e.v] - 2 * e.w
    }

    fn update_slack(&mut self, u: usize, x: usize) {
        if self.slack[x] == 0
            || self.delta(self.edge(u, x)) < self.delta(self.edge(self.slack[x], x))
        {
            self.slack[x] = u;
        }
    }

    fn set_slack(&mut self, x: usize) {
        self.slack[x] = 0;
        for u in 1..=self.n {
            if self.edge(u, x).w > 0 && self.st[u] != x && self.label[self.st[u]] == OUTER {
                self.update_slack(u, x);
            }
        }
    }

    fn q_push(&mut self, x: usize) {
        if x <= self.n {
            self.queue.push_back(x);
        } else {
            for i in 0..self.flower[x].len() {
                let p = self.flower[x][i];
                self.q_push(p);
            }
        }
    }

    fn set_st(&mut self, x: usize, b: usize) {
        self.st[x] = b;
        if x > self.n {
            for i in 0..self.flower[x].len() {
                let p = self.flower[x][i];
                self.set_st(p, b);
            }
        }
    }

    fn get_pr(&mut self, b: usize, xr: usize) -> usize {
        let pr = self.flower[b]
            .iter()
            .position(|&x| x == xr)
            .expect("sub-blossom present");
        if pr % 2 == 1 {
            self.flower[b][1..].reverse();
            self.flower[b].len() - pr
        } else {
            pr
        }
    }

    fn set_match(&mut self, u: usize, v: usize) {
        let e = self.edge(u, v);
        self.mate[u] = e.v;
        if u <= self.n {
            return;
        }
        let xr = self.ff(u, e.u);
        let pr = self.get_pr(u, xr);
        for i in 0..pr {
            let (a, b) = (self.flower[u][i], self.flower[u][i ^ 1]);
            self.set_match(a, b);
        }
        self.set_match(xr, v);
        self.flower[u].rotate_left(pr);
    }

    fn augment(&mut self, mut u: usize, mut v: usize) {
        loop {
            let xnv = self.st[self.mate[u]];
            self.set_match(u, v);
            if xnv == 0 {
                return;
            }
            let next = self.st[self.pa[xnv]];
            self.set_match(xnv, next);
            u = next;
            v = xnv;
        }
    }

    fn get_lca(&mut self, mut u: usize, mut v: usize) -> usize {
        self.vis_stamp += 1;
        let t = self.vis_stamp;
        while u != 0 || v != 0 {
            if u == 0 {
                std::mem::swap(&mut u, &mut v);
                continue;
            }
            if self.vis[u] == t {
                return u;
            }
            self.vis[u] = t;
            u = self.st[self.mate[u]];
            if u != 0 {
                u = self.st[self.pa[u]];
            }
            std::mem::swap(&mut u, &mut v);
        }
        0
    }

    fn add_blossom(&mut self, u: usize, lca: usize, v: usize) {
        let mut b = self.n + 1;
        while b <= self.n_x && self.st[b] != 0 {
            b += 1;
        }
        if b > self.n_x {
            self.n_x += 1;
        }
        self.lab[b] = 0;
        self.label[b] = OUTER;
        self.mate[b] = self.mate[lca];
        self.flower[b].clear();
        self.flower[b].push(lca);

        let mut x = u;
        while x != lca {
            self.flower[b].push(x);
            let y = self.st[self.mate[x]];
            self.flower[b].push(y);
            self.q_push(y);
            x = self.st[self.pa[y]];
        }
        self.flower[b][1..].reverse();
        let mut x = v;
        while x != lca {
            self.flower[b].push(x);
            let y = self.st[self.mate[x]];
            self.flower[b].push(y);
            self.q_push(y);
            x = self.st[self.pa[y]];
        }
        self.set_st(b, b);

        let dim = self.dim;
        for x in 1..=self.n_x {
            self.g[b * dim + x].w = 0;
            self.g[x * dim + b].w = 0;
        }
        for x in 1..=self.n {
            self.set_ff(b, x, 0);
        }
        let members = self.flower[b].clone();
        for xs in members {
            for x in 1..=self.n_x {
                if self.edge(b, x).w == 0 || self.delta(self.edge(xs, x)) < self.delta(self.edge(b, x))
                {
                    self.g[b * dim + x] = self.edge(xs, x);
                    self.g[x * dim + b] = self.edge(x, xs);
                }
            }
            for x in 1..=self.n {
                if self.ff(xs, x) != 0 {
                    self.set_ff(b, x, xs);
                }
            }
        }
        self.set_slack(b);
    }

    fn expand_blossom(&mut self, b: usize) {
        let members = self.flower[b].clone();
        for &x in &members {
            self.set_st(x, x);
        }
        let entry = self.edge(b, self.pa[b]).u;
        let xr = self.ff(b, entry);
        let pr = self.get_pr(b, xr);
        let mut i = 0;
        while i < pr {
            let xs = self.flower[b][i];
            let xns = self.flower[b][i + 1];
            self.pa[xs] = self.edge(xns, xs).u;
            self.label[xs] = INNER;
            self.label[xns] = OUTER;
            self.slack[xs] = 0;
            self.set_slack(xns);
            self.q_push(xns);
            i += 2;
        }
        self.label[xr] = INNER;
        self.pa[xr] = self.pa[b];
        for i in pr + 1..self.flower[b].len() {
            let xs = self.flower[b][i];
            self.label[xs] = UNLABELED;
            self.set_slack(xs);
        }
        self.st[b] = 0;
    }

    fn on_found_edge(&mut self, e: Edge) -> bool {
        let u = self.st[e.u];
        let v = self.st[e.v];
        if self.label[v] == UNLABELED {
            self.pa[v] = e.u;
            self.label[v] = INNER;
            let nu = self.st[self.mate[v]];
            self.slack[v] = 0;
            self.slack[nu] = 0;
            self.label[nu] = OUTER;
            self.q_push(nu);
        } else if self.label[v] == OUTER {
            let lca = self.get_lca(u, v);
            if lca == 0 {
                self.augment(u, v);
                self.augment(v, u);
                return true;
            }
            self.add_blossom(u, lca, v);
        }
        false
    }

    /// One augmentation phase; false when no augmenting path remains.
    fn phase(&mut self) -> bool {
        for x in 0..self.dim {
            self.label[x] = UNLABELED;
            self.slack[x] = 0;
        }
        self.queue.clear();
        for x in 1..=self.n_x {
            if self.st[x] == x && self.mate[x] == 0 {
                self.pa[x] = 0;
                self.label[x] = OUTER;
                self.q_push(x);
            }
        }
        if self.queue.is_empty() {
            return false;
        }
        loop {
            while let Some(u) = self.queue.pop_front() {
                if self.label[self.st[u]] == INNER {
                    continue;
                }
                for v in 1..=self.n {
                    let e = self.edge(u, v);
                    if e.w > 0 && self.st[u] != self.st[v] {
                        if self.delta(e) == 0 {
                            if self.on_found_edge(e) {
                                return true;
                            }
                        } else {
                            let sv = self.st[v];
                            self.update_slack(u, sv);
                        }
                    }
                }
            }

            let mut d = i64::MAX;
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b && self.label[b] == INNER {
                    d = d.min(self.lab[b] / 2);
                }
            }
            for x in 1..=self.n_x {
                if self.st[x] == x && self.slack[x] != 0 {
                    let slack = self.delta(self.edge(self.slack[x], x));
                    if self.label[x] == UNLABELED {
                        d = d.min(slack);
                    } else if self.label[x] == OUTER {
                        d = d.min(slack / 2);
                    }
                }
            }
            for u in 1..=self.n {
                match self.label[self.st[u]] {
                    OUTER => {
                        if self.lab[u] <= d {
                            return false;
                        }
                        self.lab[u] -= d;
                    }
                    INNER => self.lab[u] += d,
                    _ => {}
                }
            }
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b {
                    match self.label[b] {
                        OUTER => self.lab[b] += 2 * d,
                        INNER => self.lab[b] -= 2 * d,
                        _ => {}
                    }
                }
            }
            self.queue.clear();
            for x in 1..=self.n_x {
                if self.st[x] == x && self.slack[x] != 0 && self.st[self.slack[x]] != x {
                    let e = self.edge(self.slack[x], x);
                    if self.delta(e) == 0 && self.on_found_edge(e) {
                        return true;
                    }
                }
            }
            for b in self.n + 1..=self.n_x {
                if self.st[b] == b && self.label[b] == INNER && self.lab[b] == 0 {
                    self.expand_blossom(b);
                }
            }
        }
    }

    fn solve(&mut self) {
        let mut w_max = 0;
        for u in 1..=self.n {
            for v in 1..=self.n {
                self.set_ff(u, v, if u == v { u } else { 0 });
                w_max = w_max.max(self.edge(u, v).w);
            }
        }
        for u in 1..=self.n {
            self.lab[u] = w_max;
        }
        while self.phase() {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes() {
        let mut m = CostMatrix::new(2);
        m.set(0, 1, 7);
        assert_eq!(min_weight_perfect_matching(&m).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn four_node_example() {
        // nodes 1..4 of the example map to 0..3
        let m = CostMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 1) | (2, 3) => 1,
            _ => 2,
        });
        let pairs = min_weight_perfect_matching(&m).unwrap();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(m.total(&pairs), 2);
    }

    #[test]
    fn odd_and_empty() {
        assert_eq!(
            min_weight_perfect_matching(&CostMatrix::new(3)).unwrap_err(),
            Error::OddNodeCount(3)
        );
        assert!(min_weight_perfect_matching(&CostMatrix::new(0)).unwrap().is_empty());
    }

    #[test]
    fn zero_costs_still_perfect() {
        let m = CostMatrix::new(6);
        let pairs = min_weight_perfect_matching(&m).unwrap();
        assert_eq!(pairs.len(), 3);
    }
}
