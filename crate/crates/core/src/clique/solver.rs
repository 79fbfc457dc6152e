//! Exact clique search on small dense graphs held as adjacency bitsets.
//!
//! Branch and bound in the style of MCQ/BBMC: vertices are relabelled in
//! degeneracy order, candidate sets are bitsets, and a greedy sequential
//! colouring of the candidates bounds every branch from above.

use std::time::Instant;

use crate::bitset::BitSet;

use super::Budget;

/// How many search nodes pass between two clock reads.
const CLOCK_STRIDE: u64 = 1024;

/// The search ran out of budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interrupted {
    /// Best clique found before the budget ran out.
    pub best: Vec<usize>,
    /// Proven upper bound on the clique number.
    pub upper: usize,
}

#[derive(Clone)]
pub struct DenseGraph {
    adj: Vec<BitSet>,
}

impl std::fmt::Debug for DenseGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseGraph")
            .field("order", &self.order())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl DenseGraph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![BitSet::new(n); n],
        }
    }

    /// Builds the graph on `0..n` with `u ~ v` iff `adjacent(u, v)`, which
    /// is only queried for `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    /// Vertices in reverse order of removal when repeatedly deleting a
    /// vertex of minimum degree, ties broken by smallest label.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.order();
        let mut deg: Vec<usize> = self.adj.iter().map(BitSet::count).collect();
        let mut alive = BitSet::full(n);
        let mut removed = Vec::with_capacity(n);
        for _ in 0..n {
            let v = alive
                .iter()
                .min_by_key(|&v| (deg[v], v))
                .expect("vertices remain");
            alive.remove(v);
            removed.push(v);
            for u in self.adj[v].iter() {
                if alive.contains(u) {
                    deg[u] -= 1;
                }
            }
        }
        removed.reverse();
        removed
    }

    /// The graph relabelled so that vertex `i` is `order[i]` of `self`.
    fn relabel(&self, order: &[usize]) -> DenseGraph {
        let mut pos = vec![0usize; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = DenseGraph::new(order.len());
        for (i, &v) in order.iter().enumerate() {
            for u in self.adj[v].iter() {
                g.adj[i].insert(pos[u]);
            }
        }
        g
    }

    /// Greedy clique along the degeneracy order; a cheap lower bound.
    pub fn greedy_clique(&self) -> Vec<usize> {
        let mut clique = Vec::new();
        let mut cand = BitSet::full(self.order());
        for v in self.degeneracy_order() {
            if cand.contains(v) {
                clique.push(v);
                cand.and_assign(&self.adj[v]);
            }
        }
        clique.sort_unstable();
        clique
    }

    /// A maximum clique, sorted ascending.
    pub fn max_clique(&self, budget: &Budget) -> Result<Vec<usize>, Interrupted> {
        let order = self.degeneracy_order();
        let g = self.relabel(&order);
        let mut search = Search::new(&g, budget);
        search.best = {
            // greedy start so the bound prunes from the first branch on
            let mut c = Vec::new();
            let mut cand = BitSet::full(g.order());
            while let Some(v) = cand.first() {
                c.push(v);
                cand.and_assign(&g.adj[v]);
            }
            c
        };
        let root_bound = color_bound(&g, &BitSet::full(g.order()));
        let mut current = Vec::new();
        let finished = search.maximum(&mut current, BitSet::full(g.order()));
        let mut best: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
        best.sort_unstable();
        if finished {
            Ok(best)
        } else {
            let upper = root_bound.max(best.len());
            Err(Interrupted { best, upper })
        }
    }

    /// Every clique with exactly `size` vertices, each sorted ascending,
    /// in lexicographic order.
    pub fn cliques_of_size(
        &self,
        size: usize,
        budget: &Budget,
    ) -> Result<Vec<Vec<usize>>, Interrupted> {
        if size == 0 {
            return Ok(vec![Vec::new()]);
        }
        let order = self.degeneracy_order();
        let g = self.relabel(&order);
        let mut search = Search::new(&g, budget);
        let mut current = Vec::new();
        let mut found = Vec::new();
        let finished = search.exact(&mut current, BitSet::full(g.order()), size, &mut found);
        if !finished {
            return Err(Interrupted {
                best: found
                    .first()
                    .map(|c: &Vec<usize>| c.iter().map(|&i| order[i]).collect())
                    .unwrap_or_default(),
                upper: self.order(),
            });
        }
        let mut out: Vec<Vec<usize>> = found
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|i| order[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// All maximal cliques with at least `min_size` vertices (Bron–Kerbosch
    /// with Tomita pivoting), each sorted, in lexicographic order.
    pub fn maximal_cliques(
        &self,
        min_size: usize,
        budget: &Budget,
    ) -> Result<Vec<Vec<usize>>, Interrupted> {
        let mut search = Search::new(self, budget);
        let mut out = Vec::new();
        let mut r = Vec::new();
        let finished = search.bron_kerbosch(
            &mut r,
            BitSet::full(self.order()),
            BitSet::new(self.order()),
            min_size,
            &mut out,
        );
        if !finished {
            return Err(Interrupted {
                best: out.first().cloned().unwrap_or_default(),
                upper: self.order(),
            });
        }
        for c in out.iter_mut() {
            c.sort_unstable();
        }
        out.sort();
        Ok(out)
    }
}

/// Number of colours used by a greedy sequential colouring of `cand`.
pub fn color_bound(g: &DenseGraph, cand: &BitSet) -> usize {
    let mut uncolored = cand.clone();
    let mut colors = 0;
    while !uncolored.is_empty() {
        colors += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.and_not_assign(&g.adj[v]);
            uncolored.remove(v);
        }
    }
    colors
}

/// Greedy sequential colouring; returns vertices sorted by colour class
/// with their cumulative colour numbers.
fn color_sort(g: &DenseGraph, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.clone();
    let mut order = Vec::new();
    let mut colors = Vec::new();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.and_not_assign(&g.adj[v]);
            uncolored.remove(v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

struct Search<'a> {
    g: &'a DenseGraph,
    budget: &'a Budget,
    nodes: u64,
    stopped: bool,
    best: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a DenseGraph, budget: &'a Budget) -> Self {
        Self {
            g,
            budget,
            nodes: 0,
            stopped: false,
            best: Vec::new(),
        }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.stopped {
            return false;
        }
        self.nodes += 1;
        if self.nodes % CLOCK_STRIDE == 1 {
            if let Some(deadline) = self.budget.deadline() {
                if Instant::now() >= deadline {
                    self.stopped = true;
                }
            }
        }
        !self.stopped
    }

    fn maximum(&mut self, current: &mut Vec<usize>, mut cand: BitSet) -> bool {
        if !self.tick() {
            return false;
        }
        let (order, colors) = color_sort(self.g, &cand);
        for i in (0..order.len()).rev() {
            if current.len() + colors[i] <= self.best.len() {
                return true;
            }
            let v = order[i];
            current.push(v);
            let next = cand.intersection(&self.g.adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else if !self.maximum(current, next) {
                current.pop();
                return false;
            }
            current.pop();
            cand.remove(v);
        }
        true
    }

    fn exact(
        &mut self,
        current: &mut Vec<usize>,
        mut cand: BitSet,
        target: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if !self.tick() {
            return false;
        }
        let (order, colors) = color_sort(self.g, &cand);
        for i in (0..order.len()).rev() {
            if current.len() + colors[i] < target {
                return true;
            }
            let v = order[i];
            current.push(v);
            if current.len() == target {
                out.push(current.clone());
            } else {
                let next = cand.intersection(&self.g.adj[v]);
                if !self.exact(current, next, target, out) {
                    current.pop();
                    return false;
                }
            }
            current.pop();
            cand.remove(v);
        }
        true
    }

    fn bron_kerbosch(
        &mut self,
        r: &mut Vec<usize>,
        mut p: BitSet,
        mut x: BitSet,
        min_size: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if !self.tick() {
            return false;
        }
        if p.is_empty() {
            if x.is_empty() && r.len() >= min_size {
                out.push(r.clone());
            }
            return true;
        }
        if r.len() + p.count() < min_size {
            return true;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.intersection_count(&self.g.adj[u]), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let mut branch = p.clone();
        branch.and_not_assign(&self.g.adj[pivot]);
        for v in branch.iter().collect::<Vec<_>>() {
            r.push(v);
            let np = p.intersection(&self.g.adj[v]);
            let nx = x.intersection(&self.g.adj[v]);
            let ok = self.bron_kerbosch(r, np, nx, min_size, out);
            r.pop();
            if !ok {
                return false;
            }
            p.remove(v);
            x.insert(v);
        }
        true
    }
}
