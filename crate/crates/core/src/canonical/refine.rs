//! Individualization-refinement canonical labelling for connected graphs.
//!
//! The search tree has ordered partitions as nodes. Each node is refined to
//! the coarsest equitable partition, and the sequence of splits performed is
//! recorded as a trace that serves as a node invariant. Leaves (discrete
//! partitions) are ranked by `(trace, certificate)` and the smallest leaf
//! defines the canonical labelling. Automorphisms are discovered whenever
//! two leaves produce the same certificate; they prune the search through
//! orbit tests and backjumping.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::CanonError;
use crate::graph::Graph;

/// Default cap on search-tree nodes per canonicalization.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone)]
struct Partition {
    elems: Vec<usize>,
    pos: Vec<usize>,
    // cell start for each vertex
    cell: Vec<usize>,
    // one past the end, indexed by cell start
    end: Vec<usize>,
    singletons: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut end = vec![0; n];
        end[0] = n;
        Partition {
            elems: (0..n).collect(),
            pos: (0..n).collect(),
            cell: vec![0; n],
            end,
            singletons: usize::from(n == 1),
        }
    }

    fn is_discrete(&self) -> bool {
        self.singletons == self.elems.len()
    }

    fn cell_len(&self, start: usize) -> usize {
        self.end[start] - start
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let len = self.cell_len(s);
            if len > 1 && best.map_or(true, |(_, l)| len < l) {
                best = Some((s, len));
                if len == 2 {
                    break;
                }
            }
            s = self.end[s];
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off the front of its cell and returns the new singleton's start.
    fn individualize(&mut self, v: usize) -> usize {
        let start = self.cell[v];
        let p = self.pos[v];
        let other = self.elems[start];
        self.elems.swap(start, p);
        self.pos[other] = p;
        self.pos[v] = start;
        let end = self.end[start];
        self.end[start] = start + 1;
        self.end[start + 1] = end;
        for i in start + 1..end {
            self.cell[self.elems[i]] = start + 1;
        }
        self.singletons += 1;
        if end - start == 2 {
            self.singletons += 1;
        }
        start
    }
}

struct Refiner<'a> {
    adj: &'a [Vec<usize>],
    count: Vec<u32>,
    in_queue: Vec<bool>,
}

impl<'a> Refiner<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.order();
        Refiner {
            adj: g.adjacency(),
            count: vec![0; n],
            in_queue: vec![false; n],
        }
    }

    /// Refines to the coarsest equitable partition below `p`, starting from
    /// the given splitter cells. Appends the split record to `trace`.
    fn refine(&mut self, p: &mut Partition, splitters: &[usize], trace: &mut Vec<u64>) {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let mut touched: Vec<usize> = Vec::new();
        let mut cells: Vec<usize> = Vec::new();
        while let Some(s) = queue.pop_front() {
            self.in_queue[s] = false;
            if p.is_discrete() {
                continue;
            }
            for i in s..p.end[s] {
                for &w in &self.adj[p.elems[i]] {
                    if self.count[w] == 0 {
                        touched.push(w);
                    }
                    self.count[w] += 1;
                }
            }
            cells.clear();
            cells.extend(touched.iter().map(|&w| p.cell[w]));
            cells.sort_unstable();
            cells.dedup();
            for &c in &cells {
                let end = p.end[c];
                if end - c == 1 {
                    continue;
                }
                let slice = &mut p.elems[c..end];
                let count = &self.count;
                slice.sort_by_key(|&v| count[v]);
                if count[slice[0]] == count[slice[slice.len() - 1]] {
                    continue;
                }
                trace.push(c as u64);
                let was_queued = self.in_queue[c];
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut a = c;
                while a < end {
                    let k = self.count[p.elems[a]];
                    let mut b = a + 1;
                    while b < end && self.count[p.elems[b]] == k {
                        b += 1;
                    }
                    frags.push((a, b));
                    trace.push(((k as u64) << 32) | (b - a) as u64);
                    a = b;
                }
                for &(a, b) in &frags {
                    p.end[a] = b;
                    for i in a..b {
                        let v = p.elems[i];
                        p.pos[v] = i;
                        p.cell[v] = a;
                    }
                    if b - a == 1 {
                        p.singletons += 1;
                    }
                }
                let largest = frags
                    .iter()
                    .enumerate()
                    .max_by(|x, y| {
                        (x.1 .1 - x.1 .0)
                            .cmp(&(y.1 .1 - y.1 .0))
                            .then(y.0.cmp(&x.0))
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                for (i, &(a, _)) in frags.iter().enumerate() {
                    let add = if was_queued { a != c } else { i != largest };
                    if add && !self.in_queue[a] {
                        self.in_queue[a] = true;
                        queue.push_back(a);
                    }
                }
            }
            for &w in &touched {
                self.count[w] = 0;
            }
            touched.clear();
        }
        trace.push(u64::MAX);
    }
}

struct Leaf {
    elems: Vec<usize>,
    trace: Vec<Vec<u64>>,
    cert: Vec<(u32, u32)>,
    path: Vec<usize>,
}

/// Result of canonicalizing a connected graph.
pub(crate) struct CanonicalForm {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// Edge list under the canonical labelling, sorted, each `(min, max)`.
    pub cert: Vec<(u32, u32)>,
    /// Generators of the automorphism group.
    pub generators: Vec<Vec<usize>>,
}

struct Search<'a> {
    graph: &'a Graph,
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

fn certificate(graph: &Graph, elems: &[usize]) -> Vec<(u32, u32)> {
    let mut lab = vec![0u32; elems.len()];
    for (i, &v) in elems.iter().enumerate() {
        lab[v] = i as u32;
    }
    let mut cert: Vec<(u32, u32)> = graph
        .edges()
        .map(|(u, v)| {
            let (a, b) = (lab[u], lab[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    cert.sort_unstable();
    cert
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Union-find orbit representatives (smallest member) under the generators.
pub(crate) fn orbit_roots(n: usize, generators: &[Vec<usize>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for g in generators {
        for (v, &w) in g.iter().enumerate() {
            union(&mut parent, v, w);
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), CanonError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(CanonError::BudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn same_orbit_as_any(&self, path: &[usize], v: usize, explored: &[usize]) -> bool {
        let n = self.graph.order();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut any = false;
        for g in &self.generators {
            if path.iter().all(|&x| g[x] == x) {
                any = true;
                for (x, &y) in g.iter().enumerate() {
                    union(&mut parent, x, y);
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }

    fn add_generator(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0; from.len()];
        for (i, &x) in from.iter().enumerate() {
            perm[x] = to[i];
        }
        if perm.iter().enumerate().any(|(i, &x)| i != x) {
            self.generators.push(perm);
        }
    }

    /// Explores the subtree at `p`. Returns the depth to backjump to, if any.
    fn explore(
        &mut self,
        p: Partition,
        path: &mut Vec<usize>,
        trace: &mut Vec<Vec<u64>>,
        eq_first: bool,
        cmp_best: Ordering,
    ) -> Result<Option<usize>, CanonError> {
        self.tick()?;
        let depth = path.len();
        if p.is_discrete() {
            return Ok(self.leaf(p, path, trace, eq_first, cmp_best));
        }
        let target = p
            .target_cell()
            .expect("non-discrete partition has a target cell");
        let mut cands: Vec<usize> = p.elems[target..p.end[target]].to_vec();
        cands.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for v in cands {
            if !explored.is_empty() && self.same_orbit_as_any(path, v, &explored) {
                continue;
            }
            explored.push(v);
            let mut child = p.clone();
            let s = child.individualize(v);
            let mut seg = vec![s as u64];
            self.refiner.refine(&mut child, &[s], &mut seg);

            let level = trace.len();
            let child_first = eq_first
                && self
                    .first
                    .as_ref()
                    .map_or(true, |f| f.trace.get(level) == Some(&seg));
            let child_cmp = match cmp_best {
                Ordering::Equal => match &self.best {
                    Some(b) => match b.trace.get(level) {
                        Some(bs) => seg.cmp(bs),
                        None => Ordering::Greater,
                    },
                    None => Ordering::Equal,
                },
                o => o,
            };
            if self.first.is_some() && !child_first && child_cmp == Ordering::Greater {
                continue;
            }
            path.push(v);
            trace.push(seg);
            let jump = self.explore(child, path, trace, child_first, child_cmp)?;
            path.pop();
            trace.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Ok(Some(k));
                }
            }
        }
        Ok(None)
    }

    fn leaf(
        &mut self,
        p: Partition,
        path: &[usize],
        trace: &[Vec<u64>],
        eq_first: bool,
        cmp_best: Ordering,
    ) -> Option<usize> {
        if self.first.is_none() {
            let leaf = Leaf {
                cert: certificate(self.graph, &p.elems),
                elems: p.elems,
                trace: trace.to_vec(),
                path: path.to_vec(),
            };
            self.best = Some(Leaf {
                elems: leaf.elems.clone(),
                trace: leaf.trace.clone(),
                cert: leaf.cert.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        }
        if !eq_first && cmp_best == Ordering::Greater {
            return None;
        }
        let cert = certificate(self.graph, &p.elems);
        if eq_first {
            let first = self.first.as_ref().unwrap();
            if first.trace.len() == trace.len() && first.cert == cert {
                let from = first.elems.clone();
                let k = common_prefix(path, &first.path);
                self.add_generator(&from, &p.elems);
                return Some(k);
            }
        }
        let order = match cmp_best {
            Ordering::Equal => {
                let best = self.best.as_ref().unwrap();
                trace
                    .len()
                    .cmp(&best.trace.len())
                    .then_with(|| cert.cmp(&best.cert))
            }
            o => o,
        };
        match order {
            Ordering::Less => {
                self.best = Some(Leaf {
                    elems: p.elems,
                    trace: trace.to_vec(),
                    cert,
                    path: path.to_vec(),
                });
                None
            }
            Ordering::Equal => {
                let best = self.best.as_ref().unwrap();
                let from = best.elems.clone();
                let k = common_prefix(path, &best.path);
                self.add_generator(&from, &p.elems);
                Some(k)
            }
            Ordering::Greater => None,
        }
    }
}

/// Canonical labelling and automorphism generators of a connected graph.
pub(crate) fn canonical_form(graph: &Graph, budget: u64) -> Result<CanonicalForm, CanonError> {
    let n = graph.order();
    let mut search = Search {
        graph,
        refiner: Refiner::new(graph),
        first: None,
        best: None,
        generators: Vec::new(),
        nodes: 0,
        budget,
    };
    let mut p = Partition::unit(n);
    let mut seg = Vec::new();
    search.refiner.refine(&mut p, &[0], &mut seg);
    let mut path = Vec::new();
    let mut trace = vec![seg];
    search.explore(p, &mut path, &mut trace, true, Ordering::Equal)?;
    let best = search.best.expect("search reaches at least one leaf");
    let mut labeling = vec![0; n];
    for (i, &v) in best.elems.iter().enumerate() {
        labeling[v] = i;
    }
    Ok(CanonicalForm {
        labeling,
        cert: best.cert,
        generators: search.generators,
    })
}
