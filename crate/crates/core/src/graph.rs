//! Finite simple graphs with a global degree cap, plus the purely
//! combinatorial operations the rest of the crate builds on: balls,
//! components, disjoint unions, vertex deletion and r-neighbourhoods.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default degree cap. Large enough for the K6-decorated ray, whose
/// attachment vertices have degree 7.
pub const DEFAULT_DELTA: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} has degree {degree}, above the cap {delta}")]
    DegreeCap {
        vertex: usize,
        degree: usize,
        delta: usize,
    },
    #[error("degree cap must be positive")]
    ZeroDelta,
    #[error("disjoint union of an empty list of parts")]
    EmptyUnion,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("deleting every vertex would leave the empty graph")]
    DeletesEverything,
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("vertex {coroot} is not adjacent to {root}")]
    NotAdjacent { root: usize, coroot: usize },
    #[error("edge {{{0}, {1}}} must be listed with u < v")]
    UnorderedEdge(usize, usize),
}

/// Finite simple undirected graph on vertices `0..n` with every degree at
/// most `delta`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    delta: usize,
}

impl Graph {
    /// Builds a graph from an edge list; edge orientation is irrelevant.
    pub fn new(
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        delta: usize,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); vertices];
        for (u, v) in edges {
            if u >= vertices {
                return Err(GraphError::UnknownVertex(u));
            }
            if v >= vertices {
                return Err(GraphError::UnknownVertex(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_adjacency(adj, delta)
    }

    pub fn from_adjacency(mut adj: Vec<Vec<usize>>, delta: usize) -> Result<Self, GraphError> {
        if adj.is_empty() {
            return Err(GraphError::Empty);
        }
        if delta == 0 {
            return Err(GraphError::ZeroDelta);
        }
        let n = adj.len();
        for (v, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            for w in nbrs.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
                }
            }
            if let Some(&bad) = nbrs.iter().find(|&&w| w >= n) {
                return Err(GraphError::UnknownVertex(bad));
            }
            if nbrs.binary_search(&v).is_ok() {
                return Err(GraphError::SelfLoop(v));
            }
            if nbrs.len() > delta {
                return Err(GraphError::DegreeCap {
                    vertex: v,
                    degree: nbrs.len(),
                    delta,
                });
            }
        }
        for v in 0..n {
            for &w in &adj[v] {
                if adj[w].binary_search(&v).is_err() {
                    // asymmetric adjacency list: report as the missing edge
                    return Err(GraphError::NotAdjacent { root: w, coroot: v });
                }
            }
        }
        Ok(Graph { adj, delta })
    }

    /// The single-vertex graph.
    pub fn singleton(delta: usize) -> Self {
        Graph {
            adj: vec![Vec::new()],
            delta: delta.max(1),
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Same graph, different cap (validated).
    pub fn with_delta(&self, delta: usize) -> Result<Self, GraphError> {
        Self::from_adjacency(self.adj.clone(), delta)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Breadth-first distances from a set of sources; `None` if unreachable.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap() + 1;
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Graph distance, `None` between components.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(&[u])[v]
    }

    /// Subgraph induced by `vertices` (in the given order). Returns the new
    /// graph and the map from new ids to old ids.
    pub fn induced(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut new_id = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            new_id[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut nbrs: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&w| (new_id[w] != usize::MAX).then_some(new_id[w]))
                    .collect();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        Ok((
            Graph {
                adj,
                delta: self.delta,
            },
            vertices.to_vec(),
        ))
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for s in 0..self.order() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.size() + 1 == self.order() && self.is_connected()
    }

    /// `2|E| / |V|` as a reduced fraction `(num, den)`.
    pub fn degree_sum(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// A graph with a distinguished root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedGraph {
    graph: Graph,
    root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self, GraphError> {
        graph.check_vertex(root)?;
        Ok(RootedGraph { graph, root })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn into_parts(self) -> (Graph, usize) {
        (self.graph, self.root)
    }
}

/// A graph with an ordered pair of adjacent distinguished vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BirootedGraph {
    graph: Graph,
    root: usize,
    coroot: usize,
}

impl BirootedGraph {
    pub fn new(graph: Graph, root: usize, coroot: usize) -> Result<Self, GraphError> {
        graph.check_vertex(root)?;
        graph.check_vertex(coroot)?;
        if !graph.has_edge(root, coroot) {
            return Err(GraphError::NotAdjacent { root, coroot });
        }
        Ok(BirootedGraph {
            graph,
            root,
            coroot,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn coroot(&self) -> usize {
        self.coroot
    }
}

/// Closed ball of radius `r` about `x`, rooted at `x`. The root is vertex 0
/// of the result and the remaining vertices are in breadth-first order.
pub fn ball(graph: &Graph, x: usize, r: usize) -> Result<RootedGraph, GraphError> {
    graph.check_vertex(x)?;
    let mut order = vec![x];
    let mut dist = vec![usize::MAX; graph.order()];
    dist[x] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        if dist[v] == r {
            continue;
        }
        for &w in graph.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                order.push(w);
            }
        }
    }
    let (g, _) = graph.induced(&order)?;
    Ok(RootedGraph { graph: g, root: 0 })
}

/// Connected component containing `x`, rooted at `x` (root relabelled to 0).
pub fn component(graph: &Graph, x: usize) -> Result<RootedGraph, GraphError> {
    ball(graph, x, usize::MAX)
}

/// Disjoint union of `multiplicity` copies of each part. Copies are laid out
/// consecutively in input order. The result's cap is the largest part cap.
pub fn disjoint_union(parts: &[(Graph, usize)]) -> Result<Graph, GraphError> {
    if parts.is_empty() {
        return Err(GraphError::EmptyUnion);
    }
    let mut adj = Vec::new();
    let mut delta = 1;
    for (g, mult) in parts {
        if *mult == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        delta = delta.max(g.delta());
        for _ in 0..*mult {
            let offset = adj.len();
            adj.extend(
                g.adjacency()
                    .iter()
                    .map(|nbrs| nbrs.iter().map(|&w| w + offset).collect::<Vec<_>>()),
            );
        }
    }
    Graph::from_adjacency(adj, delta)
}

/// Subgraph induced by the complement of `removed`. Surviving vertices keep
/// their relative order.
pub fn delete_subgraph(graph: &Graph, removed: &BTreeSet<usize>) -> Result<Graph, GraphError> {
    Ok(delete_subgraph_with_map(graph, removed)?.0)
}

/// As [`delete_subgraph`], also returning the map from new ids to old ids.
pub fn delete_subgraph_with_map(
    graph: &Graph,
    removed: &BTreeSet<usize>,
) -> Result<(Graph, Vec<usize>), GraphError> {
    for &v in removed {
        graph.check_vertex(v)?;
    }
    if removed.len() == graph.order() {
        return Err(GraphError::DeletesEverything);
    }
    let keep: Vec<usize> = (0..graph.order())
        .filter(|v| !removed.contains(v))
        .collect();
    graph.induced(&keep)
}

/// `{x : d(x, G) <= r}`.
pub fn r_neighborhood(
    graph: &Graph,
    set: &BTreeSet<usize>,
    r: usize,
) -> Result<BTreeSet<usize>, GraphError> {
    if set.is_empty() {
        return Err(GraphError::EmptyVertexSet);
    }
    for &v in set {
        graph.check_vertex(v)?;
    }
    let sources: Vec<usize> = set.iter().copied().collect();
    Ok(graph
        .distances_from(&sources)
        .into_iter()
        .enumerate()
        .filter_map(|(v, d)| matches!(d, Some(d) if d <= r).then_some(v))
        .collect())
}

/// `(Δ + 1)^r · |G|`, saturating.
pub fn neighborhood_bound(delta: usize, r: usize, set_size: usize) -> usize {
    (delta + 1)
        .saturating_pow(r as u32)
        .saturating_mul(set_size)
}

/// On-disk graph format: `{"delta": int, "vertices": int, "edges": [[u,v], ...]}`,
/// 0-based ids, each edge listed once with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub delta: usize,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            delta: g.delta(),
            vertices: g.order(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        if let Some(&[u, v]) = j.edges.iter().find(|[u, v]| u >= v) {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            return Err(GraphError::UnorderedEdge(u, v));
        }
        if j.vertices == 0 {
            return Err(GraphError::Empty);
        }
        Graph::new(j.vertices, j.edges.iter().map(|&[u, v]| (u, v)), j.delta)
    }
}
