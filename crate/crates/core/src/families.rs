//! Deterministic generators for the graph families used throughout the
//! crate: cycles, paths, balls in regular and biregular trees, barred binary
//! trees, the tree-plus-cycle and joined-tree sequences, the K6-decorated
//! ray and Cayley graphs of finite groups given by multiplication tables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, DEFAULT_DELTA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a group table: {0}")]
    NotAGroup(String),
    #[error("invalid generator set: {0}")]
    BadGenerators(String),
    #[error("index overflow in the counterexample recursion")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A family member, as read from `{"family": "T_ball", "n": 5}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilySpec {
    #[serde(rename = "cycle")]
    Cycle { n: usize },
    #[serde(rename = "path")]
    Path { n: usize },
    #[serde(rename = "complete")]
    Complete { n: usize },
    /// `K_{1,n}`, rooted at the centre.
    #[serde(rename = "star")]
    Star { n: usize },
    /// Ball of radius `n` about a vertex of the 3-regular tree.
    #[serde(rename = "T_ball")]
    TBall { n: usize },
    /// Perfect binary tree of depth `n`, rooted at its first ancestor.
    #[serde(rename = "Lambda_ball")]
    LambdaBall { n: usize },
    /// Perfect binary tree of depth `n` with every sibling pair joined.
    #[serde(rename = "barredLambda_ball")]
    BarredLambdaBall { n: usize },
    /// Ball of radius `n` in the (3,4)-biregular tree, about a degree-3 vertex.
    #[serde(rename = "T34_ball")]
    T34Ball { n: usize },
    /// Ball of radius `n` in the subdivided (3,4)-biregular tree, about a
    /// degree-3 vertex.
    #[serde(rename = "T324_ball")]
    T324Ball { n: usize },
    #[serde(rename = "tree_plus_cycle")]
    TreePlusCycle { n: usize },
    #[serde(rename = "joined_trees_X")]
    JoinedTreesX { n: usize },
    #[serde(rename = "joined_trees_Y")]
    JoinedTreesY { n: usize },
    /// Ball of radius `m` about vertex 1 of the K6-decorated ray.
    #[serde(rename = "avg_degree_counterexample")]
    AvgDegreeCounterexample { m: usize },
    #[serde(rename = "cayley")]
    Cayley {
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    },
}

/// A generated graph, with its distinguished vertex where the family has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: Graph,
    pub root: Option<usize>,
}

pub fn generate(spec: &FamilySpec) -> Result<Generated, FamilyError> {
    generate_with_delta(spec, DEFAULT_DELTA)
}

pub fn generate_with_delta(spec: &FamilySpec, delta: usize) -> Result<Generated, FamilyError> {
    use FamilySpec::*;
    let rooted = |graph: Graph, root| Generated {
        graph,
        root: Some(root),
    };
    Ok(match spec {
        Cycle { n } => Generated {
            graph: cycle(*n, delta)?,
            root: None,
        },
        Path { n } => Generated {
            graph: path(*n, delta)?,
            root: None,
        },
        Complete { n } => Generated {
            graph: complete(*n, delta)?,
            root: None,
        },
        Star { n } => rooted(star(*n, delta)?, 0),
        TBall { n } => rooted(t_ball(*n, delta)?, 0),
        LambdaBall { n } => rooted(lambda_ball(*n, delta)?, 0),
        BarredLambdaBall { n } => rooted(barred_lambda_ball(*n, delta)?, 0),
        T34Ball { n } => rooted(t34_ball(*n, delta)?, 0),
        T324Ball { n } => rooted(t324_ball(*n, delta)?, 0),
        TreePlusCycle { n } => rooted(tree_plus_cycle(*n, delta)?, 0),
        JoinedTreesX { n } => {
            let (g, x, _) = joined_trees_x(*n, delta)?;
            rooted(g, x)
        }
        JoinedTreesY { n } => {
            let (g, _, y) = joined_trees_y(*n, delta)?;
            rooted(g, y)
        }
        AvgDegreeCounterexample { m } => rooted(counterexample_ball(*m, delta)?, 0),
        Cayley { table, generators } => {
            let group = GroupTable::new(table.clone())?;
            rooted(cayley(&group, generators, delta)?, group.identity())
        }
    })
}

pub fn cycle(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(FamilyError::InvalidParameter(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    Ok(Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)), delta)?)
}

pub fn path(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter("path needs n >= 1".into()));
    }
    Ok(Graph::new(n, (1..n).map(|i| (i - 1, i)), delta)?)
}

pub fn complete(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter(
            "complete graph needs n >= 1".into(),
        ));
    }
    Ok(Graph::new(
        n,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))),
        delta,
    )?)
}

pub fn star(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    Ok(Graph::new(n + 1, (1..=n).map(|i| (0, i)), delta)?)
}

/// Grows a rooted tree breadth-first to depth `n`; `children(depth)` gives
/// the number of children of every vertex at that depth.
struct TreeBuilder {
    edges: Vec<(usize, usize)>,
    count: usize,
}

impl TreeBuilder {
    fn new() -> Self {
        TreeBuilder {
            edges: Vec::new(),
            count: 1,
        }
    }

    fn add(&mut self, parent: usize) -> usize {
        let v = self.count;
        self.count += 1;
        self.edges.push((parent, v));
        v
    }

    /// Returns the levels of vertex ids below (and including) `root`.
    fn grow(
        &mut self,
        root: usize,
        depth: usize,
        children: impl Fn(usize) -> usize,
    ) -> Vec<Vec<usize>> {
        let mut levels = vec![vec![root]];
        for d in 0..depth {
            let mut next = Vec::new();
            for &v in &levels[d] {
                for _ in 0..children(d) {
                    next.push(self.add(v));
                }
            }
            levels.push(next);
        }
        levels
    }

    fn fresh(&mut self) -> usize {
        self.count += 1;
        self.count - 1
    }
}

/// `T_n`: ball of radius `n` in the 3-regular tree, root 0.
pub fn t_ball(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    let mut b = TreeBuilder::new();
    b.grow(0, n, |d| if d == 0 { 3 } else { 2 });
    Ok(Graph::new(b.count, b.edges, delta)?)
}

/// `Λ_n`: perfect binary tree of depth `n`, root 0.
pub fn lambda_ball(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    let mut b = TreeBuilder::new();
    b.grow(0, n, |_| 2);
    Ok(Graph::new(b.count, b.edges, delta)?)
}

fn bar_siblings(levels: &[Vec<usize>], edges: &mut Vec<(usize, usize)>) {
    for level in levels.iter().skip(1) {
        for pair in level.chunks(2) {
            edges.push((pair[0], pair[1]));
        }
    }
}

/// `Λ̄_n`: `Λ_n` with each pair of siblings joined, root 0.
pub fn barred_lambda_ball(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    let mut b = TreeBuilder::new();
    let levels = b.grow(0, n, |_| 2);
    bar_siblings(&levels, &mut b.edges);
    Ok(Graph::new(b.count, b.edges, delta)?)
}

/// Ball of radius `n` in the tree whose vertices alternate between degree 3
/// and 4, about a degree-3 vertex (root 0).
pub fn t34_ball(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    let mut b = TreeBuilder::new();
    b.grow(0, n, |d| match (d, d % 2) {
        (0, _) => 3,
        (_, 0) => 2,
        _ => 3,
    });
    Ok(Graph::new(b.count, b.edges, delta)?)
}

/// Ball of radius `n` in the (3,4)-biregular tree with every edge
/// subdivided, about a degree-3 vertex (root 0).
pub fn t324_ball(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    let mut b = TreeBuilder::new();
    b.grow(0, n, |d| match (d, d % 4) {
        (0, _) => 3,
        (_, 1) | (_, 3) => 1,
        (_, 2) => 3,
        _ => 2,
    });
    Ok(Graph::new(b.count, b.edges, delta)?)
}

/// `T_n` with its root joined through a path on three vertices to a vertex
/// of the cycle `Z_{2n+1}`. Root 0 is the root of `T_n`.
pub fn tree_plus_cycle(n: usize, delta: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter(
            "tree_plus_cycle needs n >= 1".into(),
        ));
    }
    let mut b = TreeBuilder::new();
    b.grow(0, n, |d| if d == 0 { 3 } else { 2 });
    let m = b.add(0);
    let len = 2 * n + 1;
    let first = b.fresh();
    for _ in 1..len {
        b.fresh();
    }
    for i in 0..len {
        b.edges.push((first + i, first + (i + 1) % len));
    }
    b.edges.push((m, first));
    Ok(Graph::new(b.count, b.edges, delta)?)
}

/// `Λ` of depth `a` rooted at `x` and `Λ̄` of depth `b` rooted at `y`,
/// joined by the edge `xy`. Returns the graph, `x` and `y`.
fn joined(a: usize, b: usize, delta: usize) -> Result<(Graph, usize, usize), FamilyError> {
    let mut t = TreeBuilder::new();
    t.grow(0, a, |_| 2);
    let y = t.fresh();
    let levels = t.grow(y, b, |_| 2);
    bar_siblings(&levels, &mut t.edges);
    t.edges.push((0, y));
    Ok((Graph::new(t.count, t.edges, delta)?, 0, y))
}

/// `X_n`, the ball of radius `n` about `x` in the joined graph: `Λ_n` at `x`
/// and `Λ̄_{n-1}` at `y`.
pub fn joined_trees_x(n: usize, delta: usize) -> Result<(Graph, usize, usize), FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter(
            "joined_trees_X needs n >= 1".into(),
        ));
    }
    joined(n, n - 1, delta)
}

/// `Y_n`, the ball of radius `n` about `y`: `Λ_{n-1}` at `x` and `Λ̄_n` at `y`.
pub fn joined_trees_y(n: usize, delta: usize) -> Result<(Graph, usize, usize), FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter(
            "joined_trees_Y needs n >= 1".into(),
        ));
    }
    joined(n - 1, n, delta)
}

/// The pair `(k_n, l_n)`: `k_1 = 1`, `l_1 = 2`, and for `n >= 2`
/// `k_n = 15 Σ_{i<n} (l_i - k_i) - 2`, `l_n = ⌈(7 k_n + 2) / 6⌉`.
pub fn counterexample_indices(n: usize) -> Result<(u64, u64), FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameter(
            "stages start at n = 1".into(),
        ));
    }
    let (mut k, mut l) = (1u64, 2u64);
    let mut gaps = l - k;
    for _ in 1..n {
        k = gaps
            .checked_mul(15)
            .and_then(|x| x.checked_sub(2))
            .ok_or(FamilyError::Overflow)?;
        l = k
            .checked_mul(7)
            .and_then(|x| x.checked_add(7))
            .ok_or(FamilyError::Overflow)?
            / 6;
        gaps = gaps.checked_add(l - k).ok_or(FamilyError::Overflow)?;
    }
    Ok((k, l))
}

/// Path positions (1-based) carrying a copy of `K_6`, up to `limit`.
pub fn decorated_positions(limit: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for n in 1.. {
        let Ok((k, l)) = counterexample_indices(n) else {
            break;
        };
        if k > limit {
            break;
        }
        out.extend((k..l).take_while(|&j| j <= limit));
    }
    out
}

/// Ball of radius `m` about vertex 1 of the K6-decorated ray. Path vertex
/// `j` (1-based) has id `j - 1`; a decorated vertex is identified with one
/// vertex of its clique, so the other five are new.
pub fn counterexample_ball(m: usize, delta: usize) -> Result<Graph, FamilyError> {
    let path_len = m + 1;
    let mut edges: Vec<(usize, usize)> = (1..path_len).map(|i| (i - 1, i)).collect();
    let mut count = path_len;
    for j in decorated_positions(m as u64) {
        let anchor = (j - 1) as usize;
        let clique: Vec<usize> = std::iter::once(anchor).chain(count..count + 5).collect();
        count += 5;
        for a in 0..6 {
            for b in a + 1..6 {
                edges.push((clique[a], clique[b]));
            }
        }
    }
    Ok(Graph::new(count, edges, delta)?)
}

/// A finite group given by its multiplication table: `table[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, FamilyError> {
        let k = table.len();
        if k == 0 {
            return Err(FamilyError::NotAGroup("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(FamilyError::NotAGroup(format!(
                    "row {g} has length {}",
                    row.len()
                )));
            }
            let distinct: BTreeSet<usize> = row.iter().copied().collect();
            if distinct.len() != k || row.iter().any(|&x| x >= k) {
                return Err(FamilyError::NotAGroup(format!(
                    "row {g} is not a permutation"
                )));
            }
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| FamilyError::NotAGroup("no identity element".into()))?;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(FamilyError::NotAGroup(format!(
                            "({a}·{b})·{c} differs from {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { table, identity })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .unwrap()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    fn from_elements<T: Clone + Ord>(elems: Vec<T>, op: impl Fn(&T, &T) -> T) -> Self {
        let index = |x: &T| elems.binary_search(x).expect("closed under the operation");
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&op(a, b))).collect())
            .collect();
        GroupTable::new(table).expect("well-formed group")
    }

    /// `Z_n` under addition; element `i` is `i`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupTable::new(table).expect("cyclic group")
    }

    /// `S_k` with elements in lexicographic order of their one-line notation.
    pub fn symmetric(k: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (0..k).collect();
        loop {
            perms.push(p.clone());
            // next permutation
            let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
        }
        Self::from_elements(perms, |a, b| b.iter().map(|&x| a[x]).collect())
    }

    /// Dihedral group of order `2n`; elements `(r, s)` stand for `ρ^r σ^s`.
    pub fn dihedral(n: usize) -> Self {
        let elems: Vec<(usize, usize)> = (0..n).flat_map(|r| [(r, 0), (r, 1)]).collect();
        let mut sorted = elems;
        sorted.sort_unstable();
        Self::from_elements(sorted, |&(r1, s1), &(r2, s2)| {
            let r = if s1 == 0 {
                (r1 + r2) % n
            } else {
                (r1 + n - r2) % n
            };
            (r, s1 ^ s2)
        })
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`, as `(sign, unit)` with unit
    /// `0..4` standing for `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products: (a, b) -> (sign, unit)
        const PROD: [[(i8, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let elems: Vec<(i8, usize)> = [-1i8, 1]
            .iter()
            .flat_map(|&s| (0..4).map(move |u| (s, u)))
            .collect();
        Self::from_elements(elems, |&(s1, u1), &(s2, u2)| {
            let (s, u) = PROD[u1][u2];
            (s1 * s2 * s, u)
        })
    }
}

/// Cayley graph: vertices are group elements, `{g, g·s}` an edge for each
/// generator `s`. The generator set must be symmetric and avoid the identity.
pub fn cayley(
    group: &GroupTable,
    generators: &[usize],
    delta: usize,
) -> Result<Graph, FamilyError> {
    let k = group.order();
    let set: BTreeSet<usize> = generators.iter().copied().collect();
    if set.len() != generators.len() {
        return Err(FamilyError::BadGenerators("repeated generator".into()));
    }
    if let Some(&s) = set.iter().find(|&&s| s >= k) {
        return Err(FamilyError::BadGenerators(format!(
            "{s} is not a group element"
        )));
    }
    if set.contains(&group.identity()) {
        return Err(FamilyError::BadGenerators("contains the identity".into()));
    }
    if let Some(&s) = set.iter().find(|&&s| !set.contains(&group.inverse(s))) {
        return Err(FamilyError::BadGenerators(format!(
            "inverse of {s} is missing"
        )));
    }
    let mut edges = BTreeSet::new();
    for g in 0..k {
        for &s in &set {
            let h = group.mul(g, s);
            edges.insert((g.min(h), g.max(h)));
        }
    }
    Ok(Graph::new(k, edges, delta)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_orders() {
        for n in 0..=10 {
            assert_eq!(lambda_ball(n, 8).unwrap().order(), (1 << (n + 1)) - 1);
            assert_eq!(
                barred_lambda_ball(n, 8).unwrap().order(),
                (1 << (n + 1)) - 1
            );
        }
        for n in 1..=10 {
            assert_eq!(t_ball(n, 8).unwrap().order(), 3 * (1 << n) - 2);
            assert_eq!(tree_plus_cycle(n, 8).unwrap().order(), 3 * (1 << n) + 2 * n);
            assert_eq!(joined_trees_x(n, 8).unwrap().0.order(), 3 * (1 << n) - 2);
            assert_eq!(joined_trees_y(n, 8).unwrap().0.order(), 3 * (1 << n) - 2);
        }
    }

    #[test]
    fn counterexample_indices_follow_the_recursion() {
        assert_eq!(counterexample_indices(1).unwrap(), (1, 2));
        assert_eq!(counterexample_indices(2).unwrap(), (13, 16));
        assert_eq!(counterexample_indices(3).unwrap(), (58, 68));
        assert!(counterexample_indices(0).is_err());
    }

    #[test]
    fn biregular_degrees() {
        let g = t34_ball(4, 8).unwrap();
        let dist = g.distances_from(&[0]);
        for v in 0..g.order() {
            let d = dist[v].unwrap();
            if d < 4 {
                assert_eq!(g.degree(v), if d % 2 == 0 { 3 } else { 4 });
            }
        }
        let g = t324_ball(8, 8).unwrap();
        let dist = g.distances_from(&[0]);
        for v in 0..g.order() {
            let d = dist[v].unwrap();
            if d < 8 {
                let want = match d % 4 {
                    0 => 3,
                    2 => 4,
                    _ => 2,
                };
                assert_eq!(g.degree(v), want);
            }
        }
    }

    #[test]
    fn group_tables() {
        assert_eq!(GroupTable::symmetric(3).order(), 6);
        assert_eq!(GroupTable::dihedral(4).order(), 8);
        assert_eq!(GroupTable::quaternion().order(), 8);
        assert!(GroupTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(GroupTable::new(vec![vec![1, 0], vec![0, 1]]).is_ok());
        let z4 = GroupTable::cyclic(4);
        assert!(cayley(&z4, &[1], 8).is_err());
        assert!(cayley(&z4, &[0, 2], 8).is_err());
        assert_eq!(cayley(&z4, &[1, 3], 8).unwrap().size(), 4);
    }

    #[test]
    fn spec_json_round_trip() {
        let s: FamilySpec = serde_json::from_str(r#"{"family":"T_ball","n":5}"#).unwrap();
        assert_eq!(s, FamilySpec::TBall { n: 5 });
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"family":"T_ball","n":5}"#);
    }
}
