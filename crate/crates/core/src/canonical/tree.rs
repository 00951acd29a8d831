//! Canonical encodings and orbits for trees.
//!
//! A rooted tree is encoded by the classic parenthesis string: a vertex is
//! `(` followed by the sorted encodings of its children and `)`. For a
//! birooted tree the coroot's subtree is bracketed with `[` `]` instead, so
//! that the distinguished edge is part of the string.

use std::collections::HashMap;

use crate::graph::Graph;

/// BFS order and parent pointers of the component of `root`.
fn bfs(graph: &Graph, roots: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut parent = vec![usize::MAX; graph.order()];
    let mut order = Vec::new();
    for &r in roots {
        parent[r] = r;
        order.push(r);
    }
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in graph.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    (order, parent)
}

/// Parenthesis encoding of the tree component of `root`. When `coroot` is
/// given it must be a neighbour of `root`, and its subtree is bracketed.
pub(crate) fn encode(graph: &Graph, root: usize, coroot: Option<usize>) -> Vec<u8> {
    let (order, parent) = bfs(graph, &[root]);
    let mut enc: HashMap<usize, Vec<u8>> = HashMap::with_capacity(order.len());
    let mut children: HashMap<usize, Vec<Vec<u8>>> = HashMap::new();
    for &v in order.iter().rev() {
        let mut kids = children.remove(&v).unwrap_or_default();
        kids.sort_unstable();
        let (open, close) = if Some(v) == coroot && v != root {
            (b'[', b']')
        } else {
            (b'(', b')')
        };
        let mut s = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
        s.push(open);
        for k in kids {
            s.extend_from_slice(&k);
        }
        s.push(close);
        if v == root {
            enc.insert(v, s);
        } else {
            children.entry(parent[v]).or_default().push(s);
        }
    }
    enc.remove(&root).unwrap()
}

/// Centre of the tree component containing `start`: one vertex or two
/// adjacent ones.
fn centre(graph: &Graph, start: usize) -> Vec<usize> {
    let (order, _) = bfs(graph, &[start]);
    if order.len() <= 2 {
        let mut c = order.clone();
        c.sort_unstable();
        return c;
    }
    let mut deg: HashMap<usize, usize> = order.iter().map(|&v| (v, graph.degree(v))).collect();
    let mut layer: Vec<usize> = order.iter().copied().filter(|v| deg[v] == 1).collect();
    let mut remaining = order.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in graph.neighbors(v) {
                let d = deg.get_mut(&w).unwrap();
                if *d > 0 {
                    *d -= 1;
                    if *d == 1 {
                        next.push(w);
                    }
                }
            }
            *deg.get_mut(&v).unwrap() = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Orbit labels for the tree component containing `start`: two vertices get
/// the same label exactly when an automorphism maps one to the other.
/// Labels are only meaningful within one call.
pub(crate) fn orbit_labels(graph: &Graph, start: usize) -> HashMap<usize, usize> {
    let centres = centre(graph, start);
    let (order, parent) = bfs(graph, &centres);
    let mut shape: HashMap<usize, usize> = HashMap::with_capacity(order.len());
    let mut kids: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut interned: HashMap<Vec<usize>, usize> = HashMap::new();
    for &v in order.iter().rev() {
        let mut k = kids.remove(&v).unwrap_or_default();
        k.sort_unstable();
        let next = interned.len();
        let id = *interned.entry(k).or_insert(next);
        shape.insert(v, id);
        if parent[v] != v {
            kids.entry(parent[v]).or_default().push(id);
        }
    }
    let mut paths: HashMap<(usize, usize), usize> = HashMap::new();
    let mut label: HashMap<usize, usize> = HashMap::with_capacity(order.len());
    for &v in &order {
        let up = if parent[v] == v {
            usize::MAX
        } else {
            label[&parent[v]]
        };
        let next = paths.len();
        let l = *paths.entry((up, shape[&v])).or_insert(next);
        label.insert(v, l);
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i)), 4).unwrap()
    }

    #[test]
    fn path_ends_match_and_differ_from_middle() {
        let p = path(3);
        assert_eq!(encode(&p, 0, None), encode(&p, 2, None));
        assert_ne!(encode(&p, 0, None), encode(&p, 1, None));
        assert_eq!(encode(&p, 1, None), b"(()())".to_vec());
    }

    #[test]
    fn birooted_direction_matters() {
        let p = path(3);
        assert_ne!(encode(&p, 0, Some(1)), encode(&p, 1, Some(0)));
        assert_eq!(encode(&p, 1, Some(0)), encode(&p, 1, Some(2)));
    }

    #[test]
    fn orbits_of_paths() {
        let l = orbit_labels(&path(4), 0);
        assert_eq!(l[&0], l[&3]);
        assert_eq!(l[&1], l[&2]);
        assert_ne!(l[&0], l[&1]);
        let l = orbit_labels(&path(5), 2);
        assert_ne!(l[&1], l[&2]);
        assert_eq!(l[&1], l[&3]);
    }
}
