//! Shared helpers for integration tests: seeded random graphs and
//! brute-force oracles that do not touch the library's canonical forms.
#![allow(dead_code)]

use graphlaw::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random graph on `n` vertices; each pair is tried with probability `p`,
/// skipping edges that would break the degree cap.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64, delta: usize) -> Graph {
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if deg[u] < delta && deg[v] < delta && rng.gen_bool(p) {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges, delta).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(rng: &mut StdRng, n: usize, extra: usize, delta: usize) -> Graph {
    assert!(delta >= 2 || n <= 2);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    let mut has = std::collections::BTreeSet::new();
    for v in 1..n {
        loop {
            let u = rng.gen_range(0..v);
            if deg[u] < delta {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
                has.insert((u, v));
                break;
            }
        }
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let (u, v) = (u.min(v), u.max(v));
        if u != v && deg[u] < delta && deg[v] < delta && has.insert((u, v)) {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    // shuffle labels so generators' structure is not visible in the ids
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    Graph::new(n, edges.into_iter().map(|(u, v)| (perm[u], perm[v])), delta).unwrap()
}

/// Random connected graph with a random size in `2..=max_n`.
pub fn random_small_connected(rng: &mut StdRng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let extra = rng.gen_range(0..=n);
    let delta = rng.gen_range(3..=5);
    random_connected_graph(rng, n, extra, delta)
}

pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::new(
        g.order(),
        g.edges().map(|(u, v)| (perm[u], perm[v])),
        g.delta(),
    )
    .unwrap()
}

pub fn random_perm(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm
}

/// Backtracking search for isomorphisms `g -> h` extending `fixed`.
/// Calls `visit` on each complete map; stops when it returns `false`.
fn extend(
    g: &Graph,
    h: &Graph,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    order: &[usize],
    i: usize,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    if i == order.len() {
        return visit(map);
    }
    let v = order[i];
    if map[v].is_some() {
        return extend(g, h, map, used, order, i + 1, visit);
    }
    for w in 0..h.order() {
        if used[w] || g.degree(v) != h.degree(w) {
            continue;
        }
        let ok = (0..g.order()).all(|u| match map[u] {
            Some(x) => g.has_edge(u, v) == h.has_edge(x, w),
            None => true,
        });
        if !ok {
            continue;
        }
        map[v] = Some(w);
        used[w] = true;
        let go_on = extend(g, h, map, used, order, i + 1, visit);
        map[v] = None;
        used[w] = false;
        if !go_on {
            return false;
        }
    }
    true
}

fn bfs_order(g: &Graph, starts: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut order = Vec::new();
    for s in starts.iter().copied().chain(0..g.order()) {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Every automorphism of `g`, by exhaustive backtracking.
pub fn brute_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let order = bfs_order(g, &[]);
    let mut out = Vec::new();
    let mut map = vec![None; g.order()];
    let mut used = vec![false; g.order()];
    extend(g, g, &mut map, &mut used, &order, 0, &mut |m| {
        out.push(m.iter().map(|x| x.unwrap()).collect());
        true
    });
    out
}

/// Orbit index per vertex under the brute-force automorphism group.
pub fn brute_orbit_ids(g: &Graph) -> Vec<usize> {
    let auts = brute_automorphisms(g);
    let n = g.order();
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if id[v] == usize::MAX {
            for a in &auts {
                id[a[v]] = next;
            }
            next += 1;
        }
    }
    id
}

/// `|G_a b|` by brute force.
pub fn brute_stabilizer_count(g: &Graph, a: usize, b: usize) -> usize {
    let auts = brute_automorphisms(g);
    let mut images: Vec<usize> = auts.iter().filter(|p| p[a] == a).map(|p| p[b]).collect();
    images.sort_unstable();
    images.dedup();
    images.len()
}

/// Whether the components of the given roots are isomorphic by a map
/// sending `roots_g[i]` to `roots_h[i]`.
pub fn brute_rooted_iso(g: &Graph, roots_g: &[usize], h: &Graph, roots_h: &[usize]) -> bool {
    let (cg, mg) = component_of(g, roots_g[0]);
    let (ch, mh) = component_of(h, roots_h[0]);
    if cg.order() != ch.order() || cg.size() != ch.size() {
        return false;
    }
    let local = |m: &[usize], v: usize| m.iter().position(|&x| x == v).unwrap();
    let rg: Vec<usize> = roots_g.iter().map(|&v| local(&mg, v)).collect();
    let rh: Vec<usize> = roots_h.iter().map(|&v| local(&mh, v)).collect();
    let mut map = vec![None; cg.order()];
    let mut used = vec![false; ch.order()];
    for (&a, &b) in rg.iter().zip(&rh) {
        if cg.degree(a) != ch.degree(b) {
            return false;
        }
        map[a] = Some(b);
        used[b] = true;
    }
    for (i, &a) in rg.iter().enumerate() {
        for (j, &b) in rg.iter().enumerate() {
            if cg.has_edge(a, b) != ch.has_edge(rh[i], rh[j]) {
                return false;
            }
        }
    }
    let order = bfs_order(&cg, &rg);
    let mut found = false;
    extend(&cg, &ch, &mut map, &mut used, &order, 0, &mut |_| {
        found = true;
        false
    });
    found
}

fn component_of(g: &Graph, x: usize) -> (Graph, Vec<usize>) {
    let dist = g.distances_from(&[x]);
    let verts: Vec<usize> = (0..g.order()).filter(|&v| dist[v].is_some()).collect();
    g.induced(&verts).unwrap()
}
