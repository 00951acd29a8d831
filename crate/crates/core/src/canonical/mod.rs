//! Canonical keys for rooted and birooted graphs, the ultrametric `rho`,
//! automorphism orbits and stabilizer-orbit counts.
//!
//! Keys are byte strings. The first byte is [`KEY_VERSION`], the second a
//! kind tag: `T`/`U` for rooted/birooted trees (parenthesis encoding) and
//! `G`/`H` for rooted/birooted graphs with cycles (canonical edge list plus
//! the smallest canonical position of the root, or root pair, over its
//! automorphism orbit). Keys are stable within one release only.

mod refine;
mod tree;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{ball, BirootedGraph, Graph, GraphError, RootedGraph};
use crate::scalar::Scalar;

pub(crate) use refine::orbit_roots;
pub use refine::DEFAULT_NODE_BUDGET;

/// Version byte leading every key.
pub const KEY_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("canonical labelling exceeded the search budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn hex(bytes: &[u8]) -> String {
    use fmt::Write;
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Isomorphism class of a rooted connected graph `[X, x]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedClass(Arc<[u8]>);

/// Isomorphism class of a birooted connected graph `[X, x, y]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BirootedClass(Arc<[u8]>);

macro_rules! key_impls {
    ($t:ident) => {
        impl $t {
            pub fn as_bytes(&self) -> &[u8] {
                &self.0
            }

            pub fn to_hex(&self) -> String {
                hex(&self.0)
            }
        }

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let h = self.to_hex();
                if h.len() > 24 {
                    write!(f, "{}({}..)", stringify!($t), &h[..24])
                } else {
                    write!(f, "{}({})", stringify!($t), h)
                }
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.to_hex())
            }
        }
    };
}

key_impls!(RootedClass);
key_impls!(BirootedClass);

fn push_u32(out: &mut Vec<u8>, x: usize) {
    out.extend_from_slice(&(x as u32).to_be_bytes());
}

fn tree_key(kind: u8, body: &[u8]) -> Arc<[u8]> {
    let mut k = Vec::with_capacity(body.len() + 2);
    k.push(KEY_VERSION);
    k.push(kind);
    k.extend_from_slice(body);
    k.into()
}

/// Canonical edge list of a connected graph with cycles, without the root.
struct GraphCanon {
    body: Vec<u8>,
    labeling: Vec<usize>,
    generators: Vec<Vec<usize>>,
}

impl GraphCanon {
    fn new(g: &Graph, budget: u64) -> Result<Self, CanonError> {
        let form = refine::canonical_form(g, budget)?;
        let mut body = Vec::with_capacity(8 + 8 * form.cert.len());
        push_u32(&mut body, g.order());
        push_u32(&mut body, form.cert.len());
        for &(a, b) in &form.cert {
            push_u32(&mut body, a as usize);
            push_u32(&mut body, b as usize);
        }
        Ok(GraphCanon {
            body,
            labeling: form.labeling,
            generators: form.generators,
        })
    }

    fn key(&self, kind: u8, positions: &[usize]) -> Arc<[u8]> {
        let mut k = Vec::with_capacity(self.body.len() + 2 + 4 * positions.len());
        k.push(KEY_VERSION);
        k.push(kind);
        k.extend_from_slice(&self.body);
        for &p in positions {
            push_u32(&mut k, p);
        }
        k.into()
    }

    fn rooted_key(&self, orbit: &[usize]) -> Arc<[u8]> {
        let pos = orbit.iter().map(|&v| self.labeling[v]).min().unwrap();
        self.key(b'G', &[pos])
    }

    fn birooted_key(&self, arcs: &[(usize, usize)]) -> Arc<[u8]> {
        let (a, b) = arcs
            .iter()
            .map(|&(a, b)| (self.labeling[a], self.labeling[b]))
            .min()
            .unwrap();
        self.key(b'H', &[a, b])
    }

    /// Orbit of an arc under the group generated by the generators.
    fn arc_orbit(&self, arc: (usize, usize)) -> Vec<(usize, usize)> {
        let mut seen = vec![arc];
        let mut i = 0;
        while i < seen.len() {
            let (a, b) = seen[i];
            i += 1;
            for g in &self.generators {
                let img = (g[a], g[b]);
                if !seen.contains(&img) {
                    seen.push(img);
                }
            }
        }
        seen
    }
}

fn vertex_orbit(n: usize, generators: &[Vec<usize>], v: usize) -> Vec<usize> {
    let roots = orbit_roots(n, generators);
    (0..n).filter(|&w| roots[w] == roots[v]).collect()
}

/// Canonical key of `[X_x, x]`, the component of the root.
pub fn canonical_rooted(r: &RootedGraph) -> Result<RootedClass, CanonError> {
    canonical_rooted_with_budget(r, DEFAULT_NODE_BUDGET)
}

pub fn canonical_rooted_with_budget(
    r: &RootedGraph,
    budget: u64,
) -> Result<RootedClass, CanonError> {
    let comp = crate::graph::component(r.graph(), r.root())?;
    let g = comp.graph();
    if g.size() + 1 == g.order() {
        return Ok(RootedClass(tree_key(b'T', &tree::encode(g, 0, None))));
    }
    let canon = GraphCanon::new(g, budget)?;
    let orbit = vertex_orbit(g.order(), &canon.generators, 0);
    Ok(RootedClass(canon.rooted_key(&orbit)))
}

/// Canonical key of `[X_x, x, y]`.
pub fn canonical_birooted(b: &BirootedGraph) -> Result<BirootedClass, CanonError> {
    canonical_birooted_with_budget(b, DEFAULT_NODE_BUDGET)
}

pub fn canonical_birooted_with_budget(
    b: &BirootedGraph,
    budget: u64,
) -> Result<BirootedClass, CanonError> {
    let order = bfs_order(b.graph(), b.root());
    let (g, _) = b.graph().induced(&order)?;
    let coroot = order.iter().position(|&v| v == b.coroot()).unwrap();
    if g.size() + 1 == g.order() {
        return Ok(BirootedClass(tree_key(
            b'U',
            &tree::encode(&g, 0, Some(coroot)),
        )));
    }
    let canon = GraphCanon::new(&g, budget)?;
    Ok(BirootedClass(
        canon.birooted_key(&canon.arc_orbit((0, coroot))),
    ))
}

/// Largest radius at which the balls about the roots agree, or `None` when
/// the rooted components are isomorphic.
pub fn agreement_radius(a: &RootedGraph, b: &RootedGraph) -> Result<Option<usize>, CanonError> {
    if canonical_rooted(a)? == canonical_rooted(b)? {
        return Ok(None);
    }
    let ecc = |r: &RootedGraph| {
        r.graph()
            .distances_from(&[r.root()])
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0)
    };
    let limit = ecc(a).max(ecc(b)) + 1;
    for s in 1..=limit {
        let ka = canonical_rooted(&ball(a.graph(), a.root(), s)?)?;
        let kb = canonical_rooted(&ball(b.graph(), b.root(), s)?)?;
        if ka != kb {
            return Ok(Some(s - 1));
        }
    }
    unreachable!("non-isomorphic components differ at some radius")
}

/// The rooted-graph ultrametric: `0` for isomorphic inputs, `2^{-r}` where
/// `r` is the largest radius at which the balls agree.
pub fn rho<S: Scalar>(a: &RootedGraph, b: &RootedGraph) -> Result<S, CanonError> {
    Ok(match agreement_radius(a, b)? {
        None => S::zero(),
        Some(r) => S::dyadic(r as u32),
    })
}

/// Orbits of `Aut(X)` on vertices together with rooted and birooted class
/// keys for every vertex and arc. Isomorphic components share classes.
#[derive(Debug, Clone)]
pub struct Symmetry {
    graph: Graph,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
    vertex_class: Vec<usize>,
    classes: Vec<RootedClass>,
    members: Vec<Vec<usize>>,
    // aligned with the adjacency lists of `graph`
    arc_class: Vec<Vec<usize>>,
    arc_classes: Vec<BirootedClass>,
    arc_reps: Vec<(usize, usize)>,
}

impl Symmetry {
    pub fn analyze(graph: &Graph) -> Result<Self, CanonError> {
        Self::analyze_with_budget(graph, DEFAULT_NODE_BUDGET)
    }

    pub fn analyze_with_budget(graph: &Graph, budget: u64) -> Result<Self, CanonError> {
        let n = graph.order();
        let components = graph.components();
        let mut component = vec![0; n];
        let mut vkey: Vec<Option<Arc<[u8]>>> = vec![None; n];
        let mut akey: Vec<Vec<Option<Arc<[u8]>>>> =
            (0..n).map(|v| vec![None; graph.degree(v)]).collect();

        for (ci, comp) in components.iter().enumerate() {
            for &v in comp {
                component[v] = ci;
            }
            let (h, map) = graph.induced(comp)?;
            let (local_v, local_a) = if h.size() + 1 == h.order() {
                analyze_tree(&h)
            } else {
                analyze_cyclic(&h, &GraphCanon::new(&h, budget)?)
            };
            for (i, &v) in map.iter().enumerate() {
                vkey[v] = Some(local_v[i].clone());
                for (j, &w) in h.neighbors(i).iter().enumerate() {
                    let gw = map[w];
                    let gj = graph.neighbors(v).binary_search(&gw).unwrap();
                    akey[v][gj] = Some(local_a[i][j].clone());
                }
            }
        }

        let mut class_index: BTreeMap<Arc<[u8]>, usize> = BTreeMap::new();
        for k in vkey.iter().flatten() {
            class_index.entry(k.clone()).or_insert(0);
        }
        for (i, v) in class_index.values_mut().enumerate() {
            *v = i;
        }
        let classes: Vec<RootedClass> =
            class_index.keys().map(|k| RootedClass(k.clone())).collect();
        let vertex_class: Vec<usize> = vkey
            .iter()
            .map(|k| class_index[k.as_ref().unwrap()])
            .collect();
        let mut members = vec![Vec::new(); classes.len()];
        for (v, &c) in vertex_class.iter().enumerate() {
            members[c].push(v);
        }

        let mut arc_index: BTreeMap<Arc<[u8]>, usize> = BTreeMap::new();
        for row in &akey {
            for k in row.iter().flatten() {
                arc_index.entry(k.clone()).or_insert(0);
            }
        }
        for (i, v) in arc_index.values_mut().enumerate() {
            *v = i;
        }
        let arc_classes: Vec<BirootedClass> =
            arc_index.keys().map(|k| BirootedClass(k.clone())).collect();
        let arc_class: Vec<Vec<usize>> = akey
            .iter()
            .map(|row| row.iter().map(|k| arc_index[k.as_ref().unwrap()]).collect())
            .collect();
        let mut arc_reps = vec![(usize::MAX, usize::MAX); arc_classes.len()];
        for v in 0..n {
            for (j, &w) in graph.neighbors(v).iter().enumerate() {
                let c = arc_class[v][j];
                if arc_reps[c].0 == usize::MAX {
                    arc_reps[c] = (v, w);
                }
            }
        }

        Ok(Symmetry {
            graph: graph.clone(),
            component,
            components,
            vertex_class,
            classes,
            members,
            arc_class,
            arc_classes,
            arc_reps,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Rooted classes, sorted by key bytes.
    pub fn classes(&self) -> &[RootedClass] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.vertex_class[v]
    }

    pub fn class_index(&self, key: &RootedClass) -> Option<usize> {
        self.classes.binary_search(key).ok()
    }

    /// Vertices of each class; for a finite graph these are the orbits of `Aut(X)`.
    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn representative(&self, class: usize) -> usize {
        self.members[class][0]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.members
    }

    /// Birooted classes of arcs, sorted by key bytes.
    pub fn arc_classes(&self) -> &[BirootedClass] {
        &self.arc_classes
    }

    pub fn arc_representative(&self, arc_class: usize) -> (usize, usize) {
        self.arc_reps[arc_class]
    }

    /// Class of the arc `(a, b)`; `None` if `b` is not a neighbour of `a`.
    pub fn arc_class_of(&self, a: usize, b: usize) -> Option<usize> {
        let j = self.graph.neighbors(a).binary_search(&b).ok()?;
        Some(self.arc_class[a][j])
    }

    /// `|G_a b|`: neighbours of `a` in the same birooted class as `(a, b)`.
    pub fn stabilizer_count(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.arc_class_of(a, b)?;
        Some(self.arc_class[a].iter().filter(|&&x| x == c).count())
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }
}

fn analyze_tree(h: &Graph) -> (Vec<Arc<[u8]>>, Vec<Vec<Arc<[u8]>>>) {
    let labels = tree::orbit_labels(h, 0);
    let mut vcache: HashMap<usize, Arc<[u8]>> = HashMap::new();
    let lv: Vec<Arc<[u8]>> = (0..h.order())
        .map(|v| {
            vcache
                .entry(labels[&v])
                .or_insert_with(|| tree_key(b'T', &tree::encode(h, v, None)))
                .clone()
        })
        .collect();
    let mut acache: HashMap<(usize, usize), Arc<[u8]>> = HashMap::new();
    let la = (0..h.order())
        .map(|v| {
            h.neighbors(v)
                .iter()
                .map(|&w| {
                    acache
                        .entry((labels[&v], labels[&w]))
                        .or_insert_with(|| tree_key(b'U', &tree::encode(h, v, Some(w))))
                        .clone()
                })
                .collect()
        })
        .collect();
    (lv, la)
}

fn analyze_cyclic(h: &Graph, canon: &GraphCanon) -> (Vec<Arc<[u8]>>, Vec<Vec<Arc<[u8]>>>) {
    let n = h.order();
    let roots = orbit_roots(n, &canon.generators);
    let mut orbits: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..n {
        orbits.entry(roots[v]).or_default().push(v);
    }
    let okey: HashMap<usize, Arc<[u8]>> = orbits
        .iter()
        .map(|(&r, members)| (r, canon.rooted_key(members)))
        .collect();
    let lv = (0..n).map(|v| okey[&roots[v]].clone()).collect();

    let mut offset = vec![0; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + h.degree(v);
    }
    let arc_id = |a: usize, b: usize| offset[a] + h.neighbors(a).binary_search(&b).unwrap();
    let mut parent: Vec<usize> = (0..offset[n]).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for g in &canon.generators {
        for a in 0..n {
            for &b in h.neighbors(a) {
                let (x, y) = (
                    find(&mut parent, arc_id(a, b)),
                    find(&mut parent, arc_id(g[a], g[b])),
                );
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut arc_orbits: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    let mut arc_root = vec![0; offset[n]];
    for a in 0..n {
        for &b in h.neighbors(a) {
            let r = find(&mut parent, arc_id(a, b));
            arc_root[arc_id(a, b)] = r;
            arc_orbits.entry(r).or_default().push((a, b));
        }
    }
    let akey: HashMap<usize, Arc<[u8]>> = arc_orbits
        .iter()
        .map(|(&r, arcs)| (r, canon.birooted_key(arcs)))
        .collect();
    let la = (0..n)
        .map(|a| {
            h.neighbors(a)
                .iter()
                .map(|&b| akey[&arc_root[arc_id(a, b)]].clone())
                .collect()
        })
        .collect();
    (lv, la)
}

/// Partition of `V(X)` into orbits of `Aut(X)`, ordered by class key.
pub fn automorphism_orbits(x: &Graph) -> Result<Vec<Vec<usize>>, CanonError> {
    Ok(Symmetry::analyze(x)?.members)
}

/// `|G_a b|` for adjacent `a`, `b`.
pub fn stabilizer_orbit_count(x: &Graph, a: usize, b: usize) -> Result<usize, CanonError> {
    x.check_vertex(a)?;
    x.check_vertex(b)?;
    if !x.has_edge(a, b) {
        return Err(GraphError::NotAdjacent { root: a, coroot: b }.into());
    }
    let order = bfs_order(x, a);
    let (g, _) = x.induced(&order)?;
    let sym = Symmetry::analyze(&g)?;
    let local_b = order.iter().position(|&v| v == b).unwrap();
    Ok(sym.stabilizer_count(0, local_b).unwrap())
}

fn bfs_order(x: &Graph, root: usize) -> Vec<usize> {
    let mut order = vec![root];
    let mut seen = vec![false; x.order()];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in x.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}
