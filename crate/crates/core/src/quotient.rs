//! Labelled orbit quotients: finite descriptions of connected graphs by
//! their vertex orbits, with `m(a→b) = |G_a b|` on each adjacency.
//!
//! A unimodular measure must satisfy `m(a→b) μ[a] = m(b→a) μ[b]` along every
//! adjacency, so masses propagate as path products. A quotient is consistent
//! when every cycle has product 1; it is judicial when the propagated
//! masses can be normalized.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{CanonError, Symmetry};
use crate::graph::{Graph, DEFAULT_DELTA};
use crate::scalar::{sum, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("quotient has no orbits")]
    Empty,
    #[error("duplicate orbit name {0:?}")]
    DuplicateName(String),
    #[error("unknown orbit {0}")]
    UnknownOrbit(String),
    #[error("labels must be positive integers")]
    ZeroLabel,
    #[error("quotient graph is not connected")]
    Disconnected,
    #[error("orbit {orbit:?} has implied degree {degree}, above the cap {delta}")]
    DegreeCap {
        orbit: String,
        degree: u64,
        delta: usize,
    },
    #[error("quotient is inconsistent around a cycle")]
    Inconsistent,
    #[error("ray edges must join consecutive orbits: {0}")]
    NotARay(String),
    #[error("source graph is not connected")]
    DisconnectedGraph,
    #[error(transparent)]
    Canon(#[from] CanonError),
}

/// One adjacency of the quotient: `m_ab = |G_a b|`, `m_ba = |G_b a|`.
/// With `a == b` this is one loop entry, standing for one `G_a`-orbit of
/// same-orbit neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientEdge {
    pub a: usize,
    pub b: usize,
    pub m_ab: u64,
    pub m_ba: u64,
}

/// Finite labelled quotient of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledQuotient {
    names: Vec<String>,
    edges: Vec<QuotientEdge>,
}

fn check_names(names: &[String]) -> Result<(), QuotientError> {
    if names.is_empty() {
        return Err(QuotientError::Empty);
    }
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(QuotientError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

impl LabeledQuotient {
    pub fn new(
        names: Vec<String>,
        edges: Vec<QuotientEdge>,
        delta: usize,
    ) -> Result<Self, QuotientError> {
        check_names(&names)?;
        let k = names.len();
        let mut degree = vec![0u64; k];
        for e in &edges {
            for x in [e.a, e.b] {
                if x >= k {
                    return Err(QuotientError::UnknownOrbit(x.to_string()));
                }
            }
            if e.m_ab == 0 || e.m_ba == 0 {
                return Err(QuotientError::ZeroLabel);
            }
            degree[e.a] += e.m_ab;
            if e.a != e.b {
                degree[e.b] += e.m_ba;
            }
        }
        for (i, &d) in degree.iter().enumerate() {
            if d > delta as u64 {
                return Err(QuotientError::DegreeCap {
                    orbit: names[i].clone(),
                    degree: d,
                    delta,
                });
            }
        }
        let q = LabeledQuotient { names, edges };
        if q.tree().is_none() {
            return Err(QuotientError::Disconnected);
        }
        Ok(q)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[QuotientEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Breadth-first spanning tree from orbit 0: for each orbit, the parent
    /// edge index (`None` at the root), plus the visiting order. `None` if
    /// disconnected.
    fn tree(&self) -> Option<(Vec<Option<usize>>, Vec<usize>)> {
        let k = self.names.len();
        let mut parent: Vec<Option<Option<usize>>> = vec![None; k];
        parent[0] = Some(None);
        let mut order = Vec::with_capacity(k);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for (i, e) in self.edges.iter().enumerate() {
                let y = if e.a == x {
                    e.b
                } else if e.b == x {
                    e.a
                } else {
                    continue;
                };
                if parent[y].is_none() {
                    parent[y] = Some(Some(i));
                    queue.push_back(y);
                }
            }
        }
        Some((parent.into_iter().collect::<Option<_>>()?, order))
    }

    /// Loop entries `(m_ab, m_ba)` at an orbit.
    pub fn loops(&self, orbit: usize) -> Vec<(u64, u64)> {
        self.edges
            .iter()
            .filter(|e| e.a == orbit && e.b == orbit)
            .map(|e| (e.m_ab, e.m_ba))
            .collect()
    }
}

/// Ratio `num/den` of two labels.
fn ratio<S: Scalar>(num: u64, den: u64) -> S {
    S::from_u64(num).expect("label fits the scalar")
        / S::from_u64(den).expect("label fits the scalar")
}

/// A cycle in the quotient (closed walk of orbit indices) with label
/// product different from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BadCycle<S> {
    pub cycle: Vec<usize>,
    pub product: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Consistency<S> {
    Consistent,
    Inconsistent(BadCycle<S>),
}

/// Relative masses `μ[x] / μ[orbit 0]` along the spanning tree, or the
/// first cycle whose product is not 1.
fn potentials<S: Scalar>(q: &LabeledQuotient) -> Result<Vec<S>, BadCycle<S>> {
    let (parent, order) = q.tree().expect("validated quotient is connected");
    let k = q.len();
    let mut pot = vec![S::zero(); k];
    pot[0] = S::one();
    for &y in &order[1..] {
        let e = q.edges[parent[y].unwrap()];
        pot[y] = if e.b == y {
            pot[e.a].clone() * ratio::<S>(e.m_ab, e.m_ba)
        } else {
            pot[e.b].clone() * ratio::<S>(e.m_ba, e.m_ab)
        };
    }
    let tree_edges: BTreeSet<usize> = parent.iter().flatten().copied().collect();
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while let Some(e) = parent[x] {
            let e = q.edges[e];
            x = if e.a == x { e.b } else { e.a };
            p.push(x);
        }
        p
    };
    for (i, e) in q.edges.iter().enumerate() {
        if tree_edges.contains(&i) {
            continue;
        }
        let lhs = pot[e.a].clone() * S::from_u64(e.m_ab).unwrap();
        let rhs = pot[e.b].clone() * S::from_u64(e.m_ba).unwrap();
        if lhs != rhs {
            let (pu, pv) = (path_to_root(e.a), path_to_root(e.b));
            let lca = *pu.iter().find(|x| pv.contains(x)).unwrap();
            let mut cycle: Vec<usize> = pu
                .iter()
                .rev()
                .skip_while(|&&x| x != lca)
                .copied()
                .collect();
            let back: Vec<usize> = pv.iter().take_while(|&&x| x != lca).copied().collect();
            cycle.extend(back);
            cycle.push(lca);
            return Err(BadCycle {
                cycle,
                product: lhs / rhs,
            });
        }
    }
    Ok(pot)
}

/// Checks that every cycle of the quotient has label product 1.
pub fn validate_consistency<S: Scalar>(q: &LabeledQuotient) -> Consistency<S> {
    match potentials::<S>(q) {
        Ok(_) => Consistency::Consistent,
        Err(c) => Consistency::Inconsistent(c),
    }
}

/// Masses obtained from `μ[base] = p` by path products.
pub fn path_product_measure<S: Scalar>(
    q: &LabeledQuotient,
    base: usize,
    p: S,
) -> Result<Vec<S>, QuotientError> {
    if base >= q.len() {
        return Err(QuotientError::UnknownOrbit(base.to_string()));
    }
    let pot = potentials::<S>(q).map_err(|_| QuotientError::Inconsistent)?;
    let scale = p / pot[base].clone();
    Ok(pot.into_iter().map(|x| x * scale.clone()).collect())
}

/// An eventually periodic ray of orbits `o_0, o_1, ...`: explicit labels
/// for the first adjacencies, then one label pair repeated forever. Loop
/// entries of the last listed orbit repeat on every later orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayQuotient {
    names: Vec<String>,
    // (m(i→i+1), m(i+1→i)) for consecutive listed orbits
    prefix: Vec<(u64, u64)>,
    loops: Vec<Vec<(u64, u64)>>,
    tail: (u64, u64),
}

impl RayQuotient {
    pub fn new(
        names: Vec<String>,
        prefix: Vec<(u64, u64)>,
        loops: Vec<Vec<(u64, u64)>>,
        tail: (u64, u64),
        delta: usize,
    ) -> Result<Self, QuotientError> {
        check_names(&names)?;
        let k = names.len();
        if prefix.len() + 1 != k {
            return Err(QuotientError::NotARay(format!(
                "{k} orbits need {} consecutive adjacencies, got {}",
                k - 1,
                prefix.len()
            )));
        }
        if loops.len() != k {
            return Err(QuotientError::NotARay("one loop list per orbit".into()));
        }
        let all = prefix
            .iter()
            .chain(loops.iter().flatten())
            .chain(std::iter::once(&tail));
        if all.clone().any(|&(f, b)| f == 0 || b == 0) {
            return Err(QuotientError::ZeroLabel);
        }
        let r = RayQuotient {
            names,
            prefix,
            loops,
            tail,
        };
        for i in 0..=k {
            let d = r.degree(i);
            if d > delta as u64 {
                let orbit = r
                    .names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("{}+", r.names[k - 1]));
                return Err(QuotientError::DegreeCap {
                    orbit,
                    degree: d,
                    delta,
                });
            }
        }
        Ok(r)
    }

    /// Ray with a constant label pair and no loops, one listed orbit.
    pub fn constant(name: &str, tail: (u64, u64), delta: usize) -> Result<Self, QuotientError> {
        Self::new(
            vec![name.to_string()],
            Vec::new(),
            vec![Vec::new()],
            tail,
            delta,
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tail(&self) -> (u64, u64) {
        self.tail
    }

    fn pair(&self, i: usize) -> (u64, u64) {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    fn loops_at(&self, i: usize) -> &[(u64, u64)] {
        &self.loops[i.min(self.loops.len() - 1)]
    }

    /// Implied degree of orbit `i` (constant from `names.len()` on).
    pub fn degree(&self, i: usize) -> u64 {
        let back = if i == 0 { 0 } else { self.pair(i - 1).1 };
        back + self.pair(i).0 + self.loops_at(i).iter().map(|l| l.0).sum::<u64>()
    }
}

/// Why no unimodular measure is sustained.
#[derive(Debug, Clone, PartialEq)]
pub enum LawlessReason<S> {
    InconsistentCycle(BadCycle<S>),
    DivergentMass,
}

/// Normalized orbit masses. For rays, orbits past the listed ones continue
/// geometrically with ratio `tail_ratio`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMeasure<S> {
    pub names: Vec<String>,
    pub masses: Vec<S>,
    pub tail_ratio: Option<S>,
}

impl<S: Scalar> QuotientMeasure<S> {
    /// Mass of the `i`-th orbit (0-based), including ray tails.
    pub fn mass(&self, i: usize) -> Option<S> {
        if let Some(m) = self.masses.get(i) {
            return Some(m.clone());
        }
        let r = self.tail_ratio.clone()?;
        let mut m = self.masses.last()?.clone();
        for _ in self.masses.len() - 1..i {
            m = m * r.clone();
        }
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum JudicialityVerdict<S> {
    Judicial(QuotientMeasure<S>),
    Lawless(LawlessReason<S>),
}

impl<S> JudicialityVerdict<S> {
    pub fn is_judicial(&self) -> bool {
        matches!(self, JudicialityVerdict::Judicial(_))
    }
}

/// A finite quotient or a ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quotient {
    Finite(LabeledQuotient),
    Ray(RayQuotient),
}

pub fn decide_judicial<S: Scalar>(q: &Quotient) -> JudicialityVerdict<S> {
    match q {
        Quotient::Finite(f) => decide_judicial_finite(f),
        Quotient::Ray(r) => decide_judicial_ray(r),
    }
}

pub fn decide_judicial_finite<S: Scalar>(q: &LabeledQuotient) -> JudicialityVerdict<S> {
    match potentials::<S>(q) {
        Err(c) => JudicialityVerdict::Lawless(LawlessReason::InconsistentCycle(c)),
        Ok(pot) => {
            let total = sum(pot.iter().cloned());
            JudicialityVerdict::Judicial(QuotientMeasure {
                names: q.names.clone(),
                masses: pot.into_iter().map(|p| p / total.clone()).collect(),
                tail_ratio: None,
            })
        }
    }
}

pub fn decide_judicial_ray<S: Scalar>(r: &RayQuotient) -> JudicialityVerdict<S> {
    for (i, loops) in r.loops.iter().enumerate() {
        if let Some(&(p, q)) = loops.iter().find(|(p, q)| p != q) {
            return JudicialityVerdict::Lawless(LawlessReason::InconsistentCycle(BadCycle {
                cycle: vec![i, i],
                product: ratio(p, q),
            }));
        }
    }
    let k = r.names.len();
    let mut pot = vec![S::one()];
    for &(f, b) in &r.prefix {
        let next = pot.last().unwrap().clone() * ratio::<S>(f, b);
        pot.push(next);
    }
    let rho: S = ratio(r.tail.0, r.tail.1);
    if rho >= S::one() {
        return JudicialityVerdict::Lawless(LawlessReason::DivergentMass);
    }
    let tail = pot[k - 1].clone() * rho.clone() / (S::one() - rho.clone());
    let total = sum(pot.iter().cloned()) + tail;
    JudicialityVerdict::Judicial(QuotientMeasure {
        names: r.names.clone(),
        masses: pot.into_iter().map(|p| p / total.clone()).collect(),
        tail_ratio: Some(rho),
    })
}

/// A single-orbit graph is judicial exactly when every loop pair is balanced.
pub fn vertex_transitive_judicial(loop_labels: &[(u64, u64)]) -> bool {
    loop_labels.iter().all(|(p, q)| p == q)
}

/// Quotient of a finite connected graph by its automorphism group. Orbit
/// `i` is the `i`-th rooted class in key order and is named `"i"`.
pub fn quotient_of_finite(x: &Graph) -> Result<LabeledQuotient, QuotientError> {
    if !x.is_connected() {
        return Err(QuotientError::DisconnectedGraph);
    }
    let sym = Symmetry::analyze(x)?;
    quotient_of_symmetry(&sym)
}

pub fn quotient_of_symmetry(sym: &Symmetry) -> Result<LabeledQuotient, QuotientError> {
    let mut edges = Vec::new();
    for c in 0..sym.arc_classes().len() {
        let (a, b) = sym.arc_representative(c);
        let (ca, cb) = (sym.class_of(a), sym.class_of(b));
        if ca <= cb {
            edges.push(QuotientEdge {
                a: ca,
                b: cb,
                m_ab: sym.stabilizer_count(a, b).unwrap() as u64,
                m_ba: sym.stabilizer_count(b, a).unwrap() as u64,
            });
        }
    }
    let names = (0..sym.classes().len()).map(|i| i.to_string()).collect();
    LabeledQuotient::new(names, edges, sym.graph().delta())
}

/// Orbit reference in quotient JSON: a name or a 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrbitRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub a: OrbitRef,
    pub b: OrbitRef,
    pub m_ab: u64,
    pub m_ba: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailJson {
    pub m_fwd: u64,
    pub m_bwd: u64,
}

/// `{"orbits": [...], "edges": [...], "ray_tail": {...} | null}`. With a
/// tail, the listed orbits form the start of the ray in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientJson {
    pub orbits: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub ray_tail: Option<TailJson>,
    #[serde(default)]
    pub delta: Option<usize>,
}

impl QuotientJson {
    pub fn into_quotient(self) -> Result<Quotient, QuotientError> {
        let delta = self.delta.unwrap_or(DEFAULT_DELTA);
        check_names(&self.orbits)?;
        let resolve = |r: &OrbitRef| match r {
            OrbitRef::Index(i) if *i < self.orbits.len() => Ok(*i),
            OrbitRef::Index(i) => Err(QuotientError::UnknownOrbit(i.to_string())),
            OrbitRef::Name(n) => self
                .orbits
                .iter()
                .position(|o| o == n)
                .ok_or_else(|| QuotientError::UnknownOrbit(n.clone())),
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            edges.push(QuotientEdge {
                a: resolve(&e.a)?,
                b: resolve(&e.b)?,
                m_ab: e.m_ab,
                m_ba: e.m_ba,
            });
        }
        let Some(tail) = self.ray_tail else {
            return Ok(Quotient::Finite(LabeledQuotient::new(
                self.orbits,
                edges,
                delta,
            )?));
        };
        let k = self.orbits.len();
        let mut prefix: Vec<Option<(u64, u64)>> = vec![None; k - 1];
        let mut loops = vec![Vec::new(); k];
        for e in edges {
            if e.a == e.b {
                loops[e.a].push((e.m_ab, e.m_ba));
                continue;
            }
            let (lo, pair) = if e.a + 1 == e.b {
                (e.a, (e.m_ab, e.m_ba))
            } else if e.b + 1 == e.a {
                (e.b, (e.m_ba, e.m_ab))
            } else {
                return Err(QuotientError::NotARay(format!(
                    "orbits {:?} and {:?} are not consecutive",
                    self.orbits[e.a], self.orbits[e.b]
                )));
            };
            if prefix[lo].replace(pair).is_some() {
                return Err(QuotientError::NotARay("repeated adjacency".into()));
            }
        }
        let prefix = prefix
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    QuotientError::NotARay(format!("missing adjacency after orbit {i}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Quotient::Ray(RayQuotient::new(
            self.orbits,
            prefix,
            loops,
            (tail.m_fwd, tail.m_bwd),
            delta,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    #[test]
    fn triangle_with_unbalanced_edge() {
        let e = |a, b, m_ab, m_ba| QuotientEdge { a, b, m_ab, m_ba };
        let quo = LabeledQuotient::new(
            names(3),
            vec![e(0, 1, 2, 1), e(1, 2, 1, 1), e(2, 0, 1, 1)],
            8,
        )
        .unwrap();
        let Consistency::Inconsistent(bad) = validate_consistency::<Rational>(&quo) else {
            panic!()
        };
        assert_eq!(bad.product, q(2, 1));
        assert_eq!(bad.cycle.first(), bad.cycle.last());
        let ok = LabeledQuotient::new(
            names(3),
            vec![e(0, 1, 1, 1), e(1, 2, 1, 1), e(2, 0, 1, 1)],
            8,
        )
        .unwrap();
        assert_eq!(
            validate_consistency::<Rational>(&ok),
            Consistency::Consistent
        );
    }

    #[test]
    fn rejects_disconnected_and_overfull() {
        let e = QuotientEdge {
            a: 0,
            b: 1,
            m_ab: 3,
            m_ba: 4,
        };
        assert_eq!(
            LabeledQuotient::new(names(3), vec![e], 8),
            Err(QuotientError::Disconnected)
        );
        assert!(matches!(
            LabeledQuotient::new(names(2), vec![e], 3),
            Err(QuotientError::DegreeCap { .. })
        ));
    }

    #[test]
    fn ray_masses() {
        let s = RayQuotient::constant("1", (1, 2), 8).unwrap();
        let JudicialityVerdict::Judicial(m) = decide_judicial_ray::<Rational>(&s) else {
            panic!()
        };
        assert_eq!(m.mass(0).unwrap(), q(1, 2));
        assert_eq!(m.mass(3).unwrap(), q(1, 16));
        let z = RayQuotient::constant("1", (1, 1), 8).unwrap();
        assert_eq!(
            decide_judicial_ray::<Rational>(&z),
            JudicialityVerdict::Lawless(LawlessReason::DivergentMass)
        );
    }

    #[test]
    fn json_ray_needs_consecutive_orbits() {
        let j: QuotientJson = serde_json::from_str(
            r#"{"orbits":["a","b","c"],"edges":[{"a":"a","b":"c","m_ab":1,"m_ba":1}],"ray_tail":{"m_fwd":1,"m_bwd":2}}"#,
        )
        .unwrap();
        assert!(matches!(j.into_quotient(), Err(QuotientError::NotARay(_))));
    }
}
