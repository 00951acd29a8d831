//! Measures sustained by finite graphs: laws, integration of local
//! functions, unimodularity checks and the exact solver for unimodular
//! measures.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::canonical::{
    canonical_birooted, canonical_rooted, BirootedClass, CanonError, RootedClass, Symmetry,
};
use crate::graph::{ball, disjoint_union, BirootedGraph, Graph, GraphError, RootedGraph};
use crate::linalg::{solve_exact, LinalgError};
use crate::scalar::{sum, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("mass vector has {got} entries for {classes} classes")]
    Length { got: usize, classes: usize },
    #[error("negative mass {mass} on class {class}")]
    Negative { class: String, mass: String },
    #[error("masses sum to {total}, not 1")]
    NotNormalized { total: String },
    #[error("class is not a rooted class of the host")]
    UnknownClass,
    #[error("class of vertex {vertex} is given more than once")]
    DuplicateClass { vertex: usize },
    #[error("host graph is not connected")]
    Disconnected,
    #[error("part {0} is not connected")]
    DisconnectedPart(usize),
    #[error("the component carries no mass")]
    NullComponent,
    #[error("parts {0} and {1} are isomorphic")]
    IsomorphicParts(usize, usize),
    #[error("internal error in the linear solve: {0}")]
    Linalg(#[from] LinalgError),
}

/// Probability mass function on the rooted classes of a finite host graph.
#[derive(Debug, Clone)]
pub struct SustainedMeasure<S> {
    host: Arc<Symmetry>,
    mass: Vec<S>,
}

impl<S: Scalar> PartialEq for SustainedMeasure<S> {
    fn eq(&self, other: &Self) -> bool {
        self.host.classes() == other.host.classes() && self.mass == other.mass
    }
}

impl<S: Scalar> SustainedMeasure<S> {
    /// Masses indexed like `host.classes()`.
    pub fn new(host: Arc<Symmetry>, mass: Vec<S>) -> Result<Self, MeasureError> {
        let classes = host.classes().len();
        if mass.len() != classes {
            return Err(MeasureError::Length {
                got: mass.len(),
                classes,
            });
        }
        if let Some(i) = mass.iter().position(|m| m.is_negative()) {
            return Err(MeasureError::Negative {
                class: host.classes()[i].to_hex(),
                mass: mass[i].to_string(),
            });
        }
        let total = sum(mass.iter().cloned());
        if !total.is_one() {
            return Err(MeasureError::NotNormalized {
                total: total.to_string(),
            });
        }
        Ok(SustainedMeasure { host, mass })
    }

    /// Builds a measure from `(class, mass)` pairs; unlisted classes get 0.
    pub fn from_classes(
        host: Arc<Symmetry>,
        entries: impl IntoIterator<Item = (RootedClass, S)>,
    ) -> Result<Self, MeasureError> {
        let mut mass = vec![None; host.classes().len()];
        for (class, m) in entries {
            let i = host.class_index(&class).ok_or(MeasureError::UnknownClass)?;
            if mass[i].is_some() {
                return Err(MeasureError::DuplicateClass {
                    vertex: host.representative(i),
                });
            }
            mass[i] = Some(m);
        }
        Self::new(
            host,
            mass.into_iter()
                .map(|m| m.unwrap_or_else(S::zero))
                .collect(),
        )
    }

    /// Builds a measure from `(vertex, mass)` pairs, each vertex standing for
    /// its class; unlisted classes get 0.
    pub fn from_vertices(
        host: Arc<Symmetry>,
        entries: impl IntoIterator<Item = (usize, S)>,
    ) -> Result<Self, MeasureError> {
        let mut mass = vec![None; host.classes().len()];
        for (v, m) in entries {
            host.graph().check_vertex(v)?;
            let i = host.class_of(v);
            if mass[i].is_some() {
                return Err(MeasureError::DuplicateClass { vertex: v });
            }
            mass[i] = Some(m);
        }
        Self::new(
            host,
            mass.into_iter()
                .map(|m| m.unwrap_or_else(S::zero))
                .collect(),
        )
    }

    pub fn host(&self) -> &Arc<Symmetry> {
        &self.host
    }

    pub fn graph(&self) -> &Graph {
        self.host.graph()
    }

    /// Masses indexed like `host().classes()`.
    pub fn masses(&self) -> &[S] {
        &self.mass
    }

    pub fn mass(&self, class: usize) -> &S {
        &self.mass[class]
    }

    pub fn mass_of_class(&self, key: &RootedClass) -> Option<&S> {
        self.host.class_index(key).map(|i| &self.mass[i])
    }

    pub fn mass_at_vertex(&self, v: usize) -> &S {
        &self.mass[self.host.class_of(v)]
    }

    /// `(class, mass)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&RootedClass, &S)> {
        self.host.classes().iter().zip(&self.mass)
    }

    /// Every rooted class of the host has positive mass.
    pub fn is_strictly_sustained(&self) -> bool {
        self.mass.iter().all(|m| m.is_positive())
    }
}

/// The law `Ψ(X)`: each class gets the fraction of vertices in its orbit.
pub fn law<S: Scalar>(x: &Graph) -> Result<SustainedMeasure<S>, MeasureError> {
    law_on(Arc::new(Symmetry::analyze(x)?))
}

pub fn law_on<S: Scalar>(host: Arc<Symmetry>) -> Result<SustainedMeasure<S>, MeasureError> {
    let n = S::from_count(host.graph().order());
    let mass = host
        .orbits()
        .iter()
        .map(|o| S::from_count(o.len()) / n.clone())
        .collect();
    SustainedMeasure::new(host, mass)
}

/// How a [`LocalFunction`] computes its value from the ball about the root.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalRule<S> {
    /// Value looked up by the canonical key of the radius-`r` ball.
    Table {
        table: BTreeMap<RootedClass, S>,
        default: S,
    },
    /// Degree of the root.
    Degree,
    Constant(S),
}

/// A bounded function on rooted graphs that only depends on the ball of a
/// fixed radius about the root.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFunction<S> {
    pub radius: usize,
    pub rule: LocalRule<S>,
    /// All values lie in `[-bound, bound]`.
    pub bound: S,
}

impl<S: Scalar> LocalFunction<S> {
    /// Root degree; bounded by the degree cap.
    pub fn degree(delta: usize) -> Self {
        LocalFunction {
            radius: 1,
            rule: LocalRule::Degree,
            bound: S::from_count(delta),
        }
    }

    pub fn constant(c: S) -> Self {
        LocalFunction {
            radius: 0,
            bound: c.abs(),
            rule: LocalRule::Constant(c),
        }
    }

    pub fn table(radius: usize, table: BTreeMap<RootedClass, S>, default: S) -> Self {
        let bound = table
            .values()
            .fold(default.abs(), |b, v| S::max_of(b, v.abs()));
        LocalFunction {
            radius,
            rule: LocalRule::Table { table, default },
            bound,
        }
    }

    /// Indicator of one radius-`r` ball type.
    pub fn indicator(radius: usize, key: RootedClass) -> Self {
        Self::table(radius, BTreeMap::from([(key, S::one())]), S::zero())
    }

    /// Value at `(X, x)`.
    pub fn eval_at(&self, x: &Graph, v: usize) -> Result<S, CanonError> {
        Ok(match &self.rule {
            LocalRule::Constant(c) => c.clone(),
            LocalRule::Degree => S::from_count(x.degree(v)),
            LocalRule::Table { table, default } => {
                let key = canonical_rooted(&ball(x, v, self.radius)?)?;
                table.get(&key).cloned().unwrap_or_else(|| default.clone())
            }
        })
    }

    pub fn eval(&self, r: &RootedGraph) -> Result<S, CanonError> {
        self.eval_at(r.graph(), r.root())
    }
}

/// `∫ f dμ`, evaluating `f` on one representative per class.
pub fn integrate<S: Scalar>(
    f: &LocalFunction<S>,
    m: &SustainedMeasure<S>,
) -> Result<S, MeasureError> {
    let mut total = S::zero();
    for (i, mass) in m.masses().iter().enumerate() {
        if !mass.is_zero() {
            total = total + f.eval_at(m.graph(), m.host.representative(i))? * mass.clone();
        }
    }
    Ok(total)
}

/// Nonnegative function on birooted graphs, depending on the radius-`r`
/// ball about the root (with the coroot marked).
#[derive(Debug, Clone, PartialEq)]
pub struct BirootedWeight<S> {
    pub radius: usize,
    pub table: BTreeMap<BirootedClass, S>,
    pub default: S,
}

impl<S: Scalar> BirootedWeight<S> {
    /// Value at `(X, a, b)`; the ball radius is raised to 1 so that it
    /// contains the coroot.
    pub fn eval_at(&self, x: &Graph, a: usize, b: usize) -> Result<S, CanonError> {
        let r = ball(x, a, self.radius.max(1))?;
        let local_b = ball_position(x, a, b, self.radius.max(1));
        let key = canonical_birooted(&BirootedGraph::new(r.graph().clone(), 0, local_b)?)?;
        Ok(self
            .table
            .get(&key)
            .cloned()
            .unwrap_or_else(|| self.default.clone()))
    }
}

// position of `b` in the breadth-first vertex order used by `ball`
fn ball_position(x: &Graph, a: usize, b: usize, r: usize) -> usize {
    let mut order = vec![a];
    let mut dist = vec![usize::MAX; x.order()];
    dist[a] = 0;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        if dist[v] == r {
            continue;
        }
        for &w in x.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                order.push(w);
            }
        }
    }
    order
        .iter()
        .position(|&v| v == b)
        .expect("coroot lies in the ball")
}

/// Both sides of the mass-transport identity for `f`:
/// `(∫ Σ_y f(X,x,y) dμ, ∫ Σ_y f(X,y,x) dμ)`.
pub fn mass_transport<S: Scalar>(
    m: &SustainedMeasure<S>,
    f: &BirootedWeight<S>,
) -> Result<(S, S), MeasureError> {
    let g = m.graph();
    let (mut out, mut inn) = (S::zero(), S::zero());
    for (i, mass) in m.masses().iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        let x = m.host.representative(i);
        for &y in g.neighbors(x) {
            out = out + mass.clone() * f.eval_at(g, x, y)?;
            inn = inn + mass.clone() * f.eval_at(g, y, x)?;
        }
    }
    Ok((out, inn))
}

/// A violated transport equation: for the birooted class `class`
/// (represented by `arc`), outgoing and incoming masses differ.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S> {
    pub class: BirootedClass,
    pub arc: (usize, usize),
    pub out_mass: S,
    pub in_mass: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    Pass,
    Fail(Witness<S>),
}

impl<S> Verdict<S> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Checks the mass-transport identity for the characteristic function of
/// every birooted class of the host.
pub fn check_unimodular_definitional<S: Scalar>(m: &SustainedMeasure<S>) -> Verdict<S> {
    let host = &m.host;
    let g = host.graph();
    let k = host.arc_classes().len();
    let mut out = vec![S::zero(); k];
    let mut inn = vec![S::zero(); k];
    for (i, mass) in m.masses().iter().enumerate() {
        let x = host.representative(i);
        for &y in g.neighbors(x) {
            let fwd = host.arc_class_of(x, y).unwrap();
            let back = host.arc_class_of(y, x).unwrap();
            out[fwd] = out[fwd].clone() + mass.clone();
            inn[back] = inn[back].clone() + mass.clone();
        }
    }
    for c in 0..k {
        if out[c] != inn[c] {
            return Verdict::Fail(Witness {
                class: host.arc_classes()[c].clone(),
                arc: host.arc_representative(c),
                out_mass: out[c].clone(),
                in_mass: inn[c].clone(),
            });
        }
    }
    Verdict::Pass
}

/// Checks `|G_a b| μ[a] = |G_b a| μ[b]` on one arc per birooted class.
/// The witness reports the two sides as out/in masses.
pub fn check_unimodular_criterion<S: Scalar>(
    m: &SustainedMeasure<S>,
) -> Result<Verdict<S>, MeasureError> {
    let host = &m.host;
    if host.components().len() != 1 {
        return Err(MeasureError::Disconnected);
    }
    for c in 0..host.arc_classes().len() {
        let (a, b) = host.arc_representative(c);
        let lhs = S::from_count(host.stabilizer_count(a, b).unwrap()) * m.mass_at_vertex(a).clone();
        let rhs = S::from_count(host.stabilizer_count(b, a).unwrap()) * m.mass_at_vertex(b).clone();
        if lhs != rhs {
            return Ok(Verdict::Fail(Witness {
                class: host.arc_classes()[c].clone(),
                arc: (a, b),
                out_mass: lhs,
                in_mass: rhs,
            }));
        }
    }
    Ok(Verdict::Pass)
}

/// Unimodular measures sustained by a finite graph: the convex hull of one
/// extreme measure per isomorphism type of component.
#[derive(Debug, Clone)]
pub struct UnimodularSolution<S> {
    host: Arc<Symmetry>,
    extremes: Vec<SustainedMeasure<S>>,
}

impl<S: Scalar> UnimodularSolution<S> {
    pub fn host(&self) -> &Arc<Symmetry> {
        &self.host
    }

    /// The component laws `Ψ(X^k)`, as measures on the whole host, in key
    /// order of their smallest class.
    pub fn extremes(&self) -> &[SustainedMeasure<S>] {
        &self.extremes
    }

    /// Exactly one unimodular measure is sustained.
    pub fn is_unique(&self) -> bool {
        self.extremes.len() == 1
    }

    /// `Σ w_k Ψ(X^k)`; weights must be nonnegative and sum to 1.
    pub fn combine(&self, weights: &[S]) -> Result<SustainedMeasure<S>, MeasureError> {
        if weights.len() != self.extremes.len() {
            return Err(MeasureError::Length {
                got: weights.len(),
                classes: self.extremes.len(),
            });
        }
        let mut mass = vec![S::zero(); self.host.classes().len()];
        for (w, e) in weights.iter().zip(&self.extremes) {
            for (i, m) in e.masses().iter().enumerate() {
                mass[i] = mass[i].clone() + w.clone() * m.clone();
            }
        }
        SustainedMeasure::new(self.host.clone(), mass)
    }
}

/// Solves the criterion equations plus normalization, separately for each
/// isomorphism type of component.
pub fn solve_unimodular<S: Scalar>(x: &Graph) -> Result<UnimodularSolution<S>, MeasureError> {
    solve_unimodular_on(Arc::new(Symmetry::analyze(x)?))
}

pub fn solve_unimodular_on<S: Scalar>(
    host: Arc<Symmetry>,
) -> Result<UnimodularSolution<S>, MeasureError> {
    // components with the same class set are isomorphic
    let mut types: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    for comp in host.components() {
        let classes: BTreeSet<usize> = comp.iter().map(|&v| host.class_of(v)).collect();
        types.insert(classes.into_iter().collect(), ());
    }
    let mut extremes = Vec::new();
    for classes in types.keys() {
        let col: BTreeMap<usize, usize> =
            classes.iter().enumerate().map(|(j, &c)| (c, j)).collect();
        let k = classes.len();
        let mut rows: Vec<Vec<S>> = Vec::new();
        let mut rhs: Vec<S> = Vec::new();
        for c in 0..host.arc_classes().len() {
            let (a, b) = host.arc_representative(c);
            let (ca, cb) = (host.class_of(a), host.class_of(b));
            let Some(&ja) = col.get(&ca) else { continue };
            let jb = col[&cb];
            let mut row = vec![S::zero(); k];
            row[ja] = row[ja].clone() + S::from_count(host.stabilizer_count(a, b).unwrap());
            row[jb] = row[jb].clone() - S::from_count(host.stabilizer_count(b, a).unwrap());
            rows.push(row);
            rhs.push(S::zero());
        }
        rows.push(vec![S::one(); k]);
        rhs.push(S::one());
        let sol = solve_exact(&rows, &rhs)?;
        let mut mass = vec![S::zero(); host.classes().len()];
        for (j, &c) in classes.iter().enumerate() {
            mass[c] = sol[j].clone();
        }
        extremes.push(SustainedMeasure::new(host.clone(), mass)?);
    }
    Ok(UnimodularSolution { host, extremes })
}

/// Law of `Σ b_k X^k` assembled from the component laws with weights
/// `b_k |V(X^k)| / |V(X)|`. Parts must be connected and pairwise
/// non-isomorphic. The host is `disjoint_union(parts)`.
pub fn law_of_disjoint_union<S: Scalar>(
    parts: &[(Graph, usize)],
) -> Result<SustainedMeasure<S>, MeasureError> {
    let mut part_laws = Vec::with_capacity(parts.len());
    for (i, (g, _)) in parts.iter().enumerate() {
        if !g.is_connected() {
            return Err(MeasureError::DisconnectedPart(i));
        }
        part_laws.push(law::<S>(g)?);
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let a = part_laws[i].host.classes();
            if part_laws[j].host.class_index(&a[0]).is_some() {
                return Err(MeasureError::IsomorphicParts(i, j));
            }
        }
    }
    let host = Arc::new(Symmetry::analyze(&disjoint_union(parts)?)?);
    let total = S::from_count(host.graph().order());
    let mut entries = Vec::new();
    for ((g, b), pl) in parts.iter().zip(&part_laws) {
        let w = S::from_count(b * g.order()) / total.clone();
        for (class, m) in pl.entries() {
            entries.push((class.clone(), w.clone() * m.clone()));
        }
    }
    SustainedMeasure::from_classes(host, entries)
}

/// `μ` conditioned on the rooted classes of the component containing `y`.
pub fn restrict_to_component<S: Scalar>(
    m: &SustainedMeasure<S>,
    y: usize,
) -> Result<SustainedMeasure<S>, MeasureError> {
    let host = &m.host;
    host.graph().check_vertex(y)?;
    let comp = &host.components()[host.component_of(y)];
    let classes: BTreeSet<usize> = comp.iter().map(|&v| host.class_of(v)).collect();
    let a = sum(classes.iter().map(|&c| m.mass[c].clone()));
    if a.is_zero() {
        return Err(MeasureError::NullComponent);
    }
    let mass = (0..m.mass.len())
        .map(|c| {
            if classes.contains(&c) {
                m.mass[c].clone() / a.clone()
            } else {
                S::zero()
            }
        })
        .collect();
    SustainedMeasure::new(host.clone(), mass)
}
