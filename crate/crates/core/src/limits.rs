//! Local weak limits: ball-type distributions of finite graphs and of limit
//! measures given by rooted oracles, total-variation distances between
//! them, and the effect of deleting a small vertex set.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_rooted, CanonError, RootedClass};
use crate::families::{self, FamilyError};
use crate::graph::{ball, delete_subgraph, Graph, GraphError, RootedGraph, DEFAULT_DELTA};
use crate::measures::LocalFunction;
use crate::scalar::{sum, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("distributions have radii {0} and {1}")]
    RadiusMismatch(usize, usize),
    #[error("vertex {0} lies in the deleted set")]
    VertexDeleted(usize),
    #[error("ray index must be at least 1")]
    ZeroIndex,
    #[error("mixture weights must be positive and sum to 1")]
    BadWeights,
}

/// Which one-ended ray of orbits a geometric limit lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RayKind {
    /// `S`, the limit of `T_n` seen from the leaves.
    S,
    /// `S̄`, the limit of `Λ̄_n` seen from the leaves.
    SBar,
}

/// A fixed, possibly infinite, rooted graph that can produce its balls.
#[derive(Debug, Clone, PartialEq)]
pub enum RootedOracle {
    /// The two-way infinite path.
    Integers,
    /// Vertex `u_i` (`i >= 1`, `u_1` a leaf) of `S`.
    S(usize),
    /// Vertex `ū_i` (`i >= 1`, `ū_1` of degree 2) of `S̄`.
    SBar(usize),
    Finite(RootedGraph),
}

impl RootedOracle {
    pub fn ray(kind: RayKind, i: usize) -> Self {
        match kind {
            RayKind::S => RootedOracle::S(i),
            RayKind::SBar => RootedOracle::SBar(i),
        }
    }

    /// The radius-`r` ball about the root, rooted at its root.
    pub fn ball_at(&self, r: usize) -> Result<RootedGraph, LimitError> {
        match self {
            RootedOracle::Integers => {
                let p = families::path(2 * r + 1, DEFAULT_DELTA)?;
                Ok(ball(&p, r, r)?)
            }
            // The r-ball about u_i stays inside the subtree of its r-th
            // ancestor, which is a perfect (barred) binary tree of depth
            // r + i - 1 with u_i at depth r.
            RootedOracle::S(i) | RootedOracle::SBar(i) => {
                if *i == 0 {
                    return Err(LimitError::ZeroIndex);
                }
                let depth = r + i - 1;
                let g = if matches!(self, RootedOracle::S(_)) {
                    families::lambda_ball(depth, DEFAULT_DELTA)?
                } else {
                    families::barred_lambda_ball(depth, DEFAULT_DELTA)?
                };
                // ids are assigned level by level, so 2^r - 1 is the first
                // vertex at depth r
                Ok(ball(&g, (1usize << r) - 1, r)?)
            }
            RootedOracle::Finite(rg) => Ok(ball(rg.graph(), rg.root(), r)?),
        }
    }

    pub fn ball_key(&self, r: usize) -> Result<RootedClass, LimitError> {
        Ok(canonical_rooted(&self.ball_at(r)?)?)
    }
}

/// A probability measure on rooted graphs with countably many atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitMeasure<S> {
    /// Finitely many atoms with masses summing to 1.
    Atoms(Vec<(RootedOracle, S)>),
    /// Mass `2^{-i}` on the `i`-th vertex of the ray, `i >= 1`.
    Geometric(RayKind),
    /// Convex combination of limit measures.
    Mixture(Vec<(S, LimitMeasure<S>)>),
}

impl<S: Scalar> LimitMeasure<S> {
    /// `δ_Z`.
    pub fn delta_z() -> Self {
        LimitMeasure::Atoms(vec![(RootedOracle::Integers, S::one())])
    }

    /// `μ_S`.
    pub fn mu_s() -> Self {
        LimitMeasure::Geometric(RayKind::S)
    }

    /// `μ_S̄`.
    pub fn mu_s_bar() -> Self {
        LimitMeasure::Geometric(RayKind::SBar)
    }

    pub fn mixture(parts: Vec<(S, LimitMeasure<S>)>) -> Result<Self, LimitError> {
        if parts.iter().any(|(w, _)| *w <= S::zero())
            || sum(parts.iter().map(|(w, _)| w.clone())) != S::one()
        {
            return Err(LimitError::BadWeights);
        }
        Ok(LimitMeasure::Mixture(parts))
    }

    /// The first `k` atoms (of each mixture component), with their masses.
    pub fn atoms(&self, k: usize) -> Vec<(RootedOracle, S)> {
        match self {
            LimitMeasure::Atoms(a) => a.iter().take(k).cloned().collect(),
            LimitMeasure::Geometric(kind) => (1..=k)
                .map(|i| (RootedOracle::ray(*kind, i), S::dyadic(i as u32)))
                .collect(),
            LimitMeasure::Mixture(parts) => parts
                .iter()
                .flat_map(|(w, m)| m.atoms(k).into_iter().map(move |(o, p)| (o, p * w.clone())))
                .collect(),
        }
    }

    /// Upper bound on the mass outside [`atoms(k)`](Self::atoms).
    pub fn tail_bound(&self, k: usize) -> S {
        match self {
            LimitMeasure::Atoms(a) => sum(a.iter().skip(k).map(|(_, p)| p.clone())),
            LimitMeasure::Geometric(_) => S::dyadic(k as u32),
            LimitMeasure::Mixture(parts) => {
                sum(parts.iter().map(|(w, m)| w.clone() * m.tail_bound(k)))
            }
        }
    }

    /// Atoms whose radius-`r` balls represent the whole measure: ray
    /// vertices from index `r + 1` on all have the same `r`-ball, so the
    /// geometric tail is folded into that atom exactly.
    fn ball_atoms(&self, r: usize) -> Vec<(RootedOracle, S)> {
        match self {
            LimitMeasure::Atoms(a) => a.clone(),
            LimitMeasure::Geometric(kind) => {
                let mut out = self.atoms(r);
                out.push((RootedOracle::ray(*kind, r + 1), S::dyadic(r as u32)));
                out
            }
            LimitMeasure::Mixture(parts) => parts
                .iter()
                .flat_map(|(w, m)| {
                    m.ball_atoms(r)
                        .into_iter()
                        .map(move |(o, p)| (o, p * w.clone()))
                })
                .collect(),
        }
    }
}

/// Distribution of radius-`r` ball types.
#[derive(Debug, Clone, PartialEq)]
pub struct BallDistribution<S> {
    pub radius: usize,
    pub freq: BTreeMap<RootedClass, S>,
}

impl<S: Scalar> BallDistribution<S> {
    pub fn get(&self, key: &RootedClass) -> S {
        self.freq.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn total(&self) -> S {
        sum(self.freq.values().cloned())
    }

    fn add(&mut self, key: RootedClass, p: S) {
        let e = self.freq.entry(key).or_insert_with(S::zero);
        *e = e.clone() + p;
    }
}

fn keys_of(x: &Graph, r: usize) -> Result<Vec<RootedClass>, LimitError> {
    (0..x.order())
        .into_par_iter()
        .map(|v| Ok(canonical_rooted(&ball(x, v, r)?)?))
        .collect()
}

/// `freq[key] = #{x : the r-ball about x has this key} / |V(X)|`.
pub fn ball_distribution<S: Scalar>(
    x: &Graph,
    r: usize,
) -> Result<BallDistribution<S>, LimitError> {
    let mut counts: BTreeMap<RootedClass, usize> = BTreeMap::new();
    for k in keys_of(x, r)? {
        *counts.entry(k).or_default() += 1;
    }
    let n = S::from_count(x.order());
    let freq = counts
        .into_iter()
        .map(|(k, c)| (k, S::from_count(c) / n.clone()))
        .collect();
    Ok(BallDistribution { radius: r, freq })
}

/// Radius-`r` distribution of a limit measure, with the mass it may miss.
/// Geometric tails are folded exactly, so the slack is always 0.
pub fn limit_ball_distribution<S: Scalar>(
    m: &LimitMeasure<S>,
    r: usize,
    eps: &S,
) -> Result<(BallDistribution<S>, S), LimitError> {
    if *eps <= S::zero() {
        return Err(LimitError::NonPositiveEpsilon);
    }
    let atoms = m.ball_atoms(r);
    let keys = atoms
        .par_iter()
        .map(|(o, _)| o.ball_key(r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut dist = BallDistribution {
        radius: r,
        freq: BTreeMap::new(),
    };
    for (key, (_, p)) in keys.into_iter().zip(atoms) {
        dist.add(key, p);
    }
    Ok((dist, S::zero()))
}

/// Interval containing `∫ f dm`.
pub fn integrate_limit<S: Scalar>(
    f: &LocalFunction<S>,
    m: &LimitMeasure<S>,
    eps: &S,
) -> Result<(S, S), LimitError> {
    if *eps <= S::zero() {
        return Err(LimitError::NonPositiveEpsilon);
    }
    let r = f.radius.max(1);
    let mut total = S::zero();
    for (o, p) in m.ball_atoms(r) {
        total = total + f.eval(&o.ball_at(r)?)? * p;
    }
    Ok((total.clone(), total))
}

/// `½ Σ |p(k) - q(k)|`.
pub fn tv_distance<S: Scalar>(
    a: &BallDistribution<S>,
    b: &BallDistribution<S>,
) -> Result<S, LimitError> {
    if a.radius != b.radius {
        return Err(LimitError::RadiusMismatch(a.radius, b.radius));
    }
    let keys: BTreeSet<&RootedClass> = a.freq.keys().chain(b.freq.keys()).collect();
    let total = sum(keys.into_iter().map(|k| (a.get(k) - b.get(k)).abs()));
    Ok(total / S::from_count(2))
}

/// TV distance at radius `r` between `X_n` and the target, for each `n`.
pub fn convergence_report<S, F>(
    family: F,
    target: &LimitMeasure<S>,
    r: usize,
    ns: &[usize],
) -> Result<Vec<(usize, S)>, LimitError>
where
    S: Scalar,
    F: Fn(usize) -> Result<Graph, FamilyError> + Sync,
{
    let (limit, _) = limit_ball_distribution(target, r, &S::one())?;
    ns.par_iter()
        .map(|&n| {
            let d = ball_distribution(&family(n)?, r)?;
            Ok((n, tv_distance(&d, &limit)?))
        })
        .collect()
}

fn average_of<S: Scalar>(f: &LocalFunction<S>, x: &Graph) -> Result<S, LimitError> {
    let vals = (0..x.order())
        .into_par_iter()
        .map(|v| f.eval_at(x, v))
        .collect::<Result<Vec<S>, _>>()?;
    Ok(sum(vals) / S::from_count(x.order()))
}

/// `|∫ f dΨ(X) - ∫ f dΨ(X \ G)|`.
pub fn negligence_delta<S: Scalar>(
    x: &Graph,
    g: &BTreeSet<usize>,
    f: &LocalFunction<S>,
) -> Result<S, LimitError> {
    if g.is_empty() {
        return Ok(S::zero());
    }
    let rest = delete_subgraph(x, g)?;
    Ok((average_of(f, x)? - average_of(f, &rest)?).abs())
}

/// Largest `r` with `x` outside the `r`-neighbourhood of `G`, so that the
/// `r`-balls about `x` in `X` and `X \ G` agree. `None` when `G` is empty
/// or out of reach.
pub fn ball_agreement_radius(
    x: &Graph,
    g: &BTreeSet<usize>,
    v: usize,
) -> Result<Option<usize>, LimitError> {
    x.check_vertex(v)?;
    if g.contains(&v) {
        return Err(LimitError::VertexDeleted(v));
    }
    for &u in g {
        x.check_vertex(u)?;
    }
    let dist = x.distances_from(&[v]);
    Ok(g.iter().filter_map(|&u| dist[u]).min().map(|d| d - 1))
}

/// `2|E| / |V|`.
pub fn average_degree<S: Scalar>(x: &Graph) -> S {
    S::from_count(x.degree_sum()) / S::from_count(x.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn oracle_balls_grow() {
        for o in [
            RootedOracle::Integers,
            RootedOracle::S(1),
            RootedOracle::S(3),
            RootedOracle::SBar(2),
        ] {
            for r in 0..4 {
                let (a, b) = (o.ball_at(r).unwrap(), o.ball_at(r + 1).unwrap());
                let inner = ball(b.graph(), b.root(), r).unwrap();
                assert_eq!(
                    canonical_rooted(&a).unwrap(),
                    canonical_rooted(&inner).unwrap()
                );
            }
        }
        assert_eq!(RootedOracle::S(1).ball_at(1).unwrap().graph().degree(0), 1);
        assert_eq!(RootedOracle::S(2).ball_at(1).unwrap().graph().degree(0), 3);
        assert_eq!(
            RootedOracle::SBar(1).ball_at(1).unwrap().graph().degree(0),
            2
        );
        assert_eq!(
            RootedOracle::SBar(2).ball_at(1).unwrap().graph().degree(0),
            4
        );
    }

    #[test]
    fn mu_s_radius_one() {
        let (d, slack) =
            limit_ball_distribution(&LimitMeasure::<Rational>::mu_s(), 1, &q(1, 1024)).unwrap();
        assert_eq!(slack, q(0, 1));
        let mut masses: Vec<Rational> = d.freq.values().cloned().collect();
        masses.sort();
        assert_eq!(masses, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn agreement_radius_cases() {
        let p = families::path(10, 8).unwrap();
        assert_eq!(
            ball_agreement_radius(&p, &BTreeSet::from([6]), 1).unwrap(),
            Some(4)
        );
        assert_eq!(
            ball_agreement_radius(&p, &BTreeSet::from([2]), 1).unwrap(),
            Some(0)
        );
        assert_eq!(
            ball_agreement_radius(&p, &BTreeSet::new(), 1).unwrap(),
            None
        );
        assert!(ball_agreement_radius(&p, &BTreeSet::from([1]), 1).is_err());
    }
}
