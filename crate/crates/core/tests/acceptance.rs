//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use graphlaw::families::{self, generate, FamilySpec, GroupTable};
use graphlaw::limits::{
    average_degree, ball_distribution, limit_ball_distribution, negligence_delta, tv_distance,
    LimitMeasure,
};
use graphlaw::measures::{
    check_unimodular_definitional, law, law_of_disjoint_union, solve_unimodular, LocalFunction,
    SustainedMeasure,
};
use graphlaw::quotient::{
    decide_judicial, decide_judicial_finite, quotient_of_finite, JudicialityVerdict, LawlessReason,
    Quotient, QuotientJson,
};
use graphlaw::scalar::approx_f64;
use graphlaw::{disjoint_union, r_neighborhood, rho, Graph, Rational, Symmetry};
use num_traits::{One, Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pow2(k: usize) -> i64 {
    1i64 << k
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn depth_vertex(g: &Graph, root: usize, d: usize) -> usize {
    let dist = g.distances_from(&[root]);
    (0..g.order()).find(|&v| dist[v] == Some(d)).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=8usize {
        let g = families::t_ball(n, 8).unwrap();
        let m = law::<Rational>(&g).map_err(|e| e.to_string())?;
        let total = 3 * pow2(n) - 2;
        ensure(m.masses().len() == n + 1, || {
            format!("T_{n}: {} classes", m.masses().len())
        })?;
        ensure(*m.mass_at_vertex(0) == q(1, total), || {
            format!("T_{n}: mass of t")
        })?;
        for i in 1..=n {
            let v = depth_vertex(&g, 0, n - i + 1);
            let want = q(3 * pow2(n - i), total);
            ensure(*m.mass_at_vertex(v) == want, || {
                format!("T_{n}: mass of u_{i} is {}", m.mass_at_vertex(v))
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("n = 1..8 exact, {secs:.2}s"))
}

fn judicial_masses(json: &str) -> Result<Vec<Rational>, String> {
    let qj: QuotientJson = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let quo = qj.into_quotient().map_err(|e| e.to_string())?;
    match decide_judicial::<Rational>(&quo) {
        JudicialityVerdict::Judicial(m) => Ok(m.masses),
        JudicialityVerdict::Lawless(r) => Err(format!("lawless: {r:?}")),
    }
}

fn criterion_2() -> Outcome {
    let t34 =
        judicial_masses(r#"{"orbits":["u","v"],"edges":[{"a":"u","b":"v","m_ab":3,"m_ba":4}]}"#)?;
    ensure(t34 == vec![q(4, 7), q(3, 7)], || {
        format!("T34 gave {t34:?}")
    })?;
    let t324 = judicial_masses(
        r#"{"orbits":["u","v","w"],"edges":[{"a":"u","b":"w","m_ab":3,"m_ba":1},{"a":"v","b":"w","m_ab":4,"m_ba":1}]}"#,
    )?;
    ensure(t324 == vec![q(4, 19), q(3, 19), q(12, 19)], || {
        format!("T324 gave {t324:?}")
    })?;
    Ok("T34 {4/7, 3/7}, T324 {4/19, 3/19, 12/19}".into())
}

fn ray(json: &str) -> Result<JudicialityVerdict<Rational>, String> {
    let qj: QuotientJson = serde_json::from_str(json).map_err(|e| e.to_string())?;
    match qj.into_quotient().map_err(|e| e.to_string())? {
        r @ Quotient::Ray(_) => Ok(decide_judicial(&r)),
        Quotient::Finite(_) => Err("parsed as finite".into()),
    }
}

fn criterion_3() -> Outcome {
    let s = ray(r#"{"orbits":["1"],"edges":[],"ray_tail":{"m_fwd":1,"m_bwd":2}}"#)?;
    let JudicialityVerdict::Judicial(m) = s else {
        return Err(format!("S ray: {s:?}"));
    };
    for i in 1..=20u32 {
        let got = m.mass(i as usize - 1).unwrap();
        ensure(got == q(1, 1 << i), || format!("S ray mass {i} = {got}"))?;
    }
    let barred = ray(
        r#"{"orbits":["1","2"],"edges":[{"a":"1","b":"2","m_ab":2,"m_ba":1},{"a":"2","b":"2","m_ab":1,"m_ba":1}],
            "ray_tail":{"m_fwd":2,"m_bwd":1}}"#,
    )?;
    ensure(
        barred == JudicialityVerdict::Lawless(LawlessReason::DivergentMass),
        || format!("barred: {barred:?}"),
    )?;
    let flat = ray(r#"{"orbits":["1"],"edges":[],"ray_tail":{"m_fwd":1,"m_bwd":1}}"#)?;
    ensure(!flat.is_judicial(), || format!("(1,1) ray: {flat:?}"))?;
    Ok("S ray 2^-i for i = 1..20, barred ray DivergentMass, (1,1) ray Lawless".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(4);
    for t in 0..300 {
        let n = rng.gen_range(1..=12);
        let extra = rng.gen_range(0..=n);
        let g = common::random_connected_graph(&mut rng, n, extra, 4);
        let sym = Arc::new(Symmetry::analyze(&g).map_err(|e| e.to_string())?);
        // orbit counting with brute-force orbits
        let ids = common::brute_orbit_ids(&g);
        let mut counted = vec![Rational::zero(); sym.classes().len()];
        for v in 0..n {
            let c = sym.class_of(v);
            counted[c] += q(1, n as i64);
            ensure(ids[v] == ids[sym.representative(c)], || {
                format!("graph {t}: orbit mismatch")
            })?;
        }
        let solved = solve_unimodular::<Rational>(&g).map_err(|e| e.to_string())?;
        ensure(solved.is_unique(), || format!("graph {t}: not unique"))?;
        let quo = quotient_of_finite(&g).map_err(|e| e.to_string())?;
        let JudicialityVerdict::Judicial(qm) = decide_judicial_finite::<Rational>(&quo) else {
            return Err(format!("graph {t}: quotient lawless"));
        };
        ensure(solved.extremes()[0].masses() == counted.as_slice(), || {
            format!("graph {t}: solve differs")
        })?;
        ensure(qm.masses == counted, || {
            format!("graph {t}: path product differs")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2}s"))?;
    Ok(format!("300 graphs agree, {secs:.2}s"))
}

fn family_instances() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        let specs = vec![
            FamilySpec::Cycle { n },
            FamilySpec::Path { n },
            FamilySpec::Complete { n },
            FamilySpec::Star { n },
            FamilySpec::TBall { n },
            FamilySpec::LambdaBall { n },
            FamilySpec::BarredLambdaBall { n },
            FamilySpec::T34Ball { n },
            FamilySpec::T324Ball { n },
            FamilySpec::TreePlusCycle { n },
            FamilySpec::JoinedTreesX { n },
            FamilySpec::JoinedTreesY { n },
            FamilySpec::AvgDegreeCounterexample { m: n },
            FamilySpec::Cayley {
                table: GroupTable::cyclic(n + 2).table().to_vec(),
                generators: vec![1, n + 1],
            },
        ];
        for s in specs {
            if let Ok(g) = generate(&s) {
                out.push((format!("{s:?}"), g.graph));
            }
        }
    }
    out
}

/// Classes in components with at least two orbits. A renormalized
/// perturbation elsewhere can still be a mixture of component laws.
fn perturbable(sym: &Symmetry) -> Vec<usize> {
    let mut out = Vec::new();
    for comp in sym.components() {
        let classes: BTreeSet<usize> = comp.iter().map(|&v| sym.class_of(v)).collect();
        if classes.len() >= 2 {
            out.extend(classes);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn transport_check(name: &str, g: &Graph, perturbed: &mut usize) -> Result<(), String> {
    let m = law::<Rational>(g).map_err(|e| e.to_string())?;
    ensure(check_unimodular_definitional(&m).is_pass(), || {
        format!("{name}: law fails")
    })?;
    for c in perturbable(m.host()) {
        for sign in [1, -1] {
            let mut mass = m.masses().to_vec();
            mass[c] += q(sign, 1000);
            if mass[c].is_negative() {
                continue;
            }
            let total: Rational = mass.iter().cloned().sum();
            let mass = mass.into_iter().map(|x| x / total.clone()).collect();
            let bad = SustainedMeasure::new(m.host().clone(), mass).map_err(|e| e.to_string())?;
            ensure(!check_unimodular_definitional(&bad).is_pass(), || {
                format!("{name}: perturbed class {c} passes")
            })?;
            *perturbed += 1;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut rng = common::rng(5);
    let mut perturbed = 0;
    for t in 0..200 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.1..0.6);
        let g = common::random_graph(&mut rng, n, p, 4);
        transport_check(&format!("random graph {t}"), &g, &mut perturbed)?;
    }
    let fams = family_instances();
    for (name, g) in &fams {
        transport_check(name, g, &mut perturbed)?;
    }
    Ok(format!(
        "200 random graphs and {} family instances pass, {perturbed} perturbations fail",
        fams.len()
    ))
}

fn criterion_6() -> Outcome {
    let k1 = Graph::singleton(8);
    let k2 = families::complete(2, 8).unwrap();
    let x = disjoint_union(&[(k1.clone(), 2), (k2.clone(), 1)]).unwrap();
    let sol = solve_unimodular::<Rational>(&x).map_err(|e| e.to_string())?;
    ensure(sol.extremes().len() == 2, || {
        format!("{} extremes", sol.extremes().len())
    })?;
    for e in sol.extremes() {
        let support = e.masses().iter().filter(|m| !m.is_zero()).count();
        ensure(
            support == 1 && e.masses().contains(&Rational::one()),
            || "extreme is not a point mass".into(),
        )?;
    }
    let mid = sol
        .combine(&[q(1, 3), q(2, 3)])
        .map_err(|e| e.to_string())?;
    ensure(check_unimodular_definitional(&mid).is_pass(), || {
        "convex combination fails".into()
    })?;

    let mut rng = common::rng(6);
    for t in 0..100 {
        let mut parts: Vec<(Graph, usize)> = Vec::new();
        let mut keys = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=4) {
            let g = common::random_small_connected(&mut rng, 7);
            let g = g.with_delta(8).unwrap();
            let sym = Symmetry::analyze(&g).unwrap();
            // isomorphism type = set of rooted classes
            if keys.insert(sym.classes().to_vec()) {
                parts.push((g, rng.gen_range(1..=3)));
            }
        }
        let by_parts = law_of_disjoint_union::<Rational>(&parts).map_err(|e| e.to_string())?;
        let direct =
            law::<Rational>(&disjoint_union(&parts).unwrap()).map_err(|e| e.to_string())?;
        ensure(by_parts == direct, || format!("multiset {t}: laws differ"))?;
    }
    Ok("2K_1 + K_2 gives two point-mass extremes; 100 unions match".into())
}

fn criterion_7() -> Outcome {
    let mut cases: Vec<(String, GroupTable, Vec<usize>)> = Vec::new();
    for n in 3..=12 {
        cases.push((format!("Z_{n}"), GroupTable::cyclic(n), vec![1, n - 1]));
        if n >= 5 {
            cases.push((
                format!("Z_{n} with ±1, ±2"),
                GroupTable::cyclic(n),
                vec![1, 2, n - 2, n - 1],
            ));
        }
    }
    let s3 = GroupTable::symmetric(3);
    let transpositions: Vec<usize> = (0..6)
        .filter(|&g| g != s3.identity() && s3.mul(g, g) == s3.identity())
        .collect();
    cases.push(("S_3".into(), s3, transpositions));
    let d4 = GroupTable::dihedral(4);
    let mut d4_gens = vec![2, d4.inverse(2), 1];
    d4_gens.sort_unstable();
    cases.push(("D_4".into(), d4, d4_gens));
    let q8 = GroupTable::quaternion();
    let mut q8_gens = vec![5, q8.inverse(5), 6, q8.inverse(6)];
    q8_gens.sort_unstable();
    q8_gens.dedup();
    cases.push(("Q_8".into(), q8, q8_gens));
    let mut edges = 0;
    for (name, group, gens) in &cases {
        let g = families::cayley(group, gens, 8).map_err(|e| format!("{name}: {e}"))?;
        let sym = Symmetry::analyze(&g).map_err(|e| e.to_string())?;
        for (a, b) in g.edges() {
            let (ab, ba) = (
                sym.stabilizer_count(a, b).unwrap(),
                sym.stabilizer_count(b, a).unwrap(),
            );
            ensure(ab == ba, || {
                format!("{name}: edge ({a},{b}) has {ab} vs {ba}")
            })?;
            edges += 1;
        }
    }
    Ok(format!(
        "{} Cayley graphs, {edges} edges balanced",
        cases.len()
    ))
}

fn decreasing_tv(
    name: &str,
    target: &LimitMeasure<Rational>,
    make: impl Fn(usize) -> Graph,
) -> Result<String, String> {
    let (limit, _) = limit_ball_distribution(target, 2, &q(1, 1024)).map_err(|e| e.to_string())?;
    let mut prev: Option<Rational> = None;
    let mut last = Rational::zero();
    for n in 4..=12 {
        let d = ball_distribution::<Rational>(&make(n), 2).map_err(|e| e.to_string())?;
        let tv = tv_distance(&d, &limit).map_err(|e| e.to_string())?;
        if let Some(p) = &prev {
            ensure(tv < *p, || {
                format!("{name}: TV at n = {n} is {tv}, previous {p}")
            })?;
        }
        prev = Some(tv.clone());
        last = tv;
    }
    ensure(last <= q(1, 100), || {
        format!("{name}: TV at n = 12 is {last}")
    })?;
    Ok(format!("{name} TV(12) = {:.3e}", approx_f64(&last)))
}

fn criterion_8() -> Outcome {
    let a = decreasing_tv("T_n", &LimitMeasure::mu_s(), |n| {
        families::t_ball(n, 8).unwrap()
    })?;
    let b = decreasing_tv("barred Lambda_n", &LimitMeasure::mu_s_bar(), |n| {
        families::barred_lambda_ball(n, 8).unwrap()
    })?;
    Ok(format!(
        "r = 2, strictly decreasing for n = 4..12; {a}; {b}"
    ))
}

fn criterion_9() -> Outcome {
    for n in 4..=16 {
        let z = families::cycle(n, 8).unwrap();
        let d = negligence_delta(
            &z,
            &BTreeSet::from([0]),
            &LocalFunction::<Rational>::degree(8),
        )
        .map_err(|e| e.to_string())?;
        ensure(d == q(2, n as i64 - 1), || format!("Z_{n}: delta {d}"))?;
    }
    let t = families::t_ball(13, 8).unwrap();
    let g = BTreeSet::from([0]);
    let rest = graphlaw::delete_subgraph(&t, &g).unwrap();
    let mut keys: BTreeSet<_> = ball_distribution::<Rational>(&t, 2)
        .unwrap()
        .freq
        .into_keys()
        .collect();
    keys.extend(
        ball_distribution::<Rational>(&rest, 2)
            .unwrap()
            .freq
            .into_keys(),
    );
    let mut worst = Rational::zero();
    for key in &keys {
        let f = LocalFunction::<Rational>::indicator(2, key.clone());
        let d = negligence_delta(&t, &g, &f).map_err(|e| e.to_string())?;
        worst = worst.max(d);
    }
    ensure(worst <= q(1, 100), || format!("T_13 worst delta {worst}"))?;
    Ok(format!(
        "Z_n delta = 2/(n-1) for n = 4..16; T_13 minus t, {} radius-2 indicators, max delta {:.3e}",
        keys.len(),
        approx_f64(&worst)
    ))
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=3 {
        let (k, l) = families::counterexample_indices(n).map_err(|e| e.to_string())?;
        let y = families::counterexample_ball(k as usize - 1, 8).unwrap();
        let z = families::counterexample_ball(l as usize - 1, 8).unwrap();
        let (k, l) = (k as i64, l as i64);
        ensure(average_degree::<Rational>(&y) == q(3, 1), || {
            format!("n = {n}: Y average degree")
        })?;
        ensure(average_degree::<Rational>(&z) >= q(4, 1), || {
            format!("n = {n}: Z average degree")
        })?;
        ensure(q(y.order() as i64, 1) == q(4 * k + 2, 3), || {
            format!("n = {n}: |V(Y)| = {}", y.order())
        })?;
        ensure(y.degree_sum() as i64 == 4 * k + 2, || {
            format!("n = {n}: degree sum {}", y.degree_sum())
        })?;
        let vz = q(6 * l, 1) - q(14 * k, 3) + q(2, 3);
        ensure(q(z.order() as i64, 1) == vz, || {
            format!("n = {n}: |V(Z)| = {} vs {vz}", z.order())
        })?;
        notes.push(format!(
            "n = {n}: (k, l) = ({k}, {l}), avg deg 3 and {}",
            average_degree::<Rational>(&z)
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_11() -> Outcome {
    let mix = |a: i64, b: i64| {
        LimitMeasure::mixture(vec![
            (q(a, 3), LimitMeasure::mu_s()),
            (q(b, 3), LimitMeasure::mu_s_bar()),
        ])
        .unwrap()
    };
    let eps = q(1, 1024);
    let (tx, _) = limit_ball_distribution(&mix(2, 1), 2, &eps).map_err(|e| e.to_string())?;
    let (ty, _) = limit_ball_distribution(&mix(1, 2), 2, &eps).map_err(|e| e.to_string())?;
    let (x, _, _) = families::joined_trees_x(10, 8).unwrap();
    let (y, _, _) = families::joined_trees_y(10, 8).unwrap();
    let dx = tv_distance(&ball_distribution::<Rational>(&x, 2).unwrap(), &tx).unwrap();
    let dy = tv_distance(&ball_distribution::<Rational>(&y, 2).unwrap(), &ty).unwrap();
    let gap = tv_distance(&tx, &ty).unwrap();
    ensure(dx <= q(2, 100), || format!("X_10 TV {dx}"))?;
    ensure(dy <= q(2, 100), || format!("Y_10 TV {dy}"))?;
    ensure(gap >= q(2, 10), || format!("targets differ by {gap}"))?;
    Ok(format!(
        "TV(X_10) = {:.4}, TV(Y_10) = {:.4}, targets {gap} apart",
        approx_f64(&dx),
        approx_f64(&dy)
    ))
}

fn criterion_12() -> Outcome {
    let mut rng = common::rng(12);
    // ultrametric inequality on triples of nearby rooted graphs
    let mut nontrivial = 0;
    for t in 0..1000 {
        let n = rng.gen_range(3..=12);
        let extra = rng.gen_range(0..=n);
        let base = common::random_connected_graph(&mut rng, n, extra, 4);
        let mut variant = |g: &Graph| {
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            if !edges.is_empty() && rng.gen_bool(0.5) {
                edges.remove(rng.gen_range(0..edges.len()));
            }
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (u, v) = (u.min(v), u.max(v));
            if u != v && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
            Graph::new(n, edges, 12).unwrap()
        };
        let (a, b, c) = (base.with_delta(12).unwrap(), variant(&base), variant(&base));
        let root = |g: &Graph| graphlaw::RootedGraph::new(g.clone(), 0).unwrap();
        let (ra, rb, rc) = (root(&a), root(&b), root(&c));
        let ab: Rational = rho(&ra, &rb).unwrap();
        let bc: Rational = rho(&rb, &rc).unwrap();
        let ac: Rational = rho(&ra, &rc).unwrap();
        ensure(ac <= ab.clone().max(bc.clone()), || {
            format!("triple {t}: {ac} > max({ab}, {bc})")
        })?;
        if !ab.is_zero() && !bc.is_zero() && ab < Rational::one() {
            nontrivial += 1;
        }
    }
    // neighbourhood bound
    for t in 0..500 {
        let n = rng.gen_range(1..=30);
        let (p, delta) = (rng.gen_range(0.05..0.4), rng.gen_range(2..=6));
        let g = common::random_graph(&mut rng, n, p, delta);
        let set: BTreeSet<usize> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(0..n))
            .collect();
        let r = rng.gen_range(0..=4);
        let nb = r_neighborhood(&g, &set, r).unwrap();
        let bound = (g.delta() + 1).pow(r as u32) * set.len();
        ensure(nb.len() <= bound, || {
            format!("instance {t}: {} > {bound}", nb.len())
        })?;
    }
    // orbit/neighbourhood ratio with brute-force orbits
    for t in 0..300 {
        let n = rng.gen_range(2..=12);
        let extra = rng.gen_range(0..=n);
        let g = common::random_connected_graph(&mut rng, n, extra, 4);
        let ids = common::brute_orbit_ids(&g);
        let size = |o: usize| ids.iter().filter(|&&i| i == o).count();
        for (x, y) in g.edges() {
            let (ox, oy) = (ids[x], ids[y]);
            let y_near_x = g.neighbors(x).iter().filter(|&&w| ids[w] == oy).count();
            let x_near_y = g.neighbors(y).iter().filter(|&&w| ids[w] == ox).count();
            ensure(size(ox) * y_near_x == size(oy) * x_near_y, || {
                format!("graph {t}: edge ({x},{y})")
            })?;
        }
    }
    // strict positivity of judicial measures
    let mut judicial = 0;
    for _ in 0..300 {
        let g = common::random_small_connected(&mut rng, 12);
        let quo = quotient_of_finite(&g).map_err(|e| e.to_string())?;
        if let JudicialityVerdict::Judicial(m) = decide_judicial_finite::<Rational>(&quo) {
            ensure(m.masses.iter().all(|x| x.is_positive()), || {
                "nonpositive orbit mass".into()
            })?;
            judicial += 1;
        }
    }
    for (fwd, bwd) in [(1u64, 2u64), (1, 3), (2, 3), (2, 5)] {
        let json =
            format!(r#"{{"orbits":["a"],"edges":[],"ray_tail":{{"m_fwd":{fwd},"m_bwd":{bwd}}}}}"#);
        let JudicialityVerdict::Judicial(m) = ray(&json)? else {
            return Err(format!("ray ({fwd},{bwd}) lawless"));
        };
        ensure((0..50).all(|i| m.mass(i).unwrap().is_positive()), || {
            "nonpositive ray mass".into()
        })?;
        judicial += 1;
    }
    Ok(format!(
        "1000 triples ({nontrivial} nontrivial), 500 neighbourhoods, 300 ratio graphs, {judicial} judicial measures; 0 violations"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact laws of T_n", criterion_1),
        ("quotient measures", criterion_2),
        ("ray verdicts", criterion_3),
        ("three-way oracle agreement", criterion_4),
        ("mass transport", criterion_5),
        ("disconnected decomposition", criterion_6),
        ("Cayley balance", criterion_7),
        ("weak-limit convergence", criterion_8),
        ("negligence", criterion_9),
        ("average-degree counterexample", criterion_10),
        ("adjacent-balls counterexample", criterion_11),
        ("property suites", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
