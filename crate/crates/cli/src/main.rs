//! `graphlaw`: laws, unimodularity checks, quotients and weak limits from
//! the command line. Exit status 0 means success or PASS, 1 a FAIL or
//! Lawless verdict, 2 a usage or input error.

mod input;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use graphlaw::families::{counterexample_ball, counterexample_indices, FamilyError};
use graphlaw::measures::Witness;
use graphlaw::quotient::{
    decide_judicial, path_product_measure, validate_consistency, BadCycle, Consistency,
    JudicialityVerdict, LawlessReason, Quotient, QuotientJson,
};
use graphlaw::scalar::{approx_f64, format_ratio};
use graphlaw::{
    agreement_radius, average_degree, ball_distribution, check_unimodular_criterion,
    check_unimodular_definitional, convergence_report, law, negligence_delta, rho,
    solve_unimodular, Measure, Rational, RootedGraph, Symmetry, Verdict,
};
use input::{GraphSource, Loaded};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "graphlaw",
    version,
    about = "Exact laws and unimodular measures of bounded-degree graphs"
)]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel stages
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Degree cap for generated or loaded graphs
    #[arg(long, global = true)]
    delta: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Law of a finite graph: orbit fractions per rooted class
    Law(GraphSource),
    /// Automorphism orbits, in canonical key order
    Orbits(GraphSource),
    /// Check a measure file for unimodularity
    CheckUnimodular {
        graph: String,
        measure: String,
        /// Use the stabilizer-count criterion
        #[arg(long, conflicts_with = "definitional")]
        criterion: bool,
        /// Use mass transport over birooted classes (default)
        #[arg(long)]
        definitional: bool,
    },
    /// Extreme unimodular measures sustained by a graph
    SolveUnimodular(GraphSource),
    /// Labeled quotients
    Quotient {
        #[command(subcommand)]
        cmd: QuotientCmd,
    },
    /// Rooted distance between two rooted graphs
    Dist {
        g1: String,
        root1: usize,
        g2: String,
        root2: usize,
    },
    /// Radius-r ball-type frequencies
    BallDist {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        r: usize,
    },
    /// TV distance between family members and a limit, as CSV
    WeakLimit {
        #[arg(long)]
        family: String,
        /// delta_z, mu_s, mu_s_bar or mix:W
        #[arg(long)]
        target: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Change in the average of a local function after deleting vertices
    Negligence {
        #[command(flatten)]
        source: GraphSource,
        /// Comma-separated vertices to delete
        #[arg(long)]
        delete: String,
        /// deg, const:C or ball:R:V
        #[arg(long, default_value = "deg")]
        f: String,
    },
    /// Counterexample constructions
    Counterexample {
        #[command(subcommand)]
        cmd: CounterexampleCmd,
    },
    /// Emit graph JSON for a family spec
    Generate(GraphSource),
}

#[derive(Subcommand)]
enum QuotientCmd {
    /// Check cycle consistency of the labels
    Validate { file: String },
    /// Unnormalized path-product masses of a finite quotient
    Measure {
        file: String,
        /// Base orbit, by name (default: the first)
        #[arg(long)]
        base: Option<String>,
        /// Mass of the base orbit
        #[arg(long, default_value = "1")]
        p: String,
    },
    /// Decide whether the quotient sustains a unimodular measure
    Judicial {
        file: String,
        /// Ray orbits to list
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
}

#[derive(Subcommand)]
enum CounterexampleCmd {
    /// Average degrees along the decorated-ray construction
    AvgDegree {
        #[arg(long)]
        stages: usize,
    },
}

/// What a subcommand produced: JSON, its text rendering, and whether the
/// verdict was favourable.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            ok: true,
        }
    }
}

fn r(x: &Rational) -> Value {
    Value::String(format_ratio(x))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(rep) => {
            if cli.json {
                println!("{}", rep.json);
            } else {
                print!("{}", rep.text);
            }
            ExitCode::from(if rep.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let delta = cli.delta;
    match &cli.cmd {
        Cmd::Law(src) => cmd_law(src.load(delta)?),
        Cmd::Orbits(src) => cmd_orbits(src.load(delta)?),
        Cmd::CheckUnimodular {
            graph,
            measure,
            criterion,
            ..
        } => {
            let g = input::load_file(graph, delta)?.graph;
            let m = input::load_measure(measure, &g)?;
            cmd_check(&m, *criterion)
        }
        Cmd::SolveUnimodular(src) => cmd_solve(src.load(delta)?),
        Cmd::Quotient { cmd } => cmd_quotient(cmd),
        Cmd::Dist {
            g1,
            root1,
            g2,
            root2,
        } => {
            let a = RootedGraph::new(input::load_file(g1, delta)?.graph, *root1)?;
            let b = RootedGraph::new(input::load_file(g2, delta)?.graph, *root2)?;
            let d: Rational = rho(&a, &b)?;
            let k = agreement_radius(&a, &b)?;
            let shown = k.map_or("unbounded".to_string(), |k| k.to_string());
            Ok(Report::ok(
                json!({ "rho": r(&d), "agreement_radius": k }),
                format!("rho\t{}\nagreement_radius\t{shown}\n", format_ratio(&d)),
            ))
        }
        Cmd::BallDist { source, r: radius } => cmd_ball_dist(source.load(delta)?, *radius),
        Cmd::WeakLimit {
            family,
            target,
            r: radius,
            n_min,
            n_max,
        } => cmd_weak_limit(family, target, *radius, *n_min, *n_max, delta),
        Cmd::Negligence { source, delete, f } => {
            let x = source.load(delta)?.graph;
            let set = input::vertex_set(delete, &x)?;
            let func = input::local_function(f, &x)?;
            let d = negligence_delta(&x, &set, &func)?;
            let (n, g) = (x.order() as i64, set.len() as i64);
            let k = if set.is_empty() {
                0
            } else {
                graphlaw::r_neighborhood(&x, &set, func.radius)?.len() as i64
            };
            // only values inside the r-neighbourhood N of the deleted set change:
            // |δ| ≤ c·(g(n-k) + (n-g)k + n(k-g)) / (n(n-g)) with g = |G|, k = |N|
            let bound = if set.is_empty() {
                Rational::from_integer(0.into())
            } else {
                func.bound.clone()
                    * Rational::new(
                        (g * (n - k) + (n - g) * k + n * (k - g)).into(),
                        (n * (n - g)).into(),
                    )
            };
            Ok(Report::ok(
                json!({ "delta": r(&d), "bound": r(&bound), "deleted": set.len(), "vertices": x.order() }),
                format!(
                    "delta\t{}\nbound\t{}\n",
                    format_ratio(&d),
                    format_ratio(&bound)
                ),
            ))
        }
        Cmd::Counterexample {
            cmd: CounterexampleCmd::AvgDegree { stages },
        } => cmd_avg_degree(*stages, delta),
        Cmd::Generate(src) => {
            let Loaded { graph, root } = src.load(delta)?;
            let mut v = serde_json::to_value(graphlaw::GraphJson::from(&graph))?;
            if let Some(root) = root {
                v["root"] = json!(root);
            }
            Ok(Report::ok(v.clone(), format!("{v}\n")))
        }
    }
}

fn cmd_law(x: Loaded) -> Result<Report> {
    let m: Measure = law(&x.graph)?;
    let sym = m.host().clone();
    let mut rows = Vec::new();
    let mut text = String::from("representative\torbit_size\tmass\tkey\n");
    for (c, key) in sym.classes().iter().enumerate() {
        let rep = sym.representative(c);
        let size = sym.members(c).len();
        rows.push(json!({ "key": key.to_hex(), "representative": rep, "orbit_size": size, "mass": r(m.mass(c)) }));
        text += &format!(
            "{rep}\t{size}\t{}\t{}\n",
            format_ratio(m.mass(c)),
            key.to_hex()
        );
    }
    Ok(Report::ok(json!({ "classes": rows }), text))
}

fn cmd_orbits(x: Loaded) -> Result<Report> {
    let sym = Symmetry::analyze(&x.graph)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (c, key) in sym.classes().iter().enumerate() {
        let members = sym.members(c);
        rows.push(json!({ "key": key.to_hex(), "members": members }));
        let list: Vec<String> = members.iter().map(usize::to_string).collect();
        text += &format!("{}\t{}\n", list.join(","), key.to_hex());
    }
    Ok(Report::ok(json!({ "orbits": rows }), text))
}

fn witness_json(w: &Witness<Rational>) -> Value {
    json!({
        "key": w.class.to_hex(),
        "arc": [w.arc.0, w.arc.1],
        "out_mass": r(&w.out_mass),
        "in_mass": r(&w.in_mass),
    })
}

fn cmd_check(m: &Measure, criterion: bool) -> Result<Report> {
    let method = if criterion {
        "criterion"
    } else {
        "definitional"
    };
    let verdict = if criterion {
        check_unimodular_criterion(m)?
    } else {
        check_unimodular_definitional(m)
    };
    Ok(match verdict {
        Verdict::Pass => Report::ok(
            json!({ "verdict": "PASS", "method": method }),
            "PASS\n".into(),
        ),
        Verdict::Fail(w) => Report {
            text: format!(
                "FAIL\tarc {}->{}\tout {}\tin {}\n",
                w.arc.0,
                w.arc.1,
                format_ratio(&w.out_mass),
                format_ratio(&w.in_mass)
            ),
            json: json!({ "verdict": "FAIL", "method": method, "witness": witness_json(&w) }),
            ok: false,
        },
    })
}

fn cmd_solve(x: Loaded) -> Result<Report> {
    let sol = solve_unimodular::<Rational>(&x.graph)?;
    let sym = sol.host().clone();
    let mut extremes = Vec::new();
    let mut text = String::new();
    for (k, e) in sol.extremes().iter().enumerate() {
        let mut rows = Vec::new();
        for (c, key) in sym.classes().iter().enumerate() {
            if *e.mass(c) == Rational::from_integer(0.into()) {
                continue;
            }
            let rep = sym.representative(c);
            rows.push(json!({ "key": key.to_hex(), "representative": rep, "mass": r(e.mass(c)) }));
            text += &format!(
                "{k}\t{rep}\t{}\t{}\n",
                format_ratio(e.mass(c)),
                key.to_hex()
            );
        }
        extremes.push(json!({ "masses": rows }));
    }
    Ok(Report::ok(
        json!({ "unique": sol.is_unique(), "extremes": extremes }),
        text,
    ))
}

fn load_quotient(file: &str) -> Result<Quotient> {
    let qj: QuotientJson = serde_json::from_str(&input::read_text(file)?)?;
    Ok(qj.into_quotient()?)
}

fn names_of(q: &Quotient) -> Vec<String> {
    match q {
        Quotient::Finite(f) => f.names().to_vec(),
        Quotient::Ray(r) => r.names().to_vec(),
    }
}

fn cycle_report(names: &[String], c: &BadCycle<Rational>, verdict: Value) -> Report {
    let walk: Vec<&str> = c.cycle.iter().map(|&i| names[i].as_str()).collect();
    Report {
        text: format!(
            "{}: {} product {}\n",
            verdict.as_str().unwrap_or(""),
            walk.join(" -> "),
            format_ratio(&c.product)
        ),
        json: json!({ "verdict": verdict, "cycle": walk, "product": r(&c.product) }),
        ok: false,
    }
}

/// Name of the `i`-th ray orbit: listed names first, then counting on from
/// the last one.
fn ray_name(names: &[String], i: usize) -> String {
    if let Some(n) = names.get(i) {
        return n.clone();
    }
    let last = names.last().expect("rays have at least one orbit");
    let extra = i + 1 - names.len();
    match last.parse::<u64>() {
        Ok(k) => (k + extra as u64).to_string(),
        Err(_) => format!("{last}+{extra}"),
    }
}

fn cmd_quotient(cmd: &QuotientCmd) -> Result<Report> {
    match cmd {
        QuotientCmd::Validate { file } => {
            let q = load_quotient(file)?;
            let names = names_of(&q);
            let bad = match &q {
                Quotient::Finite(f) => match validate_consistency::<Rational>(f) {
                    Consistency::Consistent => None,
                    Consistency::Inconsistent(c) => Some(c),
                },
                Quotient::Ray(_) => match decide_judicial::<Rational>(&q) {
                    JudicialityVerdict::Lawless(LawlessReason::InconsistentCycle(c)) => Some(c),
                    _ => None,
                },
            };
            Ok(match bad {
                None => Report::ok(json!({ "verdict": "Consistent" }), "Consistent\n".into()),
                Some(c) => cycle_report(&names, &c, json!("Inconsistent")),
            })
        }
        QuotientCmd::Measure { file, base, p } => {
            let Quotient::Finite(q) = load_quotient(file)? else {
                bail!(
                    "path-product masses need a finite quotient; use `quotient judicial` for rays"
                );
            };
            let base = match base {
                Some(name) => q
                    .index_of(name)
                    .ok_or_else(|| anyhow!("no orbit named {name:?}"))?,
                None => 0,
            };
            let p = input::rational(p)?;
            match path_product_measure(&q, base, p) {
                Ok(mu) => {
                    let mut map = Map::new();
                    let mut text = String::new();
                    for (name, m) in q.names().iter().zip(&mu) {
                        map.insert(name.clone(), r(m));
                        text += &format!("{name}\t{}\n", format_ratio(m));
                    }
                    Ok(Report::ok(Value::Object(map), text))
                }
                Err(_) => match validate_consistency::<Rational>(&q) {
                    Consistency::Inconsistent(c) => {
                        Ok(cycle_report(q.names(), &c, json!("Inconsistent")))
                    }
                    Consistency::Consistent => {
                        bail!("path products failed on a consistent quotient")
                    }
                },
            }
        }
        QuotientCmd::Judicial { file, terms } => {
            let q = load_quotient(file)?;
            let names = names_of(&q);
            Ok(match decide_judicial::<Rational>(&q) {
                JudicialityVerdict::Judicial(m) => {
                    let shown = match m.tail_ratio {
                        Some(_) => (*terms).max(m.masses.len()),
                        None => m.masses.len(),
                    };
                    let mut map = Map::new();
                    let mut text = String::new();
                    for i in 0..shown {
                        let name = ray_name(&names, i);
                        let mass = m.mass(i).expect("mass within range");
                        text += &format!("{name}\t{}\n", format_ratio(&mass));
                        map.insert(name, r(&mass));
                    }
                    let json = match &m.tail_ratio {
                        None => Value::Object(map),
                        Some(t) => {
                            text += &format!("tail_ratio\t{}\n", format_ratio(t));
                            json!({ "masses": map, "tail_ratio": r(t) })
                        }
                    };
                    Report::ok(json, text)
                }
                JudicialityVerdict::Lawless(LawlessReason::DivergentMass) => Report {
                    json: json!({ "verdict": "Lawless", "reason": "DivergentMass" }),
                    text: "Lawless(DivergentMass)\n".into(),
                    ok: false,
                },
                JudicialityVerdict::Lawless(LawlessReason::InconsistentCycle(c)) => {
                    let mut rep = cycle_report(&names, &c, json!("Lawless(InconsistentCycle)"));
                    rep.json = json!({
                        "verdict": "Lawless",
                        "reason": "InconsistentCycle",
                        "cycle": rep.json["cycle"],
                        "product": rep.json["product"],
                    });
                    rep
                }
            })
        }
    }
}

fn to_int(x: &num_bigint::BigInt) -> Result<Value> {
    x.to_u64()
        .map(Value::from)
        .ok_or_else(|| anyhow!("{x} does not fit in 64 bits"))
}

fn cmd_ball_dist(x: Loaded, radius: usize) -> Result<Report> {
    let d = ball_distribution::<Rational>(&x.graph, radius)?;
    let mut freq = Vec::new();
    let mut text = String::new();
    for (key, p) in &d.freq {
        freq.push(
            json!({ "key": key.to_hex(), "num": to_int(p.numer())?, "den": to_int(p.denom())? }),
        );
        text += &format!("{}\t{}\n", format_ratio(p), key.to_hex());
    }
    Ok(Report::ok(
        json!({ "radius": d.radius, "freq": freq }),
        text,
    ))
}

fn cmd_weak_limit(
    family: &str,
    target: &str,
    radius: usize,
    n_min: usize,
    n_max: usize,
    delta: Option<usize>,
) -> Result<Report> {
    let target = input::target(target)?;
    let make = |n: usize| -> Result<graphlaw::Graph, FamilyError> {
        let spec = input::named_spec(family, n)
            .map_err(|e| FamilyError::InvalidParameter(e.to_string()))?;
        Ok(input::generate(&spec, delta)?.graph)
    };
    // fail on unknown names here rather than skipping every member
    input::named_spec(family, n_min)?;
    // members the family rejects (too small) are skipped, not fatal
    let mut ns = Vec::new();
    for n in n_min..=n_max {
        match make(n) {
            Ok(_) => ns.push(n),
            Err(FamilyError::InvalidParameter(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let rows = convergence_report(make, &target, radius, &ns)?;
    let mut text = String::from("n,radius,tv_distance,tv_distance_approx\n");
    let mut out = Vec::new();
    for (n, tv) in &rows {
        text += &format!("{n},{radius},{},{:.6e}\n", format_ratio(tv), approx_f64(tv));
        out.push(json!({ "n": n, "radius": radius, "tv_distance": r(tv) }));
    }
    Ok(Report::ok(Value::Array(out), text))
}

fn cmd_avg_degree(stages: usize, delta: Option<usize>) -> Result<Report> {
    let delta = delta.unwrap_or(graphlaw::DEFAULT_DELTA);
    let mut text = String::from(
        "n,k,l,y_vertices,y_degree_sum,y_avg_degree,z_vertices,z_degree_sum,z_avg_degree\n",
    );
    let mut out = Vec::new();
    for n in 1..=stages {
        let (k, l) = counterexample_indices(n)?;
        let y = counterexample_ball(k as usize - 1, delta)?;
        let z = counterexample_ball(l as usize - 1, delta)?;
        let (ay, az): (Rational, Rational) = (average_degree(&y), average_degree(&z));
        text += &format!(
            "{n},{k},{l},{},{},{},{},{},{}\n",
            y.order(),
            y.degree_sum(),
            format_ratio(&ay),
            z.order(),
            z.degree_sum(),
            format_ratio(&az)
        );
        out.push(json!({
            "n": n, "k": k, "l": l,
            "y_vertices": y.order(), "y_degree_sum": y.degree_sum(), "y_avg_degree": r(&ay),
            "z_vertices": z.order(), "z_degree_sum": z.degree_sum(), "z_avg_degree": r(&az),
        }));
    }
    Ok(Report::ok(Value::Array(out), text))
}
