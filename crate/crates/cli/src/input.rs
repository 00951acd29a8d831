use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use graphlaw::families::{generate_with_delta, FamilyError, FamilySpec};
use graphlaw::limits::LimitMeasure;
use graphlaw::measures::SustainedMeasure;
use graphlaw::scalar::parse_rational;
use graphlaw::{
    ball, canonical_rooted, Graph, GraphJson, Limit, LocalFunction, Measure, Rational, Symmetry,
};
use serde::Deserialize;
use serde_json::Value;

/// Where a graph comes from: a file holding graph or family-spec JSON, or
/// a family named on the command line.
#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Graph JSON or family-spec JSON file; `-` reads stdin
    pub file: Option<String>,
    /// Family name, e.g. T_ball, cycle, joined_trees_X
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,
    /// Family parameter
    #[arg(long, requires = "family")]
    pub n: Option<usize>,
}

/// A loaded graph and its distinguished vertex, if it has one.
pub struct Loaded {
    pub graph: Graph,
    pub root: Option<usize>,
}

pub fn read_text(path: &str) -> Result<String> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
    } else {
        text =
            std::fs::read_to_string(Path::new(path)).with_context(|| format!("reading {path}"))?;
    }
    Ok(text)
}

/// Family spec for a name and parameter as given on the command line.
pub fn named_spec(name: &str, n: usize) -> Result<FamilySpec> {
    let param = if name == "avg_degree_counterexample" {
        "m"
    } else {
        "n"
    };
    let value = serde_json::json!({ "family": name, param: n });
    serde_json::from_value(value).map_err(|_| anyhow!("unknown family {name:?}"))
}

pub fn generate(spec: &FamilySpec, delta: Option<usize>) -> Result<Loaded, FamilyError> {
    let g = generate_with_delta(spec, delta.unwrap_or(graphlaw::DEFAULT_DELTA))?;
    Ok(Loaded {
        graph: g.graph,
        root: g.root,
    })
}

pub fn load_value(value: Value, delta: Option<usize>) -> Result<Loaded> {
    if value.get("family").is_some() {
        let spec: FamilySpec = serde_json::from_value(value).context("parsing family spec")?;
        return Ok(generate(&spec, delta)?);
    }
    let root = value
        .get("root")
        .and_then(Value::as_u64)
        .map(|r| r as usize);
    let gj: GraphJson = serde_json::from_value(value).context("parsing graph JSON")?;
    let mut graph = Graph::try_from(gj)?;
    if let Some(d) = delta {
        graph = graph.with_delta(d)?;
    }
    if let Some(r) = root {
        if r >= graph.order() {
            bail!("root {r} is not a vertex");
        }
    }
    Ok(Loaded { graph, root })
}

pub fn load_file(path: &str, delta: Option<usize>) -> Result<Loaded> {
    let value: Value =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {path}"))?;
    load_value(value, delta).with_context(|| format!("loading {path}"))
}

impl GraphSource {
    pub fn load(&self, delta: Option<usize>) -> Result<Loaded> {
        match (&self.file, &self.family) {
            (Some(path), _) => load_file(path, delta),
            (None, Some(name)) => {
                let n = self.n.ok_or_else(|| anyhow!("--family needs --n"))?;
                Ok(generate(&named_spec(name, n)?, delta)?)
            }
            (None, None) => bail!("give a graph file or --family NAME --n N"),
        }
    }
}

#[derive(Deserialize)]
struct MassEntry {
    class_rep_vertex: usize,
    num: i64,
    den: i64,
}

#[derive(Deserialize)]
struct MeasureFile {
    #[serde(default)]
    host: Option<Value>,
    mass: Vec<MassEntry>,
}

/// Reads `{"host"?, "mass": [{"class_rep_vertex", "num", "den"}]}`. A host
/// given in the file must be the graph it is checked against.
pub fn load_measure(path: &str, graph: &Graph) -> Result<Measure> {
    let file: MeasureFile =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {path}"))?;
    if let Some(host) = file.host {
        let host = load_value(host, Some(graph.delta()))?;
        if host.graph != *graph {
            bail!("measure host differs from the given graph");
        }
    }
    let sym = Arc::new(Symmetry::analyze(graph)?);
    let mut entries = Vec::with_capacity(file.mass.len());
    for e in file.mass {
        if e.den == 0 {
            bail!("zero denominator at vertex {}", e.class_rep_vertex);
        }
        if e.class_rep_vertex >= graph.order() {
            bail!("vertex {} is not in the graph", e.class_rep_vertex);
        }
        entries.push((
            e.class_rep_vertex,
            Rational::new(e.num.into(), e.den.into()),
        ));
    }
    Ok(SustainedMeasure::from_vertices(sym, entries)?)
}

pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| anyhow!("not a rational: {text:?}"))
}

/// `delta_z`, `mu_s`, `mu_s_bar`, or `mix:W` for `W·μ_S + (1-W)·μ_S̄`.
pub fn target(text: &str) -> Result<Limit> {
    Ok(match text {
        "delta_z" => LimitMeasure::delta_z(),
        "mu_s" => LimitMeasure::mu_s(),
        "mu_s_bar" => LimitMeasure::mu_s_bar(),
        _ => {
            let w = text
                .strip_prefix("mix:")
                .ok_or_else(|| anyhow!("unknown target {text:?}"))?;
            let w = rational(w)?;
            let rest = <Rational as num_traits::One>::one() - w.clone();
            LimitMeasure::mixture(vec![
                (w, LimitMeasure::mu_s()),
                (rest, LimitMeasure::mu_s_bar()),
            ])?
        }
    })
}

/// `deg`, `const:C`, or `ball:R:V` for the indicator of the radius-`R` ball
/// type seen from vertex `V` of `x`.
pub fn local_function(text: &str, x: &Graph) -> Result<LocalFunction<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    Ok(match parts.as_slice() {
        ["deg"] => LocalFunction::degree(x.delta()),
        ["const", c] => LocalFunction::constant(rational(c)?),
        ["ball", r, v] => {
            let r: usize = r.parse().context("ball radius")?;
            let v: usize = v.parse().context("ball vertex")?;
            if v >= x.order() {
                bail!("vertex {v} is not in the graph");
            }
            LocalFunction::indicator(r, canonical_rooted(&ball(x, v, r)?)?)
        }
        _ => bail!("unknown function {text:?}; use deg, const:C or ball:R:V"),
    })
}

pub fn vertex_set(text: &str, x: &Graph) -> Result<BTreeSet<usize>> {
    let mut set = BTreeSet::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v: usize = item.parse().with_context(|| format!("vertex {item:?}"))?;
        if v >= x.order() {
            bail!("vertex {v} is not in the graph");
        }
        set.insert(v);
    }
    Ok(set)
}
