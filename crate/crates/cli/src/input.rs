//! Input files and named presets.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use netsym_core::graphs::{parse_graph6, Graph};
use netsym_core::network::{custom_inflation, Inflation, Network, NodeCopy, Source};
use netsym_core::states::DenseState;
use netsym_core::symmetry::cyclic_triangle_state;

use crate::CliError;

/// `{"n": 4, "edges": [[0, 1], [1, 2]]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

/// Either `amplitudes` (pure) or `density` (mixed); complex numbers are
/// `[re, im]` pairs. `normalize` rescales amplitude vectors.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Option<Vec<[f64; 2]>>,
    pub density: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    pub id: String,
    pub parties: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<String>,
    pub sources: Vec<SourceFile>,
}

type Wiring = Vec<Vec<Vec<(String, usize)>>>;

/// A network plus optional inflation data: `wiring[s][k]` lists the node
/// copies (`[label, copy]`) receiving the roles of copy `k` of source `s`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InflationFile {
    #[serde(flatten)]
    pub network: NetworkFile,
    pub copies: Option<usize>,
    pub wiring: Option<Wiring>,
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn malformed(path: &Path, message: impl ToString) -> CliError {
    CliError::Malformed { path: path.display().to_string(), message: message.to_string() }
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| malformed(path, e))
}

pub fn graph_from_json(path: &Path, text: &str) -> Result<Graph, CliError> {
    let f: GraphFile = parse_json(path, text)?;
    Graph::from_edges(f.n, &f.edges).map_err(|e| malformed(path, e))
}

pub fn graph_from_graph6(text: &str) -> Result<Graph, CliError> {
    parse_graph6(text.trim()).map_err(CliError::Core)
}

pub fn state_from_json(path: &Path, text: &str) -> Result<DenseState, CliError> {
    let f: StateFile = parse_json(path, text)?;
    let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
    let state = match (f.amplitudes, f.density) {
        (Some(a), None) => {
            let v = DVector::from_iterator(a.len(), a.iter().map(c));
            if f.normalize {
                DenseState::from_unnormalized(f.dims, v)
            } else {
                DenseState::from_vector(f.dims, v)
            }
        }
        (None, Some(rows)) => {
            let d = rows.len();
            if rows.iter().any(|r| r.len() != d) {
                return Err(malformed(path, "density matrix is not square"));
            }
            DenseState::from_density(f.dims, DMatrix::from_fn(d, d, |i, j| c(&rows[i][j])))
        }
        _ => return Err(malformed(path, "exactly one of `amplitudes` or `density` is required")),
    };
    state.map_err(|e| malformed(path, e))
}

fn network_from(path: &Path, f: &NetworkFile) -> Result<Network, CliError> {
    let index = |label: &str| {
        f.nodes.iter().position(|n| n == label).ok_or_else(|| malformed(path, format!("unknown node {label:?}")))
    };
    let mut sources = Vec::with_capacity(f.sources.len());
    for s in &f.sources {
        let parties = s.parties.iter().map(|p| index(p)).collect::<Result<Vec<_>, _>>()?;
        sources.push(Source { id: s.id.clone(), parties });
    }
    Network::new(f.nodes.clone(), sources).map_err(|e| malformed(path, e))
}

pub fn network_from_json(path: &Path, text: &str) -> Result<Network, CliError> {
    let f: InflationFile = parse_json(path, text)?;
    network_from(path, &f.network)
}

pub fn inflation_from_json(path: &Path, text: &str) -> Result<Inflation, CliError> {
    let f: InflationFile = parse_json(path, text)?;
    let base = network_from(path, &f.network)?;
    let (Some(copies), Some(wiring)) = (f.copies, f.wiring) else {
        return Err(malformed(path, "custom inflations need `copies` and `wiring`"));
    };
    let mut out = Vec::with_capacity(wiring.len());
    for per_source in wiring {
        let mut copies_out = Vec::with_capacity(per_source.len());
        for ends in per_source {
            let mut row = Vec::with_capacity(ends.len());
            for (label, copy) in ends {
                let node = base.node_index(&label).ok_or_else(|| malformed(path, format!("unknown node {label:?}")))?;
                row.push(NodeCopy::new(node, copy));
            }
            copies_out.push(row);
        }
        out.push(copies_out);
    }
    custom_inflation(base, copies, out).map_err(|e| malformed(path, e))
}

pub fn network_preset(name: &str) -> Result<Network, CliError> {
    match name {
        "triangle" => Ok(Network::triangle()),
        "square" => Ok(Network::square()),
        "tripartite-square" => Ok(Network::tripartite_square()),
        _ => Err(CliError::Usage(format!("unknown network {name:?}; expected triangle, square or tripartite-square"))),
    }
}

/// The mixed four-qubit state of the link-certification example.
pub fn link_example_state() -> DenseState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let mut s1 = DVector::from_element(16, zero);
    s1[0b0000] = Complex64::new(h, 0.0);
    s1[0b1010] = Complex64::new(h, 0.0);
    let mut s2 = DVector::from_element(16, zero);
    s2[0b0101] = Complex64::new(h, 0.0);
    s2[0b1111] = Complex64::new(-h, 0.0);
    let rho: DMatrix<Complex64> = (&s1 * s1.adjoint() + &s2 * s2.adjoint()).scale(0.5);
    DenseState::from_density(vec![2; 4], rho).expect("valid example")
}

fn preset_usize(name: &str, field: Option<&str>) -> Result<usize, CliError> {
    field
        .ok_or_else(|| CliError::Usage(format!("state preset {name:?} needs a size, e.g. {name}:3")))?
        .parse()
        .map_err(|_| CliError::Usage(format!("state preset {name:?}: size is not a number")))
}

pub const STATE_PRESETS: &str = "ghz:N, cluster:N, complete:N, graph, dicke:N:K, singlet, zeros:N, mixed:N, cyclic, link-example";

/// Named states; `graph` needs the graph given on the command line.
pub fn state_preset(spec: &str, graph: Option<&Graph>) -> Result<DenseState, CliError> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or("");
    let (a, b) = (parts.next(), parts.next());
    if parts.next().is_some() {
        return Err(CliError::Usage(format!("state preset {spec:?} has too many fields")));
    }
    let state = match name {
        "ghz" => DenseState::ghz(preset_usize(name, a)?),
        "cluster" => {
            let n = preset_usize(name, a)?;
            if n < 3 {
                return Err(CliError::Usage("ring cluster needs at least 3 qubits".into()));
            }
            DenseState::graph_state(&Graph::cycle(n)?)
        }
        "complete" => DenseState::graph_state(&Graph::complete(preset_usize(name, a)?)?),
        "graph" => {
            let g = graph.ok_or_else(|| CliError::Usage("state preset `graph` needs --graph6 or --graph-json".into()))?;
            DenseState::graph_state(g)
        }
        "dicke" => DenseState::dicke(preset_usize(name, a)?, preset_usize(name, b)?),
        "singlet" => Ok(DenseState::singlet()),
        "zeros" => DenseState::zeros(preset_usize(name, a)?),
        "mixed" => DenseState::maximally_mixed(vec![2; preset_usize(name, a)?]),
        "cyclic" => Ok(cyclic_triangle_state()),
        "link-example" => Ok(link_example_state()),
        _ => return Err(CliError::Usage(format!("unknown state preset {spec:?}; expected one of {STATE_PRESETS}"))),
    };
    state.map_err(CliError::Core)
}
