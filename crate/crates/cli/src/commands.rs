use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use netsym_core::bounds::{
    cluster_fidelity_bound_with, ghz_fidelity_bound_with, ClusterConstraints, GhzMethod, GhzSearch,
};
use netsym_core::graphs::{triangle_decomposition, Graph};
use netsym_core::network::{equal_marginals, separable_cut, standard_inflation, Inflation, InflationKind};
use netsym_core::nogo::{observation1_scan, theorem3_check, ScanOutcome};
use netsym_core::optimize::Settings;
use netsym_core::pauli::PauliString;
use netsym_core::states::DenseState;
use netsym_core::symmetry::{marginal_symmetry_lift, observation2_verdict, Verdict};
use netsym_core::witness::{
    cluster_square_tau_witness, cluster_square_witness, ghz_triangle_witness, link_certification,
    link_certification_search, link_certification_witness, theorem3_witness, tripartite_hexagon_graph,
    tripartite_hexagon_witness, tripartite_square_witness, white_noise_threshold, Witness,
};

use crate::args::{
    BoundKind, ClusterVariant, Command, Common, ConstraintsArg, InflateKind, MethodArg, SearchArg, ThresholdWitness,
    WitnessKind,
};
use crate::{input, json, CliError, Status};

/// Largest graph whose graph state is built for reporting.
const MAX_REPORT_QUBITS: usize = 12;
const DEFAULT_FULL_STARTS: usize = 16;

pub struct Context<'a> {
    common: &'a Common,
    seed: u64,
    hasher: Sha256,
    graph: Option<Option<Graph>>,
}

impl<'a> Context<'a> {
    pub fn new(common: &'a Common, seed: u64, hasher: Sha256) -> Self {
        Self { common, seed, hasher, graph: None }
    }

    pub fn finish(self) -> impl core::fmt::LowerHex {
        self.hasher.finalize()
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = input::read(path)?;
        self.hasher.update([0x1e]);
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn graph(&mut self) -> Result<Option<Graph>, CliError> {
        if let Some(g) = &self.graph {
            return Ok(g.clone());
        }
        let g = match (&self.common.graph6, &self.common.graph_json) {
            (Some(text), _) => Some(input::graph_from_graph6(text)?),
            (None, Some(path)) => {
                let text = self.read(path)?;
                Some(input::graph_from_json(path, &text)?)
            }
            (None, None) => None,
        };
        self.graph = Some(g.clone());
        Ok(g)
    }

    fn require_graph(&mut self, command: &str) -> Result<Graph, CliError> {
        self.graph()?.ok_or_else(|| CliError::Usage(format!("{command} needs --graph6 or --graph-json")))
    }

    /// The state named on the command line, or `default` (a preset), with
    /// the noise flag applied.
    fn state(&mut self, default: Option<&str>) -> Result<(DenseState, Value), CliError> {
        let (state, source) = if let Some(path) = self.common.state_json.clone() {
            let text = self.read(&path)?;
            (input::state_from_json(&path, &text)?, "file".to_string())
        } else {
            let preset = match (&self.common.state, default) {
                (Some(p), _) => p.clone(),
                (None, Some(d)) => d.to_string(),
                (None, None) => {
                    return Err(CliError::Usage(format!("a state is required: --state-json or --state ({})", input::STATE_PRESETS)))
                }
            };
            let g = self.graph()?;
            (input::state_preset(&preset, g.as_ref())?, preset)
        };
        let noise = self.common.noise;
        let state = match noise {
            Some(p) => state.white_noise(p)?,
            None => state,
        };
        let info = json::state_info(&state, &source, noise);
        Ok((state, info))
    }

    fn reject_state_flags(&self, command: &str) -> Result<(), CliError> {
        if self.common.state.is_some() || self.common.state_json.is_some() || self.common.noise.is_some() {
            return Err(CliError::Usage(format!("{command} takes no state, --state-json or --noise")));
        }
        Ok(())
    }

    fn reject_graph_flags(&self, command: &str) -> Result<(), CliError> {
        if self.common.graph6.is_some() || self.common.graph_json.is_some() {
            return Err(CliError::Usage(format!("{command} takes no graph")));
        }
        Ok(())
    }
}

type Outcome = Result<(Value, Status), CliError>;

pub fn dispatch(cmd: &Command, ctx: &mut Context) -> Outcome {
    match cmd {
        Command::Nogo { cap } => nogo(ctx, *cap),
        Command::Witness { kind, variant } => witness(ctx, *kind, *variant),
        Command::Linkcert { a, c, paulis, groups } => linkcert(ctx, *a, *c, paulis.as_deref(), groups.as_deref()),
        Command::Symmetry { arity, lift } => symmetry(ctx, *arity, lift.as_deref()),
        Command::Bound { kind, method, search, starts, constraints } => bound(ctx, *kind, *method, *search, *starts, *constraints),
        Command::Inflate { kind, network, network_json, marginals } => inflate(ctx, *kind, network, network_json.as_deref(), *marginals),
        Command::Threshold { witness } => threshold(ctx, *witness),
    }
}

fn nogo(ctx: &mut Context, cap: usize) -> Outcome {
    ctx.reject_state_flags("nogo")?;
    let g = ctx.require_graph("nogo")?;
    match observation1_scan(&g, cap)? {
        ScanOutcome::Certificate(cert) => {
            cert.verify(&g)?;
            let h = cert.transformed(&g)?;
            let lhs = if h.n() <= MAX_REPORT_QUBITS {
                Some(cert.witness.evaluate(&DenseState::graph_state(&h)?)?.lhs)
            } else {
                None
            };
            let (a, b, c) = cert.triangle;
            let rule = cert.rule.as_ref().map(|r| json!({ "vertex": r.vertex, "degree": r.degree, "lc": r.lc }));
            let results = json!({
                "graph": json::graph(&g),
                "outcome": "certificate",
                "certificate": {
                    "lc_sequence": cert.lc_sequence,
                    "transformed": json::graph(&h),
                    "triangle": [a, b, c],
                    "case": cert.case.number(),
                    "rule": rule,
                    "witness": json::witness(&cert.witness),
                    "lhs_on_graph_state": lhs,
                    "verified": true,
                },
            });
            Ok((results, Status::NotPreparable))
        }
        ScanOutcome::NoMatch { visited } => {
            Ok((json!({ "graph": json::graph(&g), "outcome": "no_match", "visited": visited }), Status::Completed))
        }
        ScanOutcome::TriviallyPreparable => {
            Ok((json!({ "graph": json::graph(&g), "outcome": "trivially_preparable" }), Status::Completed))
        }
        ScanOutcome::CapExhausted { visited } => {
            Err(CliError::Cap(format!("orbit cap {cap} reached after {visited} graphs without a certificate; raise --cap")))
        }
    }
}

fn theorem3_for(g: &Graph) -> Result<Witness, CliError> {
    let m = theorem3_check(g).ok_or_else(|| {
        CliError::NotApplicable("no triangle of this graph meets a triangle condition; `nogo` also searches its orbit".into())
    })?;
    let (a, b, c) = m.triangle;
    Ok(theorem3_witness(g, &triangle_decomposition(g, a, b, c)?, m.case)?)
}

fn evaluate(w: &Witness, s: &DenseState, info: Value) -> Result<Value, CliError> {
    let r = w.evaluate(s)?;
    Ok(json!({ "witness": json::witness(w), "state": info, "report": json::report(&r) }))
}

fn violated(results: &[Value]) -> Status {
    if results.iter().any(|r| r["report"]["violated"] == Value::Bool(true)) {
        Status::Violated
    } else {
        Status::Completed
    }
}

fn witness(ctx: &mut Context, kind: WitnessKind, variant: ClusterVariant) -> Outcome {
    if variant != ClusterVariant::Chained && !matches!(kind, WitnessKind::Cluster) {
        return Err(CliError::Usage("--variant applies to the cluster witness only".into()));
    }
    let evaluations = match kind {
        WitnessKind::Ghz => {
            let (s, info) = ctx.state(Some("ghz:3"))?;
            vec![evaluate(&ghz_triangle_witness(), &s, info)?]
        }
        WitnessKind::Cluster => {
            let w = match variant {
                ClusterVariant::Chained => cluster_square_witness(),
                ClusterVariant::Tau => cluster_square_tau_witness(),
            };
            let (s, info) = ctx.state(Some("cluster:4"))?;
            vec![evaluate(&w, &s, info)?]
        }
        WitnessKind::Theorem3 => {
            let g = ctx.require_graph("witness theorem3")?;
            let w = theorem3_for(&g)?;
            let (s, info) = ctx.state(Some("graph"))?;
            vec![evaluate(&w, &s, info)?]
        }
        WitnessKind::Tripartite => {
            ctx.reject_graph_flags("witness tripartite")?;
            let explicit = ctx.common.state.is_some() || ctx.common.state_json.is_some();
            let pairs = [(tripartite_square_witness(), Graph::complete(4)?), (tripartite_hexagon_witness(), tripartite_hexagon_graph())];
            let mut out = Vec::new();
            if explicit {
                let (s, info) = ctx.state(None)?;
                for (w, _) in pairs.iter().filter(|(w, _)| w.n == s.num_parties()) {
                    out.push(evaluate(w, &s, info.clone())?);
                }
                if out.is_empty() {
                    return Err(CliError::NotApplicable("tripartite witnesses act on 4 or 6 qubits".into()));
                }
            } else {
                for (w, g) in &pairs {
                    let mut s = DenseState::graph_state(g)?;
                    if let Some(p) = ctx.common.noise {
                        s = s.white_noise(p)?;
                    }
                    let info = json::state_info(&s, &format!("graph:{}", netsym_core::graphs::format_graph6(g)), ctx.common.noise);
                    out.push(evaluate(w, &s, info)?);
                }
            }
            out
        }
    };
    let status = violated(&evaluations);
    Ok((json!({ "evaluations": evaluations }), status))
}

fn parse_paulis(text: &str, n: usize) -> Result<[PauliString; 3], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--paulis needs three comma-separated strings, got {}", parts.len())));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        let q: PauliString = p.parse().map_err(|e| CliError::Usage(format!("--paulis {p:?}: {e}")))?;
        if q.num_qubits() != n {
            return Err(CliError::Usage(format!("--paulis {p:?} has {} letters for {n} qubits", q.num_qubits())));
        }
        out.push(q);
    }
    Ok([out[0], out[1], out[2]])
}

fn parse_groups(text: &str, n: usize) -> Result<[u64; 3], CliError> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage("--groups needs three `;`-separated qubit lists".into()));
    }
    let mut out = [0u64; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        for q in part.split(',').map(str::trim).filter(|q| !q.is_empty()) {
            let q: usize = q.parse().map_err(|_| CliError::Usage(format!("--groups: {q:?} is not a qubit index")))?;
            if q >= n {
                return Err(CliError::Usage(format!("--groups: qubit {q} out of range for {n} qubits")));
            }
            *slot |= 1 << q;
        }
    }
    Ok(out)
}

fn linkcert(ctx: &mut Context, a: usize, c: usize, paulis: Option<&str>, groups: Option<&str>) -> Outcome {
    let (s, info) = ctx.state(Some("link-example"))?;
    let n = s.num_parties();
    let (observables, report) = match paulis {
        Some(text) => {
            let p = parse_paulis(text, n)?;
            let r = link_certification(&s, a, c, p)?;
            (p, r)
        }
        None => {
            let g = groups.map(|t| parse_groups(t, n)).transpose()?;
            let found = link_certification_search(&s, a, c, g)?;
            (found.observables, found.report)
        }
    };
    let witness = link_certification_witness(n, a, c, observables)?;
    let status = if report.violated { Status::Violated } else { Status::Completed };
    let results = json!({
        "endpoints": [a, c],
        "observables": observables.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "searched": paulis.is_none(),
        "state": info,
        "witness": json::witness(&witness),
        "report": json::report(&report),
    });
    Ok((results, status))
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .map(|p| {
            let (i, j) = p.trim().split_once('-').ok_or_else(|| CliError::Usage(format!("--lift: {p:?} is not of the form i-j")))?;
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--lift: {x:?} is not a party index")));
            Ok((parse(i)?, parse(j)?))
        })
        .collect()
}

fn symmetry(ctx: &mut Context, arity: Option<usize>, lift: Option<&str>) -> Outcome {
    let (s, info) = ctx.state(None)?;
    let n = s.num_parties();
    let cap = arity.unwrap_or(n.saturating_sub(1));
    let v = observation2_verdict(&s, cap)?;
    let lift = match lift {
        Some(text) => {
            let r = marginal_symmetry_lift(&s, &parse_pairs(text)?)?;
            let pairs: Vec<Value> = r
                .pairs
                .iter()
                .map(|p| {
                    let sign = p.marginal.map(|sg| format!("{sg:?}").to_lowercase());
                    json!({ "pair": [p.pair.0, p.pair.1], "marginal": sign, "global": p.global })
                })
                .collect();
            json!({ "pairs": pairs, "lifts": r.lifts, "generates_full_group": r.generates_full_group })
        }
        None => Value::Null,
    };
    let status = if v.verdict == Verdict::NetworkInfeasible { Status::NetworkInfeasible } else { Status::Completed };
    Ok((json!({ "state": info, "arity_cap": cap, "verdict": json::symmetry(&v), "lift": lift }), status))
}

fn bound(
    ctx: &mut Context,
    kind: BoundKind,
    method: Option<MethodArg>,
    search: SearchArg,
    starts: Option<usize>,
    constraints: ConstraintsArg,
) -> Outcome {
    ctx.reject_state_flags("bound")?;
    ctx.reject_graph_flags("bound")?;
    let results = match kind {
        BoundKind::Ghz => {
            let methods: Vec<GhzMethod> = match method {
                Some(MethodArg::CmOnly) => vec![GhzMethod::CmOnly],
                Some(MethodArg::CmExtra) => vec![GhzMethod::CmExtra],
                Some(MethodArg::GisinExtra) => vec![GhzMethod::GisinExtra],
                None => GhzMethod::ALL.to_vec(),
            };
            let search = match search {
                SearchArg::Symmetric => GhzSearch::Symmetric,
                SearchArg::SinglesZero => GhzSearch::SinglesZero,
                SearchArg::Full => GhzSearch::Full { starts: starts.unwrap_or(DEFAULT_FULL_STARTS), seed: ctx.seed },
            };
            let bounds: Vec<Value> = methods
                .into_iter()
                .map(|m| {
                    let b = ghz_fidelity_bound_with(m, search);
                    json!({ "method": m.name(), "bound": b.bound, "analytic": b.analytic, "point": json::correlation(&b.point) })
                })
                .collect();
            json!({ "target": "ghz3", "search": format!("{search:?}"), "bounds": bounds })
        }
        BoundKind::Cluster => {
            if method.is_some() {
                return Err(CliError::Usage("--method applies to `bound ghz` only".into()));
            }
            let settings = Settings { starts: starts.unwrap_or(Settings::default().starts), seed: ctx.seed, ..Settings::default() };
            let (c, name) = match constraints {
                ConstraintsArg::All => (ClusterConstraints::All, "all"),
                ConstraintsArg::XiLambda => (ClusterConstraints::XiLambdaOnly, "xi_lambda"),
                ConstraintsArg::None => (ClusterConstraints::None, "none"),
            };
            let b = cluster_fidelity_bound_with(c, &settings)?;
            json!({
                "target": "ring_cluster4",
                "constraints": name,
                "seed": ctx.seed,
                "bound": b.bound,
                "point": json::cluster_point(&b.point),
                "starts": b.starts,
                "converged": b.converged,
            })
        }
    };
    Ok((results, Status::Completed))
}

fn inflate(ctx: &mut Context, kind: InflateKind, network: &str, network_json: Option<&Path>, marginals: bool) -> Outcome {
    ctx.reject_state_flags("inflate")?;
    ctx.reject_graph_flags("inflate")?;
    let infl: Inflation = match kind {
        InflateKind::Custom => {
            let path = network_json.ok_or_else(|| CliError::Usage("inflate custom needs --network-json".into()))?;
            let text = ctx.read(path)?;
            input::inflation_from_json(path, &text)?
        }
        InflateKind::Tau | InflateKind::Gamma => {
            let base = match network_json {
                Some(path) => {
                    let text = ctx.read(path)?;
                    input::network_from_json(path, &text)?
                }
                None => input::network_preset(network)?,
            };
            let k = if matches!(kind, InflateKind::Tau) { InflationKind::Tau } else { InflationKind::Gamma };
            standard_inflation(&base, k)?
        }
    };
    let mut results = json::inflation(&infl);
    results["separable_cut"] = match separable_cut(&infl) {
        Some((x, y)) => json!([json::labels(&infl, &x), json::labels(&infl, &y)]),
        None => Value::Null,
    };
    if marginals {
        let list: Vec<Value> = equal_marginals(&infl)?
            .iter()
            .map(|m| {
                let base: Vec<&str> = m.base_subset.iter().map(|&v| infl.base().nodes()[v].as_str()).collect();
                json!({ "inflation": json::labels(&infl, &m.inflation_subset), "base": base })
            })
            .collect();
        results["marginals"] = Value::Array(list);
    }
    Ok((results, Status::Completed))
}

fn threshold(ctx: &mut Context, which: ThresholdWitness) -> Outcome {
    if ctx.common.noise.is_some() {
        return Err(CliError::Usage("threshold scans the noise itself; drop --noise".into()));
    }
    let (w, default) = match which {
        ThresholdWitness::Ghz => (ghz_triangle_witness(), "ghz:3"),
        ThresholdWitness::Cluster => (cluster_square_witness(), "cluster:4"),
        ThresholdWitness::ClusterTau => (cluster_square_tau_witness(), "cluster:4"),
        ThresholdWitness::Theorem3 => (theorem3_for(&ctx.require_graph("threshold --witness theorem3")?)?, "graph"),
        ThresholdWitness::TripartiteSquare => (tripartite_square_witness(), "complete:4"),
    };
    let (s, info) = ctx.state(Some(default))?;
    let t = white_noise_threshold(&w, &s)?;
    let results = json!({
        "witness": json::witness(&w),
        "state": info,
        "threshold": t.threshold,
        "closed_form": t.closed_form,
        "never_violated": t.never_violated,
    });
    Ok((results, Status::Completed))
}
