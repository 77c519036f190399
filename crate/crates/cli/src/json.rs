//! JSON views of core results.

use serde_json::{json, Value};

use netsym_core::bounds::{ClusterVariables, CorrelationVariables};
use netsym_core::graphs::{format_graph6, Graph};
use netsym_core::network::{Inflation, Network, NodeCopy};
use netsym_core::states::DenseState;
use netsym_core::symmetry::{Evidence, ProductEvidence, SymmetryVerdict, Verdict};
use netsym_core::witness::{describe_lift, Witness, WitnessReport, WitnessTerm};

pub fn graph(g: &Graph) -> Value {
    json!({ "graph6": format_graph6(g), "n": g.n(), "edges": g.edges() })
}

pub fn witness(w: &Witness) -> Value {
    let terms: Vec<Value> = w
        .terms
        .iter()
        .map(|t| match t {
            WitnessTerm::Direct(p) => json!({ "direct": p.to_string() }),
            WitnessTerm::Chained(links) => json!({ "chained": links.iter().map(|p| p.to_string()).collect::<Vec<_>>() }),
        })
        .collect();
    let lift = if w.proof.is_some() { describe_lift(w).ok() } else { None };
    json!({ "name": w.name, "qubits": w.n, "terms": terms, "lifted": lift })
}

pub fn report(r: &WitnessReport) -> Value {
    let terms: Vec<Value> = r
        .terms
        .iter()
        .map(|t| json!({ "observables": t.observables, "expectations": t.expectations, "value": t.value, "clamped": t.clamped }))
        .collect();
    json!({ "name": r.name, "lhs": r.lhs, "bound": r.bound, "slack": r.slack, "violated": r.violated, "terms": terms })
}

pub fn state_info(s: &DenseState, source: &str, noise: Option<f64>) -> Value {
    json!({ "source": source, "dims": s.dims(), "pure": s.is_pure(), "noise": noise })
}

pub fn correlation(v: &CorrelationVariables) -> Value {
    json!({ "a": v.a, "b": v.b, "c": v.c, "d": v.d, "e": v.e, "f": v.f })
}

pub fn cluster_point(v: &ClusterVariables) -> Value {
    json!({ "theta": v.theta, "lambda": v.lambda, "xi": v.xi, "sigma": v.sigma, "omega": v.omega })
}

pub fn network(n: &Network) -> Value {
    let sources: Vec<Value> = n
        .sources()
        .iter()
        .map(|s| json!({ "id": s.id, "parties": s.parties.iter().map(|&p| n.nodes()[p].clone()).collect::<Vec<_>>() }))
        .collect();
    json!({ "nodes": n.nodes(), "sources": sources })
}

pub fn labels(infl: &Inflation, set: &[NodeCopy]) -> Vec<String> {
    set.iter().map(|&nc| infl.label(nc)).collect()
}

pub fn inflation(infl: &Inflation) -> Value {
    let base = infl.base();
    let mut source_copies = Vec::new();
    for (s, per_copy) in infl.wiring().iter().enumerate() {
        for (k, ends) in per_copy.iter().enumerate() {
            source_copies.push(json!({ "source": base.sources()[s].id, "copy": k, "feeds": labels(infl, ends) }));
        }
    }
    json!({
        "network": network(base),
        "copies": infl.copies(),
        "qubits": infl.num_qubits(),
        "node_copies": (0..infl.num_qubits()).map(|q| infl.label(infl.node_copy(q))).collect::<Vec<_>>(),
        "source_copies": source_copies,
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::NetworkInfeasible => "network_infeasible",
        Verdict::FeasibleFullySeparable => "feasible_fully_separable",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NotApplicable => "not_applicable",
    }
}

pub fn symmetry(v: &SymmetryVerdict) -> Value {
    let evidence = match &v.evidence {
        Evidence::Antisymmetric => json!({ "kind": "antisymmetric" }),
        Evidence::NptCut { subset, min_eigenvalue } => json!({ "kind": "npt_cut", "subset": subset, "min_eigenvalue": min_eigenvalue }),
        Evidence::AllPpt => json!({ "kind": "all_ppt" }),
        Evidence::ProductFound(p) => json!({ "kind": "product", "form": match p {
            ProductEvidence::PureProduct => "pure_product",
            ProductEvidence::Diagonal => "diagonal",
            ProductEvidence::ProductEigenbasis => "product_eigenbasis",
        }}),
        Evidence::None => json!({ "kind": "none" }),
    };
    json!({
        "symmetric": v.symmetric,
        "antisymmetric": v.antisymmetric,
        "evidence": evidence,
        "verdict": verdict_name(v.verdict),
    })
}
