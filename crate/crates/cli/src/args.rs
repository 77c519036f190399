use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use netsym_core::nogo::DEFAULT_SCAN_CAP;

#[derive(Debug, Parser)]
#[command(name = "netsym", version, about = "Network-preparability tests for graph and multi-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Graph in graph6 format.
    #[arg(long, global = true, conflicts_with = "graph_json")]
    pub graph6: Option<String>,
    /// Graph as `{"n": .., "edges": [[u, v], ..]}`.
    #[arg(long, global = true)]
    pub graph_json: Option<PathBuf>,
    /// State as `{"dims": [..], "amplitudes" | "density": ..}`.
    #[arg(long, global = true, conflicts_with = "state")]
    pub state_json: Option<PathBuf>,
    /// Named state: ghz:N, cluster:N, complete:N, graph, dicke:N:K, singlet, zeros:N,
    /// mixed:N, cyclic, link-example.
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Visibility p of the state: p rho + (1 - p) 1/D.
    #[arg(long, global = true, value_name = "P")]
    pub noise: Option<f64>,
    /// Seed for randomized searches; NETSYM_SEED takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "OUT")]
    pub json: Option<PathBuf>,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search the local-complementation orbit for a no-go certificate.
    Nogo {
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        cap: usize,
    },
    /// Evaluate a witness on a state (default: the state it targets).
    Witness {
        kind: WitnessKind,
        /// Ring-cluster witness: chained (nine stabilizers) or the two-term
        /// doubled-network one.
        #[arg(long, value_enum, default_value_t = ClusterVariant::Chained)]
        variant: ClusterVariant,
    },
    /// Link certification between qubits a and c.
    Linkcert {
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 2)]
        c: usize,
        /// Fixed observables `P1,P2,P3`; without it the best are searched.
        #[arg(long)]
        paulis: Option<String>,
        /// Search groups `R1;R2;R3`, each a comma list of qubits.
        #[arg(long, conflicts_with = "paulis")]
        groups: Option<String>,
    },
    /// Permutation-symmetry verdict.
    Symmetry {
        /// Largest source arity; defaults to N - 1.
        #[arg(long)]
        arity: Option<usize>,
        /// Pairs whose marginal symmetry is lifted, e.g. `0-1,1-2`.
        #[arg(long)]
        lift: Option<String>,
    },
    /// Fidelity upper bounds for network-preparable states.
    Bound {
        kind: BoundKind,
        /// GHZ method; all three when omitted.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, value_enum, default_value_t = SearchArg::Symmetric)]
        search: SearchArg,
        /// Random starts (cluster optimizer, full GHZ search).
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, value_enum, default_value_t = ConstraintsArg::All)]
        constraints: ConstraintsArg,
    },
    /// Build an inflation and list its wiring.
    Inflate {
        kind: InflateKind,
        /// Base network for tau and gamma.
        #[arg(long, default_value = "triangle")]
        network: String,
        /// Network (and wiring for custom) as JSON.
        #[arg(long)]
        network_json: Option<PathBuf>,
        /// List the maximal node-copy sets with base-equal marginals.
        #[arg(long)]
        marginals: bool,
    },
    /// White-noise threshold of a witness on its target state.
    Threshold {
        #[arg(long, value_enum, default_value_t = ThresholdWitness::Ghz)]
        witness: ThresholdWitness,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WitnessKind {
    Ghz,
    Cluster,
    Theorem3,
    Tripartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClusterVariant {
    Chained,
    Tau,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundKind {
    Ghz,
    Cluster,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum MethodArg {
    CmOnly,
    CmExtra,
    GisinExtra,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SearchArg {
    Symmetric,
    SinglesZero,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ConstraintsArg {
    All,
    XiLambda,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InflateKind {
    Tau,
    Gamma,
    Custom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ThresholdWitness {
    Ghz,
    Cluster,
    ClusterTau,
    Theorem3,
    TripartiteSquare,
}
