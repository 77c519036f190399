use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("{n} qubits exceed the cap of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("mask has bits beyond qubit count {n}")]
    MaskOutOfRange { n: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {qubit} listed twice")]
    DuplicateQubit { qubit: usize },
    #[error("qubit counts differ: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertices {0}, {1}, {2} do not form a triangle")]
    NotATriangle(usize, usize, usize),
    #[error("expected {expected} distinct vertices")]
    WrongVertexSet { expected: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph6: {0}")]
    Graph6(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state too large: dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("invalid party subset: {0}")]
    BadSubset(String),
    #[error("target state must be pure")]
    NotPure,
    #[error("operation needs qubit parties")]
    NotQubits,

    #[error("invalid network: {0}")]
    Network(String),
    #[error("invalid inflation: {0}")]
    Inflation(String),

    #[error("invalid witness: {0}")]
    Witness(String),
    #[error("Theorem-3 condition (case {case}) fails for triangle ({a}, {b}, {c})")]
    ConditionNotSatisfied { case: u8, a: usize, b: usize, c: usize },
    #[error("link test subsets overlap or contain an endpoint: {0}")]
    OverlappingSubsets(String),
    #[error("search cap exceeded: {0}")]
    SearchCap(String),

    #[error("unequal local dimensions for parties {0} and {1}")]
    UnequalLocalDims(usize, usize),
    #[error("source arity cap {cap} exceeds N-1 = {max}")]
    ArityCap { cap: usize, max: usize },
}
