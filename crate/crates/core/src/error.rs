use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),

    #[error("duplicate vertex id {0}")]
    DuplicateVertex(u32),

    #[error("edge {index} is a loop at vertex {vertex}")]
    LoopEdge { index: usize, vertex: u32 },

    #[error("multigraph is disconnected")]
    Disconnected,

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("operation requires a closed embedding")]
    OpenEmbedding,

    #[error("vertex sets differ")]
    VertexSetMismatch,

    #[error("{0} qubits exceed the state-vector cap of {max}", max = crate::state::MAX_STATE_QUBITS)]
    TooManyQubits(usize),

    #[error("orbit enumeration exceeded the budget of {budget} members")]
    OrbitBudgetExceeded { budget: usize },

    #[error("{0} vertices exceed the orbit-key capacity of {max}", max = crate::lc::MAX_ORBIT_VERTICES)]
    OrbitTooLarge(usize),

    #[error("solution space of dimension {nullity} exceeds the enumeration limit {limit}")]
    SolutionSpaceTooLarge { nullity: usize, limit: usize },

    #[error("residual degeneracy {0} after fixing topological sector")]
    ResidualDegeneracy(u64),

    #[error("span check failed: transformed tableau differs from graph stabilizer")]
    VerificationFailed,

    #[error("not a leaf graph: {0}")]
    NotLeafGraph(String),

    #[error("qubit set mismatch: {0}")]
    QubitMismatch(String),

    #[error("cannot contract edge {0}: {1}")]
    Contraction(u32, String),

    #[error("reduction step for {system}: {reason}")]
    ReductionHypothesis { system: String, reason: String },

    #[error("missing non-locality certificate for {0}")]
    MissingCertificate(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
