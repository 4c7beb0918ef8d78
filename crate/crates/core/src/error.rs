use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed network document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("node identifiers must be nonempty")]
    EmptyNodeId,
    #[error("input and output must differ (both `{0}`)")]
    InputEqualsOutput(String),
    #[error("network is not core: unreachable from input {unreachable:?}, cannot reach output {stuck:?}")]
    NotCore {
        unreachable: Vec<String>,
        stuck: Vec<String>,
    },
    #[error("more than {cap} input-output simple paths")]
    PathExplosion { cap: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("node `{0}` is not simple")]
    NotSimple(String),
    #[error("subnetwork does not belong to this network")]
    ForeignSubnetwork,
    #[error("super-simple node `{0}` is not a homeostasis source")]
    SuperSimpleSource(String),
    #[error("network with output moved to `{0}` is not core")]
    NonCoreReposition(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("no generic sample found after {0} attempts")]
    DegenerateSampling(usize),
    #[error("every entry of the block has zero cofactor")]
    NoAdjustableEntry,
    #[error("jacobian is singular")]
    SingularJacobian,
    #[error("symbolic expansion capped at {cap} nodes, network has {nodes}")]
    SymbolicCap { cap: usize, nodes: usize },
    #[error("tuning failed: {0}")]
    TuningFailed(String),
    #[error("newton iteration diverged at I = {0}")]
    NewtonDivergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_) | Error::DegenerateSampling(_) | Error::NoAdjustableEntry
        )
    }
}
