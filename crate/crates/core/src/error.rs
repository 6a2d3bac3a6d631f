use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input itself is not a well-formed object (bad graph, bad JSON, unknown label).
    Malformed,
    /// The input is well formed but an operation's precondition does not hold.
    Precondition,
    /// A consistency check that the theory guarantees failed; indicates a bug or a
    /// precondition the caller could not see.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {edge} is a loop at vertex `{vertex}`")]
    LoopEdge { edge: usize, vertex: String },
    #[error("graph is disconnected: vertex `{vertex}` is unreachable from `{root}`")]
    Disconnected { vertex: String, root: String },
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("edge {edge} has undeclared endpoint `{label}`")]
    UnknownEndpoint { edge: usize, label: String },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("operation is undefined on a single-vertex graph")]
    SingleVertex,
    #[error("vertex `{0}` is not in the given set")]
    VertexNotInSet(String),
    #[error("firing set is empty")]
    EmptySet,
    #[error("operation requires a simple graph")]
    MultigraphInput,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("vertex `{0}` has valence above 3")]
    ValenceTooHigh(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree must have at least two vertices")]
    TreeTooSmall,
    #[error("attachment set must contain at least two vertices")]
    AttachmentSetTooSmall,
    #[error("attachment set misses vertex `{0}` of low valence")]
    AttachmentSetIncomplete(String),

    #[error("divisor is bound to a different graph")]
    GraphMismatch,
    #[error("divisor has length {found}, graph has {expected} vertices")]
    DivisorLength { expected: usize, found: usize },
    #[error("vertex `{0}` is in debt and is not the burn root")]
    DebtOutsideRoot(String),
    #[error("divisor has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("divisor does not have positive rank")]
    NotRankOne,
    #[error("graph is not 3-edge-connected")]
    NotThreeEdgeConnected,
    #[error("graph is not 3-vertex-connected")]
    NotThreeVertexConnected,
    #[error("graph needs more than {0} vertices")]
    TooFewVertices(usize),
    #[error("found {count} effective representatives through `{vertex}`, expected exactly one")]
    UniquenessViolated { vertex: String, count: usize },
    #[error("class relation is not an equivalence at `{0}`")]
    NotAnEquivalence(String),

    #[error("no positive-rank divisor of degree at most {cap} (lower bound {lower_bound})")]
    SearchCapExceeded { cap: usize, lower_bound: usize },
    #[error("graph does not have gonality 3 ({0})")]
    NotGonalityThree(String),
    #[error("divisor violates the zero-three condition at {0:?}")]
    ZeroThreeViolated(Vec<String>),

    #[error("edge {0} joins vertices with the same image but is mapped to an edge")]
    EdgeCollapseViolation(usize),
    #[error("edge {0} is not mapped to an edge joining the images of its endpoints")]
    EndpointMismatch(usize),
    #[error("morphism maps have wrong sizes: {0}")]
    MalformedMorphism(String),
    #[error("target edge {edge} is not incident to the image of `{vertex}`")]
    EdgeNotIncident { vertex: String, edge: usize },
    #[error("target graph has no edges")]
    TargetEdgeless,
    #[error("morphism is not harmonic at `{0}`")]
    NotHarmonic(String),
    #[error("morphism preimage sizes differ across target edges")]
    InconsistentDegree,
    #[error("morphism is degenerate at `{0}`")]
    Degenerate(String),
    #[error("target graph is not a tree")]
    TargetNotTree,
    #[error("quotient graph is not a tree")]
    QuotientNotTree,
    #[error("class edge count check failed: {0}")]
    EdgeCountViolation(String),
    #[error("pulled-back divisor failed the positive rank check")]
    RankCertificateFailed,

    #[error("vertex map is not an automorphism")]
    NotAutomorphism,
    #[error("automorphism fixes edge {0}")]
    FixedEdge(usize),
    #[error("automorphism does not have order 3")]
    WrongOrder,
    #[error("constructed automorphism failed verification: {0}")]
    VerificationFailed(String),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            LoopEdge { .. }
            | Disconnected { .. }
            | DuplicateVertex(_)
            | UnknownEndpoint { .. }
            | EmptyGraph
            | UnknownVertex(_)
            | UnknownEdge(_)
            | GraphMismatch
            | DivisorLength { .. }
            | MalformedMorphism(_)
            | Json(_) => ErrorKind::Malformed,
            UniquenessViolated { .. }
            | NotAnEquivalence(_)
            | InconsistentDegree
            | QuotientNotTree
            | EdgeCountViolation(_)
            | RankCertificateFailed => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            LoopEdge { .. } => "LoopEdge",
            Disconnected { .. } => "Disconnected",
            DuplicateVertex(_) => "DuplicateVertex",
            UnknownEndpoint { .. } => "UnknownEndpoint",
            EmptyGraph => "EmptyGraph",
            UnknownVertex(_) => "UnknownVertex",
            UnknownEdge(_) => "UnknownEdge",
            SingleVertex => "SingleVertex",
            VertexNotInSet(_) => "VertexNotInSet",
            EmptySet => "EmptySet",
            MultigraphInput => "MultigraphInput",
            ParameterOutOfRange(_) => "ParameterOutOfRange",
            ValenceTooHigh(_) => "ValenceTooHigh",
            NotATree => "NotATree",
            TreeTooSmall => "TreeTooSmall",
            AttachmentSetTooSmall => "AttachmentSetTooSmall",
            AttachmentSetIncomplete(_) => "AttachmentSetIncomplete",
            GraphMismatch => "GraphMismatch",
            DivisorLength { .. } => "DivisorLength",
            DebtOutsideRoot(_) => "DebtOutsideRoot",
            WrongDegree { .. } => "WrongDegree",
            NotRankOne => "NotRankOne",
            NotThreeEdgeConnected => "NotThreeEdgeConnected",
            NotThreeVertexConnected => "NotThreeVertexConnected",
            TooFewVertices(_) => "TooFewVertices",
            UniquenessViolated { .. } => "UniquenessViolated",
            NotAnEquivalence(_) => "NotAnEquivalence",
            SearchCapExceeded { .. } => "SearchCapExceeded",
            NotGonalityThree(_) => "NotGonalityThree",
            ZeroThreeViolated(_) => "ZeroThreeViolated",
            EdgeCollapseViolation(_) => "EdgeCollapseViolation",
            EndpointMismatch(_) => "EndpointMismatch",
            MalformedMorphism(_) => "MalformedMorphism",
            EdgeNotIncident { .. } => "EdgeNotIncident",
            TargetEdgeless => "TargetEdgeless",
            NotHarmonic(_) => "NotHarmonic",
            InconsistentDegree => "InconsistentDegree",
            Degenerate(_) => "Degenerate",
            TargetNotTree => "TargetNotTree",
            QuotientNotTree => "QuotientNotTree",
            EdgeCountViolation(_) => "EdgeCountViolation",
            RankCertificateFailed => "RankCertificateFailed",
            NotAutomorphism => "NotAutomorphism",
            FixedEdge(_) => "FixedEdge",
            WrongOrder => "WrongOrder",
            VerificationFailed(_) => "VerificationFailed",
            Json(_) => "Json",
        }
    }
}
