use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("rotation system is not planar: V - E + F = {euler}, expected 2")]
    NonPlanar { euler: i64 },
    #[error("map is not a triangulation: {0}")]
    NotATriangulation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("triangulation has only {found} pairwise disjoint faces, {needed} required")]
    NotEnoughDisjointFaces { needed: usize, found: usize },
    #[error("radius solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("layout inconsistent: tangency residual {residual:e} exceeds tolerance")]
    LayoutInconsistent { residual: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("a point lies on a tiling square boundary; redraw the scale offset")]
    BoundaryDegenerate,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),
    #[error("malformed ball code")]
    MalformedCode,
}
