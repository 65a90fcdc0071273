use alloc::string::String;

/// Violations of the structural invariants of instances, graphs and trees.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("element {element} repeated within set {set}")]
    RepeatedElement { element: usize, set: usize },
    #[error("set {set} has {size} elements, exceeding the bound {delta}")]
    SetTooLarge { set: usize, size: usize, delta: usize },
    #[error("partial cover target {p} exceeds ground set size {n}")]
    TargetOutOfRange { p: usize, n: usize },
    #[error("node {node} out of range for {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("tree mixes oriented and undirected edges")]
    MixedOrientation,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Failures of solvers and reduction pipelines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("capacity exceeded: {what} = {got} (limit {limit})")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("search budget of {0} expansions exhausted")]
    Budget(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}
