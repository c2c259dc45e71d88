use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u},{v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("{k} edges do not fit on {n} vertices")]
    TooManyEdges { n: usize, k: usize },
    #[error("invalid swap: {0}")]
    InvalidSwap(String),
    #[error("no near-regular graph for (n={n}, k={k}) after {attempts} greedy attempts")]
    NearRegularFailed { n: usize, k: usize, attempts: usize },
    #[error("malformed graph6: {0}")]
    Graph6(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
    #[error("enumeration needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("(n={n}, k={k}) is not admissible: {reason}")]
    Inadmissible { n: usize, k: usize, reason: String },
    #[error("graph has n={found_n}, k={found_k}; expected n={n}, k={k}")]
    DimensionMismatch {
        n: usize,
        k: usize,
        found_n: usize,
        found_k: usize,
    },
    #[error("{class} does not embed in {n} vertices")]
    ClassDoesNotEmbed { class: &'static str, n: usize },
    #[error("index is not integral: {0}")]
    NonIntegralIndex(String),
    #[error("automorphism search exceeded its node budget of {0}")]
    SearchBudget(u64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checkpoint does not match this run: {0}")]
    Checkpoint(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
