#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("input is not a tree")]
    NotATree,
    #[error("input is not a forest")]
    NotAForest,
    #[error("edge {0}-{1} not present")]
    MissingEdge(usize, usize),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("malformed offer: {0}")]
    BadOffer(String),
    #[error("malformed response: {0}")]
    BadResponse(String),
    #[error("state budget exhausted after {0} states")]
    BudgetExceeded(u64),
    #[error("policy failure: {0}")]
    Policy(String),
    #[error("invalid family spec: {0}")]
    BadFamily(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("claim falsified: {0}")]
    ClaimFalsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
