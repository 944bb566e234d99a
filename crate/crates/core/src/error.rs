use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An objective or constraint specification is internally inconsistent
    /// or does not fit the ground set.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// The declared monotone flag contradicts the objective family.
    #[error("agent {agent}: objective family '{family}' is {expected}, but monotone={declared}")]
    MonotoneFlagMismatch {
        agent: usize,
        family: &'static str,
        expected: &'static str,
        declared: bool,
    },

    /// A non-dummy item appeared in more than one pick event.
    #[error("item {item} picked more than once in trace")]
    DuplicateItem { item: u32 },

    /// A trace replay produced a set that is not independent for its agent.
    #[error("agent {agent}: reconstructed solution violates the constraint")]
    InfeasibleSolution { agent: usize },

    /// A policy returned an unavailable or infeasible item; the protocol
    /// aborts rather than silently skipping.
    #[error("protocol fault: agent {agent} {reason}")]
    PolicyFault { agent: usize, reason: String },

    /// Exhaustive enumeration was requested above its size limit.
    #[error("{what} needs at most {limit} items, got {got}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// A theorem check was requested for an agent/constraint it does not
    /// cover (e.g. the cardinality bound on a non-cardinality constraint).
    #[error("bound mismatch: {0}")]
    BoundMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
