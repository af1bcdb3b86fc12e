use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A generator name not present in the alphabet.
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    /// A word token that does not match the word grammar.
    #[error("malformed word token `{token}`: {reason}")]
    WordSyntax { token: String, reason: String },

    /// An alphabet that fails its invariants (empty, duplicate or invalid names).
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    /// Two operands built over different alphabets.
    #[error("alphabet mismatch")]
    AlphabetMismatch,

    /// Bad arguments to an elementary automorphism constructor.
    #[error("invalid elementary automorphism: {0}")]
    InvalidNielsen(String),

    /// An endomorphism whose image list does not line up with its alphabet.
    #[error("endomorphism images must cover the alphabet exactly ({expected} generators, got {got})")]
    ImageCount { expected: usize, got: usize },

    /// Automaton data that violates the inverse-automaton invariants.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    /// The monoid closure grew past the configured element cap.
    #[error("transition monoid exceeds the element cap of {cap}")]
    MonoidCapExceeded { cap: usize },

    /// Operation undefined for the trivial subgroup.
    #[error("operation undefined for the trivial subgroup")]
    TrivialSubgroup,

    /// A graph operation that requires a connected graph.
    #[error("graph is not connected")]
    Disconnected,

    /// Operation requires a finite-index subgroup.
    #[error("subgroup has infinite index")]
    InfiniteIndex,

    /// A stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two methods that must agree disagreed; indicates a library bug.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
