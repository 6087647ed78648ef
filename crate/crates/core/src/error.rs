use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BohmError {
    #[error("not in beta-eta normal form: {term} (first redex: {redex})")]
    NotNormal { term: String, redex: String },

    #[error("expansion width {width} is below the order {order}")]
    BadArity { width: usize, order: usize },

    #[error("not-separable: terms are alpha-equal")]
    NotSeparable,

    #[error("terms are similar; a terminal separator needs dissimilar heads")]
    StillSimilar,

    #[error("principal variables repeat along the chain: {0}")]
    DuplicatePrincipals(String),

    #[error("not closed: free variables {0}")]
    NotClosed(String),

    #[error("constant-function: the first binder does not occur in the body")]
    ConstantFunction,

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("step budget of {budget} exhausted while {context}")]
    Exhausted { budget: usize, context: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("internal error: {0}")]
    Internal(String),
}
