use exact_linalg::LinalgError;

#[derive(thiserror::Error, Debug)]
pub enum IsolabError {
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("elements belong to different algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },
    #[error("matrix does not lie in the algebra {0}")]
    NotInAlgebra(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{what} could not be certified after {attempts} attempts: {detail}")]
    Inconclusive {
        what: String,
        attempts: usize,
        detail: String,
    },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("field is too small: {0}; rerun with a larger cyclotomic order (ISOLAB_CYCLOTOMIC_M)")]
    NeedLargerField(String),
    #[error("expectation mismatch in scenario {scenario}: {detail}")]
    ExpectationMismatch { scenario: String, detail: String },
    #[error("resource guard: {0} (override with --max-dim)")]
    ResourceGuard(String),
    #[error("unknown scenario {0}")]
    UnknownScenario(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl IsolabError {
    /// Process exit code contract: 2 expectation mismatch, 3 inconclusive
    /// certificate, 4 internal inconsistency, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            IsolabError::ExpectationMismatch { .. } => 2,
            IsolabError::Inconclusive { .. } => 3,
            IsolabError::Internal(_) => 4,
            _ => 1,
        }
    }
}
