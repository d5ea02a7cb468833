//! Error type shared across the library.
//!
//! Every fallible operation returns [`Error`]. Variants split into two
//! families, reflected in [`Error::exit_code`]:
//!
//! * **Usage errors** (exit code 2): malformed input, dimension mismatches,
//!   out-of-window degrees, unverified preconditions. The computation never
//!   got far enough to decide a mathematical claim.
//! * **Verified failures** (exit code 1): the engine ran to completion and
//!   certifies that a mathematical claim is false (an axiom fails, a lift
//!   obstruction is nonzero, a linear system is inconsistent, ...). These
//!   usually carry a witness.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    // ---- usage / input errors (exit code 2) -------------------------------
    /// Matrix shapes are incompatible for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An involution was required but the ring does not carry one.
    #[error("ring has no involution: {0}")]
    MissingInvolution(String),

    /// A degree fell outside the finite computation window.
    #[error("degree out of window: {0}")]
    OutOfWindow(String),

    /// A symbol in the input does not name a known generator/vertex/edge.
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),

    /// The graph has a sink, so it is not strongly graded and frame
    /// operations are refused.
    #[error("graph has a sink: {0}")]
    SinkPresent(String),

    /// The group operation left the declared window/carrier.
    #[error("group window not closed: {0}")]
    WindowNotClosed(String),

    /// Conditions required before building an object were not verified.
    #[error("preconditions not verified: {0}")]
    ConditionsNotVerified(String),

    /// A map declared as graded fails to preserve the grading.
    #[error("map is not graded: {0}")]
    NotGraded(String),

    /// Malformed input (JSON shape, bad CLI arguments, value parse failure).
    #[error("bad input: {0}")]
    BadInput(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    // ---- verified mathematical failures (exit code 1) ---------------------
    /// A claimed free-basis/invertibility certificate failed.
    #[error("not a basis: {0}")]
    NotABasis(String),

    /// A frame/factor-system axiom fails; carries the violated identity.
    #[error("axiom violated: {0}")]
    AxiomViolation(String),

    /// A conjugacy/isomorphism witness fails its defining equations.
    #[error("witness rejected: {0}")]
    WitnessRejected(String),

    /// A homogeneous decomposition did not recompose to the input.
    #[error("decomposition mismatch: {0}")]
    DecompositionMismatch(String),

    /// The ring fails the Parseval property (verified witness failure).
    #[error("not Parseval: {0}")]
    NotParseval(String),

    /// Two expressions required to be equal are provably distinct.
    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),

    /// First lifting condition fails; carries a witness pair.
    #[error("lifting condition 1 fails: {0}")]
    Cond1Violation(String),

    /// Second lifting condition fails; carries a witness pair.
    #[error("lifting condition 2 fails: {0}")]
    Cond2Violation(String),

    /// Star-compatible lifting condition 1 fails.
    #[error("star lifting condition 1 fails: {0}")]
    StarCond1Violation(String),

    /// Star-compatible lifting condition 2 fails.
    #[error("star lifting condition 2 fails: {0}")]
    StarCond2Violation(String),

    /// A built lift fails to commute with the involution.
    #[error("lift does not preserve star: {0}")]
    StarNotPreserved(String),

    /// An element claimed central fails to commute with a generator.
    #[error("element not central: {0}")]
    NotCentral(String),

    /// A declared group action fails functoriality on a witness.
    #[error("action check failed: {0}")]
    ActionCheckFailed(String),

    /// A 2-cochain fails the twisted cocycle identity.
    #[error("cocycle identity fails: {0}")]
    CocycleViolation(String),

    /// A linear/coboundary problem is certified inconsistent.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// Central extraction z from the curvature defect does not reproduce it.
    #[error("central extraction mismatch: {0}")]
    CentralExtractionMismatch(String),

    /// A map declared a crossed homomorphism fails its identity.
    #[error("not a crossed homomorphism: {0}")]
    NotCrossedHom(String),

    /// A map declared a gauge transformation fails its identity.
    #[error("not a gauge transformation: {0}")]
    NotGauge(String),

    /// A bracket of sections leaves the declared span.
    #[error("bracket does not close: {0}")]
    BracketNotClosed(String),

    /// The curvature fails the Bianchi/compatibility identity.
    #[error("Bianchi identity fails: {0}")]
    BianchiViolation(String),

    /// Two independently computed objects disagree.
    #[error("consistency mismatch: {0}")]
    ConsistencyMismatch(String),

    /// The kernel of the evaluation map is not the expected central line.
    #[error("kernel is not the central line: {0}")]
    KernelNotCentralLine(String),

    /// A declared relation of the ring is violated by a candidate map.
    #[error("relation violated: {0}")]
    RelationViolated(String),

    /// A generator-wise condition fails (e.g. derivation well-definedness).
    #[error("generator condition fails: {0}")]
    GeneratorConditionFails(String),
}

impl Error {
    /// Process exit code classification: `2` for usage/input problems,
    /// `1` for verified mathematical failures.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            DimensionMismatch(_)
            | MissingInvolution(_)
            | OutOfWindow(_)
            | UnknownSymbol(_)
            | SinkPresent(_)
            | WindowNotClosed(_)
            | ConditionsNotVerified(_)
            | NotGraded(_)
            | BadInput(_)
            | Io(_) => 2,
            _ => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_usage_from_math() {
        assert_eq!(Error::BadInput("x".into()).exit_code(), 2);
        assert_eq!(Error::DimensionMismatch("x".into()).exit_code(), 2);
        assert_eq!(Error::AxiomViolation("x".into()).exit_code(), 1);
        assert_eq!(Error::NoSolution("x".into()).exit_code(), 1);
    }
}
