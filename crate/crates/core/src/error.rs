//! Error taxonomy shared by every module.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode the library reports.
///
/// The CLI maps each variant to a documented exit code, so the classes here
/// are part of the external contract rather than an implementation detail.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the mathematical domain an operation supports
    /// (even Jordan order, a stream spec the theorems do not cover, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller violated an operational precondition (prefix too short,
    /// mismatched truncation orders, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A configured memory or size budget would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),

    /// Residue evaluation of the tau function was requested for a modulus
    /// with no supporting congruence.
    #[error("unsupported congruence: tau residues are only available mod {supported:?}, not {m}", supported = TAU_MODULI)]
    UnsupportedCongruence { m: u64 },

    /// A witness search ran out of its step budget. This never claims the
    /// witness does not exist.
    #[error("witness not found within budget: {0}")]
    BudgetExhausted(String),

    /// Enclosure refinement hit the configured digit ceiling.
    #[error("precision ceiling: {0}")]
    PrecisionCeiling(String),

    /// Decimal certification needs more partial quotients than supplied.
    #[error("extend quotients: need roughly {required} quotients for {digits} certified digits, have {have}")]
    ExtendQuotients {
        required: usize,
        have: usize,
        digits: usize,
    },
}

/// The five moduli for which tau congruences are available.
pub const TAU_MODULI: [u64; 5] = [5, 7, 8, 9, 691];
