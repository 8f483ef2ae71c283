//! Exact arithmetic functions, residue-sequence periodicity certification,
//! and transcendental continued-fraction constructions.
//!
//! The crate has three layers:
//!
//! 1. **Values** — [`arith`] evaluates the classical multiplicative functions
//!    (sigma_k, phi, Jordan, unitary phi, their Dirichlet convolution) and the
//!    subset-counting functions Phi (OEIS A027375 for n >= 2) and g
//!    (A085945) exactly and modulo m; [`qseries`] produces the tau function
//!    (A000594) and normalized Eisenstein coefficients from exact integer
//!    q-expansions.
//! 2. **Sequences** — [`streams`] materializes residue/digit streams such as
//!    `tau%5` or `half_phi%9>dec`; [`period`] scans them for eventual
//!    periodicity and constructs explicit witness pairs (n1, n2) refuting a
//!    candidate period via a Dirichlet prime search.
//! 3. **Numbers** — [`cf`] wraps a digit stream in a certified rational
//!    enclosure of theta = sum digit_r / 10^r, extracts the partial quotients
//!    d_n = 1 + (floor(n*theta) mod k), and renders certified decimals of the
//!    resulting continued-fraction value.
//!
//! [`oracle`] holds brute-force reference implementations used by the test
//! suite only. The `modseq` binary exposes everything as subcommands with
//! machine-readable JSON output.

pub mod arith;
pub mod cf;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod period;
pub mod primality;
pub mod qseries;
pub mod streams;

pub use error::{Error, Result};

/// Global budgets and ceilings. Flags override environment, environment
/// overrides these defaults.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Largest index a sieve is willing to allocate for.
    pub sieve_limit: u64,
    /// Largest truncation order for q-series expansions.
    pub series_limit: usize,
    /// How many prime candidates a witness search may try.
    pub witness_prime_budget: u64,
    /// How many j' values a witness search may try.
    pub witness_step_budget: u64,
    /// Digit ceiling for theta-enclosure refinement.
    pub precision_ceiling: usize,
    /// Upper bound on the continued-fraction parameter k.
    pub max_cf_k: u64,
    /// Strong-probable-prime rounds for integers above 2^64.
    pub mr_rounds: u32,
    /// Block size used by stream generators when extending their prefix.
    pub block_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sieve_limit: 1 << 24,
            series_limit: 1 << 17,
            witness_prime_budget: 100_000,
            witness_step_budget: 100_000,
            precision_ceiling: 1_000_000,
            max_cf_k: 256,
            mr_rounds: 64,
            block_size: 1 << 16,
        }
    }
}

impl Limits {
    /// Defaults adjusted by `MODSEQ_*` environment variables.
    pub fn from_env() -> Self {
        fn get<T: std::str::FromStr>(name: &str, default: T) -> T {
            std::env::var(name)
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(default)
        }
        let d = Limits::default();
        Limits {
            sieve_limit: get("MODSEQ_SIEVE_LIMIT", d.sieve_limit),
            series_limit: get("MODSEQ_SERIES_LIMIT", d.series_limit),
            witness_prime_budget: get("MODSEQ_WITNESS_PRIME_BUDGET", d.witness_prime_budget),
            witness_step_budget: get("MODSEQ_WITNESS_STEP_BUDGET", d.witness_step_budget),
            precision_ceiling: get("MODSEQ_PRECISION_CEILING", d.precision_ceiling),
            max_cf_k: get("MODSEQ_MAX_CF_K", d.max_cf_k),
            mr_rounds: get("MODSEQ_MR_ROUNDS", d.mr_rounds),
            block_size: get("MODSEQ_BLOCK_SIZE", d.block_size),
        }
    }
}
