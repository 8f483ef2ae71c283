//! Empirical periodicity certification and constructive non-periodicity
//! witnesses.
//!
//! A sequence is eventually periodic when there are N, L >= 1 with
//! `seq[n+L] = seq[n]` for all n >= N. [`scan_period`] finds the minimal
//! such pair over a finite prefix (minimal in lexicographic (L, N) order) or
//! certifies that none exists within the scanned bounds.
//!
//! [`witness_violation`] goes the other way: following the two general
//! non-periodicity criteria (one for functions with the divisibility
//! property f(p) | f(n) for p | n, one for multiplicative functions), it
//! constructs an explicit pair n1 = p and n2 = p*q with q = 1 + K*j'*p*L
//! prime in the right progression, so that n1 = n2 (mod L) yet
//! f(n1) != f(n2) (mod m) — refuting period L from any start N <= p. The
//! progression always contains primes by Dirichlet's theorem; the search
//! still enforces configurable budgets and never claims non-existence.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::arith::{euler_phi, mod_eval, mul_mod, FactoredInteger, ModFn, ModulusContext};
use crate::primality::{is_prime, is_prime_u64, Certainty, PrimesInClass};
use crate::qseries::{eisenstein_scalar, eisenstein_sigma_order};
use crate::{Error, Limits, Result};

/// Outcome of a period scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PeriodReport {
    /// Minimal (L, N): `seq[n+L] = seq[n]` for all N <= n <= prefix_len - L,
    /// and no pair with smaller L, or equal L and smaller N, satisfies this.
    Periodic {
        #[serde(rename = "N")]
        n: u64,
        #[serde(rename = "L")]
        l: u64,
    },
    NoPeriodUpTo {
        #[serde(rename = "N_max")]
        n_max: u64,
        #[serde(rename = "L_max")]
        l_max: u64,
        prefix_len: u64,
    },
}

/// Scan a prefix for eventual periodicity with start <= n_max and period
/// <= l_max. Requires `seq.len() >= n_max + 2*l_max` so every candidate
/// period is tested against at least one full window beyond the start.
///
/// For each L the minimal admissible N is one past the last mismatch
/// position, found in one pass; L ascends, so the first hit is minimal in
/// lexicographic (L, N) order.
pub fn scan_period<T: PartialEq>(seq: &[T], n_max: u64, l_max: u64) -> Result<PeriodReport> {
    let len = seq.len() as u64;
    if len < n_max + 2 * l_max {
        return Err(Error::Usage(format!(
            "prefix of length {len} is too short for N_max = {n_max}, L_max = {l_max} \
             (need at least N_max + 2*L_max = {})",
            n_max + 2 * l_max
        )));
    }
    for l in 1..=l_max {
        // Last 1-indexed position i with seq[i] != seq[i+l].
        let mut last_mismatch = 0u64;
        for i in 0..(len - l) as usize {
            if seq[i] != seq[i + l as usize] {
                last_mismatch = i as u64 + 1;
            }
        }
        let minimal_n = last_mismatch + 1;
        if minimal_n <= n_max {
            return Ok(PeriodReport::Periodic { n: minimal_n, l });
        }
    }
    Ok(PeriodReport::NoPeriodUpTo {
        n_max,
        l_max,
        prefix_len: len,
    })
}

/// Quadratic reference: definition-checks every (L, N) pair in lexicographic
/// order with N_max = L_max = len/3. Used to validate `scan_period`.
pub fn minimal_period_oracle<T: PartialEq>(seq: &[T]) -> PeriodReport {
    let len = seq.len() as u64;
    let bound = len / 3;
    for l in 1..=bound {
        for n in 1..=bound {
            let holds = (n..=len - l).all(|i| seq[(i - 1) as usize] == seq[(i + l - 1) as usize]);
            if holds {
                return PeriodReport::Periodic { n, l };
            }
        }
    }
    PeriodReport::NoPeriodUpTo {
        n_max: bound,
        l_max: bound,
        prefix_len: len,
    }
}

// ---------------------------------------------------------------------------
// Witness construction.
// ---------------------------------------------------------------------------

/// Function tags supported by the witness hypothesis table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessFn {
    Tau,
    Eisenstein(u32),
    NathansonPhi,
    EulerPhi,
    Sigma,
    SigmaConvPhi,
    Jordan(u32),
    UnitaryPhi,
}

impl std::fmt::Display for WitnessFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessFn::Tau => write!(f, "tau"),
            WitnessFn::Eisenstein(w) => write!(f, "eis{w}"),
            WitnessFn::NathansonPhi => write!(f, "nathanson_phi"),
            WitnessFn::EulerPhi => write!(f, "phi"),
            WitnessFn::Sigma => write!(f, "sigma"),
            WitnessFn::SigmaConvPhi => write!(f, "sigma_conv_phi"),
            WitnessFn::Jordan(v) => write!(f, "jordan{v}"),
            WitnessFn::UnitaryPhi => write!(f, "unitary_phi"),
        }
    }
}

/// Which of the two general criteria a witness realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Needs f(p) | f(n) for p | n, plus a progression p = 1 (mod K(m))
    /// forcing m | f(p): contradiction via 0 vs a nonzero residue.
    Divisibility,
    /// Needs f multiplicative on squarefree integers with residues r1 at
    /// primes = 1 (mod m) and r2 on another progression, r2 != r2*r1.
    Multiplicative,
}

/// Search parameters realizing one criterion for one (f, m) pair.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub criterion: Criterion,
    /// Progression modulus K(m) for the q-search (divisibility criterion);
    /// the multiplicative criterion uses m itself.
    pub k_of_m: Option<u64>,
    /// Hunt p_N among primes in this residue class.
    pub p_class: u64,
    pub p_modulus: u64,
    pub r1: Option<u64>,
    pub r2: Option<u64>,
}

impl Hypothesis {
    fn q_modulus(&self, m: u64) -> u64 {
        match self.criterion {
            Criterion::Divisibility => self.k_of_m.expect("divisibility carries K(m)"),
            Criterion::Multiplicative => m,
        }
    }
}

fn smallest_unit_class(m: u64, extra: impl Fn(u64) -> bool) -> Option<u64> {
    (2..=m.saturating_sub(2)).find(|&r| num_integer::gcd(r, m) == 1 && extra(r))
}

/// The built-in hypothesis table. Each entry follows the residue classes
/// used to prove the corresponding non-periodicity claim:
///
/// - `phi`, `jordan_v`, `unitary_phi` (m >= 3): divisibility with K(m) = m
///   and class m-1 (residue m-2 at such primes), or equivalently the
///   multiplicative criterion with r1 = 0, r2 = m-2.
/// - `nathanson_phi` (odd m >= 5): divisibility with K(m) = phi(m), class
///   phi(m)-1, where 2^p - 2 = (m-3)/2 != 0 (mod m).
/// - `sigma`, `sigma_conv_phi` (m >= 7): multiplicative with r1 = 2 and a
///   unit class r giving r2 = r+1 (resp. 2r).
/// - `tau` (m in {5,7,8,9,691}): multiplicative via the classical
///   congruences; r1 = 2 at class 1, and per-m (class, r2) below.
/// - `eis_w`: multiplicative on the underlying sigma_{w-1} (r1 = 2 at class
///   1, r2 = 2^{w-1}+1 at class 2), with the scalar a unit mod m; requires
///   m >= 3, gcd(m, scalar) = 1, and m not dividing 2^{w-1}+1.
pub fn hypothesis_for(f: WitnessFn, m: u64, requested: Option<Criterion>) -> Result<Hypothesis> {
    let unsupported = |msg: &str| -> Result<Hypothesis> {
        Err(Error::Domain(format!(
            "no witness hypothesis for {f} mod {m}: {msg}"
        )))
    };
    let hyp = match f {
        WitnessFn::EulerPhi | WitnessFn::Jordan(_) | WitnessFn::UnitaryPhi => {
            if let WitnessFn::Jordan(v) = f {
                if v < 3 || v % 2 == 0 {
                    return Err(Error::Domain(format!(
                        "jordan totient requires odd order >= 3, got {v}"
                    )));
                }
            }
            if m < 3 {
                return unsupported("requires m >= 3");
            }
            match requested.unwrap_or(Criterion::Divisibility) {
                Criterion::Divisibility => Hypothesis {
                    criterion: Criterion::Divisibility,
                    k_of_m: Some(m),
                    p_class: m - 1,
                    p_modulus: m,
                    r1: None,
                    r2: None,
                },
                Criterion::Multiplicative => Hypothesis {
                    criterion: Criterion::Multiplicative,
                    k_of_m: None,
                    p_class: m - 1,
                    p_modulus: m,
                    r1: Some(0),
                    r2: Some(m - 2),
                },
            }
        }
        WitnessFn::NathansonPhi => {
            if m < 5 || m % 2 == 0 {
                return unsupported("requires odd m >= 5");
            }
            if requested == Some(Criterion::Multiplicative) {
                return unsupported("the subset counter is not multiplicative; use divisibility");
            }
            let k = euler_phi(m);
            Hypothesis {
                criterion: Criterion::Divisibility,
                k_of_m: Some(k),
                p_class: k - 1,
                p_modulus: k,
                r1: None,
                r2: None,
            }
        }
        WitnessFn::Sigma => {
            if m < 7 {
                return unsupported("requires m >= 7");
            }
            if requested == Some(Criterion::Divisibility) {
                return unsupported(
                    "sigma(p) does not divide sigma(n) in general; use multiplicative",
                );
            }
            let r = smallest_unit_class(m, |_| true)
                .ok_or_else(|| Error::Domain(format!("no admissible class mod {m}")))?;
            Hypothesis {
                criterion: Criterion::Multiplicative,
                k_of_m: None,
                p_class: r,
                p_modulus: m,
                r1: Some(2 % m),
                r2: Some((r + 1) % m),
            }
        }
        WitnessFn::SigmaConvPhi => {
            if m < 7 {
                return unsupported("requires m >= 7");
            }
            if requested == Some(Criterion::Divisibility) {
                return unsupported(
                    "the convolution lacks the divisibility property; use multiplicative",
                );
            }
            let r = smallest_unit_class(m, |r| mul_mod(2, r, m) != 0)
                .ok_or_else(|| Error::Domain(format!("no admissible class mod {m}")))?;
            Hypothesis {
                criterion: Criterion::Multiplicative,
                k_of_m: None,
                p_class: r,
                p_modulus: m,
                r1: Some(2 % m),
                r2: Some(mul_mod(2, r, m)),
            }
        }
        WitnessFn::Tau => {
            if requested == Some(Criterion::Divisibility) {
                return unsupported("tau witnesses are congruence-backed and multiplicative");
            }
            // (class, r2) with r1 = 2 throughout: tau(p) at p = 1 (mod m) is
            // always 2, and on the second class the congruences give the
            // values below.
            let (class, r2) = match m {
                5 => (2, 1),
                7 => (2, 4),
                8 => (3, 4),
                9 => (2, 3),
                691 => (2, 667),
                _ => return Err(Error::UnsupportedCongruence { m }),
            };
            Hypothesis {
                criterion: Criterion::Multiplicative,
                k_of_m: None,
                p_class: class,
                p_modulus: m,
                r1: Some(2),
                r2: Some(r2),
            }
        }
        WitnessFn::Eisenstein(w) => {
            if requested == Some(Criterion::Divisibility) {
                return unsupported(
                    "Eisenstein coefficients are scaled divisor sums; use multiplicative",
                );
            }
            let c = eisenstein_scalar(w)?;
            let order = eisenstein_sigma_order(w)?;
            if m < 3 {
                return unsupported("requires m >= 3");
            }
            if num_integer::gcd(c.unsigned_abs() % m, m) != 1 {
                return unsupported("the leading scalar must be a unit mod m");
            }
            // r2 = sigma_{w-1}(p) = p^{w-1} + 1 at p = 2 (mod m), evaluated
            // at the class representative 2.
            let r2 = (crate::arith::pow_mod(2, order as u64, m) + 1) % m;
            if r2 == 0 {
                return unsupported("2^{w-1} + 1 vanishes mod m, so the two classes collide");
            }
            Hypothesis {
                criterion: Criterion::Multiplicative,
                k_of_m: None,
                p_class: 2 % m,
                p_modulus: m,
                r1: Some(2 % m),
                r2: Some(r2),
            }
        }
    };
    if hyp.criterion == Criterion::Multiplicative {
        let (r1, r2) = (hyp.r1.unwrap(), hyp.r2.unwrap());
        if r2 == mul_mod(r2, r1, m) {
            return Err(Error::Domain(format!(
                "hypotheses degenerate for {f} mod {m}: r2 = r2*r1"
            )));
        }
    }
    Ok(hyp)
}

/// Residue of the sequence value actually emitted by the stream for f: for
/// Eisenstein weights this is the scaled coefficient (scalar * sigma_{w-1});
/// for everything else it is the function itself.
fn stream_residue(f: WitnessFn, x: &FactoredInteger, m: u64) -> Result<u64> {
    let ctx = ModulusContext::new(m)?;
    match f {
        WitnessFn::Tau => mod_eval(ModFn::TauMod, x, &ctx),
        WitnessFn::Eisenstein(w) => {
            let c = eisenstein_scalar(w)?;
            let order = eisenstein_sigma_order(w)?;
            let sig = mod_eval(ModFn::SigmaK(order), x, &ctx)?;
            Ok(mul_mod(c.rem_euclid(m as i64) as u64, sig, m))
        }
        WitnessFn::NathansonPhi => mod_eval(ModFn::NathansonPhi, x, &ctx),
        WitnessFn::EulerPhi => mod_eval(ModFn::EulerPhi, x, &ctx),
        WitnessFn::Sigma => mod_eval(ModFn::SigmaK(1), x, &ctx),
        WitnessFn::SigmaConvPhi => mod_eval(ModFn::SigmaConvPhi, x, &ctx),
        WitnessFn::Jordan(v) => mod_eval(ModFn::Jordan(v), x, &ctx),
        WitnessFn::UnitaryPhi => mod_eval(ModFn::UnitaryPhi, x, &ctx),
    }
}

/// Residue of the multiplicative function the criterion actually argues
/// about: the underlying divisor sum for Eisenstein weights, f itself
/// otherwise.
fn underlying_residue(f: WitnessFn, x: &FactoredInteger, m: u64) -> Result<u64> {
    match f {
        WitnessFn::Eisenstein(w) => {
            let ctx = ModulusContext::new(m)?;
            mod_eval(ModFn::SigmaK(eisenstein_sigma_order(w)?), x, &ctx)
        }
        _ => stream_residue(f, x, m),
    }
}

/// An explicit refutation of period L from start N: n1 = n2 (mod L) with
/// f(n1) != f(n2) (mod m), plus everything needed to re-check it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub f: WitnessFn,
    pub criterion: Criterion,
    pub m: u64,
    pub l: u64,
    pub n_lower: u64,
    pub k_of_m: Option<u64>,
    pub p: u64,
    pub j_prime: u64,
    pub q: BigUint,
    pub n1: BigUint,
    pub n2: BigUint,
    pub r1: Option<u64>,
    pub r2: Option<u64>,
    pub residue_n1: u64,
    pub residue_n2: u64,
    pub q_certainty: Certainty,
}

impl Witness {
    /// Re-derive every invariant from scratch, independently of the search
    /// path: primality and classes of p and q, the shape of n1 and n2,
    /// divisibility of the gap by L, and the residue inequality.
    pub fn verify(&self, limits: &Limits) -> Result<bool> {
        let hyp = hypothesis_for(self.f, self.m, Some(self.criterion))?;
        if hyp.k_of_m != self.k_of_m {
            return Ok(false);
        }
        if !is_prime_u64(self.p) || self.p % hyp.p_modulus != hyp.p_class {
            return Ok(false);
        }
        if is_prime(&self.q, limits.mr_rounds).is_none() {
            return Ok(false);
        }
        let q_mod = hyp.q_modulus(self.m);
        if (&self.q % q_mod) != BigUint::one() {
            return Ok(false);
        }
        if self.n1 != BigUint::from(self.p) || self.n2 != &self.n1 * &self.q {
            return Ok(false);
        }
        let gap = &self.n2 - &self.n1;
        if !(gap % self.l).is_zero() {
            return Ok(false);
        }
        let x1 = FactoredInteger::from_parts(vec![(self.n1.clone(), 1)], limits.mr_rounds)?;
        let x2 = FactoredInteger::from_parts(
            vec![(self.n1.clone(), 1), (self.q.clone(), 1)],
            limits.mr_rounds,
        )?;
        let res1 = stream_residue(self.f, &x1, self.m)?;
        let res2 = stream_residue(self.f, &x2, self.m)?;
        if res1 != self.residue_n1 || res2 != self.residue_n2 || res1 == res2 {
            return Ok(false);
        }
        match self.criterion {
            Criterion::Divisibility => {
                // m | f(q) must make the composite side vanish.
                let xq = FactoredInteger::from_parts(vec![(self.q.clone(), 1)], limits.mr_rounds)?;
                if stream_residue(self.f, &xq, self.m)? != 0 || res2 != 0 {
                    return Ok(false);
                }
            }
            Criterion::Multiplicative => {
                let xq = FactoredInteger::from_parts(vec![(self.q.clone(), 1)], limits.mr_rounds)?;
                if underlying_residue(self.f, &x1, self.m)? != hyp.r2.unwrap()
                    || underlying_residue(self.f, &xq, self.m)? != hyp.r1.unwrap()
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// JSON form with a `verified` flag recomputed at serialization time.
    pub fn to_json(&self, limits: &Limits) -> serde_json::Value {
        let verified = self.verify(limits).unwrap_or(false);
        json!({
            "f": self.f.to_string(),
            "criterion": self.criterion,
            "m": self.m,
            "L": self.l,
            "N": self.n_lower,
            "K_of_m": self.k_of_m,
            "p": self.p,
            "j_prime": self.j_prime,
            "q": self.q.to_string(),
            "n1": self.n1.to_string(),
            "n2": self.n2.to_string(),
            "r1": self.r1,
            "r2": self.r2,
            "residue_n1": self.residue_n1,
            "residue_n2": self.residue_n2,
            "q_certainty": self.q_certainty,
            "verified": verified,
        })
    }
}

/// Construct a witness refuting period L from start N for the residue
/// sequence of f mod m.
///
/// The search follows the construction in the criteria's proofs: hunt the
/// smallest admissible prime p >= N in the table's residue class, then the
/// smallest j' >= 1 making q = 1 + K*j'*p*L prime (K is K(m) or m per the
/// criterion). Dirichlet's theorem guarantees termination in principle;
/// `limits.witness_prime_budget` and `limits.witness_step_budget` bound the
/// search in practice, and exhaustion reports an error — never a claim that
/// no witness exists.
pub fn witness_violation(
    f: WitnessFn,
    m: u64,
    l: u64,
    n_lower: u64,
    requested: Option<Criterion>,
    limits: &Limits,
) -> Result<Witness> {
    if l < 1 || n_lower < 1 {
        return Err(Error::Usage("L and N must be >= 1".into()));
    }
    let hyp = hypothesis_for(f, m, requested)?;
    let q_mod = hyp.q_modulus(m);
    let mut primes = PrimesInClass::new(hyp.p_class, hyp.p_modulus, n_lower.max(2));
    for _ in 0..limits.witness_prime_budget {
        let p = match primes.next() {
            Some(p) => p,
            None => break,
        };
        let xp = FactoredInteger::from_u64(p);
        let accept = match hyp.criterion {
            Criterion::Divisibility => stream_residue(f, &xp, m)? != 0,
            Criterion::Multiplicative => underlying_residue(f, &xp, m)? == hyp.r2.unwrap(),
        };
        if !accept {
            continue;
        }
        let step = BigUint::from(q_mod) * p * l;
        for j_prime in 1..=limits.witness_step_budget {
            let q = &step * j_prime + 1u32;
            let q_certainty = match is_prime(&q, limits.mr_rounds) {
                Some(c) => c,
                None => continue,
            };
            let n1 = BigUint::from(p);
            let n2 = &n1 * &q;
            let x2 = FactoredInteger::from_parts(
                vec![(n1.clone(), 1), (q.clone(), 1)],
                limits.mr_rounds,
            )?;
            let residue_n1 = stream_residue(f, &xp, m)?;
            let residue_n2 = stream_residue(f, &x2, m)?;
            if residue_n1 == residue_n2 {
                // Cannot happen when q is truly prime in the right class;
                // a false probable prime only costs us the next j'.
                continue;
            }
            return Ok(Witness {
                f,
                criterion: hyp.criterion,
                m,
                l,
                n_lower,
                k_of_m: hyp.k_of_m,
                p,
                j_prime,
                q,
                n1,
                n2,
                r1: hyp.r1,
                r2: hyp.r2,
                residue_n1,
                residue_n2,
                q_certainty,
            });
        }
    }
    Err(Error::BudgetExhausted(format!(
        "witness not found within budget for {f} mod {m} (L = {l}, N = {n_lower})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scan_examples() {
        assert_eq!(
            scan_period(&[1, 2, 1, 2, 1, 2], 2, 2).unwrap(),
            PeriodReport::Periodic { n: 1, l: 2 }
        );
        assert_eq!(
            scan_period(&[5, 1, 2, 1, 2, 1, 2], 3, 2).unwrap(),
            PeriodReport::Periodic { n: 2, l: 2 }
        );
        // Constant tail: minimal L is 1 even though L = 2 also works.
        assert_eq!(
            scan_period(&[3, 3, 3, 3, 3, 3], 2, 2).unwrap(),
            PeriodReport::Periodic { n: 1, l: 1 }
        );
    }

    #[test]
    fn scan_needs_enough_prefix() {
        assert!(matches!(
            scan_period(&[1, 2, 3], 2, 2),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            minimal_period_oracle(&[7]),
            PeriodReport::NoPeriodUpTo {
                n_max: 0,
                l_max: 0,
                prefix_len: 1
            }
        );
        assert_eq!(
            minimal_period_oracle(&[3, 3, 3, 3]),
            PeriodReport::Periodic { n: 1, l: 1 }
        );
    }

    #[test]
    fn witness_example_euler_phi_mod_3() {
        let limits = Limits::default();
        let w = witness_violation(WitnessFn::EulerPhi, 3, 1, 1, None, &limits).unwrap();
        assert_eq!(w.p, 2);
        assert_eq!(w.q, BigUint::from(7u32));
        assert_eq!(w.n2, BigUint::from(14u32));
        assert_eq!((w.residue_n1, w.residue_n2), (1, 0));
        assert!(w.verify(&limits).unwrap());
    }

    #[test]
    fn witness_example_subset_counter_mod_5() {
        let limits = Limits::default();
        let w = witness_violation(WitnessFn::NathansonPhi, 5, 1, 1, None, &limits).unwrap();
        assert_eq!(w.k_of_m, Some(4));
        assert_eq!(w.p, 3);
        assert_eq!(w.q, BigUint::from(13u32));
        assert_eq!(w.n2, BigUint::from(39u32));
        assert_eq!((w.residue_n1, w.residue_n2), (1, 0));
        assert!(w.verify(&limits).unwrap());
    }

    #[test]
    fn witness_example_tau_mod_5() {
        let limits = Limits::default();
        let w = witness_violation(WitnessFn::Tau, 5, 2, 1, None, &limits).unwrap();
        assert_eq!(w.p, 2); // tau(2) = -24 = 1 (mod 5), the r2 class
        assert_eq!(w.residue_n1, 1);
        assert_eq!(w.residue_n2, 2); // r2 * r1
        assert!(w.verify(&limits).unwrap());
    }

    #[test]
    fn unsupported_pairs_are_domain_errors() {
        let limits = Limits::default();
        assert!(matches!(
            witness_violation(WitnessFn::Tau, 11, 1, 1, None, &limits),
            Err(Error::UnsupportedCongruence { m: 11 })
        ));
        assert!(matches!(
            witness_violation(WitnessFn::NathansonPhi, 6, 1, 1, None, &limits),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            witness_violation(WitnessFn::Sigma, 5, 1, 1, None, &limits),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            witness_violation(
                WitnessFn::Sigma,
                9,
                1,
                1,
                Some(Criterion::Divisibility),
                &limits
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn scan_matches_oracle_on_structured_inputs() {
        let cases: Vec<Vec<u8>> = vec![
            vec![1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3],
            vec![9, 9, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2],
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1, 2],
            vec![0; 12],
        ];
        for seq in cases {
            let bound = seq.len() as u64 / 3;
            assert_eq!(
                scan_period(&seq, bound, bound).unwrap(),
                minimal_period_oracle(&seq),
                "seq = {seq:?}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn scan_agrees_with_oracle(
            seq in proptest::collection::vec(0u8..4, 3..120)
        ) {
            let bound = seq.len() as u64 / 3;
            prop_assert_eq!(
                scan_period(&seq, bound, bound).unwrap(),
                minimal_period_oracle(&seq)
            );
        }
    }
}
